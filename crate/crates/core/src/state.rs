//! Dense state vectors over a symmetry sector and the `FSV1` file format.
//!
//! Amplitudes are stored alpha-major: the amplitude of `|I_a, I_b>` lives at
//! `addr(I_a) * dim_b + addr(I_b)`, so the vector doubles as a row-major
//! `dim_a x dim_b` matrix.

use std::io::{Read, Write};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::sector::{rank_string, sector_dimension, OccupationString, SectorShape};

const MAGIC: &[u8; 4] = b"FSV1";

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    shape: SectorShape,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(shape: SectorShape) -> Result<Self> {
        let (a, b) = sector_dimension(&shape)?;
        Ok(Self {
            shape,
            amplitudes: vec![Complex64::new(0.0, 0.0); a * b],
        })
    }

    pub fn from_amplitudes(shape: SectorShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        let (a, b) = sector_dimension(&shape)?;
        if amplitudes.len() != a * b {
            return Err(Error::ShapeMismatch(format!(
                "expected {} amplitudes for sector ({}, {}, {}), got {}",
                a * b,
                shape.norb,
                shape.nalpha,
                shape.nbeta,
                amplitudes.len()
            )));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Single configuration `|I_a, I_b>`.
    pub fn configuration(
        shape: SectorShape,
        alpha: OccupationString,
        beta: OccupationString,
    ) -> Result<Self> {
        let ia = rank_string(alpha, shape.norb, shape.nalpha)?;
        let ib = rank_string(beta, shape.norb, shape.nbeta)?;
        let mut v = Self::zeros(shape)?;
        let db = v.dim_beta();
        v.amplitudes[ia * db + ib] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// The Hartree-Fock configuration, always at flat index 0.
    pub fn hartree_fock(shape: SectorShape) -> Result<Self> {
        let mut v = Self::zeros(shape)?;
        v.amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Uniformly random unit vector: complex standard normal entries, normalized.
    pub fn random(shape: SectorShape, seed: u64) -> Result<Self> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut v = Self::zeros(shape)?;
        for z in v.amplitudes.iter_mut() {
            *z = Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
        }
        v.normalize()?;
        Ok(v)
    }

    pub fn shape(&self) -> SectorShape {
        self.shape
    }

    pub fn norb(&self) -> usize {
        self.shape.norb
    }

    pub fn dim_alpha(&self) -> usize {
        self.shape.dims().0
    }

    pub fn dim_beta(&self) -> usize {
        self.shape.dims().1
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn get(&self, ia: usize, ib: usize) -> Complex64 {
        self.amplitudes[ia * self.dim_beta() + ib]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        Ok(())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for z in self.amplitudes.iter_mut() {
            *z *= factor;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &StateVector) -> Result<()> {
        self.check_same_shape(other)?;
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += factor * b;
        }
        Ok(())
    }

    /// Euclidean distance `||self - other||_2`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise deviation.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_shape(&self, other: &StateVector) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch(format!(
                "sector {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub(crate) fn check_norb(&self, n: usize, what: &str) -> Result<()> {
        if n != self.shape.norb {
            return Err(Error::ShapeMismatch(format!(
                "{what} has dimension {n}, sector has {} orbitals",
                self.shape.norb
            )));
        }
        Ok(())
    }

    /// Writes the `FSV1` binary format.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        for n in [self.shape.norb, self.shape.nalpha, self.shape.nbeta] {
            w.write_all(&(n as u32).to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(16 * 4096);
        for chunk in self.amplitudes.chunks(4096) {
            buf.clear();
            for z in chunk {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    /// Reads the `FSV1` binary format.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("not an FSV1 state vector".into()));
        }
        let mut header = [0usize; 3];
        for h in header.iter_mut() {
            let mut b = [0u8; 4];
            r.read_exact(&mut b)?;
            *h = u32::from_le_bytes(b) as usize;
        }
        let shape = SectorShape::new(header[0], header[1], header[2])?;
        let (a, b) = sector_dimension(&shape)?;
        let mut amplitudes = Vec::with_capacity(a * b);
        let mut bytes = [0u8; 16];
        for _ in 0..a * b {
            r.read_exact(&mut bytes).map_err(|e| {
                if e.kind() == std::io::ErrorKind::UnexpectedEof {
                    Error::Format("truncated FSV1 amplitude block".into())
                } else {
                    Error::Io(e)
                }
            })?;
            let re = f64::from_le_bytes(bytes[..8].try_into().unwrap());
            let im = f64::from_le_bytes(bytes[8..].try_into().unwrap());
            amplitudes.push(Complex64::new(re, im));
        }
        let mut extra = [0u8; 1];
        if r.read(&mut extra)? != 0 {
            return Err(Error::Format("trailing bytes after FSV1 amplitudes".into()));
        }
        Self::from_amplitudes(shape, amplitudes)
    }
}
