//! Configuration sampling from state vectors and Slater determinants.
//!
//! Every shot draws from its own ChaCha20 stream (`seed`, stream = shot
//! index), so results do not depend on how shots are spread over threads.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::OrbitalRotationSpec;
use crate::linalg::{check_unitary, CMatrix, DEFAULT_MATRIX_TOL};
use crate::sector::{strings, OccupationString, Spin};
use crate::state::StateVector;

/// A sampled `(I_alpha, I_beta)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub alpha: OccupationString,
    pub beta: OccupationString,
}

impl Configuration {
    /// `beta/alpha` bitstrings, orbital 0 rightmost.
    pub fn to_bitstrings(&self, norb: usize) -> String {
        format!("{}/{}", self.beta.to_bitstring(norb), self.alpha.to_bitstring(norb))
    }
}

/// `U(rotation) |reference>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlaterSpec {
    pub norb: usize,
    pub ref_alpha: Vec<usize>,
    pub ref_beta: Vec<usize>,
    pub rotation: OrbitalRotationSpec,
}

impl SlaterSpec {
    pub fn new(
        norb: usize,
        ref_alpha: Vec<usize>,
        ref_beta: Vec<usize>,
        rotation: OrbitalRotationSpec,
    ) -> Result<Self> {
        for occ in [&ref_alpha, &ref_beta] {
            let s = OccupationString::from_orbitals(occ)?;
            if s.count() != occ.len() || occ.iter().any(|&p| p >= norb) {
                return Err(Error::InvalidSector(format!(
                    "reference {occ:?} must be distinct orbitals below {norb}"
                )));
            }
        }
        for spin in [Spin::Alpha, Spin::Beta] {
            let u = rotation.get(spin);
            crate::linalg::check_square(u.nrows(), u.ncols(), norb, "rotation")?;
            check_unitary(u, DEFAULT_MATRIX_TOL)?;
        }
        Ok(Self {
            norb,
            ref_alpha,
            ref_beta,
            rotation,
        })
    }

    fn reference(&self, spin: Spin) -> &[usize] {
        match spin {
            Spin::Alpha => &self.ref_alpha,
            Spin::Beta => &self.ref_beta,
        }
    }

    /// Occupied orbitals in the rotated basis: `Q = U[:, reference]`.
    fn occupied_columns(&self, spin: Spin) -> CMatrix {
        let u = self.rotation.get(spin);
        let refs = self.reference(spin);
        CMatrix::from_fn(self.norb, refs.len(), |i, k| u[(i, refs[k])])
    }
}

fn shot_rng(seed: u64, shot: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(shot as u64);
    rng
}

/// Draws `shots` configurations with probability `|amplitude|^2`.
pub fn sample_state_vector(vec: &StateVector, shots: usize, seed: u64) -> Result<Vec<Configuration>> {
    let norm_sq = vec.norm_sqr();
    if !((norm_sq - 1.0).abs() <= 1e-8) {
        return Err(Error::NotNormalized { norm_sq });
    }
    let s = vec.shape();
    let sa = strings(s.norb, s.nalpha);
    let sb = strings(s.norb, s.nbeta);
    let db = sb.len();
    let mut cdf = Vec::with_capacity(vec.len());
    let mut acc = 0.0;
    for z in vec.amplitudes() {
        acc += z.norm_sqr();
        cdf.push(acc);
    }
    let total = acc;
    Ok((0..shots)
        .into_par_iter()
        .map(|shot| {
            let u = shot_rng(seed, shot).random::<f64>() * total;
            let mut k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            // skip zero-probability entries at the boundary
            while k + 1 < cdf.len() && vec.amplitudes()[k].norm_sqr() == 0.0 {
                k += 1;
            }
            Configuration {
                alpha: OccupationString(sa[k / db]),
                beta: OccupationString(sb[k % db]),
            }
        })
        .collect())
}

fn det_squared(u: &CMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    if rows.is_empty() {
        return 1.0;
    }
    let m = CMatrix::from_fn(rows.len(), cols.len(), |i, j| u[(rows[i], cols[j])]);
    m.determinant().norm_sqr()
}

/// `prod_sigma |det U^sigma[I_sigma, reference_sigma]|^2`.
pub fn slater_probability(spec: &SlaterSpec, config: &Configuration) -> Result<f64> {
    let mut p = 1.0;
    for (spin, occ) in [(Spin::Alpha, config.alpha), (Spin::Beta, config.beta)] {
        let refs = spec.reference(spin);
        if occ.count() != refs.len() {
            return Err(Error::InvalidSector(format!(
                "{spin:?} configuration has {} electrons, reference has {}",
                occ.count(),
                refs.len()
            )));
        }
        if occ.0 >> spec.norb != 0 {
            return Err(Error::InvalidSector(format!("configuration exceeds {} orbitals", spec.norb)));
        }
        p *= det_squared(spec.rotation.get(spin), &occ.orbitals(), refs);
    }
    Ok(p)
}

/// One draw from the projection DPP whose kernel projects onto the columns
/// of `q` (orthonormal, `n x r`).
///
/// A row `i` is chosen with probability `|q_i|^2 / r`; a Householder
/// reflection then moves all of row `i` into the last column, which is
/// dropped, leaving an orthonormal basis of the conditional subspace.
fn sample_projection_dpp<R: Rng>(q: &CMatrix, rng: &mut R) -> OccupationString {
    let n = q.nrows();
    let mut v = q.clone();
    let mut chosen = 0u64;
    for r in (1..=q.ncols()).rev() {
        let weights: Vec<f64> = (0..n)
            .map(|i| {
                if chosen >> i & 1 == 1 {
                    0.0
                } else {
                    (0..r).map(|k| v[(i, k)].norm_sqr()).sum::<f64>().clamp(0.0, 1.0)
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        let target = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = n;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if *w > 0.0 && target < acc {
                pick = i;
                break;
            }
        }
        if pick == n {
            pick = (0..n).rev().find(|&i| weights[i] > 0.0).unwrap_or(0);
        }
        chosen |= 1 << pick;
        if r == 1 {
            break;
        }
        let y = DVector::from_fn(r, |k, _| v[(pick, k)].conj());
        let ynorm = y.norm();
        let phase = if y[r - 1].norm() > 0.0 {
            y[r - 1] / y[r - 1].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut w = y.clone();
        w[r - 1] += phase * ynorm;
        let wnorm_sq = w.norm_squared();
        let mut next = CMatrix::zeros(n, r - 1);
        if wnorm_sq > 0.0 {
            // V H with H = I - 2 w w^dag / |w|^2, keeping the first r-1 columns
            let vw = v.columns(0, r) * &w;
            for k in 0..r - 1 {
                let f = 2.0 * w[k].conj() / wnorm_sq;
                for i in 0..n {
                    next[(i, k)] = v[(i, k)] - vw[i] * f;
                }
            }
        } else {
            next.copy_from(&v.columns(0, r - 1));
        }
        v = next;
    }
    OccupationString(chosen)
}

/// Draws `shots` configurations from a Slater determinant without forming
/// the state vector. Each shot costs `O(N eta^2)`.
pub fn sample_slater(spec: &SlaterSpec, shots: usize, seed: u64) -> Result<Vec<Configuration>> {
    let qa = spec.occupied_columns(Spin::Alpha);
    let qb = spec.occupied_columns(Spin::Beta);
    Ok((0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let alpha = sample_projection_dpp(&qa, &mut rng);
            let beta = sample_projection_dpp(&qb, &mut rng);
            Configuration { alpha, beta }
        })
        .collect())
}
