use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::fermion::{cre, des, FermionOperator};
use super::{add_one_body, SectorOperator, SectorTables};
use crate::error::{Error, Result};
use crate::gates::coulomb_diagonal;
use crate::linalg::{check_hermitian, check_square, check_symmetric, CMatrix, RMatrix, ZERO};
use crate::sector::Spin;
use crate::state::StateVector;

/// Default memory budget for the two-body intermediate.
const DEFAULT_BUDGET_BYTES: usize = 1 << 30;

/// Dense `n^4` tensor `h_pqrs` in chemist ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoBodyTensor {
    norb: usize,
    data: Vec<Complex64>,
}

impl TwoBodyTensor {
    pub fn zeros(norb: usize) -> Self {
        Self {
            norb,
            data: vec![ZERO; norb.pow(4)],
        }
    }

    pub fn from_fn(norb: usize, mut f: impl FnMut(usize, usize, usize, usize) -> Complex64) -> Self {
        let mut t = Self::zeros(norb);
        for p in 0..norb {
            for q in 0..norb {
                for r in 0..norb {
                    for s in 0..norb {
                        t[(p, q, r, s)] = f(p, q, r, s);
                    }
                }
            }
        }
        t
    }

    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    fn index(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.norb;
        ((p * n + q) * n + r) * n + s
    }

    /// Sets `h_pqrs` and its images under the real 8-fold symmetry.
    pub fn set_symmetric(&mut self, p: usize, q: usize, r: usize, s: usize, value: Complex64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            self[(a, b, c, d)] = value;
        }
    }

    /// Largest deviation from the real 8-fold symmetry, including imaginary parts.
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.norb;
        let mut dev = 0.0f64;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self[(p, q, r, s)];
                        dev = dev
                            .max(v.im.abs())
                            .max((v - self[(q, p, r, s)]).norm())
                            .max((v - self[(p, q, s, r)]).norm())
                            .max((v - self[(r, s, p, q)]).norm());
                    }
                }
            }
        }
        dev
    }

    /// The `n^2 x n^2` matrix `M[(pq), (rs)] = h_pqrs`.
    pub fn as_matrix(&self) -> CMatrix {
        let n2 = self.norb * self.norb;
        CMatrix::from_fn(n2, n2, |i, j| self.data[i * n2 + j])
    }

    pub fn max_abs_diff(&self, other: &TwoBodyTensor) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize, usize, usize)> for TwoBodyTensor {
    type Output = Complex64;

    fn index(&self, (p, q, r, s): (usize, usize, usize, usize)) -> &Complex64 {
        &self.data[self.index(p, q, r, s)]
    }
}

impl std::ops::IndexMut<(usize, usize, usize, usize)> for TwoBodyTensor {
    fn index_mut(&mut self, (p, q, r, s): (usize, usize, usize, usize)) -> &mut Complex64 {
        let i = self.index(p, q, r, s);
        &mut self.data[i]
    }
}

/// `H = c + sum h_pq a+_{p s} a_{q s} + 1/2 sum h_pqrs a+_{p s} a+_{r t} a_{s t} a_{q s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularHamiltonian {
    pub one_body: CMatrix,
    pub two_body: TwoBodyTensor,
    pub constant: f64,
}

impl MolecularHamiltonian {
    pub fn new(one_body: CMatrix, two_body: TwoBodyTensor, constant: f64) -> Result<Self> {
        let n = one_body.nrows();
        check_square(one_body.nrows(), one_body.ncols(), n, "one_body")?;
        if two_body.norb() != n {
            return Err(Error::ShapeMismatch(format!(
                "two_body has {} orbitals, one_body has {n}",
                two_body.norb()
            )));
        }
        check_hermitian(&one_body, 1e-10)?;
        Ok(Self {
            one_body,
            two_body,
            constant,
        })
    }

    pub fn norb(&self) -> usize {
        self.one_body.nrows()
    }

    /// `h_pq - 1/2 sum_r h_prrq`, the one-body part once the two-body term is
    /// written as `1/2 sum h_pqrs E_pq E_rs`.
    pub fn shifted_one_body(&self) -> CMatrix {
        let n = self.norb();
        CMatrix::from_fn(n, n, |p, q| {
            let corr: Complex64 = (0..n).map(|r| self.two_body[(p, r, r, q)]).sum();
            self.one_body[(p, q)] - corr * 0.5
        })
    }

    /// Term-by-term expansion into ladder operators.
    pub fn to_fermion_operator(&self) -> FermionOperator {
        let n = self.norb();
        let spins = [Spin::Alpha, Spin::Beta];
        let mut op = FermionOperator::new();
        if self.constant != 0.0 {
            op.add_term(vec![], Complex64::new(self.constant, 0.0));
        }
        for p in 0..n {
            for q in 0..n {
                let h = self.one_body[(p, q)];
                if h != ZERO {
                    for s in spins {
                        op.add_term(vec![cre(s, p), des(s, q)], h);
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let h = self.two_body[(p, q, r, s)];
                        if h == ZERO {
                            continue;
                        }
                        for sig in spins {
                            for tau in spins {
                                op.add_term(
                                    vec![cre(sig, p), cre(tau, r), des(tau, s), des(sig, q)],
                                    h * 0.5,
                                );
                            }
                        }
                    }
                }
            }
        }
        op
    }
}

impl SectorOperator for MolecularHamiltonian {
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        apply_molecular_hamiltonian(self, vec)
    }
}

pub fn apply_molecular_hamiltonian(ham: &MolecularHamiltonian, vec: &StateVector) -> Result<StateVector> {
    apply_molecular_hamiltonian_with_budget(ham, vec, DEFAULT_BUDGET_BYTES)
}

/// Molecular Hamiltonian action with the `dim x n^2` intermediate processed in
/// blocks of alpha strings sized to `budget_bytes`.
pub fn apply_molecular_hamiltonian_with_budget(
    ham: &MolecularHamiltonian,
    vec: &StateVector,
    budget_bytes: usize,
) -> Result<StateVector> {
    let n = vec.norb();
    check_square(ham.one_body.nrows(), ham.one_body.ncols(), n, "one_body")?;
    if ham.two_body.norb() != n {
        return Err(Error::ShapeMismatch(format!(
            "two_body has {} orbitals, sector has {n}",
            ham.two_body.norb()
        )));
    }
    let tables = SectorTables::new(vec)?;
    let mut out = vec.clone();
    out.scale(Complex64::new(ham.constant, 0.0));
    add_one_body(&ham.shifted_one_body(), vec, &tables, &mut out);
    if vec.is_empty() || ham.two_body.data().iter().all(|&z| z == ZERO) {
        return Ok(out);
    }

    let (da, db) = (vec.dim_alpha(), vec.dim_beta());
    let n2 = n * n;
    // W = D * half_t where half_t[(rs), (pq)] = h_pqrs / 2
    let half_t = ham.two_body.as_matrix().transpose().scale(0.5);
    let per_row = db * n2 * std::mem::size_of::<Complex64>() * 2;
    let block = (budget_bytes / per_row.max(1)).clamp(1, da);
    let amps = vec.amplitudes();

    for a0 in (0..da).step_by(block) {
        let a1 = (a0 + block).min(da);
        // intermediates per alpha row, shape (db, n^2) column-major
        let ws: Vec<DMatrix<Complex64>> = (a0..a1)
            .into_par_iter()
            .map(|ta| {
                let mut d = DMatrix::<Complex64>::zeros(db, n2);
                for e in tables.alpha.entries(ta) {
                    let f = e.sign as f64;
                    let src = &amps[e.target * db..(e.target + 1) * db];
                    let mut col = d.column_mut(e.p * n + e.q);
                    for (o, s) in col.iter_mut().zip(src) {
                        *o += s * f;
                    }
                }
                let row = &amps[ta * db..(ta + 1) * db];
                for tb in 0..db {
                    for e in tables.beta.entries(tb) {
                        d[(tb, e.p * n + e.q)] += row[e.target] * e.sign as f64;
                    }
                }
                d * &half_t
            })
            .collect();
        let result = out.amplitudes_mut();
        for (k, w) in ws.iter().enumerate() {
            let ta = a0 + k;
            // a+_q a_p |t> = sign |u>  =>  <u| E_qp |t> = sign
            for e in tables.alpha.entries(ta) {
                let col = w.column(e.q * n + e.p);
                let f = e.sign as f64;
                let dst = &mut result[e.target * db..(e.target + 1) * db];
                for (o, x) in dst.iter_mut().zip(col.iter()) {
                    *o += x * f;
                }
            }
            let dst = &mut result[ta * db..(ta + 1) * db];
            for tb in 0..db {
                for e in tables.beta.entries(tb) {
                    dst[e.target] += w[(tb, e.q * n + e.p)] * e.sign as f64;
                }
            }
        }
    }
    Ok(out)
}

/// `H = c + sum h_pq a+_{p s} a_{q s} + 1/2 sum J^{st}_pq n_{p s} n_{q t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalCoulombHamiltonian {
    pub one_body: CMatrix,
    pub j_aa: RMatrix,
    pub j_ab: RMatrix,
    pub j_bb: RMatrix,
    pub constant: f64,
}

impl DiagonalCoulombHamiltonian {
    pub fn new(one_body: CMatrix, j_aa: RMatrix, j_ab: RMatrix, j_bb: RMatrix, constant: f64) -> Result<Self> {
        let n = one_body.nrows();
        check_square(one_body.nrows(), one_body.ncols(), n, "one_body")?;
        check_hermitian(&one_body, 1e-10)?;
        for (m, name) in [(&j_aa, "j_aa"), (&j_ab, "j_ab"), (&j_bb, "j_bb")] {
            check_square(m.nrows(), m.ncols(), n, name)?;
        }
        check_symmetric(&j_aa, 1e-12)?;
        check_symmetric(&j_bb, 1e-12)?;
        Ok(Self {
            one_body,
            j_aa,
            j_ab,
            j_bb,
            constant,
        })
    }

    pub fn norb(&self) -> usize {
        self.one_body.nrows()
    }

    pub fn to_fermion_operator(&self) -> FermionOperator {
        let n = self.norb();
        let mut op = FermionOperator::new();
        if self.constant != 0.0 {
            op.add_term(vec![], Complex64::new(self.constant, 0.0));
        }
        for p in 0..n {
            for q in 0..n {
                let h = self.one_body[(p, q)];
                if h != ZERO {
                    for s in [Spin::Alpha, Spin::Beta] {
                        op.add_term(vec![cre(s, p), des(s, q)], h);
                    }
                }
            }
        }
        let blocks = [
            (Spin::Alpha, Spin::Alpha, &self.j_aa, false),
            (Spin::Alpha, Spin::Beta, &self.j_ab, false),
            (Spin::Beta, Spin::Alpha, &self.j_ab, true),
            (Spin::Beta, Spin::Beta, &self.j_bb, false),
        ];
        for (s, t, j, transposed) in blocks {
            for p in 0..n {
                for q in 0..n {
                    let v = if transposed { j[(q, p)] } else { j[(p, q)] };
                    if v != 0.0 {
                        op.add_term(
                            vec![cre(s, p), des(s, p), cre(t, q), des(t, q)],
                            Complex64::new(0.5 * v, 0.0),
                        );
                    }
                }
            }
        }
        op
    }
}

impl SectorOperator for DiagonalCoulombHamiltonian {
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        apply_diagonal_coulomb_hamiltonian(self, vec)
    }
}

pub fn apply_diagonal_coulomb_hamiltonian(
    ham: &DiagonalCoulombHamiltonian,
    vec: &StateVector,
) -> Result<StateVector> {
    let s = vec.shape();
    check_square(ham.one_body.nrows(), ham.one_body.ncols(), s.norb, "one_body")?;
    for (m, name) in [(&ham.j_aa, "j_aa"), (&ham.j_ab, "j_ab"), (&ham.j_bb, "j_bb")] {
        check_square(m.nrows(), m.ncols(), s.norb, name)?;
    }
    let tables = SectorTables::new(vec)?;
    let d = coulomb_diagonal(s.norb, s.nalpha, s.nbeta, &ham.j_aa, &ham.j_ab, &ham.j_bb);
    let mut out = StateVector::zeros(s)?;
    out.amplitudes_mut()
        .par_iter_mut()
        .zip(vec.amplitudes().par_iter().zip(d.par_iter()))
        .for_each(|(o, (z, &e))| *o = z * (0.5 * e + ham.constant));
    add_one_body(&ham.one_body, vec, &tables, &mut out);
    Ok(out)
}
