use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonians::{MolecularHamiltonian, TwoBodyTensor};
use super::{add_one_body, SectorOperator, SectorTables};
use crate::error::{Error, Result};
use crate::gates::{apply_orbital_rotation_in_place, coulomb_diagonal, OrbitalRotationSpec};
use crate::linalg::{check_hermitian, check_square, check_symmetric, check_unitary, eigh_real, to_complex, CMatrix, RMatrix};
use crate::state::StateVector;

/// Eigenvalue cutoff used when no tolerance is given.
pub const DEFAULT_DF_TOL: f64 = 1e-10;

/// One rotated density-density term `1/2 sum J_kl n^(t)_k n^(t)_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct DfTerm {
    pub j_mat: RMatrix,
    pub u_mat: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleFactorizedHamiltonian {
    pub one_body: CMatrix,
    pub terms: Vec<DfTerm>,
    pub constant: f64,
}

impl DoubleFactorizedHamiltonian {
    pub fn new(one_body: CMatrix, terms: Vec<DfTerm>, constant: f64) -> Result<Self> {
        let n = one_body.nrows();
        check_square(one_body.nrows(), one_body.ncols(), n, "one_body")?;
        check_hermitian(&one_body, 1e-10)?;
        for t in &terms {
            check_square(t.j_mat.nrows(), t.j_mat.ncols(), n, "j_mat")?;
            check_square(t.u_mat.nrows(), t.u_mat.ncols(), n, "u_mat")?;
            check_symmetric(&t.j_mat, 1e-12)?;
            check_unitary(&t.u_mat, 1e-10)?;
        }
        Ok(Self {
            one_body,
            terms,
            constant,
        })
    }

    pub fn norb(&self) -> usize {
        self.one_body.nrows()
    }

    /// `sum_t sum_kl U_pk conj(U_qk) J_kl U_rl conj(U_sl)`.
    pub fn reconstruct_two_body(&self) -> TwoBodyTensor {
        let n = self.norb();
        let mut t = TwoBodyTensor::zeros(n);
        for term in &self.terms {
            // g^(k)_pq = U_pk conj(U_qk)
            let g: Vec<CMatrix> = (0..n)
                .map(|k| CMatrix::from_fn(n, n, |p, q| term.u_mat[(p, k)] * term.u_mat[(q, k)].conj()))
                .collect();
            for k in 0..n {
                for l in 0..n {
                    let j = term.j_mat[(k, l)];
                    if j == 0.0 {
                        continue;
                    }
                    for p in 0..n {
                        for q in 0..n {
                            let a = g[k][(p, q)] * j;
                            for r in 0..n {
                                for s in 0..n {
                                    t[(p, q, r, s)] += a * g[l][(r, s)];
                                }
                            }
                        }
                    }
                }
            }
        }
        t
    }
}

impl SectorOperator for DoubleFactorizedHamiltonian {
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        apply_double_factorized_hamiltonian(self, vec)
    }
}

pub fn apply_double_factorized_hamiltonian(
    ham: &DoubleFactorizedHamiltonian,
    vec: &StateVector,
) -> Result<StateVector> {
    let s = vec.shape();
    check_square(ham.one_body.nrows(), ham.one_body.ncols(), s.norb, "one_body")?;
    let tables = SectorTables::new(vec)?;
    let mut out = vec.clone();
    out.scale(Complex64::new(ham.constant, 0.0));
    add_one_body(&ham.one_body, vec, &tables, &mut out);
    for term in &ham.terms {
        let rot = OrbitalRotationSpec::spinless(term.u_mat.clone());
        let mut w = vec.clone();
        apply_orbital_rotation_in_place(&mut w, &rot.adjoint())?;
        let d = coulomb_diagonal(s.norb, s.nalpha, s.nbeta, &term.j_mat, &term.j_mat, &term.j_mat);
        w.amplitudes_mut()
            .par_iter_mut()
            .zip(d.par_iter())
            .for_each(|(z, &e)| *z *= 0.5 * e);
        apply_orbital_rotation_in_place(&mut w, &rot)?;
        out.axpy(Complex64::new(1.0, 0.0), &w)?;
    }
    Ok(out)
}

/// Double factorization of a two-body tensor with real 8-fold symmetry.
///
/// The tensor is reshaped to the symmetric matrix `M[(pq), (rs)] = h_pqrs`;
/// eigenpairs with `|w| > tol` are kept in order of decreasing magnitude (at
/// most `max_terms`). Each eigenvector reshapes to a symmetric `g`, and
/// `g = V diag(mu) V^T` gives the term `U = V`, `J_kl = w mu_k mu_l`.
pub fn double_factorize(two_body: &TwoBodyTensor, tol: f64, max_terms: Option<usize>) -> Result<Vec<DfTerm>> {
    let dev = two_body.symmetry_deviation();
    if !(dev <= 1e-8) {
        return Err(Error::NotSymmetric { deviation: dev });
    }
    let n = two_body.norb();
    let n2 = n * n;
    let m = RMatrix::from_fn(n2, n2, |i, j| two_body.data()[i * n2 + j].re);
    let m = (&m + m.transpose()).scale(0.5);
    let (values, vectors) = eigh_real(&m);
    let mut order: Vec<usize> = (0..n2).filter(|&k| values[k].abs() > tol).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    if let Some(limit) = max_terms {
        order.truncate(limit);
    }
    let terms = order
        .into_iter()
        .map(|k| {
            let w = values[k];
            let g = RMatrix::from_fn(n, n, |p, q| vectors[(p * n + q, k)]);
            let g = (&g + g.transpose()).scale(0.5);
            let (mu, v) = eigh_real(&g);
            let j_mat = RMatrix::from_fn(n, n, |a, b| w * mu[a] * mu[b]);
            DfTerm {
                j_mat,
                u_mat: to_complex(&v),
            }
        })
        .collect();
    Ok(terms)
}

/// Converts a molecular Hamiltonian into double-factorized form.
pub fn df_from_molecular(
    ham: &MolecularHamiltonian,
    tol: f64,
    max_terms: Option<usize>,
) -> Result<DoubleFactorizedHamiltonian> {
    let terms = double_factorize(&ham.two_body, tol, max_terms)?;
    Ok(DoubleFactorizedHamiltonian {
        one_body: ham.shifted_one_body(),
        terms,
        constant: ham.constant,
    })
}
