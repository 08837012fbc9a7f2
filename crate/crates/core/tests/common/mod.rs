//! Dense reference implementations used as test oracles.
//!
//! Fock states are bitmasks over `2N` modes with mode `m = spin * N + orb`
//! (all beta modes above all alpha modes). A basis state is the product of
//! its creation operators in descending mode order, so a ladder operator on
//! mode `m` picks up the parity of the occupied modes above `m`. Sector
//! bases are enumerated by filtering all bitmasks, independently of the
//! library's string ranking.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use fermisim::operators::{FermionOperator, LadderOp, TwoBodyTensor};
use fermisim::{SectorShape, Spin, StateVector};

pub type Mat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Term list `(coeff, [(create, mode)])`, operators applied right to left.
pub type Terms = Vec<(Complex64, Vec<(bool, usize)>)>;

pub fn mode(op: &LadderOp, norb: usize) -> usize {
    match op.spin {
        Spin::Alpha => op.orb,
        Spin::Beta => norb + op.orb,
    }
}

pub fn terms_of(op: &FermionOperator, norb: usize) -> Terms {
    op.terms()
        .map(|(ops, coeff)| (coeff, ops.iter().map(|o| (o.create, mode(o, norb))).collect()))
        .collect()
}

/// Applies one ladder operator to a Fock basis state.
pub fn ladder(create: bool, m: usize, bits: u64) -> Option<(f64, u64)> {
    let occupied = bits >> m & 1 == 1;
    if occupied == create {
        return None;
    }
    let above = (bits >> (m + 1)).count_ones();
    let sign = if above.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some((sign, bits ^ (1 << m)))
}

pub fn apply_string(ops: &[(bool, usize)], bits: u64) -> Option<(f64, u64)> {
    let mut sign = 1.0;
    let mut b = bits;
    for &(create, m) in ops.iter().rev() {
        let (s, nb) = ladder(create, m, b)?;
        sign *= s;
        b = nb;
    }
    Some((sign, b))
}

/// Operator matrix on the full Fock space of `2 norb` modes.
pub fn fock_matrix(terms: &Terms, norb: usize) -> Mat {
    let dim = 1usize << (2 * norb);
    let mut m = Mat::zeros(dim, dim);
    for col in 0..dim {
        for (coeff, ops) in terms {
            if let Some((s, row)) = apply_string(ops, col as u64) {
                m[(row as usize, col)] += coeff * s;
            }
        }
    }
    m
}

/// Strings of `nocc` electrons in `norb` orbitals, ascending as integers.
pub fn sector_strings(norb: usize, nocc: usize) -> Vec<u64> {
    (0u64..1 << norb).filter(|b| b.count_ones() as usize == nocc).collect()
}

/// Fock bitmasks of the sector basis, in flat (alpha-major) order.
pub fn sector_basis(shape: SectorShape) -> Vec<u64> {
    let n = shape.norb;
    let sa = sector_strings(n, shape.nalpha);
    let sb = sector_strings(n, shape.nbeta);
    let mut out = Vec::new();
    for a in &sa {
        for b in &sb {
            out.push(a | b << n);
        }
    }
    out
}

/// Operator matrix restricted to a sector; panics if a term leaves it.
pub fn sector_matrix(terms: &Terms, shape: SectorShape) -> Mat {
    let basis = sector_basis(shape);
    let index: std::collections::HashMap<u64, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let d = basis.len();
    let mut m = Mat::zeros(d, d);
    for (col, &b) in basis.iter().enumerate() {
        for (coeff, ops) in terms {
            if let Some((s, out)) = apply_string(ops, b) {
                let row = *index.get(&out).expect("term leaves the sector");
                m[(row, col)] += coeff * s;
            }
        }
    }
    m
}

pub fn op_sector_matrix(op: &FermionOperator, shape: SectorShape) -> Mat {
    sector_matrix(&terms_of(op, shape.norb), shape)
}

/// `exp(-i t H)` for a Hermitian matrix.
pub fn expm_herm(h: &Mat, t: f64) -> Mat {
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let n = h.nrows();
    let mut out = Mat::zeros(n, n);
    for k in 0..n {
        let v = eig.eigenvectors.column(k);
        let ph = Complex64::from_polar(1.0, -t * eig.eigenvalues[k]);
        out += (v * v.adjoint()) * ph;
    }
    out
}

/// Lowest eigenvalue of a Hermitian matrix.
pub fn ground_energy(h: &Mat) -> f64 {
    let herm = (h + h.adjoint()) * c(0.5, 0.0);
    herm.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn mat_vec(m: &Mat, v: &StateVector) -> StateVector {
    let x = nalgebra::DVector::from_column_slice(v.amplitudes());
    let y = m * x;
    StateVector::from_amplitudes(v.shape(), y.as_slice().to_vec()).unwrap()
}

/// One-body `sum_{pq sigma} h_pq a+_{p sigma} a_{q sigma}`.
pub fn one_body_terms(h: &Mat) -> Terms {
    let n = h.nrows();
    let mut t = Terms::new();
    for s in 0..2 {
        for p in 0..n {
            for q in 0..n {
                if h[(p, q)] != ZERO {
                    t.push((h[(p, q)], vec![(true, s * n + p), (false, s * n + q)]));
                }
            }
        }
    }
    t
}

/// Per-spin one-body operator with separate alpha and beta matrices.
pub fn spin_one_body_terms(ha: &Mat, hb: &Mat) -> Terms {
    let n = ha.nrows();
    let mut t = Terms::new();
    for (s, h) in [(0, ha), (1, hb)] {
        for p in 0..n {
            for q in 0..n {
                if h[(p, q)] != ZERO {
                    t.push((h[(p, q)], vec![(true, s * n + p), (false, s * n + q)]));
                }
            }
        }
    }
    t
}

/// `1/2 sum h_pqrs a+_{p s} a+_{r t} a_{s t} a_{q s}`.
pub fn two_body_terms(h: &TwoBodyTensor) -> Terms {
    let n = h.norb();
    let mut t = Terms::new();
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = h[(p, q, r, s)];
                    if v == ZERO {
                        continue;
                    }
                    for a in 0..2 {
                        for b in 0..2 {
                            t.push((
                                v * 0.5,
                                vec![(true, a * n + p), (true, b * n + r), (false, b * n + s), (false, a * n + q)],
                            ));
                        }
                    }
                }
            }
        }
    }
    t
}

/// `1/2 sum J^{st}_pq n_{ps} n_{qt}` with `J^{ba} = (J^{ab})^T`.
pub fn coulomb_terms(jaa: &DMatrix<f64>, jab: &DMatrix<f64>, jbb: &DMatrix<f64>) -> Terms {
    let n = jaa.nrows();
    let num = |m: usize| vec![(true, m), (false, m)];
    let mut t = Terms::new();
    for p in 0..n {
        for q in 0..n {
            let pair = |mp: usize, mq: usize| {
                let mut ops = num(mp);
                ops.extend(num(mq));
                ops
            };
            t.push((c(0.5 * jaa[(p, q)], 0.0), pair(p, q)));
            t.push((c(0.5 * jbb[(p, q)], 0.0), pair(n + p, n + q)));
            t.push((c(jab[(p, q)], 0.0), pair(p, n + q)));
        }
    }
    t
}

pub fn number_terms(la: &[f64], lb: &[f64]) -> Terms {
    let n = la.len();
    let mut t = Terms::new();
    for p in 0..n {
        t.push((c(la[p], 0.0), vec![(true, p), (false, p)]));
        t.push((c(lb[p], 0.0), vec![(true, n + p), (false, n + p)]));
    }
    t
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> Mat {
    let a = Mat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    (&a + a.adjoint()) * c(0.5, 0.0)
}

pub fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    (&a + a.transpose()) * 0.5
}

pub fn random_real<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

/// Random real tensor with the 8-fold symmetry.
pub fn random_symmetric_tensor<R: Rng>(n: usize, rng: &mut R) -> TwoBodyTensor {
    let mut t = TwoBodyTensor::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if p * (p + 1) / 2 + q >= r * (r + 1) / 2 + s {
                        let v: f64 = rng.sample(StandardNormal);
                        t.set_symmetric(p, q, r, s, c(v, 0.0));
                    }
                }
            }
        }
    }
    t
}

/// Random unitary together with a Hermitian generator `K`, `U = exp(-i K)`.
pub fn random_unitary_with_generator<R: Rng>(n: usize, rng: &mut R) -> (Mat, Mat) {
    let k = random_hermitian(n, rng);
    (expm_herm(&k, 1.0), k)
}

pub fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// All sectors with `1 <= norb <= max_norb`.
pub fn all_sectors(max_norb: usize) -> Vec<SectorShape> {
    let mut out = Vec::new();
    for n in 1..=max_norb {
        for a in 0..=n {
            for b in 0..=n {
                out.push(SectorShape::new(n, a, b).unwrap());
            }
        }
    }
    out
}
