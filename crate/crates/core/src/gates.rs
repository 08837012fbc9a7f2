//! Particle-number conserving gates acting on sector state vectors.
//!
//! Diagonal gates (number-operator sums, diagonal Coulomb evolution) multiply
//! each amplitude by a phase. Orbital rotations are decomposed into Givens
//! rotations on adjacent orbitals followed by a layer of phases; each Givens
//! rotation is a plane rotation between pairs of amplitudes.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    check_hermitian, check_square, check_symmetric, check_unitary, eigh, CMatrix, RMatrix,
    DEFAULT_MATRIX_TOL, ONE, ZERO,
};
use crate::sector::{between_mask, rank_unchecked, strings, BitIter, Spin};
use crate::state::StateVector;

/// Columns gathered per block when applying spin-alpha rotations.
const ALPHA_BLOCK: usize = 64;

/// `exp(-i t sum_{p, sigma} lambda^sigma_p n_{p sigma})`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumOpSumGate {
    pub lambda_alpha: Vec<f64>,
    pub lambda_beta: Vec<f64>,
    pub time: f64,
}

impl NumOpSumGate {
    /// Same coefficients for both spins.
    pub fn spinless(lambda: Vec<f64>, time: f64) -> Self {
        Self {
            lambda_alpha: lambda.clone(),
            lambda_beta: lambda,
            time,
        }
    }
}

/// `exp(-(i t / 2) sum J^{sigma tau}_{pq} n_{p sigma} n_{q tau})` with
/// `J^{beta alpha} = (J^{alpha beta})^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagCoulombGate {
    pub j_aa: RMatrix,
    pub j_ab: RMatrix,
    pub j_bb: RMatrix,
    pub time: f64,
}

impl DiagCoulombGate {
    /// Spin-independent interaction: all three blocks equal `j`.
    pub fn spin_summed(j: RMatrix, time: f64) -> Self {
        Self {
            j_aa: j.clone(),
            j_ab: j.clone(),
            j_bb: j,
            time,
        }
    }
}

/// Two-orbital unitary `[[c, s], [-conj(s), c]]` acting on orbitals `(p, q)`.
///
/// As an orbital rotation it is the identity matrix with `U_pp = U_qq = c`,
/// `U_pq = s` and `U_qp = -conj(s)`. The real Givens gate
/// `exp(theta (a+_p a_q - a+_q a_p))` has `c = cos(theta)`, `s = sin(theta)`;
/// the tunneling gate `exp(i theta (a+_p a_q + a+_q a_p))` has
/// `s = i sin(theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation {
    pub c: f64,
    pub s: Complex64,
    pub p: usize,
    pub q: usize,
}

impl GivensRotation {
    pub fn new(c: f64, s: Complex64, p: usize, q: usize) -> Result<Self> {
        let rot = Self { c, s, p, q };
        rot.validate()?;
        Ok(rot)
    }

    /// Real rotation by angle `theta`.
    pub fn real(theta: f64, p: usize, q: usize) -> Result<Self> {
        Self::new(theta.cos(), Complex64::new(theta.sin(), 0.0), p, q)
    }

    /// Tunneling interaction `exp(i theta (a+_p a_q + a+_q a_p))`.
    pub fn tunneling(theta: f64, p: usize, q: usize) -> Result<Self> {
        Self::new(theta.cos(), Complex64::new(0.0, theta.sin()), p, q)
    }

    fn validate(&self) -> Result<()> {
        if self.p == self.q {
            return Err(Error::Contract(format!(
                "Givens rotation needs distinct orbitals, got p = q = {}",
                self.p
            )));
        }
        let dev = (self.c * self.c + self.s.norm_sqr() - 1.0).abs();
        if !(dev <= 1e-12) {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.c == 1.0 && self.s == ZERO
    }

    /// The `n x n` single-particle matrix of this rotation.
    pub fn to_matrix(&self, n: usize) -> CMatrix {
        let mut m = CMatrix::identity(n, n);
        m[(self.p, self.p)] = Complex64::new(self.c, 0.0);
        m[(self.q, self.q)] = Complex64::new(self.c, 0.0);
        m[(self.p, self.q)] = self.s;
        m[(self.q, self.p)] = -self.s.conj();
        m
    }
}

/// Per-spin orbital rotation `U(u_alpha) (x) U(u_beta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalRotationSpec {
    pub u_alpha: CMatrix,
    pub u_beta: CMatrix,
}

impl OrbitalRotationSpec {
    pub fn spinless(u: CMatrix) -> Self {
        Self {
            u_alpha: u.clone(),
            u_beta: u,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::spinless(CMatrix::identity(n, n))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            u_alpha: self.u_alpha.adjoint(),
            u_beta: self.u_beta.adjoint(),
        }
    }

    /// The rotation equal to applying `self` and then `next`.
    pub fn then(&self, next: &OrbitalRotationSpec) -> Self {
        Self {
            u_alpha: &next.u_alpha * &self.u_alpha,
            u_beta: &next.u_beta * &self.u_beta,
        }
    }

    pub fn get(&self, spin: Spin) -> &CMatrix {
        match spin {
            Spin::Alpha => &self.u_alpha,
            Spin::Beta => &self.u_beta,
        }
    }
}

/// `exp(-i t sum_{pq sigma} M^sigma_{pq} a+_{p sigma} a_{q sigma})`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonianGate {
    pub m_alpha: CMatrix,
    pub m_beta: CMatrix,
    pub time: f64,
}

impl QuadraticHamiltonianGate {
    pub fn spinless(m: CMatrix, time: f64) -> Self {
        Self {
            m_alpha: m.clone(),
            m_beta: m,
            time,
        }
    }
}

/// Adjacent-pair Givens decomposition `U = diag(phases) G_K ... G_1`.
///
/// `rotations[0]` is `G_1`, the first rotation to apply to a state.
#[derive(Debug, Clone, PartialEq)]
pub struct GivensDecomposition {
    pub rotations: Vec<GivensRotation>,
    pub phases: Vec<Complex64>,
}

impl GivensDecomposition {
    /// Rebuilds the decomposed matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.phases.len();
        let mut m = CMatrix::identity(n, n);
        for rot in &self.rotations {
            m = rot.to_matrix(n) * m;
        }
        CMatrix::from_diagonal(&DVector::from_vec(self.phases.clone())) * m
    }
}

// ---------------------------------------------------------------------------
// phase kernels

/// Phase of every string: `prod_{p in I} factors[p]`.
fn string_phases(norb: usize, nocc: usize, factors: &[Complex64]) -> Vec<Complex64> {
    strings(norb, nocc)
        .into_iter()
        .map(|s| BitIter(s).fold(ONE, |acc, p| acc * factors[p]))
        .collect()
}

fn apply_product_phases(vec: &mut StateVector, alpha: &[Complex64], beta: &[Complex64]) {
    let db = vec.dim_beta();
    vec.amplitudes_mut()
        .par_chunks_mut(db.max(1))
        .zip(alpha.par_iter())
        .for_each(|(row, pa)| {
            for (z, pb) in row.iter_mut().zip(beta) {
                *z *= pa * pb;
            }
        });
}

pub fn apply_num_op_sum_evolution_in_place(vec: &mut StateVector, gate: &NumOpSumGate) -> Result<()> {
    vec.check_norb(gate.lambda_alpha.len(), "lambda_alpha")?;
    vec.check_norb(gate.lambda_beta.len(), "lambda_beta")?;
    if gate.lambda_alpha.iter().chain(&gate.lambda_beta).any(|x| !x.is_finite()) {
        return Err(Error::Contract("non-finite number-operator coefficient".into()));
    }
    let shape = vec.shape();
    let factor = |lam: &[f64]| -> Vec<Complex64> {
        lam.iter()
            .map(|&l| Complex64::from_polar(1.0, -gate.time * l))
            .collect()
    };
    let pa = string_phases(shape.norb, shape.nalpha, &factor(&gate.lambda_alpha));
    let pb = string_phases(shape.norb, shape.nbeta, &factor(&gate.lambda_beta));
    apply_product_phases(vec, &pa, &pb);
    Ok(())
}

pub fn apply_num_op_sum_evolution(vec: &StateVector, gate: &NumOpSumGate) -> Result<StateVector> {
    let mut out = vec.clone();
    apply_num_op_sum_evolution_in_place(&mut out, gate)?;
    Ok(out)
}

/// `o^T J o` for the occupation vector of `s`.
fn quadratic_form(j: &RMatrix, s: u64) -> f64 {
    let mut acc = 0.0;
    for p in BitIter(s) {
        for q in BitIter(s) {
            acc += j[(p, q)];
        }
    }
    acc
}

/// Diagonal energy `d(I_a, I_b) = o_a^T Jaa o_a + 2 o_a^T Jab o_b + o_b^T Jbb o_b`
/// for every configuration, alpha-major.
pub(crate) fn coulomb_diagonal(
    norb: usize,
    nalpha: usize,
    nbeta: usize,
    j_aa: &RMatrix,
    j_ab: &RMatrix,
    j_bb: &RMatrix,
) -> Vec<f64> {
    let sa = strings(norb, nalpha);
    let sb = strings(norb, nbeta);
    let ea: Vec<f64> = sa.iter().map(|&s| quadratic_form(j_aa, s)).collect();
    let eb: Vec<f64> = sb.iter().map(|&s| quadratic_form(j_bb, s)).collect();
    let mut out = vec![0.0; sa.len() * sb.len()];
    out.par_chunks_mut(sb.len().max(1))
        .zip(sa.par_iter().zip(ea.par_iter()))
        .for_each(|(row, (&a, &e_a))| {
            // column sums of J^{ab} over the occupied alpha orbitals
            let mut v = vec![0.0; norb];
            for p in BitIter(a) {
                for (q, vq) in v.iter_mut().enumerate() {
                    *vq += j_ab[(p, q)];
                }
            }
            for ((d, &b), &e_b) in row.iter_mut().zip(&sb).zip(&eb) {
                let cross: f64 = BitIter(b).map(|q| v[q]).sum();
                *d = e_a + 2.0 * cross + e_b;
            }
        });
    out
}

fn validate_coulomb(vec: &StateVector, j_aa: &RMatrix, j_ab: &RMatrix, j_bb: &RMatrix) -> Result<()> {
    let n = vec.norb();
    check_square(j_aa.nrows(), j_aa.ncols(), n, "j_aa")?;
    check_square(j_ab.nrows(), j_ab.ncols(), n, "j_ab")?;
    check_square(j_bb.nrows(), j_bb.ncols(), n, "j_bb")?;
    check_symmetric(j_aa, 1e-12)?;
    check_symmetric(j_bb, 1e-12)?;
    if j_ab.iter().any(|x| !x.is_finite()) {
        return Err(Error::Contract("non-finite entry in j_ab".into()));
    }
    Ok(())
}

pub fn apply_diag_coulomb_evolution_in_place(vec: &mut StateVector, gate: &DiagCoulombGate) -> Result<()> {
    validate_coulomb(vec, &gate.j_aa, &gate.j_ab, &gate.j_bb)?;
    let shape = vec.shape();
    let d = coulomb_diagonal(
        shape.norb,
        shape.nalpha,
        shape.nbeta,
        &gate.j_aa,
        &gate.j_ab,
        &gate.j_bb,
    );
    let t = gate.time;
    vec.amplitudes_mut()
        .par_iter_mut()
        .zip(d.par_iter())
        .for_each(|(z, &e)| *z *= Complex64::from_polar(1.0, -0.5 * t * e));
    Ok(())
}

pub fn apply_diag_coulomb_evolution(vec: &StateVector, gate: &DiagCoulombGate) -> Result<StateVector> {
    let mut out = vec.clone();
    apply_diag_coulomb_evolution_in_place(&mut out, gate)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Givens kernels

/// A Givens rotation resolved against one string space: every pair
/// `(i, j, negate)` has orbital `p` occupied in string `i`, and string `j` is
/// `i` with `p` moved to `q`.
struct CompiledRotation {
    c: f64,
    s: Complex64,
    pairs: Vec<(u32, u32, bool)>,
}

fn compile_rotation(rot: &GivensRotation, strs: &[u64]) -> CompiledRotation {
    let (p, q) = (rot.p, rot.q);
    let between = between_mask(p, q);
    let pairs = strs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s >> p & 1 == 1 && s >> q & 1 == 0)
        .map(|(i, &s)| {
            let t = (s & !(1 << p)) | 1 << q;
            let negate = (s & between).count_ones() & 1 == 1;
            (i as u32, rank_unchecked(t) as u32, negate)
        })
        .collect();
    CompiledRotation {
        c: rot.c,
        s: rot.s,
        pairs,
    }
}

/// Applies the rotations in order to a vector indexed by string address.
fn rotate_row(row: &mut [Complex64], rots: &[CompiledRotation]) {
    for rot in rots {
        let c = rot.c;
        for &(i, j, negate) in &rot.pairs {
            let s = if negate { -rot.s } else { rot.s };
            let x = row[i as usize];
            let y = row[j as usize];
            row[i as usize] = x * c + s * y;
            row[j as usize] = y * c - s.conj() * x;
        }
    }
}

fn apply_compiled(vec: &mut StateVector, spin: Spin, rots: &[CompiledRotation]) {
    if rots.is_empty() || vec.is_empty() {
        return;
    }
    let (da, db) = (vec.dim_alpha(), vec.dim_beta());
    match spin {
        Spin::Beta => vec
            .amplitudes_mut()
            .par_chunks_mut(db)
            .for_each(|row| rotate_row(row, rots)),
        Spin::Alpha => {
            let amps = vec.amplitudes_mut();
            let mut scratch = vec![ZERO; ALPHA_BLOCK.min(db) * da];
            let mut col0 = 0;
            while col0 < db {
                let width = ALPHA_BLOCK.min(db - col0);
                let block = &mut scratch[..width * da];
                for ia in 0..da {
                    let src = &amps[ia * db + col0..ia * db + col0 + width];
                    for (c, z) in src.iter().enumerate() {
                        block[c * da + ia] = *z;
                    }
                }
                block
                    .par_chunks_mut(da)
                    .for_each(|col| rotate_row(col, rots));
                for ia in 0..da {
                    let dst = &mut amps[ia * db + col0..ia * db + col0 + width];
                    for (c, z) in dst.iter_mut().enumerate() {
                        *z = block[c * da + ia];
                    }
                }
                col0 += width;
            }
        }
    }
}

pub fn apply_givens_rotation_in_place(
    vec: &mut StateVector,
    rot: &GivensRotation,
    spin: Spin,
) -> Result<()> {
    rot.validate()?;
    let n = vec.norb();
    if rot.p >= n || rot.q >= n {
        return Err(Error::Contract(format!(
            "Givens rotation on ({}, {}) outside {n} orbitals",
            rot.p, rot.q
        )));
    }
    let strs = strings(n, vec.shape().nocc(spin));
    let compiled = [compile_rotation(rot, &strs)];
    apply_compiled(vec, spin, &compiled);
    Ok(())
}

pub fn apply_givens_rotation(vec: &StateVector, rot: &GivensRotation, spin: Spin) -> Result<StateVector> {
    let mut out = vec.clone();
    apply_givens_rotation_in_place(&mut out, rot, spin)?;
    Ok(out)
}

/// Decomposes a unitary into `n(n-1)/2` adjacent-orbital Givens rotations and
/// a diagonal of phases.
pub fn givens_decompose(u: &CMatrix) -> Result<GivensDecomposition> {
    givens_decompose_with_tol(u, DEFAULT_MATRIX_TOL)
}

pub fn givens_decompose_with_tol(u: &CMatrix, tol: f64) -> Result<GivensDecomposition> {
    check_unitary(u, tol)?;
    let n = u.nrows();
    let mut w = u.clone();
    let mut rotations = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    // Right-multiply by column rotations R until w is lower triangular (hence
    // diagonal): u R_1 ... R_K = D, so u = D R_K^dag ... R_1^dag.
    for i in 0..n {
        for j in (i + 1..n).rev() {
            let x = w[(i, j - 1)];
            let y = w[(i, j)];
            let (c, s) = if y.norm() == 0.0 {
                (1.0, ZERO)
            } else if x.norm() == 0.0 {
                (0.0, ONE)
            } else {
                let r = x.norm().hypot(y.norm());
                let c = x.norm() / r;
                (c, -(y / x) * c)
            };
            if !(c == 1.0 && s == ZERO) {
                for k in 0..n {
                    let a = w[(k, j - 1)];
                    let b = w[(k, j)];
                    w[(k, j - 1)] = a * c - b * s.conj();
                    w[(k, j)] = a * s + b * c;
                }
                w[(i, j)] = ZERO;
            }
            // R^dag = [[c, -s], [conj(s), c]]
            rotations.push(GivensRotation { c, s: -s, p: j - 1, q: j });
        }
    }
    let phases = (0..n).map(|k| w[(k, k)]).collect();
    Ok(GivensDecomposition { rotations, phases })
}

fn compile_decomposition(dec: &GivensDecomposition, strs: &[u64]) -> Vec<CompiledRotation> {
    dec.rotations
        .iter()
        .filter(|r| !r.is_identity())
        .map(|r| compile_rotation(r, strs))
        .collect()
}

pub fn apply_orbital_rotation_in_place(vec: &mut StateVector, spec: &OrbitalRotationSpec) -> Result<()> {
    apply_orbital_rotation_in_place_with_tol(vec, spec, DEFAULT_MATRIX_TOL)
}

pub fn apply_orbital_rotation_in_place_with_tol(
    vec: &mut StateVector,
    spec: &OrbitalRotationSpec,
    tol: f64,
) -> Result<()> {
    let shape = vec.shape();
    let n = shape.norb;
    check_square(spec.u_alpha.nrows(), spec.u_alpha.ncols(), n, "u_alpha")?;
    check_square(spec.u_beta.nrows(), spec.u_beta.ncols(), n, "u_beta")?;
    let dec_a = givens_decompose_with_tol(&spec.u_alpha, tol)?;
    let dec_b = if spec.u_beta == spec.u_alpha {
        dec_a.clone()
    } else {
        givens_decompose_with_tol(&spec.u_beta, tol)?
    };
    let rots_a = compile_decomposition(&dec_a, &strings(n, shape.nalpha));
    let rots_b = compile_decomposition(&dec_b, &strings(n, shape.nbeta));
    apply_compiled(vec, Spin::Beta, &rots_b);
    apply_compiled(vec, Spin::Alpha, &rots_a);
    let pa = string_phases(n, shape.nalpha, &dec_a.phases);
    let pb = string_phases(n, shape.nbeta, &dec_b.phases);
    apply_product_phases(vec, &pa, &pb);
    Ok(())
}

pub fn apply_orbital_rotation(vec: &StateVector, spec: &OrbitalRotationSpec) -> Result<StateVector> {
    let mut out = vec.clone();
    apply_orbital_rotation_in_place(&mut out, spec)?;
    Ok(out)
}

/// Orbital rotation `exp(-i M t)` per spin.
pub fn quad_ham_rotation(gate: &QuadraticHamiltonianGate) -> Result<OrbitalRotationSpec> {
    check_hermitian(&gate.m_alpha, DEFAULT_MATRIX_TOL)?;
    check_hermitian(&gate.m_beta, DEFAULT_MATRIX_TOL)?;
    let u_alpha = crate::linalg::expm_hermitian(&gate.m_alpha, gate.time);
    let u_beta = if gate.m_beta == gate.m_alpha {
        u_alpha.clone()
    } else {
        crate::linalg::expm_hermitian(&gate.m_beta, gate.time)
    };
    Ok(OrbitalRotationSpec { u_alpha, u_beta })
}

pub fn apply_quad_ham_evolution_in_place(vec: &mut StateVector, gate: &QuadraticHamiltonianGate) -> Result<()> {
    let n = vec.norb();
    check_square(gate.m_alpha.nrows(), gate.m_alpha.ncols(), n, "m_alpha")?;
    check_square(gate.m_beta.nrows(), gate.m_beta.ncols(), n, "m_beta")?;
    let spec = quad_ham_rotation(gate)?;
    apply_orbital_rotation_in_place(vec, &spec)
}

pub fn apply_quad_ham_evolution(vec: &StateVector, gate: &QuadraticHamiltonianGate) -> Result<StateVector> {
    let mut out = vec.clone();
    apply_quad_ham_evolution_in_place(&mut out, gate)?;
    Ok(out)
}

/// Eigenbasis form of a Hermitian one-body matrix: `M = V diag(values) V^dag`.
pub(crate) fn one_body_eigenbasis(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m, DEFAULT_MATRIX_TOL)?;
    Ok(eigh(m))
}
