//! Trotter-Suzuki product formulas for Hamiltonians whose terms are each
//! diagonal after an orbital rotation.
//!
//! Every term is applied as `U(V) D(t) U(V)^dag`: a basis change into the
//! term's eigenbasis, a diagonal kernel, and the inverse basis change.
//! Rotations that meet between consecutive terms are multiplied together
//! and applied once.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{
    apply_diag_coulomb_evolution_in_place, apply_num_op_sum_evolution_in_place,
    apply_orbital_rotation_in_place, one_body_eigenbasis, DiagCoulombGate, NumOpSumGate,
    OrbitalRotationSpec,
};
use crate::linalg::RMatrix;
use crate::operators::{DiagonalCoulombHamiltonian, DoubleFactorizedHamiltonian};
use crate::state::StateVector;

/// Product-formula parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    /// Suzuki order `k`: `S_0` is first order, `S_k` has order `2k`.
    pub order: usize,
    pub n_steps: usize,
    pub time: f64,
    pub term_count: usize,
}

impl TrotterPlan {
    pub fn new(order: usize, n_steps: usize, time: f64, term_count: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::Contract("n_steps must be at least 1".into()));
        }
        if term_count == 0 {
            return Err(Error::Contract("term_count must be at least 1".into()));
        }
        if !time.is_finite() {
            return Err(Error::Contract("time must be finite".into()));
        }
        Ok(Self {
            order,
            n_steps,
            time,
            term_count,
        })
    }

    pub fn dt(&self) -> f64 {
        self.time / self.n_steps as f64
    }

    /// The full sequence of `(term, duration)` over all steps, with adjacent
    /// repeats of a term merged.
    pub fn sequence(&self) -> Vec<(usize, f64)> {
        let step = suzuki_sequence(self.order, self.term_count, self.dt());
        let mut all = Vec::with_capacity(step.len() * self.n_steps);
        for _ in 0..self.n_steps {
            all.extend_from_slice(&step);
        }
        merge_adjacent(&all)
    }
}

/// `u_k = 1 / (4 - 4^{1/(2k-1)})`.
pub fn suzuki_coefficient(k: usize) -> f64 {
    assert!(k >= 1);
    1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64))
}

/// One step of the order-`order` product formula over `term_count` terms,
/// as `(term index, duration)` pairs in application order.
///
/// Term indices are 0-based. `S_0` applies terms `0, 1, ..., L-1`, each
/// for `dt`. `S_1` is the symmetric formula with `dt / 2` per half, and
/// `S_k(t) = S_{k-1}(u_k t)^2 S_{k-1}((1 - 4u_k) t) S_{k-1}(u_k t)^2`.
/// Adjacent repeats are not merged; see [`merge_adjacent`].
pub fn suzuki_sequence(order: usize, term_count: usize, dt: f64) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    emit(order, term_count, dt, &mut out);
    out
}

fn emit(order: usize, l: usize, dt: f64, out: &mut Vec<(usize, f64)>) {
    match order {
        0 => out.extend((0..l).map(|j| (j, dt))),
        1 => {
            let h = dt / 2.0;
            out.extend((0..l).map(|j| (j, h)));
            out.extend((0..l).rev().map(|j| (j, h)));
        }
        k => {
            let u = suzuki_coefficient(k);
            let outer = u * dt;
            // keeps the five durations summing to dt
            let middle = dt - 4.0 * outer;
            emit(k - 1, l, outer, out);
            emit(k - 1, l, outer, out);
            emit(k - 1, l, middle, out);
            emit(k - 1, l, outer, out);
            emit(k - 1, l, outer, out);
        }
    }
}

/// Merges runs of the same term into one entry with the summed duration.
pub fn merge_adjacent(seq: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(seq.len());
    for &(j, t) in seq {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += t,
            _ => out.push((j, t)),
        }
    }
    out
}

/// The diagonal part of a term, evolved for a duration.
#[derive(Debug, Clone, PartialEq)]
pub enum TermKernel {
    /// `sum_p lambda_p (n_{p alpha} + n_{p beta})`.
    NumOp(Vec<f64>),
    /// `1/2 sum J^{sigma tau}_{pq} n_{p sigma} n_{q tau}`.
    Coulomb { j_aa: RMatrix, j_ab: RMatrix, j_bb: RMatrix },
}

/// A term `U(basis) K U(basis)^dag` with diagonal kernel `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterTerm {
    pub basis: OrbitalRotationSpec,
    pub kernel: TermKernel,
}

/// Hamiltonians that split into terms which are diagonal in a rotated basis.
pub trait TrotterHamiltonian {
    fn norb(&self) -> usize;
    fn constant(&self) -> f64;
    fn trotter_terms(&self) -> Result<Vec<TrotterTerm>>;
}

fn one_body_term(h: &crate::linalg::CMatrix) -> Result<TrotterTerm> {
    let (values, v) = one_body_eigenbasis(h)?;
    Ok(TrotterTerm {
        basis: OrbitalRotationSpec::spinless(v),
        kernel: TermKernel::NumOp(values),
    })
}

impl TrotterHamiltonian for DiagonalCoulombHamiltonian {
    fn norb(&self) -> usize {
        DiagonalCoulombHamiltonian::norb(self)
    }

    fn constant(&self) -> f64 {
        self.constant
    }

    fn trotter_terms(&self) -> Result<Vec<TrotterTerm>> {
        let n = DiagonalCoulombHamiltonian::norb(self);
        Ok(vec![
            one_body_term(&self.one_body)?,
            TrotterTerm {
                basis: OrbitalRotationSpec::identity(n),
                kernel: TermKernel::Coulomb {
                    j_aa: self.j_aa.clone(),
                    j_ab: self.j_ab.clone(),
                    j_bb: self.j_bb.clone(),
                },
            },
        ])
    }
}

impl TrotterHamiltonian for DoubleFactorizedHamiltonian {
    fn norb(&self) -> usize {
        DoubleFactorizedHamiltonian::norb(self)
    }

    fn constant(&self) -> f64 {
        self.constant
    }

    fn trotter_terms(&self) -> Result<Vec<TrotterTerm>> {
        let mut terms = vec![one_body_term(&self.one_body)?];
        terms.extend(self.terms.iter().map(|t| TrotterTerm {
            basis: OrbitalRotationSpec::spinless(t.u_mat.clone()),
            kernel: TermKernel::Coulomb {
                j_aa: t.j_mat.clone(),
                j_ab: t.j_mat.clone(),
                j_bb: t.j_mat.clone(),
            },
        }));
        Ok(terms)
    }
}

/// One operation of a compiled Trotter circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum TrotterStep {
    Rotation(OrbitalRotationSpec),
    NumOp(NumOpSumGate),
    Coulomb(DiagCoulombGate),
}

fn is_identity(spec: &OrbitalRotationSpec, tol: f64) -> bool {
    let n = spec.u_alpha.nrows();
    let id = crate::linalg::CMatrix::identity(n, n);
    crate::linalg::max_abs(&(&spec.u_alpha - &id)) <= tol && crate::linalg::max_abs(&(&spec.u_beta - &id)) <= tol
}

/// Compiles the full product formula into gates, merging the rotations
/// that meet between consecutive terms. Identity rotations are dropped.
pub fn compile_trotter(ham: &dyn TrotterHamiltonian, plan: &TrotterPlan) -> Result<Vec<TrotterStep>> {
    let terms = ham.trotter_terms()?;
    if terms.len() != plan.term_count {
        return Err(Error::Contract(format!(
            "plan has {} terms, Hamiltonian has {}",
            plan.term_count,
            terms.len()
        )));
    }
    let n = ham.norb();
    let mut steps = Vec::new();
    let mut pending = OrbitalRotationSpec::identity(n);
    let push_rotation = |steps: &mut Vec<TrotterStep>, spec: OrbitalRotationSpec| {
        if !is_identity(&spec, 1e-14) {
            steps.push(TrotterStep::Rotation(spec));
        }
    };
    for (j, dt) in plan.sequence() {
        let term = &terms[j];
        let rotation = pending.then(&term.basis.adjoint());
        push_rotation(&mut steps, rotation);
        steps.push(match &term.kernel {
            TermKernel::NumOp(lambda) => TrotterStep::NumOp(NumOpSumGate::spinless(lambda.clone(), dt)),
            TermKernel::Coulomb { j_aa, j_ab, j_bb } => TrotterStep::Coulomb(DiagCoulombGate {
                j_aa: j_aa.clone(),
                j_ab: j_ab.clone(),
                j_bb: j_bb.clone(),
                time: dt,
            }),
        });
        pending = term.basis.clone();
    }
    push_rotation(&mut steps, pending);
    Ok(steps)
}

/// Applies compiled steps in place.
pub fn apply_trotter_steps(vec: &mut StateVector, steps: &[TrotterStep]) -> Result<()> {
    for step in steps {
        match step {
            TrotterStep::Rotation(spec) => apply_orbital_rotation_in_place(vec, spec)?,
            TrotterStep::NumOp(gate) => apply_num_op_sum_evolution_in_place(vec, gate)?,
            TrotterStep::Coulomb(gate) => apply_diag_coulomb_evolution_in_place(vec, gate)?,
        }
    }
    Ok(())
}

/// Trotterized `exp(-i time H) vec`, including the phase from the constant.
pub fn simulate_trotter(
    vec: &StateVector,
    ham: &dyn TrotterHamiltonian,
    time: f64,
    n_steps: usize,
    order: usize,
) -> Result<StateVector> {
    vec.check_norb(ham.norb(), "Hamiltonian")?;
    let terms = ham.trotter_terms()?.len();
    let plan = TrotterPlan::new(order, n_steps, time, terms)?;
    let mut out = vec.clone();
    if time == 0.0 {
        return Ok(out);
    }
    let steps = compile_trotter(ham, &plan)?;
    apply_trotter_steps(&mut out, &steps)?;
    out.scale(Complex64::from_polar(1.0, -ham.constant() * time));
    Ok(out)
}

pub fn simulate_trotter_diag_coulomb(
    vec: &StateVector,
    ham: &DiagonalCoulombHamiltonian,
    time: f64,
    n_steps: usize,
    order: usize,
) -> Result<StateVector> {
    simulate_trotter(vec, ham, time, n_steps, order)
}

pub fn simulate_trotter_double_factorized(
    vec: &StateVector,
    ham: &DoubleFactorizedHamiltonian,
    time: f64,
    n_steps: usize,
    order: usize,
) -> Result<StateVector> {
    simulate_trotter(vec, ham, time, n_steps, order)
}
