//! Operator action on state vectors: symbolic fermionic operators, the
//! molecular, diagonal Coulomb and double-factorized Hamiltonians, expectation
//! values and exact time evolution.

mod double_factorized;
mod evolution;
mod fermion;
mod hamiltonians;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{check_square, CMatrix};
use crate::sector::{build_excitation_table, ExcitationTable};
use crate::state::StateVector;

pub use double_factorized::{
    apply_double_factorized_hamiltonian, df_from_molecular, double_factorize, DfTerm,
    DoubleFactorizedHamiltonian, DEFAULT_DF_TOL,
};
pub use evolution::{exact_evolve, exact_evolve_with, lowest_eigenpair, ExpmOptions};
pub use fermion::{
    apply_fermion_operator, cre, cre_a, cre_b, des, des_a, des_b, normal_order, FermionOperator,
    LadderOp,
};
pub use hamiltonians::{
    apply_diagonal_coulomb_hamiltonian, apply_molecular_hamiltonian,
    apply_molecular_hamiltonian_with_budget, DiagonalCoulombHamiltonian, MolecularHamiltonian,
    TwoBodyTensor,
};

/// A linear operator acting within a symmetry sector.
pub trait SectorOperator: Sync {
    fn apply(&self, vec: &StateVector) -> Result<StateVector>;
}

/// Adapts a closure into a [`SectorOperator`].
pub struct FnOperator<F>(pub F);

impl<F> SectorOperator for FnOperator<F>
where
    F: Fn(&StateVector) -> Result<StateVector> + Sync,
{
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        (self.0)(vec)
    }
}

impl SectorOperator for FermionOperator {
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        apply_fermion_operator(self, vec)
    }
}

/// `<vec| op |vec>`.
pub fn expectation(op: &dyn SectorOperator, vec: &StateVector) -> Result<Complex64> {
    if vec.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    vec.inner(&op.apply(vec)?)
}

pub(crate) struct SectorTables {
    pub alpha: ExcitationTable,
    pub beta: ExcitationTable,
}

impl SectorTables {
    pub fn new(vec: &StateVector) -> Result<Self> {
        let s = vec.shape();
        Ok(Self {
            alpha: build_excitation_table(s.norb, s.nalpha)?,
            beta: build_excitation_table(s.norb, s.nbeta)?,
        })
    }
}

/// Accumulates `sum_{pq sigma} h_pq a+_{p sigma} a_{q sigma} |vec>` into `out`.
pub(crate) fn add_one_body(h: &CMatrix, vec: &StateVector, tables: &SectorTables, out: &mut StateVector) {
    let db = vec.dim_beta();
    if vec.is_empty() {
        return;
    }
    let amps = vec.amplitudes();
    out.amplitudes_mut()
        .par_chunks_mut(db)
        .enumerate()
        .for_each(|(ta, row)| {
            for e in tables.alpha.entries(ta) {
                let f = h[(e.p, e.q)] * e.sign as f64;
                let src = &amps[e.target * db..(e.target + 1) * db];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += f * s;
                }
            }
            let src = &amps[ta * db..(ta + 1) * db];
            for (tb, o) in row.iter_mut().enumerate() {
                for e in tables.beta.entries(tb) {
                    *o += h[(e.p, e.q)] * e.sign as f64 * src[e.target];
                }
            }
        });
}

/// Spin-summed one-body operator `sum_{pq sigma} h_pq a+_{p sigma} a_{q sigma}`.
pub fn apply_one_body(h: &CMatrix, vec: &StateVector) -> Result<StateVector> {
    check_square(h.nrows(), h.ncols(), vec.norb(), "one-body matrix")?;
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Contract("non-finite one-body coefficient".into()));
    }
    let tables = SectorTables::new(vec)?;
    let mut out = StateVector::zeros(vec.shape())?;
    add_one_body(h, vec, &tables, &mut out);
    Ok(out)
}

/// One-body operator as a [`SectorOperator`].
pub struct OneBodyOperator(pub CMatrix);

impl SectorOperator for OneBodyOperator {
    fn apply(&self, vec: &StateVector) -> Result<StateVector> {
        apply_one_body(&self.0, vec)
    }
}
