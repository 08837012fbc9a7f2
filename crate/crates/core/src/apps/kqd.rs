//! Krylov quantum diagonalization: ground-energy estimates from the span of
//! `exp(-i H k dt) |ref>`, `k = 0..D-1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix};
use crate::operators::{exact_evolve, SectorOperator};
use crate::state::StateVector;
use crate::trotter::{apply_trotter_steps, compile_trotter, TrotterHamiltonian, TrotterPlan};

/// Default cutoff for overlap-matrix eigenvalues.
pub const DEFAULT_OVERLAP_THRESHOLD: f64 = 1e-10;

/// Tolerance of each exact evolution step.
const EXACT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KrylovEvolution {
    Exact,
    Trotter { order: usize, n_steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovConfig {
    pub dim: usize,
    pub dt: f64,
    pub evolve: KrylovEvolution,
    pub threshold: f64,
}

impl KrylovConfig {
    pub fn exact(dim: usize, dt: f64) -> Self {
        Self {
            dim,
            dt,
            evolve: KrylovEvolution::Exact,
            threshold: DEFAULT_OVERLAP_THRESHOLD,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || !(self.dt > 0.0) || !(self.threshold > 0.0) {
            return Err(Error::Contract("Krylov dimension, dt and threshold must be positive".into()));
        }
        if let KrylovEvolution::Trotter { n_steps: 0, .. } = self.evolve {
            return Err(Error::Contract("n_steps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Lowest eigenvalue in the first `dim` Krylov vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KrylovEstimate {
    pub dim: usize,
    pub energy: f64,
    /// Overlap eigenvectors kept after thresholding.
    pub kept: usize,
}

/// Lowest generalized eigenvalue of `(H, S)` after discarding overlap
/// eigenvalues below `threshold`.
pub fn lowest_generalized_eigenvalue(h: &CMatrix, s: &CMatrix, threshold: f64) -> Result<(f64, usize)> {
    let (sv, su) = eigh(&((s + s.adjoint()) * Complex64::new(0.5, 0.0)));
    let kept: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] >= threshold).collect();
    if kept.is_empty() {
        return Err(Error::DegenerateSubspace { threshold });
    }
    let d = s.nrows();
    let x = CMatrix::from_fn(d, kept.len(), |i, k| su[(i, kept[k])] / sv[kept[k]].sqrt());
    let hp = x.adjoint() * ((h + h.adjoint()) * Complex64::new(0.5, 0.0)) * &x;
    let (values, _) = eigh(&hp);
    Ok((values[0], kept.len()))
}

/// Energy estimates for every prefix dimension `1..=config.dim`.
///
/// The Krylov vectors are produced by one evolution step applied
/// repeatedly. Trotter steps need `trotter`, the same Hamiltonian in
/// product-formula form.
pub fn krylov_diagonalize(
    op: &dyn SectorOperator,
    trotter: Option<&dyn TrotterHamiltonian>,
    reference: &StateVector,
    config: &KrylovConfig,
) -> Result<Vec<KrylovEstimate>> {
    config.validate()?;
    let norm_sq = reference.norm_sqr();
    if !((norm_sq - 1.0).abs() <= 1e-8) {
        return Err(Error::NotNormalized { norm_sq });
    }
    let trotter_steps = match config.evolve {
        KrylovEvolution::Exact => None,
        KrylovEvolution::Trotter { order, n_steps } => {
            let ham = trotter.ok_or_else(|| {
                Error::Contract("Trotter evolution needs a product-formula Hamiltonian".into())
            })?;
            let plan = TrotterPlan::new(order, n_steps, config.dt, ham.trotter_terms()?.len())?;
            let phase = Complex64::from_polar(1.0, -ham.constant() * config.dt);
            Some((compile_trotter(ham, &plan)?, phase))
        }
    };
    let d = config.dim;
    let mut vectors = vec![reference.clone()];
    while vectors.len() < d {
        let last = vectors.last().unwrap();
        let next = match &trotter_steps {
            None => exact_evolve(op, last, config.dt, EXACT_TOL)?,
            Some((steps, phase)) => {
                let mut v = last.clone();
                apply_trotter_steps(&mut v, steps)?;
                v.scale(*phase);
                v
            }
        };
        vectors.push(next);
    }
    let h_vectors = vectors.iter().map(|v| op.apply(v)).collect::<Result<Vec<_>>>()?;
    let mut h = CMatrix::zeros(d, d);
    let mut s = CMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            h[(j, k)] = vectors[j].inner(&h_vectors[k])?;
            s[(j, k)] = vectors[j].inner(&vectors[k])?;
        }
    }
    (1..=d)
        .map(|m| {
            let hm = h.view((0, 0), (m, m)).into_owned();
            let sm = s.view((0, 0), (m, m)).into_owned();
            let (energy, kept) = lowest_generalized_eigenvalue(&hm, &sm, config.threshold)?;
            Ok(KrylovEstimate { dim: m, energy, kept })
        })
        .collect()
}
