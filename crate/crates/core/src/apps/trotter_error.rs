//! Trotter error measured against exact evolution on random states.

use serde::Serialize;

use crate::apps::gate_count::{count_two_qubit_gates, CircuitPlan};
use crate::error::{Error, Result};
use crate::operators::{exact_evolve, DiagonalCoulombHamiltonian};
use crate::sector::SectorShape;
use crate::state::StateVector;
use crate::trotter::{compile_trotter, simulate_trotter_diag_coulomb, TrotterHamiltonian, TrotterPlan};

/// Tolerance of the reference evolution.
const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrotterErrorRecord {
    pub order: usize,
    pub n_steps: usize,
    pub time: f64,
    pub gate_count: usize,
    pub mean_error: f64,
    /// Sample standard deviation over the random states.
    pub std_error: f64,
}

/// Two-qubit gates in the compiled product formula.
pub fn trotter_gate_count(ham: &dyn TrotterHamiltonian, time: f64, n_steps: usize, order: usize) -> Result<usize> {
    let terms = ham.trotter_terms()?.len();
    let plan = TrotterPlan::new(order, n_steps, time, terms)?;
    let steps = compile_trotter(ham, &plan)?;
    count_two_qubit_gates(&CircuitPlan::from_trotter_steps(ham.norb(), &steps))
}

/// `||psi_trotter - psi_exact||` over `n_vectors` random unit states
/// (seeds `seed, seed + 1, ...`) for every `(order, n_steps)` pair.
pub fn trotter_error_experiment(
    ham: &DiagonalCoulombHamiltonian,
    shape: SectorShape,
    time: f64,
    orders: &[usize],
    steps: &[usize],
    n_vectors: usize,
    seed: u64,
) -> Result<Vec<TrotterErrorRecord>> {
    if n_vectors == 0 {
        return Err(Error::Contract("n_vectors must be at least 1".into()));
    }
    let mut states = Vec::with_capacity(n_vectors);
    for i in 0..n_vectors {
        let v = StateVector::random(shape, seed.wrapping_add(i as u64))?;
        let exact = exact_evolve(ham, &v, time, EXACT_TOL)?;
        states.push((v, exact));
    }
    let mut records = Vec::new();
    for &order in orders {
        for &n in steps {
            let errors = states
                .iter()
                .map(|(v, exact)| simulate_trotter_diag_coulomb(v, ham, time, n, order)?.distance(exact))
                .collect::<Result<Vec<f64>>>()?;
            let mean = errors.iter().sum::<f64>() / errors.len() as f64;
            let var = if errors.len() > 1 {
                errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (errors.len() - 1) as f64
            } else {
                0.0
            };
            records.push(TrotterErrorRecord {
                order,
                n_steps: n,
                time,
                gate_count: trotter_gate_count(ham, time, n, order)?,
                mean_error: mean,
                std_error: var.sqrt(),
            });
        }
    }
    Ok(records)
}

/// Least-squares slope of `log(error)` against `log(n_steps)`.
pub fn log_log_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(usize, f64)> = [8, 16, 32, 64].iter().map(|&r| (r, 3.0 / (r as f64).powi(2))).collect();
        assert!((log_log_slope(&pts) + 2.0).abs() < 1e-12);
    }
}
