//! Krylov-subspace (Lanczos) time evolution and ground-state search for
//! Hermitian sector operators.

use num_complex::Complex64;

use super::SectorOperator;
use crate::error::{Error, Result};
use crate::linalg::{eigh_real, RMatrix};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpmOptions {
    /// Target `||w - exp(-iHt) v|| / ||v||`.
    pub tol: f64,
    /// Krylov dimension cap per restart.
    pub krylov_dim: usize,
    /// Maximum number of step halvings over the whole evolution.
    pub max_restarts: usize,
}

impl Default for ExpmOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            krylov_dim: 64,
            max_restarts: 1000,
        }
    }
}

/// Lanczos basis with full reorthogonalization.
struct Lanczos {
    basis: Vec<StateVector>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl Lanczos {
    fn start(v: &StateVector) -> Result<(Self, f64)> {
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let mut q = v.clone();
        q.scale(Complex64::new(1.0 / norm, 0.0));
        Ok((
            Self {
                basis: vec![q],
                alpha: Vec::new(),
                beta: Vec::new(),
            },
            norm,
        ))
    }

    /// Extends the basis by one vector; returns the new off-diagonal element.
    /// The next basis vector is stored only when that element is nonzero.
    fn step(&mut self, op: &dyn SectorOperator) -> Result<f64> {
        let j = self.alpha.len();
        let mut w = op.apply(&self.basis[j])?;
        let a = self.basis[j].inner(&w)?.re;
        self.alpha.push(a);
        w.axpy(Complex64::new(-a, 0.0), &self.basis[j])?;
        if j > 0 {
            w.axpy(Complex64::new(-self.beta[j - 1], 0.0), &self.basis[j - 1])?;
        }
        for _ in 0..2 {
            for q in &self.basis {
                let c = q.inner(&w)?;
                w.axpy(-c, q)?;
            }
        }
        let b = w.norm();
        let scale = self.alpha.iter().map(|x| x.abs()).fold(0.0, f64::max)
            + self.beta.iter().fold(0.0, |m: f64, x| m.max(*x));
        if b <= 1e-12 * scale.max(1e-300) || self.basis.len() == self.basis[0].len() {
            self.beta.push(0.0);
            return Ok(0.0);
        }
        w.scale(Complex64::new(1.0 / b, 0.0));
        self.beta.push(b);
        self.basis.push(w);
        Ok(b)
    }

    fn tridiagonal(&self, m: usize) -> RMatrix {
        let mut t = RMatrix::zeros(m, m);
        for k in 0..m {
            t[(k, k)] = self.alpha[k];
            if k + 1 < m {
                t[(k, k + 1)] = self.beta[k];
                t[(k + 1, k)] = self.beta[k];
            }
        }
        t
    }
}

/// `exp(-i tau T) e_1` and the a-posteriori error estimate
/// `beta_m * |tau| * |e_m^T phi_1(-i tau T) e_1|`.
fn small_expm(values: &[f64], vectors: &RMatrix, tau: f64, residual: f64) -> (Vec<Complex64>, f64) {
    let m = values.len();
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    let mut last_phi = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let w = vectors[(0, k)];
        let z = Complex64::new(0.0, -tau * values[k]);
        let e = z.exp();
        let phi = if z.norm() < 1e-5 {
            Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0
        } else {
            (e - 1.0) / z
        };
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += vectors[(i, k)] * e * w;
        }
        last_phi += vectors[(m - 1, k)] * phi * w;
    }
    (y, residual * tau.abs() * last_phi.norm())
}

/// Exact time evolution `exp(-i time H) vec` for a Hermitian operator.
pub fn exact_evolve(op: &dyn SectorOperator, vec: &StateVector, time: f64, tol: f64) -> Result<StateVector> {
    exact_evolve_with(
        op,
        vec,
        time,
        &ExpmOptions {
            tol,
            ..Default::default()
        },
    )
}

pub fn exact_evolve_with(
    op: &dyn SectorOperator,
    vec: &StateVector,
    time: f64,
    opts: &ExpmOptions,
) -> Result<StateVector> {
    if !(opts.tol > 0.0) || opts.krylov_dim == 0 {
        return Err(Error::Contract("tol must be positive and krylov_dim nonzero".into()));
    }
    if vec.norm_sqr() == 0.0 {
        return Err(Error::ZeroVector);
    }
    if time == 0.0 {
        return Ok(vec.clone());
    }
    let total = time.abs();
    let mut w = vec.clone();
    let mut remaining = time;
    let mut tau = time;
    let mut restarts = 0usize;
    while remaining != 0.0 {
        if tau.abs() > remaining.abs() {
            tau = remaining;
        }
        let (mut lz, beta0) = Lanczos::start(&w)?;
        let cap = opts.krylov_dim.min(w.len());
        let accepted;
        loop {
            let b = lz.step(op)?;
            let m = lz.alpha.len();
            let (values, vectors) = eigh_real(&lz.tridiagonal(m));
            if b == 0.0 {
                // invariant subspace: exact for any step
                tau = remaining;
                let (y, _) = small_expm(&values, &vectors, tau, 0.0);
                accepted = (y, m);
                break;
            }
            let budget = opts.tol * tau.abs() / total;
            let (y, est) = small_expm(&values, &vectors, tau, beta0 * b);
            if est <= 0.5 * budget * beta0 {
                accepted = (y, m);
                break;
            }
            if m >= cap {
                // shrink the step on the current basis
                let y_new = loop {
                    restarts += 1;
                    if restarts > opts.max_restarts {
                        return Err(Error::NoConvergence(format!(
                            "{restarts} step reductions, remaining time {remaining}"
                        )));
                    }
                    tau /= 2.0;
                    let budget = opts.tol * tau.abs() / total;
                    let (y_new, est) = small_expm(&values, &vectors, tau, beta0 * b);
                    if est <= 0.5 * budget * beta0 {
                        break y_new;
                    }
                };
                accepted = (y_new, m);
                break;
            }
        }
        let (y, m) = accepted;
        let mut next = StateVector::zeros(w.shape())?;
        for (k, yk) in y.iter().enumerate().take(m) {
            next.axpy(yk * beta0, &lz.basis[k])?;
        }
        w = next;
        remaining -= tau;
        if remaining.abs() <= 1e-15 * total {
            remaining = 0.0;
        }
        tau *= 2.0;
    }
    Ok(w)
}

/// Lowest eigenvalue and eigenvector by restarted Lanczos, started from a
/// seeded random vector.
pub fn lowest_eigenpair(
    op: &dyn SectorOperator,
    shape: crate::sector::SectorShape,
    tol: f64,
    seed: u64,
) -> Result<(f64, StateVector)> {
    let mut v = StateVector::random(shape, seed)?;
    let cap = 200.min(v.len());
    let mut last = f64::INFINITY;
    for _ in 0..100 {
        let (mut lz, _) = Lanczos::start(&v)?;
        let mut best = (f64::INFINITY, Vec::new());
        for _ in 0..cap {
            let b = lz.step(op)?;
            let m = lz.alpha.len();
            let (values, vectors) = eigh_real(&lz.tridiagonal(m));
            let coeffs: Vec<f64> = (0..m).map(|i| vectors[(i, 0)]).collect();
            let resid = b * coeffs[m - 1].abs();
            best = (values[0], coeffs);
            if b == 0.0 || resid < tol {
                break;
            }
        }
        let mut ritz = StateVector::zeros(shape)?;
        for (k, c) in best.1.iter().enumerate() {
            ritz.axpy(Complex64::new(*c, 0.0), &lz.basis[k])?;
        }
        ritz.normalize()?;
        let mut r = op.apply(&ritz)?;
        r.axpy(Complex64::new(-best.0, 0.0), &ritz)?;
        if r.norm() < tol.sqrt().max(tol * 10.0) || (last - best.0).abs() < tol {
            return Ok((best.0, ritz));
        }
        last = best.0;
        v = ritz;
    }
    Err(Error::NoConvergence("Lanczos ground-state search".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::FnOperator;
    use crate::sector::SectorShape;

    #[test]
    fn zero_time_and_zero_vector() {
        let shape = SectorShape::new(3, 1, 1).unwrap();
        let v = StateVector::random(shape, 1).unwrap();
        let id = FnOperator(|x: &StateVector| Ok(x.clone()));
        assert_eq!(exact_evolve(&id, &v, 0.0, 1e-12).unwrap(), v);
        let z = StateVector::zeros(shape).unwrap();
        assert!(matches!(exact_evolve(&id, &z, 1.0, 1e-12), Err(Error::ZeroVector)));
    }

    #[test]
    fn diagonal_operator_phases() {
        let shape = SectorShape::new(6, 3, 2).unwrap();
        let v = StateVector::random(shape, 2).unwrap();
        let diag: Vec<f64> = (0..v.len()).map(|k| ((k * 37) % 101) as f64 / 10.0 - 5.0).collect();
        let d2 = diag.clone();
        let op = FnOperator(move |x: &StateVector| {
            let mut y = x.clone();
            for (z, e) in y.amplitudes_mut().iter_mut().zip(&d2) {
                *z *= *e;
            }
            Ok(y)
        });
        let t = 1.7;
        let out = exact_evolve(&op, &v, t, 1e-12).unwrap();
        let mut expect = v.clone();
        for (z, e) in expect.amplitudes_mut().iter_mut().zip(&diag) {
            *z *= Complex64::from_polar(1.0, -t * e);
        }
        assert!(out.max_abs_diff(&expect).unwrap() < 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lowest_eigenpair_of_diagonal() {
        let shape = SectorShape::new(5, 2, 2).unwrap();
        let op = FnOperator(|x: &StateVector| {
            let mut y = x.clone();
            for (k, z) in y.amplitudes_mut().iter_mut().enumerate() {
                *z *= k as f64 * 0.1 - 1.0;
            }
            Ok(y)
        });
        let (e, v) = lowest_eigenpair(&op, shape, 1e-10, 3).unwrap();
        assert!((e + 1.0).abs() < 1e-9);
        assert!(v.amplitudes()[0].norm() > 1.0 - 1e-8);
    }
}
