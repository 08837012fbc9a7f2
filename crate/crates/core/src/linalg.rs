//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Default tolerance for unitarity and Hermiticity checks (max norm).
pub const DEFAULT_MATRIX_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |(U^dagger U - 1)_ij|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs(&(prod - CMatrix::identity(n, n)))
}

pub fn check_square(m_rows: usize, m_cols: usize, n: usize, what: &str) -> Result<()> {
    if m_rows != n || m_cols != n {
        return Err(Error::ShapeMismatch(format!(
            "{what} is {m_rows}x{m_cols}, expected {n}x{n}"
        )));
    }
    Ok(())
}

pub fn check_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    if !u.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "unitary must be square, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let deviation = unitarity_deviation(u);
    if !(deviation <= tol) {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

pub fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("Hermitian matrix must be square".into()));
    }
    let deviation = max_abs(&(m - m.adjoint()));
    if !(deviation <= tol) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn check_symmetric(m: &RMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("symmetric matrix must be square".into()));
    }
    let deviation = (m - m.transpose()).amax();
    if !(deviation <= tol) || m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotSymmetric { deviation });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix: `(eigenvalues, eigenvectors)`
/// with eigenvalues ascending and eigenvectors as columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Real symmetric eigendecomposition, eigenvalues ascending.
pub fn eigh_real(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = RMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// `exp(-i t M)` for Hermitian `M`, by eigendecomposition.
pub fn expm_hermitian(m: &CMatrix, t: f64) -> CMatrix {
    let (values, v) = eigh(m);
    let n = m.nrows();
    let mut scaled = v.clone();
    for (j, lam) in values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -lam * t);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * v.adjoint()
}

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn random_complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian
/// matrix, with the phases of `R`'s diagonal divided out.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = random_complex_gaussian(n, n, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = random_complex_gaussian(n, n, rng);
    (&z + z.adjoint()).scale(0.5)
}

pub fn random_real_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let z = RMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    (&z + z.transpose()).scale(0.5)
}
