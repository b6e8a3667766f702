//! Dense complex linear algebra for small (≤ 64-dimensional) operator spaces.
//!
//! Everything here is a pure function of its inputs. Units follow the rest of
//! the crate: ħ = 1, angular frequencies in rad/μs, times in μs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance for the Hermiticity precondition of [`unitary_exp`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance used by [`is_unitary`] callers that follow the default contract.
pub const UNITARY_TOL: f64 = 1e-10;

pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)])
}

/// Rydberg excitation number `n = (1 - σ_z) / 2 = |1⟩⟨1|`.
pub fn excitation_number() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(0., 0.), c64(0., 0.), c64(1., 0.)])
}

/// Diagonal matrix from a list of complex entries.
pub fn diag(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(entries))
}

/// Kronecker product; `(a⊗b)[i·r_b + k, j·c_b + l] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Largest entry magnitude.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_hermitian(h: &ComplexMatrix, tol: f64) -> bool {
    h.is_square() && max_abs(&(h - h.adjoint())) < tol
}

pub fn is_unitary(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && max_abs(&(u.adjoint() * u - identity(u.nrows()))) < tol
}

/// `exp(-i·h·t)` for Hermitian `h`, via eigendecomposition `h = V·diag(E)·V†`.
///
/// Exact for piecewise-constant evolution; there is no time stepping.
pub fn unitary_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: (h.nrows(), h.nrows()),
            found: (h.nrows(), h.ncols()),
        });
    }
    let defect = max_abs(&(h - h.adjoint()));
    if defect >= HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let eig = h.clone().symmetric_eigen();
    let phases = eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t));
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    Ok(scaled * v.adjoint())
}

/// Phase `θ*` that best aligns `v` onto `u`: `arg Tr(v†u)`, so `u ≈ e^{iθ*}·v`.
///
/// Returns 0 when the overlap vanishes.
pub fn relative_phase(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    check_same_square(u, v)?;
    // Tr(v†u) = Σ_ij conj(v_ij)·u_ij
    let tr = v
        .iter()
        .zip(u.iter())
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
    Ok(if tr.norm() > 0.0 { tr.arg() } else { 0.0 })
}

/// `min_θ ‖u − e^{iθ}·v‖_max`, evaluated at `θ* = arg Tr(v†u)`.
pub fn phase_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    let theta = relative_phase(u, v)?;
    let rot = Complex64::from_polar(1.0, theta);
    Ok(u.iter()
        .zip(v.iter())
        .fold(0.0_f64, |acc, (a, b)| acc.max((a - rot * b).norm())))
}

fn check_same_square(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<()> {
    if !u.is_square() || u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            expected: u.shape(),
            found: v.shape(),
        });
    }
    Ok(())
}

/// Wrap an angle into `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}
