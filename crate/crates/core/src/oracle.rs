//! Truncated-series reference implementations.
//!
//! These are deliberately independent of the closed forms in [`crate::so3`]
//! and [`crate::galilean`]: they evaluate defining power series directly and
//! exist so the self-check command and the test suite can cross-examine the
//! closed forms instead of trusting them.

use nalgebra::SMatrix;

use crate::{Mat3, Vec3};

/// Matrix exponential by scaling and squaring: a `terms`-term Taylor series
/// on `m / 2^squarings`, squared back up.
pub fn expm<const D: usize>(
    m: &SMatrix<f64, D, D>,
    squarings: u32,
    terms: usize,
) -> SMatrix<f64, D, D> {
    let scaled = m / 2f64.powi(squarings as i32);
    let mut sum = SMatrix::<f64, D, D>::identity();
    let mut term = SMatrix::<f64, D, D>::identity();
    for n in 1..=terms {
        term = term * scaled / n as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Direct summation of `sum_n hat(phi)^n / (n + offset)!`.
///
/// `offset` 0 gives the rotation series, 1 the left Jacobian, 2 the E
/// matrix. Direct summation is adequate for angles up to ~10 given enough
/// terms; intermediate terms peak near `theta^theta / theta!`, which keeps
/// cancellation below 1e-12 there.
pub fn so3_series(phi: &Vec3, offset: usize, terms: usize) -> Mat3 {
    let k = crate::so3::hat(phi);
    let mut factorial = 1.0;
    for i in 1..=offset {
        factorial *= i as f64;
    }
    let mut term = Mat3::identity() / factorial;
    let mut sum = term;
    for n in 1..=terms {
        term = term * k / (n + offset) as f64;
        sum += term;
    }
    sum
}
