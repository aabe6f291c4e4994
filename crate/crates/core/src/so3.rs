//! SO(3) primitives used to assemble the Galilean exponential and logarithm.
//!
//! Everything is a closed form on 3x3 matrices: the Rodrigues rotation
//! formula, the left Jacobian `D` and its inverse, and the second-order
//! series matrix `E` that couples velocity and time in the group
//! exponential (it has no counterpart in the extended-pose exponential).
//! Each closed form switches to a fourth-order Taylor polynomial below a
//! small-angle threshold so the trigonometric cancellations stay below
//! 1e-12 at the matrix level.

use crate::error::Error;
use crate::{Mat3, Vec3};

/// Angle below which `exp` and `left_jacobian` use their Taylor forms.
pub const SMALL_ANGLE: f64 = 1e-4;
/// Angle below which `e_matrix` uses its Taylor form.
pub const SMALL_ANGLE_E: f64 = 1e-3;
/// Angle below which `inv_left_jacobian` uses its Taylor form.
pub const SMALL_ANGLE_INV_J: f64 = 1e-2;
/// Margin around pi inside which the logarithm is rejected.
pub const LOG_ANGLE_MARGIN: f64 = 1e-6;
/// Margin around 2*pi inside which the inverse left Jacobian is rejected.
pub const JACOBIAN_SINGULAR_MARGIN: f64 = 1e-6;

/// Skew-symmetric tolerance accepted by `vee`.
const SKEW_TOL: f64 = 1e-9;

/// A 3x3 matrix verified (or constructed) to be a proper rotation.
///
/// `try_new` enforces `R^T R = I` and `det R = 1` within 1e-12 (Frobenius).
/// Values produced by `exp` and by group composition are built without
/// re-checking; orthonormality drift is repaired only by an explicit
/// [`RotationMatrix::renormalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Mat3);

impl RotationMatrix {
    pub const ORTHONORMALITY_TOL: f64 = 1e-12;

    pub fn identity() -> Self {
        RotationMatrix(Mat3::identity())
    }

    /// Validate an arbitrary 3x3 matrix as a rotation.
    pub fn try_new(m: Mat3) -> Result<Self, Error> {
        let ortho = (m.transpose() * m - Mat3::identity()).norm();
        if ortho > Self::ORTHONORMALITY_TOL {
            return Err(Error::NotRotation {
                detail: format!("||R^T R - I|| = {ortho:.3e} exceeds 1e-12"),
            });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > Self::ORTHONORMALITY_TOL {
            return Err(Error::NotRotation {
                detail: format!("det R = {det} is not 1 within 1e-12"),
            });
        }
        Ok(RotationMatrix(m))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// Transpose, which is also the inverse rotation.
    pub fn transposed(&self) -> Self {
        RotationMatrix(self.0.transpose())
    }

    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Rotation angle in [0, pi].
    pub fn angle(&self) -> f64 {
        let m = &self.0;
        let w = Vec3::new(
            (m[(2, 1)] - m[(1, 2)]) / 2.0,
            (m[(0, 2)] - m[(2, 0)]) / 2.0,
            (m[(1, 0)] - m[(0, 1)]) / 2.0,
        );
        let cos = (m.trace() - 1.0) / 2.0;
        w.norm().atan2(cos)
    }

    /// Project back onto SO(3) via the polar factor of the SVD.
    ///
    /// Composition never renormalizes implicitly; call this when a long
    /// chain of products has accumulated measurable drift.
    pub fn renormalize(&self) -> Self {
        let svd = self.0.svd(true, true);
        let u = svd.u.expect("3x3 SVD always yields U");
        let v_t = svd.v_t.expect("3x3 SVD always yields V^T");
        let mut r = u * v_t;
        if r.determinant() < 0.0 {
            // Flip the last column of U to land on the proper rotation.
            let mut u = u;
            u.column_mut(2).scale_mut(-1.0);
            r = u * v_t;
        }
        RotationMatrix(r)
    }
}

impl std::ops::Mul for &RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: &RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * rhs.0)
    }
}

/// Cross-product matrix: `hat(a) * b == a x b`.
pub fn hat(phi: &Vec3) -> Mat3 {
    Mat3::new(
        0.0, -phi.z, phi.y, //
        phi.z, 0.0, -phi.x, //
        -phi.y, phi.x, 0.0,
    )
}

/// Inverse of [`hat`]; rejects matrices that are not skew-symmetric within 1e-9.
pub fn vee(m: &Mat3) -> Result<Vec3, Error> {
    let asym = (m + m.transpose()).abs().max();
    if asym > SKEW_TOL {
        return Err(Error::NotSkewSymmetric {
            max_asymmetry: asym,
        });
    }
    Ok(Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]))
}

/// Rodrigues exponential: `exp(hat(phi))`.
pub fn exp(phi: &Vec3) -> RotationMatrix {
    let theta = phi.norm();
    let k = hat(phi);
    let (a, b) = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        (
            1.0 - t2 / 6.0 + t2 * t2 / 120.0,
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
        )
    } else {
        (theta.sin() / theta, one_minus_cos_over_theta2(theta))
    };
    RotationMatrix(Mat3::identity() + k * a + k * k * b)
}

/// Logarithm of a rotation. Rejects angles within 1e-6 of pi, where the
/// axis sign is ambiguous.
pub fn log(r: &RotationMatrix) -> Result<Vec3, Error> {
    let m = r.matrix();
    let w = Vec3::new(
        (m[(2, 1)] - m[(1, 2)]) / 2.0,
        (m[(0, 2)] - m[(2, 0)]) / 2.0,
        (m[(1, 0)] - m[(0, 1)]) / 2.0,
    );
    let sin = w.norm();
    let cos = (m.trace() - 1.0) / 2.0;
    let theta = sin.atan2(cos);
    if theta > std::f64::consts::PI - LOG_ANGLE_MARGIN {
        return Err(Error::AngleNearPi { angle: theta });
    }
    let scale = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        1.0 + t2 / 6.0 + t2 * t2 * (7.0 / 360.0)
    } else {
        theta / sin
    };
    Ok(w * scale)
}

/// Left Jacobian of SO(3): the `D` matrix of the Galilean exponential,
/// `sum_n hat(phi)^n / (n+1)!`.
pub fn left_jacobian(phi: &Vec3) -> Mat3 {
    let theta = phi.norm();
    let k = hat(phi);
    let (b, c) = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        (
            0.5 - t2 / 24.0 + t2 * t2 / 720.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
        )
    } else {
        (
            one_minus_cos_over_theta2(theta),
            (theta - theta.sin()) / (theta * theta * theta),
        )
    };
    Mat3::identity() + k * b + k * k * c
}

/// Inverse of the left Jacobian. Singular where the angle reaches 2*pi.
pub fn inv_left_jacobian(phi: &Vec3) -> Result<Mat3, Error> {
    let theta = phi.norm();
    if theta >= 2.0 * std::f64::consts::PI - JACOBIAN_SINGULAR_MARGIN {
        return Err(Error::JacobianSingular { theta });
    }
    let k = hat(phi);
    let c = if theta < SMALL_ANGLE_INV_J {
        let t2 = theta * theta;
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    } else {
        // 1/theta^2 - cot(theta/2)/(2 theta); cot form avoids the 0/0 at pi.
        let half = theta / 2.0;
        1.0 / (theta * theta) - half.cos() / (2.0 * theta * half.sin())
    };
    Ok(Mat3::identity() - k * 0.5 + k * k * c)
}

/// The `E` matrix of the Galilean exponential, `sum_n hat(phi)^n / (n+2)!`.
///
/// Multiplies the velocity-times-time product in the position block; this
/// term is what distinguishes the Galilean exponential from the
/// extended-pose one.
pub fn e_matrix(phi: &Vec3) -> Mat3 {
    let theta = phi.norm();
    let k = hat(phi);
    let (c, d) = if theta < SMALL_ANGLE_E {
        let t2 = theta * theta;
        (
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0,
            1.0 / 24.0 - t2 / 720.0 + t2 * t2 / 40320.0,
        )
    } else {
        let t2 = theta * theta;
        let half = theta / 2.0;
        let s_half = half.sin();
        // (cos - 1 + theta^2/2) / theta^4 with 1 - cos = 2 sin^2(theta/2)
        // to keep the double cancellation at one rounding.
        (
            (theta - theta.sin()) / (t2 * theta),
            (t2 / 2.0 - 2.0 * s_half * s_half) / (t2 * t2),
        )
    };
    Mat3::identity() * 0.5 + k * c + k * k * d
}

/// `(1 - cos t) / t^2` through the half-angle identity (no cancellation).
fn one_minus_cos_over_theta2(theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    2.0 * s * s / (theta * theta)
}
