//! The special Galilean group SGal(3) and its 10-dimensional Lie algebra.
//!
//! A group element bundles an orientation `C`, a velocity `v`, a position
//! `r`, and a time offset `tau`; embedded as a 5x5 matrix it reads
//!
//! ```text
//!     [ C  v  r  ]
//!     [ 0  1  tau]
//!     [ 0  0  1  ]
//! ```
//!
//! Tangent coordinates are ordered `(rho, nu, phi, iota)` — indices 0..3
//! translation, 3..6 boost, 6..9 rotation, 9 time — and that order is used
//! for every 10-vector and every 10x10 matrix in this crate (adjoints,
//! Jacobians, covariances). Storage is componentwise; the 5x5 embedding is
//! explicit so the constant rows can never drift.

use crate::error::Error;
use crate::so3::{self, RotationMatrix};
use crate::{Mat10, Mat3, Mat5, Vec10, Vec3, Vec5};

/// Tolerance for the block-pattern check in [`vee`].
const ALGEBRA_PATTERN_TOL: f64 = 1e-9;
/// Series cutoff for [`left_jacobian`].
const JACOBIAN_TERM_TOL: f64 = 1e-14;
const JACOBIAN_MAX_TERMS: usize = 60;

/// A point in space and time; the object Galilean transformations act on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub x: Vec3,
    pub t: f64,
}

impl Event {
    pub fn new(x: Vec3, t: f64) -> Self {
        Event { x, t }
    }

    /// Homogeneous 5-column `(x, t, 1)`.
    pub fn to_homogeneous(&self) -> Vec5 {
        Vec5::new(self.x.x, self.x.y, self.x.z, self.t, 1.0)
    }

    pub fn from_homogeneous(p: &Vec5) -> Self {
        Event {
            x: Vec3::new(p[0], p[1], p[2]),
            t: p[3],
        }
    }
}

/// Tangent coordinates `(rho, nu, phi, iota)` of sgal(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    /// Translation component (indices 0..3).
    pub rho: Vec3,
    /// Boost component (indices 3..6). Rates are per curve parameter, not
    /// per second; the group manifold carries time as a coordinate.
    pub nu: Vec3,
    /// Rotation component (indices 6..9).
    pub phi: Vec3,
    /// Time component (index 9).
    pub iota: f64,
}

impl TangentVector {
    /// Index layout shared by every 10-vector and 10x10 matrix: rho 0..3,
    /// nu 3..6, phi 6..9, iota 9.
    pub const RHO: std::ops::Range<usize> = 0..3;
    pub const NU: std::ops::Range<usize> = 3..6;
    pub const PHI: std::ops::Range<usize> = 6..9;
    pub const IOTA: usize = 9;

    pub fn new(rho: Vec3, nu: Vec3, phi: Vec3, iota: f64) -> Self {
        TangentVector { rho, nu, phi, iota }
    }

    pub fn zero() -> Self {
        TangentVector::new(Vec3::zeros(), Vec3::zeros(), Vec3::zeros(), 0.0)
    }

    pub fn as_vector(&self) -> Vec10 {
        let mut v = Vec10::zeros();
        v.fixed_rows_mut::<3>(0).copy_from(&self.rho);
        v.fixed_rows_mut::<3>(3).copy_from(&self.nu);
        v.fixed_rows_mut::<3>(6).copy_from(&self.phi);
        v[Self::IOTA] = self.iota;
        v
    }

    pub fn from_vector(v: &Vec10) -> Self {
        TangentVector {
            rho: v.fixed_rows::<3>(0).into_owned(),
            nu: v.fixed_rows::<3>(3).into_owned(),
            phi: v.fixed_rows::<3>(6).into_owned(),
            iota: v[Self::IOTA],
        }
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().norm()
    }
}

impl std::ops::Add for TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: TangentVector) -> TangentVector {
        TangentVector::from_vector(&(self.as_vector() + rhs.as_vector()))
    }
}

impl std::ops::Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: TangentVector) -> TangentVector {
        TangentVector::from_vector(&(self.as_vector() - rhs.as_vector()))
    }
}

impl std::ops::Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> TangentVector {
        TangentVector::new(self.rho * s, self.nu * s, self.phi * s, self.iota * s)
    }
}

impl std::ops::Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        self * -1.0
    }
}

/// Lie-algebra matrix of a tangent vector:
///
/// ```text
///     [ hat(phi)  nu  rho ]
///     [ 0         0   iota]
///     [ 0         0   0   ]
/// ```
pub fn wedge(xi: &TangentVector) -> Mat5 {
    let mut m = Mat5::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&so3::hat(&xi.phi));
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&xi.nu);
    m.fixed_view_mut::<3, 1>(0, 4).copy_from(&xi.rho);
    m[(3, 4)] = xi.iota;
    m
}

/// Inverse of [`wedge`]; rejects matrices outside the sgal(3) block pattern.
pub fn vee(m: &Mat5) -> Result<TangentVector, Error> {
    let top_left = m.fixed_view::<3, 3>(0, 0).into_owned();
    let skew = (top_left + top_left.transpose()).abs().max();
    if skew > ALGEBRA_PATTERN_TOL {
        return Err(Error::MalformedAlgebraElement {
            detail: format!("top-left block is not skew-symmetric (asymmetry {skew:.3e})"),
        });
    }
    for (i, j) in [
        (3, 0),
        (3, 1),
        (3, 2),
        (3, 3),
        (4, 0),
        (4, 1),
        (4, 2),
        (4, 3),
        (4, 4),
    ] {
        if m[(i, j)].abs() > ALGEBRA_PATTERN_TOL {
            return Err(Error::MalformedAlgebraElement {
                detail: format!("entry ({}, {}) = {} must be zero", i + 1, j + 1, m[(i, j)]),
            });
        }
    }
    Ok(TangentVector {
        rho: m.fixed_view::<3, 1>(0, 4).into_owned(),
        nu: m.fixed_view::<3, 1>(0, 3).into_owned(),
        phi: Vec3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]),
        iota: m[(3, 4)],
    })
}

/// An element of SGal(3): orientation, velocity, position, time offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalileanTransform {
    pub rotation: RotationMatrix,
    pub velocity: Vec3,
    pub position: Vec3,
    pub tau: f64,
}

impl GalileanTransform {
    pub fn identity() -> Self {
        GalileanTransform {
            rotation: RotationMatrix::identity(),
            velocity: Vec3::zeros(),
            position: Vec3::zeros(),
            tau: 0.0,
        }
    }

    pub fn new(rotation: RotationMatrix, velocity: Vec3, position: Vec3, tau: f64) -> Self {
        GalileanTransform {
            rotation,
            velocity,
            position,
            tau,
        }
    }

    /// Exponential map. Closed form
    /// `C = exp(hat(phi))`, `v = D(phi) nu`, `r = D(phi) rho + E(phi) nu iota`,
    /// `tau = iota`; equal to the matrix series of `wedge(xi)`.
    pub fn exp(xi: &TangentVector) -> Self {
        let rotation = so3::exp(&xi.phi);
        let d = so3::left_jacobian(&xi.phi);
        let e = so3::e_matrix(&xi.phi);
        GalileanTransform {
            rotation,
            velocity: d * xi.nu,
            position: d * xi.rho + (e * xi.nu) * xi.iota,
            tau: xi.iota,
        }
    }

    /// Logarithmic map; inverse of [`GalileanTransform::exp`].
    ///
    /// Fails with [`Error::AngleNearPi`] when the rotation angle is within
    /// 1e-6 of pi.
    pub fn log(&self) -> Result<TangentVector, Error> {
        let phi = so3::log(&self.rotation)?;
        let d_inv = so3::inv_left_jacobian(&phi)?;
        let e = so3::e_matrix(&phi);
        let nu = d_inv * self.velocity;
        let rho = d_inv * (self.position - (e * nu) * self.tau);
        Ok(TangentVector {
            rho,
            nu,
            phi,
            iota: self.tau,
        })
    }

    /// Group product; identical to the 5x5 matrix product of the embeddings.
    pub fn compose(&self, other: &GalileanTransform) -> GalileanTransform {
        GalileanTransform {
            rotation: &self.rotation * &other.rotation,
            velocity: self.rotation.rotate(&other.velocity) + self.velocity,
            position: self.rotation.rotate(&other.position)
                + self.velocity * other.tau
                + self.position,
            tau: self.tau + other.tau,
        }
    }

    /// Group inverse: `C' = C^T`, `v' = -C^T v`, `r' = -C^T (r - v tau)`,
    /// `tau' = -tau`.
    pub fn inverse(&self) -> GalileanTransform {
        let ct = self.rotation.transposed();
        GalileanTransform {
            velocity: -ct.rotate(&self.velocity),
            position: -ct.rotate(&(self.position - self.velocity * self.tau)),
            rotation: ct,
            tau: -self.tau,
        }
    }

    /// Left action on an event: `x' = C x + v t + r`, `t' = t + tau`.
    ///
    /// Spatial distances between simultaneous events and all time intervals
    /// are preserved; distances between non-simultaneous events are not.
    pub fn act(&self, p: &Event) -> Event {
        Event {
            x: self.rotation.rotate(&p.x) + self.velocity * p.t + self.position,
            t: p.t + self.tau,
        }
    }

    /// Adjoint representation: the 10x10 matrix satisfying
    /// `wedge(adjoint(F) * xi) = F wedge(xi) F^{-1}`.
    ///
    /// In `(rho, nu, phi, iota)` block order:
    ///
    /// ```text
    ///     [ C  -tau C  hat(r - v tau) C  v ]
    ///     [ 0   C      hat(v) C          0 ]
    ///     [ 0   0      C                 0 ]
    ///     [ 0   0      0                 1 ]
    /// ```
    ///
    /// The time coordinate is invariant under conjugation, hence the unit
    /// last row.
    pub fn adjoint(&self) -> Mat10 {
        let c = self.rotation.matrix();
        let mut m = Mat10::zeros();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(c);
        m.fixed_view_mut::<3, 3>(0, 3).copy_from(&(-self.tau * c));
        m.fixed_view_mut::<3, 3>(0, 6)
            .copy_from(&(so3::hat(&(self.position - self.velocity * self.tau)) * c));
        m.fixed_view_mut::<3, 1>(0, 9).copy_from(&self.velocity);
        m.fixed_view_mut::<3, 3>(3, 3).copy_from(c);
        m.fixed_view_mut::<3, 3>(3, 6)
            .copy_from(&(so3::hat(&self.velocity) * c));
        m.fixed_view_mut::<3, 3>(6, 6).copy_from(c);
        m[(9, 9)] = 1.0;
        m
    }

    /// Embed as the 5x5 matrix of the group definition. Rows 4 and 5 are
    /// exactly `(0, 0, 0, 1, tau)` and `(0, 0, 0, 0, 1)`.
    pub fn as_matrix(&self) -> Mat5 {
        let mut m = Mat5::identity();
        m.fixed_view_mut::<3, 3>(0, 0)
            .copy_from(self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.velocity);
        m.fixed_view_mut::<3, 1>(0, 4).copy_from(&self.position);
        m[(3, 4)] = self.tau;
        m
    }

    /// Read a transform back from a 5x5 embedding, validating both the
    /// rotation block and the constant rows.
    pub fn from_matrix(m: &Mat5) -> Result<Self, Error> {
        let rotation = RotationMatrix::try_new(m.fixed_view::<3, 3>(0, 0).into_owned())?;
        for (i, j, want) in [
            (3, 0, 0.0),
            (3, 1, 0.0),
            (3, 2, 0.0),
            (3, 3, 1.0),
            (4, 0, 0.0),
            (4, 1, 0.0),
            (4, 2, 0.0),
            (4, 3, 0.0),
            (4, 4, 1.0),
        ] {
            if (m[(i, j)] - want).abs() > 1e-12 {
                return Err(Error::MalformedAlgebraElement {
                    detail: format!(
                        "embedding row {} column {} must be {}, got {}",
                        i + 1,
                        j + 1,
                        want,
                        m[(i, j)]
                    ),
                });
            }
        }
        Ok(GalileanTransform {
            rotation,
            velocity: m.fixed_view::<3, 1>(0, 3).into_owned(),
            position: m.fixed_view::<3, 1>(0, 4).into_owned(),
            tau: m[(3, 4)],
        })
    }

    /// Copy with the rotation projected back onto SO(3).
    pub fn renormalized(&self) -> Self {
        GalileanTransform {
            rotation: self.rotation.renormalize(),
            ..*self
        }
    }
}

/// Algebra adjoint: `wedge(ad(xi) * eta) = [wedge(xi), wedge(eta)]`.
///
/// In `(rho, nu, phi, iota)` block order:
///
/// ```text
///     [ hat(phi)  -iota I  hat(rho)  nu ]
///     [ 0         hat(phi) hat(nu)   0  ]
///     [ 0         0        hat(phi)  0  ]
///     [ 0         0        0         0  ]
/// ```
pub fn ad(xi: &TangentVector) -> Mat10 {
    let k = so3::hat(&xi.phi);
    let mut m = Mat10::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&k);
    m.fixed_view_mut::<3, 3>(0, 3)
        .copy_from(&(-xi.iota * Mat3::identity()));
    m.fixed_view_mut::<3, 3>(0, 6).copy_from(&so3::hat(&xi.rho));
    m.fixed_view_mut::<3, 1>(0, 9).copy_from(&xi.nu);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(&k);
    m.fixed_view_mut::<3, 3>(3, 6).copy_from(&so3::hat(&xi.nu));
    m.fixed_view_mut::<3, 3>(6, 6).copy_from(&k);
    m
}

/// Left Jacobian of the group, `J_l(xi) = sum_n ad(xi)^n / (n+1)!`.
///
/// Satisfies `log(exp(xi + delta) exp(xi)^{-1}) = J_l(xi) delta + O(|delta|^2)`.
/// No closed form is used; the series is summed until terms drop below
/// 1e-14 (caller should keep `|phi| < pi` so the sum stays well
/// conditioned).
pub fn left_jacobian(xi: &TangentVector) -> Result<Mat10, Error> {
    let a = ad(xi);
    let mut sum = Mat10::identity();
    let mut term = Mat10::identity();
    for n in 1..=JACOBIAN_MAX_TERMS {
        term = term * a / (n as f64 + 1.0);
        sum += term;
        if term.norm() < JACOBIAN_TERM_TOL {
            return Ok(sum);
        }
    }
    Err(Error::ConvergenceFailure {
        max_terms: JACOBIAN_MAX_TERMS,
        last_term: term.norm(),
    })
}

/// Right Jacobian, obtained from the left one by `J_r(xi) = J_l(-xi)`.
pub fn right_jacobian(xi: &TangentVector) -> Result<Mat10, Error> {
    left_jacobian(&-*xi)
}
