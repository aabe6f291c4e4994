//! The special Galilean group SGal(3) as a working numerical library.
//!
//! SGal(3) bundles rotations, velocity boosts, spatial translations, and
//! time translations into one 10-dimensional matrix Lie group acting on
//! spacetime events; rotations, rigid motions, and extended poses are all
//! proper subgroups. This crate provides:
//!
//! - [`so3`]: Rodrigues exponential/logarithm, the left Jacobian `D`, its
//!   inverse, and the second-order `E` matrix, with small-angle fallbacks;
//! - [`galilean`]: group elements and tangent vectors, wedge/vee, exp/log,
//!   composition, inverse, the event action, both adjoints, and the
//!   series-built group Jacobian;
//! - [`uncertainty`]: tangent-space Gaussians with left/right perturbation
//!   conventions, reproducible sampling, covariance estimation, side
//!   conversion, event clouds, and projected sigma ellipses;
//! - [`preintegration`]: IMU sample integration into pose deltas;
//! - [`io`]: the JSON/CSV wire formats used by the CLI;
//! - [`oracle`] and [`selfcheck`]: independent series references and the
//!   check suite that compares the closed forms against them.
//!
//! Tangent coordinates are everywhere ordered `(rho, nu, phi, iota)`:
//! indices 0..3 translation, 3..6 boost, 6..9 rotation, 9 time.

pub mod error;
pub mod galilean;
pub mod io;
pub mod oracle;
pub mod preintegration;
pub mod selfcheck;
pub mod so3;
pub mod uncertainty;

pub use error::Error;
pub use galilean::{Event, GalileanTransform, TangentVector};
pub use preintegration::{ImuSample, PreintegratedDelta};
pub use so3::RotationMatrix;
pub use uncertainty::{EllipseProjection, GroupGaussian, PerturbationSide, SampleCloud};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
pub type Vec5 = nalgebra::Vector5<f64>;
pub type Mat5 = nalgebra::Matrix5<f64>;
pub type Vec10 = nalgebra::SVector<f64, 10>;
pub type Mat10 = nalgebra::SMatrix<f64, 10, 10>;
pub type Vec2 = nalgebra::Vector2<f64>;
