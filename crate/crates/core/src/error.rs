//! Error type shared by the math layers of the crate.

/// Errors raised by group, uncertainty, and preintegration operations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input to `so3::vee` is not skew-symmetric within tolerance.
    #[error("matrix is not skew-symmetric (max asymmetry {max_asymmetry:.3e})")]
    NotSkewSymmetric { max_asymmetry: f64 },

    /// A 3x3 matrix failed the rotation-matrix checks.
    #[error("matrix is not a rotation: {detail}")]
    NotRotation { detail: String },

    /// Rotation angle is too close to pi; the logarithm branch is ambiguous.
    #[error("rotation angle {angle} rad is within 1e-6 of pi; logarithm is ambiguous")]
    AngleNearPi { angle: f64 },

    /// The SO(3) left Jacobian is singular (angle at a multiple of 2*pi).
    #[error("left Jacobian is singular: rotation angle {theta} rad is too close to 2*pi")]
    JacobianSingular { theta: f64 },

    /// A 5x5 matrix does not have the sgal(3) block pattern.
    #[error("matrix does not have the sgal(3) block pattern: {detail}")]
    MalformedAlgebraElement { detail: String },

    /// A matrix power series did not converge within the term budget.
    #[error("series did not converge within {max_terms} terms (last term norm {last_term:.3e})")]
    ConvergenceFailure { max_terms: usize, last_term: f64 },

    /// Covariance matrix is not symmetric within tolerance.
    #[error("covariance is not symmetric (max asymmetry {max_asymmetry:.3e})")]
    CovarianceNotSymmetric { max_asymmetry: f64 },

    /// Covariance matrix has an eigenvalue below the semidefiniteness tolerance.
    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// Too few samples for an empirical estimate.
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// Projected 2x2 covariance has a meaningfully negative eigenvalue.
    #[error("projected covariance is degenerate (eigenvalue {eigenvalue:.3e})")]
    DegenerateCovariance { eigenvalue: f64 },

    /// IMU sample interval must be positive and finite.
    #[error("IMU sample dt must be positive and finite, got {dt}")]
    NonPositiveDt { dt: f64 },

    /// Preintegration was asked to consume an empty sample stream.
    #[error("IMU sample stream is empty")]
    EmptyStream,
}
