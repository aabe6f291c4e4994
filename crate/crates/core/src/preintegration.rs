//! IMU preintegration on SGal(3).
//!
//! Angular rate and acceleration are held constant over each sample
//! interval, so one sample maps to the group exponential of
//! `(0, a dt, omega dt, dt)` and a stream composes left to right into a
//! single pose delta. No bias states and no gravity handling: the
//! exponential consumes raw specific force; callers that want gravity
//! removed adjust `a` beforehand.

use crate::error::Error;
use crate::galilean::{GalileanTransform, TangentVector};
use crate::so3;
use crate::Vec3;

/// One gyroscope/accelerometer reading held over an interval `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuSample {
    /// Angular rate (rad/s).
    pub omega: Vec3,
    /// Linear acceleration (m/s^2).
    pub a: Vec3,
    /// Interval length (s); must be positive and finite.
    pub dt: f64,
}

impl ImuSample {
    pub fn new(omega: Vec3, a: Vec3, dt: f64) -> Self {
        ImuSample { omega, a, dt }
    }
}

/// A composed pose delta plus its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreintegratedDelta {
    pub delta: GalileanTransform,
    /// Sum of consumed sample intervals; always equals `delta.tau`.
    pub total_time: f64,
    pub sample_count: usize,
}

/// Integrate a single sample: `exp((0, a dt, omega dt, dt))`.
pub fn preintegrate_step(s: &ImuSample) -> Result<PreintegratedDelta, Error> {
    if !(s.dt > 0.0 && s.dt.is_finite()) {
        return Err(Error::NonPositiveDt { dt: s.dt });
    }
    let xi = TangentVector::new(Vec3::zeros(), s.a * s.dt, s.omega * s.dt, s.dt);
    Ok(PreintegratedDelta {
        delta: GalileanTransform::exp(&xi),
        total_time: s.dt,
        sample_count: 1,
    })
}

/// Same tangent as [`preintegrate_step`] but pushed through the
/// extended-pose (SE_2(3)) exponential pattern, which lacks the
/// `E(phi) nu iota` coupling term in the position block. Exposed so the
/// position discrepancy between the two formulations — exactly
/// `E(phi) nu iota`, i.e. `a dt^2 / 2` for a rotation-free step — can be
/// measured rather than stated.
pub fn preintegrate_step_se23(s: &ImuSample) -> Result<GalileanTransform, Error> {
    if !(s.dt > 0.0 && s.dt.is_finite()) {
        return Err(Error::NonPositiveDt { dt: s.dt });
    }
    let nu = s.a * s.dt;
    let phi = s.omega * s.dt;
    let d = so3::left_jacobian(&phi);
    Ok(GalileanTransform {
        rotation: so3::exp(&phi),
        velocity: d * nu,
        position: Vec3::zeros(), // D * rho with rho = 0; no E nu iota term
        tau: s.dt,
    })
}

/// Integrate an ordered stream: the left-to-right composition of the
/// per-sample deltas, `F_1 F_2 ... F_N`.
pub fn preintegrate_sequence(stream: &[ImuSample]) -> Result<PreintegratedDelta, Error> {
    if stream.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut delta = GalileanTransform::identity();
    let mut total_time = 0.0;
    for s in stream {
        let step = preintegrate_step(s)?;
        delta = delta.compose(&step.delta);
        total_time += s.dt;
    }
    Ok(PreintegratedDelta {
        delta,
        total_time,
        sample_count: stream.len(),
    })
}
