//! Built-in oracle suite backing the `selfcheck` CLI command.
//!
//! Each check replays a closed form against an independent route — a
//! truncated power series, a general 5x5 numerical inverse, a finite
//! difference — on fixed seeds, so a coefficient typo anywhere in the
//! closed forms turns the table red instead of silently skewing results.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::galilean::{self, GalileanTransform, TangentVector};
use crate::oracle;
use crate::so3;
use crate::{Mat3, Vec3};

/// Outcome of one oracle check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Signature of the group exponential under test; the series-oracle check
/// is parameterized over it so the harness itself can be tested against a
/// deliberately broken implementation.
pub type ExpFn<'a> = &'a dyn Fn(&TangentVector) -> GalileanTransform;

/// Run every check against the crate's own exponential.
pub fn run() -> Vec<Check> {
    run_with_exp(&GalileanTransform::exp)
}

/// Run every check, with `exp` substituted into the group-exp series check.
pub fn run_with_exp(exp: ExpFn) -> Vec<Check> {
    vec![
        so3_exp_series(),
        so3_left_jacobian_series(),
        e_matrix_series(),
        group_exp_series(exp),
        log_exp_round_trips(),
        adjoint_conjugation(),
        adjoint_exp_vs_exp_ad(),
        group_axioms(),
        ad_commutator(),
        jacobian_first_order(),
    ]
}

fn timed(name: &'static str, tol: f64, worst: impl FnOnce() -> f64) -> Check {
    let start = Instant::now();
    let err = worst();
    let seconds = start.elapsed().as_secs_f64();
    Check {
        name,
        passed: err <= tol,
        detail: format!("max err {err:.2e} (tol {tol:.0e})"),
        seconds,
    }
}

fn unit_vec3<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

pub(crate) fn random_phi<R: Rng>(rng: &mut R, max_norm: f64) -> Vec3 {
    unit_vec3(rng) * rng.random_range(0.0..max_norm)
}

/// Tangent with uniform direction and norm uniform in `[0, max_norm)`.
pub(crate) fn random_tangent_with_norm<R: Rng>(rng: &mut R, max_norm: f64) -> TangentVector {
    let mut v = crate::Vec10::zeros();
    for i in 0..10 {
        v[i] = rng.random_range(-1.0..1.0);
    }
    let n = v.norm().max(1e-9);
    TangentVector::from_vector(&(v * (rng.random_range(0.0..max_norm) / n)))
}

/// Tangent with each component uniform in `[-bound, bound]`.
pub(crate) fn random_tangent_bounded<R: Rng>(rng: &mut R, bound: f64) -> TangentVector {
    let mut v = crate::Vec10::zeros();
    for i in 0..10 {
        v[i] = rng.random_range(-bound..bound);
    }
    TangentVector::from_vector(&v)
}

/// Tangent whose rotation block stays inside the logarithm domain.
pub(crate) fn random_tangent_log_safe<R: Rng>(rng: &mut R) -> TangentVector {
    let mut rng2 = rng;
    let phi = random_phi(&mut rng2, std::f64::consts::PI - 1e-3);
    TangentVector::new(
        Vec3::new(
            rng2.random_range(-5.0..5.0),
            rng2.random_range(-5.0..5.0),
            rng2.random_range(-5.0..5.0),
        ),
        Vec3::new(
            rng2.random_range(-5.0..5.0),
            rng2.random_range(-5.0..5.0),
            rng2.random_range(-5.0..5.0),
        ),
        phi,
        rng2.random_range(-5.0..5.0),
    )
}

/// Transform with components bounded by 10 (rotation from a random axis).
pub(crate) fn random_transform_bounded<R: Rng>(rng: &mut R, bound: f64) -> GalileanTransform {
    let phi = random_phi(rng, std::f64::consts::PI);
    GalileanTransform::new(
        so3::exp(&phi),
        Vec3::new(
            rng.random_range(-bound..bound),
            rng.random_range(-bound..bound),
            rng.random_range(-bound..bound),
        ),
        Vec3::new(
            rng.random_range(-bound..bound),
            rng.random_range(-bound..bound),
            rng.random_range(-bound..bound),
        ),
        rng.random_range(-bound..bound),
    )
}

fn max_abs3(m: &Mat3) -> f64 {
    m.abs().max()
}

fn so3_exp_series() -> Check {
    timed("so3 exp matches power series", 1e-10, || {
        let mut rng = ChaCha12Rng::seed_from_u64(101);
        let mut worst: f64 = 0.0;
        for _ in 0..300 {
            let phi = random_phi(&mut rng, 10.0);
            let series = oracle::expm(&so3::hat(&phi), 8, 30);
            worst = worst.max(max_abs3(&(so3::exp(&phi).matrix() - series)));
        }
        worst
    })
}

fn so3_left_jacobian_series() -> Check {
    timed("so3 left Jacobian matches power series", 1e-10, || {
        let mut rng = ChaCha12Rng::seed_from_u64(102);
        let mut worst: f64 = 0.0;
        for _ in 0..300 {
            let phi = random_phi(&mut rng, 10.0);
            let series = oracle::so3_series(&phi, 1, 60);
            worst = worst.max(max_abs3(&(so3::left_jacobian(&phi) - series)));
        }
        worst
    })
}

fn e_matrix_series() -> Check {
    timed("E matrix matches power series", 1e-10, || {
        let mut rng = ChaCha12Rng::seed_from_u64(103);
        let mut worst: f64 = 0.0;
        for _ in 0..300 {
            let phi = random_phi(&mut rng, 10.0);
            let series = oracle::so3_series(&phi, 2, 60);
            worst = worst.max(max_abs3(&(so3::e_matrix(&phi) - series)));
        }
        worst
    })
}

fn group_exp_series(exp: ExpFn) -> Check {
    timed("group exp matches 5x5 power series", 1e-10, || {
        let mut rng = ChaCha12Rng::seed_from_u64(104);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let xi = random_tangent_with_norm(&mut rng, 10.0);
            let series = oracle::expm(&galilean::wedge(&xi), 8, 30);
            worst = worst.max((exp(&xi).as_matrix() - series).abs().max());
        }
        worst
    })
}

fn log_exp_round_trips() -> Check {
    timed("log/exp round trips", 1e-9, || {
        let mut rng = ChaCha12Rng::seed_from_u64(105);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let xi = random_tangent_log_safe(&mut rng);
            let f = GalileanTransform::exp(&xi);
            let back = f.log().expect("angle is inside the log domain");
            worst = worst.max((back.as_vector() - xi.as_vector()).abs().max());
            let again = GalileanTransform::exp(&back);
            worst = worst.max((again.as_matrix() - f.as_matrix()).abs().max());
        }
        worst
    })
}

fn adjoint_conjugation() -> Check {
    timed("adjoint matches 5x5 conjugation", 1e-10, || {
        let mut rng = ChaCha12Rng::seed_from_u64(106);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let f = random_transform_bounded(&mut rng, 3.0);
            let xi = random_tangent_bounded(&mut rng, 3.0);
            let inv = f
                .as_matrix()
                .try_inverse()
                .expect("group embeddings are invertible");
            let conj = f.as_matrix() * galilean::wedge(&xi) * inv;
            let via_adjoint = f.adjoint() * xi.as_vector();
            let direct = galilean::vee(&conj).expect("conjugation stays in the algebra");
            worst = worst.max((direct.as_vector() - via_adjoint).abs().max());
        }
        worst
    })
}

fn adjoint_exp_vs_exp_ad() -> Check {
    timed("adjoint of exp matches exp of ad", 1e-9, || {
        let mut rng = ChaCha12Rng::seed_from_u64(107);
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let xi = random_tangent_bounded(&mut rng, 2.0);
            let lhs = GalileanTransform::exp(&xi).adjoint();
            let rhs = oracle::expm(&galilean::ad(&xi), 8, 30);
            worst = worst.max((lhs - rhs).abs().max());
        }
        worst
    })
}

fn group_axioms() -> Check {
    timed("group axioms", 1e-12, || {
        let mut rng = ChaCha12Rng::seed_from_u64(108);
        let mut worst: f64 = 0.0;
        let id = GalileanTransform::identity().as_matrix();
        for _ in 0..1000 {
            let a = random_transform_bounded(&mut rng, 10.0);
            let b = random_transform_bounded(&mut rng, 10.0);
            let c = random_transform_bounded(&mut rng, 10.0);
            let left = a.compose(&b).compose(&c).as_matrix();
            let right = a.compose(&b.compose(&c)).as_matrix();
            worst = worst.max((left - right).abs().max());
            worst = worst.max(
                (a.compose(&GalileanTransform::identity()).as_matrix() - a.as_matrix())
                    .abs()
                    .max(),
            );
            worst = worst.max((a.compose(&a.inverse()).as_matrix() - id).abs().max());
            worst = worst.max((a.inverse().compose(&a).as_matrix() - id).abs().max());
        }
        worst
    })
}

fn ad_commutator() -> Check {
    timed("ad matches wedge commutator", 1e-12, || {
        let mut rng = ChaCha12Rng::seed_from_u64(109);
        let mut worst: f64 = 0.0;
        for _ in 0..500 {
            let xi = random_tangent_bounded(&mut rng, 3.0);
            let eta = random_tangent_bounded(&mut rng, 3.0);
            let wx = galilean::wedge(&xi);
            let we = galilean::wedge(&eta);
            let bracket = wx * we - we * wx;
            let lhs = galilean::wedge(&TangentVector::from_vector(
                &(galilean::ad(&xi) * eta.as_vector()),
            ));
            worst = worst.max((lhs - bracket).abs().max());
        }
        worst
    })
}

fn jacobian_first_order() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(110);
    let mut min_slope = f64::INFINITY;
    for _ in 0..20 {
        let xi = random_tangent_with_norm(&mut rng, 0.5);
        let xi = TangentVector::from_vector(&(xi.as_vector() * (0.5 / xi.norm().max(1e-12))));
        let direction = random_tangent_with_norm(&mut rng, 1.0);
        let direction =
            TangentVector::from_vector(&(direction.as_vector() / direction.norm().max(1e-12)));
        let j = galilean::left_jacobian(&xi).expect("series converges for small tangents");
        let mut errs = Vec::new();
        for mag in [1e-2, 1e-3, 1e-4] {
            let delta = direction * mag;
            let lhs = GalileanTransform::exp(&(xi + delta))
                .compose(&GalileanTransform::exp(&xi).inverse())
                .log()
                .expect("perturbed exp stays in the log domain");
            let err = (lhs.as_vector() - j * delta.as_vector()).norm();
            errs.push(err);
        }
        for w in errs.windows(2) {
            min_slope = min_slope.min((w[0] / w[1]).log10());
        }
    }
    Check {
        name: "group Jacobian first-order decay",
        passed: min_slope >= 1.8,
        detail: format!("min log-log slope {min_slope:.2} (need >= 1.8)"),
        seconds: start.elapsed().as_secs_f64(),
    }
}
