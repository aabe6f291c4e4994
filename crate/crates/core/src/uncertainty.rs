//! Gaussian uncertainty on SGal(3).
//!
//! A distribution is a mean transform plus a 10x10 tangent-space covariance,
//! applied on a declared side: `F = mean * exp(xi)` (right, local) or
//! `F = exp(xi) * mean` (left, global), with `xi ~ N(0, Sigma)` in
//! `(rho, nu, phi, iota)` coordinates.
//!
//! Sampling is reproducible: a ChaCha12 stream keyed by the 64-bit seed,
//! ten standard normals per sample in coordinate order (ziggurat method),
//! colored by the symmetric eigenfactor of Sigma. Bit-level determinism is
//! promised within this implementation only; across implementations the
//! clouds agree statistically.

use nalgebra::Vector2;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Error;
use crate::galilean::{Event, GalileanTransform, TangentVector};
use crate::{Mat10, Vec10};

/// Which side of the mean the tangent perturbation multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationSide {
    /// Local frame: `F = mean * exp(xi)`.
    Right,
    /// Global frame: `F = exp(xi) * mean`.
    Left,
}

impl PerturbationSide {
    pub fn flipped(self) -> Self {
        match self {
            PerturbationSide::Right => PerturbationSide::Left,
            PerturbationSide::Left => PerturbationSide::Right,
        }
    }
}

/// Symmetry tolerance for covariance matrices.
pub const COVARIANCE_SYMMETRY_TOL: f64 = 1e-10;
/// Most negative eigenvalue still treated as zero.
pub const PSD_EIGENVALUE_TOL: f64 = -1e-10;
/// Central-difference step of the ellipse linearization.
const JACOBIAN_STEP: f64 = 1e-6;
/// Distinct points on a sigma-ellipse polyline (one more closes it).
const ELLIPSE_SEGMENTS: usize = 128;

/// A tangent-space Gaussian over group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupGaussian {
    mean: GalileanTransform,
    covariance: Mat10,
    side: PerturbationSide,
}

impl GroupGaussian {
    /// Validates symmetry (1e-10) and positive semidefiniteness (eigenvalues
    /// above -1e-10); the stored covariance is the symmetrized input.
    pub fn new(
        mean: GalileanTransform,
        covariance: Mat10,
        side: PerturbationSide,
    ) -> Result<Self, Error> {
        let asym = (covariance - covariance.transpose()).abs().max();
        if asym > COVARIANCE_SYMMETRY_TOL {
            return Err(Error::CovarianceNotSymmetric {
                max_asymmetry: asym,
            });
        }
        let covariance = (covariance + covariance.transpose()) / 2.0;
        let min_eig = covariance.symmetric_eigen().eigenvalues.min();
        if min_eig < PSD_EIGENVALUE_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(GroupGaussian {
            mean,
            covariance,
            side,
        })
    }

    pub fn mean(&self) -> &GalileanTransform {
        &self.mean
    }

    pub fn covariance(&self) -> &Mat10 {
        &self.covariance
    }

    pub fn side(&self) -> PerturbationSide {
        self.side
    }

    /// Apply a tangent perturbation on the declared side.
    pub fn apply_perturbation(&self, xi: &TangentVector) -> GalileanTransform {
        let exp = GalileanTransform::exp(xi);
        match self.side {
            PerturbationSide::Right => self.mean.compose(&exp),
            PerturbationSide::Left => exp.compose(&self.mean),
        }
    }

    /// Square-root factor `L` with `L L^T = Sigma`, from the symmetric
    /// eigendecomposition. Eigen-based rather than Cholesky so rank-deficient
    /// covariances (single-axis experiments) factor cleanly.
    fn sqrt_factor(&self) -> Result<Mat10, Error> {
        let eig = self.covariance.symmetric_eigen();
        let min_eig = eig.eigenvalues.min();
        if min_eig < PSD_EIGENVALUE_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        let mut l = eig.eigenvectors;
        for j in 0..10 {
            let s = eig.eigenvalues[j].max(0.0).sqrt();
            l.column_mut(j).scale_mut(s);
        }
        Ok(l)
    }

    /// Draw `n` tangent vectors `xi ~ N(0, Sigma)`, deterministically in the
    /// seed.
    pub fn sample_tangents(&self, n: usize, seed: u64) -> Result<Vec<TangentVector>, Error> {
        let l = self.sqrt_factor()?;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let normal = StandardNormal;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut z = Vec10::zeros();
            for i in 0..10 {
                z[i] = normal.sample(&mut rng);
            }
            out.push(TangentVector::from_vector(&(l * z)));
        }
        Ok(out)
    }

    /// Draw `n` group elements by perturbing the mean on the declared side.
    pub fn sample_perturbed(&self, n: usize, seed: u64) -> Result<Vec<GalileanTransform>, Error> {
        Ok(self
            .sample_tangents(n, seed)?
            .iter()
            .map(|xi| self.apply_perturbation(xi))
            .collect())
    }

    /// Re-express the same distribution on the other side. The mean is
    /// unchanged; the covariance is conjugated by the adjoint:
    /// `Ad(mean^{-1})` for left-to-right, `Ad(mean)` for right-to-left.
    pub fn convert_side(&self) -> GroupGaussian {
        let a = match self.side {
            PerturbationSide::Left => self.mean.inverse().adjoint(),
            PerturbationSide::Right => self.mean.adjoint(),
        };
        GroupGaussian {
            mean: self.mean,
            covariance: a * self.covariance * a.transpose(),
            side: self.side.flipped(),
        }
    }

    /// Push an event through `n` sampled transforms, keeping the drawn
    /// tangents alongside the outputs.
    pub fn transform_event_cloud(
        &self,
        p: &Event,
        n: usize,
        seed: u64,
    ) -> Result<SampleCloud, Error> {
        let records = self
            .sample_tangents(n, seed)?
            .into_iter()
            .map(|xi| CloudRecord {
                event_out: self.apply_perturbation(&xi).act(p),
                xi,
            })
            .collect::<Vec<_>>();
        Ok(SampleCloud {
            meta: CloudMeta {
                seed,
                count: records.len(),
                event: *p,
                gaussian: self.clone(),
            },
            records,
        })
    }

    /// k-sigma bound of the transformed event, projected onto the x-y plane.
    ///
    /// Linearizes `xi -> act(perturbed(xi), p)` at `xi = 0` with central
    /// differences (step 1e-6), forms `P = H Sigma H^T`, and traces the
    /// k-sigma level set of the 2x2 Gaussian as a closed polyline. The
    /// Monte Carlo containment tests quantify the linearization error this
    /// choice introduces.
    pub fn sigma_ellipse_xy(&self, p: &Event, k: f64) -> Result<EllipseProjection, Error> {
        assert!(k > 0.0, "sigma multiplier must be positive");
        let mut h = nalgebra::SMatrix::<f64, 2, 10>::zeros();
        for j in 0..10 {
            let mut step = Vec10::zeros();
            step[j] = JACOBIAN_STEP;
            let plus = self
                .apply_perturbation(&TangentVector::from_vector(&step))
                .act(p);
            let minus = self
                .apply_perturbation(&TangentVector::from_vector(&(-step)))
                .act(p);
            h[(0, j)] = (plus.x.x - minus.x.x) / (2.0 * JACOBIAN_STEP);
            h[(1, j)] = (plus.x.y - minus.x.y) / (2.0 * JACOBIAN_STEP);
        }
        let projected = h * self.covariance * h.transpose();
        let eig = projected.symmetric_eigen();
        let min_eig = eig.eigenvalues.min();
        if min_eig < PSD_EIGENVALUE_TOL {
            return Err(Error::DegenerateCovariance {
                eigenvalue: min_eig,
            });
        }
        let center_event = self.apply_perturbation(&TangentVector::zero()).act(p);
        let center = Vector2::new(center_event.x.x, center_event.x.y);
        // 2x2 map from the unit circle onto the k-sigma level set.
        let mut axes = eig.eigenvectors;
        for j in 0..2 {
            axes.column_mut(j)
                .scale_mut(k * eig.eigenvalues[j].max(0.0).sqrt());
        }
        let mut polyline = Vec::with_capacity(ELLIPSE_SEGMENTS + 1);
        for i in 0..ELLIPSE_SEGMENTS {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / ELLIPSE_SEGMENTS as f64;
            polyline.push(center + axes * Vector2::new(angle.cos(), angle.sin()));
        }
        polyline.push(polyline[0]);
        Ok(EllipseProjection { center, polyline })
    }
}

/// One transformed event plus the tangent draw that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloudRecord {
    pub event_out: Event,
    pub xi: TangentVector,
}

/// Provenance of a sample cloud; written into the CSV header.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudMeta {
    pub seed: u64,
    pub count: usize,
    pub event: Event,
    pub gaussian: GroupGaussian,
}

/// Monte Carlo event cloud with full provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCloud {
    pub meta: CloudMeta,
    pub records: Vec<CloudRecord>,
}

/// Projected k-sigma bound in the x-y plane as a closed polyline
/// (first point repeated at the end, 64+ points).
#[derive(Debug, Clone, PartialEq)]
pub struct EllipseProjection {
    pub center: Vector2<f64>,
    pub polyline: Vec<Vector2<f64>>,
}

/// Empirical second moment `mean(xi xi^T)` of the tangent residuals
/// `xi = log(mean^{-1} F)` (right) or `xi = log(F mean^{-1})` (left).
pub fn estimate_covariance(
    samples: &[GalileanTransform],
    mean: &GalileanTransform,
    side: PerturbationSide,
) -> Result<Mat10, Error> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let mean_inv = mean.inverse();
    let mut sum = Mat10::zeros();
    for f in samples {
        let residual = match side {
            PerturbationSide::Right => mean_inv.compose(f),
            PerturbationSide::Left => f.compose(&mean_inv),
        };
        let xi = residual.log()?.as_vector();
        sum += xi * xi.transpose();
    }
    Ok(sum / samples.len() as f64)
}
