//! Wire formats: JSON records for transforms and experiment configs, CSV
//! for sample clouds, sigma ellipses, and IMU logs.
//!
//! Every format carries `format_version: 1` (a JSON field or a `#`-prefixed
//! header line); unknown versions are rejected. All numeric output is
//! printed with 17 significant digits so parsing it back is lossless.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::galilean::{Event, GalileanTransform, TangentVector};
use crate::so3::RotationMatrix;
use crate::uncertainty::{
    CloudMeta, CloudRecord, EllipseProjection, GroupGaussian, PerturbationSide, SampleCloud,
};
use crate::{Mat10, Mat3, Vec10, Vec3};

pub const FORMAT_VERSION: u64 = 1;

const CLOUD_HEADER: &str = "x,y,z,t_out,xi_0,xi_1,xi_2,xi_3,xi_4,xi_5,xi_6,xi_7,xi_8,xi_9";
const ELLIPSE_HEADER: &str = "x,y";
const IMU_HEADER: &str = "t,wx,wy,wz,ax,ay,az";

/// Errors from parsing or writing the wire formats.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Parse(String),

    #[error("unsupported format_version {got} (expected {expected})")]
    UnsupportedVersion { got: u64, expected: u64 },

    #[error("timestamps must be strictly increasing: row {row} has t = {next} after t = {prev}")]
    NonMonotoneTime { row: usize, prev: f64, next: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse(e.to_string())
    }
}

fn check_version(v: Option<u64>) -> Result<(), FormatError> {
    match v {
        None | Some(FORMAT_VERSION) => Ok(()),
        Some(got) => Err(FormatError::UnsupportedVersion {
            got,
            expected: FORMAT_VERSION,
        }),
    }
}

/// One f64 with 17 significant digits; round-trips losslessly.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

struct Precise17;

impl serde_json::ser::Formatter for Precise17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Compact JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise17);
    value
        .serialize(&mut ser)
        .expect("serialization of wire records cannot fail");
    String::from_utf8(out).expect("JSON is UTF-8")
}

// ---------------------------------------------------------------------------
// transform / tangent records

/// Flat transform record: rotation row-major, then velocity, position, tau.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u64>,
    #[serde(rename = "C")]
    pub c: [f64; 9],
    pub v: [f64; 3],
    pub r: [f64; 3],
    pub tau: f64,
}

impl TransformBody {
    pub fn from_transform(f: &GalileanTransform) -> Self {
        let m = f.rotation.matrix();
        let mut c = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                c[3 * i + j] = m[(i, j)];
            }
        }
        TransformBody {
            format_version: Some(FORMAT_VERSION),
            c,
            v: f.velocity.into(),
            r: f.position.into(),
            tau: f.tau,
        }
    }

    pub fn to_transform(&self) -> Result<GalileanTransform, FormatError> {
        check_version(self.format_version)?;
        let all = self
            .c
            .iter()
            .chain(self.v.iter())
            .chain(self.r.iter())
            .chain(std::iter::once(&self.tau));
        if !all.clone().all(|x| x.is_finite()) {
            return Err(FormatError::Parse(
                "transform record contains non-finite values".into(),
            ));
        }
        let m = Mat3::new(
            self.c[0], self.c[1], self.c[2], //
            self.c[3], self.c[4], self.c[5], //
            self.c[6], self.c[7], self.c[8],
        );
        let rotation = RotationMatrix::try_new(m)
            .map_err(|e| FormatError::Parse(format!("field 'C': {e}")))?;
        Ok(GalileanTransform {
            rotation,
            velocity: Vec3::from(self.v),
            position: Vec3::from(self.r),
            tau: self.tau,
        })
    }
}

/// Flat tangent record: 10 coordinates in `(rho, nu, phi, iota)` order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentBody {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u64>,
    pub xi: [f64; 10],
}

impl TangentBody {
    pub fn from_tangent(xi: &TangentVector) -> Self {
        TangentBody {
            format_version: Some(FORMAT_VERSION),
            xi: xi.as_vector().into(),
        }
    }

    pub fn to_tangent(&self) -> Result<TangentVector, FormatError> {
        check_version(self.format_version)?;
        if !self.xi.iter().all(|x| x.is_finite()) {
            return Err(FormatError::Parse(
                "field 'xi': contains non-finite values".into(),
            ));
        }
        Ok(TangentVector::from_vector(&Vec10::from(self.xi)))
    }
}

/// Either shape of the transform wire record.
#[derive(Debug, Clone)]
pub enum TransformRecord {
    Transform(TransformBody),
    Tangent(TangentBody),
}

fn parse_f64_array<const N: usize>(
    value: &serde_json::Value,
    field: &str,
) -> Result<[f64; N], FormatError> {
    let arr = value.as_array().ok_or_else(|| {
        FormatError::Parse(format!("field '{field}': expected an array of {N} numbers"))
    })?;
    if arr.len() != N {
        return Err(FormatError::Parse(format!(
            "field '{field}': expected {N} numbers, got {}",
            arr.len()
        )));
    }
    let mut out = [0.0; N];
    for (i, x) in arr.iter().enumerate() {
        out[i] = x.as_f64().ok_or_else(|| {
            FormatError::Parse(format!("field '{field}': element {i} is not a number"))
        })?;
    }
    Ok(out)
}

/// Parse a JSON object holding either `{C, v, r, tau}` or `{xi}`, naming
/// the offending field on every failure.
pub fn parse_transform_record(json: &str) -> Result<TransformRecord, FormatError> {
    let value: serde_json::Value = serde_json::from_str(json)?;
    let obj = value.as_object().ok_or_else(|| {
        FormatError::Parse(
            "expected a JSON object with field 'xi' or fields 'C','v','r','tau'".into(),
        )
    })?;
    let format_version = match obj.get("format_version") {
        None => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| {
            FormatError::Parse("field 'format_version': expected an unsigned integer".into())
        })?),
    };
    let is_tangent = match (obj.contains_key("xi"), obj.contains_key("C")) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => {
            return Err(FormatError::Parse(
                "record must hold either field 'xi' or field 'C', not both".into(),
            ))
        }
        (false, false) => {
            return Err(FormatError::Parse(
                "record must hold field 'xi' or fields 'C','v','r','tau'".into(),
            ))
        }
    };
    let known: &[&str] = if is_tangent {
        &["format_version", "xi"]
    } else {
        &["format_version", "C", "v", "r", "tau"]
    };
    for key in obj.keys() {
        if !known.contains(&key.as_str()) {
            return Err(FormatError::Parse(format!("unknown field '{key}'")));
        }
    }
    let require = |field: &str| {
        obj.get(field)
            .ok_or_else(|| FormatError::Parse(format!("missing field '{field}'")))
    };
    if is_tangent {
        Ok(TransformRecord::Tangent(TangentBody {
            format_version,
            xi: parse_f64_array::<10>(require("xi")?, "xi")?,
        }))
    } else {
        Ok(TransformRecord::Transform(TransformBody {
            format_version,
            c: parse_f64_array::<9>(require("C")?, "C")?,
            v: parse_f64_array::<3>(require("v")?, "v")?,
            r: parse_f64_array::<3>(require("r")?, "r")?,
            tau: require("tau")?
                .as_f64()
                .ok_or_else(|| FormatError::Parse("field 'tau': expected a number".into()))?,
        }))
    }
}

// ---------------------------------------------------------------------------
// experiment config

/// Covariance input: a full row-major 10x10, or `{tangent index: sigma}`
/// building a diagonal from standard deviations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CovarianceSpec {
    Full(Vec<f64>),
    DiagonalSigma(BTreeMap<String, f64>),
}

impl CovarianceSpec {
    pub fn to_matrix(&self) -> Result<Mat10, FormatError> {
        match self {
            CovarianceSpec::Full(values) => {
                if values.len() != 100 {
                    return Err(FormatError::Parse(format!(
                        "field 'covariance': expected 100 row-major entries, got {}",
                        values.len()
                    )));
                }
                Ok(Mat10::from_row_slice(values))
            }
            CovarianceSpec::DiagonalSigma(map) => {
                let mut m = Mat10::zeros();
                for (key, sigma) in map {
                    let index: usize = key.parse().map_err(|_| {
                        FormatError::Parse(format!(
                            "field 'covariance': key '{key}' is not a tangent index 0..=9"
                        ))
                    })?;
                    if index > 9 {
                        return Err(FormatError::Parse(format!(
                            "field 'covariance': index {index} out of range 0..=9"
                        )));
                    }
                    if !(sigma.is_finite() && *sigma >= 0.0) {
                        return Err(FormatError::Parse(format!(
                            "field 'covariance': sigma for index {index} must be finite and >= 0, got {sigma}"
                        )));
                    }
                    m[(index, index)] = sigma * sigma;
                }
                Ok(m)
            }
        }
    }

    pub fn full(m: &Mat10) -> Self {
        CovarianceSpec::Full(m.transpose().as_slice().to_vec())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventBody {
    pub x: [f64; 3],
    pub t: f64,
}

impl EventBody {
    pub fn from_event(p: &Event) -> Self {
        EventBody {
            x: p.x.into(),
            t: p.t,
        }
    }

    pub fn to_event(&self) -> Result<Event, FormatError> {
        if !(self.x.iter().all(|v| v.is_finite()) && self.t.is_finite()) {
            return Err(FormatError::Parse(
                "field 'event': contains non-finite values".into(),
            ));
        }
        Ok(Event::new(Vec3::from(self.x), self.t))
    }
}

/// Built-in parameter sets for the three uncertainty-experiment panels.
///
/// All share a mean moving at 2 m per unit time along x and the event
/// `x = (8, 0, 0), t = 1`, right-side perturbed with 0.4 m of x-translation
/// noise and 0.25 rad of z-rotation noise; `Middle` adds 0.15 of time noise
/// and `Right` 0.5. These magnitudes are artifact defaults, recorded in the
/// output metadata and overridable via a config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Panel {
    Left,
    Middle,
    Right,
}

/// Full description of one event-cloud experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_version: Option<u64>,
    pub mean: TransformBody,
    pub covariance: CovarianceSpec,
    pub event: EventBody,
    pub n: usize,
    pub seed: u64,
    pub side: PerturbationSide,
}

impl ExperimentConfig {
    pub fn panel(panel: Panel) -> Self {
        let mut sigmas = BTreeMap::new();
        sigmas.insert("0".to_string(), 0.4); // rho_x
        sigmas.insert("8".to_string(), 0.25); // phi_z
        match panel {
            Panel::Left => {}
            Panel::Middle => {
                sigmas.insert("9".to_string(), 0.15); // iota
            }
            Panel::Right => {
                sigmas.insert("9".to_string(), 0.5);
            }
        }
        let mean = GalileanTransform::new(
            RotationMatrix::identity(),
            Vec3::new(2.0, 0.0, 0.0),
            Vec3::zeros(),
            0.0,
        );
        ExperimentConfig {
            format_version: Some(FORMAT_VERSION),
            mean: TransformBody {
                format_version: None,
                ..TransformBody::from_transform(&mean)
            },
            covariance: CovarianceSpec::DiagonalSigma(sigmas),
            event: EventBody {
                x: [8.0, 0.0, 0.0],
                t: 1.0,
            },
            n: 1000,
            seed: 42,
            side: PerturbationSide::Right,
        }
    }

    pub fn parse(json: &str) -> Result<Self, FormatError> {
        let config: ExperimentConfig = serde_json::from_str(json)?;
        check_version(config.format_version)?;
        Ok(config)
    }

    /// Validate and lower to the math-layer types.
    pub fn build(&self) -> Result<(GroupGaussian, Event), FormatError> {
        check_version(self.format_version)?;
        if self.n < 1 {
            return Err(FormatError::Parse("field 'n': must be >= 1".into()));
        }
        let mean = self
            .mean
            .to_transform()
            .map_err(|e| FormatError::Parse(format!("field 'mean': {e}")))?;
        let covariance = self.covariance.to_matrix()?;
        let gaussian = GroupGaussian::new(mean, covariance, self.side)
            .map_err(|e| FormatError::Parse(format!("field 'covariance': {e}")))?;
        Ok((gaussian, self.event.to_event()?))
    }
}

// ---------------------------------------------------------------------------
// gaussian metadata record

/// Serialized form of a [`GroupGaussian`], used in cloud metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRecord {
    pub mean: TransformBody,
    /// Row-major 10x10, 100 entries.
    pub covariance: Vec<f64>,
    pub side: PerturbationSide,
}

impl GaussianRecord {
    pub fn from_gaussian(g: &GroupGaussian) -> Self {
        GaussianRecord {
            mean: TransformBody {
                format_version: None,
                ..TransformBody::from_transform(g.mean())
            },
            covariance: g.covariance().transpose().as_slice().to_vec(),
            side: g.side(),
        }
    }

    pub fn to_gaussian(&self) -> Result<GroupGaussian, FormatError> {
        let mean = self.mean.to_transform()?;
        if self.covariance.len() != 100 {
            return Err(FormatError::Parse(format!(
                "field 'covariance': expected 100 entries, got {}",
                self.covariance.len()
            )));
        }
        GroupGaussian::new(mean, Mat10::from_row_slice(&self.covariance), self.side)
            .map_err(|e| FormatError::Parse(format!("field 'covariance': {e}")))
    }
}

// ---------------------------------------------------------------------------
// sample-cloud CSV

/// Write a cloud as CSV: `#`-prefixed provenance lines, a fixed header, one
/// row per sample.
pub fn write_sample_cloud<W: Write>(w: &mut W, cloud: &SampleCloud) -> Result<(), FormatError> {
    writeln!(w, "# format_version: {FORMAT_VERSION}")?;
    writeln!(w, "# seed: {}", cloud.meta.seed)?;
    writeln!(w, "# n: {}", cloud.meta.count)?;
    writeln!(
        w,
        "# event: {}",
        to_json_string(&EventBody::from_event(&cloud.meta.event))
    )?;
    writeln!(
        w,
        "# gaussian: {}",
        to_json_string(&GaussianRecord::from_gaussian(&cloud.meta.gaussian))
    )?;
    writeln!(w, "{CLOUD_HEADER}")?;
    for rec in &cloud.records {
        let mut cells = Vec::with_capacity(14);
        cells.push(fmt_f64(rec.event_out.x.x));
        cells.push(fmt_f64(rec.event_out.x.y));
        cells.push(fmt_f64(rec.event_out.x.z));
        cells.push(fmt_f64(rec.event_out.t));
        let xi = rec.xi.as_vector();
        for i in 0..10 {
            cells.push(fmt_f64(xi[i]));
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn split_metadata(line: &str) -> Option<(&str, &str)> {
    let body = line.strip_prefix('#')?.trim_start();
    let (key, value) = body.split_once(':')?;
    Some((key.trim(), value.trim()))
}

fn parse_cell(cell: &str, row: usize, what: &str) -> Result<f64, FormatError> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| FormatError::Parse(format!("row {row}: cannot parse {what} from '{cell}'")))
}

/// Read back a cloud CSV produced by [`write_sample_cloud`].
pub fn read_sample_cloud<R: BufRead>(r: R) -> Result<SampleCloud, FormatError> {
    let mut meta: BTreeMap<String, String> = BTreeMap::new();
    let mut lines = r.lines();
    let header_seen = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                let trimmed = line.trim_end();
                if trimmed.starts_with('#') {
                    if let Some((k, v)) = split_metadata(trimmed) {
                        meta.insert(k.to_string(), v.to_string());
                    }
                } else if trimmed.is_empty() {
                    continue;
                } else {
                    break trimmed == CLOUD_HEADER;
                }
            }
            None => break false,
        }
    };
    if !header_seen {
        return Err(FormatError::Parse(format!(
            "expected cloud header '{CLOUD_HEADER}'"
        )));
    }
    let version: u64 = meta
        .get("format_version")
        .ok_or_else(|| FormatError::Parse("missing '# format_version' line".into()))?
        .parse()
        .map_err(|_| FormatError::Parse("cannot parse format_version".into()))?;
    check_version(Some(version))?;
    let seed: u64 = meta
        .get("seed")
        .ok_or_else(|| FormatError::Parse("missing '# seed' line".into()))?
        .parse()
        .map_err(|_| FormatError::Parse("cannot parse seed".into()))?;
    let event: EventBody = serde_json::from_str(
        meta.get("event")
            .ok_or_else(|| FormatError::Parse("missing '# event' line".into()))?,
    )?;
    let gaussian: GaussianRecord = serde_json::from_str(
        meta.get("gaussian")
            .ok_or_else(|| FormatError::Parse("missing '# gaussian' line".into()))?,
    )?;

    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').collect();
        if cells.len() != 14 {
            return Err(FormatError::Parse(format!(
                "row {}: expected 14 cells, got {}",
                i + 1,
                cells.len()
            )));
        }
        let mut values = [0.0; 14];
        for (j, cell) in cells.iter().enumerate() {
            values[j] = parse_cell(cell, i + 1, "a number")?;
        }
        let mut xi = Vec10::zeros();
        for j in 0..10 {
            xi[j] = values[4 + j];
        }
        records.push(CloudRecord {
            event_out: Event::new(Vec3::new(values[0], values[1], values[2]), values[3]),
            xi: TangentVector::from_vector(&xi),
        });
    }
    Ok(SampleCloud {
        meta: CloudMeta {
            seed,
            count: records.len(),
            event: event.to_event()?,
            gaussian: gaussian.to_gaussian()?,
        },
        records,
    })
}

// ---------------------------------------------------------------------------
// ellipse CSV

/// Write a sigma-ellipse polyline as CSV.
pub fn write_ellipse<W: Write>(
    w: &mut W,
    ellipse: &EllipseProjection,
    k: f64,
) -> Result<(), FormatError> {
    writeln!(w, "# format_version: {FORMAT_VERSION}")?;
    writeln!(w, "# k: {}", fmt_f64(k))?;
    writeln!(
        w,
        "# center: [{},{}]",
        fmt_f64(ellipse.center.x),
        fmt_f64(ellipse.center.y)
    )?;
    writeln!(w, "{ELLIPSE_HEADER}")?;
    for p in &ellipse.polyline {
        writeln!(w, "{},{}", fmt_f64(p.x), fmt_f64(p.y))?;
    }
    Ok(())
}

/// Read back an ellipse CSV; returns the ellipse and the k it was drawn at.
pub fn read_ellipse<R: BufRead>(r: R) -> Result<(EllipseProjection, f64), FormatError> {
    let mut meta: BTreeMap<String, String> = BTreeMap::new();
    let mut lines = r.lines();
    let header_seen = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                let trimmed = line.trim_end();
                if trimmed.starts_with('#') {
                    if let Some((k, v)) = split_metadata(trimmed) {
                        meta.insert(k.to_string(), v.to_string());
                    }
                } else if trimmed.is_empty() {
                    continue;
                } else {
                    break trimmed == ELLIPSE_HEADER;
                }
            }
            None => break false,
        }
    };
    if !header_seen {
        return Err(FormatError::Parse(format!(
            "expected ellipse header '{ELLIPSE_HEADER}'"
        )));
    }
    let version: u64 = meta
        .get("format_version")
        .ok_or_else(|| FormatError::Parse("missing '# format_version' line".into()))?
        .parse()
        .map_err(|_| FormatError::Parse("cannot parse format_version".into()))?;
    check_version(Some(version))?;
    let k: f64 = meta
        .get("k")
        .ok_or_else(|| FormatError::Parse("missing '# k' line".into()))?
        .parse()
        .map_err(|_| FormatError::Parse("cannot parse k".into()))?;
    let center: [f64; 2] = serde_json::from_str(
        meta.get("center")
            .ok_or_else(|| FormatError::Parse("missing '# center' line".into()))?,
    )?;
    let mut polyline = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').collect();
        if cells.len() != 2 {
            return Err(FormatError::Parse(format!(
                "row {}: expected 2 cells, got {}",
                i + 1,
                cells.len()
            )));
        }
        polyline.push(nalgebra::Vector2::new(
            parse_cell(cells[0], i + 1, "x")?,
            parse_cell(cells[1], i + 1, "y")?,
        ));
    }
    Ok((
        EllipseProjection {
            center: nalgebra::Vector2::new(center[0], center[1]),
            polyline,
        },
        k,
    ))
}

// ---------------------------------------------------------------------------
// IMU CSV

/// Read a time-stamped IMU log.
///
/// Format: optional `#` comment lines (a `# format_version:` line, when
/// present, must say 1), the exact header `t,wx,wy,wz,ax,ay,az`, then
/// time-sorted rows. Rates are held zero-order: row `i` applies over
/// `[t_i, t_{i+1})`, so the last row only closes the final interval and at
/// least two rows are required. Non-monotone timestamps are rejected.
pub fn read_imu_csv<R: BufRead>(r: R) -> Result<Vec<ImuRow>, FormatError> {
    let mut lines = r.lines();
    let header_seen = loop {
        match lines.next() {
            Some(line) => {
                let line = line?;
                let trimmed = line.trim_end();
                if trimmed.starts_with('#') {
                    if let Some(("format_version", v)) = split_metadata(trimmed) {
                        let version: u64 = v.parse().map_err(|_| {
                            FormatError::Parse("cannot parse format_version".into())
                        })?;
                        check_version(Some(version))?;
                    }
                } else if trimmed.is_empty() {
                    continue;
                } else {
                    break trimmed == IMU_HEADER;
                }
            }
            None => break false,
        }
    };
    if !header_seen {
        return Err(FormatError::Parse(format!(
            "expected IMU header '{IMU_HEADER}'"
        )));
    }
    let mut rows: Vec<ImuRow> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').collect();
        if cells.len() != 7 {
            return Err(FormatError::Parse(format!(
                "row {}: expected 7 cells, got {}",
                i + 1,
                cells.len()
            )));
        }
        let mut values = [0.0; 7];
        for (j, cell) in cells.iter().enumerate() {
            values[j] = parse_cell(cell, i + 1, "a number")?;
            if !values[j].is_finite() {
                return Err(FormatError::Parse(format!(
                    "row {}: non-finite value '{cell}'",
                    i + 1
                )));
            }
        }
        rows.push(ImuRow {
            t: values[0],
            omega: Vec3::new(values[1], values[2], values[3]),
            a: Vec3::new(values[4], values[5], values[6]),
        });
    }
    if rows.is_empty() {
        return Err(FormatError::Parse("no data rows after the header".into()));
    }
    if rows.len() < 2 {
        return Err(FormatError::Parse(
            "need at least two rows to form an integration interval".into(),
        ));
    }
    for i in 1..rows.len() {
        if rows[i].t <= rows[i - 1].t {
            return Err(FormatError::NonMonotoneTime {
                row: i + 1,
                prev: rows[i - 1].t,
                next: rows[i].t,
            });
        }
    }
    Ok(rows)
}

/// One parsed IMU CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImuRow {
    pub t: f64,
    pub omega: Vec3,
    pub a: Vec3,
}

/// Convert time-stamped rows into interval samples (zero-order hold).
pub fn rows_to_samples(rows: &[ImuRow]) -> Vec<crate::preintegration::ImuSample> {
    rows.windows(2)
        .map(|pair| crate::preintegration::ImuSample {
            omega: pair[0].omega,
            a: pair[0].a,
            dt: pair[1].t - pair[0].t,
        })
        .collect()
}

// ---------------------------------------------------------------------------

/// Map a math-layer error onto the wire-format error space, preserving the
/// message.
impl From<Error> for FormatError {
    fn from(e: Error) -> Self {
        FormatError::Parse(e.to_string())
    }
}
