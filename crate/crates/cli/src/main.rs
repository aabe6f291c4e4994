//! `sgal3` — command-line front-end for the Galilean group library.
//!
//! Subcommands: `exp` and `log` evaluate the group maps on JSON records,
//! `banana` runs the event-cloud uncertainty experiment and writes CSV,
//! `preintegrate` folds an IMU CSV log into a single pose delta, and
//! `selfcheck` replays the oracle suite.
//!
//! Exit codes: 0 ok, 1 selfcheck failure, 2 parse/config error, 3 domain
//! error (logarithm branch), 4 I/O error, 5 data-ordering error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sgal3::io::{
    self, parse_transform_record, to_json_string, ExperimentConfig, FormatError, Panel,
    TangentBody, TransformBody, TransformRecord, FORMAT_VERSION,
};
use sgal3::{Error, GalileanTransform};

const EXIT_SELFCHECK: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;
const EXIT_ORDERING: u8 = 5;

#[derive(Parser)]
#[command(
    name = "sgal3",
    version,
    about = "Galilean group toolkit: exp/log maps, spatiotemporal uncertainty experiments, IMU preintegration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponential map: tangent JSON record {"xi": [10]} -> transform record
    Exp {
        /// Input file; stdin when omitted
        input: Option<PathBuf>,
    },
    /// Logarithmic map: transform JSON record {"C","v","r","tau"} -> tangent record
    Log {
        /// Input file; stdin when omitted
        input: Option<PathBuf>,
    },
    /// Sample an event cloud and its 3-sigma ellipse; writes cloud.csv and
    /// ellipse3sigma.csv
    Banana(BananaArgs),
    /// Integrate an IMU CSV log (header t,wx,wy,wz,ax,ay,az) into one delta
    Preintegrate {
        /// IMU log path
        imu: PathBuf,
    },
    /// Run the oracle checks against the closed forms
    Selfcheck,
}

#[derive(Args)]
struct BananaArgs {
    #[command(flatten)]
    source: ExperimentSource,
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
    /// Override the sample count
    #[arg(long)]
    n: Option<usize>,
    /// Override the RNG seed
    #[arg(long)]
    seed: Option<u64>,
}

/// Exactly one of the two experiment sources must be given.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ExperimentSource {
    /// Built-in panel preset
    #[arg(long, value_enum)]
    panel: Option<PanelArg>,
    /// Experiment config JSON
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelArg {
    Left,
    Middle,
    Right,
}

impl From<PanelArg> for Panel {
    fn from(p: PanelArg) -> Panel {
        match p {
            PanelArg::Left => Panel::Left,
            PanelArg::Middle => Panel::Middle,
            PanelArg::Right => Panel::Right,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        let code = match &e {
            FormatError::Io(_) => EXIT_IO,
            FormatError::NonMonotoneTime { .. } => EXIT_ORDERING,
            _ => EXIT_PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

fn domain_failure(e: Error) -> Failure {
    Failure::new(EXIT_DOMAIN, e.to_string())
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::new(EXIT_IO, format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn cmd_exp(input: &Option<PathBuf>) -> Result<(), Failure> {
    let text = read_input(input)?;
    let record = parse_transform_record(&text)?;
    let tangent = match record {
        TransformRecord::Tangent(body) => body.to_tangent()?,
        TransformRecord::Transform(_) => {
            return Err(Failure::new(
                EXIT_PARSE,
                "exp expects a tangent record with field 'xi'",
            ))
        }
    };
    let transform = GalileanTransform::exp(&tangent);
    println!(
        "{}",
        to_json_string(&TransformBody::from_transform(&transform))
    );
    Ok(())
}

fn cmd_log(input: &Option<PathBuf>) -> Result<(), Failure> {
    let text = read_input(input)?;
    let record = parse_transform_record(&text)?;
    let transform = match record {
        TransformRecord::Transform(body) => body.to_transform()?,
        TransformRecord::Tangent(_) => {
            return Err(Failure::new(
                EXIT_PARSE,
                "log expects a transform record with fields 'C','v','r','tau'",
            ))
        }
    };
    let tangent = transform.log().map_err(domain_failure)?;
    println!("{}", to_json_string(&TangentBody::from_tangent(&tangent)));
    Ok(())
}

fn cmd_banana(args: &BananaArgs) -> Result<(), Failure> {
    let mut config = match (&args.source.panel, &args.source.config) {
        (Some(panel), None) => ExperimentConfig::panel((*panel).into()),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display()))
            })?;
            ExperimentConfig::parse(&text)?
        }
        // clap's arg group enforces exactly one source
        _ => unreachable!("clap enforces exactly one of --panel/--config"),
    };
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let (gaussian, event) = config.build()?;
    let cloud = gaussian
        .transform_event_cloud(&event, config.n, config.seed)
        .map_err(domain_failure)?;
    let ellipse = gaussian
        .sigma_ellipse_xy(&event, 3.0)
        .map_err(domain_failure)?;

    fs::create_dir_all(&args.out).map_err(|e| {
        Failure::new(
            EXIT_IO,
            format!("cannot create {}: {e}", args.out.display()),
        )
    })?;
    write_file(&args.out.join("cloud.csv"), |w| {
        io::write_sample_cloud(w, &cloud)
    })?;
    write_file(&args.out.join("ellipse3sigma.csv"), |w| {
        io::write_ellipse(w, &ellipse, 3.0)
    })?;
    eprintln!(
        "wrote {} and {} ({} samples, seed {})",
        args.out.join("cloud.csv").display(),
        args.out.join("ellipse3sigma.csv").display(),
        config.n,
        config.seed
    );
    Ok(())
}

fn write_file(
    path: &Path,
    write: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> Result<(), FormatError>,
) -> Result<(), Failure> {
    let file = fs::File::create(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    write(&mut w)?;
    w.flush()
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))?;
    Ok(())
}

fn cmd_preintegrate(imu: &Path) -> Result<(), Failure> {
    let file = fs::File::open(imu)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", imu.display())))?;
    let rows = io::read_imu_csv(std::io::BufReader::new(file))?;
    let samples = io::rows_to_samples(&rows);
    let result = sgal3::preintegration::preintegrate_sequence(&samples).map_err(domain_failure)?;

    #[derive(serde::Serialize)]
    struct Output {
        format_version: u64,
        delta: TransformBody,
        total_time: f64,
        sample_count: usize,
    }
    let mut delta = TransformBody::from_transform(&result.delta);
    delta.format_version = None;
    println!(
        "{}",
        to_json_string(&Output {
            format_version: FORMAT_VERSION,
            delta,
            total_time: result.total_time,
            sample_count: result.sample_count,
        })
    );
    Ok(())
}

fn cmd_selfcheck() -> Result<(), Failure> {
    let start = std::time::Instant::now();
    let checks = sgal3::selfcheck::run();
    let name_width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut failures = 0;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!(
            "[{status}] {:<name_width$}  {}  ({:.2} s)",
            c.name, c.detail, c.seconds
        );
        if !c.passed {
            failures += 1;
        }
    }
    let total = start.elapsed().as_secs_f64();
    if failures == 0 {
        println!("all {} checks passed in {total:.2} s", checks.len());
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_SELFCHECK,
            format!("{failures} of {} checks failed", checks.len()),
        ))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exp { input } => cmd_exp(input),
        Command::Log { input } => cmd_log(input),
        Command::Banana(args) => cmd_banana(args),
        Command::Preintegrate { imu } => cmd_preintegrate(imu),
        Command::Selfcheck => cmd_selfcheck(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
