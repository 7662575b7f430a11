//! Batch front end for `flybot-core`.
//!
//! Every subcommand prints one compact JSON document on stdout and
//! diagnostics on stderr. Exit codes: 0 success, 1 domain error, 2 usage or
//! input decoding error. Output files are written only after the whole computation has
//! succeeded.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand};
use serde_json::{json, Value};

use flybot_core::flight::{
    self, simulate_hover, thrust_per_rotor, trace_csv, FlightError, SimConfig, SimSummary,
    ThrustSpec, DEFAULT_SAFETY_FACTOR,
};
use flybot_core::fuzzy::{DosingController, FuzzyError};
use flybot_core::neural::{Activation, Mlp};
use flybot_core::raster::{histogram, parse_pnm, to_grayscale, write_pnm, Image};
use flybot_core::sidewalk::{inspect, InspectConfig};
use flybot_core::vision::{
    green_density, hough_circles, hough_lines, otsu_threshold, radiance_to_temperature,
    temperature_to_radiance, DEFAULT_EXG_THRESHOLD,
};

/// Default vote floor for both Hough detectors.
pub const DEFAULT_MIN_VOTES: u32 = 10;
/// Finite-difference step used by `nn-demo --gradient-check`.
pub const GRADIENT_CHECK_EPSILON: f64 = 1e-5;
/// Number of synthetic inputs fed to `nn-demo --diagnose`.
const DIAGNOSE_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "flybot",
    version,
    about = "Inspection and spraying multirotor toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Otsu threshold of a grayscale image
    Otsu {
        input: PathBuf,
        /// Write the binary mask (255 above the threshold) as PGM
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fraction of vegetation pixels by excess-green index
    GreenDensity {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXG_THRESHOLD, allow_hyphen_values = true)]
        threshold: i32,
        /// Write the vegetation mask as PGM
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Pesticide dose for an RGB field image
    Dose {
        input: PathBuf,
        /// Fuzzy system JSON replacing the built-in dosing rules
        #[arg(long)]
        system: Option<PathBuf>,
    },
    /// Hough line detection on an edge map (nonzero pixels are edges)
    DetectLines {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        theta_step: u32,
        #[arg(long, default_value_t = DEFAULT_MIN_VOTES)]
        min_votes: u32,
    },
    /// Hough circle detection on an edge map (nonzero pixels are edges)
    DetectCircles {
        input: PathBuf,
        #[arg(long)]
        r_min: usize,
        #[arg(long)]
        r_max: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_VOTES)]
        min_votes: u32,
    },
    /// Curb-paint inspection of a sidewalk image
    InspectSidewalk {
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, default_value_t = 16)]
        block: usize,
        /// Write the input with flagged blocks outlined, as PGM
        #[arg(long)]
        overlay: Option<PathBuf>,
        /// Also write the JSON report to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Blackbody conversion between radiant exitance and temperature
    Thermal(ThermalArgs),
    /// Per-rotor thrust from a mass table
    Thrust {
        #[arg(long)]
        mass_table: PathBuf,
        #[arg(long)]
        rotors: u32,
        #[arg(long, default_value_t = DEFAULT_SAFETY_FACTOR, allow_hyphen_values = true)]
        safety: f64,
    },
    /// Hover simulation with a moving arm
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write the full state trace as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Small-network gradient diagnostics
    NnDemo(NnDemoArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("direction").required(true).args(["to_temp", "to_radiance"])))]
struct ThermalArgs {
    /// Radiant exitance in W/m^2
    #[arg(long, allow_hyphen_values = true)]
    to_temp: Option<f64>,
    /// Temperature in kelvin
    #[arg(long, allow_hyphen_values = true)]
    to_radiance: Option<f64>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["gradient_check", "diagnose"])))]
struct NnDemoArgs {
    #[arg(long)]
    gradient_check: bool,
    #[arg(long)]
    diagnose: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,3,1")]
    layers: Vec<usize>,
    #[arg(long, value_enum, default_value_t = ActivationArg::Sigmoid)]
    activation: ActivationArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum ActivationArg {
    Sigmoid,
    Relu,
    Leaky,
}

impl ActivationArg {
    fn activation(self) -> Activation {
        match self {
            ActivationArg::Sigmoid => Activation::Sigmoid,
            ActivationArg::Relu => Activation::Relu,
            ActivationArg::Leaky => Activation::leaky(),
        }
    }
}

/// Why a command failed; decides the exit code.
#[derive(Debug)]
enum Failure {
    /// Unreadable or undecodable input (exit 2).
    Input(String),
    /// Valid input the computation rejects (exit 1).
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

fn domain<E: fmt::Debug + fmt::Display>(e: E) -> Failure {
    Failure::Domain(describe(&e))
}

/// `Variant: message`, so scripts can match on the error class.
fn describe<E: fmt::Debug + fmt::Display>(e: &E) -> String {
    let debug = format!("{e:?}");
    let end = debug
        .find(|c: char| !c.is_alphanumeric() && c != '_')
        .unwrap_or(debug.len());
    format!("{}: {e}", &debug[..end])
}

/// A computed result: the stdout document plus files to write afterwards.
struct Outcome {
    stdout: String,
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outcome {
    fn json(value: Value) -> Self {
        let mut stdout = serde_json::to_string(&value).expect("json values serialize");
        stdout.push('\n');
        Self {
            stdout,
            files: Vec::new(),
        }
    }

    fn with_file(mut self, path: Option<PathBuf>, bytes: impl FnOnce() -> Vec<u8>) -> Self {
        if let Some(p) = path {
            self.files.push((p, bytes()));
        }
        self
    }
}

/// Runs one command. `args` excludes the program name.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("flybot")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let mut text = e.render().to_string();
            if !text.contains("Usage:") {
                text.push_str(&format!("\n{}\n", Cli::command().render_usage()));
            }
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CommandResult {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(cli.command).and_then(write_files) {
        Ok(stdout) => CommandResult {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(f) => CommandResult {
            code: f.code(),
            stdout: String::new(),
            stderr: format!("error: {f}\n"),
        },
    }
}

fn write_files(outcome: Outcome) -> Result<String, Failure> {
    for (path, bytes) in &outcome.files {
        fs::write(path, bytes)
            .map_err(|e| Failure::Domain(format!("Io: cannot write {}: {e}", path.display())))?;
    }
    Ok(outcome.stdout)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("Io: cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes)
        .map_err(|_| Failure::Input(format!("Io: {} is not UTF-8 text", path.display())))
}

fn read_image(path: &Path) -> Result<Image, Failure> {
    parse_pnm(&read_bytes(path)?).map_err(|e| Failure::Input(describe(&e)))
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Otsu { input, out } => otsu(&input, out),
        Command::GreenDensity {
            input,
            threshold,
            mask,
        } => {
            let img = read_image(&input)?;
            let g = green_density(&img, threshold).map_err(domain)?;
            Ok(Outcome::json(json!({ "green_density": g.fraction }))
                .with_file(mask, || write_pnm(&g.mask, false)))
        }
        Command::Dose { input, system } => dose(&input, system.as_deref()),
        Command::DetectLines {
            input,
            theta_step,
            min_votes,
        } => {
            let img = to_grayscale(&read_image(&input)?);
            let hits = hough_lines(&img, theta_step, min_votes).map_err(domain)?;
            Ok(Outcome::json(json!({ "lines": hits })))
        }
        Command::DetectCircles {
            input,
            r_min,
            r_max,
            min_votes,
        } => {
            let img = to_grayscale(&read_image(&input)?);
            let hits = hough_circles(&img, r_min, r_max, min_votes).map_err(domain)?;
            Ok(Outcome::json(json!({ "circles": hits })))
        }
        Command::InspectSidewalk {
            input,
            sigma,
            block,
            overlay,
            report,
        } => {
            let img = read_image(&input)?;
            let cfg = InspectConfig {
                sigma,
                block_length: block,
                ..InspectConfig::default()
            };
            let (rep, marked) = inspect(&img, &cfg).map_err(domain)?;
            let outcome = Outcome::json(serde_json::to_value(&rep).expect("report serializes"));
            let doc = outcome.stdout.clone().into_bytes();
            Ok(outcome
                .with_file(overlay, || write_pnm(&marked, false))
                .with_file(report, || doc))
        }
        Command::Thermal(args) => thermal(&args),
        Command::Thrust {
            mass_table,
            rotors,
            safety,
        } => thrust(&mass_table, rotors, safety),
        Command::Simulate { config, trace } => simulate(&config, trace),
        Command::NnDemo(args) => nn_demo(&args),
    }
}

fn otsu(input: &Path, out: Option<PathBuf>) -> Result<Outcome, Failure> {
    let img = to_grayscale(&read_image(input)?);
    let hist = histogram(&img).map_err(domain)?;
    let t = otsu_threshold(&hist).map_err(domain)?;
    let above: u64 = hist.bins()[t as usize + 1..].iter().sum();
    let value = json!({
        "threshold": t,
        "foreground_fraction": above as f64 / hist.total() as f64,
    });
    Ok(Outcome::json(value).with_file(out, || {
        let mask = Image::gray_from_fn(img.width(), img.height(), |x, y| {
            if img.gray_at(x, y) > t {
                255
            } else {
                0
            }
        })
        .expect("same size as a valid image");
        write_pnm(&mask, false)
    }))
}

fn dose(input: &Path, system: Option<&Path>) -> Result<Outcome, Failure> {
    let controller = match system {
        None => DosingController::default(),
        Some(p) => DosingController::from_json(&read_text(p)?).map_err(|e| match e {
            FuzzyError::BadDocument(_) => Failure::Input(describe(&e)),
            other => domain(other),
        })?,
    };
    let img = read_image(input)?;
    let density = green_density(&img, DEFAULT_EXG_THRESHOLD)
        .map_err(domain)?
        .fraction;
    let liters = controller.dose(density).map_err(domain)?;
    Ok(Outcome::json(
        json!({ "green_density": density, "dose_l": liters }),
    ))
}

fn thermal(args: &ThermalArgs) -> Result<Outcome, Failure> {
    let (temperature, radiance) = match (args.to_temp, args.to_radiance) {
        (Some(p), _) => (radiance_to_temperature(p).map_err(domain)?, p),
        (None, Some(t)) => (t, temperature_to_radiance(t).map_err(domain)?),
        (None, None) => unreachable!("clap requires one direction"),
    };
    Ok(Outcome::json(json!({
        "temperature_k": temperature,
        "radiance_w_m2": radiance,
    })))
}

/// Rounds to 9 decimals so sums like 32.019 · 2.4 / 4 print as 19.2114.
fn display_round(v: f64) -> f64 {
    (v * 1e9).round() / 1e9
}

fn thrust(table: &Path, rotors: u32, safety: f64) -> Result<Outcome, Failure> {
    let table = flight::load_mass_table(table).map_err(|e| match e {
        FlightError::Io(_) | FlightError::ParseError { .. } => Failure::Input(describe(&e)),
        other => domain(other),
    })?;
    let grams = table.total_mass();
    let per_rotor = thrust_per_rotor(&ThrustSpec {
        weight: grams / 1000.0,
        rotors,
        safety,
    })
    .map_err(domain)?;
    // Whole-gram totals print as integers.
    let total = if grams.fract() == 0.0 && grams < 9.0e15 {
        json!(grams as u64)
    } else {
        json!(grams)
    };
    Ok(Outcome::json(json!({
        "total_g": total,
        "per_rotor_kgf": display_round(per_rotor),
    })))
}

fn simulate(config: &Path, trace: Option<PathBuf>) -> Result<Outcome, Failure> {
    let cfg: SimConfig = serde_json::from_str(&read_text(config)?)
        .map_err(|e| Failure::Input(format!("ConfigInvalid: {e}")))?;
    cfg.validate().map_err(domain)?;
    let states = simulate_hover(&cfg).map_err(domain)?;
    let summary = SimSummary::of(&cfg, &states);
    Ok(
        Outcome::json(serde_json::to_value(summary).expect("summary serializes"))
            .with_file(trace, || trace_csv(&states).into_bytes()),
    )
}

/// Deterministic inputs in (-1, 1), one per row.
fn demo_inputs(rows: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|k| {
            (0..dim)
                .map(|i| (((k * dim + i + 1) as f64) * 0.7).sin())
                .collect()
        })
        .collect()
}

fn nn_demo(args: &NnDemoArgs) -> Result<Outcome, Failure> {
    let activation = args.activation.activation();
    let net = Mlp::init(&args.layers, activation, args.seed).map_err(domain)?;
    let mut doc = serde_json::Map::new();
    doc.insert(
        "mode".into(),
        json!(if args.gradient_check {
            "gradient_check"
        } else {
            "diagnose"
        }),
    );
    doc.insert("layers".into(), json!(args.layers));
    doc.insert("activation".into(), json!(activation.name()));
    doc.insert("seed".into(), json!(args.seed));
    if args.gradient_check {
        let x = &demo_inputs(1, args.layers[0])[0];
        let target = vec![0.5; *args.layers.last().expect("validated topology")];
        let worst = net
            .gradient_check(x, &target, GRADIENT_CHECK_EPSILON)
            .map_err(domain)?;
        doc.insert("epsilon".into(), json!(GRADIENT_CHECK_EPSILON));
        doc.insert("max_relative_error".into(), json!(worst));
    } else {
        let inputs = demo_inputs(DIAGNOSE_SAMPLES, args.layers[0]);
        let report = net.diagnose(&inputs).map_err(domain)?;
        doc.insert("mean_abs_grad".into(), json!(report.mean_abs_grad));
        doc.insert("dead_neurons".into(), json!(report.dead_neurons()));
        doc.insert("dead_count".into(), json!(report.dead_count()));
    }
    Ok(Outcome::json(Value::Object(doc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn describe_prefixes_variant_name() {
        let e = flybot_core::vision::VisionError::DegenerateHistogram { value: 7 };
        assert!(describe(&e).starts_with("DegenerateHistogram: "));
        let e = flybot_core::vision::VisionError::NotGrayscale;
        assert!(describe(&e).starts_with("NotGrayscale: "));
    }

    #[test]
    fn display_rounding() {
        assert_eq!(display_round(32.019 * 2.0 * 1.2 / 4.0), 19.2114);
        assert_eq!(display_round(0.1 + 0.2), 0.3);
    }

    #[test]
    fn demo_inputs_are_deterministic_and_bounded() {
        let a = demo_inputs(4, 3);
        assert_eq!(a, demo_inputs(4, 3));
        assert!(a.iter().flatten().all(|v| v.abs() < 1.0));
    }
}
