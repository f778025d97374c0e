use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bellsim::bds::{probs_to_t, t_to_probs, BellProbabilities, TVector, WernerParam};
use bellsim::circuits::{build_werner_circuit, prepare_bds, Encoder};
use bellsim::linalg::{ComplexMatrix, DensityDocument, DensityMatrix};
use bellsim::measures::report;
use bellsim::simulator::{output_state, NoiseModel};
use bellsim::sweep::{
    compare_templates, default_noise, emit, run_sweep, write_csv, write_json, CircuitTemplate,
    OutputFormat, SweepConfig,
};
use bellsim::tomography::{aggregate_counts, linear_inversion, project_to_physical, CountsTable};
use bellsim::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Bell-diagonal state preparation, simulation, tomography and correlation measures.
#[derive(Parser)]
#[command(name = "bellsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the preparation circuit for one state and report its exact output.
    Prepare(PrepareArgs),
    /// Run a sweep described by a TOML config.
    Sweep(SweepArgs),
    /// Mean Werner-line fidelity of every template/encoder combination.
    Compare(CompareArgs),
    /// Correlation measures of a density matrix stored as JSON.
    Measures(MeasuresArgs),
    /// Marginalize count tables onto their tomography bits.
    Aggregate(FileArg),
    /// Linear-inversion tomography from nine count tables.
    Invert(InvertArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Correlation vector t1,t2,t3.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, group = "state")]
    t: Option<Vec<f64>>,
    /// Bell weights p00,p01,p10,p11.
    #[arg(long, value_delimiter = ',', group = "state")]
    p: Option<Vec<f64>>,
    /// Werner parameter.
    #[arg(long, group = "state")]
    w: Option<f64>,
}

#[derive(Args)]
struct PrepareArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value = "two-qubit")]
    template: String,
    #[arg(long, default_value = "compact")]
    encoder: String,
    /// `none`, `default` or a noise TOML file.
    #[arg(long, default_value = "none")]
    noise: String,
    /// Include the circuit in the output.
    #[arg(long)]
    dump_circuit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    /// Overrides the configured output path; `-` writes to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    /// Base config; template and mode are ignored.
    config: Option<PathBuf>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    points: Option<usize>,
    /// `none`, `default` or a noise TOML file. Defaults to the shipped model without a config.
    #[arg(long)]
    noise: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct MeasuresArgs {
    state: PathBuf,
    /// Reference state for the fidelity field.
    #[arg(long)]
    target: Option<PathBuf>,
}

#[derive(Args)]
struct FileArg {
    counts: PathBuf,
}

#[derive(Args)]
struct InvertArgs {
    counts: PathBuf,
    /// Also report measures of the reconstructed state.
    #[arg(long)]
    measures: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}

fn load_noise(spec: &str) -> Result<Option<NoiseModel>> {
    match spec {
        "none" => Ok(None),
        "default" => Ok(Some(default_noise())),
        path => NoiseModel::load(path)
            .map(Some)
            .map_err(|e| Error::Config {
                field: "noise".into(),
                message: e.to_string(),
            }),
    }
}

fn config_err(field: &str, e: impl std::fmt::Display) -> Error {
    Error::Config {
        field: field.into(),
        message: e.to_string(),
    }
}

fn matrix_document(m: &ComplexMatrix) -> DensityDocument {
    let part = |f: fn(bellsim::linalg::C64) -> f64| {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| f(m[(i, j)])).collect())
            .collect()
    };
    DensityDocument {
        real: part(|z| z.re),
        imag: Some(part(|z| z.im)),
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn prepare(args: PrepareArgs) -> Result<()> {
    let template: CircuitTemplate = args.template.parse()?;
    let encoder: Encoder = args.encoder.parse()?;
    let noise = load_noise(&args.noise)?;
    let s = &args.state;
    let (p, w) = match (&s.t, &s.p, s.w) {
        (Some(t), None, None) if t.len() != 3 => return Err(config_err("t", "expects 3 values")),
        (None, Some(p), None) if p.len() != 4 => return Err(config_err("p", "expects 4 values")),
        (Some(t), None, None) => (
            t_to_probs(TVector::new(t[0], t[1], t[2])).map_err(|e| config_err("t", e))?,
            None,
        ),
        (None, Some(p), None) => (
            BellProbabilities::new(p[0], p[1], p[2], p[3]).map_err(|e| config_err("p", e))?,
            None,
        ),
        (None, None, Some(w)) => {
            let w = WernerParam::new(w).map_err(|e| config_err("w", e))?;
            (w.probabilities(), Some(w))
        }
        _ => return Err(config_err("state", "give one of --t, --p or --w")),
    };
    let circuit = match template.bds_template() {
        Some(t) => prepare_bds(&p, encoder, t)?,
        None => build_werner_circuit(
            w.ok_or_else(|| config_err("template", "werner-special needs --w"))?,
        ),
    };
    let rho = output_state(&circuit, noise.as_ref())?;
    let target = bellsim::bds::bds_density(&p);
    let mut doc = json!({
        "t": probs_to_t(&p).as_array(),
        "p": p.as_array(),
        "template": template.name(),
        "cnot_cost": circuit.cnot_cost(),
        "state": rho,
        "measures": report(&rho, Some(&target))?,
    });
    if template.bds_template().is_some() {
        doc["encoder"] = json!(encoder.name());
    }
    if args.dump_circuit {
        doc["circuit"] = serde_json::to_value(circuit.to_document())?;
    }
    print_json(&doc)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = SweepConfig::load(&args.config)?;
    if let Some(n) = args.threads {
        cfg.threads = n;
    }
    let rows = run_sweep(&cfg)?;
    let configured = cfg.output.as_ref();
    let format = args
        .format
        .map(OutputFormat::from)
        .or(configured.map(|o| o.format))
        .unwrap_or(OutputFormat::Csv);
    let path = args.output.or_else(|| configured.map(|o| o.path.clone()));
    match path {
        Some(p) if p != Path::new("-") => emit(&rows, format, &p),
        _ => {
            let out = std::io::stdout().lock();
            match format {
                OutputFormat::Csv => write_csv(&rows, out),
                OutputFormat::Json => write_json(&rows, out),
            }
        }
    }
}

fn compare(args: CompareArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig {
            noise: Some(default_noise()),
            ..SweepConfig::default()
        },
    };
    if let Some(n) = &args.noise {
        cfg.noise = load_noise(n)?;
    }
    cfg.shots = args.shots.unwrap_or(cfg.shots);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.werner_points = args.points.unwrap_or(cfg.werner_points);
    cfg.validate()?;
    let rows = compare_templates(&cfg)?;
    match args.format {
        Format::Json => print_json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["template", "encoder", "mean_fidelity", "sd_fidelity", "points"])?;
            for r in &rows {
                w.write_record([
                    r.template.name().to_string(),
                    r.encoder.map(|e| e.name().to_string()).unwrap_or_default(),
                    format!("{:.6}", r.mean_fidelity),
                    format!("{:.6}", r.sd_fidelity),
                    r.points.to_string(),
                ])?;
            }
            w.flush().map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
    }
}

fn load_density(path: &Path) -> Result<DensityMatrix> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn measures(args: MeasuresArgs) -> Result<()> {
    let rho = load_density(&args.state)?;
    let target = args.target.as_deref().map(load_density).transpose()?;
    print_json(&report(&rho, target.as_ref())?)
}

fn load_tables(path: &Path) -> Result<Vec<CountsTable>> {
    CountsTable::many_from_json(&read(path)?)
}

fn aggregate(args: FileArg) -> Result<()> {
    let tables: Vec<serde_json::Value> = load_tables(&args.counts)?
        .iter()
        .map(|t| Ok(serde_json::from_str(&aggregate_counts(t).to_json()?)?))
        .collect::<Result<_>>()?;
    print_json(&tables)
}

fn invert(args: InvertArgs) -> Result<()> {
    let tables = load_tables(&args.counts)?;
    let raw = linear_inversion(&tables)?;
    let rho = project_to_physical(&raw)?;
    let mut doc = json!({
        "linear_inversion": matrix_document(&raw),
        "state": rho,
    });
    if args.measures {
        doc["measures"] = serde_json::to_value(report(&rho, None)?)?;
    }
    print_json(&doc)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Prepare(a) => prepare(a),
        Command::Sweep(a) => sweep(a),
        Command::Compare(a) => compare(a),
        Command::Measures(a) => measures(a),
        Command::Aggregate(a) => aggregate(a),
        Command::Invert(a) => invert(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
