//! `lmgbrain` command line: simulations, presets, spectra, histograms, SVG
//! plots and parameter sweeps.
//!
//! Exit status is 0 on success, 1 for usage, configuration and I/O errors,
//! 2 when the integration itself fails (the message carries the time).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use lmgbrain::analysis::{self, Window};
use lmgbrain::config;
use lmgbrain::dynamics::{simulate, SimulationConfig, Trajectory};
use lmgbrain::presets;
use lmgbrain::table::{format_value, trajectory_table, Table};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub mod svg;

/// Relative jitter allowed in the time column before a spectrum is refused.
pub const SAMPLING_TOLERANCE: f64 = 1e-9;
pub const SUMMARY_HEADER: &str = "value,mean_E,dominant_frequency_S_block,max_U";

#[derive(Debug, Parser)]
#[command(
    name = "lmgbrain",
    version,
    about = "LMG qubit network with synaptic depression and facilitation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one configuration and write its trajectory CSV plus a manifest.
    Simulate(SimulateArgs),
    /// Power spectrum of one trajectory column.
    Spectrum(SpectrumArgs),
    /// Density histogram of one trajectory column.
    Hist(HistArgs),
    /// Static SVG line chart of trajectory columns against t.
    Plot(PlotArgs),
    /// One run per value of a scalar key, plus a summary table.
    Sweep(SweepArgs),
    /// Inspect the catalog of named configurations.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// JSON configuration file.
    #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (see `preset list`).
    #[arg(long)]
    preset: Option<String>,
    /// Override a scalar key, e.g. `--set t_max=500`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    /// Trajectory CSV to write; the manifest goes next to it.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    column: String,
    #[arg(long)]
    out: PathBuf,
    /// rect (default) or hann.
    #[arg(long, default_value = "rect", value_parser = parse_window)]
    window: Window,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Average half-overlapping segments of this many samples instead of one periodogram.
    #[arg(long, value_name = "SEGMENT")]
    welch: Option<usize>,
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    s.parse()
}

#[derive(Debug, Args)]
struct HistArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    column: String,
    #[arg(long, default_value_t = 50)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
    /// Drop records before this time (transients).
    #[arg(long)]
    tmin: Option<f64>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma separated, e.g. `E,r,U`.
    #[arg(long, value_delimiter = ',', required = true)]
    columns: Vec<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    /// `key=v1,v2,...` over one scalar key.
    #[arg(long)]
    vary: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Runs evaluated concurrently.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    parallel: u32,
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    /// Print every preset name with its description.
    List,
    /// Write a preset as a configuration file (stdout without --out).
    Export {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failed command: message for stderr and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self::usage(format!("{}: {err}", path.display()))
    }
}

impl From<lmgbrain::Error> for Failure {
    fn from(e: lmgbrain::Error) -> Self {
        Self {
            code: if e.is_numerical() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Spectrum(a) => cmd_spectrum(a, out),
        Command::Hist(a) => cmd_hist(a, out),
        Command::Plot(a) => cmd_plot(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Preset { action } => cmd_preset(action, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_config(source: &Source) -> std::result::Result<SimulationConfig, Failure> {
    let mut config = match (&source.config, &source.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
            config::from_json(&text)?
        }
        (None, Some(name)) => presets::preset_config(name)?,
        (None, None) => return Err(Failure::usage("one of --config or --preset is required")),
    };
    for item in &source.overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("--set expects KEY=VALUE, got '{item}'")))?;
        config::set_scalar(&mut config, key.trim(), value.trim())?;
    }
    config.validate()?;
    Ok(config)
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
}

pub fn config_sha256(config: &SimulationConfig) -> String {
    format!("{:x}", Sha256::digest(config::to_json(config).as_bytes()))
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    let mut tmp_name = path.file_name().map(OsString::from).unwrap_or_default();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).map_err(|e| Failure::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Failure::io(path, e)
    })
}

fn read_table(path: &Path) -> std::result::Result<Table, Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::io(path, e))?;
    Ok(Table::read(file)?)
}

#[derive(Debug, Serialize)]
struct RunManifest {
    artifact: &'static str,
    artifact_version: &'static str,
    config_sha256: String,
    started_unix: f64,
    finished_unix: f64,
    dt: f64,
    records: usize,
    outputs: Vec<String>,
    config: serde_json::Value,
}

fn config_value(config: &SimulationConfig) -> serde_json::Value {
    serde_json::from_str(&config::to_json(config)).expect("config JSON is valid")
}

/// `traj.csv` -> `traj.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let config = load_config(&a.source)?;
    let started = unix_now();
    let traj = simulate(&config)?;
    write_atomic(&a.out, trajectory_table(&traj).to_csv_string().as_bytes())?;
    let manifest = RunManifest {
        artifact: "lmgbrain",
        artifact_version: env!("CARGO_PKG_VERSION"),
        config_sha256: config_sha256(&config),
        started_unix: started,
        finished_unix: unix_now(),
        dt: traj.dt,
        records: traj.records.len(),
        outputs: vec![a.out.display().to_string()],
        config: config_value(&config),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_atomic(&manifest_path(&a.out), json.as_bytes())?;
    let _ = writeln!(
        out,
        "wrote {} records (dt = {:e}) to {}",
        traj.records.len(),
        traj.dt,
        a.out.display()
    );
    Ok(())
}

/// Rows of `table` with `tmin <= t <= tmax`, as (t, column) pairs.
fn select(
    table: &Table,
    column: &str,
    tmin: Option<f64>,
    tmax: Option<f64>,
) -> std::result::Result<(Vec<f64>, Vec<f64>), Failure> {
    let values = table.column(column)?;
    let t = table.column("t")?;
    let keep = |x: f64| tmin.is_none_or(|lo| x >= lo) && tmax.is_none_or(|hi| x <= hi);
    Ok(t.iter()
        .zip(values)
        .filter(|(x, _)| keep(**x))
        .map(|(x, v)| (*x, *v))
        .unzip())
}

fn cmd_spectrum(a: SpectrumArgs, out: &mut dyn Write) -> CmdResult {
    let table = read_table(&a.input)?;
    let (t, values) = select(&table, &a.column, a.tmin, a.tmax)?;
    let dt = analysis::uniform_spacing(&t, SAMPLING_TOLERANCE)?;
    let spec = match a.welch {
        Some(seg) => analysis::welch(&values, dt, seg, a.window)?,
        None => analysis::periodogram(&values, dt, a.window)?,
    };
    let table = Table::from_columns(
        &["frequency", "power"],
        vec![spec.frequencies.clone(), spec.power.clone()],
    );
    write_atomic(&a.out, table.to_csv_string().as_bytes())?;

    let peak = analysis::dominant_frequency(&spec)?;
    let _ = writeln!(
        out,
        "dominant frequency: {:.6e} (power {:.6e})",
        peak.frequency, peak.power
    );
    if peak.degenerate {
        let _ = writeln!(out, "note: no power outside DC; the series is constant");
        return Ok(());
    }
    let _ = writeln!(out, "resolution: {:.6e}", spec.resolution());
    let _ = writeln!(out, "top peaks (frequency, power, half-maximum span):");
    for p in analysis::top_peaks(&spec, 5) {
        let span = analysis::half_maximum_span(&spec, &p);
        let _ = writeln!(out, "  {:.6e}  {:.6e}  {:.3e}", p.frequency, p.power, span);
    }
    Ok(())
}

fn cmd_hist(a: HistArgs, out: &mut dyn Write) -> CmdResult {
    let table = read_table(&a.input)?;
    let (_, values) = select(&table, &a.column, a.tmin, None)?;
    let h = analysis::histogram(&values, a.bins)?;
    let (left, right) = h.edges.windows(2).map(|w| (w[0], w[1])).unzip();
    let table = Table::from_columns(
        &["bin_left", "bin_right", "density"],
        vec![left, right, h.densities.clone()],
    );
    write_atomic(&a.out, table.to_csv_string().as_bytes())?;
    let _ = writeln!(
        out,
        "{} samples, {} bins, mean {:.6e}",
        values.len(),
        h.densities.len(),
        h.mean()
    );
    Ok(())
}

fn cmd_plot(a: PlotArgs, out: &mut dyn Write) -> CmdResult {
    let table = read_table(&a.input)?;
    if table.rows() == 0 {
        return Err(Failure::usage(format!("{}: no records to plot", a.input.display())));
    }
    let t = table.column("t")?;
    let mut series = Vec::with_capacity(a.columns.len());
    for name in &a.columns {
        series.push((name.as_str(), table.column(name)?));
    }
    let doc = svg::line_chart(t, &series);
    write_atomic(&a.out, doc.as_bytes())?;
    let _ = writeln!(out, "wrote {} series to {}", series.len(), a.out.display());
    Ok(())
}

/// One row of `summary.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: String,
    pub mean_e: f64,
    pub dominant_s_block: f64,
    pub max_u: f64,
}

pub fn summarize(value: &str, traj: &Trajectory) -> SweepRow {
    let e = traj.column("E").expect("E column");
    let s = traj.column("S_block").expect("S_block column");
    let dominant = analysis::periodogram(&s, traj.sample_interval(), Window::Rectangular)
        .and_then(|spec| analysis::dominant_frequency(&spec))
        .map_or(f64::NAN, |p| p.frequency);
    SweepRow {
        value: value.to_string(),
        mean_e: e.iter().sum::<f64>() / e.len() as f64,
        dominant_s_block: dominant,
        max_u: traj.records.iter().map(|r| r.u).fold(f64::NEG_INFINITY, f64::max),
    }
}

pub fn summary_csv(rows: &[SweepRow]) -> String {
    let mut text = String::from(SUMMARY_HEADER);
    text.push('\n');
    for r in rows {
        text.push_str(&format!(
            "{},{},{},{}\n",
            r.value,
            format_value(r.mean_e),
            format_value(r.dominant_s_block),
            format_value(r.max_u)
        ));
    }
    text
}

fn parse_vary(spec: &str) -> std::result::Result<(String, Vec<String>), Failure> {
    let (key, list) = spec
        .split_once('=')
        .ok_or_else(|| Failure::usage(format!("--vary expects key=v1,v2,..., got '{spec}'")))?;
    let values: Vec<String> = list.split(',').map(|v| v.trim().to_string()).collect();
    if values.iter().any(String::is_empty) {
        return Err(Failure::usage(format!("--vary {key}: empty value in '{list}'")));
    }
    let mut seen = values.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != values.len() {
        return Err(Failure::usage(format!("--vary {key}: repeated value in '{list}'")));
    }
    Ok((key.trim().to_string(), values))
}

#[derive(Debug, Serialize)]
struct SweepEntry {
    value: String,
    output: String,
    config_sha256: String,
    dt: f64,
    records: usize,
}

#[derive(Debug, Serialize)]
struct SweepManifest {
    artifact: &'static str,
    artifact_version: &'static str,
    key: String,
    base_config_sha256: String,
    started_unix: f64,
    finished_unix: f64,
    summary: String,
    runs: Vec<SweepEntry>,
    base_config: serde_json::Value,
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write) -> CmdResult {
    let base = load_config(&a.source)?;
    let (key, values) = parse_vary(&a.vary)?;
    // resolve and validate every run before any integration starts
    let mut runs = Vec::with_capacity(values.len());
    for v in &values {
        let mut c = base.clone();
        config::set_scalar(&mut c, &key, v)?;
        c.validate()?;
        runs.push((v.clone(), a.out.join(format!("{key}={v}.csv")), c));
    }
    fs::create_dir_all(&a.out).map_err(|e| Failure::io(&a.out, e))?;

    let started = unix_now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.parallel as usize)
        .build()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
    let results: Vec<std::result::Result<(SweepRow, SweepEntry), Failure>> = pool.install(|| {
        runs.par_iter()
            .map(|(value, path, c)| {
                let traj = simulate(c)?;
                write_atomic(path, trajectory_table(&traj).to_csv_string().as_bytes())?;
                let entry = SweepEntry {
                    value: value.clone(),
                    output: path.display().to_string(),
                    config_sha256: config_sha256(c),
                    dt: traj.dt,
                    records: traj.records.len(),
                };
                Ok((summarize(value, &traj), entry))
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(results.len());
    let mut entries = Vec::with_capacity(results.len());
    for (res, (value, _, _)) in results.into_iter().zip(&runs) {
        let (row, entry) = res.map_err(|f| Failure {
            code: f.code,
            message: format!("{key}={value}: {}", f.message),
        })?;
        rows.push(row);
        entries.push(entry);
    }
    let summary = a.out.join("summary.csv");
    write_atomic(&summary, summary_csv(&rows).as_bytes())?;
    let manifest = SweepManifest {
        artifact: "lmgbrain",
        artifact_version: env!("CARGO_PKG_VERSION"),
        key: key.clone(),
        base_config_sha256: config_sha256(&base),
        started_unix: started,
        finished_unix: unix_now(),
        summary: summary.display().to_string(),
        runs: entries,
        base_config: config_value(&base),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_atomic(&a.out.join("sweep.manifest.json"), json.as_bytes())?;
    let _ = writeln!(out, "{} runs over {key}; summary in {}", rows.len(), summary.display());
    Ok(())
}

fn cmd_preset(action: PresetAction, out: &mut dyn Write) -> CmdResult {
    match action {
        PresetAction::List => {
            for p in presets::catalog() {
                let _ = writeln!(out, "{:<24} {}", p.name, p.note);
            }
        }
        PresetAction::Export { name, out: path } => {
            let json = config::to_json(&presets::preset_config(&name)?);
            match path {
                Some(p) => write_atomic(&p, json.as_bytes())?,
                None => {
                    let _ = write!(out, "{json}");
                }
            }
        }
    }
    Ok(())
}
