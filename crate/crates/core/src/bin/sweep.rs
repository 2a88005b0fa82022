//! Sweep driver: evaluates the decay-rate models over a frequency grid
//! and emits a CSV or JSON table, optionally with a gnuplot script.
//!
//! Settings are assembled in order: built-in defaults, then a config
//! file (`--config`), then command-line flags, then `--preset figN`
//! which pins model, geometry and grid to one of the six canonical
//! parameter sets. Exit codes: 0 success, 1 usage error, 2 numerical
//! failure, 3 I/O failure.

use clap::error::ErrorKind;
use clap::Parser;
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::exit;

use cavity_decay::dielectric::PermittivityTable;
use cavity_decay::sweep::{
    self, EmitFormat, OmegaGrid, PlotColumn, Preset, SweepSpec,
};
use cavity_decay::{CavityGeometry, DielectricModel, Error, LorentzParameters, Result};

#[derive(Parser, Debug)]
#[command(
    name = "sweep",
    version,
    about = "Decay rates of a two-level atom centred in a spherical cavity \
             inside an absorbing dielectric, swept over transition frequency"
)]
struct Cli {
    /// Canonical parameter set fig1..fig6; overrides config file and flags
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Config file: key = value lines grouped under [section] headers
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Permittivity model: pinned-lorentz, standard-lorentz, constant, tabulated
    #[arg(long, value_name = "KIND")]
    model: Option<String>,

    /// Lorentz resonance frequency (frequency unit of the whole run)
    #[arg(long, value_name = "W")]
    omega_t: Option<f64>,

    /// Lorentz coupling frequency
    #[arg(long, value_name = "W")]
    omega_p: Option<f64>,

    /// Lorentz damping rate
    #[arg(long, value_name = "G")]
    gamma: Option<f64>,

    /// Real part of the permittivity (constant model)
    #[arg(long, value_name = "X")]
    eps_re: Option<f64>,

    /// Imaginary part of the permittivity (constant model)
    #[arg(long, value_name = "X")]
    eps_im: Option<f64>,

    /// Permittivity table CSV (tabulated model)
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,

    /// Cavity radius as a fraction of the transition wavelength
    #[arg(long, value_name = "F")]
    radius_lambda: Option<f64>,

    /// First grid frequency, in units of omega_t
    #[arg(long, value_name = "W")]
    omega_start: Option<f64>,

    /// Last grid frequency, in units of omega_t
    #[arg(long, value_name = "W")]
    omega_stop: Option<f64>,

    /// Number of grid nodes
    #[arg(long, value_name = "N")]
    count: Option<usize>,

    /// Output file; stdout when omitted
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Also write a gnuplot script next to the table (needs --out, CSV only)
    #[arg(long, value_name = "FILE")]
    plot_script: Option<PathBuf>,

    /// Emit JSON instead of CSV
    #[arg(long)]
    json: bool,
}

// Everything a run needs, before it is turned into a SweepSpec.
struct Settings {
    preset: Option<String>,
    model_kind: String,
    omega_t: f64,
    omega_p: f64,
    gamma: f64,
    eps_re: f64,
    eps_im: f64,
    table: Option<PathBuf>,
    radius_lambda: f64,
    omega_start: f64,
    omega_stop: f64,
    count: usize,
    out: Option<PathBuf>,
    plot_script: Option<PathBuf>,
    json: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            preset: None,
            model_kind: "pinned-lorentz".to_owned(),
            omega_t: 1.0,
            omega_p: 0.46,
            gamma: 0.05,
            eps_re: 1.0,
            eps_im: 0.0,
            table: None,
            radius_lambda: 0.02,
            omega_start: 0.9,
            omega_stop: 1.3,
            count: 600,
            out: None,
            plot_script: None,
            json: false,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Parse(format!("config key {key}: bad value '{v}'")))
}

impl Settings {
    fn apply_config(&mut self, text: &str) -> Result<()> {
        for (key, value) in sweep::parse_config(text)? {
            match key.as_str() {
                "preset" => self.preset = Some(value),
                "model.kind" => self.model_kind = value,
                "model.omega_t" => self.omega_t = parse_num(&key, &value)?,
                "model.omega_p" => self.omega_p = parse_num(&key, &value)?,
                "model.gamma" => self.gamma = parse_num(&key, &value)?,
                "model.eps_re" => self.eps_re = parse_num(&key, &value)?,
                "model.eps_im" => self.eps_im = parse_num(&key, &value)?,
                "model.table" => self.table = Some(PathBuf::from(value)),
                "geometry.radius_lambda" => self.radius_lambda = parse_num(&key, &value)?,
                "grid.omega_start" => self.omega_start = parse_num(&key, &value)?,
                "grid.omega_stop" => self.omega_stop = parse_num(&key, &value)?,
                "grid.count" => self.count = parse_num(&key, &value)?,
                "output.out" => self.out = Some(PathBuf::from(value)),
                "output.plot_script" => self.plot_script = Some(PathBuf::from(value)),
                "output.json" => self.json = parse_num(&key, &value)?,
                other => {
                    return Err(Error::Parse(format!("config key {other} is not recognised")))
                }
            }
        }
        Ok(())
    }

    fn apply_flags(&mut self, cli: &Cli) {
        if let Some(v) = &cli.preset {
            self.preset = Some(v.clone());
        }
        if let Some(v) = &cli.model {
            self.model_kind = v.clone();
        }
        if let Some(v) = cli.omega_t {
            self.omega_t = v;
        }
        if let Some(v) = cli.omega_p {
            self.omega_p = v;
        }
        if let Some(v) = cli.gamma {
            self.gamma = v;
        }
        if let Some(v) = cli.eps_re {
            self.eps_re = v;
        }
        if let Some(v) = cli.eps_im {
            self.eps_im = v;
        }
        if let Some(v) = &cli.table {
            self.table = Some(v.clone());
        }
        if let Some(v) = cli.radius_lambda {
            self.radius_lambda = v;
        }
        if let Some(v) = cli.omega_start {
            self.omega_start = v;
        }
        if let Some(v) = cli.omega_stop {
            self.omega_stop = v;
        }
        if let Some(v) = cli.count {
            self.count = v;
        }
        if let Some(v) = &cli.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = &cli.plot_script {
            self.plot_script = Some(v.clone());
        }
        if cli.json {
            self.json = true;
        }
    }

    fn model(&self) -> Result<DielectricModel> {
        match self.model_kind.as_str() {
            "pinned-lorentz" => Ok(DielectricModel::PinnedLorentz(LorentzParameters::new(
                self.omega_t,
                self.omega_p,
                self.gamma,
            )?)),
            "standard-lorentz" => Ok(DielectricModel::StandardLorentz(LorentzParameters::new(
                self.omega_t,
                self.omega_p,
                self.gamma,
            )?)),
            "constant" => Ok(DielectricModel::Constant(Complex64::new(
                self.eps_re,
                self.eps_im,
            ))),
            "tabulated" => {
                let path = self.table.as_ref().ok_or_else(|| {
                    Error::invalid("tabulated model needs --table FILE")
                })?;
                Ok(DielectricModel::Tabulated(PermittivityTable::from_csv_path(
                    path,
                )?))
            }
            other => Err(Error::invalid(format!(
                "unknown model '{other}' (expected pinned-lorentz, standard-lorentz, constant or tabulated)"
            ))),
        }
    }

    fn spec(&self) -> Result<SweepSpec> {
        if let Some(name) = &self.preset {
            let mut spec = Preset::from_name(name)?.spec();
            spec.emit = if self.json { EmitFormat::Json } else { EmitFormat::Csv };
            return Ok(spec);
        }
        Ok(SweepSpec {
            model: self.model()?,
            geometry: CavityGeometry::fraction_of_lambda(self.radius_lambda)?,
            grid: OmegaGrid {
                start: self.omega_start,
                stop: self.omega_stop,
                count: self.count,
            },
            plot_columns: vec![
                PlotColumn::GammaGlExact,
                PlotColumn::GammaCmTotal,
                PlotColumn::GammaCmPerp,
            ],
            emit: if self.json { EmitFormat::Json } else { EmitFormat::Csv },
            preset: None,
        })
    }
}

fn run(cli: &Cli) -> Result<()> {
    let mut settings = Settings::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        settings.apply_config(&text)?;
    }
    settings.apply_flags(cli);

    if settings.plot_script.is_some() {
        if settings.out.is_none() {
            return Err(Error::invalid("--plot-script needs --out FILE"));
        }
        if settings.json {
            return Err(Error::invalid(
                "--plot-script reads the CSV table and cannot be combined with --json",
            ));
        }
    }

    let spec = settings.spec()?;
    let rows = sweep::run_sweep(&spec)?;

    let suspect = rows.iter().filter(|r| r.markov_flag != "ok").count();
    if suspect > 0 {
        eprintln!(
            "note: {suspect} of {} rows have cavity transit times outside the \
             flat-reservoir window (markov_flag warn or fail)",
            rows.len()
        );
    }

    match (&settings.out, spec.emit) {
        (Some(path), EmitFormat::Csv) => sweep::emit_csv(&rows, path)?,
        (Some(path), EmitFormat::Json) => sweep::emit_json(&rows, path)?,
        (None, EmitFormat::Csv) => print!("{}", sweep::csv_string(&rows)?),
        (None, EmitFormat::Json) => println!("{}", sweep::json_string(&rows)?),
    }

    if let Some(script) = &settings.plot_script {
        let out = settings.out.as_ref().expect("checked above");
        let csv_name = out
            .file_name()
            .ok_or_else(|| Error::invalid(format!("--out {} has no file name", out.display())))?
            .to_string_lossy()
            .into_owned();
        sweep::emit_plot_script(&spec.plot_columns, &csv_name, script)?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => 3,
        Error::Overflow { .. } | Error::NonConvergence { .. } | Error::OutOfTableRange { .. } => 2,
        Error::At { source, .. } => exit_code(source),
        _ => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("sweep: {e}");
        let mut cause = std::error::Error::source(&e);
        while let Some(c) = cause {
            eprintln!("  caused by: {c}");
            cause = c.source();
        }
        exit(exit_code(&e));
    }
}
