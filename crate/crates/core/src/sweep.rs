//! Frequency sweeps of the decay rates, the six figure presets, and
//! CSV/JSON/plot-script emission.

use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;

use crate::dielectric::{static_permittivity_check, DielectricModel, LorentzParameters};
use crate::green_sphere::CavityGeometry;
use crate::rates::{self, AtomicTransition};
use crate::{Error, Result};

/// Uniform frequency grid in units of the resonance frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl OmegaGrid {
    pub fn node(&self, i: usize) -> f64 {
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }
}

/// The six canonical parameter sets. All share omega_p = 0.46 and the
/// Lorentz model with resonance-pinned damping; they differ in damping
/// strength, cavity radius (as a fraction of the transition wavelength)
/// and frequency window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig1,
        Preset::Fig2,
        Preset::Fig3,
        Preset::Fig4,
        Preset::Fig5,
        Preset::Fig6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown preset '{s}' (expected fig1..fig6)")))
    }

    fn gamma(&self) -> f64 {
        match self {
            Preset::Fig1 | Preset::Fig2 | Preset::Fig5 => 0.05,
            Preset::Fig3 | Preset::Fig4 | Preset::Fig6 => 0.2,
        }
    }

    fn radius_fraction(&self) -> f64 {
        match self {
            Preset::Fig5 | Preset::Fig6 => 0.2,
            _ => 0.02,
        }
    }

    fn far_band(&self) -> bool {
        matches!(self, Preset::Fig2 | Preset::Fig4)
    }

    /// The full sweep request for this preset. Frequency windows:
    /// near band [0.9, 1.3] bracketing the resonance and the zero of the
    /// lossless permittivity, far band [0.2, 0.9] well below resonance;
    /// 600 nodes. The windows are a reproduction choice, not given data.
    pub fn spec(&self) -> SweepSpec {
        let params = LorentzParameters::new(1.0, 0.46, self.gamma()).expect("preset parameters");
        let (start, stop) = if self.far_band() { (0.2, 0.9) } else { (0.9, 1.3) };
        let mut plot = vec![
            PlotColumn::GammaGlExact,
            PlotColumn::GammaCmTotal,
            PlotColumn::GammaCmPerp,
        ];
        if self.far_band() {
            plot.push(PlotColumn::BaselineGl);
        }
        SweepSpec {
            model: DielectricModel::PinnedLorentz(params),
            geometry: CavityGeometry::fraction_of_lambda(self.radius_fraction())
                .expect("preset radius"),
            grid: OmegaGrid {
                start,
                stop,
                count: 600,
            },
            plot_columns: plot,
            emit: EmitFormat::Csv,
            preset: Some(*self),
        }
    }
}

/// Output format for the tabular emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Series that can appear in the generated plot script, with the
/// line-style role each one carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotColumn {
    GammaGlExact,
    GammaCmTotal,
    GammaCmPerp,
    BaselineGl,
}

impl PlotColumn {
    fn field(&self) -> &'static str {
        match self {
            PlotColumn::GammaGlExact => "gamma_gl_exact",
            PlotColumn::GammaCmTotal => "gamma_cm_total",
            PlotColumn::GammaCmPerp => "gamma_cm_perp",
            PlotColumn::BaselineGl => "baseline_gl",
        }
    }

    // 1-based CSV column
    fn column(&self) -> usize {
        match self {
            PlotColumn::GammaGlExact => 6,
            PlotColumn::GammaCmTotal => 8,
            PlotColumn::GammaCmPerp => 9,
            PlotColumn::BaselineGl => 11,
        }
    }

    fn dashtype(&self) -> &'static str {
        match self {
            PlotColumn::GammaGlExact => "solid",
            PlotColumn::GammaCmTotal => "\".\"",
            PlotColumn::GammaCmPerp => "\"-.\"",
            PlotColumn::BaselineGl => "\"--\"",
        }
    }
}

/// A full sweep request.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub model: DielectricModel,
    pub geometry: CavityGeometry,
    pub grid: OmegaGrid,
    pub plot_columns: Vec<PlotColumn>,
    pub emit: EmitFormat,
    pub preset: Option<Preset>,
}

/// One evaluated grid node. The first field keeps the capital T so the
/// serialized header spells the frequency ratio the way the plots label
/// it.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub omega_over_omegaT: f64,
    pub eps_re: f64,
    pub eps_im: f64,
    pub eta: f64,
    pub kappa: f64,
    pub gamma_gl_exact: f64,
    pub gamma_gl_expanded: f64,
    pub gamma_cm_total: f64,
    pub gamma_cm_perp: f64,
    pub gamma_cm_par: f64,
    pub baseline_gl: f64,
    pub baseline_cm: f64,
    pub markov_flag: String,
}

impl SweepRow {
    pub const FIELDS: [&'static str; 13] = [
        "omega_over_omegaT",
        "eps_re",
        "eps_im",
        "eta",
        "kappa",
        "gamma_gl_exact",
        "gamma_gl_expanded",
        "gamma_cm_total",
        "gamma_cm_perp",
        "gamma_cm_par",
        "baseline_gl",
        "baseline_cm",
        "markov_flag",
    ];

    fn numeric_fields(&self) -> [f64; 12] {
        [
            self.omega_over_omegaT,
            self.eps_re,
            self.eps_im,
            self.eta,
            self.kappa,
            self.gamma_gl_exact,
            self.gamma_gl_expanded,
            self.gamma_cm_total,
            self.gamma_cm_perp,
            self.gamma_cm_par,
            self.baseline_gl,
            self.baseline_cm,
        ]
    }
}

fn evaluate_node(spec: &SweepSpec, omega: f64, static_ok: bool) -> Result<SweepRow> {
    let wrap = |e: Error| Error::At {
        omega,
        source: Box::new(e),
    };
    let t = AtomicTransition::new(omega).map_err(wrap)?;
    let eps = spec.model.eval(omega).map_err(wrap)?;
    let b = rates::decay_breakdown(&t, eps, &spec.geometry, static_ok).map_err(wrap)?;
    let n = crate::dielectric::refractive_index(eps).map_err(wrap)?;
    Ok(SweepRow {
        omega_over_omegaT: omega,
        eps_re: eps.re,
        eps_im: eps.im,
        eta: n.eta,
        kappa: n.kappa,
        gamma_gl_exact: b.gamma_gl_exact,
        gamma_gl_expanded: b.gamma_gl_expanded,
        gamma_cm_total: b.gamma_cm_total,
        gamma_cm_perp: b.gamma_cm_perp,
        gamma_cm_par: b.gamma_cm_par,
        baseline_gl: b.baselines.n_gamma0 * b.baselines.gl_factor,
        baseline_cm: b.baselines.n_gamma0 * b.baselines.cm_factor,
        markov_flag: b.validity.markov.as_str().to_owned(),
    })
}

/// Evaluates the whole grid, rows in ascending frequency. Nodes are
/// independent and run in parallel; a failure at any node aborts the
/// sweep and names the offending frequency.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.grid.count < 2 {
        return Err(Error::invalid("sweep needs at least 2 grid nodes"));
    }
    if !(spec.grid.start > 0.0 && spec.grid.start < spec.grid.stop) {
        return Err(Error::invalid(format!(
            "bad frequency window [{}, {}]",
            spec.grid.start, spec.grid.stop
        )));
    }
    let static_ok = !static_permittivity_check(&spec.model)?.warn;
    (0..spec.grid.count)
        .into_par_iter()
        .map(|i| evaluate_node(spec, spec.grid.node(i), static_ok))
        .collect()
}

/// CSV text for the rows: exact field-name header, 17 significant digits,
/// LF endings. Deterministic byte-for-byte for identical rows.
pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to emit"));
    }
    let mut out = String::with_capacity(rows.len() * 256);
    out.push_str(&SweepRow::FIELDS.join(","));
    out.push('\n');
    for row in rows {
        let mut first = true;
        for v in row.numeric_fields() {
            if !first {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
            first = false;
        }
        out.push(',');
        out.push_str(&row.markov_flag);
        out.push('\n');
    }
    Ok(out)
}

/// JSON mirror of the CSV: an array of row objects keyed by field names.
pub fn json_string(rows: &[SweepRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("no rows to emit"));
    }
    serde_json::to_string_pretty(rows).map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_csv(rows: &[SweepRow], destination: impl AsRef<Path>) -> Result<()> {
    let path = destination.as_ref();
    let text = csv_string(rows)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_json(rows: &[SweepRow], destination: impl AsRef<Path>) -> Result<()> {
    let path = destination.as_ref();
    let text = json_string(rows)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Gnuplot script drawing the selected series out of `csv_name`. The
/// selection must be nonempty; on error no file is created.
pub fn plot_script_string(columns: &[PlotColumn], csv_name: &str) -> Result<String> {
    if columns.is_empty() {
        return Err(Error::invalid("plot selection is empty"));
    }
    let mut out = String::new();
    out.push_str("# decay-rate sweep\n");
    out.push_str("set datafile separator \",\"\n");
    out.push_str("set xlabel \"omega_A / omega_T\"\n");
    out.push_str("set ylabel \"Gamma / Gamma_0\"\n");
    out.push_str("set key top left\n");
    out.push_str("plot ");
    for (i, c) in columns.iter().enumerate() {
        if i > 0 {
            out.push_str(", \\\n     ");
        }
        let src = if i == 0 {
            format!("\"{csv_name}\"")
        } else {
            "\"\"".to_owned()
        };
        out.push_str(&format!(
            "{src} using 1:{} skip 1 with lines dashtype {} title \"{}\"",
            c.column(),
            c.dashtype(),
            c.field()
        ));
    }
    out.push('\n');
    Ok(out)
}

pub fn emit_plot_script(
    columns: &[PlotColumn],
    csv_name: &str,
    destination: impl AsRef<Path>,
) -> Result<()> {
    let path = destination.as_ref();
    let text = plot_script_string(columns, csv_name)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Flat key=value configuration text with `[section]` headers; keys are
/// reported as `section.key`. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut section = String::new();
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("line {}: unclosed section header", lineno + 1)))?;
            section = name.trim().to_owned();
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
        let key = if section.is_empty() {
            k.trim().to_owned()
        } else {
            format!("{section}.{}", k.trim())
        };
        out.push((key, v.trim().to_owned()));
    }
    Ok(out)
}
