//! Permittivity models and derived optical quantities.

use num_complex::Complex64;
use std::path::Path;

use crate::{Error, Result};

/// Complex relative permittivity.
pub type ComplexPermittivity = Complex64;

/// Lorentz single-oscillator parameters, frequencies in units of the
/// resonance unless stated otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzParameters {
    pub omega_t: f64,
    pub omega_p: f64,
    pub gamma: f64,
}

impl LorentzParameters {
    pub fn new(omega_t: f64, omega_p: f64, gamma: f64) -> Result<Self> {
        if !(omega_t > 0.0) {
            return Err(Error::invalid("omega_t must be positive"));
        }
        if omega_p < 0.0 || gamma < 0.0 {
            return Err(Error::invalid("omega_p and gamma must be nonnegative"));
        }
        Ok(Self {
            omega_t,
            omega_p,
            gamma,
        })
    }

    /// Frequency where the lossless permittivity crosses zero,
    /// sqrt(omega_t^2 + omega_p^2).
    pub fn longitudinal_frequency(&self) -> f64 {
        self.omega_t.hypot(self.omega_p)
    }
}

#[derive(Debug, Clone)]
pub enum DielectricModel {
    /// eps = 1 + omega_p^2 / (omega_t^2 - omega^2 - i gamma omega_t),
    /// damping proportional to the resonance frequency.
    PinnedLorentz(LorentzParameters),
    /// eps = 1 + omega_p^2 / (omega_t^2 - omega^2 - i gamma omega),
    /// the textbook damping term.
    StandardLorentz(LorentzParameters),
    Constant(Complex64),
    Tabulated(PermittivityTable),
}

impl DielectricModel {
    pub fn eval(&self, omega: f64) -> Result<Complex64> {
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::invalid(format!(
                "permittivity requested at omega = {omega}"
            )));
        }
        match self {
            DielectricModel::PinnedLorentz(p) => {
                let den = Complex64::new(p.omega_t * p.omega_t - omega * omega, -p.gamma * p.omega_t);
                Ok(1.0 + p.omega_p * p.omega_p / den)
            }
            DielectricModel::StandardLorentz(p) => {
                let den = Complex64::new(p.omega_t * p.omega_t - omega * omega, -p.gamma * omega);
                Ok(1.0 + p.omega_p * p.omega_p / den)
            }
            DielectricModel::Constant(eps) => Ok(*eps),
            DielectricModel::Tabulated(t) => t.eval(omega),
        }
    }
}

/// eps = (eta + i kappa)^2 with eta >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefractiveIndex {
    pub eta: f64,
    pub kappa: f64,
}

impl RefractiveIndex {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.eta, self.kappa)
    }
}

/// Principal square root of the permittivity, split into its real part
/// (refraction) and imaginary part (extinction).
pub fn refractive_index(eps: Complex64) -> Result<RefractiveIndex> {
    if eps.norm() == 0.0 {
        return Err(Error::invalid("refractive index of eps = 0"));
    }
    let mut n = eps.sqrt();
    if n.re < 0.0 {
        n = -n;
    }
    Ok(RefractiveIndex {
        eta: n.re,
        kappa: n.im,
    })
}

/// Modulus of the permittivity near zero frequency, flagged when it is
/// large enough to make low-frequency asymptotics unreliable.
#[derive(Debug, Clone, Copy)]
pub struct StaticCheck {
    pub omega: f64,
    pub modulus: f64,
    pub warn: bool,
}

pub fn static_permittivity_check(model: &DielectricModel) -> Result<StaticCheck> {
    let omega = match model {
        DielectricModel::PinnedLorentz(p) | DielectricModel::StandardLorentz(p) => 1e-9 * p.omega_t,
        DielectricModel::Constant(_) => 0.0,
        DielectricModel::Tabulated(t) => t.omega_min(),
    };
    let modulus = model.eval(omega)?.norm();
    Ok(StaticCheck {
        omega,
        modulus,
        warn: modulus >= 10.0,
    })
}

/// Self-consistency of a model with causality: the real part reconstructed
/// from the imaginary part through the principal-value Hilbert transform
///
///   H(w_j) = (2/pi) PV int w' eps_I(w') / (w'^2 - w_j^2) dw'
///
/// on a uniform grid (trapezoid for the regular part after singularity
/// subtraction, closed-form log for the constant part, central-difference
/// limit at the singular node), compared against eps_R - 1:
///
///   residual = max over interior nodes |H - (eps_R - 1)| / sup |eps_R - 1|.
///
/// Finite truncation and discretization leave a floor even for an exactly
/// causal model; a model violating causality does not refine below its
/// mismatch no matter how fine the grid.
pub fn kramers_kronig_residual(
    model: &DielectricModel,
    omega_min: f64,
    omega_max: f64,
    nodes: usize,
) -> Result<f64> {
    if nodes < 64 {
        return Err(Error::invalid(format!(
            "kramers_kronig_residual: {nodes} nodes, need at least 64"
        )));
    }
    if !(omega_min > 0.0 && omega_max > omega_min) {
        return Err(Error::invalid("kramers_kronig_residual: bad frequency range"));
    }
    let n = nodes;
    let step = (omega_max - omega_min) / (n - 1) as f64;
    let w: Vec<f64> = (0..n).map(|k| omega_min + step * k as f64).collect();
    let eps: Vec<Complex64> = w
        .iter()
        .map(|&x| model.eval(x))
        .collect::<Result<_>>()?;
    let f: Vec<f64> = w.iter().zip(&eps).map(|(&x, e)| x * e.im).collect();
    let target: Vec<f64> = eps.iter().map(|e| e.re - 1.0).collect();
    let sup = target.iter().fold(0.0f64, |m, &t| m.max(t.abs()));
    if sup == 0.0 {
        // nothing to reconstruct and nothing reconstructed: exact
        return Ok(0.0);
    }
    let (a, b) = (w[0], w[n - 1]);
    let mut worst = 0.0f64;
    let mut integrand = vec![0.0f64; n];
    for j in 1..n - 1 {
        let wj = w[j];
        for k in 0..n {
            integrand[k] = if k == j {
                // limit value (d f / d w) / (2 w_j) at the singular node
                (f[j + 1] - f[j - 1]) / (2.0 * step) / (2.0 * wj)
            } else {
                (f[k] - f[j]) / (w[k] * w[k] - wj * wj)
            };
        }
        let mut reg = 0.0;
        for k in 0..n - 1 {
            reg += 0.5 * (integrand[k] + integrand[k + 1]) * (w[k + 1] - w[k]);
        }
        let pvlog =
            ((b - wj) * (a + wj) / ((b + wj) * (a - wj))).abs().ln() / (2.0 * wj);
        let h = (2.0 / std::f64::consts::PI) * (reg + f[j] * pvlog);
        worst = worst.max((h - target[j]).abs() / sup);
    }
    Ok(worst)
}

/// Tabulated permittivity with monotone cubic (Fritsch-Carlson)
/// interpolation of the real and imaginary parts separately.
#[derive(Debug, Clone)]
pub struct PermittivityTable {
    re: Pchip,
    im: Pchip,
}

impl PermittivityTable {
    /// Parses CSV text: `#` comment lines, a mandatory
    /// `omega,eps_re,eps_im` header, then rows of three floats with
    /// strictly increasing omega and nonnegative eps_im.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut rows: Vec<(f64, f64, f64)> = Vec::new();
        let mut saw_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !saw_header {
                if line != "omega,eps_re,eps_im" {
                    return Err(Error::Parse(format!(
                        "line {}: expected header 'omega,eps_re,eps_im', got '{line}'",
                        lineno + 1
                    )));
                }
                saw_header = true;
                continue;
            }
            let mut parts = line.split(',');
            let mut next = |what: &str| -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 1)))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {what}: {e}", lineno + 1)))
            };
            let row = (next("omega")?, next("eps_re")?, next("eps_im")?);
            if parts.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: expected exactly three columns",
                    lineno + 1
                )));
            }
            rows.push(row);
        }
        if !saw_header {
            return Err(Error::Parse("permittivity table: no header found".into()));
        }
        if rows.len() < 2 {
            return Err(Error::Parse(
                "permittivity table: need at least two rows".into(),
            ));
        }
        for pair in rows.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::Parse(format!(
                    "permittivity table: omega not strictly increasing at {}",
                    pair[1].0
                )));
            }
        }
        if let Some(bad) = rows.iter().find(|r| r.2 < 0.0) {
            return Err(Error::Parse(format!(
                "permittivity table: negative eps_im at omega = {}",
                bad.0
            )));
        }
        let x: Vec<f64> = rows.iter().map(|r| r.0).collect();
        let yr: Vec<f64> = rows.iter().map(|r| r.1).collect();
        let yi: Vec<f64> = rows.iter().map(|r| r.2).collect();
        Ok(Self {
            re: Pchip::new(x.clone(), yr),
            im: Pchip::new(x, yi),
        })
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text)
    }

    pub fn omega_min(&self) -> f64 {
        self.re.x[0]
    }

    pub fn omega_max(&self) -> f64 {
        *self.re.x.last().unwrap()
    }

    fn eval(&self, omega: f64) -> Result<Complex64> {
        if omega < self.omega_min() || omega > self.omega_max() {
            return Err(Error::OutOfTableRange {
                omega,
                min: self.omega_min(),
                max: self.omega_max(),
            });
        }
        Ok(Complex64::new(self.re.eval(omega), self.im.eval(omega)))
    }
}

#[derive(Debug, Clone)]
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = (0..n - 1).map(|k| x[k + 1] - x[k]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] <= 0.0 {
                    d[k] = 0.0;
                } else {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { x, y, d }
    }

    fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        // rightmost interval whose left node is <= t
        let k = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[k]
            + (s3 - 2.0 * s2 + s) * h * self.d[k]
            + (-2.0 * s3 + 3.0 * s2) * self.y[k + 1]
            + (s3 - s2) * h * self.d[k + 1]
    }
}

// One-sided boundary slope with the usual monotonicity clamps.
fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        s = 0.0;
    } else if d0 * d1 < 0.0 && s.abs() > 3.0 * d0.abs() {
        s = 3.0 * d0;
    }
    s
}
