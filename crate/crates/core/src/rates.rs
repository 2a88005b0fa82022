//! Decay-rate formulas for a two-level atom in an absorbing medium, with
//! the local field treated by the virtual-cavity (Clausius-Mossotti) or
//! real-cavity (Glauber-Lewenstein) model.
//!
//! Everything downstream of [`gamma0`] works in the ratio Γ/Γ₀. The
//! virtual-cavity rate splits into a transverse part and a purely
//! nonradiative longitudinal part; the real-cavity rate is
//! 1 + Re C₁ᴺ with the order-1 TM reflection coefficient of the cavity,
//! available exactly or as its small-z expansion.

use num_complex::Complex64;

use crate::dielectric::refractive_index;
use crate::green_sphere::{c1n_exact, CavityGeometry};
use crate::{Error, Result};

/// The radiating transition. `mu` (dipole magnitude, SI) only matters for
/// absolute rates; it cancels in every Γ/Γ₀ output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicTransition {
    pub omega_a: f64,
    pub mu: Option<f64>,
}

impl AtomicTransition {
    pub fn new(omega_a: f64) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) {
            return Err(Error::invalid(format!(
                "transition frequency {omega_a} must be positive"
            )));
        }
        Ok(Self { omega_a, mu: None })
    }

    pub fn with_dipole(omega_a: f64, mu: f64) -> Result<Self> {
        let mut t = Self::new(omega_a)?;
        if mu < 0.0 {
            return Err(Error::invalid("dipole magnitude must be nonnegative"));
        }
        t.mu = Some(mu);
        Ok(t)
    }
}

/// Free-space decay rate. Without a dipole moment the pipeline is the
/// reduced one and the answer is the normalization itself, 1. With a
/// dipole moment (SI units, omega in rad/s) the absolute rate
/// omega^3 mu^2 / (3 pi hbar eps0 c^3) is returned instead.
pub fn gamma0(t: &AtomicTransition) -> f64 {
    match t.mu {
        None => 1.0,
        Some(mu) => {
            const HBAR: f64 = 1.054_571_817e-34;
            const EPS0: f64 = 8.854_187_812_8e-12;
            const C: f64 = 2.997_924_58e8;
            t.omega_a.powi(3) * mu * mu / (3.0 * std::f64::consts::PI * HBAR * EPS0 * C * C * C)
        }
    }
}

/// The classic cavity-free correction factors, real-index and
/// absolute-value variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineRates {
    /// eta: the uncorrected medium rate n Γ₀ with n -> eta.
    pub n_gamma0: f64,
    /// ((eta^2+2)/3)^2, virtual-cavity factor for a real index.
    pub cm_factor: f64,
    /// (3 eta^2/(2 eta^2+1))^2, real-cavity factor for a real index.
    pub gl_factor: f64,
    /// |(eps+2)/3|^2 with the full complex permittivity.
    pub abs_cm: f64,
    /// |3 eps/(2 eps+1)|^2 with the full complex permittivity.
    pub abs_gl: f64,
}

pub fn baseline_rates(eps: Complex64) -> Result<BaselineRates> {
    let n = refractive_index(eps)?;
    let eta2 = n.eta * n.eta;
    Ok(BaselineRates {
        n_gamma0: n.eta,
        cm_factor: ((eta2 + 2.0) / 3.0).powi(2),
        gl_factor: (3.0 * eta2 / (2.0 * eta2 + 1.0)).powi(2),
        abs_cm: ((eps + 2.0) / 3.0).norm_sqr(),
        abs_gl: (3.0 * eps / (2.0 * eps + 1.0)).norm_sqr(),
    })
}

/// Virtual-cavity rate, split into transverse and longitudinal parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmRates {
    pub total: f64,
    pub perp: f64,
    pub par: f64,
}

/// Virtual-cavity (Clausius-Mossotti) rate in Γ/Γ₀ units.
///
/// The longitudinal part is pure nonradiative decay and carries the whole
/// 1/z^3 divergence times eps_I; without absorption it vanishes
/// identically. The transverse expression is a small-z truncation and can
/// dip below zero in narrow strongly absorbing bands at large radius;
/// values are reported as computed, never clamped.
pub fn gamma_cm(t: &AtomicTransition, eps: Complex64, geom: &CavityGeometry) -> Result<CmRates> {
    let z = geom.size_parameter(t.omega_a);
    if !(z > 0.0) {
        return Err(Error::invalid("cavity size parameter must be positive"));
    }
    let n = refractive_index(eps)?;
    let zinv = 1.0 / z;
    let abs2 = eps.norm_sqr();
    let par = 4.0 * eps.im / (27.0 * abs2) * zinv * zinv * zinv;
    let abs_cm = ((eps + 2.0) / 3.0).norm_sqr();
    let perp = n.eta * (abs_cm - 2.0 * eps.im * eps.im / 9.0)
        + eps.im * (eps.re + 2.0) * (8.0 / 15.0 * zinv - 2.0 / 9.0 * n.kappa)
        + 25.0 * eps.im / 54.0 * zinv * zinv * zinv;
    Ok(CmRates {
        total: perp + par,
        perp,
        par,
    })
}

/// Real-cavity (Glauber-Lewenstein) rate, 1 + Re C₁ᴺ with the exact
/// reflection coefficient. Only the transverse field enters: the
/// longitudinal Green tensor of the vacuum interior is real and
/// contributes nothing.
pub fn gamma_gl_exact(t: &AtomicTransition, eps: Complex64, geom: &CavityGeometry) -> Result<f64> {
    let z = geom.size_parameter(t.omega_a);
    Ok(1.0 + c1n_exact(eps, z)?.re)
}

/// Real-cavity rate from the small-z expansion, term by term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlExpansion {
    pub total: f64,
    pub r_minus3: f64,
    pub r_minus1: f64,
    pub r0: f64,
}

pub(crate) fn gl_expansion_terms(eps: Complex64, z: f64) -> Result<GlExpansion> {
    let n = refractive_index(eps)?;
    let d2 = (2.0 * eps + 1.0).norm_sqr(); // |2 eps + 1|^2
    let d4 = d2 * d2;
    let abs2 = eps.norm_sqr();
    let (er, ei) = (eps.re, eps.im);
    let zinv = 1.0 / z;
    let r_minus3 = 9.0 * ei / d2 * zinv * zinv * zinv;
    // z^-1 coefficient from the Laurent expansion of the exact rate:
    // (9/5) Im[(4 eps + 1)(eps - 1)(2 conj(eps) + 1)^2] / |2 eps + 1|^4,
    // whose numerator works out to eps_I (28|eps|^2 + 16 eps_R + 1).
    let r_minus1 = 9.0 * ei * (28.0 * abs2 + 16.0 * er + 1.0) / (5.0 * d4) * zinv;
    let r0 = 9.0 * n.eta * (4.0 * abs2 * abs2 + 4.0 * er * abs2 + er * er - ei * ei) / d4
        - 9.0 * n.kappa * ei * (4.0 * abs2 + 2.0 * er) / d4;
    Ok(GlExpansion {
        total: r_minus3 + r_minus1 + r0,
        r_minus3,
        r_minus1,
        r0,
    })
}

/// Small-z expansion of [`gamma_gl_exact`]: 1/z^3, 1/z and constant
/// terms. Valid for z well below 1; refuses z > 0.5 where the dropped
/// remainder is no longer negligible.
pub fn gamma_gl_expanded(
    t: &AtomicTransition,
    eps: Complex64,
    geom: &CavityGeometry,
) -> Result<GlExpansion> {
    let z = geom.size_parameter(t.omega_a);
    if !(z > 0.0) {
        return Err(Error::invalid("cavity size parameter must be positive"));
    }
    if z > 0.5 {
        return Err(Error::invalid(format!(
            "z = {z} too large for the small-z expansion (need z <= 0.5)"
        )));
    }
    gl_expansion_terms(eps, z)
}

/// General rate from the imaginary coincidence diagonal of the relevant
/// Green tensor: Γ/Γ₀ = Im G / (omega / 6 pi c).
pub fn gamma_from_green(t: &AtomicTransition, im_green_diag: f64) -> Result<f64> {
    if im_green_diag < 0.0 {
        return Err(Error::invalid(format!(
            "Im G = {im_green_diag} < 0 violates passivity"
        )));
    }
    Ok(im_green_diag * 6.0 * std::f64::consts::PI / t.omega_a)
}

/// How trustworthy the Markov (flat-reservoir) treatment is at this size
/// parameter. Advisory only: nothing refuses to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkovStatus {
    Ok,
    Warn,
    Fail,
}

impl MarkovStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            MarkovStatus::Ok => "ok",
            MarkovStatus::Warn => "warn",
            MarkovStatus::Fail => "fail",
        }
    }
}

impl std::fmt::Display for MarkovStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovValidity {
    pub z: f64,
    pub status: MarkovStatus,
}

pub fn markov_validity(geom: &CavityGeometry, t: &AtomicTransition) -> MarkovValidity {
    let z = geom.size_parameter(t.omega_a);
    let status = if z > 1.0 {
        MarkovStatus::Fail
    } else if z > 0.5 {
        MarkovStatus::Warn
    } else {
        MarkovStatus::Ok
    };
    MarkovValidity { z, status }
}

/// Terms of the expanded real-cavity rate. There is no longitudinal
/// entry: the model has no longitudinal decay channel at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlTerms {
    pub r_minus3: f64,
    pub r_minus1: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityFlags {
    pub markov: MarkovStatus,
    pub static_eps_ok: bool,
}

/// Everything both models say about one (omega_A, eps, geometry) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRateBreakdown {
    pub gamma_cm_total: f64,
    pub gamma_cm_perp: f64,
    pub gamma_cm_par: f64,
    pub gamma_gl_exact: f64,
    pub gamma_gl_expanded: f64,
    pub gl_terms: GlTerms,
    pub baselines: BaselineRates,
    pub validity: ValidityFlags,
}

/// Full per-point evaluation. The expanded real-cavity value is reported
/// at every z (the exact value is the reference where they disagree);
/// `static_eps_ok` is whatever the caller's model-level check concluded.
pub fn decay_breakdown(
    t: &AtomicTransition,
    eps: Complex64,
    geom: &CavityGeometry,
    static_eps_ok: bool,
) -> Result<DecayRateBreakdown> {
    let cm = gamma_cm(t, eps, geom)?;
    let gl = gamma_gl_exact(t, eps, geom)?;
    let z = geom.size_parameter(t.omega_a);
    let exp = gl_expansion_terms(eps, z)?;
    Ok(DecayRateBreakdown {
        gamma_cm_total: cm.total,
        gamma_cm_perp: cm.perp,
        gamma_cm_par: cm.par,
        gamma_gl_exact: gl,
        gamma_gl_expanded: exp.total,
        gl_terms: GlTerms {
            r_minus3: exp.r_minus3,
            r_minus1: exp.r_minus1,
            r0: exp.r0,
        },
        baselines: baseline_rates(eps)?,
        validity: ValidityFlags {
            markov: markov_validity(geom, t).status,
            static_eps_ok,
        },
    })
}
