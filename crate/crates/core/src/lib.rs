//! Spontaneous decay of a two-level atom embedded in an absorbing,
//! dispersive dielectric, with the local field handled by either the
//! virtual-cavity (Clausius-Mossotti) or the real-cavity
//! (Glauber-Lewenstein) model.
//!
//! Everything is computed in reduced units: frequencies in units of a
//! reference frequency (the medium resonance by default), c = 1, and all
//! rates as the ratio Γ/Γ₀ against the free-space rate. The cavity radius
//! enters only through the size parameter z = ωR/c.
//!
//! Module map:
//! - [`specfun`]: complex spherical Bessel/Hankel functions, Riccati
//!   derivatives, associated Legendre polynomials.
//! - [`dielectric`]: permittivity models (Lorentz oscillator in two damping
//!   variants, constant, tabulated), refractive index, Kramers-Kronig and
//!   static-permittivity diagnostics.
//! - [`green_bulk`]: dyadic Green tensor of the homogeneous medium.
//! - [`green_sphere`]: scattering Green tensor of an empty sphere in the
//!   medium, Mie reflection coefficients, vector wave functions.
//! - [`rates`]: the decay-rate formulas themselves.
//! - [`sweep`]: frequency sweeps, figure presets, CSV/JSON/plot emission.

pub mod dielectric;
pub mod green_bulk;
pub mod green_sphere;
pub mod rates;
pub mod specfun;
pub mod sweep;

use std::path::PathBuf;

pub use dielectric::{ComplexPermittivity, DielectricModel, LorentzParameters, RefractiveIndex};
pub use green_bulk::{GreenTensorValue, Separation, TensorPart};
pub use green_sphere::{CavityGeometry, MieCoefficients, RadiusMode, SphericalPoint};
pub use rates::{AtomicTransition, DecayRateBreakdown};
pub use sweep::{SweepRow, SweepSpec};

/// Environment variable capping the spherical Bessel/Hankel order.
pub const MAX_ORDER_ENV: &str = "CAVITY_DECAY_MAX_ORDER";

/// Default order cap when the environment variable is unset.
pub const DEFAULT_MAX_ORDER: usize = 64;

/// Current order cap: `CAVITY_DECAY_MAX_ORDER` if set and parseable,
/// otherwise [`DEFAULT_MAX_ORDER`].
pub fn max_order() -> usize {
    std::env::var(MAX_ORDER_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORDER)
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} overflowed at order {order}, |z| = {abs_z:.3e}")]
    Overflow {
        what: &'static str,
        order: usize,
        abs_z: f64,
    },
    #[error("series did not converge within {cap} orders (residual {residual:.3e})")]
    NonConvergence { cap: usize, residual: f64 },
    #[error("frequency {omega} outside table range [{min}, {max}]")]
    OutOfTableRange { omega: f64, min: f64, max: f64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("at omega = {omega}: {source}")]
    At {
        omega: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
