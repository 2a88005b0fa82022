//! Dyadic Green tensor of a homogeneous absorbing medium, split into its
//! longitudinal and transverse parts.
//!
//! Reduced units throughout: c = 1, frequencies in units of the reference
//! frequency, lengths in c/omega_ref, so the wave number inside the medium
//! is k = sqrt(eps) omega. All tensors are the "reduced" Green tensors that
//! multiply omega^2/c^2 in the field equations.

use num_complex::Complex64;

use crate::{Error, Result};

/// Separation vector between the two spatial arguments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Separation {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl std::ops::Neg for Separation {
    type Output = Separation;
    fn neg(self) -> Separation {
        self.scaled(-1.0)
    }
}

/// Which piece of the Helmholtz Green tensor a value represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorPart {
    Longitudinal,
    Transverse,
    Total,
}

/// A 3x3 complex tensor value. The longitudinal part (and hence the total)
/// additionally carries a delta-function contact term at coincidence; it
/// cannot live in the matrix, so `contact` records its coefficient:
/// the term is `contact * delta^3(rho) * delta_ab`.
#[derive(Debug, Clone, Copy)]
pub struct GreenTensorValue {
    pub part: TensorPart,
    pub matrix: [[Complex64; 3]; 3],
    pub contact: Option<Complex64>,
}

impl GreenTensorValue {
    pub fn max_abs(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

/// sqrt(eps) on the branch with nonnegative imaginary part, so that
/// e^{ik rho} decays in an absorbing medium.
pub(crate) fn sqrt_im_nonneg(eps: Complex64) -> Complex64 {
    let n = eps.sqrt();
    if n.im < 0.0 {
        -n
    } else {
        n
    }
}

fn check_args(rho: &Separation, omega: f64, eps: Complex64) -> Result<f64> {
    let r = rho.norm();
    if !(r > 0.0) {
        return Err(Error::invalid("green tensor requested at zero separation"));
    }
    if !(omega > 0.0) {
        return Err(Error::invalid("green tensor requires omega > 0"));
    }
    if eps.norm() == 0.0 {
        return Err(Error::invalid("green tensor requires eps != 0"));
    }
    Ok(r)
}

/// Longitudinal (electrostatic-like) part,
/// -(delta_ab - 3 rr) / (4 pi omega^2 eps rho^3), plus the contact term
/// -delta^3(rho)/(3 omega^2 eps) reported symbolically.
pub fn green_longitudinal(rho: Separation, omega: f64, eps: Complex64) -> Result<GreenTensorValue> {
    let r = check_args(&rho, omega, eps)?;
    let pref = -1.0 / (4.0 * std::f64::consts::PI * omega * omega * eps);
    let c = rho.components();
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let d = if a == b { 1.0 } else { 0.0 };
            *v = pref * (d - 3.0 * c[a] * c[b] / (r * r)) / (r * r * r);
        }
    }
    Ok(GreenTensorValue {
        part: TensorPart::Longitudinal,
        matrix: m,
        contact: Some(-1.0 / (3.0 * omega * omega * eps)),
    })
}

/// Transverse part: the static dipole pattern plus the propagating
/// spherical-wave terms with k = sqrt(eps) omega.
pub fn green_transverse(rho: Separation, omega: f64, eps: Complex64) -> Result<GreenTensorValue> {
    let r = check_args(&rho, omega, eps)?;
    let k = sqrt_im_nonneg(eps) * omega;
    let kr = k * r;
    let pref = 1.0 / (4.0 * std::f64::consts::PI * omega * omega * eps);
    let e = (Complex64::new(0.0, 1.0) * kr).exp();
    let i = Complex64::new(0.0, 1.0);
    let k3 = k * k * k;
    let cd = k3 * (1.0 / kr + i / (kr * kr) - 1.0 / (kr * kr * kr));
    let cr = k3 * (1.0 / kr + 3.0 * i / (kr * kr) - 3.0 / (kr * kr * kr));
    let c = rho.components();
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let d = if a == b { 1.0 } else { 0.0 };
            let rr = c[a] * c[b] / (r * r);
            let stat = (d - 3.0 * rr) / (r * r * r);
            *v = pref * (stat + (cd * d - cr * rr) * e);
        }
    }
    Ok(GreenTensorValue {
        part: TensorPart::Transverse,
        matrix: m,
        contact: None,
    })
}

/// Sum of the longitudinal and transverse parts. The static dipole
/// patterns cancel analytically, so this is evaluated directly from the
/// propagating form to avoid the numerical cancellation.
pub fn green_total(rho: Separation, omega: f64, eps: Complex64) -> Result<GreenTensorValue> {
    let r = check_args(&rho, omega, eps)?;
    let k = sqrt_im_nonneg(eps) * omega;
    let kr = k * r;
    let pref = 1.0 / (4.0 * std::f64::consts::PI * omega * omega * eps);
    let e = (Complex64::new(0.0, 1.0) * kr).exp();
    let i = Complex64::new(0.0, 1.0);
    let k3 = k * k * k;
    let cd = k3 * (1.0 / kr + i / (kr * kr) - 1.0 / (kr * kr * kr));
    let cr = k3 * (1.0 / kr + 3.0 * i / (kr * kr) - 3.0 / (kr * kr * kr));
    let c = rho.components();
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let d = if a == b { 1.0 } else { 0.0 };
            let rr = c[a] * c[b] / (r * r);
            *v = pref * (cd * d - cr * rr) * e;
        }
    }
    Ok(GreenTensorValue {
        part: TensorPart::Total,
        matrix: m,
        contact: Some(-1.0 / (3.0 * omega * omega * eps)),
    })
}

/// Leading behavior of the transverse part near coincidence:
/// (1/4pi) { rr/(2 rho) + delta_ab/(2 rho) + (2 i omega / 3) sqrt(eps) delta_ab }.
/// Accurate for |k rho| well below 0.1; see [`small_form_applicable`].
pub fn green_transverse_small(
    rho: Separation,
    omega: f64,
    eps: Complex64,
) -> Result<GreenTensorValue> {
    let r = check_args(&rho, omega, eps)?;
    let n = sqrt_im_nonneg(eps);
    let pref = 1.0 / (4.0 * std::f64::consts::PI);
    let im_term = Complex64::new(0.0, 2.0 * omega / 3.0) * n;
    let c = rho.components();
    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (a, row) in m.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            let d = if a == b { 1.0 } else { 0.0 };
            *v = pref
                * (Complex64::new(c[a] * c[b] / (2.0 * r * r * r) + d / (2.0 * r), 0.0)
                    + im_term * d);
        }
    }
    Ok(GreenTensorValue {
        part: TensorPart::Transverse,
        matrix: m,
        contact: None,
    })
}

/// Whether the near-coincidence form is inside its validity region
/// |k rho| < 0.1.
pub fn small_form_applicable(rho: Separation, omega: f64, eps: Complex64) -> bool {
    (sqrt_im_nonneg(eps) * omega * rho.norm()).norm() < 0.1
}

/// Im G at coincidence in vacuum, omega/(6 pi): the quantity the
/// free-space decay rate normalizes against.
pub fn im_green_vacuum_coincidence(omega: f64) -> f64 {
    omega / (6.0 * std::f64::consts::PI)
}
