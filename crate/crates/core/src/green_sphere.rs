//! Scattering part of the Green tensor for an empty spherical cavity of
//! radius R carved out of a homogeneous medium, with both field points
//! inside the cavity.
//!
//! The cavity interior is vacuum, so the interior wave number is k2 = omega
//! (c = 1) and the exterior one is k1 = sqrt(eps) omega. The scattering
//! tensor is a partial-wave series over vector wave functions M, N weighted
//! by generalized reflection coefficients C^M_n, C^N_n:
//!
//!   G~(r1,r2) = (i omega / 4 pi) sum_{parity} sum_{n>=1} sum_{m=0}^{n}
//!               (2n+1)/(n(n+1)) (n-m)!/(n+m)! (2 - delta_m0)
//!               [ C^M_n M(r1) (x) M(r2) + C^N_n N(r1) (x) N(r2) ]
//!
//! evaluated with the real (Stratton) vector wave functions and no
//! conjugation on the second point. At coincidence in the center only the
//! n = 1 TM channel survives and the series collapses to
//! (i omega / 6 pi) C^N_1 times the identity.

use num_complex::Complex64;

use crate::green_bulk::sqrt_im_nonneg;
use crate::specfun::{self, BesselKind};
use crate::{max_order, Error, Result};

/// How a cavity radius is specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusMode {
    /// Radius in reduced length units (c / omega_ref), so z = omega R.
    Absolute,
    /// Radius as a fraction of the transition wavelength lambda_A, so the
    /// size parameter z = 2 pi (R / lambda_A) is the same at every
    /// frequency of a sweep.
    FractionOfLambdaA,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    pub mode: RadiusMode,
    pub value: f64,
}

impl CavityGeometry {
    pub fn new(mode: RadiusMode, value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::invalid(format!("cavity radius {value} must be positive")));
        }
        Ok(Self { mode, value })
    }

    pub fn absolute(radius: f64) -> Result<Self> {
        Self::new(RadiusMode::Absolute, radius)
    }

    pub fn fraction_of_lambda(fraction: f64) -> Result<Self> {
        Self::new(RadiusMode::FractionOfLambdaA, fraction)
    }

    /// Size parameter z = omega R / c at transition frequency omega.
    pub fn size_parameter(&self, omega: f64) -> f64 {
        match self.mode {
            RadiusMode::Absolute => omega * self.value,
            RadiusMode::FractionOfLambdaA => 2.0 * std::f64::consts::PI * self.value,
        }
    }

    /// Radius in reduced length units at transition frequency omega.
    pub fn radius_at(&self, omega: f64) -> f64 {
        self.size_parameter(omega) / omega
    }
}

/// Generalized reflection coefficients of order n for the cavity, TE
/// (`c_m`) and TM (`c_n`) polarizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieCoefficients {
    pub c_m: Complex64,
    pub c_n: Complex64,
}

/// Parity of the azimuthal factor in a vector wave function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Point in spherical coordinates; `theta` is the polar angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 {
            return Self { r, theta: 0.0, phi: 0.0 };
        }
        Self {
            r,
            theta: (v[2] / r).clamp(-1.0, 1.0).acos(),
            phi: v[1].atan2(v[0]),
        }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }

    /// Converts a vector given in the local (e_r, e_theta, e_phi) basis at
    /// this point to Cartesian components.
    pub fn vector_to_cartesian(&self, v: [f64; 3]) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let er = [st * cp, st * sp, ct];
        let et = [ct * cp, ct * sp, -st];
        let ep = [-sp, cp, 0.0];
        let mut out = [0.0; 3];
        for a in 0..3 {
            out[a] = v[0] * er[a] + v[1] * et[a] + v[2] * ep[a];
        }
        out
    }
}

fn mie_inputs(order: usize, eps: Complex64, z: f64) -> Result<()> {
    if order == 0 {
        return Err(Error::invalid("mie coefficients start at order 1"));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!("size parameter z = {z} must be positive")));
    }
    if eps.norm() == 0.0 {
        return Err(Error::invalid("eps = 0 has no refracted wave"));
    }
    Ok(())
}

/// Reflection coefficients from the interface-block products
/// C = T_F R_P / T_P: the wave transmitted out of the cavity, reflected at
/// the far side of the medium problem and transmitted back in. Each block
/// is a ratio of Riccati-Bessel combinations at the inner (vacuum, index 2)
/// and outer (medium, index 1) arguments.
pub fn mie_coefficients(order: usize, eps: Complex64, z: f64) -> Result<MieCoefficients> {
    mie_inputs(order, eps, z)?;
    let ne = sqrt_im_nonneg(eps);
    let z1 = ne * z;
    let z2 = Complex64::new(z, 0.0);
    let (k1, k2) = (ne, Complex64::new(1.0, 0.0));

    let j1 = specfun::sph_bessel_j(order, z1)?;
    let j2 = specfun::sph_bessel_j(order, z2)?;
    let h1 = specfun::sph_hankel1(order, z1)?;
    let h2 = specfun::sph_hankel1(order, z2)?;
    let dj1 = specfun::riccati_derivative(BesselKind::J, order, z1)?;
    let dj2 = specfun::riccati_derivative(BesselKind::J, order, z2)?;
    let dh1 = specfun::riccati_derivative(BesselKind::H, order, z1)?;
    let dh2 = specfun::riccati_derivative(BesselKind::H, order, z2)?;

    let r_h_p = (k2 * dh2 * h1 - k1 * dh1 * h2) / (k2 * j1 * dh2 - k1 * dj1 * h2);
    let r_v_p = (k2 * h2 * dh1 - k1 * h1 * dh2) / (k2 * dj1 * h2 - k1 * j1 * dh2);
    let t_h_p = k2 * (j2 * dh2 - dj2 * h2) / (k2 * j1 * dh2 - k1 * dj1 * h2);
    let t_h_f = k2 * (dj2 * h2 - j2 * dh2) / (k2 * dj2 * h1 - k1 * j2 * dh1);
    let t_v_p = k2 * (dj2 * h2 - j2 * dh2) / (k2 * dj1 * h2 - k1 * j1 * dh2);
    let t_v_f = k2 * (j2 * dh2 - dj2 * h2) / (k2 * j2 * dh1 - k1 * dj2 * h1);

    let c_m = t_h_f * r_h_p / t_h_p;
    let c_n = t_v_f * r_v_p / t_v_p;
    for (label, v) in [("c_m", c_m), ("c_n", c_n)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            let _ = label;
            return Err(Error::Overflow {
                what: "mie_coefficients",
                order,
                abs_z: z,
            });
        }
    }
    Ok(MieCoefficients { c_m, c_n })
}

/// Closed form for the order-1 TM reflection coefficient, independent of
/// the interface-block route.
pub fn c1n_exact(eps: Complex64, z: f64) -> Result<Complex64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!("size parameter z = {z} must be positive")));
    }
    // no index contrast: the cavity scatters nothing, and the closed form
    // degenerates to 0/0
    if (eps - 1.0).norm() < 1e-8 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = sqrt_im_nonneg(eps);
    let i = Complex64::new(0.0, 1.0);
    let zc = Complex64::new(z, 0.0);
    let num = (i + zc * (n + 1.0) - i * zc * zc * n - zc.powu(3) * n * n / (n + 1.0))
        * (i * zc).exp();
    // Grouped as (1 - i n z)(sin z - z cos z) - z^3 n^2/(n^2-1)(cos z - i n sin z);
    // sin z - z cos z cancels to z^3/3 and is summed by series for small z
    // so the quotient keeps full relative accuracy as z -> 0.
    let sin_z = z.sin();
    let cos_z = z.cos();
    let w = if z < 0.05 {
        // sum_{m>=1} (-1)^{m+1} 2m z^{2m+1} / (2m+1)!
        let z2 = z * z;
        let mut term = z2 * z / 3.0;
        let mut acc = term;
        let mut m = 1.0f64;
        while term.abs() > 1e-18 * acc.abs() {
            term *= -z2 * (m + 1.0) / (m * (2.0 * m + 2.0) * (2.0 * m + 3.0));
            m += 1.0;
            acc += term;
        }
        acc
    } else {
        sin_z - z * cos_z
    };
    let den = (1.0 - i * n * z) * w
        - zc.powu(3) * (cos_z - i * n * sin_z) * n * n / (n * n - 1.0);
    let c = num / den;
    if !(c.re.is_finite() && c.im.is_finite()) {
        return Err(Error::Overflow {
            what: "c1n_exact",
            order: 1,
            abs_z: z,
        });
    }
    Ok(c)
}

/// Small-z expansion of [`c1n_exact`]: the z^-3, z^-1 and z^0 terms.
pub fn c1n_series(eps: Complex64, z: f64) -> Result<Complex64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::invalid(format!("size parameter z = {z} must be positive")));
    }
    let ne = sqrt_im_nonneg(eps);
    let i = Complex64::new(0.0, 1.0);
    let two_eps_1 = 2.0 * eps + 1.0;
    let t3 = -3.0 * i * (eps - 1.0) / two_eps_1 / (z * z * z);
    let t1 = -(9.0 * i / 5.0) * (4.0 * eps * eps - 3.0 * eps - 1.0) / (two_eps_1 * two_eps_1) / z;
    let t0 = 9.0 * ne.powu(5) / (two_eps_1 * two_eps_1) - 1.0;
    Ok(t3 + t1 + t0)
}

// pi_nm = m P_n^m(cos theta)/sin theta and tau_nm = d P_n^m(cos theta)/d theta,
// both finite at the poles; recurrence in the degree keeps them pole-safe.
fn pi_tau(n: usize, m: usize, theta: f64) -> Result<(f64, f64)> {
    let x = theta.cos().clamp(-1.0, 1.0);
    if m == 0 {
        return Ok((0.0, -specfun::assoc_legendre(n, 1, x)?));
    }
    let s = theta.sin();
    // seed pi_mm = m (2m-1)!! sin^{m-1}
    let mut pi_prev = 0.0; // pi_{m-1, m}
    let mut pi_cur = m as f64 * specfun::double_factorial_odd(m - 1) * s.powi(m as i32 - 1);
    for nn in m..n {
        let next = ((2 * nn + 1) as f64 * x * pi_cur - (nn + m) as f64 * pi_prev)
            / (nn - m + 1) as f64;
        pi_prev = pi_cur;
        pi_cur = next;
    }
    let tau = (n as f64 * x * pi_cur - (n + m) as f64 * pi_prev) / m as f64;
    Ok((pi_cur, tau))
}

// (j_n(u), j_n(u)/u, (1/u) d[u j_n(u)]/du) for real u >= 0, n >= 1, taking
// j from a precomputed sequence; below u = 1e-6 the leading power law is
// exact to double precision and avoids 0/0 at the center.
fn radial_parts(n: usize, u: f64, jseq: &[f64]) -> (f64, f64, f64) {
    if u < 1e-6 {
        let dfact = specfun::double_factorial_odd(n); // (2n+1)!!
        let lead = u.powi(n as i32 - 1) / dfact;
        (u.powi(n as i32) / dfact, lead, (n as f64 + 1.0) * lead)
    } else {
        let j = jseq[n];
        (j, j / u, jseq[n - 1] - n as f64 * j / u)
    }
}

fn j_table(nmax: usize, u: f64) -> Result<Vec<f64>> {
    Ok(specfun::bessel_j_seq(nmax, Complex64::new(u, 0.0))?
        .into_iter()
        .map(|v| v.re)
        .collect())
}

// Both vector wave functions at a point, spherical components.
fn wave_pair(
    parity: Parity,
    n: usize,
    m: usize,
    point: &SphericalPoint,
    u: f64,
    jseq: &[f64],
) -> Result<([f64; 3], [f64; 3])> {
    let (j, j_over_u, dj) = radial_parts(n, u, jseq);
    let x = point.theta.cos().clamp(-1.0, 1.0);
    let p = specfun::assoc_legendre(n, m, x)?;
    let (pi_m, tau_m) = pi_tau(n, m, point.theta)?;
    let (smp, cmp) = (m as f64 * point.phi).sin_cos();
    let nn1 = (n * (n + 1)) as f64;
    let (mv, nv) = match parity {
        Parity::Even => (
            [0.0, -pi_m * j * smp, -tau_m * j * cmp],
            [nn1 * j_over_u * p * cmp, dj * tau_m * cmp, -dj * pi_m * smp],
        ),
        Parity::Odd => (
            [0.0, pi_m * j * cmp, -tau_m * j * smp],
            [nn1 * j_over_u * p * smp, dj * tau_m * smp, dj * pi_m * cmp],
        ),
    };
    Ok((mv, nv))
}

/// TE vector wave function M at interior wave number k, spherical
/// components (r, theta, phi) at `point`.
pub fn debye_m(parity: Parity, n: usize, m: usize, point: SphericalPoint, k: f64) -> Result<[f64; 3]> {
    debye_inputs(n, m, point, k)?;
    let u = k * point.r;
    let jseq = j_table(n, u)?;
    Ok(wave_pair(parity, n, m, &point, u, &jseq)?.0)
}

/// TM vector wave function N at interior wave number k, spherical
/// components (r, theta, phi) at `point`.
pub fn debye_n(parity: Parity, n: usize, m: usize, point: SphericalPoint, k: f64) -> Result<[f64; 3]> {
    debye_inputs(n, m, point, k)?;
    let u = k * point.r;
    let jseq = j_table(n, u)?;
    Ok(wave_pair(parity, n, m, &point, u, &jseq)?.1)
}

fn debye_inputs(n: usize, m: usize, point: SphericalPoint, k: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("vector wave functions start at n = 1"));
    }
    if m > n {
        return Err(Error::invalid(format!("azimuthal order m = {m} exceeds n = {n}")));
    }
    if n > max_order() {
        return Err(Error::invalid(format!(
            "order {n} exceeds the configured maximum {}",
            max_order()
        )));
    }
    if !(k > 0.0) || !(point.r >= 0.0) {
        return Err(Error::invalid("need k > 0 and r >= 0"));
    }
    Ok(())
}

type Matrix3 = [[Complex64; 3]; 3];

fn max_abs(m: &Matrix3) -> f64 {
    m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.norm()))
}

fn series_assembly(
    r1: [f64; 3],
    r2: [f64; 3],
    omega: f64,
    eps: Complex64,
    radius: f64,
    tol: f64,
    n_cap: usize,
) -> Result<(Matrix3, bool, f64)> {
    let p1 = SphericalPoint::from_cartesian(r1);
    let p2 = SphericalPoint::from_cartesian(r2);
    let (u1, u2) = (omega * p1.r, omega * p2.r);
    let jt1 = j_table(n_cap, u1)?;
    let jt2 = j_table(n_cap, u2)?;

    let zero = Complex64::new(0.0, 0.0);
    let mut g = [[zero; 3]; 3];
    let mut run_max = 0.0f64;
    let mut tail = f64::INFINITY;
    let mut converged = false;
    for n in 1..=n_cap {
        let mie = mie_coefficients(n, eps, omega * radius)?;
        let mut term = [[zero; 3]; 3];
        for m in 0..=n {
            // (2n+1)/(n(n+1)) (n-m)!/(n+m)! (2 - delta_m0)
            let mut w = (2 * n + 1) as f64 / (n * (n + 1)) as f64;
            for k in (n - m + 1)..=(n + m) {
                w /= k as f64;
            }
            if m > 0 {
                w *= 2.0;
            }
            for parity in [Parity::Even, Parity::Odd] {
                let (m1, n1) = wave_pair(parity, n, m, &p1, u1, &jt1)?;
                let (m2, n2) = wave_pair(parity, n, m, &p2, u2, &jt2)?;
                let ma = p1.vector_to_cartesian(m1);
                let na = p1.vector_to_cartesian(n1);
                let mb = p2.vector_to_cartesian(m2);
                let nb = p2.vector_to_cartesian(n2);
                for a in 0..3 {
                    for b in 0..3 {
                        term[a][b] += w * (mie.c_m * ma[a] * mb[b] + mie.c_n * na[a] * nb[b]);
                    }
                }
            }
        }
        for a in 0..3 {
            for b in 0..3 {
                g[a][b] += term[a][b];
            }
        }
        run_max = run_max.max(max_abs(&g));
        let tmax = max_abs(&term);
        tail = if run_max > 0.0 { tmax / run_max } else { tmax };
        if n >= 3 && tmax <= tol * run_max {
            converged = true;
            break;
        }
    }
    let pref = Complex64::new(0.0, omega / (4.0 * std::f64::consts::PI));
    for row in g.iter_mut() {
        for v in row.iter_mut() {
            *v *= pref;
        }
    }
    Ok((g, converged, tail))
}

fn series_inputs(r1: [f64; 3], r2: [f64; 3], omega: f64, eps: Complex64, radius: f64) -> Result<()> {
    if !(omega > 0.0 && radius > 0.0) {
        return Err(Error::invalid("need omega > 0 and radius > 0"));
    }
    if eps.norm() == 0.0 {
        return Err(Error::invalid("eps = 0 has no refracted wave"));
    }
    for (label, p) in [("r1", r1), ("r2", r2)] {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r >= radius {
            return Err(Error::invalid(format!(
                "{label} lies outside the cavity: |r| = {r} >= R = {radius}"
            )));
        }
    }
    Ok(())
}

/// Scattering Green tensor between two interior points, Cartesian
/// components. The partial-wave sum stops once the last order contributes
/// less than `tol` of the running maximum entry, with a hard cap at
/// ceil(omega R) + 20 orders; hitting the cap without meeting the
/// criterion is an error carrying the residual actually achieved.
pub fn scattering_green(
    r1: [f64; 3],
    r2: [f64; 3],
    omega: f64,
    eps: Complex64,
    radius: f64,
    tol: f64,
) -> Result<Matrix3> {
    series_inputs(r1, r2, omega, eps, radius)?;
    let n_cap = ((omega * radius).ceil() as usize + 20).min(max_order());
    let (g, converged, tail) = series_assembly(r1, r2, omega, eps, radius, tol, n_cap)?;
    if !converged {
        return Err(Error::NonConvergence {
            cap: n_cap,
            residual: tail,
        });
    }
    Ok(g)
}

/// [`scattering_green`] truncated at exactly `n_max` orders, no
/// convergence demand. Diagnostic: the center value must not move when
/// the sum is cut at n_max = 1, because only the n = 1 TM channel is
/// nonzero there.
pub fn scattering_green_truncated(
    r1: [f64; 3],
    r2: [f64; 3],
    omega: f64,
    eps: Complex64,
    radius: f64,
    n_max: usize,
) -> Result<Matrix3> {
    series_inputs(r1, r2, omega, eps, radius)?;
    if n_max == 0 {
        return Err(Error::invalid("n_max = 0 sums nothing"));
    }
    let (g, _, _) = series_assembly(r1, r2, omega, eps, radius, -1.0, n_max)?;
    Ok(g)
}

/// Coincidence limit at the cavity center: the diagonal value
/// (i omega / 6 pi) C^N_1. Off-diagonal entries vanish.
pub fn scattering_green_center(omega: f64, eps: Complex64, radius: f64) -> Result<Complex64> {
    if !(omega > 0.0 && radius > 0.0) {
        return Err(Error::invalid("need omega > 0 and radius > 0"));
    }
    let c1n = mie_coefficients(1, eps, omega * radius)?.c_n;
    Ok(Complex64::new(0.0, omega / (6.0 * std::f64::consts::PI)) * c1n)
}
