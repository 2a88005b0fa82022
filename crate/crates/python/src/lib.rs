//! Python bindings: permittivity models, cavity geometry, the decay
//! rates, the sphere Green tensor and the sweep presets.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use cavity_decay::dielectric::PermittivityTable;
use cavity_decay::green_sphere::{
    c1n_exact, c1n_series, mie_coefficients, scattering_green, scattering_green_center,
};
use cavity_decay::rates;
use cavity_decay::specfun;
use cavity_decay::sweep::{run_sweep, Preset};
use cavity_decay::{
    AtomicTransition, CavityGeometry, DielectricModel, LorentzParameters,
};

fn pyerr(e: cavity_decay::Error) -> PyErr {
    match e {
        cavity_decay::Error::Io { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Spherical cavity around the atom, sized either as an absolute radius
/// (in units where c = 1) or as a fraction of the transition wavelength.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Cavity {
    inner: CavityGeometry,
}

#[pymethods]
impl Cavity {
    #[staticmethod]
    fn absolute(radius: f64) -> PyResult<Self> {
        Ok(Cavity {
            inner: CavityGeometry::absolute(radius).map_err(pyerr)?,
        })
    }

    #[staticmethod]
    fn fraction_of_lambda(fraction: f64) -> PyResult<Self> {
        Ok(Cavity {
            inner: CavityGeometry::fraction_of_lambda(fraction).map_err(pyerr)?,
        })
    }

    /// z = omega R / c for this cavity at the given frequency.
    fn size_parameter(&self, omega: f64) -> f64 {
        self.inner.size_parameter(omega)
    }

    fn radius_at(&self, omega: f64) -> f64 {
        self.inner.radius_at(omega)
    }
}

/// Complex permittivity as a function of frequency.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Model {
    inner: DielectricModel,
}

#[pymethods]
impl Model {
    /// Single-resonance model with damping pinned to the resonance
    /// frequency: eps = 1 + omega_p^2/(omega_t^2 - omega^2 - i gamma omega_t).
    #[staticmethod]
    fn pinned_lorentz(omega_t: f64, omega_p: f64, gamma: f64) -> PyResult<Self> {
        Ok(Model {
            inner: DielectricModel::PinnedLorentz(
                LorentzParameters::new(omega_t, omega_p, gamma).map_err(pyerr)?,
            ),
        })
    }

    /// Textbook damping term -i gamma omega.
    #[staticmethod]
    fn standard_lorentz(omega_t: f64, omega_p: f64, gamma: f64) -> PyResult<Self> {
        Ok(Model {
            inner: DielectricModel::StandardLorentz(
                LorentzParameters::new(omega_t, omega_p, gamma).map_err(pyerr)?,
            ),
        })
    }

    #[staticmethod]
    fn constant(eps: Complex64) -> Self {
        Model {
            inner: DielectricModel::Constant(eps),
        }
    }

    /// Monotone-cubic interpolation of an omega,eps_re,eps_im CSV table.
    #[staticmethod]
    fn tabulated_csv(path: &str) -> PyResult<Self> {
        Ok(Model {
            inner: DielectricModel::Tabulated(
                PermittivityTable::from_csv_path(path).map_err(pyerr)?,
            ),
        })
    }

    fn eval(&self, omega: f64) -> PyResult<Complex64> {
        self.inner.eval(omega).map_err(pyerr)
    }
}

/// eta + i kappa = sqrt(eps), kappa >= 0.
#[pyfunction]
fn refractive_index(eps: Complex64) -> PyResult<(f64, f64)> {
    let n = cavity_decay::dielectric::refractive_index(eps).map_err(pyerr)?;
    Ok((n.eta, n.kappa))
}

/// Virtual-cavity rate in Gamma/Gamma_0 units.
#[pyclass]
struct CmRates {
    #[pyo3(get)]
    total: f64,
    #[pyo3(get)]
    perp: f64,
    #[pyo3(get)]
    par: f64,
}

#[pyfunction]
fn gamma_cm(omega: f64, eps: Complex64, cavity: Cavity) -> PyResult<CmRates> {
    let t = AtomicTransition::new(omega).map_err(pyerr)?;
    let r = rates::gamma_cm(&t, eps, &cavity.inner).map_err(pyerr)?;
    Ok(CmRates {
        total: r.total,
        perp: r.perp,
        par: r.par,
    })
}

#[pyfunction]
fn gamma_gl_exact(omega: f64, eps: Complex64, cavity: Cavity) -> PyResult<f64> {
    let t = AtomicTransition::new(omega).map_err(pyerr)?;
    rates::gamma_gl_exact(&t, eps, &cavity.inner).map_err(pyerr)
}

/// Small-z expansion of the real-cavity rate, term by term.
#[pyclass]
struct GlExpansion {
    #[pyo3(get)]
    total: f64,
    #[pyo3(get)]
    r_minus3: f64,
    #[pyo3(get)]
    r_minus1: f64,
    #[pyo3(get)]
    r0: f64,
}

#[pyfunction]
fn gamma_gl_expanded(omega: f64, eps: Complex64, cavity: Cavity) -> PyResult<GlExpansion> {
    let t = AtomicTransition::new(omega).map_err(pyerr)?;
    let e = rates::gamma_gl_expanded(&t, eps, &cavity.inner).map_err(pyerr)?;
    Ok(GlExpansion {
        total: e.total,
        r_minus3: e.r_minus3,
        r_minus1: e.r_minus1,
        r0: e.r0,
    })
}

/// Order-1 reflection coefficient, closed form.
#[pyfunction(name = "c1n_exact")]
fn c1n_exact_py(eps: Complex64, z: f64) -> PyResult<Complex64> {
    c1n_exact(eps, z).map_err(pyerr)
}

/// Order-1 reflection coefficient, truncated small-z form.
#[pyfunction(name = "c1n_series")]
fn c1n_series_py(eps: Complex64, z: f64) -> PyResult<Complex64> {
    c1n_series(eps, z).map_err(pyerr)
}

/// TM reflection coefficient of arbitrary order from the scattering
/// building blocks.
#[pyfunction]
fn mie_c_n(order: usize, eps: Complex64, z: f64) -> PyResult<Complex64> {
    Ok(mie_coefficients(order, eps, z).map_err(pyerr)?.c_n)
}

/// Scattering part of the Green tensor between two interior points,
/// as a 3x3 nested list of complex entries.
#[pyfunction(name = "scattering_green")]
fn scattering_green_py(
    r1: [f64; 3],
    r2: [f64; 3],
    omega: f64,
    eps: Complex64,
    radius: f64,
    tol: f64,
) -> PyResult<Vec<Vec<Complex64>>> {
    let g = scattering_green(r1, r2, omega, eps, radius, tol).map_err(pyerr)?;
    Ok(g.iter().map(|row| row.to_vec()).collect())
}

/// Coincidence value at the cavity center (diagonal entry).
#[pyfunction(name = "scattering_green_center")]
fn scattering_green_center_py(omega: f64, eps: Complex64, radius: f64) -> PyResult<Complex64> {
    scattering_green_center(omega, eps, radius).map_err(pyerr)
}

#[pyfunction]
fn sph_bessel_j(order: usize, z: Complex64) -> PyResult<Complex64> {
    specfun::sph_bessel_j(order, z).map_err(pyerr)
}

#[pyfunction]
fn sph_hankel1(order: usize, z: Complex64) -> PyResult<Complex64> {
    specfun::sph_hankel1(order, z).map_err(pyerr)
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

/// Runs one of the canonical sweeps and returns the rows as dicts keyed
/// like the CSV header.
#[pyfunction]
fn sweep_preset(py: Python<'_>, name: &str) -> PyResult<Py<PyList>> {
    let preset = Preset::from_name(name).map_err(pyerr)?;
    let rows = run_sweep(&preset.spec()).map_err(pyerr)?;
    let list = PyList::empty(py);
    for r in rows {
        let d = PyDict::new(py);
        d.set_item("omega_over_omegaT", r.omega_over_omegaT)?;
        d.set_item("eps_re", r.eps_re)?;
        d.set_item("eps_im", r.eps_im)?;
        d.set_item("eta", r.eta)?;
        d.set_item("kappa", r.kappa)?;
        d.set_item("gamma_gl_exact", r.gamma_gl_exact)?;
        d.set_item("gamma_gl_expanded", r.gamma_gl_expanded)?;
        d.set_item("gamma_cm_total", r.gamma_cm_total)?;
        d.set_item("gamma_cm_perp", r.gamma_cm_perp)?;
        d.set_item("gamma_cm_par", r.gamma_cm_par)?;
        d.set_item("baseline_gl", r.baseline_gl)?;
        d.set_item("baseline_cm", r.baseline_cm)?;
        d.set_item("markov_flag", r.markov_flag)?;
        list.append(d)?;
    }
    Ok(list.unbind())
}

#[pyfunction]
fn max_order() -> usize {
    cavity_decay::max_order()
}

#[pymodule]
fn cavity_decay_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Cavity>()?;
    m.add_class::<Model>()?;
    m.add_class::<CmRates>()?;
    m.add_class::<GlExpansion>()?;
    m.add_function(wrap_pyfunction!(refractive_index, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_cm, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_gl_exact, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_gl_expanded, m)?)?;
    m.add_function(wrap_pyfunction!(c1n_exact_py, m)?)?;
    m.add_function(wrap_pyfunction!(c1n_series_py, m)?)?;
    m.add_function(wrap_pyfunction!(mie_c_n, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_green_py, m)?)?;
    m.add_function(wrap_pyfunction!(scattering_green_center_py, m)?)?;
    m.add_function(wrap_pyfunction!(sph_bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(sph_hankel1, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_preset, m)?)?;
    m.add_function(wrap_pyfunction!(max_order, m)?)?;
    m.add("MAX_ORDER_ENV", cavity_decay::MAX_ORDER_ENV)?;
    Ok(())
}
