//! The order cap is read from the environment on every call, so all the
//! scenarios live in one test: the variable is process-global state.

use num_complex::Complex64;

use cavity_decay::green_sphere::scattering_green;
use cavity_decay::specfun::sph_bessel_j;
use cavity_decay::{max_order, Error, DEFAULT_MAX_ORDER, MAX_ORDER_ENV};

#[test]
fn order_cap_follows_environment() {
    let z = Complex64::new(2.0, 0.5);

    std::env::remove_var(MAX_ORDER_ENV);
    assert_eq!(max_order(), DEFAULT_MAX_ORDER);
    assert!(sph_bessel_j(30, z).is_ok());

    std::env::set_var(MAX_ORDER_ENV, "7");
    assert_eq!(max_order(), 7);
    assert!(sph_bessel_j(7, z).is_ok());
    match sph_bessel_j(8, z) {
        Err(Error::InvalidArgument(msg)) => {
            assert!(msg.contains("order 8"), "{msg}");
            assert!(msg.contains("maximum 7"), "{msg}");
        }
        other => panic!("expected an order-cap error, got {other:?}"),
    }

    // With only two orders available the partial-wave sum cannot prove
    // convergence and must say so.
    std::env::set_var(MAX_ORDER_ENV, "2");
    let r1 = [0.25, -0.1, 0.3];
    let r2 = [-0.2, 0.35, 0.05];
    match scattering_green(r1, r2, 0.3, Complex64::new(2.0, 0.5), 1.0, 1e-12) {
        Err(Error::NonConvergence { cap, .. }) => assert_eq!(cap, 2),
        other => panic!("expected non-convergence under cap 2, got {other:?}"),
    }

    // unparseable values fall back to the default
    std::env::set_var(MAX_ORDER_ENV, "banana");
    assert_eq!(max_order(), DEFAULT_MAX_ORDER);

    std::env::remove_var(MAX_ORDER_ENV);
    assert!(scattering_green(r1, r2, 0.3, Complex64::new(2.0, 0.5), 1.0, 1e-12).is_ok());
}
