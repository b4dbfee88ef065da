//! Parabolic cylinder function `U(a, z)` by quadrature of its real
//! integral representation
//!
//! `U(a,z) = e^{-z^2/4}/Gamma(a+1/2) Int_0^inf t^{a-1/2} e^{-t^2/2 - zt} dt`
//!
//! valid for `a > -1/2`, which covers every order the endpoint expansion
//! needs. The substitution `t = e^v` removes the algebraic endpoint
//! behaviour so one adaptive pass handles all orders.

use crate::error::{Error, Result};
use crate::specfun::gamma::gamma_fn;
use crate::specfun::quad::adaptive_simpson;

pub fn pcf_u(a: f64, z: f64) -> Result<f64> {
    if a <= -0.5 {
        return Err(Error::Domain(format!("pcf_u: integral representation needs a > -1/2, got {a}")));
    }
    let integrand = |v: f64| {
        let t = v.exp();
        ((a + 0.5) * v - 0.5 * t * t - z * t).exp()
    };
    // the integrand peaks near t ~ O(1); e^{(a+1/2)v} kills the left tail
    // and e^{-t^2/2} the right one
    let hi = (3.0 + 2.0 * (a.abs() + z.abs())).ln();
    let lo = -800.0 / (a + 0.5).min(20.0);
    let lo = lo.max(-700.0);
    let integral = adaptive_simpson(&integrand, lo, hi, 1e-15);
    Ok((-0.25 * z * z).exp() / gamma_fn(a + 0.5)? * integral)
}
