//! Gamma function via the Lanczos approximation (g = 7, n = 9 coefficient
//! set), with reflection for the left half line and an entire reciprocal
//! variant that is zero at the poles.

use crate::error::{Error, Result};

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

pub fn gamma_fn(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::Domain(format!("gamma pole at x = {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + G + 0.5;
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// `ln Gamma(x)` for `x > 0`; large arguments stay finite where `gamma_fn`
/// would overflow.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // ln Gamma(x) = ln(pi / sin(pi x)) - ln Gamma(1 - x)
        return Ok((std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln()
            - log_gamma(1.0 - x)?);
    }
    let xm = x - 1.0;
    let mut a = LANCZOS[0];
    let t = xm + G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm + i as f64);
    }
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (xm + 0.5) * t.ln() - t + a.ln())
}

/// `1 / Gamma(x)` as an entire function: zero at `x = 0, -1, -2, ...`.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma_unchecked(x)
    }
}
