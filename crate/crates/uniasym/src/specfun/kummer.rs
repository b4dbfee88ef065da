//! Kummer confluent hypergeometric functions `M(a,b,x)` and `U(a,b,x)`.
//!
//! `M` is summed term by term in double-double; the terms of the paper-scale
//! configurations grow to ~1e3 before cancelling, which plain doubles would
//! survive but with several digits gone. `U` uses the two-`M` connection
//! formula; when `a+1-b` or `a` hits a pole of Gamma the corresponding term
//! drops out exactly (entire reciprocal gamma).

use crate::error::{Error, Result};
use crate::num::dd::Dd;
use crate::specfun::gamma::{gamma_fn, recip_gamma};

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() < 1e-12
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Taylor series sum_k (a)_k x^k / ((b)_k k!) in double-double.
fn kummer_m_dd(a: f64, b: f64, x: f64) -> Result<Dd> {
    if is_nonpositive_integer(b) {
        return Err(Error::Domain(format!("kummer_m: b = {b} is a non-positive integer")));
    }
    let terminating = is_nonpositive_integer(a);
    let n_exact = if terminating { (-a.round()) as usize } else { usize::MAX };
    let xd = Dd::from_f64(x);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut small_streak = 0;
    for k in 0..2000 {
        if terminating && k >= n_exact {
            return Ok(sum);
        }
        let kf = k as f64;
        term = term * Dd::from_f64(a + kf) * xd / (Dd::from_f64(b + kf) * Dd::from_f64(kf + 1.0));
        sum = sum + term;
        // stop after three consecutive relatively negligible terms, so an
        // accidental zero term cannot end the sum early
        if term.abs() < sum.abs() * Dd::from_f64(1e-18) + Dd::from_f64(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::Domain(format!(
        "kummer_m({a}, {b}, {x}): series did not converge in 2000 terms"
    )))
}

pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    kummer_m_dd(a, b, x).map(Dd::to_f64)
}

/// `U(a,b,x)` for `x > 0`, non-integer `b`, via
/// `U = Gamma(1-b)/Gamma(a+1-b) M(a,b,x) + Gamma(b-1)/Gamma(a) x^{1-b} M(a-b+1,2-b,x)`.
///
/// Returns the value together with a cancellation estimate: the ratio of the
/// larger term's magnitude to the result. Digits lost to cancellation are
/// roughly `log10` of that ratio.
pub fn kummer_u(a: f64, b: f64, x: f64) -> Result<(f64, f64)> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("kummer_u requires x > 0, got {x}")));
    }
    if is_integer(b) {
        return Err(Error::Domain(format!(
            "kummer_u: integer b = {b} not supported (connection formula degenerates)"
        )));
    }
    let c1 = if is_nonpositive_integer(a + 1.0 - b) {
        0.0
    } else {
        gamma_fn(1.0 - b)? * recip_gamma(a + 1.0 - b)
    };
    let c2 = if is_nonpositive_integer(a) {
        0.0
    } else {
        gamma_fn(b - 1.0)? * recip_gamma(a)
    };
    let t1 = if c1 == 0.0 {
        Dd::ZERO
    } else {
        Dd::from_f64(c1) * kummer_m_dd(a, b, x)?
    };
    let t2 = if c2 == 0.0 {
        Dd::ZERO
    } else {
        Dd::from_f64(c2 * x.powf(1.0 - b)) * kummer_m_dd(a - b + 1.0, 2.0 - b, x)?
    };
    let value = t1 + t2;
    let big = t1.abs().to_f64().max(t2.abs().to_f64());
    let cancellation = if value.to_f64() == 0.0 { f64::INFINITY } else { big / value.abs().to_f64() };
    Ok((value.to_f64(), cancellation))
}
