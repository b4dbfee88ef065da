//! Gauss hypergeometric series oracle in double-double.
//!
//! For the acceptance configurations (`a+lambda = 20.5`, `b-lambda = -19.5`)
//! the terms grow to ~1e14 at `x = 0.95` before the alternating sum settles
//! near -4; plain doubles would be left with no correct digits. Double-double
//! keeps ~17 after the cancellation.

use crate::error::{Error, Result};
use crate::num::dd::Dd;

pub fn gauss_2f1_oracle(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if x.abs() >= 1.0 {
        return Err(Error::Domain(format!("gauss_2f1_oracle requires |x| < 1, got {x}")));
    }
    if c <= 0.0 && (c - c.round()).abs() < 1e-12 {
        return Err(Error::Domain(format!("gauss_2f1_oracle: c = {c} is a non-positive integer")));
    }
    let terminating_a = a <= 0.0 && (a - a.round()).abs() < 1e-14;
    let terminating_b = b <= 0.0 && (b - b.round()).abs() < 1e-14;
    let n_exact = if terminating_a || terminating_b {
        let na = if terminating_a { (-a.round()) as usize } else { usize::MAX };
        let nb = if terminating_b { (-b.round()) as usize } else { usize::MAX };
        na.min(nb)
    } else {
        usize::MAX
    };
    let xd = Dd::from_f64(x);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut small_streak = 0;
    for k in 0..6000 {
        if k >= n_exact {
            return Ok(sum.to_f64());
        }
        let kf = k as f64;
        term = term * Dd::from_f64(a + kf) * Dd::from_f64(b + kf) * xd
            / (Dd::from_f64(c + kf) * Dd::from_f64(kf + 1.0));
        sum = sum + term;
        if term.abs() < sum.abs() * Dd::from_f64(1e-20) + Dd::from_f64(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum.to_f64());
            }
        } else {
            small_streak = 0;
        }
    }
    Err(Error::Domain(format!(
        "gauss_2f1_oracle({a},{b},{c},{x}): series did not converge in 6000 terms"
    )))
}
