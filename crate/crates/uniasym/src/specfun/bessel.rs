//! Bessel `J` oracle: ascending series with a double-double sum.

use crate::error::{Error, Result};
use crate::num::dd::Dd;
use crate::specfun::gamma::log_gamma;

/// `J_nu(x)` for `nu >= 0`, `x > 0`, desk scale (`nu <= 200`).
///
/// The alternating sum runs in double-double; the smooth prefactor
/// `(x/2)^nu / Gamma(nu+1)` is assembled from logs in doubles, which keeps
/// the overall relative error near 1e-14.
pub fn bessel_j_oracle(nu: f64, x: f64) -> Result<f64> {
    if nu < 0.0 || nu > 200.0 {
        return Err(Error::Domain(format!("bessel_j_oracle: nu = {nu} outside [0, 200]")));
    }
    if x <= 0.0 {
        return Err(Error::Domain(format!("bessel_j_oracle requires x > 0, got {x}")));
    }
    let q = Dd::from_f64(x) * Dd::from_f64(x) * Dd::from_f64(0.25);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let mut small_streak = 0;
    for k in 0..800 {
        let kf = k as f64;
        term = -term * q / (Dd::from_f64(kf + 1.0) * Dd::from_f64(nu + kf + 1.0));
        sum = sum + term;
        if term.abs() < sum.abs() * Dd::from_f64(1e-20) + Dd::from_f64(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    let log_pref = nu * (0.5 * x).ln() - log_gamma(nu + 1.0)?;
    Ok(log_pref.exp() * sum.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::adaptive_simpson;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn half_integer_closed_form() {
        // J_{1/2}(x) = sqrt(2/(pi x)) sin x
        let x = 1.0;
        let want = (2.0 / (std::f64::consts::PI * x)).sqrt() * x.sin();
        assert!(rel(bessel_j_oracle(0.5, x).unwrap(), want) < 1e-13);
    }

    #[test]
    fn j0_limit_and_frozen_values() {
        // J_0(x) -> 1 as x -> 0
        assert!((bessel_j_oracle(0.0, 1e-8).unwrap() - 1.0).abs() < 1e-15);
        assert!(rel(bessel_j_oracle(20.0, 19.9).unwrap(), 0.15932550119063686) < 1e-12);
        assert!(rel(bessel_j_oracle(100.0, 99.5).unwrap(), 0.086942749304561508) < 1e-12);
        assert!(rel(bessel_j_oracle(5.25, 3.7).unwrap(), 0.077286983934948509) < 1e-12);
    }

    /// Independent oracle: the contour integral over [inf - pi i, inf + pi i]
    /// collapsed to the Schlaefli form
    /// J_nu(x) = 1/pi Int_0^pi cos(nu t - x sin t) dt
    ///           - sin(nu pi)/pi Int_0^inf e^{-nu s - x sinh s} ds.
    #[test]
    fn against_contour_quadrature() {
        for &(nu, x) in &[(20.0, 19.9), (5.25, 3.7)] {
            let osc = adaptive_simpson(&|t: f64| (nu * t - x * t.sin()).cos(), 0.0, std::f64::consts::PI, 1e-14)
                / std::f64::consts::PI;
            let tail = if (nu - nu.round()).abs() < 1e-14 {
                0.0
            } else {
                -(nu * std::f64::consts::PI).sin() / std::f64::consts::PI
                    * adaptive_simpson(&|s: f64| (-nu * s - x * s.sinh()).exp(), 0.0, 30.0 / nu.max(1.0), 1e-15)
            };
            let oracle = osc + tail;
            let got = bessel_j_oracle(nu, x).unwrap();
            assert!(rel(got, oracle) < 1e-10, "nu={nu}: {got} vs {oracle}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j_oracle(-1.0, 1.0).is_err());
        assert!(bessel_j_oracle(1.0, 0.0).is_err());
        assert!(bessel_j_oracle(201.0, 1.0).is_err());
    }
}
