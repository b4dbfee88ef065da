//! The four coalescence geometries and their map mechanics.
//!
//! Each case knows its phase `f(t, z)`, canonical phase `p(tau, zeta)`,
//! weight `q`, saddle locations on both sides, and the factored form of
//! `G_0`. The inverse map `t(tau)` is tracked through either the entire
//! equation `z sinh t - t = p(tau)` (Bessel) or the exponentiated form,
//! which for the hypergeometric cases is a plain quadratic in `t` --
//! single-valued in `tau`, so continuation reduces to root tracking with
//! no logarithm branches anywhere.

use crate::error::{Error, Result};
use crate::kernels::KernelCase;
use crate::num::cops::{cexp, ccosh, csinh, C64};
use crate::num::scalar::Scalar;
use num_complex::Complex;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CaseTag {
    AiryBessel,
    HypNear1,
    HypNearM1,
    EndpointGeneric,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::AiryBessel => "bessel",
            CaseTag::HypNear1 => "hyp-near1",
            CaseTag::HypNearM1 => "hyp-nearm1",
            CaseTag::EndpointGeneric => "endpoint",
        };
        f.write_str(s)
    }
}

/// User-supplied analytic amplitude for the endpoint case.
pub type G0Fn = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// One coalescence geometry with its parameters.
#[derive(Clone)]
pub enum Case {
    /// `J_lambda(lambda z)`: phase `z sinh t - t`, cubic canonical form.
    AiryBessel { z: f64 },
    /// Gauss 2F1 with argument near +1: log-linear canonical form, Kummer-M
    /// approximants. Weight parameters `(a, b, c)`.
    HypNear1 { a: f64, b: f64, c: f64, z: f64 },
    /// The mirror case near -1: Kummer-U approximants.
    HypNearM1 { a: f64, b: f64, c: f64, z: f64 },
    /// Saddle near an endpoint: Gaussian canonical form with weight
    /// `tau^{beta-1}`; `G_0` is supplied by the caller.
    Endpoint { beta: f64, zeta: f64, g0: G0Fn },
}

impl fmt::Debug for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::AiryBessel { z } => write!(f, "AiryBessel {{ z: {z} }}"),
            Case::HypNear1 { a, b, c, z } => write!(f, "HypNear1 {{ a: {a}, b: {b}, c: {c}, z: {z} }}"),
            Case::HypNearM1 { a, b, c, z } => write!(f, "HypNearM1 {{ a: {a}, b: {b}, c: {c}, z: {z} }}"),
            Case::Endpoint { beta, zeta, .. } => write!(f, "Endpoint {{ beta: {beta}, zeta: {zeta} }}"),
        }
    }
}

impl Case {
    pub fn tag(&self) -> CaseTag {
        match self {
            Case::AiryBessel { .. } => CaseTag::AiryBessel,
            Case::HypNear1 { .. } => CaseTag::HypNear1,
            Case::HypNearM1 { .. } => CaseTag::HypNearM1,
            Case::Endpoint { .. } => CaseTag::EndpointGeneric,
        }
    }

    pub fn kernel_case(&self) -> KernelCase {
        match self {
            Case::AiryBessel { .. } => KernelCase::AiryBessel,
            Case::HypNear1 { .. } => KernelCase::HypNear1,
            Case::HypNearM1 { .. } => KernelCase::HypNearM1,
            Case::Endpoint { .. } => KernelCase::Endpoint,
        }
    }

    /// Weight parameters in the order `initial_kernels` expects.
    pub fn kernel_params(&self) -> Option<(f64, f64, f64)> {
        match *self {
            Case::AiryBessel { .. } => None,
            Case::HypNear1 { a, b, c, .. } | Case::HypNearM1 { a, b, c, .. } => Some((a, b, c)),
            Case::Endpoint { beta, .. } => Some((beta, 0.0, 0.0)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Case::AiryBessel { z } => {
                if !(z > 0.0) || !z.is_finite() {
                    return Err(Error::Domain(format!("bessel case needs z > 0, got {z}")));
                }
            }
            Case::HypNear1 { c, z, .. } => {
                if !(z > 0.0 && z <= 1.0) {
                    return Err(Error::Domain(format!("near-+1 case needs z in (0, 1], got {z}")));
                }
                if c <= 0.0 && (c - c.round()).abs() < 1e-12 {
                    return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
                }
            }
            Case::HypNearM1 { z, .. } => {
                if !(z >= -1.0 && z < 0.0) {
                    return Err(Error::Domain(format!("near--1 case needs z in [-1, 0), got {z}")));
                }
            }
            Case::Endpoint { beta, .. } => {
                if !(beta > 0.0) {
                    return Err(Error::Domain(format!("endpoint case needs beta > 0, got {beta}")));
                }
            }
        }
        Ok(())
    }

    /// Canonical phase `p(tau, zeta)`.
    pub fn p<S: Scalar>(&self, tau: Complex<S>, zeta: f64) -> Complex<S> {
        let zt = S::from_f64(zeta);
        match self {
            Case::AiryBessel { .. } => {
                tau * tau * tau / Complex::new(S::from_f64(3.0), S::zero())
                    - tau * Complex::new(zt, S::zero())
            }
            Case::HypNear1 { .. } => {
                // ln((tau - 2 zeta)/tau) + tau: only used through exp, see map_rhs
                unreachable!("hyp cases use the exponentiated map")
            }
            Case::HypNearM1 { .. } => unreachable!("hyp cases use the exponentiated map"),
            Case::Endpoint { .. } => {
                tau * Complex::new(zt, S::zero()) - tau * tau * Complex::new(S::from_f64(0.5), S::zero())
            }
        }
    }

    /// `p'(tau, zeta)`.
    pub fn dp<S: Scalar>(&self, tau: Complex<S>, zeta: f64) -> Complex<S> {
        let zt = Complex::new(S::from_f64(zeta), S::zero());
        let two_zt = Complex::new(S::from_f64(2.0 * zeta), S::zero());
        let one = Complex::new(S::one(), S::zero());
        match self {
            Case::AiryBessel { .. } => tau * tau - zt,
            Case::HypNear1 { .. } => {
                (tau * tau - two_zt * tau + two_zt) / (tau * (tau - two_zt))
            }
            Case::HypNearM1 { .. } => {
                -((tau * tau + two_zt * tau + two_zt) / (tau * (tau + two_zt)))
            }
            Case::Endpoint { .. } => zt - tau * one,
        }
    }

    /// `f'(t, z)` of the original phase (rational/entire, single-valued).
    pub fn df<S: Scalar>(&self, t: Complex<S>) -> Complex<S> {
        let one = Complex::new(S::one(), S::zero());
        match *self {
            Case::AiryBessel { z } => ccosh(t) * Complex::new(S::from_f64(z), S::zero()) - one,
            Case::HypNear1 { z, .. } => {
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                -one / (h - t) + one / (one - t) - one / t
            }
            Case::HypNearM1 { z, .. } => {
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                one / (t + h) - one / t - one / (one + t)
            }
            Case::Endpoint { .. } => one,
        }
    }

    /// Map equation in the branch-free form used by the Newton continuation:
    /// residual and d(residual)/dt at `(t, tau)`.
    ///
    /// Bessel: `z sinh t - t - p(tau)` (entire). Hyp cases: the exponentiated
    /// quadratic `E(tau) t (1 -+ t) -+ (h -+ t)` with the single-valued
    /// `E = exp(p + p0)`. Endpoint: `t - tau` (identity map).
    pub fn map_residual<S: Scalar>(
        &self,
        t: Complex<S>,
        tau: Complex<S>,
        zeta: f64,
        p0: f64,
    ) -> (Complex<S>, Complex<S>) {
        let one = Complex::new(S::one(), S::zero());
        match *self {
            Case::AiryBessel { z } => {
                let zc = Complex::new(S::from_f64(z), S::zero());
                let rhs = self.p(tau, zeta);
                (csinh(t) * zc - t - rhs, ccosh(t) * zc - one)
            }
            Case::HypNear1 { z, .. } => {
                // E t^2 - (E+1) t + h = 0, E = ((tau-2z)/tau) e^{tau - zeta}
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                let e = self.exp_map(tau, zeta, p0);
                (e * t * t - (e + one) * t + h, e * t * Complex::new(S::from_f64(2.0), S::zero()) - e - one)
            }
            Case::HypNearM1 { z, .. } => {
                // E t^2 + (E-1) t - h = 0, E = ((tau+2z)/tau) e^{-tau - zeta}
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                let e = self.exp_map(tau, zeta, p0);
                (e * t * t + (e - one) * t - h, e * t * Complex::new(S::from_f64(2.0), S::zero()) + e - one)
            }
            Case::Endpoint { .. } => (t - tau, one),
        }
    }

    /// `E(tau) = exp(p(tau) + p0)` for the hyp cases (single-valued).
    pub fn exp_map<S: Scalar>(&self, tau: Complex<S>, zeta: f64, p0: f64) -> Complex<S> {
        let two_zt = Complex::new(S::from_f64(2.0 * zeta), S::zero());
        let p0c = Complex::new(S::from_f64(p0), S::zero());
        match self {
            Case::HypNear1 { .. } => (tau - two_zt) / tau * cexp(tau + p0c),
            Case::HypNearM1 { .. } => (tau + two_zt) / tau * cexp(-tau + p0c),
            _ => unreachable!("exp_map only exists for the hyp cases"),
        }
    }

    /// Both roots of the exponentiated quadratic map at `tau` (hyp cases).
    pub fn map_roots<S: Scalar>(&self, tau: Complex<S>, zeta: f64, p0: f64) -> (Complex<S>, Complex<S>) {
        use crate::num::cops::csqrt;
        let one = Complex::new(S::one(), S::zero());
        let h = match *self {
            Case::HypNear1 { z, .. } | Case::HypNearM1 { z, .. } => {
                Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero())
            }
            _ => unreachable!("map_roots only exists for the hyp cases"),
        };
        let e = self.exp_map(tau, zeta, p0);
        match self {
            Case::HypNear1 { .. } => {
                let disc = csqrt((e + one) * (e + one) - e * h * Complex::new(S::from_f64(4.0), S::zero()));
                (((e + one) + disc) / (e * Complex::new(S::from_f64(2.0), S::zero())),
                 ((e + one) - disc) / (e * Complex::new(S::from_f64(2.0), S::zero())))
            }
            Case::HypNearM1 { .. } => {
                let disc = csqrt((e - one) * (e - one) + e * h * Complex::new(S::from_f64(4.0), S::zero()));
                ((-(e - one) + disc) / (e * Complex::new(S::from_f64(2.0), S::zero())),
                 (-(e - one) - disc) / (e * Complex::new(S::from_f64(2.0), S::zero())))
            }
            _ => unreachable!(),
        }
    }

    /// Saddle points in the `t`-plane, upper-half-plane convention first.
    pub fn saddles_t(&self, theta: f64) -> (C64, C64) {
        match *self {
            Case::AiryBessel { z } => {
                if z <= 1.0 {
                    let ts = (1.0 / z).acosh();
                    (C64::new(ts, 0.0), C64::new(-ts, 0.0))
                } else {
                    let ts = (1.0 / z).acos();
                    (C64::new(0.0, ts), C64::new(0.0, -ts))
                }
            }
            Case::HypNear1 { .. } => {
                // t± = (1 + e^{±i theta})/2
                let e = C64::from_polar(1.0, theta);
                ((1.0 + e) / 2.0, (1.0 + e.conj()) / 2.0)
            }
            Case::HypNearM1 { .. } => {
                // t± = (e^{±i theta} - 1)/2
                let e = C64::from_polar(1.0, theta);
                ((e - 1.0) / 2.0, (e.conj() - 1.0) / 2.0)
            }
            Case::Endpoint { zeta, .. } => (C64::new(zeta, 0.0), C64::new(zeta, 0.0)),
        }
    }

    /// Saddle points in the `tau`-plane, paired with `saddles_t`: the first
    /// component corresponds to the first `t`-saddle under the map.
    pub fn saddles_tau(&self, zeta: f64, sigma: f64) -> (C64, C64) {
        match self {
            Case::AiryBessel { .. } => {
                if zeta >= 0.0 {
                    (C64::new(zeta.sqrt(), 0.0), C64::new(-zeta.sqrt(), 0.0))
                } else {
                    (C64::new(0.0, (-zeta).sqrt()), C64::new(0.0, -(-zeta).sqrt()))
                }
            }
            Case::HypNear1 { .. } => {
                // tau± = 1 - e^{±i sigma} pairs with t± = (1 + e^{±i theta})/2
                let e = C64::from_polar(1.0, sigma);
                (1.0 - e, 1.0 - e.conj())
            }
            Case::HypNearM1 { .. } => {
                let e = C64::from_polar(1.0, sigma);
                (e - 1.0, e.conj() - 1.0)
            }
            Case::Endpoint { zeta, .. } => (C64::new(*zeta, 0.0), C64::new(*zeta, 0.0)),
        }
    }

    /// The multivalued factors of `G_0` as (base value, real exponent) pairs;
    /// `G_0 = prod_i u_i^{e_i} * dt/dtau` with `dt/dtau = p'/f'` single-valued.
    pub fn g0_factors<S: Scalar>(
        &self,
        tau: Complex<S>,
        t: Complex<S>,
        zeta: f64,
    ) -> Vec<(Complex<S>, f64)> {
        let one = Complex::new(S::one(), S::zero());
        let two_zt = Complex::new(S::from_f64(2.0 * zeta), S::zero());
        match *self {
            Case::AiryBessel { .. } => vec![],
            Case::HypNear1 { a, b, c, z } => {
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                vec![
                    ((tau - two_zt) / (h - t), b),
                    ((one - t) / tau, b - c),
                    (t, c - a - 1.0),
                ]
            }
            Case::HypNearM1 { a, b, c, z } => {
                let h = Complex::new(S::from_f64((1.0 + z) / 2.0), S::zero());
                vec![
                    (t / tau, c - a - 1.0),
                    (one + t, b - c),
                    ((tau + two_zt) / (h + t), b),
                ]
            }
            Case::Endpoint { .. } => vec![],
        }
    }

    /// Endpoint amplitude, `1` elsewhere (the Bessel `G_0` is just `dt/dtau`).
    pub fn g0_extra<S: Scalar>(&self, tau: Complex<S>) -> Complex<S> {
        match self {
            Case::Endpoint { g0, .. } => {
                let v = g0(C64::new(tau.re.to_f64(), tau.im.to_f64()));
                Complex::new(S::from_f64(v.re), S::from_f64(v.im))
            }
            _ => Complex::new(S::one(), S::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Case::AiryBessel { z: 0.995 }.validate().is_ok());
        assert!(Case::AiryBessel { z: -1.0 }.validate().is_err());
        assert!(Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 }.validate().is_ok());
        assert!(Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 1.5 }.validate().is_err());
        assert!(Case::HypNearM1 { a: 0.5, b: 0.5, c: 0.5, z: -0.9 }.validate().is_ok());
        assert!(Case::HypNearM1 { a: 0.5, b: 0.5, c: 0.5, z: 0.5 }.validate().is_err());
    }

    #[test]
    fn saddle_pairing_residual() {
        // f(t±) = p(tau±) + p0 must hold for the paired saddles
        let z = 0.9_f64;
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z };
        let theta = z.acos();
        // sigma + sin sigma = theta
        let mut sigma = theta / 2.0;
        for _ in 0..60 {
            sigma -= (sigma + sigma.sin() - theta) / (1.0 + sigma.cos());
        }
        let zeta = 1.0 - sigma.cos();
        let p0 = -zeta;
        let (tp, _) = case.saddles_tau(zeta, sigma);
        let (tt, _) = case.saddles_t(theta);
        let (resid, _) = case.map_residual::<f64>(tt, tp, zeta, p0);
        assert!(resid.norm() < 1e-12, "saddle correspondence residual {resid}");
    }

    #[test]
    fn bessel_map_residual_at_saddle() {
        let z = 0.995_f64;
        let case = Case::AiryBessel { z };
        let w0 = (1.0 / z).acosh() - (1.0 - z * z).sqrt();
        let zeta = (1.5 * w0).powf(2.0 / 3.0);
        let (tp, _) = case.saddles_tau(zeta, 0.0);
        let (tt, _) = case.saddles_t(0.0);
        let (resid, _) = case.map_residual::<f64>(tt, tp, zeta, 0.0);
        assert!(resid.norm() < 1e-13);
    }
}
