//! Airy function `Ai` and its derivative on the real line.
//!
//! Maclaurin series (in double-double to absorb the cancellation of the
//! oscillatory region) for `|x| < 9`, Poincare asymptotics beyond. Both
//! branches meet the 1e-13 relative target on `|x| <= 20`.

use crate::num::dd::Dd;

// Ai(0) = 3^(-2/3)/Gamma(2/3) and -Ai'(0) = 3^(-1/3)/Gamma(1/3)
const AI0: Dd = Dd { hi: 0.3550280538878172, lo: 2.05233632436212e-17 };
const AIP0: Dd = Dd { hi: 0.2588194037928068, lo: -2.522243111610832e-17 };
const SQRT_PI: Dd = Dd { hi: 1.772453850905516, lo: -7.666586499825799e-17 };

const SERIES_CUT: f64 = 9.0;

pub fn airy_ai(x: f64) -> f64 {
    if x.abs() < SERIES_CUT {
        series(Dd::from_f64(x)).0.to_f64()
    } else if x > 0.0 {
        asymptotic_pos(Dd::from_f64(x)).0.to_f64()
    } else {
        asymptotic_neg(Dd::from_f64(-x)).0.to_f64()
    }
}

pub fn airy_ai_prime(x: f64) -> f64 {
    if x.abs() < SERIES_CUT {
        series(Dd::from_f64(x)).1.to_f64()
    } else if x > 0.0 {
        asymptotic_pos(Dd::from_f64(x)).1.to_f64()
    } else {
        asymptotic_neg(Dd::from_f64(-x)).1.to_f64()
    }
}

/// Maclaurin series: Ai = c1 f - c2 g with
/// f = sum x^{3k}/prod, g = sum x^{3k+1}/prod.
fn series(x: Dd) -> (Dd, Dd) {
    let x3 = x * x * x;
    // f and g values
    let mut tf = Dd::ONE;
    let mut f = Dd::ONE;
    let mut tg = x;
    let mut g = x;
    // f' = x^2/2 * series, g' = series
    let mut tfp = x * x.mul_pow2(-1);
    let mut fp = tfp;
    let mut tgp = Dd::ONE;
    let mut gp = Dd::ONE;
    let mut k = 0.0;
    loop {
        tf = tf * x3 / Dd::from_f64((3.0 * k + 2.0) * (3.0 * k + 3.0));
        f = f + tf;
        tg = tg * x3 / Dd::from_f64((3.0 * k + 3.0) * (3.0 * k + 4.0));
        g = g + tg;
        tfp = tfp * x3 / Dd::from_f64((3.0 * k + 3.0) * (3.0 * k + 5.0));
        fp = fp + tfp;
        tgp = tgp * x3 / Dd::from_f64((3.0 * k + 1.0) * (3.0 * k + 3.0));
        gp = gp + tgp;
        if tf.hi.abs().max(tg.hi.abs()) < 1e-40 * (f.hi.abs() + g.hi.abs() + 1.0) {
            break;
        }
        k += 1.0;
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// u_k, v_k tails summed to the smallest term (the series are divergent).
fn uv_sums(xi: Dd, alternating: bool) -> (Dd, Dd) {
    let mut u = Dd::ONE;
    let mut su = Dd::ONE;
    let mut sv = Dd::ONE;
    let mut term_prev = f64::INFINITY;
    let mut k = 0.0;
    loop {
        let ratio = Dd::from_f64((6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0)));
        u = u * ratio / xi;
        if alternating {
            u = -u;
        }
        let v = u * Dd::from_f64((6.0 * k + 7.0) / (-(6.0 * k + 5.0)));
        if u.hi.abs() >= term_prev {
            break; // past the smallest term
        }
        term_prev = u.hi.abs();
        su = su + u;
        sv = sv + v;
        if u.hi.abs() < 1e-36 || k > 120.0 {
            break;
        }
        k += 1.0;
    }
    (su, sv)
}

fn asymptotic_pos(x: Dd) -> (Dd, Dd) {
    let xi = x.sqrt() * x * Dd::from_f64(2.0 / 3.0);
    let (su, sv) = uv_sums(xi, true);
    let x14 = x.sqrt().sqrt();
    let pre = (-xi).exp() / (SQRT_PI.mul_pow2(1));
    (pre / x14 * su, -pre * x14 * sv)
}

/// Oscillatory branch, argument `-x` with `x > 0`.
fn asymptotic_neg(x: Dd) -> (Dd, Dd) {
    let xi = x.sqrt() * x * Dd::from_f64(2.0 / 3.0);
    // even/odd split of the u- and v-series with alternating signs in k
    let mut u = Dd::ONE;
    let mut p = Dd::ONE; // sum (-1)^k u_{2k} xi^{-2k}
    let mut q = Dd::ZERO; // sum (-1)^k u_{2k+1} xi^{-2k-1}
    let mut pv = Dd::ONE;
    let mut qv = Dd::ZERO;
    let mut term_prev = f64::INFINITY;
    let mut k = 0u32;
    loop {
        let kk = k as f64;
        let ratio = Dd::from_f64((6.0 * kk + 1.0) * (6.0 * kk + 5.0) / (72.0 * (kk + 1.0)));
        u = u * ratio / xi;
        if u.hi.abs() >= term_prev || u.hi.abs() < 1e-36 || k > 120 {
            break;
        }
        term_prev = u.hi.abs();
        let v = u * Dd::from_f64((6.0 * kk + 7.0) / (-(6.0 * kk + 5.0)));
        // iteration k holds u_j xi^-j with j = k+1; the sign is (-1)^(j/2)
        let j = k + 1;
        let sign = if j % 4 == 0 || j % 4 == 1 { 1.0 } else { -1.0 };
        let su = u * Dd::from_f64(sign);
        let sv = v * Dd::from_f64(sign);
        if j % 2 == 1 {
            q = q + su;
            qv = qv + sv;
        } else {
            p = p + su;
            pv = pv + sv;
        }
        k += 1;
    }
    let x14 = x.sqrt().sqrt();
    let (s, c) = {
        // sin/cos(xi - pi/4)
        let arg = xi - Dd::PI_2.mul_pow2(-1);
        arg.sin_cos()
    };
    let ai = (c * p + s * q) / (SQRT_PI * x14);
    let aip = (s * pv - c * qv) * x14 / SQRT_PI;
    (ai, aip)
}
