//! Double-double arithmetic: an unevaluated sum of two `f64`s giving
//! roughly 31 significant decimal digits.
//!
//! The error-free transformations (`two_sum`, `two_prod`) and the
//! add/mul/div/sqrt algorithms follow Dekker's and the QD library's
//! accurate variants. Transcendental functions use argument reduction
//! plus Taylor series, with one or two Newton refinements where a good
//! `f64` seed exists.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

/// `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
    pub const TWO_PI: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };
    pub const PI_2: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
    pub const LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
    /// Machine epsilon of the format, 2^-104.
    pub const EPS: f64 = 4.93038065763132e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn mul_pow2(self, k: i32) -> Dd {
        let f = (k as f64).exp2();
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn floor(self) -> Dd {
        let f = self.hi.floor();
        if f == self.hi {
            let (s, e) = quick_two_sum(f, self.lo.floor());
            Dd { hi: s, lo: e }
        } else {
            Dd { hi: f, lo: 0.0 }
        }
    }

    pub fn round(self) -> Dd {
        (self + Dd::from_f64(0.5)).floor()
    }

    pub fn trunc(self) -> Dd {
        if self.hi >= 0.0 { self.floor() } else { -(-self).floor() }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let r = (self - Dd::from_f64(ax) * Dd::from_f64(ax)).hi * (x * 0.5);
        let (s, e) = quick_two_sum(ax, r);
        Dd { hi: s, lo: e }
    }

    pub fn exp(self) -> Dd {
        // e^x = 2^m * (e^r)^(2^9),  r = (x - m ln2) / 2^9
        if self.hi <= -709.0 {
            return Dd::ZERO;
        }
        if self.hi >= 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        let m = (self.hi / std::f64::consts::LN_2 + 0.5).floor();
        let r = (self - Dd::LN2 * Dd::from_f64(m)).mul_pow2(-9);
        // expm1(r) by Taylor; |r| <= ln2 / 2^10 ~ 6.8e-4
        let mut p = r * r.mul_pow2(-1);
        let mut s = r + p;
        let mut k = 3.0;
        loop {
            p = p * r / Dd::from_f64(k);
            s = s + p;
            if p.hi.abs() <= 1e-35 {
                break;
            }
            k += 1.0;
        }
        // undo the 2^9 reduction on expm1: s <- 2s + s^2, nine times
        for _ in 0..9 {
            s = s.mul_pow2(1) + s * s;
        }
        (s + Dd::ONE).mul_pow2(m as i32)
    }

    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0, "ln of non-positive double-double");
        let mut y = Dd::from_f64(self.hi.ln());
        // Newton: y += x e^-y - 1, doubles correct digits per step
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        // reduce modulo pi/2, then Taylor on |r| <= pi/4
        let q = (self.hi / std::f64::consts::FRAC_PI_2).round();
        let r = self - Dd::PI_2 * Dd::from_f64(q);
        let (s, c) = sincos_taylor(r);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.hi == 0.0 && y.lo == 0.0 {
            return if x.hi >= 0.0 { Dd::ZERO } else { Dd::PI };
        }
        if x.hi == 0.0 && x.lo == 0.0 {
            return if y.hi > 0.0 { Dd::PI_2 } else { -Dd::PI_2 };
        }
        let mut z = Dd::from_f64(y.hi.atan2(x.hi));
        // Newton on f(z) = y cos z - x sin z
        for _ in 0..2 {
            let (sz, cz) = z.sin_cos();
            z = z + (y * cz - x * sz) / (x * cz + y * sz);
        }
        z
    }

    pub fn sinh_cosh(self) -> (Dd, Dd) {
        if self.hi.abs() < 0.35 {
            // Taylor sinh to avoid cancellation, cosh from identity
            let x2 = self * self;
            let mut t = self;
            let mut s = self;
            let mut k = 1.0;
            loop {
                t = t * x2 / Dd::from_f64((k + 1.0) * (k + 2.0));
                s = s + t;
                if t.hi.abs() <= 1e-35 * s.hi.abs().max(1e-300) {
                    break;
                }
                k += 2.0;
            }
            let c = (Dd::ONE + s * s).sqrt();
            (s, c)
        } else {
            let e = self.exp();
            let ei = Dd::ONE / e;
            ((e - ei).mul_pow2(-1), (e + ei).mul_pow2(-1))
        }
    }

    pub fn powi(self, n: i32) -> Dd {
        let mut result = Dd::ONE;
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }
}

fn sincos_taylor(r: Dd) -> (Dd, Dd) {
    // |r| <= pi/4
    let x2 = r * r;
    let mut t = r;
    let mut s = r;
    let mut k = 1.0;
    loop {
        t = -t * x2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        s = s + t;
        if t.hi.abs() <= 1e-35 {
            break;
        }
        k += 2.0;
    }
    let mut t = Dd::ONE;
    let mut c = Dd::ONE;
    let mut k = 0.0;
    loop {
        t = -t * x2 / Dd::from_f64((k + 1.0) * (k + 2.0));
        c = c + t;
        if t.hi.abs() <= 1e-35 {
            break;
        }
        k += 2.0;
    }
    (s, c)
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (s1, s2) = quick_two_sum(s1, s2 + t2);
        Dd { hi: s1, lo: s2 }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }
}

impl Div for Dd {
    type Output = Dd;
    #[inline]
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from_f64(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, o: Dd) -> Dd {
        self - (self / o).trunc() * o
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, o: &Dd) -> Option<Ordering> {
        match self.hi.partial_cmp(&o.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&o.lo),
            other => other,
        }
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}", self.hi, self.lo)
    }
}

impl num_traits::Zero for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Dd {
        Dd::ONE
    }
}

impl num_traits::Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        f64::from_str_radix_compat(s, radix)
    }
}

trait FromStrRadixCompat {
    fn from_str_radix_compat(s: &str, radix: u32) -> Result<Dd, std::num::ParseFloatError>;
}

impl FromStrRadixCompat for f64 {
    fn from_str_radix_compat(s: &str, radix: u32) -> Result<Dd, std::num::ParseFloatError> {
        assert_eq!(radix, 10, "only radix 10 supported");
        s.parse::<f64>().map(Dd::from_f64)
    }
}
