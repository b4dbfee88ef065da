//! Complex helpers generic over the working [`Scalar`]: transcendental
//! functions `num_complex` only provides for `Float` types, plus the
//! branch-continued power used when tracking multivalued factors along
//! a contour.

use super::scalar::Scalar;
use num_complex::Complex;

pub type C64 = Complex<f64>;

#[inline]
pub fn cx<S: Scalar>(re: f64, im: f64) -> Complex<S> {
    Complex::new(S::from_f64(re), S::from_f64(im))
}

#[inline]
pub fn to_c64<S: Scalar>(z: Complex<S>) -> C64 {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

#[inline]
pub fn cabs<S: Scalar>(z: Complex<S>) -> S {
    (z.re * z.re + z.im * z.im).sqrt()
}

#[inline]
pub fn carg<S: Scalar>(z: Complex<S>) -> S {
    z.im.atan2(z.re)
}

#[inline]
pub fn cexp<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let r = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Complex::new(r * c, r * s)
}

#[inline]
pub fn cln<S: Scalar>(z: Complex<S>) -> Complex<S> {
    Complex::new((z.re * z.re + z.im * z.im).ln().mul_pow2(-1), carg(z))
}

pub fn csqrt<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let zero = S::zero();
    if z.im == zero {
        return if z.re >= zero {
            Complex::new(z.re.sqrt(), zero)
        } else {
            Complex::new(zero, (-z.re).sqrt())
        };
    }
    let m = cabs(z);
    let w = ((m + z.re.abs()).mul_pow2(-1)).sqrt();
    if z.re >= zero {
        Complex::new(w, z.im.mul_pow2(-1) / w)
    } else {
        let im = if z.im >= zero { w } else { -w };
        Complex::new(z.im.abs().mul_pow2(-1) / w, im)
    }
}

/// Principal branch of `z^e` for real exponent `e`.
pub fn cpow<S: Scalar>(z: Complex<S>, e: S) -> Complex<S> {
    let l = cln(z);
    cexp(Complex::new(l.re * e, l.im * e))
}

/// `z sinh(t)`-style helpers need complex sinh/cosh.
pub fn csinh<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let (sh, ch) = z.re.sinh_cosh();
    let (s, c) = z.im.sin_cos();
    Complex::new(sh * c, ch * s)
}

pub fn ccosh<S: Scalar>(z: Complex<S>) -> Complex<S> {
    let (sh, ch) = z.re.sinh_cosh();
    let (s, c) = z.im.sin_cos();
    Complex::new(ch * c, sh * s)
}

/// Compensated (Neumaier) summation of complex values.
#[derive(Clone, Copy, Debug)]
pub struct CSum<S: Scalar> {
    s: Complex<S>,
    c: Complex<S>,
}

impl<S: Scalar> CSum<S> {
    pub fn new() -> Self {
        CSum { s: Complex::new(S::zero(), S::zero()), c: Complex::new(S::zero(), S::zero()) }
    }

    pub fn add(&mut self, v: Complex<S>) {
        self.s = add_comp(self.s, v, &mut self.c);
    }

    pub fn value(self) -> Complex<S> {
        self.s + self.c
    }
}

impl<S: Scalar> Default for CSum<S> {
    fn default() -> Self {
        Self::new()
    }
}

fn add_comp<S: Scalar>(s: Complex<S>, v: Complex<S>, c: &mut Complex<S>) -> Complex<S> {
    let t_re = s.re + v.re;
    c.re = c.re
        + if s.re.abs() >= v.re.abs() { (s.re - t_re) + v.re } else { (v.re - t_re) + s.re };
    let t_im = s.im + v.im;
    c.im = c.im
        + if s.im.abs() >= v.im.abs() { (s.im - t_im) + v.im } else { (v.im - t_im) + s.im };
    Complex::new(t_re, t_im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dd::Dd;

    fn agree(a: Complex<Dd>, b: C64, tol: f64) -> bool {
        let d = (to_c64(a) - b).norm();
        d <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn dd_complex_matches_f64_builtins() {
        for &(re, im) in &[(0.3, 1.2), (-2.0, 0.7), (1.5, -3.3), (-0.2, -0.1), (4.0, 0.0)] {
            let z64 = C64::new(re, im);
            let zdd = cx::<Dd>(re, im);
            assert!(agree(cexp(zdd), z64.exp(), 1e-14), "exp {z64}");
            assert!(agree(csqrt(zdd), z64.sqrt(), 1e-14), "sqrt {z64}");
            assert!(agree(csinh(zdd), z64.sinh(), 1e-14), "sinh {z64}");
            assert!(agree(ccosh(zdd), z64.cosh(), 1e-14), "cosh {z64}");
            if re != 4.0 {
                assert!(agree(cln(zdd), z64.ln(), 1e-14), "ln {z64}");
                assert!(agree(cpow(zdd, Dd::from_f64(0.37)), z64.powf(0.37), 1e-13), "pow {z64}");
            }
        }
    }

    #[test]
    fn csqrt_squares_back() {
        for &(re, im) in &[(-1.0, 1e-3), (-1.0, -1e-3), (0.0, 2.0), (3.0, -4.0)] {
            let z = cx::<Dd>(re, im);
            let r = csqrt(z);
            let back = r * r - z;
            assert!(cabs(back).to_f64() < 1e-29, "({re},{im})");
        }
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut acc = CSum::<f64>::new();
        let big = 1e16;
        acc.add(C64::new(big, 0.0));
        for _ in 0..10 {
            acc.add(C64::new(0.1, 0.0));
        }
        acc.add(C64::new(-big, 0.0));
        assert!((acc.value().re - 1.0).abs() < 1e-12);
    }
}
