//! Exact rational-function kernels `A_{s,n}(tau)` and the per-case
//! recurrence that advances `s -> s+1`.
//!
//! Every case shares the step
//!
//! ```text
//! A_{s+1} = (1/p') * ( A' + (q'-logderiv with sign folded) * A )
//! ```
//!
//! where `1/p'` and the weight log-derivative are fixed rational functions
//! whose denominators factor over a small per-case base set (`tau`,
//! `tau -+ 2 zeta`, the saddle quadratic). Advancing a kernel is therefore
//! pure polynomial arithmetic: the denominator stays a product of the same
//! monic bases with growing multiplicities, and only the numerator is a
//! general polynomial.

use crate::error::{Error, Result};
use crate::num::cops::{cabs, to_c64};
use crate::num::scalar::Scalar;
use num_complex::Complex;
use serde_json::json;

/// Dense polynomial with complex coefficients, ascending degree.
#[derive(Clone, Debug)]
pub struct PolyC<S: Scalar> {
    pub c: Vec<Complex<S>>,
}

impl<S: Scalar> PolyC<S> {
    pub fn new(c: Vec<Complex<S>>) -> Self {
        let mut p = PolyC { c };
        p.trim();
        p
    }

    pub fn from_re(re: &[f64]) -> Self {
        PolyC::new(re.iter().map(|&x| Complex::new(S::from_f64(x), S::zero())).collect())
    }

    pub fn one() -> Self {
        PolyC { c: vec![Complex::new(S::one(), S::zero())] }
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0].re == S::zero() && self.c[0].im == S::zero()
    }

    fn max_coeff(&self) -> f64 {
        self.c.iter().map(|z| cabs(*z).to_f64()).fold(0.0, f64::max)
    }

    /// Drop trailing coefficients below 1e-14 of the largest one, so degree
    /// arithmetic (tail orders) sees exact zeros instead of roundoff dust.
    fn trim(&mut self) {
        let scale = self.max_coeff();
        let cut = S::from_f64(1e-14 * scale.max(f64::MIN_POSITIVE));
        while self.c.len() > 1 {
            let last = self.c.last().unwrap();
            if cabs(*last) < cut {
                self.c.pop();
            } else {
                break;
            }
        }
        if self.c.is_empty() {
            self.c.push(Complex::new(S::zero(), S::zero()));
        }
    }

    pub fn mul(&self, o: &PolyC<S>) -> PolyC<S> {
        let zero = Complex::new(S::zero(), S::zero());
        let mut out = vec![zero; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        PolyC::new(out)
    }

    pub fn add(&self, o: &PolyC<S>) -> PolyC<S> {
        let zero = Complex::new(S::zero(), S::zero());
        let mut out = vec![zero; self.c.len().max(o.c.len())];
        for (i, &a) in self.c.iter().enumerate() {
            out[i] = out[i] + a;
        }
        for (i, &b) in o.c.iter().enumerate() {
            out[i] = out[i] + b;
        }
        PolyC::new(out)
    }

    pub fn scale(&self, k: Complex<S>) -> PolyC<S> {
        PolyC::new(self.c.iter().map(|&a| a * k).collect())
    }

    pub fn derivative(&self) -> PolyC<S> {
        if self.c.len() == 1 {
            return PolyC::new(vec![Complex::new(S::zero(), S::zero())]);
        }
        PolyC::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &a)| a * Complex::new(S::from_f64((i + 1) as f64), S::zero()))
                .collect(),
        )
    }

    pub fn eval(&self, x: Complex<S>) -> Complex<S> {
        let mut v = Complex::new(S::zero(), S::zero());
        for &a in self.c.iter().rev() {
            v = v * x + a;
        }
        v
    }

    /// Exact division by the monomial `tau` (requires zero constant term).
    fn div_by_tau(&mut self) {
        self.c.remove(0);
        if self.c.is_empty() {
            self.c.push(Complex::new(S::zero(), S::zero()));
        }
    }
}

/// Denominator as a product of fixed monic bases with multiplicities; the
/// recurrence never introduces a new base.
#[derive(Clone, Debug)]
pub struct DenomFactorSet<S: Scalar> {
    pub bases: Vec<PolyC<S>>,
    /// Roots of each base, for pole-distance checks.
    pub roots: Vec<Vec<Complex<S>>>,
    pub mults: Vec<u32>,
}

impl<S: Scalar> DenomFactorSet<S> {
    pub fn degree(&self) -> usize {
        self.bases
            .iter()
            .zip(&self.mults)
            .map(|(b, &m)| b.degree() * m as usize)
            .sum()
    }

    fn eval(&self, x: Complex<S>) -> Complex<S> {
        let mut v = Complex::new(S::one(), S::zero());
        for (b, &m) in self.bases.iter().zip(&self.mults) {
            if m > 0 {
                let bx = b.eval(x);
                let mut p = Complex::new(S::one(), S::zero());
                for _ in 0..m {
                    p = p * bx;
                }
                v = v * p;
            }
        }
        v
    }

    fn min_pole_distance(&self, x: Complex<S>) -> f64 {
        let mut d = f64::INFINITY;
        for (roots, &m) in self.roots.iter().zip(&self.mults) {
            if m == 0 {
                continue;
            }
            for &r in roots {
                d = d.min(cabs(x - r).to_f64());
            }
        }
        d
    }
}

/// Which coalescence geometry a kernel belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum KernelCase {
    AiryBessel,
    HypNear1,
    HypNearM1,
    Endpoint,
}

/// One rational kernel `A_{s,n}`.
#[derive(Clone, Debug)]
pub struct RationalKernel<S: Scalar> {
    pub numer: PolyC<S>,
    pub denom: DenomFactorSet<S>,
    pub case: KernelCase,
    pub s: usize,
    pub n: usize,
}

impl<S: Scalar> RationalKernel<S> {
    /// Evaluate at `tau`; refuses points within 1e-12 of a pole.
    pub fn eval(&self, tau: Complex<S>) -> Result<Complex<S>> {
        let d = self.denom.min_pole_distance(tau);
        if d < 1e-12 {
            return Err(Error::NearPole { distance: d });
        }
        Ok(self.numer.eval(tau) / self.denom.eval(tau))
    }

    /// `(denominator degree - numerator degree, tau^-2 tail coefficient)`.
    ///
    /// The tail coefficient (leading numerator coefficient over the monic
    /// denominator) is only meaningful when the order is exactly 2; it is
    /// what decides the size of the n = 0 correction term.
    pub fn tail_order(&self) -> (i64, Option<num_complex::Complex64>) {
        let order = self.denom.degree() as i64 - self.numer.degree() as i64;
        let lead = if order == 2 && !self.numer.is_zero() {
            Some(to_c64(*self.numer.c.last().unwrap()))
        } else {
            None
        };
        (order, lead)
    }

    /// Debug dump: `{case, s, n, numer, denom: [{base, mult}, ...]}`.
    pub fn to_debug_json(&self) -> serde_json::Value {
        let cpx = |z: &Complex<S>| json!([z.re.to_f64(), z.im.to_f64()]);
        json!({
            "case": self.case,
            "s": self.s,
            "n": self.n,
            "numer": self.numer.c.iter().map(cpx).collect::<Vec<_>>(),
            "denom": self.denom.bases.iter().zip(&self.denom.mults).map(|(b, &m)| json!({
                "base": b.c.iter().map(cpx).collect::<Vec<_>>(),
                "mult": m,
            })).collect::<Vec<_>>(),
        })
    }
}

/// The per-case recurrence data: `A_{s+1} = scalar * (Pbases/Pd) * (A' + (Qn/Qd) A)`
/// where `Pbases` and the denominators `Pd`, `Qd` are encoded as multiplicity
/// vectors over `bases`, and `Qn` is a general polynomial.
#[derive(Clone, Debug)]
pub struct KernelRule<S: Scalar> {
    pub case: KernelCase,
    bases: Vec<PolyC<S>>,
    roots: Vec<Vec<Complex<S>>>,
    scalar: Complex<S>,
    pn: Vec<u32>,
    pd: Vec<u32>,
    qn: PolyC<S>,
    qd: Vec<u32>,
    degree_cap: usize,
}

impl<S: Scalar> KernelRule<S> {
    /// Advance one kernel by the first-order recurrence.
    ///
    /// Panics if the degree cap is exceeded; that signals a wrong recurrence,
    /// not a data error.
    pub fn advance(&self, k: &RationalKernel<S>) -> RationalKernel<S> {
        let nb = self.bases.len();
        let zero = Complex::new(S::zero(), S::zero());
        // D1 = product of all bases once
        let mut d1 = PolyC::one();
        for b in &self.bases {
            d1 = d1.mul(b);
        }
        // derivative part: N' D1 - N sum_i m_i B_i' prod_{j != i} B_j
        let mut nder = k.numer.derivative().mul(&d1);
        for i in 0..nb {
            let m = k.denom.mults[i];
            if m == 0 {
                continue;
            }
            let mut others = PolyC::one();
            for (j, b) in self.bases.iter().enumerate() {
                if j != i {
                    others = others.mul(b);
                }
            }
            let t = self.bases[i]
                .derivative()
                .mul(&others)
                .mul(&k.numer)
                .scale(Complex::new(S::from_f64(-(m as f64)), S::zero()));
            nder = nder.add(&t);
        }
        // weight part over the same denominator: + Qn N (D1/Qd)
        let mut d1_over_qd = PolyC::one();
        for (i, b) in self.bases.iter().enumerate() {
            if self.qd[i] == 0 {
                d1_over_qd = d1_over_qd.mul(b);
            }
        }
        let numer2 = nder.add(&self.qn.mul(&k.numer).mul(&d1_over_qd));
        let mut numer = numer2.scale(self.scalar);
        let mut mults: Vec<u32> = (0..nb)
            .map(|i| k.denom.mults[i] + 1 + self.pd[i] - self.pn[i])
            .collect();
        // cancel an exactly-shared monomial factor of tau (base 0 is tau in
        // the cases that have one); other GCD cancellation is not attempted
        let scale = numer.max_coeff();
        if self.bases[0].degree() == 1 && self.bases[0].c[0] == zero {
            while mults[0] > 0
                && numer.c.len() > 1
                && cabs(numer.c[0]).to_f64() < 1e-14 * scale
            {
                numer.div_by_tau();
                mults[0] -= 1;
            }
        }
        let denom = DenomFactorSet { bases: self.bases.clone(), roots: self.roots.clone(), mults };
        assert!(
            numer.degree() <= self.degree_cap && denom.degree() <= self.degree_cap,
            "kernel degree cap {} exceeded at s={} (wrong recurrence?)",
            self.degree_cap,
            k.s + 1
        );
        RationalKernel { numer, denom, case: self.case, s: k.s + 1, n: k.n }
    }

    fn kernel(&self, numer: PolyC<S>, mults: Vec<u32>, s: usize, n: usize) -> RationalKernel<S> {
        RationalKernel {
            numer,
            denom: DenomFactorSet { bases: self.bases.clone(), roots: self.roots.clone(), mults },
            case: self.case,
            s,
            n,
        }
    }
}

fn quad_roots<S: Scalar>(b: f64, c: f64) -> Vec<Complex<S>> {
    // roots of tau^2 + b tau + c
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let r = disc.sqrt();
        vec![
            Complex::new(S::from_f64((-b + r) / 2.0), S::zero()),
            Complex::new(S::from_f64((-b - r) / 2.0), S::zero()),
        ]
    } else {
        let r = (-disc).sqrt() / 2.0;
        vec![
            Complex::new(S::from_f64(-b / 2.0), S::from_f64(r)),
            Complex::new(S::from_f64(-b / 2.0), S::from_f64(-r)),
        ]
    }
}

/// Build the recurrence rule and the two seed kernels `A_{0,0}`, `A_{0,1}`
/// for a case at a given `zeta` (and weight parameters where the case has
/// them). `S_max` fixes the degree cap at `4 S_max + 8`.
pub fn initial_kernels<S: Scalar>(
    case: KernelCase,
    zeta: f64,
    params: Option<(f64, f64, f64)>, // (a, b, c) for the hyp cases, (beta, _, _) for endpoint
    s_max: usize,
) -> Result<(KernelRule<S>, RationalKernel<S>, RationalKernel<S>)> {
    if zeta == 0.0 {
        return Err(Error::CoalescencePoint(
            "zeta = 0: kernel poles merge; evaluate at z away from the coalescence".into(),
        ));
    }
    let cap = 4 * s_max + 8;
    let one = Complex::new(S::one(), S::zero());
    match case {
        KernelCase::AiryBessel => {
            // base tau^2 - zeta; A00 = tau/B, A01 = 1/B; A_{s+1} = A'/B
            let b = PolyC::from_re(&[-zeta, 0.0, 1.0]);
            let roots = if zeta > 0.0 {
                vec![
                    Complex::new(S::from_f64(zeta.sqrt()), S::zero()),
                    Complex::new(S::from_f64(-zeta.sqrt()), S::zero()),
                ]
            } else {
                vec![
                    Complex::new(S::zero(), S::from_f64((-zeta).sqrt())),
                    Complex::new(S::zero(), S::from_f64(-(-zeta).sqrt())),
                ]
            };
            let rule = KernelRule {
                case,
                bases: vec![b],
                roots: vec![roots],
                scalar: one,
                pn: vec![0],
                pd: vec![1],
                qn: PolyC::from_re(&[0.0]),
                qd: vec![0],
                degree_cap: cap,
            };
            let a00 = rule.kernel(PolyC::from_re(&[0.0, 1.0]), vec![1], 0, 0);
            let a01 = rule.kernel(PolyC::one(), vec![1], 0, 1);
            Ok((rule, a00, a01))
        }
        KernelCase::HypNear1 | KernelCase::HypNearM1 => {
            let (a, b, c) = params
                .ok_or_else(|| Error::Usage("hyp cases need (a, b, c) weight parameters".into()))?;
            let sgn = if case == KernelCase::HypNear1 { 1.0 } else { -1.0 };
            // bases: tau, tau ∓ 2 zeta, tau^2 ∓ 2 zeta tau + 2 zeta
            let b1 = PolyC::from_re(&[0.0, 1.0]);
            let b2 = PolyC::from_re(&[-sgn * 2.0 * zeta, 1.0]);
            let b3 = PolyC::from_re(&[2.0 * zeta, -sgn * 2.0 * zeta, 1.0]);
            let roots = vec![
                vec![Complex::new(S::zero(), S::zero())],
                vec![Complex::new(S::from_f64(sgn * 2.0 * zeta), S::zero())],
                quad_roots::<S>(-sgn * 2.0 * zeta, 2.0 * zeta),
            ];
            // 1/p' = ± B1 B2 / B3; log-derivative numerators per case:
            //   near +1: (c-b)/tau + b/(tau-2zeta)
            //   near -1: (a+1-c)/tau + b/(tau+2zeta)
            let qn = if case == KernelCase::HypNear1 {
                b2.scale(Complex::new(S::from_f64(c - b), S::zero()))
                    .add(&b1.scale(Complex::new(S::from_f64(b), S::zero())))
            } else {
                b2.scale(Complex::new(S::from_f64(a + 1.0 - c), S::zero()))
                    .add(&b1.scale(Complex::new(S::from_f64(b), S::zero())))
            };
            let rule = KernelRule {
                case,
                bases: vec![b1, b2.clone(), b3],
                roots,
                scalar: Complex::new(S::from_f64(sgn), S::zero()),
                pn: vec![1, 1, 0],
                pd: vec![0, 0, 1],
                qn,
                qd: vec![1, 1, 0],
                degree_cap: cap,
            };
            let a00 = rule.kernel(b2, vec![0, 0, 1], 0, 0);
            let a01 = rule.kernel(PolyC::one(), vec![0, 0, 1], 0, 1);
            Ok((rule, a00, a01))
        }
        KernelCase::Endpoint => {
            let (beta, _, _) = params
                .ok_or_else(|| Error::Usage("endpoint case needs the beta weight parameter".into()))?;
            // bases tau, tau - zeta; A_{s+1} = -(A' + (1-beta) A / tau)/(tau - zeta)
            let b1 = PolyC::from_re(&[0.0, 1.0]);
            let b2 = PolyC::from_re(&[-zeta, 1.0]);
            let roots = vec![
                vec![Complex::new(S::zero(), S::zero())],
                vec![Complex::new(S::from_f64(zeta), S::zero())],
            ];
            let rule = KernelRule {
                case,
                bases: vec![b1, b2],
                roots,
                scalar: Complex::new(S::from_f64(-1.0), S::zero()),
                pn: vec![0, 0],
                pd: vec![0, 1],
                qn: PolyC::from_re(&[1.0 - beta]),
                qd: vec![1, 0],
                degree_cap: cap,
            };
            let a00 = rule.kernel(PolyC::one(), vec![1, 0], 0, 0);
            let a01 = rule.kernel(PolyC::one(), vec![1, 1], 0, 1);
            Ok((rule, a00, a01))
        }
    }
}
