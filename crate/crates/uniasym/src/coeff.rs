//! The trapezoidal contour rule and everything built on it: coefficient
//! tables, the branch-point correction terms, aggregated sums, and
//! M-doubling convergence control.

use crate::cases::{Case, CaseTag};
use crate::error::{Error, Result};
use crate::kernels::{initial_kernels, KernelRule, RationalKernel};
use crate::map::{build_node_ring, solve_params, MapParams, NodeRing};
use crate::num::cops::{to_c64, CSum};
use crate::num::scalar::Scalar;
use crate::num::{Precision, C64};
use num_complex::Complex;
use serde_json::json;

/// `1/(2 pi i) Int F(tau) dtau ~ 1/(2M) sum w_m F(w_m)` over the ring nodes.
pub fn trapezoid_contour<S: Scalar>(values: &[Complex<S>], ring: &NodeRing<S>) -> Result<Complex<S>> {
    if values.len() != ring.len() {
        return Err(Error::Usage(format!(
            "trapezoid_contour: {} values for {} nodes",
            values.len(),
            ring.len()
        )));
    }
    let mut acc = CSum::new();
    for (v, n) in values.iter().zip(&ring.nodes) {
        acc.add(*v * n.w);
    }
    Ok(acc.value() / Complex::new(S::from_f64(ring.len() as f64), S::zero()))
}

/// The kernel ladder `A_{s,n}` for `s = 0..=S`, `n = 0, 1`, built once per
/// `(case, zeta)` and shared across rings and `lambda`s.
pub struct KernelSet<S: Scalar> {
    pub rule: KernelRule<S>,
    /// `by_s[s] = (A_{s,0}, A_{s,1})`.
    pub by_s: Vec<(RationalKernel<S>, RationalKernel<S>)>,
    /// Correction weight for the `n = 0` integrals (branch-point cases):
    /// `a_{s,0} = raw_{s,0} + kappa * raw_{s-1,1}` with
    /// `kappa = -lim tau^2 A_{1,0}`. Zero in the cases with fast-decaying
    /// kernels.
    pub kappa: f64,
}

impl<S: Scalar> KernelSet<S> {
    pub fn build(case: &Case, zeta: f64, s_max: usize) -> Result<Self> {
        let (rule, a00, a01) = initial_kernels::<S>(case.kernel_case(), zeta, case.kernel_params(), s_max)?;
        let mut by_s = vec![(a00, a01)];
        for _ in 0..s_max {
            let (p0, p1) = by_s.last().unwrap();
            by_s.push((rule.advance(p0), rule.advance(p1)));
        }
        let kappa = match case.tag() {
            CaseTag::HypNear1 | CaseTag::HypNearM1 => {
                let (order, lead) = by_s[1].0.tail_order();
                if order == 2 {
                    let l = lead.expect("order-2 kernel without tail coefficient");
                    debug_assert!(l.im.abs() < 1e-10 * l.re.abs().max(1e-30));
                    -l.re
                } else {
                    0.0 // tail already O(tau^-3); no residue at infinity
                }
            }
            _ => 0.0,
        };
        Ok(KernelSet { rule, by_s, kappa })
    }

    pub fn s_max(&self) -> usize {
        self.by_s.len() - 1
    }
}

fn raw_integral<S: Scalar>(
    kernel: &RationalKernel<S>,
    ring: &NodeRing<S>,
) -> Result<Complex<S>> {
    let mut vals = Vec::with_capacity(ring.len());
    for node in &ring.nodes {
        vals.push(kernel.eval(node.w)? * node.g0);
    }
    trapezoid_contour(&vals, ring)
}

/// One coefficient `a_{s,n}`, including the `n = 0` correction term where
/// the case requires it.
pub fn coefficient<S: Scalar>(
    kernels: &KernelSet<S>,
    ring: &NodeRing<S>,
    s: usize,
    n: usize,
) -> Result<Complex<S>> {
    if s >= kernels.by_s.len() || n > 1 {
        return Err(Error::Usage(format!(
            "coefficient index (s={s}, n={n}) beyond the built kernel ladder"
        )));
    }
    let k = if n == 0 { &kernels.by_s[s].0 } else { &kernels.by_s[s].1 };
    let mut a = raw_integral(k, ring)?;
    if n == 0 && s >= 1 && kernels.kappa != 0.0 {
        let prev = raw_integral(&kernels.by_s[s - 1].1, ring)?;
        a = a + prev * Complex::new(S::from_f64(kernels.kappa), S::zero());
    }
    Ok(a)
}

/// Matrix of coefficients with metadata and per-entry last-doubling deltas.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CoefficientTable {
    pub case_tag: CaseTag,
    pub z: Option<f64>,
    pub zeta: f64,
    pub r: f64,
    pub big_m: usize,
    pub s_terms: usize,
    /// `values[s][n]`, `n = 0, 1`.
    pub values: Vec<[C64; 2]>,
    /// `|a(M) - a(M/2)|` per entry (the ring at half resolution), a cheap
    /// convergence diagnostic.
    pub deltas: Vec<[f64; 2]>,
}

impl CoefficientTable {
    pub fn get(&self, s: usize, n: usize) -> C64 {
        self.values[s][n]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,n,re_a,im_a,delta\n");
        for (s, row) in self.values.iter().enumerate() {
            for n in 0..2 {
                out.push_str(&format!(
                    "{},{},{:.17e},{:.17e},{:.3e}\n",
                    s, n, row[n].re, row[n].im, self.deltas[s][n]
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "case": self.case_tag,
            "z": self.z,
            "zeta": self.zeta,
            "r": self.r,
            "M": self.big_m,
            "S": self.s_terms,
            "values": self.values.iter().map(|row| {
                json!([[row[0].re, row[0].im], [row[1].re, row[1].im]])
            }).collect::<Vec<_>>(),
            "deltas": self.deltas,
        })
    }
}

fn table_at<S: Scalar>(
    kernels: &KernelSet<S>,
    ring: &NodeRing<S>,
    s_terms: usize,
) -> Result<Vec<[C64; 2]>> {
    let mut rows = Vec::with_capacity(s_terms);
    for s in 0..s_terms {
        let a0 = coefficient(kernels, ring, s, 0)?;
        let a1 = coefficient(kernels, ring, s, 1)?;
        rows.push([to_c64(a0), to_c64(a1)]);
    }
    Ok(rows)
}

fn coefficient_table_impl<S: Scalar>(
    case: &Case,
    params: &MapParams,
    r: f64,
    big_m: usize,
    s_terms: usize,
) -> Result<CoefficientTable> {
    if s_terms == 0 {
        return Err(Error::Usage("need at least one coefficient order".into()));
    }
    let kernels = KernelSet::<S>::build(case, params.zeta, s_terms - 1)?;
    let ring = build_node_ring::<S>(case, params, r, big_m)?;
    let values = table_at(&kernels, &ring, s_terms)?;
    // last-doubling delta against the half-resolution ring
    let deltas = if big_m >= 2 {
        let half = build_node_ring::<S>(case, params, r, big_m / 2)?;
        let coarse = table_at(&kernels, &half, s_terms)?;
        values
            .iter()
            .zip(&coarse)
            .map(|(f, c)| [(f[0] - c[0]).norm(), (f[1] - c[1]).norm()])
            .collect()
    } else {
        vec![[f64::NAN; 2]; s_terms]
    };
    Ok(CoefficientTable {
        case_tag: case.tag(),
        z: params.z,
        zeta: params.zeta,
        r,
        big_m,
        s_terms,
        values,
        deltas,
    })
}

/// Full coefficient table for a case; kernels are built once and reused.
pub fn coefficient_table(
    case: &Case,
    r: f64,
    big_m: usize,
    s_terms: usize,
    precision: Precision,
) -> Result<CoefficientTable> {
    let params = solve_params(case)?;
    match precision {
        Precision::Double => coefficient_table_impl::<f64>(case, &params, r, big_m, s_terms),
        Precision::DoubleDouble => {
            coefficient_table_impl::<crate::num::Dd>(case, &params, r, big_m, s_terms)
        }
    }
}

/// Double `M` from 8 until successive values of `a_{s,n}` agree to
/// `target_rel`, or fail at `M > 512`.
pub fn converged_coefficient(
    case: &Case,
    r: f64,
    s: usize,
    n: usize,
    target_rel: f64,
    precision: Precision,
) -> Result<(C64, usize)> {
    if target_rel < 1e-13 && precision == Precision::Double {
        return Err(Error::Convergence { target: target_rel, last_m: 0, deltas: vec![] });
    }
    let params = solve_params(case)?;
    let mut deltas = Vec::new();
    let mut prev: Option<C64> = None;
    let mut m = 8;
    while m <= 512 {
        let v = match precision {
            Precision::Double => {
                let kernels = KernelSet::<f64>::build(case, params.zeta, s)?;
                let ring = build_node_ring::<f64>(case, &params, r, m)?;
                to_c64(coefficient(&kernels, &ring, s, n)?)
            }
            Precision::DoubleDouble => {
                let kernels = KernelSet::<crate::num::Dd>::build(case, params.zeta, s)?;
                let ring = build_node_ring::<crate::num::Dd>(case, &params, r, m)?;
                to_c64(coefficient(&kernels, &ring, s, n)?)
            }
        };
        if let Some(p) = prev {
            let delta = (v - p).norm() / v.norm().max(1e-300);
            deltas.push(delta);
            if delta <= target_rel {
                return Ok((v, m));
            }
        }
        prev = Some(v);
        m *= 2;
    }
    Err(Error::Convergence { target: target_rel, last_m: 512, deltas })
}

/// `sum_{s<S} a_{s,n} / lambda^s` in a single trapezoid pass with the
/// aggregated kernel `sum lambda^{-s} A_{s,n}`, corrections folded in at the
/// matching power of `lambda`.
pub fn aggregated_sum<S: Scalar>(
    kernels: &KernelSet<S>,
    ring: &NodeRing<S>,
    lambda: f64,
    n: usize,
    s_terms: usize,
) -> Result<Complex<S>> {
    if s_terms == 0 || s_terms > kernels.by_s.len() || n > 1 {
        return Err(Error::Usage("aggregated_sum: order out of range".into()));
    }
    let mut vals = vec![Complex::new(S::zero(), S::zero()); ring.len()];
    let mut scale = Complex::new(S::one(), S::zero());
    let inv_lambda = Complex::new(S::from_f64(1.0 / lambda), S::zero());
    let kappa = Complex::new(S::from_f64(kernels.kappa), S::zero());
    for s in 0..s_terms {
        let k = if n == 0 { &kernels.by_s[s].0 } else { &kernels.by_s[s].1 };
        for (v, node) in vals.iter_mut().zip(&ring.nodes) {
            *v = *v + k.eval(node.w)? * node.g0 * scale;
        }
        // fold the n = 0 correction: + kappa/lambda^s * A_{s-1,1}
        if n == 0 && s >= 1 && kernels.kappa != 0.0 {
            let k1 = &kernels.by_s[s - 1].1;
            for (v, node) in vals.iter_mut().zip(&ring.nodes) {
                *v = *v + k1.eval(node.w)? * node.g0 * scale * kappa;
            }
        }
        scale = scale * inv_lambda;
    }
    trapezoid_contour(&vals, ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::Case;
    use crate::map::solve_params;

    fn bessel_ring(z: f64, m: usize, r: f64) -> (Case, MapParams, NodeRing<f64>) {
        let case = Case::AiryBessel { z };
        let params = solve_params(&case).unwrap();
        let ring = build_node_ring::<f64>(&case, &params, r, m).unwrap();
        (case, params, ring)
    }

    #[test]
    fn trapezoid_exact_residues() {
        let (_, _, ring) = bessel_ring(0.9, 4, 1.0);
        // F = 1/tau has residue 1
        let vals: Vec<C64> = ring.nodes.iter().map(|n| 1.0 / n.w).collect();
        let v = trapezoid_contour(&vals, &ring).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-15);
        // polynomials integrate to zero
        let (_, _, ring8) = bessel_ring(0.9, 8, 1.3);
        for k in 0..4 {
            let vals: Vec<C64> = ring8.nodes.iter().map(|n| n.w.powu(k)).collect();
            let v = trapezoid_contour(&vals, &ring8).unwrap();
            assert!(v.norm() < 1e-14, "tau^{k}: {v}");
        }
        // length mismatch is a usage error
        assert!(trapezoid_contour(&vals[..3], &ring8).is_err());
    }

    #[test]
    fn trapezoid_geometric_decay_for_interior_pole() {
        // F = 1/(tau - 0.3): exact integral 1; error decays like 0.3^{2M}
        let mut errs = Vec::new();
        for m in [4usize, 8, 16] {
            let (_, _, ring) = bessel_ring(0.9, m, 1.0);
            let vals: Vec<C64> = ring.nodes.iter().map(|n| 1.0 / (n.w - 0.3)).collect();
            let v = trapezoid_contour(&vals, &ring).unwrap();
            errs.push((v - C64::new(1.0, 0.0)).norm());
        }
        // ratios should be about 0.3^8 and 0.3^16
        assert!(errs[1] / errs[0] < 1e-3, "{errs:?}");
        assert!(errs[2] / errs[1] < 1e-6, "{errs:?}");
        assert!((errs[0] - 0.3f64.powi(8)).abs() < 0.3f64.powi(8), "{errs:?}");
    }

    /// Synthetic analytic integrand: G_0 = 1 against the Airy kernels has
    /// exact partial-fraction residue sums.
    #[test]
    fn synthetic_residue_oracle() {
        let zeta = 0.25_f64;
        let case = Case::AiryBessel { z: 0.9 };
        let kernels = KernelSet::<f64>::build(&case, zeta, 1).unwrap();
        let (_, _, ring) = bessel_ring(0.9, 16, 1.0);
        // A_{0,1} = 1/(tau^2 - zeta): residues 1/(2 sqrt(zeta)) at +sqrt,
        // -1/(2 sqrt) at -sqrt: sum = 0. A_{0,0} = tau/(tau^2-zeta): sum = 1.
        let vals: Vec<C64> = ring
            .nodes
            .iter()
            .map(|n| kernels.by_s[0].1.eval(n.w).unwrap())
            .collect();
        let v = trapezoid_contour(&vals, &ring).unwrap();
        assert!(v.norm() < 1e-13, "{v}");
        let vals: Vec<C64> = ring
            .nodes
            .iter()
            .map(|n| kernels.by_s[0].0.eval(n.w).unwrap())
            .collect();
        let v = trapezoid_contour(&vals, &ring).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-13, "{v}");
    }

    #[test]
    fn bessel_first_coefficients() {
        let case = Case::AiryBessel { z: 0.995 };
        let t = coefficient_table(&case, 1.0, 30, 2, Precision::Double).unwrap();
        assert!((t.get(0, 0).re - 1.2611836781).abs() < 1e-9 * 1.26);
        assert!((t.get(1, 1).re - (-0.0227706934)).abs() < 1e-9);
        // parity: a_{1,0} and a_{0,1} vanish
        assert!(t.get(1, 0).norm() < 1e-12);
        assert!(t.get(0, 1).norm() < 1e-12);
        // realness
        assert!(t.get(0, 0).im.abs() < 1e-12);
    }

    #[test]
    fn bessel_high_orders_need_dd() {
        // double-double reproduces the frozen M=30/M=40 values
        let case = Case::AiryBessel { z: 0.995 };
        let t30 = coefficient_table(&case, 1.0, 30, 12, Precision::DoubleDouble).unwrap();
        let checks30 = [
            (0usize, 0usize, 1.2611836781),
            (1, 1, -0.0227706934),
            (8, 0, 0.0004795112),
            (9, 1, -0.0009398771),
            (10, 0, -0.0008770417),
            (11, 1, 0.0023029221),
        ];
        for &(s, n, want) in &checks30 {
            let got = t30.get(s, n).re;
            assert!(
                (got - want).abs() < 1e-6 * want.abs(),
                "a_({s},{n}) = {got}, want {want}"
            );
        }
        let t40 = coefficient_table(&case, 1.0, 40, 12, Precision::DoubleDouble).unwrap();
        let got = t40.get(11, 1).re;
        assert!((got - 0.0023032804).abs() < 1e-6 * 0.0023, "{got}");
    }

    #[test]
    fn hyp_near1_table2() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let t = coefficient_table(&case, 1.0, 30, 5, Precision::Double).unwrap();
        let want = [
            [1.014466976, 0.257732955],
            [0.000203043, -0.016300238],
            [0.000402104, -0.010444854],
            [0.000068198, 0.001403704],
            [-0.000133905, 0.003465157],
        ];
        for (s, row) in want.iter().enumerate() {
            for n in 0..2 {
                let got = t.get(s, n).re;
                assert!(
                    (got - row[n]).abs() < 1e-6 * row[n].abs(),
                    "a_({s},{n}) = {got:.9}, want {:.9}",
                    row[n]
                );
                assert!(t.get(s, n).im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hyp_nearm1_table3() {
        let case = Case::HypNearM1 { a: 0.5, b: 0.5, c: 0.5, z: -0.9 };
        let t = coefficient_table(&case, 1.0, 30, 5, Precision::Double).unwrap();
        let want = [
            [1.012308968, 0.253890293],
            [0.001026614, -0.015679076],
            [-0.000137782, -0.010312760],
            [-0.000330251, 0.001268511],
            [0.000047172, 0.003421650],
        ];
        for (s, row) in want.iter().enumerate() {
            for n in 0..2 {
                let got = t.get(s, n).re;
                assert!(
                    (got - row[n]).abs() < 1e-6 * row[n].abs(),
                    "a_({s},{n}) = {got:.9}, want {:.9}",
                    row[n]
                );
            }
        }
    }

    /// The corrected and uncorrected n = 0 integrals differ by exactly
    /// kappa * a_{s-1,1}; with the closed-form tail coefficient this is the
    /// structural content of the correction term.
    #[test]
    fn correction_term_structure() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let params = solve_params(&case).unwrap();
        let kernels = KernelSet::<f64>::build(&case, params.zeta, 2).unwrap();
        let ring = build_node_ring::<f64>(&case, &params, 1.0, 30).unwrap();
        // kappa = -(c-1) here
        assert!((kernels.kappa - 0.5).abs() < 1e-12, "kappa = {}", kernels.kappa);
        let corrected = coefficient(&kernels, &ring, 1, 0).unwrap();
        let uncorrected = raw_integral(&kernels.by_s[1].0, &ring).unwrap();
        let a01 = coefficient(&kernels, &ring, 0, 1).unwrap();
        let diff = corrected - uncorrected;
        let want = a01 * kernels.kappa;
        assert!((diff - want).norm() < 1e-12, "{diff} vs {want}");
    }

    #[test]
    fn radius_independence() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let a = coefficient_table(&case, 0.8, 40, 1, Precision::Double).unwrap().get(0, 0);
        let b = coefficient_table(&case, 1.2, 40, 1, Precision::Double).unwrap().get(0, 0);
        assert!((a - b).norm() <= 1e-10 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn converged_coefficient_ladder() {
        let case = Case::AiryBessel { z: 0.995 };
        let (v, m) = converged_coefficient(&case, 1.0, 0, 0, 1e-12, Precision::Double).unwrap();
        assert!(m <= 64, "converged only at M = {m}");
        assert!((v.re - 1.2611836781).abs() < 1e-9);
        // below the double floor
        assert!(matches!(
            converged_coefficient(&case, 1.0, 0, 0, 1e-20, Precision::Double),
            Err(Error::Convergence { .. })
        ));
    }

    #[test]
    fn aggregated_sum_consistency() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let params = solve_params(&case).unwrap();
        let lambda = 20.0;
        let kernels = KernelSet::<f64>::build(&case, params.zeta, 4).unwrap();
        let ring = build_node_ring::<f64>(&case, &params, 1.0, 30).unwrap();
        // S = 1 is just a_{0,n}
        for n in 0..2 {
            let agg = aggregated_sum(&kernels, &ring, lambda, n, 1).unwrap();
            let direct = coefficient(&kernels, &ring, 0, n).unwrap();
            assert!((agg - direct).norm() < 1e-14);
        }
        // telescoping: agg(S=2) - agg(S=1) = a_{1,n}/lambda
        for n in 0..2 {
            let d = aggregated_sum(&kernels, &ring, lambda, n, 2).unwrap()
                - aggregated_sum(&kernels, &ring, lambda, n, 1).unwrap();
            let want = coefficient(&kernels, &ring, 1, n).unwrap() / lambda;
            assert!((d - want).norm() < 1e-12, "n={n}");
        }
        // order exchange: agg(S=5) = dot(row, lambda^-s)
        for n in 0..2 {
            let agg = aggregated_sum(&kernels, &ring, lambda, n, 5).unwrap();
            let mut dot = C64::new(0.0, 0.0);
            for s in 0..5 {
                dot += to_c64(coefficient(&kernels, &ring, s, n).unwrap()) * lambda.powi(-(s as i32));
            }
            assert!((to_c64(agg) - dot).norm() < 1e-12 * dot.norm().max(1e-10), "n={n}");
        }
    }

    #[test]
    fn exponential_m_convergence() {
        let case = Case::AiryBessel { z: 0.995 };
        let params = solve_params(&case).unwrap();
        let kernels = KernelSet::<f64>::build(&case, params.zeta, 0).unwrap();
        let mut vals = Vec::new();
        for m in [8usize, 16, 32, 64] {
            let ring = build_node_ring::<f64>(&case, &params, 1.0, m).unwrap();
            vals.push(to_c64(coefficient(&kernels, &ring, 0, 0).unwrap()));
        }
        let d1 = (vals[1] - vals[0]).norm();
        let d2 = (vals[2] - vals[1]).norm();
        let scale = vals[3].norm();
        // each doubling gains at least 10^3 until the double floor
        assert!(d2 <= 1e-3 * d1 || d2 <= 1e-13 * scale, "d1={d1:.3e} d2={d2:.3e}");
    }

    #[test]
    fn dd_and_f64_tables_agree_at_low_order() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let a = coefficient_table(&case, 1.0, 16, 3, Precision::Double).unwrap();
        let b = coefficient_table(&case, 1.0, 16, 3, Precision::DoubleDouble).unwrap();
        for s in 0..3 {
            for n in 0..2 {
                assert!((a.get(s, n) - b.get(s, n)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_and_json_exports() {
        let case = Case::AiryBessel { z: 0.9 };
        let t = coefficient_table(&case, 1.0, 16, 2, Precision::Double).unwrap();
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 5);
        let j = t.to_json();
        assert_eq!(j["M"], 16);
        assert_eq!(j["values"].as_array().unwrap().len(), 2);
    }
}
