//! Canonical-transformation parameters and the trapezoid node ring.
//!
//! `solve_params` pins `(zeta, p0)` from the saddle correspondence;
//! `build_node_ring` inverts the map `f(t, z) = p(tau, zeta) + p0` on the
//! `2M` equally spaced nodes `w_m = r e^{pi i m / M}` by Newton continuation
//! (each node seeded from its neighbour, with automatic arc bisection), and
//! carries the multivalued factors of `G_0` around the loop by multiplying
//! principal-branch ratios. The loop-closure defect is the monodromy check.
//!
//! For the branch-point cases the overall branch of `G_0` (a unimodular
//! factor the principal-branch anchor cannot see) is fixed by continuing
//! inward to the saddle and snapping the phase to the closed-form saddle
//! value of `G_0`.

use crate::cases::{Case, CaseTag};
use crate::error::{Error, Result};
use crate::num::cops::{cabs, cpow, to_c64, C64};
use crate::num::scalar::Scalar;
use num_complex::Complex;

/// Solved transformation parameters for one case at one `z`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MapParams {
    pub z: Option<f64>,
    pub theta: Option<f64>,
    pub sigma: Option<f64>,
    pub zeta: f64,
    pub p0: f64,
}

/// Unique root of `sigma + sin sigma = theta` on `[0, pi]`, by safeguarded
/// Newton with a bisection fallback; the small-`theta` series
/// `sigma = theta/2 + theta^3/96 + ...` seeds the iteration.
pub fn solve_sigma(theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&theta) {
        return Err(Error::Domain(format!("solve_sigma: theta = {theta} outside [0, pi]")));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0_f64;
    let mut hi = std::f64::consts::PI;
    let mut s = (theta / 2.0 + theta * theta * theta / 96.0).min(hi);
    for _ in 0..100 {
        let g = s + s.sin() - theta;
        if g.abs() <= 1e-14 {
            return Ok(s);
        }
        if g > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let dg = 1.0 + s.cos();
        let mut next = if dg > 1e-12 { s - g / dg } else { 0.5 * (lo + hi) };
        if !(lo..=hi).contains(&next) {
            next = 0.5 * (lo + hi);
        }
        s = next;
    }
    // bisection converges even when Newton stalls at sigma ~ pi
    let g = s + s.sin() - theta;
    if g.abs() <= 1e-13 {
        Ok(s)
    } else {
        Err(Error::Domain(format!("solve_sigma: no convergence at theta = {theta}")))
    }
}

/// Solve `(zeta, p0)` (and `theta`, `sigma` for the branch-point cases).
pub fn solve_params(case: &Case) -> Result<MapParams> {
    case.validate()?;
    match *case {
        Case::AiryBessel { z } => {
            let zeta = if z == 1.0 {
                0.0
            } else if z < 1.0 {
                // 2/3 zeta^{3/2} = arccosh(1/z) - sqrt(1-z^2)
                let w = (1.0 / z).acosh() - (1.0 - z * z).sqrt();
                (1.5 * w).powf(2.0 / 3.0)
            } else {
                // 2/3 (-zeta)^{3/2} = sqrt(z^2-1) - arccos(1/z)
                let w = (z * z - 1.0).sqrt() - (1.0 / z).acos();
                -((1.5 * w).powf(2.0 / 3.0))
            };
            Ok(MapParams { z: Some(z), theta: None, sigma: None, zeta, p0: 0.0 })
        }
        Case::HypNear1 { z, .. } => {
            let theta = z.acos();
            let sigma = solve_sigma(theta)?;
            let zeta = 1.0 - sigma.cos();
            Ok(MapParams { z: Some(z), theta: Some(theta), sigma: Some(sigma), zeta, p0: -zeta })
        }
        Case::HypNearM1 { z, .. } => {
            let theta = (-z).acos();
            let sigma = solve_sigma(theta)?;
            let zeta = 1.0 - sigma.cos();
            Ok(MapParams { z: Some(z), theta: Some(theta), sigma: Some(sigma), zeta, p0: -zeta })
        }
        Case::Endpoint { zeta, .. } => {
            Ok(MapParams { z: None, theta: None, sigma: None, zeta, p0: 0.0 })
        }
    }
}

/// One trapezoid node with its continuation data.
#[derive(Clone, Copy, Debug)]
pub struct Node<S: Scalar> {
    pub w: Complex<S>,
    pub t: Complex<S>,
    pub dtdtau: Complex<S>,
    pub g0: Complex<S>,
}

/// The `2M` trapezoid nodes with continued `G_0`, plus diagnostics.
#[derive(Clone, Debug)]
pub struct NodeRing<S: Scalar> {
    pub case_tag: CaseTag,
    pub params: MapParams,
    pub r: f64,
    pub big_m: usize,
    pub nodes: Vec<Node<S>>,
    pub closure_defect: f64,
    /// Continued `G_0` at the paired saddles (branch-point and saddle cases).
    pub saddle_g0: Option<(C64, C64)>,
}

impl<S: Scalar> NodeRing<S> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// CSV dump: `m, Re w, Im w, Re t, Im t, Re dtdtau, Im dtdtau, Re G0, Im G0`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,re_w,im_w,re_t,im_t,re_dtdtau,im_dtdtau,re_g0,im_g0\n");
        for (m, n) in self.nodes.iter().enumerate() {
            out.push_str(&format!(
                "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                m,
                n.w.re.to_f64(),
                n.w.im.to_f64(),
                n.t.re.to_f64(),
                n.t.im.to_f64(),
                n.dtdtau.re.to_f64(),
                n.dtdtau.im.to_f64(),
                n.g0.re.to_f64(),
                n.g0.im.to_f64()
            ));
        }
        out
    }

    /// Largest map residual over the nodes, normalized per case.
    pub fn max_map_residual(&self, case: &Case) -> f64 {
        let mut worst: f64 = 0.0;
        for n in &self.nodes {
            worst = worst.max(map_residual_scaled(case, &self.params, n.t, n.w));
        }
        worst
    }
}

fn map_residual_scaled<S: Scalar>(
    case: &Case,
    params: &MapParams,
    t: Complex<S>,
    tau: Complex<S>,
) -> f64 {
    let (resid, _) = case.map_residual(t, tau, params.zeta, params.p0);
    let scale = match case {
        Case::AiryBessel { .. } => cabs(case.p(tau, params.zeta)).to_f64().max(1.0),
        Case::HypNear1 { .. } | Case::HypNearM1 { .. } => {
            let e = cabs(case.exp_map(tau, params.zeta, params.p0)).to_f64();
            let tt = cabs(t).to_f64();
            (e * (tt * tt + tt)).max(1.0)
        }
        Case::Endpoint { .. } => 1.0,
    };
    cabs(resid).to_f64() / scale
}

/// Newton for the map equation at fixed `tau`, seeded at `t0`. Steps are
/// damped so the Bessel `sinh` cannot run away.
fn newton_t<S: Scalar>(
    case: &Case,
    params: &MapParams,
    tau: Complex<S>,
    t0: Complex<S>,
) -> Option<Complex<S>> {
    let tol = (100.0 * S::eps()).max(1e-15);
    let mut t = t0;
    for _ in 0..50 {
        let (resid, dresid) = case.map_residual(t, tau, params.zeta, params.p0);
        if cabs(dresid).to_f64() == 0.0 {
            return None;
        }
        let mut step = resid / dresid;
        let cap = 0.5 * (1.0 + cabs(t).to_f64());
        let mut guard = 0;
        while cabs(step).to_f64() > cap && guard < 60 {
            step = step * Complex::new(S::from_f64(0.5), S::zero());
            guard += 1;
        }
        t = t - step;
        if map_residual_scaled(case, params, t, tau) <= tol {
            return Some(t);
        }
    }
    if map_residual_scaled(case, params, t, tau) <= tol * 10.0 {
        Some(t)
    } else {
        None
    }
}

/// Distance from `t` to the nearest branch point of the inverse map
/// (`f'(t) = 0` preimages), used for jump detection in the Bessel case.
fn nearest_branch_dist<S: Scalar>(case: &Case, params: &MapParams, t: Complex<S>) -> f64 {
    let theta = params.theta.unwrap_or(0.0);
    let (tp, tm) = case.saddles_t(theta);
    let t = to_c64(t);
    let mut d = (t - tp).norm().min((t - tm).norm());
    if matches!(case, Case::AiryBessel { .. }) {
        let shift = C64::new(0.0, std::f64::consts::TAU);
        for s in [tp + shift, tm + shift, tp - shift, tm - shift] {
            d = d.min((t - s).norm());
        }
    }
    d
}

/// How to bisect a continuation step: along the chord (radial walks) or
/// along the circular arc (ring steps; the chord midpoint of two antipodal
/// nodes would cut straight through the saddles).
#[derive(Clone, Copy, Debug, PartialEq)]
enum Seg {
    Chord,
    /// Counterclockwise arc of the contour circle.
    Arc,
}

impl Seg {
    fn midpoint<S: Scalar>(self, a: Complex<S>, b: Complex<S>) -> Complex<S> {
        match self {
            Seg::Chord => (a + b) * Complex::new(S::from_f64(0.5), S::zero()),
            Seg::Arc => {
                let m = a + b;
                let r = cabs(a);
                let norm = cabs(m);
                if norm.to_f64() < 1e-6 * r.to_f64() {
                    // antipodal: quarter turn counterclockwise from a
                    Complex::new(-a.im, a.re)
                } else {
                    m * Complex::new(r / norm, S::zero())
                }
            }
        }
    }
}

/// Track `t(tau)` from `(tau_from, t_from)` to `tau_to`: Newton seeded at the
/// previous value, with up to 8 bisections of the segment when Newton fails
/// or the step jumps toward another branch.
fn track_t<S: Scalar>(
    case: &Case,
    params: &MapParams,
    tau_from: Complex<S>,
    tau_to: Complex<S>,
    t_from: Complex<S>,
    node: usize,
    seg: Seg,
) -> Result<Complex<S>> {
    #[allow(clippy::too_many_arguments)]
    fn rec<S: Scalar>(
        case: &Case,
        params: &MapParams,
        tau_from: Complex<S>,
        tau_to: Complex<S>,
        t_from: Complex<S>,
        depth: u32,
        node: usize,
        seg: Seg,
    ) -> Result<Complex<S>> {
        let is_hyp = matches!(case, Case::HypNear1 { .. } | Case::HypNearM1 { .. });
        let attempt = if is_hyp {
            // quadratic map: take the root nearest the previous value, then
            // let Newton polish it
            let (r1, r2) = case.map_roots(tau_to, params.zeta, params.p0);
            let d1 = cabs(r1 - t_from).to_f64();
            let d2 = cabs(r2 - t_from).to_f64();
            let near = if d1 <= d2 { r1 } else { r2 };
            let sep = cabs(r1 - r2).to_f64();
            // ambiguous when the t-step is comparable to the root gap
            if 2.0 * d1.min(d2) >= sep && depth < 8 {
                None
            } else {
                newton_t(case, params, tau_to, near)
            }
        } else {
            match newton_t(case, params, tau_to, t_from) {
                Some(t_new) => {
                    let jump = cabs(t_new - t_from).to_f64();
                    if jump > 0.5 * nearest_branch_dist(case, params, t_from).max(1e-12) && depth < 8
                    {
                        None
                    } else {
                        Some(t_new)
                    }
                }
                None => None,
            }
        };
        match attempt {
            Some(t) => Ok(t),
            None if depth < 8 => {
                let mid = seg.midpoint(tau_from, tau_to);
                let t_mid = rec(case, params, tau_from, mid, t_from, depth + 1, node, seg)?;
                rec(case, params, mid, tau_to, t_mid, depth + 1, node, seg)
            }
            None => Err(Error::Continuation {
                node,
                detail: "Newton failed after 8 arc bisections".into(),
            }),
        }
    }
    rec(case, params, tau_from, tau_to, t_from, 0, node, seg)
}

/// Uniformly substepped continuation along a chord; each substep can still
/// bisect a further 8 levels. Used for the anchor and saddle walks, where a
/// single stride could silently land on the other branch.
fn walk_t<S: Scalar>(
    case: &Case,
    params: &MapParams,
    from: Complex<S>,
    to: Complex<S>,
    t0: Complex<S>,
    nsteps: usize,
) -> Result<Complex<S>> {
    let mut t = t0;
    let mut prev = from;
    for k in 1..=nsteps {
        let frac = S::from_f64(k as f64 / nsteps as f64);
        let tau = from + (to - from) * Complex::new(frac, S::zero());
        t = track_t(case, params, prev, tau, t, 0, Seg::Chord)?;
        prev = tau;
    }
    Ok(t)
}

/// Multivalued-factor state continued along the contour.
struct FactorState<S: Scalar> {
    exps: Vec<f64>,
    u: Vec<Complex<S>>,
    v: Vec<Complex<S>>,
}

impl<S: Scalar> FactorState<S> {
    fn anchor(case: &Case, tau: Complex<S>, t: Complex<S>, zeta: f64) -> Self {
        let facs = case.g0_factors(tau, t, zeta);
        let exps: Vec<f64> = facs.iter().map(|&(_, e)| e).collect();
        let u: Vec<Complex<S>> = facs.iter().map(|&(b, _)| b).collect();
        let v = u.iter().zip(&exps).map(|(&b, &e)| cpow(b, S::from_f64(e))).collect();
        FactorState { exps, u, v }
    }

    /// Advance to a new point by principal-branch ratios. Valid as long as
    /// consecutive bases never straddle zero; returns the largest ratio
    /// rotation seen so callers can bisect when the step was too coarse.
    fn advance(&mut self, case: &Case, tau: Complex<S>, t: Complex<S>, zeta: f64) -> f64 {
        let facs = case.g0_factors(tau, t, zeta);
        let mut max_angle: f64 = 0.0;
        for (i, &(b, _)) in facs.iter().enumerate() {
            let ratio = b / self.u[i];
            let ang = to_c64(ratio).arg().abs();
            max_angle = max_angle.max(ang);
            self.v[i] = self.v[i] * cpow(ratio, S::from_f64(self.exps[i]));
            self.u[i] = b;
        }
        max_angle
    }

    fn product(&self) -> Complex<S> {
        let mut p = Complex::new(S::one(), S::zero());
        for &v in &self.v {
            p = p * v;
        }
        p
    }
}

/// Combined t/factor step with bisection keyed to factor rotation, so a
/// fractional power never crosses its cut between samples.
#[allow(clippy::too_many_arguments)]
fn step_with_factors<S: Scalar>(
    case: &Case,
    params: &MapParams,
    tau_from: Complex<S>,
    tau_to: Complex<S>,
    t: &mut Complex<S>,
    fs: &mut FactorState<S>,
    node: usize,
    depth: u32,
    seg: Seg,
) -> Result<()> {
    let t_new = track_t(case, params, tau_from, tau_to, *t, node, seg)?;
    // probe the factor rotation before committing
    let probe = case.g0_factors(tau_to, t_new, params.zeta);
    let mut max_angle: f64 = 0.0;
    for (i, &(b, _)) in probe.iter().enumerate() {
        max_angle = max_angle.max(to_c64(b / fs.u[i]).arg().abs());
    }
    if max_angle > 2.0 && depth < 8 {
        let mid = seg.midpoint(tau_from, tau_to);
        step_with_factors(case, params, tau_from, mid, t, fs, node, depth + 1, seg)?;
        return step_with_factors(case, params, mid, tau_to, t, fs, node, depth + 1, seg);
    }
    *t = t_new;
    fs.advance(case, tau_to, t_new, params.zeta);
    Ok(())
}

fn dtdtau_at<S: Scalar>(case: &Case, params: &MapParams, tau: Complex<S>, t: Complex<S>) -> Complex<S> {
    match case {
        Case::Endpoint { .. } => Complex::new(S::one(), S::zero()),
        _ => case.dp(tau, params.zeta) / case.df(t),
    }
}

/// Anchor value of `t` on the ring for each case: continued from an exact
/// branch-point or saddle correspondence along the real axis.
fn anchor_t<S: Scalar>(case: &Case, params: &MapParams, w_anchor: Complex<S>) -> Result<Complex<S>> {
    let zeta = params.zeta;
    match case {
        Case::AiryBessel { z } => {
            // seed from the linearization at the saddle, walk the real axis
            let (tau_s, _) = case.saddles_tau(zeta, 0.0);
            let (t_s, _) = case.saddles_t(0.0);
            let dts = if zeta >= 0.0 {
                (2.0 * zeta.sqrt() / (1.0 - z * z).sqrt()).sqrt()
            } else {
                (2.0 * (-zeta).sqrt() / (z * z - 1.0).sqrt()).sqrt()
            };
            let start = tau_s + (to_c64(w_anchor) - tau_s) * 0.2;
            let seed = t_s + (start - tau_s) * dts;
            let start_s = Complex::new(S::from_f64(start.re), S::from_f64(start.im));
            let seed_s = Complex::new(S::from_f64(seed.re), S::from_f64(seed.im));
            let t0 = newton_t(case, params, start_s, seed_s).ok_or(Error::Continuation {
                node: 0,
                detail: "anchor Newton failed near the saddle".into(),
            })?;
            track_t(case, params, start_s, w_anchor, t0, 0)
        }
        Case::HypNear1 { z, .. } | Case::HypNearM1 { z, .. } => {
            // branch-point anchor: tau -> ±2 zeta corresponds to t -> ∓h
            let near1 = matches!(case, Case::HypNear1 { .. });
            let h = (1.0 + z) / 2.0;
            let (tau_bp, t_bp) = if near1 { (2.0 * zeta, h) } else { (-2.0 * zeta, -h) };
            let start = Complex::new(S::from_f64(tau_bp * (1.0 + 1e-3) + if near1 { 0.0 } else { 0.0 }), S::zero());
            // pick the quadratic root nearest the branch-point image
            let (r1, r2) = case.map_roots(start, zeta, params.p0);
            let tb = Complex::new(S::from_f64(t_bp), S::zero());
            let t0 = if cabs(r1 - tb) < cabs(r2 - tb) { r1 } else { r2 };
            track_t(case, params, start, w_anchor, t0, 0)
        }
        Case::Endpoint { .. } => Ok(w_anchor),
    }
}

/// Closed-form `G_0` at the first (`+`) saddle for the branch-point cases.
pub fn saddle_g0_closed_form(case: &Case, params: &MapParams) -> Result<C64> {
    let sigma = params.sigma.ok_or_else(|| Error::Usage("saddle closed form needs sigma".into()))?;
    let theta = params.theta.unwrap();
    if sigma == 0.0 {
        return Err(Error::CoalescencePoint("sigma = 0 in saddle closed form".into()));
    }
    match *case {
        Case::HypNear1 { a, b, c, .. } => {
            let r = (2.0 * (sigma / 2.0).sin() / (theta / 2.0).sin()).powf(c - 0.5)
                * (sigma / 2.0).cos().sqrt()
                * (theta / 2.0).cos().powf(c - a - b - 0.5);
            let phi = (c / 2.0 - b) * sigma + (b - a) * theta / 2.0;
            Ok(C64::from_polar(r, phi))
        }
        Case::HypNearM1 { a, b, c, .. } => {
            let r = (2.0 * (sigma / 2.0).sin() / (theta / 2.0).sin()).powf(b + a - c + 0.5)
                * (sigma / 2.0).cos().sqrt()
                * (theta / 2.0).cos().powf(0.5 - c);
            let phi = (b - a) * theta / 2.0 - (b + c - a - 1.0) * sigma / 2.0;
            Ok(C64::from_polar(r, phi))
        }
        _ => Err(Error::Usage("saddle closed form only exists for the branch-point cases".into())),
    }
}

/// `p''(tau+)/f''(t+)` at the paired `+` saddles.
fn saddle_curvature_ratio(case: &Case, params: &MapParams) -> C64 {
    match *case {
        Case::AiryBessel { z } => {
            let zeta = params.zeta;
            if zeta >= 0.0 {
                C64::new(2.0 * zeta.sqrt() / (1.0 - z * z).sqrt(), 0.0)
            } else {
                C64::new(2.0 * (-zeta).sqrt() / (z * z - 1.0).sqrt(), 0.0)
            }
        }
        Case::HypNear1 { .. } | Case::HypNearM1 { .. } => {
            let sigma = params.sigma.unwrap();
            let theta = params.theta.unwrap();
            // p''(tau+) = i sin(sigma)/(1-cos(sigma)), f''(t+) = 4 i e^{-i theta}/sin(theta)
            let p2 = C64::new(0.0, sigma.sin() / (1.0 - sigma.cos()));
            let f2 = C64::new(0.0, 4.0 / theta.sin()) * C64::from_polar(1.0, -theta);
            p2 / f2
        }
        Case::Endpoint { .. } => C64::new(1.0, 0.0),
    }
}

/// Continued `G_0` at the `+` saddle: track `t` and the factors from the ring
/// anchor to just off the saddle, then resolve the sign of
/// `dt/dtau(tau+) = sqrt(p''/f'')` by continuity.
fn continue_g0_to_saddle<S: Scalar>(
    case: &Case,
    params: &MapParams,
    r: f64,
) -> Result<(C64, C64)> {
    let (tau_p, _) = case.saddles_tau(params.zeta, params.sigma.unwrap_or(0.0));
    let (anchor_dir, _) = anchor_geometry(case);
    let w_anchor = Complex::new(S::from_f64(anchor_dir * r), S::zero());
    let mut t = anchor_t(case, params, w_anchor)?;
    let mut fs = FactorState::anchor(case, w_anchor, t, params.zeta);
    // approach point just off the saddle, on the anchor side
    let (_, tau_m) = case.saddles_tau(params.zeta, params.sigma.unwrap_or(0.0));
    let sep = (tau_p - tau_m).norm().max(1e-12);
    let dir = (to_c64(w_anchor) - tau_p) / (to_c64(w_anchor) - tau_p).norm();
    let tau_near64 = tau_p + dir * (0.02 * sep);
    let tau_near = Complex::new(S::from_f64(tau_near64.re), S::from_f64(tau_near64.im));
    // walk in a few straight substeps (track_t bisects further on demand)
    let nsub = 8;
    let mut prev = w_anchor;
    for k in 1..=nsub {
        let frac = S::from_f64(k as f64 / nsub as f64);
        let tau_k = w_anchor + (tau_near - w_anchor) * Complex::new(frac, S::zero());
        step_with_factors(case, params, prev, tau_k, &mut t, &mut fs, 0, 0)?;
        prev = tau_k;
    }
    // numerically continued dt/dtau just off the saddle
    let dt_num = to_c64(dtdtau_at(case, params, tau_near, t));
    let root = saddle_curvature_ratio(case, params).sqrt();
    let dt_saddle = if (root - dt_num).norm() <= (-root - dt_num).norm() { root } else { -root };
    // factors moved to the saddle itself
    let (tt_p, _) = case.saddles_t(params.theta.unwrap_or(0.0));
    let tau_p_s = Complex::new(S::from_f64(tau_p.re), S::from_f64(tau_p.im));
    let tt_p_s = Complex::new(S::from_f64(tt_p.re), S::from_f64(tt_p.im));
    fs.advance(case, tau_p_s, tt_p_s, params.zeta);
    let g0_plus = to_c64(fs.product()) * dt_saddle;
    Ok((g0_plus, dt_saddle))
}

/// Anchor direction (+1 -> node 0 at `+r`, -1 -> node M at `-r`) and index.
fn anchor_geometry(case: &Case) -> (f64, bool) {
    match case {
        Case::HypNearM1 { .. } => (-1.0, true),
        _ => (1.0, false),
    }
}

/// Build the trapezoid ring. `r` must enclose the paired saddles (and the
/// finite branch points of the canonical phase, where the case has them).
pub fn build_node_ring<S: Scalar>(
    case: &Case,
    params: &MapParams,
    r: f64,
    big_m: usize,
) -> Result<NodeRing<S>> {
    case.validate()?;
    if big_m < 1 {
        return Err(Error::Usage("M must be at least 1".into()));
    }
    if !(r > 0.0) {
        return Err(Error::Domain(format!("contour radius must be positive, got {r}")));
    }
    let zeta = params.zeta;
    if zeta == 0.0 && !matches!(case, Case::Endpoint { .. }) {
        return Err(Error::CoalescencePoint(
            "zeta = 0: build the ring at a z away from the coalescence point".into(),
        ));
    }
    // enclosure requirements per case
    let needed = match case {
        Case::AiryBessel { .. } => zeta.abs().sqrt(),
        Case::HypNear1 { .. } | Case::HypNearM1 { .. } => (2.0 * zeta).max((2.0 * zeta).sqrt()),
        Case::Endpoint { .. } => zeta.abs(),
    };
    if r <= needed * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "radius {r} does not enclose the critical points (need r > {needed:.6})"
        )));
    }

    let two_m = 2 * big_m;
    let (anchor_dir, anchor_at_m) = anchor_geometry(case);
    let anchor_idx = if anchor_at_m { big_m } else { 0 };
    // nodes w_m = r e^{i pi m / M}
    let rs = S::from_f64(r);
    let ws: Vec<Complex<S>> = (0..two_m)
        .map(|m| {
            let ang = S::pi() * S::from_f64(m as f64) / S::from_f64(big_m as f64);
            let (s, c) = ang.sin_cos();
            Complex::new(rs * c, rs * s)
        })
        .collect();
    debug_assert!(anchor_dir * ws[anchor_idx].re.to_f64() > 0.0);

    let mut t = anchor_t(case, params, ws[anchor_idx])?;
    let mut fs = FactorState::anchor(case, ws[anchor_idx], t, zeta);

    let mut nodes: Vec<Option<Node<S>>> = vec![None; two_m];
    let mk_node = |w: Complex<S>, t: Complex<S>, fs: &FactorState<S>, case: &Case| {
        let dt = dtdtau_at(case, params, w, t);
        let g0 = fs.product() * dt * case.g0_extra(w);
        Node { w, t, dtdtau: dt, g0 }
    };
    nodes[anchor_idx] = Some(mk_node(ws[anchor_idx], t, &fs, case));

    let g0_anchor = nodes[anchor_idx].as_ref().unwrap().g0;
    for k in 1..=two_m {
        let i_prev = (anchor_idx + k - 1) % two_m;
        let i = (anchor_idx + k) % two_m;
        step_with_factors(case, params, ws[i_prev], ws[i], &mut t, &mut fs, i, 0)?;
        if k < two_m {
            nodes[i] = Some(mk_node(ws[i], t, &fs, case));
        }
    }
    // after the full loop: the factor state should reproduce the anchor value
    let g0_back = mk_node(ws[anchor_idx], t, &fs, case).g0;
    let scale = cabs(g0_anchor).to_f64().max(1e-300);
    let closure_defect = cabs(g0_back - g0_anchor).to_f64() / scale;
    if closure_defect > 1e-8 {
        return Err(Error::Monodromy { defect: closure_defect });
    }

    let mut nodes: Vec<Node<S>> = nodes.into_iter().map(Option::unwrap).collect();

    // branch-point cases: snap the overall branch to the closed-form saddle
    // value of G_0 (the principal-branch anchor is blind to a global phase)
    let mut saddle_g0 = None;
    match case {
        Case::HypNear1 { .. } | Case::HypNearM1 { .. } => {
            let (g0_cont, _) = continue_g0_to_saddle::<S>(case, params, r)?;
            let cf = saddle_g0_closed_form(case, params)?;
            let ratio = cf / g0_cont;
            if (ratio.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::Monodromy { defect: (ratio.norm() - 1.0).abs() });
            }
            // real-parameter cases admit only a sign; snap to it exactly
            let snap = if ratio.re >= 0.0 { 1.0 } else { -1.0 };
            if (ratio - C64::new(snap, 0.0)).norm() > 1e-6 {
                return Err(Error::Monodromy { defect: (ratio - C64::new(snap, 0.0)).norm() });
            }
            if snap < 0.0 {
                for n in nodes.iter_mut() {
                    n.g0 = -n.g0;
                }
            }
            let sg = g0_cont * snap;
            saddle_g0 = Some((sg, sg.conj()));
        }
        Case::AiryBessel { .. } => {
            let (g0_cont, dts) = continue_g0_to_saddle::<S>(case, params, r)?;
            // G0 = dt/dtau is even in tau for the odd Bessel phase
            let _ = dts;
            saddle_g0 = Some((g0_cont, g0_cont));
        }
        Case::Endpoint { .. } => {}
    }

    Ok(NodeRing {
        case_tag: case.tag(),
        params: *params,
        r,
        big_m,
        nodes,
        closure_defect,
        saddle_g0,
    })
}

/// `G_0` at the paired saddles `(tau+, tau-)`, continued from the ring
/// anchor; the square-root branch of `dt/dtau` at the saddle is fixed by
/// continuity with nearby values.
pub fn saddle_values(case: &Case, params: &MapParams) -> Result<(C64, C64)> {
    if params.zeta == 0.0 {
        return Err(Error::CoalescencePoint("saddle values need zeta != 0".into()));
    }
    let r_default = match case {
        Case::Endpoint { zeta, .. } => (2.0 * zeta.abs()).max(0.5),
        _ => 1.0,
    };
    match case {
        Case::Endpoint { .. } => Err(Error::Usage(
            "the endpoint case has no saddle-value formula; G_0 is user-supplied".into(),
        )),
        Case::AiryBessel { .. } => {
            let (g, _) = continue_g0_to_saddle::<f64>(case, params, r_default)?;
            Ok((g, g))
        }
        _ => {
            let (g_cont, _) = continue_g0_to_saddle::<f64>(case, params, r_default)?;
            let cf = saddle_g0_closed_form(case, params)?;
            let ratio = cf / g_cont;
            let snap = if ratio.re >= 0.0 { 1.0 } else { -1.0 };
            let g = g_cont * snap;
            Ok((g, g.conj()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::dd::Dd;

    #[test]
    fn sigma_solver() {
        assert_eq!(solve_sigma(0.0).unwrap(), 0.0);
        // frozen root of sigma + sin sigma = 3/2
        let s = solve_sigma(1.5).unwrap();
        assert!((s - 0.78979267064446727).abs() < 1e-13, "{s}");
        // bisection oracle
        let (mut lo, mut hi) = (0.0_f64, std::f64::consts::PI);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid + mid.sin() < 1.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((s - 0.5 * (lo + hi)).abs() < 1e-13);
        assert!(solve_sigma(-0.1).is_err());
        assert!(solve_sigma(4.0).is_err());
    }

    #[test]
    fn params_bessel() {
        let p = solve_params(&Case::AiryBessel { z: 0.995 }).unwrap();
        assert!((p.zeta - 0.0063090835596432699).abs() < 1e-8, "{}", p.zeta);
        assert_eq!(p.p0, 0.0);
        let p1 = solve_params(&Case::AiryBessel { z: 1.0 }).unwrap();
        assert_eq!(p1.zeta, 0.0);
        // z = 2: closed form -(3/2 (sqrt3 - pi/3))^(2/3), plus the defining
        // relation 4/3 zeta^{3/2} = f(t-) - f(t+) checked via saddle values
        let p2 = solve_params(&Case::AiryBessel { z: 2.0 }).unwrap();
        assert!((p2.zeta - (-1.018104888567116)).abs() < 1e-12);
        let z = 2.0_f64;
        let ts = (1.0 / z).acos();
        // f(t+) = z sinh(i ts) - i ts = i (z sin ts - ts); f(t-) = -f(t+)
        let f_plus = z * ts.sin() - ts;
        // 4/3 zeta^{3/2} = -2 f(t+) => (2/3)(-zeta)^{3/2} = f_plus for z > 1
        let lhs = 2.0 / 3.0 * (-p2.zeta).powf(1.5);
        assert!((lhs - f_plus).abs() < 1e-13, "{lhs} vs {f_plus}");
    }

    #[test]
    fn params_hyp() {
        let p = solve_params(&Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 }).unwrap();
        assert!((p.zeta - 0.025536930283930684).abs() < 1e-8);
        assert!((p.p0 + p.zeta).abs() < 1e-15);
        // theta = sigma + sin sigma to 1e-14
        let (theta, sigma) = (p.theta.unwrap(), p.sigma.unwrap());
        assert!((sigma + sigma.sin() - theta).abs() < 1e-14);
        let m = solve_params(&Case::HypNearM1 { a: 0.5, b: 0.5, c: 0.5, z: -0.9 }).unwrap();
        assert!((m.zeta - 0.025536930283930684).abs() < 1e-8);
    }

    fn ring_bessel(z: f64, m: usize, r: f64) -> NodeRing<f64> {
        let case = Case::AiryBessel { z };
        let params = solve_params(&case).unwrap();
        build_node_ring::<f64>(&case, &params, r, m).unwrap()
    }

    #[test]
    fn ring_invariants_bessel() {
        let case = Case::AiryBessel { z: 0.995 };
        let ring = ring_bessel(0.995, 30, 1.0);
        assert_eq!(ring.len(), 60);
        assert!(ring.closure_defect <= 1e-10, "closure {}", ring.closure_defect);
        assert!(ring.max_map_residual(&case) <= 1e-12);
        // conjugate symmetry: t_{2M-m} = conj(t_m)
        for m in 1..ring.big_m {
            let a = ring.nodes[2 * ring.big_m - m].t;
            let b = ring.nodes[m].t.conj();
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "node {m}");
        }
        // exact node placement
        for (m, n) in ring.nodes.iter().enumerate() {
            let want = C64::from_polar(1.0, std::f64::consts::PI * m as f64 / 30.0);
            assert!((n.w - want).norm() < 1e-14);
        }
    }

    #[test]
    fn degenerate_single_node_pair() {
        // M = 1: nodes at ±r; the map equation must hold at both
        let case = Case::AiryBessel { z: 0.9 };
        let params = solve_params(&case).unwrap();
        let ring = build_node_ring::<f64>(&case, &params, 1.0, 1).unwrap();
        assert_eq!(ring.len(), 2);
        assert!(ring.max_map_residual(&case) <= 1e-12);
    }

    #[test]
    fn ring_invariants_hyp_both_sides() {
        for (case, z) in [
            (Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 }, 0.9),
            (Case::HypNearM1 { a: 0.5, b: 0.5, c: 0.5, z: -0.9 }, -0.9),
        ] {
            let params = solve_params(&case).unwrap();
            let ring = build_node_ring::<f64>(&case, &params, 1.0, 30).unwrap();
            assert!(ring.closure_defect <= 1e-10, "z={z}: closure {}", ring.closure_defect);
            assert!(ring.max_map_residual(&case) <= 1e-12, "z={z}");
            for m in 1..ring.big_m {
                let a = ring.nodes[2 * ring.big_m - m].t;
                let b = ring.nodes[m].t.conj();
                assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "z={z} node {m}");
            }
            // G_0 itself is conjugate-symmetric after the snap
            for m in 1..ring.big_m {
                let a = ring.nodes[2 * ring.big_m - m].g0;
                let b = ring.nodes[m].g0.conj();
                assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0), "z={z} g0 node {m}");
            }
        }
    }

    #[test]
    fn dd_ring_matches_f64_ring() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let params = solve_params(&case).unwrap();
        let r64 = build_node_ring::<f64>(&case, &params, 1.0, 12).unwrap();
        let rdd = build_node_ring::<Dd>(&case, &params, 1.0, 12).unwrap();
        for (a, b) in r64.nodes.iter().zip(&rdd.nodes) {
            let g = to_c64(b.g0);
            assert!((a.g0 - g).norm() < 1e-12 * g.norm().max(1e-30));
        }
    }

    #[test]
    fn saddle_values_match_closed_form_modulus() {
        let case = Case::HypNear1 { a: 0.5, b: 0.5, c: 0.5, z: 0.9 };
        let params = solve_params(&case).unwrap();
        let (gp, gm) = saddle_values(&case, &params).unwrap();
        let cf = saddle_g0_closed_form(&case, &params).unwrap();
        assert!((gp.norm() - cf.norm()).abs() < 1e-9 * cf.norm(), "{} vs {}", gp.norm(), cf.norm());
        assert!((gp - cf).norm() < 1e-6 * cf.norm(), "phase mismatch {gp} vs {cf}");
        assert!((gm - cf.conj()).norm() < 1e-6 * cf.norm());
        // a = b: phase reduces to (c/2 - b) sigma
        let case2 = Case::HypNear1 { a: 0.25, b: 0.25, c: 0.6, z: 0.9 };
        let params2 = solve_params(&case2).unwrap();
        let cf2 = saddle_g0_closed_form(&case2, &params2).unwrap();
        let want_phase = (0.3 - 0.25) * params2.sigma.unwrap();
        assert!((cf2.arg() - want_phase).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_geometry() {
        let case = Case::AiryBessel { z: 0.995 };
        let params = solve_params(&case).unwrap();
        assert!(build_node_ring::<f64>(&case, &params, 0.05, 8).is_err());
        let c1 = Case::AiryBessel { z: 1.0 };
        let p1 = solve_params(&c1).unwrap();
        assert!(matches!(
            build_node_ring::<f64>(&c1, &p1, 1.0, 8),
            Err(Error::CoalescencePoint(_))
        ));
    }

    #[test]
    fn csv_export_shape() {
        let ring = ring_bessel(0.9, 8, 1.0);
        let csv = ring.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines[0].starts_with("m,re_w"));
    }
}
