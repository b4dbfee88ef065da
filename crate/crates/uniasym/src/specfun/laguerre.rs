//! Laguerre polynomials and the Jacobi three-term-recurrence oracle.

/// Generalized Laguerre polynomial `L_n^{(alpha)}(x)` by the three-term
/// recurrence in `n`.
pub fn laguerre_l(n: usize, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0;
    let mut l = alpha + 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * l - (kf + alpha) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}

/// Jacobi polynomial `P_n^{(alpha,beta)}(z)` by the standard recurrence;
/// serves as the independent oracle for the Laguerre-type uniform expansion.
pub fn jacobi_p(n: usize, alpha: f64, beta: f64, z: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0;
    let mut p = (alpha + 1.0) + (alpha + beta + 2.0) * (z - 1.0) / 2.0;
    for k in 2..=n {
        let kf = k as f64;
        let ab = alpha + beta;
        let c1 = 2.0 * kf * (kf + ab) * (2.0 * kf + ab - 2.0);
        let c2 = (2.0 * kf + ab - 1.0)
            * ((2.0 * kf + ab) * (2.0 * kf + ab - 2.0) * z + alpha * alpha - beta * beta);
        let c3 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * (2.0 * kf + ab);
        let next = (c2 * p - c3 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn laguerre_base_cases() {
        assert_eq!(laguerre_l(0, 0.7, 3.0), 1.0);
        let (alpha, x) = (0.7, 3.0);
        assert!(rel(laguerre_l(1, alpha, x), alpha + 1.0 - x) < 1e-15);
    }

    /// Oracle: explicit monomial expansion
    /// L_n^{(alpha)}(x) = sum_k (-1)^k binom(n+alpha, n-k) x^k / k!
    #[test]
    fn laguerre_against_monomial_expansion() {
        let (n, alpha, x) = (5usize, 0.5, 2.0_f64);
        let mut oracle = 0.0;
        for k in 0..=n {
            // binom(n+alpha, n-k) = prod_{j=1}^{n-k} (alpha+k+j)/j
            let mut b = 1.0;
            for j in 1..=(n - k) {
                b *= (alpha + k as f64 + j as f64) / j as f64;
            }
            let mut kfact = 1.0;
            for j in 1..=k {
                kfact *= j as f64;
            }
            oracle += if k % 2 == 0 { 1.0 } else { -1.0 } * b * x.powi(k as i32) / kfact;
        }
        let got = laguerre_l(n, alpha, x);
        assert!(rel(got, oracle) < 1e-14, "{got} vs {oracle}");
        // frozen value: L_5^(1/2)(2) = 0.43515625 exactly in binary-friendly rationals
        assert!(rel(got, 0.43515625) < 1e-14);
    }

    #[test]
    fn jacobi_known_values() {
        // frozen recurrence-independent reference
        assert!(rel(jacobi_p(20, 0.3, -0.2, 0.95), 0.28350588248427765) < 1e-12);
        // Chebyshev specialization: P_n^(-1/2,-1/2)(z) = binom(2n,n)/4^n T_n(z)
        let n = 20;
        let z = 0.95_f64;
        let mut norm = 1.0;
        for k in 0..n {
            norm *= (n + k + 1) as f64 / (4 * (k + 1)) as f64;
        }
        let t20 = (n as f64 * z.acos()).cos();
        assert!(rel(jacobi_p(n, -0.5, -0.5, z), norm * t20) < 1e-12);
    }
}
