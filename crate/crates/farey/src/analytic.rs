//! Closed-form constants and limiting gap-distribution functions:
//! `C(l)`, `Ktilde_l`, `K_d`, the areas `A(xi)` and `A_K(xi)`, the
//! assembled `G_l(xi)` and the CDF `Ftilde_l`.
//!
//! Constants are carried as exact rational multiples of `1/zeta(2)` so
//! cancellations survive; evaluation happens in double precision.

use crate::error::{FareyError, Result};
use crate::geometry::{rat, rat_to_f64, Rat};
use num::One;
use std::f64::consts::PI;
use std::sync::Arc;

pub fn zeta2() -> f64 {
    PI * PI / 6.0
}

fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: i64) -> i64 {
    let mut out = n;
    for p in prime_factors(n) {
        out = out / p * (p - 1);
    }
    out
}

pub fn omega(n: i64) -> usize {
    prime_factors(n).len()
}

pub fn smallest_prime_factor(n: i64) -> Option<i64> {
    prime_factors(n).into_iter().min()
}

/// `C(n) * zeta(2)` as an exact rational: the Euler product
/// `prod_{p | n} (1 + 1/p)^{-1}`.
pub fn constant_c_rational(n: i64) -> Result<Rat> {
    if n < 1 {
        return Err(FareyError::InvalidInput(format!("n must be >= 1, got {n}")));
    }
    let mut acc = Rat::one();
    for p in prime_factors(n) {
        acc *= rat(p, p + 1);
    }
    Ok(acc)
}

/// `C(n) = (1/zeta(2)) prod_{p | n} (1 + 1/p)^{-1}`.
pub fn constant_c(n: i64) -> Result<f64> {
    Ok(rat_to_f64(&constant_c_rational(n)?) / zeta2())
}

/// `Ktilde_l * zeta(2) = 1/2 - C(l) zeta(2) / (2l)`, exact.
pub fn k_tilde_rational(ell: i64) -> Result<Rat> {
    if ell < 2 {
        return Err(FareyError::InvalidInput(format!(
            "ell must be >= 2, got {ell}"
        )));
    }
    Ok(rat(1, 2) - constant_c_rational(ell)? / rat(2 * ell, 1))
}

/// Mean-gap normalizer of the numerator-constrained sets:
/// `Ktilde_l = 1/(2 zeta(2)) - C(l)/(2l)`.
pub fn k_tilde(ell: i64) -> Result<f64> {
    Ok(rat_to_f64(&k_tilde_rational(ell)?) / zeta2())
}

/// Mean-gap normalizer of the denominator-constrained sets:
/// `K_d = C(d)/2`.
pub fn k_d(d: i64) -> Result<f64> {
    Ok(constant_c(d)? / 2.0)
}

// ---- A(xi): Area(T ∩ {xy >= 1/xi}) ----

fn a_branch_mid(xi: f64) -> f64 {
    1.0 - (xi.ln() + 1.0) / xi
}

fn a_branch_high(xi: f64) -> f64 {
    let s = (1.0 - 4.0 / xi).max(0.0).sqrt();
    1.0 - 1.0 / xi - 0.5 * s + (2.0 / xi) * ((1.0 + s) / 2.0).ln()
}

/// The three-branch area `A(xi)`; breakpoints at 1 and 4, limit 1/2.
pub fn big_a(xi: f64) -> f64 {
    if xi <= 1.0 {
        0.0
    } else if xi <= 4.0 {
        a_branch_mid(xi)
    } else {
        a_branch_high(xi)
    }
}

// ---- A_K(xi): Area(T_K ∩ {u >= v/K + 1/(xi v)}) ----

fn a1_terms(xi: f64) -> (f64, f64) {
    // Common part (1/2)sqrt(1 - 4/xi) - (1/xi) ln(u2/u1) and the root
    // discriminant for the 8/xi family.
    let s4 = (1.0 - 4.0 / xi).max(0.0).sqrt();
    let u1 = 0.5 * (1.0 - s4);
    let u2 = 0.5 * (1.0 + s4);
    let common = 0.5 * s4 - (u2 / u1).ln() / xi;
    let s8 = (1.0 - 8.0 / xi).max(0.0).sqrt();
    (common, s8)
}

fn a1(xi: f64) -> f64 {
    if xi <= 4.0 {
        return 0.0;
    }
    let (common, s8) = a1_terms(xi);
    if xi <= 8.0 {
        common
    } else {
        let v1 = 0.25 * (1.0 - s8);
        let v2 = 0.25 * (1.0 + s8);
        if xi <= 9.0 {
            common - 0.5 * s8 + (2.0 / xi) * (v2 / v1).ln()
        } else {
            common - 0.25 * s8 - 1.0 / 12.0 + (2.0 * v2 / v1).ln() / xi
        }
    }
}

fn ak_ge2(k: i64, xi: f64) -> f64 {
    let kf = k as f64;
    if xi <= kf {
        return 0.0;
    }
    let b1 = kf * (kf + 1.0) / (kf - 1.0);
    let b2 = (kf + 2.0) * (kf + 2.0) / kf;
    if xi <= b1 {
        1.0 / kf - 1.0 / xi - (xi / kf).ln() / xi
    } else if xi <= b2 {
        let s = (1.0 - (4.0 / xi) * (1.0 + 1.0 / kf)).max(0.0).sqrt();
        let vk = kf / (2.0 * (kf + 1.0)) * (1.0 + s);
        let wk = kf / 2.0 * (1.0 - s);
        (kf * kf * kf + 8.0) / (2.0 * kf * (kf + 1.0) * (kf + 2.0)) - (wk / vk).ln() / xi
            - vk / 2.0
            + wk / (2.0 * (kf + 1.0))
    } else {
        4.0 / (kf * (kf + 1.0) * (kf + 2.0))
    }
}

/// Closed-form `A_K(xi)` for K >= 1.
pub fn a_k(k: i64, xi: f64) -> Result<f64> {
    if k < 1 {
        return Err(FareyError::InvalidInput(format!("K must be >= 1, got {k}")));
    }
    if xi < 0.0 {
        return Err(FareyError::InvalidInput(format!("xi must be >= 0, got {xi}")));
    }
    Ok(if k == 1 { a1(xi) } else { ak_ge2(k, xi) })
}

/// `G_l(xi) = (1/zeta(2) - 2C(l)/l) A(xi) + (C(l)/l) sum_{K <= xi} A_K(xi)`.
pub fn g_ell(ell: i64, xi: f64) -> Result<f64> {
    let c = constant_c(ell)?;
    let mut sum = 0.0;
    let kmax = xi.floor() as i64;
    for k in 1..=kmax {
        sum += a_k(k, xi)?;
    }
    Ok((1.0 / zeta2() - 2.0 * c / ell as f64) * big_a(xi) + c / ell as f64 * sum)
}

/// The limiting gap CDF of the numerator-constrained sets:
/// `Ftilde_l(s) = (1/Ktilde_l) G_l(s / Ktilde_l)`.
pub fn ftilde_cdf(ell: i64, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(FareyError::InvalidInput(format!("s must be >= 0, got {s}")));
    }
    let kt = k_tilde(ell)?;
    Ok(g_ell(ell, s / kt)? / kt)
}

/// Evaluable function of `xi >= 0` with its analytic breakpoints.
#[derive(Clone)]
pub struct PiecewiseCurve {
    breakpoints: Vec<f64>,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl PiecewiseCurve {
    pub fn new(breakpoints: Vec<f64>, eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>) -> Self {
        Self { breakpoints, eval }
    }

    pub fn eval(&self, xi: f64) -> f64 {
        (self.eval)(xi)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
}

pub fn curve_a() -> PiecewiseCurve {
    PiecewiseCurve::new(vec![1.0, 4.0], Arc::new(big_a))
}

pub fn curve_a_k(k: i64) -> Result<PiecewiseCurve> {
    a_k(k, 0.0)?;
    let breakpoints = if k == 1 {
        vec![4.0, 8.0, 9.0]
    } else {
        let kf = k as f64;
        vec![
            kf,
            kf * (kf + 1.0) / (kf - 1.0),
            (kf + 2.0) * (kf + 2.0) / kf,
        ]
    };
    Ok(PiecewiseCurve::new(
        breakpoints,
        Arc::new(move |xi| a_k(k, xi).unwrap()),
    ))
}

pub fn curve_ftilde(ell: i64) -> Result<PiecewiseCurve> {
    let kt = k_tilde(ell)?;
    // Analytic on each component of (0, inf) \ N*Ktilde_l.
    let breakpoints = (1..=40).map(|n| n as f64 * kt).collect();
    Ok(PiecewiseCurve::new(
        breakpoints,
        Arc::new(move |s| ftilde_cdf(ell, s).unwrap()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcz::{farey_triangle, omega_area, omega_area_unit, CylinderWord, RegionSampler};
    use approx::assert_abs_diff_eq;

    #[test]
    fn constants() {
        assert_abs_diff_eq!(constant_c(1).unwrap(), 6.0 / (PI * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(constant_c(2).unwrap(), 4.0 / (PI * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(constant_c(6).unwrap(), 3.0 / (PI * PI), epsilon = 1e-15);
        // Ktilde_2 = 2/pi^2 exactly.
        assert_eq!(k_tilde_rational(2).unwrap(), rat(1, 3));
        assert_abs_diff_eq!(k_tilde(2).unwrap(), 2.0 / (PI * PI), epsilon = 1e-15);
        for n in 2..=50 {
            let c = constant_c(n).unwrap();
            assert!(c > 0.0 && c <= 1.0 / zeta2());
            assert!(k_tilde(n).unwrap() > 0.0);
            assert!(k_d(n).unwrap() > 0.0 && k_d(n).unwrap() <= 0.5);
        }
    }

    #[test]
    fn big_a_values() {
        assert_eq!(big_a(1.0), 0.0);
        assert_eq!(big_a(0.3), 0.0);
        let at4 = 1.0 - (4f64.ln() + 1.0) / 4.0;
        assert_abs_diff_eq!(big_a(4.0), at4, epsilon = 1e-14);
        assert_abs_diff_eq!(a_branch_high(4.0), at4, epsilon = 1e-14);
        assert_abs_diff_eq!(big_a(1e9), 0.5, epsilon = 1e-7);
    }

    #[test]
    fn a_k_values() {
        assert_eq!(a_k(1, 4.0).unwrap(), 0.0);
        assert_abs_diff_eq!(a_k(2, 8.0).unwrap(), 1.0 / 6.0, epsilon = 1e-14);
        let want = 1.0 / 3.0 - 1.0 / 5.0 - (5f64 / 3.0).ln() / 5.0;
        assert_abs_diff_eq!(a_k(3, 5.0).unwrap(), want, epsilon = 1e-14);
        for k in 2..=10i64 {
            let kf = k as f64;
            assert_abs_diff_eq!(
                a_k(k, 1e9).unwrap(),
                4.0 / (kf * (kf + 1.0) * (kf + 2.0)),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn branch_continuity() {
        // Both adjacent branch formulas agree at each breakpoint.
        assert_abs_diff_eq!(a_branch_mid(1.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a_branch_mid(4.0), a_branch_high(4.0), epsilon = 1e-12);
        let (c8, _) = a1_terms(8.0);
        assert_abs_diff_eq!(c8, a1(8.0), epsilon = 1e-12);
        // A_1 branches 3 and 4 at xi = 9: s8 = 1/3, v1 = 1/6, v2 = 1/3.
        let b3 = |xi: f64| {
            let (c, s8) = a1_terms(xi);
            let (v1, v2) = (0.25 * (1.0 - s8), 0.25 * (1.0 + s8));
            c - 0.5 * s8 + (2.0 / xi) * (v2 / v1).ln()
        };
        let b4 = |xi: f64| {
            let (c, s8) = a1_terms(xi);
            let (v1, v2) = (0.25 * (1.0 - s8), 0.25 * (1.0 + s8));
            c - 0.25 * s8 - 1.0 / 12.0 + (2.0 * v2 / v1).ln() / xi
        };
        assert_abs_diff_eq!(b3(9.0), b4(9.0), epsilon = 1e-12);
        for k in 2..=8i64 {
            let kf = k as f64;
            let b1 = kf * (kf + 1.0) / (kf - 1.0);
            let b2 = (kf + 2.0) * (kf + 2.0) / kf;
            for b in [kf, b1, b2] {
                let below = ak_ge2(k, b - 1e-12);
                let above = ak_ge2(k, b + 1e-12);
                assert!(
                    (below - above).abs() < 1e-9,
                    "K={k} xi={b}: {below} vs {above}"
                );
            }
        }
    }

    #[test]
    fn monotone_on_grid() {
        for curve in [
            curve_a(),
            curve_a_k(1).unwrap(),
            curve_a_k(4).unwrap(),
            curve_ftilde(3).unwrap(),
        ] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..10_000 {
                let xi = i as f64 * 30.0 / 10_000.0;
                let v = curve.eval(xi);
                assert!(v >= prev - 1e-12, "decrease at xi={xi}");
                prev = v;
            }
        }
        for ell in [2, 3, 5] {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..2_000 {
                let xi = i as f64 * 30.0 / 2_000.0;
                let v = g_ell(ell, xi).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn quadrature_oracle() {
        // A and A_K vs the independent polygon-slicing integrator.
        for i in 1..=60 {
            let xi = i as f64 * 0.5;
            assert_abs_diff_eq!(big_a(xi), omega_area_unit(1, xi).unwrap(), epsilon = 1e-8);
            for k in 1..=8i64 {
                let w = CylinderWord::new(vec![k]).unwrap();
                assert_abs_diff_eq!(
                    a_k(k, xi).unwrap(),
                    omega_area(&w, k, xi).unwrap(),
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn monte_carlo_oracle_spot() {
        let sampler = RegionSampler::new(&farey_triangle(), (0, 1), 1_000_000, 42);
        for xi in [2.0, 5.0, 12.5] {
            let (est, sigma) = sampler.area_ge(1.0 / xi);
            assert!((est - big_a(xi)).abs() <= 4.0 * sigma);
        }
    }

    #[test]
    fn total_mass() {
        let xi = 1e4;
        let tail = 2.0 / ((xi + 1.0) * (xi + 2.0));
        for ell in [2, 3, 4, 5, 6] {
            let g = g_ell(ell, xi).unwrap();
            let kt = k_tilde(ell).unwrap();
            assert!((g - kt).abs() <= tail, "ell={ell}: {g} vs {kt}");
            let f = ftilde_cdf(ell, kt * xi).unwrap();
            assert!((f - 1.0).abs() <= tail / kt);
        }
    }

    #[test]
    fn ftilde_support_and_example() {
        let kt3 = k_tilde(3).unwrap();
        assert_eq!(ftilde_cdf(3, 0.0).unwrap(), 0.0);
        assert_eq!(ftilde_cdf(3, 0.99 * kt3).unwrap(), 0.0);
        assert!(ftilde_cdf(3, 1.2 * kt3).unwrap() > 0.0);
        // G_3(2) = (1/zeta2 - 2C(3)/3) A(2) since A_1(2) = 0.
        let c3 = constant_c(3).unwrap();
        let want = (1.0 / zeta2() - 2.0 * c3 / 3.0) * (1.0 - (2f64.ln() + 1.0) / 2.0);
        assert_abs_diff_eq!(g_ell(3, 2.0).unwrap(), want, epsilon = 1e-14);
        assert_eq!(g_ell(3, 0.8).unwrap(), 0.0);
    }
}
