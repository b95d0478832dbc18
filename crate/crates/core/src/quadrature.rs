//! Deterministic quadrature on the plane and on the unit interval.
//!
//! Plane integrals are taken in polar form with the measure `ρ dρ dφ`.
//! The angle uses the uniform trapezoid rule, which is exact for
//! trigonometric polynomials of degree below the node count. The radius is
//! mapped onto `s ∈ (−1, 1)` through `ρ² = (1+s)/(1−s)` and integrated with
//! Gauss–Legendre rules whose node count doubles until two successive
//! estimates agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::HalfInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialMap {
    /// `ρ² = (1+s)/(1−s)`, `s ∈ (−1, 1)`; `ρ dρ = ds/(1−s)²`.
    RationalToUnit,
}

impl RadialMap {
    /// `(ρ, Jacobian of ρ dρ)` at the mapped node `s`.
    fn apply(self, s: f64) -> (f64, f64) {
        match self {
            RadialMap::RationalToUnit => {
                let one_minus = 1.0 - s;
                (
                    ((1.0 + s) / one_minus).sqrt(),
                    1.0 / (one_minus * one_minus),
                )
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Gauss nodes at the first refinement level.
    pub radial_nodes: usize,
    pub radial_map: RadialMap,
    pub angular_nodes: usize,
    pub abs_tol: f64,
    /// Number of node doublings allowed; `0` evaluates one fixed rule.
    pub max_refinements: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            radial_nodes: 16,
            radial_map: RadialMap::RationalToUnit,
            angular_nodes: 16,
            abs_tol: 1e-11,
            max_refinements: 6,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 8 {
            return Err(Error::InvalidParam(format!(
                "radial_nodes = {} must be >= 8",
                self.radial_nodes
            )));
        }
        if self.angular_nodes < 1 {
            return Err(Error::InvalidParam("angular_nodes must be >= 1".into()));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "abs_tol = {} must be > 0",
                self.abs_tol
            )));
        }
        Ok(())
    }

    /// Single fixed rule with `n` radial nodes.
    pub fn fixed(n: usize, angular_nodes: usize) -> Self {
        QuadratureConfig {
            radial_nodes: n,
            angular_nodes,
            max_refinements: 0,
            ..QuadratureConfig::default()
        }
    }
}

/// An integral value with its error estimate (the last refinement
/// correction; infinite for a fixed rule).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    /// Rule evaluations performed.
    pub levels: usize,
    pub nodes: usize,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫₀^∞ h(ρ) ρ dρ` with node doubling.
pub fn integrate_radial<F>(h: F, cfg: &QuadratureConfig) -> Result<Estimate>
where
    F: Fn(f64) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    let rule_sum = |n: usize| -> Result<Complex64> {
        let rule = GaussLegendre::new(n);
        let terms: Result<Vec<Complex64>> = rule
            .nodes
            .par_iter()
            .zip(rule.weights.par_iter())
            .map(|(&s, &w)| {
                let (rho, jac) = cfg.radial_map.apply(s);
                Ok(h(rho)? * (w * jac))
            })
            .collect();
        Ok(terms?.into_iter().sum())
    };

    let mut n = cfg.radial_nodes;
    let mut prev = rule_sum(n)?;
    if cfg.max_refinements == 0 {
        return Ok(Estimate {
            value: prev,
            error: f64::INFINITY,
            levels: 1,
            nodes: n,
        });
    }
    let mut delta = f64::INFINITY;
    for level in 1..=cfg.max_refinements {
        n *= 2;
        let next = rule_sum(n)?;
        delta = (next - prev).norm();
        prev = next;
        if delta < cfg.abs_tol {
            return Ok(Estimate {
                value: next,
                error: delta,
                levels: level + 1,
                nodes: n,
            });
        }
    }
    Err(Error::QuadratureNonConvergence {
        last_delta: delta,
        tol: cfg.abs_tol,
    })
}

/// `∫₀^∞ ∫₀^{2π} g(ρ, φ) ρ dρ dφ`.
pub fn integrate_plane<G>(g: G, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    cfg.validate()?;
    let k = cfg.angular_nodes;
    let dphi = 2.0 * PI / k as f64;
    integrate_radial(
        |rho| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..k {
                acc += g(rho, i as f64 * dphi)?;
            }
            Ok(acc * dphi)
        },
        cfg,
    )
}

/// Angular nodes that integrate every Ψ-pair integrand up to `j_max`
/// exactly (Fourier degree at most `2·(2 j_max)`).
pub fn angular_node_count(j_max: HalfInt) -> usize {
    (2 * j_max.twice().max(0) + 2) as usize
}

/// Tanh–sinh integration of `f` over `[0, 1]`, halving the step until two
/// levels differ by less than `abs_tol` (or by a few ulps of the value).
///
/// The map clusters nodes doubly-exponentially at both ends, so algebraic
/// and logarithmic endpoint singularities converge at the same rate as
/// smooth integrands. `x` is formed so that it stays accurate near 0.
pub fn tanh_sinh_unit<F>(f: F, abs_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;
    let node = |t: f64| -> (f64, f64) {
        let s = PI * t.sinh();
        // x = σ(s), 1 − x = σ(−s), dx/dt = σ(s)σ(−s)·π cosh t
        let x = 1.0 / (1.0 + (-s).exp());
        let xc = 1.0 / (1.0 + s.exp());
        (x, x * xc * PI * t.cosh())
    };
    let term = |t: f64| -> Complex64 {
        let (x, w) = node(t);
        if w == 0.0 || x == 0.0 || x >= 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(x) * w
        }
    };

    let mut h = 0.5;
    let steps = (T_MAX / h) as i64;
    let mut sum: Complex64 = (-steps..=steps).map(|i| term(i as f64 * h)).sum();
    let mut estimate = sum * h;
    let mut delta = f64::INFINITY;
    for _level in 1..=MAX_LEVEL {
        h *= 0.5;
        let steps = (T_MAX / h) as i64;
        let odd: Complex64 = (-steps..=steps)
            .filter(|i| i.rem_euclid(2) == 1)
            .map(|i| term(i as f64 * h))
            .sum();
        sum += odd;
        let next = sum * h;
        delta = (next - estimate).norm();
        estimate = next;
        if delta < abs_tol.max(8.0 * f64::EPSILON * estimate.norm()) {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNonConvergence {
        last_delta: delta,
        tol: abs_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [1, 2, 5, 8, 16, 33, 64] {
            let rule = GaussLegendre::new(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert_relative_eq!(wsum, 2.0, epsilon = 1e-13);
            for deg in 0..(2 * n).min(40) {
                let num: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!(
                    (num - exact).abs() < 1e-13,
                    "n={n} deg={deg}: {num} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn gauss_legendre_large_rule() {
        let rule = GaussLegendre::new(1024);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        let num: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.cos())
            .sum();
        assert_relative_eq!(num, 2.0 * 1f64.sin(), epsilon = 1e-13);
    }

    #[test]
    fn unit_norm_of_classical_singlet() {
        // 2∫ρdρ/(1+ρ²)² · (1/2π) · 2π = 1
        let cfg = QuadratureConfig::default();
        let est = integrate_plane(
            |rho, _| Ok(c(2.0 / (2.0 * PI * (1.0 + rho * rho).powi(2)))),
            &cfg,
        )
        .unwrap();
        assert!((est.value - 1.0).norm() < cfg.abs_tol);
    }

    #[test]
    fn gaussian_half() {
        let cfg = QuadratureConfig {
            max_refinements: 8,
            ..QuadratureConfig::default()
        };
        let est = integrate_plane(|rho, _| Ok(c((-rho * rho).exp() / (2.0 * PI))), &cfg).unwrap();
        assert!((est.value - 0.5).norm() < 10.0 * cfg.abs_tol, "{:?}", est);
    }

    #[test]
    fn angular_fourier_modes_vanish() {
        let cfg = QuadratureConfig {
            angular_nodes: 9,
            ..QuadratureConfig::default()
        };
        let radial = |rho: f64| 1.0 / (1.0 + rho * rho).powi(2);
        let base = integrate_plane(|rho, _| Ok(c(radial(rho))), &cfg)
            .unwrap()
            .value
            .norm();
        for k in [-8i32, -3, 1, 2, 8] {
            let est = integrate_plane(
                |rho, phi| Ok(Complex64::from_polar(radial(rho), k as f64 * phi)),
                &cfg,
            )
            .unwrap();
            assert!(est.value.norm() < 1e-14 * base, "k={k}: {}", est.value);
        }
    }

    #[test]
    fn refinement_error_decreases() {
        // s-map integrand with a pole pair off the interval: geometric convergence
        let mut errs = Vec::new();
        for k in 0..4 {
            let cfg = QuadratureConfig::fixed(8 << k, 1);
            let v = integrate_radial(|rho| Ok(c(1.0 / (1.0 + 9.0 * rho.powi(4)))), &cfg)
                .unwrap()
                .value;
            errs.push(v);
        }
        let d: Vec<f64> = errs.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }

    #[test]
    fn nonconvergence_is_reported() {
        let cfg = QuadratureConfig {
            max_refinements: 1,
            abs_tol: 1e-300,
            ..Default::default()
        };
        let r = integrate_radial(|rho| Ok(c((-rho).exp() * (30.0 * rho).sin())), &cfg);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
        let bad = QuadratureConfig {
            radial_nodes: 4,
            ..Default::default()
        };
        assert!(integrate_radial(|_| Ok(c(0.0)), &bad).is_err());
    }

    #[test]
    fn angular_node_counts() {
        assert!(angular_node_count(HalfInt::ZERO) >= 2);
        assert!(angular_node_count(HalfInt::from_int(3)) >= 14);
        assert!(angular_node_count(HalfInt::HALF) >= 4);
    }

    #[test]
    fn tanh_sinh_endpoint_singularities() {
        // ∫₀¹ x^{-1/2} dx = 2
        let v = tanh_sinh_unit(|x| c(x.powf(-0.5)), 1e-13).unwrap();
        assert!((v - c(2.0)).norm() < 1e-13, "{v}");
        // ∫₀¹ ln x dx = −1
        let v = tanh_sinh_unit(|x| c(x.ln()), 1e-13).unwrap();
        assert!((v - c(-1.0)).norm() < 1e-13, "{v}");
        // ∫₀¹ x^{1.22} ln x dx = −1/2.22²
        let v = tanh_sinh_unit(|x| c(x.powf(1.22) * x.ln()), 1e-13).unwrap();
        assert!((v - c(-1.0 / (2.22f64 * 2.22))).norm() < 1e-13, "{v}");
        // ∫₀¹ 1/(1+x²) = π/4
        let v = tanh_sinh_unit(|x| c(1.0 / (1.0 + x * x)), 1e-14).unwrap();
        assert!((v - c(PI / 4.0)).norm() < 1e-14);
    }
}
