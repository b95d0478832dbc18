//! Scalar products on plane functions, Gram matrices and adjointness checks.
//!
//! The deformed forms pair a function with a q-dilated partner, weighted by
//! `q^{±1}/((1+η)(1+q^{±2}η))`, `η = zz̄`. The parameter inversion `q → q⁻¹`
//! is applied by evaluating the family at [`QParam::inverse`]; nothing about
//! a family's q-dependence is stored or rewritten.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{HalfInt, QParam, Regime, Triple};
use crate::qops::{apply_h_minus, apply_h_plus, apply_q2h3, PlaneFamily, RealizationParams};
use crate::quadrature::{integrate_plane, integrate_radial, Estimate, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InnerProductKind {
    /// `2 ∫ conj(f) g / (1+zz̄)²`, at `q = 1`.
    Classical,
    /// Positive real `q`.
    DeformedReal,
    /// `q = e^{iτ}`.
    DeformedCircle,
}

impl InnerProductKind {
    /// The kind that unitarizes the realization at `p`.
    pub fn for_param(p: &QParam) -> Self {
        match p.regime() {
            Regime::Classical => InnerProductKind::Classical,
            Regime::PositiveReal => InnerProductKind::DeformedReal,
            Regime::UnitCircle => InnerProductKind::DeformedCircle,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InnerProductKind::Classical => "classical",
            InnerProductKind::DeformedReal => "deformed-real",
            InnerProductKind::DeformedCircle => "deformed-circle",
        }
    }

    pub fn check(self, p: &QParam) -> Result<()> {
        if InnerProductKind::for_param(p) == self {
            Ok(())
        } else {
            Err(Error::RegimeMismatch(format!(
                "{} scalar product at {p}",
                self.name()
            )))
        }
    }

    /// `B₁ = (q − q⁻¹)/(2 ln q)`, real in both deformed regimes
    /// (`sin τ / τ` on the circle); 1 for the classical form.
    pub fn prefactor(self, p: &QParam) -> Result<f64> {
        self.check(p)?;
        Ok(match self {
            InnerProductKind::Classical => 1.0,
            _ => (p.q_minus_inv() / (2.0 * p.ln())).re,
        })
    }
}

/// The φ-integrand of `⟨f|g⟩` at the physical point `(u, v) = (z, z̄)`,
/// without the measure `ρ dρ dφ`. `b1` is the prefactor for `kind`.
fn integrand(
    kind: InnerProductKind,
    b1: f64,
    f: &PlaneFamily,
    g: &PlaneFamily,
    p: &QParam,
    z: Complex64,
) -> Result<Complex64> {
    let (u, v) = (z, z.conj());
    let one = Complex64::new(1.0, 0.0);
    let eta = u * v;
    if kind == InnerProductKind::Classical {
        return Ok(2.0 * f.eval(p, u, v)?.conj() * g.eval(p, u, v)? / ((one + eta) * (one + eta)));
    }
    let q = p.complex_value();
    let qi = q.inv();
    let pinv = p.inverse();
    // which parameter the conjugated slot sees in each term
    let (f_first, f_second) = match kind {
        InnerProductKind::DeformedReal => (pinv, *p),
        _ => (*p, pinv),
    };
    let first = f.eval(&f_first, u, v)?.conj() * qi / ((one + eta) * (one + qi * qi * eta))
        * g.eval(p, qi * u, qi * v)?;
    let second = f.eval(&f_second, u, v)?.conj() * q / ((one + eta) * (one + q * q * eta))
        * g.eval(&pinv, q * u, q * v)?;
    Ok((first + second) * b1)
}

/// `⟨f|g⟩` for `kind` at `p`, with the trapezoid rule in angle.
pub fn inner_estimate(
    kind: InnerProductKind,
    f: &PlaneFamily,
    g: &PlaneFamily,
    p: &QParam,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let b1 = kind.prefactor(p)?;
    integrate_plane(
        |rho, phi| integrand(kind, b1, f, g, p, Complex64::from_polar(rho, phi)),
        cfg,
    )
}

pub fn inner(
    kind: InnerProductKind,
    f: &PlaneFamily,
    g: &PlaneFamily,
    p: &QParam,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    Ok(inner_estimate(kind, f, g, p, cfg)?.value)
}

/// `⟨Ψ_a|Ψ_b⟩` with the angle done by mode matching: the integrand is
/// `e^{ikφ}` times a radial function with `k = (M_a+N_a) − (M_b+N_b)`, so
/// the angular integral is `2π δ_{k0}` times the value at `φ = 0`.
pub fn psi_inner_estimate(
    kind: InnerProductKind,
    a: Triple,
    b: Triple,
    p: &QParam,
    cfg: &QuadratureConfig,
) -> Result<Estimate> {
    let b1 = kind.prefactor(p)?;
    if (a.m + a.n) != (b.m + b.n) {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            levels: 0,
            nodes: 0,
        });
    }
    let (f, g) = (PlaneFamily::psi(a), PlaneFamily::psi(b));
    integrate_radial(
        |rho| Ok(2.0 * PI * integrand(kind, b1, &f, &g, p, Complex64::new(rho, 0.0))?),
        cfg,
    )
}

/// How the angular integral of a Gram entry is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularMethod {
    ModeMatched,
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    /// `(J, M)` of each row and column.
    pub labels: Vec<(HalfInt, HalfInt)>,
    pub matrix: DMatrix<Complex64>,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
    /// `max |G_ik − conj(G_ki)|`.
    pub hermiticity: f64,
}

impl GramReport {
    /// Largest deviation from the identity.
    pub fn deviation(&self) -> f64 {
        self.max_offdiag.max(self.max_diag_dev)
    }
}

/// All `(J, M)` with `J` from `j_list` and `M = J, …, −J`, validated
/// against `n`.
pub fn gram_states(n: HalfInt, j_list: &[HalfInt]) -> Result<Vec<Triple>> {
    let mut out = Vec::new();
    for &j in j_list {
        for m in j.weights() {
            out.push(Triple::new(j, m, n)?);
        }
    }
    Ok(out)
}

/// `J = |N|, |N|+1, …, J_max`.
pub fn j_range(n: HalfInt, j_max: HalfInt) -> Vec<HalfInt> {
    let mut out = Vec::new();
    let mut j = n.abs();
    while j <= j_max {
        out.push(j);
        j = j + HalfInt::ONE;
    }
    out
}

pub fn gram(
    n: HalfInt,
    j_list: &[HalfInt],
    p: &QParam,
    kind: InnerProductKind,
    cfg: &QuadratureConfig,
) -> Result<GramReport> {
    gram_with(n, j_list, p, kind, cfg, AngularMethod::ModeMatched)
}

pub fn gram_with(
    n: HalfInt,
    j_list: &[HalfInt],
    p: &QParam,
    kind: InnerProductKind,
    cfg: &QuadratureConfig,
    method: AngularMethod,
) -> Result<GramReport> {
    kind.check(p)?;
    cfg.validate()?;
    let states = gram_states(n, j_list)?;
    let dim = states.len();
    let entries: Result<Vec<Complex64>> = (0..dim * dim)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (states[idx / dim], states[idx % dim]);
            match method {
                AngularMethod::ModeMatched => Ok(psi_inner_estimate(kind, a, b, p, cfg)?.value),
                AngularMethod::Trapezoid => {
                    inner(kind, &PlaneFamily::psi(a), &PlaneFamily::psi(b), p, cfg)
                }
            }
        })
        .collect();
    let matrix = DMatrix::from_row_slice(dim, dim, &entries?);
    let mut max_offdiag = 0.0f64;
    let mut max_diag_dev = 0.0f64;
    let mut hermiticity = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let x = matrix[(r, c)];
            if r == c {
                max_diag_dev = max_diag_dev.max((x - 1.0).norm());
            } else {
                max_offdiag = max_offdiag.max(x.norm());
            }
            hermiticity = hermiticity.max((x - matrix[(c, r)].conj()).norm());
        }
    }
    Ok(GramReport {
        labels: states.iter().map(|t| (t.j, t.m)).collect(),
        matrix,
        max_offdiag,
        max_diag_dev,
        hermiticity,
    })
}

/// Adjointness defects of the generators under a scalar product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointResidual {
    /// `|⟨f|H₊g⟩ − ⟨H₋f|g⟩|`
    pub ladder: f64,
    /// `|⟨f|q^{2H₃}g⟩ − ⟨q^{2H₃}f|g⟩|`
    pub dilation: f64,
}

impl AdjointResidual {
    pub fn max(&self) -> f64 {
        self.ladder.max(self.dilation)
    }
}

/// `f` and `g` must be regular under the stencils at every quadrature node
/// (finite Ψ combinations are).
pub fn adjoint_residual(
    f: &PlaneFamily,
    g: &PlaneFamily,
    p: &QParam,
    kind: InnerProductKind,
    r: RealizationParams,
    cfg: &QuadratureConfig,
) -> Result<AdjointResidual> {
    if kind == InnerProductKind::Classical {
        return Err(Error::ClassicalOperator);
    }
    let lhs = inner(kind, f, &apply_h_plus(g, r), p, cfg)?;
    let rhs = inner(kind, &apply_h_minus(f, r), g, p, cfg)?;
    let dl = inner(kind, f, &apply_q2h3(g, r), p, cfg)?;
    let dr = inner(kind, &apply_q2h3(f, r), g, p, cfg)?;
    Ok(AdjointResidual {
        ladder: (lhs - rhs).norm(),
        dilation: (dl - dr).norm(),
    })
}

/// `|conj(⟨f|g⟩) − ⟨g|f⟩|`.
pub fn hermitian_form_residual(
    f: &PlaneFamily,
    g: &PlaneFamily,
    p: &QParam,
    kind: InnerProductKind,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let fg = inner(kind, f, g, p, cfg)?;
    let gf = inner(kind, g, f, p, cfg)?;
    Ok((fg.conj() - gf).norm())
}
