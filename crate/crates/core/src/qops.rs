//! The su_q(2) generators as q-dilation stencils, and the matrix irreps.
//!
//! With `T = z∂_z` and `T̄ = z̄∂_{z̄}`, every generator combination that
//! appears in the realization is a finite sum of dilations
//! `q^{aT + bT̄} f(u, v) = f(q^a u, q^b v)` times powers of `u`, `v`. The
//! stencils below are those sums, rightmost operator acting first; no
//! derivative is ever taken numerically.
//!
//! Operators are covariant in `q`: the stencil uses the parameter the
//! resulting family is evaluated at. Evaluating `H₊ f` at `q⁻¹` therefore
//! applies the `q⁻¹` realization to `f(·; q⁻¹)`, which is what the
//! parameter-inversion step of the deformed scalar products requires.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{
    check_not_root_of_unity, q_number, screening_range, HalfInt, QParam, Regime, Triple,
};
use crate::qspecial::{psi, psi_combination};

type Evaluator = dyn Fn(&QParam, Complex64, Complex64) -> Result<Complex64> + Send + Sync;

/// A q-parameterized function of two independent complex arguments
/// `(u, v)`; the physical plane is the slice `v = conj(u)`.
#[derive(Clone)]
pub struct PlaneFamily {
    eval: Arc<Evaluator>,
    meta: Option<Triple>,
}

impl fmt::Debug for PlaneFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneFamily")
            .field("meta", &self.meta)
            .finish_non_exhaustive()
    }
}

impl PlaneFamily {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&QParam, Complex64, Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        PlaneFamily {
            eval: Arc::new(f),
            meta: None,
        }
    }

    /// The basis function `Ψ^J_{MNq}`.
    pub fn psi(t: Triple) -> Self {
        PlaneFamily {
            eval: Arc::new(move |p, u, v| psi(t, p, u, v)),
            meta: Some(t),
        }
    }

    /// `Σ c_i Ψ_i`.
    pub fn psi_span(terms: Vec<(Triple, Complex64)>) -> Self {
        PlaneFamily::new(move |p, u, v| psi_combination(&terms, p, u, v))
    }

    /// `u^j v^k`, independent of q.
    pub fn monomial(j: u32, k: u32) -> Self {
        PlaneFamily::new(move |_, u, v| Ok(u.powu(j) * v.powu(k)))
    }

    pub fn constant(c: Complex64) -> Self {
        PlaneFamily::new(move |_, _, _| Ok(c))
    }

    /// Same function with q pinned to `p`; the result ignores the
    /// evaluation parameter (so parameter inversion acts trivially on it).
    pub fn pinned(&self, p: QParam) -> Self {
        let inner = self.eval.clone();
        PlaneFamily {
            eval: Arc::new(move |_, u, v| inner(&p, u, v)),
            meta: self.meta,
        }
    }

    pub fn with_meta(mut self, t: Triple) -> Self {
        self.meta = Some(t);
        self
    }

    pub fn meta(&self) -> Option<Triple> {
        self.meta
    }

    pub fn eval(&self, p: &QParam, u: Complex64, v: Complex64) -> Result<Complex64> {
        (self.eval)(p, u, v)
    }

    /// Value at `(z, conj z)`.
    pub fn eval_physical(&self, p: &QParam, z: Complex64) -> Result<Complex64> {
        self.eval(p, z, z.conj())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.eval.clone();
        PlaneFamily::new(move |p, u, v| Ok(c * inner(p, u, v)?))
    }

    pub fn sum(&self, other: &PlaneFamily) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        PlaneFamily::new(move |p, u, v| Ok(a(p, u, v)? + b(p, u, v)?))
    }
}

/// The realization label `N` of the generator stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RealizationParams {
    pub n: HalfInt,
}

impl RealizationParams {
    pub fn new(n: HalfInt) -> Self {
        RealizationParams { n }
    }
}

/// `q`, `q − q⁻¹`, and the operator needs a non-classical parameter.
fn deformed(p: &QParam) -> Result<(Complex64, Complex64)> {
    if p.regime() == Regime::Classical {
        return Err(Error::ClassicalOperator);
    }
    Ok((p.complex_value(), p.q_minus_inv()))
}

/// `q^{aT + bT̄}`: `(u, v) ↦ f(q^a u, q^b v)`.
pub fn dilate(f: &PlaneFamily, a: f64, b: f64) -> PlaneFamily {
    let f = f.clone();
    PlaneFamily::new(move |p, u, v| f.eval(p, p.pow(a) * u, p.pow(b) * v))
}

/// `H₊ = −z⁻¹[T]_q q^{T̄−N/2} − q^{T+N/2} z̄ [T̄−N]_q`.
pub fn apply_h_plus(f: &PlaneFamily, r: RealizationParams) -> PlaneFamily {
    let f = f.clone();
    let n = r.n.to_f64();
    PlaneFamily::new(move |p, u, v| {
        let (q, d) = deformed(p)?;
        if u == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularPoint("u"));
        }
        let qi = q.inv();
        let f_qq = f.eval(p, q * u, q * v)?;
        let f_iq = f.eval(p, qi * u, q * v)?;
        let f_qi = f.eval(p, q * u, qi * v)?;
        let first = -p.pow(-n / 2.0) * (f_qq - f_iq) / (d * u);
        let second = -p.pow(n / 2.0) * v * (p.pow(-n) * f_qq - p.pow(n) * f_qi) / d;
        Ok(first + second)
    })
}

/// `H₋ = z[T+N]_q q^{T̄−N/2} + q^{T+N/2} z̄⁻¹ [T̄]_q`.
pub fn apply_h_minus(f: &PlaneFamily, r: RealizationParams) -> PlaneFamily {
    let f = f.clone();
    let n = r.n.to_f64();
    PlaneFamily::new(move |p, u, v| {
        let (q, d) = deformed(p)?;
        if v == Complex64::new(0.0, 0.0) {
            return Err(Error::SingularPoint("v"));
        }
        let qi = q.inv();
        let f_qq = f.eval(p, q * u, q * v)?;
        let f_iq = f.eval(p, qi * u, q * v)?;
        let f_qi = f.eval(p, q * u, qi * v)?;
        let first = u * p.pow(-n / 2.0) * (p.pow(n) * f_qq - p.pow(-n) * f_iq) / d;
        let second = p.pow(n / 2.0) * (f_qq - f_qi) / (d * v);
        Ok(first + second)
    })
}

/// `q^{kH₃}` with `H₃ = −T + T̄ − N`: `(u, v) ↦ q^{−kN} f(q^{−k}u, q^{k}v)`.
pub fn apply_q_power_h3(f: &PlaneFamily, r: RealizationParams, k: f64) -> PlaneFamily {
    let f = f.clone();
    let n = r.n.to_f64();
    PlaneFamily::new(move |p, u, v| Ok(p.pow(-k * n) * f.eval(p, p.pow(-k) * u, p.pow(k) * v)?))
}

/// `q^{2H₃}`.
pub fn apply_q2h3(f: &PlaneFamily, r: RealizationParams) -> PlaneFamily {
    apply_q_power_h3(f, r, 2.0)
}

/// Which of the two equal forms of the Casimir to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirOrdering {
    /// `H₊H₋ + [H₃]_q[H₃−1]_q`
    PlusMinus,
    /// `H₋H₊ + [H₃]_q[H₃+1]_q`
    MinusPlus,
}

/// The Casimir operator, with `[H₃]_q[H₃∓1]_q` expanded into
/// `(q^{∓1} q^{2H₃} − (q + q⁻¹) + q^{±1} q^{−2H₃}) / (q − q⁻¹)²`.
pub fn apply_casimir_ordered(
    f: &PlaneFamily,
    r: RealizationParams,
    ordering: CasimirOrdering,
) -> PlaneFamily {
    let ladder = match ordering {
        CasimirOrdering::PlusMinus => apply_h_plus(&apply_h_minus(f, r), r),
        CasimirOrdering::MinusPlus => apply_h_minus(&apply_h_plus(f, r), r),
    };
    let up = apply_q_power_h3(f, r, 2.0);
    let down = apply_q_power_h3(f, r, -2.0);
    let f = f.clone();
    let sign = match ordering {
        CasimirOrdering::PlusMinus => -1.0,
        CasimirOrdering::MinusPlus => 1.0,
    };
    PlaneFamily::new(move |p, u, v| {
        let (q, d) = deformed(p)?;
        let diag = (q.powf(sign) * up.eval(p, u, v)? - (q + q.inv()) * f.eval(p, u, v)?
            + q.powf(-sign) * down.eval(p, u, v)?)
            / (d * d);
        Ok(ladder.eval(p, u, v)? + diag)
    })
}

/// `C = H₊H₋ + [H₃]_q[H₃−1]_q`.
pub fn apply_casimir(f: &PlaneFamily, r: RealizationParams) -> PlaneFamily {
    apply_casimir_ordered(f, r, CasimirOrdering::PlusMinus)
}

/// `([J∓M]_q [J±M+1]_q)^{1/2}`, the coefficient of `H_± |J M⟩`; `raise`
/// selects the upper sign.
pub fn ladder_coefficient(j: HalfInt, m: HalfInt, raise: bool, p: &QParam) -> Result<f64> {
    let (jf, mf) = (j.to_f64(), m.to_f64());
    let radicand = if raise {
        q_number(jf - mf, p) * q_number(jf + mf + 1.0, p)
    } else {
        q_number(jf + mf, p) * q_number(jf - mf + 1.0, p)
    };
    // exact zeros at the ends of the ladder can come out as −0 or −ulp
    if radicand < 0.0 && radicand > -1e-14 {
        return Ok(0.0);
    }
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand {
            value: radicand,
            context: "ladder coefficient",
        });
    }
    Ok(radicand.sqrt())
}

/// `[J]_q [J+1]_q`.
pub fn casimir_eigenvalue(j: HalfInt, p: &QParam) -> f64 {
    let jf = j.to_f64();
    q_number(jf, p) * q_number(jf + 1.0, p)
}

/// The spin-J irrep in the basis `M = J, J−1, …, −J`.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepMatrices {
    pub j: HalfInt,
    pub h3: DMatrix<f64>,
    pub h_plus: DMatrix<f64>,
    pub h_minus: DMatrix<f64>,
}

/// Largest absolute entry of each defining-relation defect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationResiduals {
    /// `[H₃, H₊] − H₊`
    pub h3_plus: f64,
    /// `[H₃, H₋] + H₋`
    pub h3_minus: f64,
    /// `[H₊, H₋] − [2H₃]_q`
    pub plus_minus: f64,
    /// `C − [J]_q[J+1]_q · 1`
    pub casimir: f64,
    /// `H₊ᵀ − H₋`
    pub hermiticity: f64,
    /// `max(1, |[2M]_q|, [J]_q[J+1]_q)`, the size of the compared entries.
    pub scale: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        [
            self.h3_plus,
            self.h3_minus,
            self.plus_minus,
            self.casimir,
            self.hermiticity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

impl IrrepMatrices {
    pub fn dim(&self) -> usize {
        self.h3.nrows()
    }

    /// Weight label of basis index `i`.
    pub fn weight(&self, i: usize) -> HalfInt {
        self.j - HalfInt::from_int(i as i64)
    }

    /// `diag(f(M))` in the irrep basis.
    fn diag_of<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            if r == c {
                f(self.weight(r).to_f64())
            } else {
                0.0
            }
        })
    }

    /// `H₊H₋ + [H₃]_q[H₃−1]_q`.
    pub fn casimir(&self, p: &QParam) -> DMatrix<f64> {
        &self.h_plus * &self.h_minus + self.diag_of(|m| q_number(m, p) * q_number(m - 1.0, p))
    }

    pub fn residuals(&self, p: &QParam) -> RelationResiduals {
        let (h3, hp, hm) = (&self.h3, &self.h_plus, &self.h_minus);
        let comm = |a: &DMatrix<f64>, b: &DMatrix<f64>| a * b - b * a;
        let id = DMatrix::<f64>::identity(self.dim(), self.dim());
        RelationResiduals {
            h3_plus: max_abs(&(comm(h3, hp) - hp)),
            h3_minus: max_abs(&(comm(h3, hm) + hm)),
            plus_minus: max_abs(&(comm(hp, hm) - self.diag_of(|m| q_number(2.0 * m, p)))),
            casimir: max_abs(&(self.casimir(p) - id * casimir_eigenvalue(self.j, p))),
            hermiticity: max_abs(&(hp.transpose() - hm)),
            scale: max_abs(&self.diag_of(|m| q_number(2.0 * m, p)))
                .max(casimir_eigenvalue(self.j, p).abs())
                .max(1.0),
        }
    }
}

/// Builds `H₃`, `H₊`, `H₋` for the spin-J irrep.
pub fn matrix_irrep(j: HalfInt, p: &QParam) -> Result<IrrepMatrices> {
    if j.twice() < 0 {
        return Err(Error::InvalidParam(format!("J = {j} must be non-negative")));
    }
    check_not_root_of_unity(p, screening_range(j))?;
    let dim = (j.twice() + 1) as usize;
    let weight = |i: usize| j - HalfInt::from_int(i as i64);
    let mut h3 = DMatrix::zeros(dim, dim);
    let mut h_plus = DMatrix::zeros(dim, dim);
    let mut h_minus = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let m = weight(i);
        h3[(i, i)] = m.to_f64();
        if i > 0 {
            // H₊|M⟩ lands on index i − 1
            h_plus[(i - 1, i)] = ladder_coefficient(j, m, true, p)?;
        }
        if i + 1 < dim {
            h_minus[(i + 1, i)] = ladder_coefficient(j, m, false, p)?;
        }
    }
    Ok(IrrepMatrices {
        j,
        h3,
        h_plus,
        h_minus,
    })
}
