//! Constructions of `Q_{Jq}(η)`, the solution of
//! `Q(q²η)(1+η) = Q(η)(1+q^{−2J}η)` entering the basis functions.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{HalfInt, QParam, Regime};
use crate::quadrature::tanh_sinh_unit;

/// Absolute accuracy targeted by [`l_function`].
pub const L_ABS_TOL: f64 = 1e-12;

const PRODUCT_FACTOR_TOL: f64 = 1e-16 * 0.01;
const PRODUCT_TAIL_TOL: f64 = 1e-14;
const PRODUCT_MAX_FACTORS: usize = 100_000;
const BRANCH_MARGIN: f64 = 1e-6;
const L_CACHE_CAPACITY: usize = 1 << 16;

thread_local! {
    // keyed on the exact bits of (τ, Re η, Im η); cleared when full
    static L_CACHE: RefCell<HashMap<(u64, u64, u64), Complex64>> = RefCell::new(HashMap::new());
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QFunctionMethod {
    /// Inverse polynomial, integer J only.
    FiniteProduct,
    /// q-binomial infinite products, positive real q only.
    InfiniteProduct,
    /// `exp{L(q^{−2J−1}η) − L(q^{−1}η)}`, unit-circle q only.
    IntegralExp,
}

impl QFunctionMethod {
    pub fn name(self) -> &'static str {
        match self {
            QFunctionMethod::FiniteProduct => "FiniteProduct",
            QFunctionMethod::InfiniteProduct => "InfiniteProduct",
            QFunctionMethod::IntegralExp => "IntegralExp",
        }
    }

    fn check(self, j: HalfInt, p: &QParam) -> Result<()> {
        let reason = match self {
            QFunctionMethod::FiniteProduct if !j.is_integer() => {
                Some(format!("half-integer J = {j}"))
            }
            QFunctionMethod::InfiniteProduct if p.regime() != Regime::PositiveReal => {
                Some(format!("{p} (needs a positive real q != 1)"))
            }
            QFunctionMethod::IntegralExp if p.regime() != Regime::UnitCircle => {
                Some(format!("{p} (needs q on the unit circle)"))
            }
            _ => None,
        };
        match reason {
            Some(reason) => Err(Error::IncompatibleMethod {
                method: self.name(),
                reason,
            }),
            None => Ok(()),
        }
    }
}

/// Default construction for `(J, p)`; `None` means the classical closed form.
pub fn default_method(j: HalfInt, p: &QParam) -> Option<QFunctionMethod> {
    match p.regime() {
        Regime::Classical => None,
        _ if j.is_integer() => Some(QFunctionMethod::FiniteProduct),
        Regime::PositiveReal => Some(QFunctionMethod::InfiniteProduct),
        Regime::UnitCircle => Some(QFunctionMethod::IntegralExp),
    }
}

/// `Q_{Jq}(η)` by the requested (or default) construction.
pub fn q_function(
    j: HalfInt,
    p: &QParam,
    eta: Complex64,
    method: Option<QFunctionMethod>,
) -> Result<Complex64> {
    if j.twice() < 0 {
        return Err(Error::InvalidParam(format!("J = {j} must be non-negative")));
    }
    let method = match method {
        Some(m) => {
            m.check(j, p)?;
            Some(m)
        }
        None => default_method(j, p),
    };
    match method {
        None => Ok(classical_q(j, eta)),
        Some(QFunctionMethod::FiniteProduct) => q_finite_product(j, p, eta),
        Some(QFunctionMethod::InfiniteProduct) => q_infinite_product(j, p, eta),
        Some(QFunctionMethod::IntegralExp) => q_integral_exp(j, p, eta),
    }
}

/// `(1+η)^{−J}` with the principal branch.
pub fn classical_q(j: HalfInt, eta: Complex64) -> Complex64 {
    if let Some(n) = j.to_int() {
        (Complex64::new(1.0, 0.0) + eta).powi(-(n as i32))
    } else {
        (-j.to_f64() * (Complex64::new(1.0, 0.0) + eta).ln()).exp()
    }
}

/// `∏_{k=0}^{J−1} (1 + η q^{−2J+2k})^{−1}`.
pub fn q_finite_product(j: HalfInt, p: &QParam, eta: Complex64) -> Result<Complex64> {
    let jn = j
        .to_int()
        .filter(|&n| n >= 0)
        .ok_or_else(|| Error::IncompatibleMethod {
            method: "FiniteProduct",
            reason: format!("J = {j} is not a non-negative integer"),
        })?;
    let mut acc = Complex64::new(1.0, 0.0);
    for k in 0..jn {
        let t = eta * p.pow((-2 * jn + 2 * k) as f64);
        let factor = Complex64::new(1.0, 0.0) + t;
        if factor.norm() <= 1e-14 * (1.0 + t.norm()) {
            return Err(Error::Pole { k });
        }
        acc /= factor;
    }
    Ok(acc)
}

/// q-binomial products, with the branch chosen by `q < 1` or `q > 1`.
pub fn q_infinite_product(j: HalfInt, p: &QParam, eta: Complex64) -> Result<Complex64> {
    let q = match *p {
        QParam::PositiveReal { q } => q,
        _ => {
            return Err(Error::IncompatibleMethod {
                method: "InfiniteProduct",
                reason: format!("{p} (the products diverge off the positive real axis)"),
            })
        }
    };
    let jf = j.to_f64();
    let one = Complex64::new(1.0, 0.0);
    // ratio of successive corrections |factor − 1|
    let ratio = if q < 1.0 { q * q } else { 1.0 / (q * q) };
    let mut acc = one;
    for k in 0..PRODUCT_MAX_FACTORS {
        let kf = k as f64;
        let (num, den) = if q < 1.0 {
            (
                one + eta * q.powf(2.0 * kf),
                one + eta * q.powf(-2.0 * jf + 2.0 * kf),
            )
        } else {
            (
                one + eta * q.powf(-2.0 * jf - 2.0 * kf - 2.0),
                one + eta * q.powf(-2.0 * kf - 2.0),
            )
        };
        if den.norm() == 0.0 {
            return Err(Error::Pole { k: k as i64 });
        }
        let factor = num / den;
        acc *= factor;
        let dev = (factor - one).norm();
        if dev < PRODUCT_FACTOR_TOL && dev * ratio / (1.0 - ratio) < PRODUCT_TAIL_TOL {
            return Ok(acc);
        }
    }
    Err(Error::ProductNonConvergence {
        factors: PRODUCT_MAX_FACTORS,
    })
}

/// `Log(1+z)`, accurate for small `|z|`.
fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        z - z2 / 2.0 + z2 * z / 3.0 - z2 * z2 / 4.0 + z2 * z2 * z / 5.0
    } else {
        (Complex64::new(1.0, 0.0) + z).ln()
    }
}

/// `L_q(η)` for `q = e^{iτ}`:
/// `±(1/2πi) ∫₀^∞ dt/(t(1+t)) Log(1 + η t^{±τ/π})`.
///
/// Evaluated through `x = t^{|τ|/π}`, which removes the `t^{|τ|/π − 1}`
/// singularity at the origin, then split at `x = 1` with `x → 1/x` on the
/// tail. Complex `η` is accepted off the negative real axis, where the
/// integral is analytic in `η`. Values are memoized per thread.
pub fn l_function(p: &QParam, eta: Complex64) -> Result<Complex64> {
    let tau = match *p {
        QParam::UnitCircle { tau } => tau,
        _ => {
            return Err(Error::RegimeMismatch(format!(
                "L_q needs q on the unit circle, got {p}"
            )))
        }
    };
    let key = (tau.to_bits(), eta.re.to_bits(), eta.im.to_bits());
    if let Some(v) = L_CACHE.with(|c| c.borrow().get(&key).copied()) {
        return Ok(v);
    }
    let value = l_function_uncached(tau, eta)?;
    L_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= L_CACHE_CAPACITY {
            c.clear();
        }
        c.insert(key, value);
    });
    Ok(value)
}

fn l_function_uncached(tau: f64, eta: Complex64) -> Result<Complex64> {
    if eta == Complex64::new(0.0, 0.0) {
        return Ok(eta);
    }
    let arg = eta.arg();
    if arg.abs() > PI - BRANCH_MARGIN {
        return Err(Error::BranchCut { arg });
    }
    let alpha = tau.abs() / PI;
    let power = 1.0 / alpha;
    let scale = power / (2.0 * PI);
    let tol = 0.5 * L_ABS_TOL / scale;

    let head = tanh_sinh_unit(|x| ln_1p(eta * x) / (x * (1.0 + x.powf(power))), tol)?;
    let tail = tanh_sinh_unit(
        |y| {
            let yp = y.powf(power);
            ln_1p(eta / y) * (yp / (y * (1.0 + yp)))
        },
        tol,
    )?;
    let integral = (head + tail) * scale / Complex64::new(0.0, 1.0);
    Ok(if tau > 0.0 { integral } else { -integral })
}

/// `exp{L_q(q^{−2J−1}η) − L_q(q^{−1}η)}`.
pub fn q_integral_exp(j: HalfInt, p: &QParam, eta: Complex64) -> Result<Complex64> {
    if p.regime() != Regime::UnitCircle {
        return Err(Error::IncompatibleMethod {
            method: "IntegralExp",
            reason: format!("{p} (needs q on the unit circle)"),
        });
    }
    if j == HalfInt::ZERO {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let upper = l_function(p, p.pow(-(j.twice() as f64) - 1.0) * eta)?;
    let lower = l_function(p, p.pow(-1.0) * eta)?;
    Ok((upper - lower).exp())
}

/// `|Q(q²η)(1+η) − Q(η)(1+q^{−2J}η)| / |Q(η)|`.
pub fn functional_equation_residual(
    j: HalfInt,
    p: &QParam,
    eta: Complex64,
    method: Option<QFunctionMethod>,
) -> Result<f64> {
    let one = Complex64::new(1.0, 0.0);
    let at = q_function(j, p, eta, method)?;
    let shifted = q_function(j, p, p.pow(2.0) * eta, method)?;
    let lhs = shifted * (one + eta);
    let rhs = at * (one + p.pow(-(j.twice() as f64)) * eta);
    Ok((lhs - rhs).norm() / at.norm())
}
