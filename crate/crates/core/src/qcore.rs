//! Half-integer labels and q-deformed arithmetic.
//!
//! The deformation parameter lives in one of three regimes: a positive real
//! `q != 1`, a unit-circle `q = e^{iτ}` with `τ ∈ (−π, 0) ∪ (0, π)`, or the
//! classical point `q = 1` where every q-quantity is replaced by its limit.
//!
//! q-numbers are real in every regime. On the circle they are computed as
//! `sin(xτ)/sin(τ)`, so no spurious imaginary part ever appears.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Threshold below which `|[n]_q|` is treated as vanishing.
pub const EPS_DEGENERACY: f64 = 1e-12;

/// An exact half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value, if there is one.
    pub const fn to_int(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    /// `J, J−1, …, −J`, i.e. the weight labels of the spin-J irrep in
    /// descending order.
    pub fn weights(self) -> impl Iterator<Item = HalfInt> {
        let top = self.twice;
        (0..=(2 * top).max(-1))
            .step_by(2)
            .map(move |k| HalfInt { twice: top - k })
    }

    /// `from, from+1, …` up to and including `to` (when reachable).
    pub fn ladder(from: HalfInt, to: HalfInt) -> impl Iterator<Item = HalfInt> {
        (from.twice..=to.twice).step_by(2).map(HalfInt::from_twice)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.twice.cmp(&other.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Parses decimals whose fractional part is exactly `.5` or zero
/// (`"2"`, `"-0.5"`, `"1.50"`) and the fraction form `"3/2"`.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidHalfInt(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt::from_twice(num)),
                _ => Err(bad()),
            };
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac = frac_part.trim_end_matches('0');
        let half = match frac {
            "" => 0,
            "5" => 1,
            _ => return Err(bad()),
        };
        let twice = 2 * whole + half;
        Ok(HalfInt::from_twice(if neg { -twice } else { twice }))
    }
}

/// A validated irrep label triple `(J, M, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub j: HalfInt,
    pub m: HalfInt,
    pub n: HalfInt,
}

impl Triple {
    pub fn new(j: HalfInt, m: HalfInt, n: HalfInt) -> Result<Self> {
        let err = |reason| Error::InvalidTriple { j, m, n, reason };
        if j.twice() < 0 {
            return Err(err("J must be non-negative"));
        }
        if (j.twice() - m.twice()) % 2 != 0 || (j.twice() - n.twice()) % 2 != 0 {
            return Err(err(
                "J, M, N must be simultaneously integers or half-integers",
            ));
        }
        if m.abs() > j {
            return Err(err("|M| > J"));
        }
        if n.abs() > j {
            return Err(err("|N| > J"));
        }
        Ok(Triple { j, m, n })
    }

    /// Same J and N, weight shifted by `delta`; `None` when it leaves the irrep.
    pub fn shifted(self, delta: i64) -> Option<Triple> {
        Triple::new(self.j, self.m + HalfInt::from_int(delta), self.n).ok()
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(J={}, M={}, N={})", self.j, self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    PositiveReal,
    UnitCircle,
    Classical,
}

/// The deformation parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QParam {
    PositiveReal { q: f64 },
    UnitCircle { tau: f64 },
    Classical,
}

impl QParam {
    pub fn positive_real(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "q = {q} is not a positive real"
            )));
        }
        if q == 1.0 {
            return Err(Error::InvalidParam(
                "q = 1 is the classical regime; use QParam::Classical".into(),
            ));
        }
        Ok(QParam::PositiveReal { q })
    }

    /// `q = e^{iτ}` with `0 < |τ| < π`.
    pub fn unit_circle(tau: f64) -> Result<Self> {
        if !tau.is_finite() || tau == 0.0 || tau.abs() >= PI {
            return Err(Error::InvalidParam(format!(
                "tau = {tau} must lie in (-pi, 0) or (0, pi)"
            )));
        }
        Ok(QParam::UnitCircle { tau })
    }

    /// A positive real, mapping `q = 1` onto the classical regime.
    pub fn from_real(q: f64) -> Result<Self> {
        if q == 1.0 {
            Ok(QParam::Classical)
        } else {
            QParam::positive_real(q)
        }
    }

    pub fn regime(&self) -> Regime {
        match self {
            QParam::PositiveReal { .. } => Regime::PositiveReal,
            QParam::UnitCircle { .. } => Regime::UnitCircle,
            QParam::Classical => Regime::Classical,
        }
    }

    /// The defining scalar: `q` itself, or `τ` on the circle, or 1.
    pub fn raw_value(&self) -> f64 {
        match *self {
            QParam::PositiveReal { q } => q,
            QParam::UnitCircle { tau } => tau,
            QParam::Classical => 1.0,
        }
    }

    pub fn complex_value(&self) -> Complex64 {
        match *self {
            QParam::PositiveReal { q } => Complex64::new(q, 0.0),
            QParam::UnitCircle { tau } => Complex64::new(tau.cos(), tau.sin()),
            QParam::Classical => Complex64::new(1.0, 0.0),
        }
    }

    /// `q → q⁻¹` (on the circle, `τ → −τ`).
    pub fn inverse(&self) -> Self {
        match *self {
            QParam::PositiveReal { q } => QParam::PositiveReal { q: 1.0 / q },
            QParam::UnitCircle { tau } => QParam::UnitCircle { tau: -tau },
            QParam::Classical => QParam::Classical,
        }
    }

    /// `q^x` for real `x`.
    pub fn pow(&self, x: f64) -> Complex64 {
        match *self {
            QParam::PositiveReal { q } => Complex64::new(q.powf(x), 0.0),
            QParam::UnitCircle { tau } => Complex64::from_polar(1.0, x * tau),
            QParam::Classical => Complex64::new(1.0, 0.0),
        }
    }

    /// Principal logarithm: `ln q`, or `iτ` on the circle.
    pub fn ln(&self) -> Complex64 {
        match *self {
            QParam::PositiveReal { q } => Complex64::new(q.ln(), 0.0),
            QParam::UnitCircle { tau } => Complex64::new(0.0, tau),
            QParam::Classical => Complex64::new(0.0, 0.0),
        }
    }

    /// `q − q⁻¹`; zero in the classical regime.
    pub fn q_minus_inv(&self) -> Complex64 {
        match *self {
            QParam::PositiveReal { q } => Complex64::new(q - 1.0 / q, 0.0),
            QParam::UnitCircle { tau } => Complex64::new(0.0, 2.0 * tau.sin()),
            QParam::Classical => Complex64::new(0.0, 0.0),
        }
    }
}

impl fmt::Display for QParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QParam::PositiveReal { q } => write!(f, "q={q}"),
            QParam::UnitCircle { tau } => write!(f, "tau={tau}"),
            QParam::Classical => write!(f, "q=1"),
        }
    }
}

/// `[x]_q = (q^x − q^{−x})/(q − q^{−1})`.
pub fn q_number(x: f64, p: &QParam) -> f64 {
    match *p {
        QParam::PositiveReal { q } => {
            // sinh form keeps the q -> 1 neighbourhood well conditioned
            let l = q.ln();
            if x == 0.0 {
                0.0
            } else {
                (x * l).sinh() / l.sinh()
            }
        }
        QParam::UnitCircle { tau } => (x * tau).sin() / tau.sin(),
        QParam::Classical => x,
    }
}

/// `[n]_q! = [n]_q [n−1]_q … [1]_q`, `[0]_q! = 1`.
pub fn q_factorial(n: i64, p: &QParam) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeFactorial(n));
    }
    Ok((1..=n).map(|k| q_number(k as f64, p)).product())
}

/// `1/[n]_q!`, extended by zero to negative integers.
pub fn inv_q_factorial(n: i64, p: &QParam) -> f64 {
    if n < 0 {
        0.0
    } else {
        (1..=n).map(|k| 1.0 / q_number(k as f64, p)).product()
    }
}

/// Checks `|[n]_q| > ε` for `1 ≤ n ≤ n_max`; fails with the smallest
/// degenerate `n`.
pub fn check_not_root_of_unity(p: &QParam, n_max: i64) -> Result<()> {
    check_not_root_of_unity_with(p, n_max, EPS_DEGENERACY)
}

pub fn check_not_root_of_unity_with(p: &QParam, n_max: i64, eps: f64) -> Result<()> {
    if n_max < 1 {
        return Err(Error::InvalidParam(format!("n_max = {n_max} must be >= 1")));
    }
    if p.regime() != Regime::UnitCircle {
        return Ok(());
    }
    match (1..=n_max).find(|&n| q_number(n as f64, p).abs() <= eps) {
        Some(n) => Err(Error::RootOfUnity { n, eps }),
        None => Ok(()),
    }
}

/// Largest factorial argument used by the spin-J irrep, plus one.
pub fn screening_range(j: HalfInt) -> i64 {
    j.twice() + 2
}
