//! R-polynomials, normalization constants, the basis functions Ψ and the
//! q-Vilenkin functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::qfunction::q_function;
use crate::error::{Error, Result};
use crate::qcore::{inv_q_factorial, q_factorial, HalfInt, QParam, Triple};

fn int(h: HalfInt) -> i64 {
    h.to_int().expect("integer-valued label combination")
}

/// Coefficients `c_k` of `R = Σ_k c_k (−η)^k`, paired with `k`, over the
/// range where no inverse factorial vanishes.
fn r_coefficients(t: Triple, p: &QParam) -> Vec<(i64, f64)> {
    let jm = int(t.j - t.m);
    let jn = int(t.j - t.n);
    let mn = int(t.m + t.n);
    let lead = q_factorial(jn, p).unwrap_or(0.0) * q_factorial(jm, p).unwrap_or(0.0);
    (0.max(-mn)..=jm.min(jn))
        .map(|k| {
            let c = lead
                * inv_q_factorial(k, p)
                * inv_q_factorial(jm - k, p)
                * inv_q_factorial(jn - k, p)
                * inv_q_factorial(mn + k, p);
            (k, c)
        })
        .collect()
}

/// `R^J_{MNq}(η)`.
pub fn r_polynomial(t: Triple, p: &QParam, eta: Complex64) -> Complex64 {
    r_coefficients(t, p)
        .into_iter()
        .map(|(k, c)| (-eta).powi(k as i32) * c)
        .sum()
}

/// `R^J_{MNq}(uv)·v^{M+N}` expanded as a polynomial in `u`, `v`; regular
/// at the origin even when `M + N < 0`.
pub fn r_times_v_power(t: Triple, p: &QParam, u: Complex64, v: Complex64) -> Complex64 {
    let mn = int(t.m + t.n);
    r_coefficients(t, p)
        .into_iter()
        .map(|(k, c)| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            u.powi(k as i32) * v.powi((k + mn) as i32) * (sign * c)
        })
        .sum()
}

fn checked_sqrt(value: f64, context: &'static str) -> Result<f64> {
    if value < 0.0 {
        Err(Error::NegativeRadicand { value, context })
    } else {
        Ok(value.sqrt())
    }
}

/// `N^J_{MNq}` with `γ(J, N, q) = 1`.
pub fn norm_constant(t: Triple, p: &QParam) -> Result<f64> {
    let f = |h: HalfInt| q_factorial(int(h), p);
    let two_j = HalfInt::from_int(t.j.twice());
    let first = f(t.j + t.n)? * f(two_j + HalfInt::ONE)? / f(t.j - t.n)?;
    let second = f(t.j + t.m)? / (f(t.j - t.m)? * f(two_j)?);
    Ok(checked_sqrt(first, "normalization constant (N part)")?
        * checked_sqrt(second, "normalization constant (M part)")?
        / (2.0 * PI).sqrt())
}

/// `Ψ^J_{MNq}(u, v) = N Q(uv) q^{−NM/2} R(uv) v^{M+N}`; the physical
/// slice is `v = conj(u)`.
pub fn psi(t: Triple, p: &QParam, u: Complex64, v: Complex64) -> Result<Complex64> {
    let nc = norm_constant(t, p)?;
    let q = q_function(t.j, p, u * v, None)?;
    let phase = p.pow(-(t.n.to_f64() * t.m.to_f64()) / 2.0);
    Ok(q * phase * r_times_v_power(t, p, u, v) * nc)
}

/// Linear combination `Σ c_i Ψ_i` sharing one `Q(uv)` evaluation per J.
pub fn psi_combination(
    terms: &[(Triple, Complex64)],
    p: &QParam,
    u: Complex64,
    v: Complex64,
) -> Result<Complex64> {
    let eta = u * v;
    let mut q_cache: Vec<(HalfInt, Complex64)> = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    for &(t, coeff) in terms {
        if coeff == Complex64::new(0.0, 0.0) {
            continue;
        }
        let q = match q_cache.iter().find(|(j, _)| *j == t.j) {
            Some(&(_, q)) => q,
            None => {
                let q = q_function(t.j, p, eta, None)?;
                q_cache.push((t.j, q));
                q
            }
        };
        let phase = p.pow(-(t.n.to_f64() * t.m.to_f64()) / 2.0);
        acc += coeff * q * phase * r_times_v_power(t, p, u, v) * norm_constant(t, p)?;
    }
    Ok(acc)
}

/// `P^J_{MNq}(ξ)` at `η = (1+ξ)/(1−ξ)`.
pub fn vilenkin(t: Triple, p: &QParam, xi: f64) -> Result<Complex64> {
    if !(xi > -1.0 && xi < 1.0) {
        return Err(Error::InvalidParam(format!(
            "xi = {xi} must lie in (-1, 1)"
        )));
    }
    let eta = (1.0 + xi) / (1.0 - xi);
    let f = |h: HalfInt| q_factorial(int(h), p);
    let radicand = f(t.j + t.m)? * f(t.j + t.n)? / (f(t.j - t.m)? * f(t.j - t.n)?);
    let root = checked_sqrt(radicand, "q-Vilenkin prefactor")?;
    let phase =
        Complex64::new(0.0, 1.0).powi(int(HalfInt::from_int(t.j.twice()) - t.m - t.n) as i32);
    let eta_c = Complex64::new(eta, 0.0);
    let power = eta.powf((t.m + t.n).to_f64() / 2.0);
    Ok(phase * root * power * q_function(t.j, p, eta_c, None)? * r_polynomial(t, p, eta_c))
}
