//! Verification suites: each runs a family of identity checks and returns a
//! report of named residuals against tolerances.
//!
//! A case whose computation fails is reported with residual `f64::MAX` and
//! `pass = false`; only precondition failures (a suite that has no meaning
//! in the given regime, invalid labels) surface as errors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{HalfInt, QParam, Regime, Triple};
use crate::qinner::{
    adjoint_residual, gram, hermitian_form_residual, inner, j_range, InnerProductKind,
};
use crate::qops::{
    apply_casimir, apply_h_minus, apply_h_plus, casimir_eigenvalue, ladder_coefficient,
    matrix_irrep, PlaneFamily, RealizationParams,
};
use crate::qspecial::{
    functional_equation_residual, l_function, q_function, vilenkin, QFunctionMethod,
};
use crate::quadrature::{angular_node_count, QuadratureConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Matrix,
    Ladder,
    Casimir,
    Funceq,
    Hermiticity,
    Gram,
    Limit,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Suite::Matrix,
        Suite::Ladder,
        Suite::Casimir,
        Suite::Funceq,
        Suite::Hermiticity,
        Suite::Gram,
        Suite::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Matrix => "matrix",
            Suite::Ladder => "ladder",
            Suite::Casimir => "casimir",
            Suite::Funceq => "funceq",
            Suite::Hermiticity => "hermiticity",
            Suite::Gram => "gram",
            Suite::Limit => "limit",
            Suite::All => "all",
        }
    }

    /// Whether the suite has content at `p`; `all` skips the others.
    pub fn applies_to(self, p: &QParam) -> bool {
        match self {
            Suite::Ladder | Suite::Casimir | Suite::Funceq | Suite::Hermiticity => {
                p.regime() != Regime::Classical
            }
            _ => true,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QDescriptor {
    pub regime: String,
    pub value: f64,
}

impl QDescriptor {
    pub fn of(p: &QParam) -> Self {
        let regime = match p.regime() {
            Regime::PositiveReal => "positive-real",
            Regime::UnitCircle => "unit-circle",
            Regime::Classical => "classical",
        };
        QDescriptor {
            regime: regime.into(),
            value: p.raw_value(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CaseResult {
    fn new(name: impl Into<String>, residual: Result<f64>, tol: f64) -> Self {
        let residual = match residual {
            Ok(r) if r.is_finite() => r,
            _ => f64::MAX,
        };
        CaseResult {
            name: name.into(),
            residual,
            tol,
            pass: residual < tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub suite: String,
    pub q_descriptor: QDescriptor,
    pub cases: Vec<CaseResult>,
    pub pass: bool,
    /// Wall time; the only field that differs between identical runs.
    pub runtime_ms: u64,
}

/// Inputs shared by all suites. Unset fields take per-suite defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub p: QParam,
    /// Restrict to a single J.
    pub j: Option<HalfInt>,
    pub j_max: Option<HalfInt>,
    pub n: Option<HalfInt>,
    /// Overrides every case tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
}

impl VerifyOptions {
    pub fn new(p: QParam) -> Self {
        VerifyOptions {
            p,
            j: None,
            j_max: None,
            n: None,
            tol: None,
            seed: 0,
            radial_nodes: None,
            angular_nodes: None,
        }
    }

    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// J values: the single `j`, or `start, start+step, …, j_max`.
    fn j_values(&self, start: HalfInt, default_max: HalfInt, half_steps: bool) -> Vec<HalfInt> {
        if let Some(j) = self.j {
            return vec![j];
        }
        let max = self.j_max.unwrap_or(default_max);
        let step = if half_steps {
            HalfInt::HALF
        } else {
            HalfInt::ONE
        };
        let mut out = Vec::new();
        let mut j = start;
        while j <= max {
            out.push(j);
            j = j + step;
        }
        out
    }

    fn n_values(&self, default: &[&str]) -> Vec<HalfInt> {
        match self.n {
            Some(n) => vec![n],
            None => default
                .iter()
                .map(|s| s.parse().expect("literal label"))
                .collect(),
        }
    }

    fn quadrature(&self, j_max: HalfInt) -> QuadratureConfig {
        let base = QuadratureConfig::default();
        QuadratureConfig {
            radial_nodes: self.radial_nodes.unwrap_or(base.radial_nodes),
            angular_nodes: self
                .angular_nodes
                .unwrap_or_else(|| angular_node_count(j_max)),
            ..base
        }
    }
}

/// Runs `suite`; `all` runs every suite that applies to the regime.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<ReportDocument> {
    let start = Instant::now();
    let cases = match suite {
        Suite::All => {
            let mut all = Vec::new();
            for s in Suite::INDIVIDUAL
                .into_iter()
                .filter(|s| s.applies_to(&opts.p))
            {
                for mut c in suite_cases(s, opts)? {
                    c.name = format!("{}/{}", s.name(), c.name);
                    all.push(c);
                }
            }
            all
        }
        s => suite_cases(s, opts)?,
    };
    Ok(ReportDocument {
        schema: SCHEMA_VERSION,
        suite: suite.name().into(),
        q_descriptor: QDescriptor::of(&opts.p),
        pass: cases.iter().all(|c| c.pass),
        cases,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

fn suite_cases(suite: Suite, opts: &VerifyOptions) -> Result<Vec<CaseResult>> {
    if !suite.applies_to(&opts.p) {
        return Err(Error::RegimeMismatch(format!(
            "suite '{suite}' needs a deformed q, got {}",
            opts.p
        )));
    }
    match suite {
        Suite::Matrix => Ok(matrix_cases(opts)),
        Suite::Ladder => pointwise_cases(opts, false),
        Suite::Casimir => pointwise_cases(opts, true),
        Suite::Funceq => Ok(funceq_cases(opts)),
        Suite::Hermiticity => hermiticity_cases(opts),
        Suite::Gram => gram_cases(opts),
        Suite::Limit => Ok(limit_cases(opts)),
        Suite::All => unreachable!("expanded by run_suite"),
    }
}

fn matrix_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let tol = opts.tol(1e-12);
    let mut out = Vec::new();
    for j in opts.j_values(HalfInt::HALF, HalfInt::from_twice(9), true) {
        match matrix_irrep(j, &opts.p) {
            Ok(m) => {
                // relative to the largest entry compared
                let r = m.residuals(&opts.p);
                let rel = |x: f64| Ok(x / r.scale);
                out.push(CaseResult::new(
                    format!("J={j} [H3,H+]=H+"),
                    rel(r.h3_plus),
                    tol,
                ));
                out.push(CaseResult::new(
                    format!("J={j} [H3,H-]=-H-"),
                    rel(r.h3_minus),
                    tol,
                ));
                out.push(CaseResult::new(
                    format!("J={j} [H+,H-]=[2H3]"),
                    rel(r.plus_minus),
                    tol,
                ));
                out.push(CaseResult::new(
                    format!("J={j} casimir"),
                    rel(r.casimir),
                    tol,
                ));
            }
            Err(e) => out.push(CaseResult::new(format!("J={j} matrices"), Err(e), tol)),
        }
    }
    out
}

/// Seeded sample points `z = ρe^{iφ}`: `ρ` uniform in `[0.3, 3]`, `φ`
/// cycling through the eight phases `2πk/8`.
pub fn sample_points(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| Complex64::from_polar(rng.random_range(0.3..3.0), 2.0 * PI * (i % 8) as f64 / 8.0))
        .collect()
}

/// Largest `|lhs − rhs| / max(1, |lhs|, |rhs|)` over `points`.
fn pointwise_residual(
    lhs: &PlaneFamily,
    rhs: &PlaneFamily,
    p: &QParam,
    points: &[Complex64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in points {
        let (a, b) = (lhs.eval_physical(p, z)?, rhs.eval_physical(p, z)?);
        worst = worst.max((a - b).norm() / 1f64.max(a.norm()).max(b.norm()));
    }
    Ok(worst)
}

fn pointwise_cases(opts: &VerifyOptions, casimir: bool) -> Result<Vec<CaseResult>> {
    let tol = opts.tol(1e-8);
    let p = opts.p;
    let points = sample_points(opts.seed, 20);
    let zero = PlaneFamily::constant(Complex64::new(0.0, 0.0));
    let mut out = Vec::new();
    for n in opts.n_values(&["0", "0.5", "1"]) {
        let r = RealizationParams::new(n);
        for j in opts.j_values(n.abs(), HalfInt::from_int(3), false) {
            for m in j.weights() {
                let t = Triple::new(j, m, n)?;
                let f = PlaneFamily::psi(t);
                if casimir {
                    let target = f.scaled(Complex64::new(casimir_eigenvalue(j, &p), 0.0));
                    let residual = pointwise_residual(&apply_casimir(&f, r), &target, &p, &points);
                    out.push(CaseResult::new(format!("{t} C"), residual, tol));
                    continue;
                }
                for (raise, label) in [(true, "H+"), (false, "H-")] {
                    let residual = (|| {
                        let target = match t.shifted(if raise { 1 } else { -1 }) {
                            Some(s) => PlaneFamily::psi(s)
                                .scaled(Complex64::new(ladder_coefficient(j, m, raise, &p)?, 0.0)),
                            None => zero.clone(),
                        };
                        let image = if raise {
                            apply_h_plus(&f, r)
                        } else {
                            apply_h_minus(&f, r)
                        };
                        pointwise_residual(&image, &target, &p, &points)
                    })();
                    out.push(CaseResult::new(format!("{t} {label}"), residual, tol));
                }
            }
        }
    }
    Ok(out)
}

/// `n` points log-spaced over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `|L(qη) − L(q⁻¹η) − Log(1+η)|`.
pub fn l_equation_residual(p: &QParam, eta: Complex64) -> Result<f64> {
    let lhs =
        l_function(p, p.complex_value() * eta)? - l_function(p, p.complex_value().inv() * eta)?;
    Ok((lhs - (Complex64::new(1.0, 0.0) + eta).ln()).norm())
}

/// Constructions applicable at `(J, p)`. On the circle the integral form
/// needs every `L` argument off the branch cut, `(2J+1)|τ| < π`.
pub fn constructions(j: HalfInt, p: &QParam) -> Vec<QFunctionMethod> {
    let mut out = Vec::new();
    if j.is_integer() {
        out.push(QFunctionMethod::FiniteProduct);
    }
    match *p {
        QParam::PositiveReal { .. } => out.push(QFunctionMethod::InfiniteProduct),
        QParam::UnitCircle { tau } if (j.twice() + 1) as f64 * tau.abs() < PI => {
            out.push(QFunctionMethod::IntegralExp)
        }
        _ => {}
    }
    out
}

/// Largest relative disagreement of finite and infinite products.
pub fn product_agreement(j: HalfInt, p: &QParam, etas: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &eta in etas {
        let eta = Complex64::new(eta, 0.0);
        let a = q_function(j, p, eta, Some(QFunctionMethod::FiniteProduct))?;
        let b = q_function(j, p, eta, Some(QFunctionMethod::InfiniteProduct))?;
        worst = worst.max((a - b).norm() / a.norm());
    }
    Ok(worst)
}

/// Largest `|ρ(q²η)/ρ(η) − 1|` for `ρ = FiniteProduct / IntegralExp`.
pub fn ratio_periodicity(j: HalfInt, p: &QParam, etas: &[f64]) -> Result<f64> {
    let ratio = |eta: Complex64| -> Result<Complex64> {
        Ok(q_function(j, p, eta, Some(QFunctionMethod::FiniteProduct))?
            / q_function(j, p, eta, Some(QFunctionMethod::IntegralExp))?)
    };
    let mut worst = 0.0f64;
    for &eta in etas {
        let eta = Complex64::new(eta, 0.0);
        worst = worst.max((ratio(p.pow(2.0) * eta)? / ratio(eta)? - 1.0).norm());
    }
    Ok(worst)
}

fn funceq_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let p = opts.p;
    let etas = log_grid(1e-2, 1e2, 25);
    let mut out = Vec::new();
    for j in opts.j_values(HalfInt::ZERO, HalfInt::from_int(2), true) {
        for method in constructions(j, &p) {
            let tol = opts.tol(if method == QFunctionMethod::IntegralExp {
                1e-8
            } else {
                1e-12
            });
            let residual = etas.iter().try_fold(0.0f64, |acc, &eta| {
                Ok(acc.max(functional_equation_residual(
                    j,
                    &p,
                    Complex64::new(eta, 0.0),
                    Some(method),
                )?))
            });
            out.push(CaseResult::new(
                format!("J={j} {}", method.name()),
                residual,
                tol,
            ));
        }
        let methods = constructions(j, &p);
        if methods.len() == 2 && j != HalfInt::ZERO {
            if p.regime() == Regime::PositiveReal {
                let r = product_agreement(j, &p, &etas);
                out.push(CaseResult::new(
                    format!("J={j} finite=infinite"),
                    r,
                    opts.tol(1e-12),
                ));
            } else {
                let r = ratio_periodicity(j, &p, &etas);
                out.push(CaseResult::new(
                    format!("J={j} ratio q^2-periodic"),
                    r,
                    opts.tol(1e-8),
                ));
            }
        }
    }
    if p.regime() == Regime::UnitCircle {
        for eta in [0.3, 1.0, 4.0] {
            let r = l_equation_residual(&p, Complex64::new(eta, 0.0));
            out.push(CaseResult::new(
                format!("L equation eta={eta}"),
                r,
                opts.tol(1e-9),
            ));
        }
    }
    out
}

/// Seeded random combination of the Ψ with the given `N` and `J ≤ j_max`.
pub fn random_span(n: HalfInt, j_max: HalfInt, rng: &mut ChaCha8Rng) -> Result<PlaneFamily> {
    let mut terms = Vec::new();
    for j in j_range(n, j_max) {
        for m in j.weights() {
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            terms.push((Triple::new(j, m, n)?, c));
        }
    }
    Ok(PlaneFamily::psi_span(terms))
}

fn hermiticity_cases(opts: &VerifyOptions) -> Result<Vec<CaseResult>> {
    let p = opts.p;
    let kind = InnerProductKind::for_param(&p);
    let j_max = opts.j_max.unwrap_or(HalfInt::from_int(2));
    // H± shift the Fourier mode by one
    let cfg = opts.quadrature(j_max + HalfInt::ONE);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();
    for n in opts.n_values(&["0", "0.5"]) {
        let r = RealizationParams::new(n);
        if j_range(n, j_max).is_empty() {
            continue;
        }
        for k in 0..3 {
            let f = random_span(n, j_max, &mut rng)?;
            let g = random_span(n, j_max, &mut rng)?;
            let adj = adjoint_residual(&f, &g, &p, kind, r, &cfg);
            let (ladder, dilation) = match adj {
                Ok(a) => (Ok(a.ladder), Ok(a.dilation)),
                Err(e) => (Err(e.clone()), Err(e)),
            };
            out.push(CaseResult::new(
                format!("N={n} pair {k} H+ vs H-"),
                ladder,
                opts.tol(1e-7),
            ));
            out.push(CaseResult::new(
                format!("N={n} pair {k} q^2H3"),
                dilation,
                opts.tol(1e-7),
            ));
            let form = hermitian_form_residual(&f, &g, &p, kind, &cfg);
            out.push(CaseResult::new(
                format!("N={n} pair {k} hermitian form"),
                form,
                opts.tol(1e-8),
            ));
        }
    }
    Ok(out)
}

fn gram_cases(opts: &VerifyOptions) -> Result<Vec<CaseResult>> {
    let p = opts.p;
    let kind = InnerProductKind::for_param(&p);
    let n = opts.n.unwrap_or(HalfInt::ZERO);
    let j_list = match opts.j {
        Some(j) => vec![j],
        None => j_range(n, opts.j_max.unwrap_or(HalfInt::from_int(2))),
    };
    let tol = opts.tol(1e-6);
    let cfg = opts.quadrature(j_list.iter().copied().max().unwrap_or(HalfInt::ZERO));
    let mut out = Vec::new();
    match gram(n, &j_list, &p, kind, &cfg) {
        Ok(rep) => {
            out.push(CaseResult::new(
                "max off-diagonal",
                Ok(rep.max_offdiag),
                tol,
            ));
            out.push(CaseResult::new(
                "max diagonal deviation",
                Ok(rep.max_diag_dev),
                tol,
            ));
            out.push(CaseResult::new("hermitian", Ok(rep.hermiticity), tol));
        }
        Err(e) => out.push(CaseResult::new("gram", Err(e), tol)),
    }
    // fixed rules; deviations already at roundoff count as converged
    let fixed = |nodes| {
        let cfg = QuadratureConfig {
            radial_nodes: nodes,
            max_refinements: 0,
            ..cfg
        };
        gram(n, &j_list, &p, kind, &cfg).map(|r| r.deviation())
    };
    let shrink = fixed(8).and_then(|coarse| Ok(fixed(16)? / coarse.max(1e-13)));
    out.push(CaseResult::new(
        "refinement 8->16 shrink ratio",
        shrink,
        0.1,
    ));
    Ok(out)
}

/// Associated Legendre `P_l^m(x)` with the Condon–Shortley phase, for
/// `m ≥ 0`, by upward recurrence in `l`.
pub fn associated_legendre(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let mut pmm = 1.0;
    let s = (1.0 - x * x).sqrt();
    for k in 0..m {
        pmm *= -((2 * k + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    let mut pm2 = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm2) / (ll - m) as f64;
        pm2 = pm1;
        pm1 = next;
    }
    pm1
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `P^J_{M0}` at `q = 1` from Legendre functions:
/// `i^{−M} √((J−M)!/(J+M)!) P_J^M(ξ)`, with `P_J^{−m} = (−1)^m (J−m)!/(J+m)! P_J^m`.
pub fn classical_vilenkin_reference(j: u32, m: i64, xi: f64) -> Complex64 {
    let am = m.unsigned_abs() as u32;
    let mut legendre = associated_legendre(j, am, xi);
    if m < 0 {
        legendre *= (-1f64).powi(am as i32) * factorial(j - am) / factorial(j + am);
    }
    let jm = (j as i64 - m) as u32;
    let jp = (j as i64 + m) as u32;
    Complex64::new(0.0, 1.0).powi(-(m as i32)) * (factorial(jm) / factorial(jp)).sqrt() * legendre
}

const LIMIT_STEPS: [f64; 2] = [1e-3, 1e-4];
const LIMIT_EXACT_FLOOR: f64 = 1e-12;

/// Deformed products of the pinned classical pair `(a, b)` at
/// `q = 1 + h` for each `h` in `LIMIT_STEPS`, minus the classical product.
pub fn limit_deviations(a: Triple, b: Triple, cfg: &QuadratureConfig) -> Result<[f64; 2]> {
    let f = PlaneFamily::psi(a).pinned(QParam::Classical);
    let g = PlaneFamily::psi(b).pinned(QParam::Classical);
    let reference = inner(InnerProductKind::Classical, &f, &g, &QParam::Classical, cfg)?;
    let mut out = [0.0; 2];
    for (slot, h) in out.iter_mut().zip(LIMIT_STEPS) {
        let p = QParam::positive_real(1.0 + h)?;
        *slot = (inner(InnerProductKind::DeformedReal, &f, &g, &p, cfg)? - reference).norm();
    }
    Ok(out)
}

/// `P^J_{M0}` at `q = 1 + h` linearly extrapolated to `h = 0` from the
/// two `LIMIT_STEPS`.
pub fn extrapolated_vilenkin(t: Triple, xi: f64) -> Result<Complex64> {
    let [h1, h2] = LIMIT_STEPS;
    let v1 = vilenkin(t, &QParam::positive_real(1.0 + h1)?, xi)?;
    let v2 = vilenkin(t, &QParam::positive_real(1.0 + h2)?, xi)?;
    Ok((v2 * h1 - v1 * h2) / (h1 - h2))
}

fn limit_cases(opts: &VerifyOptions) -> Vec<CaseResult> {
    let cfg = QuadratureConfig {
        abs_tol: 1e-12,
        ..opts.quadrature(HalfInt::ONE)
    };
    let mut out = Vec::new();
    let t = |j: i64, m: i64| Triple::new(HalfInt::from_int(j), HalfInt::from_int(m), HalfInt::ZERO);
    let pairs = [
        (0, 0, 0, 0),
        (1, 1, 1, 1),
        (1, 0, 1, 0),
        (1, 0, 0, 0),
        (2, 0, 0, 0),
        (2, 2, 2, 2),
        (2, 1, 1, 1),
    ];
    for (ja, ma, jb, mb) in pairs {
        let name = format!("pair ({ja},{ma})-({jb},{mb})");
        match t(ja, ma).and_then(|a| limit_deviations(a, t(jb, mb)?, &cfg)) {
            // q-independent up to quadrature error: nothing to rate
            Ok(d) if d[0] < LIMIT_EXACT_FLOOR => out.push(CaseResult::new(
                format!("{name} exact"),
                Ok(d[0].max(d[1])),
                LIMIT_EXACT_FLOOR,
            )),
            // linear or faster: a tenfold smaller step must cut the deviation by ≥ 9
            Ok(d) => out.push(CaseResult::new(
                format!("{name} rate"),
                Ok(d[1] / d[0]),
                1.0 / 9.0,
            )),
            Err(e) => out.push(CaseResult::new(format!("{name} rate"), Err(e), 1.0 / 9.0)),
        }
    }
    let tol = opts.tol(1e-6);
    for j in 0..=2i64 {
        for m in -j..=j {
            for xi in [-0.6, 0.0, 0.35, 0.8] {
                let residual = t(j, m).and_then(|tr| {
                    let v = extrapolated_vilenkin(tr, xi)?;
                    Ok((v - classical_vilenkin_reference(j as u32, m, xi)).norm())
                });
                out.push(CaseResult::new(
                    format!("vilenkin J={j} M={m} xi={xi}"),
                    residual,
                    tol,
                ));
            }
        }
    }
    out
}
