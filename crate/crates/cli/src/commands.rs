use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use suq2::qcore::{q_factorial, q_number};
use suq2::qinner::{gram, j_range, InnerProductKind};
use suq2::qspecial::{l_function, psi, q_function, r_polynomial, vilenkin};
use suq2::quadrature::{angular_node_count, QuadratureConfig};
use suq2::verify::{run_suite, QDescriptor, ReportDocument, VerifyOptions};
use suq2::{Error, HalfInt, QParam, Triple};

use crate::args::{EvalArgs, Format, Function, GramArgs, VerifyArgs};

/// Why a command stopped without a successful result.
#[derive(Debug)]
pub enum Failure {
    /// Bad or incomplete arguments; exit 2.
    Usage(String),
    /// A computation or verification did not succeed; exit 1.
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::QuadratureNonConvergence { .. } | Error::ProductNonConvergence { .. } => {
                Failure::Failed(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Rendered output plus whether the command judged it a success.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn require<T: Copy>(value: Option<T>, flag: &str, function: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --fn {function}")))
}

fn fn_name(f: Function) -> &'static str {
    match f {
        Function::Qnum => "qnum",
        Function::Qfact => "qfact",
        Function::R => "R",
        Function::Q => "Q",
        Function::L => "L",
        Function::Vilenkin => "vilenkin",
        Function::Psi => "psi",
    }
}

#[derive(Serialize)]
struct Row {
    point: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct EvalDocument {
    #[serde(rename = "fn")]
    function: String,
    params: BTreeMap<String, String>,
    rows: Vec<Row>,
}

/// Evaluates one point; `point` replaces the function's own argument.
fn eval_point(args: &EvalArgs, p: &QParam, point: f64) -> Result<Complex64, Failure> {
    let name = fn_name(args.function);
    let triple = || -> Result<Triple, Failure> {
        Ok(Triple::new(
            require(args.j, "J", name)?,
            require(args.m, "M", name)?,
            require(args.n, "N", name)?,
        )?)
    };
    let re = |x: f64| Complex64::new(x, 0.0);
    Ok(match args.function {
        Function::Qnum => re(q_number(point, p)),
        Function::Qfact => {
            if point.fract() != 0.0 || point.abs() > 1e6 {
                return Err(Failure::Usage(format!(
                    "qfact needs an integer argument, got {point}"
                )));
            }
            re(q_factorial(point as i64, p)?)
        }
        Function::R => r_polynomial(triple()?, p, re(point)),
        Function::Q => q_function(require(args.j, "J", name)?, p, re(point), None)?,
        Function::L => l_function(p, re(point))?,
        Function::Vilenkin => vilenkin(triple()?, p, point)?,
        Function::Psi => {
            let z = Complex64::from_polar(point, args.phi);
            psi(triple()?, p, z, z.conj())?
        }
    })
}

pub fn eval(args: &EvalArgs) -> Result<Output, Failure> {
    let p = args.q.param()?;
    let name = fn_name(args.function);
    let (flag, single) = match args.function {
        Function::Qnum | Function::Qfact | Function::Psi => ("x", args.x),
        Function::R | Function::Q | Function::L => ("eta", args.eta),
        Function::Vilenkin => ("xi", args.xi),
    };
    let points = match args.grid {
        Some(g) => g.points(),
        None => vec![require(single, flag, name)?],
    };
    // every point is computed before anything is written
    let rows = points
        .iter()
        .map(|&x| {
            eval_point(args, &p, x).map(|v| Row {
                point: x,
                re: v.re,
                im: v.im,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut params = Vec::new();
    for (key, value) in [("J", args.j), ("M", args.m), ("N", args.n)] {
        if let Some(v) = value {
            params.push((key.to_string(), v.to_string()));
        }
    }
    if args.function == Function::Psi {
        params.push(("phi".into(), args.phi.to_string()));
    }
    params.push((q_key(&p).into(), p.raw_value().to_string()));

    let text = match args.format {
        Format::Csv => {
            let mut s = format!("# {name}");
            for (k, v) in &params {
                let _ = write!(s, ",{k}={v}");
            }
            s.push_str("\npoint,re,im\n");
            for r in &rows {
                let _ = writeln!(s, "{:.16e},{:.16e},{:.16e}", r.point, r.re, r.im);
            }
            s
        }
        Format::Json => {
            let doc = EvalDocument {
                function: name.into(),
                params: params.into_iter().collect(),
                rows,
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    };
    Ok(Output { text, ok: true })
}

fn q_key(p: &QParam) -> &'static str {
    match p {
        QParam::UnitCircle { .. } => "tau",
        _ => "q",
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Output, Failure> {
    let p = args.q.param()?;
    let opts = VerifyOptions {
        p,
        j: args.j,
        j_max: args.j_max,
        n: args.n,
        tol: args.tol,
        seed: args.seed,
        radial_nodes: args.radial_nodes,
        angular_nodes: args.angular_nodes,
    };
    let report: ReportDocument = run_suite(args.suite, &opts)?;
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    Ok(Output {
        text,
        ok: report.pass,
    })
}

#[derive(Serialize)]
struct Label {
    #[serde(rename = "J")]
    j: String,
    #[serde(rename = "M")]
    m: String,
}

#[derive(Serialize)]
struct GramDocument {
    #[serde(rename = "N")]
    n: String,
    q_descriptor: QDescriptor,
    kind: String,
    labels: Vec<Label>,
    /// Rows of `[re, im]` pairs.
    matrix: Vec<Vec<[f64; 2]>>,
    max_offdiag: f64,
    max_diag_dev: f64,
    hermiticity: f64,
}

pub fn gram_cmd(args: &GramArgs) -> Result<Output, Failure> {
    let p = args.q.param()?;
    let j_list = match (&args.j, args.j_max) {
        (Some(list), _) => list.0.clone(),
        (None, Some(j_max)) => j_range(args.n, j_max),
        (None, None) => return Err(Failure::Usage("one of --J or --J-max is required".into())),
    };
    let kind = InnerProductKind::for_param(&p);
    let top = j_list.iter().copied().max().unwrap_or(HalfInt::ZERO);
    let base = QuadratureConfig::default();
    let cfg = QuadratureConfig {
        radial_nodes: args.radial_nodes.unwrap_or(base.radial_nodes),
        angular_nodes: args
            .angular_nodes
            .unwrap_or_else(|| angular_node_count(top)),
        ..base
    };
    let rep = gram(args.n, &j_list, &p, kind, &cfg)?;
    let dim = rep.labels.len();
    let ok = args.tol.is_none_or(|tol| rep.deviation() < tol);

    let text = match args.format {
        Format::Json => {
            let doc = GramDocument {
                n: args.n.to_string(),
                q_descriptor: QDescriptor::of(&p),
                kind: kind.name().into(),
                labels: rep
                    .labels
                    .iter()
                    .map(|(j, m)| Label {
                        j: j.to_string(),
                        m: m.to_string(),
                    })
                    .collect(),
                matrix: (0..dim)
                    .map(|r| {
                        (0..dim)
                            .map(|c| [rep.matrix[(r, c)].re, rep.matrix[(r, c)].im])
                            .collect()
                    })
                    .collect(),
                max_offdiag: rep.max_offdiag,
                max_diag_dev: rep.max_diag_dev,
                hermiticity: rep.hermiticity,
            };
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
        Format::Csv => {
            let mut s = format!("# gram,N={},{}={}\n", args.n, q_key(&p), p.raw_value());
            s.push_str("J_row,M_row,J_col,M_col,re,im\n");
            for r in 0..dim {
                for c in 0..dim {
                    let (jr, mr) = rep.labels[r];
                    let (jc, mc) = rep.labels[c];
                    let v = rep.matrix[(r, c)];
                    let _ = writeln!(s, "{jr},{mr},{jc},{mc},{:.16e},{:.16e}", v.re, v.im);
                }
            }
            let _ = writeln!(s, "# max_offdiag={:.16e}", rep.max_offdiag);
            let _ = writeln!(s, "# max_diag_dev={:.16e}", rep.max_diag_dev);
            s
        }
    };
    Ok(Output { text, ok })
}
