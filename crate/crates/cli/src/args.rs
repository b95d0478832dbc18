use clap::{Args, Parser, Subcommand, ValueEnum};
use suq2::verify::Suite;
use suq2::{HalfInt, QParam};

#[derive(Debug, Parser)]
#[command(
    name = "suq2",
    version,
    about = "Evaluate and verify su_q(2) plane-realization quantities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a function at a point or over a grid.
    Eval(EvalArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Compute the Gram matrix of the basis functions.
    Gram(GramArgs),
}

/// Exactly one of `--q` / `--tau`.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct QArgs {
    /// Positive real q; 1 selects the classical regime.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// q = exp(i tau), tau in (-pi, pi) \ {0}.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
}

impl QArgs {
    pub fn param(&self) -> suq2::Result<QParam> {
        match (self.q, self.tau) {
            (Some(q), None) => QParam::from_real(q),
            (None, Some(tau)) => QParam::unit_circle(tau),
            _ => unreachable!("clap enforces exactly one"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Qnum,
    Qfact,
    #[value(name = "R")]
    R,
    #[value(name = "Q")]
    Q,
    #[value(name = "L")]
    L,
    Vilenkin,
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `lo:hi:n`, `n` points including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64)
            .collect()
    }
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("grid '{s}' must be lo:hi:n"));
    };
    let lo: f64 = lo.parse().map_err(|e| format!("grid lo '{lo}': {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("grid hi '{hi}': {e}"))?;
    let n: usize = n.parse().map_err(|e| format!("grid n '{n}': {e}"))?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("grid '{s}' needs finite bounds and n >= 1"));
    }
    Ok(Grid { lo, hi, n })
}

fn parse_half(s: &str) -> Result<HalfInt, String> {
    s.parse().map_err(|e: suq2::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: suq2::Error| e.to_string())
}

/// A J list given as one comma-separated value.
#[derive(Debug, Clone, PartialEq)]
pub struct JList(pub Vec<HalfInt>);

/// The empty string is the empty list.
fn parse_j_list(s: &str) -> Result<JList, String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(parse_half)
        .collect::<Result<_, _>>()
        .map(JList)
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    #[command(flatten)]
    pub q: QArgs,
    #[arg(long = "J", value_parser = parse_half, allow_hyphen_values = true)]
    pub j: Option<HalfInt>,
    #[arg(long = "M", value_parser = parse_half, allow_hyphen_values = true)]
    pub m: Option<HalfInt>,
    #[arg(long = "N", value_parser = parse_half, allow_hyphen_values = true)]
    pub n: Option<HalfInt>,
    /// Argument of qnum and qfact; radius |z| for psi.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Angle of z for psi.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub xi: Option<f64>,
    /// Replaces the point argument of the chosen function.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_suite, default_value = "all")]
    pub suite: Suite,
    #[command(flatten)]
    pub q: QArgs,
    #[arg(long = "J", value_parser = parse_half)]
    pub j: Option<HalfInt>,
    #[arg(long = "J-max", value_parser = parse_half)]
    pub j_max: Option<HalfInt>,
    #[arg(long = "N", value_parser = parse_half, allow_hyphen_values = true)]
    pub n: Option<HalfInt>,
    /// Overrides every case tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "radial-nodes")]
    pub radial_nodes: Option<usize>,
    #[arg(long = "angular-nodes")]
    pub angular_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    #[command(flatten)]
    pub q: QArgs,
    #[arg(long = "N", value_parser = parse_half, allow_hyphen_values = true, default_value = "0")]
    pub n: HalfInt,
    /// Comma-separated J values, e.g. `0.5,1.5`; may be empty.
    #[arg(long = "J", value_parser = parse_j_list, conflicts_with = "j_max")]
    pub j: Option<JList>,
    /// All J from |N| to J-max in unit steps.
    #[arg(long = "J-max", value_parser = parse_half)]
    pub j_max: Option<HalfInt>,
    /// Exit 1 when the deviation from the identity reaches this value.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "radial-nodes")]
    pub radial_nodes: Option<usize>,
    #[arg(long = "angular-nodes")]
    pub angular_nodes: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:3").unwrap().points(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-1:1:1").unwrap().points(), vec![-1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("a:1:2").is_err());
    }

    #[test]
    fn j_lists() {
        assert!(parse_j_list("").unwrap().0.is_empty());
        assert_eq!(parse_j_list("0.5, 1.5").unwrap().0.len(), 2);
        assert!(parse_j_list("0.25").is_err());
    }
}
