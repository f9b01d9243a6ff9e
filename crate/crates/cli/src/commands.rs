use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qball::numerics::{
    ball_norm, boundary_norm, matrix_norm_level_k, max_principle_report, pbw_rank, MatPoly, Schedule, Side,
    DEFAULT_TOL, MONOTONE_SLACK,
};
use qball::repr::{boundary_generators, fock_generators, relation_residuals, BoundaryConfig, FockConfig};
use qball::rewrite::{normalize, normalize_with, Normalizer, Strategy};
use qball::sample::random_poly;
use qball::{AlgebraContext, AlgebraError, Mode, NCPoly, NumericsError, ReprError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::parse::{format_matrix, parse_input, Parsed};
use crate::report::{gap_rows, schedule_rows, Report, Tolerances};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    InputError = 2,
    NoConvergence = 3,
    CheckFailed = 4,
}

#[derive(Parser)]
#[command(name = "qball", version, about = "Normal forms and norm experiments for the quantum unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an element (or matrix) into normal form.
    NormalForm(Common),
    /// Certified norm schedule on the ball or the boundary side.
    Norm {
        #[arg(long, value_enum, default_value = "ball")]
        side: SideArg,
        #[command(flatten)]
        common: Common,
    },
    /// Compare ball and boundary norms along a schedule.
    Maxprinciple(Common),
    /// Check that ball and boundary norms agree at matrix level k.
    CiCheck {
        #[arg(long, default_value_t = 1)]
        level: usize,
        /// Largest accepted gap (default 1e-2 at level 1, 2e-2 above).
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Residuals of the defining relations in a truncated representation.
    RelationsResidual {
        #[arg(long, default_value_t = 1e-12)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Normalize random inputs under several strategies and compare.
    ConfluenceFuzz {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical rank of the canonical monomials under a representation.
    PbwRank {
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 1e-8)]
        threshold: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Ball,
    Boundary,
}

#[derive(Args)]
struct Common {
    /// Number of generators.
    #[arg(long)]
    n: usize,
    /// Deformation parameter, as a fraction or a decimal in (0, 1).
    #[arg(long, default_value = "1/2")]
    q: String,
    #[arg(long, default_value = "ball")]
    mode: String,
    #[arg(long, conflicts_with = "expr_file")]
    expr: Option<String>,
    #[arg(long)]
    expr_file: Option<PathBuf>,
    /// Comma-separated truncation schedule.
    #[arg(long, value_delimiter = ',')]
    trunc: Option<Vec<usize>>,
    /// Number of boundary sample points at the last schedule entry.
    #[arg(long)]
    theta: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Input(String),
    NoConvergence(String),
}

impl From<NumericsError> for Failure {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::NoConvergence { .. } => Failure::NoConvergence(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<ReprError> for Failure {
    fn from(e: ReprError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Outcome {
    report: Report,
    text: String,
    check_failure: Option<String>,
}

/// Parses `1/2`, `3/4` or a decimal.
fn parse_q(text: &str) -> Result<f64, Failure> {
    let bad = || Failure::Input(format!("cannot parse q value '{text}'"));
    let q = match text.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            a as f64 / b as f64
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    qball::algebra::check_q(q)?;
    Ok(q)
}

struct Setup {
    ctx: AlgebraContext,
    q: f64,
}

impl Common {
    fn setup(&self) -> Result<Setup, Failure> {
        let mode: Mode = self.mode.parse().map_err(Failure::Input)?;
        let ctx = AlgebraContext::new(self.n, mode)?;
        Ok(Setup { ctx, q: parse_q(&self.q)? })
    }

    fn input_text(&self) -> Result<String, Failure> {
        match (&self.expr, &self.expr_file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map(|s| s.trim().to_string())
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display()))),
            (None, None) => Err(Failure::Input("an expression is required (--expr or --expr-file)".into())),
        }
    }

    fn parsed(&self) -> Result<(String, Parsed), Failure> {
        let text = self.input_text()?;
        let parsed = parse_input(&text, self.n)
            .map_err(|e| Failure::Input(format!("{e}\n{}", e.caret(&text))))?;
        Ok((text, parsed))
    }

    fn schedule(&self) -> Result<Schedule, Failure> {
        let truncs = self.trunc.clone().unwrap_or_else(|| if self.n == 1 { vec![10, 20, 40] } else { vec![4, 8, 12] });
        let theta = self.theta.unwrap_or(if self.n == 1 { 4096 } else { 64 });
        Ok(Schedule::doubling(&truncs, Some(theta))?)
    }

    /// The last entry of `--trunc`, for commands that use a single level.
    fn single_trunc(&self, default: usize) -> usize {
        self.trunc.as_ref().and_then(|t| t.last().copied()).unwrap_or(default)
    }

    fn report(&self, setup: &Setup, operation: &str, input: Option<String>) -> Report {
        Report {
            input,
            n: self.n,
            q: setup.q,
            mode: setup.ctx.mode().to_string(),
            operation: operation.into(),
            schedule: Vec::new(),
            result: serde_json::Value::Null,
            gap: None,
            holomorphic: None,
            tolerances: Tolerances { tol: None, threshold: None },
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

fn normal_form(c: &Common) -> Result<Outcome, Failure> {
    let setup = c.setup()?;
    let (text, parsed) = c.parsed()?;
    let mut norm = Normalizer::new(setup.ctx);
    let (printed, holomorphic) = match parsed {
        Parsed::Poly(p) => {
            let nf = norm.normalize(&p)?;
            (nf.to_string(), qball::rewrite::is_holomorphic(&nf))
        }
        Parsed::Matrix(m) => {
            let mut err = None;
            let nf = m.map(|e| {
                norm.normalize(e).unwrap_or_else(|x| {
                    err = Some(x);
                    NCPoly::zero(e.n())
                })
            });
            if let Some(e) = err {
                return Err(e.into());
            }
            (format_matrix(&nf), nf.is_holomorphic())
        }
    };
    let mut report = c.report(&setup, "normal-form", Some(text));
    report.result = json!(printed);
    report.holomorphic = Some(holomorphic);
    Ok(Outcome { report, text: format!("{printed}\n"), check_failure: None })
}

fn norm(c: &Common, side: SideArg) -> Result<Outcome, Failure> {
    let setup = c.setup()?;
    let (text, parsed) = c.parsed()?;
    let schedule = c.schedule()?;
    let (side, mode) = match side {
        SideArg::Ball => (Side::Ball, Mode::Ball),
        SideArg::Boundary => (Side::Boundary, Mode::Sphere),
    };
    let est = match &parsed {
        Parsed::Poly(p) if side == Side::Ball => ball_norm(p, setup.q, &schedule, c.tol)?,
        Parsed::Poly(p) => boundary_norm(p, setup.q, &schedule, c.tol)?,
        Parsed::Matrix(m) => matrix_norm_level_k(m, side, setup.q, &schedule, c.tol)?,
    };
    let mut report = c.report(&setup, "norm", Some(text));
    report.mode = mode.to_string();
    report.schedule = schedule_rows(&est);
    report.result = json!({
        "side": if side == Side::Ball { "ball" } else { "boundary" },
        "value": est.value,
        "stabilized": est.stabilized,
        "monotone": est.is_monotone(MONOTONE_SLACK),
    });
    report.tolerances.tol = Some(c.tol);
    let body = format!("{}norm: {:.15}\n", report.table(), est.value);
    Ok(Outcome { report, text: body, check_failure: None })
}

fn gap_report(c: &Common, f: &MatPoly, text: String, operation: &str) -> Result<(Report, f64, bool), Failure> {
    let setup = c.setup()?;
    let schedule = c.schedule()?;
    let r = max_principle_report(text.clone(), f, setup.q, &schedule, c.tol)?;
    let mut report = c.report(&setup, operation, Some(text));
    report.mode = Mode::Ball.to_string();
    report.schedule = gap_rows(&r);
    let nonincreasing = r.gaps_nonincreasing(MONOTONE_SLACK);
    report.result = json!({
        "ball": r.ball.value,
        "boundary": r.boundary.value,
        "gap": r.gap,
        "gaps_nonincreasing": nonincreasing,
        "ball_stabilized": r.ball.stabilized,
        "boundary_stabilized": r.boundary.stabilized,
    });
    report.gap = Some(r.gap);
    report.holomorphic = Some(r.holomorphic);
    report.tolerances.tol = Some(c.tol);
    Ok((report, r.gap, nonincreasing))
}

fn maxprinciple(c: &Common) -> Result<Outcome, Failure> {
    let (text, parsed) = c.parsed()?;
    let (report, gap, _) = gap_report(c, &parsed.into_matrix(), text, "maxprinciple")?;
    let body = format!(
        "{}ball: {:.15}\nboundary: {:.15}\ngap: {gap:.3e}\n",
        report.table(),
        report.result["ball"].as_f64().unwrap_or(f64::NAN),
        report.result["boundary"].as_f64().unwrap_or(f64::NAN),
    );
    Ok(Outcome { report, text: body, check_failure: None })
}

fn ci_check(c: &Common, level: usize, threshold: Option<f64>) -> Result<Outcome, Failure> {
    if level == 0 {
        return Err(Failure::Input("--level must be at least 1".into()));
    }
    let (text, parsed) = c.parsed()?;
    let f = match parsed {
        Parsed::Matrix(m) if m.size() == level => m,
        Parsed::Matrix(m) => {
            return Err(Failure::Input(format!("input is {0}x{0} but --level is {level}", m.size())));
        }
        Parsed::Poly(p) => {
            let rows = (0..level)
                .map(|i| (0..level).map(|j| if i == j { p.clone() } else { NCPoly::zero(p.n()) }).collect())
                .collect();
            MatPoly::new(rows)?
        }
    };
    if !f.is_holomorphic() {
        return Err(Failure::Input("ci-check needs a holomorphic input (no starred generators)".into()));
    }
    let threshold = threshold.unwrap_or(if level == 1 { 1e-2 } else { 2e-2 });
    let (mut report, gap, nonincreasing) = gap_report(c, &f, text, "ci-check")?;
    report.tolerances.threshold = Some(threshold);
    let passed = gap <= threshold && nonincreasing;
    report.result["level"] = json!(level);
    report.result["passed"] = json!(passed);
    let body = format!("{}gap: {gap:.3e} (threshold {threshold:e})\n{}\n", report.table(), if passed { "PASS" } else { "FAIL" });
    let check_failure = (!passed).then(|| {
        if gap > threshold {
            format!("gap {gap:e} exceeds {threshold:e}")
        } else {
            "gaps increase along the schedule".to_string()
        }
    });
    Ok(Outcome { report, text: body, check_failure })
}

fn relations_residual(c: &Common, threshold: f64) -> Result<Outcome, Failure> {
    let setup = c.setup()?;
    let truncation = c.single_trunc(8);
    let (rep, theta) = match setup.ctx.mode() {
        Mode::Ball => (fock_generators(&FockConfig::new(c.n, truncation, setup.q)?)?, None),
        Mode::Sphere => {
            let m = c.theta.unwrap_or(8);
            (boundary_generators(&BoundaryConfig::new(c.n, truncation, m, setup.q)?)?, Some(m))
        }
    };
    let residuals = relation_residuals(&rep, &setup.ctx)?;
    let worst = residuals.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    let mut report = c.report(&setup, "relations-residual", None);
    report.schedule = vec![crate::report::ScheduleRow {
        truncation,
        theta,
        value: worst,
        fock: None,
        boundary: None,
        gap: None,
    }];
    report.result = json!({
        "max": worst,
        "relations": residuals.iter().map(|(l, r)| json!({"relation": l, "residual": r})).collect::<Vec<_>>(),
    });
    report.tolerances.threshold = Some(threshold);
    let mut body = String::new();
    for (l, r) in &residuals {
        body.push_str(&format!("{r:10.3e}  {l}\n"));
    }
    body.push_str(&format!("max residual: {worst:.3e}\n"));
    let check_failure = (worst >= threshold).then(|| format!("residual {worst:e} is not below {threshold:e}"));
    Ok(Outcome { report, text: body, check_failure })
}

fn confluence_fuzz(c: &Common, count: usize, degree: usize) -> Result<Outcome, Failure> {
    let setup = c.setup()?;
    let seed = c.seed.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = Vec::new();
    let strategy_count = 5;
    for i in 0..count {
        let n = rng.random_range(1..=c.n);
        let ctx = AlgebraContext::new(n, setup.ctx.mode())?;
        let p = random_poly(&mut rng, n, degree, false);
        let strategies = [
            Strategy::Leftmost,
            Strategy::Rightmost,
            Strategy::Random(rng.random()),
            Strategy::Random(rng.random()),
            Strategy::Random(rng.random()),
        ];
        let reference = normalize(&p, &ctx)?;
        for s in strategies {
            let nf = normalize_with(&p, &ctx, s)?;
            if nf != reference {
                disagreements.push(json!({
                    "index": i,
                    "input": p.to_string(),
                    "strategy": format!("{s:?}"),
                    "normal_form": nf.to_string(),
                    "reference": reference.to_string(),
                }));
            }
        }
    }
    let mut report = c.report(&setup, "confluence-fuzz", None);
    report.seed = Some(seed);
    let agreed = disagreements.is_empty();
    report.result = json!({
        "count": count,
        "max_degree": degree,
        "strategies": strategy_count,
        "agreed": agreed,
        "disagreements": disagreements,
    });
    let body = format!(
        "{count} inputs x {strategy_count} strategies: {}\n",
        if agreed { "all normal forms agree".to_string() } else { format!("{} disagreements", disagreements.len()) }
    );
    let check_failure = (!agreed).then(|| "strategies disagree".to_string());
    Ok(Outcome { report, text: body, check_failure })
}

fn pbw(c: &Common, degree: usize, threshold: f64) -> Result<Outcome, Failure> {
    let setup = c.setup()?;
    let truncation = c.single_trunc(8);
    let theta = match setup.ctx.mode() {
        Mode::Ball => None,
        Mode::Sphere => Some(c.theta.unwrap_or(16)),
    };
    let r = pbw_rank(&setup.ctx, degree, truncation, theta, setup.q)?;
    let mut report = c.report(&setup, "pbw-rank", None);
    report.schedule = vec![crate::report::ScheduleRow {
        truncation,
        theta,
        value: r.min_singular_value,
        fock: None,
        boundary: None,
        gap: None,
    }];
    report.result = json!({
        "max_degree": degree,
        "monomials": r.monomials,
        "rank": r.rank,
        "min_singular_value": r.min_singular_value,
    });
    report.tolerances.threshold = Some(threshold);
    let body = format!(
        "monomials: {}\nrank: {}\nmin singular value: {:.3e}\n",
        r.monomials, r.rank, r.min_singular_value
    );
    let passed = r.rank == r.monomials && r.min_singular_value > threshold;
    let check_failure = (!passed).then(|| "canonical monomials are numerically dependent".to_string());
    Ok(Outcome { report, text: body, check_failure })
}

fn dispatch(cmd: &Command) -> (Result<Outcome, Failure>, &Common) {
    match cmd {
        Command::NormalForm(c) => (normal_form(c), c),
        Command::Norm { side, common } => (norm(common, *side), common),
        Command::Maxprinciple(c) => (maxprinciple(c), c),
        Command::CiCheck { level, threshold, common } => (ci_check(common, *level, *threshold), common),
        Command::RelationsResidual { threshold, common } => (relations_residual(common, *threshold), common),
        Command::ConfluenceFuzz { count, degree, common } => (confluence_fuzz(common, *count, *degree), common),
        Command::PbwRank { degree, threshold, common } => (pbw(common, *degree, *threshold), common),
    }
}

/// Runs the command line, writing to the given streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                ExitStatus::InputError
            } else {
                let _ = write!(out, "{rendered}");
                ExitStatus::Success
            };
        }
    };
    let start = Instant::now();
    let (result, common) = dispatch(&cli.command);
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return ExitStatus::InputError;
        }
        Err(Failure::NoConvergence(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return ExitStatus::NoConvergence;
        }
    };
    let _ = write!(out, "{}", outcome.text);
    if let Some(path) = &common.json {
        if let Err(e) = outcome.report.write_json(path) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return ExitStatus::InputError;
        }
    }
    if let Some(path) = &common.csv {
        if let Err(e) = outcome.report.write_csv(path) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return ExitStatus::InputError;
        }
    }
    let _ = writeln!(err, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
    match outcome.check_failure {
        Some(msg) => {
            let _ = writeln!(err, "check failed: {msg}");
            ExitStatus::CheckFailed
        }
        None => ExitStatus::Success,
    }
}

/// Runs the command line against the process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock()) as i32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_values() {
        assert!(matches!(parse_q("1/2"), Ok(q) if q == 0.5));
        assert!(matches!(parse_q("0.75"), Ok(q) if q == 0.75));
        for bad in ["1", "0", "2/3/4", "1/0", "x", "-1/2"] {
            assert!(parse_q(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn non_convergence_maps_to_exit_three() {
        let f = Failure::from(NumericsError::NoConvergence { iterations: 5, last: 1.0 });
        assert!(matches!(f, Failure::NoConvergence(_)));
        let f = Failure::from(NumericsError::InvalidTolerance(0.0));
        assert!(matches!(f, Failure::Input(_)));
        assert_eq!(ExitStatus::NoConvergence as i32, 3);
    }
}
