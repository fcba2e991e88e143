use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use ratderiv::domain::Domain;
use ratderiv::fit::{
    fit_on_domain, fit_samples, Approximant, FitError, FitOptions, FitResult, Representation, SampleSet, DEFAULT_TOL,
};
use ratderiv::harness::{figure1_model, figure1_sweep, rows_to_csv, run_experiment, ExperimentSpec};
use ratderiv::io::{fmt_num, read_model, read_points, read_samples, write_model, AnyModel};
use ratderiv::testlab::{FunctionId, TestFunction};
use ratderiv::{MachineScalar, Scalar, MAX_ORDER};

#[derive(Parser, Debug)]
#[command(name = "ratderiv", version, about = "Rational approximants with stable derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a test function or a sample file and write the model.
    Fit(FitArgs),
    /// Evaluate a model at the points of a file.
    Eval(EvalArgs),
    /// Derivatives of a model up to order `mu` at the points of a file.
    Diff(DiffArgs),
    /// Error tables for the test functions.
    Tables(TablesArgs),
    /// Naive versus stable first derivative near a node of an exp fit.
    Figure1(Figure1Args),
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, default_value = "bary")]
    rep: Representation,
    /// Test function such as fE or fT.
    #[arg(long, conflicts_with = "samples", required_unless_present = "samples")]
    function: Option<FunctionId>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value = "interval")]
    domain: Domain,
    /// File of `z_re z_im f_re f_im` lines to fit instead of a test function.
    #[arg(long)]
    samples: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 150)]
    max_nodes: usize,
    /// Model file; the model goes to standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    /// One point per line, real or `re im`.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiffArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    points: PathBuf,
    #[arg(long, default_value_t = 1)]
    mu: usize,
    /// Evaluate in double-double precision.
    #[arg(long)]
    ep: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, default_value = "interval")]
    domain: Domain,
    /// Derivative orders, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
    order: Vec<usize>,
    /// Restrict to these functions, comma separated.
    #[arg(long, value_delimiter = ',')]
    functions: Vec<FunctionId>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Figure1Args {
    /// The sweep starts at the node closest to this point.
    #[arg(long, default_value_t = 0.75)]
    target: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// A failure that maps onto an exit code.
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<ratderiv::Error> for Failure {
    fn from(e: ratderiv::Error) -> Self {
        match e {
            ratderiv::Error::Io(_) | ratderiv::Error::Parse { .. } => Failure::Usage(e.to_string()),
            e => Failure::Numerical(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Eval(a) => cmd_diff(DiffArgs { model: a.model, points: a.points, mu: 0, ep: false, output: a.output }),
        Command::Diff(a) => cmd_diff(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Figure1(a) => cmd_figure1(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Outcome {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_fit(a: FitArgs) -> Outcome {
    if !(a.tol >= 0.0) {
        return Err(Failure::Usage("--tol must be nonnegative".into()));
    }
    if a.max_nodes == 0 {
        return Err(Failure::Usage("--max-nodes must be positive".into()));
    }
    match (&a.function, &a.samples) {
        (Some(id), None) => {
            let tf = TestFunction::new(*id, a.epsilon, a.domain).map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = FitOptions { tol: a.tol, max_nodes: a.max_nodes, ..FitOptions::default() };
            match a.domain {
                Domain::Interval => {
                    let target = |x: f64| tf.eval(x, 0).unwrap_or(f64::NAN);
                    finish_fit(&a, fit_on_domain(a.rep, a.domain, &target, &opts))
                }
                Domain::Circle => {
                    let target = |z: Complex64| tf.eval(z, 0).unwrap_or(Complex64::new(f64::NAN, 0.0));
                    finish_fit(&a, fit_on_domain(a.rep, a.domain, &target, &opts))
                }
            }
        }
        (None, Some(path)) => {
            if a.epsilon.is_some() {
                return Err(Failure::Usage("--epsilon needs --function".into()));
            }
            let (z, f) = read_samples(&read(path)?).map_err(|e| Failure::Usage(e.to_string()))?;
            if z.iter().chain(&f).all(|v| v.im == 0.0) {
                let samples = SampleSet::new(z.iter().map(|v| v.re).collect(), f.iter().map(|v| v.re).collect())?;
                finish_fit(&a, fit_samples(a.rep, &samples, a.tol, a.max_nodes))
            } else {
                let samples = SampleSet::new(z, f)?;
                finish_fit(&a, fit_samples(a.rep, &samples, a.tol, a.max_nodes))
            }
        }
        _ => Err(Failure::Usage("exactly one of --function and --samples is required".into())),
    }
}

type Fitted<S> = FitResult<Approximant<S>, S>;

fn finish_fit<S: Scalar>(a: &FitArgs, result: Fitted<S>) -> Outcome {
    let (report, converged) = match result {
        Ok(r) => (r, true),
        Err(FitError::NotConverged(r)) => (*r, false),
        Err(FitError::Failed(e)) => return Err(e.into()),
    };
    let mut text = String::new();
    let _ = writeln!(text, "# nodes {}", report.model.len());
    let _ = writeln!(text, "# achieved_error {}", fmt_num(report.achieved_error));
    let _ = writeln!(text, "# samples {}", report.samples.len());
    let _ = writeln!(text, "# converged {converged}");
    let summary = text.clone();
    text.push_str(&write_model(&report.model)?);
    match &a.output {
        Some(p) => {
            emit(Some(p), &text)?;
            print!("{summary}");
        }
        None => print!("{text}"),
    }
    if converged {
        Ok(())
    } else {
        Err(Failure::Numerical(format!(
            "tolerance {:e} not reached; best residual {:e} with {} nodes",
            a.tol,
            report.achieved_error,
            report.model.len()
        )))
    }
}

fn cmd_diff(a: DiffArgs) -> Outcome {
    if a.mu > MAX_ORDER {
        return Err(Failure::Usage(format!("--mu must be at most {MAX_ORDER}")));
    }
    let model = read_model(&read(&a.model)?).map_err(|e| Failure::Usage(format!("{}: {e}", a.model.display())))?;
    let points = read_points(&read(&a.points)?).map_err(|e| Failure::Usage(format!("{}: {e}", a.points.display())))?;
    let (text, poles) = match &model {
        AnyModel::Real(m) => {
            if let Some(z) = points.iter().find(|z| z.im != 0.0) {
                return Err(Failure::Usage(format!("complex point {z} for a real model")));
            }
            let x: Vec<f64> = points.iter().map(|z| z.re).collect();
            derivative_table(m, &x, a.mu, a.ep, false)
        }
        AnyModel::Complex(m) => derivative_table(m, &points, a.mu, a.ep, true),
    };
    emit(a.output.as_deref(), &text)?;
    if !points.is_empty() && poles == points.len() {
        return Err(Failure::Numerical("every point is a pole".into()));
    }
    Ok(())
}

/// CSV of derivative stacks and the number of rows that hit a pole.
fn derivative_table<S: MachineScalar>(
    model: &Approximant<S>,
    points: &[S],
    mu: usize,
    ep: bool,
    complex: bool,
) -> (String, usize) {
    let mut out = String::new();
    if complex {
        out.push_str("z_re,z_im");
        for k in 0..=mu {
            let _ = write!(out, ",r{k}_re,r{k}_im");
        }
    } else {
        out.push('z');
        for k in 0..=mu {
            let _ = write!(out, ",r{k}");
        }
    }
    out.push('\n');
    let extended = ep.then(|| model.extend());
    let mut poles = 0;
    for &z in points {
        let values: Option<Vec<Complex64>> = match &extended {
            Some(m) => m.derivatives(S::Extended::from_c64(z.to_c64()), mu).ok().map(|d| d.values.iter().map(|v| v.to_c64()).collect()),
            None => model.derivatives(z, mu).ok().map(|d| d.values.iter().map(|v| v.to_c64()).collect()),
        };
        let values = values.filter(|v| v.iter().all(|x| x.is_finite()));
        let zc = z.to_c64();
        let mut cells = if complex { vec![fmt_num(zc.re), fmt_num(zc.im)] } else { vec![fmt_num(zc.re)] };
        match values {
            Some(v) => {
                for x in v {
                    cells.push(fmt_num(x.re));
                    if complex {
                        cells.push(fmt_num(x.im));
                    }
                }
            }
            None => {
                poles += 1;
                cells.push("pole".into());
            }
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    (out, poles)
}

fn cmd_tables(a: TablesArgs) -> Outcome {
    if a.order.is_empty() || a.order.iter().any(|&m| m == 0 || m > MAX_ORDER) {
        return Err(Failure::Usage(format!("--order values must lie in 1..={MAX_ORDER}")));
    }
    if !(a.tol >= 0.0) {
        return Err(Failure::Usage("--tol must be nonnegative".into()));
    }
    let mut spec = ExperimentSpec::tables(a.domain);
    if !a.functions.is_empty() {
        spec = spec.retain_functions(&a.functions);
        if spec.rows.is_empty() {
            return Err(Failure::Usage(format!("no {} table rows for the requested functions", a.domain)));
        }
    }
    spec.orders = a.order;
    spec.fit.tol = a.tol;
    let rows = run_experiment(&spec);
    emit(a.output.as_deref(), &rows_to_csv(&rows))?;
    let failed = rows.iter().filter(|r| r.report.is_none()).count();
    if failed > 0 {
        return Err(Failure::Numerical(format!("{failed} rows have no result")));
    }
    Ok(())
}

fn cmd_figure1(a: Figure1Args) -> Outcome {
    let model = figure1_model()?;
    let sweep = figure1_sweep(&model, a.target);
    emit(a.output.as_deref(), &sweep.to_csv())?;
    let (naive, stable) = sweep.at(1e-14);
    eprintln!(
        "node {} of {}: at distance 1e-14 naive error {naive:.3e}, stable error {stable:.3e}",
        fmt_num(sweep.node),
        model.len()
    );
    Ok(())
}
