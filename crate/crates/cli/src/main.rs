mod problem;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cvxcomp::composite::{
    additive_composite_conjugate, additive_composite_subdifferential, check_cq, composite_conjugate, composite_subdifferential, Budget,
    CompositeConjugateResult, CompositeProblem, CqCondition,
};
use cvxcomp::conic::{
    check_optimality, farkas_alternative, fenchel_dual, solve_lagrangian_dual, solve_primal_grid, ConicProgram, OptimalityVerdict,
};
use cvxcomp::conjugate::{conjugate_bruteforce, GridSpec};
use cvxcomp::library::{example, Example};
use cvxcomp::linalg::Mat;
use cvxcomp::matrixapps::{
    mff_gamma, mff_map, spectral_conjugate, spectral_eval, spectral_subdifferential, vgf_conjugate, vgf_eval, vgf_subdifferential, CMat,
    MatrixPair, SpectralSpec, VgfSet,
};
use cvxcomp::oracle::Oracle;
use cvxcomp::subdiff::SubdifferentialSet;
use cvxcomp::verify::{run_suite, SuiteConfig};
use cvxcomp::Extended;
use problem::ProblemFile;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cvxcomp", version, about = "Conjugates, subdifferentials and duality for convex-composite functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for parallel evaluation.
    #[arg(long, global = true, env = "CVXCOMP_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugate of a function: closed form and grid estimate.
    Conjugate(Common),
    /// Subdifferential of a function at a point.
    Subdiff(Common),
    /// Conjugate, subdifferential or qualification check of g∘F (+ f).
    Composite(Common),
    /// Primal, Lagrangian and Fenchel values of min f(x) s.t. F(x) ∈ −K.
    Conic(Common),
    /// Theorem-of-the-alternative verdict for a built-in instance.
    Farkas(Common),
    /// Matrix-fractional function γ(X, V).
    Mff(Common),
    /// Variational Gram function Ω_M.
    Vgf(Common),
    /// Spectral function g∘λ.
    Spectral(Common),
    /// Runs a registered verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Problem JSON file.
    #[arg(long, conflicts_with = "example")]
    problem: Option<PathBuf>,
    /// Built-in example name.
    #[arg(long)]
    example: Option<String>,
    /// Operation to run (subcommand specific).
    #[arg(long)]
    query: Option<String>,
    /// Dual point: comma-separated numbers or a JSON array.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    /// Primal point or matrix: comma-separated numbers or JSON.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Second matrix argument (JSON rows).
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run composite conjugation without a verified qualification condition.
    #[arg(long)]
    waive_cq: bool,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Record wall time in the report (breaks byte-identical reruns).
    #[arg(long)]
    wall_time: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status 1: a check failed. Exit status 2: bad input.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl std::fmt::Display) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

type Res<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Res<u8> {
    let (value, out, code) = match cmd {
        Command::Verify(a) => return verify(a),
        Command::Conjugate(c) => (conjugate(&c)?, c.out.clone(), 0),
        Command::Subdiff(c) => (subdiff(&c)?, c.out.clone(), 0),
        Command::Composite(c) => (composite(&c)?, c.out.clone(), 0),
        Command::Conic(c) => (conic(&c)?, c.out.clone(), 0),
        Command::Farkas(c) => (farkas(&c)?, c.out.clone(), 0),
        Command::Mff(c) => (mff(&c)?, c.out.clone(), 0),
        Command::Vgf(c) => (vgf(&c)?, c.out.clone(), 0),
        Command::Spectral(c) => (spectral(&c)?, c.out.clone(), 0),
    };
    emit(&serde_json::to_string_pretty(&value).expect("json values serialize"), out.as_ref())?;
    Ok(code)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Res<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(format!("cannot write to stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn verify(a: VerifyArgs) -> Res<u8> {
    let mut config = SuiteConfig { seed: a.seed, record_wall_time: a.wall_time, ..SuiteConfig::default() };
    if let Some(s) = a.samples {
        config.samples = s;
    }
    let report = run_suite(&a.suite, &config).map_err(usage)?;
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
        Format::Text => report.to_text().trim_end().to_string(),
    };
    emit(&text, a.out.as_ref())?;
    Ok(if report.all_passed() { 0 } else { 1 })
}

/// Where the operands come from.
enum Source {
    File(Box<ProblemFile>),
    Example(Example),
}

fn load(c: &Common) -> Res<Source> {
    match (&c.problem, &c.example) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let p = ProblemFile::parse(&text).map_err(|e| {
                usage(format!("{}: schema violation at line {} column {}: {e}", path.display(), e.line(), e.column()))
            })?;
            Ok(Source::File(Box::new(p)))
        }
        (None, Some(name)) => example(name).map(Source::Example).map_err(usage),
        (None, None) => Err(usage("one of --problem or --example is required")),
    }
}

fn schema(path: &Common) -> impl Fn(problem::SchemaError) -> Failure + '_ {
    move |e| usage(format!("{}: schema violation {e}", path.problem.as_ref().map_or(String::new(), |p| p.display().to_string())))
}

fn numbers(s: &str) -> Res<Vec<f64>> {
    if s.trim_start().starts_with('[') {
        return serde_json::from_str(s).map_err(|e| usage(format!("bad vector {s:?}: {e}")));
    }
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("bad number {t:?}: {e}")))).collect()
}

fn rows(s: &str) -> Res<Mat<f64>> {
    let r: Vec<Vec<f64>> = if s.trim_start().starts_with("[[") {
        serde_json::from_str(s).map_err(|e| usage(format!("bad matrix {s:?}: {e}")))?
    } else {
        numbers(s)?.into_iter().map(|v| vec![v]).collect()
    };
    problem::matrix(&r, "--x/--v").map_err(|e| usage(e.message))
}

fn ext(v: Extended<f64>) -> Value {
    match v {
        Extended::Finite(x) => json!(x),
        Extended::PosInf => json!("+inf"),
    }
}

fn real(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

fn mat(m: &Mat<f64>) -> Value {
    json!((0..m.rows).map(|i| m.row(i).to_vec()).collect::<Vec<_>>())
}

fn subdiff_json(s: &SubdifferentialSet<f64>) -> Value {
    json!({ "points": s.points(), "rays": s.rays(), "exactness": s.exactness })
}

fn grid_of(src: &Source) -> GridSpec {
    match src {
        Source::File(p) => p.grid.clone().unwrap_or_default(),
        Source::Example(_) => GridSpec::default(),
    }
}

fn budget_of(c: &Common, src: &Source) -> Budget {
    let mut b = match src {
        Source::File(p) => {
            let mut b = p.budget();
            if let Some(s) = p.seed {
                b.seed = s;
            }
            b
        }
        Source::Example(_) => Budget::default(),
    };
    if let Some(s) = c.seed {
        b.seed = s;
    }
    if c.waive_cq {
        b.waive_cq = true;
    }
    b
}

fn query_point(c: &Common, src: &Source, flag: Option<&String>, name: &str) -> Res<Vec<f64>> {
    if let Some(s) = flag {
        return numbers(s);
    }
    if let Source::File(p) = src {
        if let Some(pt) = p.query.as_ref().and_then(|q| q.point.clone()) {
            return Ok(pt);
        }
    }
    let _ = c;
    Err(usage(format!("--{name} is required")))
}

fn query_op(c: &Common, src: &Source, default: &str) -> String {
    c.query
        .clone()
        .or_else(|| match src {
            Source::File(p) => p.query.as_ref().and_then(|q| q.op.clone()),
            Source::Example(_) => None,
        })
        .unwrap_or_else(|| default.to_string())
}

fn single_oracle(c: &Common, src: &Source) -> Res<Oracle<f64>> {
    match src {
        Source::File(p) => p.single_function("f").map_err(schema(c)),
        Source::Example(Example::Composite(p)) => Ok(p.as_oracle()),
        Source::Example(Example::Conic(p)) => Ok(p.f.clone()),
        Source::Example(_) => Err(usage("this example has no single function; use its own subcommand")),
    }
}

fn conjugate(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let f = single_oracle(c, &src)?;
    let y = query_point(c, &src, c.p.as_ref(), "p")?;
    if y.len() != f.dim() {
        return Err(usage(format!("--p has {} entries, the function lives in dimension {}", y.len(), f.dim())));
    }
    let brute = conjugate_bruteforce(&f, &y, &grid_of(&src)).map_err(usage)?;
    Ok(json!({
        "function": f.name,
        "p": y,
        "value": f.conjugate(&y).map(ext),
        "bruteforce": {
            "value": ext(brute.value),
            "argmax": brute.point,
            "gap_bound": brute.gap_bound,
            "unbounded_suspect": brute.unbounded_suspect,
        },
    }))
}

fn subdiff(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let f = single_oracle(c, &src)?;
    let x = query_point(c, &src, c.x.as_ref(), "x")?;
    if x.len() != f.dim() {
        return Err(usage(format!("--x has {} entries, the function lives in dimension {}", x.len(), f.dim())));
    }
    let s = f.subgradient(&x).map_err(usage)?;
    Ok(json!({ "function": f.name, "x": x, "value": ext(f.eval(&x)), "subdifferential": subdiff_json(&s) }))
}

fn composite_of(c: &Common, src: &Source) -> Res<CompositeProblem<f64>> {
    match src {
        Source::File(p) => p.composite().map_err(schema(c)),
        Source::Example(Example::Composite(p)) => Ok(p.clone()),
        Source::Example(_) => Err(usage("the example is not a composite problem")),
    }
}

fn conjugate_json(r: &CompositeConjugateResult<f64>) -> Value {
    json!({
        "value": ext(r.value),
        "certified": r.certified,
        "upper_bound_only": r.upper_bound_only,
        "method": r.method,
        "multiplier": r.argmin_v,
        "y": r.attained_y,
        "cq": r.cq,
    })
}

fn composite(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let p = composite_of(c, &src)?;
    let budget = budget_of(c, &src);
    let op = query_op(c, &src, "conjugate");
    let dim = p.dim_in();
    let point = |flag: Option<&String>, name: &str| -> Res<Vec<f64>> {
        let v = query_point(c, &src, flag, name)?;
        if v.len() != dim {
            return Err(usage(format!("--{name} has {} entries, the problem lives in dimension {dim}", v.len())));
        }
        Ok(v)
    };
    match op.as_str() {
        "conjugate" => {
            let q = point(c.p.as_ref(), "p")?;
            let r = if p.f.is_some() { additive_composite_conjugate(&p, &q, &budget) } else { composite_conjugate(&p, &q, &budget) };
            r.map(|r| conjugate_json(&r)).map_err(usage)
        }
        "subdiff" => {
            let x = point(c.x.as_ref(), "x")?;
            let s = if p.f.is_some() { additive_composite_subdifferential(&p, &x) } else { composite_subdifferential(&p, &x) };
            let s = s.map_err(usage)?;
            Ok(json!({ "x": x, "value": ext(p.eval_composite(&x)), "subdifferential": subdiff_json(&s) }))
        }
        "eval" => {
            let x = point(c.x.as_ref(), "x")?;
            Ok(json!({ "x": x, "value": ext(p.eval_composite(&x)) }))
        }
        "cq" => {
            let cond = if p.f.is_some() { CqCondition::Cq2 } else { CqCondition::Cq1 };
            check_cq(&p, cond).map(|r| json!(r)).map_err(usage)
        }
        other => Err(usage(format!("unknown composite query {other:?}; expected conjugate, subdiff, eval or cq"))),
    }
}

fn conic(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let p: ConicProgram<f64> = match &src {
        Source::File(f) => f.conic().map_err(schema(c))?,
        Source::Example(Example::Conic(p)) => p.clone(),
        Source::Example(_) => return Err(usage("the example is not a conic program")),
    };
    let budget = budget_of(c, &src);
    let grid = grid_of(&src);
    let primal = solve_primal_grid(&p, &grid).map_err(usage)?;
    let dual = solve_lagrangian_dual(&p, &budget, None).map_err(usage)?;
    let fd = fenchel_dual(&p, &budget).map_err(usage)?;
    let mut out = json!({
        "slater": p.slater(),
        "primal": {
            "value": primal.value.map_or(json!("-inf"), real),
            "x": primal.x,
            "infeasible_on_grid": primal.infeasible_on_grid,
            "gap_bound": primal.gap_bound,
        },
        "dual": {
            "value": real(dual.dual_value),
            "multiplier": dual.multiplier_v,
            "attained": dual.attained,
            "certified": dual.certified,
        },
        "fenchel": { "value": real(fd.value), "v": fd.v, "y": fd.y },
        "gap": primal.value.map(|v| real(v - dual.dual_value)),
    });
    if let Some(x) = &c.x {
        let x = numbers(x)?;
        let r = check_optimality(&p, &x).map_err(usage)?;
        let (verdict, multiplier) = match r.verdict {
            OptimalityVerdict::Certified { multiplier } => ("certified", Some(multiplier)),
            OptimalityVerdict::Refuted => ("refuted", None),
            OptimalityVerdict::Unknown => ("unknown", None),
        };
        out["optimality"] = json!({ "x": x, "verdict": verdict, "multiplier": multiplier, "residual": r.residual });
    }
    Ok(out)
}

fn farkas(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let Source::Example(Example::Farkas { instance, .. }) = &src else {
        return Err(usage("farkas runs on built-in instances; pass --example"));
    };
    let r = farkas_alternative(instance, &budget_of(c, &src), &GridSpec::default()).map_err(usage)?;
    Ok(json!({
        "verdict": r.verdict,
        "a_min": r.a_min,
        "a_witness": r.a_witness,
        "b_margin": ext(r.b_margin),
        "certificate": r.certificate,
        "cq": r.cq,
    }))
}

fn matrix_arg(c: &Common, src: &Source, flag: Option<&String>, pick: fn(&problem::QuerySpec) -> Option<Vec<Vec<f64>>>, name: &str) -> Res<Mat<f64>> {
    if let Some(s) = flag {
        return rows(s);
    }
    if let Source::File(p) = src {
        if let Some(m) = p.query.as_ref().and_then(pick) {
            return problem::matrix(&m, &format!("/query/{name}")).map_err(schema(c));
        }
    }
    Err(usage(format!("--{name} is required")))
}

fn mff(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let pair = match &src {
        Source::Example(Example::Mff(p)) => p.clone(),
        Source::Example(_) => return Err(usage("the example is not a matrix-fractional pair")),
        Source::File(_) => {
            let x = matrix_arg(c, &src, c.x.as_ref(), |q| q.x.clone(), "x")?;
            let v = matrix_arg(c, &src, c.v.as_ref(), |q| q.v.clone(), "v")?;
            MatrixPair::new(CMat::real(x), CMat::real(v)).map_err(usage)?
        }
    };
    let image = mff_map(&pair).map(|m| mat(&m.re));
    Ok(json!({ "gamma": ext(mff_gamma(&pair)), "image": image }))
}

fn vgf(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let Source::Example(Example::Vgf { set, cols }) = &src else {
        return Err(usage("vgf runs on built-in sets; pass --example"));
    };
    let set: &VgfSet<f64> = set;
    let x = matrix_arg(c, &src, c.x.as_ref(), |q| q.x.clone(), "x")?;
    if x.rows != set.n {
        return Err(usage(format!("--x needs {} rows (the example uses {cols} columns)", set.n)));
    }
    let op = query_op(c, &src, "all");
    let mut out = json!({ "x": mat(&x) });
    if op == "eval" || op == "all" {
        out["value"] = json!(vgf_eval(set, &x).map_err(usage)?);
    }
    if op == "conjugate" || op == "all" {
        let r = vgf_conjugate(set, &x, &GridSpec::default()).map_err(usage)?;
        out["conjugate"] = json!({ "value": ext(r.value), "v": r.v.as_ref().map(mat), "weights": r.weights, "certified": r.certified });
    }
    if op == "subdiff" || op == "all" {
        out["subdifferential"] = subdiff_json(&vgf_subdifferential(set, &x).map_err(usage)?);
    }
    if !["eval", "conjugate", "subdiff", "all"].contains(&op.as_str()) {
        return Err(usage(format!("unknown vgf query {op:?}; expected eval, conjugate, subdiff or all")));
    }
    Ok(out)
}

fn spectral(c: &Common) -> Res<Value> {
    let src = load(c)?;
    let spec: SpectralSpec<f64> = match &src {
        Source::Example(Example::Spectral(s)) => s.clone(),
        Source::Example(_) => return Err(usage("the example is not a spectral function")),
        Source::File(p) => p.spectral().map_err(schema(c))?,
    };
    let x = matrix_arg(c, &src, c.x.as_ref(), |q| q.x.clone(), "x")?;
    if x.rows != spec.n() || x.cols != spec.n() || x.asymmetry() > 1e-12 {
        return Err(usage(format!("--x must be a symmetric {0}x{0} matrix", spec.n())));
    }
    let op = query_op(c, &src, "all");
    let mut out = json!({ "x": mat(&x) });
    if op == "eval" || op == "all" {
        out["value"] = ext(spectral_eval(&spec, &x).map_err(usage)?);
    }
    if op == "conjugate" || op == "all" {
        out["conjugate"] = spectral_conjugate(&spec, &x).map_or(Value::Null, ext);
    }
    if op == "subdiff" || op == "all" {
        out["subdifferential"] = subdiff_json(&spectral_subdifferential(&spec, &x, None).map_err(usage)?);
    }
    if !["eval", "conjugate", "subdiff", "all"].contains(&op.as_str()) {
        return Err(usage(format!("unknown spectral query {op:?}; expected eval, conjugate, subdiff or all")));
    }
    Ok(out)
}
