//! Command-line front end: argument parsing, effective configuration,
//! report output and exit codes (0 all checks pass, 1 a check failed,
//! 2 usage or input error).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::acceptance::{run_suite, AcceptConfig};
use crate::bounds::{barta_bounds, certificate, mckean_report, random_test_field, BartaOptions};
use crate::comparison::{
    bishop_check, bracket_positivity, cheng_corpus, corpus_params, random_warp_on, stability_check,
    submanifold_bound_check, trial_seed, write_corpus_csv, wronskian_negativity, A2Data, CorpusSpec, StabilityInput,
    StabilityVerdict,
};
use crate::domain::{build_polar_domain, DiscreteDomain};
use crate::error::{Error, Result};
use crate::quasilinear::{
    blowup_solution, solvability_gate, solve_dirichlet, BoundaryData, EllipticProblem, Gate, ProblemSpec, QLStatus,
    DEFAULT_GATE_TOL,
};
use crate::radial::{model_ball_lambda1_on, warped_ball_lambda1, RadialEigenResult};
use crate::report::{emit_reports, write_index, Params, Report, Verdict};
use crate::spaceform::ModelBall;
use crate::warp::WarpProfile;

/// Environment variable that overrides `--out`.
pub const OUT_DIR_ENV: &str = "TONELAB_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "tonelab", version, about = "Fundamental-tone bounds and comparison checks")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Opts {
    /// Curvature of the model space.
    #[arg(long, global = true, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Dimension of the ball.
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Dimension of the minimal submanifold (mu).
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Ball radius.
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Radial cells.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Angular cells of 2-D grids.
    #[arg(long, global = true)]
    n_theta: Option<usize>,
    /// Solver tolerance (eigenvalue bracket or residual, per command).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials or random fields per sweep.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Forcing amplitude of random warps.
    #[arg(long, global = true)]
    roughness: Option<f64>,
    /// Output directory for reports (overridden by TONELAB_OUT_DIR).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format of the report printed to stdout.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First eigenvalue of a model ball.
    Model,
    /// First eigenvalue of a warped ball (seeded random warp or a CSV profile).
    Warped {
        /// CSV with columns t, f, df, d2f on a uniform grid starting at 0.
        #[arg(long)]
        warp: Option<PathBuf>,
    },
    /// Barta bounds from seeded random test fields on a polar grid.
    Barta,
    /// Vector-field certificate X0 = -grad log v on a polar grid.
    Vfield,
    /// Hyperbolic ball eigenvalue against (n-1)^2/4.
    Mckean,
    /// Eigenvalue comparison on a seeded warp corpus.
    Cheng,
    /// Volume-density monotonicity on a seeded warp corpus.
    Bishop,
    /// Wronskian negativity and bracket positivity.
    Mu,
    /// Catenoid piece against the flat disk.
    Catenoid,
    /// Stability criterion sup |A|^2 <= lambda1(flat ball).
    Stability {
        #[arg(long, default_value_t = 2.0)]
        sup_a2: f64,
    },
    /// Dirichlet problem for Lap u - |grad u|^2 = F.
    Elliptic {
        #[command(subcommand)]
        action: EllipticAction,
    },
    /// The full acceptance suite.
    Accept,
}

#[derive(Debug, Clone, Args, Serialize)]
struct EllipticArgs {
    /// Problem file (JSON); overrides the grid flags.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Constant right-hand side F.
    #[arg(long = "forcing", visible_alias = "F", allow_negative_numbers = true)]
    forcing: Option<f64>,
    /// Constant boundary value.
    #[arg(long, allow_negative_numbers = true)]
    psi: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum EllipticAction {
    Solve(EllipticArgs),
    Gate(EllipticArgs),
    Blowup(EllipticArgs),
}

/// Effective configuration after defaults; echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub c: f64,
    pub dim: usize,
    pub m: usize,
    pub radius: f64,
    pub grid: usize,
    pub n_theta: usize,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    pub roughness: f64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Params::is_empty")]
    pub extra: Params,
}

struct Defaults {
    c: f64,
    radius: f64,
    grid: usize,
    tol: f64,
}

fn defaults(command: &Command) -> Defaults {
    let d = |c, radius, grid, tol| Defaults { c, radius, grid, tol };
    match command {
        Command::Model | Command::Warped { .. } => d(0.0, 1.0, 4096, 1e-10),
        Command::Mckean => d(-1.0, 50.0, 4096, 1e-10),
        Command::Barta | Command::Vfield => d(0.0, 1.0, 128, 1e-8),
        Command::Cheng | Command::Bishop => d(0.0, 1.0, 1024, 1e-8),
        Command::Mu => d(0.0, 1.0, 4096, 1e-12),
        Command::Catenoid => d(0.0, 1.5, 1024, 1e-3),
        Command::Stability { .. } => d(0.0, 1.5, 512, 1e-8),
        Command::Elliptic { .. } => d(0.0, 1.0, 256, 1e-4),
        Command::Accept => d(0.0, 1.0, 0, 0.0),
    }
}

fn command_name(command: &Command) -> String {
    match command {
        Command::Model => "model".into(),
        Command::Warped { .. } => "warped".into(),
        Command::Barta => "barta".into(),
        Command::Vfield => "vfield".into(),
        Command::Mckean => "mckean".into(),
        Command::Cheng => "cheng".into(),
        Command::Bishop => "bishop".into(),
        Command::Mu => "mu".into(),
        Command::Catenoid => "catenoid".into(),
        Command::Stability { .. } => "stability".into(),
        Command::Elliptic { action } => match action {
            EllipticAction::Solve(_) => "elliptic solve".into(),
            EllipticAction::Gate(_) => "elliptic gate".into(),
            EllipticAction::Blowup(_) => "elliptic blowup".into(),
        },
        Command::Accept => "accept".into(),
    }
}

impl RunConfig {
    fn resolve(opts: &Opts, command: &Command, env_out: Option<PathBuf>) -> Self {
        let d = defaults(command);
        RunConfig {
            command: command_name(command),
            c: opts.c.unwrap_or(d.c),
            dim: opts.dim.unwrap_or(2),
            m: opts.m.unwrap_or(2),
            radius: opts.radius.unwrap_or(d.radius),
            grid: opts.grid.unwrap_or(d.grid),
            n_theta: opts.n_theta.unwrap_or(16),
            tol: opts.tol.unwrap_or(d.tol),
            seed: opts.seed.unwrap_or(7),
            trials: opts.trials.unwrap_or(50),
            roughness: opts.roughness.unwrap_or(1.0),
            format: opts.format.unwrap_or(Format::Json),
            out: env_out.or_else(|| opts.out.clone()),
            extra: Params::new(),
        }
    }
}

/// What a command produced: reports, optional CSV tables (file name and
/// contents) and human-readable lines.
#[derive(Default)]
struct Output {
    reports: Vec<Report>,
    tables: Vec<(String, Vec<u8>)>,
    lines: Vec<String>,
}

impl Output {
    fn push(&mut self, report: Report) {
        self.lines.push(format!("{}: {} (margin {:.6e})", report.check, report.verdict, report.margin));
        self.reports.push(report);
    }

    fn table(&mut self, name: &str, write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        write(&mut buf)?;
        self.tables.push((name.to_string(), buf));
        Ok(())
    }
}

fn radial_report(check: &str, tag: &str, res: &RadialEigenResult, params: Params) -> Report {
    let params = params.with("cells", res.n_cells).with("tol", res.tol);
    Report::new(check, tag, params, res.lambda1, Verdict::from_bool(res.monotone && res.lambda1 > 0.0)).with_detail(res)
}

fn polar_disk(cfg: &RunConfig) -> Result<DiscreteDomain> {
    ModelBall::new(cfg.c, 2, cfg.radius)?;
    build_polar_domain(&WarpProfile::from_model(cfg.c, cfg.radius, cfg.grid)?, cfg.grid, cfg.n_theta)
}

fn read_warp(path: &Path) -> Result<WarpProfile> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let (mut t, mut f, mut df, mut d2f) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for row in rdr.deserialize::<(f64, f64, f64, f64)>() {
        let row = row.map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        t.push(row.0);
        f.push(row.1);
        df.push(row.2);
        d2f.push(row.3);
    }
    let r = *t.last().ok_or_else(|| Error::InvalidInput(format!("{} has no rows", path.display())))?;
    WarpProfile::from_samples(r, f, df, d2f)
}

fn corpus(cfg: &RunConfig) -> CorpusSpec {
    CorpusSpec {
        c: cfg.c,
        n: cfg.dim,
        r: cfg.radius,
        roughness: cfg.roughness,
        trials: cfg.trials,
        cells: cfg.grid,
        tol: cfg.tol,
    }
}

fn elliptic(cfg: &mut RunConfig, action: &EllipticAction, out: &mut Output) -> Result<()> {
    let (EllipticAction::Solve(args) | EllipticAction::Gate(args) | EllipticAction::Blowup(args)) = action;
    cfg.extra.insert("elliptic", args);
    let (domain, spec) = match &args.problem {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            let spec = ProblemSpec::from_json(&text)?;
            cfg.extra.insert("problem", &spec);
            (spec.domain.build()?, Some(spec))
        }
        None => (polar_disk(cfg)?, None),
    };
    let d = &domain;
    let lambda1 = d.ground_state()?.lambda;
    let problem = match &spec {
        Some(s) => s.problem(d)?,
        None => EllipticProblem::constant(d, args.forcing.unwrap_or(0.0), args.psi.unwrap_or(0.0))?,
    };
    let params = Params::new().with("grid", d.grid()).with("lambda1", lambda1);
    match action {
        EllipticAction::Gate(_) => {
            let g = solvability_gate(&problem, DEFAULT_GATE_TOL)?;
            out.lines.push(format!("gate: {:?} (sup F = {:.6}, lambda1 = {:.6})", g.gate, g.sup_f, g.lambda1));
            out.push(
                Report::new("elliptic_gate", "elliptic_gate", params, g.lambda1 - g.sup_f, Verdict::Pass)
                    .with_detail(g),
            );
        }
        EllipticAction::Solve(_) => {
            let g = solvability_gate(&problem, DEFAULT_GATE_TOL)?;
            if g.gate != Gate::Solvable {
                out.lines.push(format!("gate is {:?}; no solve attempted", g.gate));
                out.push(
                    Report::new("elliptic_solve", "elliptic_solve", params, g.lambda1 - g.sup_f, Verdict::Fail)
                        .with_detail(json!({"gate": g})),
                );
                return Ok(());
            }
            let s = solve_dirichlet(&problem, cfg.tol)?;
            out.lines.push(format!("status {:?}, residual {:.3e}, min f {:.6}", s.status, s.residual, s.min_f));
            let verdict = Verdict::from_bool(s.status == QLStatus::Converged);
            out.table("elliptic_solve_field.csv", |w| s.write_csv(d, w))?;
            out.push(
                Report::new("elliptic_solve", "elliptic_solve", params, cfg.tol - s.residual, verdict)
                    .with_detail(json!({"gate": g, "solution": s})),
            );
        }
        EllipticAction::Blowup(_) => {
            if spec.is_some() && problem.psi != BoundaryData::BlowUp {
                return Err(Error::InvalidInput("blowup needs psi = \"blow_up\" in the problem file".into()));
            }
            let (s, l) = blowup_solution(d, 1, cfg.tol.max(1e-2))?;
            out.lines
                .push(format!("u = -log phi1 with F = lambda1 = {l:.8}; defect {:.3e} beyond one cell", s.residual));
            let verdict = Verdict::from_bool(s.status == QLStatus::Converged);
            out.table("elliptic_blowup_field.csv", |w| s.write_csv(d, w))?;
            out.push(
                Report::new("elliptic_blowup", "elliptic_blowup", params, cfg.tol.max(1e-2) - s.residual, verdict)
                    .with_detail(s),
            );
        }
    }
    Ok(())
}

fn dispatch(cfg: &mut RunConfig, command: &Command) -> Result<Output> {
    let mut out = Output::default();
    match command {
        Command::Model => {
            let ball = ModelBall::new(cfg.c, cfg.dim, cfg.radius)?;
            let res = model_ball_lambda1_on(&ball, cfg.grid, cfg.tol)?;
            out.lines.push(format!("lambda1 = {:.12}", res.lambda1));
            out.table("model_profile.csv", |w| res.write_csv(w))?;
            let p = Params::new().with("c", cfg.c).with("n", cfg.dim).with("r", cfg.radius);
            out.push(radial_report("model_ball", "model_eigenvalue", &res, p));
        }
        Command::Warped { warp } => {
            let profile = match warp {
                Some(path) => read_warp(path)?,
                None => {
                    ModelBall::new(cfg.c, cfg.dim, cfg.radius)?;
                    random_warp_on(cfg.c, cfg.radius, cfg.seed, cfg.roughness, cfg.grid)?
                }
            };
            let res = warped_ball_lambda1(&profile, cfg.dim, cfg.tol)?;
            out.lines.push(format!("lambda1 = {:.12}", res.lambda1));
            out.table("warped_profile.csv", |w| res.write_csv(w))?;
            let p = Params::new()
                .with("n", cfg.dim)
                .with("r", profile.radius())
                .with("source", warp.as_ref().map_or("seeded", |_| "file"));
            let mut rep = radial_report("warped_ball", "warped_eigenvalue", &res, p);
            if warp.is_none() {
                rep = rep.with_seed(cfg.seed);
            }
            out.push(rep);
        }
        Command::Barta => {
            let d = polar_disk(cfg)?;
            let mut rows = Vec::new();
            let mut verdict = Verdict::Pass;
            let mut margin = f64::INFINITY;
            for k in 0..cfg.trials {
                let seed = trial_seed(cfg.seed, k as u64);
                let b = barta_bounds(&d, &random_test_field(&d, seed), &BartaOptions::default())?;
                verdict = verdict.and(b.verdict);
                margin = margin.min(b.margin());
                rows.push((seed, b));
            }
            out.table("barta_trials.csv", |w| {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["seed", "lower", "upper", "lambda1", "verdict"])?;
                for (seed, b) in &rows {
                    let upper = b.upper.map_or("inf".to_string(), |u| format!("{u:e}"));
                    csv.write_record([
                        seed.to_string(),
                        format!("{:e}", b.lower),
                        upper,
                        format!("{:e}", b.lambda1),
                        b.verdict.to_string(),
                    ])?;
                }
                csv.flush()?;
                Ok(())
            })?;
            let bounds: Vec<_> = rows.into_iter().map(|r| r.1).collect();
            let p = Params::new().with("grid", d.grid()).with("fields", cfg.trials);
            out.push(Report::new("barta", "barta", p, margin, verdict).with_seed(cfg.seed).with_detail(bounds));
        }
        Command::Vfield => {
            let d = polar_disk(cfg)?;
            let cert = certificate(&d, 0)?;
            let radial = model_ball_lambda1_on(&ModelBall::new(cfg.c, 2, cfg.radius)?, 4096, 1e-11)?.lambda1;
            let gap = (cert.lower - radial).abs();
            out.lines.push(format!(
                "inf(div X0 - |X0|^2) = {:.10}, discrete lambda1 = {:.10}, continuum gap {gap:.3e}",
                cert.lower, cert.lambda1
            ));
            let p = Params::new().with("continuum_lambda1", radial).with("continuum_gap", gap);
            out.push(Report::new("vfield", "vector_field", p, cert.margin(), cert.verdict).with_detail(cert));
        }
        Command::Mckean => {
            let (rep, _) = mckean_report(cfg.dim, cfg.radius, cfg.tol)?;
            out.lines.push(format!("lambda1 = {:.10}, (n-1)^2/4 = {}", rep.lambda1, rep.lower));
            out.push(Report::new("mckean", "mckean", Params::new(), rep.margin_lower, rep.verdict).with_detail(rep));
        }
        Command::Cheng => {
            let spec = corpus(cfg);
            let rows = cheng_corpus(&spec, cfg.seed)?;
            let ok = rows.iter().filter(|r| r.verdict.passed()).count();
            let margin = rows.iter().map(|r| r.cheng_margin).fold(f64::INFINITY, f64::min);
            out.lines.push(format!("{ok}/{} warps pass", rows.len()));
            out.table("cheng_corpus.csv", |w| write_corpus_csv(&rows, w))?;
            let verdict = Verdict::from_bool(ok == rows.len());
            out.push(
                Report::new("cheng", "cheng", corpus_params(&spec, cfg.seed), margin, verdict)
                    .with_seed(cfg.seed)
                    .with_detail(rows),
            );
        }
        Command::Bishop => {
            let spec = corpus(cfg);
            let mut reports = Vec::with_capacity(spec.trials);
            for k in 0..spec.trials {
                let seed = trial_seed(cfg.seed, k as u64);
                let warp = random_warp_on(spec.c, spec.r, seed, spec.roughness, spec.cells)?;
                reports.push((seed, bishop_check(&warp, spec.c, spec.n, spec.tol)?));
            }
            let ok = reports.iter().filter(|r| r.1.verdict.passed()).count();
            let margin = reports.iter().map(|r| r.1.min_ratio_slope).fold(f64::INFINITY, f64::min);
            out.lines.push(format!("{ok}/{} warps monotone, min slope {margin:.3e}", reports.len()));
            out.table("bishop_corpus.csv", |w| {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["seed", "c", "margin", "verdict"])?;
                for (seed, r) in &reports {
                    csv.write_record([
                        seed.to_string(),
                        r.c.to_string(),
                        format!("{:e}", r.min_ratio_slope),
                        r.verdict.to_string(),
                    ])?;
                }
                csv.flush()?;
                Ok(())
            })?;
            let verdict = Verdict::from_bool(ok == reports.len());
            let detail: Vec<_> = reports.into_iter().map(|r| r.1).collect();
            out.push(
                Report::new("bishop", "bishop", corpus_params(&spec, cfg.seed), margin, verdict)
                    .with_seed(cfg.seed)
                    .with_detail(detail),
            );
        }
        Command::Mu => {
            let w = wronskian_negativity(cfg.c, cfg.m, cfg.radius, cfg.grid, cfg.tol)?;
            let b = bracket_positivity(cfg.c, cfg.m, w.lambda1, cfg.radius, cfg.grid)?;
            out.lines.push(format!(
                "min margin {:.6e} (max W {:.6e}, max key {:.6e}, bracket min {:.6e})",
                w.margin(),
                w.max_w,
                w.max_key,
                b.min
            ));
            let p = Params::new().with("c", cfg.c).with("m", cfg.m).with("r", cfg.radius).with("cells", cfg.grid);
            let verdict = w.verdict.and(b.verdict);
            out.push(
                Report::new("mu", "wronskian", p, w.margin().min(b.min), verdict)
                    .with_detail(json!({"wronskian": w, "bracket": b})),
            );
        }
        Command::Catenoid => {
            let rep = submanifold_bound_check(cfg.radius, cfg.grid, Some(cfg.n_theta))?;
            out.lines.push(format!("lambda1(catenoid) = {:.8} >= {:.8}", rep.lambda_surface, rep.bound));
            let p = Params::new().with("r", cfg.radius).with("cells", cfg.grid).with("n_theta", cfg.n_theta);
            out.push(Report::new("catenoid", "submanifold_bound", p, rep.margin, rep.verdict).with_detail(rep));
        }
        Command::Stability { sup_a2 } => {
            cfg.extra.insert("sup_a2", sup_a2);
            let rep =
                stability_check(&StabilityInput { n: cfg.dim, r: cfg.radius, a2: A2Data::Sup(*sup_a2) }, cfg.grid)?;
            out.lines.push(format!("{:?}: sup |A|^2 = {} vs lambda1 = {:.8}", rep.verdict, rep.sup_a2, rep.threshold));
            let consistent = rep.verdict != StabilityVerdict::Stable || rep.operator_min_eigenvalue > 0.0;
            let p = Params::new().with("n", cfg.dim).with("r", cfg.radius).with("classification", rep.verdict);
            out.push(
                Report::new("stability", "stability", p, rep.margin, Verdict::from_bool(consistent)).with_detail(rep),
            );
        }
        Command::Elliptic { action } => elliptic(cfg, action, &mut out)?,
        Command::Accept => {
            let acfg = AcceptConfig { seed: cfg.seed, trials: cfg.trials, ..AcceptConfig::default() };
            let outcomes = run_suite(&acfg, |o| eprintln!("{}", o.line()));
            for o in &outcomes {
                out.reports.push(o.report(&acfg));
            }
        }
    }
    Ok(out)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::Overflow { .. } | Error::IterationCap { .. } | Error::Singular(_) => 1,
        _ => 2,
    }
}

fn write_outputs(dir: &Path, out: &Output) -> Result<()> {
    emit_reports(dir, &out.reports)?;
    for (name, bytes) in &out.tables {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let env_out = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let mut cfg = RunConfig::resolve(&cli.opts, &cli.command, env_out);
    let out = match dispatch(&mut cfg, &cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let config = serde_json::to_value(&cfg).unwrap_or_default();
    let reports: Vec<Report> = out.reports.iter().cloned().map(|r| r.with_config(&config)).collect();
    let out = Output { reports, ..out };

    for line in &out.lines {
        eprintln!("{line}");
    }
    let body = match cfg.format {
        Format::Json if out.reports.len() == 1 => Ok((out.reports[0].to_json() + "\n").into_bytes()),
        Format::Json => Ok((serde_json::to_string_pretty(&out.reports).unwrap_or_default() + "\n").into_bytes()),
        Format::Csv => match out.tables.first() {
            Some((_, bytes)) => Ok(bytes.clone()),
            None => {
                let mut buf = Vec::new();
                write_index(&out.reports, &mut buf).map(|_| buf)
            }
        },
    };
    let printed = body.and_then(|b| {
        let mut stdout = std::io::stdout().lock();
        match stdout.write_all(&b).and_then(|_| stdout.flush()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::from(e)),
            _ => Ok(()),
        }
    });
    if let Err(e) = printed {
        eprintln!("error: {e}");
        return 2;
    }
    if let Some(dir) = &cfg.out {
        if let Err(e) = write_outputs(dir, &out) {
            eprintln!("error: {e}");
            return 2;
        }
    }
    if out.reports.iter().all(|r| r.verdict.passed()) {
        0
    } else {
        1
    }
}
