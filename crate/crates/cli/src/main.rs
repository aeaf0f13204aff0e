#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lln_tails::bounds::{self, BetaMode, BoundReport, DEFAULT_N_MAX};
use lln_tails::phi::{check_phi_membership, legendre_transform, OverlinePhi};
use lln_tails::scenario::{fmt_f64, run_scenario, Mode, Overrides, Report, ScenarioFile};
use lln_tails::{Error, PhiFunction, TailFunction};

/// `println!` that ignores a closed stdout (e.g. piping into `head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

/// Environment variable naming the default output directory.
const OUT_DIR_ENV: &str = "LLN_TAILS_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "lln-tails",
    version,
    about = "Tail bounds for martingale sums normed by 1/n, with Monte Carlo certification"
)]
struct Cli {
    /// Master seed (overrides the scenario file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo replicas per grid point (overrides the scenario file).
    #[arg(long, global = true)]
    replicas: Option<u64>,
    /// Two-sided confidence of the Clopper–Pearson intervals, in (0, 1).
    #[arg(long, global = true)]
    confidence: Option<f64>,
    /// Worker threads. Affects speed only, never results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory (default: the scenario's, then $LLN_TAILS_OUT_DIR, then `.`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound and print it with its constants.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Run a scenario file and write estimates.
    Simulate { scenario: PathBuf },
    /// Run a scenario file and check that its bound dominates; exit 1 on failure.
    Certify { scenario: PathBuf },
    /// Tabulate φ*(u) and φ̄*(u) over a range of u.
    Conjugate(ConjugateArgs),
}

#[derive(Args)]
struct Point {
    #[arg(long)]
    n: u64,
    #[arg(long, allow_negative_numbers = true)]
    x: f64,
}

#[derive(Subcommand)]
#[command(rename_all = "kebab-case")]
enum BoundCmd {
    /// W[T](x√n) for differences with tails dominated by T.
    #[command(alias = "thm21")]
    WOperator {
        /// weibull:Y,K,q | logmod:C1,C2,K,q,r | pareto:r | subgaussian:sigma
        #[arg(long)]
        tail: TailFunction,
        #[command(flatten)]
        at: Point,
    },
    /// Closed form for tails Y·exp(−(x/K)^q).
    #[command(alias = "ex21")]
    Weibull {
        #[arg(long = "Y")]
        y: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long)]
        q: f64,
        /// Use the numerical sup for β(q) at every q.
        #[arg(long)]
        beta_q_alt: bool,
        #[command(flatten)]
        at: Point,
    },
    /// Closed form for log-modified Weibull tails.
    #[command(alias = "ex22")]
    LogModified {
        #[arg(long = "C1")]
        c1: f64,
        #[arg(long = "C2")]
        c2: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long = "C4")]
        c4: Option<f64>,
        #[command(flatten)]
        at: Point,
    },
    /// Markov bound from the L_p martingale inequality.
    Moment {
        #[arg(long)]
        p: f64,
        /// Comma-separated p-norms, one per difference.
        #[arg(long, value_delimiter = ',', required = true)]
        norms: Vec<f64>,
        #[command(flatten)]
        at: Point,
    },
    /// The moment bound minimised over p in [2, a), for differences bounded by --norm.
    MomentOpt {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        norm: f64,
        #[command(flatten)]
        at: Point,
    },
    /// 2·exp(−φ̄*(x√n)) for conditionally sub-φ differences.
    #[command(alias = "thm41")]
    SubPhi {
        /// quadratic:c | phi-q:q
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u64,
        #[command(flatten)]
        at: Point,
    },
    /// C1·exp(−C2·x^γ·n^{γ/2}); missing constants are calibrated.
    #[command(alias = "ex41")]
    PowerPhi {
        #[arg(long)]
        q: f64,
        #[arg(long = "C1")]
        c1: Option<f64>,
        #[arg(long = "C2")]
        c2: Option<f64>,
        #[command(flatten)]
        at: Point,
    },
    /// Single-difference tail implied by an exponential bound on Q_n(1).
    Inverse {
        #[arg(long = "C1")]
        c1: f64,
        #[arg(long = "C2")]
        c2: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long = "C3")]
        c3: Option<f64>,
        #[arg(long = "C4")]
        c4: Option<f64>,
    },
    /// Single-difference tail implied by a power bound on Q_n(1).
    InversePower {
        #[arg(long = "C")]
        c: f64,
        #[arg(long)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long = "C5")]
        c5: Option<f64>,
    },
}

#[derive(Args)]
struct ConjugateArgs {
    /// quadratic:c | phi-q:q
    #[arg(long)]
    phi: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    u_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    u_max: f64,
    #[arg(long, default_value_t = 51)]
    points: usize,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: u64,
    /// Tabulate even when φ fails the class-Φ checks.
    #[arg(long)]
    allow_nonmember: bool,
    /// Table path (default: <out-dir>/conjugate.csv).
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Exit codes: 0 success, 1 certification failure, 2 input or domain error.
enum Failure {
    Certification,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Certification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Bound(cmd) => {
            print_bound(&eval_bound(cmd)?);
            Ok(())
        }
        Command::Simulate { scenario } => {
            run_file(cli, scenario, Mode::Simulate)?;
            Ok(())
        }
        Command::Certify { scenario } => match run_file(cli, scenario, Mode::Certify)?.passed {
            Some(false) => Err(Failure::Certification),
            _ => Ok(()),
        },
        Command::Conjugate(args) => conjugate(cli, args),
    }
}

fn eval_bound(cmd: &BoundCmd) -> lln_tails::Result<BoundReport> {
    match cmd {
        BoundCmd::WOperator { tail, at } => bounds::w_operator_bound(tail, at.n, at.x),
        BoundCmd::Weibull {
            y,
            k,
            q,
            beta_q_alt,
            at,
        } => {
            let mode = if *beta_q_alt {
                BetaMode::Alt
            } else {
                BetaMode::AsPrinted
            };
            bounds::weibull_bound(*y, *k, *q, at.n, at.x, mode)
        }
        BoundCmd::LogModified {
            c1,
            c2,
            k,
            q,
            r,
            c4,
            at,
        } => bounds::log_modified_bound(*c1, *c2, *k, *q, *r, at.n, at.x, *c4),
        BoundCmd::Moment { p, norms, at } => bounds::moment_bound(*p, at.n, at.x, norms),
        BoundCmd::MomentOpt { a, norm, at } => {
            let len = at.n as usize;
            Ok(bounds::optimized_moment_bound(*a, at.n, at.x, |_| Some(vec![*norm; len]))?.report)
        }
        BoundCmd::SubPhi { phi, n_max, at } => bounds::sub_phi_bound(&PhiFunction::parse(phi)?, at.n, at.x, *n_max),
        BoundCmd::PowerPhi { q, c1, c2, at } => bounds::power_phi_bound(*q, at.n, at.x, *c1, *c2),
        BoundCmd::Inverse { c1, c2, q, x, c3, c4 } => bounds::inverse_tail_bound(*c1, *c2, *q, *x, *c3, *c4),
        BoundCmd::InversePower { c, s, x, c5 } => bounds::inverse_power_bound(*c, *s, *x, *c5),
    }
}

fn print_bound(r: &BoundReport) {
    say!("method: {}", r.method);
    say!("n: {}", r.n);
    say!("x: {}", r.x);
    say!("value: {}", r.value);
    say!("");
    say!("{:<16} {:<26} provenance", "constant", "value");
    for c in &r.parameters {
        say!("{:<16} {:<26} {}", c.name, c.value, c.provenance);
    }
    let defaulted = r.defaulted();
    if !defaulted.is_empty() {
        say!("");
        say!("defaulted: {}", defaulted.join(", "));
    }
    for note in &r.notes {
        say!("note: {note}");
    }
}

fn out_dir(cli: &Cli, file: Option<&ScenarioFile>) -> PathBuf {
    cli.out_dir
        .clone()
        .or_else(|| file.and_then(|f| f.output.dir.clone()))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run_file(cli: &Cli, path: &Path, mode: Mode) -> Result<Report, Failure> {
    let file = ScenarioFile::load(path)?;
    let overrides = Overrides {
        replicas: cli.replicas,
        seed: cli.seed,
        confidence: cli.confidence,
    };
    let report = run_scenario(&file, overrides, mode)?;
    let stem = file
        .output
        .stem
        .clone()
        .or_else(|| file.name.clone())
        .or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "scenario".into());
    let (toml_path, csv_path) = report.write(&out_dir(cli, Some(&file)), &stem)?;

    say!(
        "{:>6} {:>8} {:>12} {:>12} {:>12} {:>6}",
        "n",
        "x",
        "estimate",
        "ci_high",
        "bound",
        "pass"
    );
    for r in &report.records {
        let bound = r.bound.map(|b| format!("{b:.4e}")).unwrap_or_else(|| "-".into());
        let pass = r.pass.map(|p| if p { "yes" } else { "NO" }).unwrap_or("-");
        say!(
            "{:>6} {:>8} {:>12.4e} {:>12.4e} {:>12} {:>6}",
            r.n,
            r.x,
            r.estimate,
            r.ci_high,
            bound,
            pass
        );
    }
    if let Some(s) = &report.scaling {
        say!("");
        say!(
            "scaling fit: exponent {:.4}, slope {:.6}, intercept {:.6}, R² {:.6} (min {})",
            s.fit.exponent,
            s.fit.slope,
            s.fit.intercept,
            s.fit.r_squared,
            s.min_r_squared
        );
        for (a, r2) in &s.fit.alternatives {
            say!("  comparison exponent {a:.4}: R² {r2:.6}");
        }
        say!("  {}", s.caveat);
    }
    for c in &report.defaulted {
        say!("defaulted: {} = {}", c.name, c.value);
    }
    for note in &report.notes {
        say!("note: {note}");
    }
    if let Some(p) = report.passed {
        say!("verdict: {}", if p { "pass" } else { "FAIL" });
    }
    say!("wrote {} and {}", toml_path.display(), csv_path.display());
    Ok(report)
}

fn conjugate(cli: &Cli, args: &ConjugateArgs) -> Result<(), Failure> {
    let phi = PhiFunction::parse(&args.phi)?;
    let membership = check_phi_membership(&phi);
    if !membership.passes() {
        let failed = membership.failures().join(", ");
        if !args.allow_nonmember {
            return Err(Failure::Input(format!(
                "{} is not in class Φ: fails {failed} (pass --allow-nonmember to tabulate anyway)",
                args.phi
            )));
        }
        eprintln!("warning: {} fails {failed}", args.phi);
    }
    if args.points < 2 || !(args.u_max > args.u_min) {
        return Err(Failure::Input("need --points >= 2 and --u-max > --u-min".into()));
    }
    let envelope = OverlinePhi {
        phi: &phi,
        n_max: args.n_max,
    };
    let cell = |r: lln_tails::Result<f64>| -> Result<String, Failure> {
        match r {
            Ok(v) => Ok(fmt_f64(v)),
            Err(Error::NotAttained(_)) => Ok("inf".into()),
            Err(e) => Err(e.into()),
        }
    };
    let mut table = String::from("u,phi_star,phi_bar_star\n");
    for i in 0..args.points {
        let u = args.u_min + (args.u_max - args.u_min) * i as f64 / (args.points - 1) as f64;
        let star = cell(legendre_transform(&phi, u).map(|c| c.value))?;
        let bar = cell(bounds_envelope_conjugate(&phi, &envelope, u))?;
        table.push_str(&format!("{},{star},{bar}\n", fmt_f64(u)));
    }
    let path = match &args.output {
        Some(p) => p.clone(),
        None => out_dir(cli, None).join("conjugate.csv"),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(Error::from)?;
    }
    std::fs::write(&path, &table).map_err(Error::from)?;
    say!("{}", table.trim_end());
    say!("wrote {}", path.display());
    Ok(())
}

/// `φ̄*(u)`, refusing values whose envelope maximiser sits at `n_max`.
fn bounds_envelope_conjugate(
    phi: &PhiFunction,
    envelope: &OverlinePhi<'_, PhiFunction>,
    u: f64,
) -> lln_tails::Result<f64> {
    let c = legendre_transform(envelope, u)?;
    if lln_tails::phi::overline_phi(phi, c.argmax, envelope.n_max)?.boundary_hit {
        return Err(Error::EnvelopeBoundary {
            n_max: envelope.n_max,
            lambda: c.argmax,
        });
    }
    Ok(c.value)
}
