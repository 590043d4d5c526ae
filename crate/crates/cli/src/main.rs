//! `octobohr`: Bohr radii, corpus verification, sharpness probes and sweeps.
//!
//! Exit codes: 0 success, 1 violation found or sharpness not shown,
//! 2 invalid parameters or probe misuse, 3 coefficient condition violated,
//! 4 I/O or data failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use octobohr::corpus::{self, CertificateKind};
use octobohr::verify::{self, BohrParams, TheoremId, VerifyOptions};
use octobohr::{Error, Octonion, SliceSeries};

#[derive(Parser)]
#[command(name = "octobohr", version, about = "Bohr-type inequalities for octonionic slice regular functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the radius of a theorem.
    Radius(RadiusArgs),
    /// Check a theorem on a certified random corpus below its radius.
    Verify(VerifyArgs),
    /// Evaluate the extremal family beyond the radius.
    Sharpness(SharpnessArgs),
    /// Tabulate the largest functional value over a range of radii as CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, value_parser = parse_theorem)]
    theorem: TheoremId,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, default_value_t = 2.0)]
    j: f64,
    /// Coefficients d_1,...,d_N of Q_N.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    d: Vec<f64>,
    #[arg(long, default_value_t = 8.0 / 9.0)]
    beta: f64,
    #[arg(long)]
    a0: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> BohrParams {
        BohrParams {
            m: self.m,
            lambda: self.lambda,
            q: self.q,
            j: self.j,
            d: self.d.clone(),
            beta: self.beta,
            a0: self.a0,
        }
    }
}

fn parse_theorem(s: &str) -> Result<TheoremId, String> {
    s.parse()
}

#[derive(Args)]
struct RadiusArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of corpus entries.
    #[arg(long, default_value_t = 100)]
    corpus: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Number of radii from 0 to the radius, inclusive.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Truncation order of corpus series.
    #[arg(long, default_value_t = corpus::DEFAULT_ORDER)]
    order: usize,
    /// Write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Export the generated corpus as JSON.
    #[arg(long)]
    corpus_out: Option<PathBuf>,
    /// Verify a previously exported corpus instead of generating one.
    #[arg(long, conflicts_with = "corpus")]
    corpus_in: Option<PathBuf>,
}

#[derive(Args)]
struct SharpnessArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Probe radius; defaults to the theorem radius plus 0.01 (the radius itself
    /// for the beta form with beta > 8/9).
    #[arg(long)]
    r: Option<f64>,
    /// Parameter of the extremal family.
    #[arg(long, default_value_t = 0.999)]
    a: f64,
    #[arg(long, default_value_t = corpus::DEFAULT_ORDER)]
    order: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepCorpus {
    /// Certified random corpus plus the extremal at `--a`.
    Certified,
    /// Only the extremal at `--a`.
    Extremal,
    /// Only the constant `--a0` (default 0.7).
    Constant,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 0.0)]
    r_min: f64,
    /// Defaults to twice the radius, capped at 0.95.
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, value_enum, default_value = "certified")]
    corpus_kind: SweepCorpus,
    #[arg(long, default_value_t = 100)]
    corpus: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.999)]
    a: f64,
    #[arg(long, default_value_t = corpus::DEFAULT_ORDER)]
    order: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn io_err(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    if let Some(path) = path {
        let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        fs::write(path, text + "\n").map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

fn cmd_radius(args: &RadiusArgs) -> Result<ExitCode, Failure> {
    let p = args.params.params();
    let a0 = p.a0.unwrap_or(0.0);
    let r = verify::theorem_radius(args.params.theorem, &p, a0)?;
    println!("theorem   {}", args.params.theorem);
    println!("radius    {:.16}", r.value);
    println!("method    {:?}", r.method);
    println!("residual  {:.3e}", r.residual);
    if let Some((lo, hi)) = r.bracket {
        println!("bracket   [{lo:.16}, {hi:.16}]");
    }
    write_json(&args.out, &r)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let theorem = args.params.theorem;
    let p = args.params.params();
    verify::validate_params(theorem, &p)?;
    let opts = VerifyOptions {
        corpus_size: args.corpus,
        seed: args.seed,
        tol: args.tol,
        grid: args.grid,
        order: args.order,
    };
    let entries = match &args.corpus_in {
        Some(path) => corpus::load(path).map_err(|e| io_err(path, e))?,
        None => verify::with_thread_cap(|| verify::corpus_for(theorem, opts.seed, opts.corpus_size, opts.order))?,
    };
    if let Some(path) = &args.corpus_out {
        corpus::save(path, &entries).map_err(|e| io_err(path, e))?;
    }
    let report = verify::verify_corpus(theorem, &p, &opts, &entries)?;
    println!("theorem     {}", report.theorem);
    println!("radius      {:.16} ({:?})", report.radius.value, report.radius.method);
    if report.grid.per_entry_radius {
        println!("grid        {} points per entry, up to its own radius", report.grid.r_values.len());
    } else {
        println!("grid        {} points in [0, radius]", report.grid.r_values.len());
    }
    println!("corpus      {} {:?} entries, seed {}", report.grid.corpus_size, report.grid.corpus_kind, report.grid.corpus_seed);
    println!("max value   {:.15}", report.max_value);
    println!("margin      {:.3e}", report.margin);
    println!("violations  {}", report.violations.len());
    for v in report.violations.iter().take(10) {
        println!("  {} #{} r = {:.6} value = {:.15}", v.provenance.constructor, v.provenance.index, v.r, v.value);
    }
    write_json(&args.out, &report)?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn default_probe_radius(theorem: TheoremId, p: &BohrParams, a: f64) -> Result<f64, Failure> {
    let radius = verify::theorem_radius(theorem, p, a)?.value;
    Ok(if theorem == TheoremId::Theom17 && p.beta > 8.0 / 9.0 {
        radius
    } else {
        radius + 0.01
    })
}

fn cmd_sharpness(args: &SharpnessArgs) -> Result<ExitCode, Failure> {
    let theorem = args.params.theorem;
    let p = args.params.params();
    verify::validate_params(theorem, &p)?;
    let r = match args.r {
        Some(r) => r,
        None => default_probe_radius(theorem, &p, args.a)?,
    };
    let probe = verify::sharpness_probe(theorem, &p, r, args.a, args.order)?;
    println!("theorem   {}", theorem);
    println!("radius    {:.16}", probe.radius);
    println!("r         {:.16}", probe.r);
    println!("a         {}", probe.a);
    println!("value     {:.17}", probe.value.value());
    println!("excess    {:.6e}", probe.excess);
    let shown = probe.demonstrates_sharpness();
    println!("sharpness {}", if shown { "demonstrated" } else { "not demonstrated" });
    write_json(&args.out, &probe)?;
    Ok(if shown { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode, Failure> {
    let theorem = args.params.theorem;
    let p = args.params.params();
    verify::validate_params(theorem, &p)?;
    let series: Vec<SliceSeries<f64>> = match args.corpus_kind {
        SweepCorpus::Certified => {
            let mut s: Vec<_> = verify::with_thread_cap(|| verify::corpus_for(theorem, args.seed, args.corpus, args.order))?
                .into_iter()
                .map(|e| e.series)
                .collect();
            s.push(verify::extremal(theorem, args.a, args.order)?);
            s
        }
        SweepCorpus::Extremal => vec![verify::extremal(theorem, args.a, args.order)?],
        SweepCorpus::Constant => {
            let c = p.a0.unwrap_or(0.7);
            vec![SliceSeries::constant(Octonion::from_real(c))]
        }
    };
    let a0 = match (theorem.certificate(), args.corpus_kind) {
        (CertificateKind::Halfspace, SweepCorpus::Constant) => p.a0.unwrap_or(0.7),
        _ => p.a0.unwrap_or(args.a),
    };
    let radius = verify::theorem_radius(theorem, &p, a0)?.value;
    let r_max = args.r_max.unwrap_or((2.0 * radius).min(0.95));
    if !(0.0..1.0).contains(&args.r_min) || !(args.r_min..1.0).contains(&r_max) {
        return Err(Error::ParameterOutOfRange { name: "r range", value: r_max, range: "0 <= r-min <= r-max < 1" }.into());
    }
    let n = args.grid.max(2);
    let rs: Vec<f64> = (0..n)
        .map(|i| args.r_min + (r_max - args.r_min) * i as f64 / (n - 1) as f64)
        .collect();
    let rows = verify::sweep(theorem, &p, &series, &rs, radius)?;
    let mut w = csv::Writer::from_path(&args.out).map_err(|e| io_err(&args.out, e))?;
    for row in &rows {
        w.serialize(row).map_err(|e| io_err(&args.out, e))?;
    }
    w.flush().map_err(|e| io_err(&args.out, e))?;
    println!("wrote {} rows to {} (radius {:.16})", rows.len(), args.out.display(), radius);
    Ok(ExitCode::SUCCESS)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::LConditionViolated { .. } => 3,
        Error::Corpus(_) | Error::Serde(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Radius(a) => cmd_radius(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sharpness(a) => cmd_sharpness(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Lib(e)) => {
            if let Error::LConditionViolated { l_value, m } = &e {
                println!("L = {l_value}");
                println!("m = {m}");
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
