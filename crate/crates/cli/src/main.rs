use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use axial::algfile::AlgebraFile;
use axial::analysis;
use axial::catalog;
use axial::engine::{EngineOptions, Status};
use axial::job::JobConfig;
use axial::linalg::Rat;
use axial::permgroup::{GroupAction, Perm};
use axial::pipeline::{self, Summary};
use clap::{Args, Parser, Subcommand};
use log::{info, warn};

const USAGE: u8 = 1;
const PARSE: u8 = 2;
const VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "axial", version, about = "Construct and check axial algebras from permutation groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the tau-map classes and shapes of a job.
    Enumerate {
        job: PathBuf,
        #[arg(long)]
        normalizer_file: Option<PathBuf>,
    },
    /// Build the algebras of a job and write them with their reports.
    Build(BuildArgs),
    /// Check a stored algebra file.
    Verify { file: PathBuf },
    /// Print the dihedral catalog in the algebra file format.
    Catalog {
        /// Only this algebra (for example 4B).
        name: Option<String>,
        /// Write one file per algebra into this directory instead.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BuildArgs {
    job: PathBuf,
    #[arg(long)]
    max_expansions: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Wall-clock budget per shape in seconds.
    #[arg(long)]
    time_budget: Option<u64>,
    #[arg(long, value_parser = on_off)]
    fix_trick: Option<bool>,
    #[arg(long, value_parser = on_off)]
    partial_expand: Option<bool>,
    #[arg(long)]
    normalizer_file: Option<PathBuf>,
    /// Worker threads over the (tau, shape) pairs.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Directory for the finished algebra files.
    #[arg(long, default_value = "axial-out")]
    out: PathBuf,
    /// Do not write algebra files.
    #[arg(long)]
    no_write: bool,
    /// Compute over the rationals throughout instead of modulo primes.
    #[arg(long)]
    exact: bool,
    /// Print the report line under each summary line.
    #[arg(long)]
    report: bool,
}

fn on_off(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

/// An error with the exit code it maps to.
struct Fail(u8, String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Cmd::Enumerate { job, normalizer_file } => enumerate(&job, normalizer_file.as_deref()),
        Cmd::Build(args) => build(&args),
        Cmd::Verify { file } => verify(&file),
        Cmd::Catalog { name, out } => dump_catalog(name.as_deref(), out.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(USAGE, format!("{}: {e}", path.display())))
}

fn load_job(path: &Path) -> Result<JobConfig, Fail> {
    JobConfig::parse(&read(path)?).map_err(|e| Fail(PARSE, format!("{}: {e}", path.display())))
}

/// Normaliser generators from a file of permutation lines (`gen ` prefix
/// optional, `#` comments).
fn read_normalizer_file(path: &Path, n: usize) -> Result<Vec<Perm>, Fail> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        let line = line.strip_prefix("gen").map_or(line, str::trim);
        if line.is_empty() {
            continue;
        }
        let p = Perm::from_str(line).map_err(|e| Fail(PARSE, format!("{}: line {}: {e}", path.display(), i + 1)))?;
        if p.degree() != n {
            return Err(Fail(PARSE, format!("{}: line {}: permutation does not act on {n} points", path.display(), i + 1)));
        }
        out.push(p);
    }
    Ok(out)
}

/// The normaliser, from the file if given, else from the cache directory in
/// `AXIAL_CACHE_DIR`, else computed (and then cached).
fn normalizer(cfg: &mut JobConfig, g: &GroupAction, file: Option<&Path>) -> Result<Option<GroupAction>, Fail> {
    if let Some(f) = file {
        cfg.normalizer_gens = read_normalizer_file(f, g.degree())?;
    }
    let cache = std::env::var_os("AXIAL_CACHE_DIR").filter(|_| cfg.normalizer_gens.is_empty()).map(PathBuf::from);
    let key = cache.as_ref().map(|dir| {
        let text: Vec<String> = g.generators().iter().map(|p| p.to_string()).collect();
        let text = text.join("\n");
        (dir.join(format!("normalizer-{:016x}.txt", fnv1a(text.as_bytes()))), text)
    });
    if let Some((path, gens_text)) = &key {
        if let Ok(stored) = fs::read_to_string(path) {
            if let Some(rest) = stored.strip_prefix(&format!("{gens_text}\n--\n")) {
                let gens: Result<Vec<Perm>, _> = rest.lines().map(Perm::from_str).collect();
                if let Ok(gens) = gens {
                    info!("normaliser read from {}", path.display());
                    cfg.normalizer_gens = gens;
                }
            }
        }
    }
    let norm = pipeline::normalizer(cfg, g);
    if let (Some((path, gens_text)), Some(n)) = (&key, &norm) {
        if cfg.normalizer_gens.is_empty() {
            let body: Vec<String> = n.generators().iter().map(|p| p.to_string()).collect();
            let _ = fs::create_dir_all(path.parent().unwrap());
            if let Err(e) = fs::write(path, format!("{gens_text}\n--\n{}\n", body.join("\n"))) {
                warn!("could not write {}: {e}", path.display());
            }
        }
    }
    Ok(norm)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf29ce484222325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

fn enumerate(job: &Path, normalizer_file: Option<&Path>) -> Result<(), Fail> {
    let mut cfg = load_job(job)?;
    let g = cfg.group();
    let norm = normalizer(&mut cfg, &g, normalizer_file)?;
    let text = pipeline::listing(&cfg, &g, norm.as_ref()).map_err(|e| Fail(PARSE, e.to_string()))?;
    print!("{text}");
    Ok(())
}

fn build(args: &BuildArgs) -> Result<(), Fail> {
    let mut cfg = load_job(&args.job)?;
    let mut opts = pipeline::options(&cfg, EngineOptions::default());
    if let Some(x) = args.max_expansions {
        opts.max_expansions = x;
    }
    if let Some(x) = args.max_dim {
        opts.max_dim = x;
    }
    if let Some(x) = args.fix_trick {
        opts.fix_trick = x;
    }
    if let Some(x) = args.partial_expand {
        opts.partial_expand = x;
    }
    if let Some(s) = args.time_budget {
        opts.time_budget = Some(Duration::from_secs(s));
    }
    opts.exact |= args.exact;
    let g = cfg.group();
    let norm = normalizer(&mut cfg, &g, args.normalizer_file.as_deref())?;
    let plan = pipeline::plan(&cfg, &g, norm.as_ref()).map_err(|e| Fail(PARSE, e.to_string()))?;
    if !args.no_write {
        fs::create_dir_all(&args.out).map_err(|e| Fail(USAGE, format!("{}: {e}", args.out.display())))?;
    }
    let mut failed = Vec::new();
    let mut write_err = None;
    pipeline::build_all(&cfg, &g, &plan, &opts, args.jobs.max(1), |r| {
        println!("{}", r.line(&cfg));
        if args.report {
            if let Some(rep) = r.report() {
                println!("  {rep}");
            }
        }
        if let Some(s) = &r.summary {
            for f in &s.failures {
                eprintln!("{} tau#{} {}: {f}", cfg.name, r.tau_index, r.label);
            }
            if !s.failures.is_empty() {
                failed.push(r.label.clone());
            }
        }
        if r.result.status != Status::Completed {
            if let Some(why) = &r.result.stats.reason {
                info!("{} tau#{} {}: {why}", cfg.name, r.tau_index, r.label);
            }
        }
        if args.no_write {
            return;
        }
        if let Some(file) = r.algebra_file(&cfg) {
            let name = format!("{}_{}_tau{}_{}.alg", cfg.name, cfg.orbit_label(), r.tau_index, r.label);
            let path = args.out.join(name.replace(['/', ' '], "_"));
            match fs::write(&path, file.dump()) {
                Ok(()) => info!("wrote {}", path.display()),
                Err(e) => write_err = Some(format!("{}: {e}", path.display())),
            }
        }
    });
    if let Some(e) = write_err {
        return Err(Fail(USAGE, e));
    }
    if !failed.is_empty() {
        return Err(Fail(VIOLATION, format!("checks failed for {}", failed.join(" "))));
    }
    Ok(())
}

fn verify(path: &Path) -> Result<(), Fail> {
    let text = read(path)?;
    let file = AlgebraFile::parse(&text).map_err(|e| Fail(PARSE, format!("{}: {e}", path.display())))?;
    let alg = &file.algebra;
    let group0 = file.tau.as_ref().map(|t| t.miyamoto_group());
    // A stored form is checked as it is; otherwise one is solved for with
    // (a, a) = 1.
    let values: Vec<Rat> = if file.form.is_some() { Vec::new() } else { vec![Rat::one(); alg.axes().len()] };
    let mut summary = Summary::of(alg, &vec![Rat::one(); alg.axes().len()], group0.as_ref(), file.tau.as_ref());
    if let Some(g) = &file.form {
        summary.failures = analysis::check_properties(alg, group0.as_ref(), file.tau.as_ref(), Some(g), &values);
        summary.form = analysis::FormResult::from_gram(g.clone());
    }
    if let Some(m) = file.marked {
        if let Err(v) = catalog::check_user_algebra(alg, m) {
            summary.failures.push(format!("as a two-generated algebra: {v}"));
        }
    }
    let report = summary.report();
    if let Some(stored) = &file.report {
        if !stored.starts_with(&report) {
            summary.failures.push(format!("stored report {stored:?} does not match {report:?}"));
        }
    }
    println!("{} {report}", file.name);
    if summary.failures.is_empty() {
        println!("ok");
        Ok(())
    } else {
        for f in &summary.failures {
            println!("violation: {f}");
        }
        Err(Fail(VIOLATION, format!("{} failed verification", path.display())))
    }
}

fn dump_catalog(name: Option<&str>, out: Option<&Path>) -> Result<(), Fail> {
    let all = match name {
        Some(n) => vec![catalog::get(n).map_err(|e| Fail(USAGE, e.to_string()))?.clone()],
        None => catalog::all(),
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Fail(USAGE, format!("{}: {e}", dir.display())))?;
    }
    for d in &all {
        let text = AlgebraFile::from_catalog(d).dump();
        match out {
            Some(dir) => {
                let path = dir.join(format!("{}.alg", d.name));
                fs::write(&path, text).map_err(|e| Fail(USAGE, format!("{}: {e}", path.display())))?;
            }
            None => print!("{text}"),
        }
    }
    Ok(())
}
