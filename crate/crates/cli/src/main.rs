use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use radcount::cache::{audit_selected, cache_key, Cache, CacheRecord, CACHE_ENV};
use radcount::count::{count_mode, naive_pair_count, CountOptions, CountResult, DEFAULT_BUDGET};
use radcount::lab::{fit_counts, screen_conjectures};
use radcount::quiver::quiver_to_json;
use radcount::verify::{run_suite, Suite, VerifyConfig};
use radcount::{a3_count_poly, canonical_hash, dispatch_count, normalize, parse_quiver, Engine, Error, Mode};
use radcount::{Quiver, SummandVector};

const JOBS_ENV: &str = "RADCOUNT_JOBS";

#[derive(Parser)]
#[command(name = "radcount", version, about = "Exact counts of commuting pairs in radicals of quiver endomorphism algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count commuting pairs.
    Count(CountArgs),
    /// Reduce a quiver with count-preserving rewrites.
    Reduce(ReduceArgs),
    /// Interpolate counts as a polynomial in q.
    Poly(PolyArgs),
    /// Run a randomized self-check suite.
    Verify(VerifyArgs),
    /// Print the closed-form count of the A3 shape l -> d -> m.
    Formula(FormulaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Radical,
    Overline,
    Weakened,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Brute,
    Dispatch,
    Naive,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Brute => Engine::Brute,
            EngineArg::Dispatch => Engine::Dispatch,
            EngineArg::Naive => Engine::Naive,
        }
    }
}

#[derive(Args)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "radical")]
    mode: ModeArg,
    /// Radical power of the pair space (weakened mode).
    #[arg(long)]
    l: Option<usize>,
    /// Radical power the commutator must lie in (weakened mode).
    #[arg(long)]
    m: Option<usize>,
}

impl ModeArgs {
    fn mode(&self) -> Result<Mode, Error> {
        match self.mode {
            ModeArg::Radical => Ok(Mode::Radical),
            ModeArg::Overline => Ok(Mode::Overline),
            ModeArg::Weakened => match (self.l, self.m) {
                (Some(l), Some(m)) => Ok(Mode::Weakened { l, m }),
                _ => Err(Error::Invalid("weakened mode needs --l and --m".into())),
            },
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Worker threads (default: available parallelism, or RADCOUNT_JOBS).
    #[arg(long)]
    jobs: Option<usize>,
    /// Largest number of vectors to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Suppress progress reports on stderr.
    #[arg(long)]
    quiet: bool,
}

impl RunArgs {
    fn options(&self) -> CountOptions {
        let jobs = self
            .jobs
            .or_else(|| std::env::var(JOBS_ENV).ok().and_then(|v| v.parse().ok()))
            .unwrap_or_else(|| CountOptions::default().jobs);
        CountOptions {
            jobs: jobs.max(1),
            budget: self.budget,
            projective: true,
            progress: !self.quiet,
        }
    }
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    quiver: PathBuf,
    #[arg(long)]
    q: u32,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, value_enum, default_value = "brute")]
    engine: EngineArg,
    #[command(flatten)]
    run: RunArgs,
    /// Cache file (default: RADCOUNT_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    quiver: PathBuf,
    /// Print every rule application with before/after quivers.
    #[arg(long)]
    show_steps: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    quiver: PathBuf,
    /// Field sizes to sample, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    qs: Vec<u32>,
    #[command(flatten)]
    mode: ModeArgs,
    #[arg(long, value_enum, default_value = "brute")]
    engine: EngineArg,
    /// Fit both the radical and the overline counts.
    #[arg(long)]
    screen: bool,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    q: Vec<u32>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Cache file for the cache suite (default: RADCOUNT_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    l: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Error(Error),
    /// Already reported; exit with status 1.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        Error::InsufficientSamples { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Poly(a) => cmd_poly(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Formula(a) => cmd_formula(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn load(path: &Path) -> Result<(Quiver, SummandVector), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_quiver(&text)
}

fn cache_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
}

fn compute(q: &Quiver, d: &SummandVector, mode: Mode, fq: u32, engine: Engine, opts: &CountOptions) -> Result<CountResult, Error> {
    match engine {
        Engine::Brute => count_mode(q, d, mode, fq, opts),
        Engine::Naive => naive_pair_count(q, d, mode, fq, opts),
        Engine::Dispatch if mode == Mode::Radical => dispatch_count(q, d, fq, opts),
        Engine::Dispatch => Err(Error::Invalid(format!("the dispatch engine counts radical pairs only, not {mode}"))),
    }
}

fn cmd_count(a: CountArgs) -> Result<(), Failure> {
    let (q, d) = load(&a.quiver)?;
    let mode = a.mode.mode()?;
    let engine = Engine::from(a.engine);
    let opts = a.run.options();
    radcount::FieldTable::new(a.q)?;
    let mut cache = match (a.no_cache, cache_path(a.cache)) {
        (false, Some(p)) => {
            let c = Cache::open(p)?;
            for w in c.warnings() {
                eprintln!("warning: {w}");
            }
            Some(c)
        }
        _ => None,
    };
    let key = cache_key(&canonical_hash(&q, &d), &mode.to_string(), a.q);
    if let Some(rec) = cache.as_ref().and_then(|c| c.get(&key)) {
        if audit_selected(&key) {
            let fresh = compute(&q, &d, mode, a.q, engine, &opts)?;
            if fresh.value.to_string() != rec.value {
                eprintln!("error: cache audit failed for {key}: cached {}, recomputed {}", rec.value, fresh.value);
                return Err(Failure::Check);
            }
        }
        println!("{}", rec.value);
        return Ok(());
    }
    let result = compute(&q, &d, mode, a.q, engine, &opts)?;
    println!("{}", result.value);
    if let Some(c) = cache.as_mut() {
        let record = CacheRecord::new(
            key,
            result.value.to_string(),
            quiver_to_json(&q, &d),
            mode.to_string(),
            a.q,
            result.elapsed,
        );
        if let Err(e) = c.append(record) {
            eprintln!("warning: could not write cache {}: {e}", c.path().display());
        }
    }
    Ok(())
}

fn cmd_reduce(a: ReduceArgs) -> Result<(), Failure> {
    let (q, d) = load(&a.quiver)?;
    let trace = normalize(&q, &d);
    if a.json {
        let v = trace.to_json();
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else if a.show_steps {
        print!("{}", trace.render_steps());
        println!("leaves: {}", trace.summary());
    } else {
        println!("{}", trace.summary());
    }
    Ok(())
}

fn cmd_poly(a: PolyArgs) -> Result<(), Failure> {
    let (q, d) = load(&a.quiver)?;
    let opts = a.run.options();
    if a.screen {
        let report = screen_conjectures(&q, &d, &a.qs, &opts)?;
        if a.json {
            println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
        } else {
            print!("{}", report.render());
        }
        return Ok(());
    }
    let mode = a.mode.mode()?;
    let fit = fit_counts(&q, &d, mode, &a.qs, Engine::from(a.engine), &opts)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&fit.to_json()).expect("json"));
    } else {
        print!("{}", fit.render());
    }
    if fit.poly().is_none() {
        return Err(Failure::Check);
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let jobs = RunArgs {
        jobs: a.jobs,
        budget: DEFAULT_BUDGET,
        quiet: true,
    }
    .options();
    let cfg = VerifyConfig {
        trials: a.trials,
        seed: a.seed,
        qs: a.q,
        opts: jobs,
        cache: cache_path(a.cache),
    };
    let report = run_suite(suite, &cfg)?;
    print!("{}", report.render());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_formula(a: FormulaArgs) -> Result<(), Failure> {
    let p = a3_count_poly(a.l, a.d, a.m)?;
    if a.json {
        println!("{}", p.to_json());
    } else {
        println!("{p}");
    }
    Ok(())
}
