use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use oscillab::experiments::{experiments, tools};
use oscillab::output::render;
use oscillab::{
    cache_admin, run_experiment_in, CacheAction, CliError, ExperimentSpec, OutputFormat, Result, RunContext,
    EXIT_CHECK_FAILED,
};

const DEFAULT_CACHE_DIR: &str = ".oscillab-cache";

#[derive(Debug, Parser)]
#[command(name = "oscillab", version, about = "Experiments on oscillating sequences and zero-entropy dynamics")]
struct Cli {
    /// Experiment name, `gen`, `gowers`, `corr`, `cache` or `list`.
    command: String,

    /// For `cache`: build, verify or purge.
    action: Option<String>,

    /// Sequence length (the experiment's `n` parameter).
    #[arg(long)]
    n: Option<u64>,

    #[arg(long)]
    seed: Option<u64>,

    /// Output file; without it the manifest goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv or json (default: from the file extension, else json).
    #[arg(long)]
    format: Option<String>,

    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Largest denominator of the rational polynomial grid.
    #[arg(long = "grid-q")]
    grid_q: Option<u32>,

    /// Random polynomials per degree level.
    #[arg(long = "grid-r")]
    grid_r: Option<u32>,

    /// Flat key = value configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Exit with status 4 when a pass flag is false.
    #[arg(long)]
    check: bool,

    /// Directory for cached sieve tables.
    #[arg(long = "cache-dir")]
    cache_dir: Option<PathBuf>,

    /// Comma-separated checkpoints.
    #[arg(long)]
    checkpoints: Option<String>,

    /// Extra parameter, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_spec(cli: &Cli) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(cli.command.clone());
    if let Some(path) = &cli.config {
        spec.merge_config(&std::fs::read_to_string(path)?)?;
        spec.name = cli.command.clone();
    }
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::InvalidParam(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        spec.set(k, v)?;
    }
    if let Some(n) = cli.n {
        spec.set("n", &n.to_string())?;
    }
    if let Some(q) = cli.grid_q {
        spec.set("q", &q.to_string())?;
    }
    if let Some(r) = cli.grid_r {
        spec.set("r", &r.to_string())?;
    }
    if let Some(seed) = cli.seed {
        spec.seed = seed;
    }
    if let Some(cps) = &cli.checkpoints {
        spec.set("checkpoints", cps)?;
    }
    if let Some(out) = &cli.out {
        spec.set("out", &out.to_string_lossy())?;
    }
    if let Some(f) = &cli.format {
        if spec.output.is_some() {
            spec.set("format", f)?;
        }
    }
    Ok(spec)
}

fn list() {
    println!("experiments:");
    for e in experiments() {
        println!("  {:<28} {}", e.name, e.about);
    }
    println!("tools:");
    for e in tools() {
        println!("  {:<28} {}", e.name, e.about);
    }
    println!("  {:<28} build, verify or purge a sieve table", "cache");
}

fn run(cli: &Cli) -> Result<i32> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::InvalidParam(format!("--threads {t}: {e}")))?;
    }
    match cli.command.as_str() {
        "list" => {
            list();
            Ok(0)
        }
        "cache" => {
            let action: CacheAction = cli
                .action
                .as_deref()
                .ok_or_else(|| CliError::InvalidParam("cache needs an action: build, verify or purge".into()))?
                .parse()?;
            let dir = cli.cache_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
            let n = cli.n.unwrap_or(1_000_000);
            let status = cache_admin(action, n, &dir)?;
            println!("{:?}: sieve table n ≤ {n} in {}", status, dir.display());
            Ok(0)
        }
        _ => {
            if let Some(a) = &cli.action {
                return Err(CliError::InvalidParam(format!("unexpected argument {a:?}")));
            }
            let spec = build_spec(cli)?;
            let ctx = RunContext {
                cache_dir: cli.cache_dir.clone(),
            };
            let manifest = run_experiment_in(&spec, &ctx)?;
            if manifest.experiment.output.is_none() {
                let format = match &cli.format {
                    Some(f) => f.parse()?,
                    None => OutputFormat::Json,
                };
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&render(&manifest, format)?)?;
                writeln!(stdout)?;
            }
            for (name, ok) in &manifest.pass_flags {
                eprintln!("{} {name}", if *ok { "pass" } else { "FAIL" });
            }
            Ok(if cli.check && !manifest.all_passed() { EXIT_CHECK_FAILED } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("hint: {h}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
