use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use polargrad::harness::verify::{run_suite, Suite};
use polargrad::harness::{
    compare_runs, load_run, preset, preset_names, run_experiment, Metric, RunArtifacts, RunConfig,
};
use polargrad::Error;

/// Exit codes: 0 success, 1 other failure, 2 bad config, 3 divergence, 4 a
/// failed optimizer step.
#[derive(Parser)]
#[command(name = "polargrad", version, about = "Run and verify polar-decomposition optimizers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its trace and manifest.
    Run(RunArgs),
    /// Run every `*.toml` config in a directory.
    Sweep {
        #[arg(long)]
        dir: PathBuf,
        /// Output directory for configs that do not set `output`.
        #[arg(long, default_value = "runs")]
        out: PathBuf,
    },
    /// Run a numerical check suite.
    Verify {
        /// polar, theorems, gradients, experiments or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print every preset name.
    ListPresets,
    /// Print a preset in config-file form.
    ExportPreset {
        name: String,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two finished runs of the same problem at a step horizon.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value = "gap")]
        metric: String,
        #[arg(long)]
        horizon: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "runs")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_DIVERGED: u8 = 3;
const EXIT_STEP_FAILED: u8 = 4;

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::UnknownPreset(_) | Error::InvalidArgument(_) => EXIT_CONFIG,
        _ => EXIT_FAILURE,
    }
}

fn fail(e: Error) -> u8 {
    eprintln!("error: {e}");
    error_code(&e)
}

fn run_code(art: &RunArtifacts) -> u8 {
    let s = &art.output.summary;
    match &s.halt {
        None => 0,
        Some(_) if s.diverged => EXIT_DIVERGED,
        Some(_) => EXIT_STEP_FAILED,
    }
}

fn report(art: &RunArtifacts) {
    let s = &art.output.summary;
    let cfg = &art.output.config;
    let gap = s.final_gap.map(|g| format!(" gap {g:.6e}")).unwrap_or_default();
    println!(
        "{} seed {}: {} steps, loss {:.6e}{gap}, {:.0} ms",
        cfg.name,
        cfg.seed(),
        s.steps_completed,
        s.final_loss,
        s.wall_ms
    );
    if let Some(h) = &s.halt {
        println!("  halted at step {}: {}", h.step, h.reason);
    }
    if cfg.check_descent {
        println!("  descent violations: {}", s.descent_violations);
    }
    println!("  trace {}", art.trace_path.display());
    println!("  manifest {}", art.manifest_path.display());
}

fn load_config(args: &RunArgs) -> polargrad::Result<RunConfig> {
    let mut cfg = match (&args.preset, &args.config) {
        (Some(name), _) => preset(name)?,
        (None, Some(path)) => RunConfig::from_file(path)?,
        (None, None) => unreachable!("clap requires one"),
    };
    if let Some(s) = args.seed {
        cfg = cfg.with_seed(s);
    }
    if let Some(n) = args.steps {
        cfg.total_steps = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(args: &RunArgs) -> u8 {
    let cfg = match load_config(args) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run_experiment(&cfg, &args.out) {
        Ok(art) => {
            report(&art);
            run_code(&art)
        }
        Err(e) => fail(e),
    }
}

fn config_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".toml") && !name.ends_with(".manifest.toml")
        })
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_sweep(dir: &Path, out: &Path) -> u8 {
    let files = match config_files(dir) {
        Ok(f) => f,
        Err(e) => return fail(e.into()),
    };
    if files.is_empty() {
        eprintln!("error: no *.toml configs in {}", dir.display());
        return EXIT_CONFIG;
    }
    let mut worst = 0;
    for path in files {
        let code = match RunConfig::from_file(&path).and_then(|c| run_experiment(&c, out)) {
            Ok(art) => {
                report(&art);
                run_code(&art)
            }
            Err(e) => {
                eprintln!("{}: {e}", path.display());
                error_code(&e)
            }
        };
        worst = worst.max(code);
    }
    worst
}

fn cmd_verify(suite: &str) -> u8 {
    let suite = match Suite::parse(suite) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match run_suite(suite) {
        Ok(checks) => {
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed == 0 {
                0
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => fail(e),
    }
}

fn cmd_export(name: &str, out: Option<&Path>) -> u8 {
    let text = match preset(name) {
        Ok(c) => c.to_text(),
        Err(e) => return fail(e),
    };
    match out {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => 0,
            Err(e) => fail(e.into()),
        },
        None => {
            print!("{text}");
            0
        }
    }
}

fn cmd_compare(a: &Path, b: &Path, metric: &str, horizon: usize) -> u8 {
    let result = (|| {
        let metric = Metric::parse(metric)?;
        let (ma, ra) = load_run(a)?;
        let (mb, rb) = load_run(b)?;
        let c = compare_runs((&ma.problem_id, &ra), (&mb.problem_id, &rb), metric, horizon)?;
        println!("{} vs {} ({metric:?} at step {horizon})", ma.name, mb.name);
        println!("  a {:.6e}  b {:.6e}  {:?}", c.a, c.b, c.ordering);
        println!("  log-area ratio a/b {:.4}", c.auc_log_ratio);
        Ok::<_, Error>(())
    })();
    match result {
        Ok(()) => 0,
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep { dir, out } => cmd_sweep(dir, out),
        Command::Verify { suite } => cmd_verify(suite),
        Command::ListPresets => {
            let mut out = std::io::stdout().lock();
            for n in preset_names() {
                // A closed pipe (e.g. `| head`) just ends the listing.
                if writeln!(out, "{n}").is_err() {
                    break;
                }
            }
            0
        }
        Command::ExportPreset { name, out } => cmd_export(name, out.as_deref()),
        Command::Compare { a, b, metric, horizon } => cmd_compare(a, b, metric, *horizon),
    };
    ExitCode::from(code)
}
