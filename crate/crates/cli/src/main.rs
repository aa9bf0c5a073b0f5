use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use sshqst_cli::config::ExperimentConfig;
use sshqst_cli::output::{write_artifacts, write_error};
use sshqst_cli::recipes;
use sshqst_cli::run::{run, RunError};

#[derive(Parser)]
#[command(name = "sshqst", version, about = "Topological state transfer experiments on extended SSH chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file, or a built-in recipe given as `recipe:<name>`.
    Run {
        config: String,
        /// Output directory; overrides the config's `out`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed; overrides the config's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for parallel repetitions and scans.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the built-in figure recipes, or write their configs with `--emit`.
    Recipes {
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Parse and validate a config without running it.
    Validate { config: String },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 1;

fn load(source: &str) -> Result<ExperimentConfig, (String, sshqst_cli::config::FieldError)> {
    if let Some(name) = source.strip_prefix("recipe:") {
        return recipes::find(name).ok_or_else(|| {
            ("config".into(), sshqst_cli::config::FieldError::new("recipe", format!("no recipe named {name:?}")))
        });
    }
    let text = fs::read_to_string(source).map_err(|e| {
        ("io".to_string(), sshqst_cli::config::FieldError::new("config", format!("cannot read {source}: {e}")))
    })?;
    ExperimentConfig::from_json(&text).map_err(|e| ("config".to_string(), e))
}

fn fail(dir: &Path, kind: &str, field: Option<&str>, message: &str, code: u8) -> ExitCode {
    eprintln!("error ({kind}): {}{message}", field.map(|f| format!("{f}: ")).unwrap_or_default());
    if let Err(e) = write_error(dir, kind, field, message) {
        eprintln!("could not write error.json: {e:#}");
    }
    ExitCode::from(code)
}

fn run_command(source: &str, out: Option<PathBuf>, seed: Option<u64>, threads: Option<usize>) -> ExitCode {
    let fallback = out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Some(n) = threads {
        if n == 0 {
            return fail(&fallback, "config", Some("--threads"), "must be >= 1", EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(&fallback, "runtime", Some("--threads"), &e.to_string(), EXIT_RUNTIME);
        }
    }
    let mut config = match load(source) {
        Ok(c) => c,
        Err((kind, e)) => return fail(&fallback, &kind, Some(&e.field), &e.message, EXIT_CONFIG),
    };
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let dir = out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    match run(&config) {
        Ok(outcome) => match write_artifacts(&dir, &config, &outcome.tables, outcome.metrics) {
            Ok(paths) => {
                for p in paths {
                    println!("{}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&dir, "io", None, &format!("{e:#}"), EXIT_RUNTIME),
        },
        Err(RunError::Config(e)) => fail(&dir, "config", Some(&e.field), &e.message, EXIT_CONFIG),
        Err(RunError::Model(e)) => fail(&dir, "model", None, &e.to_string(), EXIT_RUNTIME),
    }
}

fn emit_recipes(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (recipe, config) in recipes::catalog() {
        let path = dir.join(format!("{}.json", recipe.name));
        fs::write(&path, serde_json::to_string_pretty(&config.to_value())? + "\n")?;
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, seed, threads } => run_command(&config, out, seed, threads),
        Command::Recipes { emit: Some(dir) } => match emit_recipes(&dir) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(EXIT_RUNTIME)
            }
        },
        Command::Recipes { emit: None } => {
            let mut stdout = std::io::stdout().lock();
            for (r, c) in recipes::catalog() {
                let listed = writeln!(stdout, "{:<7} {:<17} {}", r.name, c.experiment.kind(), r.description)
                    .and_then(|_| writeln!(stdout, "        expected: {} (tolerance {})", r.expected, r.tolerance));
                // A closed pipe (e.g. `| head`) just ends the listing.
                if listed.is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(c) => {
                let report = json!({ "status": "ok", "name": c.name, "experiment": c.experiment.kind(), "config": c.to_value() });
                println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialise"));
                ExitCode::SUCCESS
            }
            Err((kind, e)) => {
                let report = json!({ "status": "error", "kind": kind, "field": e.field, "message": e.message });
                println!("{}", serde_json::to_string_pretty(&report).expect("JSON values serialise"));
                ExitCode::from(EXIT_CONFIG)
            }
        },
    }
}
