mod args;
mod commands;
mod config;
mod emit;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use sha2::{Digest, Sha256};

use args::{Cli, Command};
use config::{Cache, Config};
use error::{CliError, EXIT_INPUT};

fn setup(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = Some(w);
    }
    if let Some(t) = cli.tolerance {
        cfg.tolerance = t;
    }
    stabp3::scalar::set_tolerance(cfg.tolerance);
    if let Some(n) = cfg.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::input(format!("cannot start {n} workers: {e}")))?;
    }
    Ok(cfg)
}

/// Parameters for the cache key; files named on the command line contribute their contents.
fn cache_params(cmd: &Command) -> String {
    let mut params = format!("{cmd:?}");
    if let Command::Gldim { corpus: Some(path), .. } = cmd {
        let digest = std::fs::read(path).map(|bytes| format!("{:x}", Sha256::digest(bytes)));
        params.push_str(&format!(";corpus={}", digest.unwrap_or_default()));
    }
    params
}

fn execute(cli: &Cli) -> Result<commands::Output, CliError> {
    let cfg = setup(cli)?;
    let cache = cfg.cache();
    let key = Cache::key(cli.command.name(), &cache_params(&cli.command), &cfg);
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(commands::Output { text: hit, status: 0 });
    }
    let out = commands::run(&cli.command, &cfg)?;
    if let (Some(c), 0) = (&cache, out.status) {
        c.put(&key, &out.text);
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
