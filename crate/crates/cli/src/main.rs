mod args;
mod commands;
mod grid;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use serde::Serialize;
use serde_json::{Map, Value};

use args::{resolve, Cli, Command};
use commands::Output;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, grids or config files.
    Usage(String),
    /// A precondition of the model was violated.
    Domain(purcell1d::Error),
    Io(anyhow::Error),
}

impl From<purcell1d::Error> for CliError {
    fn from(e: purcell1d::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Io(e)
    }
}

fn load_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Usage(format!("config {} is not a JSON object", path.display()))),
        Err(e) => Err(CliError::Usage(format!("config {}: {e}", path.display()))),
    }
}

/// Resolves flags against the config and runs the subcommand; returns the
/// command name, the resolved inputs and the output.
fn dispatch(cli: &Cli, config: Option<&Map<String, Value>>) -> Result<(&'static str, Value, Output), CliError> {
    fn go<T: clap::Args + Serialize + serde::de::DeserializeOwned>(
        name: &'static str,
        flags: &T,
        config: Option<&Map<String, Value>>,
        run: fn(&T) -> Result<Output, CliError>,
    ) -> Result<(&'static str, Value, Output), CliError> {
        let a = resolve(flags, config)?;
        let out = run(&a)?;
        let mut inputs = serde_json::to_value(&a).expect("arguments serialize");
        if let Value::Object(m) = &mut inputs {
            m.retain(|_, v| !v.is_null());
        }
        Ok((name, inputs, out))
    }
    match &cli.command {
        Command::Spectrum(a) => go("spectrum", a, config, commands::spectrum),
        Command::Saturation(a) => go("saturation", a, config, commands::saturation),
        Command::Dynamics(a) => go("dynamics", a, config, commands::dynamics),
        Command::Pillar(a) => go("pillar", a, config, commands::pillar),
        Command::Slowlight(a) => go("slowlight", a, config, commands::slowlight),
        Command::Bistability(a) => go("bistability", a, config, commands::bistability),
        Command::Reshape(a) => go("reshape", a, config, commands::reshape),
        Command::Kerr(a) => go("kerr", a, config, commands::kerr),
    }
}

fn manifest_path(cli: &Cli) -> Option<PathBuf> {
    cli.manifest
        .clone()
        .or_else(|| cli.out.as_ref().map(|p| p.with_extension("manifest.json")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref().map(load_config).transpose()?;
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => n,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("starting worker pool")?;
    let (name, inputs, output) = pool.install(|| dispatch(cli, config.as_ref()))?;

    match &cli.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            output.table.write(&mut w).map_err(|e| CliError::Io(e.into()))?;
            w.flush().with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            output.table.write(&mut w).map_err(|e| CliError::Io(e.into()))?;
            w.flush().context("writing standard output")?;
        }
    }

    if let Some(path) = manifest_path(cli) {
        let mut m: BTreeMap<&str, Value> = BTreeMap::new();
        m.insert("command", Value::from(name));
        m.insert("inputs", inputs);
        m.insert("derived", Value::Object(output.derived));
        m.insert("columns", Value::from(output.table.header().to_vec()));
        m.insert("rows", Value::from(output.table.rows().len()));
        m.insert(
            "version",
            serde_json::json!({"purcell1d": purcell1d::VERSION, "cli": env!("CARGO_PKG_VERSION")}),
        );
        let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `purcell1d --help` for usage");
            ExitCode::from(2)
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
