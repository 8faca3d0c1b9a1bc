use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homfield::driver::{
    cmd_check, cmd_derive, cmd_gravity, cmd_simulate, cmd_sweep, load_model, parse_assignments, DriverError,
    GravityOptions, ReportFormat, RunOptions,
};
use homfield::evolve::Method;
use homfield::model::ModelFile;

#[derive(Parser)]
#[command(name = "homfield", version, about = "Covariant Hamiltonian field equations from model files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print momenta, Hamiltonian, Hamilton equations and the energy monitor.
    Derive {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: DeriveFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the Hamilton equations and report the energy drift.
    Simulate {
        model: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: DataFormat,
        /// Run once per value, concurrently: NAME=v1,v2,...
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Verify the symbolic identities of a model.
    Check {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: DeriveFormat,
    },
    /// Formal gravitational energy for a metric ansatz (frw, bianchi1, static).
    Gravity {
        ansatz: String,
        #[command(flatten)]
        run: RunArgs,
        /// Initial scale factor (shorthand for --init a=...).
        #[arg(long)]
        a0: Option<f64>,
        /// Initial expansion rate (shorthand for --init "d(a, tau)=...").
        #[arg(long)]
        adot0: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DataFormat,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Integration interval A:B.
    #[arg(long, default_value = "0:1")]
    tau: String,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, default_value = "midpoint")]
    method: Method,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Initial values: NAME=VALUE,... with NAME a field, p(field) or d(field, tau).
    #[arg(long)]
    init: Option<String>,
    /// Keep every N-th step.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Allowed relative drift of H for autonomous systems.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeriveFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

impl RunArgs {
    fn options(&self, defaults: RunOptions) -> Result<RunOptions, DriverError> {
        let (a, b) = self
            .tau
            .split_once(':')
            .ok_or_else(|| DriverError::Usage(format!("--tau expects A:B, got `{}`", self.tau)))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| DriverError::Usage(format!("`{s}` is not a number")));
        let mut init = Vec::new();
        if let Some(text) = &self.init {
            for (k, v) in parse_assignments(text)? {
                init.push((k, num(&v)?));
            }
        }
        Ok(RunOptions {
            tau0: num(a)?,
            tau1: num(b)?,
            step: self.step.unwrap_or(defaults.step),
            method: self.method,
            stride: self.stride,
            init,
            tolerance: self.tolerance.or(defaults.tolerance),
        })
    }
}

fn read_model(path: &Path) -> Result<ModelFile, DriverError> {
    let text = fs::read_to_string(path).map_err(|e| DriverError::Usage(format!("{}: {e}", path.display())))?;
    load_model(&text)
}

fn write(path: &Path, text: &str) -> Result<(), DriverError> {
    fs::write(path, text).map_err(|e| DriverError::Usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), DriverError> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `out.csv` with suffix `k=2` becomes `out.k=2.csv`.
fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    path.with_file_name(name)
}

fn run(cli: Cli) -> Result<(), DriverError> {
    match cli.command {
        Command::Derive { model, format, out } => {
            let m = read_model(&model)?;
            let f = match format {
                DeriveFormat::Text => ReportFormat::Text,
                DeriveFormat::Json => ReportFormat::Json,
            };
            emit(out.as_deref(), &cmd_derive(&m, f)?)
        }
        Command::Check { model, format } => {
            let r = cmd_check(&read_model(&model)?)?;
            print!("{}", match format {
                DeriveFormat::Text => r.to_text(),
                DeriveFormat::Json => r.to_json(),
            });
            if r.passed() {
                Ok(())
            } else {
                Err(DriverError::Derivation("identity check failed".into()))
            }
        }
        Command::Simulate { model, run, format, sweep } => {
            let m = read_model(&model)?;
            let opts = run.options(RunOptions::default())?;
            let render = |o: &homfield::driver::SimulationOutput| match format {
                DataFormat::Csv => o.csv(),
                DataFormat::Json => o.to_json(),
            };
            let mut failed = None;
            match sweep {
                None => {
                    let o = cmd_simulate(&m, &opts)?;
                    emit(run.out.as_deref(), &render(&o))?;
                    if run.out.is_some() {
                        print!("{}", o.summary());
                    } else {
                        eprint!("{}", o.summary());
                    }
                    if o.passed == Some(false) {
                        failed = Some(DriverError::Numeric("energy drift above tolerance".into()));
                    }
                }
                Some(spec) => {
                    let out = run.out.as_deref().ok_or_else(|| DriverError::Usage("--sweep needs --out".into()))?;
                    let (name, values) = spec
                        .split_once('=')
                        .ok_or_else(|| DriverError::Usage(format!("--sweep expects NAME=v1,v2,..., got `{spec}`")))?;
                    let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
                    for (v, result) in cmd_sweep(&m, name.trim(), &values, &opts)? {
                        let path = suffixed(out, &format!("{}={v}", name.trim()));
                        match result {
                            Ok(o) => {
                                write(&path, &render(&o))?;
                                println!("## {} -> {}", format!("{}={v}", name.trim()), path.display());
                                print!("{}", o.summary());
                                if o.passed == Some(false) && failed.is_none() {
                                    failed = Some(DriverError::Numeric(format!("{name}={v}: energy drift above tolerance")));
                                }
                            }
                            Err(e) => {
                                eprintln!("{name}={v}: {e}");
                                failed.get_or_insert(e);
                            }
                        }
                    }
                }
            }
            failed.map_or(Ok(()), Err)
        }
        Command::Gravity { ansatz, run, a0, adot0, format } => {
            let defaults = GravityOptions::default();
            let mut opts = GravityOptions { run: run.options(defaults.run)? };
            if let Some(a) = a0 {
                opts.run.init.push(("a".into(), a));
            }
            if let Some(v) = adot0 {
                opts.run.init.push(("d(a, tau)".into(), v));
            }
            let o = cmd_gravity(&ansatz, &opts)?;
            match format {
                DataFormat::Csv => {
                    print!("{}", o.to_text());
                    if let Some(p) = &run.out {
                        write(p, &o.csv())?;
                    }
                }
                DataFormat::Json => emit(run.out.as_deref(), &o.to_json())?,
            }
            if o.conservation.passed {
                Ok(())
            } else {
                Err(DriverError::Numeric("energy drift above tolerance".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homfield: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
