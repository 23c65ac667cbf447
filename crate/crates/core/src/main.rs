use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotor::runner::{run, Command, CurveRef, RunConfig, EXIT_CONFIG};

/// Rotating-frame kinematics of curves.
#[derive(Parser)]
#[command(name = "rotor", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance and rotation kinematics sampled along a curve
    Kinematics(Opts),
    /// Rebuild a curve from distance and direction data
    Reconstruct(Opts),
    /// Kinematics of a chart curve on a surface
    Surface(Opts),
    /// Closed-form ellipse profile table
    Ellipse(Opts),
    /// Run the self-verification checks
    Verify(Opts),
}

#[derive(Args)]
struct Opts {
    /// JSON configuration file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog curve or reconstruction preset
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    pitch: Option<f64>,
    /// origin | focus | local | point:ax,ay[,az]
    #[arg(long)]
    frame: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    /// Integration step
    #[arg(long)]
    step: Option<f64>,
    /// Reconstruct from second-order distance data
    #[arg(long)]
    second_order: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Run only the check with this id, or the checks carrying this tag
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

impl Opts {
    fn into_config(self, command: Command) -> RunConfig {
        RunConfig {
            command: Some(command),
            curve: self.curve.map(CurveRef::Name),
            a: self.a,
            b: self.b,
            radius: self.radius,
            pitch: self.pitch,
            frame: self.frame,
            samples: self.samples,
            step: self.step,
            second_order: self.second_order.then_some(true),
            out: self.out,
            format: self.format,
            filter: self.filter,
            inject_fault: self.inject_fault,
            ..Default::default()
        }
    }
}

fn load(path: &PathBuf) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    RunConfig::from_json(&text).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let (command, opts) = match Cli::parse().command {
        Cmd::Kinematics(o) => (Command::Kinematics, o),
        Cmd::Reconstruct(o) => (Command::Reconstruct, o),
        Cmd::Surface(o) => (Command::Surface, o),
        Cmd::Ellipse(o) => (Command::Ellipse, o),
        Cmd::Verify(o) => (Command::Verify, o),
    };
    let base = match opts.config.as_ref().map(load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let config = base.overridden_by(opts.into_config(command));
    let outcome = run(&config);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
