//! `dwm`: command-line front end for the workbench.

mod commands;
mod merge;
mod sink;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dwm_core::scenarios::{BoostPhase, InitialState, OutputFormat};

#[derive(Debug, Parser)]
#[command(
    name = "dwm",
    version,
    about = "Bound states of static and drifting potential wells on a tight-binding lattice"
)]
pub struct Cli {
    /// Output directory. Table commands print to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats, comma separated: csv, json.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Vec<OutputFormat>,
    /// JSON config file; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full spectrum of a static well.
    Spectrum(SpectrumArgs),
    /// Time evolution in a drifting well.
    Evolve(EvolveArgs),
    /// Boost parameters for given velocities.
    Boost(BoostArgs),
    /// Boosted band E(k) for one velocity.
    Dispersion(CurveArgs),
    /// Momentum-space potential W(k) and its stationary points.
    Wk(CurveArgs),
    /// Reproduce a built-in figure scenario (fig2 … fig5c, custom or all).
    Figure(FigureArgs),
    /// Predicted and measured bound-state counts over a (nu, v) grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// Lattice sites (odd).
    #[arg(long)]
    pub sites: Option<usize>,
    /// Pöschl–Teller depth parameter.
    #[arg(long)]
    pub nu: Option<f64>,
    /// a/l.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Harmonic well Ωa² instead of Pöschl–Teller.
    #[arg(long)]
    pub omega_a2: Option<f64>,
    /// Energy below which a level counts as bound (κ).
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,
    /// Level indices whose eigenvectors are written, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub dump_states: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Potential {
    Pt,
    Harmonic,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, value_enum)]
    pub potential: Option<Potential>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub omega_a2: Option<f64>,
    /// v/(κa), |v| ≤ 2.
    #[arg(long, allow_hyphen_values = true)]
    pub velocity: Option<f64>,
    /// ground, excited or file:<path>.
    #[arg(long)]
    pub init: Option<InitialState>,
    /// auto or none.
    #[arg(long)]
    pub boost_phase: Option<BoostPhase>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// κt at the end of the run.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Steps between recorded snapshots.
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long)]
    pub sites: Option<usize>,
    /// Well center at t = 0 (site index).
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
    /// Half-width of the co-moving window (sites).
    #[arg(long)]
    pub window: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoostArgs {
    /// Velocities v/(κa), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub velocity: Option<Vec<f64>>,
    /// Rest-frame depth; adds nu_star and the predicted bound count.
    #[arg(long)]
    pub nu: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub velocity: Option<f64>,
    /// Lower end of the ka range.
    #[arg(long, allow_hyphen_values = true)]
    pub k_min: Option<f64>,
    /// Upper end of the ka range.
    #[arg(long, allow_hyphen_values = true)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub k_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig2, fig3, fig4a … fig4d, fig5a … fig5c, custom or all.
    pub id: String,
    /// Parameter override, e.g. `--set tmax=50`; repeatable.
    #[arg(long = "set", value_parser = parse_assignment)]
    pub set: Vec<(String, f64)>,
    #[arg(long)]
    pub init: Option<InitialState>,
    #[arg(long)]
    pub boost_phase: Option<BoostPhase>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Rest-frame depths, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub nus: Option<Vec<f64>>,
    /// Velocities, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub velocities: Option<Vec<f64>>,
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Probe duration κt.
    #[arg(long)]
    pub t_probe: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub half_window: Option<f64>,
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|e| format!("`{v}` is not a number: {e}"))?;
    Ok((k.trim().to_string(), v))
}

/// Run outcome that maps to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A run finished but its validity flag is down.
    Invalid,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors; 2 is reserved
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Invalid) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
