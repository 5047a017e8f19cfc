use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use blockade_core::analytic::{atom_coherence_analytic, g2_zero_analytic};
use blockade_core::correlations::{g2_tau, solve_point};
use blockade_core::lindblad::{default_time_step, steady_state, LiouvillianBasis};
use blockade_core::{HilbertConfig, SystemParams};
use clap::{Args, Parser, Subcommand};

use crate::config::parse_config;
use crate::correspondence::{check_correspondence, DEFAULT_GAP_THRESHOLD};
use crate::csv_io::{read_sweep, write_curve, write_sweep};
use crate::error::{LabError, Result};
use crate::presets;
use crate::sweep::{run_sweep, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "blockade-lab",
    version,
    about = "Photon blockade and atomic coherence in a driven atom-cavity system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Highest photon number kept in the cavity basis [default: 4].
    #[arg(long, global = true)]
    pub nmax: Option<usize>,

    /// Points per sweep axis, or delays for fig2.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// g²(0) and coherence against Δ, both branches.
    Fig1,
    /// g²(τ) by the regression theorem.
    Fig2,
    /// g²(0) and coherence over g × Δ.
    Fig3,
    /// g²(0) and coherence over κ × Δ.
    Fig4,
    /// Sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Both branches at one parameter point.
    Point(PointArgs),
    /// Pair g² minima with coherence maxima in a sweep CSV.
    Check {
        file: PathBuf,
        /// Largest accepted gap, in grid steps.
        #[arg(long, default_value_t = DEFAULT_GAP_THRESHOLD)]
        threshold: f64,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[arg(long)]
    pub g: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub eta: f64,
    /// Common detuning of cavity and atom.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta: f64,
    /// Cavity detuning, overriding --delta.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_a: Option<f64>,
    /// Atomic detuning, overriding --delta.
    #[arg(long, allow_hyphen_values = true)]
    pub delta_atom: Option<f64>,
}

impl PointArgs {
    fn params(&self) -> Result<SystemParams> {
        SystemParams::new(
            self.g,
            self.kappa,
            self.gamma,
            self.eta,
            self.delta_a.unwrap_or(self.delta),
            self.delta_atom.unwrap_or(self.delta),
        )
        .map_err(|e| LabError::config(e.to_string()))
    }
}

fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn sweep(spec: &SweepSpec, out: Option<&Path>) -> Result<()> {
    let result = run_sweep(spec)?;
    emit(out, |w| write_sweep(&result, w))
}

fn point_report(p: &SystemParams, h: &HilbertConfig, w: &mut dyn Write) -> Result<()> {
    let num = solve_point(p, h)?;
    writeln!(w, "g2_analytic = {:?}", g2_zero_analytic(p)?)?;
    writeln!(w, "g2_numeric = {:?}", num.g2)?;
    writeln!(w, "coh_analytic = {:?}", atom_coherence_analytic(p))?;
    writeln!(w, "coh_numeric = {:?}", num.coherence)?;
    writeln!(w, "mean_photon = {:?}", num.mean_photon)?;
    Ok(())
}

fn check(file: &Path, threshold: f64, out: Option<&Path>) -> Result<()> {
    let result = read_sweep(File::open(file)?)?;
    let slices = if result.is_2d() {
        let outer = result.axes[0];
        let values = outer.values();
        (0..outer.count)
            .map(|i| {
                let label = format!("{} = {:?}", outer.param, values[i]);
                (Some(label), result.row(i).expect("index in range"))
            })
            .collect()
    } else {
        vec![(None, result)]
    };
    let mut pass = true;
    emit(out, |w| {
        for (label, slice) in &slices {
            let report = check_correspondence(slice, threshold)?;
            pass &= report.pass();
            if let Some(label) = label {
                writeln!(w, "# {label}")?;
            }
            writeln!(w, "{report}")?;
        }
        Ok(())
    })?;
    if pass {
        Ok(())
    } else {
        Err(LabError::CheckFailed)
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let n_max = cli.nmax.unwrap_or(HilbertConfig::DEFAULT_N_MAX);
    let hilbert = HilbertConfig::new(n_max).map_err(|e| LabError::config(e.to_string()))?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Fig1 => sweep(&presets::fig1(cli.grid, hilbert), out),
        Command::Fig3 => sweep(&presets::fig3(cli.grid, hilbert), out),
        Command::Fig4 => sweep(&presets::fig4(cli.grid, hilbert), out),
        Command::Fig2 => {
            let f = presets::fig2(cli.grid);
            let l = LiouvillianBasis::new(hilbert).assemble(&f.params)?;
            let rho = steady_state(&l)?;
            let curve = g2_tau(&l, &rho, &hilbert, &f.tau, default_time_step(&f.params))?;
            emit(out, |w| write_curve(&curve, w))
        }
        Command::Sweep { config } => {
            let mut spec = parse_config(&fs::read_to_string(config)?)?;
            if cli.nmax.is_some() {
                spec.hilbert = hilbert;
            }
            if let Some(n) = cli.grid {
                spec.axis1.count = n;
                if let Some(a2) = spec.axis2.as_mut() {
                    a2.count = n;
                }
            }
            sweep(&spec, out)
        }
        Command::Point(args) => {
            let p = args.params()?;
            emit(out, |w| point_report(&p, &hilbert, w))
        }
        Command::Check { file, threshold } => check(file, *threshold, out),
    }
}
