//! `nuent`: command-line front end.
//!
//! Exit codes: 0 on success, 1 on configuration, domain or usage errors,
//! 2 when `verify` finds a residual above its tolerance.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nuent::fock::VerificationReport;
use nuent::qft::KinematicSector;
use nuent::scenario::{self, ConfigDraft, Format, Mode, ScenarioError, Setting};

#[derive(Parser, Debug)]
#[command(
    name = "nuent",
    version,
    about = "Flavor mixing and mode entanglement of neutrinos, QM and QFT"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plane-wave oscillation and entanglement against the phase (ω₂−ω₁)t/2.
    Qm {
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        spectrum: SpectrumArgs,
        #[command(flatten)]
        sweep: PhaseSweepArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Field-theoretic flavor charges in one momentum sector, against time.
    Qft {
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        sector: SectorArgs,
        #[command(flatten)]
        sweep: TimeSweepArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// QM and QFT columns side by side, with the QM energies taken from the sector.
    Compare {
        #[command(flatten)]
        angle: AngleArgs,
        #[command(flatten)]
        sector: SectorArgs,
        #[command(flatten)]
        sweep: TimeSweepArgs,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Check every closed form against the exact Fock-space oracle.
    Verify {
        /// Seed of the random parameter grid.
        #[arg(long)]
        seed: Option<u64>,
        /// Random points per engine (fixed edge cases are added on top).
        #[arg(long, allow_negative_numbers = true)]
        points: Option<i64>,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Print |U_k|, |V_k| and the identity |U_k|² + |V_k|² = 1 for one sector.
    Bogoliubov {
        #[arg(long)]
        m1: f64,
        #[arg(long)]
        m2: f64,
        #[arg(long)]
        k: f64,
    },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct AngleArgs {
    /// Mixing angle in radians, within [0, π/2].
    #[arg(long, allow_negative_numbers = true)]
    theta_rad: Option<f64>,
    /// sin²θ, within [0, 1] (default 0.314 when no angle is given anywhere).
    #[arg(long, allow_negative_numbers = true)]
    sin2_theta: Option<f64>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    omega1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega2: Option<f64>,
}

#[derive(Args, Debug)]
struct SectorArgs {
    #[arg(long, allow_negative_numbers = true)]
    m1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    m2: Option<f64>,
    /// Momentum magnitude |k|.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
}

#[derive(Args, Debug)]
struct PhaseSweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    phase_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phase_max: Option<f64>,
    /// Number of sweep points (at least 2).
    #[arg(long, allow_negative_numbers = true)]
    points: Option<i64>,
}

#[derive(Args, Debug)]
struct TimeSweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    /// Number of sweep points (at least 2).
    #[arg(long, allow_negative_numbers = true)]
    points: Option<i64>,
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Scenario file (TOML). Flags override its values; the angle is
    /// replaced as a whole.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "json-lines"])]
    format: Option<String>,
    /// Print the resolved scenario as TOML and exit without running it.
    #[arg(long)]
    echo_config: bool,
}

enum Failure {
    Usage(String),
    Scenario(ScenarioError),
    Verification(VerificationReport),
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Scenario(e)
    }
}

fn flag<T>(v: Option<T>) -> Option<Setting<T>> {
    v.map(Setting::flag)
}

fn apply_angle(d: &mut ConfigDraft, a: AngleArgs) {
    d.theta_rad = flag(a.theta_rad);
    d.sin2_theta = flag(a.sin2_theta);
}

fn apply_sector(d: &mut ConfigDraft, a: AngleArgs, s: SectorArgs, w: TimeSweepArgs) {
    apply_angle(d, a);
    d.m1 = flag(s.m1);
    d.m2 = flag(s.m2);
    d.k = flag(s.k);
    d.t_min = flag(w.t_min);
    d.t_max = flag(w.t_max);
    d.n_points = flag(w.points);
}

fn apply_io(d: &mut ConfigDraft, io: &IoArgs) -> Result<(), Failure> {
    d.path = flag(io.output.clone());
    d.format = match io.format.as_deref() {
        Some(f) => Some(Setting::flag(f.parse::<Format>().map_err(Failure::Usage)?)),
        None => None,
    };
    Ok(())
}

fn run_scenario(mode: Mode, mut flags: ConfigDraft, io: IoArgs) -> Result<(), Failure> {
    flags.mode = Some(Setting::flag(mode));
    apply_io(&mut flags, &io)?;
    let mut draft = match &io.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
                path: path.clone(),
                source,
            })?;
            ConfigDraft::from_toml_partial(&text).map_err(ScenarioError::from)?
        }
        None => (ConfigDraft::default(), Vec::new()),
    };
    draft.0.overlay(flags).map_err(ScenarioError::from)?;
    let cfg = draft.0.validate_after(draft.1).map_err(ScenarioError::from)?;

    if io.echo_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }

    let (outcome, bytes) = scenario::render(&cfg)?;
    scenario::write_output(&bytes, cfg.output.path.as_deref())?;
    match outcome.verification {
        Some(report) if !report.all_passed() => Err(Failure::Verification(report)),
        Some(report) => {
            eprintln!(
                "verify: {} checks passed (seed {}, {} points)",
                report.checks.len(),
                report.seed,
                report.points
            );
            Ok(())
        }
        None => Ok(()),
    }
}

fn bogoliubov(m1: f64, m2: f64, k: f64) -> Result<(), Failure> {
    let sector = KinematicSector::new(m1, m2, k).map_err(ScenarioError::from)?;
    let (u, v) = (sector.u_k(), sector.v_k());
    println!("omega_k1 = {:.16e}", sector.omega_k1());
    println!("omega_k2 = {:.16e}", sector.omega_k2());
    println!("u_k = {u:.16e}");
    println!("v_k = {v:.16e}");
    println!("u_k^2 + v_k^2 = {:.16e}", u * u + v * v);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let mut d = ConfigDraft::default();
    match cli.command {
        Command::Qm {
            angle,
            spectrum,
            sweep,
            io,
        } => {
            apply_angle(&mut d, angle);
            d.omega1 = flag(spectrum.omega1);
            d.omega2 = flag(spectrum.omega2);
            d.phase_min = flag(sweep.phase_min);
            d.phase_max = flag(sweep.phase_max);
            d.n_points = flag(sweep.points);
            run_scenario(Mode::Qm, d, io)
        }
        Command::Qft {
            angle,
            sector,
            sweep,
            io,
        } => {
            apply_sector(&mut d, angle, sector, sweep);
            run_scenario(Mode::Qft, d, io)
        }
        Command::Compare {
            angle,
            sector,
            sweep,
            io,
        } => {
            apply_sector(&mut d, angle, sector, sweep);
            run_scenario(Mode::Compare, d, io)
        }
        Command::Verify { seed, points, io } => {
            if let Some(s) = seed {
                let s = i64::try_from(s).map_err(|_| Failure::Usage(format!("--seed {s} exceeds {}", i64::MAX)))?;
                d.seed = Some(Setting::flag(s));
            }
            d.points = flag(points);
            run_scenario(Mode::Verify, d, io)
        }
        Command::Bogoliubov { m1, m2, k } => bogoliubov(m1, m2, k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        // `nuent qm | head` closing the pipe is not an error
        Err(Failure::Scenario(ScenarioError::Io { source, .. })) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(Failure::Scenario(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(report)) => {
            for c in report.failures() {
                eprintln!(
                    "verify: FAIL {} residual {:.3e} > tolerance {:.0e}",
                    c.name, c.residual, c.tolerance
                );
            }
            ExitCode::from(2)
        }
    }
}
