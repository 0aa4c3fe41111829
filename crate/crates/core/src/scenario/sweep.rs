use crate::fock::{run_suite, VerificationReport};
use crate::qft;
use crate::qm::{self, MixingAngle};

use super::config::{Physics, ScenarioConfig, SectorSpec, SweepSpec};
use super::ScenarioError;

/// One table cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

/// Rows of a sweep plus the comment lines that describe them.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepTable {
    /// A numeric column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| *c == name)?;
        self.rows.iter().map(|r| r[j].as_f64()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub table: SweepTable,
    /// Present in verify mode.
    pub verification: Option<VerificationReport>,
}

/// `n` evenly spaced points from `min` to `max`, both included exactly.
pub fn grid(min: f64, max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { max } else { min + step * i as f64 })
                .collect()
        }
    }
}

pub const QM_COLUMNS: [&str; 12] = [
    "phase",
    "t",
    "p_ee",
    "p_emu",
    "s_linear",
    "s_linear_static",
    "var_n_e",
    "var_n_mass",
    "var_j1",
    "var_j2",
    "var_j3",
    "var_j2_quoted",
];

pub const QFT_COLUMNS: [&str; 8] = [
    "t",
    "phase_minus",
    "phase_plus",
    "q_ee",
    "q_emu",
    "var_q_e",
    "var_q_static",
    "condensation",
];

pub const COMPARE_COLUMNS: [&str; 10] = [
    "t",
    "phase",
    "p_ee",
    "p_emu",
    "q_ee",
    "q_emu",
    "s_linear_qm",
    "s_linear_qft",
    "gap",
    "gap_bound",
];

pub const VERIFY_COLUMNS: [&str; 4] = ["check", "residual", "tolerance", "status"];

pub fn run_sweep(cfg: &ScenarioConfig) -> Result<SweepOutcome, ScenarioError> {
    let theta = cfg.theta.angle()?;
    let mut comments = vec![format!("mode = {}", cfg.mode())];
    if !matches!(cfg.physics, Physics::Verify(_)) {
        comments.push(format!(
            "theta = {:.16e} rad, sin2_theta = {:.16e}, sin2_2theta = {:.16e}",
            theta.theta(),
            theta.sin_sq(),
            theta.sin_sq_2theta()
        ));
    }
    let (columns, rows, verification) = match cfg.physics {
        Physics::Qm { spectrum, sweep } => {
            comments.push(format!(
                "omega1 = {:.16e}, omega2 = {:.16e}; abscissa phase = (omega2 - omega1) t / 2, plotted as scaled time T",
                spectrum.omega1, spectrum.omega2
            ));
            (QM_COLUMNS.to_vec(), qm_rows(theta, spectrum, sweep), None)
        }
        Physics::Qft { sector, sweep } => {
            let (rows, note) = qft_rows(theta, sector, sweep)?;
            comments.push(note);
            (QFT_COLUMNS.to_vec(), rows, None)
        }
        Physics::Compare { sector, sweep } => {
            let (rows, note) = compare_rows(theta, sector, sweep)?;
            comments.push(note);
            comments.push("s_linear_qft = 4 var_q_e; gap = |q_ee - p_ee|; gap_bound = sin2_2theta v_k^2".into());
            (COMPARE_COLUMNS.to_vec(), rows, None)
        }
        Physics::Verify(v) => {
            let report = run_suite(v)?;
            comments.push(format!("seed = {}, points = {}", report.seed, report.points));
            comments.push(format!(
                "verdict = {}",
                if report.all_passed() { "pass" } else { "FAIL" }
            ));
            let rows = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        Cell::Text(c.name.clone()),
                        Cell::Num(c.residual),
                        Cell::Num(c.tolerance),
                        Cell::Text(c.status().into()),
                    ]
                })
                .collect();
            (VERIFY_COLUMNS.to_vec(), rows, Some(report))
        }
    };
    Ok(SweepOutcome {
        table: SweepTable {
            comments,
            columns,
            rows,
        },
        verification,
    })
}

fn nums(xs: &[f64]) -> Vec<Cell> {
    xs.iter().map(|x| Cell::Num(*x)).collect()
}

fn qm_rows(theta: MixingAngle, spectrum: qm::QmSpectrum, sweep: SweepSpec) -> Vec<Vec<Cell>> {
    let s_static = qm::linear_entropy_static(theta);
    let var_static = qm::variance_mass_number_static(theta);
    grid(sweep.min, sweep.max, sweep.n_points)
        .into_iter()
        .map(|phase| {
            let t = 2.0 * phase / spectrum.delta();
            let p = qm::probabilities_at_phase(theta, phase);
            let su2 = qm::variance_su2_flavor(theta, spectrum, t);
            let var_n = p.p_ee * p.p_emu;
            nums(&[
                phase,
                t,
                p.p_ee,
                p.p_emu,
                4.0 * var_n,
                s_static,
                var_n,
                var_static,
                su2.derived.j1,
                su2.derived.j2,
                su2.derived.j3,
                su2.quoted.j2,
            ])
        })
        .collect()
}

fn sector_note(sector: &qft::KinematicSector) -> String {
    format!(
        "m1 = {:.16e}, m2 = {:.16e}, k = {:.16e}, omega_k1 = {:.16e}, omega_k2 = {:.16e}, u_k = {:.16e}, v_k = {:.16e}",
        sector.m1(),
        sector.m2(),
        sector.k(),
        sector.omega_k1(),
        sector.omega_k2(),
        sector.u_k(),
        sector.v_k()
    )
}

fn qft_rows(theta: MixingAngle, spec: SectorSpec, sweep: SweepSpec) -> Result<(Vec<Vec<Cell>>, String), ScenarioError> {
    let sector = spec.build()?;
    let var_static = qft::charge_variance_static(theta);
    let cond = qft::condensation_density(theta, &sector);
    let rows = grid(sweep.min, sweep.max, sweep.n_points)
        .into_iter()
        .map(|t| {
            let q = qft::qft_oscillation(theta, &sector, t);
            nums(&[
                t,
                sector.phase_minus(t),
                sector.phase_plus(t),
                q.q_ee,
                q.q_emu,
                q.q_ee * q.q_emu,
                var_static,
                cond,
            ])
        })
        .collect();
    Ok((rows, sector_note(&sector)))
}

fn compare_rows(
    theta: MixingAngle,
    spec: SectorSpec,
    sweep: SweepSpec,
) -> Result<(Vec<Vec<Cell>>, String), ScenarioError> {
    let sector = spec.build()?;
    let qm_spec = sector.qm_spectrum();
    let bound = theta.sin_sq_2theta() * sector.v_k() * sector.v_k();
    let rows = grid(sweep.min, sweep.max, sweep.n_points)
        .into_iter()
        .map(|t| {
            let p = qm::transition_probabilities(theta, qm_spec, t);
            let q = qft::qft_oscillation(theta, &sector, t);
            nums(&[
                t,
                qm_spec.phase(t),
                p.p_ee,
                p.p_emu,
                q.q_ee,
                q.q_emu,
                4.0 * p.p_ee * p.p_emu,
                4.0 * q.q_ee * q.q_emu,
                (q.q_ee - p.p_ee).abs(),
                bound,
            ])
        })
        .collect();
    Ok((rows, sector_note(&sector)))
}
