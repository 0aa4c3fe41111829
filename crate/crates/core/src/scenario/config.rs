//! Scenario configuration.
//!
//! A scenario is a TOML document. Parsing happens in two steps: the text
//! becomes a [`ConfigDraft`] (every key optional, tagged with its source
//! line), command-line values may be laid over the draft, and
//! [`ConfigDraft::validate`] turns it into a [`ScenarioConfig`] or a
//! [`ConfigError`] listing every problem at once.
//!
//! ```toml
//! mode = "qm"            # qm | qft | compare | verify
//! sin2_theta = 0.314     # or theta_rad, not both
//!
//! [spectrum]             # qm only
//! omega1 = 1.0
//! omega2 = 2.0
//!
//! [sector]               # qft and compare only
//! m1 = 1.0
//! m2 = 2.0
//! k = 1.0
//!
//! [sweep]
//! phase_min = 0.0        # qm: phase (ω₂−ω₁)t/2
//! phase_max = 6.283185307179586
//! # t_min, t_max         # qft and compare: time
//! n_points = 200
//!
//! [verify]               # verify only
//! seed = 7
//! points = 128
//!
//! [output]
//! path = "out.csv"       # standard output when absent
//! format = "csv"         # csv | json-lines
//! ```

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::fock::VerifyConfig;
use crate::qft::KinematicSector;
use crate::qm::{MixingAngle, QmSpectrum};

/// sin²θ used when a scenario names no angle.
pub const DEFAULT_SIN2_THETA: f64 = 0.314;
pub const DEFAULT_POINTS: usize = 200;
pub const DEFAULT_OMEGAS: (f64, f64) = (1.0, 2.0);
pub const DEFAULT_SECTOR: SectorSpec = SectorSpec {
    m1: 1.0,
    m2: 2.0,
    k: 1.0,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Qm,
    Qft,
    Compare,
    Verify,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Qm => "qm",
            Mode::Qft => "qft",
            Mode::Compare => "compare",
            Mode::Verify => "verify",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qm" => Ok(Mode::Qm),
            "qft" => Ok(Mode::Qft),
            "compare" => Ok(Mode::Compare),
            "verify" => Ok(Mode::Verify),
            other => Err(format!("unknown mode `{other}`, expected qm, qft, compare or verify")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json-lines" => Ok(Format::JsonLines),
            other => Err(format!("unknown format `{other}`, expected csv or json-lines")),
        }
    }
}

/// The mixing angle as the user wrote it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaSpec {
    Radians(f64),
    SinSquared(f64),
}

impl ThetaSpec {
    pub fn angle(self) -> crate::Result<MixingAngle> {
        match self {
            ThetaSpec::Radians(t) => MixingAngle::new(t),
            ThetaSpec::SinSquared(s) => MixingAngle::from_sin_sq(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorSpec {
    pub m1: f64,
    pub m2: f64,
    pub k: f64,
}

impl SectorSpec {
    pub fn build(self) -> crate::Result<KinematicSector> {
        KinematicSector::new(self.m1, self.m2, self.k)
    }
}

/// Evenly spaced abscissa, endpoints included. The variable is the phase
/// in qm mode and the time otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Physics {
    Qm { spectrum: QmSpectrum, sweep: SweepSpec },
    Qft { sector: SectorSpec, sweep: SweepSpec },
    Compare { sector: SectorSpec, sweep: SweepSpec },
    Verify(VerifyConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// A validated scenario with every default resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub theta: ThetaSpec,
    pub physics: Physics,
    pub output: OutputSpec,
}

impl ScenarioConfig {
    pub fn mode(&self) -> Mode {
        match self.physics {
            Physics::Qm { .. } => Mode::Qm,
            Physics::Qft { .. } => Mode::Qft,
            Physics::Compare { .. } => Mode::Compare,
            Physics::Verify(_) => Mode::Verify,
        }
    }

    /// The fully resolved configuration as TOML; parsing it gives back an
    /// equal config.
    pub fn to_toml(&self) -> String {
        let (theta_rad, sin2_theta) = match (self.mode(), self.theta) {
            (Mode::Verify, _) => (None, None),
            (_, ThetaSpec::Radians(t)) => (Some(t), None),
            (_, ThetaSpec::SinSquared(s)) => (None, Some(s)),
        };
        let mut doc = EchoDoc {
            mode: self.mode().as_str(),
            theta_rad,
            sin2_theta,
            spectrum: None,
            sector: None,
            sweep: None,
            verify: None,
            output: EchoOutput {
                path: self.output.path.as_ref().map(|p| p.to_string_lossy().into_owned()),
                format: self.output.format.as_str(),
            },
        };
        let sector = |s: SectorSpec| EchoSector {
            m1: s.m1,
            m2: s.m2,
            k: s.k,
        };
        let time = |s: SweepSpec| EchoSweep {
            t_min: Some(s.min),
            t_max: Some(s.max),
            n_points: s.n_points as i64,
            ..EchoSweep::default()
        };
        match self.physics {
            Physics::Qm { spectrum, sweep } => {
                doc.spectrum = Some(EchoSpectrum {
                    omega1: spectrum.omega1,
                    omega2: spectrum.omega2,
                });
                doc.sweep = Some(EchoSweep {
                    phase_min: Some(sweep.min),
                    phase_max: Some(sweep.max),
                    n_points: sweep.n_points as i64,
                    ..EchoSweep::default()
                });
            }
            Physics::Qft { sector: s, sweep } | Physics::Compare { sector: s, sweep } => {
                doc.sector = Some(sector(s));
                doc.sweep = Some(time(sweep));
            }
            Physics::Verify(v) => {
                doc.verify = Some(EchoVerify {
                    seed: v.seed as i64,
                    points: v.points as i64,
                });
            }
        }
        toml::to_string(&doc).expect("echo document has only scalars and tables")
    }
}

#[derive(Serialize)]
struct EchoDoc {
    mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sin2_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectrum: Option<EchoSpectrum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sector: Option<EchoSector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<EchoSweep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<EchoVerify>,
    output: EchoOutput,
}

#[derive(Serialize)]
struct EchoSpectrum {
    omega1: f64,
    omega2: f64,
}

#[derive(Serialize)]
struct EchoSector {
    m1: f64,
    m2: f64,
    k: f64,
}

#[derive(Serialize, Default)]
struct EchoSweep {
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_max: Option<f64>,
    n_points: i64,
}

#[derive(Serialize)]
struct EchoVerify {
    seed: i64,
    points: i64,
}

#[derive(Serialize)]
struct EchoOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<String>,
    format: &'static str,
}

/// Where a value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command line"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Setting<T> {
    pub value: T,
    pub origin: Origin,
}

impl<T> Setting<T> {
    pub fn flag(value: T) -> Self {
        Self {
            value,
            origin: Origin::Flag,
        }
    }
}

/// One violated constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct Issue {
    pub key: String,
    pub origin: Option<Origin>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.origin {
            Some(o) => write!(f, "{o}: `{}`: {}", self.key, self.message),
            None => write!(f, "`{}`: {}", self.key, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub issues: Vec<Issue>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.issues.len();
        write!(f, "invalid scenario ({n} problem{})", if n == 1 { "" } else { "s" })?;
        for issue in &self.issues {
            write!(f, "\n  {issue}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Every key a scenario may hold, before validation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigDraft {
    pub mode: Option<Setting<Mode>>,
    pub theta_rad: Option<Setting<f64>>,
    pub sin2_theta: Option<Setting<f64>>,
    pub omega1: Option<Setting<f64>>,
    pub omega2: Option<Setting<f64>>,
    pub m1: Option<Setting<f64>>,
    pub m2: Option<Setting<f64>>,
    pub k: Option<Setting<f64>>,
    pub phase_min: Option<Setting<f64>>,
    pub phase_max: Option<Setting<f64>>,
    pub t_min: Option<Setting<f64>>,
    pub t_max: Option<Setting<f64>>,
    pub n_points: Option<Setting<i64>>,
    pub seed: Option<Setting<i64>>,
    pub points: Option<Setting<i64>>,
    pub path: Option<Setting<PathBuf>>,
    pub format: Option<Setting<Format>>,
}

const SECTIONS: [(&str, &[&str]); 5] = [
    ("spectrum", &["omega1", "omega2"]),
    ("sector", &["m1", "m2", "k"]),
    ("sweep", &["phase_min", "phase_max", "t_min", "t_max", "n_points"]),
    ("verify", &["seed", "points"]),
    ("output", &["path", "format"]),
];

const TOP_LEVEL: [&str; 3] = ["mode", "theta_rad", "sin2_theta"];

struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Self { starts }
    }

    fn line(&self, offset: usize) -> usize {
        self.starts.partition_point(|&s| s <= offset)
    }
}

enum Raw<'a> {
    Float(f64),
    Int(i64),
    Str(&'a str),
    Other(&'static str),
}

fn raw<'a>(v: &'a toml::Value) -> Raw<'a> {
    match v {
        toml::Value::Float(x) => Raw::Float(*x),
        toml::Value::Integer(i) => Raw::Int(*i),
        toml::Value::String(s) => Raw::Str(s),
        other => Raw::Other(other.type_str()),
    }
}

impl ConfigDraft {
    /// Parses TOML text. Syntax errors stop at the first problem; unknown
    /// keys and wrongly typed values are all collected.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let (draft, issues) = Self::from_toml_partial(text)?;
        if issues.is_empty() {
            Ok(draft)
        } else {
            Err(ConfigError { issues })
        }
    }

    /// Like [`ConfigDraft::from_toml`], but returns the keys that did parse
    /// alongside the problems, so validation can report on the rest.
    pub fn from_toml_partial(text: &str) -> Result<(Self, Vec<Issue>), ConfigError> {
        let lines = LineIndex::new(text);
        let spanned = DeTable::parse(text).map_err(|e| syntax_error(&e, &lines))?;
        let values: toml::Table = toml::from_str(text).map_err(|e| syntax_error(&e, &lines))?;

        let mut draft = ConfigDraft::default();
        let mut issues = Vec::new();
        let line_of = |key: &Spanned<std::borrow::Cow<'_, str>>| Origin::Line(lines.line(key.span().start));

        for (key, value) in spanned.get_ref() {
            let name: &str = key.get_ref();
            let origin = line_of(key);
            if TOP_LEVEL.contains(&name) {
                draft.set(name, &values[name], origin, &mut issues);
                continue;
            }
            let Some((_, allowed)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
                issues.push(Issue {
                    key: name.to_string(),
                    origin: Some(origin),
                    message: "unknown key".into(),
                });
                continue;
            };
            let (DeValue::Table(inner), Some(toml::Value::Table(inner_values))) = (value.get_ref(), values.get(name))
            else {
                issues.push(Issue {
                    key: name.to_string(),
                    origin: Some(origin),
                    message: "expected a table".into(),
                });
                continue;
            };
            for (sub, _) in inner {
                let sub_name: &str = sub.get_ref();
                let full = format!("{name}.{sub_name}");
                let origin = line_of(sub);
                if allowed.contains(&sub_name) {
                    draft.set(&full, &inner_values[sub_name], origin, &mut issues);
                } else {
                    issues.push(Issue {
                        key: full,
                        origin: Some(origin),
                        message: "unknown key".into(),
                    });
                }
            }
        }
        Ok((draft, issues))
    }

    fn set(&mut self, key: &str, value: &toml::Value, origin: Origin, issues: &mut Vec<Issue>) {
        let mut bad = |expected: &str, got: &str| {
            issues.push(Issue {
                key: key.to_string(),
                origin: Some(origin),
                message: format!("expected {expected}, got {got}"),
            })
        };
        let float = |v: &toml::Value| match raw(v) {
            Raw::Float(x) => Ok(x),
            Raw::Int(i) => Ok(i as f64),
            Raw::Str(_) => Err("string"),
            Raw::Other(t) => Err(t),
        };

        macro_rules! float_key {
            ($field:ident) => {
                match float(value) {
                    Ok(x) => self.$field = Some(Setting { value: x, origin }),
                    Err(t) => bad("a number", t),
                }
            };
        }
        macro_rules! int_key {
            ($field:ident) => {
                match raw(value) {
                    Raw::Int(i) => self.$field = Some(Setting { value: i, origin }),
                    Raw::Float(_) => bad("an integer", "float"),
                    Raw::Str(_) => bad("an integer", "string"),
                    Raw::Other(t) => bad("an integer", t),
                }
            };
        }
        macro_rules! str_key {
            ($field:ident, $parse:expr) => {
                match raw(value) {
                    Raw::Str(s) => match $parse(s) {
                        Ok(v) => self.$field = Some(Setting { value: v, origin }),
                        Err(msg) => issues.push(Issue {
                            key: key.to_string(),
                            origin: Some(origin),
                            message: msg,
                        }),
                    },
                    Raw::Float(_) => bad("a string", "float"),
                    Raw::Int(_) => bad("a string", "integer"),
                    Raw::Other(t) => bad("a string", t),
                }
            };
        }

        match key {
            "mode" => str_key!(mode, Mode::from_str),
            "theta_rad" => float_key!(theta_rad),
            "sin2_theta" => float_key!(sin2_theta),
            "spectrum.omega1" => float_key!(omega1),
            "spectrum.omega2" => float_key!(omega2),
            "sector.m1" => float_key!(m1),
            "sector.m2" => float_key!(m2),
            "sector.k" => float_key!(k),
            "sweep.phase_min" => float_key!(phase_min),
            "sweep.phase_max" => float_key!(phase_max),
            "sweep.t_min" => float_key!(t_min),
            "sweep.t_max" => float_key!(t_max),
            "sweep.n_points" => int_key!(n_points),
            "verify.seed" => int_key!(seed),
            "verify.points" => int_key!(points),
            "output.path" => str_key!(path, |s: &str| Ok::<_, String>(PathBuf::from(s))),
            "output.format" => str_key!(format, Format::from_str),
            _ => unreachable!("key list and setters agree"),
        }
    }

    /// Lays `flags` over this draft; any value present in `flags` wins.
    ///
    /// The angle is replaced as a unit, so a flag `sin2_theta` drops a
    /// file `theta_rad`. A mode present in both must agree.
    pub fn overlay(&mut self, flags: ConfigDraft) -> Result<(), ConfigError> {
        if let (Some(file), Some(flag)) = (&self.mode, &flags.mode) {
            if file.value != flag.value {
                return Err(ConfigError {
                    issues: vec![Issue {
                        key: "mode".into(),
                        origin: Some(file.origin),
                        message: format!(
                            "config file says `{}` but the subcommand is `{}`",
                            file.value, flag.value
                        ),
                    }],
                });
            }
        }
        if flags.theta_rad.is_some() || flags.sin2_theta.is_some() {
            self.theta_rad = flags.theta_rad.clone();
            self.sin2_theta = flags.sin2_theta.clone();
        }
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() {
                    self.$field = flags.$field;
                })*
            };
        }
        take!(
            mode, omega1, omega2, m1, m2, k, phase_min, phase_max, t_min, t_max, n_points, seed, points, path, format
        );
        Ok(())
    }

    /// Validates, prepending `earlier` problems (say, from parsing) to any
    /// found here. Issues come out ordered by line, flags last.
    pub fn validate_after(&self, earlier: Vec<Issue>) -> Result<ScenarioConfig, ConfigError> {
        match (self.validate(), earlier.is_empty()) {
            (Ok(cfg), true) => Ok(cfg),
            (Ok(_), false) => Err(ConfigError { issues: earlier }),
            (Err(e), _) => {
                let mut issues = earlier;
                issues.extend(e.issues);
                issues.sort_by_key(|i| match i.origin {
                    Some(Origin::Line(n)) => (0, n),
                    Some(Origin::Flag) => (1, 0),
                    None => (2, 0),
                });
                Err(ConfigError { issues })
            }
        }
    }

    /// Checks every constraint and resolves defaults.
    pub fn validate(&self) -> Result<ScenarioConfig, ConfigError> {
        let mut v = Validator::default();

        let theta = match (&self.theta_rad, &self.sin2_theta) {
            (Some(a), Some(b)) => {
                v.issue(
                    "theta_rad",
                    Some(a.origin),
                    format!(
                        "`theta_rad` and `sin2_theta` are mutually exclusive (other one at {})",
                        b.origin
                    ),
                );
                None
            }
            (Some(t), None) => v
                .check(
                    t,
                    "theta_rad",
                    (0.0..=FRAC_PI_2).contains(&t.value),
                    "must lie in [0, π/2]",
                )
                .map(ThetaSpec::Radians),
            (None, Some(s)) => v
                .check(s, "sin2_theta", (0.0..=1.0).contains(&s.value), "must lie in [0, 1]")
                .map(ThetaSpec::SinSquared),
            (None, None) => Some(ThetaSpec::SinSquared(DEFAULT_SIN2_THETA)),
        };

        let Some(mode) = self.mode.as_ref().map(|m| m.value) else {
            v.issue("mode", None, "missing required key (qm, qft, compare or verify)".into());
            return Err(v.finish());
        };

        let spectrum_keys = [("spectrum.omega1", &self.omega1), ("spectrum.omega2", &self.omega2)];
        let sector_keys = [("sector.m1", &self.m1), ("sector.m2", &self.m2), ("sector.k", &self.k)];
        let phase_keys = [
            ("sweep.phase_min", &self.phase_min),
            ("sweep.phase_max", &self.phase_max),
        ];
        let time_keys = [("sweep.t_min", &self.t_min), ("sweep.t_max", &self.t_max)];
        let uses_sweep = mode != Mode::Verify;
        v.forbid(
            mode,
            &[("theta_rad", &self.theta_rad), ("sin2_theta", &self.sin2_theta)],
            uses_sweep,
        );
        v.forbid(mode, &spectrum_keys, mode == Mode::Qm);
        v.forbid(mode, &sector_keys, matches!(mode, Mode::Qft | Mode::Compare));
        v.forbid(mode, &phase_keys, mode == Mode::Qm);
        v.forbid(mode, &time_keys, matches!(mode, Mode::Qft | Mode::Compare));
        v.forbid_int(mode, "sweep.n_points", &self.n_points, uses_sweep);
        v.forbid_int(mode, "verify.seed", &self.seed, mode == Mode::Verify);
        v.forbid_int(mode, "verify.points", &self.points, mode == Mode::Verify);

        let n_points = match &self.n_points {
            Some(n) => v
                .check(n, "sweep.n_points", n.value >= 2, "must be at least 2")
                .map(|n| n as usize),
            None => Some(DEFAULT_POINTS),
        };

        let physics = match mode {
            Mode::Qm => {
                let w1 = v.finite_or("spectrum.omega1", &self.omega1, DEFAULT_OMEGAS.0);
                let w2 = v.finite_or("spectrum.omega2", &self.omega2, DEFAULT_OMEGAS.1);
                let spectrum = match (w1, w2) {
                    (Some(a), Some(b)) if a == b => {
                        v.issue(
                            "spectrum.omega2",
                            self.omega2.as_ref().map(|s| s.origin),
                            "must differ from spectrum.omega1: the qm abscissa is the phase (ω₂−ω₁)t/2".into(),
                        );
                        None
                    }
                    (Some(a), Some(b)) => QmSpectrum::new(a, b).ok(),
                    _ => None,
                };
                let range = v.range(
                    ("sweep.phase_min", &self.phase_min),
                    ("sweep.phase_max", &self.phase_max),
                    || Some((0.0, TAU)),
                );
                match (spectrum, range, n_points) {
                    (Some(spectrum), Some((min, max)), Some(n_points)) => Some(Physics::Qm {
                        spectrum,
                        sweep: SweepSpec { min, max, n_points },
                    }),
                    _ => None,
                }
            }
            Mode::Qft | Mode::Compare => {
                let m1 = v.positive_or("sector.m1", &self.m1, DEFAULT_SECTOR.m1);
                let m2 = v.positive_or("sector.m2", &self.m2, DEFAULT_SECTOR.m2);
                let k = v.finite_or("sector.k", &self.k, DEFAULT_SECTOR.k);
                if let (Some(k), Some(s)) = (k, &self.k) {
                    if k < 0.0 {
                        v.issue("sector.k", Some(s.origin), "must be non-negative".into());
                    }
                }
                let sector = match (m1, m2, k) {
                    (Some(m1), Some(m2), Some(k)) if k >= 0.0 => Some(SectorSpec { m1, m2, k }),
                    _ => None,
                };
                let built = sector.and_then(|s| s.build().ok());
                let range = v.range(("sweep.t_min", &self.t_min), ("sweep.t_max", &self.t_max), || {
                    built.map(|b| (0.0, default_time_span(&b)))
                });
                match (sector, range, n_points) {
                    (Some(sector), Some((min, max)), Some(n_points)) => {
                        let sweep = SweepSpec { min, max, n_points };
                        Some(if mode == Mode::Qft {
                            Physics::Qft { sector, sweep }
                        } else {
                            Physics::Compare { sector, sweep }
                        })
                    }
                    _ => None,
                }
            }
            Mode::Verify => {
                let defaults = VerifyConfig::default();
                let seed = match &self.seed {
                    Some(s) => v
                        .check(s, "verify.seed", s.value >= 0, "must be non-negative")
                        .map(|s| s as u64),
                    None => Some(defaults.seed),
                };
                let points = match &self.points {
                    Some(p) => v
                        .check(p, "verify.points", p.value >= 1, "must be at least 1")
                        .map(|p| p as usize),
                    None => Some(defaults.points),
                };
                match (seed, points) {
                    (Some(seed), Some(points)) => Some(Physics::Verify(VerifyConfig { seed, points })),
                    _ => None,
                }
            }
        };

        let output = OutputSpec {
            path: self.path.as_ref().map(|p| p.value.clone()),
            format: self.format.as_ref().map_or(Format::Csv, |f| f.value),
        };

        match (theta, physics) {
            (Some(theta), Some(physics)) if v.issues.is_empty() => Ok(ScenarioConfig { theta, physics, output }),
            _ => Err(v.finish()),
        }
    }
}

/// Two periods of the slow oscillation, or of the fast one when the
/// energies coincide.
pub fn default_time_span(sector: &KinematicSector) -> f64 {
    let dw = (sector.omega_k2() - sector.omega_k1()).abs();
    if dw > 0.0 {
        4.0 * PI / dw
    } else {
        4.0 * PI / (sector.omega_k1() + sector.omega_k2())
    }
}

/// Parses and validates a scenario in one step, reporting every problem.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let (draft, issues) = ConfigDraft::from_toml_partial(text)?;
    draft.validate_after(issues)
}

#[derive(Default)]
struct Validator {
    issues: Vec<Issue>,
}

impl Validator {
    fn issue(&mut self, key: &str, origin: Option<Origin>, message: String) {
        self.issues.push(Issue {
            key: key.to_string(),
            origin,
            message,
        });
    }

    fn check<T: Copy + fmt::Display>(&mut self, s: &Setting<T>, key: &str, ok: bool, what: &str) -> Option<T> {
        if ok {
            Some(s.value)
        } else {
            self.issue(key, Some(s.origin), format!("{what}, got {}", s.value));
            None
        }
    }

    fn finite_or(&mut self, key: &str, s: &Option<Setting<f64>>, default: f64) -> Option<f64> {
        match s {
            Some(s) => self.check(s, key, s.value.is_finite(), "must be finite"),
            None => Some(default),
        }
    }

    fn positive_or(&mut self, key: &str, s: &Option<Setting<f64>>, default: f64) -> Option<f64> {
        match s {
            Some(s) => self.check(
                s,
                key,
                s.value.is_finite() && s.value > 0.0,
                "must be positive and finite",
            ),
            None => Some(default),
        }
    }

    fn range(
        &mut self,
        lo: (&str, &Option<Setting<f64>>),
        hi: (&str, &Option<Setting<f64>>),
        default: impl FnOnce() -> Option<(f64, f64)>,
    ) -> Option<(f64, f64)> {
        let fallback = default();
        let a = match lo.1 {
            Some(s) => self.check(s, lo.0, s.value.is_finite(), "must be finite"),
            None => fallback.map(|d| d.0),
        };
        let b = match hi.1 {
            Some(s) => self.check(s, hi.0, s.value.is_finite(), "must be finite"),
            None => fallback.map(|d| d.1),
        };
        match (a, b) {
            (Some(a), Some(b)) if a < b => Some((a, b)),
            (Some(a), Some(b)) => {
                let origin = lo.1.as_ref().or(hi.1.as_ref()).map(|s| s.origin);
                self.issue(lo.0, origin, format!("must be less than `{}` ({a} ≥ {b})", hi.0));
                None
            }
            _ => None,
        }
    }

    fn forbid(&mut self, mode: Mode, keys: &[(&str, &Option<Setting<f64>>)], allowed: bool) {
        if allowed {
            return;
        }
        for (key, s) in keys {
            if let Some(s) = s {
                self.issue(key, Some(s.origin), format!("not used in {mode} mode"));
            }
        }
    }

    fn forbid_int(&mut self, mode: Mode, key: &str, s: &Option<Setting<i64>>, allowed: bool) {
        if let (false, Some(s)) = (allowed, s) {
            self.issue(key, Some(s.origin), format!("not used in {mode} mode"));
        }
    }

    fn finish(self) -> ConfigError {
        ConfigError { issues: self.issues }
    }
}

fn syntax_error(e: &toml::de::Error, lines: &LineIndex) -> ConfigError {
    ConfigError {
        issues: vec![Issue {
            key: "<document>".into(),
            origin: e.span().map(|s| Origin::Line(lines.line(s.start))),
            message: e.message().to_string(),
        }],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_qm_gets_defaults() {
        let cfg = parse_config("mode = \"qm\"\nsin2_theta = 0.314\n").unwrap();
        assert_eq!(cfg.theta, ThetaSpec::SinSquared(0.314));
        assert_eq!(
            cfg.physics,
            Physics::Qm {
                spectrum: QmSpectrum::new(1.0, 2.0).unwrap(),
                sweep: SweepSpec {
                    min: 0.0,
                    max: TAU,
                    n_points: 200
                },
            }
        );
        assert_eq!(cfg.output.format, Format::Csv);
        assert!(cfg.output.path.is_none());
    }

    #[test]
    fn missing_angle_defaults() {
        let cfg = parse_config("mode = \"verify\"").unwrap();
        assert_eq!(cfg.theta, ThetaSpec::SinSquared(DEFAULT_SIN2_THETA));
        assert_eq!(cfg.physics, Physics::Verify(VerifyConfig::default()));
        // the suite samples its own angles
        let err = parse_config("mode = \"verify\"\ntheta_rad = 0.1").unwrap_err();
        assert_eq!(err.issues[0].key, "theta_rad");
    }

    #[test]
    fn range_error_names_key_and_line() {
        let err = parse_config("mode = \"qm\"\nsin2_theta = 1.5\n").unwrap_err();
        assert_eq!(err.issues.len(), 1);
        assert_eq!(err.issues[0].key, "sin2_theta");
        assert_eq!(err.issues[0].origin, Some(Origin::Line(2)));
    }

    #[test]
    fn ambiguous_angle() {
        let err = parse_config("mode = \"qm\"\ntheta_rad = 0.5\nsin2_theta = 0.3\n").unwrap_err();
        assert!(err.issues[0].message.contains("mutually exclusive"));
    }

    #[test]
    fn collects_every_problem() {
        let text = "mode = \"qm\"\ncolour = 3\n[sweep]\nn_points = 1\nphase_min = 2.0\nphase_max = 1.0\n[sector]\nm1 = 1.0\n[output]\nformat = \"xml\"\n";
        let err = ConfigDraft::from_toml(text).unwrap_err();
        let keys: Vec<_> = err.issues.iter().map(|i| i.key.as_str()).collect();
        assert_eq!(keys, ["colour", "output.format"]);
        assert_eq!(err.issues[0].origin, Some(Origin::Line(2)));
        assert_eq!(err.issues[1].origin, Some(Origin::Line(10)));

        let text = "mode = \"qm\"\n[sweep]\nn_points = 1\nphase_min = 2.0\nphase_max = 1.0\n[sector]\nm1 = 1.0\n";
        let err = parse_config(text).unwrap_err();
        let mut keys: Vec<_> = err.issues.iter().map(|i| i.key.clone()).collect();
        keys.sort();
        assert_eq!(keys, ["sector.m1", "sweep.n_points", "sweep.phase_min"]);
    }

    #[test]
    fn type_errors() {
        let err = parse_config("mode = \"qft\"\n[sector]\nm1 = \"heavy\"\n").unwrap_err();
        assert_eq!(err.issues[0].key, "sector.m1");
        assert!(err.issues[0].message.contains("expected a number"));
        let err = parse_config("mode = 3").unwrap_err();
        assert_eq!(err.issues[0].key, "mode");
    }

    #[test]
    fn missing_mode() {
        let err = parse_config("sin2_theta = 0.2").unwrap_err();
        assert_eq!(err.issues[0].key, "mode");
    }

    #[test]
    fn syntax_error_has_line() {
        let err = parse_config("mode = \"qm\"\n\nsin2_theta = = 3\n").unwrap_err();
        assert_eq!(err.issues[0].origin, Some(Origin::Line(3)));
    }

    #[test]
    fn qft_default_time_span() {
        let cfg = parse_config("mode = \"qft\"\n").unwrap();
        let Physics::Qft { sector, sweep } = cfg.physics else {
            panic!("wrong mode")
        };
        assert_eq!(sector, DEFAULT_SECTOR);
        let built = sector.build().unwrap();
        assert_eq!(sweep.max, 4.0 * PI / (built.omega_k2() - built.omega_k1()));
        // equal masses fall back to the fast period
        let cfg = parse_config("mode = \"compare\"\n[sector]\nm1 = 1.5\nm2 = 1.5\nk = 2.0\n").unwrap();
        let Physics::Compare { sweep, .. } = cfg.physics else {
            panic!("wrong mode")
        };
        assert_eq!(sweep.max, 4.0 * PI / 5.0);
    }

    #[test]
    fn overlay_rules() {
        let mut draft = ConfigDraft::from_toml("mode = \"qm\"\ntheta_rad = 0.4\n[sweep]\nn_points = 9\n").unwrap();
        let flags = ConfigDraft {
            sin2_theta: Some(Setting::flag(0.5)),
            n_points: Some(Setting::flag(11)),
            ..ConfigDraft::default()
        };
        draft.overlay(flags).unwrap();
        let cfg = draft.validate().unwrap();
        assert_eq!(cfg.theta, ThetaSpec::SinSquared(0.5));
        let Physics::Qm { sweep, .. } = cfg.physics else {
            panic!("wrong mode")
        };
        assert_eq!(sweep.n_points, 11);

        let mut draft = ConfigDraft::from_toml("mode = \"qft\"").unwrap();
        let err = draft
            .overlay(ConfigDraft {
                mode: Some(Setting::flag(Mode::Qm)),
                ..ConfigDraft::default()
            })
            .unwrap_err();
        assert!(err.issues[0].message.contains("subcommand"));
    }

    #[test]
    fn echo_round_trips() {
        for text in [
            "mode = \"qm\"\ntheta_rad = 0.7\n[output]\npath = \"a b.csv\"\nformat = \"json-lines\"\n",
            "mode = \"compare\"\nsin2_theta = 0.1\n[sector]\nm1 = 0.3\nm2 = 4\nk = 0\n[sweep]\nt_min = -1\nt_max = 3.5\n",
            "mode = \"verify\"\n[verify]\nseed = 99\npoints = 5\n",
        ] {
            let cfg = parse_config(text).unwrap();
            assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
        }
    }
}
