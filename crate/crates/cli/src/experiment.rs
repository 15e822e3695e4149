//! Experiment descriptions and their flat `key = value` text format.
//!
//! ```text
//! # comments run to the end of the line
//! scenario = internal
//! sweep = d_u2
//! sweep_start = 2.5
//! sweep_stop = 4
//! sweep_step = 0.1
//! schemes = proposed_internal, baseline_alg4
//! array_sizes = 8x16, 16x32
//! los_phase = uniform
//! ```
//!
//! Keys that are not experiment-level settings are overrides of the system
//! configuration or node positions; see [`OVERRIDE_KEYS`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use risnoma::metrics::monte_carlo::Scenario;
use risnoma::model::{AllocationTarget, Deployment, LosPhase, Placement, Point, SystemConfig};
use risnoma::SchemeId;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Only the near user eavesdrops.
    Internal,
    /// External eavesdroppers whose CSI the BS does not know.
    ExternalNoCsi,
    /// External eavesdroppers with known CSI.
    ExternalCsi,
    /// Users and eavesdroppers drawn inside disks every trial.
    DynamicUsers,
    /// Internal eavesdropping with estimated CSI at the BS.
    ImperfectCsi,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Internal,
        ScenarioKind::ExternalNoCsi,
        ScenarioKind::ExternalCsi,
        ScenarioKind::DynamicUsers,
        ScenarioKind::ImperfectCsi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Internal => "internal",
            ScenarioKind::ExternalNoCsi => "external_no_csi",
            ScenarioKind::ExternalCsi => "external_csi",
            ScenarioKind::DynamicUsers => "dynamic_users",
            ScenarioKind::ImperfectCsi => "imperfect_csi",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::config("scenario", format!("unknown scenario `{s}`")))
    }
}

/// The variable swept along the x-axis of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    DU2,
    DRx,
    Psi,
    PDbm,
    T,
    Ns,
    Nr,
}

impl SweepVar {
    pub const ALL: [SweepVar; 7] =
        [SweepVar::DU2, SweepVar::DRx, SweepVar::Psi, SweepVar::PDbm, SweepVar::T, SweepVar::Ns, SweepVar::Nr];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::DU2 => "d_u2",
            SweepVar::DRx => "d_rx",
            SweepVar::Psi => "psi",
            SweepVar::PDbm => "p_dbm",
            SweepVar::T => "t",
            SweepVar::Ns => "ns",
            SweepVar::Nr => "nr",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, SweepVar::Ns | SweepVar::Nr)
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepVar {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CliError::config("sweep", format!("unknown sweep variable `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    /// `start, start + step, ...` up to `stop` (inclusive, with a small
    /// tolerance so that decimal steps reach the endpoint).
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

/// Keys that override the system configuration or node placement.
pub const OVERRIDE_KEYS: [&str; 23] = [
    "ns",
    "nr",
    "m",
    "p_dbm",
    "n0_dbm",
    "k_factor",
    "path_loss_exponent",
    "r1_th",
    "r2_th",
    "epsilon",
    "max_iters",
    "los_phase",
    "allocation_target",
    "psi",
    "d_rx",
    "d_ry",
    "d_u1",
    "d_u2",
    "eav_min",
    "eav_max",
    "eav_center",
    "user_radius",
    "t",
];

const MAX_SWEEP_POINTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub scenario: ScenarioKind,
    pub sweep: Sweep,
    pub schemes: Vec<SchemeId>,
    pub trials: usize,
    pub seed: u64,
    pub output: PathBuf,
    /// `(Ns, Nr)` variants; empty means the base configuration only.
    pub array_sizes: Vec<(usize, usize)>,
    /// Eavesdropper-count variants; empty means the scenario default.
    pub eavesdropper_counts: Vec<usize>,
    pub overrides: BTreeMap<String, String>,
}

/// One system variant of an experiment (a curve family in a figure).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variant {
    pub ns: usize,
    pub nr: usize,
    pub m: usize,
}

/// A fully resolved sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub variant: Variant,
    pub value: f64,
    pub scenario: Scenario,
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::config(key, format!("cannot parse `{value}`")))
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let x: f64 = parse_num(key, value)?;
    if !x.is_finite() {
        return Err(CliError::config(key, "must be finite"));
    }
    Ok(x)
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_array(item: &str) -> Result<(usize, usize)> {
    let (ns, nr) = item
        .split_once(['x', 'X'])
        .ok_or_else(|| CliError::config("array_sizes", format!("expected NsxNr, got `{item}`")))?;
    let ns: usize = parse_num("array_sizes", ns.trim())?;
    let nr: usize = parse_num("array_sizes", nr.trim())?;
    if ns == 0 || nr == 0 {
        return Err(CliError::config("array_sizes", "array sizes must be positive"));
    }
    Ok((ns, nr))
}

/// Resolved system and placement parameters of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub cfg: SystemConfig,
    pub d_rx: f64,
    pub d_ry: f64,
    pub d_u1: f64,
    pub d_u2: f64,
    pub eav_min: f64,
    pub eav_max: f64,
    /// x-coordinate of the eavesdroppers' disk centre (dynamic users).
    pub eav_center: f64,
    /// Radius of every placement disk (dynamic users).
    pub user_radius: f64,
    pub t: f64,
}

impl Params {
    pub fn defaults(kind: ScenarioKind) -> Self {
        let mut p = Params {
            cfg: SystemConfig::default(),
            d_rx: 0.5,
            d_ry: 0.5,
            d_u1: 2.0,
            d_u2: 3.0,
            eav_min: 1.0,
            eav_max: 1.5,
            eav_center: 2.0,
            user_radius: 0.5,
            t: 0.0,
        };
        match kind {
            ScenarioKind::Internal | ScenarioKind::ImperfectCsi => {}
            ScenarioKind::ExternalNoCsi | ScenarioKind::ExternalCsi => p.cfg.m = 10,
            ScenarioKind::DynamicUsers => {
                p.cfg.m = 10;
                p.d_ry = 1.0;
                p.d_u1 = 3.0;
                p.d_u2 = 4.0;
            }
        }
        p
    }

    /// Applies one override key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let positive_int = |v: &str| -> Result<usize> {
            let n: usize = parse_num(key, v)?;
            if n == 0 {
                return Err(CliError::config(key, "must be at least 1"));
            }
            Ok(n)
        };
        let c = &mut self.cfg;
        match key {
            "ns" => c.ns = positive_int(value)?,
            "nr" => c.nr = positive_int(value)?,
            "m" => c.m = parse_num(key, value)?,
            "max_iters" => c.max_iters = positive_int(value)?,
            "los_phase" => c.los_phase = value.parse::<LosPhase>().map_err(|e| CliError::config(key, e.to_string()))?,
            "allocation_target" => {
                c.allocation_target =
                    value.parse::<AllocationTarget>().map_err(|e| CliError::config(key, e.to_string()))?
            }
            "p_dbm" => c.p_dbm = parse_f64(key, value)?,
            "n0_dbm" => c.n0_dbm = parse_f64(key, value)?,
            "k_factor" => c.k_factor = parse_f64(key, value)?,
            "path_loss_exponent" => c.path_loss_exponent = parse_f64(key, value)?,
            "r1_th" => c.r1_th = parse_f64(key, value)?,
            "r2_th" => c.r2_th = parse_f64(key, value)?,
            "epsilon" => c.epsilon = parse_f64(key, value)?,
            "psi" => c.psi = parse_f64(key, value)?,
            "d_rx" => self.d_rx = parse_f64(key, value)?,
            "d_ry" => self.d_ry = parse_f64(key, value)?,
            "d_u1" => self.d_u1 = parse_f64(key, value)?,
            "d_u2" => self.d_u2 = parse_f64(key, value)?,
            "eav_min" => self.eav_min = parse_f64(key, value)?,
            "eav_max" => self.eav_max = parse_f64(key, value)?,
            "eav_center" => self.eav_center = parse_f64(key, value)?,
            "user_radius" => self.user_radius = parse_f64(key, value)?,
            "t" => self.t = parse_f64(key, value)?,
            other => return Err(CliError::config(other, "unknown key")),
        }
        self.check(key)
    }

    fn check(&self, key: &str) -> Result<()> {
        let c = &self.cfg;
        let bad = |msg: &str| Err(CliError::config(key, msg));
        match key {
            "psi" if !(c.psi > 0.0 && c.psi <= 1.0) => bad("must lie in (0, 1]"),
            "k_factor" if c.k_factor <= 0.0 => bad("must be positive"),
            "path_loss_exponent" if c.path_loss_exponent < 0.0 => bad("must be non-negative"),
            "epsilon" if c.epsilon <= 0.0 => bad("must be positive"),
            "r1_th" | "r2_th" if c.r1_th < 0.0 || c.r2_th < 0.0 => bad("must be non-negative"),
            "t" if self.t < 0.0 => bad("must be non-negative"),
            "user_radius" if self.user_radius < 0.0 => bad("must be non-negative"),
            "eav_min" | "eav_max" if self.eav_min > self.eav_max => bad("eav_min must not exceed eav_max"),
            _ => Ok(()),
        }
    }

    fn set_sweep(&mut self, var: SweepVar, x: f64) -> Result<()> {
        let text = if var.is_integer() { format!("{}", x.round() as i64) } else { format!("{x}") };
        self.set(var.as_str(), &text)
    }

    pub fn scenario(&self, kind: ScenarioKind) -> Scenario {
        let on_axis = |x: f64| Placement::Fixed(Point::new(x, 0.0));
        let disk = |x: f64| Placement::Disk { center: Point::new(x, 0.0), radius: self.user_radius };
        let deployment = match kind {
            ScenarioKind::DynamicUsers => Deployment {
                ris: Point::new(self.d_rx, self.d_ry),
                u1: disk(self.d_u1),
                u2: disk(self.d_u2),
                eavesdroppers: disk(self.eav_center),
            },
            _ => Deployment {
                ris: Point::new(self.d_rx, self.d_ry),
                u1: on_axis(self.d_u1),
                u2: on_axis(self.d_u2),
                eavesdroppers: Placement::AxisInterval { lo: self.eav_min, hi: self.eav_max },
            },
        };
        Scenario {
            cfg: self.cfg.clone(),
            deployment,
            csi_error: (kind == ScenarioKind::ImperfectCsi).then_some(self.t),
        }
    }
}

impl Experiment {
    /// An experiment with defaults for everything but the scenario, sweep
    /// and schemes.
    pub fn new(scenario: ScenarioKind, sweep: Sweep, schemes: Vec<SchemeId>) -> Self {
        Self {
            scenario,
            sweep,
            schemes,
            trials: 1000,
            seed: 0,
            output: PathBuf::from("results.csv"),
            array_sizes: Vec::new(),
            eavesdropper_counts: Vec::new(),
            overrides: BTreeMap::new(),
        }
    }

    /// Parses the text format. Every required key must be present once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("line {}", lineno + 1), format!("expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim().to_string();
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::config(key, "given more than once"));
            }
        }
        let take = |entries: &mut BTreeMap<String, String>, key: &str| {
            entries.remove(key).ok_or_else(|| CliError::config(key, "missing required key"))
        };
        let scenario: ScenarioKind = take(&mut entries, "scenario")?.parse()?;
        let sweep = Sweep {
            var: take(&mut entries, "sweep")?.parse()?,
            start: parse_f64("sweep_start", &take(&mut entries, "sweep_start")?)?,
            stop: parse_f64("sweep_stop", &take(&mut entries, "sweep_stop")?)?,
            step: parse_f64("sweep_step", &take(&mut entries, "sweep_step")?)?,
        };
        let mut exp = Experiment::new(scenario, sweep, Vec::new());
        let schemes = take(&mut entries, "schemes")?;
        exp.set("schemes", &schemes)?;
        for (key, value) in entries {
            exp.set(&key, &value)?;
        }
        Ok(exp)
    }

    /// Sets any key of the text format, experiment-level or override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "scenario" => self.scenario = value.parse()?,
            "sweep" => self.sweep.var = value.parse()?,
            "sweep_start" => self.sweep.start = parse_f64(key, value)?,
            "sweep_stop" => self.sweep.stop = parse_f64(key, value)?,
            "sweep_step" => self.sweep.step = parse_f64(key, value)?,
            "schemes" => {
                self.schemes = split_list(value)
                    .map(|s| s.parse::<SchemeId>().map_err(|e| CliError::config(key, e.to_string())))
                    .collect::<Result<_>>()?
            }
            "trials" => self.trials = parse_num(key, value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "output" => self.output = PathBuf::from(value),
            "array_sizes" => self.array_sizes = split_list(value).map(parse_array).collect::<Result<_>>()?,
            "eavesdropper_counts" => {
                self.eavesdropper_counts = split_list(value).map(|v| parse_num(key, v)).collect::<Result<_>>()?
            }
            _ if OVERRIDE_KEYS.contains(&key) => {
                // Type- and range-check eagerly so errors name the key.
                Params::defaults(self.scenario).set(key, value)?;
                self.overrides.insert(key.to_string(), value.to_string());
            }
            _ => return Err(CliError::config(key, "unknown key")),
        }
        Ok(())
    }

    /// Renders the text format; parsing the result yields `self` again.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let list = |items: Vec<String>| items.join(", ");
        let _ = writeln!(s, "scenario = {}", self.scenario);
        let _ = writeln!(s, "sweep = {}", self.sweep.var);
        let _ = writeln!(s, "sweep_start = {}", self.sweep.start);
        let _ = writeln!(s, "sweep_stop = {}", self.sweep.stop);
        let _ = writeln!(s, "sweep_step = {}", self.sweep.step);
        let _ = writeln!(s, "schemes = {}", list(self.schemes.iter().map(ToString::to_string).collect()));
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "output = {}", self.output.display());
        if !self.array_sizes.is_empty() {
            let items = self.array_sizes.iter().map(|(ns, nr)| format!("{ns}x{nr}")).collect();
            let _ = writeln!(s, "array_sizes = {}", list(items));
        }
        if !self.eavesdropper_counts.is_empty() {
            let items = self.eavesdropper_counts.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "eavesdropper_counts = {}", list(items));
        }
        for (key, value) in &self.overrides {
            let _ = writeln!(s, "{key} = {value}");
        }
        s
    }

    fn base_params(&self) -> Result<Params> {
        let mut p = Params::defaults(self.scenario);
        for (key, value) in &self.overrides {
            p.set(key, value)?;
        }
        Ok(p)
    }

    /// Variants in output order: array sizes outermost, then eavesdropper
    /// counts.
    pub fn variants(&self) -> Result<Vec<Variant>> {
        let base = self.base_params()?.cfg;
        let arrays = if self.array_sizes.is_empty() { vec![(base.ns, base.nr)] } else { self.array_sizes.clone() };
        let counts = if self.eavesdropper_counts.is_empty() { vec![base.m] } else { self.eavesdropper_counts.clone() };
        Ok(arrays.iter().flat_map(|&(ns, nr)| counts.iter().map(move |&m| Variant { ns, nr, m })).collect())
    }

    /// Every sweep point of every variant, in output order.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        let base = self.base_params()?;
        let mut out = Vec::new();
        for variant in self.variants()? {
            for value in self.sweep.values() {
                let mut p = base.clone();
                p.cfg.ns = variant.ns;
                p.cfg.nr = variant.nr;
                p.cfg.m = variant.m;
                p.set_sweep(self.sweep.var, value)?;
                let scenario = p.scenario(self.scenario);
                let variant = Variant { ns: p.cfg.ns, nr: p.cfg.nr, m: p.cfg.m };
                out.push(SweepPoint { variant, value, scenario });
            }
        }
        Ok(out)
    }

    /// Checks everything that can be checked without running trials.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(CliError::config("trials", "must be at least 1"));
        }
        if self.schemes.is_empty() {
            return Err(CliError::config("schemes", "at least one scheme is required"));
        }
        let Sweep { var, start, stop, step } = self.sweep;
        if step.is_nan() || step <= 0.0 {
            return Err(CliError::config("sweep_step", "must be positive"));
        }
        if stop < start {
            return Err(CliError::config("sweep_stop", "must not be below sweep_start"));
        }
        if (stop - start) / step >= MAX_SWEEP_POINTS as f64 {
            return Err(CliError::config("sweep_step", "too many sweep points"));
        }
        if var.is_integer() {
            if self.sweep.values().iter().any(|v| (v - v.round()).abs() > 1e-9) {
                return Err(CliError::config("sweep", "array-size sweeps need integer values"));
            }
            if !self.array_sizes.is_empty() {
                return Err(CliError::config("array_sizes", "cannot be combined with an array-size sweep"));
            }
        }
        let uses_t = var == SweepVar::T || self.overrides.contains_key("t");
        if uses_t && self.scenario != ScenarioKind::ImperfectCsi {
            return Err(CliError::config("t", "the CSI error ratio needs scenario = imperfect_csi"));
        }
        for point in self.points()? {
            point.scenario.validate()?;
            for scheme in &self.schemes {
                scheme
                    .check(point.variant.ns, point.variant.m)
                    .map_err(|e| CliError::config("schemes", e.to_string()))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a comment
scenario = internal
sweep = d_u2
sweep_start = 2.5
sweep_stop = 3.0   # trailing comment
sweep_step = 0.25
schemes = proposed_internal, baseline_alg4
trials = 10
seed = 7
array_sizes = 8x16, 16x16
los_phase = uniform
";

    #[test]
    fn parses_sample() {
        let exp = Experiment::parse(SAMPLE).unwrap();
        assert_eq!(exp.scenario, ScenarioKind::Internal);
        assert_eq!(exp.sweep.values(), vec![2.5, 2.75, 3.0]);
        assert_eq!(exp.schemes, vec![SchemeId::ProposedInternal, SchemeId::BaselineAlg4]);
        assert_eq!(exp.array_sizes, vec![(8, 16), (16, 16)]);
        assert_eq!(exp.overrides["los_phase"], "uniform");
        exp.validate().unwrap();
        assert_eq!(exp.points().unwrap().len(), 6);
    }

    #[test]
    fn round_trips() {
        let exp = Experiment::parse(SAMPLE).unwrap();
        assert_eq!(Experiment::parse(&exp.to_config_string()).unwrap(), exp);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            (SAMPLE.replace("trials = 10", "trials = ten"), "trials"),
            (SAMPLE.replace("los_phase = uniform", "psi = 2"), "psi"),
            (SAMPLE.replace("los_phase = uniform", "colour = red"), "colour"),
            (SAMPLE.replace("sweep = d_u2", "sweep = z"), "sweep"),
            (SAMPLE.replace("scenario = internal\n", ""), "scenario"),
            (format!("{SAMPLE}seed = 1\n"), "seed"),
        ];
        for (text, key) in cases {
            match Experiment::parse(&text) {
                Err(CliError::Config { key: k, .. }) => assert_eq!(k, key),
                other => panic!("expected config error for {key}, got {other:?}"),
            }
        }
    }

    #[test]
    fn validation_rejects_bad_experiments() {
        let mut exp = Experiment::parse(SAMPLE).unwrap();
        exp.trials = 0;
        assert!(matches!(exp.validate(), Err(CliError::Config { key, .. }) if key == "trials"));
        let mut exp = Experiment::parse(SAMPLE).unwrap();
        exp.schemes = vec![SchemeId::Scheme4];
        assert!(matches!(exp.validate(), Err(CliError::Config { key, .. }) if key == "schemes"));
        let mut exp = Experiment::parse(SAMPLE).unwrap();
        exp.sweep.step = 0.0;
        assert!(exp.validate().is_err());
        let mut exp = Experiment::parse(SAMPLE).unwrap();
        exp.set("t", "0.1").unwrap();
        assert!(matches!(exp.validate(), Err(CliError::Config { key, .. }) if key == "t"));
    }

    #[test]
    fn sweep_reaches_decimal_endpoint() {
        let s = Sweep { var: SweepVar::Psi, start: 0.05, stop: 1.0, step: 0.05 };
        let v = s.values();
        assert_eq!(v.len(), 20);
        assert!((v[19] - 1.0).abs() < 1e-12);
    }
}
