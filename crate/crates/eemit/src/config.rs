//! Flat `key=value` run configuration.
//!
//! One pair per line, `#` starts a comment. Model parameters use their canonical
//! names (`alpha`, `omega0_sq`, `Omega0_sq`, `A`, ...); the remaining keys are
//! listed in [`KEYS`]. Malformed text (no `=`, duplicate keys, unreadable numbers,
//! an empty file) is a parse error; well-formed text that names unknown keys or
//! describes an invalid model or plan is a validation error.

use std::fmt::Write as _;
use std::str::FromStr;

use eemit_core::basin::{BasinPlan, ClassifierSettings};
use eemit_core::scan::{Axis, Collect, ScanPlan, DEFAULT_BIF_CAP, SCAN_RECORD_STEPS};
use eemit_core::{MleSettings, Observable, Param, SimPlan, State, SystemKind, SystemSpec};

/// Non-model keys accepted in a configuration.
pub const KEYS: &[&str] = &[
    "kind",
    "dt",
    "t0",
    "transient",
    "record",
    "sample_every",
    "observable",
    "strobe",
    "x0",
    "y0",
    "ics",
    "n",
    "bins",
    "scan.param",
    "scan.lo",
    "scan.hi",
    "scan.points",
    "scan2.param",
    "scan2.lo",
    "scan2.hi",
    "scan2.points",
    "scan.mle",
    "bif.cap",
    "mle.transient",
    "mle.steps",
    "mle.renorm",
    "basin.x_lo",
    "basin.x_hi",
    "basin.y_lo",
    "basin.y_hi",
    "basin.nx",
    "basin.ny",
    "basin.strobe_points",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ConfigError {
    /// 2 for parse errors, 3 for validation errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            ConfigError::Parse { .. } => 2,
            ConfigError::Invalid(_) => 3,
        }
    }

    fn parse(line: usize, msg: impl Into<String>) -> Self {
        ConfigError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub spec: SystemSpec,
    pub dt: f64,
    pub t0: f64,
    /// Kind default when unset.
    pub transient: Option<u64>,
    /// Command default when unset (single runs and scans differ).
    pub record: Option<u64>,
    pub sample_every: u64,
    pub observable: Option<Observable>,
    pub strobe: Option<f64>,
    pub ic: Option<State>,
    /// Initial conditions for 1-D scans and bifurcation runs; `[ic]` when empty.
    pub ics: Vec<State>,
    pub n: Option<f64>,
    pub bins: usize,
    pub scan1: Option<Axis>,
    pub scan2: Option<Axis>,
    pub scan_mle: bool,
    pub bif_cap: usize,
    pub mle_transient: Option<u64>,
    pub mle_steps: Option<u64>,
    pub mle_renorm: u64,
    pub basin_x: (f64, f64),
    pub basin_y: (f64, f64),
    pub basin_nx: usize,
    pub basin_ny: usize,
    pub basin_strobe_points: usize,
}

impl Config {
    pub fn new(spec: SystemSpec) -> Self {
        let basin = BasinPlan::new(spec);
        Config {
            spec,
            dt: eemit_core::integrator::DEFAULT_DT,
            t0: 0.0,
            transient: None,
            record: None,
            sample_every: 1,
            observable: None,
            strobe: None,
            ic: None,
            ics: Vec::new(),
            n: None,
            bins: 100,
            scan1: None,
            scan2: None,
            scan_mle: false,
            bif_cap: DEFAULT_BIF_CAP,
            mle_transient: None,
            mle_steps: None,
            mle_renorm: MleSettings::default().renorm_every,
            basin_x: basin.x_range,
            basin_y: basin.y_range,
            basin_nx: basin.nx,
            basin_ny: basin.ny,
            basin_strobe_points: basin.classifier.strobe_points,
        }
    }

    /// Qualifier multiplier: 8 for the Liénard kinds, 4 otherwise, unless set.
    pub fn qualifier(&self) -> f64 {
        self.n.unwrap_or(if self.spec.kind.is_lienard() {
            8.0
        } else {
            4.0
        })
    }

    pub fn initial_condition(&self) -> State {
        self.ic
            .unwrap_or_else(|| eemit_core::integrator::default_ic(self.spec.kind))
    }

    pub fn initial_conditions(&self) -> Vec<State> {
        if self.ics.is_empty() {
            vec![self.initial_condition()]
        } else {
            self.ics.clone()
        }
    }

    /// Simulation plan for a single run; `record_default` applies when `record` is unset.
    pub fn sim_plan(&self, record_default: u64) -> SimPlan {
        let base = SimPlan::for_kind(self.spec.kind);
        SimPlan {
            ic: self.initial_condition(),
            dt: self.dt,
            t0: self.t0,
            transient_steps: self.transient.unwrap_or(base.transient_steps),
            record_steps: self.record.unwrap_or(record_default),
            sample_every: self.sample_every,
            observable: self.observable.unwrap_or(base.observable),
            stroboscopic: self.strobe,
        }
    }

    pub fn mle_settings(&self) -> MleSettings {
        let d = MleSettings::default();
        MleSettings {
            dt: self.dt,
            t0: self.t0,
            transient_steps: self.mle_transient.unwrap_or(d.transient_steps),
            total_steps: self.mle_steps.unwrap_or(d.total_steps),
            renorm_every: self.mle_renorm,
            seed_tangent: d.seed_tangent,
        }
    }

    /// Scan plan built from `scan.*` (and `scan2.*` when `two_d`).
    pub fn scan_plan(&self, two_d: bool, collect: Collect) -> Result<ScanPlan, ConfigError> {
        let axis1 = self
            .scan1
            .ok_or_else(|| ConfigError::Invalid("scan.param/lo/hi/points are required".into()))?;
        let mut plan = ScanPlan::new(self.spec, axis1, self.qualifier());
        plan.sim = self.sim_plan(SCAN_RECORD_STEPS);
        plan.ics = self.initial_conditions();
        if two_d {
            plan.axis2 = Some(self.scan2.ok_or_else(|| {
                ConfigError::Invalid("scan2.param/lo/hi/points are required".into())
            })?);
            plan.ics = vec![self.initial_condition()];
        }
        plan.collect = Collect {
            mle: collect.mle || self.scan_mle,
            ..collect
        };
        plan.bif_cap = self.bif_cap;
        plan.mle = MleSettings {
            total_steps: self.mle_steps.unwrap_or(plan.mle.total_steps),
            transient_steps: self.mle_transient.unwrap_or(plan.mle.transient_steps),
            renorm_every: self.mle_renorm,
            dt: self.dt,
            t0: self.t0,
            ..plan.mle
        };
        plan.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(plan)
    }

    pub fn basin_plan(&self) -> Result<BasinPlan, ConfigError> {
        let d = ClassifierSettings::default();
        let plan = BasinPlan {
            spec: self.spec,
            x_range: self.basin_x,
            y_range: self.basin_y,
            nx: self.basin_nx,
            ny: self.basin_ny,
            classifier: ClassifierSettings {
                mle: MleSettings {
                    dt: self.dt,
                    t0: self.t0,
                    transient_steps: self.mle_transient.unwrap_or(d.mle.transient_steps),
                    total_steps: self.mle_steps.unwrap_or(d.mle.total_steps),
                    renorm_every: self.mle_renorm,
                    ..d.mle
                },
                strobe_points: self.basin_strobe_points,
                ..d
            },
        };
        plan.validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok(plan)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| Err(ConfigError::Invalid(m));
        self.spec
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.sim_plan(1)
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if let Some(n) = self.n {
            if !(n > 0.0 && n.is_finite()) {
                return invalid(format!("n must be > 0, got {n}"));
            }
        }
        if self.bins == 0 {
            return invalid("bins must be >= 1".into());
        }
        if self.ics.iter().any(|s| !s.is_finite()) {
            return invalid("ics must be finite".into());
        }
        if self.mle_renorm == 0 {
            return invalid("mle.renorm must be >= 1".into());
        }
        for axis in [self.scan1, self.scan2].iter().flatten() {
            if axis.points < 2 {
                return invalid(format!("axis `{}` needs at least 2 points", axis.param));
            }
            if !(axis.lo.is_finite() && axis.hi.is_finite()) {
                return invalid(format!("axis `{}` bounds must be finite", axis.param));
            }
            for v in [axis.lo, axis.hi] {
                self.spec
                    .with(axis.param, v)
                    .map_err(|e| ConfigError::Invalid(format!("scan axis: {e}")))?;
            }
        }
        Ok(())
    }

    /// Canonical text form; numbers carry 17 significant digits.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        put("kind", self.spec.kind.name().to_string());
        for p in Param::ALL {
            if self.spec.kind.uses(p) {
                put(p.key(), num(self.spec.get(p)));
            }
        }
        put("dt", num(self.dt));
        put("t0", num(self.t0));
        if let Some(v) = self.transient {
            put("transient", v.to_string());
        }
        if let Some(v) = self.record {
            put("record", v.to_string());
        }
        put("sample_every", self.sample_every.to_string());
        if let Some(o) = self.observable {
            put("observable", o.name().to_string());
        }
        if let Some(p) = self.strobe {
            put("strobe", num(p));
        }
        if let Some(ic) = self.ic {
            put("x0", num(ic.x));
            put("y0", num(ic.y));
        }
        if !self.ics.is_empty() {
            let list: Vec<String> = self
                .ics
                .iter()
                .map(|s| format!("{},{}", num(s.x), num(s.y)))
                .collect();
            put("ics", list.join(";"));
        }
        if let Some(n) = self.n {
            put("n", num(n));
        }
        put("bins", self.bins.to_string());
        for (prefix, axis) in [("scan", self.scan1), ("scan2", self.scan2)] {
            if let Some(a) = axis {
                put(&format!("{prefix}.param"), a.param.key().to_string());
                put(&format!("{prefix}.lo"), num(a.lo));
                put(&format!("{prefix}.hi"), num(a.hi));
                put(&format!("{prefix}.points"), a.points.to_string());
            }
        }
        put("scan.mle", self.scan_mle.to_string());
        put("bif.cap", self.bif_cap.to_string());
        if let Some(v) = self.mle_transient {
            put("mle.transient", v.to_string());
        }
        if let Some(v) = self.mle_steps {
            put("mle.steps", v.to_string());
        }
        put("mle.renorm", self.mle_renorm.to_string());
        put("basin.x_lo", num(self.basin_x.0));
        put("basin.x_hi", num(self.basin_x.1));
        put("basin.y_lo", num(self.basin_y.0));
        put("basin.y_hi", num(self.basin_y.1));
        put("basin.nx", self.basin_nx.to_string());
        put("basin.ny", self.basin_ny.to_string());
        put("basin.strobe_points", self.basin_strobe_points.to_string());
        out
    }
}

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Raw pairs in file order, with their line numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pairs(Vec<(String, String, usize)>);

impl Pairs {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut pairs = Pairs::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or_else(|| {
                ConfigError::parse(line, format!("expected key=value, got `{content}`"))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(ConfigError::parse(line, "missing key"));
            }
            if v.is_empty() {
                return Err(ConfigError::parse(line, format!("missing value for `{k}`")));
            }
            if pairs.0.iter().any(|(key, _, _)| key == k) {
                return Err(ConfigError::parse(line, format!("duplicate key `{k}`")));
            }
            pairs.0.push((k.to_string(), v.to_string(), line));
        }
        if pairs.0.is_empty() {
            return Err(ConfigError::parse(0, "empty configuration"));
        }
        Ok(pairs)
    }

    /// Replaces or appends `key=value` (command-line overrides).
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| {
            ConfigError::parse(0, format!("override `{assignment}` is not key=value"))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::parse(
                0,
                format!("override `{assignment}` is incomplete"),
            ));
        }
        match self.0.iter_mut().find(|(key, _, _)| key == k) {
            Some(slot) => slot.1 = v.to_string(),
            None => self.0.push((k.to_string(), v.to_string(), 0)),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    fn line(&self, key: &str) -> usize {
        self.0
            .iter()
            .find(|(k, _, _)| k == key)
            .map_or(0, |(_, _, l)| *l)
    }

    fn value<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| {
                ConfigError::parse(
                    self.line(key),
                    format!("cannot read `{v}` as a value for `{key}`"),
                )
            }),
        }
    }

    fn state(&self, key: &str, text: &str) -> Result<State, ConfigError> {
        let bad = || {
            ConfigError::parse(
                self.line(key),
                format!("expected `x,y` in `{key}`, got `{text}`"),
            )
        };
        let (x, y) = text.split_once(',').ok_or_else(bad)?;
        let x = x.trim().parse().map_err(|_| bad())?;
        let y = y.trim().parse().map_err(|_| bad())?;
        Ok(State::new(x, y))
    }

    fn axis(&self, prefix: &str) -> Result<Option<Axis>, ConfigError> {
        let keys = ["param", "lo", "hi", "points"].map(|s| format!("{prefix}.{s}"));
        let present = keys.iter().filter(|k| self.get(k).is_some()).count();
        if present == 0 {
            return Ok(None);
        }
        if present < 4 {
            return Err(ConfigError::Invalid(format!(
                "{prefix} axis needs all of {}",
                keys.join(", ")
            )));
        }
        let name = self.get(&keys[0]).unwrap_or_default();
        let param = name
            .parse::<Param>()
            .map_err(|e| ConfigError::Invalid(format!("{}: {e}", keys[0])))?;
        Ok(Some(Axis::new(
            param,
            self.value(&keys[1])?.unwrap_or_default(),
            self.value(&keys[2])?.unwrap_or_default(),
            self.value(&keys[3])?.unwrap_or_default(),
        )))
    }

    /// Interprets the pairs as a validated configuration.
    pub fn into_config(self) -> Result<Config, ConfigError> {
        let unknown: Vec<&str> = self
            .0
            .iter()
            .map(|(k, _, _)| k.as_str())
            .filter(|k| !KEYS.contains(k) && k.parse::<Param>().is_err())
            .collect();
        if !unknown.is_empty() {
            return Err(ConfigError::Invalid(format!(
                "unknown key(s): {}",
                unknown.join(", ")
            )));
        }
        let kind: SystemKind = self
            .get("kind")
            .ok_or_else(|| ConfigError::Invalid("`kind` is required".into()))?
            .parse()
            .map_err(|e| ConfigError::Invalid(format!("{e}")))?;

        // read every number before validating any of them, so a malformed value
        // is reported as a parse error regardless of key order
        let mut params = Vec::new();
        for p in Param::ALL {
            if let Some(v) = self.value::<f64>(p.key())? {
                params.push((p, v));
            }
        }
        let mut cfg = Config::new(SystemSpec::zero(kind));
        if let Some(v) = self.value("dt")? {
            cfg.dt = v;
        }
        if let Some(v) = self.value("t0")? {
            cfg.t0 = v;
        }
        cfg.transient = self.value("transient")?;
        cfg.record = self.value("record")?;
        if let Some(v) = self.value("sample_every")? {
            cfg.sample_every = v;
        }
        cfg.strobe = self.value("strobe")?;
        let x0: Option<f64> = self.value("x0")?;
        let y0: Option<f64> = self.value("y0")?;
        if let Some(text) = self.get("ics") {
            cfg.ics = text
                .split(';')
                .map(|s| self.state("ics", s))
                .collect::<Result<_, _>>()?;
        }
        cfg.n = self.value("n")?;
        if let Some(v) = self.value("bins")? {
            cfg.bins = v;
        }
        if let Some(v) = self.value("scan.mle")? {
            cfg.scan_mle = v;
        }
        if let Some(v) = self.value("bif.cap")? {
            cfg.bif_cap = v;
        }
        cfg.mle_transient = self.value("mle.transient")?;
        cfg.mle_steps = self.value("mle.steps")?;
        if let Some(v) = self.value("mle.renorm")? {
            cfg.mle_renorm = v;
        }
        let mut bounds = [cfg.basin_x.0, cfg.basin_x.1, cfg.basin_y.0, cfg.basin_y.1];
        for (slot, key) in
            bounds
                .iter_mut()
                .zip(["basin.x_lo", "basin.x_hi", "basin.y_lo", "basin.y_hi"])
        {
            if let Some(v) = self.value(key)? {
                *slot = v;
            }
        }
        cfg.basin_x = (bounds[0], bounds[1]);
        cfg.basin_y = (bounds[2], bounds[3]);
        if let Some(v) = self.value("basin.nx")? {
            cfg.basin_nx = v;
        }
        if let Some(v) = self.value("basin.ny")? {
            cfg.basin_ny = v;
        }
        if let Some(v) = self.value("basin.strobe_points")? {
            cfg.basin_strobe_points = v;
        }
        cfg.scan1 = self.axis("scan")?;
        cfg.scan2 = self.axis("scan2")?;

        if let Some(o) = self.get("observable") {
            cfg.observable = Some(match o {
                "x" => Observable::X,
                "y" => Observable::Y,
                _ => {
                    return Err(ConfigError::Invalid(format!(
                        "observable must be `x` or `y`, got `{o}`"
                    )))
                }
            });
        }
        cfg.ic = match (x0, y0) {
            (None, None) => None,
            (Some(x), Some(y)) => Some(State::new(x, y)),
            _ => {
                return Err(ConfigError::Invalid(
                    "x0 and y0 must be given together".into(),
                ))
            }
        };
        for (p, v) in params {
            cfg.spec
                .set(p, v)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses configuration text (no overrides).
pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    Pairs::parse(text)?.into_config()
}
