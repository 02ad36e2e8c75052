//! One- and two-parameter sweeps.
//!
//! A scan is a list of independent work units, one per (grid point, initial
//! condition). Units are handed to an [`Executor`], which may run them in any
//! order on any number of threads; results are assembled by index, so the output
//! does not depend on scheduling.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{Param, SpecError, State, SystemSpec};
use crate::events::{stats_of, EEStats, PeakDetector};
use crate::integrator::{drive, Divergence, PlanError, SimPlan};
use crate::lyapunov::{mle, MleError, MleSettings};

/// Recorded steps per point used by scans unless overridden.
pub const SCAN_RECORD_STEPS: u64 = 500_000;
/// Bifurcation maxima kept per point.
pub const DEFAULT_BIF_CAP: usize = 512;
/// Clustering tolerance when counting distinct maxima.
pub const DISTINCT_TOLERANCE: f64 = 1e-6;

/// Runs `jobs` independent closures and returns their results in index order.
pub trait Executor {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// In-order, single-threaded execution.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..jobs).map(f).collect()
    }
}

/// Evenly spaced values of one parameter, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(param: Param, lo: f64, hi: f64, points: usize) -> Self {
        Axis {
            param,
            lo,
            hi,
            points,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.hi;
        }
        let n = (self.points - 1) as f64;
        (self.lo * (n - i as f64) + self.hi * i as f64) / n
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.value(i))
    }
}

/// Which per-point quantities to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collect {
    pub probability: bool,
    pub d_max: bool,
    pub bif_maxima: bool,
    pub mle: bool,
}

impl Default for Collect {
    fn default() -> Self {
        Collect {
            probability: true,
            d_max: true,
            bif_maxima: false,
            mle: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPlan {
    pub spec: SystemSpec,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Integration settings; `sim.ic` is ignored in favour of `ics`.
    pub sim: SimPlan,
    /// Qualifier multiplier.
    pub n: f64,
    pub ics: Vec<State>,
    pub collect: Collect,
    pub bif_cap: usize,
    pub mle: MleSettings,
}

impl ScanPlan {
    /// Plan with scan defaults: the kind's transient and observable,
    /// [`SCAN_RECORD_STEPS`] recorded steps, the kind's default initial condition.
    pub fn new(spec: SystemSpec, axis1: Axis, n: f64) -> Self {
        let mut sim = SimPlan::for_kind(spec.kind);
        sim.record_steps = SCAN_RECORD_STEPS;
        ScanPlan {
            spec,
            axis1,
            axis2: None,
            sim,
            n,
            ics: alloc::vec![sim.ic],
            collect: Collect::default(),
            bif_cap: DEFAULT_BIF_CAP,
            mle: MleSettings {
                dt: sim.dt,
                transient_steps: sim.transient_steps,
                total_steps: 1_000_000,
                ..MleSettings::default()
            },
        }
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        self.spec.validate().map_err(ScanError::Spec)?;
        self.sim.validate().map_err(ScanError::Plan)?;
        if self.ics.is_empty() {
            return Err(ScanError::NoInitialConditions);
        }
        if self.ics.iter().any(|s| !s.is_finite()) {
            return Err(ScanError::Plan(PlanError::NonFiniteInitialCondition));
        }
        if !(self.n > 0.0 && self.n.is_finite()) {
            return Err(ScanError::BadQualifier);
        }
        if self.collect.mle {
            self.mle.validate().map_err(ScanError::Mle)?;
        }
        for axis in core::iter::once(&self.axis1).chain(self.axis2.as_ref()) {
            if axis.points < 2 {
                return Err(ScanError::TooFewPoints(axis.param));
            }
            if !(axis.lo.is_finite() && axis.hi.is_finite()) {
                return Err(ScanError::Spec(SpecError::NonFinite(axis.param)));
            }
            // every grid value must be settable on the base spec
            let mut probe = self.spec;
            probe.set(axis.param, axis.lo).map_err(ScanError::Spec)?;
            probe.set(axis.param, axis.hi).map_err(ScanError::Spec)?;
        }
        Ok(())
    }

    fn spec_at(&self, p1: f64, p2: Option<f64>) -> SystemSpec {
        let mut spec = self.spec;
        // validated up front
        let _ = spec.set(self.axis1.param, p1);
        if let (Some(axis), Some(v)) = (self.axis2, p2) {
            let _ = spec.set(axis.param, v);
        }
        spec
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanError {
    Spec(SpecError),
    Plan(PlanError),
    Mle(MleError),
    NoInitialConditions,
    BadQualifier,
    TooFewPoints(Param),
    /// `scan_1d` got a second axis or `scan_2d` lacks one.
    AxisCount,
    /// 2-D grids take exactly one initial condition.
    MultipleInitialConditions,
}

impl fmt::Display for ScanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanError::Spec(e) => write!(f, "scan parameter: {e}"),
            ScanError::Plan(e) => write!(f, "scan simulation plan: {e}"),
            ScanError::Mle(e) => e.fmt(f),
            ScanError::NoInitialConditions => {
                f.write_str("scan needs at least one initial condition")
            }
            ScanError::BadQualifier => f.write_str("qualifier multiplier n must be > 0"),
            ScanError::TooFewPoints(p) => write!(f, "axis `{p}` needs at least 2 points"),
            ScanError::AxisCount => f.write_str("wrong number of scan axes for this scan type"),
            ScanError::MultipleInitialConditions => {
                f.write_str("2-D scans take a single initial condition")
            }
        }
    }
}

impl core::error::Error for ScanError {}

/// Outcome of one (grid point, initial condition) unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub ic_index: usize,
    /// `None` when the trajectory diverged.
    pub stats: Option<EEStats>,
    pub mle: Option<f64>,
    /// Last maxima of the observable (refined), oldest first.
    pub bif_maxima: Vec<f64>,
    pub divergence: Option<Divergence>,
}

impl PointResult {
    pub fn diverged(&self) -> bool {
        self.divergence.is_some()
    }

    pub fn probability(&self) -> Option<f64> {
        self.stats.map(|s| s.probability)
    }

    pub fn d_max(&self) -> Option<f64> {
        self.stats.map(|s| s.d_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub p1: f64,
    pub p2: Option<f64>,
    /// One entry per initial condition, in plan order.
    pub results: Vec<PointResult>,
}

/// Cell of a 2-D probability map.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Row-major with `axis1` as the row index: `rows[i1 * axis2.points + i2]`.
    pub rows: Vec<ScanRow>,
}

impl Grid {
    pub fn cell(&self, i1: usize, i2: usize) -> &ScanRow {
        &self.rows[i1 * self.axis2.points + i2]
    }
}

/// Keeps the newest `cap` refined maxima.
#[derive(Debug, Clone)]
pub struct BifurcationCollector {
    cap: usize,
    buf: VecDeque<f64>,
}

impl BifurcationCollector {
    pub fn new(cap: usize) -> Self {
        BifurcationCollector {
            cap,
            buf: VecDeque::with_capacity(cap),
        }
    }

    pub fn push(&mut self, v: f64) {
        if self.cap == 0 {
            return;
        }
        if self.buf.len() == self.cap {
            self.buf.pop_front();
        }
        self.buf.push_back(v);
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.buf.into()
    }
}

/// Up to `cap` last (refined) peak values of the observable after the transient.
pub fn bifurcation_points(
    spec: &SystemSpec,
    plan: &SimPlan,
    cap: usize,
) -> Result<Vec<f64>, Divergence> {
    let mut det = PeakDetector::new();
    let mut bif = BifurcationCollector::new(cap);
    let obs = plan.observable;
    drive(spec, plan, |t, s| {
        if let Some(p) = det.push(t, obs.pick(s)) {
            bif.push(p.refined());
        }
    })?;
    Ok(bif.into_vec())
}

/// Number of clusters after sorting, where consecutive values closer than `tol`
/// join the same cluster.
pub fn distinct_count(values: &[f64], tol: f64) -> usize {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for v in sorted {
        if v - last > tol {
            count += 1;
        }
        last = v;
    }
    count
}

/// Runs one work unit: simulate, extract peaks, compute statistics (and MLE and
/// bifurcation maxima if requested). Only the integration, qualifier, collection
/// and exponent settings of `plan` are used.
pub fn evaluate_point(
    plan_settings: &ScanPlan,
    spec: &SystemSpec,
    ic: State,
    ic_index: usize,
) -> PointResult {
    let ScanPlan {
        n,
        collect,
        bif_cap,
        ..
    } = *plan_settings;
    let mle_settings = &plan_settings.mle;
    let mut plan = plan_settings.sim;
    plan.ic = ic;
    let obs = plan.observable;
    let mut det = PeakDetector::new();
    let mut peaks = Vec::new();
    let mut bif = BifurcationCollector::new(if collect.bif_maxima { bif_cap } else { 0 });
    let run = drive(spec, &plan, |t, s| {
        if let Some(p) = det.push(t, obs.pick(s)) {
            peaks.push(p.value);
            bif.push(p.refined());
        }
    });
    if let Err(d) = run {
        return PointResult {
            ic_index,
            stats: None,
            mle: None,
            bif_maxima: Vec::new(),
            divergence: Some(d),
        };
    }
    let (mle_value, divergence) = if collect.mle {
        match mle(spec, ic, mle_settings) {
            Ok(l) => (Some(l), None),
            Err(MleError::Diverged(d)) => (None, Some(d)),
            Err(MleError::InvalidSettings(_)) => (None, None),
        }
    } else {
        (None, None)
    };
    PointResult {
        ic_index,
        stats: Some(stats_of(&peaks, n)),
        mle: mle_value,
        bif_maxima: bif.into_vec(),
        divergence,
    }
}

/// Sweeps `axis1`; one row per grid value, each holding one result per initial condition.
pub fn scan_1d<E: Executor>(plan: &ScanPlan, exec: &E) -> Result<Vec<ScanRow>, ScanError> {
    if plan.axis2.is_some() {
        return Err(ScanError::AxisCount);
    }
    plan.validate()?;
    let n_ics = plan.ics.len();
    let units = plan.axis1.points * n_ics;
    let results = exec.run(units, |u| {
        let (i, k) = (u / n_ics, u % n_ics);
        let spec = plan.spec_at(plan.axis1.value(i), None);
        evaluate_point(plan, &spec, plan.ics[k], k)
    });
    Ok(assemble(plan, results, n_ics))
}

/// Sweeps `axis1 x axis2` for a single initial condition.
pub fn scan_2d<E: Executor>(plan: &ScanPlan, exec: &E) -> Result<Grid, ScanError> {
    let axis2 = plan.axis2.ok_or(ScanError::AxisCount)?;
    plan.validate()?;
    if plan.ics.len() != 1 {
        return Err(ScanError::MultipleInitialConditions);
    }
    let units = plan.axis1.points * axis2.points;
    let results = exec.run(units, |u| {
        let (i1, i2) = (u / axis2.points, u % axis2.points);
        let spec = plan.spec_at(plan.axis1.value(i1), Some(axis2.value(i2)));
        evaluate_point(plan, &spec, plan.ics[0], 0)
    });
    Ok(Grid {
        axis1: plan.axis1,
        axis2,
        rows: assemble(plan, results, 1),
    })
}

fn assemble(plan: &ScanPlan, results: Vec<PointResult>, per_row: usize) -> Vec<ScanRow> {
    let mut rows = Vec::with_capacity(results.len() / per_row);
    let mut it = results.into_iter();
    let n2 = plan.axis2.map_or(1, |a| a.points);
    for r in 0..plan.axis1.points * n2 {
        let (i1, i2) = (r / n2, r % n2);
        rows.push(ScanRow {
            p1: plan.axis1.value(i1),
            p2: plan.axis2.map(|a| a.value(i2)),
            results: it.by_ref().take(per_row).collect(),
        });
    }
    rows
}

/// Largest parameter value whose probability (for initial condition `ic_index`) is non-zero.
pub fn last_nonzero(rows: &[ScanRow], ic_index: usize) -> Option<f64> {
    rows.iter()
        .rev()
        .find(|r| {
            r.results
                .get(ic_index)
                .and_then(PointResult::probability)
                .is_some_and(|p| p > 0.0)
        })
        .map(|r| r.p1)
}
