//! Attractor classification over a grid of initial conditions.
//!
//! The label comes from the sign of the maximal Lyapunov exponent. A second
//! opinion counts distinct points of the stroboscopic map (sampled once per
//! forcing period after the exponent run); both are reported so that cells where
//! they disagree can be flagged.

use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::{State, SystemSpec};
use crate::integrator::{Divergence, Propagator, DEFAULT_DT};
use crate::lyapunov::{mle_run, MleError, MleSettings, CHAOS_THRESHOLD};
use crate::math::round;
use crate::scan::Executor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Periodic,
    Chaotic,
    Divergent,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Periodic => "periodic",
            Label::Chaotic => "chaotic",
            Label::Divergent => "divergent",
        }
    }

    /// Integer code used in grid files: 0 periodic, 1 chaotic, 2 divergent.
    pub fn code(self) -> u8 {
        match self {
            Label::Periodic => 0,
            Label::Chaotic => 1,
            Label::Divergent => 2,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSettings {
    pub mle: MleSettings,
    /// Stroboscopic points collected after the exponent run (0 disables the cross-check).
    pub strobe_points: usize,
    /// At most this many distinct stroboscopic points means periodic.
    pub max_periodic_points: usize,
    /// Two stroboscopic points closer than this (max-norm) are the same point.
    pub strobe_tolerance: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        ClassifierSettings {
            mle: MleSettings {
                transient_steps: 100_000,
                total_steps: 300_000,
                ..MleSettings::default()
            },
            strobe_points: 64,
            max_periodic_points: 16,
            strobe_tolerance: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: Label,
    pub mle: Option<f64>,
    /// Distinct stroboscopic points, if the cross-check ran.
    pub strobe_distinct: Option<usize>,
    /// False when the stroboscopic count points to the other label.
    pub agree: bool,
}

impl Classification {
    fn divergent(mle: Option<f64>) -> Self {
        Classification {
            label: Label::Divergent,
            mle,
            strobe_distinct: None,
            agree: true,
        }
    }
}

/// Strobe period: the primary forcing if present, else the secondary one.
fn forcing_period(spec: &SystemSpec) -> Option<f64> {
    let omega = if spec.f1 != 0.0 && spec.omega1 != 0.0 {
        spec.omega1
    } else if spec.f2 != 0.0 && spec.omega2 != 0.0 {
        spec.omega2
    } else {
        return None;
    };
    Some(core::f64::consts::TAU / omega.abs())
}

fn count_distinct(points: &[State], tol: f64) -> usize {
    let mut reps: Vec<State> = Vec::new();
    for p in points {
        if !reps
            .iter()
            .any(|r| (r.x - p.x).abs() <= tol && (r.y - p.y).abs() <= tol)
        {
            reps.push(*p);
        }
    }
    reps.len()
}

/// Stroboscopic points of the trajectory starting at `(s, t)`, one per forcing
/// period, using the step closest to `dt` that divides the period evenly.
fn strobe(
    spec: &SystemSpec,
    s: State,
    t: f64,
    period: f64,
    dt: f64,
    count: usize,
) -> Result<Vec<State>, Divergence> {
    let steps = round(period / dt).max(1.0) as u64;
    let mut prop = Propagator::new(spec, s, t, period / steps as f64);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(prop.advance_by(steps)?);
    }
    Ok(out)
}

/// Labels the attractor reached from `ic`.
pub fn classify_attractor(
    spec: &SystemSpec,
    ic: State,
    settings: &ClassifierSettings,
) -> Classification {
    let run = match mle_run(spec, ic, &settings.mle) {
        Ok(r) => r,
        Err(MleError::Diverged(_)) | Err(MleError::InvalidSettings(_)) => {
            return Classification::divergent(None)
        }
    };
    let label = if run.exponent > CHAOS_THRESHOLD {
        Label::Chaotic
    } else {
        Label::Periodic
    };
    let mut out = Classification {
        label,
        mle: Some(run.exponent),
        strobe_distinct: None,
        agree: true,
    };
    if settings.strobe_points == 0 {
        return out;
    }
    if let Some(period) = forcing_period(spec) {
        let dt = if settings.mle.dt > 0.0 {
            settings.mle.dt
        } else {
            DEFAULT_DT
        };
        match strobe(
            spec,
            run.final_state,
            run.final_time,
            period,
            dt,
            settings.strobe_points,
        ) {
            Ok(points) => {
                let distinct = count_distinct(&points, settings.strobe_tolerance);
                let periodic = distinct <= settings.max_periodic_points;
                out.strobe_distinct = Some(distinct);
                out.agree = periodic == (label == Label::Periodic);
            }
            Err(_) => return Classification::divergent(Some(run.exponent)),
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinPlan {
    pub spec: SystemSpec,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub classifier: ClassifierSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinError {
    TooFewCells,
    DegenerateRegion,
    Settings(&'static str),
}

impl fmt::Display for BasinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasinError::TooFewCells => f.write_str("basin grid needs nx, ny >= 2"),
            BasinError::DegenerateRegion => {
                f.write_str("basin region must have finite, non-zero extent")
            }
            BasinError::Settings(why) => write!(f, "invalid classifier settings: {why}"),
        }
    }
}

impl core::error::Error for BasinError {}

impl BasinPlan {
    /// 200 x 200 cells over `[-3, 3] x [-3, 3]`.
    pub fn new(spec: SystemSpec) -> Self {
        BasinPlan {
            spec,
            x_range: (-3.0, 3.0),
            y_range: (-3.0, 3.0),
            nx: 200,
            ny: 200,
            classifier: ClassifierSettings::default(),
        }
    }

    pub fn validate(&self) -> Result<(), BasinError> {
        if self.nx < 2 || self.ny < 2 {
            return Err(BasinError::TooFewCells);
        }
        for (lo, hi) in [self.x_range, self.y_range] {
            if !(lo.is_finite() && hi.is_finite()) || lo == hi {
                return Err(BasinError::DegenerateRegion);
            }
        }
        match self.classifier.mle.validate() {
            Err(MleError::InvalidSettings(why)) => Err(BasinError::Settings(why)),
            _ => Ok(()),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        lerp(self.x_range, i, self.nx)
    }

    pub fn y(&self, j: usize) -> f64 {
        lerp(self.y_range, j, self.ny)
    }
}

fn lerp((lo, hi): (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        let m = (n - 1) as f64;
        (lo * (m - i as f64) + hi * i as f64) / m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub plan: BasinPlan,
    /// Row-major over y: `cells[j * nx + i]` is the initial condition `(x(i), y(j))`.
    pub cells: Vec<Classification>,
}

impl BasinGrid {
    pub fn at(&self, i: usize, j: usize) -> &Classification {
        &self.cells[j * self.plan.nx + i]
    }

    pub fn count(&self, label: Label) -> usize {
        self.cells.iter().filter(|c| c.label == label).count()
    }

    pub fn disagreements(&self) -> usize {
        self.cells.iter().filter(|c| !c.agree).count()
    }
}

/// Classifies every initial condition of the plan's grid.
pub fn basin_grid<E: Executor>(plan: &BasinPlan, exec: &E) -> Result<BasinGrid, BasinError> {
    plan.validate()?;
    let cells = exec.run(plan.nx * plan.ny, |k| {
        let (i, j) = (k % plan.nx, k / plan.nx);
        classify_attractor(
            &plan.spec,
            State::new(plan.x(i), plan.y(j)),
            &plan.classifier,
        )
    });
    Ok(BasinGrid { plan: *plan, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SystemKind;
    use crate::scan::Serial;

    fn quick() -> ClassifierSettings {
        ClassifierSettings {
            mle: MleSettings {
                transient_steps: 2_000,
                total_steps: 20_000,
                ..MleSettings::default()
            },
            ..ClassifierSettings::default()
        }
    }

    #[test]
    fn damped_linear_is_periodic() {
        let mut spec = SystemSpec::zero(SystemKind::NP1);
        spec.alpha = 0.3;
        spec.omega0_sq = 1.0;
        let c = classify_attractor(&spec, State::new(1.0, -2.0), &quick());
        assert_eq!(c.label, Label::Periodic);
        assert!(c.mle.unwrap() < 0.0);
        // unforced: no strobe period
        assert_eq!(c.strobe_distinct, None);
    }

    #[test]
    fn forced_linear_locks_to_one_strobe_point() {
        let mut spec = SystemSpec::zero(SystemKind::NP1);
        spec.alpha = 0.5;
        spec.omega0_sq = 1.0;
        spec.f1 = 1.0;
        spec.omega1 = 1.3;
        let c = classify_attractor(&spec, State::ORIGIN, &quick());
        assert_eq!(c.label, Label::Periodic);
        assert_eq!(c.strobe_distinct, Some(1));
        assert!(c.agree);
    }

    #[test]
    fn blow_up_is_divergent() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        spec.gamma = 1.0;
        spec.beta = -1.0;
        let c = classify_attractor(&spec, State::new(3.0, 0.0), &quick());
        assert_eq!(c.label, Label::Divergent);
    }

    #[test]
    fn uniform_attractor_gives_uniform_grid() {
        let mut spec = SystemSpec::zero(SystemKind::NP1);
        spec.alpha = 0.5;
        spec.omega0_sq = 1.0;
        spec.f1 = 0.3;
        spec.omega1 = 0.9;
        let plan = BasinPlan {
            nx: 3,
            ny: 2,
            classifier: quick(),
            ..BasinPlan::new(spec)
        };
        let grid = basin_grid(&plan, &Serial).unwrap();
        assert_eq!(grid.cells.len(), 6);
        assert_eq!(grid.count(Label::Periodic), 6);
        assert_eq!(
            grid.at(2, 1),
            &classify_attractor(&spec, State::new(3.0, 3.0), &quick())
        );
    }

    #[test]
    fn plan_validation() {
        let spec = SystemSpec::zero(SystemKind::LM);
        let mut plan = BasinPlan::new(spec);
        plan.nx = 1;
        assert_eq!(plan.validate(), Err(BasinError::TooFewCells));
        let mut plan = BasinPlan::new(spec);
        plan.y_range = (1.0, 1.0);
        assert_eq!(plan.validate(), Err(BasinError::DegenerateRegion));
        assert_eq!(BasinPlan::new(spec).x(199), 3.0);
    }

    #[test]
    fn distinct_points_cluster() {
        let pts = [
            State::new(0.0, 0.0),
            State::new(5e-5, -5e-5),
            State::new(1.0, 0.0),
            State::new(1.0, 2e-4),
        ];
        assert_eq!(count_distinct(&pts, 1e-4), 3);
    }
}
