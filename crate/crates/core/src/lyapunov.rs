//! Maximal Lyapunov exponent by tangent-space evolution with periodic
//! renormalisation (Benettin's method).
//!
//! The base state and a tangent vector are advanced together as one 4-D RK4
//! system: the tangent sees the analytic Jacobian at the same stage points the
//! base trajectory uses, so both share the integrator's order of accuracy.

use core::fmt;

use crate::dynamics::{jacobian, vector_field, Mat2, State, SystemSpec};
use crate::integrator::{Divergence, Propagator, DEFAULT_DT};
use crate::math::{ln, sqrt};

/// Exponents above this are treated as chaos by downstream classifiers.
pub const CHAOS_THRESHOLD: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleSettings {
    pub dt: f64,
    pub t0: f64,
    /// Steps of base-trajectory evolution before the tangent is attached.
    pub transient_steps: u64,
    /// Steps over which log-growth is accumulated.
    pub total_steps: u64,
    pub renorm_every: u64,
    pub seed_tangent: [f64; 2],
}

impl Default for MleSettings {
    fn default() -> Self {
        MleSettings {
            dt: DEFAULT_DT,
            t0: 0.0,
            transient_steps: 100_000,
            total_steps: 10_000_000,
            renorm_every: 100,
            seed_tangent: [1.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MleError {
    InvalidSettings(&'static str),
    Diverged(Divergence),
}

impl fmt::Display for MleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MleError::InvalidSettings(why) => write!(f, "invalid Lyapunov settings: {why}"),
            MleError::Diverged(d) => d.fmt(f),
        }
    }
}

impl core::error::Error for MleError {}

impl From<Divergence> for MleError {
    fn from(d: Divergence) -> Self {
        MleError::Diverged(d)
    }
}

impl MleSettings {
    pub fn validate(&self) -> Result<(), MleError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(MleError::InvalidSettings("dt must be > 0"));
        }
        if self.renorm_every == 0 {
            return Err(MleError::InvalidSettings("renorm_every must be >= 1"));
        }
        if self.total_steps < self.renorm_every {
            return Err(MleError::InvalidSettings(
                "total_steps must be >= renorm_every",
            ));
        }
        let [a, b] = self.seed_tangent;
        if !(a.is_finite() && b.is_finite()) || (a == 0.0 && b == 0.0) {
            return Err(MleError::InvalidSettings(
                "seed tangent must be finite and non-zero",
            ));
        }
        Ok(())
    }
}

#[inline]
fn apply(m: &Mat2, v: State) -> State {
    State {
        x: m[0][0] * v.x + m[0][1] * v.y,
        y: m[1][0] * v.x + m[1][1] * v.y,
    }
}

/// One coupled RK4 step of base state `s` and tangent `v`.
#[inline]
pub fn tangent_rk4_step(
    spec: &SystemSpec,
    s: State,
    v: State,
    t: f64,
    dt: f64,
) -> Result<(State, State), Divergence> {
    let h2 = 0.5 * dt;
    let k1 = vector_field(spec, s, t);
    let l1 = apply(&jacobian(spec, s, t), v);
    let s2 = s.axpy(h2, k1);
    let k2 = vector_field(spec, s2, t + h2);
    let l2 = apply(&jacobian(spec, s2, t + h2), v.axpy(h2, l1));
    let s3 = s.axpy(h2, k2);
    let k3 = vector_field(spec, s3, t + h2);
    let l3 = apply(&jacobian(spec, s3, t + h2), v.axpy(h2, l2));
    let s4 = s.axpy(dt, k3);
    let k4 = vector_field(spec, s4, t + dt);
    let l4 = apply(&jacobian(spec, s4, t + dt), v.axpy(dt, l3));
    let h6 = dt / 6.0;
    let ns = State {
        x: s.x + h6 * (k1.x + 2.0 * (k2.x + k3.x) + k4.x),
        y: s.y + h6 * (k1.y + 2.0 * (k2.y + k3.y) + k4.y),
    };
    let nv = State {
        x: v.x + h6 * (l1.x + 2.0 * (l2.x + l3.x) + l4.x),
        y: v.y + h6 * (l1.y + 2.0 * (l2.y + l3.y) + l4.y),
    };
    if ns.is_finite() && nv.is_finite() {
        Ok((ns, nv))
    } else {
        Err(Divergence { t: t + dt })
    }
}

/// Result of a Lyapunov run, with the final base state for chaining.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleRun {
    pub exponent: f64,
    pub final_state: State,
    pub final_time: f64,
}

/// Maximal Lyapunov exponent (per unit time) of the trajectory through `ic`.
pub fn mle(spec: &SystemSpec, ic: State, settings: &MleSettings) -> Result<f64, MleError> {
    mle_run(spec, ic, settings).map(|r| r.exponent)
}

/// [`mle`] returning the end state as well.
pub fn mle_run(spec: &SystemSpec, ic: State, settings: &MleSettings) -> Result<MleRun, MleError> {
    settings.validate()?;
    let dt = settings.dt;
    let mut prop = Propagator::new(spec, ic, settings.t0, dt);
    let mut s = prop.advance_by(settings.transient_steps)?;
    let start = settings.transient_steps;

    let [a, b] = settings.seed_tangent;
    let norm = sqrt(a * a + b * b);
    let mut v = State::new(a / norm, b / norm);
    let mut log_sum = 0.0;
    let mut since = 0u64;
    for k in 0..settings.total_steps {
        let t = settings.t0 + (start + k) as f64 * dt;
        let (ns, nv) = tangent_rk4_step(spec, s, v, t, dt)?;
        s = ns;
        v = nv;
        since += 1;
        if since == settings.renorm_every || k + 1 == settings.total_steps {
            let len = sqrt(v.x * v.x + v.y * v.y);
            if !(len > 0.0 && len.is_finite()) {
                return Err(MleError::Diverged(Divergence { t: t + dt }));
            }
            log_sum += ln(len);
            v = State::new(v.x / len, v.y / len);
            since = 0;
        }
    }
    let elapsed = settings.total_steps as f64 * dt;
    Ok(MleRun {
        exponent: log_sum / elapsed,
        final_state: s,
        final_time: settings.t0 + (start + settings.total_steps) as f64 * dt,
    })
}
