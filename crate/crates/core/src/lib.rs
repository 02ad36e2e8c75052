//! Forced nonlinear oscillators and the statistics used to study extreme events
//! in them: fixed-step RK4 propagation, peak extraction, qualifier thresholds,
//! maximal Lyapunov exponents, parameter scans and basin classification.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, the CLI and the
//! thread pool live in the `eemit` companion crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod basin;
pub mod dynamics;
pub mod events;
pub mod integrator;
pub mod lyapunov;
pub mod scan;

pub use basin::{basin_grid, classify_attractor, BasinPlan, Classification, Label};
pub use dynamics::{jacobian, vector_field, Mat2, Param, SpecError, State, SystemKind, SystemSpec};
pub use events::{
    detect_peaks, ee_stats, peak_histogram, record_peaks, EEStats, Histogram, Peak, PeakDetector,
    PeakSeries,
};
pub use integrator::{rk4_step, simulate, Divergence, Observable, SimError, SimPlan, Trajectory};
pub use lyapunov::{mle, MleError, MleSettings, CHAOS_THRESHOLD};
pub use scan::{scan_1d, scan_2d, Axis, Collect, Executor, ScanPlan, ScanRow, Serial};
