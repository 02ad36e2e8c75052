//! Peak extraction and extreme-event statistics.
//!
//! An extreme event is a peak of the observable above the qualifier threshold
//! `mean + n * sigma`, where mean and sigma are taken over all peaks of the record
//! (sigma is the population standard deviation). The event probability is the
//! per-peak frequency `ee_count / peak_count`, and `d_max = (max - mean) / sigma`
//! measures how many standard deviations the largest peak sits above the mean.

use alloc::vec::Vec;

use crate::dynamics::SystemSpec;
use crate::integrator::{drive, SimError, SimPlan, Trajectory};
use crate::math::sqrt;

/// Peak values in time order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeakSeries {
    pub values: Vec<f64>,
    pub times: Vec<f64>,
}

impl PeakSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn push(&mut self, t: f64, v: f64) {
        self.times.push(t);
        self.values.push(v);
    }

    pub fn from_values(values: Vec<f64>) -> Self {
        let times = (0..values.len()).map(|i| i as f64).collect();
        PeakSeries { values, times }
    }
}

/// A detected local maximum together with its neighbouring samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub t: f64,
    pub value: f64,
    /// Sample before the peak.
    pub left: f64,
    /// Sample after the (first sample of the) peak; equals `value` on a plateau.
    pub right: f64,
}

impl Peak {
    /// Vertex of the parabola through `left, value, right` (unit spacing).
    ///
    /// Used for bifurcation output, where sampling jitter of order `dt^2` would
    /// otherwise smear a single periodic maximum into many distinct values.
    pub fn refined(&self) -> f64 {
        let curvature = self.left - 2.0 * self.value + self.right;
        if curvature < 0.0 {
            let slope = self.right - self.left;
            self.value - slope * slope / (8.0 * curvature)
        } else {
            self.value
        }
    }
}

/// Streaming local-maximum detector.
///
/// A peak is a sample strictly above its predecessor and not below its
/// successor, with a flat top collapsed to its first sample. A plateau only
/// counts when the series falls again after it, so a run that is still flat
/// at the end of the record is dropped; this makes the set of peak values
/// invariant under time reversal.
#[derive(Debug, Clone, Default)]
pub struct PeakDetector {
    prev: Option<f64>,
    candidate: Option<Peak>,
    awaiting_right: bool,
}

impl PeakDetector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Feeds one sample; returns the peak completed by this sample, if any.
    #[inline]
    pub fn push(&mut self, t: f64, v: f64) -> Option<Peak> {
        let mut out = None;
        if let Some(p) = self.prev {
            if self.awaiting_right {
                if let Some(c) = self.candidate.as_mut() {
                    c.right = v;
                }
                self.awaiting_right = false;
            }
            if v > p {
                self.candidate = Some(Peak {
                    t,
                    value: v,
                    left: p,
                    right: f64::NAN,
                });
                self.awaiting_right = true;
            } else if v < p {
                out = self.candidate.take();
            }
        }
        self.prev = Some(v);
        out
    }
}

/// Every interior local maximum of the trajectory's observable.
pub fn detect_peaks(traj: &Trajectory) -> PeakSeries {
    peaks_of(&traj.times, &traj.values)
}

/// [`detect_peaks`] over plain slices.
pub fn peaks_of(times: &[f64], values: &[f64]) -> PeakSeries {
    let mut det = PeakDetector::new();
    let mut out = PeakSeries::default();
    for (&t, &v) in times.iter().zip(values) {
        if let Some(p) = det.push(t, v) {
            out.push(p.t, p.value);
        }
    }
    out
}

/// Runs the plan and keeps only the peaks of its observable, without storing the
/// trajectory. Gives the same peaks as `detect_peaks(&simulate(..))`.
pub fn record_peaks(spec: &SystemSpec, plan: &SimPlan) -> Result<PeakSeries, SimError> {
    plan.validate().map_err(SimError::Plan)?;
    let obs = plan.observable;
    let mut det = PeakDetector::new();
    let mut out = PeakSeries::default();
    drive(spec, plan, |t, s| {
        if let Some(p) = det.push(t, obs.pick(s)) {
            out.push(p.t, p.value);
        }
    })
    .map_err(SimError::Diverged)?;
    Ok(out)
}

/// Extreme-event statistics of one peak record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EEStats {
    pub n: f64,
    pub mean: f64,
    pub sigma: f64,
    pub threshold: f64,
    pub peak_count: usize,
    pub ee_count: usize,
    pub probability: f64,
    pub d_max: f64,
    pub max: f64,
    /// Set when sigma is zero; `d_max` is then reported as 0.
    pub degenerate: bool,
}

impl EEStats {
    pub fn has_events(&self) -> bool {
        self.ee_count > 0
    }
}

/// Qualifier threshold, event count, probability and `d_max` for multiplier `n`.
///
/// An empty series yields zero counts, NaN moments and the degeneracy flag.
pub fn ee_stats(peaks: &PeakSeries, n: f64) -> EEStats {
    stats_of(&peaks.values, n)
}

/// [`ee_stats`] over a plain slice of peak values.
pub fn stats_of(values: &[f64], n: f64) -> EEStats {
    let count = values.len();
    if count == 0 {
        return EEStats {
            n,
            mean: f64::NAN,
            sigma: f64::NAN,
            threshold: f64::NAN,
            peak_count: 0,
            ee_count: 0,
            probability: 0.0,
            d_max: 0.0,
            max: f64::NAN,
            degenerate: true,
        };
    }
    let inv = 1.0 / count as f64;
    let mean = values.iter().sum::<f64>() * inv;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() * inv;
    let sigma = sqrt(var);
    let threshold = mean + n * sigma;
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ee_count = values.iter().filter(|&&v| v > threshold).count();
    let degenerate = sigma == 0.0;
    EEStats {
        n,
        mean,
        sigma,
        threshold,
        peak_count: count,
        ee_count,
        probability: ee_count as f64 / count as f64,
        d_max: if degenerate {
            0.0
        } else {
            (max - mean) / sigma
        },
        max,
        degenerate,
    }
}

/// Peak-value histogram normalised to a probability density.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub centers: Vec<f64>,
    pub counts: Vec<usize>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Probability mass in bins whose centre lies above `threshold`.
    pub fn mass_above(&self, threshold: f64) -> f64 {
        self.centers
            .iter()
            .zip(&self.densities)
            .filter(|(c, _)| **c > threshold)
            .map(|(_, d)| d * self.width)
            .sum()
    }
}

/// Density histogram of peak values over `range` (default: `[min, max]` of the peaks).
///
/// Values outside the range are ignored; the top edge is inclusive. When the range
/// collapses to a point it is widened to a unit interval around it. Returns an empty
/// histogram for empty input or `bins == 0`.
pub fn peak_histogram(peaks: &PeakSeries, bins: usize, range: Option<(f64, f64)>) -> Histogram {
    let empty = Histogram {
        lo: 0.0,
        hi: 0.0,
        width: 0.0,
        centers: Vec::new(),
        counts: Vec::new(),
        densities: Vec::new(),
    };
    if peaks.is_empty() || bins == 0 {
        return empty;
    }
    let (mut lo, mut hi) = range.unwrap_or_else(|| {
        peaks
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            })
    });
    if hi < lo {
        core::mem::swap(&mut lo, &mut hi);
    }
    if hi == lo {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = alloc::vec![0usize; bins];
    let mut total = 0usize;
    for &v in &peaks.values {
        if !(lo..=hi).contains(&v) {
            continue;
        }
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
        total += 1;
    }
    let centers = (0..bins).map(|i| lo + (i as f64 + 0.5) * width).collect();
    let densities = counts
        .iter()
        .map(|&c| {
            if total == 0 {
                0.0
            } else {
                c as f64 / (total as f64 * width)
            }
        })
        .collect();
    Histogram {
        lo,
        hi,
        width,
        centers,
        counts,
        densities,
    }
}
