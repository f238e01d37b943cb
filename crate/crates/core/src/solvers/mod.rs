//! Fault-correcting synchronization: exhaustive distribution search and
//! voting over edge-disjoint paths.

mod exhaustive;
mod fast;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph};
use crate::linsys::{ClockState, FaultDistribution, MeasurementSet, NcsSolution, Scalar};

pub use exhaustive::{ncs_exhaustive, ncs_exhaustive_noisy};
pub use fast::{ncs_fast, ncs_fast_noisy};

/// Default residual / detection threshold for noisy rounds.
pub const DEFAULT_ETA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exhaustive,
    Fast,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::Fast => "fast",
        })
    }
}

impl FromStr for Algorithm {
    type Err = NcsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "fast" => Ok(Algorithm::Fast),
            other => Err(NcsError::InvalidArgument(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyncResult<T> {
    pub solution: NcsSolution<T>,
    /// Distribution that produced the solution; exhaustive search only.
    pub assumed_distribution: Option<FaultDistribution>,
    /// Distributions tested (exhaustive) or paths evaluated (fast).
    pub iterations_examined: usize,
}

/// Runs the chosen solver in exact mode.
pub fn solve_exact(
    algorithm: Algorithm,
    g: &NcsGraph,
    m: &MeasurementSet<crate::rational::Rational>,
) -> Result<SyncResult<crate::rational::Rational>> {
    match algorithm {
        Algorithm::Exhaustive => ncs_exhaustive(g, m),
        Algorithm::Fast => ncs_fast(g, m),
    }
}

/// Runs the chosen solver in noisy mode with threshold `eta`.
pub fn solve_noisy(
    algorithm: Algorithm,
    g: &NcsGraph,
    m: &MeasurementSet<f64>,
    eta: f64,
) -> Result<SyncResult<f64>> {
    match algorithm {
        Algorithm::Exhaustive => ncs_exhaustive_noisy(g, m, eta),
        Algorithm::Fast => ncs_fast_noisy(g, m, eta),
    }
}

/// Per-edge defect `δ̃_ab - (δ̂_a - δ̂_b)` for every edge where it is nonzero.
pub fn detect_faults<T: Scalar>(
    g: &NcsGraph,
    m: &MeasurementSet<T>,
    offsets: &ClockState<T>,
) -> Result<BTreeMap<Edge, T>> {
    m.check(g)?;
    offsets.check(g)?;
    Ok(defects(m, offsets).filter(|(_, v)| !v.is_zero()).collect())
}

/// Noisy counterpart of [`detect_faults`]: keeps defects with magnitude above `eta`.
pub fn detect_faults_above(
    g: &NcsGraph,
    m: &MeasurementSet<f64>,
    offsets: &ClockState<f64>,
    eta: f64,
) -> Result<BTreeMap<Edge, f64>> {
    m.check(g)?;
    offsets.check(g)?;
    Ok(defects(m, offsets).filter(|(_, v)| v.abs() > eta).collect())
}

fn defects<'a, T: Scalar>(
    m: &'a MeasurementSet<T>,
    offsets: &'a ClockState<T>,
) -> impl Iterator<Item = (Edge, T)> + 'a {
    m.iter().map(|(e, v)| (e, v.clone() - offsets.pairwise(e)))
}
