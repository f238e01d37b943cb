//! Seeded fault injection: measurement generation, noisy campaigns and
//! exact-mode resilience sweeps.

mod campaign;
pub mod rng;
mod sweep;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph};
use crate::linsys::{ClockState, MeasurementSet, Scalar};
use crate::rational::Rational;
use crate::solvers::Algorithm;

pub use campaign::{run_campaign, summarize, CampaignSummary};
pub use rng::{stream_rng, SimRng};
pub use sweep::{
    check_placement, counterexample_faults, sweep_resilience, PlacementOutcome, SweepOptions,
    SweepSummary, ValueStrategy,
};

/// Injected faults, keyed by canonical edge. Values are offsets added to the
/// measurement of `a` relative to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultMap<T> {
    faults: BTreeMap<Edge, T>,
}

impl<T: Scalar> FaultMap<T> {
    pub fn none() -> Self {
        FaultMap {
            faults: BTreeMap::new(),
        }
    }

    pub fn new(faults: BTreeMap<Edge, T>) -> Result<Self> {
        if let Some((e, _)) = faults.iter().find(|(_, v)| v.is_zero()) {
            return Err(NcsError::ZeroFault(*e));
        }
        Ok(FaultMap { faults })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Edge, T)>) -> Result<Self> {
        Self::new(pairs.into_iter().collect())
    }

    pub fn check(&self, g: &NcsGraph) -> Result<()> {
        match self.faults.keys().find(|e| !g.contains_edge(**e)) {
            Some(e) => Err(NcsError::EdgeNotInGraph(*e)),
            None => Ok(()),
        }
    }

    pub fn get(&self, e: Edge) -> Option<&T> {
        self.faults.get(&e)
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.faults.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.faults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faults.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, &T)> {
        self.faults.iter().map(|(e, v)| (*e, v))
    }
}

/// Noise and fault magnitudes for noisy rounds: each session's error is
/// `ε + x·F` with `ε ~ N(0, σ)`, `x ∈ {0, 1}` and `|F|` uniform in range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    pub gaussian_sigma: f64,
    pub fault_magnitude_range: (f64, f64),
    /// Per-session fault probability for Bernoulli fault placement.
    pub fault_probability: f64,
    pub threshold_eta: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            gaussian_sigma: 1.0,
            fault_magnitude_range: (2.0, 8.0),
            fault_probability: 0.0,
            threshold_eta: crate::solvers::DEFAULT_ETA,
        }
    }
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.fault_magnitude_range;
        let bad = |msg: &str| Err(NcsError::InvalidArgument(msg.to_string()));
        if !(self.gaussian_sigma >= 0.0 && self.gaussian_sigma.is_finite()) {
            return bad("sigma must be finite and non-negative");
        }
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return bad("fault magnitude range must satisfy 0 < lo <= hi");
        }
        if !(0.0..=1.0).contains(&self.fault_probability) {
            return bad("fault probability must lie in [0, 1]");
        }
        if !(self.threshold_eta >= 0.0 && self.threshold_eta.is_finite()) {
            return bad("eta must be finite and non-negative");
        }
        Ok(())
    }

    /// Non-fatal configuration concerns.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.fault_magnitude_range.0 <= self.threshold_eta {
            out.push(format!(
                "smallest fault magnitude {} does not exceed eta {}; faults may be indistinguishable from noise",
                self.fault_magnitude_range.0, self.threshold_eta
            ));
        }
        out
    }

    fn magnitude(&self, rng: &mut SimRng) -> f64 {
        let (lo, hi) = self.fault_magnitude_range;
        let m = if lo == hi {
            lo
        } else {
            rng.random_range(lo..=hi)
        };
        if rng.random_bool(0.5) {
            -m
        } else {
            m
        }
    }

    /// Faults on `count` edges chosen uniformly without replacement.
    pub fn sample_faults(
        &self,
        g: &NcsGraph,
        count: usize,
        rng: &mut SimRng,
    ) -> Result<FaultMap<f64>> {
        if count > g.edge_count() {
            return Err(NcsError::TooManyFaults {
                count,
                edges: g.edge_count(),
            });
        }
        let mut idx = sample(rng, g.edge_count(), count).into_vec();
        idx.sort_unstable();
        FaultMap::from_pairs(idx.into_iter().map(|i| (g.edges()[i], self.magnitude(rng))))
    }

    /// Each session independently faulty with `fault_probability`.
    pub fn sample_bernoulli_faults(&self, g: &NcsGraph, rng: &mut SimRng) -> FaultMap<f64> {
        let mut faults = BTreeMap::new();
        for &e in g.edges() {
            if rng.random_bool(self.fault_probability) {
                faults.insert(e, self.magnitude(rng));
            }
        }
        FaultMap { faults }
    }
}

/// Per-trial outcome of a noisy campaign.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub fault_count: usize,
    pub injected_fault_edges: BTreeSet<Edge>,
    pub estimated_fault_edges: BTreeSet<Edge>,
    pub distributions_identical: bool,
    /// Mean squared offset error; infinite when the solver returned an error.
    pub mse_offsets: f64,
    pub solver_used: Algorithm,
    pub solver_error: Option<String>,
}

/// Uniform true offsets in `[-10, 10]` on a dyadic grid.
pub fn random_truth(g: &NcsGraph, rng: &mut SimRng) -> ClockState<f64> {
    ClockState::new(
        (1..g.node_count())
            .map(|_| rng::dyadic_uniform(rng, 10))
            .collect(),
    )
}

/// Noisy-mode round: `δ̃ = (δ_a0 - δ_b0) + e_ab + ε` with `ε ~ N(0, σ)` when a
/// noise model is given. The noise stream is derived from `seed` alone.
pub fn generate_round(
    g: &NcsGraph,
    truth: &ClockState<f64>,
    faults: &FaultMap<f64>,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<MeasurementSet<f64>> {
    let mut rng = stream_rng(seed, 0);
    generate_round_with(g, truth, faults, noise, &mut rng)
}

pub(crate) fn generate_round_with(
    g: &NcsGraph,
    truth: &ClockState<f64>,
    faults: &FaultMap<f64>,
    noise: Option<&NoiseModel>,
    rng: &mut SimRng,
) -> Result<MeasurementSet<f64>> {
    truth.check(g)?;
    faults.check(g)?;
    let normal = match noise {
        Some(n) if n.gaussian_sigma > 0.0 => Some(
            Normal::new(0.0, n.gaussian_sigma)
                .map_err(|e| NcsError::InvalidArgument(e.to_string()))?,
        ),
        _ => None,
    };
    let mut values = BTreeMap::new();
    for &e in g.edges() {
        let mut v = truth.pairwise(e);
        if let Some(f) = faults.get(e) {
            v += f;
        }
        if let Some(n) = &normal {
            v += n.sample(rng);
        }
        values.insert(e, v);
    }
    Ok(MeasurementSet::new(values))
}

/// Exact-mode round with no noise.
pub fn generate_exact_round(
    g: &NcsGraph,
    truth: &ClockState<Rational>,
    faults: &FaultMap<Rational>,
) -> Result<MeasurementSet<Rational>> {
    truth.check(g)?;
    faults.check(g)?;
    let values = g
        .edges()
        .iter()
        .map(|&e| {
            let v = truth.pairwise(e);
            (e, faults.get(e).map_or(v.clone(), |f| v + f))
        })
        .collect();
    Ok(MeasurementSet::new(values))
}

pub(crate) fn mse(estimate: &[f64], truth: &[f64]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    estimate
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / truth.len() as f64
}
