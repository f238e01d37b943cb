use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::rng::stream_id;
use super::{generate_round_with, mse, random_truth, stream_rng, NoiseModel, TrialRecord};
use crate::error::{NcsError, Result};
use crate::graph::NcsGraph;
use crate::solvers::{solve_noisy, Algorithm};

/// Runs `trials_per_count` noisy rounds for each fault count.
///
/// Trial `t` of the `i`-th fault count draws from stream `(i, t)`; trial ids
/// run consecutively across fault counts.
pub fn run_campaign(
    g: &NcsGraph,
    config: &NoiseModel,
    fault_counts: &[usize],
    trials_per_count: usize,
    seed: u64,
    solver: Algorithm,
) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    if trials_per_count == 0 {
        return Err(NcsError::InvalidArgument(
            "trials per fault count must be at least 1".into(),
        ));
    }
    if let Some(&count) = fault_counts.iter().find(|&&c| c > g.edge_count()) {
        return Err(NcsError::TooManyFaults {
            count,
            edges: g.edge_count(),
        });
    }
    if !g.is_connected() {
        return Err(NcsError::Disconnected);
    }
    let jobs: Vec<(usize, usize, usize)> = fault_counts
        .iter()
        .enumerate()
        .flat_map(|(gi, &c)| (0..trials_per_count).map(move |t| (gi, c, t)))
        .collect();
    jobs.par_iter()
        .enumerate()
        .map(|(trial_id, &(group, count, t))| {
            let mut rng = stream_rng(seed, stream_id(group as u64, t as u64));
            let truth = random_truth(g, &mut rng);
            let faults = config.sample_faults(g, count, &mut rng)?;
            let m = generate_round_with(g, &truth, &faults, Some(config), &mut rng)?;
            let eta = config.threshold_eta;
            let (estimated, mse_offsets, solver_error) = match solve_noisy(solver, g, &m, eta) {
                Ok(r) => {
                    let est: BTreeSet<_> = r
                        .solution
                        .fault_estimates
                        .iter()
                        .filter(|(_, v)| v.abs() > eta)
                        .map(|(e, _)| *e)
                        .collect();
                    (est, mse(&r.solution.offsets, truth.offsets()), None)
                }
                Err(e) => (BTreeSet::new(), f64::INFINITY, Some(e.to_string())),
            };
            let injected = faults.edges();
            Ok(TrialRecord {
                trial_id: trial_id as u64,
                fault_count: count,
                distributions_identical: solver_error.is_none() && estimated == injected,
                injected_fault_edges: injected,
                estimated_fault_edges: estimated,
                mse_offsets,
                solver_used: solver,
                solver_error,
            })
        })
        .collect()
}

/// Aggregates for one fault count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub fault_count: usize,
    pub trials: usize,
    pub identical_rate: f64,
    pub mean_mse: f64,
    /// Mean MSE over trials whose detected set matched; `None` if there were none.
    pub mean_mse_identical: Option<f64>,
    pub mean_mse_non_identical: Option<f64>,
    pub solver_errors: usize,
}

pub fn summarize(records: &[TrialRecord]) -> Vec<CampaignSummary> {
    let counts: BTreeSet<usize> = records.iter().map(|r| r.fault_count).collect();
    counts
        .into_iter()
        .map(|c| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.fault_count == c).collect();
            let mean =
                |it: Vec<f64>| (!it.is_empty()).then(|| it.iter().sum::<f64>() / it.len() as f64);
            let identical = rows.iter().filter(|r| r.distributions_identical).count();
            CampaignSummary {
                fault_count: c,
                trials: rows.len(),
                identical_rate: identical as f64 / rows.len() as f64,
                mean_mse: mean(rows.iter().map(|r| r.mse_offsets).collect()).unwrap_or(0.0),
                mean_mse_identical: mean(
                    rows.iter()
                        .filter(|r| r.distributions_identical)
                        .map(|r| r.mse_offsets)
                        .collect(),
                ),
                mean_mse_non_identical: mean(
                    rows.iter()
                        .filter(|r| !r.distributions_identical)
                        .map(|r| r.mse_offsets)
                        .collect(),
                ),
                solver_errors: rows.iter().filter(|r| r.solver_error.is_some()).count(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_free_campaign_is_exact() {
        let g = NcsGraph::complete(4);
        let cfg = NoiseModel {
            gaussian_sigma: 0.0,
            ..NoiseModel::default()
        };
        for alg in [Algorithm::Exhaustive, Algorithm::Fast] {
            let recs = run_campaign(&g, &cfg, &[0], 20, 5, alg).unwrap();
            assert!(
                recs.iter()
                    .all(|r| r.mse_offsets == 0.0 && r.distributions_identical),
                "{alg}"
            );
        }
        // the median of a cluster keeps a single fault out of the estimate
        let recs = run_campaign(&g, &cfg, &[1], 40, 5, Algorithm::Fast).unwrap();
        assert!(recs.iter().all(|r| r.mse_offsets == 0.0));
    }

    #[test]
    fn campaign_is_reproducible() {
        let g = NcsGraph::complete(4);
        let cfg = NoiseModel::default();
        let a = run_campaign(&g, &cfg, &[1, 2], 15, 77, Algorithm::Fast).unwrap();
        let b = run_campaign(&g, &cfg, &[1, 2], 15, 77, Algorithm::Fast).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.iter().map(|r| r.trial_id).collect::<Vec<_>>(),
            (0..30).collect::<Vec<_>>()
        );
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = NcsGraph::complete(3);
        let cfg = NoiseModel::default();
        assert!(matches!(
            run_campaign(&g, &cfg, &[4], 1, 0, Algorithm::Fast),
            Err(NcsError::TooManyFaults { count: 4, edges: 3 })
        ));
        assert!(run_campaign(&g, &cfg, &[1], 0, 0, Algorithm::Fast).is_err());
    }

    #[test]
    fn summary_splits_by_outcome() {
        let g = NcsGraph::complete(4);
        let recs = run_campaign(
            &g,
            &NoiseModel::default(),
            &[1],
            50,
            3,
            Algorithm::Exhaustive,
        )
        .unwrap();
        let s = summarize(&recs);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].trials, 50);
        assert!(s[0].identical_rate > 0.0);
    }
}
