//! Floating-point least squares for noisy rounds.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};

use super::{build_system, FaultDistribution, MeasurementSet, NcsSolution};
use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph, NodeId};

const RANK_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquaresFit {
    pub candidate: NcsSolution<f64>,
    /// Absolute defect of each equation at the candidate.
    pub residuals: BTreeMap<Edge, f64>,
}

impl LeastSquaresFit {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    pub fn within(&self, eta: f64) -> bool {
        self.residuals.values().all(|r| *r <= eta)
    }
}

/// Minimizes the summed squared residual of the system for `d`.
///
/// Rank-deficient systems are reported as [`NcsError::Underdetermined`].
pub fn residual_least_squares(
    g: &NcsGraph,
    m: &MeasurementSet<f64>,
    d: &FaultDistribution,
) -> Result<LeastSquaresFit> {
    let sys = build_system(g, m, d)?;
    if let Some(fit) = consistent_tree_solution(g, m, d) {
        return Ok(fit);
    }
    let (rows, cols) = (sys.row_count(), sys.column_count());
    let a = DMatrix::from_fn(rows, cols, |i, j| f64::from(sys.a[i][j]));
    let b = DVector::from_vec(sys.b.clone());
    let svd = a.clone().svd(true, true);
    let scale = svd.singular_values.max().max(1.0);
    if svd.rank(RANK_EPS * scale) < cols {
        return Err(NcsError::Underdetermined);
    }
    let x = svd
        .solve(&b, RANK_EPS * scale)
        .map_err(|_| NcsError::Underdetermined)?;
    let defect = &a * &x - &b;
    let residuals = sys
        .rows
        .iter()
        .zip(defect.iter())
        .map(|(e, r)| (*e, r.abs()))
        .collect();
    Ok(LeastSquaresFit {
        candidate: sys.interpret(x.iter().copied().collect()),
        residuals,
    })
}

/// Chains measurements along a BFS tree of the unassumed edges. When that
/// solution already satisfies every unassumed equation exactly it is the
/// least-squares optimum, and returning it keeps noise-free rounds bit-exact.
fn consistent_tree_solution(
    g: &NcsGraph,
    m: &MeasurementSet<f64>,
    d: &FaultDistribution,
) -> Option<LeastSquaresFit> {
    let mut offset: Vec<Option<f64>> = vec![None; g.node_count()];
    offset[0] = Some(0.0);
    let mut queue = VecDeque::from([NodeId::REFERENCE]);
    while let Some(u) = queue.pop_front() {
        let du = offset[u.0].expect("visited");
        for v in g.neighbors(u) {
            if offset[v.0].is_some() || d.contains(Edge::of(u.0, v.0)) {
                continue;
            }
            offset[v.0] = Some(du - m.directed(u, v)?);
            queue.push_back(v);
        }
    }
    let offset: Vec<f64> = offset.into_iter().collect::<Option<_>>()?;
    let mut residuals = BTreeMap::new();
    let mut fault_estimates = BTreeMap::new();
    for (e, &measured) in m.iter() {
        let defect = measured - (offset[e.a().0] - offset[e.b().0]);
        if d.contains(e) {
            fault_estimates.insert(e, defect);
        } else if defect != 0.0 {
            return None;
        }
        residuals.insert(e, 0.0);
    }
    Some(LeastSquaresFit {
        candidate: NcsSolution {
            offsets: offset[1..].to_vec(),
            fault_estimates,
        },
        residuals,
    })
}
