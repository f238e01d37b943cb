//! The per-round equation system and its solvability classification.
//!
//! For a canonical edge `(a, b)` the measurement estimates `δ_a0 - δ_b0`.
//! Row `r` of the system belongs to the `r`-th edge in sorted order; column
//! `j - 1` holds the offset of node `j` and one extra column per assumed-faulty
//! edge holds its fault estimate, so a faulty row reads
//! `δ_a0 - δ_b0 + ê_ab = δ̃_ab`.

pub mod exact;
pub mod lsq;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph, NodeId};

pub use exact::{classify_and_solve, rank, solve_distribution};
pub use lsq::{residual_least_squares, LeastSquaresFit};

/// Numeric types usable for offsets and measurements (exact rationals or `f64`).
pub trait Scalar:
    Clone + Debug + PartialEq + Zero + Neg<Output = Self> + Add<Output = Self> + Sub<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone + Debug + PartialEq + Zero + Neg<Output = T> + Add<Output = T> + Sub<Output = T>
{
}

/// Offsets of nodes `1..N` relative to the reference node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockState<T> {
    offsets: Vec<T>,
}

impl<T: Scalar> ClockState<T> {
    pub fn new(offsets: Vec<T>) -> Self {
        ClockState { offsets }
    }

    /// Validates the length against a graph.
    pub fn for_graph(g: &NcsGraph, offsets: Vec<T>) -> Result<Self> {
        let state = ClockState { offsets };
        state.check(g)?;
        Ok(state)
    }

    pub fn check(&self, g: &NcsGraph) -> Result<()> {
        let expected = g.node_count() - 1;
        if self.offsets.len() != expected {
            return Err(NcsError::OffsetLengthMismatch {
                expected,
                actual: self.offsets.len(),
            });
        }
        Ok(())
    }

    pub fn offsets(&self) -> &[T] {
        &self.offsets
    }

    pub fn into_offsets(self) -> Vec<T> {
        self.offsets
    }

    /// Offset of `v` relative to the reference; zero for the reference itself.
    pub fn offset(&self, v: NodeId) -> T {
        if v.0 == 0 {
            T::zero()
        } else {
            self.offsets[v.0 - 1].clone()
        }
    }

    /// True pairwise offset `δ_a0 - δ_b0` for a canonical edge.
    pub fn pairwise(&self, e: Edge) -> T {
        self.offset(e.a()) - self.offset(e.b())
    }
}

/// Measured offsets for one round, keyed by canonical edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementSet<T> {
    values: BTreeMap<Edge, T>,
}

impl<T: Scalar> MeasurementSet<T> {
    pub fn new(values: BTreeMap<Edge, T>) -> Self {
        MeasurementSet { values }
    }

    /// Validates the key set against the graph.
    pub fn for_graph(g: &NcsGraph, values: BTreeMap<Edge, T>) -> Result<Self> {
        let m = MeasurementSet { values };
        m.check(g)?;
        Ok(m)
    }

    /// Builds from `(u, v, value)` triples measured as `u` relative to `v`;
    /// reversed pairs are stored canonically with the value negated.
    pub fn from_oriented(
        g: &NcsGraph,
        triples: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (u, v, value) in triples {
            let e = Edge::new(u, v)?;
            let value = if u < v { value } else { -value };
            if values.insert(e, value).is_some() {
                return Err(NcsError::MeasurementMismatch(format!(
                    "edge {e} measured twice"
                )));
            }
        }
        Self::for_graph(g, values)
    }

    pub fn check(&self, g: &NcsGraph) -> Result<()> {
        if self.values.len() == g.edge_count()
            && g.edges().iter().all(|e| self.values.contains_key(e))
        {
            return Ok(());
        }
        let missing = g.edges().iter().find(|e| !self.values.contains_key(e));
        let extra = self.values.keys().find(|e| !g.contains_edge(**e));
        let detail = match (missing, extra) {
            (Some(e), _) => format!("no measurement for edge {e}"),
            (None, Some(e)) => format!("measurement for unknown edge {e}"),
            (None, None) => "edge count differs".to_string(),
        };
        Err(NcsError::MeasurementMismatch(detail))
    }

    pub fn get(&self, e: Edge) -> Option<&T> {
        self.values.get(&e)
    }

    pub fn values(&self) -> &BTreeMap<Edge, T> {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, &T)> {
        self.values.iter().map(|(e, v)| (*e, v))
    }

    /// Measured offset of `from` relative to `to`, following the edge's orientation.
    pub fn directed(&self, from: NodeId, to: NodeId) -> Option<T> {
        let e = Edge::new(from, to).ok()?;
        let v = self.values.get(&e)?.clone();
        Some(if from < to { v } else { -v })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MeasurementSet<U> {
        MeasurementSet {
            values: self.values.iter().map(|(e, v)| (*e, f(v))).collect(),
        }
    }
}

/// Set of sessions assumed faulty when building the system.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaultDistribution {
    pub assumed_faulty: BTreeSet<Edge>,
}

impl FaultDistribution {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn of(edges: impl IntoIterator<Item = Edge>) -> Self {
        FaultDistribution {
            assumed_faulty: edges.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.assumed_faulty.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assumed_faulty.is_empty()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.assumed_faulty.contains(&e)
    }

    pub fn check(&self, g: &NcsGraph) -> Result<()> {
        match self.assumed_faulty.iter().find(|e| !g.contains_edge(**e)) {
            Some(e) => Err(NcsError::EdgeNotInGraph(*e)),
            None => Ok(()),
        }
    }
}

/// Estimated offsets plus fault estimates for assumed or detected faulty edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcsSolution<T> {
    pub offsets: Vec<T>,
    pub fault_estimates: BTreeMap<Edge, T>,
}

impl<T: Scalar> NcsSolution<T> {
    pub fn clock_state(&self) -> ClockState<T> {
        ClockState::new(self.offsets.clone())
    }
}

/// Rouché–Capelli classification of a linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome<S> {
    NoSolution,
    Unique(S),
    Underdetermined,
}

impl<S> SolveOutcome<S> {
    pub fn unique(self) -> Option<S> {
        match self {
            SolveOutcome::Unique(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, SolveOutcome::Unique(_))
    }

    pub fn map<U>(self, f: impl FnOnce(S) -> U) -> SolveOutcome<U> {
        match self {
            SolveOutcome::NoSolution => SolveOutcome::NoSolution,
            SolveOutcome::Unique(s) => SolveOutcome::Unique(f(s)),
            SolveOutcome::Underdetermined => SolveOutcome::Underdetermined,
        }
    }
}

/// Meaning of a column of the coefficient matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    Offset(NodeId),
    Fault(Edge),
}

/// `A x = b` with `A` entries in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<T> {
    pub a: Vec<Vec<i8>>,
    pub b: Vec<T>,
    pub unknowns: Vec<Unknown>,
    pub rows: Vec<Edge>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn row_count(&self) -> usize {
        self.a.len()
    }

    pub fn column_count(&self) -> usize {
        self.unknowns.len()
    }

    /// Splits a solution vector into offsets and per-edge fault estimates.
    pub fn interpret(&self, x: Vec<T>) -> NcsSolution<T> {
        let mut offsets = Vec::new();
        let mut fault_estimates = BTreeMap::new();
        for (unknown, value) in self.unknowns.iter().zip(x) {
            match unknown {
                Unknown::Offset(_) => offsets.push(value),
                Unknown::Fault(e) => {
                    fault_estimates.insert(*e, value);
                }
            }
        }
        NcsSolution {
            offsets,
            fault_estimates,
        }
    }
}

/// Assembles the equation system for `d`, one row per edge in sorted order.
pub fn build_system<T: Scalar>(
    g: &NcsGraph,
    m: &MeasurementSet<T>,
    d: &FaultDistribution,
) -> Result<LinearSystem<T>> {
    m.check(g)?;
    d.check(g)?;
    let n1 = g.node_count() - 1;
    let mut unknowns: Vec<Unknown> = (1..g.node_count())
        .map(|j| Unknown::Offset(NodeId(j)))
        .collect();
    unknowns.extend(d.assumed_faulty.iter().map(|e| Unknown::Fault(*e)));
    let fault_col: BTreeMap<Edge, usize> = d
        .assumed_faulty
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, n1 + i))
        .collect();

    let mut a = Vec::with_capacity(g.edge_count());
    let mut b = Vec::with_capacity(g.edge_count());
    for &e in g.edges() {
        let mut row = vec![0i8; unknowns.len()];
        let (ia, ib) = e.endpoints();
        if ia != 0 {
            row[ia - 1] = 1;
        }
        if ib != 0 {
            row[ib - 1] = -1;
        }
        if let Some(&c) = fault_col.get(&e) {
            row[c] = 1;
        }
        a.push(row);
        b.push(m.get(e).expect("checked").clone());
    }
    Ok(LinearSystem {
        a,
        b,
        unknowns,
        rows: g.edges().to_vec(),
    })
}
