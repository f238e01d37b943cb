//! Degree of resilience and tiered group architectures.
//!
//! Nodes are split into complete 4-node groups (each tolerates one faulty
//! session). The lowest id of each group represents it in the tier above,
//! recursively, until a single group remains. Offsets are recovered top-down:
//! the top group synchronizes first, then every lower group synchronizes
//! against its representative's now-known offset.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::edge_count_lower_bound;
use crate::error::{NcsError, Result};
use crate::graph::{Edge, NcsGraph, NodeId};
use crate::linsys::{ClockState, MeasurementSet};
use crate::rational::Rational;
use crate::sim::{generate_exact_round, FaultMap};
use crate::solvers::ncs_fast;

pub const GROUP_SIZE: usize = 4;

/// `k / edge_count` as an exact fraction.
pub fn degree_of_resilience(k: usize, edge_count: usize) -> Result<Rational> {
    if edge_count == 0 {
        return Err(NcsError::InvalidArgument(
            "edge count must be positive".into(),
        ));
    }
    Ok(Rational::new(BigInt::from(k), BigInt::from(edge_count)))
}

/// Upper bound on the degree of resilience of any `k`-resilient `n`-node graph.
pub fn dor_upper_bound(n: usize, k: usize) -> Result<Rational> {
    degree_of_resilience(k, edge_count_lower_bound(n, k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DorChoice {
    pub nodes: usize,
    pub k: usize,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub dor: Rational,
}

/// Best degree-of-resilience upper bound over `n in lo..=hi` and every
/// feasible `k >= 1`; ties go to the smallest `n`, then the smallest `k`.
pub fn max_dor_network(lo: usize, hi: usize) -> Result<DorChoice> {
    if lo < 4 || lo > hi {
        return Err(NcsError::InvalidArgument(format!(
            "node range [{lo}, {hi}] must satisfy 4 <= lo <= hi"
        )));
    }
    let mut best: Option<DorChoice> = None;
    for n in lo..=hi {
        for k in 1..=(n / 2 - 1) {
            let dor = dor_upper_bound(n, k)?;
            if best.as_ref().is_none_or(|b| dor > b.dor) {
                best = Some(DorChoice { nodes: n, k, dor });
            }
        }
    }
    Ok(best.expect("range is nonempty and n >= 4 admits k = 1"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Group {
    /// Members in ascending order; the first is the representative.
    pub members: Vec<NodeId>,
    pub representative: NodeId,
}

impl Group {
    fn new(mut members: Vec<NodeId>) -> Self {
        members.sort_unstable();
        Group {
            representative: members[0],
            members,
        }
    }

    /// Complete internal session graph, in global node ids.
    pub fn edges(&self) -> Vec<Edge> {
        let m = &self.members;
        (0..m.len())
            .flat_map(|i| (i + 1..m.len()).map(move |j| Edge::of(m[i].0, m[j].0)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TierPlan {
    pub nodes: usize,
    /// `tiers[0]` is the bottom tier; the last tier holds a single group.
    pub tiers: Vec<Vec<Group>>,
    pub group_count: usize,
    /// Distinct sessions across all groups.
    pub total_edges: usize,
    pub per_group_resilience: usize,
    /// Edge lower bound for a flat graph tolerating one fault per group.
    pub flat_lower_bound: usize,
}

impl TierPlan {
    pub fn groups(&self) -> impl Iterator<Item = &Group> {
        self.tiers.iter().flatten()
    }

    /// Union of all group sessions as one graph.
    pub fn graph(&self) -> NcsGraph {
        let edges: BTreeSet<Edge> = self.groups().flat_map(Group::edges).collect();
        NcsGraph::new(self.nodes, edges).expect("plan edges are valid")
    }
}

/// Splits ascending `nodes` into groups of four; a remainder of 1-3 joins the last group.
fn tile(nodes: &[NodeId]) -> Vec<Group> {
    let full = nodes.len() / GROUP_SIZE;
    let mut groups: Vec<Group> = (0..full)
        .map(|i| Group::new(nodes[i * GROUP_SIZE..(i + 1) * GROUP_SIZE].to_vec()))
        .collect();
    let rest = &nodes[full * GROUP_SIZE..];
    if let Some(last) = groups.last_mut() {
        let mut members = last.members.clone();
        members.extend_from_slice(rest);
        *last = Group::new(members);
    }
    groups
}

pub fn build_tiered_plan(n: usize) -> Result<TierPlan> {
    if n < GROUP_SIZE {
        return Err(NcsError::TooFewNodes {
            required: GROUP_SIZE,
            actual: n,
        });
    }
    let all: Vec<NodeId> = (0..n).map(NodeId).collect();
    let mut tiers = vec![tile(&all)];
    loop {
        let below = tiers.last().expect("at least one tier");
        if below.len() == 1 {
            break;
        }
        let mut reps: Vec<NodeId> = below.iter().map(|g| g.representative).collect();
        if reps.len() < GROUP_SIZE {
            // too few representatives for a full group: borrow the lowest
            // non-representative members of the lowest groups below
            let taken: BTreeSet<NodeId> = reps.iter().copied().collect();
            let pads = below
                .iter()
                .flat_map(|g| g.members.iter().copied())
                .filter(|v| !taken.contains(v))
                .take(GROUP_SIZE - reps.len())
                .collect::<Vec<_>>();
            reps.extend(pads);
            reps.sort_unstable();
        }
        tiers.push(tile(&reps));
    }
    let group_count = tiers.iter().map(Vec::len).sum();
    let total_edges = tiers
        .iter()
        .flatten()
        .flat_map(Group::edges)
        .collect::<BTreeSet<_>>()
        .len();
    Ok(TierPlan {
        nodes: n,
        tiers,
        group_count,
        total_edges,
        per_group_resilience: 1,
        flat_lower_bound: edge_count_lower_bound(n, group_count),
    })
}

/// Recovers every node's offset group by group, top tier first, using the
/// voting solver inside each group.
pub fn recover_tiered(plan: &TierPlan, m: &MeasurementSet<Rational>) -> Result<Vec<Rational>> {
    let mut known: BTreeMap<NodeId, Rational> = BTreeMap::new();
    known.insert(NodeId::REFERENCE, Rational::zero());
    for tier in plan.tiers.iter().rev() {
        for group in tier {
            let base = known.get(&group.representative).cloned().ok_or_else(|| {
                NcsError::InvalidArgument(format!(
                    "representative {} has no offset yet",
                    group.representative
                ))
            })?;
            let local = NcsGraph::complete(group.members.len());
            let mut values = BTreeMap::new();
            for &e in local.edges() {
                let (i, j) = e.endpoints();
                let v = m
                    .directed(group.members[i], group.members[j])
                    .ok_or_else(|| {
                        NcsError::MeasurementMismatch(format!(
                            "missing session {}-{}",
                            group.members[i], group.members[j]
                        ))
                    })?;
                values.insert(e, v);
            }
            let r = ncs_fast(&local, &MeasurementSet::new(values))?;
            for (member, offset) in group.members[1..].iter().zip(r.solution.offsets) {
                known.insert(*member, &base + offset);
            }
        }
    }
    Ok((1..plan.nodes)
        .map(|v| known.remove(&NodeId(v)).expect("every node is in a group"))
        .collect())
}

/// Generates an exact round over the plan's sessions and recovers it.
pub fn simulate_tiered(
    plan: &TierPlan,
    truth: &ClockState<Rational>,
    faults: &FaultMap<Rational>,
) -> Result<Vec<Rational>> {
    let g = plan.graph();
    let m = generate_exact_round(&g, truth, faults)?;
    recover_tiered(plan, &m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn dor_values() {
        assert_eq!(degree_of_resilience(1, 6).unwrap(), ratio(1, 6));
        assert_eq!(degree_of_resilience(2, 15).unwrap(), ratio(2, 15));
        assert_eq!(degree_of_resilience(0, 9).unwrap(), int(0));
        assert!(degree_of_resilience(1, 0).is_err());
    }

    #[test]
    fn best_dor() {
        let best = max_dor_network(4, 8).unwrap();
        assert_eq!((best.nodes, best.k, best.dor), (4, 1, ratio(1, 6)));
        let best = max_dor_network(5, 7).unwrap();
        assert_eq!((best.nodes, best.k, best.dor), (6, 2, ratio(2, 15)));
        assert_eq!(max_dor_network(4, 4).unwrap().dor, ratio(1, 6));
        assert!(max_dor_network(3, 8).is_err());
    }

    #[test]
    fn sixteen_nodes() {
        let p = build_tiered_plan(16).unwrap();
        assert_eq!(p.tiers.len(), 2);
        assert_eq!(p.group_count, 5);
        assert_eq!(p.total_edges, 30);
        assert_eq!(p.flat_lower_bound, 88);
        let top: Vec<usize> = p.tiers[1][0].members.iter().map(|v| v.0).collect();
        assert_eq!(top, vec![0, 4, 8, 12]);
    }

    #[test]
    fn powers_of_four() {
        let p = build_tiered_plan(4).unwrap();
        assert_eq!((p.tiers.len(), p.group_count, p.total_edges), (1, 1, 6));
        let p = build_tiered_plan(64).unwrap();
        assert_eq!((p.tiers.len(), p.group_count, p.total_edges), (3, 21, 126));
    }

    #[test]
    fn ragged_sizes() {
        let p = build_tiered_plan(7).unwrap();
        assert_eq!(p.group_count, 1);
        assert_eq!(p.tiers[0][0].members.len(), 7);
        let p = build_tiered_plan(10).unwrap();
        assert_eq!(p.tiers[0][1].members.len(), 6);
        // two representatives get padded to a full group
        assert_eq!(
            p.tiers[1][0]
                .members
                .iter()
                .map(|v| v.0)
                .collect::<Vec<_>>(),
            vec![0, 1, 2, 4]
        );
        assert!(p.groups().all(|g| (4..=7).contains(&g.members.len())));
        assert!(build_tiered_plan(3).is_err());
    }

    #[test]
    fn one_fault_per_group_is_corrected() {
        for n in [8, 10, 16, 21] {
            let plan = build_tiered_plan(n).unwrap();
            let truth = ClockState::new((1..n).map(|v| ratio(v as i64 * 7 - 40, 3)).collect());
            // one fault per group, counting sessions shared between groups
            let groups: Vec<Vec<Edge>> = plan.groups().map(Group::edges).collect();
            let mut faults: BTreeMap<Edge, Rational> = BTreeMap::new();
            for (i, edges) in groups.iter().enumerate() {
                if edges.iter().any(|e| faults.contains_key(e)) {
                    continue;
                }
                let free = |e: &&Edge| {
                    groups
                        .iter()
                        .filter(|g| g.contains(e))
                        .all(|g| g.iter().all(|x| !faults.contains_key(x)))
                };
                let pick = edges
                    .iter()
                    .cycle()
                    .skip(i)
                    .take(edges.len())
                    .find(free)
                    .copied();
                if let Some(e) = pick {
                    faults.insert(e, int(3 + i as i64));
                }
            }
            let faults = FaultMap::new(faults).unwrap();
            assert_eq!(
                simulate_tiered(&plan, &truth, &faults).unwrap(),
                truth.offsets(),
                "n={n}"
            );
        }
    }
}
