//! Exact rank computation and solving over the rationals.

use num_traits::{Signed, Zero};

use super::{
    build_system, FaultDistribution, LinearSystem, MeasurementSet, NcsSolution, SolveOutcome,
};
use crate::error::Result;
use crate::graph::NcsGraph;
use crate::rational::Rational;

impl LinearSystem<Rational> {
    pub fn rational_matrix(&self) -> Vec<Vec<Rational>> {
        self.a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| Rational::from_integer(v.into()))
                    .collect()
            })
            .collect()
    }
}

/// Reduced row echelon form in place; returns the pivot column of each pivot row.
///
/// Only the first `cols` columns are eligible as pivots, so an augmented
/// column past `cols` is carried along without being eliminated on.
fn reduce(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // largest magnitude wins; the first such row on ties
        let mut best = r;
        for i in r + 1..m.len() {
            if m[i][c].abs() > m[best][c].abs() {
                best = i;
            }
        }
        if m[best][c].is_zero() {
            continue;
        }
        m.swap(r, best);
        let p = m[r][c].clone();
        for v in m[r].iter_mut().skip(c) {
            *v /= &p;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    reduce(&mut m, cols).len()
}

/// Classifies `A x = b` by comparing `rank(A)` with `rank(A|b)` and the column
/// count, returning the solution when it is unique.
pub fn classify_and_solve(a: &[Vec<Rational>], b: &[Rational]) -> SolveOutcome<Vec<Rational>> {
    assert_eq!(
        a.len(),
        b.len(),
        "row count must match right-hand side length"
    );
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = reduce(&mut aug, cols);
    let rank_a = pivots.len();
    if aug[rank_a..].iter().any(|row| !row[cols].is_zero()) {
        return SolveOutcome::NoSolution;
    }
    if rank_a < cols {
        return SolveOutcome::Underdetermined;
    }
    SolveOutcome::Unique(
        aug.into_iter()
            .take(cols)
            .map(|mut row| row.pop().expect("rhs"))
            .collect(),
    )
}

/// Builds and classifies the system for one assumed fault distribution.
pub fn solve_distribution(
    g: &NcsGraph,
    m: &MeasurementSet<Rational>,
    d: &FaultDistribution,
) -> Result<SolveOutcome<NcsSolution<Rational>>> {
    let sys = build_system(g, m, d)?;
    let outcome = classify_and_solve(&sys.rational_matrix(), &sys.b);
    Ok(outcome.map(|x| sys.interpret(x)))
}
