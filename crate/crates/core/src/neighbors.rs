//! Top-k neighbor extraction over the co-engagement graph.
//!
//! Candidates for a target are found by walking its profile's two-hop
//! neighborhood, accumulating overlap counts in a dense scratch buffer that
//! is sparsely reset afterwards. Entities sharing no profile member with the
//! target are never considered, so the work per target is proportional to
//! its co-engagement volume rather than the full axis size.

use rayon::prelude::*;

use crate::dataset::{Axis, Dataset};
use crate::error::Result;
use crate::measures::{MeasureSpec, PairCounts};

struct CoCounter {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

impl CoCounter {
    fn new(n: usize) -> CoCounter {
        CoCounter {
            counts: vec![0; n],
            touched: Vec::new(),
        }
    }

    /// (candidate, overlap) pairs for one target, ascending by candidate
    /// index, overlap >= 1, the target itself excluded.
    fn count(&mut self, d: &Dataset, axis: Axis, target: usize) -> Vec<(u32, u32)> {
        match axis {
            Axis::Item => {
                for &(u, _) in d.users_of(target) {
                    for &(j, _, _) in d.items_of(u as usize) {
                        self.bump(j);
                    }
                }
            }
            Axis::User => {
                for &(i, _, _) in d.items_of(target) {
                    for &(v, _) in d.users_of(i as usize) {
                        self.bump(v);
                    }
                }
            }
        }
        self.touched.sort_unstable();
        let out = self
            .touched
            .iter()
            .filter(|&&c| c as usize != target)
            .map(|&c| (c, self.counts[c as usize]))
            .collect();
        for &c in &self.touched {
            self.counts[c as usize] = 0;
        }
        self.touched.clear();
        out
    }

    fn bump(&mut self, idx: u32) {
        if self.counts[idx as usize] == 0 {
            self.touched.push(idx);
        }
        self.counts[idx as usize] += 1;
    }
}

fn score_counts(
    d: &Dataset,
    axis: Axis,
    target: usize,
    counts: &[(u32, u32)],
    spec: &MeasureSpec,
) -> Vec<(u32, f64)> {
    let n_a = d.row_len(axis, target) as u64;
    counts
        .iter()
        .map(|&(cand, n_both)| {
            let c = PairCounts::new(n_a, d.row_len(axis, cand as usize) as u64, n_both as u64);
            (cand, spec.evaluate(c))
        })
        .collect()
}

fn rank(mut scored: Vec<(u32, f64)>, k: usize) -> Vec<(u32, f64)> {
    scored.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Measure values against every candidate sharing at least one profile
/// member with the target, ascending by candidate index.
pub fn scored_candidates(
    d: &Dataset,
    axis: Axis,
    target: usize,
    spec: &MeasureSpec,
) -> Result<Vec<(u32, f64)>> {
    d.check_index(axis, target)?;
    let mut counter = CoCounter::new(d.n_entities(axis));
    let counts = counter.count(d, axis, target);
    Ok(score_counts(d, axis, target, &counts, spec))
}

/// The k best neighbors of one target: value descending, ties broken toward
/// the lower index.
pub fn top_k_neighbors(
    d: &Dataset,
    axis: Axis,
    target: usize,
    k: usize,
    spec: &MeasureSpec,
) -> Result<Vec<(u32, f64)>> {
    Ok(rank(scored_candidates(d, axis, target, spec)?, k))
}

/// Ranked neighbor lists for every entity on one axis.
#[derive(Debug, Clone)]
pub struct NeighborModel {
    axis: Axis,
    k: usize,
    spec: MeasureSpec,
    neighbors: Vec<Vec<(u32, f64)>>,
    // Item axis only: reverse[j] holds (target, value) pairs with j among
    // target's neighbors, ascending by target. Drives per-user scoring.
    reverse: Option<Vec<Vec<(u32, f64)>>>,
}

impl NeighborModel {
    pub fn build(d: &Dataset, axis: Axis, k: usize, spec: MeasureSpec) -> NeighborModel {
        NeighborModel::build_many(d, axis, k, std::slice::from_ref(&spec))
            .pop()
            .unwrap()
    }

    /// Build models for several measures at once; the co-engagement counting
    /// pass is shared across all of them.
    pub fn build_many(
        d: &Dataset,
        axis: Axis,
        k: usize,
        specs: &[MeasureSpec],
    ) -> Vec<NeighborModel> {
        let n = d.n_entities(axis);
        let per_target: Vec<Vec<Vec<(u32, f64)>>> = (0..n)
            .into_par_iter()
            .map_init(
                || CoCounter::new(n),
                |counter, target| {
                    let counts = counter.count(d, axis, target);
                    specs
                        .iter()
                        .map(|spec| rank(score_counts(d, axis, target, &counts, spec), k))
                        .collect()
                },
            )
            .collect();
        let mut per_spec: Vec<Vec<Vec<(u32, f64)>>> =
            specs.iter().map(|_| Vec::with_capacity(n)).collect();
        for lists in per_target {
            for (s, list) in lists.into_iter().enumerate() {
                per_spec[s].push(list);
            }
        }
        specs
            .iter()
            .zip(per_spec)
            .map(|(spec, neighbors)| {
                let reverse = (axis == Axis::Item).then(|| reverse_index(&neighbors, n));
                NeighborModel {
                    axis,
                    k,
                    spec: spec.clone(),
                    neighbors,
                    reverse,
                }
            })
            .collect()
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn n_entities(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbors of one entity, best first.
    pub fn neighbors_of(&self, index: usize) -> &[(u32, f64)] {
        &self.neighbors[index]
    }

    pub(crate) fn reverse_index(&self) -> Option<&Vec<Vec<(u32, f64)>>> {
        self.reverse.as_ref()
    }
}

fn reverse_index(neighbors: &[Vec<(u32, f64)>], n: usize) -> Vec<Vec<(u32, f64)>> {
    let mut reverse = vec![Vec::new(); n];
    for (target, list) in neighbors.iter().enumerate() {
        for &(j, value) in list {
            reverse[j as usize].push((target as u32, value));
        }
    }
    reverse
}
