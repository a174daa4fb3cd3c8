//! Per-user top-N recommendation under the all-unrated-items candidate rule.
//!
//! A candidate item's score is the sum of neighbor values linking it to the
//! user's training profile. Sums are accumulated in a fixed order (ascending
//! item index for item models, neighbor rank for user models), so the
//! single-pair scoring functions reproduce the batch results bit for bit.

use rayon::prelude::*;

use crate::dataset::{Axis, Dataset};
use crate::error::{Error, Result};
use crate::neighbors::NeighborModel;

/// Ranked recommendations for one user: (item, score), best first.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationList {
    pub user: u32,
    pub items: Vec<(u32, f64)>,
}

fn require_axis(model: &NeighborModel, axis: Axis) -> Result<()> {
    if model.axis() != axis {
        return Err(Error::InvalidSpec(format!(
            "scoring needs a model built on the {} axis",
            axis.label()
        )));
    }
    Ok(())
}

/// Item-model score of one (user, item) pair: the summed values of the
/// item's neighbors that sit in the user's training profile.
pub fn score_item_knn(
    model: &NeighborModel,
    train: &Dataset,
    user: usize,
    item: usize,
) -> Result<f64> {
    require_axis(model, Axis::Item)?;
    train.check_index(Axis::User, user)?;
    train.check_index(Axis::Item, item)?;
    let profile = train.items_of(user);
    let mut matched: Vec<(u32, f64)> = model
        .neighbors_of(item)
        .iter()
        .filter(|&&(j, _)| profile.binary_search_by_key(&j, |e| e.0).is_ok())
        .copied()
        .collect();
    matched.sort_unstable_by_key(|&(j, _)| j);
    Ok(matched.iter().map(|&(_, v)| v).sum())
}

/// User-model score of one (user, item) pair: the summed values of the
/// user's neighbors whose profiles contain the item.
pub fn score_user_knn(
    model: &NeighborModel,
    train: &Dataset,
    user: usize,
    item: usize,
) -> Result<f64> {
    require_axis(model, Axis::User)?;
    train.check_index(Axis::User, user)?;
    train.check_index(Axis::Item, item)?;
    let item = item as u32;
    Ok(model
        .neighbors_of(user)
        .iter()
        .filter(|&&(v, _)| {
            train
                .items_of(v as usize)
                .binary_search_by_key(&item, |e| e.0)
                .is_ok()
        })
        .map(|&(_, v)| v)
        .sum())
}

struct ScoreScratch {
    acc: Vec<f64>,
    seen: Vec<bool>,
    touched: Vec<u32>,
    in_profile: Vec<bool>,
}

impl ScoreScratch {
    fn new(n_items: usize) -> ScoreScratch {
        ScoreScratch {
            acc: vec![0.0; n_items],
            seen: vec![false; n_items],
            touched: Vec::new(),
            in_profile: vec![false; n_items],
        }
    }

    fn add(&mut self, item: u32, value: f64) {
        let idx = item as usize;
        if !self.seen[idx] {
            self.seen[idx] = true;
            self.touched.push(item);
        }
        self.acc[idx] += value;
    }
}

fn recommend_into(
    model: &NeighborModel,
    train: &Dataset,
    user: usize,
    n: usize,
    scratch: &mut ScoreScratch,
) -> RecommendationList {
    let profile = train.items_of(user);
    match model.axis() {
        Axis::User => {
            for &(v, value) in model.neighbors_of(user) {
                for &(i, _, _) in train.items_of(v as usize) {
                    scratch.add(i, value);
                }
            }
        }
        Axis::Item => {
            let reverse = model
                .reverse_index()
                .expect("item models carry a reverse index");
            for &(j, _, _) in profile {
                for &(i, value) in &reverse[j as usize] {
                    scratch.add(i, value);
                }
            }
        }
    }
    for &(i, _, _) in profile {
        scratch.in_profile[i as usize] = true;
    }
    let mut items: Vec<(u32, f64)> = scratch
        .touched
        .iter()
        .filter(|&&i| !scratch.in_profile[i as usize])
        .map(|&i| (i, scratch.acc[i as usize]))
        .filter(|&(_, score)| score != 0.0)
        .collect();
    items.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    items.truncate(n);
    for &i in &scratch.touched {
        scratch.acc[i as usize] = 0.0;
        scratch.seen[i as usize] = false;
    }
    scratch.touched.clear();
    for &(i, _, _) in profile {
        scratch.in_profile[i as usize] = false;
    }
    RecommendationList {
        user: user as u32,
        items,
    }
}

/// Top-N items for one user among everything outside the training profile.
/// Candidates whose accumulated score is exactly zero are left out.
pub fn recommend_top_n(
    model: &NeighborModel,
    train: &Dataset,
    user: usize,
    n: usize,
) -> Result<RecommendationList> {
    train.check_index(Axis::User, user)?;
    let mut scratch = ScoreScratch::new(train.n_items());
    Ok(recommend_into(model, train, user, n, &mut scratch))
}

/// Recommendation lists for every user, index-aligned with the user map.
pub fn recommend_all(model: &NeighborModel, train: &Dataset, n: usize) -> Vec<RecommendationList> {
    (0..train.n_users())
        .into_par_iter()
        .map_init(
            || ScoreScratch::new(train.n_items()),
            |scratch, user| recommend_into(model, train, user, n, scratch),
        )
        .collect()
}
