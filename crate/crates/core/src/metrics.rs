//! Ranking accuracy and catalog coverage metrics.

use std::collections::HashSet;

use crate::recommend::RecommendationList;

/// Per-user precision plus the aggregate mean.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionSummary {
    /// Mean over evaluated users; `None` when nobody was evaluable.
    pub mean: Option<f64>,
    /// (user, precision) for each evaluated user, in list order.
    pub per_user: Vec<(u32, f64)>,
}

/// Precision@n of recommendation lists against held-out ratings.
///
/// A held-out item is relevant when its rating reaches `threshold`. Users
/// without any relevant held-out item are skipped entirely; for the rest,
/// precision is the relevant hits among the first n slots divided by a
/// fixed n, however short the list actually is.
pub fn precision_at_n(
    lists: &[RecommendationList],
    test: &[Vec<(u32, f64)>],
    n: usize,
    threshold: f64,
) -> PrecisionSummary {
    assert!(n > 0, "precision needs a positive cutoff");
    let mut per_user = Vec::new();
    let mut sum = 0.0;
    for list in lists {
        let held = &test[list.user as usize];
        let relevant: Vec<u32> = held
            .iter()
            .filter(|&&(_, r)| r >= threshold)
            .map(|&(i, _)| i)
            .collect();
        if relevant.is_empty() {
            continue;
        }
        let hits = list
            .items
            .iter()
            .take(n)
            .filter(|&&(i, _)| relevant.binary_search(&i).is_ok())
            .count();
        let p = hits as f64 / n as f64;
        per_user.push((list.user, p));
        sum += p;
    }
    let mean = if per_user.is_empty() {
        None
    } else {
        Some(sum / per_user.len() as f64)
    };
    PrecisionSummary { mean, per_user }
}

/// Number of distinct items appearing anywhere in the lists.
pub fn diversity_at_n(lists: &[RecommendationList]) -> usize {
    let mut seen = HashSet::new();
    for list in lists {
        for &(i, _) in &list.items {
            seen.insert(i);
        }
    }
    seen.len()
}
