//! Per-user holdout splitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// How the held-out tail of each user's profile is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// Hold out each user's most recent interactions. Events without a
    /// timestamp sort before everything else; equal timestamps order by
    /// item index.
    Temporal,
    /// Hold out a seeded random subset per user.
    Random { seed: u64 },
}

/// A training dataset plus per-user held-out (item, rating) pairs. The test
/// side shares the training side's index spaces.
#[derive(Debug, Clone)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Vec<Vec<(u32, f64)>>,
    pub mode: SplitMode,
}

/// Split every user's profile, holding out `ceil(fraction * n)` of their n
/// interactions, capped at n - 1 so at least one always stays in training.
pub fn holdout_split(d: &Dataset, test_fraction: f64, mode: SplitMode) -> Result<SplitPair> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidFraction(test_fraction));
    }
    let mut rng = match mode {
        SplitMode::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        SplitMode::Temporal => None,
    };
    let mut train_edges = Vec::new();
    let mut test = vec![Vec::new(); d.n_users()];
    for (u, held_out) in test.iter_mut().enumerate() {
        let mut profile = d.items_of(u).to_vec();
        match &mut rng {
            Some(rng) => profile.shuffle(rng),
            None => profile.sort_unstable_by_key(|&(i, _, ts)| (ts.unwrap_or(i64::MIN), i)),
        }
        let n = profile.len();
        let held = ((test_fraction * n as f64).ceil() as usize).min(n - 1);
        for &(i, r, ts) in &profile[..n - held] {
            train_edges.push((u as u32, i, r, ts));
        }
        let tail = &mut profile[n - held..];
        tail.sort_unstable_by_key(|e| e.0);
        held_out.extend(tail.iter().map(|&(i, r, _)| (i, r)));
    }
    let train = Dataset::from_edges(d.user_map().clone(), d.item_map().clone(), train_edges);
    Ok(SplitPair { train, test, mode })
}
