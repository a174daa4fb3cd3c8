//! Cross-checks against reimplementations that share no code with the
//! engine: hash-set counting, longhand formulas, full-sort rankings, and a
//! hand-worked five-user fixture.

mod common;

use std::collections::{BTreeSet, HashSet};

use dissim_core::*;

fn spec_of(preset: Preset, lambda: f64, tables: TableMode) -> MeasureSpec {
    preset.spec(lambda, tables).unwrap()
}

#[test]
fn neighbor_rankings_match_the_full_sort_reference() {
    let slate: [(Preset, f64, TableMode); 8] = [
        (Preset::Js, 1.0, TableMode::Canonical),
        (Preset::Aaj, 0.4, TableMode::Canonical),
        (Preset::Maj, 1.0, TableMode::Canonical),
        (Preset::SMaj, 1.0, TableMode::Canonical),
        (Preset::Aas, 0.25, TableMode::Canonical),
        (Preset::Ajs, 1.0, TableMode::Canonical),
        (Preset::Maaj, 1.0, TableMode::Literal),
        (Preset::Asor, 1.0, TableMode::Canonical),
    ];
    for seed in [3u64, 11] {
        let records = common::synthetic_records(seed, 60, 40, 0.08, false);
        let d = build_dataset(&records, 0).unwrap();
        for axis in [Axis::Item, Axis::User] {
            let sets = match axis {
                Axis::Item => common::item_sets(&d),
                Axis::User => common::user_sets(&d),
            };
            let n = d.n_entities(axis);
            for &(preset, lambda, tables) in &slate {
                let spec = spec_of(preset, lambda, tables);
                for k in [1usize, 3, 10, n] {
                    for target in 0..n {
                        let engine = top_k_neighbors(&d, axis, target, k, &spec).unwrap();
                        let reference =
                            common::naive_top_k(&sets, target, k, preset, lambda, tables);
                        assert_eq!(
                            engine, reference,
                            "seed {seed} {axis:?} {} k {k} target {target}",
                            preset.name()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn batch_models_agree_with_single_target_queries() {
    let records = common::synthetic_records(17, 50, 35, 0.1, false);
    let d = build_dataset(&records, 0).unwrap();
    let specs = vec![
        spec_of(Preset::Js, 1.0, TableMode::Canonical),
        spec_of(Preset::Aaj, 0.6, TableMode::Canonical),
        spec_of(Preset::Maj, 1.0, TableMode::Canonical),
        spec_of(Preset::Asor, 1.0, TableMode::Canonical),
    ];
    for axis in [Axis::Item, Axis::User] {
        let models = NeighborModel::build_many(&d, axis, 8, &specs);
        assert_eq!(models.len(), specs.len());
        for (model, spec) in models.iter().zip(&specs) {
            assert_eq!(model.axis(), axis);
            assert_eq!(model.k(), 8);
            for target in 0..d.n_entities(axis) {
                let single = top_k_neighbors(&d, axis, target, 8, spec).unwrap();
                assert_eq!(model.neighbors_of(target), &single[..]);
            }
        }
    }
}

/// Reference user-axis recommender: explicit loops over hash sets, summing
/// in neighbor rank order like the engine does.
fn naive_recommend_users(
    sets: &[HashSet<u32>],
    user: usize,
    k: usize,
    n: usize,
    preset: Preset,
    lambda: f64,
) -> Vec<(u32, f64)> {
    let neigh = common::naive_top_k(sets, user, k, preset, lambda, TableMode::Canonical);
    let candidates: BTreeSet<u32> = neigh
        .iter()
        .flat_map(|&(v, _)| sets[v as usize].iter().copied())
        .filter(|i| !sets[user].contains(i))
        .collect();
    let mut scored: Vec<(u32, f64)> = candidates
        .into_iter()
        .map(|i| {
            let mut acc = 0.0;
            for &(v, value) in &neigh {
                if sets[v as usize].contains(&i) {
                    acc += value;
                }
            }
            (i, acc)
        })
        .filter(|&(_, s)| s != 0.0)
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(n);
    scored
}

/// Reference item-axis recommender: a candidate's score sums its own
/// neighbor values over the profile items, ascending by item index.
fn naive_recommend_items(
    sets: &[HashSet<u32>],
    profile: &[u32],
    k: usize,
    n: usize,
    preset: Preset,
    lambda: f64,
) -> Vec<(u32, f64)> {
    let lists: Vec<Vec<(u32, f64)>> = (0..sets.len())
        .map(|i| common::naive_top_k(sets, i, k, preset, lambda, TableMode::Canonical))
        .collect();
    let owned: HashSet<u32> = profile.iter().copied().collect();
    let mut scored = Vec::new();
    for i in 0..sets.len() as u32 {
        if owned.contains(&i) {
            continue;
        }
        let mut acc = 0.0;
        let mut hit = false;
        for &j in profile {
            if let Some(&(_, value)) = lists[i as usize].iter().find(|&&(t, _)| t == j) {
                acc += value;
                hit = true;
            }
        }
        if hit && acc != 0.0 {
            scored.push((i, acc));
        }
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(n);
    scored
}

#[test]
fn recommendations_match_brute_force() {
    let records = common::synthetic_records(5, 70, 45, 0.07, false);
    let d = build_dataset(&records, 0).unwrap();
    let user_sets = common::user_sets(&d);
    let item_sets = common::item_sets(&d);
    // AAJ at a high lambda produces zero and negative scores as well
    let cases = [(Preset::Js, 1.0), (Preset::Aaj, 0.8), (Preset::Maj, 1.0)];
    for (preset, lambda) in cases {
        let spec = spec_of(preset, lambda, TableMode::Canonical);

        let model = NeighborModel::build(&d, Axis::User, 7, spec.clone());
        let lists = recommend_all(&model, &d, 6);
        for (u, list) in lists.iter().enumerate() {
            assert_eq!(list.user, u as u32);
            let reference = naive_recommend_users(&user_sets, u, 7, 6, preset, lambda);
            assert_eq!(list.items, reference, "{} user axis u{u}", preset.name());
            let single = recommend_top_n(&model, &d, u, 6).unwrap();
            assert_eq!(single.items, list.items);
            for &(i, s) in &list.items {
                assert_eq!(
                    score_user_knn(&model, &d, u, i as usize).unwrap(),
                    s,
                    "{} pairwise score u{u} i{i}",
                    preset.name()
                );
            }
        }

        let model = NeighborModel::build(&d, Axis::Item, 7, spec);
        let lists = recommend_all(&model, &d, 6);
        for (u, list) in lists.iter().enumerate() {
            let profile: Vec<u32> = d.items_of(u).iter().map(|&(i, _, _)| i).collect();
            let reference = naive_recommend_items(&item_sets, &profile, 7, 6, preset, lambda);
            assert_eq!(list.items, reference, "{} item axis u{u}", preset.name());
            for &(i, s) in &list.items {
                assert_eq!(
                    score_item_knn(&model, &d, u, i as usize).unwrap(),
                    s,
                    "{} pairwise score u{u} i{i}",
                    preset.name()
                );
            }
        }
    }
}

#[test]
fn top_n_lists_are_prefixes_of_longer_lists() {
    let records = common::synthetic_records(23, 40, 30, 0.12, false);
    let d = build_dataset(&records, 0).unwrap();
    for axis in [Axis::User, Axis::Item] {
        for spec in [
            spec_of(Preset::Js, 1.0, TableMode::Canonical),
            spec_of(Preset::Aaj, 0.6, TableMode::Canonical),
        ] {
            let model = NeighborModel::build(&d, axis, 9, spec);
            for u in 0..d.n_users() {
                let mut prev = recommend_top_n(&model, &d, u, 1).unwrap().items;
                for n in 2..=12 {
                    let next = recommend_top_n(&model, &d, u, n).unwrap().items;
                    assert!(
                        next.len() >= prev.len() && next[..prev.len()] == prev[..],
                        "{axis:?} u{u} n{n}"
                    );
                    prev = next;
                }
            }
        }
    }
}

#[test]
fn scaling_all_neighbor_values_preserves_rankings() {
    // circulant engagement: 40 users and 40 items, user u takes the 7-item
    // window starting at u, so every row on both axes has exactly 7 entries.
    // With equal profile sizes the half-total-overlap value is exactly half
    // the directed-overlap value, pair for pair, and halving commutes with
    // float rounding, so the whole pipeline must agree modulo the factor.
    let mut records = Vec::new();
    for u in 0..40u32 {
        for j in 0..7u32 {
            records.push(InteractionRecord {
                user: format!("u{u}"),
                item: format!("i{}", (u + j) % 40),
                rating: 1.0,
                timestamp: None,
            });
        }
    }
    let d = build_dataset(&records, 0).unwrap();
    let ajs = spec_of(Preset::Ajs, 1.0, TableMode::Canonical);
    let sor = spec_of(Preset::Sor, 1.0, TableMode::Canonical);
    for axis in [Axis::User, Axis::Item] {
        for row in 0..d.n_entities(axis) {
            assert_eq!(d.row_len(axis, row), 7);
        }
        let full = NeighborModel::build(&d, axis, 10, ajs.clone());
        let half = NeighborModel::build(&d, axis, 10, sor.clone());
        for t in 0..d.n_entities(axis) {
            let a = full.neighbors_of(t);
            let b = half.neighbors_of(t);
            assert_eq!(a.len(), b.len());
            for (&(ia, va), &(ib, vb)) in a.iter().zip(b) {
                assert_eq!(ia, ib, "{axis:?} neighbor order changed at {t}");
                assert_eq!(vb, va / 2.0, "{axis:?} value at {t}");
            }
        }
        let lists_full = recommend_all(&full, &d, 8);
        let lists_half = recommend_all(&half, &d, 8);
        for (lf, lh) in lists_full.iter().zip(&lists_half) {
            assert_eq!(lf.items.len(), lh.items.len());
            for (&(ia, sa), &(ib, sb)) in lf.items.iter().zip(&lh.items) {
                assert_eq!(ia, ib, "{axis:?} ranking changed for u{}", lf.user);
                assert_eq!(sb, sa / 2.0, "{axis:?} score for u{}", lf.user);
            }
        }
    }
}

#[test]
fn hand_worked_fixture() {
    // five users, four items, every number below checkable by hand:
    //   u0: a b      u1: a b c    u2: b c
    //   u3: a c d    u4: d
    let rows: [(&str, &[&str]); 5] = [
        ("u0", &["a", "b"]),
        ("u1", &["a", "b", "c"]),
        ("u2", &["b", "c"]),
        ("u3", &["a", "c", "d"]),
        ("u4", &["d"]),
    ];
    let mut records = Vec::new();
    for (user, items) in rows {
        for item in items {
            records.push(InteractionRecord {
                user: user.to_string(),
                item: item.to_string(),
                rating: 1.0,
                timestamp: None,
            });
        }
    }
    let d = build_dataset(&records, 0).unwrap();
    // first-seen interning: a=0 b=1 c=2 d=3
    assert_eq!(d.item_map().index("a"), Some(0));
    assert_eq!(d.item_map().index("d"), Some(3));

    // pairwise counts on the item axis
    let ab = pair_counts(&d, Axis::Item, 0, 1).unwrap();
    assert_eq!((ab.n_a, ab.n_b, ab.n_both), (3, 3, 2));
    let js = spec_of(Preset::Js, 1.0, TableMode::Canonical);
    let aaj = spec_of(Preset::Aaj, 0.5, TableMode::Canonical);
    let maj = spec_of(Preset::Maj, 1.0, TableMode::Canonical);
    assert_eq!(measure(&js, &d, Axis::Item, 0, 1).unwrap(), 0.5);
    assert_eq!(measure(&aaj, &d, Axis::Item, 0, 1).unwrap(), 0.375);
    assert_eq!(measure(&maj, &d, Axis::Item, 0, 1).unwrap(), 2.0);

    // user axis: u0 against everyone under plain overlap
    assert_eq!(measure(&js, &d, Axis::User, 0, 1).unwrap(), 2.0 / 3.0);
    assert_eq!(measure(&js, &d, Axis::User, 0, 2).unwrap(), 1.0 / 3.0);
    assert_eq!(measure(&js, &d, Axis::User, 0, 3).unwrap(), 0.25);
    assert_eq!(measure(&js, &d, Axis::User, 0, 4).unwrap(), 0.0);

    // u4 shares nothing with u0, so the ranking holds three entries
    let neigh = top_k_neighbors(&d, Axis::User, 0, 2, &js).unwrap();
    assert_eq!(neigh, vec![(1, 2.0 / 3.0), (2, 1.0 / 3.0)]);

    // user-kNN recommendation for u0: both neighbors point at c
    let model = NeighborModel::build(&d, Axis::User, 2, js.clone());
    let list = recommend_top_n(&model, &d, 0, 2).unwrap();
    assert_eq!(list.items, vec![(2, 2.0 / 3.0 + 1.0 / 3.0)]);

    // item neighbors of d: ties broken by index
    let neigh = top_k_neighbors(&d, Axis::Item, 3, 2, &js).unwrap();
    assert_eq!(neigh, vec![(0, 0.25), (2, 0.25)]);

    // item-kNN: u0 owns a and b; c is carried by both, d only by a
    let model = NeighborModel::build(&d, Axis::Item, 2, js);
    let list = recommend_top_n(&model, &d, 0, 2).unwrap();
    assert_eq!(list.items, vec![(2, 1.0), (3, 0.25)]);
    // u4 owns d alone and no item lists d among its top neighbors
    let list = recommend_top_n(&model, &d, 4, 2).unwrap();
    assert!(list.items.is_empty());
}
