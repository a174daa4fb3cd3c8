//! Shared helpers for the integration suites: independent reference
//! implementations and synthetic data generators.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dissim_core::{Dataset, InteractionRecord, Preset, TableMode};

/// Deterministic random interactions covering roughly `density` of a
/// users x items grid, ratings 1..=10, optional timestamps. Never empty.
pub fn synthetic_records(
    seed: u64,
    n_users: usize,
    n_items: usize,
    density: f64,
    with_timestamps: bool,
) -> Vec<InteractionRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for u in 0..n_users {
        for i in 0..n_items {
            if rng.random::<f64>() < density {
                records.push(InteractionRecord {
                    user: format!("u{u}"),
                    item: format!("i{i}"),
                    rating: rng.random_range(1..=10) as f64,
                    timestamp: with_timestamps.then(|| rng.random_range(0..1_000_000)),
                });
            }
        }
    }
    if records.is_empty() {
        records.push(InteractionRecord {
            user: "u0".to_string(),
            item: "i0".to_string(),
            rating: 1.0,
            timestamp: with_timestamps.then_some(0),
        });
    }
    records.shuffle(&mut rng);
    records
}

/// Hash-set view of the item axis: which users engaged each item.
pub fn item_sets(d: &Dataset) -> Vec<HashSet<u32>> {
    (0..d.n_items())
        .map(|i| d.users_of(i).iter().map(|&(u, _)| u).collect())
        .collect()
}

/// Hash-set view of the user axis: which items sit in each profile.
pub fn user_sets(d: &Dataset) -> Vec<HashSet<u32>> {
    (0..d.n_users())
        .map(|u| d.items_of(u).iter().map(|&(i, _, _)| i).collect())
        .collect()
}

/// (n_a, n_b, n_both, union) recomputed with plain set operations.
pub fn naive_counts(a: &HashSet<u32>, b: &HashSet<u32>) -> (f64, f64, f64, f64) {
    (
        a.len() as f64,
        b.len() as f64,
        a.intersection(b).count() as f64,
        a.union(b).count() as f64,
    )
}

/// Longhand evaluation of a preset from raw counts; the reference the
/// engine is checked against. Written out formula by formula on purpose.
pub fn naive_preset_value(
    preset: Preset,
    lambda: f64,
    tables: TableMode,
    counts: (f64, f64, f64, f64),
) -> f64 {
    let (na, nb, both, union) = counts;
    let div = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let js = div(both, union);
    let sor = div(both, na + nb);
    let ajs = div(both, na);
    let jad = div(nb - both, union);
    let jsd = div(na + nb - 2.0 * both, union);
    let asd = div(nb - both, na + nb);
    let ssd = div(na + nb - 2.0 * both, na + nb);
    let ajd = div(nb - both, na);
    let sajd = div(na + nb - 2.0 * both, na);
    // multiplicative fold with the family floor; sim is 0 whenever the
    // denominator is, so the degenerate case collapses to 0
    let over = |sim: f64, dis: f64, den: f64| {
        if den == 0.0 {
            0.0
        } else {
            sim / dis.max(1.0 / den)
        }
    };
    match preset {
        Preset::Js => js,
        Preset::Aaj => js - lambda * jad,
        Preset::Maj => over(js, jad, union),
        Preset::SAaj => js - lambda * jsd,
        Preset::SMaj => over(js, jsd, union),
        Preset::Sor => sor,
        Preset::Aas => sor - lambda * asd,
        Preset::Mas => over(sor, asd, na + nb),
        Preset::SAas => sor - lambda * ssd,
        Preset::SMas => match tables {
            TableMode::Canonical => over(sor, ssd, na + nb),
            TableMode::Literal => over(sor, jsd, union),
        },
        Preset::Ajs => ajs,
        Preset::Aaaj => ajs - lambda * ajd,
        Preset::Maaj => match tables {
            TableMode::Canonical => over(ajs, ajd, na),
            TableMode::Literal => over(ajs, jad, union),
        },
        Preset::SAaaj => ajs - lambda * sajd,
        Preset::SMaaj => match tables {
            TableMode::Canonical => over(ajs, sajd, na),
            TableMode::Literal => over(ajs, jsd, union),
        },
        Preset::Asor => ajs * sor,
    }
}

/// Full-sort reference ranking: every co-engaged candidate scored from hash
/// sets, sorted by (value desc, index asc), truncated to k.
pub fn naive_top_k(
    sets: &[HashSet<u32>],
    target: usize,
    k: usize,
    preset: Preset,
    lambda: f64,
    tables: TableMode,
) -> Vec<(u32, f64)> {
    let mut scored: Vec<(u32, f64)> = (0..sets.len())
        .filter(|&c| c != target)
        .filter(|&c| sets[target].intersection(&sets[c]).next().is_some())
        .map(|c| {
            let counts = naive_counts(&sets[target], &sets[c]);
            (c as u32, naive_preset_value(preset, lambda, tables, counts))
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored
}

/// Log-gamma via the Lanczos approximation (g = 7, 9 terms).
#[allow(clippy::excessive_precision)] // standard g=7 table, kept verbatim
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    const G: f64 = 7.0;
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn t_density(x: f64, dof: f64) -> f64 {
    let ln_c = ln_gamma((dof + 1.0) / 2.0)
        - ln_gamma(dof / 2.0)
        - 0.5 * (dof * std::f64::consts::PI).ln();
    (ln_c - (dof + 1.0) / 2.0 * (1.0 + x * x / dof).ln()).exp()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive(f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Reference two-sided p-value of a t statistic: numeric quadrature of the
/// t density over the central interval, so no tail truncation is involved.
pub fn reference_p_value(t: f64, dof: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let density = move |x: f64| t_density(x, dof);
    let center = integrate(&density, 0.0, t.abs(), 1e-12);
    (1.0 - 2.0 * center).clamp(0.0, 1.0)
}
