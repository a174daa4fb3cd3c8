//! Evaluation cells, lambda sweeps, and report rendering.

use std::collections::HashMap;

use serde::Serialize;

use crate::dataset::Axis;
use crate::error::{Error, Result};
use crate::measures::{MeasureSpec, Preset, TableMode};
use crate::metrics::{diversity_at_n, precision_at_n};
use crate::neighbors::NeighborModel;
use crate::recommend::recommend_all;
use crate::significance::paired_significance;
use crate::split::SplitPair;

/// Significance level for baseline comparisons.
pub const ALPHA: f64 = 0.05;

pub fn scheme_name(axis: Axis) -> &'static str {
    match axis {
        Axis::User => "user-knn",
        Axis::Item => "item-knn",
    }
}

/// Parse a scheme name (`user-knn` or `item-knn`).
pub fn parse_scheme(name: &str) -> Result<Axis> {
    match name.trim().to_ascii_lowercase().as_str() {
        "user-knn" | "user" => Ok(Axis::User),
        "item-knn" | "item" => Ok(Axis::Item),
        other => Err(Error::InvalidSpec(format!("unknown scheme `{other}`"))),
    }
}

/// Significance of a preset's best cell against the baseline's best cell.
#[derive(Debug, Clone, Serialize)]
pub struct SigSummary {
    pub baseline: String,
    /// t statistic; absent when it is infinite (zero-variance differences).
    pub statistic: Option<f64>,
    pub p_value: f64,
    pub significant: bool,
    pub n_pairs: usize,
}

/// One evaluated (preset, lambda) cell.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub scheme: String,
    pub preset: String,
    pub lambda: Option<f64>,
    pub k: usize,
    pub top_n: usize,
    pub threshold: f64,
    /// Mean precision over evaluated users; null when nobody was evaluable.
    pub precision_at_n: Option<f64>,
    /// Distinct items recommended across all users.
    pub diversity_at_n: usize,
    pub evaluated_users: usize,
    /// Highest precision within the preset's cells (ties to smaller lambda).
    pub best: bool,
    pub significance: Option<SigSummary>,
    pub per_user_precision: Vec<(u32, f64)>,
}

/// Full description of a sweep run.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub scheme: Axis,
    pub presets: Vec<Preset>,
    pub lambda_grid: Vec<f64>,
    pub k: usize,
    pub top_n: usize,
    pub threshold: f64,
    pub table_mode: TableMode,
    pub baseline: Option<Preset>,
}

/// Evaluate every (preset, lambda) cell of the config on one split.
///
/// Additive presets get one cell per grid value (the grid is sorted and
/// deduplicated first), the others a single cell. Within each preset the
/// highest mean precision is flagged `best`; with a baseline configured,
/// every other preset's best cell is significance-tested against the
/// baseline's best cell.
pub fn lambda_sweep(split: &SplitPair, config: &SweepConfig) -> Result<Vec<EvalReport>> {
    if config.k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    if config.top_n == 0 {
        return Err(Error::InvalidSpec("top-n must be at least 1".into()));
    }
    let mut presets: Vec<Preset> = Vec::new();
    for &p in &config.presets {
        if !presets.contains(&p) {
            presets.push(p);
        }
    }
    if presets.is_empty() {
        return Err(Error::InvalidSpec("no presets to evaluate".into()));
    }
    if let Some(baseline) = config.baseline {
        if !presets.contains(&baseline) {
            return Err(Error::InvalidSpec(format!(
                "baseline {} is not among the evaluated presets",
                baseline.name()
            )));
        }
    }
    let mut grid = config.lambda_grid.clone();
    grid.sort_unstable_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() && presets.iter().any(|p| p.is_additive()) {
        return Err(Error::InvalidSpec(
            "additive presets need at least one lambda".into(),
        ));
    }

    let mut cells: Vec<(Preset, Option<f64>)> = Vec::new();
    for &preset in &presets {
        if preset.is_additive() {
            cells.extend(grid.iter().map(|&l| (preset, Some(l))));
        } else {
            cells.push((preset, None));
        }
    }
    let specs = cells
        .iter()
        .map(|&(p, l)| p.spec(l.unwrap_or(1.0), config.table_mode))
        .collect::<Result<Vec<MeasureSpec>>>()?;

    let models = NeighborModel::build_many(&split.train, config.scheme, config.k, &specs);
    let mut reports: Vec<EvalReport> = cells
        .iter()
        .zip(&models)
        .map(|(&(preset, lambda), model)| {
            let lists = recommend_all(model, &split.train, config.top_n);
            let summary = precision_at_n(&lists, &split.test, config.top_n, config.threshold);
            EvalReport {
                scheme: scheme_name(config.scheme).to_string(),
                preset: preset.name().to_string(),
                lambda,
                k: config.k,
                top_n: config.top_n,
                threshold: config.threshold,
                precision_at_n: summary.mean,
                diversity_at_n: diversity_at_n(&lists),
                evaluated_users: summary.per_user.len(),
                best: false,
                significance: None,
                per_user_precision: summary.per_user,
            }
        })
        .collect();

    // cells of one preset are contiguous; flag the best cell of each group
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start < cells.len() {
        let mut end = start + 1;
        while end < cells.len() && cells[end].0 == cells[start].0 {
            end += 1;
        }
        groups.push((start, end));
        start = end;
    }
    let mut best_of: HashMap<&'static str, usize> = HashMap::new();
    for &(start, end) in &groups {
        let mut best = start;
        for i in start + 1..end {
            let cur = reports[i].precision_at_n.unwrap_or(f64::NEG_INFINITY);
            let so_far = reports[best].precision_at_n.unwrap_or(f64::NEG_INFINITY);
            if cur > so_far {
                best = i;
            }
        }
        reports[best].best = true;
        best_of.insert(cells[start].0.name(), best);
    }

    if let Some(baseline) = config.baseline {
        let base_idx = best_of[baseline.name()];
        let base_vector = reports[base_idx].per_user_precision.clone();
        for &(start, _) in &groups {
            let preset = cells[start].0;
            if preset == baseline {
                continue;
            }
            let idx = best_of[preset.name()];
            match paired_significance(&reports[idx].per_user_precision, &base_vector, ALPHA) {
                Ok(out) => {
                    reports[idx].significance = Some(SigSummary {
                        baseline: baseline.name().to_string(),
                        statistic: out.statistic.is_finite().then_some(out.statistic),
                        p_value: out.p_value,
                        significant: out.significant,
                        n_pairs: out.n_pairs,
                    });
                }
                // too few paired users: leave the marker empty
                Err(Error::InsufficientData(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }

    Ok(reports)
}

/// Aligned text table over the reports, one row per cell.
pub fn render_table(reports: &[EvalReport]) -> String {
    const COLS: usize = 8;
    let header = [
        "scheme", "preset", "lambda", "P@N", "D@N", "users", "best", "signif",
    ];
    let rows: Vec<[String; COLS]> = reports
        .iter()
        .map(|r| {
            [
                r.scheme.clone(),
                r.preset.clone(),
                r.lambda.map_or_else(|| "-".to_string(), |l| format!("{l}")),
                r.precision_at_n
                    .map_or_else(|| "n/a".to_string(), |p| format!("{p:.4}")),
                r.diversity_at_n.to_string(),
                r.evaluated_users.to_string(),
                if r.best { "*".to_string() } else { String::new() },
                r.significance.as_ref().map_or_else(String::new, |s| {
                    format!("p={:.4}{}", s.p_value, if s.significant { " *" } else { "" })
                }),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(&mut out, &header.map(String::from));
    for row in &rows {
        emit(&mut out, row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{build_dataset, InteractionRecord};
    use crate::split::{holdout_split, SplitMode};

    fn toy_split() -> SplitPair {
        let mut records = Vec::new();
        for u in 0..24u32 {
            for t in 0..8u32 {
                records.push(InteractionRecord {
                    user: format!("u{u}"),
                    item: format!("i{}", (u + t * 3) % 16),
                    rating: ((u + t) % 10 + 1) as f64,
                    timestamp: Some(t as i64 * 5),
                });
            }
        }
        let d = build_dataset(&records, 0).unwrap();
        holdout_split(&d, 0.2, SplitMode::Temporal).unwrap()
    }

    fn config(presets: Vec<Preset>, baseline: Option<Preset>) -> SweepConfig {
        SweepConfig {
            scheme: Axis::User,
            presets,
            lambda_grid: vec![0.2, 0.8],
            k: 5,
            top_n: 3,
            threshold: 0.0,
            table_mode: TableMode::Canonical,
            baseline,
        }
    }

    #[test]
    fn sweep_shape_and_best_markers() {
        let split = toy_split();
        let reports =
            lambda_sweep(&split, &config(vec![Preset::Js, Preset::Aaj], None)).unwrap();
        assert_eq!(reports.len(), 3);
        assert_eq!(reports[0].preset, "JS");
        assert_eq!(reports[0].lambda, None);
        assert!(reports[0].best, "single-cell presets are their own best");
        assert_eq!(reports[1].lambda, Some(0.2));
        assert_eq!(reports[2].lambda, Some(0.8));
        assert_eq!(
            reports[1..].iter().filter(|r| r.best).count(),
            1,
            "exactly one best cell per preset"
        );
        for r in &reports {
            assert_eq!(r.scheme, "user-knn");
            assert!(r.evaluated_users > 0);
            assert!(r.significance.is_none());
        }
    }

    #[test]
    fn baseline_marks_best_cells_only() {
        let split = toy_split();
        let reports = lambda_sweep(
            &split,
            &config(vec![Preset::Js, Preset::Aaj], Some(Preset::Js)),
        )
        .unwrap();
        for r in &reports {
            if r.preset == "JS" {
                assert!(r.significance.is_none(), "the baseline is not self-tested");
            } else {
                assert_eq!(
                    r.significance.is_some(),
                    r.best,
                    "markers sit on best cells only"
                );
            }
        }
        let marked = reports
            .iter()
            .find(|r| r.significance.is_some())
            .expect("the additive preset's best cell is tested");
        let sig = marked.significance.as_ref().unwrap();
        assert_eq!(sig.baseline, "JS");
        assert!(sig.n_pairs > 1);
        assert!((0.0..=1.0).contains(&sig.p_value));
    }

    #[test]
    fn grid_is_sorted_and_deduped() {
        let split = toy_split();
        let mut cfg = config(vec![Preset::Aaj], None);
        cfg.lambda_grid = vec![0.8, 0.2, 0.8];
        let reports = lambda_sweep(&split, &cfg).unwrap();
        let lambdas: Vec<Option<f64>> = reports.iter().map(|r| r.lambda).collect();
        assert_eq!(lambdas, vec![Some(0.2), Some(0.8)]);
    }

    #[test]
    fn config_mistakes_are_rejected() {
        let split = toy_split();
        let bad = [
            config(vec![], None),
            {
                let mut c = config(vec![Preset::Js], None);
                c.k = 0;
                c
            },
            {
                let mut c = config(vec![Preset::Js], None);
                c.top_n = 0;
                c
            },
            config(vec![Preset::Aaj], Some(Preset::Js)),
            {
                let mut c = config(vec![Preset::Aaj], None);
                c.lambda_grid = vec![];
                c
            },
            {
                let mut c = config(vec![Preset::Aaj], None);
                c.lambda_grid = vec![1.5];
                c
            },
        ];
        for cfg in bad {
            let err = lambda_sweep(&split, &cfg).unwrap_err();
            assert!(err.is_config(), "{err}");
        }
    }

    #[test]
    fn reports_serialize_deterministically() {
        let split = toy_split();
        let cfg = config(vec![Preset::Js, Preset::Aaj, Preset::Maj], Some(Preset::Js));
        let a = serde_json::to_string(&lambda_sweep(&split, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&lambda_sweep(&split, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn table_lines_up() {
        let split = toy_split();
        let reports = lambda_sweep(
            &split,
            &config(vec![Preset::Js, Preset::Aaj], Some(Preset::Js)),
        )
        .unwrap();
        let table = render_table(&reports);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 1 + reports.len());
        assert!(lines[0].starts_with("scheme"));
        assert!(table.contains("JS"));
        assert!(table.contains('*'));
    }
}
