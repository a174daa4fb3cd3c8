//! Paired significance testing of per-user metric vectors.

use std::collections::HashMap;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Two-sided paired t-test outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceOutcome {
    /// The t statistic. Infinite (with the mean's sign) when the paired
    /// differences have zero variance but a nonzero mean.
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    pub n_pairs: usize,
}

/// Two-sided paired t-test over per-user values aligned by user id.
///
/// Users present in only one vector are dropped. All-equal pairs yield
/// p = 1; identical nonzero shifts yield p = 0. Fails when fewer than two
/// pairs remain.
pub fn paired_significance(
    a: &[(u32, f64)],
    b: &[(u32, f64)],
    alpha: f64,
) -> Result<SignificanceOutcome> {
    let bmap: HashMap<u32, f64> = b.iter().copied().collect();
    let mut diffs = Vec::new();
    for &(u, va) in a {
        if let Some(&vb) = bmap.get(&u) {
            diffs.push(va - vb);
        }
    }
    let n = diffs.len();
    if n < 2 {
        return Err(Error::InsufficientData(n));
    }
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1) as f64;
    let (statistic, p_value) = if var == 0.0 {
        if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(mean), 0.0)
        }
    } else {
        let t = mean / (var / n as f64).sqrt();
        let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("n >= 2 gives valid dof");
        let p = 2.0 * (1.0 - dist.cdf(t.abs()));
        (t, p.clamp(0.0, 1.0))
    };
    Ok(SignificanceOutcome {
        statistic,
        p_value,
        significant: p_value < alpha,
        n_pairs: n,
    })
}
