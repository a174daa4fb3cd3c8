//! Pair counting and the similarity measure algebra.
//!
//! Every measure is assembled from three ingredients over the counts
//! `(n_a, n_b, n_both)` of an ordered pair of profile sets:
//!
//! * a base similarity: intersection size over a family denominator
//!   (jaccard: union size, sorensen: `n_a + n_b`, asym-jaccard: `n_a`),
//! * a dissimilarity: exclusive-membership count over the same kind of
//!   denominator, either asymmetric (`n_b - n_both`) or symmetric
//!   (`n_a + n_b - 2*n_both`),
//! * a combiner: additive `sim - lambda * dis`, or multiplicative
//!   `sim / max(dis, floor)` where `floor = 1 / denominator` stands in for
//!   the smallest nonzero dissimilarity expressible over that denominator.
//!
//! A degenerate denominator contributes 0 (an empty profile is similar to
//! nothing), so every measure value is finite.

use crate::dataset::{Axis, Dataset};
use crate::error::{Error, Result};

/// Sufficient statistic for every measure over an ordered pair (a, b): the
/// two profile sizes and the size of their intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    pub n_a: u64,
    pub n_b: u64,
    pub n_both: u64,
}

impl PairCounts {
    pub fn new(n_a: u64, n_b: u64, n_both: u64) -> PairCounts {
        debug_assert!(n_both <= n_a.min(n_b));
        PairCounts { n_a, n_b, n_both }
    }

    /// Size of the union of the two profiles.
    pub fn union(&self) -> u64 {
        self.n_a + self.n_b - self.n_both
    }

    /// Counts for the reversed pair (b, a).
    pub fn swapped(&self) -> PairCounts {
        PairCounts {
            n_a: self.n_b,
            n_b: self.n_a,
            n_both: self.n_both,
        }
    }
}

/// Base similarity family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Intersection over union.
    Jaccard,
    /// Intersection over the sum of the profile sizes.
    Sorensen,
    /// Intersection over the first profile's size.
    AsymJaccard,
    /// Product of the asym-jaccard and sorensen bases.
    Asor,
}

/// Denominator family for dissimilarities. The product baseline defines none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DissimFamily {
    Jaccard,
    Sorensen,
    AsymJaccard,
}

/// Whether a dissimilarity counts exclusive members of one side or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Asymmetric,
    Symmetric,
}

/// A dissimilarity: denominator family plus numerator flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DissimSpec {
    pub family: DissimFamily,
    pub symmetry: Symmetry,
}

/// How a dissimilarity folds into the base similarity.
#[derive(Debug, Clone, PartialEq)]
pub enum Adjustment {
    None,
    Additive { dissim: DissimSpec, lambda: f64 },
    Multiplicative { dissim: DissimSpec },
}

/// Combiner mode detached from any particular dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjustmentKind {
    Additive,
    Multiplicative,
}

/// A fully described measure: base family plus optional adjustment.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    pub family: Family,
    pub adjustment: Adjustment,
}

impl MeasureSpec {
    pub fn new(family: Family, adjustment: Adjustment) -> Result<MeasureSpec> {
        if let Adjustment::Additive { lambda, .. } = adjustment {
            check_lambda(lambda)?;
        }
        if family == Family::Asor && adjustment != Adjustment::None {
            return Err(Error::InvalidSpec(
                "the product baseline takes no dissimilarity adjustment".into(),
            ));
        }
        Ok(MeasureSpec { family, adjustment })
    }

    pub fn base(family: Family) -> MeasureSpec {
        MeasureSpec {
            family,
            adjustment: Adjustment::None,
        }
    }

    pub fn additive(family: Family, dissim: DissimSpec, lambda: f64) -> Result<MeasureSpec> {
        MeasureSpec::new(family, Adjustment::Additive { dissim, lambda })
    }

    pub fn multiplicative(family: Family, dissim: DissimSpec) -> Result<MeasureSpec> {
        MeasureSpec::new(family, Adjustment::Multiplicative { dissim })
    }

    /// Evaluate the measure on one pair's counts. Always finite.
    pub fn evaluate(&self, c: PairCounts) -> f64 {
        let sim = base_similarity(self.family, c);
        match &self.adjustment {
            Adjustment::None => sim,
            Adjustment::Additive { dissim, lambda } => {
                sim - lambda * dissimilarity(dissim.family, dissim.symmetry, c)
            }
            Adjustment::Multiplicative { dissim } => {
                let dis = dissimilarity(dissim.family, dissim.symmetry, c);
                // floor is infinite only when the denominator is 0, in which
                // case sim is 0 too and the quotient collapses to 0
                sim / dis.max(clamp_floor(dissim.family, c))
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Base similarity of an ordered pair.
pub fn base_similarity(family: Family, c: PairCounts) -> f64 {
    match family {
        Family::Jaccard => ratio(c.n_both, c.union()),
        Family::Sorensen => ratio(c.n_both, c.n_a + c.n_b),
        Family::AsymJaccard => ratio(c.n_both, c.n_a),
        Family::Asor => {
            base_similarity(Family::AsymJaccard, c) * base_similarity(Family::Sorensen, c)
        }
    }
}

fn dissim_denominator(family: DissimFamily, c: PairCounts) -> u64 {
    match family {
        DissimFamily::Jaccard => c.union(),
        DissimFamily::Sorensen => c.n_a + c.n_b,
        DissimFamily::AsymJaccard => c.n_a,
    }
}

/// Dissimilarity of an ordered pair. The symmetric numerator is formed in
/// integer arithmetic before the single division, so it equals the sum of
/// the two asymmetric numerators exactly.
pub fn dissimilarity(family: DissimFamily, symmetry: Symmetry, c: PairCounts) -> f64 {
    let num = match symmetry {
        Symmetry::Asymmetric => c.n_b - c.n_both,
        Symmetry::Symmetric => c.n_a + c.n_b - 2 * c.n_both,
    };
    ratio(num, dissim_denominator(family, c))
}

/// Smallest nonzero value a dissimilarity of this family can take on the
/// pair: one over its denominator. Infinite when the denominator is 0.
pub fn clamp_floor(family: DissimFamily, c: PairCounts) -> f64 {
    1.0 / dissim_denominator(family, c) as f64
}

/// Fold a dissimilarity into a base similarity.
///
/// `lambda` is only read for the additive kind and `floor` only for the
/// multiplicative kind; both are validated when used.
pub fn combine(kind: AdjustmentKind, sim: f64, dis: f64, lambda: f64, floor: f64) -> Result<f64> {
    match kind {
        AdjustmentKind::Additive => {
            check_lambda(lambda)?;
            Ok(sim - lambda * dis)
        }
        AdjustmentKind::Multiplicative => {
            if floor.is_nan() || floor <= 0.0 {
                return Err(Error::InvalidClampFloor(floor));
            }
            Ok(sim / dis.max(floor))
        }
    }
}

/// Two conventions exist for the denominator family inside three of the
/// composed multiplicative presets.
///
/// `Canonical` keeps the dissimilarity in the same family as the base.
/// `Literal` mixes families instead: the two asym-jaccard multiplicative
/// variants and the symmetric multiplicative sorensen variant divide by a
/// jaccard-denominated (union) dissimilarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMode {
    #[default]
    Canonical,
    Literal,
}

/// The sixteen named measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Js,
    Aaj,
    Maj,
    SAaj,
    SMaj,
    Sor,
    Aas,
    Mas,
    SAas,
    SMas,
    Ajs,
    Aaaj,
    Maaj,
    SAaaj,
    SMaaj,
    Asor,
}

impl Preset {
    pub const ALL: [Preset; 16] = [
        Preset::Js,
        Preset::Aaj,
        Preset::Maj,
        Preset::SAaj,
        Preset::SMaj,
        Preset::Sor,
        Preset::Aas,
        Preset::Mas,
        Preset::SAas,
        Preset::SMas,
        Preset::Ajs,
        Preset::Aaaj,
        Preset::Maaj,
        Preset::SAaaj,
        Preset::SMaaj,
        Preset::Asor,
    ];

    /// Case-insensitive lookup by display name.
    pub fn parse(name: &str) -> Result<Preset> {
        let upper = name.trim().to_ascii_uppercase();
        Preset::ALL
            .iter()
            .copied()
            .find(|p| p.name() == upper)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Js => "JS",
            Preset::Aaj => "AAJ",
            Preset::Maj => "MAJ",
            Preset::SAaj => "S-AAJ",
            Preset::SMaj => "S-MAJ",
            Preset::Sor => "SOR",
            Preset::Aas => "AAS",
            Preset::Mas => "MAS",
            Preset::SAas => "S-AAS",
            Preset::SMas => "S-MAS",
            Preset::Ajs => "AJS",
            Preset::Aaaj => "AAAJ",
            Preset::Maaj => "MAAJ",
            Preset::SAaaj => "S-AAAJ",
            Preset::SMaaj => "S-MAAJ",
            Preset::Asor => "ASOR",
        }
    }

    /// Additive presets take the lambda weight; the others ignore it.
    pub fn is_additive(self) -> bool {
        matches!(
            self,
            Preset::Aaj | Preset::SAaj | Preset::Aas | Preset::SAas | Preset::Aaaj | Preset::SAaaj
        )
    }

    /// Materialize the preset into a measure spec.
    pub fn spec(self, lambda: f64, tables: TableMode) -> Result<MeasureSpec> {
        use DissimFamily as Df;
        use Symmetry::{Asymmetric, Symmetric};
        let dis = |family, symmetry| DissimSpec { family, symmetry };
        match self {
            Preset::Js => Ok(MeasureSpec::base(Family::Jaccard)),
            Preset::Aaj => {
                MeasureSpec::additive(Family::Jaccard, dis(Df::Jaccard, Asymmetric), lambda)
            }
            Preset::Maj => {
                MeasureSpec::multiplicative(Family::Jaccard, dis(Df::Jaccard, Asymmetric))
            }
            Preset::SAaj => {
                MeasureSpec::additive(Family::Jaccard, dis(Df::Jaccard, Symmetric), lambda)
            }
            Preset::SMaj => {
                MeasureSpec::multiplicative(Family::Jaccard, dis(Df::Jaccard, Symmetric))
            }
            Preset::Sor => Ok(MeasureSpec::base(Family::Sorensen)),
            Preset::Aas => {
                MeasureSpec::additive(Family::Sorensen, dis(Df::Sorensen, Asymmetric), lambda)
            }
            Preset::Mas => {
                MeasureSpec::multiplicative(Family::Sorensen, dis(Df::Sorensen, Asymmetric))
            }
            Preset::SAas => {
                MeasureSpec::additive(Family::Sorensen, dis(Df::Sorensen, Symmetric), lambda)
            }
            Preset::SMas => {
                let family = match tables {
                    TableMode::Canonical => Df::Sorensen,
                    TableMode::Literal => Df::Jaccard,
                };
                MeasureSpec::multiplicative(Family::Sorensen, dis(family, Symmetric))
            }
            Preset::Ajs => Ok(MeasureSpec::base(Family::AsymJaccard)),
            Preset::Aaaj => {
                MeasureSpec::additive(Family::AsymJaccard, dis(Df::AsymJaccard, Asymmetric), lambda)
            }
            Preset::Maaj => {
                let family = match tables {
                    TableMode::Canonical => Df::AsymJaccard,
                    TableMode::Literal => Df::Jaccard,
                };
                MeasureSpec::multiplicative(Family::AsymJaccard, dis(family, Asymmetric))
            }
            Preset::SAaaj => {
                MeasureSpec::additive(Family::AsymJaccard, dis(Df::AsymJaccard, Symmetric), lambda)
            }
            Preset::SMaaj => {
                let family = match tables {
                    TableMode::Canonical => Df::AsymJaccard,
                    TableMode::Literal => Df::Jaccard,
                };
                MeasureSpec::multiplicative(Family::AsymJaccard, dis(family, Symmetric))
            }
            Preset::Asor => Ok(MeasureSpec::base(Family::Asor)),
        }
    }
}

/// Count profile sizes and overlap for an ordered pair on one axis.
pub fn pair_counts(d: &Dataset, axis: Axis, a: usize, b: usize) -> Result<PairCounts> {
    d.check_index(axis, a)?;
    d.check_index(axis, b)?;
    let n_both = match axis {
        Axis::Item => merge_count(
            d.users_of(a).iter().map(|e| e.0),
            d.users_of(b).iter().map(|e| e.0),
        ),
        Axis::User => merge_count(
            d.items_of(a).iter().map(|e| e.0),
            d.items_of(b).iter().map(|e| e.0),
        ),
    };
    Ok(PairCounts::new(
        d.row_len(axis, a) as u64,
        d.row_len(axis, b) as u64,
        n_both,
    ))
}

/// Evaluate a measure on one ordered pair of entities.
pub fn measure(spec: &MeasureSpec, d: &Dataset, axis: Axis, a: usize, b: usize) -> Result<f64> {
    Ok(spec.evaluate(pair_counts(d, axis, a, b)?))
}

fn merge_count<A, B>(a: A, b: B) -> u64
where
    A: Iterator<Item = u32>,
    B: Iterator<Item = u32>,
{
    let mut a = a;
    let mut b = b;
    let mut count = 0;
    let mut x = a.next();
    let mut y = b.next();
    while let (Some(i), Some(j)) = (x, y) {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => x = a.next(),
            std::cmp::Ordering::Greater => y = b.next(),
            std::cmp::Ordering::Equal => {
                count += 1;
                x = a.next();
                y = b.next();
            }
        }
    }
    count
}
