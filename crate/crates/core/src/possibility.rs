//! Unsure residual, normalization, necessity, dual-measure validity and the
//! lexical scale used to put degrees into words.

use indexmap::IndexMap;
use serde::Serialize;

use crate::degree::FuzzyDegree;
use crate::error::PossibilityError;
use crate::inference::PossibilityDistribution;

/// Absolute tolerance for treating a possibility as fully possible.
pub const FULL_TOLERANCE: f64 = 1e-9;

/// Name of the residual category.
pub const UNSURE: &str = "unsure";

pub fn is_fully_possible(pi: FuzzyDegree) -> bool {
    pi.value() >= 1.0 - FULL_TOLERANCE
}

/// `1 - max(pi)`: plausibility the rule set leaves unaccounted for.
pub fn unsure_residual(dist: &PossibilityDistribution) -> Result<FuzzyDegree, PossibilityError> {
    if dist.is_normalized() {
        return Err(PossibilityError::AlreadyNormalized);
    }
    Ok(dist.max().not())
}

/// Stretches the distribution so its maximum is exactly one.
pub fn normalize(
    dist: &PossibilityDistribution,
) -> Result<PossibilityDistribution, PossibilityError> {
    let max = dist.max().value();
    if max <= 0.0 {
        return Err(PossibilityError::AllZero);
    }
    let pi = dist
        .pi()
        .iter()
        .map(|p| FuzzyDegree::saturating(p.value() / max))
        .collect();
    Ok(dist.with_pi(pi, true))
}

/// `N(target) = 1 - max over every other category of Pi`.
///
/// The input must come from a normalized distribution: its largest value has
/// to be one (within [`FULL_TOLERANCE`]). A competing category within the
/// tolerance of one is treated as exactly one.
pub fn necessity(
    possibilities: &IndexMap<String, FuzzyDegree>,
    target: &str,
) -> Result<FuzzyDegree, PossibilityError> {
    if !possibilities.contains_key(target) {
        return Err(PossibilityError::UnknownCategory(target.to_owned()));
    }
    let global = possibilities
        .values()
        .copied()
        .fold(FuzzyDegree::ZERO, FuzzyDegree::or);
    if !is_fully_possible(global) {
        return Err(PossibilityError::Subnormal {
            max: global.value(),
        });
    }
    let rival = possibilities
        .iter()
        .filter(|(name, _)| name.as_str() != target)
        .map(|(_, p)| *p)
        .fold(FuzzyDegree::ZERO, FuzzyDegree::or);
    if is_fully_possible(rival) {
        Ok(FuzzyDegree::ZERO)
    } else {
        Ok(rival.not())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Validity {
    Valid,
    Invalid,
}

/// An event cannot be necessary unless it is fully possible.
pub fn check_validity(pi: FuzzyDegree, n: FuzzyDegree) -> Validity {
    if !is_fully_possible(pi) && n.value() > 0.0 {
        Validity::Invalid
    } else {
        Validity::Valid
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualMeasure {
    pub category: String,
    pub possibility: FuzzyDegree,
    pub necessity: FuzzyDegree,
    pub valid: bool,
}

impl DualMeasure {
    pub fn new(
        category: impl Into<String>,
        possibility: FuzzyDegree,
        necessity: FuzzyDegree,
    ) -> Self {
        DualMeasure {
            category: category.into(),
            possibility,
            necessity,
            valid: check_validity(possibility, necessity) == Validity::Valid,
        }
    }
}

/// Possibility-layer view of one aggregated distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityReport {
    /// One dual per output category, in category order.
    pub duals: Vec<DualMeasure>,
    pub unsure: FuzzyDegree,
    pub normalized: PossibilityDistribution,
    /// False when no category reaches one after normalization (possible when
    /// output memberships are subnormal). Necessities are then reported as 0.
    pub necessity_defined: bool,
}

/// Builds the report from a raw (not yet normalized) distribution.
///
/// When `unsure_competes` is set the unsure residual joins the categories as a
/// rival event when computing necessity.
pub fn assess(
    raw: &PossibilityDistribution,
    unsure_competes: bool,
) -> Result<PossibilityReport, PossibilityError> {
    let unsure = unsure_residual(raw)?;
    let normalized = normalize(raw)?;
    let mut field = normalized.per_category().clone();
    if unsure_competes {
        field.insert(UNSURE.to_owned(), unsure);
    }
    let global = field
        .values()
        .copied()
        .fold(FuzzyDegree::ZERO, FuzzyDegree::or);
    let necessity_defined = is_fully_possible(global);
    let duals = normalized
        .per_category()
        .iter()
        .map(|(category, &possibility)| {
            let n = if necessity_defined {
                necessity(&field, category)?
            } else {
                FuzzyDegree::ZERO
            };
            Ok(DualMeasure::new(category.clone(), possibility, n))
        })
        .collect::<Result<Vec<_>, PossibilityError>>()?;
    Ok(PossibilityReport {
        duals,
        unsure,
        normalized,
        necessity_defined,
    })
}

/// Adverb for a degree on the five-step lexical scale.
pub fn descriptor(mu: FuzzyDegree) -> &'static str {
    let mu = mu.value();
    if mu <= 0.0 {
        "Not at all"
    } else if mu >= 1.0 {
        "Absolutely"
    } else if mu <= 0.2 {
        "A little"
    } else if mu <= 0.4 {
        "Somewhat"
    } else if mu <= 0.6 {
        "Pretty"
    } else {
        // (0.6, 1.0) including the unlabelled band above 0.8
        "Substantially"
    }
}

/// `"<adverb> <label>"`, e.g. `"Somewhat deep"`.
pub fn verbalize(mu: FuzzyDegree, label: &str) -> String {
    format!("{} {}", descriptor(mu), label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: f64) -> FuzzyDegree {
        FuzzyDegree::new(v).unwrap()
    }

    fn dist(pi: &[f64]) -> PossibilityDistribution {
        let grid = (0..pi.len()).map(|i| i as f64).collect();
        PossibilityDistribution::from_samples(grid, pi.iter().map(|&p| d(p)).collect()).unwrap()
    }

    fn map(entries: &[(&str, f64)]) -> IndexMap<String, FuzzyDegree> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), d(*v)))
            .collect()
    }

    #[test]
    fn unsure_examples() {
        assert!((unsure_residual(&dist(&[0.1, 0.6, 0.3])).unwrap().value() - 0.4).abs() < 1e-15);
        assert_eq!(
            unsure_residual(&dist(&[0.0, 0.0])).unwrap(),
            FuzzyDegree::ONE
        );
        assert_eq!(
            unsure_residual(&dist(&[0.2, 1.0])).unwrap(),
            FuzzyDegree::ZERO
        );
        let n = normalize(&dist(&[0.2, 0.5])).unwrap();
        assert_eq!(
            unsure_residual(&n),
            Err(PossibilityError::AlreadyNormalized)
        );
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&dist(&[0.3, 0.6, 0.0])).unwrap();
        assert_eq!(n.max(), FuzzyDegree::ONE);
        assert!(n.is_normalized());
        assert_eq!(n.pi()[0].value(), 0.5);
        let already = dist(&[0.3, 1.0]);
        assert_eq!(normalize(&already).unwrap().pi(), already.pi());
        assert_eq!(
            normalize(&dist(&[0.0, 0.0])),
            Err(PossibilityError::AllZero)
        );
    }

    #[test]
    fn necessity_examples() {
        assert!(
            (necessity(&map(&[("A", 1.0), ("B", 0.3)]), "A")
                .unwrap()
                .value()
                - 0.7)
                .abs()
                < 1e-15
        );
        assert_eq!(
            necessity(&map(&[("A", 1.0), ("B", 1.0)]), "A").unwrap(),
            FuzzyDegree::ZERO
        );
        assert_eq!(
            necessity(&map(&[("A", 1.0)]), "A").unwrap(),
            FuzzyDegree::ONE
        );
        assert!(matches!(
            necessity(&map(&[("A", 0.8), ("B", 0.3)]), "A"),
            Err(PossibilityError::Subnormal { .. })
        ));
        assert!(matches!(
            necessity(&map(&[("A", 1.0)]), "Z"),
            Err(PossibilityError::UnknownCategory(_))
        ));
    }

    #[test]
    fn validity_cases() {
        assert_eq!(check_validity(d(1.0), d(0.4)), Validity::Valid);
        assert_eq!(check_validity(d(0.7), d(0.0)), Validity::Valid);
        assert_eq!(check_validity(d(0.7), d(0.2)), Validity::Invalid);
        assert_eq!(check_validity(d(1.0 - 1e-10), d(0.2)), Validity::Valid);
    }

    #[test]
    fn lexical_scale() {
        assert_eq!(verbalize(d(0.38), "deep"), "Somewhat deep");
        assert_eq!(verbalize(d(0.77), "deep"), "Substantially deep");
        assert_eq!(verbalize(d(0.0), "deep"), "Not at all deep");
        assert_eq!(verbalize(d(1.0), "deep"), "Absolutely deep");
        assert_eq!(descriptor(d(0.2)), "A little");
        assert_eq!(descriptor(d(0.2000001)), "Somewhat");
        assert_eq!(descriptor(d(0.4)), "Somewhat");
        assert_eq!(descriptor(d(0.6)), "Pretty");
        assert_eq!(descriptor(d(0.8)), "Substantially");
        assert_eq!(descriptor(d(0.95)), "Substantially");
        assert_eq!(descriptor(d(1e-9)), "A little");
    }

    proptest! {
        #[test]
        fn unsure_complements_max(pi in prop::collection::vec(0.0f64..=1.0, 2..20)) {
            let dist = dist(&pi);
            let u = unsure_residual(&dist).unwrap().value();
            prop_assert_eq!(u + dist.max().value(), 1.0);
        }

        #[test]
        fn normalize_preserves_order(pi in prop::collection::vec(0.0f64..=1.0, 2..20)) {
            let raw = dist(&pi);
            prop_assume!(raw.max().value() > 0.0);
            let n = normalize(&raw).unwrap();
            prop_assert_eq!(n.max(), FuzzyDegree::ONE);
            for i in 0..pi.len() {
                for j in 0..pi.len() {
                    prop_assert_eq!(raw.pi()[i] <= raw.pi()[j], n.pi()[i] <= n.pi()[j]);
                }
            }
        }

        #[test]
        fn necessity_duals_always_valid(vals in prop::collection::vec(0.0f64..=1.0, 1..6), top in 0usize..6) {
            let mut m: IndexMap<String, FuzzyDegree> =
                vals.iter().enumerate().map(|(i, &v)| (format!("c{i}"), d(v))).collect();
            let key = format!("c{}", top % vals.len());
            m.insert(key, FuzzyDegree::ONE);
            for (k, &p) in &m {
                let n = necessity(&m, k).unwrap();
                prop_assert_eq!(check_validity(p, n), Validity::Valid);
            }
        }
    }
}
