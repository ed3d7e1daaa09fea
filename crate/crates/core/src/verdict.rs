use serde::Serialize;

use crate::scalar::{serde_scalar, Scalar};

/// Concrete, recheckable evidence attached to a failed decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""), tag = "kind", rename_all = "snake_case")]
pub enum Witness<T: Scalar> {
    /// A representation invariant is violated (at a prefix index when one applies).
    Invariant { index: Option<usize>, reason: String },
    /// Top-`k` partial sums with `lhs > rhs`.
    PartialSum {
        k: usize,
        #[serde(with = "serde_scalar")]
        lhs: T,
        #[serde(with = "serde_scalar")]
        rhs: T,
    },
    /// Total masses differ.
    Mass {
        #[serde(with = "serde_scalar")]
        lhs: T,
        #[serde(with = "serde_scalar")]
        rhs: T,
    },
    /// Hockey-stick difference `g(t) < 0`.
    Threshold {
        #[serde(with = "serde_scalar")]
        t: T,
        #[serde(with = "serde_scalar")]
        value: T,
    },
    /// `(-1)^n f^(n)(s) < 0`. `value` is a decimal rendering at working
    /// precision, `relative` the value divided by its rounding-error scale.
    Derivative { order: usize, s: f64, value: String, relative: f64 },
    /// A sampled function value with the wrong sign.
    Point { s: f64, value: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""), tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<T: Scalar> {
    Holds,
    Fails { witness: Witness<T> },
    Inconclusive {
        #[serde(with = "serde_scalar")]
        gap: T,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

impl<T: Scalar> Verdict<T> {
    pub fn fails(witness: Witness<T>) -> Self {
        Verdict::Fails { witness }
    }

    pub fn outcome(&self) -> Outcome {
        match self {
            Verdict::Holds => Outcome::Holds,
            Verdict::Fails { .. } => Outcome::Fails,
            Verdict::Inconclusive { .. } => Outcome::Inconclusive,
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn witness(&self) -> Option<&Witness<T>> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    /// Re-expresses the numeric payload in another scalar type.
    pub fn cast<U: Scalar>(&self) -> Verdict<U> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::Inconclusive { gap } => Verdict::Inconclusive { gap: gap.cast() },
            Verdict::Fails { witness } => Verdict::Fails {
                witness: match witness {
                    Witness::Invariant { index, reason } => Witness::Invariant {
                        index: *index,
                        reason: reason.clone(),
                    },
                    Witness::PartialSum { k, lhs, rhs } => Witness::PartialSum {
                        k: *k,
                        lhs: lhs.cast(),
                        rhs: rhs.cast(),
                    },
                    Witness::Mass { lhs, rhs } => Witness::Mass {
                        lhs: lhs.cast(),
                        rhs: rhs.cast(),
                    },
                    Witness::Threshold { t, value } => Witness::Threshold {
                        t: t.cast(),
                        value: value.cast(),
                    },
                    Witness::Derivative { order, s, value, relative } => Witness::Derivative {
                        order: *order,
                        s: *s,
                        value: value.clone(),
                        relative: *relative,
                    },
                    Witness::Point { s, value } => Witness::Point { s: *s, value: value.clone() },
                },
            },
        }
    }
}

/// Outcome of comparing `lhs <= rhs` under a tolerance band.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Cmp<T> {
    Satisfied,
    Violated,
    /// The difference is nonzero but inside the band.
    Unresolved(T),
}

/// `rhs - lhs` is accepted when it exceeds `tol`, or is exactly zero.
pub(crate) fn compare_le<T: Scalar>(lhs: &T, rhs: &T, tol: &T) -> Cmp<T> {
    let d = rhs.clone() - lhs.clone();
    if d.is_zero() || d > *tol {
        Cmp::Satisfied
    } else if d < -tol.clone() {
        Cmp::Violated
    } else {
        Cmp::Unresolved(d.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serializes_with_tags() {
        let v: Verdict<f64> = Verdict::fails(Witness::PartialSum {
            k: 1,
            lhs: 0.5,
            rhs: 0.4,
        });
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains("\"verdict\":\"fails\""), "{s}");
        assert!(s.contains("\"kind\":\"partial_sum\""), "{s}");
        assert!(s.contains("\"lhs\":\"0.5\""), "{s}");
    }

    #[test]
    fn band_comparison() {
        assert_eq!(compare_le(&1.0, &1.0, &0.0), Cmp::Satisfied);
        assert_eq!(compare_le(&1.0, &2.0, &0.1), Cmp::Satisfied);
        assert_eq!(compare_le(&2.0, &1.0, &0.1), Cmp::Violated);
        assert!(matches!(compare_le(&1.0, &1.05, &0.1), Cmp::Unresolved(_)));
        assert!(matches!(compare_le(&1.05, &1.0, &0.1), Cmp::Unresolved(_)));
    }
}
