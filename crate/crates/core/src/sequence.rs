//! Nonnegative summable sequences: a finite prefix followed by a zero or
//! geometric tail.

use std::cmp::Ordering;

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{parse_exact, serde_scalar, Scalar};
use crate::verdict::{Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""), tag = "kind", rename_all = "snake_case")]
pub enum TailModel<T: Scalar> {
    /// Every entry past the prefix is zero.
    Zero,
    /// Entries past the prefix are `first * ratio^k`, `k = 0, 1, ...`.
    Geometric {
        #[serde(with = "serde_scalar")]
        first: T,
        #[serde(with = "serde_scalar")]
        ratio: T,
    },
}

/// A sequence in ℓ₁⁺ given by an explicit prefix and a tail model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Ell1Seq<T: Scalar> {
    #[serde(with = "serde_scalar::vec")]
    prefix: Vec<T>,
    tail: TailModel<T>,
}

impl<T: Scalar> Ell1Seq<T> {
    /// Builds a sequence, absorbing trailing prefix zeros into a zero tail.
    pub fn new(mut prefix: Vec<T>, tail: TailModel<T>) -> Self {
        if matches!(tail, TailModel::Zero) {
            while prefix.last().is_some_and(|x| x.is_zero()) {
                prefix.pop();
            }
        }
        Ell1Seq { prefix, tail }
    }

    pub fn finite(prefix: Vec<T>) -> Self {
        Self::new(prefix, TailModel::Zero)
    }

    pub fn geometric(prefix: Vec<T>, first: T, ratio: T) -> Self {
        Self::new(prefix, TailModel::Geometric { first, ratio })
    }

    /// The one-entry sequence `(1)`.
    pub fn unit() -> Self {
        Self::finite(vec![T::one()])
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn tail(&self) -> &TailModel<T> {
        &self.tail
    }

    pub fn has_zero_tail(&self) -> bool {
        matches!(self.tail, TailModel::Zero)
    }

    /// Checks every representation invariant; the first violation is reported.
    pub fn validate(&self) -> Verdict<T> {
        for (i, x) in self.prefix.iter().enumerate() {
            if !x.is_finite() {
                return Verdict::fails(Witness::Invariant {
                    index: Some(i),
                    reason: format!("entry {i} is not finite"),
                });
            }
            if x.is_negative() {
                return Verdict::fails(Witness::Invariant {
                    index: Some(i),
                    reason: format!("entry {i} is negative"),
                });
            }
        }
        if let TailModel::Geometric { first, ratio } = &self.tail {
            if !(first.is_finite() && first.is_positive()) {
                return Verdict::fails(Witness::Invariant {
                    index: None,
                    reason: "geometric tail needs a positive first term".into(),
                });
            }
            if !(ratio.is_finite() && ratio.is_positive() && *ratio < T::one()) {
                return Verdict::fails(Witness::Invariant {
                    index: None,
                    reason: "geometric ratio must lie in (0, 1)".into(),
                });
            }
        }
        Verdict::Holds
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        match self.validate() {
            Verdict::Fails { witness: Witness::Invariant { reason, .. } } => {
                Err(Error::InvalidSequence(reason))
            }
            _ => Ok(()),
        }
    }

    /// Mass of the tail alone, `first / (1 - ratio)` for geometric tails.
    pub fn tail_mass(&self) -> T {
        match &self.tail {
            TailModel::Zero => T::zero(),
            TailModel::Geometric { first, ratio } => first.clone() / (T::one() - ratio.clone()),
        }
    }

    pub fn total_mass(&self) -> T {
        self.prefix.iter().cloned().fold(T::zero(), |acc, x| acc + x) + self.tail_mass()
    }

    /// Tail term `first * ratio^j`.
    pub fn tail_term(&self, j: usize) -> Option<T> {
        match &self.tail {
            TailModel::Zero => None,
            TailModel::Geometric { first, ratio } => {
                Some(first.clone() * num_traits::pow(ratio.clone(), j))
            }
        }
    }

    /// Mass carried by tail terms `j >= skip`.
    pub fn tail_remainder(&self, skip: usize) -> T {
        match &self.tail {
            TailModel::Zero => T::zero(),
            TailModel::Geometric { ratio, .. } => {
                self.tail_term(skip).unwrap() / (T::one() - ratio.clone())
            }
        }
    }

    /// Number of positive entries, `None` when infinite.
    pub fn support_len(&self) -> Option<usize> {
        match self.tail {
            TailModel::Zero => Some(self.prefix.iter().filter(|x| x.is_positive()).count()),
            TailModel::Geometric { .. } => None,
        }
    }

    /// Positive prefix entries in non-increasing order.
    pub fn sorted_prefix(&self) -> Vec<T> {
        let mut p: Vec<T> = self.prefix.iter().filter(|x| x.is_positive()).cloned().collect();
        p.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
        p
    }

    /// Positive entries of the whole sequence in non-increasing order; the
    /// iterator is infinite for geometric tails.
    pub fn sorted_entries(&self) -> SortedEntries<T> {
        SortedEntries {
            prefix: self.sorted_prefix(),
            next_prefix: 0,
            tail: match &self.tail {
                TailModel::Zero => None,
                TailModel::Geometric { first, ratio } => Some((first.clone(), ratio.clone())),
            },
        }
    }

    /// The `k` largest entries in non-increasing order, zero padded.
    pub fn k_largest(&self, k: usize) -> Vec<T> {
        let mut out: Vec<T> = self.sorted_entries().take(k).collect();
        out.resize(k, T::zero());
        out
    }

    /// Largest entry (zero for the zero sequence).
    pub fn max_entry(&self) -> T {
        self.sorted_entries().next().unwrap_or_else(T::zero)
    }

    /// All pairwise products `x_i * c_j`; both operands need zero tails.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !(self.has_zero_tail() && other.has_zero_tail()) {
            return Err(Error::TailedOperand);
        }
        let mut out = Vec::with_capacity(self.prefix.len() * other.prefix.len());
        for x in &self.prefix {
            for c in &other.prefix {
                out.push(x.clone() * c.clone());
            }
        }
        Ok(Self::finite(out))
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: &T) -> Self {
        let prefix = self.prefix.iter().map(|x| x.clone() * factor.clone()).collect();
        let tail = match &self.tail {
            TailModel::Zero => TailModel::Zero,
            TailModel::Geometric { first, ratio } => TailModel::Geometric {
                first: first.clone() * factor.clone(),
                ratio: ratio.clone(),
            },
        };
        Self::new(prefix, tail)
    }

    pub fn cast<U: Scalar>(&self) -> Ell1Seq<U> {
        Ell1Seq {
            prefix: self.prefix.iter().map(Scalar::cast).collect(),
            tail: match &self.tail {
                TailModel::Zero => TailModel::Zero,
                TailModel::Geometric { first, ratio } => TailModel::Geometric {
                    first: first.cast(),
                    ratio: ratio.cast(),
                },
            },
        }
    }
}

/// Merge of the sorted prefix with the lazily enumerated geometric tail.
/// Ties go to the prefix entry.
pub struct SortedEntries<T: Scalar> {
    prefix: Vec<T>,
    next_prefix: usize,
    tail: Option<(T, T)>,
}

impl<T: Scalar> SortedEntries<T> {
    /// The tail term the iterator would emit next, if any.
    pub fn pending_tail(&self) -> Option<&T> {
        self.tail.as_ref().map(|(t, _)| t)
    }

    /// Number of prefix entries already emitted.
    pub fn prefix_consumed(&self) -> usize {
        self.next_prefix
    }
}

impl<T: Scalar> Iterator for SortedEntries<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let p = self.prefix.get(self.next_prefix);
        match (&mut self.tail, p) {
            (Some((term, ratio)), Some(p)) if *term > *p => {
                let out = term.clone();
                *term *= ratio.clone();
                Some(out)
            }
            (_, Some(p)) => {
                let out = p.clone();
                self.next_prefix += 1;
                Some(out)
            }
            (Some((term, ratio)), None) => {
                let out = term.clone();
                *term *= ratio.clone();
                Some(out)
            }
            (None, None) => None,
        }
    }
}

/// Exact sequences, the form in which inputs are parsed.
pub type ExactSeq = Ell1Seq<BigRational>;

fn number_at(value: &serde_json::Value, location: &str) -> Result<BigRational> {
    let text = match value {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        _ => return Err(Error::Parse(format!("{location}: expected a number or numeric string"))),
    };
    parse_exact(&text).map_err(|_| Error::Parse(format!("{location}: not a number: {text:?}")))
}

impl ExactSeq {
    /// Parses `{"prefix": [...], "tail": {"kind": "zero"} | {"kind": "geometric",
    /// "first": x, "ratio": r}}`; numbers may be JSON numbers or decimal strings.
    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("$: expected an object".into()))?;
        let prefix = match obj.get("prefix") {
            None => Vec::new(),
            Some(serde_json::Value::Array(items)) => items
                .iter()
                .enumerate()
                .map(|(i, x)| number_at(x, &format!("$.prefix[{i}]")))
                .collect::<Result<Vec<_>>>()?,
            Some(_) => return Err(Error::Parse("$.prefix: expected an array".into())),
        };
        let tail = match obj.get("tail") {
            None => TailModel::Zero,
            Some(t) => {
                let kind = t
                    .get("kind")
                    .and_then(|k| k.as_str())
                    .ok_or_else(|| Error::Parse("$.tail.kind: expected a string".into()))?;
                match kind {
                    "zero" => TailModel::Zero,
                    "geometric" => {
                        let first = t
                            .get("first")
                            .ok_or_else(|| Error::Parse("$.tail.first: missing".into()))?;
                        let ratio = t
                            .get("ratio")
                            .ok_or_else(|| Error::Parse("$.tail.ratio: missing".into()))?;
                        TailModel::Geometric {
                            first: number_at(first, "$.tail.first")?,
                            ratio: number_at(ratio, "$.tail.ratio")?,
                        }
                    }
                    other => {
                        return Err(Error::Parse(format!("$.tail.kind: unknown tail {other:?}")))
                    }
                }
            }
        };
        Ok(Ell1Seq::new(prefix, tail))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("$: {e}")))?;
        Self::from_json_value(&v)
    }
}
