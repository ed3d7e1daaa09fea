//! Seeded generators of exact test inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::order::majorize_hockey_stick;
use crate::sequence::{Ell1Seq, ExactSeq};
use crate::verdict::Witness;
use crate::Exact;

pub type TestRng = ChaCha8Rng;

/// Stream `stream` of the generator for `seed`.
pub fn rng(seed: u64, stream: u64) -> TestRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn ratio(n: i64, d: i64) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `dim` entries `w_i / Σw`, integer weights in `1..=max_weight`.
pub fn distribution(rng: &mut TestRng, dim: usize, max_weight: i64) -> Vec<Exact> {
    let w: Vec<i64> = (0..dim).map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Applies `steps` random T-transforms; the result is majorized by `x`.
pub fn t_transform(rng: &mut TestRng, x: &[Exact], steps: usize) -> Vec<Exact> {
    let mut out = x.to_vec();
    if out.len() < 2 {
        return out;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..out.len());
        let mut j = rng.gen_range(0..out.len() - 1);
        if j >= i {
            j += 1;
        }
        let lambda = ratio(rng.gen_range(0..=16), 16);
        let one_minus = ratio(1, 1) - lambda.clone();
        let (xi, xj) = (out[i].clone(), out[j].clone());
        out[i] = lambda.clone() * xi.clone() + one_minus.clone() * xj.clone();
        out[j] = lambda * xj + one_minus * xi;
    }
    out.shuffle(rng);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `a` is a T-transform descendant of `b`, so `a ≺ b`.
    Majorized,
    /// Independent distributions of mass 1.
    EqualMass,
    /// Independent weights, masses generally differ.
    Unconstrained,
}

/// A random finitely supported pair of dimensions at most `max_dim`. Half
/// of the pairs have equal masses, and half of those are majorized.
pub fn pair(rng: &mut TestRng, max_dim: usize) -> (PairKind, ExactSeq, ExactSeq) {
    let kind = match rng.gen_range(0..4) {
        0 => PairKind::Majorized,
        1 => PairKind::EqualMass,
        _ => PairKind::Unconstrained,
    };
    let db = rng.gen_range(1..=max_dim);
    let da = rng.gen_range(1..=max_dim);
    let (a, b) = match kind {
        PairKind::Majorized => {
            let b = distribution(rng, db, 100);
            let steps = rng.gen_range(0..=4);
            let mut a = t_transform(rng, &b, steps);
            // Spread into extra entries: splitting an entry only lowers the order.
            while a.len() < da {
                let k = rng.gen_range(0..a.len());
                let half = a[k].clone() / ratio(2, 1);
                a[k] = half.clone();
                a.push(half);
            }
            (a, b)
        }
        PairKind::EqualMass => (distribution(rng, da, 100), distribution(rng, db, 100)),
        PairKind::Unconstrained => {
            let w = |rng: &mut TestRng, d: usize| (0..d).map(|_| ratio(rng.gen_range(0..=100), 100)).collect();
            (w(rng, da), w(rng, db))
        }
    };
    (kind, Ell1Seq::finite(a), Ell1Seq::finite(b))
}

/// A sequence with a geometric tail: up to four prefix entries, first term
/// in `(0, 1]` and ratio in `[1/20, 19/20]`.
pub fn geometric(rng: &mut TestRng) -> ExactSeq {
    let prefix = (0..rng.gen_range(0..=4)).map(|_| ratio(rng.gen_range(0..=100), 100)).collect();
    let first = ratio(rng.gen_range(1..=100), 100);
    let r = ratio(rng.gen_range(1..=19), 20);
    Ell1Seq::geometric(prefix, first, r)
}

/// An equal-mass pair with `a ⊀ b`, together with the hockey-stick witness
/// `g(t) ≤ -margin`, confirmed exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub a: ExactSeq,
    pub b: ExactSeq,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub t: Exact,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub g: Exact,
}

pub fn counterexamples(seed: u64, count: usize, margin: &Exact) -> Vec<Counterexample> {
    let mut rng = rng(seed, 7);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (da, db) = (rng.gen_range(2..=8), rng.gen_range(2..=8));
        let a = Ell1Seq::finite(distribution(&mut rng, da, 100));
        let b = Ell1Seq::finite(distribution(&mut rng, db, 100));
        let verdict = majorize_hockey_stick(&a, &b).expect("valid sequences");
        if let Some(Witness::Threshold { t, value }) = verdict.witness() {
            if -value.clone() >= *margin {
                out.push(Counterexample { a, b, t: t.clone(), g: value.clone() });
            }
        }
    }
    out
}
