//! Majorization deciders: sorted partial sums, and hockey-stick sums
//! `H_x(t) = Σ (x_j - t)⁺` compared pointwise.
//!
//! Both return a [`Verdict`]. On exact scalars the answer is exact; on
//! floating scalars differences inside `2^-(p-10) · max(mass)` are treated
//! as unresolved and produce `Inconclusive` unless some comparison fails
//! outright.

mod pwl;
mod step;

pub use pwl::{PiecewiseLinearFn, Segment};
pub use step::StepFn;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{Ell1Seq, TailModel};
use crate::verdict::{compare_le, Cmp, Verdict, Witness};

/// Extra bits of slack in the equal-mass tolerance.
pub const MASS_SLACK_BITS: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderConfig {
    /// Largest `k` examined explicitly when both sequences have geometric tails.
    pub k_max: usize,
    /// Tail terms materialized for the hockey-stick route.
    pub truncation: usize,
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig { k_max: 10_000, truncation: 64 }
    }
}

/// A function known exactly on `[exact_from, ∞)`; the entries left out carry
/// total mass `remainder` and are all `<= exact_from`.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<F, T: Scalar> {
    pub func: F,
    pub exact_from: T,
    pub remainder: T,
}

/// Positive entries in non-increasing order: everything for zero tails, and
/// for geometric tails at least `min_tail_terms` tail terms and every entry
/// above `floor`. Returns the entries and the largest entry left out.
fn materialize<T: Scalar>(seq: &Ell1Seq<T>, min_tail_terms: usize, floor: &T) -> (Vec<T>, T, usize) {
    let mut it = seq.sorted_entries();
    let mut out = Vec::new();
    let prefix_len = seq.sorted_prefix().len();
    if seq.has_zero_tail() {
        out.extend(it);
        return (out, T::zero(), 0);
    }
    loop {
        let tail_taken = out.len() - it.prefix_consumed();
        let pending_tail = it.pending_tail().cloned().expect("geometric tail");
        let prefix_left = it.prefix_consumed() < prefix_len;
        if tail_taken >= min_tail_terms && !prefix_left && (floor.is_zero() || pending_tail <= *floor) {
            return (out, pending_tail, tail_taken);
        }
        out.push(it.next().expect("infinite iterator"));
    }
}

/// Counting function `A(x) = #{n : x_n ≥ x}`; geometric tails are cut after
/// `truncation` tail terms.
pub fn counting_function<T: Scalar>(seq: &Ell1Seq<T>, truncation: usize) -> Truncated<StepFn<T>, T> {
    let (entries, exact_from, tail_taken) = tail_cut(seq, truncation);
    Truncated {
        func: StepFn::counting(&entries),
        exact_from,
        remainder: seq.tail_remainder(tail_taken),
    }
}

fn tail_cut<T: Scalar>(seq: &Ell1Seq<T>, truncation: usize) -> (Vec<T>, T, usize) {
    let mut entries = seq.sorted_prefix();
    match seq.tail() {
        TailModel::Zero => (entries, T::zero(), 0),
        TailModel::Geometric { .. } => {
            entries.extend((0..truncation).map(|j| seq.tail_term(j).unwrap()));
            (entries, seq.tail_term(truncation).unwrap(), truncation)
        }
    }
}

/// `Σ (x_j - t)⁺` for `t > 0`, exact for either tail model.
pub fn hockey_stick<T: Scalar>(seq: &Ell1Seq<T>, t: &T) -> Result<T> {
    if !t.is_positive() {
        return Err(Error::NonPositiveThreshold);
    }
    Ok(seq
        .sorted_entries()
        .take_while(|x| x > t)
        .fold(T::zero(), |acc, x| acc + (x - t.clone())))
}

/// The whole map `t ↦ hockey_stick(seq, t)`; geometric tails are cut after
/// `truncation` tail terms.
pub fn hockey_stick_fn<T: Scalar>(seq: &Ell1Seq<T>, truncation: usize) -> Truncated<PiecewiseLinearFn<T>, T> {
    let (entries, exact_from, tail_taken) = tail_cut(seq, truncation);
    Truncated {
        func: PiecewiseLinearFn::hockey_stick(&entries),
        exact_from,
        remainder: seq.tail_remainder(tail_taken),
    }
}

/// Accumulates per-comparison outcomes into a verdict.
struct Ledger<T: Scalar> {
    unresolved: Option<T>,
}

impl<T: Scalar> Ledger<T> {
    fn new() -> Self {
        Ledger { unresolved: None }
    }

    fn note(&mut self, gap: T) {
        if self.unresolved.is_none() {
            self.unresolved = Some(gap);
        }
    }

    fn finish(self) -> Verdict<T> {
        match self.unresolved {
            None => Verdict::Holds,
            Some(gap) => Verdict::Inconclusive { gap },
        }
    }
}

/// Checks condition (2), equal total masses. `Err` carries the verdict to
/// return immediately.
fn mass_condition<T: Scalar>(a: &Ell1Seq<T>, b: &Ell1Seq<T>, ledger: &mut Ledger<T>) -> std::result::Result<T, Verdict<T>> {
    let (ma, mb) = (a.total_mass(), b.total_mass());
    let tol = T::tolerance(&T::max_of(ma.clone(), mb.clone()), MASS_SLACK_BITS);
    let d = mb.clone() - ma.clone();
    if d.abs() > tol {
        return Err(Verdict::fails(Witness::Mass { lhs: ma, rhs: mb }));
    }
    if !d.is_zero() {
        ledger.note(d.abs());
    }
    Ok(tol)
}

fn validate_pair<T: Scalar>(a: &Ell1Seq<T>, b: &Ell1Seq<T>) -> Result<()> {
    a.ensure_valid()?;
    b.ensure_valid()
}

pub fn majorize_partial_sums<T: Scalar>(a: &Ell1Seq<T>, b: &Ell1Seq<T>) -> Result<Verdict<T>> {
    majorize_partial_sums_with(a, b, &OrderConfig::default())
}

/// `a ≺ b` by the definition: every top-`k` sum of `a` is at most that of
/// `b`, and the totals agree.
pub fn majorize_partial_sums_with<T: Scalar>(
    a: &Ell1Seq<T>,
    b: &Ell1Seq<T>,
    config: &OrderConfig,
) -> Result<Verdict<T>> {
    validate_pair(a, b)?;
    let mut ledger = Ledger::new();
    let tol = match mass_condition(a, b, &mut ledger) {
        Ok(tol) => tol,
        Err(v) => return Ok(v),
    };
    let (ma, mb) = (a.total_mass(), b.total_mass());

    let limit = match (a.support_len(), b.support_len()) {
        (Some(na), Some(nb)) => na.max(nb),
        // Beyond b's support S_b(k) = mass ≥ S_a(k).
        (None, Some(nb)) => nb,
        // S_a reaches the full mass at k = na while S_b never does.
        (Some(na), None) => na,
        (None, None) => config.k_max,
    };
    let both_tailed = a.support_len().is_none() && b.support_len().is_none();
    let (pa, pb) = (a.sorted_prefix().len(), b.sorted_prefix().len());

    let mut ia = a.sorted_entries();
    let mut ib = b.sorted_entries();
    let (mut sa, mut sb) = (T::zero(), T::zero());
    let mut k = 0;
    while k < limit {
        k += 1;
        sa += ia.next().unwrap_or_else(T::zero);
        sb += ib.next().unwrap_or_else(T::zero);
        match compare_le(&sa, &sb, &tol) {
            Cmp::Satisfied => {}
            Cmp::Violated => {
                return Ok(Verdict::fails(Witness::PartialSum { k, lhs: sa, rhs: sb }));
            }
            Cmp::Unresolved(gap) => ledger.note(gap),
        }
        if both_tailed && ia.prefix_consumed() == pa && ib.prefix_consumed() == pb {
            return Ok(geometric_tails_from(k, &ma, &mb, a, b, &ia, &ib, &tol, config, ledger));
        }
    }
    if both_tailed {
        // Prefixes not exhausted within k_max: bound the remainders.
        let gap = T::max_of(ma - sa, mb - sb);
        return Ok(Verdict::Inconclusive { gap });
    }
    Ok(ledger.finish())
}

/// Both sequences have geometric tails and from index `k` on only tail
/// terms remain. Remaining masses are `A·r_a^j` and `B·r_b^j`, and the
/// condition `S_a ≤ S_b` is `A·r_a^j ≥ B·r_b^j` for all `j ≥ 1`.
#[allow(clippy::too_many_arguments)]
fn geometric_tails_from<T: Scalar>(
    k: usize,
    ma: &T,
    mb: &T,
    a: &Ell1Seq<T>,
    b: &Ell1Seq<T>,
    ia: &crate::sequence::SortedEntries<T>,
    ib: &crate::sequence::SortedEntries<T>,
    tol: &T,
    config: &OrderConfig,
    mut ledger: Ledger<T>,
) -> Verdict<T> {
    let ratio = |s: &Ell1Seq<T>| match s.tail() {
        TailModel::Geometric { ratio, .. } => ratio.clone(),
        TailModel::Zero => unreachable!(),
    };
    let (ra, rb) = (ratio(a), ratio(b));
    let big_a = ia.pending_tail().unwrap().clone() / (T::one() - ra.clone());
    let big_b = ib.pending_tail().unwrap().clone() / (T::one() - rb.clone());
    let at = |j: usize| {
        let rem_a = big_a.clone() * num_traits::pow(ra.clone(), j);
        let rem_b = big_b.clone() * num_traits::pow(rb.clone(), j);
        (ma.clone() - rem_a, mb.clone() - rem_b)
    };
    if ra >= rb {
        // The ratio of remainders is non-decreasing: j = 1 decides.
        let (la, lb) = at(1);
        return match compare_le(&la, &lb, tol) {
            Cmp::Violated => Verdict::fails(Witness::PartialSum { k: k + 1, lhs: la, rhs: lb }),
            Cmp::Unresolved(gap) => {
                ledger.note(gap);
                ledger.finish()
            }
            Cmp::Satisfied => ledger.finish(),
        };
    }
    // ra < rb: the remainder ratio decays to zero, so a violation exists.
    // Locate the first one from a floating estimate, then confirm.
    let est = {
        let (fa, fb) = (big_a.to_f64(), big_b.to_f64());
        let q = (ra.to_f64() / rb.to_f64()).ln();
        let j = ((fb / fa).ln() / q).floor();
        if j.is_finite() && j >= 0.0 { j as usize + 1 } else { 1 }
    };
    if k + est > config.k_max.max(k + 1) * 4 {
        let gap = T::max_of(big_a, big_b);
        return Verdict::Inconclusive { gap };
    }
    let violates = |j: usize| {
        let (la, lb) = at(j);
        matches!(compare_le(&la, &lb, tol), Cmp::Violated)
    };
    let mut j = est.max(1);
    while j > 1 && violates(j - 1) {
        j -= 1;
    }
    let mut steps = 0;
    while !violates(j) {
        j += 1;
        steps += 1;
        if steps > 64 {
            let gap = T::max_of(big_a, big_b);
            return Verdict::Inconclusive { gap };
        }
    }
    let (la, lb) = at(j);
    Verdict::fails(Witness::PartialSum { k: k + j, lhs: la, rhs: lb })
}

pub fn majorize_hockey_stick<T: Scalar>(a: &Ell1Seq<T>, b: &Ell1Seq<T>) -> Result<Verdict<T>> {
    majorize_hockey_stick_with(a, b, &OrderConfig::default())
}

/// `a ≺ b` through `g(t) = H_b(t) - H_a(t) ≥ 0` for all `t > 0` plus equal
/// totals. `g` is piecewise linear, so its sign is settled at breakpoints.
pub fn majorize_hockey_stick_with<T: Scalar>(
    a: &Ell1Seq<T>,
    b: &Ell1Seq<T>,
    config: &OrderConfig,
) -> Result<Verdict<T>> {
    validate_pair(a, b)?;
    let mut ledger = Ledger::new();
    let tol = match mass_condition(a, b, &mut ledger) {
        Ok(tol) => tol,
        Err(v) => return Ok(v),
    };
    // H is additive over entries, so identical tails cancel from g exactly.
    if !a.has_zero_tail() && a.tail() == b.tail() {
        let (pa, pb) = (Ell1Seq::finite(a.prefix().to_vec()), Ell1Seq::finite(b.prefix().to_vec()));
        return majorize_hockey_stick_with(&pa, &pb, config);
    }

    // Level below which g is not evaluated from materialized entries.
    let floor = match (a.support_len(), b.support_len()) {
        (None, Some(nb)) => {
            // For t ≤ min(b_min, a↓_{nb}), Σmin(a_j,t) ≥ nb·t = Σmin(b_j,t), so g ≥ 0.
            let b_min = b.sorted_prefix().last().cloned().unwrap_or_else(T::zero);
            let a_nb = a.sorted_entries().nth(nb.saturating_sub(1)).unwrap_or_else(T::zero);
            T::min_of(b_min, a_nb)
        }
        _ => T::zero(),
    };
    let (ea, fa, _) = materialize(a, config.truncation, &floor);
    let (eb, fb, _) = materialize(b, config.truncation, &floor);
    let exact_from = T::max_of(fa, fb);
    let g = PiecewiseLinearFn::hockey_stick(&eb).sub(&PiecewiseLinearFn::hockey_stick(&ea));

    let mut worst: Option<(T, T)> = None;
    for t in g.breakpoints() {
        if !t.is_positive() || t < exact_from {
            continue;
        }
        let v = g.eval(&t);
        match compare_le(&T::zero(), &v, &tol) {
            Cmp::Satisfied => {}
            Cmp::Violated => {
                if worst.as_ref().is_none_or(|(_, w)| v < *w) {
                    worst = Some((t, v));
                }
            }
            Cmp::Unresolved(gap) => ledger.note(gap),
        }
    }
    if !exact_from.is_zero() && exact_from.is_positive() {
        let v = g.eval(&exact_from);
        if let Cmp::Violated = compare_le(&T::zero(), &v, &tol) {
            if worst.as_ref().is_none_or(|(_, w)| v < *w) {
                worst = Some((exact_from.clone(), v));
            }
        }
    }
    if let Some((t, value)) = worst {
        return Ok(Verdict::fails(Witness::Threshold { t, value }));
    }

    match (a.support_len(), b.support_len()) {
        (Some(_), Some(_)) | (None, Some(_)) => Ok(ledger.finish()),
        (Some(na), None) => {
            // Finite a against infinite b: for t = b↓_k below every entry of a
            // with k > na, Σmin(b_j,t) ≥ k·t > na·t = Σmin(a_j,t).
            let a_min = a.sorted_prefix().last().cloned();
            let t = b
                .sorted_entries()
                .enumerate()
                .find(|(i, x)| *i >= na && a_min.as_ref().is_none_or(|m| x < m))
                .map(|(_, x)| x)
                .expect("infinite support");
            let value = hockey_stick(b, &t)? - hockey_stick(a, &t)?;
            Ok(Verdict::fails(Witness::Threshold { t, value }))
        }
        (None, None) => {
            // Both infinite: nothing certifies g on (0, exact_from).
            Ok(Verdict::Inconclusive { gap: exact_from })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_exact;
    use crate::{Exact, ExactSeq};

    fn q(s: &str) -> Exact {
        parse_exact(s).unwrap()
    }

    fn seq(xs: &[&str]) -> ExactSeq {
        Ell1Seq::finite(xs.iter().map(|s| q(s)).collect())
    }

    #[test]
    fn counting_function_examples() {
        let a = counting_function(&seq(&["0.5", "0.5"]), 0);
        assert_eq!(a.func.breakpoints(), &[q("0.5")]);
        assert_eq!(a.func.values(), &[2, 0]);
        assert_eq!(counting_function(&seq(&["0.7", "0.2", "0.1"]), 0).func.eval(&q("0.2")), 2);
        let g = Ell1Seq::geometric(vec![], q("0.4"), q("0.5"));
        let c = counting_function(&g, 3);
        assert_eq!(c.func.breakpoints(), &[q("0.1"), q("0.2"), q("0.4")]);
        assert_eq!(c.func.values(), &[3, 2, 1, 0]);
        assert_eq!(c.exact_from, q("0.05"));
        assert_eq!(c.remainder, q("0.1"));
    }

    #[test]
    fn hockey_stick_examples() {
        assert_eq!(hockey_stick(&seq(&["0.5", "0.5"]), &q("0.25")).unwrap(), q("0.5"));
        assert_eq!(hockey_stick(&seq(&["0.5", "0.2"]), &q("0.5")).unwrap(), q("0"));
        // Direct summation: (0.7 - 0.15) + (0.2 - 0.15) = 0.6.
        assert_eq!(hockey_stick(&seq(&["0.7", "0.2", "0.1"]), &q("0.15")).unwrap(), q("0.6"));
        assert_eq!(hockey_stick(&seq(&["0.5"]), &q("0")), Err(Error::NonPositiveThreshold));
        let g = Ell1Seq::geometric(vec![], q("0.4"), q("0.5"));
        // 0.4, 0.2, 0.1 exceed 0.09.
        assert_eq!(hockey_stick(&g, &q("0.09")).unwrap(), q("0.43"));
    }

    #[test]
    fn hockey_stick_fn_examples() {
        let h = hockey_stick_fn(&seq(&["0.5", "0.5"]), 0);
        assert_eq!(h.func.eval(&q("0.1")), q("0.8"));
        assert_eq!(h.func.eval(&q("0.5")), q("0"));
        let g = Ell1Seq::geometric(vec![], q("0.4"), q("0.5"));
        let h = hockey_stick_fn(&g, 5);
        assert_eq!(h.exact_from, q("0.0125"));
        for t in ["0.0125", "0.03", "0.1", "0.3"] {
            assert_eq!(h.func.eval(&q(t)), hockey_stick(&g, &q(t)).unwrap());
        }
    }

    #[test]
    fn partial_sum_examples() {
        let v = majorize_partial_sums(&seq(&["0.5", "0.5"]), &seq(&["1"])).unwrap();
        assert!(v.holds());
        let v = majorize_partial_sums(&seq(&["0.5", "0.25", "0.25"]), &seq(&["0.4", "0.3", "0.3"])).unwrap();
        assert_eq!(
            v,
            Verdict::fails(Witness::PartialSum { k: 1, lhs: q("0.5"), rhs: q("0.4") })
        );
        let x = seq(&["0.7", "0.2", "0.1"]);
        assert!(majorize_partial_sums(&x, &x).unwrap().holds());
    }

    #[test]
    fn hockey_examples() {
        assert!(majorize_hockey_stick(&seq(&["0.5", "0.5"]), &seq(&["1"])).unwrap().holds());
        let v = majorize_hockey_stick(&seq(&["0.5", "0.25", "0.25"]), &seq(&["0.4", "0.3", "0.3"])).unwrap();
        match v {
            Verdict::Fails { witness: Witness::Threshold { t, value } } => {
                assert!(value < q("0"));
                let a = seq(&["0.5", "0.25", "0.25"]);
                let b = seq(&["0.4", "0.3", "0.3"]);
                assert_eq!(hockey_stick(&b, &t).unwrap() - hockey_stick(&a, &t).unwrap(), value);
            }
            v => panic!("{v:?}"),
        }
        let x = seq(&["0.6", "0.3", "0.1"]);
        assert!(majorize_hockey_stick(&x, &x).unwrap().holds());
    }

    #[test]
    fn unequal_masses_fail_immediately() {
        for f in [majorize_partial_sums::<Exact>, majorize_hockey_stick::<Exact>] {
            match f(&seq(&["0.5"]), &seq(&["1"])).unwrap() {
                Verdict::Fails { witness: Witness::Mass { lhs, rhs } } => {
                    assert_eq!((lhs, rhs), (q("0.5"), q("1")))
                }
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn zero_sequences() {
        let z = ExactSeq::finite(vec![]);
        assert!(majorize_partial_sums(&z, &z).unwrap().holds());
        assert!(majorize_hockey_stick(&z, &z).unwrap().holds());
        assert!(majorize_partial_sums(&z, &seq(&["0.1"])).unwrap().is_fails());
    }

    #[test]
    fn invalid_input_is_an_error() {
        let bad = seq(&["0.5", "-0.5", "1"]);
        assert!(matches!(majorize_partial_sums(&bad, &bad), Err(Error::InvalidSequence(_))));
    }

    #[test]
    fn float_rounding_lands_in_band() {
        let a = Ell1Seq::<f64>::finite(vec![0.1, 0.2, 0.3]);
        let b = Ell1Seq::<f64>::finite(vec![0.6]);
        let v = majorize_partial_sums(&a, &b).unwrap();
        assert!(matches!(v, Verdict::Inconclusive { .. }), "{v:?}");
        let a = Ell1Seq::<f64>::finite(vec![0.25, 0.25, 0.5]);
        let b = Ell1Seq::<f64>::finite(vec![0.5, 0.5]);
        assert!(majorize_partial_sums(&a, &b).unwrap().holds());
        assert!(majorize_hockey_stick(&a, &b).unwrap().holds());
    }

    #[test]
    fn shared_tails_cancel() {
        let tailed = |p: &[&str]| Ell1Seq::geometric(p.iter().map(|s| q(s)).collect(), q("1/16"), q("1/2"));
        let g = tailed(&["0.5", "0.25", "1/8"]);
        assert_eq!(majorize_hockey_stick(&g, &g).unwrap(), Verdict::Holds);
        let (a, b) = (tailed(&["0.25", "0.25"]), tailed(&["0.5"]));
        assert!(majorize_hockey_stick(&a, &b).unwrap().holds());
        match majorize_hockey_stick(&b, &a).unwrap() {
            Verdict::Fails { witness: Witness::Threshold { t, value } } => {
                assert_eq!(hockey_stick(&a, &t).unwrap() - hockey_stick(&b, &t).unwrap(), value);
                assert!(value < q("0"));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn tails_against_finite() {
        // Geometric a with mass 1 against b = (1): holds.
        let a = Ell1Seq::geometric(vec![], q("0.5"), q("0.5"));
        let b = seq(&["1"]);
        assert!(majorize_partial_sums(&a, &b).unwrap().holds());
        assert!(majorize_hockey_stick(&a, &b).unwrap().holds());
        // Finite a cannot be majorized by infinite b of equal mass.
        let ps = majorize_partial_sums(&b, &a).unwrap();
        assert_eq!(
            ps,
            Verdict::fails(Witness::PartialSum { k: 1, lhs: q("1"), rhs: q("0.5") })
        );
        match majorize_hockey_stick(&b, &a).unwrap() {
            Verdict::Fails { witness: Witness::Threshold { t, value } } => {
                assert!(value < q("0"));
                assert_eq!(hockey_stick(&a, &t).unwrap() - hockey_stick(&b, &t).unwrap(), value);
            }
            v => panic!("{v:?}"),
        }
        // a = (1/4, 3/8, 3/16, 3/32, ...) against b = (1/2, 1/4, 1/4).
        let a = Ell1Seq::geometric(vec![q("1/4")], q("3/8"), q("1/2"));
        let b = seq(&["1/2", "1/4", "1/4"]);
        assert!(majorize_partial_sums(&a, &b).unwrap().holds());
        assert!(majorize_hockey_stick(&a, &b).unwrap().holds());
    }

    #[test]
    fn two_geometric_tails() {
        // Slower decay on the left: a ≺ b.
        let a = Ell1Seq::geometric(vec![], q("1/3"), q("2/3"));
        let b = Ell1Seq::geometric(vec![], q("1/2"), q("1/2"));
        assert!(majorize_partial_sums(&a, &b).unwrap().holds());
        // Reverse: fails at k = 1 already (1/2 > 1/3).
        let v = majorize_partial_sums(&b, &a).unwrap();
        assert_eq!(v.witness(), Some(&Witness::PartialSum { k: 1, lhs: q("1/2"), rhs: q("1/3") }));
        // Same head but faster decay on the left eventually fails.
        let a = Ell1Seq::geometric(vec![q("0.1")], q("0.45"), q("0.5"));
        let b = Ell1Seq::geometric(vec![q("0.5"), q("0.1")], q("0.2"), q("0.5"));
        assert!(majorize_partial_sums(&a, &b).unwrap().holds());
        let a = Ell1Seq::geometric(vec![], q("0.3"), q("0.7"));
        let b = Ell1Seq::geometric(vec![q("0.5")], q("0.05"), q("0.9"));
        let v = majorize_partial_sums(&a, &b).unwrap();
        let Some(Witness::PartialSum { k, lhs, rhs }) = v.witness().cloned() else { panic!("{v:?}") };
        assert!(lhs > rhs);
        // The witness agrees with brute-force partial sums.
        let sa: Exact = a.k_largest(k).into_iter().sum();
        let sb: Exact = b.k_largest(k).into_iter().sum();
        assert_eq!((sa, sb), (lhs, rhs));
        let sa: Exact = a.k_largest(k - 1).into_iter().sum();
        let sb: Exact = b.k_largest(k - 1).into_iter().sum();
        assert!(sa <= sb);
    }
}
