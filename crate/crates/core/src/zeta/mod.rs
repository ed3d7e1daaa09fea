//! The Dirichlet-series side: `ζ(s) = Σ b_n^s - Σ a_n^s` for real `s > 1`,
//! the quotient `f(s) = ζ(s) / (s(s-1))`, a complete-monotonicity tester
//! for `f`, and two integral identities used as independent oracles.
//!
//! `a ≺ b` holds exactly when the masses agree and `f` is completely
//! monotone on `(1, ∞)`, provided every entry is at most 1. With larger
//! entries the Mellin kernel changes sign on `t > 1` and only the reverse
//! implication survives; reports carry a note in that case.

mod cm;
mod jet;
mod stable;

pub use cm::{
    cm_refute_adaptive, cm_test, CmConfig, CmReport, CmSample, DirectRoute, Grid, RefuteBudget, SampleLocation,
    StageSummary,
};
pub use jet::TaylorJet;
pub use stable::{exp_moments, BoundedJet, Prepared};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{PiecewiseLinearFn, StepFn, MASS_SLACK_BITS};
use crate::scalar::{Real, Scalar};
use crate::sequence::{Ell1Seq, TailModel};
use crate::verdict::{compare_le, Cmp, Verdict, Witness};

/// Slack bits in the tolerance `2^-(p-16) · magnitude` for Dirichlet-series
/// sign decisions.
pub const SIGN_SLACK_BITS: u32 = 16;

/// The two sequences behind `ζ(s) = Σ b_n^s - Σ a_n^s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ZetaPair<S: Scalar> {
    a: Ell1Seq<S>,
    b: Ell1Seq<S>,
}

impl<S: Scalar> ZetaPair<S> {
    pub fn new(a: Ell1Seq<S>, b: Ell1Seq<S>) -> Result<Self> {
        a.ensure_valid()?;
        b.ensure_valid()?;
        Ok(ZetaPair { a, b })
    }

    pub fn a(&self) -> &Ell1Seq<S> {
        &self.a
    }

    pub fn b(&self) -> &Ell1Seq<S> {
        &self.b
    }

    /// `ζ(1) = Σb - Σa`.
    pub fn mass_gap(&self) -> S {
        self.b.total_mass() - self.a.total_mass()
    }

    /// Whether some entry exceeds 1.
    pub fn has_entries_above_one(&self) -> bool {
        self.a.max_entry() > S::one() || self.b.max_entry() > S::one()
    }

    /// The same `ζ` with entries common to both sides removed.
    pub fn reduced(&self) -> Self {
        let (pa, pb) = (self.a.sorted_prefix(), self.b.sorted_prefix());
        let (mut ra, mut rb) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        while i < pa.len() && j < pb.len() {
            if pa[i] == pb[j] {
                i += 1;
                j += 1;
            } else if pa[i] > pb[j] {
                ra.push(pa[i].clone());
                i += 1;
            } else {
                rb.push(pb[j].clone());
                j += 1;
            }
        }
        ra.extend_from_slice(&pa[i..]);
        rb.extend_from_slice(&pb[j..]);
        let (ta, tb) = if self.a.tail() == self.b.tail() {
            (TailModel::Zero, TailModel::Zero)
        } else {
            (self.a.tail().clone(), self.b.tail().clone())
        };
        ZetaPair { a: Ell1Seq::new(ra, ta), b: Ell1Seq::new(rb, tb) }
    }
}

fn check_exponent<T: Real>(s: &T) -> Result<()> {
    if *s > T::one() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange)
    }
}

/// Jet of `Σ x_n^s` at `s > 1`. Zero entries contribute nothing; a
/// geometric tail contributes `first^s / (1 - ratio^s)`.
pub fn power_sum<T: Real, S: Scalar>(seq: &Ell1Seq<S>, s: &T, order: usize) -> Result<TaylorJet<T>> {
    check_exponent(s)?;
    seq.ensure_valid()?;
    let mut acc = TaylorJet::zero(s.clone(), order);
    for x in seq.sorted_prefix() {
        acc = acc.add(&TaylorJet::exp_linear(s.clone(), &x.cast::<T>().ln(), order));
    }
    if let TailModel::Geometric { first, ratio } = seq.tail() {
        let num = TaylorJet::exp_linear(s.clone(), &first.cast::<T>().ln(), order);
        let rs = TaylorJet::exp_linear(s.clone(), &ratio.cast::<T>().ln(), order);
        let den = TaylorJet::constant(s.clone(), T::one(), order).sub(&rs);
        acc = acc.add(&num.div(&den)?);
    }
    Ok(acc)
}

/// Jet of `ζ = Σ b^s - Σ a^s`.
pub fn zeta_jet<T: Real, S: Scalar>(pair: &ZetaPair<S>, s: &T, order: usize) -> Result<TaylorJet<T>> {
    Ok(power_sum(&pair.b, s, order)?.sub(&power_sum(&pair.a, s, order)?))
}

/// `ζ(1) = 0`, i.e. equal total masses.
pub fn zeta_at_one<S: Scalar>(pair: &ZetaPair<S>) -> Verdict<S> {
    let (ma, mb) = (pair.a.total_mass(), pair.b.total_mass());
    let tol = S::tolerance(&S::max_of(ma.clone(), mb.clone()), MASS_SLACK_BITS);
    match compare_le(&(mb.clone() - ma.clone()).abs(), &S::zero(), &tol) {
        Cmp::Satisfied => Verdict::Holds,
        Cmp::Violated => Verdict::fails(Witness::Mass { lhs: ma, rhs: mb }),
        Cmp::Unresolved(gap) => Verdict::Inconclusive { gap },
    }
}

/// Jet of `f = ζ / (s(s-1))` by direct jet division. Accurate away from
/// `s = 1`; near it the quotient cancels and [`f_jet_bounded`] should be
/// used instead.
pub fn f_jet<T: Real, S: Scalar>(pair: &ZetaPair<S>, s: &T, order: usize) -> Result<TaylorJet<T>> {
    let z = zeta_jet(pair, s, order)?;
    let var = TaylorJet::variable(s.clone(), order);
    let den = var.mul(&var.add_constant(&-T::one()));
    z.div(&den)
}

/// Jet of `f` through the cancellation-free form, with per-coefficient
/// magnitude bounds. `tail_terms` geometric tail terms are expanded.
pub fn f_jet_bounded<T: Real, S: Scalar>(
    pair: &ZetaPair<S>,
    s: &T,
    order: usize,
    tail_terms: usize,
) -> Result<BoundedJet<T>> {
    check_exponent(s)?;
    Ok(Prepared::new(pair, tail_terms).f_jet(s, order))
}

/// Both sides of an identity and their discrepancy.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Residual<T: Scalar> {
    #[serde(with = "crate::scalar::serde_scalar")]
    pub lhs: T,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub rhs: T,
    #[serde(with = "crate::scalar::serde_scalar")]
    pub absolute: T,
    /// `absolute` over the largest magnitude entering either side.
    #[serde(with = "crate::scalar::serde_scalar")]
    pub relative: T,
}

impl<T: Real> Residual<T> {
    fn new(lhs: T, rhs: T, scale: T) -> Self {
        let absolute = (lhs.clone() - rhs.clone()).abs();
        let relative = if scale.is_zero() { absolute.clone() } else { absolute.clone() / scale };
        Residual { lhs, rhs, absolute, relative }
    }
}

/// `Σ x^s` against `s ∫₀^∞ A(x) x^{s-1} dx`, integrated exactly per step of
/// the counting function `A`.
pub fn stieltjes_identity_check<T: Real, S: Scalar>(seq: &Ell1Seq<S>, s: &T) -> Result<Residual<T>> {
    check_exponent(s)?;
    seq.ensure_valid()?;
    if !seq.has_zero_tail() {
        return Err(Error::TailedOperand);
    }
    let lhs = power_sum(seq, s, 0)?.value().clone();
    let counting = StepFn::counting(&seq.sorted_prefix());
    let power = |x: &S| -> T {
        if x.is_zero() {
            T::zero()
        } else {
            x.cast::<T>().powf(s)
        }
    };
    let mut rhs = T::zero();
    let mut scale = T::zero();
    for (left, right, count) in counting.pieces() {
        let piece = T::of_usize(count as usize) * (power(&right) - power(&left));
        scale += piece.abs();
        rhs += piece;
    }
    let scale = T::max_of(scale, lhs.abs());
    Ok(Residual::new(lhs, rhs, scale))
}

/// `ζ(s)` against `s(s-1) ∫₀^∞ g(t) t^{s-2} dt`, `g = H_b - H_a`, with the
/// integral taken in closed form per linear piece of `g`.
pub fn mellin_identity_check<T: Real, S: Scalar>(pair: &ZetaPair<S>, s: &T) -> Result<Residual<T>> {
    check_exponent(s)?;
    if !(pair.a.has_zero_tail() && pair.b.has_zero_tail()) {
        return Err(Error::TailedOperand);
    }
    if !zeta_at_one(pair).holds() {
        return Err(Error::UnequalMasses);
    }
    let pa = power_sum(&pair.a, s, 0)?.value().clone();
    let pb = power_sum(&pair.b, s, 0)?.value().clone();
    let lhs = pb.clone() - pa.clone();
    let g = PiecewiseLinearFn::hockey_stick(&pair.b.sorted_prefix())
        .sub(&PiecewiseLinearFn::hockey_stick(&pair.a.sorted_prefix()))
        .cast::<T>();
    let (integral, magnitude) = g.mellin_kernel_integral(s);
    let factor = s.clone() * (s.clone() - T::one());
    let rhs = factor.clone() * integral;
    let scale = T::max_of(pa + pb, factor * magnitude);
    Ok(Residual::new(lhs, rhs, scale))
}

/// Sign of `ζ` on a grid of points `s > 1`: `Holds` when every value
/// exceeds its tolerance, `Fails` at the first clearly negative point.
/// A grid cannot establish positivity on an interval.
pub fn zeta_positivity<T: Real, S: Scalar>(pair: &ZetaPair<S>, grid: &[f64]) -> Result<Verdict<f64>> {
    for s in grid {
        check_exponent(&T::from_f64_lossless(*s))?;
    }
    let prepared: Prepared<T> = Prepared::new(pair, cm::DEFAULT_TAIL_TERMS);
    let mut gap: Option<f64> = None;
    for s in grid {
        let (value, magnitude) = prepared.zeta(&T::from_f64_lossless(*s));
        let tol = T::tolerance(&magnitude, SIGN_SLACK_BITS);
        if value > tol {
            continue;
        }
        if value < -tol.clone() {
            return Ok(Verdict::fails(Witness::Point { s: *s, value: value.to_sci(20) }));
        }
        if gap.is_none() {
            gap = Some(if magnitude.is_zero() { 0.0 } else { (value.abs() / magnitude).to_f64() });
        }
    }
    Ok(match gap {
        None => Verdict::Holds,
        Some(gap) => Verdict::Inconclusive { gap },
    })
}
