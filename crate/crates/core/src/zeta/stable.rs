//! Taylor coefficients of `f(s) = ζ(s) / (s(s-1))` without the cancellation
//! of the direct quotient near `s = 1`.
//!
//! With `Δm = Σb - Σa` and `ψ_x(s) = x (x^{s-1} - 1) / (s-1)`,
//!
//! ```text
//! f(s) = (Σ_b ψ_x(s) - Σ_a ψ_x(s)) / s + Δm / (s(s-1)).
//! ```
//!
//! At `s = s₀ + ε`, `h = s₀ - 1`, `L = ln x`, the coefficients of `ψ_x` are
//! `x L^{n+1} I_n(hL) / n!` with `I_n(z) = ∫₀¹ τⁿ e^{τz} dτ > 0`, so each
//! entry contributes a term of known magnitude and no subtraction of nearly
//! equal quantities occurs inside a term.

use crate::scalar::{Real, Scalar};
use crate::sequence::{Ell1Seq, TailModel};
use crate::zeta::jet::{convolve, TaylorJet};
use crate::zeta::ZetaPair;

/// `I_n(z) = ∫₀¹ τⁿ e^{τz} dτ` for `n = 0..=order`.
pub fn exp_moments<T: Real>(z: &T, order: usize) -> Vec<T> {
    let n_top = order;
    if z.is_zero() {
        return (0..=n_top).map(|n| T::one() / T::of_usize(n + 1)).collect();
    }
    let eps = T::epsilon() * T::pow2(-4);
    let mut out = vec![T::zero(); n_top + 1];
    if z.is_negative() {
        let w = -z.clone();
        let e = (-w.clone()).exp();
        let top = if w > T::of_usize(n_top + 1) {
            // N!/w^{N+1} · P(Poisson(w) > N); the probability is at least 1/2 here.
            let mut term = T::one();
            let mut sum = T::one();
            let mut scale = T::one() / w.clone();
            for k in 1..=n_top {
                term = term * w.clone() / T::of_usize(k);
                sum += term.clone();
                scale = scale * T::of_usize(k) / w.clone();
            }
            scale * (T::one() - e.clone() * sum)
        } else {
            // e^{-w} Σ_k w^k / ((N+1)(N+2)...(N+1+k)), positive terms.
            let mut term = T::one() / T::of_usize(n_top + 1);
            let mut sum = term.clone();
            let mut k = 1;
            loop {
                term = term * w.clone() / T::of_usize(n_top + 1 + k);
                sum += term.clone();
                if term <= eps.clone() * sum.clone() {
                    break;
                }
                k += 1;
            }
            e.clone() * sum
        };
        out[n_top] = top;
        // I_{n-1} = (e^{-w} + w I_n) / n, all terms positive.
        for n in (1..=n_top).rev() {
            out[n - 1] = (e.clone() + w.clone() * out[n].clone()) / T::of_usize(n);
        }
    } else if *z > T::of_usize(n_top.max(1)) {
        // I_n = (e^z - n I_{n-1}) / z contracts errors while n < z.
        let e = z.exp();
        out[0] = (e.clone() - T::one()) / z.clone();
        for n in 1..=n_top {
            out[n] = (e.clone() - T::of_usize(n) * out[n - 1].clone()) / z.clone();
        }
    } else {
        // Σ_k z^k / (k! (n+k+1)), positive terms.
        for (n, slot) in out.iter_mut().enumerate() {
            let mut power = T::one();
            let mut sum = T::one() / T::of_usize(n + 1);
            let mut k = 1;
            loop {
                power = power * z.clone() / T::of_usize(k);
                let term = power.clone() / T::of_usize(n + k + 1);
                sum += term.clone();
                if term <= eps.clone() * sum.clone() {
                    break;
                }
                k += 1;
            }
            *slot = sum;
        }
    }
    out
}

/// Coefficients of `ψ_x` at `s₀ = 1 + h`, given `L = ln x`.
fn psi_coeffs<T: Real>(x: &T, log: &T, h: &T, order: usize) -> Vec<T> {
    let moments = exp_moments(&(h.clone() * log.clone()), order);
    let mut power = x.clone() * log.clone();
    let mut out = Vec::with_capacity(order + 1);
    for (n, m) in moments.into_iter().enumerate() {
        if n > 0 {
            power = power * log.clone() / T::of_usize(n);
        }
        out.push(power.clone() * m);
    }
    out
}

/// Geometric remainder `R(s) = ρ^s / (1 - r^s)` of a tail past its
/// materialized terms.
#[derive(Debug, Clone)]
struct Remainder<T> {
    log_rho: T,
    log_r: T,
    mass: T,
}

impl<T: Real> Remainder<T> {
    /// Coefficients of `R` and a bound on the magnitude of every
    /// contribution to them.
    fn jet(&self, s0: &T, order: usize) -> (Vec<T>, Vec<T>) {
        let num = TaylorJet::exp_linear(s0.clone(), &self.log_rho, order);
        let rs = TaylorJet::exp_linear(s0.clone(), &self.log_r, order);
        let one = TaylorJet::constant(s0.clone(), T::one(), order);
        let value = num.div(&one.sub(&rs)).expect("r^s < 1");
        let abs = |j: &TaylorJet<T>| TaylorJet::from_coeffs(s0.clone(), j.coeffs().iter().map(|c| c.abs()).collect());
        let bound = abs(&num).div(&one.sub(&abs(&rs))).expect("r^s < 1");
        (value.coeffs().to_vec(), bound.coeffs().to_vec())
    }

    /// Coefficients of `(R(s) - R(1)) / (s - 1)` with magnitude bounds.
    fn psi_coeffs(&self, s0: &T, order: usize) -> (Vec<T>, Vec<T>) {
        let h = s0.clone() - T::one();
        let (mut p, mut pm) = self.jet(s0, order);
        p[0] -= self.mass.clone();
        pm[0] += self.mass.clone();
        let (mut q, mut qm): (Vec<T>, Vec<T>) = (Vec::with_capacity(order + 1), Vec::with_capacity(order + 1));
        for n in 0..=order {
            let (prev, prev_m) = if n == 0 {
                (T::zero(), T::zero())
            } else {
                (q[n - 1].clone(), qm[n - 1].clone())
            };
            q.push((p[n].clone() - prev) / h.clone());
            qm.push((pm[n].clone() + prev_m) / h.clone());
        }
        (q, qm)
    }
}

/// One side of a pair, converted to working precision.
#[derive(Debug, Clone)]
struct Side<T> {
    entries: Vec<(T, T)>,
    remainder: Option<Remainder<T>>,
}

impl<T: Real> Side<T> {
    fn new<S: Scalar>(seq: &Ell1Seq<S>, tail_terms: usize) -> Self {
        let mut exact: Vec<S> = seq.sorted_prefix();
        let remainder = match seq.tail() {
            TailModel::Zero => None,
            TailModel::Geometric { ratio, .. } => {
                exact.extend((0..tail_terms).map(|j| seq.tail_term(j).unwrap()));
                let rho: T = seq.tail_term(tail_terms).unwrap().cast();
                let r: T = ratio.cast();
                Some(Remainder {
                    log_rho: rho.ln(),
                    log_r: r.ln(),
                    mass: seq.tail_remainder(tail_terms).cast(),
                })
            }
        };
        let entries = exact
            .iter()
            .map(|x| {
                let v: T = x.cast();
                let l = v.ln();
                (v, l)
            })
            .collect();
        Side { entries, remainder }
    }

    /// Adds `±Σψ` (or `±Σx^s` when `direct`) coefficients into `acc` and
    /// their magnitudes into `mag`.
    fn accumulate(&self, s0: &T, order: usize, direct: bool, negate: bool, acc: &mut [T], mag: &mut [T]) {
        let h = s0.clone() - T::one();
        let mut add = |coeffs: Vec<T>, bounds: Option<Vec<T>>| {
            for n in 0..=order {
                let m = bounds.as_ref().map_or_else(|| coeffs[n].abs(), |b| b[n].clone());
                if negate {
                    acc[n] -= coeffs[n].clone();
                } else {
                    acc[n] += coeffs[n].clone();
                }
                mag[n] += m;
            }
        };
        for (x, l) in &self.entries {
            if direct {
                add(TaylorJet::exp_linear(s0.clone(), l, order).coeffs().to_vec(), None);
            } else {
                add(psi_coeffs(x, l, &h, order), None);
            }
        }
        if let Some(rem) = &self.remainder {
            let (q, qm) = if direct { rem.jet(s0, order) } else { rem.psi_coeffs(s0, order) };
            add(q, Some(qm));
        }
    }
}

/// A pair converted once to working precision, ready for evaluation at
/// many points.
#[derive(Debug, Clone)]
pub struct Prepared<T> {
    a: Side<T>,
    b: Side<T>,
    mass_gap: T,
}

/// Coefficients of `f` at a point together with per-coefficient magnitudes.
#[derive(Debug, Clone)]
pub struct BoundedJet<T: Scalar> {
    pub jet: TaylorJet<T>,
    /// `magnitude[n]` bounds the sum of absolute values of everything that
    /// was added to produce coefficient `n`.
    pub magnitude: Vec<T>,
}

impl<T: Real> Prepared<T> {
    /// `tail_terms` geometric tail terms are expanded explicitly, the rest is
    /// summed in closed form.
    pub fn new<S: Scalar>(pair: &ZetaPair<S>, tail_terms: usize) -> Self {
        let reduced = pair.reduced();
        Prepared {
            a: Side::new(reduced.a(), tail_terms),
            b: Side::new(reduced.b(), tail_terms),
            mass_gap: pair.mass_gap().cast(),
        }
    }

    fn both_sides(&self, s0: &T, order: usize, direct: bool) -> (Vec<T>, Vec<T>) {
        let mut p = vec![T::zero(); order + 1];
        let mut pm = vec![T::zero(); order + 1];
        self.b.accumulate(s0, order, direct, false, &mut p, &mut pm);
        self.a.accumulate(s0, order, direct, true, &mut p, &mut pm);
        (p, pm)
    }

    /// Jet of `f = ζ / (s(s-1))` at `s0 > 1`. Each coefficient comes from
    /// whichever of two routes has the smaller magnitude bound: the form
    /// above, which is free of cancellation as `s → 1`, or `ζ` from power
    /// sums times `1/(s(s-1))`, which is accurate for large `s`.
    pub fn f_jet(&self, s0: &T, order: usize) -> BoundedJet<T> {
        let h = s0.clone() - T::one();
        // 1/s = Σ (-1)^k ε^k / s0^{k+1}.
        let mut inv_s = Vec::with_capacity(order + 1);
        let mut r = T::one() / s0.clone();
        for _ in 0..=order {
            inv_s.push(r.clone());
            r = -(r / s0.clone());
        }
        let inv_s_abs: Vec<T> = inv_s.iter().map(|x| x.abs()).collect();
        // 1/(s(s-1)) = Σ (-1)^k D_k / (h s0)^{k+1} ε^k, D_k = Σ_j s0^j h^{k-j} > 0.
        let mut quad = Vec::with_capacity(order + 1);
        let hs = h.clone() * s0.clone();
        let (mut d, mut s0_pow, mut denom) = (T::one(), T::one(), hs.clone());
        for k in 0..=order {
            if k > 0 {
                s0_pow *= s0.clone();
                d = h.clone() * d + s0_pow.clone();
                denom *= hs.clone();
            }
            let v = d.clone() / denom.clone();
            quad.push(if k % 2 == 1 { -v } else { v });
        }
        let quad_abs: Vec<T> = quad.iter().map(|x| x.abs()).collect();

        let (p, pm) = self.both_sides(s0, order, false);
        let mut f = convolve(&p, &inv_s);
        let mut fm = convolve(&pm, &inv_s_abs);
        if !self.mass_gap.is_zero() {
            for n in 0..=order {
                f[n] += self.mass_gap.clone() * quad[n].clone();
                fm[n] += self.mass_gap.abs() * quad_abs[n].clone();
            }
        }
        let (z, zm) = self.both_sides(s0, order, true);
        let g = convolve(&z, &quad);
        let gm = convolve(&zm, &quad_abs);
        for n in 0..=order {
            if gm[n] < fm[n] {
                f[n] = g[n].clone();
                fm[n] = gm[n].clone();
            }
        }
        BoundedJet { jet: TaylorJet::from_coeffs(s0.clone(), f), magnitude: fm }
    }

    /// `ζ(s)` with a magnitude bound, from `Δm + (s-1) Σψ` or from the power
    /// sums, whichever bound is smaller.
    pub fn zeta(&self, s: &T) -> (T, T) {
        let h = s.clone() - T::one();
        let (p, pm) = self.both_sides(s, 0, false);
        let stable = (
            self.mass_gap.clone() + h.clone() * p[0].clone(),
            self.mass_gap.abs() + h * pm[0].clone(),
        );
        let (z, zm) = self.both_sides(s, 0, true);
        if zm[0] < stable.1 {
            (z[0].clone(), zm[0].clone())
        } else {
            stable
        }
    }
}
