use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Truncated Taylor expansion `Σ c_k (s - s₀)^k`, `c_k = f^(k)(s₀) / k!`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorJet<T: Scalar> {
    center: T,
    coeffs: Vec<T>,
}

impl<T: Scalar> TaylorJet<T> {
    /// Jet with the given coefficients; their count fixes the order.
    pub fn from_coeffs(center: T, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a jet has at least one coefficient");
        TaylorJet { center, coeffs }
    }

    pub fn constant(center: T, value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        TaylorJet { center, coeffs }
    }

    pub fn zero(center: T, order: usize) -> Self {
        Self::constant(center, T::zero(), order)
    }

    /// The identity `s ↦ s`.
    pub fn variable(center: T, order: usize) -> Self {
        let mut jet = Self::constant(center.clone(), center, order);
        if order >= 1 {
            jet.coeffs[1] = T::one();
        }
        jet
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    /// `f^(k)(s₀) = k! c_k`; zero past the order.
    pub fn derivative(&self, k: usize) -> T {
        match self.coeffs.get(k) {
            None => T::zero(),
            Some(c) => (1..=k).fold(c.clone(), |acc, j| acc * T::of_usize(j)),
        }
    }

    fn check(&self, other: &Self) {
        debug_assert!(self.order() == other.order(), "jet orders differ");
        debug_assert!(self.center == other.center, "jet centers differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        TaylorJet { center: self.center.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        TaylorJet { center: self.center.clone(), coeffs }
    }

    pub fn scale(&self, factor: &T) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect();
        TaylorJet { center: self.center.clone(), coeffs }
    }

    pub fn add_constant(&self, value: &T) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += value.clone();
        out
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        TaylorJet { center: self.center.clone(), coeffs: convolve(&self.coeffs, &other.coeffs) }
    }

    /// `self / other`; the divisor must not vanish at the center.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check(other);
        let d0 = &other.coeffs[0];
        if d0.is_zero() {
            return Err(Error::Config("jet division by a function vanishing at the center".into()));
        }
        let mut q: Vec<T> = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc -= other.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc / d0.clone());
        }
        Ok(TaylorJet { center: self.center.clone(), coeffs: q })
    }

    pub fn cast<U: Scalar>(&self) -> TaylorJet<U> {
        TaylorJet { center: self.center.cast(), coeffs: self.coeffs.iter().map(Scalar::cast).collect() }
    }
}

impl<T: Real> TaylorJet<T> {
    /// `exp ∘ self`.
    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut e: Vec<T> = Vec::with_capacity(n);
        e.push(self.coeffs[0].exp());
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc += T::of_usize(j) * self.coeffs[j].clone() * e[k - j].clone();
            }
            e.push(acc / T::of_usize(k));
        }
        TaylorJet { center: self.center.clone(), coeffs: e }
    }

    /// `s ↦ exp(λ s)` at `center`: coefficients `e^{λ s₀} λ^k / k!`.
    pub fn exp_linear(center: T, lambda: &T, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = (lambda.clone() * center.clone()).exp();
        coeffs.push(c.clone());
        for k in 1..=order {
            c = c * lambda.clone() / T::of_usize(k);
            coeffs.push(c.clone());
        }
        TaylorJet { center, coeffs }
    }
}

/// Truncated Cauchy product of two coefficient lists of equal length.
pub(crate) fn convolve<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    (0..a.len())
        .map(|k| (0..=k).fold(T::zero(), |acc, j| acc + a[j].clone() * b[k - j].clone()))
        .collect()
}
