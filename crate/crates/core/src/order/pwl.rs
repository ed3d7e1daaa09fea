use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment<T: Scalar> {
    pub start: T,
    pub value: T,
    pub slope: T,
}

/// Continuous piecewise-linear function on `[0, ∞)` that vanishes from
/// `end` onwards. Segment `i` covers `[start_i, start_{i+1})`, the last one
/// `[start_last, end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFn<T: Scalar> {
    segments: Vec<Segment<T>>,
    end: T,
}

impl<T: Scalar> PiecewiseLinearFn<T> {
    pub fn zero() -> Self {
        PiecewiseLinearFn { segments: Vec::new(), end: T::zero() }
    }

    /// `t ↦ Σ (x_j - t)⁺` over the positive entries given.
    pub fn hockey_stick(entries: &[T]) -> Self {
        let mut sorted: Vec<T> = entries.iter().filter(|x| x.is_positive()).cloned().collect();
        if sorted.is_empty() {
            return Self::zero();
        }
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable entries"));
        let mass = sorted.iter().cloned().fold(T::zero(), |a, x| a + x);
        let mut segments = vec![Segment {
            start: T::zero(),
            value: mass,
            slope: -T::of_usize(sorted.len()),
        }];
        let mut i = 0;
        while i < sorted.len() {
            let knot = sorted[i].clone();
            while i < sorted.len() && sorted[i] == knot {
                i += 1;
            }
            let above = sorted.len() - i;
            if above == 0 {
                break;
            }
            let prev = segments.last().unwrap();
            let value = prev.value.clone() + prev.slope.clone() * (knot.clone() - prev.start.clone());
            segments.push(Segment { start: knot, value, slope: -T::of_usize(above) });
        }
        let end = sorted.last().unwrap().clone();
        PiecewiseLinearFn { segments, end }
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn end(&self) -> &T {
        &self.end
    }

    /// Segment starts followed by `end`.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut out: Vec<T> = self.segments.iter().map(|s| s.start.clone()).collect();
        if !self.segments.is_empty() {
            out.push(self.end.clone());
        }
        out
    }

    fn segment_at(&self, t: &T) -> Option<&Segment<T>> {
        if *t >= self.end {
            return None;
        }
        let i = self.segments.partition_point(|s| s.start <= *t);
        i.checked_sub(1).map(|i| &self.segments[i])
    }

    pub fn eval(&self, t: &T) -> T {
        match self.segment_at(t) {
            Some(s) => s.value.clone() + s.slope.clone() * (t.clone() - s.start.clone()),
            None => T::zero(),
        }
    }

    /// Slope to the right of `t`.
    pub fn right_slope(&self, t: &T) -> T {
        self.segment_at(t).map_or_else(T::zero, |s| s.slope.clone())
    }

    /// `self - other`, with breakpoints at the union of both sets.
    pub fn sub(&self, other: &Self) -> Self {
        let mut knots = self.breakpoints();
        knots.extend(other.breakpoints());
        knots.sort_by(|a, b| a.partial_cmp(b).expect("comparable knots"));
        knots.dedup();
        let end = T::max_of(self.end.clone(), other.end.clone());
        if knots.is_empty() {
            return Self::zero();
        }
        let segments = knots
            .iter()
            .filter(|k| **k < end)
            .map(|k| Segment {
                start: k.clone(),
                value: self.eval(k) - other.eval(k),
                slope: self.right_slope(k) - other.right_slope(k),
            })
            .collect();
        PiecewiseLinearFn { segments, end }
    }

    /// Smallest value over breakpoints `t >= from` (ties go to the smaller `t`).
    /// The minimum of a piecewise-linear function on `[from, ∞)` is attained
    /// at one of them whenever `from` is itself a breakpoint or zero.
    pub fn min_over_breakpoints(&self, from: &T) -> Option<(T, T)> {
        let mut best: Option<(T, T)> = None;
        for t in self.breakpoints().into_iter().filter(|t| t >= from) {
            let v = self.eval(&t);
            if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((t, v));
            }
        }
        best
    }

    pub fn cast<U: Scalar>(&self) -> PiecewiseLinearFn<U> {
        PiecewiseLinearFn {
            segments: self
                .segments
                .iter()
                .map(|s| Segment { start: s.start.cast(), value: s.value.cast(), slope: s.slope.cast() })
                .collect(),
            end: self.end.cast(),
        }
    }
}

impl<T: Real> PiecewiseLinearFn<T> {
    /// `∫_0^∞ g(t) t^{s-2} dt` integrated segment by segment in closed form,
    /// together with the sum of the absolute values of the pieces.
    pub fn mellin_kernel_integral(&self, s: &T) -> (T, T) {
        let one = T::one();
        let sm1 = s.clone() - one;
        let power = |t: &T, e: &T| if t.is_zero() { T::zero() } else { t.powf(e) };
        let mut total = T::zero();
        let mut magnitude = T::zero();
        for (i, seg) in self.segments.iter().enumerate() {
            let right = self.segments.get(i + 1).map_or_else(|| self.end.clone(), |n| n.start.clone());
            let left = seg.start.clone();
            let alpha = seg.value.clone() - seg.slope.clone() * left.clone();
            let beta = seg.slope.clone();
            let p1 = (power(&right, &sm1) - power(&left, &sm1)) / sm1.clone();
            let p2 = (power(&right, s) - power(&left, s)) / s.clone();
            let a = alpha * p1;
            let b = beta * p2;
            magnitude += a.abs() + b.abs();
            total += a + b;
        }
        (total, magnitude)
    }
}
