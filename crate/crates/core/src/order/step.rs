use crate::scalar::Scalar;

/// Non-increasing integer step function on `(0, ∞)`, zero past the last
/// breakpoint. With breakpoints `t_0 < ... < t_{m-1}` the value is
/// `values[0]` on `(0, t_0]`, `values[i]` on `(t_{i-1}, t_i]` and
/// `values[m] = 0` beyond.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFn<T: Scalar> {
    breakpoints: Vec<T>,
    values: Vec<u64>,
}

impl<T: Scalar> StepFn<T> {
    /// Counting function `x ↦ #{entries ≥ x}` of a list of positive entries.
    pub fn counting(entries: &[T]) -> Self {
        let mut sorted: Vec<T> = entries.iter().filter(|x| x.is_positive()).cloned().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("comparable entries"));
        let mut breakpoints: Vec<T> = Vec::new();
        let mut values = vec![sorted.len() as u64];
        for (i, x) in sorted.iter().enumerate() {
            if breakpoints.last() == Some(x) {
                *values.last_mut().unwrap() = (sorted.len() - i - 1) as u64;
            } else {
                breakpoints.push(x.clone());
                values.push((sorted.len() - i - 1) as u64);
            }
        }
        StepFn { breakpoints, values }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Value at `x > 0`.
    pub fn eval(&self, x: &T) -> u64 {
        let i = self.breakpoints.partition_point(|t| t < x);
        self.values[i]
    }

    /// `(left, right, value)` for each bounded piece, left end of the first at 0.
    pub fn pieces(&self) -> impl Iterator<Item = (T, T, u64)> + '_ {
        self.breakpoints.iter().enumerate().map(move |(i, right)| {
            let left = if i == 0 { T::zero() } else { self.breakpoints[i - 1].clone() };
            (left, right.clone(), self.values[i])
        })
    }

    /// `∫_t^∞ value(x) dx`, exact.
    pub fn integral_from(&self, t: &T) -> T {
        self.pieces()
            .filter(|(_, right, _)| right > t)
            .map(|(left, right, v)| {
                let lo = T::max_of(left, t.clone());
                (right - lo) * T::of_usize(v as usize)
            })
            .fold(T::zero(), |a, x| a + x)
    }
}
