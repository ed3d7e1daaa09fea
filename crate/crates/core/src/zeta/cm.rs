//! Sampling test for complete monotonicity of `f = ζ / (s(s-1))`.
//!
//! A sample is `σ_n(s) = (-1)^n f^(n)(s) / n!`. It counts as a violation when
//! `σ < -tol`, `tol = 2^-(p-16) · magnitude`, and as unresolved when
//! `|σ| ≤ tol` without being exactly zero. Violations are confirmed at the
//! next precision up; unresolved samples are re-evaluated there and, if they
//! then turn negative, confirmed one precision higher still.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::majorize_hockey_stick;
use crate::scalar::{Precision, Real, Scalar};
use crate::verdict::{compare_le, Cmp, Outcome, Verdict, Witness};
use crate::with_precision;
use crate::zeta::stable::Prepared;
use crate::zeta::{zeta_at_one, ZetaPair, SIGN_SLACK_BITS};

pub(crate) const DEFAULT_TAIL_TERMS: usize = 64;

/// Points `s` with `s - 1` geometrically spaced between `s_min - 1` and
/// `s_max - 1`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { s_min: 1.001, s_max: 1000.0, points: 64 }
    }
}

impl Grid {
    pub fn new(s_min: f64, s_max: f64, points: usize) -> Result<Self> {
        let grid = Grid { s_min, s_max, points };
        grid.check()?;
        Ok(grid)
    }

    fn check(&self) -> Result<()> {
        if !(self.s_min.is_finite() && self.s_max.is_finite() && self.s_min > 1.0 && self.s_max >= self.s_min) {
            return Err(Error::Config(format!(
                "grid bounds must satisfy 1 < s_min <= s_max, got [{}, {}]",
                self.s_min, self.s_max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let (lo, hi) = (self.s_min - 1.0, self.s_max - 1.0);
        match self.points {
            0 => Vec::new(),
            1 => vec![self.s_min],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.s_max
                    } else {
                        1.0 + lo * (hi / lo).powf(i as f64 / (n - 1) as f64)
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmConfig {
    pub order_max: usize,
    pub grid: Grid,
    pub precision: Precision,
    /// Geometric tail terms expanded before the closed-form remainder.
    pub tail_terms: usize,
    /// Points evaluated after the grid, in the given order.
    pub extra_points: Vec<f64>,
    /// Keep every sample in the report.
    pub keep_samples: bool,
}

impl Default for CmConfig {
    fn default() -> Self {
        CmConfig {
            order_max: 24,
            grid: Grid::default(),
            precision: Precision::P128,
            tail_terms: DEFAULT_TAIL_TERMS,
            extra_points: Vec::new(),
            keep_samples: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleLocation {
    pub order: usize,
    pub s: f64,
}

/// `(-1)^n f^(n)(s)` at one point, in scientific notation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmSample {
    pub s: f64,
    pub order: usize,
    pub value: String,
}

/// The hockey-stick side of a refutation: where `g = H_b - H_a` is most
/// negative, and the Mellin variable `u = -ln t` at which the kernel
/// `uⁿ e^{-u(s-1)}` of the `n`-th derivative peaks when `s = 1 + n/u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectRoute {
    pub t: String,
    pub g: String,
    pub u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub order_max: usize,
    pub grid: Grid,
    pub targeted_points: usize,
    pub precision_bits: u32,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmReport {
    /// `Holds` means no violation was found, not that `f` is completely monotone.
    pub verdict: Verdict<f64>,
    pub orders_checked: usize,
    pub grid: Vec<f64>,
    pub precision_bits: u32,
    /// Smallest `σ / magnitude` over all samples.
    pub min_relative: Option<f64>,
    /// `(-1)^n f^(n)(s)` where `min_relative` is attained.
    pub min_signed_value: Option<String>,
    pub min_location: Option<SampleLocation>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<CmSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct: Option<DirectRoute>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageSummary>,
}

impl CmReport {
    /// Samples as CSV with header `s,n,value`.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("s,n,value\n");
        for c in &self.samples {
            out.push_str(&format!("{},{},{}\n", c.s, c.order, c.value));
        }
        out
    }
}

struct PointEval<T: Scalar> {
    sigma: Vec<T>,
    magnitude: Vec<T>,
}

fn eval_point<T: Real>(prepared: &Prepared<T>, s: f64, order: usize) -> PointEval<T> {
    let bj = prepared.f_jet(&T::from_f64_lossless(s), order);
    let sigma = bj
        .jet
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| if n % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    PointEval { sigma, magnitude: bj.magnitude }
}

fn classify<T: Real>(sigma: &T, magnitude: &T) -> Cmp<T> {
    compare_le(&T::zero(), sigma, &T::tolerance(magnitude, SIGN_SLACK_BITS))
}

fn relative<T: Real>(sigma: &T, magnitude: &T) -> f64 {
    if magnitude.is_zero() {
        0.0
    } else {
        (sigma.clone() / magnitude.clone()).to_f64()
    }
}

fn signed_derivative<T: Real>(sigma: &T, n: usize) -> T {
    (1..=n).fold(sigma.clone(), |acc, k| acc * T::of_usize(k))
}

fn single<T: Real>(prepared: &Prepared<T>, s: f64, n: usize) -> (T, T) {
    let e = eval_point(prepared, s, n);
    (e.sigma[n].clone(), e.magnitude[n].clone())
}

fn witness<T: Real>(n: usize, s: f64, sigma: &T, magnitude: &T) -> Witness<f64> {
    Witness::Derivative {
        order: n,
        s,
        value: signed_derivative(sigma, n).to_sci(20),
        relative: relative(sigma, magnitude),
    }
}

fn run<T: Real, S: Scalar>(pair: &ZetaPair<S>, config: &CmConfig, points: &[f64]) -> CmReport {
    let order = config.order_max;
    let prepared: Prepared<T> = Prepared::new(pair, config.tail_terms);
    let evals: Vec<PointEval<T>> = points.par_iter().map(|s| eval_point(&prepared, *s, order)).collect();

    let mut candidates: Vec<(usize, usize, bool)> = Vec::new();
    let mut min: Option<(f64, usize, usize)> = None;
    let mut samples = Vec::new();
    for n in 0..=order {
        for (i, e) in evals.iter().enumerate() {
            let (sigma, mag) = (&e.sigma[n], &e.magnitude[n]);
            let r = relative(sigma, mag);
            if min.is_none_or(|(m, _, _)| r < m) {
                min = Some((r, n, i));
            }
            if config.keep_samples {
                samples.push(CmSample { s: points[i], order: n, value: signed_derivative(sigma, n).to_sci(17) });
            }
            match classify(sigma, mag) {
                Cmp::Satisfied => {}
                Cmp::Violated => candidates.push((n, i, true)),
                Cmp::Unresolved(_) => candidates.push((n, i, false)),
            }
        }
    }

    let mut wider: Option<Prepared<T::Wider>> = None;
    let mut widest: Option<Prepared<<T::Wider as Real>::Wider>> = None;
    let mut gap: Option<f64> = None;
    let mut found: Option<Witness<f64>> = None;
    for (n, i, violated) in candidates {
        let s = points[i];
        let w = wider.get_or_insert_with(|| Prepared::new(pair, config.tail_terms));
        let (ws, wm) = single(w, s, n);
        match (violated, classify(&ws, &wm)) {
            (true, Cmp::Violated) => {
                found = Some(witness(n, s, &evals[i].sigma[n], &evals[i].magnitude[n]));
                break;
            }
            (false, Cmp::Violated) => {
                let ww = widest.get_or_insert_with(|| Prepared::new(pair, config.tail_terms));
                let (vs, vm) = single(ww, s, n);
                if let Cmp::Violated = classify(&vs, &vm) {
                    found = Some(witness(n, s, &ws, &wm));
                    break;
                }
                gap.get_or_insert(relative(&vs, &vm).abs());
            }
            (_, Cmp::Unresolved(_)) => {
                gap.get_or_insert(relative(&ws, &wm).abs());
            }
            (_, Cmp::Satisfied) => {}
        }
    }

    let verdict = match (found, gap) {
        (Some(w), _) => Verdict::fails(w),
        (None, Some(gap)) => Verdict::Inconclusive { gap },
        (None, None) => Verdict::Holds,
    };
    let mut notes = Vec::new();
    if !zeta_at_one(pair).holds() {
        notes.push("total masses differ, so zeta(1) != 0 and the criterion does not apply".to_string());
    }
    if pair.has_entries_above_one() {
        notes.push("entries exceed 1: majorization does not imply complete monotonicity here".to_string());
    }
    let (min_relative, min_signed_value, min_location) = match min {
        None => (None, None, None),
        Some((r, n, i)) => (
            Some(r),
            Some(signed_derivative(&evals[i].sigma[n], n).to_sci(20)),
            Some(SampleLocation { order: n, s: points[i] }),
        ),
    };
    CmReport {
        verdict,
        orders_checked: order,
        grid: points.to_vec(),
        precision_bits: T::precision_bits(),
        min_relative,
        min_signed_value,
        min_location,
        notes,
        samples,
        direct: None,
        stages: Vec::new(),
    }
}

fn check_points(points: &[f64]) -> Result<()> {
    match points.iter().find(|s| !(s.is_finite() && **s > 1.0)) {
        Some(s) => Err(Error::Config(format!("evaluation point {s} is not in (1, ∞)"))),
        None => Ok(()),
    }
}

/// Samples `(-1)^n f^(n)(s)` for `n ≤ order_max` over the grid and the extra
/// points. The witness of a `Fails` verdict is the violation with the
/// smallest `(n, point index)`, rechecked at the next precision up.
pub fn cm_test<S: Scalar>(pair: &ZetaPair<S>, config: &CmConfig) -> Result<CmReport> {
    config.grid.check()?;
    let mut points = config.grid.values();
    points.extend_from_slice(&config.extra_points);
    check_points(&points)?;
    Ok(with_precision!(config.precision, T => run::<T, S>(pair, config, &points)))
}

/// Limits for [`cm_refute_adaptive`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefuteBudget {
    pub max_order: usize,
    pub max_bits: u32,
    pub max_points: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub tail_terms: usize,
}

impl Default for RefuteBudget {
    fn default() -> Self {
        RefuteBudget {
            max_order: 64,
            max_bits: 512,
            max_points: 1024,
            s_min: 1.0 + 1e-6,
            s_max: 1e4,
            tail_terms: DEFAULT_TAIL_TERMS,
        }
    }
}

fn direct_route<S: Scalar>(pair: &ZetaPair<S>) -> Option<DirectRoute> {
    match majorize_hockey_stick(pair.a(), pair.b()).ok()?.witness()? {
        Witness::Threshold { t, value } => {
            let tf = t.to_f64();
            Some(DirectRoute {
                t: t.to_decimal(),
                g: value.to_decimal(),
                u: (tf > 0.0 && tf < 1.0).then(|| -tf.ln()),
            })
        }
        _ => None,
    }
}

/// Escalates order, grid density and range, and precision in three stages
/// until a violation is found. Stages add points `s = 1 + n/u` aimed at the
/// most negative value of `g`, where the `n`-th derivative kernel peaks.
/// Without a witness the last stage's verdict is returned.
pub fn cm_refute_adaptive<S: Scalar>(pair: &ZetaPair<S>, budget: &RefuteBudget) -> Result<CmReport> {
    Grid::new(budget.s_min, budget.s_max, 1)?;
    let direct = direct_route(pair);
    let clamp = |s: f64| s.clamp(budget.s_min, budget.s_max);
    let stages = [
        (24, 1.001, 1000.0, 64, 128),
        (40, 1.0001, 1e4, 256, 256),
        (budget.max_order, budget.s_min, budget.s_max, budget.max_points, budget.max_bits),
    ];
    let mut summaries = Vec::new();
    let mut last: Option<CmReport> = None;
    for (k, (order, lo, hi, points, bits)) in stages.into_iter().enumerate() {
        let order = order.min(budget.max_order);
        let points = points.min(budget.max_points);
        let precision = Precision::at_least(bits.min(budget.max_bits))?;
        let grid = Grid::new(clamp(lo), clamp(hi), points)?;
        let extra_points: Vec<f64> = match (k, direct.as_ref().and_then(|d| d.u)) {
            (0, _) | (_, None) => Vec::new(),
            (_, Some(u)) => (1..=order)
                .map(|n| 1.0 + n as f64 / u)
                .filter(|s| *s >= budget.s_min && *s <= budget.s_max)
                .collect(),
        };
        let config = CmConfig {
            order_max: order,
            grid: grid.clone(),
            precision,
            tail_terms: budget.tail_terms,
            extra_points,
            keep_samples: false,
        };
        let report = cm_test(pair, &config)?;
        summaries.push(StageSummary {
            order_max: order,
            grid,
            targeted_points: config.extra_points.len(),
            precision_bits: report.precision_bits,
            outcome: report.verdict.outcome(),
        });
        let done = report.verdict.is_fails();
        last = Some(report);
        if done {
            break;
        }
    }
    let mut report = last.expect("at least one stage");
    if !report.verdict.is_fails() {
        report.notes.push("no violation found within budget".to_string());
    }
    report.direct = direct;
    report.stages = summaries;
    Ok(report)
}
