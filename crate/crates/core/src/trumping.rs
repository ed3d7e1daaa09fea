//! Trumping: `x` is trumped by `y` when `x ⊗ c ≺ y ⊗ c` for some catalyst
//! `c` with all entries positive. Catalysts are searched over finite grids
//! on the probability simplex, so a failed search is never a refutation.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::majorize_partial_sums;
use crate::scalar::Scalar;
use crate::sequence::Ell1Seq;
use crate::verdict::{Verdict, Witness};
use crate::with_precision;
use crate::zeta::{cm_test, zeta_at_one, zeta_positivity, CmConfig, Grid, ZetaPair};

/// `x ⊗ c ≺ y ⊗ c`, decided by partial sums.
pub fn trump_check<S: Scalar>(x: &Ell1Seq<S>, y: &Ell1Seq<S>, c: &Ell1Seq<S>) -> Result<Verdict<S>> {
    for s in [x, y, c] {
        s.ensure_valid()?;
        if !s.has_zero_tail() {
            return Err(Error::TailedOperand);
        }
    }
    if c.prefix().is_empty() || c.prefix().iter().any(|e| !e.is_positive()) {
        return Err(Error::NonPositiveCatalyst);
    }
    majorize_partial_sums(&x.tensor(c)?, &y.tensor(c)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalystSearchConfig {
    pub min_dim: usize,
    pub max_dim: usize,
    /// Catalyst entries are multiples of `1 / resolution`.
    pub resolution: usize,
    /// Largest number of candidates checked.
    pub budget: usize,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    /// Candidates checked per parallel batch.
    pub batch: usize,
}

impl Default for CatalystSearchConfig {
    fn default() -> Self {
        CatalystSearchConfig { min_dim: 2, max_dim: 4, resolution: 20, budget: 100_000, threads: 0, batch: 256 }
    }
}

impl CatalystSearchConfig {
    fn check(&self) -> Result<()> {
        if self.min_dim < 2 || self.max_dim < self.min_dim {
            return Err(Error::Config("catalyst dimensions must satisfy 2 <= min <= max".into()));
        }
        if self.resolution < 2 {
            return Err(Error::Config("catalyst grid resolution must be at least 2".into()));
        }
        if self.batch == 0 {
            return Err(Error::Config("catalyst batch size must be positive".into()));
        }
        Ok(())
    }
}

/// Non-increasing compositions of `total` into `parts` positive integers,
/// in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct SimplexGrid {
    current: Option<Vec<usize>>,
    total: usize,
}

impl SimplexGrid {
    pub fn new(total: usize, parts: usize) -> Self {
        let current = (parts >= 1 && total >= parts).then(|| Self::smallest_fill(total, parts));
        SimplexGrid { current, total }
    }

    /// Lexicographically smallest non-increasing fill of `rem` into `k` parts.
    fn smallest_fill(mut rem: usize, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        for left in (1..=k).rev() {
            let part = rem.div_ceil(left);
            out.push(part);
            rem -= part;
        }
        out
    }

    fn advance(&self, p: &[usize]) -> Option<Vec<usize>> {
        let d = p.len();
        let mut prefix_sum: usize = p.iter().sum();
        for i in (0..d.saturating_sub(1)).rev() {
            prefix_sum -= p[i + 1];
            let bumped = p[i] + 1;
            if i > 0 && bumped > p[i - 1] {
                continue;
            }
            let rem = self.total - prefix_sum - 1;
            let k = d - 1 - i;
            if rem < k {
                continue;
            }
            let mut next = p[..i].to_vec();
            next.push(bumped);
            next.extend(Self::smallest_fill(rem, k));
            return Some(next);
        }
        None
    }
}

impl Iterator for SimplexGrid {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        self.current = self.advance(&out);
        Some(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TrumpReport<S: Scalar> {
    pub verdict: Verdict<S>,
    pub catalyst: Option<Ell1Seq<S>>,
    pub candidates_tried: usize,
    /// The plain check `x ≺ y`, with its witness when it fails.
    pub plain: Verdict<S>,
}

fn catalyst_from<S: Scalar>(parts: &[usize], total: usize) -> Ell1Seq<S> {
    let denom = S::of_usize(total);
    Ell1Seq::finite(parts.iter().map(|p| S::of_usize(*p) / denom.clone()).collect())
}

/// Looks for a catalyst `c` with `x ⊗ c ≺ y ⊗ c`. Candidates are taken in
/// canonical order (dimension ascending, then ascending lexicographic order
/// of the sorted entries) and the first success in that order is reported,
/// whatever the number of threads.
pub fn catalyst_search<S: Scalar>(
    x: &Ell1Seq<S>,
    y: &Ell1Seq<S>,
    config: &CatalystSearchConfig,
) -> Result<TrumpReport<S>> {
    config.check()?;
    for s in [x, y] {
        s.ensure_valid()?;
        if !s.has_zero_tail() {
            return Err(Error::TailedOperand);
        }
    }
    let plain = majorize_partial_sums(x, y)?;
    if let Some(w @ Witness::Mass { .. }) = plain.witness() {
        return Ok(TrumpReport { verdict: Verdict::fails(w.clone()), catalyst: None, candidates_tried: 0, plain });
    }
    if plain.holds() {
        return Ok(TrumpReport { verdict: Verdict::Holds, catalyst: Some(Ell1Seq::unit()), candidates_tried: 1, plain });
    }

    let search = || -> Result<(Option<Ell1Seq<S>>, usize)> {
        let mut tried = 0;
        let mut candidates = (config.min_dim..=config.max_dim)
            .flat_map(|d| SimplexGrid::new(config.resolution, d))
            .take(config.budget);
        loop {
            let batch: Vec<Vec<usize>> = candidates.by_ref().take(config.batch).collect();
            if batch.is_empty() {
                return Ok((None, tried));
            }
            let results: Vec<Result<bool>> = batch
                .par_iter()
                .map(|p| Ok(trump_check(x, y, &catalyst_from::<S>(p, config.resolution))?.holds()))
                .collect();
            for (p, r) in batch.iter().zip(results) {
                tried += 1;
                if r? {
                    return Ok((Some(catalyst_from(p, config.resolution)), tried));
                }
            }
        }
    };
    let (catalyst, tried) = if config.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(search)?
    } else {
        search()?
    };
    let verdict = match catalyst {
        Some(_) => Verdict::Holds,
        None => Verdict::Inconclusive { gap: S::zero() },
    };
    Ok(TrumpReport { verdict, catalyst, candidates_tried: tried, plain })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// Grid on which the sign of `ζ` is sampled.
    pub positivity_grid: Grid,
    pub search: CatalystSearchConfig,
    /// Used for the product pair; its precision also applies to the sign of `ζ`.
    pub cm: CmConfig,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            positivity_grid: Grid { s_min: 1.001, s_max: 1000.0, points: 64 },
            search: CatalystSearchConfig::default(),
            cm: CmConfig::default(),
        }
    }
}

/// One evidence record about the catalytic reformulation of positivity of `ζ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Evidence<S: Scalar> {
    pub a: Ell1Seq<S>,
    pub b: Ell1Seq<S>,
    pub zeta_at_one: Verdict<S>,
    pub positivity: Option<Verdict<f64>>,
    pub catalyst_found: bool,
    pub catalyst: Option<Ell1Seq<S>>,
    pub candidates_tried: usize,
    /// Complete-monotonicity test of `ζ ζ₂ / (s(s-1))` on the product pair.
    pub product_cm: Option<Verdict<f64>>,
    /// Positivity held on the grid but no catalyst turned up. The search is
    /// incomplete, so this marks a case worth a closer look, nothing more.
    pub potential_counterexample_candidate: bool,
    pub notes: Vec<String>,
}

/// Runs positivity of `ζ` on a grid, then a catalyst search for `a` trumped
/// by `b`, then the complete-monotonicity test on `(a ⊗ c, b ⊗ c)`.
pub fn conjecture_probe<S: Scalar>(pair: &ZetaPair<S>, config: &ProbeConfig) -> Result<Evidence<S>> {
    let mut ev = Evidence {
        a: pair.a().clone(),
        b: pair.b().clone(),
        zeta_at_one: zeta_at_one(pair),
        positivity: None,
        catalyst_found: false,
        catalyst: None,
        candidates_tried: 0,
        product_cm: None,
        potential_counterexample_candidate: false,
        notes: Vec::new(),
    };
    if !ev.zeta_at_one.holds() {
        ev.notes.push("conjecture hypothesis unmet: zeta(1) != 0".into());
        return Ok(ev);
    }
    let grid = config.positivity_grid.values();
    let positivity = with_precision!(config.cm.precision, T => zeta_positivity::<T, S>(pair, &grid))?;
    let positive = positivity.holds();
    let negative = positivity.is_fails();
    ev.positivity = Some(positivity);
    if negative {
        ev.notes.push("conjecture hypothesis unmet: zeta changes sign on (1, inf)".into());
        return Ok(ev);
    }
    if !positive {
        ev.notes.push("positivity of zeta not established on the grid".into());
    }
    if !(pair.a().has_zero_tail() && pair.b().has_zero_tail()) {
        ev.notes.push("catalyst search skipped: geometric tails cannot be tensored".into());
        return Ok(ev);
    }
    let search = catalyst_search(pair.a(), pair.b(), &config.search)?;
    ev.candidates_tried = search.candidates_tried;
    match search.catalyst {
        Some(c) => {
            let product = ZetaPair::new(pair.a().tensor(&c)?, pair.b().tensor(&c)?)?;
            ev.product_cm = Some(cm_test(&product, &config.cm)?.verdict);
            ev.catalyst_found = true;
            ev.catalyst = Some(c);
        }
        None => {
            ev.potential_counterexample_candidate = positive;
            ev.notes.push("no catalyst found within budget".into());
        }
    }
    Ok(ev)
}

/// Appends one JSON line (sorted keys) to an evidence log.
pub fn append_evidence<S: Scalar>(path: &Path, evidence: &Evidence<S>) -> std::io::Result<()> {
    let value = serde_json::to_value(evidence)?;
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    writeln!(file, "{}", serde_json::to_string(&value)?)
}
