//! Property suites run from a seed. Every suite draws its cases from its own
//! stream of the seeded generator before checking them in parallel, so the
//! report depends only on the seed and the case count.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::{
    counting_function, hockey_stick, hockey_stick_fn, majorize_hockey_stick, majorize_partial_sums,
    PiecewiseLinearFn,
};
use crate::random::{self, PairKind};
use crate::scalar::{Real, Scalar};
use crate::sequence::{Ell1Seq, ExactSeq, TailModel};
use crate::trumping::trump_check;
use crate::zeta::{
    cm_test, f_jet, f_jet_bounded, mellin_identity_check, power_sum, stieltjes_identity_check, CmConfig,
    ZetaPair,
};
use crate::{Exact, Mp128, Mp256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestConfig {
    pub seed: u64,
    pub cases: usize,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 1, cases: 100, threads: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    /// Hash of every generated case, for comparing case lists across runs.
    pub case_digest: String,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

type Check<C> = fn(&C) -> std::result::Result<(), String>;

fn suite<C: Serialize + Sync>(name: &str, cases: &[C], check: Check<C>, digest: &mut DefaultHasher) -> SuiteResult {
    name.hash(digest);
    serde_json::to_string(cases).expect("cases serialize").hash(digest);
    let outcomes: Vec<std::result::Result<(), String>> = cases.par_iter().map(check).collect();
    let mut failures = 0;
    let mut first_failure = None;
    for (i, o) in outcomes.into_iter().enumerate() {
        if let Err(msg) = o {
            failures += 1;
            first_failure.get_or_insert(format!("case {i}: {msg}"));
        }
    }
    SuiteResult { name: name.to_string(), checked: cases.len(), failures, first_failure }
}

fn q(n: i64, d: i64) -> Exact {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct PairCase {
    kind: PairKind,
    a: ExactSeq,
    b: ExactSeq,
}

fn pair_cases(seed: u64, stream: u64, n: usize, max_dim: usize) -> Vec<PairCase> {
    let mut rng = random::rng(seed, stream);
    (0..n)
        .map(|_| {
            let (kind, a, b) = random::pair(&mut rng, max_dim);
            PairCase { kind, a, b }
        })
        .collect()
}

fn equivalence(c: &PairCase) -> std::result::Result<(), String> {
    let p = ok(majorize_partial_sums(&c.a, &c.b))?;
    let h = ok(majorize_hockey_stick(&c.a, &c.b))?;
    ensure(p.outcome() == h.outcome(), || format!("partial sums {:?}, hockey stick {:?}", p, h))?;
    ensure(c.kind != PairKind::Majorized || p.holds(), || "majorized pair rejected".into())
}

#[derive(Serialize)]
struct PointCase {
    seq: ExactSeq,
    #[serde(with = "crate::scalar::serde_scalar::vec")]
    ts: Vec<Exact>,
}

fn pointwise(c: &PointCase) -> std::result::Result<(), String> {
    let h = hockey_stick_fn(&c.seq, 0).func;
    let a = counting_function(&c.seq, 0).func;
    for t in &c.ts {
        let direct = ok(hockey_stick(&c.seq, t))?;
        ensure(h.eval(t) == direct, || format!("H({t}) disagrees"))?;
        ensure(a.integral_from(t) == direct, || format!("∫A from {t} disagrees"))?;
    }
    Ok(())
}

fn breakpoint_minimum(c: &PairCase) -> std::result::Result<(), String> {
    let g = PiecewiseLinearFn::hockey_stick(&c.b.sorted_prefix()).sub(&PiecewiseLinearFn::hockey_stick(&c.a.sorted_prefix()));
    let Some((_, min)) = g.min_over_breakpoints(&Exact::from_integer(0.into())) else {
        return Ok(());
    };
    for k in 1..=200 {
        let t = q(k, 150);
        ensure(g.eval(&t) >= min, || format!("g({t}) below the breakpoint minimum"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct KCase {
    seq: ExactSeq,
    shuffled: ExactSeq,
    k: usize,
}

fn k_largest(c: &KCase) -> std::result::Result<(), String> {
    let top = c.seq.k_largest(c.k);
    ensure(top.windows(2).all(|w| w[0] >= w[1]), || "not non-increasing".into())?;
    ensure(top == c.shuffled.k_largest(c.k), || "depends on prefix order".into())?;
    if c.seq.has_zero_tail() {
        let mut pool: Vec<Exact> = c.seq.prefix().to_vec();
        for x in top.iter().filter(|x| x.is_positive()) {
            let i = pool.iter().position(|y| y == x).ok_or_else(|| format!("{x} is not an entry"))?;
            pool.swap_remove(i);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct TensorCase {
    x: ExactSeq,
    c: ExactSeq,
}

fn tensor_mass(t: &TensorCase) -> std::result::Result<(), String> {
    let m = ok(t.x.tensor(&t.c))?.total_mass();
    ensure(m == t.x.total_mass() * t.c.total_mass(), || "mass not multiplicative".into())
}

#[derive(Serialize)]
struct TailCase {
    seq: ExactSeq,
    m: usize,
}

fn tail_split(c: &TailCase) -> std::result::Result<(), String> {
    let head = (0..c.m).map(|j| c.seq.tail_term(j).unwrap()).fold(q(0, 1), |acc, x| acc + x);
    ensure(head + c.seq.tail_remainder(c.m) == c.seq.tail_mass(), || "tail terms do not close".into())
}

#[derive(Serialize)]
struct ChainCase {
    a: ExactSeq,
    b: ExactSeq,
    c: ExactSeq,
    uniform: ExactSeq,
}

fn order_sanity(c: &ChainCase) -> std::result::Result<(), String> {
    let holds = |x: &ExactSeq, y: &ExactSeq| majorize_partial_sums(x, y).map(|v| v.holds()).unwrap_or(false);
    ensure(holds(&c.a, &c.a), || "not reflexive".into())?;
    ensure(holds(&c.a, &c.b) && holds(&c.b, &c.c), || "chain construction broken".into())?;
    ensure(holds(&c.a, &c.c), || "not transitive".into())?;
    ensure(holds(&c.uniform, &c.c), || "uniform is not minimal".into())
}

fn cm_forward(c: &PairCase) -> std::result::Result<(), String> {
    let pair = ok(ZetaPair::new(c.a.clone(), c.b.clone()))?;
    let r = ok(cm_test(&pair, &CmConfig::default()))?;
    ensure(!r.verdict.is_fails(), || format!("violation reported for a ≺ b: {:?}", r.verdict))
}

const IDENTITY_POINTS: [f64; 5] = [1.5, 2.0, 5.0, 10.0, 50.0];

fn identities(c: &PairCase) -> std::result::Result<(), String> {
    let bound = Mp256::pow2(20 - 256);
    let pair = ok(ZetaPair::new(c.a.clone(), c.b.clone()))?;
    for s in IDENTITY_POINTS {
        let s = Mp256::from_f64_lossless(s);
        for seq in [&c.a, &c.b] {
            let r = ok(stieltjes_identity_check(seq, &s))?;
            ensure(r.relative <= bound, || format!("Stieltjes residual {} at s={s}", r.relative.to_sci(6)))?;
        }
        let r = ok(mellin_identity_check(&pair, &s))?;
        ensure(r.relative <= bound, || format!("Mellin residual {} at s={s}", r.relative.to_sci(6)))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JetCase {
    a: ExactSeq,
    b: ExactSeq,
    s: f64,
}

/// Central differences for orders 1..=3 of `value` at `s`.
pub fn central_differences<T: Real>(value: impl Fn(&T) -> T, s: &T, h: &T) -> [T; 3] {
    let at = |k: i32| value(&(s.clone() + h.clone() * T::from_i32(k).unwrap()));
    let two = T::from_i32(2).unwrap();
    let (m2, m1, p1, p2) = (at(-2), at(-1), at(1), at(2));
    let d1 = (p1.clone() - m1.clone()) / (two.clone() * h.clone());
    let d2 = (p1.clone() - two.clone() * at(0) + m1.clone()) / (h.clone() * h.clone());
    let d3 = (p2 - two.clone() * p1 + two.clone() * m1 - m2) / (two * h.clone() * h.clone() * h.clone());
    [d1, d2, d3]
}

/// Relative agreement `|fd - jet| ≤ 10⁻⁶ max(|jet|, floor)`.
pub fn agree<T: Real>(fd: &T, jet: &T, floor: &T) -> bool {
    let scale = T::max_of(jet.abs(), floor.clone());
    (fd.clone() - jet.clone()).abs() <= scale * T::from_f64_lossless(1e-6)
}

fn jets(c: &JetCase) -> std::result::Result<(), String> {
    type T = Mp256;
    let s = T::from_f64_lossless(c.s);
    let h = T::pow2(-40);
    let floor = T::pow2(-100);
    let pair = ok(ZetaPair::new(c.a.clone(), c.b.clone()))?;
    let ps = ok(power_sum::<T, _>(&c.b, &s, 3))?;
    let fd = central_differences(|x: &T| power_sum::<T, _>(&c.b, x, 0).unwrap().value().clone(), &s, &h);
    for k in 1..=3 {
        ensure(agree(&fd[k - 1], &ps.derivative(k), &floor), || format!("power sum order {k}"))?;
    }
    let f = ok(f_jet::<T, _>(&pair, &s, 3))?;
    let fd = central_differences(|x: &T| f_jet::<T, _>(&pair, x, 0).unwrap().value().clone(), &s, &h);
    for k in 1..=3 {
        ensure(agree(&fd[k - 1], &f.derivative(k), &floor), || format!("f order {k}"))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TrumpCase {
    x: ExactSeq,
    y: ExactSeq,
    c: ExactSeq,
}

fn trumping(t: &TrumpCase) -> std::result::Result<(), String> {
    let plain = ok(majorize_partial_sums(&t.x, &t.y))?;
    let identity = ok(trump_check(&t.x, &t.y, &Ell1Seq::unit()))?;
    ensure(plain == identity, || "identity catalyst differs from the plain check".into())?;
    let with_c = ok(trump_check(&t.x, &t.y, &t.c))?;
    ensure(!plain.holds() || with_c.holds(), || "catalyst broke majorization".into())?;
    let scaled = ok(trump_check(&t.x, &t.y, &t.c.scaled(&q(3, 2))))?;
    ensure(with_c.outcome() == scaled.outcome(), || "verdict depends on catalyst scale".into())
}

fn invariance(c: &PairCase) -> std::result::Result<(), String> {
    let mut shuffled = c.a.prefix().to_vec();
    shuffled.reverse();
    shuffled.push(q(0, 1));
    shuffled.rotate_right(1);
    let padded = Ell1Seq::new(shuffled, TailModel::Zero);
    let p1 = ok(ZetaPair::new(c.a.clone(), c.b.clone()))?;
    let p2 = ok(ZetaPair::new(padded, c.b.clone()))?;
    let s = Mp128::from_f64_lossless(2.5);
    let j1 = ok(f_jet_bounded::<Mp128, _>(&p1, &s, 6, 64))?;
    let j2 = ok(f_jet_bounded::<Mp128, _>(&p2, &s, 6, 64))?;
    ensure(j1.jet == j2.jet, || "f changes under permutation and zero padding".into())
}

/// Runs every suite. `cases = 0` yields a trivially passing report.
pub fn run(config: &SelftestConfig) -> Result<SelftestReport> {
    let work = || {
        let seed = config.seed;
        let n = config.cases;
        let mut digest = DefaultHasher::new();
        let mut suites = Vec::new();

        let pairs = pair_cases(seed, 1, n, 12);
        suites.push(suite("partial_sums_vs_hockey_stick", &pairs, equivalence, &mut digest));
        suites.push(suite("breakpoint_minimum", &pairs, breakpoint_minimum, &mut digest));

        let mut rng = random::rng(seed, 2);
        let points: Vec<PointCase> = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=12);
                let seq = Ell1Seq::finite(random::distribution(&mut rng, d, 100));
                let ts = (0..20).map(|_| q(rng.gen_range(1..=1100), 1000)).collect();
                PointCase { seq, ts }
            })
            .collect();
        suites.push(suite("hockey_stick_pointwise", &points, pointwise, &mut digest));

        let mut rng = random::rng(seed, 3);
        let ks: Vec<KCase> = (0..n)
            .map(|_| {
                let seq = if rng.gen_bool(0.5) {
                    random::geometric(&mut rng)
                } else {
                    let d = rng.gen_range(1..=12);
                    Ell1Seq::finite(random::distribution(&mut rng, d, 100))
                };
                let mut prefix = seq.prefix().to_vec();
                prefix.shuffle(&mut rng);
                let shuffled = Ell1Seq::new(prefix, seq.tail().clone());
                KCase { seq, shuffled, k: rng.gen_range(1..=20) }
            })
            .collect();
        suites.push(suite("k_largest", &ks, k_largest, &mut digest));

        let mut rng = random::rng(seed, 4);
        let tensors: Vec<TensorCase> = (0..n)
            .map(|_| {
                let (dx, dc) = (rng.gen_range(1..=8), rng.gen_range(1..=4));
                TensorCase {
                    x: Ell1Seq::finite(random::distribution(&mut rng, dx, 100)),
                    c: Ell1Seq::finite(random::distribution(&mut rng, dc, 100)),
                }
            })
            .collect();
        suites.push(suite("tensor_mass", &tensors, tensor_mass, &mut digest));

        let mut rng = random::rng(seed, 5);
        let tails: Vec<TailCase> =
            (0..n).map(|_| TailCase { seq: random::geometric(&mut rng), m: rng.gen_range(0..=50) }).collect();
        suites.push(suite("geometric_tail_split", &tails, tail_split, &mut digest));

        let mut rng = random::rng(seed, 6);
        let chains: Vec<ChainCase> = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=10);
                let c = random::distribution(&mut rng, d, 100);
                let b = random::t_transform(&mut rng, &c, 3);
                let a = random::t_transform(&mut rng, &b, 3);
                let du = rng.gen_range(d..=12);
                let uniform = vec![q(1, du as i64); du];
                ChainCase {
                    a: Ell1Seq::finite(a),
                    b: Ell1Seq::finite(b),
                    c: Ell1Seq::finite(c),
                    uniform: Ell1Seq::finite(uniform),
                }
            })
            .collect();
        suites.push(suite("order_sanity", &chains, order_sanity, &mut digest));

        let majorized: Vec<PairCase> = {
            let mut rng = random::rng(seed, 8);
            (0..n)
                .map(|_| {
                    let d = rng.gen_range(1..=8);
                    let b = random::distribution(&mut rng, d, 100);
                    let a = random::t_transform(&mut rng, &b, 3);
                    PairCase { kind: PairKind::Majorized, a: Ell1Seq::finite(a), b: Ell1Seq::finite(b) }
                })
                .collect()
        };
        suites.push(suite("cm_forward_direction", &majorized, cm_forward, &mut digest));

        let equal: Vec<PairCase> = pair_cases(seed, 9, 4 * n, 12)
            .into_iter()
            .filter(|c| c.kind != PairKind::Unconstrained)
            .take(n)
            .collect();
        suites.push(suite("integral_identities", &equal, identities, &mut digest));
        suites.push(suite("permutation_and_padding", &equal, invariance, &mut digest));

        let mut rng = random::rng(seed, 10);
        let jet_cases: Vec<JetCase> = equal
            .iter()
            .map(|c| JetCase { a: c.a.clone(), b: c.b.clone(), s: rng.gen_range(120..=600) as f64 / 100.0 })
            .collect();
        suites.push(suite("jets_vs_finite_differences", &jet_cases, jets, &mut digest));

        let mut rng = random::rng(seed, 11);
        let trumps: Vec<TrumpCase> = pair_cases(seed, 12, 4 * n, 8)
            .into_iter()
            .filter(|c| c.kind != PairKind::Unconstrained)
            .take(n)
            .map(|p| {
                let d = rng.gen_range(1..=4);
                TrumpCase { x: p.a, y: p.b, c: Ell1Seq::finite(random::distribution(&mut rng, d, 100)) }
            })
            .collect();
        suites.push(suite("trumping", &trumps, trumping, &mut digest));

        let passed = suites.iter().all(|s| s.failures == 0);
        SelftestReport { seed, cases: n, case_digest: format!("{:016x}", digest.finish()), suites, passed }
    };
    if config.threads > 0 {
        Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work))
    } else {
        Ok(work())
    }
}
