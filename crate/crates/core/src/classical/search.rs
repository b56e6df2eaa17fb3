//! Searches over classical strategies with two shared bits.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::lp::{optimal_distribution, MarginalConstraint};
use super::strategy::{evaluate_strategy, ClassicalStrategy, SharedDistribution};
use crate::bits::input_bit;
use crate::error::{RacError, Result};
use crate::evaluation::EvaluationResult;
use crate::parallel::with_workers;
use crate::qstate::Bit;
use crate::rng::SplitMix64;

/// An improvement smaller than this does not replace the incumbent, so the
/// earliest strategy in enumeration order wins ties.
const IMPROVEMENT_TOL: f64 = 1e-12;
/// Certified bound used once every encoding reuses an encoding function.
pub const PIGEONHOLE_BOUND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Pruned,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncodingFilter {
    #[default]
    All,
    /// Only encodings where two inputs share an encoding function.
    DuplicateOnly,
}

/// 2^m → 1 code built from three 2→1 codes: `inner[0]` encodes `x₁x₂` into `c₁`,
/// `inner[1]` encodes `x₃x₄` into `c₂`, and `outer` encodes `c₁c₂` into the sent
/// bit. Bob decodes the outer code to estimate `c₁` or `c₂` and then applies the
/// matching inner decoder. Each component has its own pair of shared bits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcatenatedCode {
    pub inner: [ClassicalStrategy; 2],
    pub outer: ClassicalStrategy,
    /// Distributions for `inner[0]`, `inner[1]`, `outer`.
    pub distributions: [SharedDistribution; 3],
}

impl ConcatenatedCode {
    pub fn new(
        inner: [ClassicalStrategy; 2],
        outer: ClassicalStrategy,
        distributions: [SharedDistribution; 3],
    ) -> Result<Self> {
        if inner.iter().chain(std::iter::once(&outer)).any(|s| s.n() != 2) {
            return Err(RacError::InvalidArgument("concatenation components must be 2->1 codes".into()));
        }
        Ok(Self { inner, outer, distributions })
    }

    /// Exact success table over all six shared bits.
    pub fn evaluate(&self) -> EvaluationResult {
        let [a, b] = &self.inner;
        let o = &self.outer;
        let [pa, pb, po] = &self.distributions;
        let n = 4;
        let mut table = vec![vec![0.0; n]; 16];
        for (x, row) in table.iter_mut().enumerate() {
            let (left, right) = (x >> 2, x & 3);
            for bits in 0..64u32 {
                let r = |k: u32| ((bits >> k) & 1) as Bit;
                let (ra1, rb1, ra2, rb2, ra3, rb3) = (r(0), r(1), r(2), r(3), r(4), r(5));
                let w = pa.p(ra1, rb1) * pb.p(ra2, rb2) * po.p(ra3, rb3);
                if w == 0.0 {
                    continue;
                }
                let c1 = a.encode(left, ra1);
                let c2 = b.encode(right, ra2);
                let c = o.encode(((c1 << 1) | c2) as usize, ra3);
                let est1 = o.decode(1, c, rb3);
                let est2 = o.decode(2, c, rb3);
                let guesses =
                    [a.decode(1, est1, rb1), a.decode(2, est1, rb1), b.decode(1, est2, rb2), b.decode(2, est2, rb2)];
                for (k, g) in guesses.iter().enumerate() {
                    if *g == input_bit(x, k + 1, n) {
                        row[k] += w;
                    }
                }
            }
        }
        EvaluationResult::from_table(n, table)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BestCode {
    Single { strategy: ClassicalStrategy, distribution: SharedDistribution },
    Concatenated(ConcatenatedCode),
}

impl BestCode {
    pub fn evaluate(&self) -> EvaluationResult {
        match self {
            BestCode::Single { strategy, distribution } => evaluate_strategy(strategy, distribution),
            BestCode::Concatenated(code) => code.evaluate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub constraint: MarginalConstraint,
    pub search_mode: SearchMode,
    pub best: BestCode,
    pub best_p_min: f64,
    pub strategies_examined: u64,
    /// Strategies certified at `≤ ½` by the pigeonhole argument without an LP.
    pub strategies_pruned: u64,
    pub certified_upper_bound: Option<f64>,
    pub spot_checks: u64,
    pub spot_check_max: Option<f64>,
}

impl SearchReport {
    /// Re-evaluates the reported best code from scratch.
    pub fn reevaluate(&self) -> f64 {
        self.best.evaluate().p_min()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mode = match self.search_mode {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::Pruned => "pruned",
            SearchMode::Sampled => "sampled",
        };
        let _ = writeln!(out, "{:<24} {}", "n", self.n);
        let _ = writeln!(out, "{:<24} {}", "constraint", self.constraint);
        let _ = writeln!(out, "{:<24} {mode}", "search mode");
        let _ = writeln!(out, "{:<24} {}", "strategies examined", self.strategies_examined);
        let _ = writeln!(out, "{:<24} {}", "strategies pruned", self.strategies_pruned);
        let _ = writeln!(out, "{:<24} {:.12}", "best p_min", self.best_p_min);
        if let Some(b) = self.certified_upper_bound {
            let _ = writeln!(out, "{:<24} {b}", "certified upper bound");
        }
        if let Some(m) = self.spot_check_max {
            let _ = writeln!(out, "{:<24} {} (max {m:.12})", "spot checks", self.spot_checks);
        }
        match &self.best {
            BestCode::Single { strategy, distribution } => {
                let _ = writeln!(out, "{:<24} {distribution}", "best distribution");
                let _ = writeln!(out, "best strategy:");
                for x in 0..1usize << strategy.n() {
                    let _ = writeln!(
                        out,
                        "  x={}  c(x, r_a)={:?}",
                        crate::bits::input_label(x, strategy.n()),
                        strategy.encoding_fn(x).table()
                    );
                }
                for i in 1..=strategy.n() {
                    let _ = writeln!(out, "  b_{i}[c][r_b]={:?}", strategy.decoding_table(i));
                }
            }
            BestCode::Concatenated(code) => {
                for (name, d) in ["inner 1", "inner 2", "outer"].iter().zip(&code.distributions) {
                    let _ = writeln!(out, "{:<24} {d}", format!("{name} distribution"));
                }
            }
        }
        out
    }
}

fn encoding_digits_unique(encoding_index: u64, inputs: usize) -> bool {
    let mut used = [false; 4];
    (0..inputs).all(|x| !std::mem::replace(&mut used[((encoding_index >> (2 * x)) & 3) as usize], true))
}

struct Candidate {
    p_min: f64,
    strategy: ClassicalStrategy,
    distribution: SharedDistribution,
}

/// Best strategy over every decoding for one fixed encoding.
fn best_for_encoding(n: usize, encoding_index: u64, constraint: MarginalConstraint) -> (Candidate, u64) {
    let decodings = 1u64 << (4 * n);
    let mut best: Option<Candidate> = None;
    for d in 0..decodings {
        let strategy = ClassicalStrategy::from_indices(n, encoding_index, d);
        let sol = optimal_distribution(&strategy, constraint);
        if best.as_ref().is_none_or(|b| sol.p_min > b.p_min + IMPROVEMENT_TOL) {
            best = Some(Candidate { p_min: sol.p_min, strategy, distribution: sol.distribution });
        }
    }
    (best.expect("at least one decoding"), decodings)
}

fn pick_best(candidates: impl IntoIterator<Item = Candidate>) -> Option<Candidate> {
    candidates.into_iter().fold(None, |acc: Option<Candidate>, c| match acc {
        Some(b) if c.p_min <= b.p_min + IMPROVEMENT_TOL => Some(b),
        _ => Some(c),
    })
}

/// Every 2→1 strategy (256 encodings × 256 decoding pairs), each with its
/// LP-optimal distribution. Work is split by encoding index; the reduction scans
/// in enumeration order, so the result does not depend on `workers`.
pub fn exhaustive_search(
    n: usize,
    constraint: MarginalConstraint,
    filter: EncodingFilter,
    workers: usize,
) -> Result<SearchReport> {
    if n != 2 {
        return Err(RacError::InvalidArgument(format!(
            "exhaustive search covers n = 2 only; use the pruned search for n = {n}"
        )));
    }
    let encodings: Vec<u64> = (0..256u64)
        .filter(|&e| match filter {
            EncodingFilter::All => true,
            EncodingFilter::DuplicateOnly => !encoding_digits_unique(e, 4),
        })
        .collect();
    let per_encoding: Vec<(Candidate, u64)> =
        with_workers(workers, || encodings.par_iter().map(|&e| best_for_encoding(n, e, constraint)).collect());
    let examined = per_encoding.iter().map(|(_, k)| k).sum();
    let best = pick_best(per_encoding.into_iter().map(|(c, _)| c)).expect("nonempty encoding set");
    Ok(SearchReport {
        n,
        constraint,
        search_mode: SearchMode::Exhaustive,
        best_p_min: best.p_min,
        best: BestCode::Single { strategy: best.strategy, distribution: best.distribution },
        strategies_examined: examined,
        strategies_pruned: 0,
        certified_upper_bound: None,
        spot_checks: 0,
        spot_check_max: None,
    })
}

/// Random n-bit strategy: two bits per encoding function, four per decoding table.
pub fn random_strategy(n: usize, rng: &mut SplitMix64) -> ClassicalStrategy {
    let mut enc = 0u64;
    for x in 0..1usize << n {
        enc |= rng.next_bits(2) << (2 * x);
    }
    let mut dec = 0u64;
    for k in 0..n {
        dec |= rng.next_bits(4) << (4 * k);
    }
    ClassicalStrategy::from_indices(n, enc, dec)
}

/// n = 3: all 4⁸ encodings are enumerated; any encoding that reuses an encoding
/// function is certified at `≤ ½` and skipped. Since 8 inputs share 4 functions
/// every encoding is skipped. `spot_checks` random strategies (sample `j` drawn
/// from `SplitMix64::for_sample(seed, j)`) are solved by LP as an independent check.
pub fn pruned_search(n: usize, spot_checks: u64, seed: u64, workers: usize) -> Result<SearchReport> {
    if n != 3 {
        return Err(RacError::InvalidArgument(format!("pruned search covers n = 3, not {n}")));
    }
    let inputs = 1usize << n;
    let total_encodings = 1u64 << (2 * inputs);
    let survivors: Vec<u64> = (0..total_encodings).filter(|&e| encoding_digits_unique(e, inputs)).collect();
    let pruned = total_encodings - survivors.len() as u64;

    let constraint = MarginalConstraint::None;
    let unpruned: Vec<Candidate> =
        with_workers(workers, || survivors.par_iter().map(|&e| best_for_encoding(n, e, constraint).0).collect());

    let spot = with_workers(workers, || {
        (0..spot_checks)
            .into_par_iter()
            .map(|j| {
                let s = random_strategy(n, &mut SplitMix64::for_sample(seed, j));
                optimal_distribution(&s, constraint).p_min
            })
            .collect::<Vec<f64>>()
    });
    let spot_check_max = spot.iter().copied().reduce(f64::max);

    let coin = ClassicalStrategy::shared_coin(n);
    let coin_sol = optimal_distribution(&coin, constraint);
    let witness = Candidate { p_min: coin_sol.p_min, strategy: coin, distribution: coin_sol.distribution };
    let best = pick_best(std::iter::once(witness).chain(unpruned)).expect("witness present");

    Ok(SearchReport {
        n,
        constraint,
        search_mode: SearchMode::Pruned,
        best_p_min: best.p_min,
        best: BestCode::Single { strategy: best.strategy, distribution: best.distribution },
        strategies_examined: total_encodings * (1u64 << (4 * n)),
        strategies_pruned: pruned * (1u64 << (4 * n)),
        certified_upper_bound: survivors.is_empty().then_some(PIGEONHOLE_BOUND),
        spot_checks,
        spot_check_max,
    })
}

/// LP-optimal Bob-mixed distribution for every 2→1 strategy, by strategy index.
pub fn mixed_marginal_table(workers: usize) -> Vec<SharedDistribution> {
    with_workers(workers, || {
        (0..1u32 << 16)
            .into_par_iter()
            .map(|idx| {
                let s = ClassicalStrategy::two_to_one_from_index(idx);
                optimal_distribution(&s, MarginalConstraint::BobMixed).distribution
            })
            .collect()
    })
}

/// Samples 4→1 codes concatenated from three random 2→1 components, each paired
/// with its own LP-optimal Bob-mixed distribution. Sample `j` draws the three
/// component indices as 16-bit values from `SplitMix64::for_sample(seed, j)`.
pub fn concatenated_classical_search(samples: u64, seed: u64, workers: usize) -> Result<SearchReport> {
    if samples == 0 {
        return Err(RacError::InvalidArgument("need at least one sample".into()));
    }
    let table = mixed_marginal_table(workers);
    let build = |j: u64| {
        let mut rng = SplitMix64::for_sample(seed, j);
        let idx = [rng.next_bits(16) as u32, rng.next_bits(16) as u32, rng.next_bits(16) as u32];
        let [a, b, o] = idx.map(ClassicalStrategy::two_to_one_from_index);
        ConcatenatedCode { inner: [a, b], outer: o, distributions: idx.map(|i| table[i as usize]) }
    };
    let values: Vec<f64> =
        with_workers(workers, || (0..samples).into_par_iter().map(|j| build(j).evaluate().p_min()).collect());
    let (best_j, best_p) = values.iter().enumerate().fold((0usize, f64::NEG_INFINITY), |(bj, bp), (j, &p)| {
        if p > bp + IMPROVEMENT_TOL {
            (j, p)
        } else {
            (bj, bp)
        }
    });
    Ok(SearchReport {
        n: 4,
        constraint: MarginalConstraint::BobMixed,
        search_mode: SearchMode::Sampled,
        best: BestCode::Concatenated(build(best_j as u64)),
        best_p_min: best_p,
        strategies_examined: samples,
        strategies_pruned: 0,
        certified_upper_bound: None,
        spot_checks: 0,
        spot_check_max: None,
    })
}
