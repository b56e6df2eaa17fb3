use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{input_bit, input_label, parse_index, parse_input};
use crate::error::{RacError, Result};
use crate::evaluation::EvaluationResult;
use crate::qstate::Bit;

/// Alice's message as a function of her shared bit `r_a`, for one fixed input.
/// Only four such functions exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EncodingFn {
    Zero,
    One,
    Identity,
    Negation,
}

impl EncodingFn {
    pub const ALL: [EncodingFn; 4] = [EncodingFn::Zero, EncodingFn::One, EncodingFn::Identity, EncodingFn::Negation];

    #[inline]
    pub fn apply(self, r_a: Bit) -> Bit {
        match self {
            EncodingFn::Zero => 0,
            EncodingFn::One => 1,
            EncodingFn::Identity => r_a,
            EncodingFn::Negation => 1 ^ r_a,
        }
    }

    /// `[c(r_a = 0), c(r_a = 1)]`.
    pub fn table(self) -> [Bit; 2] {
        [self.apply(0), self.apply(1)]
    }

    pub fn from_table(t: [Bit; 2]) -> Result<Self> {
        match t {
            [0, 0] => Ok(EncodingFn::Zero),
            [1, 1] => Ok(EncodingFn::One),
            [0, 1] => Ok(EncodingFn::Identity),
            [1, 0] => Ok(EncodingFn::Negation),
            other => Err(RacError::Config(format!("encoding column {other:?} is not a pair of bits"))),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// The same function after relabeling the message `c → 1 ⊕ c`.
    pub fn flipped(self) -> Self {
        match self {
            EncodingFn::Zero => EncodingFn::One,
            EncodingFn::One => EncodingFn::Zero,
            EncodingFn::Identity => EncodingFn::Negation,
            EncodingFn::Negation => EncodingFn::Identity,
        }
    }
}

/// Bob's table for one bit index: `table[c][r_b]` is his guess.
pub type DecodingTable = [[Bit; 2]; 2];

/// Deterministic n→1 strategy using one shared bit on each side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalStrategy {
    n: usize,
    encoding: Vec<EncodingFn>,
    decoding: Vec<DecodingTable>,
}

impl ClassicalStrategy {
    pub fn new(n: usize, encoding: Vec<EncodingFn>, decoding: Vec<DecodingTable>) -> Result<Self> {
        if !(2..=16).contains(&n) {
            return Err(RacError::InvalidArgument(format!("input length {n} not supported")));
        }
        if encoding.len() != 1 << n || decoding.len() != n {
            return Err(RacError::InvalidArgument(format!(
                "strategy tables must cover {} inputs and {n} indices",
                1usize << n
            )));
        }
        if decoding.iter().flatten().flatten().any(|&g| g > 1) {
            return Err(RacError::InvalidArgument("decoding entries must be bits".into()));
        }
        Ok(Self { n, encoding, decoding })
    }

    /// The optimal 2→1 code of Table 1: paired with `p00 = p01 = p10 = ⅓` it
    /// never outputs a guess with both bits wrong.
    pub fn table1() -> Self {
        use EncodingFn::*;
        Self {
            n: 2,
            encoding: vec![Identity, Zero, One, Negation],
            // g_{0,0} = (0,1), g_{0,1} = (0,0), g_{1,0} = (1,0), g_{1,1} = (1,1)
            decoding: vec![[[0, 0], [1, 1]], [[1, 0], [0, 1]]],
        }
    }

    /// Message ignored, Bob answers `r_b` for every bit. Achieves ½ whenever
    /// `Pr(r_b = 0) = ½`.
    pub fn shared_coin(n: usize) -> Self {
        Self { n, encoding: vec![EncodingFn::Zero; 1 << n], decoding: vec![[[0, 1], [0, 1]]; n] }
    }

    /// 2→1 strategy number `index < 65536`: bits 0..8 pick the four encoding
    /// functions (two bits per input, input 00 lowest), bits 8..16 the two
    /// decoding tables (entry `[c][r_b]` at bit `2c + r_b`, index 1 lowest).
    pub fn two_to_one_from_index(index: u32) -> Self {
        Self::from_indices(2, index as u64 & 0xff, (index >> 8) as u64)
    }

    pub fn two_to_one_index(&self) -> Option<u32> {
        (self.n == 2).then(|| (self.encoding_index() | (self.decoding_index() << 8)) as u32)
    }

    /// Strategy from an encoding index (two bits per input, input 0 lowest) and
    /// decoding index (four bits per bit index, index 1 lowest).
    pub fn from_indices(n: usize, encoding_index: u64, decoding_index: u64) -> Self {
        let encoding = (0..1usize << n).map(|x| EncodingFn::ALL[((encoding_index >> (2 * x)) & 3) as usize]).collect();
        let decoding = (0..n).map(|k| decoding_table_from_bits(decoding_index >> (4 * k))).collect();
        Self { n, encoding, decoding }
    }

    pub fn encoding_index(&self) -> u64 {
        self.encoding.iter().enumerate().map(|(x, f)| (f.index() as u64) << (2 * x)).sum()
    }

    pub fn decoding_index(&self) -> u64 {
        self.decoding.iter().enumerate().map(|(k, t)| decoding_table_bits(t) << (4 * k)).sum()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoding_fn(&self, x: usize) -> EncodingFn {
        self.encoding[x]
    }

    pub fn encodings(&self) -> &[EncodingFn] {
        &self.encoding
    }

    pub fn decoding_table(&self, i: usize) -> DecodingTable {
        self.decoding[i - 1]
    }

    #[inline]
    pub fn encode(&self, x: usize, r_a: Bit) -> Bit {
        self.encoding[x].apply(r_a)
    }

    /// Bob's guess of bit `i` (1-based).
    #[inline]
    pub fn decode(&self, i: usize, c: Bit, r_b: Bit) -> Bit {
        self.decoding[i - 1][c as usize][r_b as usize]
    }

    /// `s[k][l] = 1` iff Bob's guess of `x_i` is right when `(r_a, r_b) = (k, l)`,
    /// flattened as `[s00, s01, s10, s11]`.
    pub fn success_indicators(&self, x: usize, i: usize) -> [f64; 4] {
        let want = input_bit(x, i, self.n);
        let mut s = [0.0; 4];
        for k in 0..2 {
            for l in 0..2 {
                if self.decode(i, self.encode(x, k), l) == want {
                    s[2 * k as usize + l as usize] = 1.0;
                }
            }
        }
        s
    }

    /// Indicator rows for every `(x, i)`, input-major.
    pub fn indicator_rows(&self) -> Vec<[f64; 4]> {
        (0..1usize << self.n)
            .flat_map(|x| (1..=self.n).map(move |i| (x, i)))
            .map(|(x, i)| self.success_indicators(x, i))
            .collect()
    }

    /// Same code with the message bit relabeled `c → 1 ⊕ c`.
    pub fn with_flipped_message(&self) -> Self {
        Self {
            n: self.n,
            encoding: self.encoding.iter().map(|f| f.flipped()).collect(),
            decoding: self.decoding.iter().map(|t| [t[1], t[0]]).collect(),
        }
    }

    /// Same code with input bits permuted: new bit `j` is old bit `perm[j - 1] + 1`.
    pub fn with_permuted_inputs(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(RacError::InvalidArgument(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        let mut encoding = vec![EncodingFn::Zero; 1 << n];
        for (new_x, slot) in encoding.iter_mut().enumerate() {
            let mut old_x = 0usize;
            for j in 1..=n {
                if input_bit(new_x, j, n) == 1 {
                    old_x |= 1 << (n - 1 - perm[j - 1]);
                }
            }
            *slot = self.encoding[old_x];
        }
        let decoding = perm.iter().map(|&p| self.decoding[p]).collect();
        Ok(Self { n, encoding, decoding })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StrategyDocument = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StrategyDocument::from(self)).expect("strategy serialization is infallible")
    }
}

fn decoding_table_from_bits(bits: u64) -> DecodingTable {
    let b = |c: u64, r: u64| ((bits >> (2 * c + r)) & 1) as Bit;
    [[b(0, 0), b(0, 1)], [b(1, 0), b(1, 1)]]
}

fn decoding_table_bits(t: &DecodingTable) -> u64 {
    let mut bits = 0;
    for c in 0..2 {
        for r in 0..2 {
            bits |= (t[c][r] as u64) << (2 * c + r);
        }
    }
    bits
}

/// True iff two distinct inputs use the same encoding function.
pub fn has_duplicate_encoding(strategy: &ClassicalStrategy) -> bool {
    let mut used = [false; 4];
    strategy.encodings().iter().any(|f| std::mem::replace(&mut used[f.index()], true))
}

/// Distribution `p_kl = Pr(r_a = k, r_b = l)` of the two shared bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDocument", into = "DistributionDocument")]
pub struct SharedDistribution {
    p: [f64; 4],
}

pub const DISTRIBUTION_TOL: f64 = 1e-12;

impl SharedDistribution {
    /// `[p00, p01, p10, p11]`.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        let sum: f64 = p.iter().sum();
        if p.iter().any(|v| !v.is_finite() || *v < -DISTRIBUTION_TOL) || (sum - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(RacError::InvalidArgument(format!("{p:?} is not a probability distribution")));
        }
        Ok(Self { p })
    }

    pub fn uniform() -> Self {
        Self { p: [0.25; 4] }
    }

    /// `(⅓, ⅓, ⅓, 0)`.
    pub fn biased_thirds() -> Self {
        let t = 1.0 / 3.0;
        Self { p: [t, t, t, 0.0] }
    }

    #[inline]
    pub fn p(&self, r_a: Bit, r_b: Bit) -> f64 {
        self.p[2 * r_a as usize + r_b as usize]
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.p
    }

    /// `Pr(r_b = 0)`.
    pub fn bob_marginal_zero(&self) -> f64 {
        self.p[0] + self.p[2]
    }
}

impl fmt::Display for SharedDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.p;
        write!(f, "(p00={a:.6}, p01={b:.6}, p10={c:.6}, p11={d:.6})")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionDocument {
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

impl TryFrom<DistributionDocument> for SharedDistribution {
    type Error = RacError;
    fn try_from(d: DistributionDocument) -> Result<Self> {
        SharedDistribution::new([d.p00, d.p01, d.p10, d.p11])
    }
}

impl From<SharedDistribution> for DistributionDocument {
    fn from(d: SharedDistribution) -> Self {
        let [p00, p01, p10, p11] = d.p;
        DistributionDocument { p00, p01, p10, p11 }
    }
}

/// `success(x, i) = Σ_kl p_kl [b_i(c(x, k), l) = x_i]`.
pub fn evaluate_strategy(strategy: &ClassicalStrategy, dist: &SharedDistribution) -> EvaluationResult {
    let n = strategy.n();
    let table = (0..1usize << n)
        .map(|x| {
            (1..=n)
                .map(|i| {
                    let s = strategy.success_indicators(x, i);
                    s.iter().zip(dist.as_array()).map(|(a, b)| a * b).sum()
                })
                .collect()
        })
        .collect();
    EvaluationResult::from_table(n, table)
}

/// `P(x)`: probability that Bob outputs 1, per bit index.
pub fn guess_point(strategy: &ClassicalStrategy, dist: &SharedDistribution, x: usize) -> Vec<f64> {
    (1..=strategy.n())
        .map(|i| {
            let mut acc = 0.0;
            for k in 0..2 {
                for l in 0..2 {
                    acc += dist.p(k, l) * f64::from(strategy.decode(i, strategy.encode(x, k), l));
                }
            }
            acc
        })
        .collect()
}

/// `{"n": 2, "encoding": {"00": [c_ra0, c_ra1], ...}, "decoding": {"1": [[g_c0_rb0, g_c0_rb1], [g_c1_rb0, g_c1_rb1]], ...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDocument {
    pub n: usize,
    pub encoding: BTreeMap<String, [Bit; 2]>,
    pub decoding: BTreeMap<String, DecodingTable>,
}

impl TryFrom<StrategyDocument> for ClassicalStrategy {
    type Error = RacError;
    fn try_from(doc: StrategyDocument) -> Result<Self> {
        let n = doc.n;
        if !(2..=16).contains(&n) {
            return Err(RacError::Config(format!("strategy input length {n} not supported")));
        }
        let mut encoding = vec![None; 1 << n];
        for (label, col) in &doc.encoding {
            encoding[parse_input(label, n)?] = Some(EncodingFn::from_table(*col)?);
        }
        let mut decoding = vec![None; n];
        for (label, t) in &doc.decoding {
            if t.iter().flatten().any(|&g| g > 1) {
                return Err(RacError::Config(format!("decoding table {label} has a non-bit entry")));
            }
            decoding[parse_index(label, n)? - 1] = Some(*t);
        }
        let encoding = encoding
            .into_iter()
            .enumerate()
            .map(|(x, f)| f.ok_or_else(|| RacError::Config(format!("no encoding for input {}", input_label(x, n)))))
            .collect::<Result<Vec<_>>>()?;
        let decoding = decoding
            .into_iter()
            .enumerate()
            .map(|(k, t)| t.ok_or_else(|| RacError::Config(format!("no decoding table for index {}", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        ClassicalStrategy::new(n, encoding, decoding)
    }
}

impl From<&ClassicalStrategy> for StrategyDocument {
    fn from(s: &ClassicalStrategy) -> Self {
        StrategyDocument {
            n: s.n,
            encoding: s.encoding.iter().enumerate().map(|(x, f)| (input_label(x, s.n), f.table())).collect(),
            decoding: s.decoding.iter().enumerate().map(|(k, t)| ((k + 1).to_string(), *t)).collect(),
        }
    }
}

impl Serialize for ClassicalStrategy {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StrategyDocument::from(self).serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn table1_matches_published_rows() {
        let s = ClassicalStrategy::table1();
        // (x, [(r_a, r_b, c, g)]) as printed, p11 row omitted.
        type Row = (Bit, Bit, Bit, [Bit; 2]);
        let rows: [(usize, [Row; 3]); 4] = [
            (0b00, [(0, 0, 0, [0, 1]), (0, 1, 0, [0, 0]), (1, 0, 1, [1, 0])]),
            (0b01, [(0, 0, 0, [0, 1]), (0, 1, 0, [0, 0]), (1, 0, 0, [0, 1])]),
            (0b10, [(0, 0, 1, [1, 0]), (0, 1, 1, [1, 1]), (1, 0, 1, [1, 0])]),
            (0b11, [(0, 0, 1, [1, 0]), (0, 1, 1, [1, 1]), (1, 0, 0, [0, 1])]),
        ];
        for (x, entries) in rows {
            for (ra, rb, c, g) in entries {
                assert_eq!(s.encode(x, ra), c, "x={x} ra={ra}");
                assert_eq!([s.decode(1, c, rb), s.decode(2, c, rb)], g);
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let t1 = ClassicalStrategy::table1();
        let r = evaluate_strategy(&t1, &SharedDistribution::biased_thirds());
        assert!(close(r.p_min(), 2.0 / 3.0));
        let r = evaluate_strategy(&t1, &SharedDistribution::uniform());
        assert!(close(r.p_min(), 0.5));

        let zero = ClassicalStrategy::new(2, vec![EncodingFn::Zero; 4], vec![[[0, 0], [0, 0]]; 2]).unwrap();
        let r = evaluate_strategy(&zero, &SharedDistribution::new([0.1, 0.2, 0.3, 0.4]).unwrap());
        assert_eq!(r.p_min(), 0.0);
        assert_eq!(r.success(0b11, 1), 0.0);
    }

    #[test]
    fn uniform_table1_brute_force() {
        // Walk all 16 (x, r_a, r_b) cases and count correct bits.
        let t1 = ClassicalStrategy::table1();
        let mut worst = f64::INFINITY;
        for x in 0..4 {
            for i in 1..=2 {
                let mut hits = 0;
                for ra in 0..2 {
                    for rb in 0..2 {
                        if t1.decode(i, t1.encode(x, ra), rb) == input_bit(x, i, 2) {
                            hits += 1;
                        }
                    }
                }
                worst = worst.min(hits as f64 / 4.0);
            }
        }
        assert_eq!(worst, 0.5);
    }

    #[test]
    fn guess_points() {
        let t1 = ClassicalStrategy::table1();
        let d = SharedDistribution::biased_thirds();
        let t = 1.0 / 3.0;
        let want = [[t, t], [0.0, 2.0 * t], [1.0, t], [2.0 * t, 2.0 * t]];
        for (x, w) in want.iter().enumerate() {
            let got = guess_point(&t1, &d, x);
            assert!(close(got[0], w[0]) && close(got[1], w[1]), "x={x}: {got:?}");
        }
        let zero = ClassicalStrategy::new(2, vec![EncodingFn::One; 4], vec![[[0, 0], [0, 0]]; 2]).unwrap();
        assert_eq!(guess_point(&zero, &d, 3), vec![0.0, 0.0]);
    }

    #[test]
    fn duplicate_encodings() {
        assert!(!has_duplicate_encoding(&ClassicalStrategy::table1()));
        assert!(has_duplicate_encoding(&ClassicalStrategy::shared_coin(2)));
        for e in [0u64, 0x1b1b, 0xe4e4, 0xffff] {
            assert!(has_duplicate_encoding(&ClassicalStrategy::from_indices(3, e, 0)));
        }
    }

    #[test]
    fn index_round_trip() {
        for idx in [0u32, 1, 255, 256, 0x1234, 65535] {
            let s = ClassicalStrategy::two_to_one_from_index(idx);
            assert_eq!(s.two_to_one_index(), Some(idx));
        }
        let t1 = ClassicalStrategy::table1();
        let idx = t1.two_to_one_index().unwrap();
        assert_eq!(ClassicalStrategy::two_to_one_from_index(idx), t1);
    }

    #[test]
    fn relabelings_are_involutions() {
        let t1 = ClassicalStrategy::table1();
        assert_eq!(t1.with_flipped_message().with_flipped_message(), t1);
        let swapped = t1.with_permuted_inputs(&[1, 0]).unwrap();
        assert_eq!(swapped.encoding_fn(0b01), t1.encoding_fn(0b10));
        assert_eq!(swapped.with_permuted_inputs(&[1, 0]).unwrap(), t1);
        assert!(t1.with_permuted_inputs(&[0, 0]).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let t1 = ClassicalStrategy::table1();
        let text = t1.to_json();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["encoding"]["00"], serde_json::json!([0, 1]));
        assert_eq!(value["decoding"]["2"], serde_json::json!([[1, 0], [0, 1]]));
        assert_eq!(ClassicalStrategy::from_json(&text).unwrap(), t1);
        let bad = r#"{"n": 2, "encoding": {"00": [0, 2]}, "decoding": {}}"#;
        assert!(matches!(ClassicalStrategy::from_json(bad), Err(RacError::Config(_))));
        let unknown = r#"{"n": 2, "encoding": {}, "decoding": {}, "extra": 1}"#;
        assert!(matches!(ClassicalStrategy::from_json(unknown), Err(RacError::Json(_))));
    }

    #[test]
    fn distribution_validation() {
        assert!(SharedDistribution::new([0.5, 0.5, 0.0, 0.0]).is_ok());
        assert!(SharedDistribution::new([0.5, 0.6, 0.0, -0.1]).is_err());
        assert!(SharedDistribution::new([0.5, 0.4, 0.0, 0.0]).is_err());
        let d: SharedDistribution = serde_json::from_str(r#"{"p00":0.25,"p01":0.25,"p10":0.25,"p11":0.25}"#).unwrap();
        assert_eq!(d, SharedDistribution::uniform());
    }
}
