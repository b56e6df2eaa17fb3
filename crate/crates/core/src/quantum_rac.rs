//! Quantum random access codes assisted by a shared two-qubit state.
//!
//! On input `x` Alice measures her qubit along `α̂(x)` and sends the outcome
//! `c = α`. To recover bit `i` Bob measures his qubit along his `i`-th direction,
//! obtains `β_i` and outputs `β_i ⊕ c`. Evaluation is exact: both of Alice's
//! outcomes are summed with their Born weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::{input_bit, input_label, parse_index, parse_input};
use crate::error::{RacError, Result};
use crate::evaluation::EvaluationResult;
use crate::qstate::{
    is_valid_state, measure_prob, parity_sign, post_measurement_unchecked, BellDiagonalSpec, Bit, TwoQubitState, Vec3,
    NULL_EVENT_TOL,
};

/// Smallest correlation magnitude a canonical protocol may be built on.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRacProtocol {
    n: usize,
    alice: Vec<Vec3>,
    bob: Vec<Vec3>,
}

impl QuantumRacProtocol {
    /// `alice[x]` is Alice's direction on input `x`; `bob[i - 1]` is Bob's direction for bit `i`.
    pub fn new(n: usize, alice: Vec<Vec3>, bob: Vec<Vec3>) -> Result<Self> {
        if !(2..=20).contains(&n) {
            return Err(RacError::InvalidArgument(format!("input length {n} not supported")));
        }
        if alice.len() != 1 << n {
            return Err(RacError::InvalidArgument(format!(
                "expected {} Alice directions, got {}",
                1usize << n,
                alice.len()
            )));
        }
        if bob.len() != n {
            return Err(RacError::InvalidArgument(format!("expected {n} Bob directions, got {}", bob.len())));
        }
        for d in alice.iter().chain(&bob) {
            d.check_direction()?;
        }
        Ok(Self { n, alice, bob })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alice_direction(&self, x: usize) -> Vec3 {
        self.alice[x]
    }

    pub fn bob_direction(&self, i: usize) -> Vec3 {
        self.bob[i - 1]
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProtocolDocument = serde_json::from_str(text)?;
        doc.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProtocolDocument::from(self)).expect("protocol serialization is infallible")
    }
}

/// `{"n": 2, "alice": {"00": [..], ...}, "bob": {"1": [..], ...}}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolDocument {
    pub n: usize,
    pub alice: BTreeMap<String, Vec3>,
    pub bob: BTreeMap<String, Vec3>,
}

impl TryFrom<ProtocolDocument> for QuantumRacProtocol {
    type Error = RacError;

    fn try_from(doc: ProtocolDocument) -> Result<Self> {
        let n = doc.n;
        if !(2..=20).contains(&n) {
            return Err(RacError::Config(format!("protocol input length {n} not supported")));
        }
        let mut alice = vec![None; 1 << n];
        for (label, dir) in &doc.alice {
            alice[parse_input(label, n)?] = Some(*dir);
        }
        let mut bob = vec![None; n];
        for (label, dir) in &doc.bob {
            bob[parse_index(label, n)? - 1] = Some(*dir);
        }
        let alice = alice
            .into_iter()
            .enumerate()
            .map(|(x, d)| {
                d.ok_or_else(|| RacError::Config(format!("no Alice direction for input {}", input_label(x, n))))
            })
            .collect::<Result<Vec<_>>>()?;
        let bob = bob
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.ok_or_else(|| RacError::Config(format!("no Bob direction for index {}", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        QuantumRacProtocol::new(n, alice, bob)
    }
}

impl From<&QuantumRacProtocol> for ProtocolDocument {
    fn from(p: &QuantumRacProtocol) -> Self {
        ProtocolDocument {
            n: p.n,
            alice: p.alice.iter().enumerate().map(|(x, d)| (input_label(x, p.n), *d)).collect(),
            bob: p.bob.iter().enumerate().map(|(k, d)| ((k + 1).to_string(), *d)).collect(),
        }
    }
}

fn check_code_size(n: usize) -> Result<()> {
    if n != 2 && n != 3 {
        return Err(RacError::InvalidArgument(format!("canonical codes exist for n = 2 or 3, not {n}")));
    }
    Ok(())
}

fn check_nondegenerate(n: usize, spec: BellDiagonalSpec) -> Result<()> {
    check_code_size(n)?;
    for (k, e) in spec.to_array().iter().take(n).enumerate() {
        if !(e.abs() >= DEGENERACY_THRESHOLD) {
            return Err(RacError::DegenerateState(format!(
                "correlation E{} = {e} is below {DEGENERACY_THRESHOLD:e}; the {n}->1 code needs it nonzero",
                k + 1
            )));
        }
    }
    Ok(())
}

/// The canonical 2→1 or 3→1 code for a state with diagonal correlations `spec`:
/// Alice measures along `((−1)^{x₁}/E₁, (−1)^{x₂}/E₂, (−1)^{x₃}/E₃)` normalized
/// (last component 0 for n = 2), Bob along the coordinate axes.
pub fn canonical_protocol(n: usize, spec: BellDiagonalSpec) -> Result<QuantumRacProtocol> {
    check_nondegenerate(n, spec)?;
    let e = spec.to_array();
    let alice = (0..1usize << n)
        .map(|x| {
            let mut v = [0.0; 3];
            for i in 1..=n {
                v[i - 1] = parity_sign(input_bit(x, i, n)) / e[i - 1];
            }
            Vec3::from(v).normalized().expect("nondegenerate correlations give a finite direction")
        })
        .collect();
    let bob = (0..n).map(Vec3::axis).collect();
    QuantumRacProtocol::new(n, alice, bob)
}

/// Unclamped success table `[x][i - 1]`. Branches of Alice's measurement with
/// probability below the null-event tolerance contribute nothing.
pub fn evaluate_unclamped(protocol: &QuantumRacProtocol, state: &TwoQubitState) -> Result<Vec<Vec<f64>>> {
    if !is_valid_state(state) {
        return Err(RacError::InvalidState("shared state is not a valid density matrix".into()));
    }
    let n = protocol.n;
    let mut table = vec![vec![0.0; n]; 1 << n];
    for (x, row) in table.iter_mut().enumerate() {
        let dir = protocol.alice[x];
        for alpha in 0..2 as Bit {
            let p_alpha = 0.5 * (1.0 + parity_sign(alpha) * dir.dot(state.a0));
            if p_alpha < NULL_EVENT_TOL {
                continue;
            }
            let bob_state = post_measurement_unchecked(state, dir, alpha)?;
            for (k, entry) in row.iter_mut().enumerate() {
                let want = input_bit(x, k + 1, n) ^ alpha;
                let p_correct = 0.5 * (1.0 + parity_sign(want) * protocol.bob[k].dot(bob_state));
                *entry += p_alpha * p_correct;
            }
        }
    }
    Ok(table)
}

/// Exact success probabilities of `protocol` run on `state`.
pub fn evaluate(protocol: &QuantumRacProtocol, state: &TwoQubitState) -> Result<EvaluationResult> {
    Ok(EvaluationResult::from_table(protocol.n, evaluate_unclamped(protocol, state)?))
}

/// `½(1 + 1/√(Σ_{i≤n} E_i⁻²))` without degeneracy checks; a zero correlation
/// gives the limit `½`.
pub fn pmin_closed_form(n: usize, e: [f64; 3]) -> f64 {
    let s: f64 = e.iter().take(n).map(|v| 1.0 / (v * v)).sum();
    0.5 * (1.0 + 1.0 / s.sqrt())
}

/// Worst-case success of the canonical n→1 code on a Bell-diagonal state.
pub fn pmin_formula(n: usize, spec: BellDiagonalSpec) -> Result<f64> {
    check_nondegenerate(n, spec)?;
    Ok(pmin_closed_form(n, spec.to_array()))
}

/// `½(1 + (d/√2)^m)`: m levels of concatenated 2→1 codes on states of discord `d`.
pub fn concatenated_pmin_formula(d: f64, m: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&d) {
        return Err(RacError::InvalidArgument(format!("discord {d} not in [0, 1]")));
    }
    if m < 1 {
        return Err(RacError::InvalidArgument("concatenation depth must be at least 1".into()));
    }
    Ok(0.5 * (1.0 + (d / std::f64::consts::SQRT_2).powi(m as i32)))
}

/// Success after `m` stages each correct with probability `base_p`; the final
/// guess is right iff an even number of stages erred.
pub fn concatenated_pmin_recursive(base_p: f64, m: u32) -> Result<f64> {
    if !(0.5..=1.0).contains(&base_p) {
        return Err(RacError::InvalidArgument(format!("stage success {base_p} not in [1/2, 1]")));
    }
    if m < 1 {
        return Err(RacError::InvalidArgument("concatenation depth must be at least 1".into()));
    }
    let mut p = base_p;
    for _ in 1..m {
        p = p * base_p + (1.0 - p) * (1.0 - base_p);
    }
    Ok(p)
}

/// 2→1 code where Alice sends the qubit `q·ψ⃗_x`, `ψ⃗_x = ((−1)^{x₁}, (−1)^{x₂}, 0)/√2`,
/// and Bob measures along x (bit 1) or y (bit 2).
pub fn prepare_and_measure(q: f64) -> Result<EvaluationResult> {
    if !(0.0..=1.0).contains(&q) {
        return Err(RacError::InvalidArgument(format!("noise parameter {q} not in [0, 1]")));
    }
    let n = 2;
    let mut table = vec![vec![0.0; n]; 4];
    for (x, row) in table.iter_mut().enumerate() {
        let psi = Vec3::new(parity_sign(input_bit(x, 1, n)), parity_sign(input_bit(x, 2, n)), 0.0)
            * (q / std::f64::consts::SQRT_2);
        for (k, entry) in row.iter_mut().enumerate() {
            *entry = measure_prob(psi, Vec3::axis(k), input_bit(x, k + 1, n))?;
        }
    }
    Ok(EvaluationResult::from_table(n, table))
}

pub fn prepare_and_measure_pmin(q: f64) -> Result<f64> {
    Ok(prepare_and_measure(q)?.p_min())
}
