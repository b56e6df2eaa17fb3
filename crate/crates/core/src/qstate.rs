//! Bloch-representation mathematics for one and two qubits.
//!
//! A qubit state is `ρ(s) = (1 + s·σ)/2` with `|s| ≤ 1`; a projective measurement
//! is a unit vector `n̂` with outcome `α ∈ {0, 1}` occurring with probability
//! `(1 + (−1)^α n̂·s)/2`. A two-qubit state is described by Alice's and Bob's
//! local Bloch vectors and the 3×3 Pauli correlation matrix `E_lm = ⟨σ_l ⊗ σ_m⟩`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{RacError, Result};
use crate::linalg::{self, Mat4};

/// Allowed deviation of a measurement direction's norm from 1.
pub const DIRECTION_NORM_TOL: f64 = 1e-12;
/// Allowed excess of a state Bloch vector's norm over 1.
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Minimum eigenvalue accepted as positive semidefinite.
pub const POSITIVITY_TOL: f64 = -1e-10;
/// Allowed deviation of the trace from 1.
pub const TRACE_TOL: f64 = 1e-12;
/// Outcomes below this probability are treated as impossible.
pub const NULL_EVENT_TOL: f64 = 1e-12;
/// Positivity slack on the Bell-diagonal tetrahedron (four times the eigenvalue slack).
pub const BELL_DIAGONAL_TOL: f64 = 4e-12;

/// Measurement outcome or classical bit.
pub type Bit = u8;

fn check_bit(b: Bit) -> Result<()> {
    if b > 1 {
        return Err(RacError::InvalidArgument(format!("outcome must be 0 or 1, got {b}")));
    }
    Ok(())
}

/// `(−1)^b`.
#[inline]
pub fn parity_sign(b: Bit) -> f64 {
    if b & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3::new(v[0], v[1], v[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector along coordinate axis `k` (0, 1 or 2).
    pub fn axis(k: usize) -> Self {
        match k {
            0 => Self::X,
            1 => Self::Y,
            2 => Self::Z,
            _ => panic!("axis index {k} out of range"),
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, other: Vec3) -> f64 {
        (self - other).to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Checks the measurement-direction invariant.
    pub fn check_direction(self) -> Result<()> {
        if !self.is_finite() || (self.norm() - 1.0).abs() > DIRECTION_NORM_TOL {
            return Err(RacError::InvalidArgument(format!(
                "measurement direction {self} is not a unit vector (norm {})",
                self.norm()
            )));
        }
        Ok(())
    }

    /// Checks the state Bloch-vector invariant.
    pub fn check_state(self) -> Result<()> {
        if !self.is_finite() || self.norm() > 1.0 + STATE_NORM_TOL {
            return Err(RacError::InvalidState(format!("Bloch vector {self} has norm {} > 1", self.norm())));
        }
        Ok(())
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Probability of outcome `alpha` when measuring direction `dir` on the qubit `s`.
pub fn measure_prob(s: Vec3, dir: Vec3, alpha: Bit) -> Result<f64> {
    dir.check_direction()?;
    s.check_state()?;
    check_bit(alpha)?;
    Ok(outcome_prob(s, dir, alpha))
}

/// Unchecked `(1 + (−1)^α n̂·s)/2`, clamped to `[0, 1]`.
#[inline]
pub(crate) fn outcome_prob(s: Vec3, dir: Vec3, alpha: Bit) -> f64 {
    (0.5 * (1.0 + parity_sign(alpha) * dir.dot(s))).clamp(0.0, 1.0)
}

/// Shared two-qubit resource in Bloch form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoQubitState {
    pub a0: Vec3,
    pub b0: Vec3,
    #[serde(rename = "E")]
    pub e: [[f64; 3]; 3],
}

impl TwoQubitState {
    pub fn new(a0: Vec3, b0: Vec3, e: [[f64; 3]; 3]) -> Self {
        Self { a0, b0, e }
    }

    /// Product of two maximally mixed qubits.
    pub fn maximally_mixed() -> Self {
        Self::new(Vec3::ZERO, Vec3::ZERO, [[0.0; 3]; 3])
    }

    /// `Eᵀ v`, i.e. component `m` is `Σ_l E_lm v_l`.
    pub fn e_transpose_times(&self, v: Vec3) -> Vec3 {
        let v = v.to_array();
        let mut out = [0.0; 3];
        for (m, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|l| self.e[l][m] * v[l]).sum();
        }
        out.into()
    }

    /// Diagonal of the correlation matrix as a Bell-diagonal spec.
    pub fn diagonal(&self) -> BellDiagonalSpec {
        BellDiagonalSpec::new(self.e[0][0], self.e[1][1], self.e[2][2])
    }

    /// Largest absolute off-diagonal entry of `E`.
    pub fn off_diagonal_max(&self) -> f64 {
        let mut m = 0.0f64;
        for l in 0..3 {
            for k in 0..3 {
                if l != k {
                    m = m.max(self.e[l][k].abs());
                }
            }
        }
        m
    }

    fn entries_finite(&self) -> bool {
        self.a0.is_finite() && self.b0.is_finite() && self.e.iter().flatten().all(|v| v.is_finite())
    }

    fn check_valid(&self) -> Result<()> {
        if !is_valid_state(self) {
            return Err(RacError::InvalidState(
                "correlation data does not describe a positive semidefinite density matrix".into(),
            ));
        }
        Ok(())
    }
}

/// Probability that Alice sees outcome `alpha` measuring `dir` on her half.
pub fn alice_outcome_prob(state: &TwoQubitState, dir: Vec3, alpha: Bit) -> Result<f64> {
    dir.check_direction()?;
    check_bit(alpha)?;
    state.a0.check_state()?;
    Ok(outcome_prob(state.a0, dir, alpha))
}

/// Bob's Bloch vector after Alice measured `dir` and saw `alpha`:
/// `(b0 + (−1)^α Eᵀ n̂) / (1 + (−1)^α n̂·a0)`.
pub fn post_measurement_bob(state: &TwoQubitState, dir: Vec3, alpha: Bit) -> Result<Vec3> {
    dir.check_direction()?;
    check_bit(alpha)?;
    post_measurement_unchecked(state, dir, alpha)
}

pub(crate) fn post_measurement_unchecked(state: &TwoQubitState, dir: Vec3, alpha: Bit) -> Result<Vec3> {
    let sign = parity_sign(alpha);
    let denom = 1.0 + sign * dir.dot(state.a0);
    if 0.5 * denom <= NULL_EVENT_TOL {
        return Err(RacError::NullEvent(0.5 * denom));
    }
    Ok((state.b0 + state.e_transpose_times(dir) * sign) * (1.0 / denom))
}

/// The 4×4 density matrix `¼(1⊗1 + a0·σ⊗1 + 1⊗b0·σ + Σ E_lm σ_l⊗σ_m)`.
pub fn reconstruct_density_matrix(state: &TwoQubitState) -> Mat4 {
    let p = linalg::pauli();
    let id = linalg::identity2();
    let mut rho = linalg::kron(&id, &id);
    let a = state.a0.to_array();
    let b = state.b0.to_array();
    for k in 0..3 {
        linalg::add_scaled(&mut rho, &linalg::kron(&p[k], &id), a[k]);
        linalg::add_scaled(&mut rho, &linalg::kron(&id, &p[k]), b[k]);
        for m in 0..3 {
            linalg::add_scaled(&mut rho, &linalg::kron(&p[k], &p[m]), state.e[k][m]);
        }
    }
    for row in rho.iter_mut() {
        for v in row.iter_mut() {
            *v *= 0.25;
        }
    }
    rho
}

/// Bob's conditional Bloch vector obtained directly from the density matrix:
/// `ρ_B|α ∝ Tr_A[(Π_α ⊗ 1) ρ]`. Returns the outcome probability and the vector.
pub fn bob_conditional_from_density(state: &TwoQubitState, dir: Vec3, alpha: Bit) -> Result<(f64, Vec3)> {
    dir.check_direction()?;
    check_bit(alpha)?;
    let p = linalg::pauli();
    let id = linalg::identity2();
    let sign = parity_sign(alpha);
    let d = dir.to_array();
    let mut proj = id;
    for k in 0..3 {
        for i in 0..2 {
            for j in 0..2 {
                proj[i][j] += p[k][i][j] * (sign * d[k]);
            }
        }
    }
    for v in proj.iter_mut().flatten() {
        *v *= 0.5;
    }
    let rho = reconstruct_density_matrix(state);
    let conditioned = linalg::matmul4(&linalg::kron(&proj, &id), &rho);
    let rho_b = linalg::partial_trace_first(&conditioned);
    let prob = linalg::trace2(&rho_b).re;
    if prob <= NULL_EVENT_TOL {
        return Err(RacError::NullEvent(prob));
    }
    let mut bloch = [0.0; 3];
    for (k, c) in bloch.iter_mut().enumerate() {
        *c = linalg::trace2(&linalg::matmul2(&rho_b, &p[k])).re / prob;
    }
    Ok((prob, bloch.into()))
}

/// Minimum eigenvalue and trace of the reconstructed density matrix.
pub fn density_spectrum(state: &TwoQubitState) -> ([f64; 4], Complex64) {
    let rho = reconstruct_density_matrix(state);
    (linalg::hermitian_eigenvalues(&rho), linalg::trace4(&rho))
}

pub fn is_valid_state(state: &TwoQubitState) -> bool {
    if !state.entries_finite() {
        return false;
    }
    let (eig, tr) = density_spectrum(state);
    eig[0] >= POSITIVITY_TOL && (tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL
}

/// Peres–Horodecki test (exact for two qubits).
pub fn is_separable(state: &TwoQubitState) -> Result<bool> {
    state.check_valid()?;
    let pt = linalg::partial_transpose_second(&reconstruct_density_matrix(state));
    Ok(linalg::hermitian_eigenvalues(&pt)[0] >= POSITIVITY_TOL)
}

/// Bell-diagonal state: zero local vectors and `E = diag(e1, e2, e3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellDiagonalSpec {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
}

impl BellDiagonalSpec {
    pub const fn new(e1: f64, e2: f64, e3: f64) -> Self {
        Self { e1, e2, e3 }
    }

    pub fn from_array(e: [f64; 3]) -> Self {
        Self::new(e[0], e[1], e[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// Four times the density-matrix eigenvalues.
    pub fn positivity_values(self) -> [f64; 4] {
        let [a, b, c] = self.to_array();
        [1.0 - a - b - c, 1.0 - a + b + c, 1.0 + a - b + c, 1.0 + a + b - c]
    }

    /// Inside the positivity tetrahedron.
    pub fn is_valid(self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
            && self.positivity_values().iter().all(|&v| v >= -BELL_DIAGONAL_TOL)
    }

    /// `|e1| + |e2| + |e3| ≤ 1`, which is separability for Bell-diagonal states.
    pub fn in_separable_octahedron(self, tol: f64) -> bool {
        self.to_array().iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + tol
    }

    pub fn to_state(self) -> TwoQubitState {
        TwoQubitState::new(Vec3::ZERO, Vec3::ZERO, [[self.e1, 0.0, 0.0], [0.0, self.e2, 0.0], [0.0, 0.0, self.e3]])
    }

    pub fn check_valid(self) -> Result<()> {
        if !self.is_valid() {
            return Err(RacError::InvalidState(format!(
                "Bell-diagonal correlations {:?} lie outside the positivity tetrahedron",
                self.to_array()
            )));
        }
        Ok(())
    }
}

impl From<BellDiagonalSpec> for TwoQubitState {
    fn from(spec: BellDiagonalSpec) -> Self {
        spec.to_state()
    }
}

/// Werner state `(1−q)·1/4 + q|ψ⟩⟨ψ|` with `|ψ⟩ = (|00⟩ + |11⟩)/√2`, i.e. `E = (q, −q, q)`.
pub fn werner(q: f64) -> Result<BellDiagonalSpec> {
    if !(0.0..=1.0).contains(&q) {
        return Err(RacError::InvalidArgument(format!("Werner mixing parameter {q} not in [0, 1]")));
    }
    Ok(BellDiagonalSpec::new(q, -q, q))
}

/// Normalized geometric discord of a Bell-diagonal state:
/// `sqrt(½ · (sum of the two smallest E_i²))`.
pub fn geometric_discord_bell_diagonal(spec: BellDiagonalSpec) -> Result<f64> {
    spec.check_valid()?;
    let mut sq = spec.to_array().map(|v| v * v);
    sq.sort_by(|a, b| a.total_cmp(b));
    Ok((0.5 * (sq[0] + sq[1])).sqrt().min(1.0))
}

/// JSON forms accepted for a shared state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateDocument {
    Werner(WernerDoc),
    BellDiagonal(BellDiagonalDoc),
    Full(TwoQubitState),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WernerDoc {
    pub werner: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellDiagonalDoc {
    pub bell_diagonal: [f64; 3],
}

impl StateDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_state(&self) -> Result<TwoQubitState> {
        Ok(match self {
            StateDocument::Werner(w) => werner(w.werner)?.to_state(),
            StateDocument::BellDiagonal(b) => {
                let spec = BellDiagonalSpec::from_array(b.bell_diagonal);
                spec.check_valid()?;
                spec.to_state()
            }
            StateDocument::Full(s) => *s,
        })
    }
}

impl TwoQubitState {
    pub fn from_json(text: &str) -> Result<Self> {
        StateDocument::from_json(text)?.to_state()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn measure_prob_examples() {
        assert_eq!(measure_prob(Vec3::ZERO, Vec3::Y, 0).unwrap(), 0.5);
        assert_eq!(measure_prob(Vec3::Z, Vec3::Z, 0).unwrap(), 1.0);
        let s = Vec3::new(1.0 / SQRT_2, 1.0 / SQRT_2, 0.0);
        assert!(close(measure_prob(s, Vec3::X, 0).unwrap(), 0.5 * (1.0 + 1.0 / SQRT_2), 1e-15));
    }

    #[test]
    fn measure_prob_rejects_bad_inputs() {
        assert!(matches!(measure_prob(Vec3::ZERO, Vec3::new(1.0, 1.0, 0.0), 0), Err(RacError::InvalidArgument(_))));
        assert!(matches!(measure_prob(Vec3::new(1.0, 0.1, 0.0), Vec3::X, 0), Err(RacError::InvalidState(_))));
        assert!(matches!(measure_prob(Vec3::ZERO, Vec3::X, 2), Err(RacError::InvalidArgument(_))));
    }

    #[test]
    fn alice_outcome_examples() {
        let bd = BellDiagonalSpec::new(0.3, 0.2, 0.1).to_state();
        assert_eq!(alice_outcome_prob(&bd, Vec3::X, 0).unwrap(), 0.5);
        let s = TwoQubitState::new(Vec3::Z, Vec3::ZERO, [[0.0; 3]; 3]);
        assert_eq!(alice_outcome_prob(&s, Vec3::Z, 1).unwrap(), 0.0);
        let s = TwoQubitState::new(Vec3::new(0.3, 0.0, 0.0), Vec3::ZERO, [[0.0; 3]; 3]);
        let p = alice_outcome_prob(&s, Vec3::X, 0).unwrap();
        assert!(close(p, 0.65, 1e-15));
        // Density-matrix route.
        let (p_dm, _) = bob_conditional_from_density(&s, Vec3::X, 0).unwrap();
        assert!(close(p_dm, 0.65, 1e-14));
    }

    #[test]
    fn post_measurement_examples() {
        let s = BellDiagonalSpec::new(1.0, -1.0, 1.0).to_state();
        let b = post_measurement_bob(&s, Vec3::Z, 0).unwrap();
        assert!(b.max_abs_diff(Vec3::Z) < 1e-15);

        let m = TwoQubitState::maximally_mixed();
        let b = post_measurement_bob(&m, Vec3::new(0.6, 0.0, 0.8), 1).unwrap();
        assert_eq!(b, Vec3::ZERO);

        let s = BellDiagonalSpec::new(0.5, 0.5, 0.0).to_state();
        let dir = Vec3::new(1.0, 1.0, 0.0).normalized().unwrap();
        let b = post_measurement_bob(&s, dir, 0).unwrap();
        let want = Vec3::new(0.5 / SQRT_2, 0.5 / SQRT_2, 0.0);
        assert!(b.max_abs_diff(want) < 1e-15);
        let (_, b_dm) = bob_conditional_from_density(&s, dir, 0).unwrap();
        assert!(b_dm.max_abs_diff(want) < 1e-14);
    }

    #[test]
    fn null_event_is_an_error() {
        let s = TwoQubitState::new(Vec3::Z, Vec3::ZERO, [[0.0; 3]; 3]);
        assert!(matches!(post_measurement_bob(&s, Vec3::Z, 1), Err(RacError::NullEvent(_))));
    }

    #[test]
    fn density_matrix_examples() {
        let rho = reconstruct_density_matrix(&TwoQubitState::maximally_mixed());
        for (i, row) in rho.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((v - Complex64::new(want, 0.0)).norm() < 1e-15);
            }
        }
        let rho = reconstruct_density_matrix(&werner(1.0).unwrap().to_state());
        // |ψ⟩⟨ψ| with |ψ⟩ = (|00⟩ + |11⟩)/√2.
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho[i][j].re - 0.5).abs() < 1e-15);
        }
        assert!(rho[1][1].norm() < 1e-15 && rho[2][2].norm() < 1e-15);
    }

    #[test]
    fn werner_spectrum_matches_analytic() {
        for k in 0..=20 {
            let q = k as f64 / 20.0;
            let (eig, tr) = density_spectrum(&werner(q).unwrap().to_state());
            let mut want = [(1.0 - q) / 4.0, (1.0 - q) / 4.0, (1.0 - q) / 4.0, (1.0 + 3.0 * q) / 4.0];
            want.sort_by(|a, b| a.total_cmp(b));
            for (g, w) in eig.iter().zip(want) {
                assert!(close(*g, w, 1e-12), "q={q}: {eig:?}");
            }
            assert!(close(tr.re, 1.0, 1e-15));
        }
    }

    #[test]
    fn validity_examples() {
        assert!(!is_valid_state(&BellDiagonalSpec::new(1.0, 1.0, 1.0).to_state()));
        assert!(is_valid_state(&BellDiagonalSpec::new(1.0, -1.0, 1.0).to_state()));
        let third = 1.0 / 3.0;
        assert!(is_valid_state(&BellDiagonalSpec::new(third, third, third).to_state()));
    }

    #[test]
    fn separability_examples() {
        assert!(is_separable(&werner(0.2).unwrap().to_state()).unwrap());
        assert!(!is_separable(&werner(0.5).unwrap().to_state()).unwrap());
        assert!(is_separable(&BellDiagonalSpec::new(0.5, 0.5, 0.0).to_state()).unwrap());
        assert!(is_separable(&werner(1.0 / 3.0).unwrap().to_state()).unwrap());
        assert!(!is_separable(&werner(1.0 / 3.0 + 1e-6).unwrap().to_state()).unwrap());
        assert!(matches!(
            is_separable(&BellDiagonalSpec::new(1.0, 1.0, 1.0).to_state()),
            Err(RacError::InvalidState(_))
        ));
    }

    #[test]
    fn werner_examples() {
        assert_eq!(werner(0.0).unwrap().to_array(), [0.0, -0.0, 0.0]);
        assert_eq!(werner(1.0).unwrap().to_array(), [1.0, -1.0, 1.0]);
        assert!(matches!(werner(1.5), Err(RacError::InvalidArgument(_))));
        assert!(matches!(werner(-0.1), Err(RacError::InvalidArgument(_))));
    }

    #[test]
    fn discord_examples() {
        for q in [0.0, 0.25, 0.7, 1.0] {
            assert!(close(geometric_discord_bell_diagonal(werner(q).unwrap()).unwrap(), q, 1e-15));
        }
        assert_eq!(geometric_discord_bell_diagonal(BellDiagonalSpec::new(1.0, 0.0, 0.0)).unwrap(), 0.0);
        let d = geometric_discord_bell_diagonal(BellDiagonalSpec::new(0.5, 0.5, 0.0)).unwrap();
        assert!(close(d, 1.0 / (2.0 * SQRT_2), 1e-15));
        assert!(matches!(
            geometric_discord_bell_diagonal(BellDiagonalSpec::new(1.0, 1.0, 1.0)),
            Err(RacError::InvalidState(_))
        ));
    }

    #[test]
    fn json_forms() {
        let s = TwoQubitState::from_json(r#"{"werner": 0.5}"#).unwrap();
        assert_eq!(s.diagonal().to_array(), [0.5, -0.5, 0.5]);
        let s = TwoQubitState::from_json(r#"{"bell_diagonal": [0.5, 0.5, 0]}"#).unwrap();
        assert_eq!(s.diagonal().to_array(), [0.5, 0.5, 0.0]);
        let full = r#"{"a0": [0.1, 0, 0], "b0": [0, 0, 0.2], "E": [[0.3,0,0],[0,0.1,0],[0,0,0]]}"#;
        let s = TwoQubitState::from_json(full).unwrap();
        assert_eq!(s.a0, Vec3::new(0.1, 0.0, 0.0));
        assert_eq!(TwoQubitState::from_json(&s.to_json()).unwrap(), s);
        assert!(TwoQubitState::from_json(r#"{"werner": 0.5, "extra": 1}"#).is_err());
        assert!(TwoQubitState::from_json(r#"{"a0": [0,0,0], "b0": [0,0,0]}"#).is_err());
    }
}
