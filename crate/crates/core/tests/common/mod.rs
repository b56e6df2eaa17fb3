//! Independent oracles for integration tests: explicit 4×4 density matrices and
//! brute-force sums, sharing no code with the library's evaluators.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use rac_lab::classical::{ClassicalStrategy, SharedDistribution};
use rac_lab::qstate::{BellDiagonalSpec, TwoQubitState, Vec3};
use rac_lab::rng::SplitMix64;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

const O: C = C::new(0.0, 0.0);
const I1: C = C::new(1.0, 0.0);
const IM: C = C::new(0.0, 1.0);

pub fn paulis() -> [M2; 4] {
    [[[I1, O], [O, I1]], [[O, I1], [I1, O]], [[O, -IM], [IM, O]], [[I1, O], [O, -I1]]]
}

pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut m = [[O; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    m
}

/// `¼ Σ_{μν} T_{μν} σ_μ ⊗ σ_ν` with `T_{00} = 1`, `T_{i0} = a_i`, `T_{0j} = b_j`, `T_{ij} = E_ij`.
pub fn density(a0: [f64; 3], b0: [f64; 3], e: [[f64; 3]; 3]) -> M4 {
    let p = paulis();
    let mut t = [[0.0; 4]; 4];
    t[0][0] = 1.0;
    for i in 0..3 {
        t[i + 1][0] = a0[i];
        t[0][i + 1] = b0[i];
        for j in 0..3 {
            t[i + 1][j + 1] = e[i][j];
        }
    }
    let mut rho = [[O; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let k = kron(&p[mu], &p[nu]);
            for r in 0..4 {
                for c in 0..4 {
                    rho[r][c] += k[r][c] * (0.25 * t[mu][nu]);
                }
            }
        }
    }
    rho
}

pub fn density_of(s: &TwoQubitState) -> M4 {
    density(s.a0.to_array(), s.b0.to_array(), s.e)
}

/// Projector onto outcome `bit` of a measurement along unit vector `n`.
pub fn projector(n: [f64; 3], bit: u8) -> M2 {
    let p = paulis();
    let sign = if bit == 0 { 0.5 } else { -0.5 };
    let mut m = [[O; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = p[0][r][c] * 0.5 + (p[1][r][c] * n[0] + p[2][r][c] * n[1] + p[3][r][c] * n[2]) * sign;
        }
    }
    m
}

/// `Tr(ρ · A ⊗ B)`.
pub fn expectation(rho: &M4, a: &M2, b: &M2) -> f64 {
    let k = kron(a, b);
    let mut tr = O;
    for r in 0..4 {
        for c in 0..4 {
            tr += rho[r][c] * k[c][r];
        }
    }
    tr.re
}

pub fn bit_of(x: usize, i: usize, n: usize) -> u8 {
    ((x >> (n - i)) & 1) as u8
}

/// Success of the measure-and-send code: Alice measures `alice`, sends her
/// outcome α; Bob measures `bob` and outputs β ⊕ α.
pub fn quantum_success(rho: &M4, alice: [f64; 3], bob: [f64; 3], target: u8) -> f64 {
    let mut p = 0.0;
    for alpha in 0..2u8 {
        let beta = target ^ alpha;
        p += expectation(rho, &projector(alice, alpha), &projector(bob, beta));
    }
    p
}

/// Canonical code success table built from scratch, `[x][i - 1]`.
pub fn canonical_table(n: usize, spec: BellDiagonalSpec) -> Vec<Vec<f64>> {
    let e = spec.to_array();
    let rho = density_of(&spec.to_state());
    (0..1usize << n)
        .map(|x| {
            let mut v = [0.0; 3];
            for i in 1..=n {
                v[i - 1] = if bit_of(x, i, n) == 0 { 1.0 } else { -1.0 } / e[i - 1];
            }
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let dir = v.map(|c| c / norm);
            (1..=n)
                .map(|i| {
                    let mut axis = [0.0; 3];
                    axis[i - 1] = 1.0;
                    quantum_success(&rho, dir, axis, bit_of(x, i, n))
                })
                .collect()
        })
        .collect()
}

pub fn closed_form_pmin(n: usize, e: [f64; 3]) -> f64 {
    let s: f64 = e[..n].iter().map(|v| v.powi(-2)).sum();
    0.5 * (1.0 + s.powf(-0.5))
}

/// Brute-force classical success `Σ p(r_a, r_b) [decoded bit = x_i]`.
pub fn classical_success(s: &ClassicalStrategy, d: &SharedDistribution, x: usize, i: usize) -> f64 {
    let n = s.n();
    let mut p = 0.0;
    for ra in 0..2u8 {
        for rb in 0..2u8 {
            let c = s.encode(x, ra);
            if s.decode(i, c, rb) == bit_of(x, i, n) {
                p += d.p(ra, rb);
            }
        }
    }
    p
}

pub fn classical_pmin(s: &ClassicalStrategy, d: &SharedDistribution) -> f64 {
    let n = s.n();
    (0..1usize << n)
        .flat_map(|x| (1..=n).map(move |i| (x, i)))
        .map(|(x, i)| classical_success(s, d, x, i))
        .fold(f64::INFINITY, f64::min)
}

pub fn random_bell_diagonal(rng: &mut SplitMix64, min_abs: f64) -> BellDiagonalSpec {
    loop {
        let e = [rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)];
        let valid =
            [1.0 - e[0] - e[1] - e[2], 1.0 - e[0] + e[1] + e[2], 1.0 + e[0] - e[1] + e[2], 1.0 + e[0] + e[1] - e[2]]
                .iter()
                .all(|&v| v >= 0.0);
        if valid && e.iter().all(|v| v.abs() >= min_abs) {
            return BellDiagonalSpec::from_array(e);
        }
    }
}

pub fn unit(rng: &mut SplitMix64) -> Vec3 {
    loop {
        let v = Vec3::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}
