//! Max-min linear program over the four-point simplex, solved exactly by
//! vertex enumeration.
//!
//! Variables are `z = (p00, p01, p10, p11, t)`. We maximize `t` subject to
//! `s·p ≥ t` for every indicator row `s`, `p ≥ 0`, and either `Σp = 1` or Bob's
//! marginal fixed at `p00 + p10 = p01 + p11 = ½`. The feasible set is a pointed
//! polyhedron bounded above in `t`, so the optimum sits at a vertex: a point where
//! five linearly independent constraints are tight.

use serde::{Deserialize, Serialize};

use super::strategy::{ClassicalStrategy, SharedDistribution};

const VARS: usize = 5;
/// Active sets whose 5×5 system has `|det|` below this are skipped.
pub const SINGULAR_DET: f64 = 1e-12;
/// Slack allowed when checking a candidate vertex for feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Objective values this close are ties, broken by the lexicographically smallest `p`.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginalConstraint {
    #[default]
    None,
    /// Bob's shared bit is uniformly distributed.
    BobMixed,
}

impl std::str::FromStr for MarginalConstraint {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Self::None),
            "bob-mixed" | "bob_maximally_mixed" => Ok(Self::BobMixed),
            other => Err(format!("unknown constraint '{other}' (expected none or bob-mixed)")),
        }
    }
}

impl std::fmt::Display for MarginalConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::BobMixed => "bob-mixed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpSolution {
    pub distribution: SharedDistribution,
    /// `min_rows s·p` at the returned distribution.
    pub p_min: f64,
    /// Number of vertex candidates (nonsingular active sets) examined.
    pub candidates: usize,
}

#[derive(Clone, Copy)]
struct Constraint {
    a: [f64; VARS],
    b: f64,
}

fn equalities(constraint: MarginalConstraint) -> Vec<Constraint> {
    match constraint {
        MarginalConstraint::None => vec![Constraint { a: [1.0, 1.0, 1.0, 1.0, 0.0], b: 1.0 }],
        // Their sum is Σp = 1.
        MarginalConstraint::BobMixed => vec![
            Constraint { a: [1.0, 0.0, 1.0, 0.0, 0.0], b: 0.5 },
            Constraint { a: [0.0, 1.0, 0.0, 1.0, 0.0], b: 0.5 },
        ],
    }
}

/// Distinct rows not dominated componentwise by another row. Dropping a
/// dominated row `s ≥ s'` does not change the feasible set since `t ≤ s'·p ≤ s·p`.
pub fn reduce_rows(rows: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut distinct: Vec<[f64; 4]> = Vec::new();
    for r in rows {
        if !distinct.contains(r) {
            distinct.push(*r);
        }
    }
    distinct.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let dominated = |r: &[f64; 4]| distinct.iter().any(|o| o != r && o.iter().zip(r).all(|(x, y)| x <= y));
    distinct.iter().filter(|r| !dominated(r)).copied().collect()
}

/// Solves `A z = b` for a 5×5 system by Gaussian elimination with partial
/// pivoting. `None` when `|det A| < SINGULAR_DET`.
fn solve5(mut a: [[f64; VARS]; VARS], mut b: [f64; VARS]) -> Option<[f64; VARS]> {
    let mut det = 1.0;
    for col in 0..VARS {
        let pivot = (col..VARS).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in (col + 1)..VARS {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..VARS {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    if det.abs() < SINGULAR_DET {
        return None;
    }
    let mut z = [0.0; VARS];
    for row in (0..VARS).rev() {
        let tail: f64 = ((row + 1)..VARS).map(|k| a[row][k] * z[k]).sum();
        z[row] = (b[row] - tail) / a[row][row];
    }
    Some(z)
}

/// Visits every `k`-subset of `0..m` in lexicographic order.
fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            return;
        };
        idx[pos] += 1;
        for q in (pos + 1)..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn lex_less(a: &[f64; 4], b: &[f64; 4]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > 1e-12 {
            return x < y;
        }
    }
    false
}

/// Maximizes `min_rows s·p` over shared distributions.
pub fn maximin_distribution(rows: &[[f64; 4]], constraint: MarginalConstraint) -> LpSolution {
    assert!(!rows.is_empty(), "the program needs at least one success row");
    let reduced = reduce_rows(rows);
    let eqs = equalities(constraint);

    let mut ineqs: Vec<Constraint> =
        reduced.iter().map(|s| Constraint { a: [s[0], s[1], s[2], s[3], -1.0], b: 0.0 }).collect();
    for k in 0..4 {
        let mut a = [0.0; VARS];
        a[k] = 1.0;
        ineqs.push(Constraint { a, b: 0.0 });
    }

    let mut best: Option<(f64, [f64; 4])> = None;
    let mut candidates = 0usize;
    for_each_combination(ineqs.len(), VARS - eqs.len(), |active| {
        let mut a = [[0.0; VARS]; VARS];
        let mut b = [0.0; VARS];
        for (row, c) in eqs.iter().chain(active.iter().map(|&j| &ineqs[j])).enumerate() {
            a[row] = c.a;
            b[row] = c.b;
        }
        let Some(z) = solve5(a, b) else { return };
        candidates += 1;
        let feasible =
            ineqs.iter().all(|c| c.a.iter().zip(&z).map(|(x, y)| x * y).sum::<f64>() >= c.b - FEASIBILITY_TOL);
        if !feasible {
            return;
        }
        let t = z[4];
        let p = [z[0], z[1], z[2], z[3]];
        best = match best {
            None => Some((t, p)),
            Some((bt, _)) if t > bt + TIE_TOL => Some((t, p)),
            Some((bt, bp)) if t >= bt - TIE_TOL && lex_less(&p, &bp) => Some((t.max(bt), p)),
            keep => keep,
        };
    });

    let (_, p) = best.expect("the max-min program always has a feasible vertex");
    let p = p.map(|v| v.max(0.0));
    let sum: f64 = p.iter().sum();
    let distribution = SharedDistribution::new(p.map(|v| v / sum)).expect("vertex lies on the simplex");
    let q = distribution.as_array();
    let p_min = rows.iter().map(|s| s.iter().zip(&q).map(|(x, y)| x * y).sum::<f64>()).fold(f64::INFINITY, f64::min);
    LpSolution { distribution, p_min, candidates }
}

/// Best shared distribution for a fixed strategy, and its worst-case success.
pub fn optimal_distribution(strategy: &ClassicalStrategy, constraint: MarginalConstraint) -> LpSolution {
    maximin_distribution(&strategy.indicator_rows(), constraint)
}
