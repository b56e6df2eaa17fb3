//! Canonical-code efficiency over Bell-diagonal states: separable optima,
//! the separable-versus-Werner comparison, and discord against efficiency.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{RacError, Result};
use crate::parallel::with_workers;
use crate::qstate::{geometric_discord_bell_diagonal, is_separable, werner, BellDiagonalSpec};
use crate::quantum_rac::pmin_closed_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Separability {
    Required,
    Ignored,
}

/// Bell-diagonal family with `|e_i| ≤ 1`. With separability required the
/// feasible set is the octahedron `|e1| + |e2| + |e3| ≤ 1`; otherwise it is the
/// positivity tetrahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateFamilyConstraint {
    pub separability: Separability,
}

impl StateFamilyConstraint {
    pub const SEPARABLE: Self = Self { separability: Separability::Required };
    pub const VALID: Self = Self { separability: Separability::Ignored };

    /// Half-spaces `a·e ≤ b`.
    pub fn half_spaces(&self) -> Vec<([f64; 3], f64)> {
        let mut hs = Vec::new();
        for k in 0..3 {
            let mut a = [0.0; 3];
            a[k] = 1.0;
            hs.push((a, 1.0));
            a[k] = -1.0;
            hs.push((a, 1.0));
        }
        match self.separability {
            Separability::Required => {
                for signs in 0..8 {
                    let s = |k: u32| if (signs >> k) & 1 == 1 { -1.0 } else { 1.0 };
                    hs.push(([s(0), s(1), s(2)], 1.0));
                }
            }
            Separability::Ignored => {
                hs.push(([1.0, 1.0, 1.0], 1.0));
                hs.push(([1.0, -1.0, -1.0], 1.0));
                hs.push(([-1.0, 1.0, -1.0], 1.0));
                hs.push(([-1.0, -1.0, 1.0], 1.0));
            }
        }
        hs
    }

    pub fn contains(&self, e: [f64; 3], tol: f64) -> bool {
        self.half_spaces().iter().all(|(a, b)| dot(a, &e) <= b + tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerSettings {
    pub grid_step: f64,
    /// Golden-section bracket width at which line searches stop.
    pub refine_tol: f64,
    pub workers: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { grid_step: 0.01, refine_tol: 1e-6, workers: 0 }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_step > 0.0 && self.grid_step <= 1.0) {
            return Err(RacError::Config(format!("grid step {} must lie in (0, 1]", self.grid_step)));
        }
        if !(self.refine_tol > 0.0) {
            return Err(RacError::Config(format!("refinement tolerance {} must be positive", self.refine_tol)));
        }
        Ok(())
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn axpy(e: [f64; 3], t: f64, d: [f64; 3]) -> [f64; 3] {
    [e[0] + t * d[0], e[1] + t * d[1], e[2] + t * d[2]]
}

const GRID_TOL: f64 = 1e-12;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes `objective` over the feasible region: full grid of spacing
/// `grid_step` on `[-1, 1]³`, then golden-section line searches along the
/// coordinate axes and the pairwise directions `e_i ± e_j` until a sweep gains
/// nothing. Returns the point and its value.
pub fn maximize_over_region<F>(
    objective: F,
    region: &StateFamilyConstraint,
    settings: &OptimizerSettings,
) -> Result<([f64; 3], f64)>
where
    F: Fn([f64; 3]) -> f64 + Sync,
{
    settings.validate()?;
    let steps = (2.0 / settings.grid_step).round() as usize;
    let coord = |k: usize| (-1.0 + 2.0 * k as f64 / steps as f64).clamp(-1.0, 1.0);
    let half_spaces = region.half_spaces();
    let feasible = |e: &[f64; 3]| half_spaces.iter().all(|(a, b)| dot(a, e) <= b + GRID_TOL);

    let slabs: Vec<Option<([f64; 3], f64)>> = with_workers(settings.workers, || {
        (0..=steps)
            .into_par_iter()
            .map(|i| {
                let mut best: Option<([f64; 3], f64)> = None;
                for j in 0..=steps {
                    for k in 0..=steps {
                        let e = [coord(i), coord(j), coord(k)];
                        if !feasible(&e) {
                            continue;
                        }
                        let v = objective(e);
                        if best.is_none_or(|(_, bv)| v > bv) {
                            best = Some((e, v));
                        }
                    }
                }
                best
            })
            .collect()
    });
    let (mut e, mut value) = slabs
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<([f64; 3], f64)>, c| match acc {
            Some(b) if c.1 <= b.1 => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| RacError::InvalidArgument("grid contains no feasible point".into()))?;

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let directions: [[f64; 3]; 9] = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [s, -s, 0.0],
        [s, 0.0, -s],
        [0.0, s, -s],
        [s, s, 0.0],
        [s, 0.0, s],
        [0.0, s, s],
    ];
    for _sweep in 0..500 {
        let start = value;
        for d in &directions {
            let (lo, hi) = feasible_interval(&half_spaces, e, *d);
            if hi - lo <= 0.0 {
                continue;
            }
            let (t, v) = golden_section(|t| objective(axpy(e, t, *d)), lo, hi, settings.refine_tol);
            if v > value {
                e = axpy(e, t, *d);
                value = v;
            }
        }
        if value <= start {
            break;
        }
    }
    Ok((e, value))
}

/// `t` range keeping `e + t·d` inside every half-space.
fn feasible_interval(half_spaces: &[([f64; 3], f64)], e: [f64; 3], d: [f64; 3]) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (a, b) in half_spaces {
        let ad = dot(a, &d);
        let slack = (b - dot(a, &e)).max(0.0);
        if ad > 1e-15 {
            hi = hi.min(slack / ad);
        } else if ad < -1e-15 {
            lo = lo.max(slack / ad);
        }
    }
    (lo, hi)
}

/// Maximum of a unimodal function on `[lo, hi]`, endpoints included.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let (a0, b0) = (lo, hi);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    [(mid, f(mid)), (a0, f(a0)), (b0, f(b0))].into_iter().fold((mid, f64::NEG_INFINITY), |best, c| {
        if c.1 > best.1 {
            c
        } else {
            best
        }
    })
}

/// Sign and order normal form: nonnegative, descending in the axes the n→1
/// code reads (`e3` stays last for n = 2). If that point leaves the region (the
/// tetrahedron is not sign-symmetric) the last component is negated.
pub fn canonicalize(n: usize, e: [f64; 3], region: &StateFamilyConstraint) -> [f64; 3] {
    let mut c = e.map(f64::abs);
    let used = n.min(3);
    c[..used].sort_by(|a, b| b.total_cmp(a));
    if !region.contains(c, 1e-9) {
        c[2] = -c[2];
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimumReport {
    pub n: usize,
    pub constraint: StateFamilyConstraint,
    pub spec: BellDiagonalSpec,
    pub p_min: f64,
    pub discord: f64,
    /// PPT verdict on the returned state.
    pub separable: bool,
}

/// Best canonical n→1 efficiency over Bell-diagonal states of the family.
pub fn best_bell_diagonal(
    n: usize,
    constraint: StateFamilyConstraint,
    settings: &OptimizerSettings,
) -> Result<OptimumReport> {
    if n != 2 && n != 3 {
        return Err(RacError::InvalidArgument(format!("canonical codes exist for n = 2 or 3, not {n}")));
    }
    let (e, _) = maximize_over_region(|e| pmin_closed_form(n, e), &constraint, settings)?;
    let canonical = canonicalize(n, e, &constraint);
    let spec = BellDiagonalSpec::from_array(canonical);
    let state = spec.to_state();
    let separable = is_separable(&state)?;
    if constraint.separability == Separability::Required && !separable {
        return Err(RacError::InvalidState(format!("optimizer returned {canonical:?}, which fails the PPT test")));
    }
    Ok(OptimumReport {
        n,
        constraint,
        spec,
        p_min: pmin_closed_form(n, canonical),
        discord: geometric_discord_bell_diagonal(spec)?,
        separable,
    })
}

pub fn best_separable_bell_diagonal(n: usize, settings: &OptimizerSettings) -> Result<OptimumReport> {
    best_bell_diagonal(n, StateFamilyConstraint::SEPARABLE, settings)
}

/// One state in a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub spec: BellDiagonalSpec,
    pub discord: f64,
    pub p_min: f64,
    pub separable: bool,
}

pub const COMPARISON_CSV_HEADER: &str = "label,e1,e2,e3,discord,p_min,separable";

impl ComparisonRow {
    /// Row for the canonical 2→1 code on `spec`; zero correlations give ½.
    pub fn two_to_one(label: impl Into<String>, spec: BellDiagonalSpec) -> Result<Self> {
        Ok(Self {
            label: label.into(),
            spec,
            discord: geometric_discord_bell_diagonal(spec)?,
            p_min: pmin_closed_form(2, spec.to_array()),
            separable: is_separable(&spec.to_state())?,
        })
    }

    pub fn werner(q: f64) -> Result<Self> {
        Self::two_to_one(format!("werner({q})"), werner(q)?)
    }

    /// `E = (½, ½, 0)`.
    pub fn separable_optimum() -> Self {
        Self::two_to_one("separable_optimum", BellDiagonalSpec::new(0.5, 0.5, 0.0)).expect("valid separable state")
    }

    pub fn csv_line(&self) -> String {
        let [e1, e2, e3] = self.spec.to_array();
        format!("{},{e1},{e2},{e3},{:.17},{:.17},{}", self.label, self.discord, self.p_min, self.separable)
    }
}

pub fn rows_to_csv(rows: &[ComparisonRow]) -> String {
    let mut out = format!("{COMPARISON_CSV_HEADER}\n");
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_line());
    }
    out
}

/// Ties closer than this count as equality in the crossover comparison.
pub const CROSSOVER_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Winner {
    Separable,
    Werner,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverPoint {
    pub q: f64,
    pub werner: ComparisonRow,
    pub separable: ComparisonRow,
    pub winner: Winner,
}

impl CrossoverPoint {
    /// The Werner state is entangled and still loses to the separable state.
    pub fn separable_beats_entangled(&self) -> bool {
        self.winner == Winner::Separable && !self.werner.separable
    }
}

/// Werner-assisted 2→1 code against the fixed separable optimum, per `q`.
pub fn crossover_analysis(q_grid: &[f64]) -> Result<Vec<CrossoverPoint>> {
    let separable = ComparisonRow::separable_optimum();
    q_grid
        .iter()
        .map(|&q| {
            let w = ComparisonRow::werner(q)?;
            let diff = separable.p_min - w.p_min;
            let winner = if diff.abs() <= CROSSOVER_TIE_TOL {
                Winner::Tie
            } else if diff > 0.0 {
                Winner::Separable
            } else {
                Winner::Werner
            };
            Ok(CrossoverPoint { q, werner: w, separable: separable.clone(), winner })
        })
        .collect()
}

pub fn crossover_to_csv(points: &[CrossoverPoint]) -> String {
    let mut out = String::from("q,werner_discord,werner_p_min,werner_separable,separable_p_min,winner\n");
    for p in points {
        let winner = match p.winner {
            Winner::Separable => "separable",
            Winner::Werner => "werner",
            Winner::Tie => "tie",
        };
        let _ = writeln!(
            out,
            "{},{:.17},{:.17},{},{:.17},{winner}",
            p.q, p.werner.discord, p.werner.p_min, p.werner.separable, p.separable.p_min
        );
    }
    out
}

/// Separable optimum followed by `samples` Werner states with discord evenly
/// spaced strictly inside `(1/(2√2), ½)`.
pub fn discord_efficiency_table(samples: usize) -> Result<Vec<ComparisonRow>> {
    let lo = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let hi = 0.5;
    let mut rows = vec![ComparisonRow::separable_optimum()];
    for k in 1..=samples {
        let q = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
        rows.push(ComparisonRow::werner(q)?);
    }
    Ok(rows)
}

/// Every Werner row has more discord but lower efficiency than the first row.
pub fn discord_does_not_order_efficiency(rows: &[ComparisonRow]) -> bool {
    let Some((reference, rest)) = rows.split_first() else {
        return false;
    };
    !rest.is_empty() && rest.iter().all(|r| r.discord > reference.discord && r.p_min < reference.p_min)
}
