//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::f64::consts::SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use rac_lab::classical::{
    concatenated_classical_search, exhaustive_search, guess_point, optimal_distribution, pruned_search,
    random_strategy, ClassicalStrategy, EncodingFilter, MarginalConstraint, SharedDistribution,
};
use rac_lab::optimize::{best_separable_bell_diagonal, crossover_analysis, OptimizerSettings, Winner};
use rac_lab::qstate::{
    alice_outcome_prob, bob_conditional_from_density, geometric_discord_bell_diagonal, is_separable, measure_prob,
    post_measurement_bob, werner, BellDiagonalSpec, TwoQubitState, Vec3,
};
use rac_lab::quantum_rac::{
    canonical_protocol, concatenated_pmin_formula, concatenated_pmin_recursive, evaluate, pmin_formula,
    prepare_and_measure_pmin,
};
use rac_lab::rng::SplitMix64;

const SEED: u64 = 20240611;

type Check = fn() -> (bool, String);

fn ac1() -> (bool, String) {
    let start = Instant::now();
    let r = exhaustive_search(2, MarginalConstraint::None, EncodingFilter::All, 0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let BestCodeSingle { strategy, dist } = single(&r.best);
    let oracle = classical_pmin(&strategy, &dist);
    let ok = (r.best_p_min - 2.0 / 3.0).abs() <= 1e-9 && (oracle - 2.0 / 3.0).abs() <= 1e-9 && secs < 300.0;
    (ok, format!("best {:.12}, oracle {oracle:.12}, {} strategies, {secs:.1}s", r.best_p_min, r.strategies_examined))
}

fn ac2() -> (bool, String) {
    let r = exhaustive_search(2, MarginalConstraint::BobMixed, EncodingFilter::All, 0).unwrap();
    let BestCodeSingle { strategy, dist } = single(&r.best);
    let marginal = dist.p(0, 0) + dist.p(1, 0);
    let oracle = classical_pmin(&strategy, &dist);
    let ok = (r.best_p_min - 0.5).abs() <= 1e-9 && (oracle - 0.5).abs() <= 1e-9 && (marginal - 0.5).abs() <= 1e-12;
    (ok, format!("best {:.12}, Bob marginal {marginal}", r.best_p_min))
}

fn ac3() -> (bool, String) {
    let r = pruned_search(3, 1000, SEED, 0).unwrap();
    let unpruned = r.strategies_examined - r.strategies_pruned;
    // Independent pigeonhole count: 8 inputs over 4 encoding functions.
    let mut rng = SplitMix64::new(SEED);
    let mut worst = 0.0f64;
    let mut no_collision = 0;
    for _ in 0..1000 {
        let s = random_strategy(3, &mut rng);
        let mut seen = [false; 4];
        if (0..8).all(|x| !std::mem::replace(&mut seen[s.encoding_fn(x).index()], true)) {
            no_collision += 1;
        }
        let sol = optimal_distribution(&s, MarginalConstraint::None);
        worst = worst.max(classical_pmin(&s, &sol.distribution));
    }
    let ok = unpruned == 0 && r.certified_upper_bound == Some(0.5) && no_collision == 0 && worst <= 0.5 + 1e-9;
    (ok, format!("{unpruned} unpruned encodings, max over 1000 random strategies {worst:.12}"))
}

fn ac4() -> (bool, String) {
    let s = ClassicalStrategy::table1();
    let t = 1.0 / 3.0;
    let d = SharedDistribution::new([t, t, t, 0.0]).unwrap();
    let p = classical_pmin(&s, &d);
    let table = [[t, t], [0.0, 2.0 * t], [1.0, t], [2.0 * t, 2.0 * t]];
    let mut err = 0.0f64;
    for (x, row) in table.iter().enumerate() {
        for (g, w) in guess_point(&s, &d, x).iter().zip(row) {
            err = err.max((g - w).abs());
        }
    }
    ((p - 2.0 / 3.0).abs() <= 1e-12 && err <= 1e-12, format!("p_min {p:.15}, guess-point error {err:.1e}"))
}

fn ac5() -> (bool, String) {
    let mut worst = 0.0f64;
    for j in 0..1000 {
        let mut rng = SplitMix64::for_sample(SEED, j);
        let spec = random_bell_diagonal(&mut rng, 1e-3);
        for n in [2, 3] {
            let sim = evaluate(&canonical_protocol(n, spec).unwrap(), &spec.to_state()).unwrap();
            let closed = closed_form_pmin(n, spec.to_array());
            worst = worst.max((sim.p_min() - closed).abs());
            worst = worst.max((pmin_formula(n, spec).unwrap() - closed).abs());
            let oracle = canonical_table(n, spec);
            for (x, row) in oracle.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    worst = worst.max((sim.success(x, k + 1) - v).abs());
                }
            }
        }
    }
    (worst <= 1e-10, format!("max deviation {worst:.2e}"))
}

fn ac6() -> (bool, String) {
    let mut worst = 0.0f64;
    for k in 1..=100 {
        let q = k as f64 / 100.0;
        let w = werner(q).unwrap();
        for n in [2usize, 3] {
            let r = evaluate(&canonical_protocol(n, w).unwrap(), &w.to_state()).unwrap();
            worst = worst.max((r.p_min() - 0.5 * (1.0 + q / (n as f64).sqrt())).abs());
        }
        worst = worst.max((geometric_discord_bell_diagonal(w).unwrap() - q).abs());
    }
    (worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn ac7() -> (bool, String) {
    let settings = OptimizerSettings::default();
    let o2 = best_separable_bell_diagonal(2, &settings).unwrap();
    let o3 = best_separable_bell_diagonal(3, &settings).unwrap();
    let t = 1.0 / 3.0;
    let close = |a: [f64; 3], b: [f64; 3]| a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-4);
    let ok = (o2.p_min - 0.5 * (1.0 + 1.0 / (2.0 * SQRT_2))).abs() <= 1e-6
        && (o3.p_min - 0.5 * (1.0 + 1.0 / (3.0 * 3f64.sqrt()))).abs() <= 1e-6
        && (o2.p_min - 0.676777).abs() <= 1e-6
        && (o3.p_min - 0.596225).abs() <= 1e-6
        && close(o2.spec.to_array(), [0.5, 0.5, 0.0])
        && close(o3.spec.to_array(), [t, t, t])
        && o2.separable
        && o3.separable;
    (ok, format!("n=2 {:.9} at {:?}; n=3 {:.9} at {:?}", o2.p_min, o2.spec.to_array(), o3.p_min, o3.spec.to_array()))
}

fn ac8() -> (bool, String) {
    let mut worst = 0.0f64;
    for k in 0..=20 {
        let d = k as f64 * 0.05;
        let base = 0.5 * (1.0 + d / SQRT_2);
        for m in 1..=20u32 {
            let closed = 0.5 * (1.0 + (d / SQRT_2).powi(m as i32));
            worst = worst.max((concatenated_pmin_recursive(base, m).unwrap() - closed).abs());
            worst = worst.max((concatenated_pmin_formula(d, m).unwrap() - closed).abs());
        }
    }
    (worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn ac9() -> (bool, String) {
    let sep = 0.5 * (1.0 + 1.0 / (2.0 * SQRT_2));
    let grid = [0.35, 0.40, 0.45, 0.49, 0.5, 0.51, 0.7, 1.0];
    let pts = crossover_analysis(&grid).unwrap();
    let mut ok = true;
    for p in &pts {
        let w = 0.5 * (1.0 + p.q / SQRT_2);
        ok &= (p.werner.p_min - w).abs() <= 1e-12 && (p.separable.p_min - sep).abs() <= 1e-12;
        ok &= match p.q {
            q if q < 0.5 => p.winner == Winner::Separable && sep > w && p.separable_beats_entangled(),
            0.5 => p.winner == Winner::Tie && (sep - w).abs() <= 1e-12,
            _ => p.winner == Winner::Werner && w > sep,
        };
    }
    (ok, format!("gap at q=0.5: {:.1e}", (pts[4].separable.p_min - pts[4].werner.p_min).abs()))
}

fn ac10() -> (bool, String) {
    // Oracle: the partial transpose of a Werner state has smallest eigenvalue (1 - 3q)/4.
    let third = 1.0 / 3.0;
    let mut mismatches = 0;
    for k in 0..=1000 {
        let q = k as f64 / 1000.0;
        if (q - third).abs() <= 1e-9 {
            continue;
        }
        let oracle = (1.0 - 3.0 * q) / 4.0 >= 0.0;
        if is_separable(&werner(q).unwrap().to_state()).unwrap() != oracle {
            mismatches += 1;
        }
    }
    let at = is_separable(&werner(third).unwrap().to_state()).unwrap();
    let above = is_separable(&werner(third + 1e-6).unwrap().to_state()).unwrap();
    (
        mismatches == 0 && at && !above,
        format!("{mismatches} mismatches; q=1/3 separable {at}; q=1/3+1e-6 separable {above}"),
    )
}

fn ac11() -> (bool, String) {
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let q = k as f64 / 100.0;
        worst = worst.max((prepare_and_measure_pmin(q).unwrap() - 0.5 * (1.0 + q / SQRT_2)).abs());
    }
    (worst <= 1e-12, format!("max deviation {worst:.2e}"))
}

fn ac12() -> (bool, String) {
    let r = concatenated_classical_search(100_000, SEED, 0).unwrap();
    let re = r.reevaluate();
    (
        r.strategies_examined >= 100_000 && r.best_p_min <= 0.5 + 1e-9 && re <= 0.5 + 1e-9,
        format!("{} samples, best {:.12}", r.strategies_examined, r.best_p_min),
    )
}

fn ac13() -> (bool, String) {
    let mut worst = [0.0f64; 6];
    let names = ["normalization", "total Bloch", "density route", "invariance", "LP dominance", "pigeonhole"];
    for j in 0..1000 {
        let mut rng = SplitMix64::for_sample(SEED ^ 0xac13, j);
        let dir = unit(&mut rng);
        let s = rac_lab::reproduce::random_ball(&mut rng);
        worst[0] = worst[0].max((measure_prob(s, dir, 0).unwrap() + measure_prob(s, dir, 1).unwrap() - 1.0).abs());

        let st: TwoQubitState = rac_lab::reproduce::random_state(&mut rng);
        let rho = density_of(&st);
        let mut total = Vec3::ZERO;
        for a in 0..2u8 {
            let p = alice_outcome_prob(&st, dir, a).unwrap();
            let b = post_measurement_bob(&st, dir, a).unwrap();
            total = total + b * p;
            let (_, via_density) = bob_conditional_from_density(&st, dir, a).unwrap();
            worst[2] = worst[2].max(b.max_abs_diff(via_density));
            // Oracle: Bob's Bloch component k is Tr(ρ P_a ⊗ σ_k) / p.
            let pa = projector(dir.to_array(), a);
            let pauli = paulis();
            for k in 0..3 {
                let comp = expectation(&rho, &pa, &pauli[k + 1]) / p;
                worst[2] = worst[2].max((comp - b.to_array()[k]).abs());
            }
        }
        worst[1] = worst[1].max(total.max_abs_diff(st.b0));

        let spec = random_bell_diagonal(&mut rng, 1e-3);
        let [a, b, c] = spec.to_array();
        let d0 = geometric_discord_bell_diagonal(spec).unwrap();
        let p0 = pmin_formula(3, spec).unwrap();
        for v in [[-a, -b, c], [-a, b, -c], [b, c, a], [c, b, a]] {
            let s2 = BellDiagonalSpec::from_array(v);
            worst[3] = worst[3].max((geometric_discord_bell_diagonal(s2).unwrap() - d0).abs());
            worst[3] = worst[3].max((pmin_formula(3, s2).unwrap() - p0).abs());
        }

        let n = if j % 2 == 0 { 2 } else { 3 };
        let strat = random_strategy(n, &mut rng);
        let sol = optimal_distribution(&strat, MarginalConstraint::None);
        let uniform = classical_pmin(&strat, &SharedDistribution::uniform());
        worst[4] = worst[4].max(uniform - sol.p_min).max((classical_pmin(&strat, &sol.distribution) - sol.p_min).abs());
        if n == 3 {
            worst[5] = worst[5].max(sol.p_min - 0.5 - 1e-9);
        }
    }
    let ok = worst.iter().all(|&w| w <= 1e-10);
    let detail = names.iter().zip(worst).map(|(n, w)| format!("{n} {w:.1e}")).collect::<Vec<_>>().join(", ");
    (ok, detail)
}

struct BestCodeSingle {
    strategy: ClassicalStrategy,
    dist: SharedDistribution,
}

fn single(best: &rac_lab::classical::BestCode) -> BestCodeSingle {
    match best {
        rac_lab::classical::BestCode::Single { strategy, distribution } => {
            BestCodeSingle { strategy: strategy.clone(), dist: *distribution }
        }
        other => panic!("expected a single strategy, got {other:?}"),
    }
}

fn main() {
    let checks: [(&str, &str, Check); 13] = [
        ("1", "exhaustive n=2 optimum is 2/3", ac1),
        ("2", "Bob-mixed n=2 optimum is 1/2", ac2),
        ("3", "n=3 pruned certificate and spot checks", ac3),
        ("4", "optimal 2->1 strategy and guess points", ac4),
        ("5", "evaluator vs closed forms on random states", ac5),
        ("6", "Werner efficiency and discord", ac6),
        ("7", "separable optimizer", ac7),
        ("8", "concatenation recursion", ac8),
        ("9", "crossover against Werner states", ac9),
        ("10", "Werner PPT boundary", ac10),
        ("11", "prepare-and-measure efficiency", ac11),
        ("12", "sampled concatenated classical codes", ac12),
        ("13", "property suite", ac13),
    ];
    let mut failures = 0;
    for (id, name, check) in checks {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !ok {
            failures += 1;
        }
        println!("{} criterion {id:>2}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
    }
    println!("{} of 13 criteria passed", 13 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
