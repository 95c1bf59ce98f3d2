mod common;

use common::{linear_problem_strategy, random_linear_problem};
use fairwpt::allocation::{lcrpm, ltrpm, LcrpmMode, LinearProblem, LinearSensorRecord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Best objective over the vertices of `{0 <= p <= cap, sum p <= budget}`:
/// every coordinate at 0 or its cap except at most one that takes the rest.
fn lp_vertex_optimum(problem: &LinearProblem) -> f64 {
    let s = problem.sensors();
    let n = s.len();
    let mut best = 0.0f64;
    for mask in 0..3usize.pow(n as u32) {
        let mut digits = mask;
        let mut p = vec![0.0; n];
        let mut free = None;
        let mut ok = true;
        for (k, pk) in p.iter_mut().enumerate() {
            match digits % 3 {
                0 => {}
                1 => *pk = s[k].cap,
                _ if free.is_none() => free = Some(k),
                _ => ok = false,
            }
            digits /= 3;
        }
        if !ok {
            continue;
        }
        let fixed: f64 = p.iter().sum();
        if fixed > problem.budget() * (1.0 + 1e-12) {
            continue;
        }
        if let Some(k) = free {
            p[k] = (problem.budget() - fixed).min(s[k].cap);
        }
        best = best.max(problem.objective(&p));
    }
    best
}

/// Largest common level every sensor can reach within its cap and the budget.
fn max_min_by_bisection(problem: &LinearProblem) -> f64 {
    let s = problem.sensors();
    let reach = s.iter().map(|r| r.level(r.cap)).fold(f64::INFINITY, f64::min);
    let need = |t: f64| -> f64 { s.iter().map(|r| ((t - r.u) / r.slope()).max(0.0)).sum() };
    let (mut lo, mut hi) = (s.iter().map(|r| r.u).fold(f64::INFINITY, f64::min), reach);
    if need(hi) <= problem.budget() {
        return reach;
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if need(mid) <= problem.budget() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Grid max-min for up to 3 sensors with the last one taking the remainder.
fn grid_max_min(problem: &LinearProblem, resolution: usize) -> f64 {
    let s = problem.sensors();
    let n = s.len();
    let axis = |k: usize| -> Vec<f64> {
        let top = s[k].cap.min(problem.budget());
        (0..resolution).map(|i| top * i as f64 / (resolution - 1) as f64).collect()
    };
    let total_cap: f64 = s.iter().map(|r| r.cap).sum();
    if total_cap <= problem.budget() {
        return s.iter().map(|r| r.level(r.cap)).fold(f64::INFINITY, f64::min);
    }
    let axes: Vec<Vec<f64>> = (0..n - 1).map(axis).collect();
    let mut best = f64::NEG_INFINITY;
    let mut idx = vec![0usize; n - 1];
    loop {
        let spent: f64 = idx.iter().enumerate().map(|(k, &i)| axes[k][i]).sum();
        let last = problem.budget() - spent;
        if (0.0..=s[n - 1].cap).contains(&last) {
            let mut v = s[n - 1].level(last);
            for (k, &i) in idx.iter().enumerate() {
                v = v.min(s[k].level(axes[k][i]));
            }
            best = best.max(v);
        }
        let mut d = 0;
        loop {
            if d == n - 1 {
                return best;
            }
            idx[d] += 1;
            if idx[d] < resolution {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[test]
fn ltrpm_fills_best_slope_first() {
    let rec = |h, l, cap| LinearSensorRecord::new(h, l, 0.0, cap).unwrap();
    let problem = LinearProblem::new(vec![rec(0.5, 0.1, 2.0), rec(0.5, 0.4, 1.5), rec(0.9, 0.1, 3.0)], 3.0).unwrap();
    let r = ltrpm(&problem);
    assert_eq!(r.powers, vec![0.0, 1.5, 1.5]);
}

#[test]
fn ltrpm_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..300 {
        let problem = random_linear_problem(&mut rng, 1 + case % 5);
        let ours = problem.objective(&ltrpm(&problem).powers);
        let best = lp_vertex_optimum(&problem);
        assert!((ours - best).abs() <= 1e-9 * best.max(1.0), "case {case}: {ours} vs {best}");
    }
}

#[test]
fn lcrpm_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..60 {
        let n = 1 + case % 3;
        let problem = random_linear_problem(&mut rng, n);
        let resolution = if n == 3 { 400 } else { 4000 };
        let ours = problem.min_level(&lcrpm(&problem, LcrpmMode::EqualizeLevels).powers);
        let grid = grid_max_min(&problem, resolution);
        let slope = problem.sensors().iter().map(|s| s.slope()).fold(0.0, f64::max);
        let cell = problem.budget() / (resolution - 1) as f64;
        assert!(ours >= grid - 1e-12, "case {case}: grid {grid} beat {ours}");
        assert!(ours - grid <= n as f64 * slope * cell, "case {case}: {ours} vs {grid}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lcrpm_reaches_max_min(problem in linear_problem_strategy(16)) {
        let ours = problem.min_level(&lcrpm(&problem, LcrpmMode::EqualizeLevels).powers);
        let best = max_min_by_bisection(&problem);
        prop_assert!((ours - best).abs() <= 1e-9 * best.abs().max(1.0), "{} vs {}", ours, best);
    }

    #[test]
    fn linear_solvers_are_feasible(problem in linear_problem_strategy(16)) {
        for r in [
            ltrpm(&problem),
            lcrpm(&problem, LcrpmMode::EqualizeLevels),
            lcrpm(&problem, LcrpmMode::EqualIncrement),
        ] {
            for (s, &p) in problem.sensors().iter().zip(&r.powers) {
                prop_assert!(p >= 0.0 && p <= s.cap);
            }
            prop_assert!(r.allocated() <= problem.budget() * (1.0 + 1e-12));
        }
    }
}
