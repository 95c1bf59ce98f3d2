mod common;

use common::{problem_strategy, random_problem};
use fairwpt::allocation::certificate::check_crpm_levels;
use fairwpt::allocation::{alpha_bracket, bisect_alpha, crpm, crpm_detailed, demand, epd, AllocationProblem, CrpmOptions};
use fairwpt::oracle::{grid_max_min, GridSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One grid cell of movement changes any sensor's level by at most this much.
fn level_tolerance(problem: &AllocationProblem, grid: &GridSpec) -> f64 {
    let slope = problem.sensors().iter().map(|s| s.a * s.b * s.lambda).fold(0.0, f64::max);
    problem.len() as f64 * slope * grid.cell_width(problem)
}

#[test]
fn matches_grid_max_min_on_seeded_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let grid = GridSpec { resolution: 200 };
    for case in 0..80 {
        let n = 1 + case % 3;
        let problem = random_problem(&mut rng, n);
        let r = crpm(&problem, CrpmOptions::default());
        let ours = problem.min_level(&r.powers);
        let g = grid_max_min(&problem, &grid).unwrap();
        let tol = level_tolerance(&problem, &grid);
        assert!(ours >= g.objective - 1e-9, "case {case}: grid {} beat solver {ours}", g.objective);
        assert!(ours - g.objective <= tol, "case {case}: {ours} vs grid {} (tol {tol})", g.objective);
    }
}

#[test]
fn bracket_contains_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let problem = random_problem(&mut rng, 6);
        let records = problem.sensors();
        let (lo, hi) = alpha_bracket(records, problem.budget());
        assert!(demand(records, lo) <= problem.budget() * (1.0 + 1e-12));
        assert!(demand(records, hi) >= problem.budget() * (1.0 - 1e-12));
        let alpha = bisect_alpha(records, problem.budget(), 1e-9).unwrap();
        assert!(lo <= alpha && alpha <= hi);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn levels_are_certified(problem in problem_strategy(16)) {
        let report = crpm_detailed(&problem, CrpmOptions::default());
        let check = check_crpm_levels(&problem, &report, 1e-9, 1e-9);
        prop_assert!(check.is_ok(), "{:?}", check);
    }

    #[test]
    fn spends_budget_or_saturates(problem in problem_strategy(16)) {
        let r = crpm(&problem, CrpmOptions::default());
        let cap: f64 = problem.sensors().iter().map(|s| s.cap).sum();
        let target = problem.budget().min(cap);
        prop_assert!((r.allocated() - target).abs() <= 1e-8 * problem.budget().max(1.0));
    }

    #[test]
    fn min_level_beats_equal_split(problem in problem_strategy(16)) {
        let ours = problem.min_level(&crpm(&problem, CrpmOptions::default()).powers);
        let even = problem.min_level(&epd(&problem).powers);
        prop_assert!(ours >= even - 1e-9);
    }

    #[test]
    fn permutation_invariant(problem in problem_strategy(8)) {
        let mut sensors = problem.sensors().to_vec();
        sensors.reverse();
        let flipped = AllocationProblem::new(sensors, problem.budget()).unwrap();
        let a = crpm(&problem, CrpmOptions::default());
        let b = crpm(&flipped, CrpmOptions::default());
        prop_assert!((problem.min_level(&a.powers) - flipped.min_level(&b.powers)).abs() <= 1e-9);
    }
}
