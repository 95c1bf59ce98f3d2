#![allow(dead_code)]

use fairwpt::allocation::{AllocationProblem, LinearProblem, LinearSensorRecord, SensorRecord};
use fairwpt::simulator::default_rectifier_options;
use proptest::prelude::*;
use rand::Rng;

/// Log-uniform draw on `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..=hi.ln())).exp()
}

/// A sensor at either textbook scale or the scale the simulator produces.
pub fn random_record<R: Rng + ?Sized>(rng: &mut R) -> SensorRecord {
    if rng.random_bool(0.5) {
        SensorRecord::new(
            log_uniform(rng, 0.01, 1.0),
            log_uniform(rng, 0.1, 10.0),
            log_uniform(rng, 1e-3, 1.0),
            rng.random_range(0.0..0.5),
            log_uniform(rng, 0.1, 5.0),
        )
        .unwrap()
    } else {
        let catalogue = default_rectifier_options();
        let r = catalogue[rng.random_range(0..catalogue.len())];
        let lambda = log_uniform(rng, 1e-7, 1e-4);
        SensorRecord::new(r.a, r.b, lambda, rng.random_range(0.0..2e-4), (r.c / lambda).min(4.0)).unwrap()
    }
}

pub fn random_problem<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AllocationProblem {
    let sensors = (0..n).map(|_| random_record(rng)).collect();
    AllocationProblem::new(sensors, log_uniform(rng, 0.2, 8.0)).unwrap()
}

pub fn random_linear_problem<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LinearProblem {
    let sensors = (0..n)
        .map(|_| {
            LinearSensorRecord::new(
                rng.random_range(0.05..1.0),
                log_uniform(rng, 1e-3, 1.0),
                rng.random_range(0.0..0.5),
                log_uniform(rng, 0.1, 5.0),
            )
            .unwrap()
        })
        .collect();
    LinearProblem::new(sensors, log_uniform(rng, 0.2, 8.0)).unwrap()
}

pub fn record_strategy() -> impl Strategy<Value = SensorRecord> {
    (0.01f64..1.0, 0.1f64..10.0, 1e-3f64..1.0, 0.0f64..0.5, 0.05f64..5.0)
        .prop_map(|(a, b, l, u, cap)| SensorRecord::new(a, b, l, u, cap).unwrap())
}

pub fn problem_strategy(max_n: usize) -> impl Strategy<Value = AllocationProblem> {
    (prop::collection::vec(record_strategy(), 1..=max_n), 0.05f64..10.0)
        .prop_map(|(s, e)| AllocationProblem::new(s, e).unwrap())
}

pub fn linear_record_strategy() -> impl Strategy<Value = LinearSensorRecord> {
    (0.05f64..1.0, 1e-3f64..1.0, 0.0f64..0.5, 0.05f64..5.0)
        .prop_map(|(h, l, u, cap)| LinearSensorRecord::new(h, l, u, cap).unwrap())
}

pub fn linear_problem_strategy(max_n: usize) -> impl Strategy<Value = LinearProblem> {
    (prop::collection::vec(linear_record_strategy(), 1..=max_n), 0.05f64..10.0)
        .prop_map(|(s, e)| LinearProblem::new(s, e).unwrap())
}
