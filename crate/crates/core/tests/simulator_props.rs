use fairwpt::simulator::{Allocator, EhModel, Scheme, Selector, SimConfig, Simulation};
use proptest::prelude::*;

fn scheme_strategy() -> impl Strategy<Value = Scheme> {
    (
        prop_oneof![Just(Selector::Ssep), Just(Selector::RoundRobin)],
        prop_oneof![Just(Allocator::Crpm), Just(Allocator::Trpm), Just(Allocator::Epd)],
        prop_oneof![Just(EhModel::Log), Just(EhModel::Linear)],
    )
        .prop_map(|(s, a, e)| Scheme::new(s, a, e))
}

fn config(scheme: Scheme, seed: u64, fading_draws: usize) -> SimConfig {
    SimConfig {
        iterations: 60,
        batch_size: 20,
        fading_draws,
        ..SimConfig::default()
    }
    .with_scheme(scheme)
    .with_seed(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_round_is_feasible(scheme in scheme_strategy(), seed in any::<u64>(), draws in prop_oneof![Just(1usize), Just(1000)]) {
        let cfg = config(scheme, seed, draws);
        let mut sim = Simulation::new(cfg.clone()).unwrap();
        for _ in 0..cfg.iterations {
            let before = sim.energy().to_vec();
            let round = sim.step();
            prop_assert_eq!(round.selected.len(), cfg.n_c);
            let mut distinct = round.selected.clone();
            distinct.dedup();
            prop_assert_eq!(distinct.len(), cfg.n_c);
            prop_assert!(round.allocated <= cfg.e_c * (1.0 + 1e-12));
            for &p in &round.powers {
                prop_assert!((0.0..=cfg.p_c).contains(&p));
            }
            for (k, (&b, &a)) in before.iter().zip(sim.energy()).enumerate() {
                prop_assert!(a >= b);
                if !round.selected.contains(&k) {
                    prop_assert_eq!(a, b);
                }
            }
            for pos in sim.positions() {
                prop_assert!(pos.distance >= cfg.d_min);
            }
        }
    }

    #[test]
    fn streams_are_paired_across_schemes(a in scheme_strategy(), b in scheme_strategy(), seed in any::<u64>()) {
        let mut x = Simulation::new(config(a, seed, 1)).unwrap();
        let mut y = Simulation::new(config(b, seed, 1)).unwrap();
        prop_assert_eq!(x.rectifiers(), y.rectifiers());
        for _ in 0..20 {
            x.step();
            y.step();
            prop_assert_eq!(x.positions(), y.positions());
        }
    }

    #[test]
    fn runs_are_reproducible(scheme in scheme_strategy(), seed in any::<u64>()) {
        let a = fairwpt::run(config(scheme, seed, 1000)).unwrap();
        let b = fairwpt::run(config(scheme, seed, 1000)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn ssep_serves_the_poorest() {
    let cfg = config(Scheme::new(Selector::Ssep, Allocator::Crpm, EhModel::Log), 5, 1);
    let mut sim = Simulation::new(cfg.clone()).unwrap();
    for _ in 0..cfg.iterations {
        let before = sim.energy().to_vec();
        let round = sim.step();
        let worst_served = round.selected.iter().map(|&k| before[k]).fold(f64::NEG_INFINITY, f64::max);
        for k in (0..cfg.m).filter(|k| !round.selected.contains(k)) {
            assert!(before[k] >= worst_served);
        }
    }
}
