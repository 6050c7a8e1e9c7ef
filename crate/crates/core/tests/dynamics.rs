use proptest::prelude::*;
use spinmarket::dynamics::{step, threshold_sign, MirroredNoise, SeededSource};
use spinmarket::{ModelParams, Simulation, Spin, SpinLattice, ThresholdMode};

fn mode(live: bool) -> ThresholdMode {
    if live {
        ThresholdMode::Live
    } else {
        ThresholdMode::Frozen
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cached_sum_tracks_lattice(
        side in 2usize..=16,
        coupling in -2.0f64..3.0,
        sigma in 0.0f64..4.0,
        lambda in 0.0f64..20.0,
        live: bool,
        seed: u64,
    ) {
        let params = ModelParams {
            coupling, sigma, lambda, side, seed,
            threshold_mode: mode(live),
            ..ModelParams::default()
        };
        let mut sim = Simulation::new(params).unwrap();
        for _ in 0..100 {
            let m = sim.step();
            let lat = sim.lattice();
            let brute: i64 = lat.spins().iter().map(|s| s.value() as i64).sum();
            prop_assert_eq!(lat.spin_sum(), brute);
            prop_assert_eq!(m, brute as f64 / lat.len() as f64);
            prop_assert!(lat.spin_sum().unsigned_abs() as usize <= lat.len());
            prop_assert!(lat.spins().iter().all(|s| Spin::ALL.contains(s)));
        }
    }

    #[test]
    fn threshold_sign_is_odd(x in -50.0f64..50.0, q in 0.0f64..20.0) {
        prop_assume!(x.abs() != q);
        prop_assert_eq!(threshold_sign(-x, q), -threshold_sign(x, q));
    }

    #[test]
    fn threshold_sign_monotone_in_x(a in -50.0f64..50.0, b in -50.0f64..50.0, q in 0.0f64..20.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(threshold_sign(lo, q).value() <= threshold_sign(hi, q).value());
    }

    #[test]
    fn wider_dead_zone_never_activates(x in -50.0f64..50.0, a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let (q1, q2) = if a <= b { (a, b) } else { (b, a) };
        prop_assume!(x.abs() != q1 && x.abs() != q2);
        prop_assert!(threshold_sign(x, q1).value().abs() >= threshold_sign(x, q2).value().abs());
    }
}

#[test]
fn global_flip_with_mirrored_noise_negates_trajectory() {
    for (seed, live) in [(11u64, false), (12, true), (13, false)] {
        let params = ModelParams {
            coupling: 1.0,
            sigma: 1.0,
            lambda: 10.0,
            side: 16,
            thermalization_steps: 0,
            measurement_steps: 300,
            seed,
            threshold_mode: mode(live),
        };
        let start = Simulation::new(params.clone()).unwrap().lattice().clone();
        let a = Simulation::with_source(params.clone(), start.clone(), SeededSource::new(seed))
            .unwrap()
            .run();
        let b = Simulation::with_source(params, start.negated(), MirroredNoise(SeededSource::new(seed)))
            .unwrap()
            .run();
        assert!(a.values.iter().any(|&m| m != 0.0));
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(*x, -*y);
        }
    }
}

#[test]
fn zero_threshold_never_leaves_inactive_agents() {
    let params = ModelParams {
        lambda: 0.0,
        side: 16,
        thermalization_steps: 500,
        measurement_steps: 2000,
        seed: 5,
        ..ModelParams::default()
    };
    let mut sim = Simulation::new(params).unwrap();
    assert!(sim.lattice().count(Spin::Zero) > 0);
    sim.thermalize();
    let mut zeros = 0;
    sim.measure_with(|lat| zeros += lat.count(Spin::Zero));
    assert_eq!(zeros, 0);
}

#[test]
fn large_threshold_silences_a_saturated_lattice() {
    // With q = 10 the maximal field 4 and zero noise cannot activate anyone.
    let params = ModelParams {
        coupling: 1.0,
        sigma: 0.0,
        lambda: 10.0,
        side: 8,
        ..ModelParams::default()
    };
    let mut lat = SpinLattice::filled(8, Spin::Up).unwrap();
    let mut src = SeededSource::new(0);
    let m = step(&mut lat, &params, &mut src);
    assert!(m < 1.0);
    assert!(lat.count(Spin::Zero) > 0);
    assert_eq!(lat.count(Spin::Down), 0);
}

#[test]
fn samples_lie_on_the_magnetization_grid() {
    let params = ModelParams {
        lambda: 10.0,
        side: 32,
        thermalization_steps: 200,
        measurement_steps: 1000,
        seed: 42,
        ..ModelParams::default()
    };
    let m = spinmarket::run_simulation(&params).unwrap();
    assert_eq!(m.len(), 1000);
    assert_eq!(m.t0, 200);
    for v in m.values {
        assert!((-1.0..=1.0).contains(&v));
        let k = v * 1024.0;
        assert_eq!(k, k.round());
    }
}
