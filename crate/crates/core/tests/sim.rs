mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zewlab::catalog;
use zewlab::experiments::recipes::{self, reference_params, RecipeOptions};
use zewlab::rational::{int, parse, pow, ratio, to_f64, Interval, Rational};
use zewlab::sim::eve::{certify_symmetric, EveState};
use zewlab::sim::{
    run_scheme, security_report, simulate_plant, witness_path, BoundaryPolicy, ChannelPolicy,
    Disturbance, EveMode, SchemeConfig,
};
use zewlab::{Quantizer, SystemParams};

#[test]
fn plant_recursion_by_hand() {
    let p = SystemParams::parse("1.2", "1.2", ("-1", "1")).unwrap();
    let tr = simulate_plant(
        &p,
        int(1),
        2,
        &Disturbance::Fixed(vec![parse("0.6").unwrap()]),
        0,
    )
    .unwrap();
    assert_eq!(tr.states[1], parse("1.8").unwrap());
    assert_eq!(tr.states[2], parse("2.76").unwrap());

    let p = SystemParams::parse("1.5", "0", ("-1", "1")).unwrap();
    let tr = simulate_plant(
        &p,
        ratio(1, 3),
        10,
        &Disturbance::SeededUniform { grid: 10 },
        9,
    )
    .unwrap();
    for (t, x) in tr.states.iter().enumerate() {
        assert_eq!(*x, pow(&ratio(3, 2), t as u32) * ratio(1, 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plant_stays_in_reach(seed in any::<u64>(), extremal in any::<bool>()) {
        let p = reference_params();
        let policy = if extremal { Disturbance::Extremal } else { Disturbance::SeededUniform { grid: 97 } };
        let tr = simulate_plant(&p, parse("-0.25").unwrap(), 40, &policy, seed).unwrap();
        tr.validate(&p).unwrap();
        for (t, x) in tr.states.iter().enumerate() {
            prop_assert!(p.reachable_interval(t).contains(x));
        }
    }
}

#[test]
fn witness_paths_hit_their_cells() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let params = reference_params();
    let q = Quantizer::new(params.clone(), 3).unwrap();
    for _ in 0..1000 {
        let len = rng.random_range(1..=12);
        let prefix: Vec<usize> = (0..len).map(|_| rng.random_range(0..3)).collect();
        let tr = witness_path(&params, 3, 1, &prefix).unwrap();
        tr.validate(&params).unwrap();
        for k in 0..len {
            assert!(q.cell(&prefix[..=k]).unwrap().p.contains(&tr.states[k]));
        }
    }
}

#[test]
fn witness_path_follows_feasible_midpoints() {
    // With M = 5 the three central parts sit within Ω/2 of λ·x̂.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let params = reference_params();
    let q = Quantizer::new(params.clone(), 5).unwrap();
    for _ in 0..100 {
        let prefix: Vec<usize> = (0..10).map(|_| rng.random_range(1..=3)).collect();
        let tr = witness_path(&params, 5, 1, &prefix).unwrap();
        for k in 0..prefix.len() {
            assert_eq!(tr.states[k], q.midpoint_closed_form(&prefix[..=k]).unwrap());
        }
    }
}

#[test]
fn witness_paths_with_longer_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = SystemParams::parse("1.1", "0.5", ("-2", "1")).unwrap();
    for n in 2..=3 {
        let q = Quantizer::new(params.sampled(n).unwrap(), 4).unwrap();
        for _ in 0..50 {
            let prefix: Vec<usize> = (0..8).map(|_| rng.random_range(0..4)).collect();
            let tr = witness_path(&params, 4, n, &prefix).unwrap();
            for k in 0..prefix.len() {
                assert!(q.cell(&prefix[..=k]).unwrap().p.contains(&tr.states[k * n]));
            }
        }
    }
}

fn grid_measure(cells: &[Interval], points: usize) -> f64 {
    let lo = cells
        .iter()
        .map(|c| to_f64(c.lo()))
        .fold(f64::MAX, f64::min);
    let hi = cells
        .iter()
        .map(|c| to_f64(c.hi()))
        .fold(f64::MIN, f64::max);
    let pairs: Vec<(f64, f64)> = cells.iter().map(Interval::to_f64_pair).collect();
    let step = (hi - lo) / points as f64;
    let hits = (0..points)
        .filter(|i| {
            let x = lo + (*i as f64 + 0.5) * step;
            pairs.iter().any(|&(a, b)| a <= x && x <= b)
        })
        .count();
    hits as f64 * step
}

#[test]
fn eve_volume_matches_grid_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..12 {
        let omega = ratio(rng.random_range(0..=15), 10);
        let lambda = ratio(rng.random_range(11..=25), 10);
        let m = rng.random_range(3..=4);
        let params = SystemParams::new(lambda, omega, Interval::parse("-1", "1").unwrap()).unwrap();
        let q = Quantizer::new(params, m).unwrap();
        let mut eve = EveState::new(q.clone(), 1 << 16);
        for k in 0..6 {
            let mut menu: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.6)).collect();
            if menu.is_empty() {
                menu.push(rng.random_range(0..m));
            }
            eve.update(&menu).unwrap();
            let len = q.cell_length(k).unwrap();
            let cells: Vec<Interval> = eve
                .candidates()
                .iter()
                .map(|c| Interval::centered(c, &len))
                .collect();
            let exact = to_f64(&eve.stats().unwrap().volume);
            let approx = grid_measure(&cells, 200_000);
            assert!(
                (approx - exact).abs() <= 0.01 * exact,
                "{approx} vs {exact}"
            );
        }
    }
}

#[test]
fn full_confusion_without_noise_grows_exactly() {
    let params = SystemParams::parse("1.5", "0", ("-1", "1")).unwrap();
    let wt = catalog::full_confusion(2);
    let code = zewlab::WiretapCode::new(1, vec![vec![vec![0]], vec![vec![1]]]).unwrap();
    let cfg = SchemeConfig::new(params.clone(), wt, code, 12);
    for k in 0..12 {
        let x = ratio(2 * k - 11, 12);
        let tr = simulate_plant(&params, x, 12, &Disturbance::Extremal, 0).unwrap();
        let out = run_scheme(&cfg, &tr).unwrap();
        for b in &out.blocks {
            assert_eq!(b.eve_count, Some(1 << (b.k + 1)));
            assert_eq!(b.eve_volume, int(2) * pow(&ratio(3, 2), b.k as u32));
        }
        let rep = security_report(&out).unwrap();
        assert!((rep.bound - 1.5f64.log2()).abs() < 1e-15);
        assert!(rep.v_certified());
    }
}

#[test]
fn estimation_error_within_half_kappa() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for run in 0..40 {
        let omega = ["0", "0.3", "1.2"][run % 3];
        let params = SystemParams::parse("1.2", omega, ("-1", "1")).unwrap();
        let mut cfg =
            SchemeConfig::new(params.clone(), catalog::fig2b(), catalog::fig2b_code(), 20);
        cfg.seed = rng.random();
        cfg.boundary = if run % 2 == 0 {
            BoundaryPolicy::LowestIndex
        } else {
            BoundaryPolicy::SeededRandom
        };
        cfg.channel_policy = if run % 4 < 2 {
            ChannelPolicy::SeededUniform
        } else {
            ChannelPolicy::AdversarialFirst
        };
        let x0 = ratio(rng.random_range(-100..=100), 100);
        let tr = simulate_plant(
            &params,
            x0,
            20,
            &Disturbance::SeededUniform { grid: 1000 },
            cfg.seed,
        )
        .unwrap();
        let out = run_scheme(&cfg, &tr).unwrap();
        assert_eq!(out.reliability_violations(), 0);
        let half = out.kappa.clone().unwrap() / int(2);
        for b in &out.blocks {
            assert!(b.err <= half);
            assert!(b.eve_volume <= params.reachable_interval(b.time).len());
            assert!(b.menu.len() >= 2);
        }
    }
}

#[test]
fn replays_are_byte_identical() {
    let params = reference_params();
    let mut cfg = SchemeConfig::new(params.clone(), catalog::fig2b(), catalog::fig2b_code(), 12);
    cfg.seed = 42;
    cfg.boundary = BoundaryPolicy::SeededRandom;
    let run = || {
        let tr = simulate_plant(
            &params,
            Rational::from_integer(0.into()),
            12,
            &Disturbance::SeededUniform { grid: 1000 },
            42,
        )
        .unwrap();
        run_scheme(&cfg, &tr).unwrap().csv_string().unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn symmetric_mode_reproduces_enumeration() {
    let params = SystemParams::parse("1.2", "0.6", ("-3", "3")).unwrap();
    let tr = simulate_plant(&params, int(0), 14, &Disturbance::Extremal, 0).unwrap();
    let mut cfg = SchemeConfig::new(params, catalog::fig2b(), catalog::fig2b_code(), 14);
    let exact = run_scheme(&cfg, &tr).unwrap();
    cfg.eve_mode = EveMode::Symmetric;
    cfg.check_depth = 12;
    let closed = run_scheme(&cfg, &tr).unwrap();
    for (a, b) in exact.blocks.iter().zip(&closed.blocks) {
        assert_eq!(a.eve_volume, b.eve_volume);
        assert_eq!(a.eve_diameter, b.eve_diameter);
    }
}

#[test]
fn symmetric_mode_refuses_uncertified_menus() {
    let q = Quantizer::new(reference_params(), 3).unwrap();
    assert!(certify_symmetric(&q, &[0, 2], 4, 1 << 16).is_err());
}

#[test]
fn divergence_slope_is_log_lambda() {
    let params = reference_params();
    let mut cfg = SchemeConfig::new(params.clone(), catalog::fig2b(), catalog::fig2b_code(), 30);
    cfg.eve_mode = EveMode::Symmetric;
    let tr = simulate_plant(
        &params,
        parse("0.9").unwrap(),
        30,
        &Disturbance::SeededUniform { grid: 1000 },
        1,
    )
    .unwrap();
    let rep = security_report(&run_scheme(&cfg, &tr).unwrap()).unwrap();
    let w = rep.witness.as_ref().unwrap();
    let (a, b) = w.first;
    for (t, d) in &w.distances {
        let expected = pow(&ratio(6, 5), *t as u32) * int(2) * int((b - a) as i64) / int(3);
        assert_eq!(*d, expected);
    }
    assert!((w.slope - 1.2f64.log2()).abs() < 1e-9);
    assert!(rep.d_secure_trend());
}

#[test]
fn recipes_are_deterministic() {
    let opts = RecipeOptions {
        check_depth: 10,
        fig5_horizon: 120,
        ..RecipeOptions::default()
    };
    for name in ["example1", "fig4", "fig5", "elim-fig7"] {
        let a = recipes::run(name, &opts).unwrap();
        let b = recipes::run(name, &opts).unwrap();
        assert_eq!(a.artifacts, b.artifacts, "{name}");
        assert!(a.passed(), "{a}");
    }
    assert!(recipes::run("nope", &opts).is_err());
}
