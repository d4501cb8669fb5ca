mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zewlab::codes::{
    concatenate, dichotomy_check, is_zero_error, search_max_wiretap, search_max_zero_error,
    wiretap_gamma, SearchOptions,
};
use zewlab::experiments::recipes::{
    self, certified_volume, family_disjoint, reference_params, RecipeOptions,
};
use zewlab::quantizer::{block_horizon, disjoint_block_horizon};
use zewlab::rational::{int, parse, pow, ratio, Interval, Rational};
use zewlab::sim::eve::{self, certify_symmetric, symmetric_volumes, EveState};
use zewlab::sim::report::{applicable_bound, eps_n};
use zewlab::sim::{
    run_scheme, security_report, simulate_plant, BoundaryPolicy, ChannelPolicy, Disturbance,
    EveMode, SchemeConfig,
};
use zewlab::structures::{check_elim_square, eliminate_block, ConfusabilityGraph, EveHypergraph};
use zewlab::{catalog, Quantizer, SystemParams, WiretapCode};

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, id: usize, title: &str, detail: String, ok: bool) {
        let status = if ok { "PASS" } else { "FAIL" };
        // Written past the test harness capture so the gate is always visible.
        let _ = writeln!(
            std::io::stderr(),
            "criterion {id:>2} {status}: {title} ({detail})"
        );
        self.results.push((id, ok));
    }
}

fn search(singleton_only: bool) -> SearchOptions {
    SearchOptions {
        singleton_only,
        ..SearchOptions::default()
    }
}

fn fig2b_search(g: &mut Gate) {
    let start = Instant::now();
    let wt = catalog::fig2b();
    let full = search_max_wiretap(&wt.tb, &wt.tc, 1, &search(false)).unwrap();
    let single = search_max_wiretap(&wt.tb, &wt.tc, 1, &search(true)).unwrap();
    let took = start.elapsed();
    g.record(
        1,
        "fig2b wiretap search",
        format!(
            "N={} gamma={} singleton N={} in {took:?}, limit 1 s",
            full.value,
            full.gamma(),
            single.value
        ),
        full.exact
            && full.value == 3
            && full.gamma() == 2
            && single.value == 2
            && took < Duration::from_secs(1),
    );
}

fn fig8_search(g: &mut Gate) {
    let start = Instant::now();
    let wt = catalog::fig8();
    let r1 = search_max_wiretap(&wt.tb, &wt.tc, 1, &search(false)).unwrap();
    let r2 = search_max_wiretap(&wt.tb, &wt.tc, 2, &search(false)).unwrap();
    let rep = dichotomy_check(&wt, 2, &search(false)).unwrap();
    let took = start.elapsed();
    g.record(
        2,
        "fig8 wiretap search and dichotomy",
        format!(
            "N(1)={} N(2)={} rate >= {} in {took:?}, limit 30 s",
            r1.value, r2.value, rep.rate_lower_bound
        ),
        r1.exact
            && r2.exact
            && r1.value == 1
            && r2.value == 4
            && rep.rate_lower_bound == 1.0
            && took < Duration::from_secs(30),
    );
}

fn fig7_elimination(g: &mut Gate) {
    let start = Instant::now();
    let wt = catalog::fig7();
    let tr = eliminate_block(&wt.tb, &wt.tc, 1).unwrap();
    let names = |s: &[usize]| tr.vertices.subset_names(s.iter().copied());
    let order: Vec<String> = tr
        .rounds
        .iter()
        .filter(|r| !r.added.is_empty())
        .map(|r| names(&r.added))
        .collect();
    let survivors = names(&tr.survivors());
    let square = check_elim_square(&wt.tb, &wt.tc, 2).unwrap();
    let took = start.elapsed();
    g.record(
        3,
        "fig7 elimination",
        format!(
            "order {} survivors {survivors} I={} square={square} in {took:?}, limit 1 s",
            order.join(" then "),
            tr.stop_index
        ),
        order == ["{a1}", "{a2}"]
            && survivors == "{a3,a4,a5}"
            && tr.stop_index == 1
            && square
            && took < Duration::from_secs(1),
    );
}

fn example1(g: &mut Gate) {
    let q = Quantizer::new(SystemParams::parse("1.2", "0.1", ("-1", "1")).unwrap(), 3).unwrap();
    let p0 = q.cell(&[0]).unwrap().p;
    let p10 = q.cell(&[1, 0]).unwrap().p;
    let p02 = q.cell(&[0, 2]).unwrap().p;
    let mut cells = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            cells.push(q.cell(&[a, b]).unwrap().p);
        }
    }
    let overlaps = (0..9)
        .flat_map(|i| (i + 1..9).map(move |j| (i, j)))
        .filter(|&(i, j)| cells[i].interiors_overlap(&cells[j]))
        .count();
    let recipe = recipes::run("example1", &RecipeOptions::default()).unwrap();
    g.record(
        4,
        "quantizer cells for the noisy example",
        format!("P(0)={p0} P(1,0)={p10} P(0,2)={p02}, {overlaps} overlapping pairs, P(0,1) reported as a warning"),
        p0 == Interval::new(int(-1), ratio(-1, 3)).unwrap()
            && p10 == Interval::parse("-0.45", "-0.15").unwrap()
            && overlaps > 0
            && p02.interiors_overlap(&p10)
            && recipe.passed(),
    );
}

fn closed_forms(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc105ed);
    let mut checked = 0;
    let mut failures = 0;
    for _ in 0..20 {
        let m: usize = rng.random_range(2..=5);
        let lambda = ratio(rng.random_range(101..(m as i64) * 100), 100);
        let omega = ratio(rng.random_range(0..=200), 100);
        let lo = rng.random_range(-300..=0);
        let i0 = Interval::new(ratio(lo, 100), ratio(lo + rng.random_range(1..=300), 100)).unwrap();
        let q = Quantizer::new(SystemParams::new(lambda, omega, i0).unwrap(), m).unwrap();
        for _ in 0..500 {
            let len = rng.random_range(1..=31);
            let prefix: Vec<usize> = (0..len).map(|_| rng.random_range(0..m)).collect();
            let mut cell = q.root();
            for &x in &prefix {
                cell = q.child(&cell, x).unwrap();
            }
            let t = len - 1;
            if cell.p.len() != q.cell_length(t).unwrap()
                || cell.xhat != q.midpoint_closed_form(&prefix).unwrap()
            {
                failures += 1;
            }
            checked += 1;
        }
    }
    g.record(
        5,
        "closed-form length and midpoint",
        format!("{checked} prefixes over 20 parameter sets, t <= 30, {failures} mismatches"),
        checked == 10_000 && failures == 0,
    );
}

fn reference_constants(g: &mut Gate) {
    let q = Quantizer::new(reference_params(), 3).unwrap();
    let constant = (0..=200).all(|t| q.cell_length(t).unwrap() == ratio(2, 3));
    let eps = eps_n(3, 1.2, 1);
    let bound = applicable_bound(&reference_params(), 3, 2, 1);
    g.record(
        6,
        "noisy reference constants",
        format!("cell length 2/3 for t <= 200: {constant}; eps_1 = {eps:.6} ± 0.005; bound = {bound:.6} ± 0.0005"),
        constant && (eps - 1.222).abs() <= 0.005 && (bound - 0.0789).abs() <= 0.0005,
    );
}

/// Enumerated volumes under a random mix of the two translated menus.
fn enumerated_volumes(q: &Quantizer, depth: usize, seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eve = EveState::new(q.clone(), eve::DEFAULT_DEDUP_CAP);
    (0..=depth)
        .map(|_| {
            let menu = if rng.random_bool(0.5) { [0, 1] } else { [1, 2] };
            eve.update(&menu).unwrap();
            eve.stats().unwrap().volume.clone()
        })
        .collect()
}

fn fig5_baseline(g: &mut Gate) {
    let start = Instant::now();
    let params = reference_params();
    let q = Quantizer::new(params.clone(), 3).unwrap();
    let cert = certify_symmetric(&q, &[0, 1], 20, eve::DEFAULT_DEDUP_CAP).unwrap();
    let closed = symmetric_volumes(&q, &cert, 1001).unwrap();
    let enumerated = enumerated_volumes(&q, 20, 5);
    let agree = enumerated.iter().zip(&closed).all(|(a, b)| a == b);
    let bound = applicable_bound(&params, 3, 2, 1);
    let ratio1000 = zewlab::rational::log2(&closed[1000]) / 1000.0 / bound;
    let took = start.elapsed();
    g.record(
        7,
        "baseline volume-rate ratio at t=1000",
        format!("ratio {ratio1000:.6} vs 3.36 ± 0.05, closed form equals enumeration for t <= 20: {agree}, {took:?} limit 10 s"),
        (ratio1000 - 3.36).abs() <= 0.05 && agree && took < Duration::from_secs(10),
    );
}

fn fig5_convergence(g: &mut Gate) {
    let curves: Vec<Vec<f64>> = recipes::fig5_combos()
        .iter()
        .map(|p| recipes::fig5_curve(p, 1000, 20).unwrap().0)
        .collect();
    let spread = |t: usize| {
        let v: Vec<f64> = curves.iter().map(|c| c[t - 1]).collect();
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let (d100, d1000) = (spread(100), spread(1000));
    let factor = d1000 / d100;
    g.record(
        8,
        "ratio spread decay across the four combinations",
        format!(
            "diff(100) = {d100:.6}, diff(1000) = {d1000:.6}, factor {factor:.4} in [0.05, 0.2]"
        ),
        (0.05..=0.2).contains(&factor),
    );
}

fn divergence(g: &mut Gate) {
    let params = reference_params();
    let mut cfg = SchemeConfig::new(params.clone(), catalog::fig2b(), catalog::fig2b_code(), 40);
    cfg.eve_mode = EveMode::Symmetric;
    let tr = simulate_plant(
        &params,
        parse("0.3").unwrap(),
        40,
        &Disturbance::SeededUniform { grid: 1000 },
        3,
    )
    .unwrap();
    let rep = security_report(&run_scheme(&cfg, &tr).unwrap()).unwrap();
    let w = rep.witness.unwrap();
    let (a, b) = w.first;
    let exact = w.distances.iter().all(|(t, d)| {
        *d == pow(&ratio(6, 5), *t as u32) * int(2) * int(a.abs_diff(b) as i64) / int(3)
    });
    let err = (w.slope - 1.2f64.log2()).abs();
    g.record(
        9,
        "divergence witness slope",
        format!(
            "slope {:.12}, |slope - log2 1.2| = {err:e} within 1e-9, distances geometric: {exact}",
            w.slope
        ),
        err <= 1e-9 && exact,
    );
}

fn noiseless_full_confusion(g: &mut Gate) {
    let params = SystemParams::parse("1.5", "0", ("-1", "1")).unwrap();
    let code = WiretapCode::new(1, vec![vec![vec![0]], vec![vec![1]]]).unwrap();
    let cfg = SchemeConfig::new(params.clone(), catalog::full_confusion(2), code, 21);
    let tr = simulate_plant(&params, ratio(1, 7), 21, &Disturbance::Extremal, 0).unwrap();
    let out = run_scheme(&cfg, &tr).unwrap();
    let exact = out
        .blocks
        .iter()
        .all(|b| b.eve_volume == int(2) * pow(&ratio(3, 2), b.time as u32));
    let steps = out
        .blocks
        .windows(2)
        .all(|w| &w[1].eve_volume / &w[0].eve_volume == ratio(3, 2));
    let rep = security_report(&out).unwrap();
    let err = (rep.bound - 1.5f64.log2()).abs();
    g.record(
        10,
        "noiseless full-confusion volume",
        format!(
            "volume 2*1.5^t for t <= 20: {exact}; growth factor exactly 3/2: {steps}; bound {:.12} vs log2 1.5 (diff {err:e})",
            rep.bound
        ),
        exact && steps && out.blocks.len() == 21 && err < 1e-12,
    );
}

fn separated_families(g: &mut Gate) {
    let t_disjoint = disjoint_block_horizon(3, 1.2).unwrap();
    let t_block = block_horizon(3, 1.2, 1).unwrap();
    let q = Quantizer::new(reference_params(), 3).unwrap();
    let cert = certify_symmetric(&q, &[0, 1], 20, eve::DEFAULT_DEDUP_CAP).unwrap();
    let volumes = symmetric_volumes(&q, &cert, 3 * t_block).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let menus: Vec<Vec<usize>> = (0..3 * t_block)
        .map(|_| {
            if rng.random_bool(0.5) {
                vec![0, 1]
            } else {
                vec![1, 2]
            }
        })
        .collect();
    let mut ok = t_disjoint == 8 && t_block == 12;
    let mut notes = Vec::new();
    for horizon in [t_disjoint, t_block] {
        for j in 1..=3 {
            let (disjoint, _) = family_disjoint(&q, &menus, horizon, j).unwrap();
            let floor = certified_volume(&q, 2, horizon, j).unwrap();
            let measured = &volumes[j * horizon - 1];
            ok &= disjoint && *measured >= floor;
            notes.push(format!(
                "T={horizon} j={j}: disjoint={disjoint} volume>=floor={}",
                *measured >= floor
            ));
        }
    }
    g.record(
        11,
        "separated cell families",
        format!("T={t_disjoint}, T(1)={t_block}; {}", notes.join("; ")),
        ok,
    );
}

fn structural_oracles(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut products = 0;
    for _ in 0..50 {
        let wt = random_pair(&mut rng, 4, 3);
        let strong = ConfusabilityGraph::from_channel(&wt.tb)
            .strong_power(2)
            .unwrap();
        let direct = ConfusabilityGraph::from_channel(&wt.tb.power(2).unwrap());
        let sorted = |h: &EveHypergraph| {
            let mut e: Vec<Vec<usize>> = h
                .edges()
                .iter()
                .map(|e| {
                    let mut m = e.members.clone();
                    m.sort_unstable();
                    m
                })
                .collect();
            e.sort();
            e
        };
        let square = EveHypergraph::from_channel(&wt.tc).square_power(2).unwrap();
        let hdirect = EveHypergraph::from_channel(&wt.tc.power(2).unwrap());
        if strong.edges() == direct.edges() && sorted(&square) == sorted(&hdirect) {
            products += 1;
        }
    }
    let mut pairs = 0;
    let mut verified = 0;
    let mut attempts = 0;
    while pairs < 100 && attempts < 10_000 {
        attempts += 1;
        let wt = random_pair(&mut rng, 4, 3);
        let f = search_max_wiretap(&wt.tb, &wt.tc, 1, &search(false))
            .unwrap()
            .witness;
        let gcode = search_max_zero_error(&wt.tb, 1, &search(false))
            .unwrap()
            .witness;
        let (Some(f), Some(gcode)) = (f, gcode) else {
            continue;
        };
        pairs += 1;
        let c = concatenate(&f, &gcode, &wt).unwrap();
        let k = wt.inputs().len();
        let flat = WiretapCode::new(
            1,
            c.classes()
                .iter()
                .map(|cl| cl.iter().map(|w| vec![index(w, k)]).collect())
                .collect(),
        )
        .unwrap();
        if is_zero_error(&flat, &wt.tb.power(2).unwrap())
            && wiretap_gamma(&flat, &wt.tc.power(2).unwrap()) >= 2
        {
            verified += 1;
        }
    }
    g.record(
        12,
        "product identities and concatenation",
        format!("{products}/50 channels match both product identities; {verified}/{pairs} concatenations verify"),
        products == 50 && pairs == 100 && verified == 100,
    );
}

fn reliability(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut runs = 0;
    let mut violations = 0;
    let mut samples = 0;
    for run in 0..200 {
        let (wt, code, n) = match run % 3 {
            0 => (catalog::fig2b(), catalog::fig2b_code(), 1),
            1 => (catalog::fig8(), catalog::fig8_code(), 2),
            _ => (
                catalog::full_confusion(2),
                WiretapCode::new(1, vec![vec![vec![0]], vec![vec![1]]]).unwrap(),
                1,
            ),
        };
        let m = code.message_count() as i64;
        // λⁿ < M.
        let lambda = loop {
            let l = ratio(rng.random_range(101..=250), 100);
            if pow(&l, n as u32) < int(m) {
                break l;
            }
        };
        let omega = ratio(rng.random_range(0..=200), 100);
        let lo = rng.random_range(-300..=0);
        let i0 = Interval::new(ratio(lo, 100), ratio(lo + rng.random_range(1..=300), 100)).unwrap();
        let params = SystemParams::new(lambda, omega, i0.clone()).unwrap();
        let blocks = 10;
        let mut cfg = SchemeConfig::new(params.clone(), wt, code, blocks);
        cfg.seed = rng.random();
        cfg.boundary = if rng.random_bool(0.5) {
            BoundaryPolicy::LowestIndex
        } else {
            BoundaryPolicy::SeededRandom
        };
        cfg.channel_policy = if rng.random_bool(0.5) {
            ChannelPolicy::SeededUniform
        } else {
            ChannelPolicy::AdversarialFirst
        };
        let policy = match rng.random_range(0..3) {
            0 => Disturbance::Extremal,
            1 => Disturbance::SeededUniform { grid: 1000 },
            _ => Disturbance::Fixed(vec![params.disturbance().hi().clone()]),
        };
        let x0 = i0.lo() + i0.len() * ratio(rng.random_range(0..=1000), 1000);
        let tr = simulate_plant(&params, x0, blocks * n, &policy, cfg.seed).unwrap();
        let out = run_scheme(&cfg, &tr).unwrap();
        let kappa = out.kappa.clone().unwrap();
        let expected = {
            let mq = int(m);
            let ln = pow(&params.lambda, n as u32);
            let sampled = params.sampled(n).unwrap();
            let a = i0.len() / &mq;
            let b = &sampled.omega / (&mq - ln);
            if a > b {
                a
            } else {
                b
            }
        };
        if kappa != expected {
            violations += 1;
        }
        let half = &kappa / int(2);
        violations += out.blocks.iter().filter(|b| b.err > half).count();
        samples += out.blocks.len();
        runs += 1;
    }
    g.record(
        13,
        "reliability sweep",
        format!("{runs} runs, {samples} sample times, {violations} violations of err <= kappa/2"),
        runs == 200 && violations == 0,
    );
}

#[test]
fn acceptance() {
    let mut g = Gate {
        results: Vec::new(),
    };
    fig2b_search(&mut g);
    fig8_search(&mut g);
    fig7_elimination(&mut g);
    example1(&mut g);
    closed_forms(&mut g);
    reference_constants(&mut g);
    fig5_baseline(&mut g);
    fig5_convergence(&mut g);
    divergence(&mut g);
    noiseless_full_confusion(&mut g);
    separated_families(&mut g);
    structural_oracles(&mut g);
    reliability(&mut g);
    let failed: Vec<usize> = g.results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    assert_eq!(g.results.len(), 13);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
