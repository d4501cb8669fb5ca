//! Canned reproductions with expected values and tolerances.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Duration;

use crate::catalog;
use crate::codes::{self, dichotomy_check, search_max_wiretap, SearchOptions};
use crate::error::{Error, Result};
use crate::quantizer::{Quantizer, SystemParams};
use crate::rational::{self, int, to_f64, Interval, Rational};
use crate::sim::eve::{self, EveState};
use crate::sim::report;
use crate::structures::{check_elim_square, eliminate_block};

pub const RECIPES: [&str; 6] = [
    "example1",
    "example2",
    "example3",
    "fig4",
    "fig5",
    "elim-fig7",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known discrepancy in the reference values; not a failure.
    Warning,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warning => "WARNING",
            Status::Info => "INFO",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub status: Status,
}

impl Check {
    pub fn new(label: impl Into<String>, ok: bool) -> Self {
        Self {
            label: label.into(),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn info(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: Status::Info,
        }
    }

    fn warning(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: Status::Warning,
        }
    }

    /// `|observed − expected| ≤ tol`.
    pub fn near(label: &str, observed: f64, expected: f64, tol: f64) -> Self {
        Self::new(
            format!("{label} = {observed:.6} (expected {expected} ± {tol:e})"),
            (observed - expected).abs() <= tol,
        )
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.status)
    }
}

/// Result of a recipe: checks plus named CSV artifacts.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub name: String,
    pub checks: Vec<Check>,
    pub artifacts: Vec<(String, String)>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {}", self.name)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug)]
pub struct RecipeOptions {
    pub budget: Duration,
    /// Enumeration depth for certifying the closed-form volume.
    pub check_depth: usize,
    pub fig5_horizon: usize,
}

impl Default for RecipeOptions {
    fn default() -> Self {
        Self {
            budget: codes::DEFAULT_BUDGET,
            check_depth: 20,
            fig5_horizon: 1000,
        }
    }
}

pub fn run(name: &str, opts: &RecipeOptions) -> Result<Outcome> {
    let checks_and_files = match name {
        "example1" => example1()?,
        "example2" => example2(opts)?,
        "example3" => example3(opts)?,
        "elim-fig7" => elim_fig7()?,
        "fig4" => fig4()?,
        "fig5" => fig5(opts)?,
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown recipe {other:?}; choose one of {}",
                RECIPES.join(", ")
            )))
        }
    };
    Ok(Outcome {
        name: name.to_string(),
        checks: checks_and_files.0,
        artifacts: checks_and_files.1,
    })
}

type Parts = (Vec<Check>, Vec<(String, String)>);

fn iv(lo: &str, hi: &str) -> Interval {
    Interval::parse(lo, hi).expect("static interval")
}

pub fn reference_params() -> SystemParams {
    SystemParams::parse("1.2", "1.2", ("-1", "1")).expect("static parameters")
}

fn example1() -> Result<Parts> {
    let q = Quantizer::new(SystemParams::parse("1.2", "0.1", ("-1", "1"))?, 3)?;
    let mut checks = Vec::new();
    let p0 = q.cell(&[0])?.p;
    checks.push(Check::new(format!("P(0) = {p0}"), p0 == iv("-1", "-1/3")));
    let p1 = q.cell(&[1])?.p;
    checks.push(Check::new(format!("P(1) = {p1}"), p1 == iv("-1/3", "1/3")));
    let p10 = q.cell(&[1, 0])?.p;
    checks.push(Check::new(
        format!("P(1,0) = {p10}"),
        p10 == iv("-0.45", "-0.15"),
    ));

    let mut cells = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let c = q.cell(&[a, b])?;
            checks.push(Check::info(format!("{c}")));
            cells.push(c);
        }
    }
    let mut overlaps = Vec::new();
    for (i, a) in cells.iter().enumerate() {
        for b in &cells[i + 1..] {
            if a.p.interiors_overlap(&b.p) {
                overlaps.push(format!("{:?}/{:?}", a.prefix, b.prefix));
            }
        }
    }
    checks.push(Check::new(
        format!("overlapping cells at t=1: {}", overlaps.join(" ")),
        !overlaps.is_empty(),
    ));
    let p02 = q.cell(&[0, 2])?.p;
    checks.push(Check::new(
        format!("P(0,2) = {p02} overlaps P(1,0)"),
        p02.interiors_overlap(&p10),
    ));
    let p01 = q.cell(&[0, 1])?.p;
    let printed = iv("-0.6", "-0.35");
    if p01 == printed {
        checks.push(Check::new(format!("P(0,1) = {p01}"), true));
    } else {
        checks.push(Check::warning(format!(
            "P(0,1) = {p01} by the recursion; reference value {printed} has length {} instead of {}",
            printed.len(),
            p01.len()
        )));
    }
    Ok((checks, Vec::new()))
}

fn options(opts: &RecipeOptions, singleton_only: bool) -> SearchOptions {
    SearchOptions {
        singleton_only,
        budget: opts.budget,
        ..SearchOptions::default()
    }
}

fn example2(opts: &RecipeOptions) -> Result<Parts> {
    let wt = catalog::fig2b();
    let mut checks = Vec::new();
    let code = catalog::fig2b_code();
    checks.push(Check::new(
        format!(
            "code {} zero-error with gamma = {}",
            code.display(wt.inputs()),
            codes::wiretap_gamma(&code, &wt.tc)
        ),
        codes::is_zero_error(&code, &wt.tb) && codes::wiretap_gamma(&code, &wt.tc) == 2,
    ));
    let full = search_max_wiretap(&wt.tb, &wt.tc, 1, &options(opts, false))?;
    checks.push(Check::new(
        format!("N(1)={} gamma={}", full.value, full.gamma()),
        full.value == 3 && full.gamma() == 2 && full.exact,
    ));
    let single = search_max_wiretap(&wt.tb, &wt.tc, 1, &options(opts, true))?;
    checks.push(Check::new(
        format!("singleton-only N(1)={}", single.value),
        single.value == 2 && single.exact,
    ));
    Ok((checks, Vec::new()))
}

fn example3(opts: &RecipeOptions) -> Result<Parts> {
    let wt = catalog::fig8();
    let mut checks = Vec::new();
    let r1 = search_max_wiretap(&wt.tb, &wt.tc, 1, &options(opts, false))?;
    let r2 = search_max_wiretap(&wt.tb, &wt.tc, 2, &options(opts, false))?;
    checks.push(Check::new(
        format!("N(1)={}, N(2)={}", r1.value, r2.value),
        r1.value == 1 && r2.value == 4 && r1.exact && r2.exact,
    ));
    let code = catalog::fig8_code();
    let gamma = codes::wiretap_gamma(&code, &wt.tc);
    checks.push(Check::new(
        format!("code {} has gamma = {gamma}", code.display(wt.inputs())),
        codes::is_zero_error(&code, &wt.tb) && gamma == 2,
    ));
    let report = dichotomy_check(&wt, 2, &options(opts, false))?;
    checks.push(Check::near(
        "rate lower bound",
        report.rate_lower_bound,
        1.0,
        1e-12,
    ));
    Ok((checks, Vec::new()))
}

fn elim_fig7() -> Result<Parts> {
    let wt = catalog::fig7();
    let tr = eliminate_block(&wt.tb, &wt.tc, 1)?;
    let mut checks: Vec<Check> = tr.to_string().lines().map(Check::info).collect();
    let name = |s: &[usize]| tr.vertices.subset_names(s.iter().copied());
    let order: Vec<String> = tr
        .rounds
        .iter()
        .filter(|r| !r.added.is_empty())
        .map(|r| name(&r.added))
        .collect();
    checks.push(Check::new(
        format!("removal order {}", order.join(" then ")),
        order == ["{a1}", "{a2}"],
    ));
    checks.push(Check::new(
        format!("survivors {}", name(&tr.survivors())),
        name(&tr.survivors()) == "{a3,a4,a5}",
    ));
    checks.push(Check::new(
        format!("I = {}", tr.stop_index),
        tr.stop_index == 1,
    ));
    let square = check_elim_square(&wt.tb, &wt.tc, 2)?;
    checks.push(Check::new(
        format!("blocklength-2 elimination is the square: {square}"),
        square,
    ));
    Ok((checks, Vec::new()))
}

/// Eavesdropper output sequence of the noisy reference run.
pub const FIG4_SYMBOLS: [&str; 8] = ["c2", "c1", "c2", "c1", "c1", "c2", "c2", "c1"];

fn fig4() -> Result<Parts> {
    let params = reference_params();
    let q = Quantizer::new(params.clone(), 3)?;
    let wt = catalog::fig2b();
    let code = catalog::fig2b_code();
    let mut checks = Vec::new();
    let mut eve = EveState::new(q.clone(), eve::DEFAULT_DEDUP_CAP);
    let mut union_csv = String::from("t,component,lo,hi,reach_lo,reach_hi\n");
    let mut menus = Vec::new();
    let mut counts_ok = true;
    let mut inside = true;
    for (t, sym) in FIG4_SYMBOLS.iter().enumerate() {
        let c = wt.tc.output().require(sym)?;
        let menu: Vec<usize> = (0..code.message_count())
            .filter(|&m| code.class(m).iter().any(|w| wt.tc.permits(w[0], c)))
            .collect();
        eve.update(&menu)?;
        menus.push(menu);
        let length = q.cell_length(t)?;
        let cells: Vec<Interval> = eve
            .candidates()
            .iter()
            .map(|x| Interval::centered(x, &length))
            .collect();
        counts_ok &= eve.count() == 1 << (t + 1);
        let reach = params.reachable_interval(t);
        inside &= cells.iter().all(|c| reach.contains_interval(c));
        let (rlo, rhi) = reach.to_f64_pair();
        for (i, comp) in rational::merge(&cells).iter().enumerate() {
            let (lo, hi) = comp.to_f64_pair();
            union_csv.push_str(&format!("{t},{i},{lo},{hi},{rlo},{rhi}\n"));
        }
    }
    checks.push(Check::info(format!("menus {menus:?}")));
    checks.push(Check::new("2^(t+1) candidates for t = 0..7", counts_ok));
    checks.push(Check::new(
        "all candidate cells inside the reachable interval",
        inside,
    ));
    let first = &menus[0];
    checks.push(Check::new(
        format!("after c2 the messages {first:?} remain possible"),
        *first == vec![1, 2],
    ));

    let mut paths_csv = String::from("path,t,message,lo,hi,xhat\n");
    let choices: [(&str, fn(usize, &[usize]) -> usize); 4] = [
        ("lowest", |_, m| m[0]),
        ("highest", |_, m| m[m.len() - 1]),
        ("alternating", |t, m| m[t % m.len()]),
        ("switching", |t, m| m[(t / 2) % m.len()]),
    ];
    for (name, choose) in choices {
        let mut cell = q.root();
        for (t, menu) in menus.iter().enumerate() {
            let m = choose(t, menu);
            cell = q.child(&cell, m)?;
            let (lo, hi) = cell.p.to_f64_pair();
            paths_csv.push_str(&format!(
                "{name},{t},{m},{lo},{hi},{}\n",
                to_f64(&cell.xhat)
            ));
        }
    }
    Ok((
        checks,
        vec![
            ("fig4_union.csv".into(), union_csv),
            ("fig4_paths.csv".into(), paths_csv),
        ],
    ))
}

/// The four `(Ω, I0)` combinations, baseline first.
pub fn fig5_combos() -> Vec<SystemParams> {
    let mut out = Vec::new();
    for omega in ["1.2", "0.6"] {
        for half in ["1", "3"] {
            let lo = format!("-{half}");
            out.push(SystemParams::parse("1.2", omega, (&lo, half)).expect("static parameters"));
        }
    }
    out
}

/// `ratio(t)` for `t = 1..=horizon` in closed form, and the first block from
/// which the closed form is certified (enumeration to `depth` before it).
pub fn fig5_curve(
    params: &SystemParams,
    horizon: usize,
    depth: usize,
) -> Result<(Vec<f64>, usize)> {
    let wt = catalog::fig2b();
    let code = catalog::fig2b_code();
    let q = Quantizer::new(params.clone(), code.message_count())?;
    let menus = vec![vec![0, 1], vec![1, 2]];
    eve::certify_translates(&menus)?;
    let cert = eve::certify_symmetric(&q, &menus[0], depth, eve::DEFAULT_DEDUP_CAP)?;
    let gamma = codes::wiretap_gamma(&code, &wt.tc);
    let bound = report::applicable_bound(params, code.message_count(), gamma, 1);
    let volumes = eve::symmetric_volumes(&q, &cert, horizon + 1)?;
    let curve = (1..=horizon)
        .map(|t| rational::log2(&volumes[t]) / t as f64 / bound)
        .collect();
    Ok((curve, cert.start))
}

fn max_spread(curves: &[Vec<f64>], t: usize) -> f64 {
    let vals: Vec<f64> = curves.iter().map(|c| c[t - 1]).collect();
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    max - min
}

fn fig5(opts: &RecipeOptions) -> Result<Parts> {
    let horizon = opts.fig5_horizon.max(100);
    let combos = fig5_combos();
    let mut curves = Vec::new();
    let mut checks = Vec::new();
    for p in &combos {
        let (curve, start) = fig5_curve(p, horizon, opts.check_depth)?;
        checks.push(Check::info(format!(
            "omega={} I0={}: ratio({horizon}) = {:.6}, closed form exact from t={start}",
            rational::to_f64(&p.omega),
            p.i0,
            curve[horizon - 1]
        )));
        curves.push(curve);
    }
    checks.push(Check::new(
        format!(
            "closed form matches enumeration for t <= {}",
            opts.check_depth
        ),
        true,
    ));
    let base = curves[0][horizon - 1];
    if horizon >= 1000 {
        checks.push(Check::near(
            "baseline ratio(1000)",
            curves[0][999],
            3.36,
            0.05,
        ));
        let rate = base * report::applicable_bound(&combos[0], 3, 2, 1);
        checks.push(Check::info(format!(
            "baseline empirical rate(1000) = {rate:.6}"
        )));
        let d100 = max_spread(&curves, 100);
        let d1000 = max_spread(&curves, 1000);
        let factor = d1000 / d100;
        checks.push(Check::info(format!(
            "max ratio difference {d100:.6} at t=100, {d1000:.6} at t=1000"
        )));
        checks.push(Check::new(
            format!("difference decay factor {factor:.4} within [0.05, 0.2]"),
            (0.05..=0.2).contains(&factor),
        ));
    }
    let mut csv = String::from(
        "t,ratio_omega1.2_i0_1,ratio_omega1.2_i0_3,ratio_omega0.6_i0_1,ratio_omega0.6_i0_3\n",
    );
    for t in 1..=horizon {
        let vals: Vec<String> = curves.iter().map(|c| c[t - 1].to_string()).collect();
        csv.push_str(&format!("{t},{}\n", vals.join(",")));
    }
    Ok((checks, vec![("fig5.csv".into(), csv)]))
}

/// Separated family check: the `γʲ` cells built from `menus`
/// at time `jT−1` have pairwise disjoint interiors.
pub fn family_disjoint(
    q: &Quantizer,
    menus: &[Vec<usize>],
    horizon: usize,
    j: usize,
) -> Result<(bool, Rational)> {
    let family = q.separated_family(menus, horizon, j)?;
    let cells: Vec<Interval> = family.iter().map(|(_, c)| c.p.clone()).collect();
    let disjoint = cells
        .iter()
        .enumerate()
        .all(|(i, a)| cells[i + 1..].iter().all(|b| !a.interiors_overlap(b)));
    Ok((disjoint, rational::union_measure(&cells)))
}

/// Indices of `set` as a set, convenient for tests.
pub fn index_set(set: &[usize]) -> BTreeSet<usize> {
    set.iter().copied().collect()
}

/// `γʲ ℓ_{jT−1}` as an exact rational.
pub fn certified_volume(q: &Quantizer, gamma: usize, horizon: usize, j: usize) -> Result<Rational> {
    Ok(rational::pow(&int(gamma as i64), j as u32) * q.cell_length(j * horizon - 1)?)
}
