//! Reproductions and command implementations.

pub mod config;
pub mod recipes;

use std::fmt::Write as _;

use crate::channel::ChannelFile;
use crate::codes::{
    dichotomy_check, search_max_wiretap, search_max_zero_error, secrecy_capacity_injective,
    CapacityReport, SearchOptions, SearchResult,
};
use crate::error::{Error, Result};
use crate::sim::{run_scheme, security_report, simulate_plant, RateReport, Transcript};
use crate::structures::{eliminate_block, ConfusabilityGraph, EliminationTrace, EveHypergraph};

pub use config::Simulation;
pub use recipes::{Check, Outcome, RecipeOptions, Status, RECIPES};

/// Alphabets, ranges, injectivity, graph edges and hyperedges.
pub fn channel_info(file: &ChannelFile) -> String {
    let tb = &file.tb;
    let names = |a: &crate::Alphabet| a.subset_names(0..a.len());
    let mut out = String::new();
    let _ = writeln!(out, "channel: {}", file.name);
    let _ = writeln!(out, "inputs: {}", names(tb.input()));
    let _ = writeln!(out, "T_B outputs: {}", names(tb.output()));
    let _ = writeln!(out, "T_B range: {}", tb.output().subset_names(tb.range()));
    let _ = write!(out, "{tb}");
    let g = ConfusabilityGraph::from_channel(tb);
    let edges = g.to_string();
    let _ = writeln!(
        out,
        "confusability edges: {}",
        if edges.is_empty() {
            "none"
        } else {
            edges.as_str()
        }
    );
    match &file.tc {
        Some(tc) => {
            let _ = writeln!(out, "T_C outputs: {}", names(tc.output()));
            let _ = writeln!(out, "T_C range: {}", tc.output().subset_names(tc.range()));
            let _ = write!(out, "{tc}");
            let h = EveHypergraph::from_channel(tc);
            let _ = write!(out, "T_B injective: {}; hyperedges: {h}", tb.is_injective());
        }
        None => {
            let _ = write!(out, "T_B injective: {}", tb.is_injective());
        }
    }
    out
}

/// Largest zero-error (or wiretap) code at blocklength `n`.
pub fn code_search(
    file: &ChannelFile,
    n: usize,
    wiretap: bool,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::InvalidInput("--n must be at least 1".into()));
    }
    if wiretap || opts.singleton_only {
        let wt = file.wiretap()?;
        search_max_wiretap(&wt.tb, &wt.tc, n, opts)
    } else {
        search_max_zero_error(&file.tb, n, opts)
    }
}

/// Summary line plus the witness as JSON.
pub fn format_search(file: &ChannelFile, r: &SearchResult) -> Result<String> {
    let mut out = format!("n={} M={}", r.n, r.value);
    if r.witness.as_ref().is_some_and(|w| w.gamma.is_some()) {
        let _ = write!(out, " gamma={}", r.gamma());
    }
    let _ = write!(out, " rate={:.6}", r.rate());
    if !r.exact {
        out.push_str(" (lower bound only: search budget exhausted)");
    }
    out.push('\n');
    match &r.witness {
        Some(code) => out.push_str(&serde_json::to_string(&code.to_json(file.tb.input()))?),
        None => out.push_str("no code with two or more messages"),
    }
    Ok(out)
}

pub fn eliminate(file: &ChannelFile, n: usize) -> Result<EliminationTrace> {
    if n == 0 {
        return Err(Error::InvalidInput("--n must be at least 1".into()));
    }
    let wt = file.wiretap()?;
    eliminate_block(&wt.tb, &wt.tc, n)
}

/// Exact formula for injective receivers, otherwise a search up to `n_max`.
pub fn capacity(file: &ChannelFile, n_max: usize, opts: &SearchOptions) -> Result<CapacityReport> {
    if n_max == 0 {
        return Err(Error::InvalidInput("--n must be at least 1".into()));
    }
    let wt = file.wiretap()?;
    if wt.tb.is_injective() {
        secrecy_capacity_injective(&wt, n_max)
    } else {
        dichotomy_check(&wt, n_max, opts)
    }
}

/// Runs the plant and the scheme; the report is `None` for an empty run.
pub fn simulate(sim: &Simulation) -> Result<(Transcript, Option<RateReport>)> {
    let cfg = &sim.scheme;
    let steps = cfg.horizon * cfg.n;
    let trajectory = simulate_plant(
        &cfg.params,
        sim.x0.clone(),
        steps,
        &sim.disturbance,
        cfg.seed,
    )?;
    let transcript = run_scheme(cfg, &trajectory)?;
    let report = if transcript.blocks.is_empty() {
        None
    } else {
        Some(security_report(&transcript)?)
    };
    Ok((transcript, report))
}
