//! Zero-error and zero-error wiretap codes: verification, exhaustive search,
//! concatenation, capacity decisions and the taxicab closure.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;

use crate::channel::{
    word_from_index, Alphabet, UncertainChannel, WiretapChannel, DEFAULT_POWER_CAP,
};
use crate::error::{Error, Result};
use crate::structures::{clique_cover_bound, eliminate_block, ConfusabilityGraph, EveHypergraph};

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

/// An M-code of blocklength `n`: `M` disjoint nonempty sets of input words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiretapCode {
    n: usize,
    classes: Vec<Vec<Vec<usize>>>,
    /// Minimal eavesdropper confusion, when it has been measured.
    pub gamma: Option<usize>,
}

impl WiretapCode {
    pub fn new(n: usize, classes: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("blocklength must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        let mut clean = Vec::with_capacity(classes.len());
        for (m, class) in classes.into_iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidInput(format!("message {m} has no codeword")));
            }
            let set: BTreeSet<Vec<usize>> = class.into_iter().collect();
            for w in &set {
                if w.len() != n {
                    return Err(Error::InvalidInput(format!(
                        "codeword {w:?} has length {} instead of {n}",
                        w.len()
                    )));
                }
                if !seen.insert(w.clone()) {
                    return Err(Error::InvalidInput(format!(
                        "codeword {w:?} used by two messages"
                    )));
                }
            }
            clean.push(set.into_iter().collect());
        }
        Ok(Self {
            n,
            classes: clean,
            gamma: None,
        })
    }

    /// Parses `{ "0": ["(a1,a2)", ...], ... }` or `{ "0": ["a1", ...] }` style
    /// witnesses against the given input alphabet.
    pub fn from_named(n: usize, alphabet: &Alphabet, classes: &[Vec<String>]) -> Result<Self> {
        let mut out = Vec::with_capacity(classes.len());
        for class in classes {
            let mut words = Vec::with_capacity(class.len());
            for name in class {
                words.push(parse_word(alphabet, name, n)?);
            }
            out.push(words);
        }
        Self::new(n, out)
    }

    pub fn blocklength(&self) -> usize {
        self.n
    }

    pub fn message_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<Vec<usize>>] {
        &self.classes
    }

    pub fn class(&self, m: usize) -> &[Vec<usize>] {
        &self.classes[m]
    }

    pub fn codewords(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.classes.iter().flatten()
    }

    /// Message whose class contains `word`.
    pub fn message_of(&self, word: &[usize]) -> Option<usize> {
        self.classes
            .iter()
            .position(|c| c.iter().any(|w| w.as_slice() == word))
    }

    pub fn is_singleton(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// `log2(M) / n`.
    pub fn rate(&self) -> f64 {
        (self.message_count() as f64).log2() / self.n as f64
    }

    fn check_symbols(&self, k: usize) -> Result<()> {
        match self.codewords().flatten().find(|&&s| s >= k) {
            Some(s) => Err(Error::AlphabetMismatch(format!(
                "codeword symbol {s} outside an alphabet of {k} inputs"
            ))),
            None => Ok(()),
        }
    }

    /// Writes the code as `{message_index: [word names]}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (m, class) in self.classes.iter().enumerate() {
            let words: Vec<serde_json::Value> = class
                .iter()
                .map(|w| serde_json::Value::String(word_name(alphabet, w)))
                .collect();
            map.insert(m.to_string(), serde_json::Value::Array(words));
        }
        serde_json::Value::Object(map)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        CodeDisplay {
            code: self,
            alphabet,
        }
    }
}

struct CodeDisplay<'a> {
    code: &'a WiretapCode,
    alphabet: &'a Alphabet,
}

impl fmt::Display for CodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .code
            .classes
            .iter()
            .map(|c| {
                let words: Vec<String> = c.iter().map(|w| word_name(self.alphabet, w)).collect();
                format!("{{{}}}", words.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// `a1` for single symbols, `(a1,a2)` for longer words.
pub fn word_name(alphabet: &Alphabet, word: &[usize]) -> String {
    if word.len() == 1 {
        alphabet.name(word[0]).to_string()
    } else {
        alphabet.word_name(word)
    }
}

pub fn parse_word(alphabet: &Alphabet, name: &str, n: usize) -> Result<Vec<usize>> {
    let inner = name
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(name.trim());
    let word = inner
        .split(',')
        .map(|s| alphabet.require(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    if word.len() != n {
        return Err(Error::InvalidInput(format!(
            "word {name:?} does not have length {n}"
        )));
    }
    Ok(word)
}

/// True iff the output sets of distinct messages are disjoint under `tb^n`.
pub fn is_zero_error(code: &WiretapCode, tb: &UncertainChannel) -> bool {
    if code.check_symbols(tb.input().len()).is_err() {
        return false;
    }
    let mut owner: HashMap<Vec<usize>, usize> = HashMap::new();
    for (m, class) in code.classes.iter().enumerate() {
        for w in class {
            for out in tb.word_outputs(w) {
                if let Some(prev) = owner.insert(out, m) {
                    if prev != m {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Minimum, over eavesdropper words reachable from some codeword, of the
/// number of messages that can produce that word. Zero for an empty code.
pub fn wiretap_gamma(code: &WiretapCode, tc: &UncertainChannel) -> usize {
    if code.check_symbols(tc.input().len()).is_err() {
        return 0;
    }
    let mut producers: HashMap<Vec<usize>, BTreeSet<usize>> = HashMap::new();
    for (m, class) in code.classes.iter().enumerate() {
        for w in class {
            for out in tc.word_outputs(w) {
                producers.entry(out).or_default().insert(m);
            }
        }
    }
    producers.values().map(BTreeSet::len).min().unwrap_or(0)
}

/// Verifies and records `gamma`.
pub fn measure(mut code: WiretapCode, tc: &UncertainChannel) -> WiretapCode {
    code.gamma = Some(wiretap_gamma(&code, tc));
    code
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub singleton_only: bool,
    pub budget: Duration,
    pub power_cap: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            singleton_only: false,
            budget: DEFAULT_BUDGET,
            power_cap: DEFAULT_POWER_CAP,
        }
    }
}

/// Outcome of a maximisation. When `exact` is false the budget ran out and
/// `value` is only a lower bound.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: usize,
    pub value: usize,
    pub witness: Option<WiretapCode>,
    pub exact: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

impl SearchResult {
    pub fn gamma(&self) -> usize {
        self.witness.as_ref().and_then(|c| c.gamma).unwrap_or(0)
    }

    pub fn rate(&self) -> f64 {
        (self.value as f64).log2() / self.n as f64
    }
}

/// Largest zero-error code for `tb^n`: a maximum independent set of the
/// confusability graph, one word per message.
pub fn search_max_zero_error(
    tb: &UncertainChannel,
    n: usize,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let start = Instant::now();
    let g = ConfusabilityGraph::from_channel(&tb.power_capped(n, opts.power_cap)?);
    let (set, exact) = g.maximum_independent_set(Some(start + opts.budget));
    let k = tb.input().len();
    let classes = set
        .iter()
        .map(|&i| vec![word_from_index(i, k, n)])
        .collect();
    let witness = WiretapCode::new(n, classes)?;
    if !is_zero_error(&witness, tb) {
        return Err(Error::Contract(
            "independent set is not a zero-error code".into(),
        ));
    }
    Ok(SearchResult {
        n,
        value: set.len(),
        witness: Some(witness),
        exact,
        nodes: 0,
        elapsed: start.elapsed(),
    })
}

const UNASSIGNED: i32 = -2;
const UNUSED: i32 = -1;

struct WiretapSearch<'a> {
    g: &'a ConfusabilityGraph,
    word_edges: Vec<Vec<usize>>,
    edges: Vec<Vec<usize>>,
    label: Vec<i32>,
    nbr_used: Vec<u32>,
    labels: usize,
    best: usize,
    best_label: Vec<i32>,
    target: usize,
    singleton_only: bool,
    deadline: Instant,
    timed_out: bool,
    nodes: u64,
}

impl WiretapSearch<'_> {
    fn feasible_around(&self, w: usize) -> bool {
        for &e in &self.word_edges[w] {
            let mut used = 0;
            let mut open = 0;
            let mut first: Option<i32> = None;
            let mut distinct = 0;
            for &v in &self.edges[e] {
                match self.label[v] {
                    UNASSIGNED => open += 1,
                    UNUSED => {}
                    l => {
                        used += 1;
                        match first {
                            None => {
                                first = Some(l);
                                distinct = 1;
                            }
                            Some(f) if f != l => distinct = 2,
                            _ => {}
                        }
                    }
                }
            }
            if used > 0 && distinct + open < 2 {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, w: usize, l: i32) {
        self.label[w] = l;
        if l >= 0 {
            for u in self.g.neighbours(w).ones() {
                self.nbr_used[u] += 1;
            }
        }
    }

    fn unassign(&mut self, w: usize) {
        if self.label[w] >= 0 {
            for u in self.g.neighbours(w).ones() {
                self.nbr_used[u] -= 1;
            }
        }
        self.label[w] = UNASSIGNED;
    }

    fn can_take(&self, w: usize, l: i32) -> bool {
        self.g
            .neighbours(w)
            .ones()
            .all(|u| self.label[u] < 0 || self.label[u] == l)
    }

    fn upper_bound(&self, from: usize) -> usize {
        let mut free = FixedBitSet::with_capacity(self.label.len());
        for v in from..self.label.len() {
            if self.nbr_used[v] == 0 {
                free.insert(v);
            }
        }
        self.labels + clique_cover_bound(self.g, &free)
    }

    fn run(&mut self, w: usize) {
        if self.timed_out || self.best >= self.target {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline {
            self.timed_out = true;
            return;
        }
        if w == self.label.len() {
            if self.labels >= 2 && self.labels > self.best {
                self.best = self.labels;
                self.best_label = self.label.clone();
            }
            return;
        }
        if self.upper_bound(w) <= self.best.max(1) {
            return;
        }
        let fresh = self.labels as i32;
        let mut options: Vec<i32> = Vec::with_capacity(self.labels + 2);
        if self.nbr_used[w] == 0 {
            options.push(fresh);
        }
        if !self.singleton_only {
            options.extend((0..fresh).filter(|&l| self.can_take(w, l)));
        }
        options.push(UNUSED);
        for l in options {
            self.assign(w, l);
            if l == fresh {
                self.labels += 1;
            }
            if self.feasible_around(w) {
                self.run(w + 1);
            }
            if l == fresh {
                self.labels -= 1;
            }
            self.unassign(w);
            if self.timed_out || self.best >= self.target {
                return;
            }
        }
    }
}

/// Largest zero-error wiretap code for `(tb^n, tc^n)`, by branch and bound
/// over assignments of words to messages. The value is 1 with no witness
/// when no code with two or more messages exists.
pub fn search_max_wiretap(
    tb: &UncertainChannel,
    tc: &UncertainChannel,
    n: usize,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if tb.input() != tc.input() {
        return Err(Error::AlphabetMismatch(
            "channels have different inputs".into(),
        ));
    }
    let start = Instant::now();
    let deadline = start + opts.budget;
    let g = ConfusabilityGraph::from_channel(&tb.power_capped(n, opts.power_cap)?);
    let h = EveHypergraph::from_channel(&tc.power_capped(n, opts.power_cap)?);
    let words = g.len();

    let mut edges: Vec<Vec<usize>> = h.edges().iter().map(|e| e.members.clone()).collect();
    edges.sort();
    edges.dedup();
    let mut word_edges = vec![Vec::new(); words];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            word_edges[v].push(i);
        }
    }

    let (mis, mis_exact) = g.maximum_independent_set(Some(deadline));
    let target = if mis_exact { mis.len() } else { words };

    let mut s = WiretapSearch {
        g: &g,
        word_edges,
        edges,
        label: vec![UNASSIGNED; words],
        nbr_used: vec![0; words],
        labels: 0,
        best: 0,
        best_label: Vec::new(),
        target,
        singleton_only: opts.singleton_only,
        deadline,
        timed_out: !mis_exact,
        nodes: 0,
    };
    if mis_exact {
        s.run(0);
    }

    let k = tb.input().len();
    let witness = if s.best >= 2 {
        let mut classes = vec![Vec::new(); s.best];
        for (i, &l) in s.best_label.iter().enumerate() {
            if l >= 0 {
                classes[l as usize].push(word_from_index(i, k, n));
            }
        }
        let code = measure(WiretapCode::new(n, classes)?, tc);
        if !is_zero_error(&code, tb) || code.gamma < Some(2) {
            return Err(Error::Contract(
                "search returned an invalid wiretap code".into(),
            ));
        }
        Some(code)
    } else {
        None
    };
    Ok(SearchResult {
        n,
        value: s.best.max(1),
        witness,
        exact: !s.timed_out,
        nodes: s.nodes,
        elapsed: start.elapsed(),
    })
}

/// The concatenated code `F × G` with message `m1 * M2 + m2` carried by the
/// words `u ++ v`, `u ∈ F(m1)`, `v ∈ G(m2)`.
pub fn concatenate(f: &WiretapCode, g: &WiretapCode, wt: &WiretapChannel) -> Result<WiretapCode> {
    if !is_zero_error(f, &wt.tb) || wiretap_gamma(f, &wt.tc) < 2 {
        return Err(Error::Precondition(
            "first factor must be a zero-error wiretap code".into(),
        ));
    }
    if !is_zero_error(g, &wt.tb) {
        return Err(Error::Precondition(
            "second factor must be a zero-error code".into(),
        ));
    }
    let mut classes = Vec::with_capacity(f.message_count() * g.message_count());
    for c1 in f.classes() {
        for c2 in g.classes() {
            let mut words = Vec::with_capacity(c1.len() * c2.len());
            for u in c1 {
                for v in c2 {
                    let mut w = u.clone();
                    w.extend_from_slice(v);
                    words.push(w);
                }
            }
            classes.push(words);
        }
    }
    let code = measure(WiretapCode::new(f.n + g.n, classes)?, &wt.tc);
    let gamma_f = wiretap_gamma(f, &wt.tc);
    if !is_zero_error(&code, &wt.tb) || code.gamma.unwrap_or(0) < gamma_f {
        return Err(Error::Contract(
            "concatenated code failed verification".into(),
        ));
    }
    Ok(code)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// No positive secrecy rate is possible.
    Zero,
    /// The secrecy capacity equals `log2 |A|`.
    LogInputs,
    /// A wiretap code exists, so the secrecy capacity equals the zero-error
    /// capacity of the receiver channel.
    EqualsZeroErrorCapacity,
    /// No wiretap code found within the searched blocklengths.
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Zero => "zero",
            Verdict::LogInputs => "log2|A|",
            Verdict::EqualsZeroErrorCapacity => "C0(T_B) (positive)",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CapacityReport {
    pub channel: String,
    pub n_values: Vec<usize>,
    /// Largest zero-error code size per blocklength.
    pub n_zero_error: Vec<usize>,
    /// Largest wiretap code size per blocklength (1 when none exists).
    pub n_wiretap: Vec<usize>,
    pub exact: bool,
    /// `(n1, n2, bound)` from concatenating the first wiretap code with the
    /// best zero-error code at `n2`.
    pub concatenation_bounds: Vec<(usize, usize, f64)>,
    pub verdict: Verdict,
    /// Best certified lower bound on the secrecy capacity in bits.
    pub rate_lower_bound: f64,
    /// Exact capacity when it is known.
    pub capacity: Option<f64>,
    pub first_witness: Option<WiretapCode>,
}

impl CapacityReport {
    pub fn rates(&self) -> Vec<f64> {
        self.n_values
            .iter()
            .zip(&self.n_wiretap)
            .map(|(&n, &v)| (v as f64).log2() / n as f64)
            .collect()
    }
}

impl fmt::Display for CapacityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "channel: {}", self.channel)?;
        for (i, &n) in self.n_values.iter().enumerate() {
            writeln!(
                f,
                "n={n}: N_T={} N_wiretap={}",
                self.n_zero_error[i], self.n_wiretap[i]
            )?;
        }
        for &(n1, n2, b) in &self.concatenation_bounds {
            writeln!(f, "concatenation n1={n1} n2={n2}: rate >= {b:.6}")?;
        }
        if !self.exact {
            writeln!(f, "search budget exhausted: values are lower bounds")?;
        }
        match self.verdict {
            Verdict::EqualsZeroErrorCapacity => {
                let n1 = self.first_witness.as_ref().map_or(0, |c| c.blocklength());
                write!(
                    f,
                    "wiretap code found at n={n1}, rate lower bound {} bit",
                    short(self.rate_lower_bound)
                )
            }
            Verdict::Undecided => write!(
                f,
                "no wiretap code found up to n={}",
                self.n_values.last().copied().unwrap_or(0)
            ),
            _ => write!(
                f,
                "capacity {} = {:.6} bit",
                self.verdict,
                self.capacity.unwrap_or(0.0)
            ),
        }
    }
}

/// Four decimals with trailing zeros dropped, keeping at least one.
fn short(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0');
    if s.ends_with('.') {
        format!("{s}0")
    } else {
        s.to_string()
    }
}

/// Exact secrecy capacity when the receiver channel is injective.
pub fn secrecy_capacity_injective(wt: &WiretapChannel, n_max: usize) -> Result<CapacityReport> {
    if !wt.tb.is_injective() {
        return Err(Error::Precondition(
            "receiver channel is not injective".into(),
        ));
    }
    let trace = eliminate_block(&wt.tb, &wt.tc, 1)?;
    let k = wt.inputs().len() as u128;
    let dead = trace.final_set.len() as u128;
    let positive = dead < k;
    let n_values: Vec<usize> = (1..=n_max.max(1)).collect();
    let mut n_zero_error = Vec::new();
    let mut n_wiretap = Vec::new();
    for &n in &n_values {
        let all = k.pow(n as u32);
        n_zero_error.push(all as usize);
        let count = if positive {
            all - dead.pow(n as u32)
        } else {
            1
        };
        n_wiretap.push((count.max(1)) as usize);
    }
    let capacity = if positive { (k as f64).log2() } else { 0.0 };
    Ok(CapacityReport {
        channel: wt.name.clone(),
        n_values,
        n_zero_error,
        n_wiretap,
        exact: true,
        concatenation_bounds: Vec::new(),
        verdict: if positive {
            Verdict::LogInputs
        } else {
            Verdict::Zero
        },
        rate_lower_bound: capacity,
        capacity: Some(capacity),
        first_witness: None,
    })
}

/// Searches blocklengths `1..=n_max` for a wiretap code; on success, reports
/// the rates reachable by concatenation with zero-error codes. A negative
/// outcome is not a proof that the capacity is zero.
pub fn dichotomy_check(
    wt: &WiretapChannel,
    n_max: usize,
    opts: &SearchOptions,
) -> Result<CapacityReport> {
    let mut report = CapacityReport {
        channel: wt.name.clone(),
        n_values: Vec::new(),
        n_zero_error: Vec::new(),
        n_wiretap: Vec::new(),
        exact: true,
        concatenation_bounds: Vec::new(),
        verdict: Verdict::Undecided,
        rate_lower_bound: 0.0,
        capacity: None,
        first_witness: None,
    };
    for n in 1..=n_max {
        let z = search_max_zero_error(&wt.tb, n, opts)?;
        let w = search_max_wiretap(&wt.tb, &wt.tc, n, opts)?;
        report.exact &= z.exact && w.exact;
        report.n_values.push(n);
        report.n_zero_error.push(z.value);
        report.n_wiretap.push(w.value);
        if report.first_witness.is_none() {
            report.first_witness = w.witness.clone();
        }
        if w.value >= 2 {
            report.rate_lower_bound = report.rate_lower_bound.max(w.rate());
        }
    }
    if let Some(f) = &report.first_witness {
        let (n1, m1) = (f.blocklength(), f.message_count() as f64);
        for (i, &n2) in report.n_values.iter().enumerate() {
            let bound = ((report.n_zero_error[i] as f64).log2() + m1.log2()) / (n1 + n2) as f64;
            report.concatenation_bounds.push((n1, n2, bound));
            report.rate_lower_bound = report.rate_lower_bound.max(bound);
        }
        report.verdict = Verdict::EqualsZeroErrorCapacity;
    }
    Ok(report)
}

/// Fixed point of `S ← ambient ∩ tc⁻¹(tc(S))`: the connected component of
/// `seed` in the input/output incidence graph restricted to `ambient`.
pub fn taxicab_closure(
    seed: &BTreeSet<usize>,
    ambient: &BTreeSet<usize>,
    tc: &UncertainChannel,
) -> Result<BTreeSet<usize>> {
    if seed.is_empty() {
        return Err(Error::Precondition("seed must be nonempty".into()));
    }
    if !seed.is_subset(ambient) {
        return Err(Error::Precondition(
            "seed must lie inside the ambient set".into(),
        ));
    }
    let mut s = seed.clone();
    loop {
        let outputs = tc.image(s.iter().copied());
        let next: BTreeSet<usize> = ambient
            .iter()
            .copied()
            .filter(|&a| tc.outputs(a).iter().any(|b| outputs.contains(b)))
            .collect();
        if next == s {
            return Ok(s);
        }
        s = next;
    }
}
