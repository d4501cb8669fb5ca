//! Finite uncertain channels: set-valued maps from input symbols to nonempty
//! sets of output symbols, with composition, reversal and block powers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};

/// Default cap on `|inputs|^n * |outputs|^n` when materializing a power.
pub const DEFAULT_POWER_CAP: u128 = 1_000_000;

/// Ordered list of distinct symbol names. The position of a symbol is its
/// canonical index.
#[derive(Clone, Debug)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidChannel("empty alphabet".into()));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::InvalidChannel(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Self { symbols, index })
    }

    /// `{0, 1, .., k-1}` named by their decimal indices.
    pub fn numbered(k: usize) -> Result<Self> {
        Self::new((0..k).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown symbol {name:?}")))
    }

    /// Alphabet of words of length `n`, lexicographic in component indices.
    /// Word names are `(s1,..,sn)`; for `n == 1` the alphabet is returned as is.
    pub fn power(&self, n: usize) -> Result<Self> {
        if n == 1 {
            return Ok(self.clone());
        }
        let k = self.len();
        let count = checked_pow(k, n).ok_or_else(|| Error::cap("word alphabet", u128::MAX, 0))?;
        Self::new((0..count).map(|i| {
            let w = word_from_index(i, k, n);
            self.word_name(&w)
        }))
    }

    /// Alphabet of pairs, named `(x,y)`.
    pub fn product(&self, other: &Alphabet) -> Result<Self> {
        let mut names = Vec::with_capacity(self.len() * other.len());
        for a in &self.symbols {
            for b in &other.symbols {
                names.push(format!("({a},{b})"));
            }
        }
        Self::new(names)
    }

    pub fn word_name(&self, word: &[usize]) -> String {
        let parts: Vec<&str> = word.iter().map(|&i| self.name(i)).collect();
        format!("({})", parts.join(","))
    }

    pub fn subset_names(&self, set: impl IntoIterator<Item = usize>) -> String {
        let parts: Vec<&str> = set.into_iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

pub(crate) fn checked_pow(k: usize, n: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

/// Index of `word` in the lexicographic order of `k`-ary words (first
/// component most significant).
pub fn word_index(word: &[usize], k: usize) -> usize {
    word.iter().fold(0, |acc, &s| acc * k + s)
}

pub fn word_from_index(mut index: usize, k: usize, n: usize) -> Vec<usize> {
    let mut word = vec![0; n];
    for slot in word.iter_mut().rev() {
        *slot = index % k;
        index /= k;
    }
    word
}

/// All elements of the Cartesian product of `sets`, lexicographic.
pub fn cartesian<T: Clone>(sets: &[&[T]]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for set in sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for prefix in &out {
            for item in set.iter() {
                let mut w = prefix.clone();
                w.push(item.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// A total set-valued map from `input` to nonempty subsets of `output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UncertainChannel {
    input: Alphabet,
    output: Alphabet,
    rel: Vec<Vec<usize>>,
}

impl UncertainChannel {
    pub fn new(input: Alphabet, output: Alphabet, rel: Vec<Vec<usize>>) -> Result<Self> {
        if rel.len() != input.len() {
            return Err(Error::InvalidChannel(format!(
                "relation has {} rows for {} inputs",
                rel.len(),
                input.len()
            )));
        }
        let mut clean = Vec::with_capacity(rel.len());
        for (a, outs) in rel.into_iter().enumerate() {
            let set: BTreeSet<usize> = outs.into_iter().collect();
            if set.is_empty() {
                return Err(Error::InvalidChannel(format!(
                    "input {:?} has no output",
                    input.name(a)
                )));
            }
            if let Some(&bad) = set.iter().find(|&&b| b >= output.len()) {
                return Err(Error::InvalidChannel(format!(
                    "output index {bad} out of range for input {:?}",
                    input.name(a)
                )));
            }
            clean.push(set.into_iter().collect());
        }
        Ok(Self {
            input,
            output,
            rel: clean,
        })
    }

    /// Builds a channel from symbol names and `(input, [outputs])` rows.
    pub fn from_names(inputs: &[&str], outputs: &[&str], rows: &[(&str, &[&str])]) -> Result<Self> {
        let input = Alphabet::new(inputs.iter().copied())?;
        let output = Alphabet::new(outputs.iter().copied())?;
        let mut rel = vec![Vec::new(); input.len()];
        for (a, outs) in rows {
            let ai = input.require(a)?;
            for b in outs.iter() {
                rel[ai].push(output.require(b)?);
            }
        }
        Self::new(input, output, rel)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Self {
            input: alphabet.clone(),
            output: alphabet.clone(),
            rel: (0..alphabet.len()).map(|a| vec![a]).collect(),
        }
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    /// Sorted output indices permitted for input `a`.
    pub fn outputs(&self, a: usize) -> &[usize] {
        &self.rel[a]
    }

    pub fn permits(&self, a: usize, b: usize) -> bool {
        self.rel[a].binary_search(&b).is_ok()
    }

    /// `u2 ∘ self`: each input goes to the union of `u2` over its outputs.
    pub fn compose(&self, u2: &UncertainChannel) -> Result<UncertainChannel> {
        let mine: BTreeSet<&String> = self.output.symbols.iter().collect();
        let theirs: BTreeSet<&String> = u2.input.symbols.iter().collect();
        if mine != theirs {
            return Err(Error::AlphabetMismatch(format!(
                "cannot compose: outputs {:?} vs inputs {:?}",
                self.output.symbols, u2.input.symbols
            )));
        }
        let rel = self
            .rel
            .iter()
            .map(|outs| {
                let mut set = BTreeSet::new();
                for &v in outs {
                    let vi = u2.input.index_of(self.output.name(v)).unwrap();
                    set.extend(u2.rel[vi].iter().copied());
                }
                set.into_iter().collect()
            })
            .collect();
        UncertainChannel::new(self.input.clone(), u2.output.clone(), rel)
    }

    /// `ran(self)`, sorted.
    pub fn range(&self) -> BTreeSet<usize> {
        self.rel.iter().flatten().copied().collect()
    }

    /// Preimage of a single output.
    pub fn preimage(&self, b: usize) -> BTreeSet<usize> {
        (0..self.input.len())
            .filter(|&a| self.permits(a, b))
            .collect()
    }

    /// Image of a set of inputs.
    pub fn image(&self, inputs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        inputs
            .into_iter()
            .flat_map(|a| self.rel[a].iter().copied())
            .collect()
    }

    /// Reverse channel on `ran(self)`: `v ↦ {a : v ∈ self(a)}`.
    pub fn reverse(&self) -> UncertainChannel {
        let range: Vec<usize> = self.range().into_iter().collect();
        let alphabet = Alphabet::new(range.iter().map(|&b| self.output.name(b).to_string()))
            .expect("range of a channel is a nonempty set of distinct symbols");
        let rel = range
            .iter()
            .map(|&b| self.preimage(b).into_iter().collect())
            .collect();
        UncertainChannel {
            input: alphabet,
            output: self.input.clone(),
            rel,
        }
    }

    /// True iff every reachable output has exactly one preimage.
    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.output.len()];
        for outs in &self.rel {
            for &b in outs {
                if std::mem::replace(&mut seen[b], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Output words of an input word, evaluated componentwise without
    /// materializing the power channel.
    pub fn word_outputs(&self, word: &[usize]) -> Vec<Vec<usize>> {
        let sets: Vec<&[usize]> = word.iter().map(|&a| self.outputs(a)).collect();
        cartesian(&sets)
    }

    /// Whether output word `out` is permitted for input word `word`.
    pub fn word_permits(&self, word: &[usize], out: &[usize]) -> bool {
        word.len() == out.len() && word.iter().zip(out).all(|(&a, &b)| self.permits(a, b))
    }

    pub fn power(&self, n: usize) -> Result<UncertainChannel> {
        self.power_capped(n, DEFAULT_POWER_CAP)
    }

    /// n-fold block power `self × … × self` on words of length `n`.
    pub fn power_capped(&self, n: usize, cap: u128) -> Result<UncertainChannel> {
        if n == 0 {
            return Err(Error::Precondition("power requires n >= 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let k_in = self.input.len() as u128;
        let k_out = self.output.len() as u128;
        let pairs = k_in
            .checked_pow(n as u32)
            .and_then(|a| k_out.checked_pow(n as u32).and_then(|b| a.checked_mul(b)))
            .unwrap_or(u128::MAX);
        if pairs > cap {
            return Err(Error::cap(format!("power of degree {n}"), pairs, cap));
        }
        let input = self.input.power(n)?;
        let output = self.output.power(n)?;
        let k_out = self.output.len();
        let rel = (0..input.len())
            .map(|i| {
                let w = word_from_index(i, self.input.len(), n);
                self.word_outputs(&w)
                    .iter()
                    .map(|o| word_index(o, k_out))
                    .collect()
            })
            .collect();
        UncertainChannel::new(input, output, rel)
    }
}

impl fmt::Display for UncertainChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, outs) in self.rel.iter().enumerate() {
            writeln!(
                f,
                "{} -> {}",
                self.input.name(a),
                self.output.subset_names(outs.iter().copied())
            )?;
        }
        Ok(())
    }
}

/// A pair of channels from a common input alphabet: `tb` to the legitimate
/// receiver and `tc` to the eavesdropper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WiretapChannel {
    pub name: String,
    pub tb: UncertainChannel,
    pub tc: UncertainChannel,
}

impl WiretapChannel {
    pub fn new(
        name: impl Into<String>,
        tb: UncertainChannel,
        tc: UncertainChannel,
    ) -> Result<Self> {
        if tb.input() != tc.input() {
            return Err(Error::AlphabetMismatch(
                "receiver and eavesdropper channels have different inputs".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            tb,
            tc,
        })
    }

    pub fn inputs(&self) -> &Alphabet {
        self.tb.input()
    }
}

/// Channel description file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelSpec {
    name: String,
    inputs: Vec<String>,
    outputs_b: Vec<String>,
    #[serde(default)]
    outputs_c: Option<Vec<String>>,
    tb: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    tc: Option<BTreeMap<String, Vec<String>>>,
}

/// A parsed channel file: a plain channel, or a wiretap pair when `tc` is set.
#[derive(Clone, Debug)]
pub struct ChannelFile {
    pub name: String,
    pub tb: UncertainChannel,
    pub tc: Option<UncertainChannel>,
}

impl ChannelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)
            .map_err(|e| Error::InvalidChannel(format!("malformed channel file: {e}")))?;
        let input = Alphabet::new(spec.inputs.clone())?;
        let tb = build_rel(&input, &spec.outputs_b, &spec.tb, "tb")?;
        let tc = match (spec.outputs_c, spec.tc) {
            (Some(outs), Some(map)) => Some(build_rel(&input, &outs, &map, "tc")?),
            (None, None) => None,
            _ => {
                return Err(Error::InvalidChannel(
                    "\"outputs_c\" and \"tc\" must be given together".into(),
                ))
            }
        };
        Ok(Self {
            name: spec.name,
            tb,
            tc,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn wiretap(&self) -> Result<WiretapChannel> {
        let tc = self.tc.clone().ok_or_else(|| {
            Error::InvalidChannel(format!(
                "{:?} has no eavesdropper channel \"tc\"",
                self.name
            ))
        })?;
        WiretapChannel::new(self.name.clone(), self.tb.clone(), tc)
    }
}

fn build_rel(
    input: &Alphabet,
    outputs: &[String],
    map: &BTreeMap<String, Vec<String>>,
    field: &str,
) -> Result<UncertainChannel> {
    let output = Alphabet::new(outputs.iter().cloned())?;
    for key in map.keys() {
        if input.index_of(key).is_none() {
            return Err(Error::InvalidChannel(format!(
                "{field}: unknown input symbol {key:?}"
            )));
        }
    }
    let mut rel = Vec::with_capacity(input.len());
    for a in input.symbols() {
        let outs = map
            .get(a)
            .ok_or_else(|| Error::InvalidChannel(format!("{field}: input {a:?} has no entry")))?;
        if outs.is_empty() {
            return Err(Error::InvalidChannel(format!(
                "{field}: input {a:?} maps to an empty list"
            )));
        }
        let mut row = Vec::with_capacity(outs.len());
        for b in outs {
            row.push(output.index_of(b).ok_or_else(|| {
                Error::InvalidChannel(format!("{field}: unknown output symbol {b:?}"))
            })?);
        }
        rel.push(row);
    }
    UncertainChannel::new(input.clone(), output, rel)
}
