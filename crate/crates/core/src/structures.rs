//! Confusability graphs, eavesdropper hypergraphs, their block products, and
//! the iterative elimination of inputs that no wiretap code can use.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use crate::channel::{cartesian, Alphabet, UncertainChannel, DEFAULT_POWER_CAP};
use crate::error::{Error, Result};

/// Simple graph on an alphabet: `a ~ a'` iff the two inputs share an output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusabilityGraph {
    vertices: Alphabet,
    adj: Vec<FixedBitSet>,
}

impl ConfusabilityGraph {
    pub fn from_channel(t: &UncertainChannel) -> Self {
        let k = t.input().len();
        let mut adj = vec![FixedBitSet::with_capacity(k); k];
        let mut by_output: Vec<Vec<usize>> = vec![Vec::new(); t.output().len()];
        for a in 0..k {
            for &b in t.outputs(a) {
                by_output[b].push(a);
            }
        }
        for group in &by_output {
            for (i, &u) in group.iter().enumerate() {
                for &v in &group[i + 1..] {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Self {
            vertices: t.input().clone(),
            adj,
        }
    }

    /// Builds a graph from an explicit edge list.
    pub fn from_edges(vertices: Alphabet, edges: &[(usize, usize)]) -> Result<Self> {
        let k = vertices.len();
        let mut adj = vec![FixedBitSet::with_capacity(k); k];
        for &(u, v) in edges {
            if u >= k || v >= k {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) out of range")));
            }
            if u != v {
                adj[u].insert(v);
                adj[v].insert(u);
            }
        }
        Ok(Self { vertices, adj })
    }

    pub fn vertices(&self) -> &Alphabet {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn neighbours(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            out.extend(self.adj[u].ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.adjacent(u, v)))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    /// Strong product; the vertex `(a, b)` has index `a * |g2| + b`.
    pub fn strong_product(&self, other: &ConfusabilityGraph) -> Result<Self> {
        let vertices = self.vertices.product(&other.vertices)?;
        Ok(self.strong_product_on(other, vertices))
    }

    fn strong_product_on(&self, other: &ConfusabilityGraph, vertices: Alphabet) -> Self {
        let (k1, k2) = (self.len(), other.len());
        let mut adj = vec![FixedBitSet::with_capacity(k1 * k2); k1 * k2];
        for a in 0..k1 {
            for b in 0..k2 {
                let row = &mut adj[a * k2 + b];
                for a2 in std::iter::once(a).chain(self.adj[a].ones()) {
                    for b2 in std::iter::once(b).chain(other.adj[b].ones()) {
                        if a2 != a || b2 != b {
                            row.insert(a2 * k2 + b2);
                        }
                    }
                }
            }
        }
        Self { vertices, adj }
    }

    /// n-fold strong product, with vertices named as words over the base
    /// alphabet in lexicographic order.
    pub fn strong_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("strong power requires n >= 1".into()));
        }
        let mut g = self.clone();
        for _ in 1..n {
            g = g.strong_product_on(self, Alphabet::numbered(g.len() * self.len())?);
        }
        g.vertices = self.vertices.power(n)?;
        Ok(g)
    }

    /// Maximum independent set by branch and bound with a clique-cover bound.
    /// Returns the set and whether the search completed before `deadline`.
    /// Among maximum sets the lexicographically least is returned.
    pub fn maximum_independent_set(&self, deadline: Option<Instant>) -> (Vec<usize>, bool) {
        let mut mis = Mis {
            g: self,
            best: Vec::new(),
            current: Vec::new(),
            deadline,
            timed_out: false,
            nodes: 0,
        };
        let mut all = FixedBitSet::with_capacity(self.len());
        all.insert_range(..);
        mis.run(all);
        (mis.best, !mis.timed_out)
    }

    pub fn independence_number(&self) -> usize {
        self.maximum_independent_set(None).0.len()
    }
}

impl fmt::Display for ConfusabilityGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .iter()
            .map(|&(u, v)| format!("{}~{}", self.vertices.name(u), self.vertices.name(v)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

struct Mis<'a> {
    g: &'a ConfusabilityGraph,
    best: Vec<usize>,
    current: Vec<usize>,
    deadline: Option<Instant>,
    timed_out: bool,
    nodes: u64,
}

impl Mis<'_> {
    fn run(&mut self, candidates: FixedBitSet) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return;
        }
        let Some(v) = candidates.minimum() else {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        };
        if self.current.len() + clique_cover_bound(self.g, &candidates) <= self.best.len() {
            return;
        }
        let mut with = candidates.clone();
        with.difference_with(&self.g.adj[v]);
        with.set(v, false);
        self.current.push(v);
        self.run(with);
        self.current.pop();
        let mut without = candidates;
        without.set(v, false);
        self.run(without);
    }
}

/// Number of cliques in a greedy clique cover of `set`; an upper bound on the
/// independence number of the induced subgraph.
pub(crate) fn clique_cover_bound(g: &ConfusabilityGraph, set: &FixedBitSet) -> usize {
    let mut left = set.clone();
    let mut count = 0;
    while let Some(v) = left.minimum() {
        count += 1;
        let mut common = g.adj[v].clone();
        common.intersect_with(&left);
        left.set(v, false);
        while let Some(u) = common.minimum() {
            left.set(u, false);
            common.intersect_with(&g.adj[u]);
        }
    }
    count
}

/// One hyperedge: the preimage of an eavesdropper output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperEdge {
    pub tag: String,
    pub members: Vec<usize>,
}

/// Hypergraph whose edges are the preimages of reachable eavesdropper outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EveHypergraph {
    vertices: Alphabet,
    edges: Vec<HyperEdge>,
}

impl EveHypergraph {
    pub fn from_channel(tc: &UncertainChannel) -> Self {
        let edges = tc
            .range()
            .into_iter()
            .map(|c| HyperEdge {
                tag: tc.output().name(c).to_string(),
                members: tc.preimage(c).into_iter().collect(),
            })
            .collect();
        Self {
            vertices: tc.input().clone(),
            edges,
        }
    }

    pub fn new(vertices: Alphabet, edges: Vec<HyperEdge>) -> Result<Self> {
        for e in &edges {
            if e.members.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "hyperedge {:?} is empty",
                    e.tag
                )));
            }
            if e.members.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::InvalidInput(format!(
                    "hyperedge {:?} out of range",
                    e.tag
                )));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices(&self) -> &Alphabet {
        &self.vertices
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    /// All products `e1 × e2`; vertex `(a, b)` has index `a * |h2| + b`.
    pub fn square_product(&self, other: &EveHypergraph) -> Result<Self> {
        let vertices = self.vertices.product(&other.vertices)?;
        let k2 = other.vertices.len();
        let mut edges = Vec::with_capacity(self.edges.len() * other.edges.len());
        for e1 in &self.edges {
            for e2 in &other.edges {
                let mut members = Vec::with_capacity(e1.members.len() * e2.members.len());
                for &a in &e1.members {
                    members.extend(e2.members.iter().map(|&b| a * k2 + b));
                }
                edges.push(HyperEdge {
                    tag: format!("({},{})", e1.tag, e2.tag),
                    members,
                });
            }
        }
        Ok(Self { vertices, edges })
    }

    /// n-fold square product over words of length `n`.
    pub fn square_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("square power requires n >= 1".into()));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let vertices = self.vertices.power(n)?;
        let k = self.vertices.len();
        let idx: Vec<usize> = (0..self.edges.len()).collect();
        let slots: Vec<&[usize]> = vec![&idx; n];
        let edges = cartesian(&slots)
            .into_iter()
            .map(|choice| {
                let tags: Vec<&str> = choice.iter().map(|&e| self.edges[e].tag.as_str()).collect();
                let sets: Vec<&[usize]> = choice
                    .iter()
                    .map(|&e| self.edges[e].members.as_slice())
                    .collect();
                let members = cartesian(&sets)
                    .iter()
                    .map(|w| crate::channel::word_index(w, k))
                    .collect();
                HyperEdge {
                    tag: format!("({})", tags.join(",")),
                    members,
                }
            })
            .collect();
        Ok(Self { vertices, edges })
    }
}

impl fmt::Display for EveHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges
            .iter()
            .map(|e| self.vertices.subset_names(e.members.iter().copied()))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// One round of elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationRound {
    pub index: usize,
    /// Tags of the restricted hyperedges that were singletons or cliques.
    pub removed_edges: Vec<String>,
    /// Vertices newly added in this round.
    pub added: Vec<usize>,
    /// The cumulative unusable set after this round.
    pub set: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub vertices: Alphabet,
    pub rounds: Vec<EliminationRound>,
    pub final_set: Vec<usize>,
    pub stop_index: usize,
}

impl EliminationTrace {
    pub fn survivors(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|v| self.final_set.binary_search(v).is_err())
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.final_set.is_empty()
    }
}

impl fmt::Display for EliminationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |s: &[usize]| self.vertices.subset_names(s.iter().copied());
        for r in &self.rounds {
            writeln!(
                f,
                "round {}: edges [{}] remove {} -> A_sc = {}",
                r.index,
                r.removed_edges.join(" "),
                names(&r.added),
                names(&r.set)
            )?;
        }
        writeln!(f, "stop index I = {}", self.stop_index)?;
        writeln!(f, "unusable: {}", names(&self.final_set))?;
        write!(f, "survivors: {}", names(&self.survivors()))
    }
}

/// Fixed-point elimination of inputs lying in a hyperedge that, restricted to
/// the not yet eliminated inputs, is a singleton or a clique of `g`.
pub fn eliminate(g: &ConfusabilityGraph, h: &EveHypergraph) -> Result<EliminationTrace> {
    if g.vertices() != h.vertices() {
        return Err(Error::AlphabetMismatch(
            "graph and hypergraph have different vertex sets".into(),
        ));
    }
    // Identical preimages are scanned once but all their tags are reported.
    let mut groups: BTreeMap<&[usize], Vec<&str>> = BTreeMap::new();
    let mut order: Vec<&[usize]> = Vec::new();
    for e in h.edges() {
        let entry = groups.entry(e.members.as_slice()).or_default();
        if entry.is_empty() {
            order.push(e.members.as_slice());
        }
        entry.push(e.tag.as_str());
    }

    let k = g.len();
    let mut prev = FixedBitSet::with_capacity(k);
    let mut rounds = Vec::new();
    let mut i = 0usize;
    loop {
        let mut cur = prev.clone();
        let mut removed_edges = Vec::new();
        for members in &order {
            let restricted: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&v| !prev.contains(v))
                .collect();
            if restricted.is_empty() {
                continue;
            }
            if restricted.len() == 1 || g.is_clique(&restricted) {
                removed_edges.extend(groups[members].iter().map(|t| t.to_string()));
                for v in restricted {
                    cur.insert(v);
                }
            }
        }
        let added: Vec<usize> = cur.difference(&prev).collect();
        rounds.push(EliminationRound {
            index: i,
            removed_edges,
            added: added.clone(),
            set: cur.ones().collect(),
        });
        if added.is_empty() {
            let stop_index = i.saturating_sub(1);
            return Ok(EliminationTrace {
                vertices: g.vertices().clone(),
                rounds,
                final_set: cur.ones().collect(),
                stop_index,
            });
        }
        prev = cur;
        i += 1;
    }
}

/// Elimination for the block pair `(tb^n, tc^n)`.
pub fn eliminate_block(
    tb: &UncertainChannel,
    tc: &UncertainChannel,
    n: usize,
) -> Result<EliminationTrace> {
    let g = ConfusabilityGraph::from_channel(&tb.power_capped(n, DEFAULT_POWER_CAP)?);
    let h = EveHypergraph::from_channel(&tc.power_capped(n, DEFAULT_POWER_CAP)?);
    eliminate(&g, &h)
}

/// Compares elimination at blocklength `n` with the n-fold power of the
/// blocklength-one result, and the stop index with `n` times the one-shot
/// index when the one-shot set is nonempty.
pub fn check_elim_square(tb: &UncertainChannel, tc: &UncertainChannel, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("blocklength must be at least 1".into()));
    }
    let one = eliminate_block(tb, tc, 1)?;
    let direct = eliminate_block(tb, tc, n)?;
    let k = tb.input().len();
    let sets: Vec<&[usize]> = vec![one.final_set.as_slice(); n];
    let mut expected: Vec<usize> = cartesian(&sets)
        .iter()
        .map(|w| crate::channel::word_index(w, k))
        .collect();
    expected.sort_unstable();
    let sets_match = expected == direct.final_set;
    let index_match = one.final_set.is_empty() || direct.stop_index == n * one.stop_index;
    Ok(sets_match && index_match)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn names(a: &Alphabet, s: &[usize]) -> Vec<String> {
        s.iter().map(|&i| a.name(i).to_string()).collect()
    }

    #[test]
    fn fig2a_graph_is_a_path() {
        let g = ConfusabilityGraph::from_channel(&catalog::fig2a());
        assert_eq!(g.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g.independence_number(), 2);
    }

    #[test]
    fn strong_square_matches_power() {
        let t = catalog::fig2a();
        let g = ConfusabilityGraph::from_channel(&t);
        let direct = ConfusabilityGraph::from_channel(&t.power(2).unwrap());
        assert_eq!(g.strong_power(2).unwrap(), direct);
        assert_eq!(g.strong_product(&g).unwrap().edges(), direct.edges());
        assert_eq!(direct.independence_number(), 4);
    }

    #[test]
    fn hyperedges_of_fig8() {
        let wt = catalog::fig8();
        let h = EveHypergraph::from_channel(&wt.tc);
        assert_eq!(h.edges()[0].members, vec![0, 1, 2]);
        assert_eq!(h.edges()[1].members, vec![1, 2, 3]);
        let sq = h.square_product(&h).unwrap();
        let direct = EveHypergraph::from_channel(&wt.tc.power(2).unwrap());
        assert_eq!(sq.edges(), direct.edges());
        assert_eq!(h.square_power(2).unwrap(), direct);
    }

    #[test]
    fn fig7_elimination() {
        let wt = catalog::fig7();
        let tr = eliminate_block(&wt.tb, &wt.tc, 1).unwrap();
        let v = &tr.vertices;
        assert_eq!(names(v, &tr.rounds[0].added), ["a1"]);
        assert_eq!(names(v, &tr.rounds[1].added), ["a2"]);
        assert_eq!(tr.stop_index, 1);
        assert_eq!(names(v, &tr.survivors()), ["a3", "a4", "a5"]);
        assert!(check_elim_square(&wt.tb, &wt.tc, 2).unwrap());
    }

    #[test]
    fn fig8_has_nothing_to_eliminate() {
        let wt = catalog::fig8();
        let tr = eliminate_block(&wt.tb, &wt.tc, 1).unwrap();
        assert!(tr.is_empty());
        assert_eq!(tr.stop_index, 0);
        assert!(check_elim_square(&wt.tb, &wt.tc, 2).unwrap());
    }

    #[test]
    fn everything_eliminated_when_eve_sees_all() {
        let id = UncertainChannel::identity(&Alphabet::numbered(3).unwrap());
        let tr = eliminate_block(&id, &id, 1).unwrap();
        assert_eq!(tr.final_set, vec![0, 1, 2]);
        assert!(check_elim_square(&id, &id, 2).unwrap());
    }
}
