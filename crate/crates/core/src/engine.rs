//! Exact pebbling reachability by exhaustive search over distribution states.
//!
//! A distribution state is the exact per-vertex counts vector. Every pebbling
//! move strictly decreases the total number of pebbles, so the state graph is
//! a finite DAG and search terminates at depth at most `|P|`. Searches
//! memoize on the counts vector and prune with the weight relaxation
//! `reach(P,v) <= Σ_u P(u)·(1/2)^{d(u,v)}`, which no move can increase.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::graph::{Graph, Vertex, UNREACHABLE};
use crate::{Error, Result};

/// A pebble distribution over a fixed graph.
///
/// Value semantics: moves and searches never mutate a distribution in place.
#[derive(Clone, Debug)]
pub struct PebbleDistribution {
    graph: Arc<Graph>,
    counts: Vec<u32>,
    size: u32,
}

/// A single pebbling move: remove two pebbles at `from`, add one at `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PebblingMove {
    pub from: Vertex,
    pub to: Vertex,
}

impl PebblingMove {
    pub fn new(from: Vertex, to: Vertex) -> Self {
        PebblingMove { from, to }
    }
}

/// Exact per-vertex reachability statistics for one distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityReport {
    /// `reach(P,v)` for each vertex: the greatest k such that v is k-reachable.
    pub reach: Vec<u32>,
    /// `exc(P,v)`: `reach(P,v) - 1` when v is reachable, else 0.
    pub excess: Vec<u32>,
    /// Sorted list of reachable vertices.
    pub coverage: Vec<Vertex>,
    /// `TE(P) = Σ_v exc(P,v)`.
    pub total_excess: u64,
    /// Whether every vertex of the graph is reachable.
    pub solvable: bool,
}

impl ReachabilityReport {
    /// `cov(P)`: the number of reachable vertices.
    pub fn cov(&self) -> usize {
        self.coverage.len()
    }

    pub fn is_covered(&self, v: Vertex) -> bool {
        self.reach[v] >= 1
    }
}

impl PebbleDistribution {
    /// Empty distribution (no pebbles anywhere).
    pub fn empty(graph: Arc<Graph>) -> Self {
        let n = graph.vertex_count();
        PebbleDistribution {
            graph,
            counts: vec![0; n],
            size: 0,
        }
    }

    /// Builds a distribution from `(vertex, count)` pairs. Repeated vertices
    /// accumulate.
    pub fn from_pairs(graph: Arc<Graph>, pairs: &[(Vertex, u32)]) -> Result<Self> {
        let mut d = PebbleDistribution::empty(graph);
        for &(v, c) in pairs {
            d.graph.check_vertex(v)?;
            d.counts[v] += c;
            d.size += c;
        }
        Ok(d)
    }

    /// Builds a distribution from a full counts vector.
    pub fn from_counts(graph: Arc<Graph>, counts: Vec<u32>) -> Result<Self> {
        if counts.len() != graph.vertex_count() {
            return Err(Error::GraphMismatch);
        }
        let size = counts.iter().sum();
        Ok(PebbleDistribution {
            graph,
            counts,
            size,
        })
    }

    /// A unit distribution: `count` pebbles all placed at `vertex`.
    pub fn unit(graph: Arc<Graph>, vertex: Vertex, count: u32) -> Result<Self> {
        PebbleDistribution::from_pairs(graph, &[(vertex, count)])
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, v: Vertex) -> u32 {
        self.counts[v]
    }

    /// Total number of pebbles `|P|`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Vertices with at least one pebble, ascending.
    pub fn occupied(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, _)| v)
    }

    pub fn same_graph(&self, other: &PebbleDistribution) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    /// Applies one pebbling move, returning the new distribution.
    pub fn apply_move(&self, m: PebblingMove) -> Result<Self> {
        self.graph.check_vertex(m.from)?;
        self.graph.check_vertex(m.to)?;
        if !self.graph.has_edge(m.from, m.to) {
            return Err(Error::NotAdjacent {
                from: m.from,
                to: m.to,
            });
        }
        if self.counts[m.from] < 2 {
            return Err(Error::InsufficientPebbles {
                vertex: m.from,
                have: self.counts[m.from],
            });
        }
        let mut next = self.clone();
        next.counts[m.from] -= 2;
        next.counts[m.to] += 1;
        next.size -= 1;
        Ok(next)
    }

    /// `reach(P,v)`: the exact maximum number of pebbles any pebbling
    /// sequence can place on `v`.
    pub fn reach(&self, v: Vertex) -> Result<u32> {
        self.graph.check_vertex(v)?;
        let ctx = SearchCtx::for_target(&self.graph, v);
        Ok(ctx.max_objective(&self.counts))
    }

    /// Whether some pebbling sequence places at least `k` pebbles on `v`.
    pub fn can_reach(&self, v: Vertex, k: u32) -> Result<bool> {
        self.graph.check_vertex(v)?;
        let ctx = SearchCtx::for_target(&self.graph, v);
        Ok(ctx.reaches_threshold(&self.counts, k))
    }

    /// Maximum total number of pebbles simultaneously placeable on the set
    /// `targets`.
    pub fn reach_set(&self, targets: &[Vertex]) -> Result<u32> {
        if targets.is_empty() {
            return Err(Error::EmptySet);
        }
        for &t in targets {
            self.graph.check_vertex(t)?;
        }
        let ctx = SearchCtx::for_target_set(&self.graph, targets);
        Ok(ctx.max_objective(&self.counts))
    }

    /// Full per-vertex reachability report, computed from one enumeration of
    /// every state reachable from this distribution.
    pub fn analyze(&self) -> ReachabilityReport {
        let n = self.graph.vertex_count();
        let mut best: Vec<u32> = self.counts.clone();
        for_each_reachable_state(&self.graph, &self.counts, |state| {
            for (b, &c) in best.iter_mut().zip(state) {
                if c > *b {
                    *b = c;
                }
            }
        });
        report_from_reach(n, best)
    }

    /// Parses the distribution text format: one `vertex count` pair per line,
    /// unlisted vertices zero. Blank lines and `#` comments are ignored.
    pub fn parse(graph: Arc<Graph>, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let v: usize = it
                .next()
                .unwrap()
                .parse()
                .map_err(|_| Error::parse(format!("bad distribution line: {line}")))?;
            let c: u32 = it
                .next()
                .ok_or_else(|| Error::parse(format!("bad distribution line: {line}")))?
                .parse()
                .map_err(|_| Error::parse(format!("bad distribution line: {line}")))?;
            if c == 0 {
                return Err(Error::parse(format!(
                    "distribution lines must have count >= 1: {line}"
                )));
            }
            pairs.push((v, c));
        }
        PebbleDistribution::from_pairs(graph, &pairs)
    }

    /// Writes the text format accepted by [`PebbleDistribution::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in self.occupied() {
            out.push_str(&format!("{} {}\n", v, self.counts[v]));
        }
        out
    }
}

impl fmt::Display for PebbleDistribution {
    /// Compact `{v: c, ...}` rendering used in reports and traces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for v in self.occupied() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", v, self.counts[v])?;
            first = false;
        }
        write!(f, "}}")
    }
}

pub(crate) fn report_from_reach(n: usize, reach: Vec<u32>) -> ReachabilityReport {
    let excess: Vec<u32> = reach.iter().map(|&r| r.saturating_sub(1)).collect();
    let coverage: Vec<Vertex> = (0..n).filter(|&v| reach[v] >= 1).collect();
    let total_excess = excess.iter().map(|&e| e as u64).sum();
    let solvable = coverage.len() == n;
    ReachabilityReport {
        reach,
        excess,
        coverage,
        total_excess,
        solvable,
    }
}

// ---------------------------------------------------------------------------
// State-space search internals
// ---------------------------------------------------------------------------

/// Memo key for a counts vector. Packs into a `u64` nibble per vertex when the
/// instance is small enough; the sweeps spend most of their time here.
#[derive(Clone, PartialEq, Eq, Hash)]
enum StateKey {
    Packed(u64),
    Wide(Box<[u32]>),
}

fn state_key(counts: &[u32], packable: bool) -> StateKey {
    if packable {
        let mut key = 0u64;
        for (i, &c) in counts.iter().enumerate() {
            key |= (c as u64) << (4 * i);
        }
        StateKey::Packed(key)
    } else {
        StateKey::Wide(counts.into())
    }
}

fn is_packable(n: usize, total: u32) -> bool {
    n <= 16 && total <= 15
}

/// Enumerates every distribution state reachable from `start` (including
/// `start` itself), invoking `visit` exactly once per state.
pub(crate) fn for_each_reachable_state(
    graph: &Graph,
    start: &[u32],
    mut visit: impl FnMut(&[u32]),
) {
    let packable = is_packable(start.len(), start.iter().sum());
    let mut seen: HashSet<StateKey> = HashSet::new();
    let mut stack: Vec<Vec<u32>> = vec![start.to_vec()];
    seen.insert(state_key(start, packable));
    while let Some(state) = stack.pop() {
        visit(&state);
        for from in 0..state.len() {
            if state[from] < 2 {
                continue;
            }
            for &to in graph.neighbors(from) {
                let mut next = state.clone();
                next[from] -= 2;
                next[to] += 1;
                if seen.insert(state_key(&next, packable)) {
                    stack.push(next);
                }
            }
        }
    }
}

/// Cap on the fixed-point weight exponent: counts (u32) times `2^90` times a
/// few thousand vertices stays far below `u128::MAX`.
pub(crate) const MAX_WEIGHT_SHIFT: u32 = 90;

/// Targeted search context: an objective over states plus the admissible
/// weight relaxation used for pruning.
pub(crate) struct SearchCtx {
    /// Fixed-point weight per vertex: `2^(shift - d)` toward the nearest
    /// target, 0 for vertices that cannot reach any target.
    weights: Vec<u128>,
    shift: u32,
    /// Objective membership: counts on these vertices are summed.
    target: Vec<bool>,
    /// Per-vertex neighbor lists in ascending target weight, so the
    /// depth-first stack expands moves toward the targets first and the
    /// incumbent rises as early as possible.
    neighbors_by_weight: Vec<Vec<Vertex>>,
    /// Vertices no move may touch (as either endpoint). Used by the
    /// restricted searches behind M values.
    forbidden: Option<Vec<bool>>,
}

impl SearchCtx {
    pub(crate) fn for_target(graph: &Graph, v: Vertex) -> Self {
        SearchCtx::for_target_set(graph, &[v])
    }

    pub(crate) fn for_target_set(graph: &Graph, targets: &[Vertex]) -> Self {
        let n = graph.vertex_count();
        // distances are clamped to keep the fixed point inside u128; a
        // clamped weight overestimates the true one, so pruning stays sound
        let shift = graph.diameter().min(MAX_WEIGHT_SHIFT);
        let mut weights = vec![0u128; n];
        let mut target = vec![false; n];
        for &t in targets {
            target[t] = true;
        }
        for (u, weight) in weights.iter_mut().enumerate() {
            let mut min_d = UNREACHABLE;
            for &t in targets {
                let d = graph.distance(u, t);
                if d < min_d {
                    min_d = d;
                }
            }
            if min_d != UNREACHABLE {
                *weight = 1u128 << (shift - min_d.min(shift));
            }
        }
        let neighbors_by_weight = (0..n)
            .map(|u| {
                let mut ns = graph.neighbors(u).to_vec();
                ns.sort_by_key(|&w| weights[w]);
                ns
            })
            .collect();
        SearchCtx {
            weights,
            shift,
            target,
            neighbors_by_weight,
            forbidden: None,
        }
    }

    pub(crate) fn forbid(mut self, forbidden: Vec<bool>) -> Self {
        self.forbidden = Some(forbidden);
        self
    }

    fn objective(&self, counts: &[u32]) -> u32 {
        counts
            .iter()
            .zip(&self.target)
            .filter(|(_, &t)| t)
            .map(|(&c, _)| c)
            .sum()
    }

    /// Upper bound on the objective from any state: `Σ counts·weight >> shift`.
    fn weight_bound(&self, counts: &[u32]) -> u128 {
        let total: u128 = counts
            .iter()
            .zip(&self.weights)
            .map(|(&c, &w)| c as u128 * w)
            .sum();
        total >> self.shift
    }

    fn move_allowed(&self, from: Vertex, to: Vertex) -> bool {
        match &self.forbidden {
            Some(f) => !f[from] && !f[to],
            None => true,
        }
    }

    /// Exact maximum of the objective over all reachable states.
    pub(crate) fn max_objective(&self, start: &[u32]) -> u32 {
        let mut best = self.objective(start);
        let root_bound = self.weight_bound(start);
        if root_bound <= best as u128 {
            return best;
        }
        let packable = is_packable(start.len(), start.iter().sum());
        let mut seen: HashSet<StateKey> = HashSet::new();
        seen.insert(state_key(start, packable));
        let mut stack = vec![start.to_vec()];
        while let Some(state) = stack.pop() {
            for from in 0..state.len() {
                if state[from] < 2 {
                    continue;
                }
                for &to in &self.neighbors_by_weight[from] {
                    if !self.move_allowed(from, to) {
                        continue;
                    }
                    let mut next = state.clone();
                    next[from] -= 2;
                    next[to] += 1;
                    let obj = self.objective(&next);
                    if obj > best {
                        best = obj;
                    }
                    // weight can only shrink along moves, so a state whose
                    // relaxation cannot beat the incumbent is dead
                    if self.weight_bound(&next) <= best as u128 {
                        continue;
                    }
                    if seen.insert(state_key(&next, packable)) {
                        stack.push(next);
                    }
                }
            }
        }
        best
    }

    /// Whether the objective reaches `k` in some state; stops at first hit.
    pub(crate) fn reaches_threshold(&self, start: &[u32], k: u32) -> bool {
        let mut throwaway = 0u64;
        self.reaches_threshold_counted(start, k, &mut throwaway)
    }

    /// `reaches_threshold` with a state-expansion counter for search stats.
    pub(crate) fn reaches_threshold_counted(
        &self,
        start: &[u32],
        k: u32,
        counter: &mut u64,
    ) -> bool {
        if self.objective(start) >= k {
            return true;
        }
        if self.weight_bound(start) < k as u128 {
            return false;
        }
        let packable = is_packable(start.len(), start.iter().sum());
        let mut seen: HashSet<StateKey> = HashSet::new();
        seen.insert(state_key(start, packable));
        let mut stack = vec![start.to_vec()];
        while let Some(state) = stack.pop() {
            *counter += 1;
            for from in 0..state.len() {
                if state[from] < 2 {
                    continue;
                }
                for &to in &self.neighbors_by_weight[from] {
                    if !self.move_allowed(from, to) {
                        continue;
                    }
                    let mut next = state.clone();
                    next[from] -= 2;
                    next[to] += 1;
                    if self.objective(&next) >= k {
                        return true;
                    }
                    if self.weight_bound(&next) < k as u128 {
                        continue;
                    }
                    if seen.insert(state_key(&next, packable)) {
                        stack.push(next);
                    }
                }
            }
        }
        false
    }
}

#[cfg(test)]
/// Exact rational weight `Σ_u P(u)·(1/2)^{d(u,v)}` as a fixed-point pair
/// `(numerator, shift)`: the value is `numerator / 2^shift`.
pub(crate) fn weight_toward(p: &PebbleDistribution, v: Vertex) -> (u128, u32) {
    let g = p.graph();
    let shift = g.diameter().min(MAX_WEIGHT_SHIFT);
    let mut num = 0u128;
    for u in p.occupied() {
        let d = g.distance(u, v);
        if d != UNREACHABLE {
            num += (p.count(u) as u128) << (shift - d.min(shift));
        }
    }
    (num, shift)
}
