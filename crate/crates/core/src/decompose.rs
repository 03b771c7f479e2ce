//! Unit decompositions and pairwise cooperation statistics.
//!
//! Every distribution splits into units (one occupied vertex each). Adding a
//! disjoint pair `P`, `Q` produces three effects measured here: cooperation
//! vertices (reachable only jointly), double covered vertices (reachable
//! under both), and cooperation excess `CE(P,Q) = TE(P+Q) - TE(P) - TE(Q)`.
//! The `M` value of a vertex is the minimum number of cooperation vertices
//! any pebbling sequence must touch to put two pebbles there.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::engine::{PebbleDistribution, PebblingMove, SearchCtx};
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// A distribution concentrated on a single vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitDistribution {
    pub vertex: Vertex,
    pub count: u32,
}

impl UnitDistribution {
    pub fn new(vertex: Vertex, count: u32) -> Self {
        UnitDistribution { vertex, count }
    }

    /// Materializes the unit as a distribution on `graph`.
    pub fn to_distribution(&self, graph: Arc<Graph>) -> Result<PebbleDistribution> {
        PebbleDistribution::unit(graph, self.vertex, self.count)
    }
}

impl fmt::Display for UnitDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex, self.count)
    }
}

/// `M(v)`: minimal number of cooperation vertices utilized by any sequence
/// placing two pebbles on `v`, or `Infinite` when `v` is not 2-reachable.
///
/// The derived order puts every finite value below `Infinite`, which is the
/// comparison the auxiliary-graph pivot selection needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MValue {
    Finite(u32),
    Infinite,
}

impl MValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MValue::Finite(_))
    }
}

impl fmt::Display for MValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MValue::Finite(k) => write!(f, "{k}"),
            MValue::Infinite => write!(f, "inf"),
        }
    }
}

/// All cooperation statistics for a disjoint pair `(P, Q)`.
#[derive(Clone, Debug)]
pub struct CooperationReport {
    /// Number of cooperation vertices (reachable under `P+Q` only).
    pub coop: usize,
    /// Number of double covered vertices (reachable under both).
    pub dc: usize,
    /// Total cooperation excess `TE(P+Q) - TE(P) - TE(Q)`.
    pub ce: i64,
    /// Per-vertex `exc(P+Q,v) - exc(P,v) - exc(Q,v)`, reported signed even
    /// though the engine never observes negative values.
    pub per_vertex_ce: Vec<i64>,
    /// `M(v)` per vertex.
    pub m_values: Vec<MValue>,
    pub coop_vertices: Vec<Vertex>,
    pub dc_vertices: Vec<Vertex>,
    /// Which vertices are reachable under `P` alone / `Q` alone.
    pub covered_p: Vec<bool>,
    pub covered_q: Vec<bool>,
}

impl CooperationReport {
    pub fn is_coop_vertex(&self, v: Vertex) -> bool {
        self.coop_vertices.binary_search(&v).is_ok()
    }

    pub fn is_double_covered(&self, v: Vertex) -> bool {
        self.covered_p[v] && self.covered_q[v]
    }

    pub fn has_cooperation_excess(&self, v: Vertex) -> bool {
        self.per_vertex_ce[v] > 0
    }

    /// Neither a cooperation vertex nor a holder of cooperation excess.
    pub fn is_cooperation_free(&self, v: Vertex) -> bool {
        !self.is_coop_vertex(v) && self.per_vertex_ce[v] <= 0
    }
}

/// Splits `p` into its units, sorted by size ascending, ties broken by
/// vertex index.
pub fn decompose(p: &PebbleDistribution) -> Vec<UnitDistribution> {
    let mut units: Vec<UnitDistribution> = p
        .occupied()
        .map(|v| UnitDistribution::new(v, p.count(v)))
        .collect();
    units.sort_by(|a, b| match a.count.cmp(&b.count) {
        Ordering::Equal => a.vertex.cmp(&b.vertex),
        other => other,
    });
    units
}

/// Pointwise sum of two distributions on the same graph.
pub fn sum(p: &PebbleDistribution, q: &PebbleDistribution) -> Result<PebbleDistribution> {
    if !p.same_graph(q) {
        return Err(Error::GraphMismatch);
    }
    let counts = p
        .counts()
        .iter()
        .zip(q.counts())
        .map(|(&a, &b)| a + b)
        .collect();
    PebbleDistribution::from_counts(Arc::clone(p.graph()), counts)
}

fn check_disjoint(p: &PebbleDistribution, q: &PebbleDistribution) -> Result<()> {
    if !p.same_graph(q) {
        return Err(Error::GraphMismatch);
    }
    for v in p.occupied() {
        if q.count(v) > 0 {
            return Err(Error::NotDisjoint { vertex: v });
        }
    }
    Ok(())
}

/// Exact cooperation statistics for the disjoint pair `(p, q)`, from three
/// reachability analyses plus the M-value search.
pub fn cooperation(p: &PebbleDistribution, q: &PebbleDistribution) -> Result<CooperationReport> {
    check_disjoint(p, q)?;
    let combined = sum(p, q)?;
    let rp = p.analyze();
    let rq = q.analyze();
    let rpq = combined.analyze();
    let n = p.graph().vertex_count();

    let covered_p: Vec<bool> = (0..n).map(|v| rp.reach[v] >= 1).collect();
    let covered_q: Vec<bool> = (0..n).map(|v| rq.reach[v] >= 1).collect();
    let coop_vertices: Vec<Vertex> = (0..n)
        .filter(|&v| rpq.reach[v] >= 1 && !covered_p[v] && !covered_q[v])
        .collect();
    let dc_vertices: Vec<Vertex> = (0..n).filter(|&v| covered_p[v] && covered_q[v]).collect();
    let per_vertex_ce: Vec<i64> = (0..n)
        .map(|v| rpq.excess[v] as i64 - rp.excess[v] as i64 - rq.excess[v] as i64)
        .collect();
    let ce = rpq.total_excess as i64 - rp.total_excess as i64 - rq.total_excess as i64;

    let mut coop_mask = vec![false; n];
    for &c in &coop_vertices {
        coop_mask[c] = true;
    }
    let m_values = m_values_for(&combined, &coop_mask, &rpq.reach);

    Ok(CooperationReport {
        coop: coop_vertices.len(),
        dc: dc_vertices.len(),
        ce,
        per_vertex_ce,
        m_values,
        coop_vertices,
        dc_vertices,
        covered_p,
        covered_q,
    })
}

/// `M(v)` for the disjoint pair `(p, u)`.
pub fn m_value(p: &PebbleDistribution, u: &UnitDistribution, v: Vertex) -> Result<MValue> {
    let graph = Arc::clone(p.graph());
    graph.check_vertex(v)?;
    let ud = u.to_distribution(Arc::clone(&graph))?;
    check_disjoint(p, &ud)?;
    let combined = sum(p, &ud)?;
    let rp = p.analyze();
    let ru = ud.analyze();
    let rpu = combined.analyze();
    let n = graph.vertex_count();
    let coop_list: Vec<Vertex> = (0..n)
        .filter(|&w| rpu.reach[w] >= 1 && rp.reach[w] == 0 && ru.reach[w] == 0)
        .collect();
    Ok(m_value_at(&combined, &coop_list, &rpu.reach, v))
}

/// `M(v)` for every vertex, given the combined distribution, the
/// cooperation-vertex mask, and the exact reach vector of the combined
/// distribution (which settles 2-reachability without a search).
pub(crate) fn m_values_for(
    combined: &PebbleDistribution,
    coop_mask: &[bool],
    combined_reach: &[u32],
) -> Vec<MValue> {
    let coop_list: Vec<Vertex> = (0..coop_mask.len()).filter(|&w| coop_mask[w]).collect();
    (0..coop_mask.len())
        .map(|v| m_value_at(combined, &coop_list, combined_reach, v))
        .collect()
}

fn m_value_at(
    combined: &PebbleDistribution,
    coop_list: &[Vertex],
    combined_reach: &[u32],
    v: Vertex,
) -> MValue {
    if combined_reach[v] < 2 {
        MValue::Infinite
    } else if coop_list.is_empty() {
        MValue::Finite(0)
    } else {
        m_value_from_mask(combined, coop_list, v)
    }
}

/// Core M-value search for a 2-reachable `v`. A sequence "utilizes" a vertex
/// when some move has it as an endpoint, so `M(v) <= k` iff two pebbles can
/// reach `v` with every cooperation vertex outside some k-element set banned
/// from both move endpoints. Subsets are scanned in increasing size; the
/// first success is the minimum.
fn m_value_from_mask(combined: &PebbleDistribution, coop_list: &[Vertex], v: Vertex) -> MValue {
    // v itself counts when it is a cooperation vertex; a successful non-empty
    // sequence necessarily ends with a move onto v, so subsets omitting a
    // cooperation v can only succeed through the empty sequence.
    for k in 0..=coop_list.len() {
        let mut chosen = Vec::new();
        if subsets_reach(combined, coop_list, v, k, 0, &mut chosen) {
            return MValue::Finite(k as u32);
        }
    }
    // the full subset must succeed once v is 2-reachable
    MValue::Infinite
}

fn subsets_reach(
    combined: &PebbleDistribution,
    coop_list: &[Vertex],
    v: Vertex,
    k: usize,
    start: usize,
    chosen: &mut Vec<Vertex>,
) -> bool {
    if chosen.len() == k {
        let graph = combined.graph();
        let mut forbidden = vec![false; graph.vertex_count()];
        for &c in coop_list {
            forbidden[c] = true;
        }
        for &c in chosen.iter() {
            forbidden[c] = false;
        }
        return SearchCtx::for_target(graph, v)
            .forbid(forbidden)
            .reaches_threshold(combined.counts(), 2);
    }
    for i in start..coop_list.len() {
        chosen.push(coop_list[i]);
        if subsets_reach(combined, coop_list, v, k, i + 1, chosen) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// `UE(P)`: the sum of the total excess of each unit taken in isolation.
pub fn unit_excess(p: &PebbleDistribution) -> Result<u64> {
    let mut total = 0u64;
    for unit in decompose(p) {
        let ud = unit.to_distribution(Arc::clone(p.graph()))?;
        total += ud.analyze().total_excess;
    }
    Ok(total)
}

/// Both sides of the two decomposition identities, evaluated over the sorted
/// unit decomposition of `p`:
///
/// * `TE(P) = Σ TE(U_i) + Σ CE(Σ_{k<i} U_k, U_i)`
/// * `cov(P) = Σ cov(U_i) + Σ (coop(Σ_{k<i} U_k, U_i) - DC(Σ_{k<i} U_k, U_i))`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub te_total: u64,
    pub te_unit_sum: u64,
    pub te_ce_sum: i64,
    pub cov_total: usize,
    pub cov_unit_sum: usize,
    pub cov_coop_dc_sum: i64,
}

impl IdentityCheck {
    pub fn excess_identity_holds(&self) -> bool {
        self.te_total as i64 == self.te_unit_sum as i64 + self.te_ce_sum
    }

    pub fn coverage_identity_holds(&self) -> bool {
        self.cov_total as i64 == self.cov_unit_sum as i64 + self.cov_coop_dc_sum
    }

    pub fn holds(&self) -> bool {
        self.excess_identity_holds() && self.coverage_identity_holds()
    }
}

/// Evaluates both decomposition identities; a mismatch is reported in the
/// record, not raised as an error.
pub fn decomposition_identities(p: &PebbleDistribution) -> Result<IdentityCheck> {
    let graph = Arc::clone(p.graph());
    let total = p.analyze();
    let units = decompose(p);

    let mut te_unit_sum = 0u64;
    let mut te_ce_sum = 0i64;
    let mut cov_unit_sum = 0usize;
    let mut cov_coop_dc_sum = 0i64;

    let mut prefix = PebbleDistribution::empty(Arc::clone(&graph));
    let mut prefix_report = prefix.analyze();
    for unit in units {
        let ud = unit.to_distribution(Arc::clone(&graph))?;
        let ru = ud.analyze();
        let next = sum(&prefix, &ud)?;
        let rnext = next.analyze();
        let n = graph.vertex_count();

        te_unit_sum += ru.total_excess;
        te_ce_sum +=
            rnext.total_excess as i64 - prefix_report.total_excess as i64 - ru.total_excess as i64;
        cov_unit_sum += ru.cov();

        let coop_i = (0..n)
            .filter(|&v| rnext.reach[v] >= 1 && prefix_report.reach[v] == 0 && ru.reach[v] == 0)
            .count() as i64;
        let dc_i = (0..n)
            .filter(|&v| prefix_report.reach[v] >= 1 && ru.reach[v] >= 1)
            .count() as i64;
        cov_coop_dc_sum += coop_i - dc_i;

        prefix = next;
        prefix_report = rnext;
    }

    Ok(IdentityCheck {
        te_total: total.total_excess,
        te_unit_sum,
        te_ce_sum,
        cov_total: total.cov(),
        cov_unit_sum,
        cov_coop_dc_sum,
    })
}

/// Maximal sets in which every vertex pair is joined by a coopexcess path
/// (inner vertices all with positive cooperation excess) and which contain a
/// vertex with positive cooperation excess.
///
/// Structurally these are exactly `C ∪ N(C)` for each connected component
/// `C` of the subgraph induced by the positive-cooperation-excess vertices.
pub fn find_c_blocks(p: &PebbleDistribution, u: &UnitDistribution) -> Result<Vec<Vec<Vertex>>> {
    if u.count < 2 {
        return Err(Error::UnitTooSmall {
            size: u.count,
            min: 2,
        });
    }
    let graph = Arc::clone(p.graph());
    let ud = u.to_distribution(Arc::clone(&graph))?;
    let report = cooperation(p, &ud)?;
    let positive: Vec<bool> = report.per_vertex_ce.iter().map(|&c| c > 0).collect();
    Ok(blocks_from_positive(&graph, &positive))
}

/// Shared block extraction: components of the induced positive set, each
/// widened by its neighborhood. Also used for A-blocks of auxiliary graphs.
pub(crate) fn blocks_from_positive(graph: &Graph, positive: &[bool]) -> Vec<Vec<Vertex>> {
    let n = graph.vertex_count();
    let mut component = vec![usize::MAX; n];
    let mut comp_count = 0;
    for s in 0..n {
        if !positive[s] || component[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        component[s] = comp_count;
        while let Some(x) = stack.pop() {
            for &w in graph.neighbors(x) {
                if positive[w] && component[w] == usize::MAX {
                    component[w] = comp_count;
                    stack.push(w);
                }
            }
        }
        comp_count += 1;
    }
    let mut blocks: Vec<HashSet<Vertex>> = vec![HashSet::new(); comp_count];
    for v in 0..n {
        if component[v] != usize::MAX {
            blocks[component[v]].insert(v);
            for &w in graph.neighbors(v) {
                blocks[component[v]].insert(w);
            }
        }
    }
    let mut out: Vec<Vec<Vertex>> = blocks
        .into_iter()
        .map(|b| {
            let mut v: Vec<_> = b.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort();
    out
}

/// The trajectory of a move sequence: the digraph of distinct directed move
/// edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    arcs: Vec<(Vertex, Vertex)>,
    n: usize,
}

impl Trajectory {
    /// Collects the distinct arcs of a move sequence, validating adjacency.
    pub fn from_moves(graph: &Graph, moves: &[PebblingMove]) -> Result<Self> {
        let mut arcs = Vec::new();
        let mut seen = HashSet::new();
        for m in moves {
            graph.check_vertex(m.from)?;
            graph.check_vertex(m.to)?;
            if !graph.has_edge(m.from, m.to) {
                return Err(Error::NotAdjacent {
                    from: m.from,
                    to: m.to,
                });
            }
            if seen.insert((m.from, m.to)) {
                arcs.push((m.from, m.to));
            }
        }
        Ok(Trajectory {
            arcs,
            n: graph.vertex_count(),
        })
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    /// Whether the trajectory digraph contains no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.arcs {
            adj[u].push(v);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.n];
        fn dfs(v: Vertex, adj: &[Vec<Vertex>], mark: &mut [u8]) -> bool {
            mark[v] = 1;
            for &w in &adj[v] {
                if mark[w] == 1 || (mark[w] == 0 && !dfs(w, adj, mark)) {
                    return false;
                }
            }
            mark[v] = 2;
            true
        }
        (0..self.n).all(|v| mark[v] != 0 || dfs(v, &adj, &mut mark))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(graph: &Arc<Graph>, pairs: &[(Vertex, u32)]) -> PebbleDistribution {
        PebbleDistribution::from_pairs(Arc::clone(graph), pairs).unwrap()
    }

    #[test]
    fn decompose_sorts_by_size_then_vertex() {
        let g = Arc::new(Graph::path(5).unwrap());
        let units = decompose(&dist(&g, &[(0, 2), (3, 1)]));
        assert_eq!(
            units,
            vec![UnitDistribution::new(3, 1), UnitDistribution::new(0, 2)]
        );

        assert!(decompose(&PebbleDistribution::empty(Arc::clone(&g))).is_empty());

        let units = decompose(&dist(&g, &[(4, 2), (1, 2)]));
        assert_eq!(
            units,
            vec![UnitDistribution::new(1, 2), UnitDistribution::new(4, 2)]
        );
    }

    #[test]
    fn sum_behaviour() {
        let g = Arc::new(Graph::path(3).unwrap());
        let a = dist(&g, &[(0, 1)]);
        let b = dist(&g, &[(2, 2)]);
        assert_eq!(sum(&a, &b).unwrap().counts(), &[1, 0, 2]);

        let empty = PebbleDistribution::empty(Arc::clone(&g));
        assert_eq!(sum(&a, &empty).unwrap().counts(), a.counts());

        // overlapping sums are allowed; disjointness is checked only where
        // the definitions require it
        assert_eq!(sum(&a, &a).unwrap().counts(), &[2, 0, 0]);

        let h = Arc::new(Graph::path(4).unwrap());
        let c = dist(&h, &[(0, 1)]);
        assert!(matches!(sum(&a, &c), Err(Error::GraphMismatch)));
    }

    #[test]
    fn cooperation_on_p4() {
        let g = Arc::new(Graph::path(4).unwrap());
        let p = dist(&g, &[(1, 1)]);
        let q = dist(&g, &[(2, 2)]);
        let rep = cooperation(&p, &q).unwrap();
        assert_eq!(rep.coop, 1);
        assert_eq!(rep.coop_vertices, vec![0]);
        assert_eq!(rep.dc, 1);
        assert_eq!(rep.dc_vertices, vec![1]);
        assert_eq!(rep.ce, 1);
        assert_eq!(rep.per_vertex_ce, vec![0, 1, 0, 0]);
    }

    #[test]
    fn cooperation_without_interaction() {
        let g = Arc::new(Graph::path(3).unwrap());
        let p = dist(&g, &[(0, 1)]);
        let q = dist(&g, &[(2, 2)]);
        let rep = cooperation(&p, &q).unwrap();
        assert_eq!((rep.coop, rep.dc, rep.ce), (0, 0, 0));

        let empty = PebbleDistribution::empty(Arc::clone(&g));
        let rep = cooperation(&p, &empty).unwrap();
        assert_eq!((rep.coop, rep.dc, rep.ce), (0, 0, 0));
    }

    #[test]
    fn cooperation_requires_disjoint() {
        let g = Arc::new(Graph::path(3).unwrap());
        let p = dist(&g, &[(1, 1)]);
        let q = dist(&g, &[(1, 2)]);
        assert!(matches!(
            cooperation(&p, &q),
            Err(Error::NotDisjoint { vertex: 1 })
        ));
    }

    #[test]
    fn claim_cov_identity_small() {
        // cov(P+Q) = cov(P) + cov(Q) + coop - DC on a few handmade pairs
        let g = Arc::new(Graph::path(4).unwrap());
        let cases = [
            (vec![(1usize, 1u32)], vec![(2usize, 2u32)]),
            (vec![(0, 2)], vec![(3, 2)]),
            (vec![(0, 1), (2, 1)], vec![(1, 2)]),
        ];
        for (pp, qq) in cases {
            let p = dist(&g, &pp);
            let q = dist(&g, &qq);
            let rep = cooperation(&p, &q).unwrap();
            let cov_pq = sum(&p, &q).unwrap().analyze().cov() as i64;
            let cov_p = p.analyze().cov() as i64;
            let cov_q = q.analyze().cov() as i64;
            assert_eq!(cov_pq, cov_p + cov_q + rep.coop as i64 - rep.dc as i64);
        }
    }

    #[test]
    fn m_values_on_p4() {
        let g = Arc::new(Graph::path(4).unwrap());
        let p = dist(&g, &[(1, 1)]);
        let u = UnitDistribution::new(2, 2);
        // sequence 2 -> 1 touches no cooperation vertex
        assert_eq!(m_value(&p, &u, 1).unwrap(), MValue::Finite(0));
        // vertex 0 is never 2-reachable
        assert_eq!(m_value(&p, &u, 0).unwrap(), MValue::Infinite);
        // two pebbles already in place: empty sequence
        assert_eq!(m_value(&p, &u, 2).unwrap(), MValue::Finite(0));
    }

    #[test]
    fn m_value_positive_when_target_is_coop() {
        // C_6, U = {0:4}, P = one pebble on every other vertex except the
        // antipode 3. U alone covers everything but 3 (floor(4/8) = 0), P
        // alone covers only its own vertices, but jointly both arcs relay a
        // pebble into 3: 0->1, 1->2, and 0->5, 5->4, 4->3 + 2->3 give two
        // pebbles. So 3 is a 2-reachable cooperation vertex, and any sequence
        // that puts two pebbles on 3 utilizes it: M(3) = 1.
        let g = Arc::new(Graph::cycle(6).unwrap());
        let p = dist(&g, &[(1, 1), (2, 1), (4, 1), (5, 1)]);
        let u = UnitDistribution::new(0, 4);
        let ud = u.to_distribution(Arc::clone(&g)).unwrap();
        let rep = cooperation(&p, &ud).unwrap();
        assert_eq!(rep.coop_vertices, vec![3]);
        assert_eq!(rep.m_values[3], MValue::Finite(1));
        assert!(rep.per_vertex_ce[3] > 0);
        // vertex 2 assembles two pebbles without touching vertex 3
        assert_eq!(rep.m_values[2], MValue::Finite(0));
        assert_eq!(m_value(&p, &u, 3).unwrap(), MValue::Finite(1));
    }

    #[test]
    fn unit_excess_examples() {
        let g = Arc::new(Graph::path(5).unwrap());
        assert_eq!(unit_excess(&dist(&g, &[(2, 4)])).unwrap(), 5);
        assert_eq!(
            unit_excess(&dist(&g, &[(0, 1), (2, 1), (4, 1)])).unwrap(),
            0
        );
        let c3 = Arc::new(Graph::cycle(3).unwrap());
        assert_eq!(unit_excess(&dist(&c3, &[(0, 2)])).unwrap(), 1);
    }

    #[test]
    fn decomposition_identities_balance() {
        let g = Arc::new(Graph::path(5).unwrap());
        let check = decomposition_identities(&dist(&g, &[(1, 2), (3, 2)])).unwrap();
        assert!(check.holds(), "{check:?}");

        let single = decomposition_identities(&dist(&g, &[(2, 4)])).unwrap();
        assert!(single.holds());
        assert_eq!(single.te_ce_sum, 0);

        let p4 = Arc::new(Graph::path(4).unwrap());
        let check = decomposition_identities(&dist(&p4, &[(1, 1), (2, 2)])).unwrap();
        assert!(check.holds());
        assert_eq!(check.cov_total, 4);
        assert_eq!(check.cov_unit_sum, 1 + 3);
        assert_eq!(check.cov_coop_dc_sum, 1 - 1);
    }

    #[test]
    fn c_blocks_examples() {
        let g = Arc::new(Graph::path(3).unwrap());
        // no interaction: ce = 0 everywhere
        let p = dist(&g, &[(0, 1)]);
        let blocks = find_c_blocks(&p, &UnitDistribution::new(2, 2)).unwrap();
        assert!(blocks.is_empty());

        let g4 = Arc::new(Graph::path(4).unwrap());
        let p = dist(&g4, &[(1, 1)]);
        let blocks = find_c_blocks(&p, &UnitDistribution::new(2, 2)).unwrap();
        assert_eq!(blocks, vec![vec![0, 1, 2]]);

        // two cooperating regions around a central unit on a long path
        let g7 = Arc::new(Graph::path(7).unwrap());
        let p = dist(&g7, &[(2, 1), (4, 1)]);
        let blocks = find_c_blocks(&p, &UnitDistribution::new(3, 4)).unwrap();
        assert_eq!(blocks, vec![vec![1, 2, 3], vec![3, 4, 5]]);

        assert!(matches!(
            find_c_blocks(&p, &UnitDistribution::new(3, 1)),
            Err(Error::UnitTooSmall { .. })
        ));
    }

    #[test]
    fn trajectory_cycles() {
        let g = Graph::cycle(3).unwrap();
        let t = Trajectory::from_moves(&g, &[PebblingMove::new(0, 1), PebblingMove::new(1, 2)])
            .unwrap();
        assert!(t.is_acyclic());
        assert_eq!(t.arcs().len(), 2);

        let t = Trajectory::from_moves(
            &g,
            &[
                PebblingMove::new(0, 1),
                PebblingMove::new(1, 2),
                PebblingMove::new(2, 0),
                PebblingMove::new(0, 1), // duplicate arc collapses
            ],
        )
        .unwrap();
        assert_eq!(t.arcs().len(), 3);
        assert!(!t.is_acyclic());

        assert!(Trajectory::from_moves(&g, &[PebblingMove::new(0, 0)]).is_err());
    }
}
