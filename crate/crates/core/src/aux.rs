//! Labeled auxiliary graphs and the saturation-elimination transformations.
//!
//! `A_0` copies the input graph and labels every vertex with four coordinates:
//! `c1` the cooperation excess amount, `c2` the cooperation-vertex flag, `c3`
//! the double-covered flag, `c4` the `M` value. A vertex with `c1·c2 > 0` is
//! *saturated*. The three transformations replace saturated vertices with
//! unsaturated descendants while preserving the coordinate sums `Σc1`, `Σc2`,
//! `Σc3`, so the final saturated-free graph certifies the inequality
//! `Σc2 - Σc3 <= (Δ-2)·Σc1` block by block.
//!
//! `delta` is always the maximum degree carried from the original graph and
//! every audit inequality uses it. Transformation 2 attaches both descendants
//! of the pivot to the same neighbor, so the adjacency's current maximum
//! degree can exceed `delta` afterwards; the sums and the per-block
//! inequalities are unaffected, which is what the audits certify.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::decompose::{self, MValue, UnitDistribution};
use crate::engine::PebbleDistribution;
use crate::graph::Graph;
use crate::{Error, Result};

/// One labeled vertex of an auxiliary graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxVertex {
    /// Cooperation excess amount.
    pub c1: u32,
    /// Cooperation-vertex flag.
    pub c2: bool,
    /// Double-covered flag.
    pub c3: bool,
    /// M value; transformations copy it to every descendant.
    pub c4: MValue,
    /// Provenance: ancestor index in the previous graph and descendant branch
    /// (1..=4 for x¹..x⁴ and r¹/r², absent for untouched carryover).
    pub origin: Option<(usize, u8)>,
}

impl AuxVertex {
    fn new(c1: u32, c2: bool, c3: bool, c4: MValue) -> Self {
        AuxVertex {
            c1,
            c2,
            c3,
            c4,
            origin: None,
        }
    }

    fn with_origin(mut self, ancestor: usize, branch: u8) -> Self {
        self.origin = Some((ancestor, branch));
        self
    }

    /// Saturated: has cooperation excess and is a cooperation vertex.
    pub fn is_saturated(&self) -> bool {
        self.c1 > 0 && self.c2
    }
}

impl fmt::Display for AuxVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.c1, self.c2 as u8, self.c3 as u8, self.c4
        )
    }
}

/// An auxiliary graph: labeled vertices, undirected edges, and the maximum
/// degree Δ carried over from the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxGraph {
    vertices: Vec<AuxVertex>,
    adjacency: Vec<BTreeSet<usize>>,
    delta: usize,
}

/// One recorded transformation step.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub index: usize,
    /// 1, 2 or 3; the Δ=3 variants of Transformation 1 report kind 1.
    pub kind: u8,
    /// The saturated vertex the step eliminated (index in the pre-step graph).
    pub pivot: usize,
    pub sums: (u64, u64, u64),
    pub saturated_before: usize,
    pub saturated_after: usize,
    /// Set when the chosen minimal-c4 neighbor y was itself saturated; the
    /// bullets are followed literally and y is never split.
    pub saturated_y: bool,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} kind={} pivot={} sums={},{},{}",
            self.index, self.kind, self.pivot, self.sums.0, self.sums.1, self.sums.2
        )
    }
}

/// Result of driving an auxiliary graph to its saturated-free fixpoint.
#[derive(Clone, Debug)]
pub struct FixpointRun {
    pub result: AuxGraph,
    pub steps: Vec<TraceStep>,
    pub initial_sums: (u64, u64, u64),
    pub final_sums: (u64, u64, u64),
}

/// Outcome of one structural property check, with a witness on failure.
#[derive(Clone, Debug)]
pub struct PropResult {
    pub holds: bool,
    pub witness: Option<String>,
}

impl PropResult {
    fn pass() -> Self {
        PropResult {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        PropResult {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// The four inherited structural properties of auxiliary graphs:
/// the saturated-neighbor alternative, the `c1 >= 3` neighbor rule, the
/// bounded-path witness rule, and the A-block two-witness rule.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub saturated_alternative: PropResult,
    pub heavy_neighbor_rule: PropResult,
    pub witness_path_rule: PropResult,
    pub block_witness_rule: PropResult,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.saturated_alternative.holds
            && self.heavy_neighbor_rule.holds
            && self.witness_path_rule.holds
            && self.block_witness_rule.holds
    }
}

/// Per-A-block audit numbers for the final inequality.
#[derive(Clone, Debug)]
pub struct BlockAudit {
    pub block: Vec<usize>,
    pub sum_c1: u64,
    pub sum_c2: u64,
    pub sum_c3: u64,
    /// Vertices with `c1 > 0`.
    pub inner: usize,
    /// The remaining block vertices.
    pub boundary: usize,
    /// `Σc2 - Σc3 <= (Δ-2)·Σc1`.
    pub inequality_holds: bool,
    /// `boundary <= (Δ-2)·inner + 2`.
    pub count_bound_holds: bool,
}

impl AuxGraph {
    /// Builds a labeled graph directly from coordinate vectors; used by the
    /// checks' negative controls and by tests.
    pub fn from_parts(
        vertices: Vec<AuxVertex>,
        edges: &[(usize, usize)],
        delta: usize,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::parse(format!("self-loop at auxiliary vertex {u}")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(AuxGraph {
            vertices,
            adjacency,
            delta,
        })
    }

    /// Builds `A_0` for the disjoint pair `(p, u)` with `|u| >= 2`: vertex `i`
    /// carries the per-vertex cooperation excess, the cooperation-vertex and
    /// double-covered flags, and `M(i)`; edges are copied from `g`.
    pub fn build_a0(g: &Arc<Graph>, p: &PebbleDistribution, u: &UnitDistribution) -> Result<Self> {
        if u.count < 2 {
            return Err(Error::UnitTooSmall {
                size: u.count,
                min: 2,
            });
        }
        let ud = u.to_distribution(Arc::clone(g))?;
        let report = decompose::cooperation(p, &ud)?;
        Ok(AuxGraph::from_cooperation(g, &report))
    }

    /// Builds `A_0` from an already-computed cooperation report.
    pub fn from_cooperation(g: &Graph, report: &decompose::CooperationReport) -> Self {
        let n = g.vertex_count();
        let mut vertices = Vec::with_capacity(n);
        for v in 0..n {
            let ce = report.per_vertex_ce[v];
            debug_assert!(ce >= 0, "per-vertex cooperation excess must be nonnegative");
            vertices.push(AuxVertex::new(
                ce.max(0) as u32,
                report.is_coop_vertex(v),
                report.is_double_covered(v),
                report.m_values[v],
            ));
        }
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(a, b) in g.edges() {
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        AuxGraph {
            vertices,
            adjacency,
            delta: g.max_degree(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: usize) -> &AuxVertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[AuxVertex] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(&v)
    }

    /// `(Σc1, Σc2, Σc3)`.
    pub fn coordinate_sums(&self) -> (u64, u64, u64) {
        let mut sums = (0u64, 0u64, 0u64);
        for v in &self.vertices {
            sums.0 += v.c1 as u64;
            sums.1 += v.c2 as u64;
            sums.2 += v.c3 as u64;
        }
        sums
    }

    pub fn saturated_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].is_saturated())
            .collect()
    }

    /// A saturated vertex whose `c4` is maximal among saturated vertices
    /// (infinite above every finite value, ties broken by lowest index), or
    /// `None` when the graph is saturated-free.
    pub fn find_saturated(&self) -> Option<usize> {
        self.saturated_vertices().into_iter().max_by(|&a, &b| {
            self.vertices[a]
                .c4
                .cmp(&self.vertices[b].c4)
                // max_by keeps the later element on ties; reverse the index
                // order so the lowest index wins
                .then(b.cmp(&a))
        })
    }

    /// Neighbors of `v` sorted by `(c4, index)`.
    fn neighbors_by_c4(&self, v: usize) -> Vec<usize> {
        let mut ns: Vec<usize> = self.adjacency[v].iter().copied().collect();
        ns.sort_by(|&a, &b| {
            self.vertices[a]
                .c4
                .cmp(&self.vertices[b].c4)
                .then(a.cmp(&b))
        });
        ns
    }

    fn case1_witness(&self, w: usize) -> Option<usize> {
        let w4 = self.vertices[w].c4;
        self.adjacency[w]
            .iter()
            .copied()
            .find(|&x| self.vertices[x].c1 >= 3 && self.vertices[x].c4 < w4)
    }

    fn case2_applies(&self, w: usize) -> bool {
        let w4 = self.vertices[w].c4;
        self.adjacency[w]
            .iter()
            .filter(|&&x| self.vertices[x].c1 > 0 && self.vertices[x].c4 < w4)
            .count()
            >= 2
    }

    /// Transformation 1 for Δ >= 4: split the heavy neighbor `x` of the
    /// saturated pivot `w` into `x¹`, `x²`, `x³` (plus `x⁴` when `x` itself
    /// is a cooperation vertex) and unsaturate every saturated neighbor of
    /// `x` except the minimal-c4 neighbor `y`.
    pub fn transform1(&self, w: usize, x: usize) -> Result<AuxGraph> {
        if self.delta < 4 {
            return Err(Error::PreconditionViolated(format!(
                "transformation 1 needs delta >= 4, have {}",
                self.delta
            )));
        }
        self.validate_t1_pair(w, x)?;
        let x4_mode = if self.vertices[x].c2 {
            X4Mode::PendantOnX2
        } else {
            X4Mode::NotNeeded
        };
        Ok(self.transform1_core(x, x4_mode))
    }

    fn validate_t1_pair(&self, w: usize, x: usize) -> Result<()> {
        if !self.vertices[w].is_saturated() {
            return Err(Error::PreconditionViolated(format!(
                "pivot {w} is not saturated"
            )));
        }
        if !self.has_edge(w, x) {
            return Err(Error::PreconditionViolated(format!(
                "{x} is not a neighbor of pivot {w}"
            )));
        }
        if self.vertices[x].c1 < 3 {
            return Err(Error::PreconditionViolated(format!(
                "neighbor {x} has c1 = {} < 3",
                self.vertices[x].c1
            )));
        }
        if self.vertices[x].c4 >= self.vertices[w].c4 {
            return Err(Error::PreconditionViolated(format!(
                "neighbor {x} has c4 = {} >= pivot c4 = {}",
                self.vertices[x].c4, self.vertices[w].c4
            )));
        }
        Ok(())
    }

    /// Shared bullet-list body of Transformation 1. `x4_mode` selects where
    /// the extra cooperation leaf goes (or which descendant is marked instead,
    /// in the Δ = 3 variants).
    fn transform1_core(&self, x: usize, x4_mode: X4Mode) -> AuxGraph {
        let xv = self.vertices[x].clone();
        let y = self.neighbors_by_c4(x)[0];
        let r_set: Vec<usize> = self.adjacency[x]
            .iter()
            .copied()
            .filter(|&r| r != y && self.vertices[r].is_saturated())
            .collect();
        let passthrough: Vec<usize> = self.adjacency[x]
            .iter()
            .copied()
            .filter(|&z| z != y && !r_set.contains(&z))
            .collect();

        let mut b = Builder::new(self);
        b.delete(x);
        for &r in &r_set {
            b.delete(r);
        }

        let mark_x2 = matches!(x4_mode, X4Mode::MarkX2);
        let mark_x3 = matches!(x4_mode, X4Mode::MarkX3);
        let x1 = b.add(AuxVertex::new(1, false, false, xv.c4).with_origin(x, 1));
        let x2 = b.add(AuxVertex::new(xv.c1 - 2, mark_x2, xv.c3, xv.c4).with_origin(x, 2));
        let x3 = b.add(AuxVertex::new(1, mark_x3, false, xv.c4).with_origin(x, 3));
        b.connect_new(x2, x1);
        b.connect_new(x2, x3);
        b.connect_old(x2, y);

        for &r in &r_set {
            let rv = self.vertices[r].clone();
            let r1 = b.add(AuxVertex::new(0, true, false, rv.c4).with_origin(r, 1));
            let r2 = b.add(AuxVertex::new(rv.c1, false, rv.c3, rv.c4).with_origin(r, 2));
            b.connect_new(r1, x1);
            b.connect_new(r2, x3);
            for &z in &self.adjacency[r] {
                if z != x {
                    b.connect_replaced(r2, z);
                }
            }
        }
        for &z in &passthrough {
            b.connect_old(x3, z);
        }
        if matches!(x4_mode, X4Mode::PendantOnX2 | X4Mode::PendantOnX1) {
            let x4 = b.add(AuxVertex::new(0, true, false, xv.c4).with_origin(x, 4));
            let host = if x4_mode == X4Mode::PendantOnX2 {
                x2
            } else {
                x1
            };
            b.connect_new(x4, host);
        }
        b.finish(self.delta)
    }

    /// Transformation 2: split the saturated pivot `w` into a cooperation
    /// leaf `w¹` hanging off the second-minimal-c4 neighbor `x` and a carrier
    /// `w²` adjacent to every old neighbor except the minimal one `y`.
    pub fn transform2(&self, w: usize) -> Result<AuxGraph> {
        if !self.vertices[w].is_saturated() {
            return Err(Error::PreconditionViolated(format!(
                "pivot {w} is not saturated"
            )));
        }
        if !self.case2_applies(w) {
            return Err(Error::PreconditionViolated(format!(
                "pivot {w} lacks two positive-c1 neighbors with smaller c4"
            )));
        }
        let wv = self.vertices[w].clone();
        let ns = self.neighbors_by_c4(w);
        let (y, x) = (ns[0], ns[1]);

        let mut b = Builder::new(self);
        b.delete(w);
        let w1 = b.add(AuxVertex::new(0, true, false, wv.c4).with_origin(w, 1));
        let w2 = b.add(AuxVertex::new(wv.c1, false, wv.c3, wv.c4).with_origin(w, 2));
        b.connect_old(w1, x);
        for &z in &self.adjacency[w] {
            if z != y {
                b.connect_old(w2, z);
            }
        }
        Ok(b.finish(self.delta))
    }

    /// Transformation 3 (Δ = 3 only): the saturated heavy vertex `x` has
    /// neighbors `y`, `v`, `w` with `v`, `w` saturated and no room for a
    /// pendant, so `x` is tripled with `x²` staying saturated and both `v`
    /// and `w` are split.
    pub fn transform3(&self, x: usize) -> Result<AuxGraph> {
        if self.delta != 3 {
            return Err(Error::PreconditionViolated(format!(
                "transformation 3 requires delta = 3, have {}",
                self.delta
            )));
        }
        if !self.vertices[x].is_saturated() || self.vertices[x].c1 < 3 {
            return Err(Error::PreconditionViolated(format!(
                "vertex {x} must be saturated with c1 >= 3"
            )));
        }
        if self.degree(x) != 3 {
            return Err(Error::PreconditionViolated(format!(
                "vertex {x} must have degree 3, has {}",
                self.degree(x)
            )));
        }
        let ns = self.neighbors_by_c4(x);
        let (y, v, w) = (ns[0], ns[1], ns[2]);
        if !self.vertices[v].is_saturated() || !self.vertices[w].is_saturated() {
            return Err(Error::PreconditionViolated(format!(
                "neighbors {v} and {w} of {x} must both be saturated"
            )));
        }
        let xv = self.vertices[x].clone();
        let vv = self.vertices[v].clone();
        let wv = self.vertices[w].clone();

        let mut b = Builder::new(self);
        b.delete(x);
        b.delete(v);
        b.delete(w);
        let x1 = b.add(AuxVertex::new(1, false, false, xv.c4).with_origin(x, 1));
        let x2 = b.add(AuxVertex::new(xv.c1 - 2, true, xv.c3, xv.c4).with_origin(x, 2));
        let x3 = b.add(AuxVertex::new(1, false, false, xv.c4).with_origin(x, 3));
        let v1 = b.add(AuxVertex::new(0, true, false, vv.c4).with_origin(v, 1));
        let v2 = b.add(AuxVertex::new(vv.c1, false, vv.c3, vv.c4).with_origin(v, 2));
        let w1 = b.add(AuxVertex::new(0, true, false, wv.c4).with_origin(w, 1));
        let w2 = b.add(AuxVertex::new(wv.c1, false, wv.c3, wv.c4).with_origin(w, 2));

        b.connect_old(x2, y);
        b.connect_new(x2, x3);
        b.connect_new(x1, x3);
        b.connect_new(v1, x1);
        b.connect_new(w1, x1);
        b.connect_new(v2, x2);
        b.connect_new(w2, x3);
        for &z in &self.adjacency[v] {
            if z != x {
                b.connect_replaced(v2, z);
            }
        }
        for &z in &self.adjacency[w] {
            if z != x {
                b.connect_replaced(w2, z);
            }
        }
        Ok(b.finish(self.delta))
    }

    /// Applies transformations until no saturated vertex remains, recording a
    /// step trace. Preserves the coordinate sums; the step guard trips only
    /// on a bug, never on a valid instance.
    pub fn run_to_fixpoint(&self, step_limit: usize) -> Result<FixpointRun> {
        let initial_sums = self.coordinate_sums();
        let mut cur = self.clone();
        let mut steps = Vec::new();
        loop {
            let Some(w) = cur.find_saturated() else {
                let final_sums = cur.coordinate_sums();
                return Ok(FixpointRun {
                    result: cur,
                    steps,
                    initial_sums,
                    final_sums,
                });
            };
            if cur.delta < 3 {
                return Err(Error::PreconditionViolated(format!(
                    "delta = {} graphs are handled by the closed-form bound, not transformations",
                    cur.delta
                )));
            }
            if steps.len() >= step_limit {
                return Err(Error::StepLimitExceeded { limit: step_limit });
            }
            let saturated_before = cur.saturated_vertices().len();
            let (next, kind, saturated_y) = cur.step_once(w)?;
            let saturated_after = next.saturated_vertices().len();
            steps.push(TraceStep {
                index: steps.len(),
                kind,
                pivot: w,
                sums: next.coordinate_sums(),
                saturated_before,
                saturated_after,
                saturated_y,
            });
            cur = next;
        }
    }

    /// One dispatch round for the chosen pivot: Case 1 (preferred) or Case 2.
    fn step_once(&self, w: usize) -> Result<(AuxGraph, u8, bool)> {
        if let Some(x) = self.case1_witness(w) {
            let y = self.neighbors_by_c4(x)[0];
            let saturated_y = self.vertices[y].is_saturated();
            if self.delta >= 4 {
                return Ok((self.transform1(w, x)?, 1, saturated_y));
            }
            // delta = 3: a pendant x⁴ would push x² to degree 4, so place it
            // on a descendant with room, or fall back to the marked variants.
            self.validate_t1_pair(w, x)?;
            if !self.vertices[x].c2 {
                return Ok((self.transform1_core(x, X4Mode::NotNeeded), 1, saturated_y));
            }
            let r_count = self.adjacency[x]
                .iter()
                .filter(|&&r| r != y && self.vertices[r].is_saturated())
                .count();
            if 1 + r_count < 3 {
                // x1 ends with degree 1 + |R|, so it has room exactly when
                // fewer than two saturated neighbors were split off
                return Ok((self.transform1_core(x, X4Mode::PendantOnX1), 1, saturated_y));
            }
            // degree(x) = 3 with two saturated neighbors besides y
            if let Some(d) = self.case1_witness(x) {
                let mode = if d == y {
                    X4Mode::MarkX2
                } else {
                    X4Mode::MarkX3
                };
                return Ok((self.transform1_core(x, mode), 1, saturated_y));
            }
            if self.case2_applies(x) {
                return Ok((self.transform3(x)?, 3, saturated_y));
            }
            return Err(Error::PreconditionViolated(format!(
                "saturated heavy vertex {x} satisfies neither case of the alternative"
            )));
        }
        if self.case2_applies(w) {
            return Ok((self.transform2(w)?, 2, false));
        }
        Err(Error::PreconditionViolated(format!(
            "saturated vertex {w} satisfies neither case of the alternative"
        )))
    }

    /// A-blocks: components of the positive-`c1` set, each widened by its
    /// neighborhood.
    pub fn a_blocks(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let positive: Vec<bool> = self.vertices.iter().map(|v| v.c1 > 0).collect();
        let mut component = vec![usize::MAX; n];
        let mut comp_count = 0;
        for s in 0..n {
            if !positive[s] || component[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            component[s] = comp_count;
            while let Some(v) = stack.pop() {
                for &w in &self.adjacency[v] {
                    if positive[w] && component[w] == usize::MAX {
                        component[w] = comp_count;
                        stack.push(w);
                    }
                }
            }
            comp_count += 1;
        }
        let mut blocks = vec![BTreeSet::new(); comp_count];
        for v in 0..n {
            if component[v] != usize::MAX {
                blocks[component[v]].insert(v);
                for &w in &self.adjacency[v] {
                    blocks[component[v]].insert(w);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|b| b.into_iter().collect())
            .collect();
        out.sort();
        out
    }

    /// Per-block inequality audit (meaningful on saturated-free graphs).
    pub fn audit_blocks(&self) -> Vec<BlockAudit> {
        let dm2 = self.delta.saturating_sub(2) as u64;
        self.a_blocks()
            .into_iter()
            .map(|block| {
                let mut sum_c1 = 0u64;
                let mut sum_c2 = 0u64;
                let mut sum_c3 = 0u64;
                let mut inner = 0usize;
                for &v in &block {
                    let av = &self.vertices[v];
                    sum_c1 += av.c1 as u64;
                    sum_c2 += av.c2 as u64;
                    sum_c3 += av.c3 as u64;
                    if av.c1 > 0 {
                        inner += 1;
                    }
                }
                let boundary = block.len() - inner;
                BlockAudit {
                    inequality_holds: sum_c2 as i64 - sum_c3 as i64 <= (dm2 * sum_c1) as i64,
                    count_bound_holds: boundary as u64 <= dm2 * inner as u64 + 2,
                    block,
                    sum_c1,
                    sum_c2,
                    sum_c3,
                    inner,
                    boundary,
                }
            })
            .collect()
    }

    /// Evaluates the four structural properties, reporting a witness for each
    /// failure.
    pub fn check_properties(&self) -> PropertyReport {
        PropertyReport {
            saturated_alternative: self.check_saturated_alternative(),
            heavy_neighbor_rule: self.check_heavy_neighbor_rule(),
            witness_path_rule: self.check_witness_path_rule(),
            block_witness_rule: self.check_block_witness_rule(),
        }
    }

    /// Every saturated vertex has a neighbor with `c1 >= 3` and smaller `c4`,
    /// or two positive-`c1` neighbors with smaller `c4`.
    fn check_saturated_alternative(&self) -> PropResult {
        for c in 0..self.vertices.len() {
            if !self.vertices[c].is_saturated() {
                continue;
            }
            if self.case1_witness(c).is_none() && !self.case2_applies(c) {
                return PropResult::fail(format!(
                    "saturated vertex {c} {} has neither a heavy nor a double witness",
                    self.vertices[c]
                ));
            }
        }
        PropResult::pass()
    }

    /// Every `c1 >= 3` vertex adjacent to a cooperation vertex has a neighbor
    /// whose `c4` does not exceed its own (the literal reading `b4 <= a4`).
    fn check_heavy_neighbor_rule(&self) -> PropResult {
        for a in 0..self.vertices.len() {
            if self.vertices[a].c1 < 3 {
                continue;
            }
            if !self.adjacency[a].iter().any(|&c| self.vertices[c].c2) {
                continue;
            }
            let a4 = self.vertices[a].c4;
            if !self.adjacency[a].iter().any(|&b| self.vertices[b].c4 <= a4) {
                return PropResult::fail(format!(
                    "vertex {a} {} has no neighbor with c4 <= {a4}",
                    self.vertices[a]
                ));
            }
        }
        PropResult::pass()
    }

    /// For every saturated `c` and neighbor `a` with `a1 > 0`, `a4 < c4`:
    /// at least two vertices that are double covered or have `c1 = c2 = 0`
    /// must be reachable from `a` along A-paths whose vertices all have
    /// `c4 < c4(c)`.
    fn check_witness_path_rule(&self) -> PropResult {
        for c in 0..self.vertices.len() {
            if !self.vertices[c].is_saturated() {
                continue;
            }
            let c4 = self.vertices[c].c4;
            for &a in &self.adjacency[c] {
                if self.vertices[a].c1 == 0 || self.vertices[a].c4 >= c4 {
                    continue;
                }
                let reachable = self.bounded_a_path_reachable(a, c4);
                let witnesses = reachable
                    .iter()
                    .filter(|&&z| {
                        let zv = &self.vertices[z];
                        zv.c3 || (zv.c1 == 0 && !zv.c2)
                    })
                    .count();
                if witnesses < 2 {
                    return PropResult::fail(format!(
                        "saturated {c}, neighbor {a}: only {witnesses} bounded-path witnesses"
                    ));
                }
            }
        }
        PropResult::pass()
    }

    /// Vertices reachable from `a` along paths whose every vertex has
    /// `c4 < limit` and whose inner vertices have `c1 > 0`. Includes `a`.
    fn bounded_a_path_reachable(&self, a: usize, limit: MValue) -> Vec<usize> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        if self.vertices[a].c4 >= limit {
            return Vec::new();
        }
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(v) = stack.pop() {
            // only the start vertex and positive-c1 vertices may relay
            if v != a && self.vertices[v].c1 == 0 {
                continue;
            }
            for &w in &self.adjacency[v] {
                if !seen[w] && self.vertices[w].c4 < limit {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).filter(|&v| seen[v]).collect()
    }

    /// Every A-block holds two witnesses counted as `Σc3 + #{c1 = c2 = 0}`,
    /// which is the form the block inequality consumes.
    fn check_block_witness_rule(&self) -> PropResult {
        for block in self.a_blocks() {
            let mut score = 0u64;
            for &v in &block {
                let av = &self.vertices[v];
                score += av.c3 as u64;
                score += (av.c1 == 0 && !av.c2) as u64;
            }
            if score < 2 {
                return PropResult::fail(format!(
                    "A-block {block:?} has witness score {score} < 2"
                ));
            }
        }
        PropResult::pass()
    }
}

/// Where Transformation 1 places the extra cooperation marker for `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum X4Mode {
    /// `x` is not a cooperation vertex; nothing to place.
    NotNeeded,
    /// Pendant `x⁴` attached to `x²` (the Δ >= 4 rule).
    PendantOnX2,
    /// Δ = 3 with room on `x¹`.
    PendantOnX1,
    /// Δ = 3 case-1 variant: mark `x²` as the cooperation vertex.
    MarkX2,
    /// Δ = 3 case-1 variant: mark `x³` as the cooperation vertex.
    MarkX3,
}

/// Incremental rebuilder for one transformation: deleted vertices vanish,
/// survivors keep their relative order, descendants are appended in creation
/// order.
struct Builder<'a> {
    source: &'a AuxGraph,
    deleted: Vec<bool>,
    new_vertices: Vec<AuxVertex>,
    /// Edges among new vertices (indices into `new_vertices`).
    new_new_edges: Vec<(usize, usize)>,
    /// Edges between a new vertex and a surviving old vertex.
    new_old_edges: Vec<(usize, usize)>,
    /// Edges between a new vertex and an old vertex that may itself be
    /// deleted; resolved to the deleted vertex's branch-2 descendant.
    new_replaced_edges: Vec<(usize, usize)>,
}

impl<'a> Builder<'a> {
    fn new(source: &'a AuxGraph) -> Self {
        Builder {
            source,
            deleted: vec![false; source.vertices.len()],
            new_vertices: Vec::new(),
            new_new_edges: Vec::new(),
            new_old_edges: Vec::new(),
            new_replaced_edges: Vec::new(),
        }
    }

    fn delete(&mut self, v: usize) {
        self.deleted[v] = true;
    }

    fn add(&mut self, v: AuxVertex) -> usize {
        self.new_vertices.push(v);
        self.new_vertices.len() - 1
    }

    fn connect_new(&mut self, a: usize, b: usize) {
        self.new_new_edges.push((a, b));
    }

    fn connect_old(&mut self, new: usize, old: usize) {
        self.new_old_edges.push((new, old));
    }

    /// Connects `new` to `old`, or to `old`'s branch-2 descendant when `old`
    /// was deleted in the same transformation.
    fn connect_replaced(&mut self, new: usize, old: usize) {
        self.new_replaced_edges.push((new, old));
    }

    fn finish(self, delta: usize) -> AuxGraph {
        let old_n = self.source.vertices.len();
        let mut remap = vec![usize::MAX; old_n];
        let mut vertices = Vec::new();
        for (v, slot) in remap.iter_mut().enumerate() {
            if !self.deleted[v] {
                *slot = vertices.len();
                let mut kept = self.source.vertices[v].clone();
                kept.origin = None;
                vertices.push(kept);
            }
        }
        let base = vertices.len();
        // branch-2 descendant of each deleted ancestor
        let mut branch2: Vec<Option<usize>> = vec![None; old_n];
        for (i, nv) in self.new_vertices.iter().enumerate() {
            if let Some((anc, 2)) = nv.origin {
                branch2[anc] = Some(base + i);
            }
        }
        vertices.extend(self.new_vertices.iter().cloned());

        let mut adjacency = vec![BTreeSet::new(); vertices.len()];
        fn connect(adjacency: &mut [BTreeSet<usize>], a: usize, b: usize) {
            if a != b {
                adjacency[a].insert(b);
                adjacency[b].insert(a);
            }
        }
        // surviving old edges
        for v in 0..old_n {
            if self.deleted[v] {
                continue;
            }
            for &w in &self.source.adjacency[v] {
                if w > v || self.deleted[w] {
                    continue;
                }
                connect(&mut adjacency, remap[v], remap[w]);
            }
        }
        for &(a, b) in &self.new_new_edges {
            connect(&mut adjacency, base + a, base + b);
        }
        for &(nv, old) in &self.new_old_edges {
            debug_assert!(!self.deleted[old]);
            connect(&mut adjacency, base + nv, remap[old]);
        }
        for &(nv, old) in &self.new_replaced_edges {
            let target = if self.deleted[old] {
                branch2[old].expect("deleted neighbor must have a branch-2 descendant")
            } else {
                remap[old]
            };
            connect(&mut adjacency, base + nv, target);
        }
        AuxGraph {
            vertices,
            adjacency,
            delta,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Vertex;

    fn dist(graph: &Arc<Graph>, pairs: &[(Vertex, u32)]) -> PebbleDistribution {
        PebbleDistribution::from_pairs(Arc::clone(graph), pairs).unwrap()
    }

    #[test]
    fn a0_labels_on_p4() {
        let g = Arc::new(Graph::path(4).unwrap());
        let p = dist(&g, &[(1, 1)]);
        let a0 = AuxGraph::build_a0(&g, &p, &UnitDistribution::new(2, 2)).unwrap();
        assert_eq!(a0.vertex_count(), 4);
        assert_eq!(a0.edge_count(), 3);
        // vertex 0: cooperation vertex, never 2-reachable
        assert_eq!(
            a0.vertex(0),
            &AuxVertex::new(0, true, false, MValue::Infinite)
        );
        // vertex 1: cooperation excess 1, double covered, M = 0
        assert_eq!(
            a0.vertex(1),
            &AuxVertex::new(1, false, true, MValue::Finite(0))
        );
        let (c1, c2, c3) = a0.coordinate_sums();
        assert_eq!((c1, c2, c3), (1, 1, 1));
    }

    #[test]
    fn a0_without_interaction_has_no_block() {
        let g = Arc::new(Graph::path(3).unwrap());
        let p = dist(&g, &[(0, 1)]);
        let a0 = AuxGraph::build_a0(&g, &p, &UnitDistribution::new(2, 2)).unwrap();
        assert!(a0.vertices().iter().all(|v| v.c1 == 0 && !v.c2));
        assert!(a0.a_blocks().is_empty());
    }

    #[test]
    fn a0_sums_match_cooperation_report() {
        let g = Arc::new(Graph::cycle(6).unwrap());
        let p = dist(&g, &[(1, 1), (2, 1), (4, 1), (5, 1)]);
        let u = UnitDistribution::new(0, 4);
        let ud = u.to_distribution(Arc::clone(&g)).unwrap();
        let rep = decompose::cooperation(&p, &ud).unwrap();
        let a0 = AuxGraph::build_a0(&g, &p, &u).unwrap();
        let (c1, c2, c3) = a0.coordinate_sums();
        assert_eq!(c1 as i64, rep.ce);
        assert_eq!(c2 as usize, rep.coop);
        assert_eq!(c3 as usize, rep.dc);
    }

    #[test]
    fn build_a0_rejects_small_units() {
        let g = Arc::new(Graph::path(3).unwrap());
        let p = dist(&g, &[(0, 1)]);
        assert!(matches!(
            AuxGraph::build_a0(&g, &p, &UnitDistribution::new(2, 1)),
            Err(Error::UnitTooSmall { .. })
        ));
    }

    #[test]
    fn find_saturated_prefers_max_c4() {
        let mk = |c4| AuxVertex::new(1, true, false, c4);
        let a = AuxGraph::from_parts(
            vec![
                mk(MValue::Finite(1)),
                mk(MValue::Finite(3)),
                AuxVertex::new(0, false, false, MValue::Finite(0)),
            ],
            &[(0, 1), (1, 2)],
            4,
        )
        .unwrap();
        assert_eq!(a.find_saturated(), Some(1));

        let none = AuxGraph::from_parts(
            vec![AuxVertex::new(3, false, true, MValue::Finite(0))],
            &[],
            4,
        )
        .unwrap();
        assert_eq!(none.find_saturated(), None);

        let inf = AuxGraph::from_parts(
            vec![mk(MValue::Finite(9)), mk(MValue::Infinite)],
            &[(0, 1)],
            4,
        )
        .unwrap();
        assert_eq!(inf.find_saturated(), Some(1));
    }

    /// Hand-built instance exercising Transformation 1: pivot w with a heavy
    /// neighbor x, an extra saturated neighbor r of x, a low-c4 y, and one
    /// passthrough neighbor z.
    fn t1_instance(x_is_coop: bool) -> AuxGraph {
        AuxGraph::from_parts(
            vec![
                // 0 = w: saturated, highest c4
                AuxVertex::new(1, true, false, MValue::Finite(5)),
                // 1 = x: heavy
                AuxVertex::new(4, x_is_coop, true, MValue::Finite(2)),
                // 2 = y: minimal c4 neighbor of x
                AuxVertex::new(0, false, true, MValue::Finite(0)),
                // 3 = r: saturated neighbor of x
                AuxVertex::new(2, true, true, MValue::Finite(3)),
                // 4 = z: passthrough neighbor of x
                AuxVertex::new(0, false, true, MValue::Finite(4)),
                // 5: outside neighbor of r
                AuxVertex::new(0, false, false, MValue::Finite(1)),
            ],
            &[(0, 1), (1, 2), (1, 3), (1, 4), (3, 5)],
            4,
        )
        .unwrap()
    }

    #[test]
    fn transform1_bookkeeping() {
        let a = t1_instance(false);
        let before = a.coordinate_sums();
        let next = a.transform1(0, 1).unwrap();
        assert_eq!(next.coordinate_sums(), before);
        // x (not coop) tripled, w and r each split into two:
        // 6 - 3 + 3 + 4 = 10 vertices
        assert_eq!(next.vertex_count(), 10);
        assert!(next.saturated_vertices().len() < a.saturated_vertices().len());
        assert!(next.max_degree() <= 4);

        let a = t1_instance(true);
        let before = a.coordinate_sums();
        let next = a.transform1(0, 1).unwrap();
        assert_eq!(next.coordinate_sums(), before);
        // extra x⁴ appears
        assert_eq!(next.vertex_count(), 11);
        assert_eq!(next.saturated_vertices().len(), 0);
    }

    #[test]
    fn transform1_rejects_bad_pairs() {
        let a = t1_instance(false);
        // y (vertex 2) is not saturated: invalid pivot
        assert!(a.transform1(2, 1).is_err());
        // r is saturated but its neighbor 5 is not heavy
        assert!(a.transform1(3, 5).is_err());
        // delta < 4 is rejected
        let mut small = t1_instance(false);
        small.delta = 3;
        assert!(small.transform1(0, 1).is_err());
    }

    #[test]
    fn transform2_bookkeeping() {
        // pivot 0 saturated; two positive-c1 neighbors with smaller c4
        let a = AuxGraph::from_parts(
            vec![
                AuxVertex::new(2, true, false, MValue::Finite(4)),
                AuxVertex::new(1, false, false, MValue::Finite(1)),
                AuxVertex::new(1, false, true, MValue::Finite(2)),
                AuxVertex::new(0, false, false, MValue::Finite(9)),
            ],
            &[(0, 1), (0, 2), (0, 3)],
            4,
        )
        .unwrap();
        let before = a.coordinate_sums();
        let next = a.transform2(0).unwrap();
        assert_eq!(next.coordinate_sums(), before);
        assert_eq!(next.vertex_count(), 5);
        assert_eq!(next.saturated_vertices().len(), 0);

        // w1 hangs off x (the second-minimal-c4 neighbor, vertex 2);
        // w2 keeps every old neighbor except y (vertex 1)
        let w1 = next
            .vertices()
            .iter()
            .position(|v| v.origin == Some((0, 1)))
            .unwrap();
        let w2 = next
            .vertices()
            .iter()
            .position(|v| v.origin == Some((0, 2)))
            .unwrap();
        assert_eq!(next.degree(w1), 1);
        assert_eq!(next.degree(w2), a.degree(0) - 1);
    }

    #[test]
    fn transform2_requires_case2() {
        let a = AuxGraph::from_parts(
            vec![
                AuxVertex::new(2, true, false, MValue::Finite(4)),
                AuxVertex::new(0, false, false, MValue::Finite(1)),
                AuxVertex::new(1, false, true, MValue::Finite(2)),
            ],
            &[(0, 1), (0, 2)],
            4,
        )
        .unwrap();
        assert!(matches!(
            a.transform2(0),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn transform3_bookkeeping() {
        // delta = 3: x saturated heavy with neighbors y (min c4) and two
        // saturated v, w; v and w are adjacent to outside vertices.
        let a = AuxGraph::from_parts(
            vec![
                // 0 = x
                AuxVertex::new(3, true, true, MValue::Finite(2)),
                // 1 = y
                AuxVertex::new(0, false, true, MValue::Finite(0)),
                // 2 = v
                AuxVertex::new(1, true, false, MValue::Finite(3)),
                // 3 = w
                AuxVertex::new(1, true, true, MValue::Finite(4)),
                // 4: neighbor of v
                AuxVertex::new(0, false, false, MValue::Finite(1)),
                // 5: neighbor of w
                AuxVertex::new(0, false, true, MValue::Finite(1)),
            ],
            &[(0, 1), (0, 2), (0, 3), (2, 4), (3, 5)],
            3,
        )
        .unwrap();
        let before = a.coordinate_sums();
        let next = a.transform3(0).unwrap();
        assert_eq!(next.coordinate_sums(), before);
        assert!(next.max_degree() <= 3);
        // x, v, w replaced by 3 + 2 + 2 descendants
        assert_eq!(next.vertex_count(), 10);
        // exactly the designated x² stays saturated
        let sat = next.saturated_vertices();
        assert_eq!(sat.len(), 1);
        assert_eq!(next.vertex(sat[0]).origin, Some((0, 2)));
    }

    #[test]
    fn fixpoint_on_saturation_free_graph_is_identity() {
        let g = Arc::new(Graph::path(4).unwrap());
        let p = dist(&g, &[(1, 1)]);
        let a0 = AuxGraph::build_a0(&g, &p, &UnitDistribution::new(2, 2)).unwrap();
        assert!(a0.find_saturated().is_none());
        let run = a0.run_to_fixpoint(100).unwrap();
        assert!(run.steps.is_empty());
        assert_eq!(run.result, a0);
    }

    #[test]
    fn fixpoint_terminates_and_preserves_sums() {
        let a = t1_instance(true);
        let run = a.run_to_fixpoint(100).unwrap();
        assert_eq!(run.initial_sums, run.final_sums);
        assert!(run.result.find_saturated().is_none());
        assert!(!run.steps.is_empty());
        for audit in run.result.audit_blocks() {
            assert!(audit.inequality_holds, "{audit:?}");
            assert!(audit.count_bound_holds, "{audit:?}");
        }
    }

    /// Frozen instance on which the fixpoint run genuinely goes through
    /// Transformation 1: a 6-vertex graph with a heavy unit beside spread-out
    /// single pebbles.
    #[test]
    fn fixpoint_exercises_transformation_one() {
        let g = Arc::new(
            Graph::from_edges(6, &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4)])
                .unwrap(),
        );
        let p = dist(&g, &[(0, 1), (2, 1), (3, 1), (4, 1)]);
        let a0 = AuxGraph::build_a0(&g, &p, &UnitDistribution::new(1, 6)).unwrap();
        let run = a0.run_to_fixpoint(1_000).unwrap();
        assert!(run.steps.iter().any(|s| s.kind == 1), "{:?}", run.steps);
        assert_eq!(run.initial_sums, run.final_sums);
        assert!(run.result.find_saturated().is_none());
        for audit in run.result.audit_blocks() {
            assert!(
                audit.inequality_holds && audit.count_bound_holds,
                "{audit:?}"
            );
        }
    }

    #[test]
    fn properties_hold_on_real_a0_and_fail_on_negative_control() {
        let g = Arc::new(Graph::cycle(6).unwrap());
        let p = dist(&g, &[(1, 1), (2, 1), (4, 1), (5, 1)]);
        let a0 = AuxGraph::build_a0(&g, &p, &UnitDistribution::new(0, 4)).unwrap();
        let report = a0.check_properties();
        assert!(report.all_hold(), "{report:?}");

        // a lone positive-c1 vertex with no witnesses violates the block rule
        let bad = AuxGraph::from_parts(
            vec![
                AuxVertex::new(1, false, false, MValue::Finite(0)),
                AuxVertex::new(0, true, false, MValue::Finite(0)),
            ],
            &[(0, 1)],
            4,
        )
        .unwrap();
        let report = bad.check_properties();
        assert!(!report.block_witness_rule.holds);
        assert!(report.block_witness_rule.witness.is_some());
    }
}
