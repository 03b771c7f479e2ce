//! Empirical verification suites.
//!
//! Every claim the toolkit relies on is checked here on exhaustively
//! enumerated small instances: the cooperation/excess identities, the
//! `coop - DC <= (Δ-2)·CE` inequality, the auxiliary-graph transformation
//! audit, the torus unit estimates, the exact path/cycle values, and the
//! consistency ordering between the bounds and the exact solver. The `verify`
//! CLI subcommand is a thin wrapper over these functions; the acceptance test
//! suite runs them with the pinned configurations.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use rayon::prelude::*;

use crate::aux::AuxGraph;
use crate::bounds::{self, Rational};
use crate::decompose::{self, CooperationReport, MValue};
use crate::engine::PebbleDistribution;
use crate::graph::{Graph, GraphSpec, Vertex};
use crate::solver::{self, SolveOptions};
use crate::Result;

pub mod lp;

const MAX_RECORDED_VIOLATIONS: usize = 20;

/// Aggregated result of one verification suite.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: String,
    /// Individual assertions evaluated.
    pub checked: u64,
    /// Number of failed assertions (messages capped).
    pub violations: u64,
    pub messages: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            checked: 0,
            violations: 0,
            messages: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.messages.len() < MAX_RECORDED_VIOLATIONS {
                self.messages.push(msg());
            }
        }
    }

    fn merge(&mut self, other: SuiteOutcome) {
        self.checked += other.checked;
        self.violations += other.violations;
        for m in other.messages {
            if self.messages.len() < MAX_RECORDED_VIOLATIONS {
                self.messages.push(m);
            }
        }
        self.notes.extend(other.notes);
    }
}

/// Shared sweep configuration. The defaults match the acceptance pins:
/// every connected graph on at most 6 vertices, `|P| <= 4`,
/// `|U| ∈ {2,3,4}`, tori from 5x5 to 7x7 with units up to 12 pebbles,
/// paths/cycles solved up to n = 10.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Graphs up to this order come from the exhaustive connected catalog
    /// (capped at 6; isomorph-free enumeration beyond that is impractical).
    pub max_n: usize,
    /// Extra random connected graphs on 7..=max_n vertices when max_n > 6.
    pub random_graphs: usize,
    pub seed: u64,
    pub max_pebbles: u32,
    pub unit_sizes: Vec<u32>,
    pub torus_min: usize,
    pub torus_max: usize,
    pub torus_unit_max: u32,
    pub solve_max_n: usize,
    /// Step guard handed to the transformation fixpoint driver.
    pub step_limit: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_n: 6,
            random_graphs: 0,
            seed: 0x5eed_cafe,
            max_pebbles: 4,
            unit_sizes: vec![2, 3, 4],
            torus_min: 5,
            torus_max: 7,
            torus_unit_max: 12,
            solve_max_n: 10,
            step_limit: 10_000,
        }
    }
}

impl SweepConfig {
    /// The graph population for the cooperation sweeps: the exhaustive
    /// isomorph-free catalog up to `min(max_n, 6)`, plus random connected
    /// graphs on 7..=max_n vertices when requested.
    pub fn sweep_graphs(&self) -> Vec<Graph> {
        let mut graphs = all_connected_graphs(self.max_n.min(6));
        if self.max_n > 6 {
            let extra = if self.random_graphs > 0 {
                self.random_graphs
            } else {
                1000
            };
            graphs.extend(random_connected_graphs(extra, 7, self.max_n, self.seed));
        }
        graphs
    }
}

// ---------------------------------------------------------------------------
// Graph catalogs
// ---------------------------------------------------------------------------

/// Every connected graph on 1..=max_n vertices, one representative per
/// isomorphism class (max_n <= 6). Canonical form: the minimum edge bitmask
/// over all vertex permutations.
pub fn all_connected_graphs(max_n: usize) -> Vec<Graph> {
    assert!(max_n <= 6, "exhaustive catalog is limited to n <= 6");
    let mut graphs = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        let bits = pairs.len();
        let perms = permutations(n);
        let mut seen: HashSet<u32> = HashSet::new();
        for mask in 0u32..(1u32 << bits) {
            if !mask_connected(n, &pairs, mask) {
                continue;
            }
            let canon = perms
                .iter()
                .map(|perm| remap_mask(&pairs, mask, perm))
                .min()
                .unwrap();
            if !seen.insert(canon) {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            graphs.push(Graph::from_edges(n, &edges).unwrap());
        }
    }
    graphs
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn remap_mask(pairs: &[(usize, usize)], mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    for (b, &(i, j)) in pairs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            let (pi, pj) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
            let nb = pairs.iter().position(|&e| e == (pi, pj)).unwrap();
            out |= 1 << nb;
        }
    }
    out
}

fn mask_connected(n: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    if n == 1 {
        return true;
    }
    let mut adj = vec![Vec::new(); n];
    for (b, &(i, j)) in pairs.iter().enumerate() {
        if mask >> b & 1 == 1 {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Random connected graphs with `lo..=hi` vertices from a seeded generator.
pub fn random_connected_graphs(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Graph> {
    let mut rng = XorShiftRng::seed_from_u64(seed);
    let mut graphs = Vec::with_capacity(count);
    while graphs.len() < count {
        let n = rng.random_range(lo..=hi);
        let p = 0.35 + rng.random_range(0.0..0.3);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.random_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            graphs.push(g);
        }
    }
    graphs
}

/// All pebble distributions of size 0..=max over the vertices of `g`,
/// as counts vectors in enumeration order.
fn all_distributions(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; n]];
    let mut frontier = vec![(vec![0u32; n], 0usize)];
    for _ in 0..max {
        let mut next = Vec::new();
        for (counts, start) in frontier {
            for v in start..n {
                let mut c = counts.clone();
                c[v] += 1;
                out.push(c.clone());
                next.push((c, v));
            }
        }
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// The cooperation sweep (criteria 2-5 plus the decomposition claims)
// ---------------------------------------------------------------------------

/// Which outcomes a sweep run should produce.
#[derive(Clone, Copy, Debug, Default)]
pub struct SweepParts {
    pub lemma41: bool,
    pub theorem22: bool,
    pub claim35: bool,
    pub transform: bool,
    pub cooperation: bool,
}

impl SweepParts {
    pub fn all() -> Self {
        SweepParts {
            lemma41: true,
            theorem22: true,
            claim35: true,
            transform: true,
            cooperation: true,
        }
    }

    fn needs_m(&self) -> bool {
        self.transform || self.cooperation
    }
}

/// Outcomes of one shared sweep pass.
#[derive(Clone, Debug)]
pub struct SweepOutcomes {
    pub lemma41: SuiteOutcome,
    pub theorem22: SuiteOutcome,
    pub claim35: SuiteOutcome,
    pub transform: SuiteOutcome,
    pub cooperation: SuiteOutcome,
    /// The decomposition-sum inequality for solvable distributions on
    /// Δ >= 3 graphs: `(Δ-2)·Σ CE(prefix, U_i) >= |V| - Σ cov(U_i)`.
    pub structural: SuiteOutcome,
}

impl SweepOutcomes {
    fn new() -> Self {
        SweepOutcomes {
            lemma41: SuiteOutcome::new("lemma41"),
            theorem22: SuiteOutcome::new("theorem22"),
            claim35: SuiteOutcome::new("claim35"),
            transform: SuiteOutcome::new("transform"),
            cooperation: SuiteOutcome::new("cooperation"),
            structural: SuiteOutcome::new("structural"),
        }
    }

    fn merge(&mut self, other: SweepOutcomes) {
        self.lemma41.merge(other.lemma41);
        self.theorem22.merge(other.theorem22);
        self.claim35.merge(other.claim35);
        self.transform.merge(other.transform);
        self.cooperation.merge(other.cooperation);
        self.structural.merge(other.structural);
    }
}

/// Runs the cooperation sweep over every `(graph, P, U)` instance of the
/// configuration: all distributions `|P| <= max_pebbles`, units of the
/// configured sizes at every vertex unoccupied by `P`. One pass feeds all
/// requested outcome sets.
pub fn run_cooperation_sweep(cfg: &SweepConfig, parts: SweepParts) -> SweepOutcomes {
    let graphs = cfg.sweep_graphs();
    let partials: Vec<SweepOutcomes> = graphs
        .par_iter()
        .map(|g| sweep_one_graph(g, cfg, parts))
        .collect();
    let mut total = SweepOutcomes::new();
    for p in partials {
        total.merge(p);
    }
    total
        .lemma41
        .notes
        .push(format!("{} graphs swept", graphs.len()));
    total
}

fn sweep_one_graph(g: &Graph, cfg: &SweepConfig, parts: SweepParts) -> SweepOutcomes {
    let g = Arc::new(g.clone());
    let n = g.vertex_count();
    let delta = g.max_degree() as i64;
    let mut out = SweepOutcomes::new();

    // effects once per graph (connected by construction)
    let effects: Vec<Rational> = (0..n).map(|v| bounds::effect(&g, v).unwrap()).collect();

    // unit analyses cached per (vertex, size)
    let mut unit_cache: Vec<Vec<Option<crate::engine::ReachabilityReport>>> =
        vec![vec![None; cfg.unit_sizes.len()]; n];

    for p_counts in all_distributions(n, cfg.max_pebbles) {
        let p = PebbleDistribution::from_counts(Arc::clone(&g), p_counts).unwrap();
        let rp = p.analyze();

        if parts.theorem22 && rp.solvable {
            check_excess_inequality(&g, &effects, &p, rp.total_excess, &mut out.theorem22);
        }
        if parts.claim35 {
            let id = decompose::decomposition_identities(&p).unwrap();
            out.claim35.record(id.holds(), || {
                format!("decomposition identities unbalanced for P={p} on {g}: {id:?}")
            });
            check_structural_sum(&g, &id, &p, &mut out.structural);
        }

        for (u_vertex, cache_row) in unit_cache.iter_mut().enumerate() {
            if p.count(u_vertex) > 0 {
                continue;
            }
            for (ki, &k) in cfg.unit_sizes.iter().enumerate() {
                let ud = PebbleDistribution::unit(Arc::clone(&g), u_vertex, k).unwrap();
                if cache_row[ki].is_none() {
                    let ru = ud.analyze();
                    if parts.theorem22 && ru.solvable {
                        check_excess_inequality(
                            &g,
                            &effects,
                            &ud,
                            ru.total_excess,
                            &mut out.theorem22,
                        );
                    }
                    cache_row[ki] = Some(ru);
                }
                let ru = cache_row[ki].clone().unwrap();
                let combined = decompose::sum(&p, &ud).unwrap();
                let rpq = combined.analyze();

                let covered_p: Vec<bool> = (0..n).map(|v| rp.reach[v] >= 1).collect();
                let covered_q: Vec<bool> = (0..n).map(|v| ru.reach[v] >= 1).collect();
                let coop_mask: Vec<bool> = (0..n)
                    .map(|v| rpq.reach[v] >= 1 && !covered_p[v] && !covered_q[v])
                    .collect();
                let per_vertex_ce: Vec<i64> = (0..n)
                    .map(|v| rpq.excess[v] as i64 - rp.excess[v] as i64 - ru.excess[v] as i64)
                    .collect();
                let coop = coop_mask.iter().filter(|&&b| b).count() as i64;
                let dc = (0..n).filter(|&v| covered_p[v] && covered_q[v]).count() as i64;
                let ce = rpq.total_excess as i64 - rp.total_excess as i64 - ru.total_excess as i64;

                if parts.lemma41 {
                    out.lemma41.record(coop - dc <= (delta - 2) * ce, || {
                        format!(
                            "cooperation inequality violated on {g} P={p} U=({u_vertex},{k}): \
                             coop={coop} dc={dc} ce={ce} delta={delta}"
                        )
                    });
                }
                if parts.theorem22 && rpq.solvable {
                    check_excess_inequality(
                        &g,
                        &effects,
                        &combined,
                        rpq.total_excess,
                        &mut out.theorem22,
                    );
                }
                if parts.claim35 {
                    let id = decompose::decomposition_identities(&combined).unwrap();
                    out.claim35.record(id.holds(), || {
                        format!("decomposition identities unbalanced for P+U={combined} on {g}: {id:?}")
                    });
                    check_structural_sum(&g, &id, &combined, &mut out.structural);
                }
                if parts.cooperation {
                    check_cooperation_claims(
                        &g,
                        &covered_p,
                        &covered_q,
                        &coop_mask,
                        &per_vertex_ce,
                        &rpq,
                        &rp,
                        &ru,
                        u_vertex,
                        &mut out.cooperation,
                    );
                }
                if parts.needs_m() {
                    let m_values = decompose::m_values_for(&combined, &coop_mask, &rpq.reach);
                    if parts.cooperation {
                        check_m_monotonicity(
                            &g,
                            &coop_mask,
                            &per_vertex_ce,
                            &rpq,
                            &m_values,
                            &mut out.cooperation,
                        );
                    }
                    if parts.transform && g.max_degree() >= 3 {
                        let report = CooperationReport {
                            coop: coop as usize,
                            dc: dc as usize,
                            ce,
                            per_vertex_ce: per_vertex_ce.clone(),
                            m_values,
                            coop_vertices: (0..n).filter(|&v| coop_mask[v]).collect(),
                            dc_vertices: (0..n).filter(|&v| covered_p[v] && covered_q[v]).collect(),
                            covered_p: covered_p.clone(),
                            covered_q: covered_q.clone(),
                        };
                        check_transform_audit(
                            &g,
                            &report,
                            cfg,
                            &p,
                            u_vertex,
                            k,
                            &mut out.transform,
                        );
                    }
                }
            }
        }
    }
    out
}

/// For a solvable distribution on a graph with Δ >= 3, the cooperation-sum
/// terms of the decomposition must carry the vertices its units cannot:
/// `(Δ-2)·Σ CE >= |V| - Σ cov(U_i)`.
fn check_structural_sum(
    g: &Arc<Graph>,
    id: &decompose::IdentityCheck,
    p: &PebbleDistribution,
    out: &mut SuiteOutcome,
) {
    let n = g.vertex_count() as i64;
    let delta = g.max_degree() as i64;
    if delta < 3 || id.cov_total as i64 != n {
        return;
    }
    out.record(
        (delta - 2) * id.te_ce_sum >= n - id.cov_unit_sum as i64,
        || format!("decomposition-sum inequality fails for P={p} on {g}"),
    );
}

fn check_excess_inequality(
    g: &Arc<Graph>,
    effects: &[Rational],
    p: &PebbleDistribution,
    total_excess: u64,
    out: &mut SuiteOutcome,
) {
    let mut lhs = Rational::from_integer(0);
    for v in p.occupied() {
        lhs += effects[v] * Rational::from_integer(p.count(v) as i64);
    }
    let rhs = Rational::from_integer(g.vertex_count() as i64 + total_excess as i64);
    out.record(lhs >= rhs, || {
        format!("excess inequality violated on {g} P={p}: lhs={lhs} rhs={rhs}")
    });
}

#[allow(clippy::too_many_arguments)]
fn check_cooperation_claims(
    g: &Arc<Graph>,
    covered_p: &[bool],
    covered_q: &[bool],
    coop_mask: &[bool],
    per_vertex_ce: &[i64],
    rpq: &crate::engine::ReachabilityReport,
    rp: &crate::engine::ReachabilityReport,
    ru: &crate::engine::ReachabilityReport,
    u_vertex: Vertex,
    out: &mut SuiteOutcome,
) {
    let n = g.vertex_count();
    // coverage identity: cov(P+Q) = cov(P) + cov(Q) + coop - DC
    let coop = coop_mask.iter().filter(|&&b| b).count() as i64;
    let dc = (0..n).filter(|&v| covered_p[v] && covered_q[v]).count() as i64;
    out.record(
        rpq.cov() as i64 == rp.cov() as i64 + ru.cov() as i64 + coop - dc,
        || format!("coverage identity violated on {g}"),
    );
    // superadditivity: per-vertex cooperation excess is never negative
    out.record(per_vertex_ce.iter().all(|&c| c >= 0), || {
        format!("negative per-vertex cooperation excess on {g}")
    });
    // a cooperation vertex always has a neighbor with cooperation excess
    for (c, &is_coop) in coop_mask.iter().enumerate() {
        if !is_coop {
            continue;
        }
        out.record(g.neighbors(c).iter().any(|&w| per_vertex_ce[w] > 0), || {
            format!("cooperation vertex {c} has no excess neighbor on {g}")
        });
    }
    // positive excess needs an excess-or-covered neighbor
    for v in 0..n {
        if per_vertex_ce[v] <= 0 {
            continue;
        }
        out.record(
            g.neighbors(v)
                .iter()
                .any(|&w| per_vertex_ce[w] > 0 || covered_p[w] || covered_q[w]),
            || format!("excess vertex {v} has no excess-or-covered neighbor on {g}"),
        );
    }
    // the unit vertex is double covered once it has cooperation excess
    if per_vertex_ce[u_vertex] > 0 {
        out.record(covered_p[u_vertex] && covered_q[u_vertex], || {
            format!("unit vertex {u_vertex} has excess but no double coverage on {g}")
        });
    }
    // every C-block holds two double-covered or cooperation-free vertices
    // (in any mix)
    let positive: Vec<bool> = per_vertex_ce.iter().map(|&c| c > 0).collect();
    for block in decompose::blocks_from_positive(g, &positive) {
        let witnesses = block
            .iter()
            .filter(|&&v| {
                let dc_v = covered_p[v] && covered_q[v];
                let coop_free = !coop_mask[v] && per_vertex_ce[v] <= 0;
                dc_v || coop_free
            })
            .count();
        out.record(witnesses >= 2, || {
            format!("C-block {block:?} lacks two witnesses on {g}")
        });
    }
}

/// M-monotonicity: a 2-reachable cooperation vertex has either two neighbors
/// with excess >= 1 and smaller M, or one neighbor with excess >= 3 and
/// smaller M.
fn check_m_monotonicity(
    g: &Arc<Graph>,
    coop_mask: &[bool],
    per_vertex_ce: &[i64],
    rpq: &crate::engine::ReachabilityReport,
    m_values: &[MValue],
    out: &mut SuiteOutcome,
) {
    for c in 0..g.vertex_count() {
        if !coop_mask[c] || rpq.reach[c] < 2 {
            continue;
        }
        let mc = m_values[c];
        let strong = g
            .neighbors(c)
            .iter()
            .any(|&d| per_vertex_ce[d] >= 3 && m_values[d] < mc);
        let pair = g
            .neighbors(c)
            .iter()
            .filter(|&&e| per_vertex_ce[e] >= 1 && m_values[e] < mc)
            .count()
            >= 2;
        out.record(strong || pair, || {
            format!("M-monotonicity violated at cooperation vertex {c} on {g}")
        });
    }
}

fn check_transform_audit(
    g: &Arc<Graph>,
    report: &CooperationReport,
    cfg: &SweepConfig,
    p: &PebbleDistribution,
    u_vertex: Vertex,
    k: u32,
    out: &mut SuiteOutcome,
) {
    let a0 = AuxGraph::from_cooperation(g, report);
    let ctx = || format!("on {g} P={p} U=({u_vertex},{k})");
    out.record(a0.check_properties().all_hold(), || {
        format!("structural properties fail for the initial labeled graph {}", ctx())
    });
    match a0.run_to_fixpoint(cfg.step_limit) {
        Ok(run) => {
            out.record(run.initial_sums == run.final_sums, || {
                format!(
                    "coordinate sums drifted {:?} -> {:?} {}",
                    run.initial_sums,
                    run.final_sums,
                    ctx()
                )
            });
            out.record(run.result.find_saturated().is_none(), || {
                format!("fixpoint still saturated {}", ctx())
            });
            // the global inequality on the fixpoint, which sum preservation
            // carries back to coop - DC <= (delta-2)·CE for the instance
            let (c1, c2, c3) = run.final_sums;
            let dm2 = g.max_degree() as i64 - 2;
            out.record(c2 as i64 - c3 as i64 <= dm2 * c1 as i64, || {
                format!("global inequality fails on the fixpoint {}", ctx())
            });
            out.record(run.result.check_properties().all_hold(), || {
                format!("structural properties fail after transformations {}", ctx())
            });
            for audit in run.result.audit_blocks() {
                out.record(audit.inequality_holds, || {
                    format!("block inequality fails for {:?} {}", audit.block, ctx())
                });
                out.record(audit.count_bound_holds, || {
                    format!("boundary bound fails for block {:?} {}", audit.block, ctx())
                });
            }
        }
        Err(e) => out.record(false, || format!("fixpoint failed: {e} {}", ctx())),
    }
}

// ---------------------------------------------------------------------------
// Standalone suites
// ---------------------------------------------------------------------------

/// Criterion: `solve` matches `⌈2n/3⌉` on paths (n <= solve_max_n) and
/// cycles (3 <= n <= solve_max_n).
pub fn suite_path_cycle(cfg: &SweepConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("path-cycle");
    let mut specs = Vec::new();
    for n in 1..=cfg.solve_max_n {
        specs.push((GraphSpec::Path(n), n));
    }
    for n in 3..=cfg.solve_max_n {
        specs.push((GraphSpec::Cycle(n), n));
    }
    let results: Vec<(String, Option<u32>, u64)> = specs
        .par_iter()
        .map(|(spec, n)| {
            let g = Arc::new(spec.build().unwrap());
            let options = SolveOptions {
                automorphisms: spec.automorphisms(),
                ..Default::default()
            };
            let pi = solver::solve(&g, &options).ok().map(|r| r.pi_opt);
            (format!("{spec:?}"), pi, bounds::path_cycle_bound(*n))
        })
        .collect();
    for (desc, pi, expected) in results {
        out.record(pi == Some(expected as u32), || {
            format!("{desc}: solve returned {pi:?}, formula says {expected}")
        });
    }
    out
}

/// Criterion: the torus/grid bound formula at its pinned values.
pub fn suite_grid_bound() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("grid-bound");
    let cases = [(13usize, 13usize, 26u64), (5, 5, 4), (5, 6, 5)];
    for (m, n, expected) in cases {
        let got = bounds::grid_bound(m, n);
        out.record(got.as_ref().ok() == Some(&expected), || {
            format!("grid_bound({m},{n}) = {got:?}, expected {expected}")
        });
    }
    out.record(bounds::grid_bound(4, 7).is_err(), || {
        "grid_bound(4,7) should be rejected".to_string()
    });
    out
}

/// Criterion: torus unit coverage caps and excess floors for all units up to
/// `torus_unit_max` at every vertex, plus `ef(v) < 9`, on all tori with
/// `torus_min <= m <= n <= torus_max`.
pub fn suite_torus_claims(cfg: &SweepConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("torus-claims");
    let mut tori = Vec::new();
    for m in cfg.torus_min..=cfg.torus_max {
        for n in m..=cfg.torus_max {
            tori.push((m, n));
        }
    }
    let partials: Vec<SuiteOutcome> = tori
        .par_iter()
        .map(|&(m, n)| {
            let mut part = SuiteOutcome::new("torus-claims");
            let g = Arc::new(Graph::torus(m, n).unwrap());
            let nine = Rational::from_integer(9);
            for v in 0..g.vertex_count() {
                let ef = bounds::effect(&g, v).unwrap();
                part.record(ef < nine, || {
                    format!("ef({v}) = {ef} >= 9 on torus {m}x{n}")
                });
            }
            let vertex_jobs: Vec<(Vertex, u32)> = (0..g.vertex_count())
                .flat_map(|v| (1..=cfg.torus_unit_max).map(move |s| (v, s)))
                .collect();
            let inner: Vec<SuiteOutcome> = vertex_jobs
                .par_iter()
                .map(|&(v, s)| {
                    let mut p = SuiteOutcome::new("torus-claims");
                    let est = bounds::unit_estimates(m, n, s).unwrap();
                    let unit = PebbleDistribution::unit(Arc::clone(&g), v, s).unwrap();
                    let r = unit.analyze();
                    let cov = Rational::from_integer(r.cov() as i64);
                    let te = Rational::from_integer(r.total_excess as i64);
                    p.record(cov <= est.cov_cap, || {
                        format!(
                            "unit coverage cap: cov={cov} > {} for |U|={s} at {v} on {m}x{n}",
                            est.cov_cap
                        )
                    });
                    p.record(te >= est.exc_floor, || {
                        format!(
                            "unit excess floor: TE={te} < {} for |U|={s} at {v} on {m}x{n}",
                            est.exc_floor
                        )
                    });
                    p
                })
                .collect();
            for i in inner {
                part.merge(i);
            }
            part
        })
        .collect();
    for p in partials {
        out.merge(p);
    }
    out
}

/// Criterion: the emitted P_3 model has the documented shape and parses in
/// the strict LP reader.
pub fn suite_ilp() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("ilp");
    let g = Graph::path(3).unwrap();
    let mut buf = Vec::new();
    let summary = bounds::emit_ilp(&g, &mut buf, false).unwrap();
    out.record(summary.variables() == 15, || {
        format!(
            "P_3 model has {} variables, expected 15",
            summary.variables()
        )
    });
    out.record(summary.constraints == 3 + 9, || {
        format!(
            "P_3 model has {} constraints, expected 12",
            summary.constraints
        )
    });
    let text = String::from_utf8(buf).unwrap();
    match lp::parse(&text) {
        Ok(model) => {
            out.record(model.variables().len() == 15, || {
                format!(
                    "parsed model has {} distinct variables, expected 15",
                    model.variables().len()
                )
            });
            out.record(model.objective.terms.len() == 3, || {
                "objective should sum the 3 placement variables".to_string()
            });
            out.record(model.constraints.len() == 12, || {
                format!(
                    "parsed model has {} constraints, expected 12",
                    model.constraints.len()
                )
            });
            out.record(model.generals.len() == 15, || {
                "all 15 variables should be integral".to_string()
            });
            // schema: each target row has P_i with +1, incoming arcs +1,
            // outgoing arcs -2, rhs 1
            for i in 0..3 {
                let name = format!("target_{i}");
                let row = model.constraints.iter().find(|c| c.name == name);
                out.record(
                    row.is_some_and(|c| {
                        c.rhs == 1.0
                            && c.terms
                                .iter()
                                .any(|t| t.var == format!("P_{i}") && t.coef == 1.0)
                            && c.terms.iter().all(|t| t.coef == 1.0 || t.coef == -2.0)
                    }),
                    || format!("target constraint {name} deviates from the schema"),
                );
            }
        }
        Err(e) => out.record(false, || format!("LP text failed to parse: {e}")),
    }
    // the relaxation drops integrality
    let mut buf = Vec::new();
    bounds::emit_ilp(&g, &mut buf, true).unwrap();
    let text = String::from_utf8(buf).unwrap();
    match lp::parse(&text) {
        Ok(model) => out.record(model.generals.is_empty(), || {
            "relaxed model must not declare integral variables".to_string()
        }),
        Err(e) => out.record(false, || format!("relaxed LP failed to parse: {e}")),
    }
    out
}

/// Criterion: on every graph the solver finishes, each bound stays at or
/// below the exact optimum.
pub fn suite_ordering(cfg: &SweepConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("ordering");
    let mut specs: Vec<GraphSpec> = Vec::new();
    for n in 1..=cfg.solve_max_n.min(8) {
        specs.push(GraphSpec::Path(n));
    }
    for n in 3..=cfg.solve_max_n.min(8) {
        specs.push(GraphSpec::Cycle(n));
    }
    specs.push(GraphSpec::Torus(3, 3));
    specs.push(GraphSpec::Torus(3, 4));
    specs.push(GraphSpec::Torus(5, 5));
    specs.push(GraphSpec::Grid(2, 2));
    specs.push(GraphSpec::Grid(2, 3));

    let results: Vec<SuiteOutcome> = specs
        .par_iter()
        .map(|spec| {
            let mut part = SuiteOutcome::new("ordering");
            let g = Arc::new(spec.build().unwrap());
            let options = SolveOptions {
                automorphisms: spec.automorphisms(),
                ..Default::default()
            };
            let solved = match solver::solve(&g, &options) {
                Ok(r) => r,
                Err(e) => {
                    part.notes.push(format!("{spec:?}: solver gave up ({e})"));
                    return part;
                }
            };
            let pi = Rational::from_integer(solved.pi_opt as i64);
            let report =
                bounds::bound_report(&g, &format!("{spec:?}"), Some(spec), Some(&solved.witness))
                    .unwrap();
            {
                let mut check = |label: &str, value: Option<Rational>| {
                    if let Some(v) = value {
                        part.record(v <= pi, || {
                            format!("{spec:?}: {label} bound {v} exceeds pi_opt {pi}")
                        });
                    }
                };
                check("fractional", report.fractional);
                check("excess", report.excess_bound);
                check("structural", report.structural);
                check(
                    "grid",
                    report.grid.map(|v| Rational::from_integer(v as i64)),
                );
                check(
                    "path-cycle",
                    report.path_cycle.map(|v| Rational::from_integer(v as i64)),
                );
            }
            if let (Some(f), Some(e)) = (report.fractional, report.excess_bound) {
                part.record(f <= e, || {
                    format!("{spec:?}: excess bound {e} fell below the fractional bound {f}")
                });
            }
            part
        })
        .collect();
    for p in results {
        out.merge(p);
    }
    out
}

/// Unit closed forms for units up to 16 pebbles on paths,
/// cycles, grids and tori up to 8x8, plus the 3/2 coverage cap on paths and
/// cycles.
pub fn suite_unit_formulas(cfg: &SweepConfig) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("unit-formulas");
    let mut specs = vec![
        GraphSpec::Path(9),
        GraphSpec::Path(3),
        GraphSpec::Cycle(9),
        GraphSpec::Cycle(5),
        GraphSpec::Grid(4, 5),
        GraphSpec::Grid(8, 8),
        GraphSpec::Torus(4, 6),
        GraphSpec::Torus(8, 8),
    ];
    if cfg.max_n >= 7 {
        specs.push(GraphSpec::Grid(3, 3));
    }
    let partials: Vec<SuiteOutcome> = specs
        .par_iter()
        .map(|spec| {
            let mut part = SuiteOutcome::new("unit-formulas");
            let g = Arc::new(spec.build().unwrap());
            let pc = matches!(spec, GraphSpec::Path(_) | GraphSpec::Cycle(_));
            for v in 0..g.vertex_count() {
                let sizes = g.layer_sizes(v).unwrap();
                for s in 1u32..=16 {
                    let unit = PebbleDistribution::unit(Arc::clone(&g), v, s).unwrap();
                    let r = unit.analyze();
                    let log2 = 31 - s.leading_zeros();
                    let cov_expected: usize = sizes.iter().take(log2 as usize + 1).sum();
                    let te_expected: u64 = sizes
                        .iter()
                        .enumerate()
                        .take(log2 as usize + 1)
                        .map(|(i, &cnt)| cnt as u64 * ((s as u64 >> i) - 1))
                        .sum();
                    part.record(r.cov() == cov_expected, || {
                        format!("unit coverage formula off for |U|={s} at {v} on {spec:?}")
                    });
                    part.record(r.total_excess == te_expected, || {
                        format!("unit excess formula off for |U|={s} at {v} on {spec:?}")
                    });
                    if pc {
                        part.record(2 * r.cov() as u64 <= 3 * s as u64, || {
                            format!("cov/|U| > 3/2 for |U|={s} at {v} on {spec:?}")
                        });
                    }
                }
            }
            part
        })
        .collect();
    for p in partials {
        out.merge(p);
    }
    out
}

// ---------------------------------------------------------------------------
// Entry points used by the CLI
// ---------------------------------------------------------------------------

/// Runs one named suite.
pub fn run_suite(name: &str, cfg: &SweepConfig) -> Result<Vec<SuiteOutcome>> {
    let outcomes = match name {
        "lemma41" => {
            let parts = SweepParts {
                lemma41: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).lemma41]
        }
        "theorem22" => {
            let parts = SweepParts {
                theorem22: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).theorem22]
        }
        "claim35" => {
            let parts = SweepParts {
                claim35: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).claim35]
        }
        "structural" => {
            let parts = SweepParts {
                claim35: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).structural]
        }
        "transform" => {
            let parts = SweepParts {
                transform: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).transform]
        }
        "cooperation" => {
            let parts = SweepParts {
                cooperation: true,
                ..Default::default()
            };
            vec![run_cooperation_sweep(cfg, parts).cooperation]
        }
        "path-cycle" => vec![suite_path_cycle(cfg)],
        "grid-bound" => vec![suite_grid_bound()],
        "torus-claims" => vec![suite_torus_claims(cfg)],
        "ilp" => vec![suite_ilp()],
        "ordering" => vec![suite_ordering(cfg)],
        "unit-formulas" => vec![suite_unit_formulas(cfg)],
        "all" => return Ok(run_all(cfg)),
        other => {
            return Err(crate::Error::parse(format!(
                "unknown suite '{other}'; expected one of lemma41, theorem22, claim35, \
                 transform, cooperation, structural, path-cycle, grid-bound, \
                 torus-claims, ilp, ordering, unit-formulas, all"
            )))
        }
    };
    Ok(outcomes)
}

/// Runs every suite, sharing one cooperation sweep pass.
pub fn run_all(cfg: &SweepConfig) -> Vec<SuiteOutcome> {
    let sweep = run_cooperation_sweep(cfg, SweepParts::all());
    vec![
        sweep.lemma41,
        sweep.theorem22,
        sweep.claim35,
        sweep.transform,
        sweep.cooperation,
        sweep.structural,
        suite_unit_formulas(cfg),
        suite_path_cycle(cfg),
        suite_grid_bound(),
        suite_torus_claims(cfg),
        suite_ilp(),
        suite_ordering(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_catalog_counts() {
        // connected graphs up to isomorphism: 1, 1, 2, 6, 21, 112
        let graphs = all_connected_graphs(5);
        let by_n = |n: usize| graphs.iter().filter(|g| g.vertex_count() == n).count();
        assert_eq!(by_n(1), 1);
        assert_eq!(by_n(2), 1);
        assert_eq!(by_n(3), 2);
        assert_eq!(by_n(4), 6);
        assert_eq!(by_n(5), 21);
    }

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        let a = random_connected_graphs(5, 4, 7, 42);
        let b = random_connected_graphs(5, 4, 7, 42);
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x, y);
            assert!(x.is_connected());
        }
    }

    #[test]
    fn distribution_enumeration_counts() {
        // sum over s of C(n+s-1, s) for n=3, s<=3: 1 + 3 + 6 + 10 = 20
        assert_eq!(all_distributions(3, 3).len(), 20);
    }

    #[test]
    fn small_sweep_is_clean() {
        let cfg = SweepConfig {
            max_n: 4,
            max_pebbles: 3,
            unit_sizes: vec![2, 3],
            ..Default::default()
        };
        let outcomes = run_cooperation_sweep(&cfg, SweepParts::all());
        for o in [
            &outcomes.lemma41,
            &outcomes.theorem22,
            &outcomes.claim35,
            &outcomes.transform,
            &outcomes.cooperation,
            &outcomes.structural,
        ] {
            assert!(o.passed(), "{}: {:?}", o.name, o.messages);
            assert!(o.checked > 0, "{} checked nothing", o.name);
        }
    }

    #[test]
    fn grid_bound_suite_passes() {
        let out = suite_grid_bound();
        assert!(out.passed(), "{:?}", out.messages);
    }

    #[test]
    fn ilp_suite_passes() {
        let out = suite_ilp();
        assert!(out.passed(), "{:?}", out.messages);
    }

    #[test]
    fn unit_formula_suite_small() {
        let cfg = SweepConfig::default();
        let out = suite_unit_formulas(&cfg);
        assert!(out.passed(), "{:?}", out.messages);
    }
}
