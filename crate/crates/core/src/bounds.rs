//! Closed-form quantities and lower bounds on the optimal pebbling number.
//!
//! All arithmetic is exact rational; rounding to integers happens once, at
//! report edges, via ceilings. The bounds here are the effect-based fractional
//! bound, the excess-improved bound `|P| >= (|V| + TE(P))/ef(v)`, the
//! structural bound built from unit decompositions, the `⌈2mn/13⌉` torus/grid
//! bound, and the exact `⌈2n/3⌉` value for paths and cycles. The module also
//! emits the optimal-pebbling integer program in LP text format.

use std::io::Write;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::decompose;
use crate::engine::PebbleDistribution;
use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Exact rational used throughout the bounds.
pub type Rational = Ratio<i64>;

fn ratio(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// Ceiling of a nonnegative rational as `u64`.
pub fn ceil_rational(r: Rational) -> u64 {
    r.ceil().to_integer() as u64
}

/// Largest diameter whose `2^diam` denominators fit the i64 rationals.
const MAX_EXACT_DIAMETER: u32 = 50;

/// The effect of one pebble at `v`: `ef(v) = Σ_{i=0}^{diam} (1/2)^i |N_i(v)|`.
pub fn effect(g: &Graph, v: Vertex) -> Result<Rational> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    g.check_vertex(v)?;
    let diam = g.diameter();
    if diam > MAX_EXACT_DIAMETER {
        return Err(Error::DiameterTooLarge {
            diameter: diam,
            max: MAX_EXACT_DIAMETER,
        });
    }
    let sizes = g.layer_sizes(v)?;
    let mut num = 0i64;
    for (i, &s) in sizes.iter().enumerate() {
        num += (s as i64) << (diam as usize - i);
    }
    Ok(ratio(num, 1i64 << diam))
}

/// Largest effect over all vertices; a generic denominator for lower bounds
/// on arbitrary connected graphs.
pub fn max_effect(g: &Graph) -> Result<Rational> {
    let mut best = Rational::zero();
    for v in 0..g.vertex_count() {
        let e = effect(g, v)?;
        if e > best {
            best = e;
        }
    }
    Ok(best)
}

/// Result of evaluating `Σ ef(v)·P(v) >= |V| + TE(P)` for a solvable `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub slack: Rational,
    pub holds: bool,
}

/// Evaluates both sides of the excess inequality exactly. Errors when `p` is
/// not solvable, since the statement assumes solvability.
pub fn excess_inequality_check(g: &Graph, p: &PebbleDistribution) -> Result<ExcessCheck> {
    let report = p.analyze();
    if !report.solvable {
        let witness = (0..g.vertex_count())
            .find(|&v| report.reach[v] == 0)
            .unwrap_or(0);
        return Err(Error::NotSolvable { witness });
    }
    let mut lhs = Rational::zero();
    for v in p.occupied() {
        lhs += effect(g, v)? * ratio(p.count(v) as i64, 1);
    }
    let rhs = ratio(g.vertex_count() as i64 + report.total_excess as i64, 1);
    Ok(ExcessCheck {
        lhs,
        rhs,
        slack: lhs - rhs,
        holds: lhs >= rhs,
    })
}

/// `|V(G)| / ef(v)`: the fractional optimal pebbling number of a
/// vertex-transitive graph. The caller asserts transitivity; the generators
/// for cycles and tori produce transitive graphs by construction.
pub fn fractional_bound(g: &Graph) -> Result<Rational> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(ratio(g.vertex_count() as i64, 1) / effect(g, 0)?)
}

/// The unit-decomposition lower bound for a solvable `p` on a
/// vertex-transitive graph with Δ >= 3:
///
/// `(((Δ-1)/(Δ-2))·|V| + UE(P) - (1/(Δ-2))·Σ cov(U_i)) / ef(v)`.
pub fn structural_bound(g: &Arc<Graph>, p: &PebbleDistribution) -> Result<Rational> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let delta = g.max_degree();
    if delta < 3 {
        return Err(Error::DeltaTooSmall { delta, min: 3 });
    }
    let report = p.analyze();
    if !report.solvable {
        let witness = (0..g.vertex_count())
            .find(|&v| report.reach[v] == 0)
            .unwrap_or(0);
        return Err(Error::NotSolvable { witness });
    }
    let ue = decompose::unit_excess(p)? as i64;
    let mut cov_sum = 0i64;
    for unit in decompose::decompose(p) {
        let ud = unit.to_distribution(Arc::clone(g))?;
        cov_sum += ud.analyze().cov() as i64;
    }
    let dm2 = ratio(delta as i64 - 2, 1);
    let numerator = ratio(delta as i64 - 1, 1) / dm2 * ratio(g.vertex_count() as i64, 1)
        + ratio(ue, 1)
        - ratio(cov_sum, 1) / dm2;
    Ok(numerator / effect(g, 0)?)
}

/// `⌈2mn/13⌉`: the torus lower bound, valid for `m, n >= 5`; it transfers to
/// the grid `P_m □ P_n` because edge removal cannot decrease the optimal
/// pebbling number.
pub fn grid_bound(m: usize, n: usize) -> Result<u64> {
    if m < 5 || n < 5 {
        return Err(Error::GraphTooSmall { m, n, min: 5 });
    }
    Ok(ceil_rational(ratio(2 * (m as i64) * (n as i64), 13)))
}

/// `⌈2n/3⌉`: the exact optimal pebbling number of `P_n` and `C_n`.
pub fn path_cycle_bound(n: usize) -> u64 {
    ceil_rational(ratio(2 * n as i64, 3))
}

/// Piecewise coverage cap and excess floor for a unit on a torus with
/// `min(m,n) >= 5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitEstimates {
    pub cov_cap: Rational,
    pub exc_floor: Rational,
}

/// Claims the torus unit caps/floors by size class:
/// coverage at most `1`, `(5/2)|U|`, `(13/4)|U|`; excess at least `0`,
/// `(1/2)|U|`, `(8/5)|U|` for `|U| = 1`, `2..=3`, `>= 4` respectively.
pub fn unit_estimates(m: usize, n: usize, size: u32) -> Result<UnitEstimates> {
    if m.min(n) < 5 {
        return Err(Error::GraphTooSmall { m, n, min: 5 });
    }
    let s = ratio(size as i64, 1);
    let (cov_cap, exc_floor) = match size {
        0 => (Rational::zero(), Rational::zero()),
        1 => (Rational::one(), Rational::zero()),
        2 | 3 => (ratio(5, 2) * s, ratio(1, 2) * s),
        _ => (ratio(13, 4) * s, ratio(8, 5) * s),
    };
    Ok(UnitEstimates { cov_cap, exc_floor })
}

/// Variable/constraint counts reported after emitting an LP model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpSummary {
    pub placement_variables: usize,
    pub flow_variables: usize,
    pub constraints: usize,
    pub relaxed: bool,
}

impl IlpSummary {
    pub fn variables(&self) -> usize {
        self.placement_variables + self.flow_variables
    }
}

/// Emits the optimal-pebbling integer program in LP text format.
///
/// Variables: `P_j` (pebbles placed at `v_j`) and `p_i_j_k` (moves from `v_j`
/// to `v_k` while targeting `v_i`), one per target and ordered adjacent pair.
/// Constraints: for every target `i` a `>= 1` row at `v_i`, and for every
/// pair `(i, j)` a `>= 0` intermediate row at `v_j`. Sections appear in the
/// order objective, constraints, bounds, integrality; `relax` drops the
/// integrality section and yields the LP relaxation whose optimum is the
/// fractional optimal pebbling number.
pub fn emit_ilp(g: &Graph, out: &mut dyn Write, relax: bool) -> Result<IlpSummary> {
    let n = g.vertex_count();
    let arcs: Vec<(Vertex, Vertex)> = g
        .edges()
        .iter()
        .flat_map(|&(u, v)| [(u, v), (v, u)])
        .collect();

    writeln!(
        out,
        "\\ optimal pebbling model: {} vertices, {} edges",
        n,
        g.edge_count()
    )?;
    writeln!(out, "Minimize")?;
    let objective: Vec<String> = (0..n).map(|j| format!("P_{j}")).collect();
    writeln!(out, " obj: {}", objective.join(" + "))?;

    writeln!(out, "Subject To")?;
    let mut constraints = 0usize;
    for i in 0..n {
        let row = balance_row(g, i, i);
        writeln!(out, " target_{i}: {row} >= 1")?;
        constraints += 1;
    }
    for i in 0..n {
        for j in 0..n {
            let row = balance_row(g, i, j);
            writeln!(out, " inter_{i}_{j}: {row} >= 0")?;
            constraints += 1;
        }
    }

    writeln!(out, "Bounds")?;
    for j in 0..n {
        writeln!(out, " P_{j} >= 0")?;
    }
    for i in 0..n {
        for &(u, v) in &arcs {
            writeln!(out, " p_{i}_{u}_{v} >= 0")?;
        }
    }

    if !relax {
        writeln!(out, "Generals")?;
        for j in 0..n {
            writeln!(out, " P_{j}")?;
        }
        for i in 0..n {
            for &(u, v) in &arcs {
                writeln!(out, " p_{i}_{u}_{v}")?;
            }
        }
    }
    writeln!(out, "End")?;

    Ok(IlpSummary {
        placement_variables: n,
        flow_variables: n * arcs.len(),
        constraints,
        relaxed: relax,
    })
}

/// The pebble balance at `v_j` while targeting `v_i`:
/// `P_j + Σ_{x ~ j} (p_i(x, j) - 2 p_i(j, x))`.
fn balance_row(g: &Graph, i: Vertex, j: Vertex) -> String {
    let mut terms = vec![format!("P_{j}")];
    for &x in g.neighbors(j) {
        terms.push(format!("+ p_{i}_{x}_{j}"));
        terms.push(format!("- 2 p_{i}_{j}_{x}"));
    }
    terms.join(" ")
}

/// Assembled bound table for one graph (and optionally one distribution).
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub graph_desc: String,
    /// `ef` at the representative vertex 0.
    pub effect: Rational,
    /// Degree/distance-profile screen for vertex-transitivity.
    pub vertex_transitive_like: bool,
    /// `|V|/ef(v)`, reported when the screen passes.
    pub fractional: Option<Rational>,
    /// `(|V| + TE(P))/ef(v)` for the supplied solvable distribution.
    pub excess_bound: Option<Rational>,
    /// The unit-decomposition bound for the supplied solvable distribution.
    pub structural: Option<Rational>,
    /// `⌈2mn/13⌉` when the graph was specified as a torus or grid with
    /// `m, n >= 5`.
    pub grid: Option<u64>,
    /// `⌈2n/3⌉` when the graph was specified as a path or cycle.
    pub path_cycle: Option<u64>,
    pub notes: Vec<String>,
}

impl BoundReport {
    /// Largest available integer lower bound on the optimal pebbling number.
    pub fn best_lower_bound(&self) -> u64 {
        let mut best = if self.vertex_transitive_like {
            self.fractional.map(ceil_rational).unwrap_or(0)
        } else {
            0
        };
        if let Some(g) = self.grid {
            best = best.max(g);
        }
        if let Some(pc) = self.path_cycle {
            best = best.max(pc);
        }
        best.max(1)
    }
}

/// Computes every applicable bound for `g`; `dims` carries the generator
/// parameters when the graph came from a torus/grid/path/cycle spec.
pub fn bound_report(
    g: &Arc<Graph>,
    desc: &str,
    dims: Option<&crate::graph::GraphSpec>,
    p: Option<&PebbleDistribution>,
) -> Result<BoundReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let transitive = g.looks_vertex_transitive();
    let mut notes = Vec::new();
    let fractional = if transitive {
        Some(fractional_bound(g)?)
    } else {
        notes.push(
            "graph failed the vertex-transitivity screen; fractional bound omitted".to_string(),
        );
        None
    };
    let mut excess_bound = None;
    let mut structural = None;
    if let Some(p) = p {
        let check = excess_inequality_check(g, p)?;
        if transitive {
            excess_bound = Some(check.rhs / effect(g, 0)?);
        }
        if transitive && g.max_degree() >= 3 {
            structural = Some(structural_bound(g, p)?);
        } else if g.max_degree() < 3 {
            notes.push("max degree < 3; structural bound omitted".to_string());
        }
    }
    let mut grid = None;
    let mut path_cycle = None;
    match dims {
        Some(crate::graph::GraphSpec::Torus(m, n)) | Some(crate::graph::GraphSpec::Grid(m, n)) => {
            if *m >= 5 && *n >= 5 {
                grid = Some(grid_bound(*m, *n)?);
            } else {
                notes.push("sides below 5; torus/grid bound omitted".to_string());
            }
        }
        Some(crate::graph::GraphSpec::Path(n)) | Some(crate::graph::GraphSpec::Cycle(n)) => {
            path_cycle = Some(path_cycle_bound(*n));
        }
        _ => {}
    }
    Ok(BoundReport {
        graph_desc: desc.to_string(),
        effect: effect(g, 0)?,
        vertex_transitive_like: transitive,
        fractional,
        excess_bound,
        structural,
        grid,
        path_cycle,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    #[test]
    fn effect_values() {
        let single = Graph::path(1).unwrap();
        assert_eq!(effect(&single, 0).unwrap(), ratio(1, 1));

        let torus = Graph::torus(5, 5).unwrap();
        // layers 1, 4, 8, 8, 4
        for v in 0..25 {
            assert_eq!(effect(&torus, v).unwrap(), ratio(25, 4));
        }

        for (m, n) in [(5, 5), (5, 9), (7, 11), (20, 20)] {
            let t = Graph::torus(m, n).unwrap();
            assert!(effect(&t, 0).unwrap() < ratio(9, 1), "T_{{{m},{n}}}");
        }

        let disconnected = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(effect(&disconnected, 0), Err(Error::Disconnected)));
    }

    #[test]
    fn excess_inequality_examples() {
        let p3 = arc(Graph::path(3).unwrap());
        let d = PebbleDistribution::from_pairs(Arc::clone(&p3), &[(1, 2)]).unwrap();
        let check = excess_inequality_check(&p3, &d).unwrap();
        assert_eq!(check.lhs, ratio(4, 1));
        assert_eq!(check.rhs, ratio(4, 1));
        assert!(check.holds);
        assert_eq!(check.slack, Rational::zero());

        let c3 = arc(Graph::cycle(3).unwrap());
        let d = PebbleDistribution::from_pairs(Arc::clone(&c3), &[(0, 2)]).unwrap();
        let check = excess_inequality_check(&c3, &d).unwrap();
        assert_eq!(check.lhs, ratio(4, 1));
        assert_eq!(check.rhs, ratio(4, 1));

        // not solvable: 2 pebbles in the middle of P_5 reach no endpoint
        let p5 = arc(Graph::path(5).unwrap());
        let d = PebbleDistribution::from_pairs(Arc::clone(&p5), &[(2, 2)]).unwrap();
        assert!(matches!(
            excess_inequality_check(&p5, &d),
            Err(Error::NotSolvable { .. })
        ));
    }

    #[test]
    fn fractional_values() {
        assert_eq!(
            fractional_bound(&Graph::cycle(3).unwrap()).unwrap(),
            ratio(3, 2)
        );
        assert_eq!(
            fractional_bound(&Graph::torus(5, 5).unwrap()).unwrap(),
            ratio(4, 1)
        );
        assert_eq!(
            fractional_bound(&Graph::cycle(6).unwrap()).unwrap(),
            ratio(16, 7)
        );
    }

    #[test]
    fn structural_bound_on_torus() {
        let t = arc(Graph::torus(5, 5).unwrap());
        // one pebble everywhere: trivially solvable, all units size 1
        let ones = PebbleDistribution::from_counts(Arc::clone(&t), vec![1; 25]).unwrap();
        let value = structural_bound(&t, &ones).unwrap();
        // (3/2·25 + 0 - 1/2·25) / (25/4) = 25 / (25/4) = 4
        assert_eq!(value, ratio(4, 1));
        assert!(value <= ratio(25, 1));

        let c4 = arc(Graph::cycle(4).unwrap());
        let d = PebbleDistribution::from_counts(Arc::clone(&c4), vec![1; 4]).unwrap();
        assert!(matches!(
            structural_bound(&c4, &d),
            Err(Error::DeltaTooSmall { .. })
        ));
    }

    #[test]
    fn grid_bound_values() {
        assert_eq!(grid_bound(13, 13).unwrap(), 26);
        assert_eq!(grid_bound(5, 5).unwrap(), 4);
        assert_eq!(grid_bound(5, 6).unwrap(), 5);
        assert!(matches!(grid_bound(4, 9), Err(Error::GraphTooSmall { .. })));
    }

    #[test]
    fn path_cycle_values() {
        assert_eq!(path_cycle_bound(3), 2);
        assert_eq!(path_cycle_bound(4), 3);
        assert_eq!(path_cycle_bound(10), 7);
        assert_eq!(path_cycle_bound(1), 1);
    }

    #[test]
    fn fractional_never_exceeds_cycle_value() {
        for n in 3..=16 {
            let frac = fractional_bound(&Graph::cycle(n).unwrap()).unwrap();
            assert!(
                ceil_rational(frac) <= path_cycle_bound(n),
                "C_{n}: ceil({frac}) > {}",
                path_cycle_bound(n)
            );
        }
    }

    #[test]
    fn unit_estimate_rows() {
        let e = unit_estimates(5, 5, 1).unwrap();
        assert_eq!(e.cov_cap, ratio(1, 1));
        assert_eq!(e.exc_floor, ratio(0, 1));

        let e = unit_estimates(5, 5, 3).unwrap();
        assert_eq!(e.cov_cap, ratio(15, 2));
        assert_eq!(e.exc_floor, ratio(3, 2));

        let e = unit_estimates(5, 5, 4).unwrap();
        assert_eq!(e.cov_cap, ratio(13, 1));
        assert_eq!(e.exc_floor, ratio(32, 5));

        assert!(unit_estimates(4, 9, 2).is_err());
    }

    #[test]
    fn ilp_counts() {
        let p2 = Graph::path(2).unwrap();
        let mut buf = Vec::new();
        let summary = emit_ilp(&p2, &mut buf, false).unwrap();
        assert_eq!(summary.placement_variables, 2);
        assert_eq!(summary.flow_variables, 4);
        assert_eq!(summary.constraints, 2 + 4);

        let p3 = Graph::path(3).unwrap();
        let mut buf = Vec::new();
        let summary = emit_ilp(&p3, &mut buf, false).unwrap();
        assert_eq!(summary.variables(), 15);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Minimize"));
        assert!(text.contains(" obj: P_0 + P_1 + P_2"));
        assert!(text.contains("Generals"));
        assert!(text.ends_with("End\n"));

        let mut buf = Vec::new();
        let summary = emit_ilp(&p3, &mut buf, true).unwrap();
        assert!(summary.relaxed);
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains("Generals"));
    }

    #[test]
    fn report_for_torus() {
        let spec: crate::graph::GraphSpec = "torus:5,5".parse().unwrap();
        let g = arc(spec.build().unwrap());
        let report = bound_report(&g, "torus:5,5", Some(&spec), None).unwrap();
        assert!(report.vertex_transitive_like);
        assert_eq!(report.fractional, Some(ratio(4, 1)));
        assert_eq!(report.grid, Some(4));
        assert_eq!(report.best_lower_bound(), 4);
    }
}
