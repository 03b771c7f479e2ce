//! Exact optimal pebbling number by size-ordered exhaustive search.
//!
//! Candidate distributions of each size are enumerated as multisets over the
//! vertices, optionally reduced to lexicographic orbit representatives under
//! supplied automorphisms, prefiltered by the weight relaxation (a vertex `v`
//! with `Σ P(u)·(1/2)^{d(u,v)} < 1` can never be reached), and then checked
//! for solvability vertex by vertex, farthest from the pebbles first. The
//! first solvable distribution in enumeration order is the witness; sizes are
//! exhausted in increasing order, so the witness size is exactly `π_opt`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use crate::bounds;
use crate::engine::{self, PebbleDistribution, SearchCtx};
use crate::graph::{Graph, Vertex, UNREACHABLE};
use crate::{Error, Result};

/// Search configuration.
#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Full automorphism list used for orbit reduction; empty means raw
    /// enumeration. Permutations are validated against the graph.
    pub automorphisms: Vec<Vec<Vertex>>,
    /// Start the search at this size if it beats the generic lower bound.
    /// Must itself be a valid lower bound on the optimal pebbling number,
    /// or the answer may come out too large; callers pass proven bounds
    /// (the torus/grid formula).
    pub lower_hint: Option<u32>,
    /// Node budget: total states expanded across solvability checks.
    pub max_nodes: Option<u64>,
    /// Give up above this distribution size (default: the vertex count,
    /// which always admits the all-ones solvable distribution).
    pub max_size: Option<u32>,
}

/// Search counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub distributions_tested: u64,
    pub states_expanded: u64,
}

/// Exact answer with a witness and the audit numbers behind it.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub pi_opt: u32,
    pub witness: PebbleDistribution,
    pub lower_bound_used: u32,
    pub stats: SolveStats,
}

/// Whether every vertex of `g` is reachable under `p`. Tests vertices in
/// decreasing distance-from-pebbles order and stops at the first failure.
pub fn is_solvable(g: &Graph, p: &PebbleDistribution) -> bool {
    let mut counter = 0u64;
    is_solvable_counted(g, p.counts(), &mut counter)
}

fn is_solvable_counted(g: &Graph, counts: &[u32], states: &mut u64) -> bool {
    let n = g.vertex_count();
    debug_assert_eq!(counts.len(), n);
    if counts.iter().all(|&c| c == 0) {
        return n == 0;
    }
    // order targets by decreasing distance from the nearest pebble
    let mut order: Vec<(u32, Vertex)> = (0..n)
        .map(|v| {
            let d = (0..n)
                .filter(|&u| counts[u] > 0)
                .map(|u| g.distance(u, v))
                .min()
                .unwrap_or(UNREACHABLE);
            (d, v)
        })
        .collect();
    order.sort_unstable_by(|a, b| b.cmp(a));
    if order.first().map(|&(d, _)| d) == Some(UNREACHABLE) {
        return false;
    }
    for &(d, v) in &order {
        if d == 0 {
            // v holds a pebble
            continue;
        }
        if !SearchCtx::for_target(g, v).reaches_threshold_counted(counts, 1, states) {
            return false;
        }
    }
    true
}

/// Cheap necessary condition: every vertex must see total weight at least 1.
/// Distances are clamped like the engine's relaxation, which only weakens
/// the filter.
fn weight_feasible(g: &Graph, counts: &[u32]) -> bool {
    let n = g.vertex_count();
    let shift = g.diameter().min(engine::MAX_WEIGHT_SHIFT);
    let unit = 1u128 << shift;
    for v in 0..n {
        if counts[v] > 0 {
            continue;
        }
        let mut w = 0u128;
        for (u, &c) in counts.iter().enumerate() {
            if c > 0 {
                let d = g.distance(u, v);
                if d == UNREACHABLE {
                    return false;
                }
                w += (c as u128) << (shift - d.min(shift));
                if w >= unit {
                    break;
                }
            }
        }
        if w < unit {
            return false;
        }
    }
    true
}

/// Lexicographic orbit-representative filter: keep `counts` iff no supplied
/// automorphism maps it to a lexicographically smaller counts vector.
fn is_canonical(counts: &[u32], perms: &[Vec<Vertex>], scratch: &mut Vec<u32>) -> bool {
    for perm in perms {
        scratch.clear();
        scratch.resize(counts.len(), 0);
        for (i, &c) in counts.iter().enumerate() {
            scratch[perm[i]] = c;
        }
        if scratch.as_slice() < counts {
            return false;
        }
    }
    true
}

/// Enumerates all multisets of `size` pebbles over `n` vertices in
/// lexicographic placement order, invoking `visit` on each counts vector.
fn for_each_multiset(n: usize, size: u32, visit: &mut impl FnMut(&[u32])) {
    fn rec(counts: &mut Vec<u32>, start: usize, left: u32, visit: &mut impl FnMut(&[u32])) {
        if left == 0 {
            visit(counts);
            return;
        }
        let n = counts.len();
        for v in start..n {
            counts[v] += 1;
            rec(counts, v, left - 1, visit);
            counts[v] -= 1;
        }
    }
    let mut counts = vec![0u32; n];
    rec(&mut counts, 0, size, visit);
}

/// Exact `π_opt(g)` with a solvable witness of that size.
///
/// The search starts at the best available lower bound and increments; within
/// one size, surviving candidates are checked concurrently and the witness is
/// the first solvable candidate in enumeration order.
pub fn solve(g: &Arc<Graph>, options: &SolveOptions) -> Result<SolveResult> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let perms: Vec<Vec<Vertex>> = options
        .automorphisms
        .iter()
        .filter(|p| g.is_automorphism(p))
        .cloned()
        .collect();

    let generic_lower = match bounds::max_effect(g) {
        Ok(me) => bounds::ceil_rational(bounds::Rational::from_integer(n as i64) / me) as u32,
        // exact effects outgrow i64 on huge diameters; start from 1 instead
        Err(Error::DiameterTooLarge { .. }) => 1,
        Err(e) => return Err(e),
    };
    let lower = generic_lower.max(options.lower_hint.unwrap_or(1)).max(1);
    let max_size = options.max_size.unwrap_or(n as u32);

    let states = AtomicU64::new(0);
    let tested = AtomicU64::new(0);

    for size in lower..=max_size {
        if let Some(budget) = options.max_nodes {
            if states.load(Ordering::Relaxed) > budget {
                // every vertex holding a pebble is solvable, so the vertex
                // count certifies the upper end of the interval
                return Err(Error::budget(size, Some(n as u32)));
            }
        }
        // survivors of the weight and canonicity filters, in enumeration order
        let mut candidates: Vec<Vec<u32>> = Vec::new();
        let mut scratch = Vec::new();
        for_each_multiset(n, size, &mut |counts| {
            if !perms.is_empty() && !is_canonical(counts, &perms, &mut scratch) {
                return;
            }
            if !weight_feasible(g, counts) {
                return;
            }
            candidates.push(counts.to_vec());
        });

        let found = candidates.par_iter().find_first(|counts| {
            let mut local = 0u64;
            let ok = is_solvable_counted(g, counts, &mut local);
            states.fetch_add(local, Ordering::Relaxed);
            tested.fetch_add(1, Ordering::Relaxed);
            ok
        });

        if let Some(counts) = found {
            let witness = PebbleDistribution::from_counts(Arc::clone(g), counts.clone())?;
            debug_assert!(is_solvable(g, &witness));
            return Ok(SolveResult {
                pi_opt: size,
                witness,
                lower_bound_used: lower,
                stats: SolveStats {
                    distributions_tested: tested.load(Ordering::Relaxed),
                    states_expanded: states.load(Ordering::Relaxed),
                },
            });
        }
    }
    Err(Error::budget(max_size + 1, Some(n as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;

    fn solve_spec(spec: &str) -> SolveResult {
        let gspec: GraphSpec = spec.parse().unwrap();
        let g = Arc::new(gspec.build().unwrap());
        let options = SolveOptions {
            automorphisms: gspec.automorphisms(),
            ..Default::default()
        };
        solve(&g, &options).unwrap()
    }

    #[test]
    fn known_small_values() {
        let r = solve_spec("path:3");
        assert_eq!(r.pi_opt, 2);
        assert_eq!(r.witness.counts(), &[0, 2, 0]);

        assert_eq!(solve_spec("cycle:6").pi_opt, 4);

        // P_2 □ P_2 is C_4
        let p2 = Arc::new(Graph::path(2).unwrap());
        let c4 = Arc::new(Graph::cartesian_product(&p2, &p2).unwrap());
        assert_eq!(solve(&c4, &SolveOptions::default()).unwrap().pi_opt, 3);
    }

    #[test]
    fn matches_path_cycle_formula() {
        for n in 1..=8 {
            assert_eq!(
                solve_spec(&format!("path:{n}")).pi_opt as u64,
                bounds::path_cycle_bound(n),
                "P_{n}"
            );
        }
        for n in 3..=8 {
            assert_eq!(
                solve_spec(&format!("cycle:{n}")).pi_opt as u64,
                bounds::path_cycle_bound(n),
                "C_{n}"
            );
        }
    }

    #[test]
    fn symmetry_reduction_agrees_with_raw() {
        for spec in ["path:6", "cycle:7"] {
            let gspec: GraphSpec = spec.parse().unwrap();
            let g = Arc::new(gspec.build().unwrap());
            let raw = solve(&g, &SolveOptions::default()).unwrap();
            let reduced = solve(
                &g,
                &SolveOptions {
                    automorphisms: gspec.automorphisms(),
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(raw.pi_opt, reduced.pi_opt, "{spec}");
            assert!(reduced.stats.distributions_tested <= raw.stats.distributions_tested);
        }
    }

    #[test]
    fn solvability_examples() {
        let p5 = Arc::new(Graph::path(5).unwrap());
        let d = PebbleDistribution::from_pairs(Arc::clone(&p5), &[(2, 4)]).unwrap();
        assert!(is_solvable(&p5, &d));

        let d = PebbleDistribution::from_pairs(Arc::clone(&p5), &[(2, 2)]).unwrap();
        assert!(!is_solvable(&p5, &d));

        let ones = PebbleDistribution::from_counts(Arc::clone(&p5), vec![1; 5]).unwrap();
        assert!(is_solvable(&p5, &ones));
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let g = Arc::new(Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        assert!(matches!(
            solve(&g, &SolveOptions::default()),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn budget_produces_interval() {
        let g = Arc::new(Graph::cycle(9).unwrap());
        let err = solve(
            &g,
            &SolveOptions {
                max_nodes: Some(0),
                lower_hint: Some(2),
                ..Default::default()
            },
        );
        // with a zero budget the very first size re-check trips
        match err {
            Err(Error::BudgetExceeded { lower, .. }) => assert!(lower >= 2),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn witness_is_deterministic_across_schedulers() {
        let gspec: GraphSpec = "cycle:8".parse().unwrap();
        let g = Arc::new(gspec.build().unwrap());
        let options = SolveOptions {
            automorphisms: gspec.automorphisms(),
            ..Default::default()
        };
        let reference = solve(&g, &options).unwrap();
        for threads in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let r = pool.install(|| solve(&g, &options)).unwrap();
            assert_eq!(r.pi_opt, reference.pi_opt);
            assert_eq!(r.witness.counts(), reference.witness.counts());
        }
    }

    #[test]
    fn witness_is_minimal_spot_check() {
        let r = solve_spec("cycle:6");
        let g = r.witness.graph();
        for v in r.witness.occupied() {
            let mut counts = r.witness.counts().to_vec();
            counts[v] -= 1;
            let smaller = PebbleDistribution::from_counts(Arc::clone(g), counts).unwrap();
            assert!(!is_solvable(g, &smaller));
        }
    }
}
