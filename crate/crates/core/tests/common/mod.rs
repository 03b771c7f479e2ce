//! Definition-level oracles, independent of the library's search machinery.
#![allow(dead_code)] // each test binary uses its own subset of the oracles

//!
//! Everything here enumerates raw move sequences (no memoization, no
//! pruning) or raw subsets, exactly as the definitions read. Slow but
//! trustworthy on tiny instances.

use pebbling::{Graph, Vertex};

/// Max final count on `v` over every executable move sequence.
pub fn naive_reach(g: &Graph, counts: &[u32], v: Vertex) -> u32 {
    let mut work = counts.to_vec();
    let mut best = 0;
    naive_reach_rec(g, &mut work, &[v], &mut best);
    best
}

/// Max simultaneous total on `targets` over every executable move sequence.
pub fn naive_reach_set(g: &Graph, counts: &[u32], targets: &[Vertex]) -> u32 {
    let mut work = counts.to_vec();
    let mut best = 0;
    naive_reach_rec(g, &mut work, targets, &mut best);
    best
}

fn naive_reach_rec(g: &Graph, counts: &mut Vec<u32>, targets: &[Vertex], best: &mut u32) {
    let current: u32 = targets.iter().map(|&t| counts[t]).sum();
    if current > *best {
        *best = current;
    }
    for from in 0..counts.len() {
        if counts[from] < 2 {
            continue;
        }
        for &to in g.neighbors(from) {
            counts[from] -= 2;
            counts[to] += 1;
            naive_reach_rec(g, counts, targets, best);
            counts[to] -= 1;
            counts[from] += 2;
        }
    }
}

/// Minimal number of cooperation vertices utilized by any sequence putting
/// two pebbles on `v`; `None` when no sequence does. A vertex is utilized
/// when some move removes or adds a pebble there.
pub fn naive_m_value(g: &Graph, counts: &[u32], coop: &[bool], v: Vertex) -> Option<u32> {
    let mut work = counts.to_vec();
    let mut touched = vec![0u32; counts.len()];
    let mut best: Option<u32> = None;
    naive_m_rec(g, &mut work, coop, v, &mut touched, &mut best);
    best
}

fn naive_m_rec(
    g: &Graph,
    counts: &mut Vec<u32>,
    coop: &[bool],
    v: Vertex,
    touched: &mut Vec<u32>,
    best: &mut Option<u32>,
) {
    if counts[v] >= 2 {
        let used = (0..counts.len())
            .filter(|&w| coop[w] && touched[w] > 0)
            .count() as u32;
        if best.is_none() || used < best.unwrap() {
            *best = Some(used);
        }
    }
    for from in 0..counts.len() {
        if counts[from] < 2 {
            continue;
        }
        for &to in g.neighbors(from) {
            counts[from] -= 2;
            counts[to] += 1;
            touched[from] += 1;
            touched[to] += 1;
            naive_m_rec(g, counts, coop, v, touched, best);
            touched[to] -= 1;
            touched[from] -= 1;
            counts[to] -= 1;
            counts[from] += 2;
        }
    }
}

/// True when some path joins `a` and `b` whose inner vertices all lie in
/// `positive`, found by brute force over simple paths.
pub fn naive_coopexcess_connected(g: &Graph, positive: &[bool], a: Vertex, b: Vertex) -> bool {
    if a == b {
        return true;
    }
    let mut on_path = vec![false; g.vertex_count()];
    on_path[a] = true;
    path_rec(g, positive, a, b, &mut on_path)
}

fn path_rec(g: &Graph, positive: &[bool], cur: Vertex, b: Vertex, on_path: &mut Vec<bool>) -> bool {
    for &next in g.neighbors(cur) {
        if next == b {
            return true;
        }
        if !on_path[next] && positive[next] {
            on_path[next] = true;
            if path_rec(g, positive, next, b, on_path) {
                on_path[next] = false;
                return true;
            }
            on_path[next] = false;
        }
    }
    false
}

/// Maximal sets that are pairwise coopexcess-connected and contain a
/// positive vertex, by brute force over vertex subsets (n <= 16).
pub fn naive_c_blocks(g: &Graph, positive: &[bool]) -> Vec<Vec<Vertex>> {
    let n = g.vertex_count();
    assert!(n <= 16);
    let mut valid: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << n) {
        let members: Vec<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if !members.iter().any(|&v| positive[v]) {
            continue;
        }
        let pairwise = members.iter().enumerate().all(|(i, &a)| {
            members[i + 1..]
                .iter()
                .all(|&b| naive_coopexcess_connected(g, positive, a, b))
        });
        if pairwise {
            valid.push(mask);
        }
    }
    let mut blocks: Vec<Vec<Vertex>> = valid
        .iter()
        .filter(|&&m| !valid.iter().any(|&other| other != m && other & m == m))
        .map(|&m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
        .collect();
    blocks.sort();
    blocks
}

/// Every connected graph on up to `max_n` vertices (one per isomorphism
/// class), re-exported for test sweeps.
pub fn catalog(max_n: usize) -> Vec<Graph> {
    pebbling::verify::all_connected_graphs(max_n)
}

/// All counts vectors with total size <= `max` over `n` vertices.
pub fn all_distributions(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; n];
    fn rec(counts: &mut Vec<u32>, start: usize, left: u32, out: &mut Vec<Vec<u32>>) {
        out.push(counts.clone());
        if left == 0 {
            return;
        }
        for v in start..counts.len() {
            counts[v] += 1;
            rec(counts, v, left - 1, out);
            counts[v] -= 1;
        }
    }
    rec(&mut counts, 0, max, &mut out);
    out
}
