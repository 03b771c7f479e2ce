//! Immutable graphs with precomputed metric data.
//!
//! Vertices are dense integers `0..n-1`. Product vertices are encoded as
//! `i * |V(h)| + j`, i.e. the first factor is the major coordinate. All-pairs
//! distances are computed eagerly at construction; every downstream formula
//! (effect, weight bounds, neighborhood layers) consumes them.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Dense vertex index.
pub type Vertex = usize;

/// Distance value used for vertex pairs in different components.
pub const UNREACHABLE: u32 = u32::MAX;

/// An immutable, simple, undirected graph.
///
/// Construction validates simplicity (no loops, no parallel edges) and
/// precomputes adjacency lists, the all-pairs distance table, the diameter
/// (of the largest distance within a component) and the maximum degree.
/// Disconnected graphs are accepted; operations that need connectivity
/// check it explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<Vertex>>,
    dist: Vec<Vec<u32>>,
    diameter: u32,
    max_degree: usize,
    connected: bool,
}

impl Graph {
    /// Builds a graph from an edge list over vertices `0..n-1`.
    ///
    /// Rejects self-loops, parallel edges and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::parse(format!("self-loop at vertex {u}")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::parse(format!("parallel edge {{{}, {}}}", e.0, e.1)));
            }
            norm.push(e);
        }
        norm.sort_unstable();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let dist = all_pairs_distances(n, &adjacency);
        let mut diameter = 0;
        let mut connected = n > 0;
        for row in &dist {
            for &d in row {
                if d == UNREACHABLE {
                    connected = false;
                } else if d > diameter {
                    diameter = d;
                }
            }
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);

        Ok(Graph {
            n,
            edges: norm,
            adjacency,
            dist,
            diameter,
            max_degree,
            connected,
        })
    }

    /// Path on `n` vertices, edges `{i, i+1}`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize {
                family: "path",
                n,
                min: 1,
            });
        }
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSize {
                family: "cycle",
                n,
                min: 3,
            });
        }
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges)
    }

    /// Cartesian product. Vertex `(i, j)` of `g □ h` is encoded as
    /// `i * h.vertex_count() + j`; `(i1,j1) ~ (i2,j2)` iff one coordinate is
    /// equal and the other pair is adjacent in its factor.
    pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Self> {
        if g.n == 0 || h.n == 0 {
            return Err(Error::InvalidSize {
                family: "cartesian product factor",
                n: 0,
                min: 1,
            });
        }
        let code = |i: usize, j: usize| i * h.n + j;
        let mut edges = Vec::with_capacity(g.edges.len() * h.n + h.edges.len() * g.n);
        for i in 0..g.n {
            for &(j1, j2) in &h.edges {
                edges.push((code(i, j1), code(i, j2)));
            }
        }
        for j in 0..h.n {
            for &(i1, i2) in &g.edges {
                edges.push((code(i1, j), code(i2, j)));
            }
        }
        Graph::from_edges(g.n * h.n, &edges)
    }

    /// Grid `P_m □ P_n`.
    pub fn grid(m: usize, n: usize) -> Result<Self> {
        Graph::cartesian_product(&Graph::path(m)?, &Graph::path(n)?)
    }

    /// Torus `T_{m,n} = C_m □ C_n`.
    pub fn torus(m: usize, n: usize) -> Result<Self> {
        Graph::cartesian_product(&Graph::cycle(m)?, &Graph::cycle(n)?)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Largest finite distance (per-component diameter for disconnected input).
    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Shortest-path distance in edges; `UNREACHABLE` across components.
    pub fn distance(&self, u: Vertex, v: Vertex) -> u32 {
        self.dist[u][v]
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    /// The distance-`k` neighborhood `N_k(v)`: exactly the vertices at
    /// distance `k`. `N_0(v) = {v}`; empty beyond the diameter.
    pub fn neighborhood(&self, v: Vertex, k: u32) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        Ok((0..self.n).filter(|&u| self.dist[v][u] == k).collect())
    }

    /// Sizes of the layers `|N_0(v)|, |N_1(v)|, ..., |N_diam(v)|`.
    pub fn layer_sizes(&self, v: Vertex) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let mut sizes = vec![0usize; self.diameter as usize + 1];
        for u in 0..self.n {
            let d = self.dist[v][u];
            if d != UNREACHABLE {
                sizes[d as usize] += 1;
            }
        }
        Ok(sizes)
    }

    /// Sorted degree sequence.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<_> = self.adjacency.iter().map(Vec::len).collect();
        seq.sort_unstable();
        seq
    }

    /// Sorted multiset of all finite pairwise distances.
    pub fn distance_multiset(&self) -> Vec<u32> {
        let mut all = Vec::with_capacity(self.n * self.n);
        for row in &self.dist {
            for &d in row {
                if d != UNREACHABLE {
                    all.push(d);
                }
            }
        }
        all.sort_unstable();
        all
    }

    /// Cheap necessary test for vertex-transitivity: every vertex must see
    /// the same degree and the same sorted distance profile. Generators for
    /// cycles and tori produce genuinely transitive graphs; for anything else
    /// this is only a screen, not a proof.
    pub fn looks_vertex_transitive(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let profile = |v: Vertex| {
            let mut row: Vec<u32> = self.dist[v].clone();
            row.sort_unstable();
            (self.adjacency[v].len(), row)
        };
        let first = profile(0);
        (1..self.n).all(|v| profile(v) == first)
    }

    /// Checks that `perm` maps edges onto edges bijectively.
    pub fn is_automorphism(&self, perm: &[Vertex]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut hit = vec![false; self.n];
        for &p in perm {
            if p >= self.n || hit[p] {
                return false;
            }
            hit[p] = true;
        }
        self.edges
            .iter()
            .all(|&(u, v)| self.has_edge(perm[u], perm[v]))
    }

    /// Parses the graph text format: first line `n m`, then `m` lines `u v`.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::parse("empty graph file"))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing vertex count"))?
            .parse()
            .map_err(|_| Error::parse("bad vertex count"))?;
        let m: usize = it
            .next()
            .ok_or_else(|| Error::parse("missing edge count"))?
            .parse()
            .map_err(|_| Error::parse("bad edge count"))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .ok_or_else(|| Error::parse("missing edge endpoint"))?
                .parse()
                .map_err(|_| Error::parse(format!("bad edge line: {line}")))?;
            let v: usize = it
                .next()
                .ok_or_else(|| Error::parse(format!("bad edge line: {line}")))?
                .parse()
                .map_err(|_| Error::parse(format!("bad edge line: {line}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::parse(format!(
                "edge count mismatch: header says {m}, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    /// Writes the graph text format accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, m={})", self.n, self.edges.len())
    }
}

fn all_pairs_distances(n: usize, adjacency: &[Vec<Vertex>]) -> Vec<Vec<u32>> {
    let mut dist = vec![vec![UNREACHABLE; n]; n];
    let mut queue = VecDeque::new();
    for src in 0..n {
        let row = &mut dist[src];
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in &adjacency[u] {
                if row[w] == UNREACHABLE {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}

/// A parsed graph specifier, either a generator spec or a loaded edge list.
///
/// Generator specs keep their parameters so the solver can derive symmetry
/// generators for the families whose automorphisms are known by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Grid(usize, usize),
    Torus(usize, usize),
    File(String),
}

impl GraphSpec {
    /// Builds the graph the spec describes, reading from disk for `File`.
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Path(n) => Graph::path(*n),
            GraphSpec::Cycle(n) => Graph::cycle(*n),
            GraphSpec::Grid(m, n) => Graph::grid(*m, *n),
            GraphSpec::Torus(m, n) => Graph::torus(*m, *n),
            GraphSpec::File(path) => {
                let text = std::fs::read_to_string(path)?;
                Graph::parse(&text)
            }
        }
    }

    /// Automorphism generators known for the generated families, as full
    /// permutation lists (not just group generators): reversal for paths,
    /// the dihedral group for cycles, reflections (plus transpose on square
    /// shapes) for grids, and translations composed with reflections for
    /// tori. `File` graphs get only the identity.
    pub fn automorphisms(&self) -> Vec<Vec<Vertex>> {
        match *self {
            GraphSpec::Path(n) => {
                let id: Vec<_> = (0..n).collect();
                let rev: Vec<_> = (0..n).rev().collect();
                vec![id, rev]
            }
            GraphSpec::Cycle(n) => {
                let mut perms = Vec::with_capacity(2 * n);
                for shift in 0..n {
                    perms.push((0..n).map(|i| (i + shift) % n).collect());
                    perms.push((0..n).map(|i| (n + shift - i % n) % n).collect());
                }
                perms
            }
            GraphSpec::Grid(m, n) => grid_like_perms(m, n, false),
            GraphSpec::Torus(m, n) => grid_like_perms(m, n, true),
            GraphSpec::File(_) => Vec::new(),
        }
    }
}

type CoordMap = Box<dyn Fn(usize, usize) -> (usize, usize)>;

fn grid_like_perms(m: usize, n: usize, wrap: bool) -> Vec<Vec<Vertex>> {
    let code = |i: usize, j: usize| i * n + j;
    let coord_maps: Vec<CoordMap> = vec![
        Box::new(|i, j| (i, j)),
        Box::new(move |i, j| (m - 1 - i, j)),
        Box::new(move |i, j| (i, n - 1 - j)),
        Box::new(move |i, j| (m - 1 - i, n - 1 - j)),
    ];
    let shifts: Vec<(usize, usize)> = if wrap {
        (0..m).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
    } else {
        vec![(0, 0)]
    };
    let mut perms = Vec::new();
    for map in &coord_maps {
        for &(a, b) in &shifts {
            let mut perm = vec![0; m * n];
            for i in 0..m {
                for j in 0..n {
                    let (pi, pj) = map(i, j);
                    let (pi, pj) = if wrap {
                        ((pi + a) % m, (pj + b) % n)
                    } else {
                        (pi, pj)
                    };
                    perm[code(i, j)] = code(pi, pj);
                }
            }
            perms.push(perm);
        }
    }
    if m == n {
        // transposition is an automorphism exactly on square shapes
        let base: Vec<Vec<Vertex>> = perms.clone();
        for perm in base {
            let mut t = vec![0; m * n];
            for i in 0..m {
                for j in 0..n {
                    t[code(i, j)] = perm[code(j, i)];
                }
            }
            perms.push(t);
        }
    }
    perms
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// Accepts `path:n`, `cycle:n`, `grid:m,n`, `torus:m,n`, or a file path.
    fn from_str(s: &str) -> Result<Self> {
        let parse_one = |arg: &str, family: &str| -> Result<usize> {
            arg.parse()
                .map_err(|_| Error::parse(format!("bad {family} size: {arg}")))
        };
        let parse_two = |arg: &str, family: &str| -> Result<(usize, usize)> {
            let (a, b) = arg
                .split_once(',')
                .ok_or_else(|| Error::parse(format!("{family} spec needs m,n")))?;
            Ok((parse_one(a.trim(), family)?, parse_one(b.trim(), family)?))
        };
        if let Some((kind, arg)) = s.split_once(':') {
            match kind {
                "path" => return Ok(GraphSpec::Path(parse_one(arg, "path")?)),
                "cycle" => return Ok(GraphSpec::Cycle(parse_one(arg, "cycle")?)),
                "grid" => {
                    let (m, n) = parse_two(arg, "grid")?;
                    return Ok(GraphSpec::Grid(m, n));
                }
                "torus" => {
                    let (m, n) = parse_two(arg, "torus")?;
                    return Ok(GraphSpec::Torus(m, n));
                }
                _ => {}
            }
        }
        Ok(GraphSpec::File(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_degenerate_and_small() {
        let g = Graph::path(1).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.diameter(), 0);

        let g = Graph::path(5).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.diameter(), 4);

        let g = Graph::path(4).unwrap();
        assert_eq!(g.max_degree(), 2);

        assert!(matches!(Graph::path(0), Err(Error::InvalidSize { .. })));
    }

    #[test]
    fn cycle_small() {
        let g = Graph::cycle(3).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.diameter(), 1);

        let g = Graph::cycle(6).unwrap();
        assert_eq!(g.diameter(), 3);

        let g = Graph::cycle(4).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 2));

        assert!(matches!(Graph::cycle(2), Err(Error::InvalidSize { .. })));
    }

    #[test]
    fn product_p2_p2_is_c4() {
        let p2 = Graph::path(2).unwrap();
        let g = Graph::cartesian_product(&p2, &p2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 4);
        assert!((0..4).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn product_p3_p3_counts() {
        let p3 = Graph::path(3).unwrap();
        let g = Graph::cartesian_product(&p3, &p3).unwrap();
        assert_eq!(g.vertex_count(), 9);
        // direct count by the edge rule: 2 * (edges_in_path * 3)
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.max_degree(), 4);
    }

    #[test]
    fn product_c5_c5_torus() {
        let g = Graph::torus(5, 5).unwrap();
        assert_eq!(g.vertex_count(), 25);
        assert_eq!(g.edge_count(), 50);
        assert_eq!(g.max_degree(), 4);
        assert!(g.looks_vertex_transitive());
    }

    #[test]
    fn product_commutes_up_to_relabel() {
        let p3 = Graph::path(3).unwrap();
        let c4 = Graph::cycle(4).unwrap();
        let a = Graph::cartesian_product(&p3, &c4).unwrap();
        let b = Graph::cartesian_product(&c4, &p3).unwrap();
        assert_eq!(a.degree_sequence(), b.degree_sequence());
        assert_eq!(a.distance_multiset(), b.distance_multiset());
    }

    #[test]
    fn neighborhood_layers() {
        let g = Graph::path(5).unwrap();
        assert_eq!(g.neighborhood(2, 2).unwrap(), vec![0, 4]);
        assert_eq!(g.neighborhood(2, 0).unwrap(), vec![2]);
        assert!(g.neighborhood(2, 5).unwrap().is_empty());

        let t = Graph::torus(5, 5).unwrap();
        for v in 0..25 {
            assert_eq!(t.neighborhood(v, 2).unwrap().len(), 8);
        }

        assert!(matches!(
            g.neighborhood(9, 1),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn torus_layer_bound_claim() {
        // |N_1(v)| = 4 and |N_i(v)| <= 4i for tori with both sides >= 5
        for (m, n) in [(5, 5), (5, 7), (6, 6), (7, 7)] {
            let t = Graph::torus(m, n).unwrap();
            for v in 0..t.vertex_count() {
                let sizes = t.layer_sizes(v).unwrap();
                assert_eq!(sizes[1], 4);
                for (i, &s) in sizes.iter().enumerate().skip(1) {
                    assert!(s <= 4 * i, "|N_{i}(v)| = {s} > {}", 4 * i);
                }
            }
        }
    }

    #[test]
    fn bfs_layers_match_neighborhood() {
        let g = Graph::torus(4, 5).unwrap();
        for v in 0..g.vertex_count() {
            for k in 0..=g.diameter() {
                for &u in &g.neighborhood(v, k).unwrap() {
                    assert_eq!(g.distance(v, u), k);
                }
            }
        }
    }

    #[test]
    fn dist_table_is_metric() {
        let g = Graph::torus(3, 4).unwrap();
        let n = g.vertex_count();
        for u in 0..n {
            assert_eq!(g.distance(u, u), 0);
            for v in 0..n {
                assert_eq!(g.distance(u, v), g.distance(v, u));
                for w in 0..n {
                    assert!(g.distance(u, w) <= g.distance(u, v) + g.distance(v, w));
                }
            }
        }
    }

    #[test]
    fn rejects_loops_and_parallel_edges() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn disconnected_detected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.distance(0, 2), UNREACHABLE);
        assert_eq!(g.diameter(), 1);
    }

    #[test]
    fn text_roundtrip() {
        let g = Graph::torus(3, 3).unwrap();
        let text = g.to_text();
        let h = Graph::parse(&text).unwrap();
        assert_eq!(g, h);

        let with_comments = format!("# torus\n\n{text}");
        assert_eq!(Graph::parse(&with_comments).unwrap(), g);
    }

    #[test]
    fn spec_strings() {
        assert_eq!("path:5".parse::<GraphSpec>().unwrap(), GraphSpec::Path(5));
        assert_eq!("cycle:9".parse::<GraphSpec>().unwrap(), GraphSpec::Cycle(9));
        assert_eq!(
            "grid:3,4".parse::<GraphSpec>().unwrap(),
            GraphSpec::Grid(3, 4)
        );
        assert_eq!(
            "torus:5, 5".parse::<GraphSpec>().unwrap(),
            GraphSpec::Torus(5, 5)
        );
        assert!(matches!(
            "torus:5".parse::<GraphSpec>(),
            Err(Error::Parse(_))
        ));
        assert_eq!(
            "some/file.txt".parse::<GraphSpec>().unwrap(),
            GraphSpec::File("some/file.txt".into())
        );
    }

    #[test]
    fn declared_automorphisms_are_automorphisms() {
        for spec in [
            GraphSpec::Path(6),
            GraphSpec::Cycle(7),
            GraphSpec::Grid(3, 4),
            GraphSpec::Grid(3, 3),
            GraphSpec::Torus(4, 5),
            GraphSpec::Torus(4, 4),
        ] {
            let g = spec.build().unwrap();
            let perms = spec.automorphisms();
            assert!(!perms.is_empty());
            for p in &perms {
                assert!(g.is_automorphism(p), "{spec:?} perm {p:?}");
            }
        }
        // sanity: torus group size m*n*4 (non-square), *2 when square
        assert_eq!(GraphSpec::Torus(4, 5).automorphisms().len(), 80);
        assert_eq!(GraphSpec::Torus(4, 4).automorphisms().len(), 128);
    }
}
