//! Finite simple graphs, multigraphs, rooted trees and the generators used by
//! the experiments. Vertices are dense ids `0..n`.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{LayersError, Result};

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates and builds a simple graph. Loops and repeated edges are errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(LayersError::EndpointOutOfRange { endpoint: w, n });
                }
            }
            if u == v {
                return Err(LayersError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(LayersError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Graph {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Caller guarantees simplicity and symmetry; lists are sorted here.
    pub(crate) fn from_adjacency_unchecked(mut adj: Vec<Vec<usize>>) -> Graph {
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Graph { adj }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Checks simplicity and symmetry. Used as a post-condition on every generator.
    pub fn check_invariants(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, list)| {
            list.windows(2).all(|w| w[0] < w[1])
                && list.iter().all(|&v| v != u && v < self.n() && self.has_edge(v, u))
        })
    }

    /// Subgraph induced by the vertices with `keep[v]`, relabelled in
    /// ascending id order. Returns the graph and the new-to-old id map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let old: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| keep[u])
                    .map(|&u| new_id[u])
                    .collect()
            })
            .collect();
        (Graph { adj }, old)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::from_edges(n, &edges).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Graph {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Graph { adj }
    }

    /// Star `K_{1,m}` with the centre at vertex 0.
    pub fn star(m: usize) -> Graph {
        let edges: Vec<_> = (1..=m).map(|i| (0, i)).collect();
        Graph::from_edges(m + 1, &edges).expect("star is simple")
    }

    /// Parses "u v" lines (0-based). `#` starts a comment. The vertex count is
    /// one more than the largest id unless a `# n = <count>` line is present.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut n_hint = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(c) = line.strip_prefix('#') {
                if let Some((k, v)) = c.split_once('=') {
                    if k.trim() == "n" {
                        n_hint = Some(v.trim().parse::<usize>().map_err(|e| {
                            LayersError::Parse(format!("line {}: {e}", lineno + 1))
                        })?);
                    }
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(LayersError::Parse(format!(
                        "line {}: expected 'u v', got '{line}'",
                        lineno + 1
                    )))
                }
            }
        }
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Graph::from_edges(n_hint.unwrap_or(n).max(n), &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# n = {}\n", self.n());
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

/// Multigraph from the configuration model; loops and parallel edges allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    /// Degrees with loops counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn loop_count(&self) -> usize {
        self.edges.iter().filter(|(u, v)| u == v).count()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::with_capacity(self.edges.len());
        self.edges
            .iter()
            .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn to_simple(&self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }
}

/// Non-negative degree sequence with even sum, stored in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(mut degrees: Vec<usize>) -> Result<DegreeSequence> {
        if degrees.iter().sum::<usize>() % 2 == 1 {
            return Err(LayersError::OddDegreeSum);
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(DegreeSequence(degrees))
    }

    pub fn regular(n: usize, d: usize) -> Result<DegreeSequence> {
        DegreeSequence::new(vec![d; n])
    }

    /// Comma-separated integers, e.g. `3,3,2,2`.
    pub fn parse(text: &str) -> Result<DegreeSequence> {
        let degrees = text
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| LayersError::Parse(format!("'{t}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        DegreeSequence::new(degrees)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn half_edges(&self) -> Vec<usize> {
        let mut h = Vec::with_capacity(self.0.iter().sum());
        for (v, &d) in self.0.iter().enumerate() {
            h.extend(std::iter::repeat_n(v, d));
        }
        h
    }
}

/// Uniform perfect matching of half-edges.
pub fn configuration_multigraph<R: Rng + ?Sized>(seq: &DegreeSequence, rng: &mut R) -> MultiGraph {
    let mut h = seq.half_edges();
    h.shuffle(rng);
    let edges = h.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    MultiGraph { n: seq.len(), edges }
}

/// Rejection sampling: draw whole matchings until one is simple. The pairing
/// is exposed one half-edge at a time (the lowest unmatched half-edge picks a
/// uniform partner), which is the same uniform matching and lets a draw be
/// abandoned as soon as a loop or repeated edge appears.
pub fn simple_graph_from_sequence<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Graph> {
    simple_graph_with_attempts(seq, rng, max_attempts).map(|(g, _)| g)
}

/// As [`simple_graph_from_sequence`], also returning the number of attempts used.
pub fn simple_graph_with_attempts<R: Rng + ?Sized>(
    seq: &DegreeSequence,
    rng: &mut R,
    max_attempts: usize,
) -> Result<(Graph, usize)> {
    if max_attempts == 0 {
        return Err(LayersError::InvalidConfig("max_attempts must be at least 1".into()));
    }
    let base = seq.half_edges();
    let n = seq.len();
    let mut h = base.clone();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for attempt in 1..=max_attempts {
        h.copy_from_slice(&base);
        for list in adj.iter_mut() {
            list.clear();
        }
        let mut ok = true;
        let mut i = 0;
        while i < h.len() {
            let j = rng.random_range(i + 1..h.len());
            h.swap(i + 1, j);
            let (u, v) = (h[i], h[i + 1]);
            if u == v || adj[u].contains(&v) {
                ok = false;
                break;
            }
            adj[u].push(v);
            adj[v].push(u);
            i += 2;
        }
        if ok {
            return Ok((Graph::from_adjacency_unchecked(adj), attempt));
        }
    }
    Err(LayersError::AttemptsExhausted(max_attempts))
}

/// `G(n, p)` by geometric skipping over the pairs in lexicographic order.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut adj = vec![Vec::new(); n];
    if p <= 0.0 || n < 2 {
        return Graph { adj };
    }
    if p >= 1.0 {
        return Graph::complete(n);
    }
    let lq = (1.0 - p).ln();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / lq).floor() as i64;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            let u = w as usize;
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    Graph::from_adjacency_unchecked(adj)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub label: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }
}

pub fn connected_components(g: &Graph) -> Components {
    components_of_open(g, &vec![true; g.n()])
}

/// Components of the subgraph induced by `open`. Closed vertices get label
/// `usize::MAX` and do not appear in `sizes`.
pub fn components_of_open(g: &Graph, open: &[bool]) -> Components {
    let mut label = vec![usize::MAX; g.n()];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if !open[s] || label[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        label[s] = c;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in g.neighbors(u) {
                if open[w] && label[w] == usize::MAX {
                    label[w] = c;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    Components { label, sizes }
}

/// Shortest-path distances; `None` means unreachable.
pub fn bfs_distance(g: &Graph, source: usize) -> Vec<Option<usize>> {
    bfs_limited(g, source, usize::MAX)
}

fn bfs_limited(g: &Graph, source: usize, radius: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if du == radius {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices within distance `r` of `v`, in BFS order.
pub fn ball(g: &Graph, v: usize, r: usize) -> Vec<usize> {
    let mut out = vec![v];
    let mut seen = HashSet::from([v]);
    let mut frontier = vec![v];
    for _ in 0..r {
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in g.neighbors(u) {
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        out.extend_from_slice(&next);
        frontier = next;
    }
    out
}

/// True iff the subgraph induced on the radius-`r` ball is acyclic. The ball
/// is connected, so this is `edges == vertices - 1`.
pub fn ball_is_tree(g: &Graph, v: usize, r: usize) -> bool {
    let members = ball(g, v, r);
    let inside: HashSet<usize> = members.iter().copied().collect();
    let twice_edges: usize = members
        .iter()
        .map(|&u| g.neighbors(u).iter().filter(|w| inside.contains(w)).count())
        .sum();
    twice_edges / 2 + 1 == members.len()
}

/// Greedy scan in ascending id order: keep `v` if its ball is a tree and no
/// kept vertex lies within distance `min_dist - 1`.
pub fn distant_independent_set(g: &Graph, min_dist: usize, ball_radius: usize) -> Vec<usize> {
    assert!(min_dist >= 1);
    let mut blocked = vec![false; g.n()];
    let mut out = Vec::new();
    for v in 0..g.n() {
        if blocked[v] || !ball_is_tree(g, v, ball_radius) {
            continue;
        }
        out.push(v);
        for u in ball(g, v, min_dist - 1) {
            blocked[u] = true;
        }
    }
    out
}

/// Degree assignment for tree generators.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeProfile {
    /// Every vertex has this degree (the root included).
    Constant(usize),
    /// Degree by level; the last entry repeats.
    Levels(Vec<usize>),
    /// Root degree 2, degree 3 elsewhere, except that every vertex of level
    /// `a_n = 2^(2^(2^n))` (n >= 1) has degree `|level| + 1`.
    Counterexample,
    /// Each vertex draws its degree uniformly from the list (not spherically symmetric).
    RandomChoice(Vec<usize>),
}

impl DegreeProfile {
    /// `3`, `3,4,3` (per level), `counterexample`, `random:3,4,5`.
    pub fn parse(spec: &str) -> Result<DegreeProfile> {
        let spec = spec.trim();
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| LayersError::Parse(format!("'{t}': {e}"))))
                .collect()
        };
        if spec == "counterexample" {
            return Ok(DegreeProfile::Counterexample);
        }
        if let Some(rest) = spec.strip_prefix("random:") {
            return Ok(DegreeProfile::RandomChoice(list(rest)?));
        }
        let l = list(spec)?;
        Ok(if l.len() == 1 { DegreeProfile::Constant(l[0]) } else { DegreeProfile::Levels(l) })
    }

    /// Degree of a level-`level` vertex when that level holds `level_size`
    /// vertices. `None` for the random profile.
    pub fn degree_of_level(&self, level: usize, level_size: u128) -> Option<u128> {
        match self {
            DegreeProfile::Constant(d) => Some(*d as u128),
            DegreeProfile::Levels(l) => Some(*l.get(level).unwrap_or(l.last()?) as u128),
            DegreeProfile::Counterexample => Some(if level == 0 {
                2
            } else if is_counterexample_level(level) {
                level_size + 1
            } else {
                3
            }),
            DegreeProfile::RandomChoice(_) => None,
        }
    }
}

/// Levels `2^(2^(2^n))` for n >= 1, i.e. 16, 65536, then beyond u64.
pub fn is_counterexample_level(level: usize) -> bool {
    level == 16 || level == 65536
}

/// Rooted tree truncated at `depth`. `nominal_degree` is the degree the
/// infinite tree has; it differs from the stored graph degree only at the
/// truncation boundary.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub graph: Graph,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub level: Vec<usize>,
    pub nominal_degree: Vec<usize>,
    pub depth: usize,
}

impl RootedTree {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nominal_degree[v]
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&u| self.parent[u] == Some(v))
    }

    /// Root path `o = γ_1, …, v`.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut p = vec![v];
        let mut cur = v;
        while let Some(q) = self.parent[cur] {
            p.push(q);
            cur = q;
        }
        p.reverse();
        p
    }

    pub fn check_invariants(&self) -> bool {
        let n = self.n();
        self.graph.check_invariants()
            && self.graph.edge_count() + 1 == n
            && (0..n).all(|v| match self.parent[v] {
                None => v == self.root && self.level[v] == 0,
                Some(p) => self.graph.has_edge(v, p) && self.level[p] + 1 == self.level[v],
            })
    }
}

/// Vertex cap for materialised trees.
pub const MAX_TREE_VERTICES: usize = 5_000_000;

/// BFS construction: a vertex of degree `deg` gets `deg` children at the root
/// and `deg - 1` elsewhere, down to level `depth`. `degree_of(level, level_size)`
/// is called once per vertex in BFS order.
pub fn generate_tree<F: FnMut(usize, u128) -> usize>(depth: usize, mut degree_of: F) -> Result<RootedTree> {
    if depth == 0 {
        return Err(LayersError::DepthZero);
    }
    let mut parent = vec![None];
    let mut level = vec![0];
    let mut nominal = vec![degree_of(0, 1)];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = vec![0usize];
    for r in 0..depth {
        let child_count: usize = frontier
            .iter()
            .map(|&v| if r == 0 { nominal[v] } else { nominal[v].saturating_sub(1) })
            .sum();
        if parent.len() + child_count > MAX_TREE_VERTICES {
            return Err(LayersError::BadConfig(format!(
                "tree exceeds {MAX_TREE_VERTICES} vertices at level {}",
                r + 1
            )));
        }
        let mut next = Vec::with_capacity(child_count);
        for &v in &frontier {
            let k = if r == 0 { nominal[v] } else { nominal[v].saturating_sub(1) };
            for _ in 0..k {
                let c = parent.len();
                parent.push(Some(v));
                level.push(r + 1);
                adj.push(vec![v]);
                adj[v].push(c);
                next.push(c);
            }
        }
        let size = next.len() as u128;
        for _ in &next {
            nominal.push(degree_of(r + 1, size));
        }
        frontier = next;
    }
    // Level-`depth` leaves keep their nominal degree; every other vertex is exact.
    Ok(RootedTree {
        graph: Graph::from_adjacency_unchecked(adj),
        root: 0,
        parent,
        level,
        nominal_degree: nominal,
        depth,
    })
}

/// All vertices of a level share one degree. Fails for the random profile.
pub fn generate_spherically_symmetric_tree(profile: &DegreeProfile, depth: usize) -> Result<RootedTree> {
    if matches!(profile, DegreeProfile::RandomChoice(_)) {
        return Err(LayersError::BadConfig("random profile is not spherically symmetric".into()));
    }
    let mut bad = None;
    let t = generate_tree(depth, |r, size| {
        let d = profile.degree_of_level(r, size).unwrap_or(0);
        if d < 1 && r < depth {
            bad = Some(r);
        }
        usize::try_from(d).unwrap_or(usize::MAX)
    })?;
    if let Some(r) = bad {
        return Err(LayersError::BadConfig(format!("degree 0 at level {r}")));
    }
    Ok(t)
}

/// Tree for any profile; the random profile draws per-vertex degrees from `rng`.
pub fn generate_profile_tree<R: Rng + ?Sized>(
    profile: &DegreeProfile,
    depth: usize,
    rng: &mut R,
) -> Result<RootedTree> {
    match profile {
        DegreeProfile::RandomChoice(choices) => {
            if choices.is_empty() || choices.contains(&0) {
                return Err(LayersError::BadConfig("random profile needs positive degrees".into()));
            }
            generate_tree(depth, |_, _| choices[rng.random_range(0..choices.len())])
        }
        _ => generate_spherically_symmetric_tree(profile, depth),
    }
}

/// Point of `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn origin(d: usize) -> LatticePoint {
        LatticePoint(vec![0; d])
    }

    pub fn unit(d: usize, j: usize) -> LatticePoint {
        let mut p = LatticePoint::origin(d);
        p.0[j] = 1;
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn l1_distance(&self, other: &LatticePoint) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum()
    }

    /// `self + s·e_j`.
    pub fn shifted(&self, j: usize, s: i64) -> LatticePoint {
        let mut p = self.clone();
        p.0[j] += s;
        p
    }

    /// The `2d` lattice neighbours, ordered `+e_0, -e_0, +e_1, …`.
    pub fn neighbors(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        (0..self.dim()).flat_map(move |j| [self.shifted(j, 1), self.shifted(j, -1)])
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn build_graph_examples() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert_eq!(Graph::from_edges(1, &[(0, 0)]), Err(LayersError::SelfLoop(0)));
        assert_eq!(Graph::from_edges(2, &[(0, 1), (0, 1)]), Err(LayersError::DuplicateEdge(0, 1)));
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(LayersError::EndpointOutOfRange { endpoint: 2, n: 2 })
        );
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5);
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        let iso = Graph::parse_edge_list("# n = 4\n0 1\n").unwrap();
        assert_eq!(iso.n(), 4);
        assert!(Graph::parse_edge_list("0 x\n").is_err());
    }

    #[test]
    fn spherically_symmetric_counts() {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Constant(3), 2).unwrap();
        assert_eq!(t.n(), 10);
        assert!(t.check_invariants());
        let p = generate_spherically_symmetric_tree(&DegreeProfile::Constant(2), 5).unwrap();
        assert_eq!(p.n(), 11);
        assert_eq!(p.graph.degree(0), 2);
        assert!(matches!(
            generate_spherically_symmetric_tree(&DegreeProfile::Constant(3), 0),
            Err(LayersError::DepthZero)
        ));
    }

    #[test]
    fn counterexample_tree_levels() {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Counterexample, 16).unwrap();
        assert_eq!(t.degree(0), 2);
        let lvl16: Vec<_> = (0..t.n()).filter(|&v| t.level[v] == 16).collect();
        assert_eq!(lvl16.len(), 1 << 16);
        assert!(lvl16.iter().all(|&v| t.degree(v) == (1 << 16) + 1));
        assert!((0..t.n()).filter(|&v| (1..16).contains(&t.level[v])).all(|v| t.degree(v) == 3));
    }

    #[test]
    fn configuration_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = configuration_multigraph(&DegreeSequence::new(vec![1, 1]).unwrap(), &mut rng);
        assert_eq!(m.edges.len(), 1);
        let (u, v) = m.edges[0];
        assert_eq!((u.min(v), u.max(v)), (0, 1));
        let l = configuration_multigraph(&DegreeSequence::new(vec![2]).unwrap(), &mut rng);
        assert_eq!(l.edges, vec![(0, 0)]);
        assert_eq!(l.degrees(), vec![2]);
    }

    #[test]
    fn k4_is_unique_cubic_on_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = simple_graph_from_sequence(&DegreeSequence::regular(4, 3).unwrap(), &mut rng, 1000).unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!(DegreeSequence::new(vec![1, 1, 1]), Err(LayersError::OddDegreeSum));
    }

    #[test]
    fn er_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(erdos_renyi(6, 0.0, &mut rng).edge_count(), 0);
        assert_eq!(erdos_renyi(6, 1.0, &mut rng), Graph::complete(6));
        let g = erdos_renyi(50, 0.3, &mut rng);
        assert!(g.check_invariants());
    }

    #[test]
    fn components_and_distances() {
        assert_eq!(connected_components(&Graph::path(3)).sizes, vec![3]);
        assert_eq!(connected_components(&Graph::empty(5)).sizes, vec![1; 5]);
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(connected_components(&two).sizes, vec![3, 3]);
        assert_eq!(bfs_distance(&Graph::path(3), 0), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(bfs_distance(&Graph::empty(2), 0), vec![Some(0), None]);
        assert_eq!(bfs_distance(&Graph::complete(4), 2), vec![Some(1), Some(1), Some(0), Some(1)]);
    }

    #[test]
    fn ball_tree_examples() {
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Constant(3), 4).unwrap();
        assert!((0..t.n()).all(|v| ball_is_tree(&t.graph, v, 3)));
        assert!(!ball_is_tree(&Graph::cycle(3), 0, 1));
        // triangles {0,1,2} and {8,9,10}; path 2-3-4-5-6-7-8 … middle vertex 5
        let mut e = vec![(0, 1), (1, 2), (2, 0), (8, 9), (9, 10), (10, 8)];
        e.extend((2..8).map(|i| (i, i + 1)));
        let g = Graph::from_edges(11, &e).unwrap();
        assert!(ball_is_tree(&g, 5, 2));
        assert!(!ball_is_tree(&g, 5, 4));
    }

    #[test]
    fn distant_set_examples() {
        let c = Graph::cycle(100);
        let s = distant_independent_set(&c, 15, 3);
        assert_eq!(s, vec![0, 15, 30, 45, 60, 75]);
        assert!(distant_independent_set(&Graph::complete(4), 15, 1).is_empty());
        let t = generate_spherically_symmetric_tree(&DegreeProfile::Constant(3), 3).unwrap();
        assert_eq!(distant_independent_set(&t.graph, 1, 2).len(), t.n());
    }

    #[test]
    fn lattice_point_ops() {
        let p = LatticePoint(vec![1, -2, 0]);
        assert_eq!(p.l1_norm(), 3);
        assert_eq!(p.neighbors().count(), 6);
        assert!(p.neighbors().all(|q| q.l1_distance(&p) == 1));
    }
}
