//! Good and nice root paths on rooted trees, their exact block
//! probabilities, the weighted sum `Z_k`, and the growth condition.
//!
//! A root path `γ_1 = o, …, γ_{2k}` is cut into blocks `{γ_{2i-1}, γ_{2i}}`.
//! `K_j` counts younger vertices among the neighbours of `γ_j` off the path;
//! `M_j` adds the block partner. Interior blocks need `M ≤ 1` on both
//! vertices. The first block needs `K_1 ≤ 1, K_2 = 0` and the last
//! `K_{2k} ≤ 1, K_{2k-1} = 0`; these are the thresholds whose probability is
//! `2/(d_o (d_2 - 1))` and that keep a good path inside `T_3`.

use num_traits::{One, Zero};

use crate::error::{LayersError, Result};
use crate::graph::{bfs_distance, DegreeProfile, RootedTree};
use crate::layers::{compute_layers, AgeAssignment};
use crate::oracle::{permutation_oracle, rat, rat_to_f64, CorePeripheryOracle, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePath {
    pub vertices: Vec<usize>,
}

impl TreePath {
    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn blocks(&self) -> usize {
        self.vertices.len() / 2
    }

    /// Neighbours of `γ_i` (0-based `i`) off the path.
    pub fn outside_neighbors<'a>(&'a self, t: &'a RootedTree, i: usize) -> impl Iterator<Item = usize> + 'a {
        let v = self.vertices[i];
        t.graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |u| !self.vertices.contains(u))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockPosition {
    First,
    Interior,
    Last,
}

/// Block event from the off-path younger counts `ka`, `kb` of the two block
/// vertices and their relative order.
pub fn block_holds(pos: BlockPosition, ka: usize, kb: usize, a_younger_than_b: bool) -> bool {
    match pos {
        BlockPosition::Interior => {
            ka + usize::from(!a_younger_than_b) <= 1 && kb + usize::from(a_younger_than_b) <= 1
        }
        BlockPosition::First => ka <= 1 && kb == 0,
        BlockPosition::Last => kb <= 1 && ka == 0,
    }
}

fn block_position(b: usize, k: usize) -> BlockPosition {
    if b == 0 {
        BlockPosition::First
    } else if b + 1 == k {
        BlockPosition::Last
    } else {
        BlockPosition::Interior
    }
}

/// All simple paths with `length` edges from the root, in DFS order.
pub fn enumerate_root_paths(t: &RootedTree, length: usize) -> Result<Vec<TreePath>> {
    if length == 0 {
        return Err(LayersError::BadConfig("path length must be at least 1".into()));
    }
    if length > t.depth {
        return Err(LayersError::BadConfig(format!(
            "tree depth {} is too shallow for length {length}",
            t.depth
        )));
    }
    let mut out = Vec::new();
    let mut stack = vec![t.root];
    fn rec(t: &RootedTree, len: usize, stack: &mut Vec<usize>, out: &mut Vec<TreePath>) {
        if stack.len() == len + 1 {
            out.push(TreePath { vertices: stack.clone() });
            return;
        }
        let v = *stack.last().unwrap();
        for c in t.children(v).collect::<Vec<_>>() {
            stack.push(c);
            rec(t, len, stack, out);
            stack.pop();
        }
    }
    rec(t, length, &mut stack, &mut out);
    Ok(out)
}

/// `w(γ) = (1/d_o) Π_{interior} 1/(d - 1)`.
pub fn path_weight(t: &RootedTree, g: &TreePath) -> Rational {
    let n = g.vertices.len();
    let mut w = rat(1, t.degree(g.vertices[0]) as i64);
    for &v in &g.vertices[1..n - 1] {
        w /= rat(t.degree(v) as i64 - 1, 1);
    }
    w
}

/// Closed-form block probability. For the first block `x = d_o, y = d_{γ_2}`;
/// for the last `x = d_{γ_{2k-1}}, y = d_{γ_{2k}}`.
pub fn marginal_ai(x: usize, y: usize, pos: BlockPosition) -> Result<Rational> {
    if x < 2 || y < 2 {
        return Err(LayersError::DegreeTooSmall(format!("block degrees ({x}, {y}) need to be >= 2")));
    }
    let (x, y) = (x as i64, y as i64);
    Ok(match pos {
        BlockPosition::Interior => {
            rat(1, (x - 1) * (y - 1))
                + rat(1, (x + y - 2) * (x + y - 3)) * (rat(x - 2, y - 1) + rat(y - 2, x - 1))
        }
        BlockPosition::First => rat(2, x * (y - 1)),
        BlockPosition::Last => rat(2, (x - 1) * y),
    })
}

/// Exact block probability by enumerating orders of the block vertices and
/// their off-path neighbours.
pub fn marginal_ai_oracle(x: usize, y: usize, pos: BlockPosition) -> Result<Rational> {
    if x < 2 || y < 2 {
        return Err(LayersError::DegreeTooSmall(format!("block degrees ({x}, {y}) need to be >= 2")));
    }
    // vertex 0 = a, 1 = b, then the off-path neighbours of a, then of b
    let (na, nb) = match pos {
        BlockPosition::Interior => (x - 2, y - 2),
        BlockPosition::First => (x - 1, y - 2),
        BlockPosition::Last => (x - 2, y - 1),
    };
    permutation_oracle(2 + na + nb, |r| {
        let ka = (2..2 + na).filter(|&u| r[u] < r[0]).count();
        let kb = (2 + na..2 + na + nb).filter(|&u| r[u] < r[1]).count();
        block_holds(pos, ka, kb, r[0] < r[1])
    })
}

pub fn claim_f(x: usize, y: usize) -> Rational {
    let (x, y) = (x as i64, y as i64);
    rat((x - 1) * (x - 2) + (y - 1) * (y - 2), (x + y - 2) * (x + y - 3))
}

/// Exhaustive scan of `3 ≤ x, y ≤ bound`; ties keep the first in row-major order.
pub fn minimize_claim_f(bound: usize) -> ((usize, usize), Rational) {
    let mut best = ((3, 3), claim_f(3, 3));
    for x in 3..=bound {
        for y in 3..=bound {
            let f = claim_f(x, y);
            if f < best.1 {
                best = ((x, y), f);
            }
        }
    }
    best
}

fn check_path_shape(t: &RootedTree, g: &TreePath) -> Result<usize> {
    let n = g.vertices.len();
    if n < 4 || n % 2 == 1 {
        return Err(LayersError::BadConfig(format!("good paths need 2k >= 4 vertices, got {n}")));
    }
    if g.vertices[0] != t.root || g.vertices.windows(2).any(|w| t.parent[w[1]] != Some(w[0])) {
        return Err(LayersError::BadConfig("not a descending root path".into()));
    }
    Ok(n / 2)
}

/// `Pr[A_γ]` as the product of the block marginals.
pub fn prob_agamma(t: &RootedTree, g: &TreePath) -> Result<Rational> {
    let k = check_path_shape(t, g)?;
    let mut p = Rational::one();
    for b in 0..k {
        let (x, y) = (t.degree(g.vertices[2 * b]), t.degree(g.vertices[2 * b + 1]));
        p *= marginal_ai(x, y, block_position(b, k))?;
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodEventOutcome {
    pub blocks: Vec<bool>,
    pub good: bool,
    /// `w(γ) 1_{A_γ} / Pr[A_γ]`.
    pub y: Rational,
}

pub fn check_good(t: &RootedTree, g: &TreePath, ages: &AgeAssignment) -> Result<GoodEventOutcome> {
    let k = check_path_shape(t, g)?;
    if g.vertices.iter().any(|&v| t.level[v] >= t.depth) {
        return Err(LayersError::BadConfig("path touches the truncation boundary".into()));
    }
    let blocks: Vec<bool> = (0..k)
        .map(|b| {
            let (ia, ib) = (2 * b, 2 * b + 1);
            let (a, bv) = (g.vertices[ia], g.vertices[ib]);
            let ka = g.outside_neighbors(t, ia).filter(|&u| ages.younger(u, a)).count();
            let kb = g.outside_neighbors(t, ib).filter(|&u| ages.younger(u, bv)).count();
            block_holds(block_position(b, k), ka, kb, ages.younger(a, bv))
        })
        .collect();
    let good = blocks.iter().all(|&x| x);
    let y = if good { path_weight(t, g) / prob_agamma(t, g)? } else { Rational::zero() };
    Ok(GoodEventOutcome { blocks, good, y })
}

/// Core/periphery description of the ages that `A_γ` depends on:
/// the path is the core and each off-path neighbour a peripheral.
fn path_oracle(t: &RootedTree, g: &TreePath) -> CorePeripheryOracle {
    let mut peripherals = Vec::new();
    for i in 0..g.vertices.len() {
        for _ in g.outside_neighbors(t, i) {
            peripherals.push(vec![i]);
        }
    }
    CorePeripheryOracle { core: g.vertices.len(), peripherals, cap: 2 }
}

/// `Pr[A_γ]` from the definition, by exact order enumeration.
pub fn prob_agamma_oracle(t: &RootedTree, g: &TreePath) -> Result<Rational> {
    let k = check_path_shape(t, g)?;
    path_oracle(t, g).probability(|r, c| {
        (0..k).all(|b| {
            let (ia, ib) = (2 * b, 2 * b + 1);
            block_holds(block_position(b, k), c[ia] as usize, c[ib] as usize, r[ia] < r[ib])
        })
    })
}

/// Length of the common root prefix `|γ ∧ γ'|`.
pub fn meet_index(g: &TreePath, h: &TreePath) -> usize {
    g.vertices.iter().zip(&h.vertices).take_while(|(a, b)| a == b).count()
}

/// Closed form of `Pr[B_{γ,γ'}]`, chosen by `j = |γ ∧ γ'|`. Each vertex in
/// the event contributes `2/(m+1)` where `m` is its number of neighbours off
/// `γ ∪ γ'`; the display is only valid when every such `m ≥ 1`, so branch
/// vertices need degree at least 4 and the formula is refused otherwise.
pub fn prob_b_pair(t: &RootedTree, g: &TreePath, h: &TreePath) -> Result<Rational> {
    let k = check_path_shape(t, g)?;
    if check_path_shape(t, h)? != k {
        return Err(LayersError::BadConfig("paths must have equal length".into()));
    }
    let j = meet_index(g, h);
    if j == 2 * k {
        return Err(LayersError::BadConfig("paths are identical".into()));
    }
    let d = |v: usize| t.degree(v) as i64;
    let gv = |i: usize| g.vertices[i - 1];
    let hv = |i: usize| h.vertices[i - 1];
    let need = |v: usize, min: i64| -> Result<()> {
        if d(v) < min {
            Err(LayersError::DegreeTooSmall(format!(
                "vertex {v} has degree {} but the closed form needs >= {min} at this position",
                d(v)
            )))
        } else {
            Ok(())
        }
    };
    if j == 1 {
        need(gv(1), 3)?;
        need(gv(2), 3)?;
        need(hv(2), 3)?;
        Ok(rat(8, (d(gv(1)) - 1) * (d(gv(2)) - 1) * (d(hv(2)) - 1)))
    } else if j == 2 {
        need(gv(2), 4)?;
        Ok(rat(4, d(gv(1)) * (d(gv(2)) - 2)))
    } else if j == 2 * k - 1 {
        need(gv(j), 4)?;
        Ok(rat(8, (d(gv(j)) - 2) * d(gv(2 * k)) * d(hv(2 * k))))
    } else if j % 2 == 1 {
        need(gv(j), 4)?;
        need(gv(j + 1), 3)?;
        need(hv(j + 1), 3)?;
        Ok(rat(8, (d(gv(j + 1)) - 1) * (d(hv(j + 1)) - 1) * (d(gv(j)) - 2)))
    } else {
        need(gv(j - 1), 3)?;
        need(gv(j), 4)?;
        Ok(rat(4, (d(gv(j)) - 2) * (d(gv(j - 1)) - 1)))
    }
}

/// `Pr[B_{γ,γ'}]` from its definition: each vertex of the meeting block on
/// either path has at most one younger neighbour off `γ ∪ γ'`.
pub fn prob_b_pair_oracle(t: &RootedTree, g: &TreePath, h: &TreePath) -> Result<Rational> {
    let j = meet_index(g, h);
    let i = j.div_ceil(2);
    let mut core: Vec<usize> = Vec::new();
    for p in [g, h] {
        for idx in [2 * i - 2, 2 * i - 1] {
            let v = p.vertices[idx];
            if !core.contains(&v) {
                core.push(v);
            }
        }
    }
    let mut peripherals = Vec::new();
    for (ci, &v) in core.iter().enumerate() {
        for &u in t.graph.neighbors(v) {
            if !g.vertices.contains(&u) && !h.vertices.contains(&u) {
                peripherals.push(vec![ci]);
            }
        }
    }
    let o = CorePeripheryOracle { core: core.len(), peripherals, cap: 2 };
    o.probability(|_, c| c.iter().all(|&x| x <= 1))
}

/// Per-trial evaluation of `Z_k` by a depth-first walk over root paths that
/// abandons a prefix as soon as one of its blocks fails.
#[derive(Debug, Clone)]
pub struct ZkEvaluator<'a> {
    t: &'a RootedTree,
    k: usize,
}

impl<'a> ZkEvaluator<'a> {
    pub fn new(t: &'a RootedTree, k: usize) -> Result<ZkEvaluator<'a>> {
        if k < 2 {
            return Err(LayersError::BadConfig("k must be at least 2".into()));
        }
        if t.depth < 2 * k {
            return Err(LayersError::BadConfig(format!("tree depth {} < 2k = {}", t.depth, 2 * k)));
        }
        for v in 0..t.n() {
            if t.level[v] < 2 * k && t.degree(v) < 2 {
                return Err(LayersError::DegreeTooSmall(format!("vertex {v} is a leaf inside the window")));
            }
        }
        Ok(ZkEvaluator { t, k })
    }

    /// Calls `visit(path, w/Pr[A_γ])` for every good path.
    pub fn for_each_good<F: FnMut(&[usize], f64)>(&self, ages: &AgeAssignment, mut visit: F) {
        let mut path = Vec::with_capacity(2 * self.k);
        path.push(self.t.root);
        let d0 = self.t.degree(self.t.root) as f64;
        self.rec(ages, &mut path, 1.0 / d0, &mut visit);
    }

    fn younger_children(&self, ages: &AgeAssignment, v: usize, skip: Option<usize>) -> usize {
        self.t.children(v).filter(|&u| Some(u) != skip && ages.younger(u, v)).count()
    }

    fn block_ok(&self, ages: &AgeAssignment, path: &[usize], b: usize, next: Option<usize>) -> bool {
        let (a, bv) = (path[2 * b], path[2 * b + 1]);
        let ka = self.younger_children(ages, a, Some(bv));
        let kb = self.younger_children(ages, bv, next);
        block_holds(block_position(b, self.k), ka, kb, ages.younger(a, bv))
    }

    fn block_factor(&self, path: &[usize], b: usize) -> f64 {
        let (x, y) = (self.t.degree(path[2 * b]), self.t.degree(path[2 * b + 1]));
        let pos = block_position(b, self.k);
        let p = rat_to_f64(&marginal_ai(x, y, pos).expect("degrees checked"));
        // weight factors: 1/(d-1) for every vertex except γ_1 and γ_{2k}
        let w = match pos {
            BlockPosition::First => 1.0 / (y as f64 - 1.0),
            BlockPosition::Interior => 1.0 / ((x as f64 - 1.0) * (y as f64 - 1.0)),
            BlockPosition::Last => 1.0 / (x as f64 - 1.0),
        };
        w / p
    }

    fn rec<F: FnMut(&[usize], f64)>(&self, ages: &AgeAssignment, path: &mut Vec<usize>, coef: f64, visit: &mut F) {
        let len = path.len();
        if len == 2 * self.k {
            let b = self.k - 1;
            if self.block_ok(ages, path, b, None) {
                visit(path, coef * self.block_factor(path, b));
            }
            return;
        }
        let v = path[len - 1];
        let children: Vec<usize> = self.t.children(v).collect();
        for c in children {
            let mut c_coef = coef;
            if len.is_multiple_of(2) {
                // c opens block len/2; block len/2 - 1 is now decidable
                let b = len / 2 - 1;
                if !self.block_ok(ages, path, b, Some(c)) {
                    continue;
                }
                c_coef *= self.block_factor(path, b);
            }
            path.push(c);
            self.rec(ages, path, c_coef, visit);
            path.pop();
        }
    }

    pub fn zk(&self, ages: &AgeAssignment) -> f64 {
        let mut z = 0.0;
        self.for_each_good(ages, |_, y| z += y);
        z
    }
}

/// `Z_k` summed in exact arithmetic over the enumerated paths.
pub fn realized_zk(t: &RootedTree, ages: &AgeAssignment, k: usize) -> Result<Rational> {
    let mut z = Rational::zero();
    for g in enumerate_root_paths(t, 2 * k - 1)? {
        z += check_good(t, &g, ages)?.y;
    }
    Ok(z)
}

pub fn is_k_good(z: f64) -> bool {
    z >= 0.5
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub holds: bool,
    /// First violating vertex (tree form) or level (profile form).
    pub witness: Option<usize>,
}

/// `q_v`: interior index pairs `1 < i < ⌊(d(v,o)+1)/2⌋` on the root path with
/// a vertex of degree above 2.
pub fn q_of(t: &RootedTree, v: usize) -> usize {
    let p = t.root_path(v);
    let dist = p.len() - 1;
    let upper = dist.div_ceil(2);
    (2..upper)
        .filter(|&i| t.degree(p[2 * i - 2]).max(t.degree(p[2 * i - 1])) > 2)
        .count()
}

/// Checks `d_v - 1 ≤ C a^{q_v} d_o` on every vertex of the truncation.
pub fn growth_condition_holds(t: &RootedTree, c: f64, a: f64) -> GrowthReport {
    let d_o = t.degree(t.root) as f64;
    for v in 0..t.n() {
        let lhs = t.degree(v) as f64 - 1.0;
        if lhs > c * a.powi(q_of(t, v) as i32) * d_o {
            return GrowthReport { holds: false, witness: Some(v) };
        }
    }
    GrowthReport { holds: true, witness: None }
}

/// Level-wise growth check for spherically symmetric profiles, in `log2`
/// so that very deep levels (level sizes far beyond `u128`) can be examined.
pub fn growth_condition_profile(profile: &DegreeProfile, max_level: usize, c: f64, a: f64) -> Result<GrowthReport> {
    let deg_log2_minus1 = |r: usize, size_log2: f64| -> Result<(f64, bool)> {
        // returns (log2(d - 1), d > 2)
        match profile {
            DegreeProfile::Counterexample if r > 0 && crate::graph::is_counterexample_level(r) => {
                Ok((size_log2, true))
            }
            DegreeProfile::RandomChoice(_) => Err(LayersError::BadConfig("profile form needs a symmetric profile".into())),
            _ => {
                let d = profile.degree_of_level(r, 1).expect("symmetric") as f64;
                Ok(((d - 1.0).max(0.0).log2(), d > 2.0))
            }
        }
    };
    let d_o = profile.degree_of_level(0, 1).ok_or_else(|| LayersError::BadConfig("random profile".into()))? as f64;
    let mut size_log2 = 0.0;
    // big[r] = degree at level r exceeds 2
    let mut big = Vec::with_capacity(max_level + 1);
    for r in 0..=max_level {
        let (l, is_big) = deg_log2_minus1(r, size_log2)?;
        big.push(is_big);
        let upper = r.div_ceil(2);
        let q = (2..upper).filter(|&i| big[2 * i - 2] || big[2 * i - 1]).count();
        if l > c.log2() + q as f64 * a.log2() + d_o.log2() + 1e-12 {
            return Ok(GrowthReport { holds: false, witness: Some(r) });
        }
        let children_log2 = if r == 0 { d_o.log2() } else { l };
        size_log2 += children_log2;
    }
    Ok(GrowthReport { holds: true, witness: None })
}

#[derive(Debug, Clone)]
pub struct NiceConfig {
    pub marked: Vec<usize>,
    /// Odd path length (edges), at least 15.
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NiceOutcome {
    pub nice: Vec<bool>,
    pub w_size: usize,
}

fn validate_nice(t: &RootedTree, cfg: &NiceConfig) -> Result<()> {
    if cfg.k.is_multiple_of(2) || cfg.k < 15 {
        return Err(LayersError::BadConfig(format!("k must be odd and >= 15, got {}", cfg.k)));
    }
    if t.depth < cfg.k + 1 {
        return Err(LayersError::BadConfig("tree too shallow for k".into()));
    }
    for (i, &u) in cfg.marked.iter().enumerate() {
        let dist = bfs_distance(&t.graph, u);
        if cfg.marked[i + 1..].iter().any(|&v| dist[v].is_some_and(|x| x < 15)) {
            return Err(LayersError::BadConfig("marked vertices closer than 15".into()));
        }
    }
    Ok(())
}

/// Nice = good and every marked vertex on the path lies in `T_2`. `W_{o,k}`
/// is the union of the vertices of nice paths; flags follow
/// [`enumerate_root_paths`] order.
pub fn check_nice_and_w(t: &RootedTree, ages: &AgeAssignment, cfg: &NiceConfig) -> Result<NiceOutcome> {
    validate_nice(t, cfg)?;
    let layers = compute_layers(&t.graph, ages)?;
    let mut in_w = vec![false; t.n()];
    let mut nice = Vec::new();
    for g in enumerate_root_paths(t, cfg.k)? {
        let ok = check_good(t, &g, ages)?.good
            && g.vertices.iter().all(|v| !cfg.marked.contains(v) || layers.layer[*v] <= 2);
        if ok {
            for &v in &g.vertices {
                in_w[v] = true;
            }
        }
        nice.push(ok);
    }
    Ok(NiceOutcome { nice, w_size: in_w.iter().filter(|&&x| x).count() })
}

/// `|W_{o,k}|` via the pruned walk.
pub fn nice_w_size(t: &RootedTree, ages: &AgeAssignment, cfg: &NiceConfig) -> Result<usize> {
    validate_nice(t, cfg)?;
    let layers = compute_layers(&t.graph, ages)?;
    let mut marked = vec![false; t.n()];
    for &v in &cfg.marked {
        marked[v] = true;
    }
    let eval = ZkEvaluator::new(t, cfg.k.div_ceil(2))?;
    let mut in_w = vec![false; t.n()];
    eval.for_each_good(ages, |p, _| {
        if p.iter().all(|&v| !marked[v] || layers.layer[v] <= 2) {
            for &v in p {
                in_w[v] = true;
            }
        }
    });
    Ok(in_w.iter().filter(|&&x| x).count())
}
