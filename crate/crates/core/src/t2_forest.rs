//! Structure of `T_2`: forest property, monotone ages from component minima,
//! the chord-free path family `Γ'_{v,n}`, `κ` weights and the exact
//! probabilities `Pr[B_γ] = Π 1/|T_i(γ)|`.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{LayersError, Result};
use crate::graph::Graph;
use crate::layers::{compute_layers, sample_ages, AgeAssignment};
use crate::oracle::{permutation_oracle, rat, CorePeripheryOracle, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct T2Structure {
    pub open: Vec<bool>,
    pub forest: bool,
    pub monotone: bool,
    /// Youngest vertex of each component of `T_2`.
    pub minima: Vec<usize>,
    /// A path from a component minimum along which ages fail to increase,
    /// or a cycle witness when `forest` is false.
    pub violation: Option<Vec<usize>>,
}

pub fn analyze_t2(g: &Graph, ages: &AgeAssignment) -> Result<T2Structure> {
    let layers = compute_layers(g, ages)?;
    let open = layers.open_mask(2);
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut minima = Vec::new();
    let mut forest = true;
    let mut monotone = true;
    let mut violation = None;
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if !open[s] || comp[s] != usize::MAX {
            continue;
        }
        let c = minima.len();
        let mut members = vec![s];
        comp[s] = c;
        let mut q = VecDeque::from([s]);
        let mut twice_edges = 0;
        while let Some(u) = q.pop_front() {
            for &w in g.neighbors(u) {
                if !open[w] {
                    continue;
                }
                twice_edges += 1;
                if comp[w] == usize::MAX {
                    comp[w] = c;
                    members.push(w);
                    q.push_back(w);
                }
            }
        }
        if twice_edges / 2 + 1 != members.len() {
            forest = false;
            violation.get_or_insert_with(|| members.clone());
        }
        let m = *members.iter().min_by_key(|&&v| ages.rank(v)).unwrap();
        minima.push(m);
        // BFS tree from the minimum; in a tree component every simple path
        // from m is a BFS-tree path, so checking parent < child suffices
        parent[m] = m;
        let mut q = VecDeque::from([m]);
        let mut seen = BTreeSet::from([m]);
        while let Some(u) = q.pop_front() {
            for &w in g.neighbors(u) {
                if open[w] && seen.insert(w) {
                    parent[w] = u;
                    if !ages.younger(u, w) {
                        monotone = false;
                        if violation.is_none() {
                            let mut p = vec![w];
                            let mut x = w;
                            while x != m {
                                x = parent[x];
                                p.push(x);
                            }
                            p.reverse();
                            violation = Some(p);
                        }
                    }
                    q.push_back(w);
                }
            }
        }
    }
    Ok(T2Structure { open, forest, monotone, minima, violation })
}

/// A member of `Γ'_{v,n}`: `v = γ_1, …, γ_{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedPath {
    pub vertices: Vec<usize>,
}

impl RestrictedPath {
    pub fn n(&self) -> usize {
        self.vertices.len() - 1
    }
}

pub const DEFAULT_PATH_CAP: usize = 1_000_000;

/// Simple paths from `v` of length `n` with `d ≥ 2` after the start and no
/// chords `γ_i ~ γ_j`, `j ≤ i - 2`. The start may have degree 1.
pub fn enumerate_gamma_prime(g: &Graph, v: usize, n: usize, cap: usize) -> Result<Vec<RestrictedPath>> {
    if n == 0 {
        return Err(LayersError::BadConfig("n must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut path = vec![v];
    let mut on_path = vec![false; g.n()];
    on_path[v] = true;
    gp_rec(g, n, &mut path, &mut on_path, &mut |p| {
        if out.len() == cap {
            return false;
        }
        out.push(RestrictedPath { vertices: p.to_vec() });
        true
    });
    if out.len() == cap {
        return Err(LayersError::EnumerationTooLarge(cap));
    }
    Ok(out)
}

fn gp_rec<F: FnMut(&[usize]) -> bool>(
    g: &Graph,
    n: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    visit: &mut F,
) -> bool {
    if path.len() == n + 1 {
        return visit(path);
    }
    let last = *path.last().unwrap();
    for &u in g.neighbors(last) {
        if on_path[u] || g.degree(u) < 2 {
            continue;
        }
        // u may touch only `last` among path vertices
        if g.neighbors(u).iter().any(|&w| on_path[w] && w != last) {
            continue;
        }
        path.push(u);
        on_path[u] = true;
        let go_on = gp_rec(g, n, path, on_path, visit);
        on_path[u] = false;
        path.pop();
        if !go_on {
            return false;
        }
    }
    true
}

/// `κ(γ) = Π_{i=2}^{n} (d_i/(d_i - 1)) ((d_i + d_{i-1} - 1)/d_{i-1})`.
pub fn kappa(g: &Graph, p: &RestrictedPath) -> Rational {
    let d = |i: usize| g.degree(p.vertices[i - 1]) as i64;
    let mut k = Rational::one();
    for i in 2..=p.n() {
        k *= rat(d(i), d(i) - 1) * rat(d(i) + d(i - 1) - 1, d(i - 1));
    }
    k
}

/// `T_i(γ)` for `i = 1..=n` (returned 0-based).
pub fn tail_sets(g: &Graph, p: &RestrictedPath) -> Vec<BTreeSet<usize>> {
    let n = p.n();
    let gam = |i: usize| p.vertices[i - 1];
    let mut sets = vec![BTreeSet::new(); n];
    let mut acc = BTreeSet::new();
    for i in (2..=n).rev() {
        acc.insert(gam(i));
        acc.extend(g.neighbors(gam(i)).iter().copied());
        let mut s = acc.clone();
        s.remove(&gam(i - 1));
        sets[i - 1] = s;
    }
    sets[0] = if n == 1 { BTreeSet::from([gam(1), gam(2)]) } else { sets[1].clone() };
    sets[0].insert(gam(1));
    sets
}

pub fn prob_b_exact(g: &Graph, p: &RestrictedPath) -> Rational {
    tail_sets(g, p)
        .iter()
        .fold(Rational::one(), |acc, s| acc / rat(s.len() as i64, 1))
}

/// `B_γ` from the ages: ages increase along γ, and every interior vertex is
/// younger than its neighbours off γ.
pub fn b_event(g: &Graph, p: &RestrictedPath, ages: &AgeAssignment) -> bool {
    let vs = &p.vertices;
    vs.windows(2).all(|w| ages.younger(w[0], w[1]))
        && vs[1..vs.len() - 1].iter().all(|&x| {
            g.neighbors(x)
                .iter()
                .all(|u| vs.contains(u) || ages.younger(x, *u))
        })
}

/// `L_γ`: v is the youngest vertex of γ and γ lies in `T_2`.
pub fn l_event(p: &RestrictedPath, ages: &AgeAssignment, layer: &[u32]) -> bool {
    let v = p.vertices[0];
    p.vertices.iter().all(|&u| layer[u] <= 2 && (u == v || ages.younger(v, u)))
}

/// `Pr[B_γ]` by exact order enumeration of γ and the off-path neighbours of
/// its interior vertices.
pub fn prob_b_oracle(g: &Graph, p: &RestrictedPath) -> Result<Rational> {
    let vs = &p.vertices;
    let core = vs.len();
    let mut outside: Vec<usize> = Vec::new();
    for &x in &vs[1..core - 1] {
        for &u in g.neighbors(x) {
            if !vs.contains(&u) && !outside.contains(&u) {
                outside.push(u);
            }
        }
    }
    let interior_adj = |u: usize| -> Vec<usize> {
        (1..core - 1).filter(|&i| g.has_edge(vs[i], u)).collect()
    };
    if core + outside.len() <= 10 {
        let adj: Vec<Vec<usize>> = outside.iter().map(|&u| interior_adj(u)).collect();
        return permutation_oracle(core + outside.len(), |r| {
            (0..core - 1).all(|i| r[i] < r[i + 1])
                && adj
                    .iter()
                    .enumerate()
                    .all(|(o, nb)| nb.iter().all(|&i| r[i] < r[core + o]))
        });
    }
    let o = CorePeripheryOracle {
        core,
        peripherals: outside.iter().map(|&u| interior_adj(u)).collect(),
        cap: 1,
    };
    o.probability(|r, c| {
        (0..core - 1).all(|i| r[i] < r[i + 1]) && (1..core - 1).all(|i| c[i] == 0)
    })
}

/// Exact `S_n = Σ_{γ ∈ Γ'_{v,n}} κ(γ) Pr[B_γ]` for `n = 1..=n_max`.
pub fn weighted_sums(g: &Graph, v: usize, n_max: usize, cap: usize) -> Result<Vec<Rational>> {
    (1..=n_max)
        .map(|n| {
            Ok(enumerate_gamma_prime(g, v, n, cap)?
                .iter()
                .fold(Rational::zero(), |s, p| s + kappa(g, p) * prob_b_exact(g, p)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCheck {
    pub sums: Vec<Rational>,
    pub non_increasing: bool,
}

pub fn weighted_sum_recurrence_check(g: &Graph, v: usize, n_max: usize) -> Result<RecurrenceCheck> {
    let sums = weighted_sums(g, v, n_max, DEFAULT_PATH_CAP)?;
    let non_increasing = sums.windows(2).all(|w| w[1] <= w[0]);
    Ok(RecurrenceCheck { sums, non_increasing })
}

/// Does some `γ ∈ Γ'_{v,n}` lie in `T_2` with `v` youngest on it? Only
/// vertices older than `v` are explored, since every other extension fails.
pub fn i_vn_event(g: &Graph, v: usize, n: usize, ages: &AgeAssignment, layer: &[u32]) -> bool {
    if layer[v] > 2 {
        return false;
    }
    let mut path = vec![v];
    let mut on_path = vec![false; g.n()];
    on_path[v] = true;
    let mut found = false;
    i_rec(g, n, ages, layer, &mut path, &mut on_path, &mut found);
    found
}

fn i_rec(
    g: &Graph,
    n: usize,
    ages: &AgeAssignment,
    layer: &[u32],
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut bool,
) {
    if *found {
        return;
    }
    if path.len() == n + 1 {
        *found = true;
        return;
    }
    let last = *path.last().unwrap();
    let v = path[0];
    for &u in g.neighbors(last) {
        if on_path[u] || g.degree(u) < 2 || layer[u] > 2 || !ages.younger(v, u) {
            continue;
        }
        if g.neighbors(u).iter().any(|&w| on_path[w] && w != last) {
            continue;
        }
        path.push(u);
        on_path[u] = true;
        i_rec(g, n, ages, layer, path, on_path, found);
        on_path[u] = false;
        path.pop();
        if *found {
            return;
        }
    }
}

/// Monte Carlo frequency of `I_{v,n}` over `trials` fresh age samples.
pub fn estimate_i_vn<R: Rng + ?Sized>(g: &Graph, v: usize, n: usize, trials: usize, rng: &mut R) -> Result<f64> {
    let mut hits = 0usize;
    for _ in 0..trials {
        let ages = sample_ages(g, rng);
        let layers = compute_layers(g, &ages)?;
        if i_vn_event(g, v, n, &ages, &layers.layer) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials.max(1) as f64)
}

/// `Δ^n / (n+1)!`.
pub fn i_vn_bound(max_degree: usize, n: usize) -> f64 {
    let mut b = 1.0;
    for i in 1..=n {
        b *= max_degree as f64 / (i + 1) as f64;
    }
    b
}
