//! Monotone walks on `Z^d`: meeting times and intersection tails, the
//! conditional pair probabilities, the lattice block events, the
//! `{0, 2, 4, ∞}` chain and the lazy search for open monotone paths in `T_k`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{LayersError, Result};
use crate::graph::LatticePoint;
use crate::layers::{lattice_layer, lazy_age, LazyAgeSource};
use crate::oracle::{permutation_oracle, rat, rat_to_f64, CorePeripheryOracle, Rational};

/// Positions `S_0 = 0, …, S_len` of a walk with uniform unit increments.
pub fn sample_monotone_walk<R: Rng + ?Sized>(d: usize, len: usize, rng: &mut R) -> Vec<LatticePoint> {
    let mut out = Vec::with_capacity(len + 1);
    let mut p = LatticePoint::origin(d);
    out.push(p.clone());
    for _ in 0..len {
        p = p.shifted(rng.random_range(0..d), 1);
        out.push(p.clone());
    }
    out
}

/// Difference `S_n - S'_n` of two independent monotone walks, with its `L1` norm.
#[derive(Debug, Clone)]
struct Diff {
    v: Vec<i32>,
    l1: i64,
}

impl Diff {
    fn new(v: Vec<i32>) -> Diff {
        let l1 = v.iter().map(|x| x.abs() as i64).sum();
        Diff { v, l1 }
    }

    fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let d = self.v.len();
        let i = rng.random_range(0..d);
        let j = rng.random_range(0..d);
        if i != j {
            self.l1 -= (self.v[i].abs() + self.v[j].abs()) as i64;
            self.v[i] += 1;
            self.v[j] -= 1;
            self.l1 += (self.v[i].abs() + self.v[j].abs()) as i64;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkPairStats {
    /// First `k ≥ 1` with `S_k = S'_k`; `None` if not within the horizon.
    pub tau: Option<usize>,
    /// Common vertices within the horizon, the origin included. Monotone
    /// walks can only share a vertex at equal times.
    pub intersections: usize,
}

pub fn sample_walk_pair<R: Rng + ?Sized>(d: usize, horizon: usize, rng: &mut R) -> WalkPairStats {
    let mut diff = Diff::new(vec![0; d]);
    let mut tau = None;
    let mut intersections = 1;
    for k in 1..=horizon {
        diff.step(rng);
        if diff.l1 == 0 {
            intersections += 1;
            tau.get_or_insert(k);
        }
    }
    WalkPairStats { tau, intersections }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailTable {
    /// `tail[k-1] = P(|γ ∩ γ'| ≥ k)`.
    pub tail: Vec<f64>,
    pub counts: Vec<usize>,
    pub trials: usize,
    /// `exp` of the least-squares slope of `ln tail` over `k ≥ 2` with at
    /// least `min_count` observations.
    pub alpha_hat: Option<f64>,
}

pub fn tail_from_intersections(samples: &[usize], min_count: usize) -> TailTable {
    let kmax = samples.iter().copied().max().unwrap_or(0);
    let mut counts = vec![0usize; kmax];
    for &s in samples {
        for c in counts.iter_mut().take(s) {
            *c += 1;
        }
    }
    let trials = samples.len();
    let tail: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c >= min_count)
        .map(|(i, &c)| ((i + 1) as f64, (c as f64 / trials as f64).ln()))
        .collect();
    let alpha_hat = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some((sxy / sxx).exp())
    } else {
        None
    };
    TailTable { tail, counts, trials, alpha_hat }
}

pub fn intersection_tail<R: Rng + ?Sized>(d: usize, horizon: usize, trials: usize, rng: &mut R) -> TailTable {
    let samples: Vec<usize> = (0..trials).map(|_| sample_walk_pair(d, horizon, rng).intersections).collect();
    tail_from_intersections(&samples, 30)
}

/// Start configurations of the conditional pair probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairStart {
    /// `S_1 = e_1, S'_1 = e_2`, event: distance 0 again.
    A2,
    /// `S_2 = 2e_1, S'_2 = 2e_2`, event: distance 2 later.
    P12,
    /// `S_2 = 2e_1, S'_2 = e_2 + e_3`.
    P123,
    /// `S_2 = e_1 + e_3, S'_2 = e_2 + e_4`.
    P1234,
}

impl PairStart {
    pub const ALL: [PairStart; 4] = [PairStart::A2, PairStart::P12, PairStart::P123, PairStart::P1234];

    pub fn name(self) -> &'static str {
        match self {
            PairStart::A2 => "a2",
            PairStart::P12 => "p12",
            PairStart::P123 => "p123",
            PairStart::P1234 => "p1234",
        }
    }

    /// Leading coefficient `c` in `c·d^{-2}`.
    pub fn leading(self) -> f64 {
        match self {
            PairStart::A2 | PairStart::P12 => 1.0,
            PairStart::P123 => 2.0,
            PairStart::P1234 => 4.0,
        }
    }

    fn start(self, d: usize) -> (Vec<i32>, i64) {
        let mut v = vec![0i32; d];
        match self {
            PairStart::A2 => {
                v[0] = 1;
                v[1] = -1;
                (v, 0)
            }
            PairStart::P12 => {
                v[0] = 2;
                v[1] = -2;
                (v, 2)
            }
            PairStart::P123 => {
                v[0] = 2;
                v[1] = -1;
                v[2] = -1;
                (v, 2)
            }
            PairStart::P1234 => {
                v[0] = 1;
                v[2] = 1;
                v[1] = -1;
                v[3] = -1;
                (v, 2)
            }
        }
    }
}

/// One trial: does the pair reach the target distance within `horizon`
/// further steps? Stops early once the target is out of reach.
pub fn pair_hits<R: Rng + ?Sized>(start: PairStart, d: usize, horizon: usize, rng: &mut R) -> bool {
    let (v, target) = start.start(d);
    let mut diff = Diff::new(v);
    for step in 0..horizon {
        diff.step(rng);
        if diff.l1 == target {
            return true;
        }
        let remaining = (horizon - step - 1) as i64;
        if diff.l1 - target > 2 * remaining {
            return false;
        }
    }
    false
}

pub const DEFAULT_PAIR_HORIZON: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondProbs {
    pub a2: f64,
    pub p12: f64,
    pub p123: f64,
    pub p1234: f64,
}

pub fn conditional_pair_probs<R: Rng + ?Sized>(d: usize, trials: usize, horizon: usize, rng: &mut R) -> Result<CondProbs> {
    if d < 5 {
        return Err(LayersError::BadConfig("conditional pair probabilities need d >= 5".into()));
    }
    let mut est = [0.0; 4];
    for (e, s) in est.iter_mut().zip(PairStart::ALL) {
        let hits = (0..trials).filter(|_| pair_hits(s, d, horizon, rng)).count();
        *e = hits as f64 / trials as f64;
    }
    Ok(CondProbs { a2: est[0], p12: est[1], p123: est[2], p1234: est[3] })
}

/// The displayed three-term value
/// `(2/(2d-1))² + (2d-3)/((4d-2)(4d-3)(2d-1)) + 3(2d-3)/((4d-2)(4d-3)(4d-5))`.
pub fn lattice_marginal_ai(d: usize) -> Rational {
    let d = d as i64;
    let a = rat(2, 2 * d - 1);
    a.clone() * a
        + rat(2 * d - 3, (4 * d - 2) * (4 * d - 3) * (2 * d - 1))
        + rat(3 * (2 * d - 3), (4 * d - 2) * (4 * d - 3) * (4 * d - 5))
}

/// Exact `Pr[A_i(γ)]` from the event definition. The block vertices `a, b`
/// each have `m = 2d - 2` counted neighbours besides each other, and these
/// sets are disjoint. With ages `x < y` of the younger and older block
/// vertex, the younger may have at most 2 younger counted neighbours and the
/// older at most 1, so `P = 2 ∫_0^1 F_1(y) ∫_0^y F_2(x) dx dy` with
/// `F_t` the `Bin(m, ·)` CDF at `t`.
///
/// The inner integral is `(1/(m+1)) Σ_l min(l, 3) C(m+1, l) y^l (1-y)^{m+1-l}`,
/// and each outer term is a Beta integral `1/((2m+2) C(2m+1, i+l))`.
pub fn lattice_marginal_exact(d: usize) -> Rational {
    assert!(d >= 2);
    let m = 2 * d - 2;
    let mut s = Rational::zero();
    for i in 0..=1 {
        for l in 1..=m + 1 {
            let num = binom_big(m, i) * binom_big(m + 1, l) * BigInt::from(l.min(3));
            let den = binom_big(2 * m + 1, i + l) * BigInt::from(2 * m + 2);
            s += Rational::new(num, den);
        }
    }
    s * rat(2, m as i64 + 1)
}

fn binom_big(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `Pr[A_i(γ)]` by plain enumeration over the block vertices and their
/// `2(2d - 2)` counted neighbours (6 vertices at `d = 2`, 10 at `d = 3`).
pub fn lattice_marginal_plain_oracle(d: usize) -> Result<Rational> {
    let m = 2 * d - 2;
    // 0 = γ_{2i-1}, 1 = γ_{2i}, then the counted neighbours of each
    permutation_oracle(2 + 2 * m, |r| {
        let ma = usize::from(r[1] < r[0]) + (2..2 + m).filter(|&u| r[u] < r[0]).count();
        let mb = usize::from(r[0] < r[1]) + (2 + m..2 + 2 * m).filter(|&u| r[u] < r[1]).count();
        ma <= 2 && mb <= 2
    })
}

/// Core/periphery model of `A(γ)` for a monotone path: the path is the core;
/// `M_j` counts younger neighbours of `γ_j` except the designated
/// predecessor (odd `j`) or successor (even `j`), with `γ_0 = γ_1 - e_1` and
/// `γ_{2k+1} = γ_{2k} + e_1`.
#[derive(Debug, Clone)]
pub struct LatticeEventModel {
    pub path: Vec<LatticePoint>,
    /// `core_counted[j]`: core indices counted in `M_j`.
    pub core_counted: Vec<Vec<usize>>,
    pub oracle: CorePeripheryOracle,
}

fn excluded_neighbor(path: &[LatticePoint], j: usize) -> LatticePoint {
    let n = path.len();
    if j.is_multiple_of(2) {
        // 0-based even index = odd 1-based position: predecessor excluded
        if j == 0 { path[0].shifted(0, -1) } else { path[j - 1].clone() }
    } else if j + 1 == n {
        path[j].shifted(0, 1)
    } else {
        path[j + 1].clone()
    }
}

pub fn check_monotone(path: &[LatticePoint]) -> bool {
    path.windows(2).all(|w| {
        let diff: Vec<i64> = w[1].0.iter().zip(&w[0].0).map(|(a, b)| a - b).collect();
        diff.iter().filter(|&&x| x == 1).count() == 1 && diff.iter().all(|&x| x == 0 || x == 1)
    })
}

impl LatticeEventModel {
    pub fn new(path: Vec<LatticePoint>) -> Result<LatticeEventModel> {
        if path.len() < 2 || path.len() % 2 == 1 || !check_monotone(&path) {
            return Err(LayersError::BadConfig("need a monotone path with an even number of vertices".into()));
        }
        let index: HashMap<&LatticePoint, usize> = path.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut core_counted = vec![Vec::new(); path.len()];
        let mut periph: Vec<(LatticePoint, Vec<usize>)> = Vec::new();
        let mut periph_index: HashMap<LatticePoint, usize> = HashMap::new();
        for j in 0..path.len() {
            let skip = excluded_neighbor(&path, j);
            for q in path[j].neighbors() {
                if q == skip {
                    continue;
                }
                if let Some(&c) = index.get(&q) {
                    core_counted[j].push(c);
                } else {
                    let e = *periph_index.entry(q.clone()).or_insert_with(|| {
                        periph.push((q.clone(), Vec::new()));
                        periph.len() - 1
                    });
                    periph[e].1.push(j);
                }
            }
        }
        let oracle = CorePeripheryOracle {
            core: path.len(),
            peripherals: periph.into_iter().map(|(_, a)| a).collect(),
            cap: 3,
        };
        Ok(LatticeEventModel { path, core_counted, oracle })
    }

    pub fn m_counts(&self, rank: &[u8], periph_counts: &[u8]) -> Vec<usize> {
        (0..self.path.len())
            .map(|j| {
                periph_counts[j] as usize + self.core_counted[j].iter().filter(|&&c| rank[c] < rank[j]).count()
            })
            .collect()
    }

    /// Exact probability that the blocks in `blocks` (0-based) all hold.
    pub fn prob_blocks(&self, blocks: &[usize]) -> Result<Rational> {
        self.oracle.probability(|r, c| {
            let m = self.m_counts(r, c);
            blocks.iter().all(|&b| m[2 * b] <= 2 && m[2 * b + 1] <= 2)
        })
    }

    pub fn prob_all(&self) -> Result<Rational> {
        let all: Vec<usize> = (0..self.path.len() / 2).collect();
        self.prob_blocks(&all)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeAOutcome {
    pub blocks: Vec<bool>,
    pub all: bool,
}

/// Evaluates the block events of a monotone path under lazy ages.
pub fn check_lattice_a(path: &[LatticePoint], src: &LazyAgeSource) -> Result<LatticeAOutcome> {
    if path.len() < 2 || path.len() % 2 == 1 || !check_monotone(path) {
        return Err(LayersError::BadConfig("need a monotone path with an even number of vertices".into()));
    }
    let mut m = Vec::with_capacity(path.len());
    for j in 0..path.len() {
        let skip = excluded_neighbor(path, j);
        let own = lazy_age(src, &path[j]);
        let mut c = 0;
        for q in path[j].neighbors() {
            if q == skip {
                continue;
            }
            let a = lazy_age(src, &q);
            if a == own {
                return Err(LayersError::TiesDetected(format!("{:?}", path[j].0), format!("{:?}", q.0)));
            }
            if a < own {
                c += 1;
            }
        }
        m.push(c);
    }
    let blocks: Vec<bool> = (0..path.len() / 2).map(|b| m[2 * b] <= 2 && m[2 * b + 1] <= 2).collect();
    let all = blocks.iter().all(|&x| x);
    Ok(LatticeAOutcome { blocks, all })
}

/// Transition parameters of the `{0, 2, 4, ∞}` chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainParams {
    pub d: usize,
    pub q20: f64,
    pub q24: f64,
    pub q42: f64,
    pub q4inf: f64,
}

impl ChainParams {
    /// `q_{2,0} = d^{-2}/(1-(3d-4)d^{-2})` and `q_{4,2}` (default `4 d^{-2}`).
    pub fn new(d: usize, q42: Option<f64>) -> Result<ChainParams> {
        let df = d as f64;
        let denom = 1.0 - (3.0 * df - 4.0) / (df * df);
        if d < 2 || denom <= 0.0 {
            return Err(LayersError::BadConfig(format!("chain undefined for d = {d}")));
        }
        let q20 = df.powi(-2) / denom;
        let q42 = q42.unwrap_or(4.0 / (df * df));
        if !(0.0..=1.0).contains(&q20) || !(0.0..=1.0).contains(&q42) {
            return Err(LayersError::BadConfig("chain probabilities outside [0, 1]".into()));
        }
        Ok(ChainParams { d, q20, q24: 1.0 - q20, q42, q4inf: 1.0 - q42 })
    }

    /// The displayed law `q20^{k0-1} q42^{k2-k0} q4∞`.
    pub fn law_displayed(&self, k0: usize, k2: usize) -> f64 {
        if k0 < 1 || k2 < k0 {
            return 0.0;
        }
        self.q20.powi(k0 as i32 - 1) * self.q42.powi((k2 - k0) as i32) * self.q4inf
    }

    /// Law of the chain itself. After each visit to 2 the chain goes
    /// 2→0→2 (`q20`), 2→4→2 (`q24 q42`) or 2→4→∞ (`q24 q4∞`); the
    /// `k2 - 1` returns are ordered in `C(k2-1, k0-1)` ways.
    pub fn law_exact(&self, k0: usize, k2: usize) -> f64 {
        if k0 < 1 || k2 < k0 {
            return 0.0;
        }
        let mut c = 1.0;
        for i in 0..(k0 - 1) {
            c = c * (k2 - 1 - i) as f64 / (i + 1) as f64;
        }
        c * self.q20.powi(k0 as i32 - 1) * (self.q24 * self.q42).powi((k2 - k0) as i32) * self.q24 * self.q4inf
    }

    /// One run from state 0; returns `(r_0, r_2)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        let (mut r0, mut r2) = (1, 0);
        loop {
            // at state 2
            r2 += 1;
            if rng.random::<f64>() < self.q20 {
                r0 += 1;
                continue;
            }
            // at state 4
            if rng.random::<f64>() < self.q42 {
                continue;
            }
            return (r0, r2);
        }
    }
}

/// `1/2 Σ |p - q|` over `1 ≤ k0 ≤ k2 ≤ trunc`.
pub fn chain_tv(empirical: &HashMap<(usize, usize), usize>, trials: usize, law: impl Fn(usize, usize) -> f64, trunc: usize) -> f64 {
    let mut s = 0.0;
    for k2 in 1..=trunc {
        for k0 in 1..=k2 {
            let e = *empirical.get(&(k0, k2)).unwrap_or(&0) as f64 / trials as f64;
            s += (e - law(k0, k2)).abs();
        }
    }
    s / 2.0
}

/// `p_0 = d/(a'-1)`.
pub fn p0(d: usize, a_prime: f64) -> Result<f64> {
    if a_prime <= 1.0 {
        return Err(LayersError::DivergentSeries("p_0 needs a' > 1".into()));
    }
    Ok(d as f64 / (a_prime - 1.0))
}

/// `p_2 = (3d/(a'(2d-7))) / (1 - 9/(a'(2d-7)))`.
pub fn p2(d: usize, a_prime: f64) -> Result<f64> {
    let base = a_prime * (2.0 * d as f64 - 7.0);
    if base <= 9.0 {
        return Err(LayersError::DivergentSeries(format!("9/(a'(2d-7)) >= 1 at d = {d}, a' = {a_prime}")));
    }
    Ok((3.0 * d as f64 / base) / (1.0 - 9.0 / base))
}

/// Default `a = d·sqrt(Pr[A_i])` from the exact marginal, `a' = min(a, 1.05)`.
pub fn default_a_prime(d: usize) -> f64 {
    let a = d as f64 * rat_to_f64(&lattice_marginal_exact(d)).sqrt();
    a.min(1.05)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMoments {
    pub p0: f64,
    pub p2: f64,
    /// `E[p0^{r0} p2^{r2}]` under the displayed law.
    pub displayed: f64,
    /// The same moment under the chain's own law.
    pub exact: f64,
}

pub fn chain_weighted_moment(params: &ChainParams, a_prime: f64) -> Result<ChainMoments> {
    let (x, y) = (p0(params.d, a_prime)?, p2(params.d, a_prime)?);
    let q = params;
    let den_disp = (1.0 - x * y * q.q20) * (1.0 - y * q.q42);
    if 1.0 - x * y * q.q20 <= 0.0 || 1.0 - y * q.q42 <= 0.0 {
        return Err(LayersError::DivergentSeries(format!(
            "p0·p2·q20 = {:.4}, p2·q42 = {:.4}",
            x * y * q.q20,
            y * q.q42
        )));
    }
    let den_exact = 1.0 - x * y * q.q20 - y * q.q24 * q.q42;
    if den_exact <= 0.0 {
        return Err(LayersError::DivergentSeries("exact chain moment diverges".into()));
    }
    Ok(ChainMoments {
        p0: x,
        p2: y,
        displayed: x * y * q.q4inf / den_disp,
        exact: x * y * q.q24 * q.q4inf / den_exact,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingResult {
    pub crossed: bool,
    /// `L1` norm of the farthest open vertex reached; every monotone path to
    /// `x` has length `|x|_1`. `None` when the origin is closed.
    pub longest: Option<usize>,
    pub explored: usize,
}

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// Depth-first search over monotone extensions from the origin through
/// vertices of `T_k`. Success means reaching `|x|_1 = radius + 1`.
pub fn search_open_monotone_path(d: usize, k: usize, radius: usize, src: &LazyAgeSource, budget: usize) -> Result<CrossingResult> {
    if d == 0 || radius == 0 {
        return Err(LayersError::BadConfig("need d >= 1 and radius >= 1".into()));
    }
    let mut open_memo: HashMap<LatticePoint, bool> = HashMap::new();
    let mut is_open = |p: &LatticePoint| -> Result<bool> {
        if let Some(&o) = open_memo.get(p) {
            return Ok(o);
        }
        let o = lattice_layer(src, p)? <= k;
        open_memo.insert(p.clone(), o);
        Ok(o)
    };
    let origin = LatticePoint::origin(d);
    if !is_open(&origin)? {
        return Ok(CrossingResult { crossed: false, longest: None, explored: 1 });
    }
    let target = radius as i64 + 1;
    let mut visited: HashSet<LatticePoint> = HashSet::from([origin.clone()]);
    let mut stack = vec![(origin, 0usize)];
    let mut explored = 1;
    let mut longest = 0usize;
    while let Some((p, next_dir)) = stack.pop() {
        if next_dir == d {
            continue;
        }
        stack.push((p.clone(), next_dir + 1));
        let q = p.shifted(next_dir, 1);
        if !visited.insert(q.clone()) {
            continue;
        }
        explored += 1;
        if explored > budget {
            return Err(LayersError::BudgetExhausted(budget));
        }
        if is_open(&q)? {
            let norm = q.l1_norm();
            longest = longest.max(norm as usize);
            if norm >= target {
                return Ok(CrossingResult { crossed: true, longest: Some(longest), explored });
            }
            stack.push((q, 0));
        }
    }
    Ok(CrossingResult { crossed: false, longest: Some(longest), explored })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Polynomial with rational coefficients, lowest degree first.
    #[derive(Debug, Clone)]
    struct Poly(Vec<Rational>);

    impl Poly {
        fn mul(&self, o: &Poly) -> Poly {
            let mut c = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
            for (i, a) in self.0.iter().enumerate() {
                for (j, b) in o.0.iter().enumerate() {
                    c[i + j] += a * b;
                }
            }
            Poly(c)
        }

        fn add(&self, o: &Poly) -> Poly {
            let n = self.0.len().max(o.0.len());
            Poly((0..n)
                .map(|i| self.0.get(i).cloned().unwrap_or_else(Rational::zero) + o.0.get(i).cloned().unwrap_or_else(Rational::zero))
                .collect())
        }

        fn powi(&self, e: usize) -> Poly {
            (0..e).fold(Poly(vec![Rational::one()]), |acc, _| acc.mul(self))
        }

        /// Antiderivative vanishing at 0.
        fn integral(&self) -> Poly {
            let mut c = vec![Rational::zero()];
            for (i, a) in self.0.iter().enumerate() {
                c.push(a / rat(i as i64 + 1, 1));
            }
            Poly(c)
        }

        fn at_one(&self) -> Rational {
            self.0.iter().fold(Rational::zero(), |s, a| s + a)
        }
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
    }

    /// `x ↦ P(Bin(m, x) ≤ t)`.
    fn binomial_cdf_poly(m: usize, t: usize) -> Poly {
        let x = Poly(vec![Rational::zero(), Rational::one()]);
        let one_minus_x = Poly(vec![Rational::one(), -Rational::one()]);
        (0..=t.min(m)).fold(Poly(vec![Rational::zero()]), |acc, j| {
            acc.add(&Poly(vec![rat(binom(m, j), 1)]).mul(&x.powi(j)).mul(&one_minus_x.powi(m - j)))
        })
    }

    /// The same integral by expanding the CDFs as polynomials.
    fn marginal_by_polynomials(d: usize) -> Rational {
        let m = 2 * d - 2;
        let inner = binomial_cdf_poly(m, 2).integral();
        let outer = binomial_cdf_poly(m, 1).mul(&inner).integral();
        outer.at_one() * rat(2, 1)
    }

    #[test]
    fn beta_sum_matches_polynomial_integral() {
        for d in 2..=12 {
            assert_eq!(lattice_marginal_exact(d), marginal_by_polynomials(d), "d={d}");
        }
    }
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn displayed_value_at_two() {
        assert_eq!(lattice_marginal_ai(2), rat(22, 45));
        assert!(lattice_marginal_ai(2) > rat(9, 32));
    }

    #[test]
    fn exact_marginal_small_d() {
        assert_eq!(lattice_marginal_exact(2), rat(1, 2));
        assert_eq!(lattice_marginal_exact(3), rat(197, 1050));
    }

    #[test]
    fn exact_marginal_matches_oracles() {
        assert_eq!(lattice_marginal_plain_oracle(2).unwrap(), lattice_marginal_exact(2));
        for d in 2..=4 {
            let path = vec![LatticePoint::origin(d), LatticePoint::unit(d, 0)];
            let m = LatticeEventModel::new(path).unwrap();
            assert_eq!(m.prob_all().unwrap(), lattice_marginal_exact(d));
        }
    }

    #[test]
    fn walk_steps_are_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = sample_monotone_walk(4, 50, &mut rng);
        assert!(check_monotone(&w));
    }

    #[test]
    fn chain_basics() {
        let c = ChainParams::new(20, None).unwrap();
        assert_eq!(c.q20 + c.q24, 1.0);
        assert_eq!(c.law_displayed(1, 1), c.q4inf);
        let total: f64 = (1..200).flat_map(|k2| (1..=k2).map(move |k0| (k0, k2))).map(|(a, b)| c.law_exact(a, b)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain_moment_diverges_at_d20() {
        let c = ChainParams::new(20, None).unwrap();
        assert!(matches!(chain_weighted_moment(&c, 1.05), Err(LayersError::DivergentSeries(_))));
    }

    #[test]
    fn crossing_trivial_regimes() {
        let src = LazyAgeSource::new(1);
        assert!(search_open_monotone_path(1, 3, 10, &src, 1000).unwrap().crossed);
        assert!(search_open_monotone_path(3, 7, 10, &src, 1000).unwrap().crossed);
    }

    #[test]
    fn pair_start_distances() {
        for s in PairStart::ALL {
            let (v, _) = s.start(6);
            let l1: i32 = v.iter().map(|x| x.abs()).sum();
            assert_eq!(l1, if s == PairStart::A2 { 2 } else { 4 });
        }
    }
}
