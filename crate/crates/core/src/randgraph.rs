//! Cycle counts of the configuration model, the Molloy–Reed quantity, degree
//! smoothing, and giant components of `T_3` in random graphs.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{LayersError, Result};
use crate::graph::{components_of_open, configuration_multigraph, erdos_renyi, simple_graph_from_sequence, DegreeSequence, Graph, MultiGraph};
use crate::layers::{compute_layers, sample_ages};
use crate::oracle::{rat, Rational};
use crate::seed::{mean_stderr, par_trials, trial_rng};

pub const MAX_CYCLE_LENGTH: usize = 8;

/// `counts[i - 1] = Y_i`, the number of cycles of length `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    pub counts: Vec<u64>,
}

impl CycleCensus {
    pub fn y(&self, i: usize) -> u64 {
        self.counts[i - 1]
    }
}

/// Loops are 1-cycles, each unordered pair of parallel edges is a 2-cycle,
/// and a cycle of length `i ≥ 3` on distinct vertices counts once for every
/// choice of one edge per consecutive pair.
pub fn count_cycles_multi(g: &MultiGraph, k_max: usize) -> Result<CycleCensus> {
    if k_max > MAX_CYCLE_LENGTH || k_max == 0 {
        return Err(LayersError::KTooLarge(k_max));
    }
    let mut mult: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); g.n];
    let mut loops = 0u64;
    for &(u, v) in &g.edges {
        if u == v {
            loops += 1;
        } else {
            *mult[u].entry(v).or_insert(0) += 1;
            *mult[v].entry(u).or_insert(0) += 1;
        }
    }
    let adj: Vec<Vec<(usize, u64)>> = mult.into_iter().map(|m| m.into_iter().collect()).collect();
    let mut counts = vec![0u64; k_max];
    counts[0] = loops;
    if k_max >= 2 {
        counts[1] = adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |(v, _)| *v > u))
            .map(|&(_, m)| m * (m - 1) / 2)
            .sum();
    }
    if k_max >= 3 {
        let long = long_cycles(&adj, k_max);
        counts[2..].copy_from_slice(&long[2..]);
    }
    Ok(CycleCensus { counts })
}

pub fn count_cycles(g: &Graph, k_max: usize) -> Result<CycleCensus> {
    if k_max > MAX_CYCLE_LENGTH || k_max == 0 {
        return Err(LayersError::KTooLarge(k_max));
    }
    let adj: Vec<Vec<(usize, u64)>> = (0..g.n()).map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect()).collect();
    let mut counts = long_cycles(&adj, k_max.max(2));
    counts.truncate(k_max);
    Ok(CycleCensus { counts })
}

/// Cycles of length 3..=k_max rooted at their smallest vertex; each is found
/// in both directions and kept when the second vertex is below the last.
fn long_cycles(adj: &[Vec<(usize, u64)>], k_max: usize) -> Vec<u64> {
    let per_start: Vec<Vec<u64>> = (0..adj.len())
        .into_par_iter()
        .map(|s| {
            let mut counts = vec![0u64; k_max];
            cycle_dfs(adj, s, k_max, 1, &mut vec![s], &mut counts);
            counts
        })
        .collect();
    let mut total = vec![0u64; k_max];
    for c in per_start {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    total
}

fn cycle_dfs(
    adj: &[Vec<(usize, u64)>],
    s: usize,
    k_max: usize,
    weight: u64,
    path: &mut Vec<usize>,
    counts: &mut [u64],
) {
    let last = *path.last().unwrap();
    for &(u, m) in &adj[last] {
        if u == s && path.len() >= 3 && path[1] < last {
            counts[path.len() - 1] += weight * m;
        }
        if u > s && path.len() < k_max && !path.contains(&u) {
            path.push(u);
            cycle_dfs(adj, s, k_max, weight * m, path, counts);
            path.pop();
        }
    }
}

/// `λ_i = (d-1)^i / (2i)`.
pub fn poisson_cycle_mean(d: usize, i: usize) -> f64 {
    (d as f64 - 1.0).powi(i as i32) / (2.0 * i as f64)
}

/// `Q = Σ_i λ_i i(i - 2)` with `λ_i` the fraction of vertices of degree `i`.
pub fn molloy_reed_q(seq: &DegreeSequence) -> Result<Rational> {
    if seq.is_empty() {
        return Err(LayersError::InvalidConfig("empty degree sequence".into()));
    }
    let s: i64 = seq.degrees().iter().map(|&d| d as i64 * (d as i64 - 2)).sum();
    Ok(rat(s, seq.len() as i64))
}

/// Replacing degrees `(r, r')` by `(r + 1, r' - 1)` lowers `Σ d(d - 2)` by
/// `2(r' - r - 1)`.
pub fn degree_smoothing_step(r: usize, r_prime: usize) -> Result<i64> {
    if r_prime < r + 2 {
        return Err(LayersError::BadOrder(r, r_prime));
    }
    let f = |x: i64| x * (x - 2);
    let (r, rp) = (r as i64, r_prime as i64);
    let before = f(r) + f(rp);
    let after = f(r + 1) + f(rp - 1);
    let claimed = 2 * (rp - r - 1);
    assert_eq!(before - after, claimed, "smoothing identity");
    Ok(claimed)
}

/// How degree sequences of a given length are produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceSpec {
    Regular(usize),
    /// Degrees i.i.d. uniform over the list; parity fixed by redrawing the
    /// last degree.
    Uniform(Vec<usize>),
}

impl SequenceSpec {
    /// `"3"` or `"random:3,4,5"`.
    pub fn parse(text: &str) -> Result<SequenceSpec> {
        let parse_list = |s: &str| -> Result<Vec<usize>> {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| LayersError::Parse(format!("'{t}': {e}"))))
                .collect()
        };
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("random:") {
            let l = parse_list(rest)?;
            if l.is_empty() {
                return Err(LayersError::Parse("empty degree list".into()));
            }
            Ok(SequenceSpec::Uniform(l))
        } else {
            Ok(SequenceSpec::Regular(t.parse().map_err(|e| LayersError::Parse(format!("'{t}': {e}")))?))
        }
    }

    pub fn max_degree(&self) -> usize {
        match self {
            SequenceSpec::Regular(d) => *d,
            SequenceSpec::Uniform(l) => *l.iter().max().unwrap(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DegreeSequence> {
        match self {
            SequenceSpec::Regular(d) => DegreeSequence::regular(n, *d),
            SequenceSpec::Uniform(l) => {
                if n == 0 {
                    return DegreeSequence::new(vec![]);
                }
                let mut degs: Vec<usize> = (0..n).map(|_| l[rng.random_range(0..l.len())]).collect();
                let rest: usize = degs[..n - 1].iter().sum();
                let fits: Vec<usize> = l.iter().copied().filter(|d| (rest + d).is_multiple_of(2)).collect();
                if fits.is_empty() {
                    return Err(LayersError::OddDegreeSum);
                }
                if (rest + degs[n - 1]) % 2 == 1 {
                    degs[n - 1] = fits[rng.random_range(0..fits.len())];
                }
                DegreeSequence::new(degs)
            }
        }
    }
}

pub const SIMPLE_ATTEMPTS: usize = 100_000;

/// Largest component of `T_3` as a fraction of `n`, for one draw of a simple
/// graph with the given degrees.
pub fn t3_largest_fraction<R: Rng + ?Sized>(spec: &SequenceSpec, n: usize, rng: &mut R) -> Result<f64> {
    let seq = spec.sample(n, rng)?;
    let g = simple_graph_from_sequence(&seq, rng, SIMPLE_ATTEMPTS)?;
    Ok(largest_tk_fraction(&g, 3, rng))
}

pub fn largest_tk_fraction<R: Rng + ?Sized>(g: &Graph, k: u32, rng: &mut R) -> f64 {
    if g.n() == 0 {
        return 0.0;
    }
    let ages = sample_ages(g, rng);
    let layers = compute_layers(g, &ages).expect("ages match graph");
    components_of_open(g, &layers.open_mask(k)).largest() as f64 / g.n() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct GiantRow {
    pub n: usize,
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    pub min: f64,
    pub fractions: Vec<f64>,
}

pub fn t3_giant_experiment(spec: &SequenceSpec, sizes: &[usize], trials: usize, seed: u64) -> Result<Vec<GiantRow>> {
    sizes
        .iter()
        .map(|&n| {
            let tag = format!("t3-giant/{n}");
            let fractions = par_trials(trials, |t| t3_largest_fraction(spec, n, &mut trial_rng(seed, &tag, t)))
                .into_iter()
                .collect::<Result<Vec<f64>>>()?;
            let (mean, stderr) = mean_stderr(&fractions);
            let min = fractions.iter().copied().fold(f64::INFINITY, f64::min);
            Ok(GiantRow { n, trials, mean, stderr, min, fractions })
        })
        .collect()
}

/// Relative change of the mean between the two largest sizes.
pub fn giant_relative_change(rows: &[GiantRow]) -> Option<f64> {
    let mut r: Vec<&GiantRow> = rows.iter().collect();
    r.sort_by_key(|x| x.n);
    let [.., a, b] = r.as_slice() else { return None };
    Some((b.mean - a.mean).abs() / a.mean)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub c: f64,
    pub mean: f64,
    pub stderr: f64,
}

/// Largest `T_3` component fraction in `G(n, c/n)` over a grid of `c`.
pub fn er_t3_phase_scan(cs: &[f64], n: usize, trials: usize, seed: u64) -> Vec<PhaseRow> {
    cs.iter()
        .map(|&c| {
            let tag = format!("er-scan/{c}");
            let p = if n > 0 { (c / n as f64).min(1.0) } else { 0.0 };
            let xs = par_trials(trials, |t| {
                let mut rng = trial_rng(seed, &tag, t);
                let g = erdos_renyi(n, p, &mut rng);
                largest_tk_fraction(&g, 3, &mut rng)
            });
            let (mean, stderr) = mean_stderr(&xs);
            PhaseRow { c, mean, stderr }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CycleMeanRow {
    pub i: usize,
    pub mean: f64,
    pub stderr: f64,
    pub poisson: f64,
}

/// Mean cycle counts of configuration-model multigraphs.
pub fn configuration_cycle_means(spec: &SequenceSpec, n: usize, draws: usize, k_max: usize, seed: u64) -> Result<Vec<CycleMeanRow>> {
    let tag = format!("cycles/{n}");
    let censuses = par_trials(draws, |t| -> Result<CycleCensus> {
        let mut rng = trial_rng(seed, &tag, t);
        let seq = spec.sample(n, &mut rng)?;
        count_cycles_multi(&configuration_multigraph(&seq, &mut rng), k_max)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok((1..=k_max)
        .map(|i| {
            let xs: Vec<f64> = censuses.iter().map(|c| c.y(i) as f64).collect();
            let (mean, stderr) = mean_stderr(&xs);
            CycleMeanRow { i, mean, stderr, poisson: poisson_cycle_mean(spec.max_degree(), i) }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_and_loop() {
        assert_eq!(count_cycles(&Graph::complete(3), 3).unwrap().y(3), 1);
        let m = MultiGraph { n: 1, edges: vec![(0, 0)] };
        assert_eq!(count_cycles_multi(&m, 3).unwrap().y(1), 1);
        assert!(matches!(count_cycles(&Graph::cycle(5), 9), Err(LayersError::KTooLarge(9))));
    }

    #[test]
    fn complete_graph_counts() {
        // K_5: 10 triangles, 15 four-cycles, 12 five-cycles
        let c = count_cycles(&Graph::complete(5), 5).unwrap();
        assert_eq!(c.counts, vec![0, 0, 10, 15, 12]);
    }

    #[test]
    fn parallel_edges() {
        // triple edge: 3 two-cycles; triangle with one doubled edge: 2 triangles
        let m = MultiGraph { n: 2, edges: vec![(0, 1), (1, 0), (0, 1)] };
        assert_eq!(count_cycles_multi(&m, 2).unwrap().counts, vec![0, 3]);
        let t = MultiGraph { n: 3, edges: vec![(0, 1), (0, 1), (1, 2), (2, 0)] };
        assert_eq!(count_cycles_multi(&t, 3).unwrap().counts, vec![0, 1, 2]);
    }

    #[test]
    fn q_examples() {
        assert_eq!(molloy_reed_q(&DegreeSequence::regular(6, 3).unwrap()).unwrap(), rat(3, 1));
        assert_eq!(molloy_reed_q(&DegreeSequence::regular(6, 2).unwrap()).unwrap(), rat(0, 1));
        let s = DegreeSequence::new(vec![1, 1, 4, 4]).unwrap();
        assert_eq!(molloy_reed_q(&s).unwrap(), rat(7, 2));
    }

    #[test]
    fn smoothing() {
        assert_eq!(degree_smoothing_step(3, 5).unwrap(), 2);
        assert!(matches!(degree_smoothing_step(3, 4), Err(LayersError::BadOrder(3, 4))));
        for r in 2..=50 {
            for rp in r + 2..=52 {
                degree_smoothing_step(r, rp).unwrap();
            }
        }
    }

    #[test]
    fn mixed_sequence_parity() {
        let spec = SequenceSpec::parse("random:3,4,5").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..40 {
            let s = spec.sample(n, &mut rng).unwrap();
            assert_eq!(s.degrees().iter().sum::<usize>() % 2, 0);
            assert!(s.degrees().iter().all(|d| (3..=5).contains(d)));
        }
        assert!(SequenceSpec::parse("random:3").unwrap().sample(3, &mut rng).is_err());
    }

    #[test]
    fn simple_graphs_have_no_short_multicycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = simple_graph_from_sequence(&DegreeSequence::regular(200, 3).unwrap(), &mut rng, 1000).unwrap();
        let c = count_cycles(&g, 4).unwrap();
        assert_eq!((c.y(1), c.y(2)), (0, 0));
    }
}
