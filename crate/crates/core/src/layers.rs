//! Ages, layer indices and the induced subgraphs `T_k`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{LayersError, Result};
use crate::graph::{components_of_open, Graph, LatticePoint};

/// Injective ages stored as ranks: `rank[v] = 0` is the youngest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgeAssignment {
    rank: Vec<u32>,
}

impl AgeAssignment {
    pub fn from_ranks(rank: Vec<u32>) -> Result<AgeAssignment> {
        let mut seen = vec![false; rank.len()];
        for &r in &rank {
            let i = r as usize;
            if i >= rank.len() || seen[i] {
                return Err(LayersError::TiesDetected(format!("rank {r}"), "another vertex".into()));
            }
            seen[i] = true;
        }
        Ok(AgeAssignment { rank })
    }

    /// Ranks of arbitrary real ages. Equal values are rejected.
    pub fn from_values(values: &[f64]) -> Result<AgeAssignment> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        if let Some(w) = order.windows(2).find(|w| values[w[0]] == values[w[1]]) {
            return Err(LayersError::TiesDetected(w[0].to_string(), w[1].to_string()));
        }
        let mut rank = vec![0u32; values.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i as u32;
        }
        Ok(AgeAssignment { rank })
    }

    pub fn rank(&self, v: usize) -> u32 {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn younger(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }
}

/// Uniformly random order of `V(g)`.
pub fn sample_ages<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> AgeAssignment {
    sample_ranks(g.n(), rng)
}

pub fn sample_ranks<R: Rng + ?Sized>(n: usize, rng: &mut R) -> AgeAssignment {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut rank = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i as u32;
    }
    AgeAssignment { rank }
}

/// `layer[v] = 1 + #{u ~ v : u younger than v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerResult {
    pub layer: Vec<u32>,
}

impl LayerResult {
    pub fn open_mask(&self, k: u32) -> Vec<bool> {
        self.layer.iter().map(|&l| l <= k).collect()
    }
}

pub fn compute_layers(g: &Graph, ages: &AgeAssignment) -> Result<LayerResult> {
    if ages.len() != g.n() {
        return Err(LayersError::InvalidConfig(format!(
            "{} ages for {} vertices",
            ages.len(),
            g.n()
        )));
    }
    let layer = (0..g.n())
        .map(|v| 1 + g.neighbors(v).iter().filter(|&&u| ages.younger(u, v)).count() as u32)
        .collect();
    Ok(LayerResult { layer })
}

/// Open vertex set `{v : layer(v) <= k}` and the subgraph it induces.
#[derive(Debug, Clone)]
pub struct TkSubgraph {
    pub k: u32,
    pub open: Vec<bool>,
    pub graph: Graph,
    /// `vertices[i]` is the host id of subgraph vertex `i`.
    pub vertices: Vec<usize>,
}

pub fn extract_tk(g: &Graph, layers: &LayerResult, k: u32) -> TkSubgraph {
    assert!(k >= 1, "k must be at least 1");
    let open = layers.open_mask(k);
    let (graph, vertices) = g.induced(&open);
    TkSubgraph { k, open, graph, vertices }
}

/// Size of the largest component of `T_k` without materialising it.
pub fn tk_largest_component(g: &Graph, layers: &LayerResult, k: u32) -> usize {
    components_of_open(g, &layers.open_mask(k)).largest()
}

/// CSV rows `vertex,age_rank,layer`.
pub fn sample_csv(ages: &AgeAssignment, layers: &LayerResult) -> String {
    let mut s = String::from("vertex,age_rank,layer\n");
    for v in 0..ages.len() {
        s.push_str(&format!("{v},{},{}\n", ages.rank(v), layers.layer[v]));
    }
    s
}

/// Keyed hash of lattice coordinates to a 64-bit age.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LazyAgeSource {
    pub seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl LazyAgeSource {
    pub fn new(seed: u64) -> LazyAgeSource {
        LazyAgeSource { seed }
    }

    pub fn age_of(&self, coords: &[i64]) -> u64 {
        let mut h = splitmix(self.seed ^ splitmix(coords.len() as u64));
        for &c in coords {
            h = splitmix(h ^ c as u64);
        }
        h
    }
}

pub fn lazy_age(src: &LazyAgeSource, p: &LatticePoint) -> u64 {
    src.age_of(&p.0)
}

/// `1 + #{younger lattice neighbours}` under lazy ages.
pub fn lattice_layer(src: &LazyAgeSource, p: &LatticePoint) -> Result<usize> {
    let own = lazy_age(src, p);
    let mut younger = 0;
    for q in p.neighbors() {
        let a = lazy_age(src, &q);
        if a == own {
            return Err(LayersError::TiesDetected(format!("{:?}", p.0), format!("{:?}", q.0)));
        }
        if a < own {
            younger += 1;
        }
    }
    Ok(1 + younger)
}

pub fn lattice_layer_of(src: &LazyAgeSource, p: &LatticePoint, k: usize) -> Result<bool> {
    Ok(lattice_layer(src, p)? <= k)
}
