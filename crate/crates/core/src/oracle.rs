//! Exact probabilities of order events. Every event in the model depends only
//! on the relative order of finitely many ages, so its probability is a count
//! of total orders divided by a factorial.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{LayersError, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub const MAX_ORACLE_VERTICES: usize = 10;

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// Fraction of the `m!` total orders of `m` vertices on which `pred` holds.
/// `pred` receives `rank[i]` for each relevant vertex (0 = youngest).
pub fn permutation_oracle<F>(m: usize, pred: F) -> Result<Rational>
where
    F: Fn(&[u8]) -> bool + Sync,
{
    if m > MAX_ORACLE_VERTICES {
        return Err(LayersError::TooLarge { size: m, max: MAX_ORACLE_VERTICES });
    }
    if m == 0 {
        return Ok(if pred(&[]) { Rational::one() } else { Rational::zero() });
    }
    let hits: u64 = (0..m as u8)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<u8> = (0..m as u8).filter(|&r| r != first).collect();
            let mut ranks = vec![0u8; m];
            ranks[0] = first;
            let mut count = 0u64;
            heap_permutations(&mut rest, |perm| {
                ranks[1..].copy_from_slice(perm);
                if pred(&ranks) {
                    count += 1;
                }
            });
            count
        })
        .sum();
    Ok(Rational::new(BigInt::from(hits), BigInt::from(factorial(m))))
}

/// Heap's algorithm, iterative; visits every permutation of `a` once.
pub fn heap_permutations<T, F: FnMut(&[T])>(a: &mut [T], mut visit: F) {
    let n = a.len();
    visit(a);
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            visit(a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Exact probability of events that compare each "peripheral" vertex only
/// with its adjacent "core" vertices.
///
/// Given the order of the core, a peripheral vertex matters only through the
/// gap between consecutive core ages it falls into. A configuration (core
/// order, gap of each peripheral) with `n_s` peripherals in gap `s` covers
/// `Π n_s!` of the `N!` total orders, so the enumeration runs over core
/// orders times gap occupancies, tracking per-core counts of younger
/// peripheral neighbours (capped at `cap`).
#[derive(Debug, Clone)]
pub struct CorePeripheryOracle {
    pub core: usize,
    /// For each peripheral vertex, the core indices it is adjacent to.
    pub peripherals: Vec<Vec<usize>>,
    pub cap: u8,
}

impl CorePeripheryOracle {
    pub const MAX_CORE: usize = 9;

    /// `pred(core_rank, younger_peripheral_counts)`; counts are capped at `cap`.
    pub fn probability<F>(&self, pred: F) -> Result<Rational>
    where
        F: Fn(&[u8], &[u8]) -> bool + Sync,
    {
        let c = self.core;
        if c == 0 || c > Self::MAX_CORE {
            return Err(LayersError::TooLarge { size: c, max: Self::MAX_CORE });
        }
        let total = c + self.peripherals.len();
        let mut orders: Vec<Vec<u8>> = Vec::new();
        heap_permutations(&mut (0..c as u8).collect::<Vec<_>>(), |p| orders.push(p.to_vec()));
        let fact: Vec<BigUint> = (0..=total).map(factorial).collect();
        let numer: BigUint = orders
            .par_iter()
            .map(|rank| {
                let mut acc = BigUint::zero();
                for ((counts, occ), mult) in self.dp(rank) {
                    if pred(rank, &counts) {
                        let w = occ.iter().fold(BigUint::from(mult), |w, &k| w * &fact[k as usize]);
                        acc += w;
                    }
                }
                acc
            })
            .reduce(BigUint::zero, |a, b| a + b);
        Ok(Rational::new(BigInt::from(numer), BigInt::from(fact[total].clone())))
    }

    fn dp(&self, rank: &[u8]) -> HashMap<(Vec<u8>, Vec<u8>), u128> {
        let c = self.core;
        let mut states: HashMap<(Vec<u8>, Vec<u8>), u128> = HashMap::new();
        states.insert((vec![0; c], vec![0; c + 1]), 1);
        for nbrs in &self.peripherals {
            let mut next: HashMap<(Vec<u8>, Vec<u8>), u128> = HashMap::with_capacity(states.len() * 2);
            for ((counts, occ), mult) in &states {
                for s in 0..=c {
                    let mut nc = counts.clone();
                    for &j in nbrs {
                        // peripheral in gap s is younger than core j iff s <= rank[j]
                        if s <= rank[j] as usize && nc[j] < self.cap {
                            nc[j] += 1;
                        }
                    }
                    let mut no = occ.clone();
                    no[s] += 1;
                    *next.entry((nc, no)).or_insert(0) += mult;
                }
            }
            states = next;
        }
        states
    }
}
