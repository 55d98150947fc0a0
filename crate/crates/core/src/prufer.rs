//! The Prüfer bijection, the weighted random tree, and pendant subtrees.
//!
//! Encoding removes the smallest-labelled leaf at each step and records its
//! neighbour, so vertex `i` occurs exactly `d_T(i) - 1` times in the code of
//! `T`. Drawing the `n - 2` code entries i.i.d. with `P(Z = i) = w_i / W` and
//! decoding gives a tree with law `mass(T) / K'`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forest::{mass_of_degrees, Forest};
use crate::graph::{BitIter, Edge};
use crate::limits;
use crate::weights::WeightVector;

/// Decodes a 0-based code of length `n - 2` into `n - 1` edges (0-based).
pub(crate) fn decode_into(n: usize, code: &[usize], out: &mut Vec<(usize, usize)>) {
    debug_assert!(n >= 2 && code.len() == n - 2);
    out.clear();
    let mut degree = vec![1usize; n];
    for &v in code {
        degree[v] += 1;
    }
    let mut ptr = degree
        .iter()
        .position(|&d| d == 1)
        .expect("a tree has a leaf");
    let mut leaf = ptr;
    for &v in code {
        out.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 && v < ptr {
            leaf = v;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    out.push((leaf.min(n - 1), leaf.max(n - 1)));
}

/// A Prüfer sequence in `{1..n}^{n-2}` for a tree on `n >= 2` vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrueferCode {
    n: usize,
    seq: Vec<usize>,
}

impl PrueferCode {
    pub fn new(n: usize, seq: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "Prüfer codes need at least 2 vertices".into(),
            ));
        }
        if seq.len() != n - 2 {
            return Err(Error::LengthMismatch {
                expected: n - 2,
                actual: seq.len(),
            });
        }
        if let Some(&bad) = seq.iter().find(|&&z| z == 0 || z > n) {
            return Err(Error::MalformedInput(format!(
                "code entry {bad} outside 1..={n}"
            )));
        }
        Ok(PrueferCode { n, seq })
    }

    /// Parses the comma-joined form (empty string for `n = 2`).
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let seq = if s.trim().is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::MalformedInput(format!("bad code entry {p:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::new(n, seq)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seq(&self) -> &[usize] {
        &self.seq
    }

    /// `n_v(z)`, the number of entries equal to `v`.
    pub fn occurrences(&self, v: usize) -> usize {
        self.seq.iter().filter(|&&z| z == v).count()
    }

    /// Rank among all `n^{n-2}` codes in lexicographic order.
    pub fn index(&self) -> u64 {
        self.seq
            .iter()
            .fold(0u64, |acc, &z| acc * self.n as u64 + (z - 1) as u64)
    }

    pub fn from_index(n: usize, mut index: u64) -> Result<Self> {
        let len = n.checked_sub(2).ok_or_else(|| {
            Error::InvalidArgument("Prüfer codes need at least 2 vertices".into())
        })?;
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = (index % n as u64) as usize + 1;
            index /= n as u64;
        }
        if index != 0 {
            return Err(Error::InvalidArgument("code index out of range".into()));
        }
        Self::new(n, seq)
    }
}

impl fmt::Display for PrueferCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.seq.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn encode(t: &Forest) -> Result<PrueferCode> {
    let n = t.n();
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the single-vertex tree has no Prüfer code".into(),
        ));
    }
    // Root at the largest label; parent[v] is v's neighbour towards it.
    let g = t.graph();
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![n - 1];
    let mut seen = 1u64 << (n - 1);
    while let Some(v) = stack.pop() {
        for w in BitIter(g.neighbour_mask(v + 1) & !seen) {
            parent[w] = v;
            seen |= 1 << w;
            stack.push(w);
        }
    }
    let mut degree: Vec<usize> = t.degrees().to_vec();
    let mut ptr = degree
        .iter()
        .position(|&d| d == 1)
        .expect("a tree has a leaf");
    let mut leaf = ptr;
    let mut seq = Vec::with_capacity(n - 2);
    for _ in 0..n - 2 {
        let next = parent[leaf];
        seq.push(next + 1);
        degree[next] -= 1;
        if degree[next] == 1 && next < ptr {
            leaf = next;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    PrueferCode::new(n, seq)
}

pub fn decode(z: &PrueferCode) -> Forest {
    let code: Vec<usize> = z.seq.iter().map(|&v| v - 1).collect();
    let mut edges = Vec::with_capacity(z.n - 1);
    decode_into(z.n, &code, &mut edges);
    Forest::from_edges(z.n, edges.into_iter().map(|(a, b)| (a + 1, b + 1)))
        .expect("decoded Prüfer codes are trees")
}

/// All `n^{n-2}` labelled trees on `{1..n}` in code order.
///
/// `n = 1` yields the single-vertex tree.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = Forest>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    limits::check(n, limits::forest_cap())?;
    let total = if n == 1 {
        1
    } else {
        (n as u64).pow(n as u32 - 2)
    };
    Ok((0..total).map(move |i| {
        if n == 1 {
            Forest::edgeless(1).expect("n = 1 is valid")
        } else {
            decode(&PrueferCode::from_index(n, i).expect("index below n^(n-2)"))
        }
    }))
}

/// Samples trees with `P(T) = mass(T) / K'` through i.i.d. code entries.
#[derive(Clone, Debug)]
pub struct TreeSampler {
    weights: WeightVector,
    alias: Option<WeightedAliasIndex<u64>>,
}

/// Dense per-code sample counts (indexed by [`PrueferCode::index`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleCounts {
    pub n: usize,
    pub seed: u64,
    pub samples: u64,
    pub counts: Vec<u64>,
}

impl SampleCounts {
    pub fn iter(&self) -> impl Iterator<Item = (PrueferCode, u64)> + '_ {
        self.counts.iter().enumerate().map(move |(i, &c)| {
            (
                PrueferCode::from_index(self.n, i as u64).expect("dense index"),
                c,
            )
        })
    }
}

const SAMPLE_CHUNK: u64 = 1 << 16;

/// Largest `n` whose `n^{n-2}` code table is counted densely.
pub const DENSE_COUNT_CAP: usize = 8;

impl TreeSampler {
    pub fn new(w: &WeightVector) -> Result<Self> {
        let alias = if w.len() >= 3 {
            Some(
                WeightedAliasIndex::new(w.weights().to_vec())
                    .map_err(|e| Error::InvalidArgument(format!("alias table: {e}")))?,
            )
        } else {
            None
        };
        Ok(TreeSampler {
            weights: w.clone(),
            alias,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    fn draw_code<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<usize>) {
        out.clear();
        if let Some(alias) = &self.alias {
            out.extend((0..self.weights.len() - 2).map(|_| alias.sample(rng)));
        }
    }

    /// One i.i.d. code `Z_1..Z_{n-2}`; needs `n >= 2`.
    pub fn sample_code<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PrueferCode> {
        let mut code = Vec::new();
        self.draw_code(rng, &mut code);
        PrueferCode::new(
            self.weights.len(),
            code.into_iter().map(|z| z + 1).collect(),
        )
    }

    /// One random tree. For `n = 1` this is the single vertex.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Forest {
        if self.weights.len() == 1 {
            return Forest::edgeless(1).expect("n = 1 is valid");
        }
        decode(&self.sample_code(rng).expect("n >= 2"))
    }

    /// Counts `samples` codes drawn from the seeded stream.
    ///
    /// Samples are cut into fixed chunks of 2^16; chunk `c` uses ChaCha8
    /// seeded with `seed` on stream `c`, so counts do not depend on how many
    /// threads run the chunks.
    pub fn sample_counts(&self, seed: u64, samples: u64) -> Result<SampleCounts> {
        let n = self.weights.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "code sampling needs at least 2 vertices".into(),
            ));
        }
        limits::check(n, DENSE_COUNT_CAP)?;
        let cells = (n as u64).pow(n as u32 - 2) as usize;
        let chunks = samples.div_ceil(SAMPLE_CHUNK);
        let counts = (0..chunks)
            .into_par_iter()
            .fold(
                || vec![0u64; cells],
                |mut acc, chunk| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(chunk);
                    let len = SAMPLE_CHUNK.min(samples - chunk * SAMPLE_CHUNK);
                    let mut code = Vec::with_capacity(n);
                    for _ in 0..len {
                        self.draw_code(&mut rng, &mut code);
                        let idx = code.iter().fold(0usize, |a, &z| a * n + z);
                        acc[idx] += 1;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; cells],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(SampleCounts {
            n,
            seed,
            samples,
            counts,
        })
    }
}

/// Exact law `mass(T) / K'` of every tree, indexed by code rank.
pub fn tree_law(w: &WeightVector) -> Result<Vec<Rational>> {
    let n = w.len();
    if n < 2 {
        return Err(Error::InvalidArgument("tree law needs n >= 2".into()));
    }
    limits::check(n, DENSE_COUNT_CAP)?;
    let masses: Vec<BigUint> = enumerate_trees(n)?
        .map(|t| mass_of_degrees(t.degrees(), w.weights()))
        .collect();
    let k_tree = exact::from_uint(&masses.iter().sum());
    Ok(masses
        .iter()
        .map(|m| exact::from_uint(m) / &k_tree)
        .collect())
}

/// Pearson goodness-of-fit summary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson chi-square of `observed` counts against cell probabilities.
/// Cells with zero probability are skipped.
pub fn chi_square(observed: &[u64], probabilities: &[f64]) -> Result<ChiSquare> {
    if observed.len() != probabilities.len() {
        return Err(Error::LengthMismatch {
            expected: probabilities.len(),
            actual: observed.len(),
        });
    }
    let total: u64 = observed.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(probabilities) {
        if p > 0.0 {
            let expected = total as f64 * p;
            statistic += (o as f64 - expected).powi(2) / expected;
            cells += 1;
        }
    }
    if cells < 2 {
        return Ok(ChiSquare {
            statistic,
            degrees_of_freedom: 0,
            p_value: 1.0,
        });
    }
    let df = cells - 1;
    let dist = ChiSquared::new(df as f64)
        .map_err(|e| Error::InvalidArgument(format!("chi-square: {e}")))?;
    Ok(ChiSquare {
        statistic,
        degrees_of_freedom: df,
        p_value: dist.sf(statistic),
    })
}

/// One edge of a tree with its lighter side `s(T, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantRecord {
    pub edge: Edge,
    /// Vertex bitset of `s(T, e)` (bit `v - 1` for vertex `v`).
    pub side_mask: u64,
    pub weight: u64,
}

impl PendantRecord {
    pub fn side(&self) -> Vec<usize> {
        BitIter(self.side_mask).map(|b| b + 1).collect()
    }
}

/// Pendant-subtree census of one tree: `s(T, e)` per edge and `c(T, k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantCensus {
    records: Vec<PendantRecord>,
    histogram: Vec<usize>,
}

impl PendantCensus {
    pub fn records(&self) -> &[PendantRecord] {
        &self.records
    }

    /// `c(T, k)`; zero outside `1..=floor(W/2)`.
    pub fn count(&self, k: u64) -> usize {
        self.histogram.get(k as usize).copied().unwrap_or(0)
    }

    /// `c(T, 0), ..., c(T, floor(W/2))` (entry 0 is always zero).
    pub fn histogram(&self) -> &[usize] {
        &self.histogram
    }
}

/// The two vertex sets of `T - e` for every edge `e`, as bitsets.
fn edge_splits(t: &Forest) -> impl Iterator<Item = (Edge, u64, u64)> + '_ {
    let g = t.graph();
    let all = if t.n() == 64 {
        u64::MAX
    } else {
        (1u64 << t.n()) - 1
    };
    g.edges().iter().map(move |&e| {
        let (u, v) = (e.u() - 1, e.v() - 1);
        let mut side = 1u64 << u;
        let mut frontier = side;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let mut next = g.neighbour_mask(x + 1) & !side;
            if x == u {
                next &= !(1 << v);
            }
            side |= next;
            frontier |= next;
        }
        (e, side, all & !side)
    })
}

pub fn pendant_census(t: &Forest, w: &WeightVector) -> Result<PendantCensus> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if w.len() != t.n() {
        return Err(Error::LengthMismatch {
            expected: t.n(),
            actual: w.len(),
        });
    }
    let total = w.total();
    let mut histogram = vec![0usize; (total / 2) as usize + 1];
    let records = edge_splits(t)
        .map(|(edge, a, b)| {
            let (wa, wb) = (w.weight_of_mask(a), w.weight_of_mask(b));
            // Lighter side; on a tie, the side holding vertex 1.
            let side_mask = match wa.cmp(&wb) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal if a & 1 == 1 => a,
                std::cmp::Ordering::Equal => b,
            };
            let weight = wa.min(wb);
            histogram[weight as usize] += 1;
            PendantRecord {
                edge,
                side_mask,
                weight,
            }
        })
        .collect();
    Ok(PendantCensus { records, histogram })
}

fn subset_mask(vertices: &[usize], n: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &v in vertices {
        if v == 0 || v > n {
            return Err(Error::MalformedInput(format!("vertex {v} outside 1..={n}")));
        }
        if mask >> (v - 1) & 1 == 1 {
            return Err(Error::MalformedInput(format!("vertex {v} repeated")));
        }
        mask |= 1 << (v - 1);
    }
    if mask == 0 || mask.count_ones() as usize == n {
        return Err(Error::EmptyOrFullSet);
    }
    Ok(mask)
}

fn pendant_closed_form(size: usize, weight: u64, n: usize, total: u64) -> Rational {
    let frac = exact::ratio(weight, total);
    let rest = exact::ratio(total - weight, total);
    num_traits::pow(frac, size - 1) * num_traits::pow(rest, n - size - 1)
}

/// `P(P_I) = (w(I)/W)^{|I|-1} (1 - w(I)/W)^{n-|I|-1}` for `∅ ⊂ I ⊂ [n]`.
pub fn pendant_probability(vertices: &[usize], w: &WeightVector) -> Result<Rational> {
    let n = w.len();
    let mask = subset_mask(vertices, n)?;
    Ok(pendant_closed_form(
        mask.count_ones() as usize,
        w.weight_of_mask(mask),
        n,
        w.total(),
    ))
}

/// `P(P_I)` by summing `mass(T) / K'` over every tree having a pendant
/// subtree with vertex set exactly `I`.
pub fn pendant_probability_by_enumeration(
    vertices: &[usize],
    w: &WeightVector,
) -> Result<Rational> {
    let n = w.len();
    let mask = subset_mask(vertices, n)?;
    limits::check(n, limits::identity_cap())?;
    let mut hit = BigUint::zero();
    let mut all = BigUint::zero();
    for t in enumerate_trees(n)? {
        let m = mass_of_degrees(t.degrees(), w.weights());
        if edge_splits(&t).any(|(_, a, b)| a == mask || b == mask) {
            hit += &m;
        }
        all += m;
    }
    Ok(exact::from_uint(&hit) / exact::from_uint(&all))
}

/// Counts subsets `I` with `w(I) = k`, grouped by `|I|`, pruning on weight.
pub fn subsets_of_weight(w: &WeightVector, k: u64) -> Result<Vec<u64>> {
    let n = w.len();
    limits::check(n, limits::SUBSET_CAP)?;
    fn walk(w: &[u64], from: usize, remaining: u64, size: usize, out: &mut [u64]) {
        if remaining == 0 {
            out[size] += 1;
            return;
        }
        for i in from..w.len() {
            if w[i] <= remaining {
                walk(w, i + 1, remaining - w[i], size + 1, out);
            }
        }
    }
    let mut by_size = vec![0u64; n + 1];
    if k > 0 {
        walk(w.weights(), 0, k, 0, &mut by_size);
    } else {
        by_size[0] = 1;
    }
    Ok(by_size)
}

/// `E[c(T, k)] = sum over I with w(I) = k of P(P_I)`, for `1 <= k < W/2`.
pub fn expected_census(w: &WeightVector, k: u64) -> Result<Rational> {
    let total = w.total();
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if 2 * k == total {
        return Err(Error::TieWeightUnsupported { k });
    }
    if 2 * k > total {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must be below W/2 = {total}/2"
        )));
    }
    let n = w.len();
    let by_size = subsets_of_weight(w, k)?;
    Ok(by_size
        .iter()
        .enumerate()
        .filter(|&(size, &count)| count > 0 && size >= 1 && size < n)
        .map(|(size, &count)| exact::from_u64(count) * pendant_closed_form(size, k, n, total))
        .sum())
}

/// `E[c(T, k)]` for `k = 0..=floor(W/2)` by weighting every tree's census.
pub fn census_expectations_by_enumeration(w: &WeightVector) -> Result<Vec<Rational>> {
    let n = w.len();
    limits::check(n, limits::identity_cap())?;
    let half = (w.total() / 2) as usize;
    let mut weighted = vec![BigUint::zero(); half + 1];
    let mut all = BigUint::zero();
    for t in enumerate_trees(n)? {
        let m = mass_of_degrees(t.degrees(), w.weights());
        let census = pendant_census(&t, w)?;
        for (k, &c) in census.histogram().iter().enumerate() {
            if c > 0 {
                weighted[k] += &m * BigUint::from(c);
            }
        }
        all += m;
    }
    let all = exact::from_uint(&all);
    Ok(weighted
        .iter()
        .map(|x| exact::from_uint(x) / &all)
        .collect())
}

/// `E[c(T, k)]` by enumeration; covers the tie weight `k = W/2` too.
pub fn expected_census_by_enumeration(w: &WeightVector, k: u64) -> Result<Rational> {
    Ok(census_expectations_by_enumeration(w)?
        .get(k as usize)
        .cloned()
        .unwrap_or_else(Rational::zero))
}
