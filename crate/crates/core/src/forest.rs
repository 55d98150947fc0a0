//! Labelled forests and the degree-weighted mass measure.
//!
//! A forest `F` on `{1..n}` has mass `prod_i w_i^{d_F(i)}`; the random forest
//! `F_w` picks `F` with probability `mass(F) / K`, where `K` sums the mass of
//! every forest. Everything here is exact.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::graph::{components, ComponentPartition, Edge, LabelledGraph};
use crate::limits;
use crate::prufer::decode_into;
use crate::weights::WeightVector;

/// An acyclic labelled graph with its degree sequence and component count.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Forest {
    graph: LabelledGraph,
    degrees: Vec<usize>,
    components: usize,
}

impl Forest {
    pub fn new(graph: LabelledGraph) -> Result<Self> {
        let components = graph.component_count();
        if graph.edge_count() + components != graph.n() {
            return Err(Error::NotAForest);
        }
        let degrees = (1..=graph.n()).map(|v| graph.degree(v)).collect();
        Ok(Forest {
            graph,
            degrees,
            components,
        })
    }

    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::new(LabelledGraph::new(n, pairs)?)
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(LabelledGraph::empty(n)?)
    }

    pub fn graph(&self) -> &LabelledGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> &[Edge] {
        self.graph.edges()
    }

    /// `d_F(1), ..., d_F(n)`.
    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v - 1]
    }

    /// `kappa(F)`.
    pub fn component_count(&self) -> usize {
        self.components
    }

    pub fn is_tree(&self) -> bool {
        self.components == 1
    }

    pub fn partition(&self) -> ComponentPartition {
        components(&self.graph)
    }

    /// `w(T)` for each component `T`, in canonical component order.
    pub fn component_weights(&self, w: &WeightVector) -> Vec<u64> {
        self.partition()
            .masks()
            .iter()
            .map(|&m| w.weight_of_mask(m))
            .collect()
    }
}

fn check_len(n: usize, w: &WeightVector) -> Result<()> {
    if w.len() != n {
        Err(Error::LengthMismatch {
            expected: n,
            actual: w.len(),
        })
    } else {
        Ok(())
    }
}

/// `mass_w(F) = prod_i w_i^{d_F(i)}`.
pub fn mass(f: &Forest, w: &WeightVector) -> Result<BigUint> {
    check_len(f.n(), w)?;
    Ok(mass_of_degrees(f.degrees(), w.weights()))
}

pub(crate) fn mass_of_degrees(degrees: &[usize], w: &[u64]) -> BigUint {
    let mut small: Option<u128> = Some(1);
    for (&d, &x) in degrees.iter().zip(w) {
        for _ in 0..d {
            small = small.and_then(|m| m.checked_mul(x as u128));
        }
    }
    match small {
        Some(m) => BigUint::from(m),
        None => degrees.iter().zip(w).fold(BigUint::one(), |acc, (&d, &x)| {
            acc * BigUint::from(x).pow(d as u32)
        }),
    }
}

/// Restricted growth strings of length `n`, i.e. set partitions of `{0..n}`.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut a = vec![0usize; n];
    loop {
        out.push(a.clone());
        // Rightmost position that may still be incremented.
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = a[..i].iter().copied().max().unwrap_or(0);
            if a[i] <= prefix_max {
                a[i] += 1;
                for x in &mut a[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Walks every forest whose component vertex sets are the blocks of one set
/// partition: one Prüfer code per block, advanced as a mixed-radix counter.
pub(crate) struct PartitionCursor {
    blocks: Vec<Vec<usize>>,
    codes: Vec<Vec<usize>>,
    scratch: Vec<(usize, usize)>,
}

impl PartitionCursor {
    pub(crate) fn new(rgs: &[usize]) -> Self {
        let count = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (v, &b) in rgs.iter().enumerate() {
            blocks[b].push(v);
        }
        let codes = blocks
            .iter()
            .map(|b| vec![0; b.len().saturating_sub(2)])
            .collect();
        PartitionCursor {
            blocks,
            codes,
            scratch: Vec::new(),
        }
    }

    pub(crate) fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Appends the current forest's edges (0-based endpoints) to `out`.
    pub(crate) fn fill_edges(&mut self, out: &mut Vec<(usize, usize)>) {
        out.clear();
        for (block, code) in self.blocks.iter().zip(&self.codes) {
            match block.len() {
                1 => {}
                2 => out.push((block[0], block[1])),
                s => {
                    decode_into(s, code, &mut self.scratch);
                    out.extend(self.scratch.iter().map(|&(a, b)| (block[a], block[b])));
                }
            }
        }
    }

    /// Moves to the next combination of codes; false once all are exhausted.
    pub(crate) fn advance(&mut self) -> bool {
        for (block, code) in self.blocks.iter().zip(self.codes.iter_mut()) {
            let radix = block.len();
            for digit in code.iter_mut() {
                *digit += 1;
                if *digit < radix {
                    return true;
                }
                *digit = 0;
            }
        }
        false
    }
}

/// Streams every forest on `{1..n}` exactly once.
///
/// Forests are produced block partition by block partition; within a
/// partition each block carries an independent Prüfer code.
pub struct ForestIter {
    n: usize,
    partitions: std::vec::IntoIter<Vec<usize>>,
    cursor: Option<PartitionCursor>,
    edges: Vec<(usize, usize)>,
}

impl Iterator for ForestIter {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        let cursor = self.cursor.as_mut()?;
        cursor.fill_edges(&mut self.edges);
        if !cursor.advance() {
            self.cursor = self.partitions.next().map(|p| PartitionCursor::new(&p));
        }
        let forest = Forest::from_edges(self.n, self.edges.iter().map(|&(a, b)| (a + 1, b + 1)))
            .expect("decoded block trees always form a forest");
        Some(forest)
    }
}

pub fn enumerate_forests(n: usize) -> Result<ForestIter> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    limits::check(n, limits::forest_cap())?;
    let mut partitions = set_partitions(n).into_iter();
    let cursor = partitions.next().map(|p| PartitionCursor::new(&p));
    Ok(ForestIter {
        n,
        partitions,
        cursor,
        edges: Vec::new(),
    })
}

/// Exact law of the component count of `F_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassDistribution {
    weights: WeightVector,
    partition_function: BigUint,
    masses: Vec<BigUint>,
    counts: Vec<u64>,
}

impl MassDistribution {
    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `K`, the total mass of all forests.
    pub fn partition_function(&self) -> &BigUint {
        &self.partition_function
    }

    /// `M_1, ..., M_n`.
    pub fn masses(&self) -> &[BigUint] {
        &self.masses
    }

    /// `M_i`, the total mass of forests with `i` components (zero outside `1..=n`).
    pub fn component_mass(&self, i: usize) -> BigUint {
        if i == 0 || i > self.masses.len() {
            BigUint::zero()
        } else {
            self.masses[i - 1].clone()
        }
    }

    /// `P(F in F_{n,i}) = M_i / K`.
    pub fn probability(&self, i: usize) -> Rational {
        exact::from_uint(&self.component_mass(i)) / exact::from_uint(&self.partition_function)
    }

    pub fn p_connected(&self) -> Rational {
        self.probability(1)
    }

    /// Number of forests (unweighted) with `i` components.
    pub fn forest_count_with(&self, i: usize) -> u64 {
        if i == 0 || i > self.counts.len() {
            0
        } else {
            self.counts[i - 1]
        }
    }

    pub fn forest_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn tree_count(&self) -> u64 {
        self.forest_count_with(1)
    }
}

/// Computes `K` and `M_1..M_n` by enumerating every forest.
///
/// Work is split by set partition across the rayon pool; sums are exact so
/// the result does not depend on the thread count.
pub fn mass_distribution(w: &WeightVector) -> Result<MassDistribution> {
    let n = w.len();
    limits::check(n, limits::forest_cap())?;
    let per_partition: Vec<(usize, BigUint, u64)> = set_partitions(n)
        .par_iter()
        .map(|rgs| {
            let mut cursor = PartitionCursor::new(rgs);
            let mut edges = Vec::with_capacity(n);
            let mut degrees = vec![0usize; n];
            let mut total = BigUint::zero();
            let mut small: u128 = 0;
            let mut count = 0u64;
            loop {
                cursor.fill_edges(&mut edges);
                degrees.iter_mut().for_each(|d| *d = 0);
                for &(a, b) in &edges {
                    degrees[a] += 1;
                    degrees[b] += 1;
                }
                let m = mass_of_degrees(&degrees, w.weights());
                match u128::try_from(&m).ok().and_then(|m| small.checked_add(m)) {
                    Some(s) => small = s,
                    None => total += m,
                }
                count += 1;
                if !cursor.advance() {
                    break;
                }
            }
            (cursor.block_count(), total + small, count)
        })
        .collect();

    let mut masses = vec![BigUint::zero(); n];
    let mut counts = vec![0u64; n];
    for (blocks, m, c) in per_partition {
        masses[blocks - 1] += m;
        counts[blocks - 1] += c;
    }
    let partition_function = masses.iter().sum();
    Ok(MassDistribution {
        weights: w.clone(),
        partition_function,
        masses,
        counts,
    })
}

/// `K' = (prod_j w_j) * W^{n-2}`, the total tree mass in closed form.
///
/// For `n = 1` the single-vertex tree has mass 1, which this also returns.
pub fn tree_partition_closed_form(w: &WeightVector) -> BigUint {
    if w.len() == 1 {
        return BigUint::one();
    }
    w.product() * BigUint::from(w.total()).pow(w.len() as u32 - 2)
}

/// Outcome of comparing `P(F_w connected)` with `exp(-n/W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityBound {
    pub p_connected: Rational,
    /// `n / W`.
    pub exponent: Rational,
    /// Rational enclosure of `exp(-n/W)`.
    pub bound_lower: Rational,
    pub bound_upper: Rational,
    pub holds: bool,
}

/// Checks `P(F_w connected) > exp(-n/W)` exactly.
pub fn connectivity_lower_bound_check(w: &WeightVector) -> Result<ConnectivityBound> {
    let dist = mass_distribution(w)?;
    Ok(connectivity_bound_from(
        &dist.p_connected(),
        w.len(),
        w.total(),
    ))
}

pub(crate) fn connectivity_bound_from(p: &Rational, n: usize, total: u64) -> ConnectivityBound {
    let exponent = exact::ratio(n as u64, total);
    let holds = exact::exceeds_exp_neg(p, &exponent);
    let (bound_lower, bound_upper) = exact::exp_neg_enclosure(&exponent, 40);
    ConnectivityBound {
        p_connected: p.clone(),
        exponent,
        bound_lower,
        bound_upper,
        holds,
    }
}
