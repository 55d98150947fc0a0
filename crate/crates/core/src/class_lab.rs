//! Explicit classes of labelled graphs on `{1..n}`, `n <= 6`.
//!
//! A class is a bitset over the `2^{C(n,2)}` edge masks. Predicates quantify
//! over members (and, for bridge-alterability, over every graph on `{1..n}`),
//! so the whole universe is materialised.

use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forest::{connectivity_bound_from, mass_distribution};
use crate::graph::{
    bridge_core, components, find_bridges, pair_count, pair_index, Edge, LabelledGraph,
};
use crate::limits::{self, CLASS_CAP};
use crate::weights::WeightVector;

/// Per-mask facts shared by every class on the same `n`.
#[derive(Clone, Debug)]
struct GraphInfo {
    /// Bit `v - 1` set for each vertex in the component of vertex `v`.
    component_of: [u64; CLASS_CAP],
    component_count: u8,
    bridges: u64,
    core: u64,
}

fn universe(n: usize) -> &'static [GraphInfo] {
    static CACHE: [OnceLock<Vec<GraphInfo>>; CLASS_CAP + 1] =
        [const { OnceLock::new() }; CLASS_CAP + 1];
    CACHE[n].get_or_init(|| {
        (0..1u64 << pair_count(n))
            .into_par_iter()
            .map(|mask| {
                let g = LabelledGraph::from_mask(n, mask).expect("mask within universe");
                let parts = components(&g);
                let mut component_of = [0u64; CLASS_CAP];
                for v in 1..=n {
                    component_of[v - 1] = parts.masks()[parts.block_of(v)];
                }
                let bridges = find_bridges(&g)
                    .iter()
                    .fold(0u64, |m, e| m | 1 << pair_index(n, e.u(), e.v()));
                GraphInfo {
                    component_of,
                    component_count: parts.len() as u8,
                    bridges,
                    core: mask & !bridges,
                }
            })
            .collect()
    })
}

fn edge_of_bit(n: usize, bit: usize) -> Edge {
    let mut b = 0;
    for u in 1..=n {
        for v in u + 1..=n {
            if b == bit {
                return Edge::new(u, v).expect("distinct");
            }
            b += 1;
        }
    }
    unreachable!("bit {bit} outside C({n},2)")
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    limits::check(n, CLASS_CAP)
}

/// A set of labelled graphs on `{1..n}`, indexed by edge mask.
#[derive(Clone, PartialEq, Eq)]
pub struct GraphClass {
    n: usize,
    members: Vec<u64>,
}

impl GraphClass {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        let words = (1usize << pair_count(n)).div_ceil(64);
        Ok(GraphClass {
            n,
            members: vec![0; words],
        })
    }

    pub fn from_predicate(n: usize, keep: impl Fn(&LabelledGraph) -> bool) -> Result<Self> {
        let mut class = Self::empty(n)?;
        for mask in 0..class.universe_size() {
            if keep(&LabelledGraph::from_mask(n, mask)?) {
                class.insert_mask(mask);
            }
        }
        Ok(class)
    }

    pub fn from_graphs<'a>(
        n: usize,
        graphs: impl IntoIterator<Item = &'a LabelledGraph>,
    ) -> Result<Self> {
        let mut class = Self::empty(n)?;
        for g in graphs {
            class.insert(g)?;
        }
        Ok(class)
    }

    pub fn all_graphs(n: usize) -> Result<Self> {
        Self::from_predicate(n, |_| true)
    }

    pub fn forests(n: usize) -> Result<Self> {
        Self::from_predicate(n, |g| g.edge_count() + g.component_count() == g.n())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn universe_size(&self) -> u64 {
        1 << pair_count(self.n)
    }

    pub fn insert(&mut self, g: &LabelledGraph) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: g.n(),
            });
        }
        Ok(self.insert_mask(g.to_mask()))
    }

    /// Adds a graph by edge mask; returns whether it was new.
    pub fn insert_mask(&mut self, mask: u64) -> bool {
        let (word, bit) = ((mask / 64) as usize, mask % 64);
        let fresh = self.members[word] >> bit & 1 == 0;
        self.members[word] |= 1 << bit;
        fresh
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.members
            .get((mask / 64) as usize)
            .is_some_and(|w| w >> (mask % 64) & 1 == 1)
    }

    pub fn contains(&self, g: &LabelledGraph) -> bool {
        g.n() == self.n && self.contains_mask(g.to_mask())
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(|&w| w == 0)
    }

    /// Member edge masks in increasing order.
    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().enumerate().flat_map(|(i, &word)| {
            crate::graph::BitIter(word).map(move |b| i as u64 * 64 + b as u64)
        })
    }

    pub fn graphs(&self) -> impl Iterator<Item = LabelledGraph> + '_ {
        self.masks()
            .map(|m| LabelledGraph::from_mask(self.n, m).expect("member mask"))
    }

    fn member_masks(&self) -> Vec<u64> {
        self.masks().collect()
    }
}

impl fmt::Debug for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GraphClass(n={}, {} members)", self.n, self.len())
    }
}

/// `G` is in the class but `G + uv` is not, with `u`, `v` in distinct components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddableWitness {
    pub graph: LabelledGraph,
    pub u: usize,
    pub v: usize,
}

/// `G` is in the class but `G - e` is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionWitness {
    pub graph: LabelledGraph,
    pub edge: Edge,
}

/// `e` is a bridge of `G`, and exactly one of `G`, `G - e` is in the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlterableWitness {
    pub graph: LabelledGraph,
    pub bridge: Edge,
    pub graph_is_member: bool,
}

impl fmt::Display for AddableWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} lacks the cross-component edge {}-{}",
            self.graph, self.u, self.v
        )
    }
}

impl fmt::Display for DeletionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} minus {} leaves the class", self.graph, self.edge)
    }
}

impl fmt::Display for AlterableWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (inside, outside) = if self.graph_is_member {
            ("G", "G - e")
        } else {
            ("G - e", "G")
        };
        write!(
            f,
            "G = {:?}, bridge e = {}: {inside} is a member but {outside} is not",
            self.graph, self.bridge
        )
    }
}

/// `Ok(())` when the predicate holds, otherwise the first witness found.
pub type Check<W> = std::result::Result<(), W>;

pub fn is_bridge_addable(c: &GraphClass) -> Check<AddableWitness> {
    let n = c.n;
    let info = universe(n);
    let found = c.member_masks().into_par_iter().find_map_first(|mask| {
        let gi = &info[mask as usize];
        for u in 1..=n {
            for v in u + 1..=n {
                if gi.component_of[u - 1] >> (v - 1) & 1 == 0
                    && !c.contains_mask(mask | 1 << pair_index(n, u, v))
                {
                    return Some((mask, u, v));
                }
            }
        }
        None
    });
    match found {
        None => Ok(()),
        Some((mask, u, v)) => Err(AddableWitness {
            graph: LabelledGraph::from_mask(n, mask).expect("member"),
            u,
            v,
        }),
    }
}

pub fn is_monotone(c: &GraphClass) -> Check<DeletionWitness> {
    let n = c.n;
    let found = c.member_masks().into_par_iter().find_map_first(|mask| {
        crate::graph::BitIter(mask)
            .find(|&b| !c.contains_mask(mask & !(1 << b)))
            .map(|b| (mask, b))
    });
    match found {
        None => Ok(()),
        Some((mask, b)) => Err(DeletionWitness {
            graph: LabelledGraph::from_mask(n, mask).expect("member"),
            edge: edge_of_bit(n, b),
        }),
    }
}

/// Quantifies over every graph on `{1..n}`, members or not.
pub fn is_bridge_alterable(c: &GraphClass) -> Check<AlterableWitness> {
    let n = c.n;
    let info = universe(n);
    let found = (0..c.universe_size())
        .into_par_iter()
        .find_map_first(|mask| {
            let inside = c.contains_mask(mask);
            crate::graph::BitIter(info[mask as usize].bridges)
                .find(|&b| c.contains_mask(mask & !(1 << b)) != inside)
                .map(|b| (mask, b, inside))
        });
    match found {
        None => Ok(()),
        Some((mask, b, inside)) => Err(AlterableWitness {
            graph: LabelledGraph::from_mask(n, mask).expect("universe mask"),
            bridge: edge_of_bit(n, b),
            graph_is_member: inside,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassFlags {
    pub bridge_addable: bool,
    pub monotone: bool,
    pub bridge_alterable: bool,
}

impl ClassFlags {
    pub fn of(c: &GraphClass) -> Self {
        ClassFlags {
            bridge_addable: is_bridge_addable(c).is_ok(),
            monotone: is_monotone(c).is_ok(),
            bridge_alterable: is_bridge_alterable(c).is_ok(),
        }
    }

    /// Alterable implies addable; addable and monotone imply alterable.
    pub fn implications_hold(&self) -> bool {
        (!self.bridge_alterable || self.bridge_addable)
            && (!(self.bridge_addable && self.monotone) || self.bridge_alterable)
    }
}

/// Smallest bridge-addable class containing `seeds`; with
/// `close_bridge_deletion`, also closed under deleting bridges, which makes
/// it bridge-alterable.
pub fn bridge_addable_closure(
    seeds: &[LabelledGraph],
    close_bridge_deletion: bool,
) -> Result<GraphClass> {
    let first = seeds
        .first()
        .ok_or_else(|| Error::InvalidArgument("closure needs at least one seed".into()))?;
    let n = first.n();
    let masks = seeds
        .iter()
        .map(|g| {
            if g.n() != n {
                Err(Error::LengthMismatch {
                    expected: n,
                    actual: g.n(),
                })
            } else {
                Ok(g.to_mask())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    check_n(n)?;
    closure_of_masks(n, &masks, close_bridge_deletion)
}

fn closure_of_masks(n: usize, seeds: &[u64], close_bridge_deletion: bool) -> Result<GraphClass> {
    let info = universe(n);
    let mut class = GraphClass::empty(n)?;
    let mut work = Vec::new();
    for &m in seeds {
        if class.insert_mask(m) {
            work.push(m);
        }
    }
    while let Some(mask) = work.pop() {
        let gi = &info[mask as usize];
        for u in 1..=n {
            for v in u + 1..=n {
                if gi.component_of[u - 1] >> (v - 1) & 1 == 0 {
                    let next = mask | 1 << pair_index(n, u, v);
                    if class.insert_mask(next) {
                        work.push(next);
                    }
                }
            }
        }
        if close_bridge_deletion {
            for b in crate::graph::BitIter(gi.bridges) {
                let next = mask & !(1 << b);
                if class.insert_mask(next) {
                    work.push(next);
                }
            }
        }
    }
    Ok(class)
}

/// One equivalence class `[G]` inside a bridge-alterable class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreBlock {
    pub core: LabelledGraph,
    /// Sizes of the core's components, in canonical order.
    pub weights: WeightVector,
    pub size: usize,
    pub connected: usize,
    pub p_connected: Rational,
    /// `P(F_w connected)` for the core weights.
    pub forest_p_connected: Rational,
    /// Block size equals the forest partition function `K`.
    pub size_matches_mass: bool,
    /// `p_connected > exp(-k/W)` with `k` core components on `W` vertices.
    pub bound_holds: bool,
}

impl CoreBlock {
    pub fn equivalence_holds(&self) -> bool {
        self.p_connected == self.forest_p_connected && self.size_matches_mass
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub flags: ClassFlags,
    pub size: usize,
    pub connected: usize,
    pub p_connected: Rational,
    pub blocks: Vec<CoreBlock>,
}

impl ClassReport {
    pub fn blocks_hold(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.equivalence_holds() && b.bound_holds)
    }
}

/// Splits a bridge-alterable class by bridge core and compares each block's
/// connectivity probability with the contracted forest measure.
pub fn decompose(c: &GraphClass) -> Result<ClassReport> {
    if let Err(w) = is_bridge_alterable(c) {
        return Err(Error::NotBridgeAlterable(w.to_string()));
    }
    if c.is_empty() {
        return Err(Error::EmptyClass);
    }
    let n = c.n;
    let info = universe(n);
    let mut by_core: std::collections::BTreeMap<u64, (usize, usize)> = Default::default();
    for mask in c.masks() {
        let gi = &info[mask as usize];
        let entry = by_core.entry(gi.core).or_default();
        entry.0 += 1;
        entry.1 += usize::from(gi.component_count == 1);
    }
    let blocks = by_core
        .into_par_iter()
        .map(|(core_mask, (size, connected))| {
            let core = LabelledGraph::from_mask(n, core_mask)?;
            debug_assert_eq!(bridge_core(&core), core);
            let sizes = components(&core).sizes();
            let weights = WeightVector::new(sizes.iter().map(|&s| s as u64).collect())?;
            let dist = mass_distribution(&weights)?;
            let p_connected = exact::ratio(connected as u64, size as u64);
            let bound = connectivity_bound_from(&p_connected, weights.len(), weights.total());
            Ok(CoreBlock {
                size_matches_mass: dist.partition_function() == &num_bigint::BigUint::from(size),
                forest_p_connected: dist.p_connected(),
                core,
                weights,
                size,
                connected,
                p_connected,
                bound_holds: bound.holds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let connected = blocks.iter().map(|b| b.connected).sum();
    let size = c.len();
    Ok(ClassReport {
        flags: ClassFlags::of(c),
        size,
        connected,
        p_connected: exact::ratio(connected as u64, size as u64),
        blocks,
    })
}

/// Connectivity probability of a uniform member of the class.
pub fn class_p_connected(c: &GraphClass) -> Result<Rational> {
    if c.is_empty() {
        return Err(Error::EmptyClass);
    }
    let info = universe(c.n);
    let connected = c
        .masks()
        .filter(|&m| info[m as usize].component_count == 1)
        .count();
    Ok(exact::ratio(connected as u64, c.len() as u64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub p_class: Rational,
    /// `|trees_n| / |forests_n|`.
    pub p_forest: Rational,
    pub holds: bool,
}

/// Compares `P(G connected)` for a uniform member with the uniform-forest
/// baseline on the same `n`.
pub fn conjecture_check(c: &GraphClass) -> Result<ConjectureCheck> {
    if c.is_empty() {
        return Err(Error::EmptyClass);
    }
    if let Err(w) = is_bridge_addable(c) {
        return Err(Error::NotBridgeAddable(w.to_string()));
    }
    let p_class = class_p_connected(c)?;
    let p_forest = mass_distribution(&WeightVector::unit(c.n)?)?.p_connected();
    Ok(ConjectureCheck {
        holds: p_class >= p_forest,
        p_class,
        p_forest,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureMode {
    /// Closed under cross-component edge addition only.
    Addable,
    /// Also closed under bridge deletion.
    Alterable,
}

impl std::str::FromStr for ClosureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "addable" => Ok(ClosureMode::Addable),
            "alterable" => Ok(ClosureMode::Alterable),
            _ => Err(Error::InvalidArgument(format!(
                "mode must be `addable` or `alterable`, got {s:?}"
            ))),
        }
    }
}

impl fmt::Display for ClosureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureMode::Addable => "addable",
            ClosureMode::Alterable => "alterable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    pub n: usize,
    pub mode: ClosureMode,
    pub seed: u64,
    pub count: usize,
    /// Each class is the closure of between 1 and `max_seeds` random graphs.
    pub max_seeds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRecord {
    pub index: usize,
    pub seeds: Vec<u64>,
    pub class: GraphClass,
    pub flags: ClassFlags,
    pub conjecture: ConjectureCheck,
    /// Block equivalence and bound, for bridge-alterable classes.
    pub blocks_hold: Option<bool>,
}

/// Random seed graphs for class `index`: ChaCha8 on stream `index`.
pub fn random_seeds(n: usize, seed: u64, index: usize, max_seeds: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let count = rng.random_range(1..=max_seeds.max(1));
    (0..count)
        .map(|_| {
            let density: f64 = rng.random();
            (0..pair_count(n)).fold(0u64, |m, b| {
                if rng.random_bool(density) {
                    m | 1 << b
                } else {
                    m
                }
            })
        })
        .collect()
}

/// Generates `count` closure classes and checks every one.
///
/// Violations of `P(G connected) >= P(F connected)` are returned like any
/// other record (with `conjecture.holds == false`), never dropped.
pub fn scan(config: &ScanConfig) -> Result<Vec<ScanRecord>> {
    check_n(config.n)?;
    let n = config.n;
    (0..config.count)
        .into_par_iter()
        .map(|index| {
            let seeds = random_seeds(n, config.seed, index, config.max_seeds);
            let class = closure_of_masks(n, &seeds, config.mode == ClosureMode::Alterable)?;
            let flags = ClassFlags::of(&class);
            let conjecture = conjecture_check(&class)?;
            let blocks_hold = if flags.bridge_alterable {
                Some(decompose(&class)?.blocks_hold())
            } else {
                None
            };
            Ok(ScanRecord {
                index,
                seeds,
                class,
                flags,
                conjecture,
                blocks_hold,
            })
        })
        .collect()
}

impl ScanRecord {
    pub fn holds(&self) -> bool {
        self.conjecture.holds && self.flags.implications_hold() && self.blocks_hold != Some(false)
    }

    pub fn p_class(&self) -> &Rational {
        &self.conjecture.p_class
    }
}
