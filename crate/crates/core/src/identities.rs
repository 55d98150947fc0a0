//! Exact checks of the flow, ratio, pendant and generating-function
//! identities for the weighted forest measure, plus the analytic constants.
//!
//! Every check here is a finite computation over all forests (or trees) on
//! at most [`limits::IDENTITY_CAP`] vertices, compared with rational
//! arithmetic. The few real-valued quantities ([`half_constant`],
//! [`envelope_max`], [`ratio_trend`]) are `f64`.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::forest::{enumerate_forests, mass_distribution, mass_of_degrees, Forest};
use crate::graph::{components, Edge};
use crate::limits;
use crate::prufer::{
    census_expectations_by_enumeration, enumerate_trees, expected_census, pendant_probability,
    subsets_of_weight,
};
use crate::weights::WeightVector;

/// `sum over unordered component pairs of w(T) w(T')`.
fn pair_weight_sum(parts: &[u64]) -> u64 {
    let total: u64 = parts.iter().sum();
    let squares: u64 = parts.iter().map(|a| a * a).sum();
    (total * total - squares) / 2
}

/// The flow `phi(F', F)`.
///
/// Nonzero only when `F'` is `F` plus one edge, where it is
/// `mass(F') / sum_{T != T'} w(T) w(T')` over the components of `F`.
pub fn flow(fprime: &Forest, f: &Forest, w: &WeightVector) -> Result<Rational> {
    if w.len() != f.n() {
        return Err(Error::LengthMismatch {
            expected: f.n(),
            actual: w.len(),
        });
    }
    let one_more = fprime.n() == f.n()
        && fprime.edges().len() == f.edges().len() + 1
        && f.edges()
            .iter()
            .all(|e| fprime.graph().has_edge(e.u(), e.v()));
    if !one_more {
        return Ok(Rational::zero());
    }
    let denominator = pair_weight_sum(&f.component_weights(w));
    let numerator = mass_of_degrees(fprime.degrees(), w.weights());
    Ok(exact::from_uint(&numerator) / exact::from_u64(denominator))
}

/// Every forest with its mass, grouped by component count.
struct ForestTable {
    layers: Vec<Vec<(Forest, BigUint)>>,
}

impl ForestTable {
    fn build(w: &WeightVector) -> Result<Self> {
        let n = w.len();
        limits::check(n, limits::identity_cap())?;
        let mut layers = vec![Vec::new(); n];
        for f in enumerate_forests(n)? {
            let m = mass_of_degrees(f.degrees(), w.weights());
            layers[f.component_count() - 1].push((f, m));
        }
        Ok(ForestTable { layers })
    }

    /// Forests with `i` components (1-based).
    fn layer(&self, i: usize) -> &[(Forest, BigUint)] {
        &self.layers[i - 1]
    }

    fn mass(&self, i: usize) -> BigUint {
        if i == 0 || i > self.layers.len() {
            return BigUint::zero();
        }
        self.layer(i).iter().map(|(_, m)| m).sum()
    }
}

/// Ledger of the mass-flow identity between layers `i` and `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowLedger {
    pub weights: WeightVector,
    pub i: usize,
    /// Total flow, summed from the `i`-component side.
    pub total_flow: Rational,
    /// `M_{i+1} = K * P(F in F_{n,i+1})`.
    pub reference_mass: BigUint,
    pub holds: bool,
    /// Number of `(i+1)`-component forests whose incoming flow was checked.
    pub absorbing_forests: usize,
    /// Forests whose incoming flow differs from their mass.
    pub absorption_failures: Vec<Forest>,
}

impl FlowLedger {
    pub fn absorption_holds(&self) -> bool {
        self.absorption_failures.is_empty()
    }
}

/// Checks that the total flow from `F_{n,i}` into `F_{n,i+1}` equals
/// `M_{i+1}`, and that every `F` in `F_{n,i+1}` absorbs exactly `mass(F)`.
pub fn verify_mass_flow(w: &WeightVector, i: usize) -> Result<FlowLedger> {
    let n = w.len();
    if i == 0 || i >= n {
        return Err(Error::InvalidArgument(format!(
            "component index i = {i} must lie in 1..={}",
            n.saturating_sub(1)
        )));
    }
    let table = ForestTable::build(w)?;
    Ok(flow_ledger(&table, w, i))
}

fn flow_ledger(table: &ForestTable, w: &WeightVector, i: usize) -> FlowLedger {
    // Outgoing side: mass(F') * sum_e 1 / D(F' - e).
    let total_flow: Rational = table
        .layer(i)
        .par_iter()
        .map(|(fp, m)| {
            let inverse_sum: Rational = fp
                .edges()
                .iter()
                .map(|&e| {
                    let cut = Forest::new(fp.graph().without_edge(e)).expect("subforest");
                    exact::ratio(1, pair_weight_sum(&cut.component_weights(w)))
                })
                .sum();
            exact::from_uint(m) * inverse_sum
        })
        .reduce(Rational::zero, |a, b| a + b);

    // Incoming side, forest by forest, through `flow` itself.
    let absorption_failures: Vec<Forest> = table
        .layer(i + 1)
        .par_iter()
        .filter_map(|(f, m)| {
            let parts = components(f.graph());
            let n = f.n();
            let mut incoming = Rational::zero();
            for u in 1..=n {
                for v in u + 1..=n {
                    if parts.block_of(u) != parts.block_of(v) {
                        let e = Edge::new(u, v).expect("distinct vertices");
                        let fp = Forest::new(f.graph().with_edge(e).expect("new edge"))
                            .expect("cross-component edge keeps a forest");
                        incoming += flow(&fp, f, w).expect("matching lengths");
                    }
                }
            }
            (incoming != exact::from_uint(m)).then(|| f.clone())
        })
        .collect();

    let reference_mass = table.mass(i + 1);
    FlowLedger {
        weights: w.clone(),
        i,
        holds: total_flow == exact::from_uint(&reference_mass),
        total_flow,
        reference_mass,
        absorbing_forests: table.layer(i + 1).len(),
        absorption_failures,
    }
}

/// Every `i` in `1..n` at once, sharing one enumeration.
pub fn verify_mass_flow_all(w: &WeightVector) -> Result<Vec<FlowLedger>> {
    let table = ForestTable::build(w)?;
    Ok((1..w.len()).map(|i| flow_ledger(&table, w, i)).collect())
}

/// `r_i = M_{i+1} / M_i` against the bound `(n/W) / i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioCheck {
    pub i: usize,
    pub ratio: Rational,
    pub bound: Rational,
    pub holds: bool,
}

/// Minimum of `sum_{j<k} a_j a_k` over the component weights of `F' - e`,
/// for `F'` with `i` components, against `i(W-i) + C(i,2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionMinimumCheck {
    pub i: usize,
    pub splits: usize,
    pub observed_min: u64,
    pub bound: u64,
    /// Splits attaining the bound exactly.
    pub tight: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

/// Ratios between consecutive layers of `F_w`, and the decomposition of
/// `P(F in F_{n,2}) / P(F in F_{n,1})` into pendant-census terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub weights: WeightVector,
    pub ratios: Vec<RatioCheck>,
    pub partition_minimum: Vec<PartitionMinimumCheck>,
    /// `E[c(T,k)] / (k (W-k))` for `k = 1..=floor(W/2)`.
    pub census_terms: Vec<Rational>,
    pub two_component: Option<IdentityCheck>,
}

impl RatioReport {
    pub fn holds(&self) -> bool {
        self.ratios.iter().all(|r| r.holds)
            && self.partition_minimum.iter().all(|p| p.holds)
            && self.two_component.as_ref().is_none_or(|c| c.holds)
    }
}

/// Checks `P(F_{n,i+1}) <= P(F_{n,i}) (n/W) / i` for every `i`, and the
/// partition minimum on every split `F' - e` met along the way.
pub fn verify_component_ratio_bound(w: &WeightVector) -> Result<RatioReport> {
    let table = ForestTable::build(w)?;
    let n = w.len();
    let total = w.total();
    let alpha = exact::ratio(n as u64, total);
    let masses: Vec<BigUint> = (1..=n).map(|i| table.mass(i)).collect();

    let ratios = (1..n)
        .map(|i| {
            let ratio = exact::from_uint(&masses[i]) / exact::from_uint(&masses[i - 1]);
            let bound = &alpha / exact::from_u64(i as u64);
            RatioCheck {
                i,
                holds: ratio <= bound,
                ratio,
                bound,
            }
        })
        .collect();

    let partition_minimum = (1..n)
        .map(|i| {
            let bound = i as u64 * (total - i as u64) + (i as u64 * (i as u64 - 1)) / 2;
            let (splits, observed_min, tight) = table
                .layer(i)
                .par_iter()
                .map(|(fp, _)| {
                    let mut acc = (0usize, u64::MAX, 0usize);
                    for &e in fp.edges() {
                        let cut = Forest::new(fp.graph().without_edge(e)).expect("subforest");
                        let value = pair_weight_sum(&cut.component_weights(w));
                        acc.0 += 1;
                        acc.1 = acc.1.min(value);
                        acc.2 += usize::from(value == bound);
                    }
                    acc
                })
                .reduce(
                    || (0, u64::MAX, 0),
                    |a, b| (a.0 + b.0, a.1.min(b.1), a.2 + b.2),
                );
            PartitionMinimumCheck {
                i,
                splits,
                observed_min,
                bound,
                tight,
                holds: splits == 0 || observed_min >= bound,
            }
        })
        .collect();

    Ok(RatioReport {
        weights: w.clone(),
        ratios,
        partition_minimum,
        census_terms: Vec::new(),
        two_component: None,
    })
}

/// Checks `M_2/K = (M_1/K) * sum_k E[c(T,k)] / (k (W-k))` exactly, with the
/// expectations taken over every tree.
pub fn verify_two_component_identity(w: &WeightVector) -> Result<RatioReport> {
    let n = w.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the two-component identity needs n >= 2".into(),
        ));
    }
    limits::check(n, limits::identity_cap())?;
    let dist = mass_distribution(w)?;
    let expectations = census_expectations_by_enumeration(w)?;
    let total = w.total();
    let census_terms: Vec<Rational> = (1..=total / 2)
        .map(|k| &expectations[k as usize] / exact::from_u64(k * (total - k)))
        .collect();
    let sum: Rational = census_terms.iter().sum();
    let lhs = dist.probability(2);
    let rhs = dist.p_connected() * &sum;
    let ratio =
        exact::from_uint(&dist.component_mass(2)) / exact::from_uint(&dist.component_mass(1));
    let bound = exact::ratio(n as u64, total);
    Ok(RatioReport {
        weights: w.clone(),
        ratios: vec![RatioCheck {
            i: 1,
            holds: ratio <= bound,
            ratio,
            bound,
        }],
        partition_minimum: Vec::new(),
        census_terms,
        two_component: Some(IdentityCheck {
            holds: lhs == rhs,
            lhs,
            rhs,
        }),
    })
}

/// Closed-form pendant probabilities against tree enumeration for every
/// nonempty proper vertex subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendantFormulaReport {
    pub weights: WeightVector,
    /// `(subset bitmask, closed form, enumerated)`.
    pub checks: Vec<(u64, Rational, Rational)>,
}

impl PendantFormulaReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, a, b)| a == b)
    }

    pub fn failures(&self) -> impl Iterator<Item = &(u64, Rational, Rational)> {
        self.checks.iter().filter(|(_, a, b)| a != b)
    }
}

pub fn verify_pendant_formula(w: &WeightVector) -> Result<PendantFormulaReport> {
    let n = w.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "pendant subtrees need n >= 2".into(),
        ));
    }
    limits::check(n, limits::identity_cap())?;
    let full = (1u64 << n) - 1;
    let mut hits = vec![BigUint::zero(); 1 << n];
    let mut all = BigUint::zero();
    for t in enumerate_trees(n)? {
        let m = mass_of_degrees(t.degrees(), w.weights());
        for &e in t.edges() {
            let cut = t.graph().without_edge(e);
            let side = components(&cut).masks()[components(&cut).block_of(e.u())];
            hits[side as usize] += &m;
            hits[(full & !side) as usize] += &m;
        }
        all += m;
    }
    let all = exact::from_uint(&all);
    let checks = (1..full)
        .map(|mask| {
            let vertices: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
            let closed = pendant_probability(&vertices, w).expect("proper subset");
            (mask, closed, exact::from_uint(&hits[mask as usize]) / &all)
        })
        .collect();
    Ok(PendantFormulaReport {
        weights: w.clone(),
        checks,
    })
}

/// For each `k < W/2`: `(k, pendant-sum value, enumerated value)` of `E[c(T,k)]`.
pub fn verify_census_sum(w: &WeightVector) -> Result<Vec<(u64, Rational, Rational)>> {
    let enumerated = census_expectations_by_enumeration(w)?;
    let total = w.total();
    (1..total.div_ceil(2))
        .map(|k| Ok((k, expected_census(w, k)?, enumerated[k as usize].clone())))
        .collect()
}

/// Which multiplicative measure drives the cascade check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CascadeMeasure {
    /// The forest mass measure `prod w_i^{d(i)}`.
    ForestMass,
    /// Forest mass with every weight doubled, `prod (2 w_i)^{d(i)}`.
    DoubledWeights,
}

impl CascadeMeasure {
    fn weights(self, w: &WeightVector) -> Result<WeightVector> {
        match self {
            CascadeMeasure::ForestMass => Ok(w.clone()),
            CascadeMeasure::DoubledWeights => w.scaled(2),
        }
    }

    /// Measure of one forest on the vertices of `w`.
    pub fn measure(self, f: &Forest, w: &WeightVector) -> Result<BigUint> {
        crate::forest::mass(f, &self.weights(w)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypothesisOutcome {
    /// `mu(G^2(V)) <= gamma mu(G^1(V))` for every `V` with `w(V) >= m0`.
    Holds { subsets_checked: usize },
    /// First failing `V` (by size, then lexicographically).
    Failed {
        witness: Vec<usize>,
        two_component: BigUint,
        connected: BigUint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeStep {
    pub k: usize,
    /// `mu(G_n^{k+1})`.
    pub next_mass: BigUint,
    /// `(gamma / k) mu(G_n^k)`.
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeReport {
    pub weights: WeightVector,
    pub measure: CascadeMeasure,
    pub gamma: Rational,
    pub m0: u64,
    pub j: usize,
    pub hypothesis: HypothesisOutcome,
    pub steps: Vec<CascadeStep>,
}

impl CascadeReport {
    pub fn hypothesis_holds(&self) -> bool {
        matches!(self.hypothesis, HypothesisOutcome::Holds { .. })
    }

    /// First `k` whose bound fails, if any.
    pub fn first_failure(&self) -> Option<usize> {
        self.steps.iter().find(|s| !s.holds).map(|s| s.k)
    }

    pub fn holds(&self) -> bool {
        self.hypothesis_holds() && self.first_failure().is_none()
    }
}

pub fn verify_cascade(
    w: &WeightVector,
    gamma: &Rational,
    m0: u64,
    j: usize,
) -> Result<CascadeReport> {
    verify_cascade_with(w, CascadeMeasure::ForestMass, gamma, m0, j)
}

/// Checks the one-step hypothesis on every sub-vector of total at least
/// `m0`, then `mu(G_n^{k+1}) <= (gamma/k) mu(G_n^k)` for `k <= j` with
/// `n >= k m0`. A failed hypothesis is reported in the result, not as an
/// error.
pub fn verify_cascade_with(
    w: &WeightVector,
    measure: CascadeMeasure,
    gamma: &Rational,
    m0: u64,
    j: usize,
) -> Result<CascadeReport> {
    let n = w.len();
    limits::check(n, limits::identity_cap())?;
    if !gamma.is_positive() {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    if m0 == 0 {
        return Err(Error::InvalidArgument("m0 must be at least 1".into()));
    }
    let mut report = CascadeReport {
        weights: w.clone(),
        measure,
        gamma: gamma.clone(),
        m0,
        j,
        hypothesis: HypothesisOutcome::Holds { subsets_checked: 0 },
        steps: Vec::new(),
    };

    let mut subsets: Vec<u64> = (1..1u64 << n).collect();
    subsets.sort_by_key(|&m| (m.count_ones(), std::cmp::Reverse(m.reverse_bits())));
    let mut cache: HashMap<Vec<u64>, (BigUint, BigUint)> = HashMap::new();
    let mut checked = 0;
    for mask in subsets {
        if w.weight_of_mask(mask) < m0 {
            continue;
        }
        let vertices: Vec<usize> = (1..=n).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        let sub = measure.weights(&w.restrict(&vertices)?)?;
        let mut key = sub.weights().to_vec();
        key.sort_unstable();
        let (connected, two) = match cache.get(&key) {
            Some(hit) => hit.clone(),
            None => {
                let d = mass_distribution(&sub)?;
                let entry = (d.component_mass(1), d.component_mass(2));
                cache.insert(key, entry.clone());
                entry
            }
        };
        checked += 1;
        if exact::from_uint(&two) > gamma * exact::from_uint(&connected) {
            report.hypothesis = HypothesisOutcome::Failed {
                witness: vertices,
                two_component: two,
                connected,
            };
            return Ok(report);
        }
    }
    report.hypothesis = HypothesisOutcome::Holds {
        subsets_checked: checked,
    };

    let dist = mass_distribution(&measure.weights(w)?)?;
    report.steps = (1..=j)
        .filter(|&k| k < n && n as u64 >= k as u64 * m0)
        .map(|k| {
            let next_mass = dist.component_mass(k + 1);
            let bound =
                gamma / exact::from_u64(k as u64) * exact::from_uint(&dist.component_mass(k));
            CascadeStep {
                k,
                holds: exact::from_uint(&next_mass) <= bound,
                next_mass,
                bound,
            }
        })
        .collect();
    Ok(report)
}

/// `p_i(k) = P(Y_1 + ... + Y_i = k)` where `Y = w_X`, `X` uniform on `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionTable {
    /// `p[i][k]` for `0 <= i <= i_max`, `0 <= k <= k_max`.
    p: Vec<Vec<Rational>>,
}

impl ConvolutionTable {
    pub fn p(&self, i: usize, k: usize) -> Rational {
        self.p
            .get(i)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn i_max(&self) -> usize {
        self.p.len() - 1
    }

    pub fn k_max(&self) -> usize {
        self.p[0].len() - 1
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.p[i]
    }
}

pub const CONVOLUTION_CAP: usize = 64;

pub fn convolution_table(w: &WeightVector, i_max: usize, k_max: usize) -> Result<ConvolutionTable> {
    if i_max > CONVOLUTION_CAP || k_max > CONVOLUTION_CAP {
        return Err(Error::InvalidArgument(format!(
            "convolution table is capped at {CONVOLUTION_CAP} in both indices"
        )));
    }
    Ok(convolution_powers(w, i_max, k_max))
}

fn convolution_powers(w: &WeightVector, i_max: usize, k_max: usize) -> ConvolutionTable {
    let n = w.len() as u64;
    let mut law: Vec<(usize, Rational)> = Vec::new();
    let mut counts: HashMap<u64, u64> = HashMap::new();
    for &x in w.weights() {
        *counts.entry(x).or_default() += 1;
    }
    let mut values: Vec<_> = counts.into_iter().collect();
    values.sort_unstable();
    for (x, c) in values {
        if x as usize <= k_max {
            law.push((x as usize, exact::ratio(c, n)));
        }
    }
    let mut first = vec![Rational::zero(); k_max + 1];
    first[0] = Rational::one();
    let mut p = vec![first];
    for _ in 1..=i_max {
        let prev = p.last().expect("row 0 exists");
        let mut row = vec![Rational::zero(); k_max + 1];
        for (k, mass) in prev.iter().enumerate() {
            if mass.is_zero() {
                continue;
            }
            for (x, q) in &law {
                if k + x <= k_max {
                    row[k + x] += mass * q;
                }
            }
        }
        p.push(row);
    }
    ConvolutionTable { p }
}

/// Both sides of `sum_{w(I)=k} x^{|I|} <= sum_{i>=1} (n x)^i / i! p_i(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfBound {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

pub fn verify_gf_bound(w: &WeightVector, k: u64, x: &Rational) -> Result<GfBound> {
    let n = w.len();
    limits::check(n, limits::SUBSET_CAP)?;
    if k == 0 || k > w.total() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 1..={}",
            w.total()
        )));
    }
    if x.is_negative() {
        return Err(Error::InvalidArgument("x must be nonnegative".into()));
    }
    let by_size = subsets_of_weight(w, k)?;
    let lhs: Rational = by_size
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(s, &c)| exact::from_u64(c) * num_traits::pow(x.clone(), s))
        .sum();
    let k = k as usize;
    let table = convolution_powers(w, k, k);
    let nx = exact::from_u64(n as u64) * x;
    let rhs: Rational = (1..=k)
        .map(|i| {
            num_traits::pow(nx.clone(), i) / exact::from_uint(&exact::factorial(i as u64))
                * table.p(i, k)
        })
        .sum();
    Ok(GfBound {
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Natural log of `i^{i-2} / (i! e^i)`.
fn half_constant_log_term(i: u64) -> f64 {
    let x = i as f64;
    if i < 20 {
        let log_factorial: f64 = (2..=i).map(|j| (j as f64).ln()).sum();
        (x - 2.0) * x.ln() - log_factorial - x
    } else {
        // Stirling: ln i! = (i + 1/2) ln i - i + ln(2 pi)/2 + series(i), so
        // the large terms cancel analytically.
        let inv = 1.0 / x;
        let inv2 = inv * inv;
        let series =
            inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
        -2.5 * x.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln() - series
    }
}

/// Partial sum `sum_{i=1}^{terms} i^{i-2} / (i! e^i)`, which tends to 1/2.
///
/// Terms are evaluated in log space and accumulated with Neumaier
/// compensation. The tail beyond `N` is about `0.266 N^{-3/2}`.
pub fn half_constant(terms: u64) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for i in 1..=terms {
        let t = half_constant_log_term(i).exp();
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

/// `max_{x > 0} x^i e^{-alpha x} = (i / (alpha e))^i`.
pub fn envelope_max(i: u32, alpha: &Rational) -> Result<f64> {
    if i == 0 || !alpha.is_positive() {
        return Err(Error::InvalidArgument(
            "envelope_max needs i >= 1 and alpha > 0".into(),
        ));
    }
    let a = exact::to_f64(alpha);
    let i = f64::from(i);
    Ok((i * (i.ln() - a.ln() - 1.0)).exp())
}

/// `f_i(x) = x^i e^{-alpha x}`.
pub fn envelope(i: u32, alpha: f64, x: f64) -> f64 {
    (f64::from(i) * x.ln() - alpha * x).exp()
}

fn power_allowing_unit_inverse(base: u64, exponent: i64) -> BigUint {
    if exponent >= 0 {
        BigUint::from(base).pow(exponent as u32)
    } else {
        assert!(base == 1 && exponent == -1, "only 1^-1 arises");
        BigUint::one()
    }
}

/// `r_1(n) = M_2 / M_1` at unit weights from the pendant-sum closed form
/// `E[c(T,k)] = C(n,k) k^{k-1} (n-k)^{n-k-1} / n^{n-2}` (halved at `k = n/2`,
/// where each balanced edge contributes both of its sides to the subset sum).
pub fn ratio_trend_exact(n: usize) -> Result<Rational> {
    if n < 2 {
        return Err(Error::InvalidArgument("ratio trend needs n >= 2".into()));
    }
    let n64 = n as u64;
    // term_k / (k (n-k)) = C(n,k) k^{k-2} (n-k)^{n-k-2} / n^{n-2}; numerator
    // doubled so the tie term stays integral.
    let numerator: BigUint = (1..=n64 / 2)
        .into_par_iter()
        .map(|k| {
            let multiplicity: u32 = if 2 * k == n64 { 1 } else { 2 };
            exact::binomial(n64, k)
                * power_allowing_unit_inverse(k, k as i64 - 2)
                * power_allowing_unit_inverse(n64 - k, (n64 - k) as i64 - 2)
                * multiplicity
        })
        .sum();
    let denominator = BigUint::from(2u32) * BigUint::from(n64).pow(n as u32 - 2);
    Ok(Rational::new(
        BigInt::from(numerator),
        BigInt::from(denominator),
    ))
}

pub const TREND_CAP: usize = 1000;

/// `(n, r_1(n))` for `n = 2..=n_max` at unit weights, rounded to `f64`
/// from the exact value.
pub fn ratio_trend(n_max: usize) -> Result<Vec<(usize, f64)>> {
    limits::check(n_max, TREND_CAP)?;
    (2..=n_max)
        .into_par_iter()
        .map(|n| Ok((n, exact::to_f64(&ratio_trend_exact(n)?))))
        .collect()
}
