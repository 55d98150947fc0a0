//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

mod common;

use std::time::{Duration, Instant};

use forestlab::class_lab::{
    bridge_addable_closure, decompose, random_seeds, scan, ClosureMode, ScanConfig,
};
use forestlab::exact::{self, ratio, ratio_string};
use forestlab::forest::{connectivity_lower_bound_check, tree_partition_closed_form};
use forestlab::identities::{
    half_constant, ratio_trend, ratio_trend_exact, verify_component_ratio_bound,
    verify_mass_flow_all, verify_pendant_formula, verify_two_component_identity,
};
use forestlab::prufer::{chi_square, encode, enumerate_trees, tree_law};
use forestlab::{
    enumerate_forests, mass, mass_distribution, Forest, LabelledGraph, TreeSampler, WeightVector,
};
use num_bigint::BigUint;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn wv(w: &[u64]) -> WeightVector {
    WeightVector::new(w.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn weighted_cayley() -> Outcome {
    let mut checked = 0;
    for n in 2..=6 {
        for w in common::random_weights(100 + n as u64, 50, n, n, 14) {
            let w = wv(&w);
            let direct: BigUint = enumerate_trees(n)
                .map_err(|e| e.to_string())?
                .map(|t| mass(&t, &w).unwrap())
                .sum();
            let closed = w.product() * BigUint::from(w.total()).pow(n as u32 - 2);
            ensure(
                direct == closed && closed == tree_partition_closed_form(&w),
                || format!("w = {w}: sum {direct} vs closed form {closed}"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} weight vectors, n = 2..6, W <= 14"))
}

fn forest_counts() -> Outcome {
    let mut counts = Vec::new();
    for n in 1..=8 {
        let oracle = common::forest_oracle(&vec![1; n]).total_count();
        let enumerated = enumerate_forests(n).map_err(|e| e.to_string())?.count() as u64;
        ensure(enumerated == oracle, || {
            format!("n = {n}: {enumerated} vs oracle {oracle}")
        })?;
        counts.push(enumerated.to_string());
    }
    let p = |n| {
        mass_distribution(&WeightVector::unit(n).unwrap())
            .unwrap()
            .p_connected()
    };
    let p3 = p(3);
    ensure(p3 == ratio(3, 7), || format!("p(3) = {p3}"))?;
    let p8 = exact::to_f64(&p(8));
    ensure(p8 > 0.4 && p8 < 0.60653, || format!("p(8) = {p8}"))?;
    Ok(format!(
        "counts [{}], p(3) = {}, p(8) = {p8:.6}, limit e^(-1/2) = {:.6}",
        counts.join(", "),
        ratio_string(&p3),
        (-0.5f64).exp()
    ))
}

fn mass_flow() -> Outcome {
    let vectors = common::random_weights(3, 50, 1, 6, 14);
    let mut ledgers = 0;
    for w in &vectors {
        for l in verify_mass_flow_all(&wv(w)).map_err(|e| e.to_string())? {
            ensure(l.holds && l.absorption_holds(), || {
                format!(
                    "w = {:?}, i = {}: flow {} vs {}",
                    w, l.i, l.total_flow, l.reference_mass
                )
            })?;
            ledgers += 1;
        }
    }
    Ok(format!(
        "{} vectors, {ledgers} layer transitions",
        vectors.len()
    ))
}

fn ratio_bound() -> Outcome {
    let mut vectors = common::random_weights(4, 50, 1, 6, 14);
    vectors.push(vec![1, 1]);
    let mut instances = 0;
    for w in &vectors {
        let r = verify_component_ratio_bound(&wv(w)).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("w = {w:?}: {r:?}"))?;
        instances += r.ratios.len() + r.partition_minimum.len();
    }
    let r = verify_component_ratio_bound(&wv(&[1, 1])).map_err(|e| e.to_string())?;
    ensure(r.ratios[0].ratio == r.ratios[0].bound, || {
        "no ratio equality at (1,1)".into()
    })?;
    ensure(r.partition_minimum.iter().any(|p| p.tight > 0), || {
        "no tight partition minimum at (1,1)".into()
    })?;
    Ok(format!(
        "{instances} instances over {} vectors, equality at (1,1)",
        vectors.len()
    ))
}

fn two_component() -> Outcome {
    let mut vectors = common::random_weights(5, 40, 2, 6, 14);
    vectors.extend([vec![1, 1], vec![1, 1, 1, 1], vec![2, 1, 1], vec![1; 6]]);
    for w in &vectors {
        let r = verify_two_component_identity(&wv(w)).map_err(|e| e.to_string())?;
        let c = r.two_component.as_ref().unwrap();
        ensure(c.holds, || format!("w = {w:?}: {} vs {}", c.lhs, c.rhs))?;
    }
    Ok(format!("{} vectors, n <= 6", vectors.len()))
}

fn sampler() -> Outcome {
    const SAMPLES: u64 = 1_000_000;
    let mut details = Vec::new();
    for w in [vec![1, 1, 1, 1], vec![2, 1, 1]] {
        let weights = wv(&w);
        let law = tree_law(&weights).map_err(|e| e.to_string())?;
        let oracle = common::forest_oracle(&w);
        let k_tree: BigUint = oracle.trees.iter().map(|(_, m)| m).sum();
        for (edges, m) in &oracle.trees {
            let t = Forest::from_edges(w.len(), edges.iter().copied()).unwrap();
            let idx = encode(&t).unwrap().index() as usize;
            ensure(
                law[idx] == exact::from_uint(m) / exact::from_uint(&k_tree),
                || format!("w = {w:?}: law disagrees with oracle at {edges:?}"),
            )?;
        }
        let counts = TreeSampler::new(&weights)
            .and_then(|s| s.sample_counts(20_240_601, SAMPLES))
            .map_err(|e| e.to_string())?;
        let probs: Vec<f64> = law.iter().map(exact::to_f64).collect();
        let mut worst = 0.0f64;
        for (&obs, &p) in counts.counts.iter().zip(&probs) {
            let mean = SAMPLES as f64 * p;
            let sigma = (SAMPLES as f64 * p * (1.0 - p)).sqrt();
            worst = worst.max((obs as f64 - mean).abs() / sigma);
        }
        ensure(worst <= 5.0, || {
            format!("w = {w:?}: deviation {worst:.2} sigma")
        })?;
        let chi = chi_square(&counts.counts, &probs).map_err(|e| e.to_string())?;
        ensure((0.001..=0.999).contains(&chi.p_value), || {
            format!("w = {w:?}: chi-square p = {}", chi.p_value)
        })?;
        details.push(format!(
            "{w:?}: max {worst:.2} sigma, chi2 p = {:.4}",
            chi.p_value
        ));
    }
    Ok(details.join("; "))
}

fn pendant_formula() -> Outcome {
    let vectors = common::random_weights(7, 20, 2, 6, 14);
    let mut subsets = 0;
    for w in &vectors {
        let r = verify_pendant_formula(&wv(w)).map_err(|e| e.to_string())?;
        if let Some((mask, closed, enumerated)) = r.failures().next() {
            return Err(format!("w = {w:?}, I = {mask:b}: {closed} vs {enumerated}"));
        }
        subsets += r.checks.len();
    }
    Ok(format!("{subsets} subsets over {} vectors", vectors.len()))
}

fn connectivity_bound() -> Outcome {
    let mut vectors = common::random_weights(8, 60, 1, 7, 16);
    vectors.extend((1..=8).map(|n| vec![1; n]));
    for w in &vectors {
        let b = connectivity_lower_bound_check(&wv(w)).map_err(|e| e.to_string())?;
        ensure(b.holds, || {
            format!(
                "w = {w:?}: p = {} vs exp(-{}) in [{}, {}]",
                b.p_connected, b.exponent, b.bound_lower, b.bound_upper
            )
        })?;
    }
    Ok(format!("{} instances", vectors.len()))
}

fn constant() -> Outcome {
    let s = half_constant(1_000_000);
    ensure((s - 0.5).abs() <= 1e-6, || format!("partial sum {s}"))?;
    Ok(format!("partial sum {s:.9}"))
}

fn trend() -> Outcome {
    for n in 2..=7 {
        let d = mass_distribution(&WeightVector::unit(n).unwrap()).unwrap();
        let enumerated =
            exact::from_uint(&d.component_mass(2)) / exact::from_uint(&d.component_mass(1));
        let closed = ratio_trend_exact(n).map_err(|e| e.to_string())?;
        ensure(closed == enumerated, || {
            format!("n = {n}: {closed} vs {enumerated}")
        })?;
    }
    let r500 = ratio_trend(500)
        .map_err(|e| e.to_string())?
        .last()
        .unwrap()
        .1;
    ensure((r500 - 0.5).abs() <= 0.05, || format!("r_1(500) = {r500}"))?;
    Ok(format!("exact for n <= 7, r_1(500) = {r500:.6}"))
}

fn block_equivalence() -> Outcome {
    let mut blocks = 0;
    let mut classes = 0;
    for index in 0..50 {
        let n = 2 + index % 4;
        let seeds: Vec<LabelledGraph> = random_seeds(n, 77, index, 3)
            .into_iter()
            .map(|m| LabelledGraph::from_mask(n, m).unwrap())
            .collect();
        let class = bridge_addable_closure(&seeds, true).map_err(|e| e.to_string())?;
        let report = decompose(&class).map_err(|e| e.to_string())?;
        for b in &report.blocks {
            // Recount the block directly instead of trusting the cached sizes.
            let members: Vec<_> = class
                .graphs()
                .filter(|g| forestlab::graph::bridge_core(g) == b.core)
                .collect();
            let connected = members.iter().filter(|g| g.is_connected()).count();
            let p = ratio(connected as u64, members.len() as u64);
            let forest_p = mass_distribution(&b.weights).unwrap().p_connected();
            ensure(p == forest_p && b.equivalence_holds(), || {
                format!(
                    "n = {n}, class {index}, core {:?}: {p} vs {forest_p}",
                    b.core
                )
            })?;
            blocks += 1;
        }
        classes += 1;
    }
    Ok(format!("{classes} classes, {blocks} blocks, n = 2..5"))
}

fn conjecture_scan() -> Outcome {
    let mut total = 0;
    let mut per_n = Vec::new();
    for (n, count) in [(2, 100), (3, 100), (4, 100), (5, 40)] {
        let records = scan(&ScanConfig {
            n,
            mode: ClosureMode::Addable,
            seed: 13,
            count,
            max_seeds: 3,
        })
        .map_err(|e| e.to_string())?;
        if let Some(bad) = records.iter().find(|r| !r.conjecture.holds) {
            let members: Vec<u64> = bad.class.masks().collect();
            return Err(format!(
                "counterexample n = {n}, class {}: p = {} < {}, members {members:?}",
                bad.index, bad.conjecture.p_class, bad.conjecture.p_forest
            ));
        }
        ensure(records.iter().all(|r| r.flags.implications_hold()), || {
            format!("n = {n}: predicate implication failed")
        })?;
        total += records.len();
        per_n.push(format!("n={n}: {}", records.len()));
    }
    ensure(total >= 220, || format!("only {total} classes"))?;
    Ok(format!("{total} classes ({})", per_n.join(", ")))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("weighted Cayley identity", weighted_cayley),
        ("forest counts and connectivity", forest_counts),
        ("mass-flow identity", mass_flow),
        ("component ratio bound and partition minimum", ratio_bound),
        ("two-component pendant identity", two_component),
        ("Pruefer sampler law", sampler),
        ("pendant subtree formula", pendant_formula),
        ("connectivity lower bound exp(-n/W)", connectivity_bound),
        ("one-half constant", constant),
        ("ratio trend", trend),
        ("bridge-core block equivalence", block_equivalence),
        ("bridge-addable connectivity scan", conjecture_scan),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {:>2} {name}: {detail} [{}]", i + 1, secs(took));
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}
