//! `forestlab` command-line front end.
//!
//! Every subcommand writes JSON lines to stdout (or `--out`) and a short
//! summary to stderr. Exit status is 0 when every check holds, 1 when one
//! fails, 2 on malformed input.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use forestlab::class_lab::{scan, ClosureMode, ScanConfig};
use forestlab::exact::{self, ratio_string};
use forestlab::forest::{connectivity_lower_bound_check, tree_partition_closed_form};
use forestlab::graph::contract;
use forestlab::identities::{
    half_constant, ratio_trend, ratio_trend_exact, verify_cascade, verify_census_sum,
    verify_component_ratio_bound, verify_mass_flow_all, verify_pendant_formula,
    verify_two_component_identity,
};
use forestlab::prufer::{chi_square, decode, pendant_census, tree_law};
use forestlab::{
    enumerate_forests, mass, mass_distribution, LabelledGraph, PrueferCode, TreeSampler,
    WeightVector,
};

use report::{bits, edges_json, Failure, Report};

#[derive(Parser)]
#[command(
    name = "forestlab",
    version,
    about = "Exact experiments on weighted random forests"
)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; never changes the output.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write JSON lines here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact component-count law of the weighted forest.
    Enumerate {
        #[command(flatten)]
        source: WeightSource,
        /// Also emit every forest with its mass.
        #[arg(long)]
        list: bool,
    },
    /// Sample trees through i.i.d. code entries and compare with the exact law.
    Sample {
        #[command(flatten)]
        source: WeightSource,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
    },
    /// Pendant-subtree probabilities and census expectations.
    Pendant {
        #[command(flatten)]
        source: WeightSource,
        /// Census of the tree with this code, e.g. `1,3`.
        #[arg(long)]
        code: Option<String>,
    },
    /// Run every exact identity and bound for one weight vector.
    Verify {
        #[command(flatten)]
        source: WeightSource,
        /// Also run the cascade with this gamma, e.g. `1/2`.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, default_value_t = 1, requires = "gamma")]
        m0: u64,
        #[arg(long, default_value_t = 3, requires = "gamma")]
        steps: usize,
    },
    /// `r_1(n) = M_2 / M_1` at unit weights.
    Trend {
        #[arg(long, default_value_t = 500)]
        n_max: usize,
        /// Include the exact rational for each n.
        #[arg(long)]
        exact: bool,
        /// Also write `n,r1` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Partial sums of the series that tends to 1/2.
    Constants {
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
    },
    /// Random closure classes checked against the uniform-forest baseline.
    Scan {
        #[arg(long)]
        n: usize,
        /// Largest number of seed graphs per class.
        #[arg(long, default_value_t = 3)]
        seeds: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value = "addable")]
        mode: ClosureMode,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct WeightSource {
    /// Unit weights on n vertices.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated positive weights.
    #[arg(long)]
    w: Option<WeightVector>,
    /// Graph file; weights are the bridge-core component sizes.
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl WeightSource {
    fn resolve(&self) -> Result<WeightVector, Failure> {
        if let Some(n) = self.n {
            return Ok(WeightVector::unit(n)?);
        }
        if let Some(w) = &self.w {
            return Ok(w.clone());
        }
        let path = self.graph.as_ref().expect("clap enforces one source");
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let g: LabelledGraph = text.parse()?;
        Ok(contract(&g)?.1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = Report::open(cli.out.as_deref()).and_then(|mut report| {
        run(&cli, &mut report)?;
        report.finish()
    });
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failed) => {
            eprintln!("{failed} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut Report) -> Result<(), Failure> {
    match &cli.command {
        Command::Enumerate { source, list } => enumerate(&source.resolve()?, *list, out),
        Command::Sample { source, samples } => sample(&source.resolve()?, cli.seed, *samples, out),
        Command::Pendant { source, code } => pendant(&source.resolve()?, code.as_deref(), out),
        Command::Verify {
            source,
            gamma,
            m0,
            steps,
        } => verify(&source.resolve()?, gamma.as_deref(), *m0, *steps, out),
        Command::Trend { n_max, exact, csv } => trend(*n_max, *exact, csv.as_deref(), out),
        Command::Constants { terms } => constants(*terms, out),
        Command::Scan {
            n,
            seeds,
            count,
            mode,
        } => scan_classes(
            &ScanConfig {
                n: *n,
                mode: *mode,
                seed: cli.seed,
                count: *count,
                max_seeds: *seeds,
            },
            out,
        ),
    }
}

fn enumerate(w: &WeightVector, list: bool, out: &mut Report) -> Result<(), Failure> {
    let d = mass_distribution(w)?;
    let k = d.partition_function();
    let m1 = d.component_mass(1);
    if list {
        for f in enumerate_forests(w.len())? {
            out.line(json!({
                "forest": edges_json(f.edges()),
                "components": f.component_count(),
                "mass": mass(&f, w)?.to_string(),
            }))?;
        }
    }
    let closed = tree_partition_closed_form(w);
    out.check(
        closed == m1,
        json!({
            "n": w.len(),
            "W": w.total(),
            "K": k.to_string(),
            "M": d.masses().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "p_connected": format!("{m1}/{k}"),
            "forests": d.forest_count(),
            "trees": d.tree_count(),
            "tree_mass_closed_form": closed.to_string(),
            "holds": closed == m1,
        }),
    )?;
    eprintln!(
        "n = {}: {} forests, {} trees, P(connected) = {} ~ {:.6}",
        w.len(),
        d.forest_count(),
        d.tree_count(),
        ratio_string(&d.p_connected()),
        exact::to_f64(&d.p_connected())
    );
    Ok(())
}

fn sample(w: &WeightVector, seed: u64, samples: u64, out: &mut Report) -> Result<(), Failure> {
    let counts = TreeSampler::new(w)?.sample_counts(seed, samples)?;
    let law = tree_law(w)?;
    let probs: Vec<f64> = law.iter().map(exact::to_f64).collect();
    let mut max_sigma = 0.0f64;
    let mut freq = Map::new();
    for ((code, observed), &p) in counts.iter().zip(&probs) {
        let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
        if sigma > 0.0 {
            max_sigma = max_sigma.max((observed as f64 - samples as f64 * p).abs() / sigma);
        }
        freq.insert(code.to_string(), json!(observed));
    }
    let chi = chi_square(&counts.counts, &probs)?;
    let chi_ok = chi.degrees_of_freedom == 0 || (0.001..=0.999).contains(&chi.p_value);
    let holds = max_sigma <= 5.0 && chi_ok;
    out.check(
        holds,
        json!({
            "w": w.weights(),
            "seed": seed,
            "samples": samples,
            "tree_freq": freq,
            "tree_law": law.iter().map(ratio_string).collect::<Vec<_>>(),
            "chi2": chi.statistic,
            "dof": chi.degrees_of_freedom,
            "p_value": chi.p_value,
            "max_sigma": max_sigma,
            "precision": "f64",
            "holds": holds,
        }),
    )?;
    eprintln!(
        "{samples} samples over {} trees: max deviation {max_sigma:.2} sigma, chi-square p = {:.4}",
        law.len(),
        chi.p_value
    );
    Ok(())
}

fn pendant(w: &WeightVector, code: Option<&str>, out: &mut Report) -> Result<(), Failure> {
    let n = w.len();
    if let Some(code) = code {
        let t = decode(&PrueferCode::parse(n, code)?);
        let census = pendant_census(&t, w)?;
        let sides: Vec<Value> = census
            .records()
            .iter()
            .map(
                |r| json!({"edge": [r.edge.u(), r.edge.v()], "side": r.side(), "weight": r.weight}),
            )
            .collect();
        out.line(json!({
            "kind": "tree",
            "code": code,
            "edges": edges_json(t.edges()),
            "pendants": sides,
            "c": census.histogram(),
        }))?;
    }
    let formula = verify_pendant_formula(w)?;
    for (mask, closed, enumerated) in &formula.checks {
        out.check(
            closed == enumerated,
            json!({
                "kind": "subset",
                "I": bits(*mask),
                "closed": ratio_string(closed),
                "enumerated": ratio_string(enumerated),
                "holds": closed == enumerated,
            }),
        )?;
    }
    for (k, sum, enumerated) in verify_census_sum(w)? {
        out.check(
            sum == enumerated,
            json!({
                "kind": "census",
                "k": k,
                "pendant_sum": ratio_string(&sum),
                "enumerated": ratio_string(&enumerated),
                "holds": sum == enumerated,
            }),
        )?;
    }
    eprintln!("{} subsets checked for w = {w}", formula.checks.len());
    Ok(())
}

fn lemma(
    name: &str,
    w: &WeightVector,
    i: Option<usize>,
    lhs: String,
    rhs: String,
    holds: bool,
) -> Value {
    let mut line = json!({"lemma": name, "w": w.weights()});
    if let Some(i) = i {
        line["i"] = json!(i);
    }
    line["lhs"] = json!(lhs);
    line["rhs"] = json!(rhs);
    line["holds"] = json!(holds);
    line
}

fn verify(
    w: &WeightVector,
    gamma: Option<&str>,
    m0: u64,
    steps: usize,
    out: &mut Report,
) -> Result<(), Failure> {
    let n = w.len();
    for l in verify_mass_flow_all(w)? {
        let holds = l.holds && l.absorption_holds();
        let mut line = lemma(
            "mass_flow",
            w,
            Some(l.i),
            ratio_string(&l.total_flow),
            ratio_string(&exact::from_uint(&l.reference_mass)),
            holds,
        );
        line["absorbing_forests"] = json!(l.absorbing_forests);
        if !l.absorption_holds() {
            line["absorption_failures"] = l
                .absorption_failures
                .iter()
                .map(|f| edges_json(f.edges()))
                .collect();
        }
        out.check(holds, line)?;
    }
    let ratios = verify_component_ratio_bound(w)?;
    for r in &ratios.ratios {
        out.check(
            r.holds,
            lemma(
                "ratio_bound",
                w,
                Some(r.i),
                ratio_string(&r.ratio),
                ratio_string(&r.bound),
                r.holds,
            ),
        )?;
    }
    for p in &ratios.partition_minimum {
        let mut line = lemma(
            "partition_minimum",
            w,
            Some(p.i),
            ratio_string(&exact::from_u64(p.observed_min)),
            ratio_string(&exact::from_u64(p.bound)),
            p.holds,
        );
        line["splits"] = json!(p.splits);
        line["tight"] = json!(p.tight);
        out.check(p.holds, line)?;
    }
    if n >= 2 {
        let two = verify_two_component_identity(w)?;
        let c = two.two_component.expect("present for n >= 2");
        out.check(
            c.holds,
            lemma(
                "two_component",
                w,
                None,
                ratio_string(&c.lhs),
                ratio_string(&c.rhs),
                c.holds,
            ),
        )?;
        let formula = verify_pendant_formula(w)?;
        let mut line = json!({
            "lemma": "pendant_formula",
            "w": w.weights(),
            "subsets": formula.checks.len(),
            "holds": formula.holds(),
        });
        if let Some((mask, closed, enumerated)) = formula.failures().next() {
            line["I"] = json!(bits(*mask));
            line["lhs"] = json!(ratio_string(closed));
            line["rhs"] = json!(ratio_string(enumerated));
        }
        out.check(formula.holds(), line)?;
    }
    let b = connectivity_lower_bound_check(w)?;
    let mut line = lemma(
        "connectivity_bound",
        w,
        None,
        ratio_string(&b.p_connected),
        format!("exp(-{})", ratio_string(&b.exponent)),
        b.holds,
    );
    line["rhs_enclosure"] = json!([ratio_string(&b.bound_lower), ratio_string(&b.bound_upper)]);
    out.check(b.holds, line)?;
    if let Some(gamma) = gamma {
        let gamma = report::parse_ratio(gamma)?;
        let c = verify_cascade(w, &gamma, m0, steps)?;
        for s in &c.steps {
            let mut line = lemma(
                "cascade",
                w,
                None,
                ratio_string(&exact::from_uint(&s.next_mass)),
                ratio_string(&s.bound),
                s.holds,
            );
            line["k"] = json!(s.k);
            out.check(s.holds, line)?;
        }
        let mut line = json!({
            "lemma": "cascade_hypothesis",
            "w": w.weights(),
            "gamma": ratio_string(&gamma),
            "m0": m0,
            "holds": c.hypothesis_holds(),
        });
        if let forestlab::identities::HypothesisOutcome::Failed {
            witness,
            two_component,
            connected,
        } = &c.hypothesis
        {
            line["witness"] = json!(witness);
            line["lhs"] = json!(ratio_string(&exact::from_uint(two_component)));
            line["rhs"] = json!(ratio_string(&(gamma * exact::from_uint(connected))));
        }
        // A failed hypothesis is reported, not counted: the cascade is conditional on it.
        out.line(line)?;
    }
    eprintln!("verified w = {w} (n = {n}, W = {})", w.total());
    Ok(())
}

fn trend(
    n_max: usize,
    with_exact: bool,
    csv: Option<&std::path::Path>,
    out: &mut Report,
) -> Result<(), Failure> {
    let rows = ratio_trend(n_max)?;
    let mut table = String::from("n,r1\n");
    for &(n, r1) in &rows {
        let mut line = json!({"n": n, "r1": r1, "precision": "f64"});
        if with_exact {
            line["exact"] = json!(ratio_string(&ratio_trend_exact(n)?));
        }
        out.line(line)?;
        table.push_str(&format!("{n},{r1}\n"));
    }
    if let Some(path) = csv {
        std::fs::write(path, table)?;
    }
    if let Some(&(n, r1)) = rows.last() {
        eprintln!("r_1({n}) = {r1:.6}");
    }
    Ok(())
}

fn constants(terms: u64, out: &mut Report) -> Result<(), Failure> {
    let value = half_constant(terms);
    out.line(json!({
        "constant": "half",
        "terms": terms,
        "value": value,
        "target": "1/2",
        "abs_error": (value - 0.5).abs(),
        "precision": "f64",
    }))?;
    eprintln!("partial sum over {terms} terms = {value:.12}");
    Ok(())
}

fn scan_classes(config: &ScanConfig, out: &mut Report) -> Result<(), Failure> {
    let records = scan(config)?;
    let mut violations = 0;
    for r in &records {
        let mut line = json!({
            "index": r.index,
            "n": config.n,
            "mode": config.mode.to_string(),
            "seeds": r.seeds,
            "size": r.class.len(),
            "bridge_addable": r.flags.bridge_addable,
            "monotone": r.flags.monotone,
            "bridge_alterable": r.flags.bridge_alterable,
            "p_class": ratio_string(&r.conjecture.p_class),
            "p_forest": ratio_string(&r.conjecture.p_forest),
            "holds": r.holds(),
        });
        if let Some(b) = r.blocks_hold {
            line["blocks_hold"] = json!(b);
        }
        if !r.conjecture.holds {
            violations += 1;
            line["counterexample"] = json!(r.class.masks().collect::<Vec<_>>());
        }
        out.check(r.holds(), line)?;
    }
    eprintln!(
        "{} {} classes on n = {}: {violations} counterexample(s)",
        records.len(),
        config.mode,
        config.n
    );
    Ok(())
}
