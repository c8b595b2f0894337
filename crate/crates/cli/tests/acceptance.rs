//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use netbargain::bargain::{balanced_outcome, surpluses, BalancedOutcome};
use netbargain::blockset::{
    root_instance, solve_gbs_lp, stabilize_instance, BlockingSetResult, GbsInstance, IrStats,
};
use netbargain::graph::compute_sparsity;
use netbargain::matching::{core_status, CoreStatus};
use netbargain::oracle::{
    brute_min_blocking_set, brute_min_gbs, gen_gap, gen_sparse_bounded, verify_outcome,
};
use netbargain::{q, EdgeId, Graph, Rational};
use netbargain_cli as cli;

const CORPUS_SEEDS: u64 = 200;

struct Entry {
    name: String,
    text: String,
    graph: Graph,
}

/// Everything computed once per corpus graph.
struct Run {
    stab: BlockingSetResult,
    outcome: BalancedOutcome,
    opt: usize,
    omega: Rational,
}

fn graph_of(edges: &[(&str, &str)]) -> Graph {
    Graph::new(Vec::<&str>::new(), edges.iter().copied()).unwrap()
}

fn named_graphs() -> Vec<Entry> {
    let mut petersen = Vec::new();
    for i in 0..5 {
        petersen.push((format!("o{i}"), format!("o{}", (i + 1) % 5)));
        petersen.push((format!("o{i}"), format!("i{i}")));
        petersen.push((format!("i{i}"), format!("i{}", (i + 2) % 5)));
    }
    let petersen: Vec<(&str, &str)> = petersen
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let list: Vec<(&str, Graph)> = vec![
        ("empty", Graph::empty()),
        ("edge", graph_of(&[("u", "v")])),
        ("p3", graph_of(&[("a", "b"), ("b", "c")])),
        ("p4", graph_of(&[("a", "b"), ("b", "c"), ("c", "d")])),
        ("k3", graph_of(&[("a", "b"), ("b", "c"), ("a", "c")])),
        (
            "c4",
            graph_of(&[("a", "b"), ("b", "c"), ("c", "d"), ("a", "d")]),
        ),
        (
            "c5",
            graph_of(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("a", "e")]),
        ),
        (
            "k4",
            graph_of(&[
                ("a", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "d"),
            ]),
        ),
        (
            "bowtie",
            graph_of(&[
                ("a", "b"),
                ("b", "c"),
                ("a", "c"),
                ("c", "d"),
                ("d", "e"),
                ("c", "e"),
            ]),
        ),
        (
            "star",
            graph_of(&[("h", "a"), ("h", "b"), ("h", "c"), ("h", "d")]),
        ),
        (
            "triangle_tail",
            graph_of(&[("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")]),
        ),
        ("petersen", graph_of(&petersen)),
    ];
    list.into_iter()
        .map(|(name, graph)| Entry {
            name: name.to_string(),
            text: graph.to_edge_list(),
            graph,
        })
        .collect()
}

/// Seeded sparse graphs with `n <= 14`, `|E| <= 18`, `ω <= 3`. Seeds are
/// scanned in order, keeping the first half with an empty core and the
/// first half with a nonempty one.
fn random_graphs() -> Vec<Entry> {
    let targets = [q(1, 1), q(3, 2), q(2, 1), q(3, 1)];
    let half = CORPUS_SEEDS as usize / 2;
    let (mut empty, mut nonempty) = (Vec::new(), Vec::new());
    for seed in 0.. {
        if empty.len() == half && nonempty.len() == half {
            break;
        }
        let n = 4 + (seed % 11) as usize;
        let omega = &targets[(seed / 11) as usize % targets.len()];
        let graph = gen_sparse_bounded(n, omega, 18, seed).unwrap();
        let bucket = match core_status(&graph).unwrap().status {
            CoreStatus::Empty => &mut empty,
            CoreStatus::Nonempty => &mut nonempty,
        };
        if bucket.len() < half {
            bucket.push(Entry {
                name: format!("sparse_{seed:04}"),
                text: graph.to_edge_list(),
                graph,
            });
        }
    }
    empty.into_iter().chain(nonempty).collect()
}

fn synthetic_bad() -> GbsInstance {
    let mut e = Vec::new();
    for i in 1..=5 {
        e.push(("x".to_string(), format!("y{i}")));
        e.push((format!("y{i}"), format!("o{i}")));
    }
    let g = Graph::new(
        Vec::<&str>::new(),
        e.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )
    .unwrap();
    let e1: BTreeSet<EdgeId> = (1..=5)
        .map(|i| {
            g.edge_id_by_name(&format!("y{i}"), &format!("o{i}"))
                .unwrap()
        })
        .collect();
    let e2 = (0..g.edge_count()).filter(|i| !e1.contains(i)).collect();
    GbsInstance::new(g, e1, e2, 4).unwrap()
}

fn run_entry(e: &Entry) -> Result<Run, String> {
    let g = &e.graph;
    let stab = stabilize_instance(&root_instance(g), None)
        .map_err(|err| format!("{}: stabilize: {err}", e.name))?;
    let outcome =
        balanced_outcome(g, &stab).map_err(|err| format!("{}: balance: {err}", e.name))?;
    let nu = root_instance(g).nu;
    let brute = brute_min_blocking_set(g, nu, g.edge_count())
        .map_err(|err| format!("{}: oracle: {err}", e.name))?;
    let opt = brute
        .best
        .ok_or_else(|| format!("{}: oracle found no blocking set", e.name))?
        .0
        .len();
    Ok(Run {
        stab,
        outcome,
        opt,
        omega: compute_sparsity(g).omega,
    })
}

fn add_stats(total: &mut IrStats, s: &IrStats) {
    total.steps += s.steps;
    total.lp_solves += s.lp_solves;
    total.case1 += s.case1;
    total.case2 += s.case2;
    total.case3 += s.case3;
    total.bad_leaves += s.bad_leaves;
    total.cover_leaves += s.cover_leaves;
    total.empty_leaves += s.empty_leaves;
    total.lemma2_checks += s.lemma2_checks;
    total.bad_checks += s.bad_checks;
    total.invariant_checks += s.invariant_checks;
}

type Check = Box<dyn FnOnce() -> Result<String, String>>;

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:.2?}, limit {limit:?}"))
    } else {
        Ok(format!("{t:.2?}"))
    }
}

fn main() {
    let start = Instant::now();
    let mut corpus = named_graphs();
    corpus.extend(random_graphs());
    let runs: Vec<Result<Run, String>> = corpus.iter().map(run_entry).collect();
    let corpus_time = start.elapsed();
    let failures: Vec<String> = runs
        .iter()
        .filter_map(|r| r.as_ref().err().cloned())
        .collect();
    let ok_runs: Vec<(&Entry, &Run)> = corpus
        .iter()
        .zip(&runs)
        .filter_map(|(e, r)| r.as_ref().ok().map(|r| (e, r)))
        .collect();
    eprintln!(
        "corpus: {} graphs ({} named, {CORPUS_SEEDS} seeded), pipeline + oracle in {corpus_time:.2?}, {} errors",
        corpus.len(),
        corpus.len() - CORPUS_SEEDS as usize,
        failures.len()
    );

    // Extra instances for the rounding invariants: gap family and a bad point.
    let mut extra: Vec<(String, BlockingSetResult)> = Vec::new();
    let mut extra_errors = Vec::new();
    for n in 1..=3 {
        match stabilize_instance(&gen_gap(n).unwrap().instance, None) {
            Ok(r) => extra.push((format!("gap{n}"), r)),
            Err(e) => extra_errors.push(format!("gap{n}: {e}")),
        }
    }
    match stabilize_instance(&synthetic_bad(), None) {
        Ok(r) => extra.push(("synthetic_bad".into(), r)),
        Err(e) => extra_errors.push(format!("synthetic_bad: {e}")),
    }
    let mut stats = IrStats::default();
    for (_, r) in &ok_runs {
        add_stats(&mut stats, &r.stab.stats);
    }
    for (_, r) in &extra {
        add_stats(&mut stats, &r.stats);
    }

    let mut checks: Vec<(u32, &str, Check)> = Vec::new();

    checks.push((
        1,
        "gap base case: |B| = 8 = OPT",
        Box::new(|| {
            let t = Instant::now();
            let text = cli::gen_gap_text(1).map_err(|e| e.to_string())?;
            let report = cli::stabilize(text.as_bytes(), None, false)
                .map_err(|e| e.to_string())?
                .report;
            let size = report["blocking_set"].as_array().map(Vec::len).unwrap_or(0);
            let oracle = cli::oracle_min_blockset(text.as_bytes(), None)
                .map_err(|e| e.to_string())?
                .report;
            let inst = gen_gap(1).unwrap().instance;
            let checked = brute_min_gbs(&inst, 8, true).map_err(|e| e.to_string())?;
            let lp_opt = checked.best.map(|b| b.0.len());
            if size != 8 || oracle["size"] != 8 || lp_opt != Some(8) {
                return Err(format!(
                    "stabilize {size}, oracle {}, LP-checked oracle {lp_opt:?}",
                    oracle["size"]
                ));
            }
            Ok(format!(
                "|B| = 8, OPT = 8, {}",
                timed(Duration::from_secs(10), t)?
            ))
        }),
    ));

    checks.push((
        2,
        "gap fractional value 8 and LP optimum <= 8",
        Box::new(|| {
            let t = Instant::now();
            let mut notes = Vec::new();
            for n in 1..=3usize {
                let gap = gen_gap(n).unwrap();
                let inst = &gap.instance;
                let g = &inst.graph;
                let (x, z) = gap.fractional_solution();
                let one = Rational::one();
                for (k, &id) in inst.e1.iter().enumerate() {
                    let e = g.edge(id);
                    if &x[e.0] + &x[e.1] + &z[k] < one || z[k].is_negative() {
                        return Err(format!(
                            "n={n}: blockable edge {} uncovered",
                            g.edge_label(&e)
                        ));
                    }
                }
                for &id in &inst.e2 {
                    let e = g.edge(id);
                    if &x[e.0] + &x[e.1] < one {
                        return Err(format!("n={n}: fixed edge {} uncovered", g.edge_label(&e)));
                    }
                }
                if x.iter().any(Rational::is_negative)
                    || x.iter().sum::<Rational>() > Rational::from(inst.nu)
                {
                    return Err(format!("n={n}: budget or sign violated"));
                }
                let value: Rational = z.iter().sum();
                let lp = solve_gbs_lp(inst).map_err(|e| e.to_string())?.value;
                if value != q(8, 1) || lp > q(8, 1) {
                    return Err(format!("n={n}: constructed value {value}, LP optimum {lp}"));
                }
                notes.push(format!("n={n}: LP {lp}"));
            }
            for n in 1..=2usize {
                let inst = gen_gap(n).unwrap().instance;
                let r = brute_min_gbs(&inst, inst.e1.len(), true).map_err(|e| e.to_string())?;
                let opt = r.best.map(|b| b.0.len()).ok_or("no blocking set")?;
                let expected_ok = if n == 1 { opt == 8 } else { opt >= 8 };
                if !expected_ok {
                    return Err(format!("n={n}: exhaustive OPT {opt}"));
                }
                notes.push(format!("OPT(n={n}) = {opt}"));
            }
            notes.push(timed(Duration::from_secs(60), t)?);
            Ok(notes.join(", "))
        }),
    ));

    let c3: Vec<(String, usize, usize, Rational, Rational, bool)> = ok_runs
        .iter()
        .map(|(e, r)| {
            (
                e.name.clone(),
                r.stab.blocking_set.len(),
                r.opt,
                r.omega.clone(),
                r.stab.guarantee_factor.clone(),
                r.stab.bound_holds(),
            )
        })
        .collect();
    let c3_errors = failures.clone();
    checks.push((
        3,
        "approximation guarantee against the oracle",
        Box::new(move || {
            if !c3_errors.is_empty() {
                return Err(c3_errors.join("; "));
            }
            let mut worst = Rational::zero();
            for (name, b, opt, omega, _, holds) in &c3 {
                if *omega > q(3, 1) {
                    return Err(format!("{name}: ω = {omega} above 3"));
                }
                let cap = (q(8, 1) * omega + q(2, 1)) * Rational::from(*opt);
                if Rational::from(*b) > cap || !holds {
                    return Err(format!(
                        "{name}: |B| = {b}, OPT = {opt}, ω = {omega}, certified bound {holds}"
                    ));
                }
                if *opt > 0 {
                    worst = worst.max(Rational::from(*b) / Rational::from(*opt));
                }
            }
            Ok(format!("{} graphs, worst |B|/OPT = {worst}", c3.len()))
        }),
    ));

    let inv_errors: Vec<String> = failures.iter().chain(&extra_errors).cloned().collect();
    let s4 = stats.clone();
    checks.push((4, "I1-I3 at every rounding level", Box::new(move || {
        if !inv_errors.is_empty() {
            return Err(inv_errors.join("; "));
        }
        if s4.invariant_checks < s4.steps {
            return Err(format!("{} checks for {} steps", s4.invariant_checks, s4.steps));
        }
        Ok(format!(
            "{} levels checked over {} steps (cases 1/2/3: {}/{}/{}, bad {}, cover {}, empty {})",
            s4.invariant_checks, s4.steps, s4.case1, s4.case2, s4.case3, s4.bad_leaves, s4.cover_leaves, s4.empty_leaves
        ))
    })));

    let s5 = stats.clone();
    let c5_errors: Vec<String> = failures.iter().chain(&extra_errors).cloned().collect();
    checks.push((
        5,
        "extreme-point structure (two-value and bad-partition checks)",
        Box::new(move || {
            if !c5_errors.is_empty() {
                return Err(c5_errors.join("; "));
            }
            if s5.bad_checks == 0 {
                return Err("no bad point was exercised".into());
            }
            Ok(format!(
                "{} two-value checks, {} bad partitions verified, 0 violations",
                s5.lemma2_checks, s5.bad_checks
            ))
        }),
    ));

    let c6: Vec<(String, Graph, bool, usize)> = ok_runs
        .iter()
        .map(|(e, r)| {
            (
                e.name.clone(),
                e.graph.clone(),
                r.stab.blocking_set.is_empty(),
                r.opt,
            )
        })
        .collect();
    checks.push((
        6,
        "core dichotomy",
        Box::new(move || {
            let mut nonempty = 0;
            for (name, g, b_empty, opt) in &c6 {
                let report = core_status(g).map_err(|e| format!("{name}: {e}"))?;
                let is_nonempty = report.status == CoreStatus::Nonempty;
                if is_nonempty != (*opt == 0) {
                    return Err(format!(
                        "{name}: core {} but OPT = {opt}",
                        report.status.as_str()
                    ));
                }
                if is_nonempty {
                    nonempty += 1;
                    if !b_empty {
                        return Err(format!(
                            "{name}: nonempty core but blocking set is not empty"
                        ));
                    }
                }
            }
            Ok(format!(
                "{} graphs agree, {nonempty} with nonempty core",
                c6.len()
            ))
        }),
    ));

    checks.push((
        7,
        "balanced outcomes on P4 and a single edge",
        Box::new(|| {
            let t = Instant::now();
            let p4 = cli::balance(b"a b\nb c\nc d\n", None, false)
                .map_err(|e| e.to_string())?
                .report;
            let edge = cli::balance(b"u v\n", None, false)
                .map_err(|e| e.to_string())?
                .report;
            let want_p4 = serde_json::json!({"a": "1/3", "b": "2/3", "c": "2/3", "d": "1/3"});
            let want_edge = serde_json::json!({"u": "1/2", "v": "1/2"});
            if p4["allocation"] != want_p4 || edge["allocation"] != want_edge {
                return Err(format!(
                    "P4 {}, edge {}",
                    p4["allocation"], edge["allocation"]
                ));
            }
            Ok(format!("exact, {}", timed(Duration::from_secs(1), t)?))
        }),
    ));

    type Outcome = (String, Graph, BTreeSet<EdgeId>, usize, BalancedOutcome);
    let c8: Vec<Outcome> = ok_runs
        .iter()
        .map(|(e, r)| {
            (
                e.name.clone(),
                e.graph.clone(),
                r.stab.blocking_set.clone(),
                root_instance(&e.graph).nu,
                r.outcome.clone(),
            )
        })
        .collect();
    let c8_errors = failures.clone();
    checks.push((
        8,
        "prekernel complexity bounds and exact balance",
        Box::new(move || {
            if !c8_errors.is_empty() {
                return Err(c8_errors.join("; "));
            }
            let (mut lps, mut shifts) = (0, 0);
            for (name, g, blocked, nu, out) in &c8 {
                let m = out.graph.edge_count();
                if out.run.lp_solves > m
                    || out.run.shifts > m * m
                    || out.run.lemma7_checks != out.run.shifts
                {
                    return Err(format!(
                        "{name}: {} LPs, {} shifts, |E'| = {m}",
                        out.run.lp_solves, out.run.shifts
                    ));
                }
                if !surpluses(&out.graph, &out.allocation)
                    .max_imbalance()
                    .is_zero()
                {
                    return Err(format!("{name}: surpluses unbalanced"));
                }
                let issues = verify_outcome(g, blocked, *nu, out);
                if !issues.is_empty() {
                    return Err(format!("{name}: {}", issues.join("; ")));
                }
                lps += out.run.lp_solves;
                shifts += out.run.shifts;
            }
            Ok(format!(
                "{} outcomes, {lps} LP solves, {shifts} shifts, all balanced",
                c8.len()
            ))
        }),
    ));

    let c9: Vec<(String, String)> = corpus
        .iter()
        .map(|e| (e.name.clone(), e.text.clone()))
        .collect();
    checks.push((
        9,
        "byte-identical output on repeated runs",
        Box::new(move || determinism(&c9)),
    ));

    let mut all_pass = true;
    for (id, title, check) in checks {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("PASS criterion {id}: {title} ({detail})"),
            Err(detail) => {
                all_pass = false;
                println!("FAIL criterion {id}: {title} ({detail})");
            }
        }
    }
    println!("acceptance finished in {:.2?}", start.elapsed());
    if !all_pass {
        std::process::exit(1);
    }
}

fn determinism(corpus: &[(String, String)]) -> Result<String, String> {
    type Cmd = fn(&[u8]) -> netbargain::Result<cli::Output>;
    let commands: [(&str, Cmd); 4] = [
        ("analyze", cli::analyze),
        ("stabilize", |b| cli::stabilize(b, None, true)),
        ("balance", |b| cli::balance(b, None, true)),
        ("oracle", |b| cli::oracle_min_blockset(b, None)),
    ];
    let mut runs = 0;
    for (name, text) in corpus {
        for (cmd, f) in &commands {
            let a = f(text.as_bytes())
                .map_err(|e| format!("{name} {cmd}: {e}"))?
                .json();
            let b = f(text.as_bytes())
                .map_err(|e| format!("{name} {cmd}: {e}"))?
                .json();
            if a != b {
                return Err(format!("{name} {cmd}: outputs differ"));
            }
            runs += 2;
        }
    }

    // End to end through the binary on a slice of the corpus, plus generators.
    let exe = env!("CARGO_BIN_EXE_netbargain");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    let mut invoke = |key: String, args: Vec<String>| -> Result<(), String> {
        let out = Command::new(exe)
            .args(&args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "{key}: exit {:?}: {}",
                out.status.code(),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        match outputs.get(&key) {
            Some(prev) if *prev != out.stdout => {
                return Err(format!("{key}: binary outputs differ"))
            }
            Some(_) => {}
            None => {
                outputs.insert(key, out.stdout);
            }
        }
        Ok(())
    };
    for (name, text) in corpus.iter().take(32) {
        let path = dir.path().join(format!("{name}.txt"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let p = path.display().to_string();
        for _ in 0..2 {
            invoke(format!("{name} analyze"), vec!["analyze".into(), p.clone()])?;
            for cmd in ["stabilize", "balance"] {
                invoke(
                    format!("{name} {cmd}"),
                    vec![cmd.into(), p.clone(), "--trace".into()],
                )?;
            }
            invoke(
                format!("{name} oracle"),
                vec!["oracle".into(), "min-blockset".into(), p.clone()],
            )?;
            runs += 4;
        }
    }
    for _ in 0..2 {
        invoke(
            "gen gap".into(),
            ["gen", "gap", "--n", "2"].map(String::from).to_vec(),
        )?;
        invoke(
            "gen sparse".into(),
            ["gen", "sparse", "--n", "6", "--omega", "1", "--seed", "7"]
                .map(String::from)
                .to_vec(),
        )?;
        runs += 2;
    }
    Ok(format!("{runs} runs identical"))
}
