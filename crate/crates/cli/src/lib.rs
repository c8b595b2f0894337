//! Report builders behind the `netbargain` command line.
//!
//! Every command turns input bytes into a JSON value with sorted keys and
//! rationals rendered as `"p/q"`, so identical inputs give identical bytes.

use std::collections::{BTreeMap, BTreeSet};

use netbargain::bargain::{balanced_outcome, BalancedOutcome};
use netbargain::blockset::{root_instance, stabilize_instance, BlockingSetResult, GbsInstance};
use netbargain::graph::{compute_sparsity, density_exceeds, parse_edge_list};
use netbargain::matching::{core_status, CoreWitness};
use netbargain::oracle::{brute_min_gbs, gen_gap, gen_sparse};
use netbargain::{EdgeId, Error, Graph, Rational, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Process exit code for an error: 1 for bad input, 2 for a broken invariant.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_invariant() {
        2
    } else {
        1
    }
}

#[derive(Debug, Clone, Serialize)]
struct InputInfo {
    digest: String,
    vertices: usize,
    edges: usize,
}

#[derive(Debug, Clone, Serialize)]
struct Guarantee {
    factor: Rational,
    root_lp_value: Rational,
    bound_holds: bool,
    doubled: bool,
}

#[derive(Debug, Clone, Serialize)]
struct BalanceSection {
    /// `(x_i - α'_i) - (x_j - α'_j)` per matching edge.
    residuals: BTreeMap<String, Rational>,
    alternatives: BTreeMap<String, Rational>,
    lp_solves: usize,
    shifts: usize,
    diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
struct Traces {
    rounding: Vec<String>,
    prekernel: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
struct RunReport {
    command: &'static str,
    input: InputInfo,
    nu: usize,
    omega: Rational,
    density: Rational,
    core: &'static str,
    core_witness: Value,
    fractional_value: Rational,
    inessential: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocking_set: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    allocation: Option<BTreeMap<String, Rational>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matching: Option<Vec<[String; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    guarantee: Option<Guarantee>,
    #[serde(skip_serializing_if = "Option::is_none")]
    balance: Option<BalanceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    traces: Option<Traces>,
}

/// A command's JSON report plus an optional DOT rendering.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: Value,
    pub dot: Option<String>,
}

impl Output {
    /// Pretty JSON with a trailing newline.
    pub fn json(&self) -> String {
        render(&self.report)
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v.clone())).expect("JSON values serialize");
    s.push('\n');
    s
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let sorted: BTreeMap<String, Value> =
                map.into_iter().map(|(k, v)| (k, sort_keys(v))).collect();
            Value::Object(sorted.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn edge_pair(g: &Graph, id: EdgeId) -> [String; 2] {
    let (a, b) = g.edge_names(id);
    [a.to_string(), b.to_string()]
}

fn edge_key(g: &Graph, id: EdgeId) -> String {
    let (a, b) = g.edge_names(id);
    format!("{a}-{b}")
}

fn by_name(g: &Graph, values: &[Rational]) -> BTreeMap<String, Rational> {
    g.names()
        .iter()
        .cloned()
        .zip(values.iter().cloned())
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// Parses a `P/Q` (or integer) sparsity override.
pub fn parse_omega(s: &str) -> Result<Rational> {
    s.parse::<Rational>()
        .map_err(|e| Error::input(0, format!("bad --omega `{s}`: {e}")))
}

fn base_report(
    command: &'static str,
    bytes: &[u8],
    g: &Graph,
    nu: usize,
    omega: &Option<Rational>,
) -> Result<RunReport> {
    let sparsity = compute_sparsity(g);
    let core = core_status(g)?;
    let core_witness = match &core.witness {
        CoreWitness::Allocation(x) => to_value(&by_name(g, x)),
        CoreWitness::OffendingEdge(id) => {
            serde_json::json!({ "offending_edge": edge_pair(g, *id) })
        }
    };
    Ok(RunReport {
        command,
        input: InputInfo {
            digest: digest(bytes),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        nu,
        omega: omega.clone().unwrap_or(sparsity.omega),
        density: sparsity.density,
        core: core.status.as_str(),
        core_witness,
        fractional_value: core.fractional_value,
        inessential: core
            .inessential
            .iter()
            .map(|&v| g.name(v).to_string())
            .collect(),
        blocking_set: None,
        allocation: None,
        matching: None,
        guarantee: None,
        balance: None,
        traces: None,
    })
}

/// A user-supplied sparsity must be at least 1 and bound every induced
/// subgraph of the instance.
fn validate_omega(g: &Graph, omega: &Option<Rational>) -> Result<()> {
    if let Some(w) = omega {
        if *w < Rational::one() {
            return Err(Error::input(0, format!("--omega {w} is below 1")));
        }
        if let Some(set) = density_exceeds(g, w) {
            let names: Vec<&str> = set.iter().map(|&v| g.name(v)).collect();
            return Err(Error::input(
                0,
                format!(
                    "--omega {w} is below the density of {{{}}}",
                    names.join(", ")
                ),
            ));
        }
    }
    Ok(())
}

pub fn analyze(bytes: &[u8]) -> Result<Output> {
    let g = parse_edge_list(bytes)?;
    let nu = netbargain::matching::matching_number(&g);
    let report = base_report("analyze", bytes, &g, nu, &None)?;
    Ok(Output {
        report: to_value(&report),
        dot: None,
    })
}

fn guarantee(r: &BlockingSetResult) -> Guarantee {
    Guarantee {
        factor: r.guarantee_factor.clone(),
        root_lp_value: r.root_lp_value.clone(),
        bound_holds: r.bound_holds(),
        doubled: r.doubled,
    }
}

fn blocking_pairs(g: &Graph, b: &BTreeSet<EdgeId>) -> Vec<[String; 2]> {
    b.iter().map(|&id| edge_pair(g, id)).collect()
}

/// Blocking set for the instance in `bytes`, which may carry `#@nu` and
/// `#@fixed` directives.
pub fn stabilize(bytes: &[u8], omega: Option<Rational>, trace: bool) -> Result<Output> {
    let inst = GbsInstance::parse(bytes)?;
    validate_omega(&inst.active_graph(), &omega)?;
    let mut report = base_report("stabilize", bytes, &inst.graph, inst.nu, &omega)?;
    let r = stabilize_instance(&inst, omega)?;
    let g = &inst.graph;
    report.omega = r.omega.clone();
    report.blocking_set = Some(blocking_pairs(g, &r.blocking_set));
    report.allocation = Some(by_name(g, &r.x_hat));
    report.guarantee = Some(guarantee(&r));
    if trace {
        report.traces = Some(Traces {
            rounding: r.trace.clone(),
            prekernel: Vec::new(),
        });
    }
    Ok(Output {
        report: to_value(&report),
        dot: Some(g.to_dot(&r.blocking_set)),
    })
}

/// Blocking set, matching and balanced allocation for the graph in `bytes`.
pub fn balance(bytes: &[u8], omega: Option<Rational>, trace: bool) -> Result<Output> {
    let g = parse_edge_list(bytes)?;
    validate_omega(&g, &omega)?;
    let inst = root_instance(&g);
    let mut report = base_report("balance", bytes, &g, inst.nu, &omega)?;
    let r = stabilize_instance(&inst, omega)?;
    let out: BalancedOutcome = balanced_outcome(&g, &r)?;
    let rest = &out.graph;
    report.omega = r.omega.clone();
    report.blocking_set = Some(blocking_pairs(&g, &r.blocking_set));
    report.allocation = Some(by_name(&g, &out.allocation));
    report.matching = Some(
        out.matching
            .edges
            .iter()
            .map(|&id| edge_pair(rest, id))
            .collect(),
    );
    report.guarantee = Some(guarantee(&r));
    report.balance = Some(BalanceSection {
        residuals: out
            .residuals
            .iter()
            .map(|(id, v)| (edge_key(rest, *id), v.clone()))
            .collect(),
        alternatives: by_name(&g, &out.alternatives),
        lp_solves: out.run.lp_solves,
        shifts: out.run.shifts,
        diagnostics: out.run.diagnostics.clone(),
    });
    if trace {
        report.traces = Some(Traces {
            rounding: r.trace.clone(),
            prekernel: out.run.trace.clone(),
        });
    }
    Ok(Output {
        report: to_value(&report),
        dot: Some(g.to_dot(&r.blocking_set)),
    })
}

/// Exact minimum blocking set by enumeration.
pub fn oracle_min_blockset(bytes: &[u8], max_size: Option<usize>) -> Result<Output> {
    let inst = GbsInstance::parse(bytes)?;
    let g = &inst.graph;
    let limit = max_size.unwrap_or(inst.e1.len());
    let r = brute_min_gbs(&inst, limit, false)?;
    let mut report = serde_json::json!({
        "command": "oracle min-blockset",
        "input": InputInfo { digest: digest(bytes), vertices: g.vertex_count(), edges: g.edge_count() },
        "nu": inst.nu,
        "max_size": limit,
        "candidates_checked": r.candidates_checked,
        "size_bound_hit": r.size_bound_hit,
    });
    if let Some((b, x)) = &r.best {
        report["size"] = b.len().into();
        report["blocking_set"] = to_value(&blocking_pairs(g, b));
        report["witness"] = to_value(&by_name(g, x));
    } else {
        report["size"] = Value::Null;
    }
    Ok(Output { report, dot: None })
}

/// Edge-list text of the gap instance with parameter `n`.
pub fn gen_gap_text(n: usize) -> Result<String> {
    Ok(gen_gap(n)?.to_text())
}

/// Edge-list text of a seeded sparse random graph.
pub fn gen_sparse_text(n: usize, omega: &Rational, seed: u64) -> Result<String> {
    Ok(gen_sparse(n, omega, seed)?.to_edge_list())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_examples() {
        let k3 = analyze(b"a b\nb c\na c\n").unwrap().report;
        assert_eq!(k3["core"], "empty");
        assert_eq!(k3["nu"], 1);
        assert_eq!(analyze(b"a b\nb c\n").unwrap().report["core"], "nonempty");
        let empty = analyze(b"").unwrap().report;
        assert_eq!(empty["nu"], 0);
        assert_eq!(empty["core"], "nonempty");
    }

    #[test]
    fn keys_are_sorted_and_rationals_exact() {
        let out = balance(b"a b\nb c\nc d\n", None, true).unwrap();
        let text = out.json();
        let keys: Vec<&str> = out
            .report
            .as_object()
            .unwrap()
            .keys()
            .map(String::as_str)
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert!(text.contains("\"a\": \"1/3\""));
        assert!(!text.contains('.'));
    }

    #[test]
    fn omega_override() {
        let k4 = b"a b\na c\na d\nb c\nb d\nc d\n";
        assert!(stabilize(k4, Some(Rational::new(3, 2)), false).is_ok());
        assert!(matches!(
            stabilize(k4, Some(Rational::new(5, 4)), false),
            Err(Error::Input { .. })
        ));
        assert!(matches!(
            stabilize(k4, Some(Rational::new(1, 2)), false),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::input(1, "x")), 1);
        assert_eq!(exit_code(&Error::precondition("x")), 1);
        assert_eq!(exit_code(&Error::invariant("x")), 2);
    }
}
