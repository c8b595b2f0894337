//! Approximate minimum blocking sets by iterative LP rounding.
//!
//! A [`GbsInstance`] restricts which edges may be blocked (`e1`) and which
//! must be covered (`e2`) under an allocation budget `nu`. [`ir_solve`]
//! repeatedly solves the relaxation, fixes a vertex, demotes or blocks an
//! edge, and finishes either on an empty instance or with a direct rounding
//! of a "bad" extreme point. [`stabilize`] runs the whole reduction on an
//! arbitrary graph, doubling non-bipartite inputs first.

mod extreme;
mod rounding;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{
    annotations, bipartite_double, compute_sparsity, parse_edge_list, pull_back, EdgeId, Graph,
};
use crate::matching::matching_number;
use crate::rational::Rational;

pub use extreme::{
    classify, relaxation_value, solve_gbs_lp, BadPartition, Classification, ExtremePoint,
    GoodCertificate,
};
pub use rounding::{bad_leaf_round, ir_solve, IrOutcome, IrStats};

/// Generalized blocking set instance over an ambient graph.
///
/// Only edges in `e1 ∪ e2` belong to the instance; its vertices are their
/// endpoints (isolated vertices play no role and are dropped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbsInstance {
    pub graph: Graph,
    /// Edges that may be blocked.
    pub e1: BTreeSet<EdgeId>,
    /// Edges that must be covered.
    pub e2: BTreeSet<EdgeId>,
    pub nu: usize,
}

impl GbsInstance {
    pub fn new(
        graph: Graph,
        e1: BTreeSet<EdgeId>,
        e2: BTreeSet<EdgeId>,
        nu: usize,
    ) -> Result<Self> {
        let m = graph.edge_count();
        if let Some(id) = e1.iter().chain(&e2).find(|&&id| id >= m) {
            return Err(Error::precondition(format!("edge id {id} out of range")));
        }
        if let Some(id) = e1.intersection(&e2).next() {
            return Err(Error::precondition(format!(
                "edge {} is in both e1 and e2",
                graph.edge_label(&graph.edge(*id))
            )));
        }
        Ok(GbsInstance { graph, e1, e2, nu })
    }

    /// Active edge ids in increasing order.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.e1.iter().chain(&self.e2).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn edge_count(&self) -> usize {
        self.e1.len() + self.e2.len()
    }

    /// Endpoints of active edges, increasing.
    pub fn vertices(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .e1
            .iter()
            .chain(&self.e2)
            .flat_map(|&id| {
                let e = self.graph.edge(id);
                [e.0, e.1]
            })
            .collect();
        set.into_iter().collect()
    }

    /// The ambient vertex set with only the active edges.
    pub fn active_graph(&self) -> Graph {
        self.graph
            .filter_edges(|id| self.e1.contains(&id) || self.e2.contains(&id))
    }

    pub fn is_bipartite(&self) -> bool {
        self.active_graph().is_bipartite().is_some()
    }

    /// Parses an edge list with optional `#@nu K` and `#@fixed U V`
    /// directives. Fixed edges go to `e2`; all other edges to `e1`. Without
    /// a `#@nu` line the budget is the matching number of the graph.
    pub fn parse(text: &[u8]) -> Result<Self> {
        let graph = parse_edge_list(text)?;
        let text = std::str::from_utf8(text).map_err(|_| Error::input(0, "input is not UTF-8"))?;
        let mut nu = None;
        let mut e2 = BTreeSet::new();
        for (line, tokens) in annotations(text) {
            match tokens.first().map(String::as_str) {
                Some("nu") if tokens.len() == 2 => {
                    let k = tokens[1]
                        .parse::<usize>()
                        .map_err(|_| Error::input(line, format!("bad budget `{}`", tokens[1])))?;
                    nu = Some(k);
                }
                Some("fixed") if tokens.len() == 3 => {
                    let id = graph
                        .edge_id_by_name(&tokens[1], &tokens[2])
                        .ok_or_else(|| {
                            Error::input(
                                line,
                                format!(
                                    "fixed edge {} {} is not in the graph",
                                    tokens[1], tokens[2]
                                ),
                            )
                        })?;
                    e2.insert(id);
                }
                _ => {
                    return Err(Error::input(
                        line,
                        format!("unknown directive `#@{}`", tokens.join(" ")),
                    ))
                }
            }
        }
        let nu = nu.unwrap_or_else(|| matching_number(&graph));
        let e1 = (0..graph.edge_count())
            .filter(|id| !e2.contains(id))
            .collect();
        GbsInstance::new(graph, e1, e2, nu)
    }

    /// Edge-list text with directives; [`GbsInstance::parse`] reads it back.
    pub fn to_text(&self) -> String {
        let mut out = format!("#@nu {}\n", self.nu);
        for &id in &self.e2 {
            let (a, b) = self.graph.edge_names(id);
            out.push_str(&format!("#@fixed {a} {b}\n"));
        }
        out.push_str(&self.graph.to_edge_list());
        out
    }

    /// Whether the budget and partition are those of the plain blocking set
    /// problem on the ambient graph.
    pub fn is_root(&self) -> bool {
        self.e2.is_empty()
            && self.e1.len() == self.graph.edge_count()
            && self.nu == matching_number(&self.graph)
    }
}

/// The blocking set problem on `g`: every edge may be blocked and the
/// budget is ν(G).
pub fn root_instance(g: &Graph) -> GbsInstance {
    GbsInstance {
        graph: g.clone(),
        e1: (0..g.edge_count()).collect(),
        e2: BTreeSet::new(),
        nu: matching_number(g),
    }
}

#[derive(Debug, Clone)]
pub struct BlockingSetResult {
    /// Edge ids of the input graph.
    pub blocking_set: BTreeSet<EdgeId>,
    pub x_hat: Vec<Rational>,
    /// Relaxation optimum on the input instance; a lower bound on the
    /// optimum blocking set size.
    pub root_lp_value: Rational,
    pub omega: Rational,
    /// `2ω+1` on bipartite inputs, `8ω+2` after doubling.
    pub guarantee_factor: Rational,
    pub doubled: bool,
    pub trace: Vec<String>,
    pub stats: IrStats,
}

impl BlockingSetResult {
    pub fn bound_holds(&self) -> bool {
        Rational::from(self.blocking_set.len() as i64)
            <= &self.guarantee_factor * &self.root_lp_value
    }
}

/// Runs the full reduction on the plain blocking set problem for `g`.
pub fn stabilize(g: &Graph) -> Result<BlockingSetResult> {
    stabilize_instance(&root_instance(g), None)
}

/// Runs the reduction on `inst`. `omega` overrides the computed sparsity of
/// the active graph; it must be at least `max(1, density)`.
pub fn stabilize_instance(
    inst: &GbsInstance,
    omega: Option<Rational>,
) -> Result<BlockingSetResult> {
    let active = inst.active_graph();
    let omega = match omega {
        Some(w) => w,
        None => compute_sparsity(&active).omega,
    };
    let root_lp_value = relaxation_value(inst)?;
    let two = Rational::from(2);

    let result = if active.is_bipartite().is_some() {
        let out = ir_solve(inst, &omega)?;
        BlockingSetResult {
            blocking_set: out.blocking_set,
            x_hat: out.x_hat,
            root_lp_value,
            guarantee_factor: &two * &omega + Rational::one(),
            omega,
            doubled: false,
            trace: out.trace,
            stats: out.stats,
        }
    } else {
        let d = bipartite_double(&inst.graph);
        let e1 = inst
            .e1
            .iter()
            .flat_map(|&id| [d.edge_map[id].0, d.edge_map[id].1])
            .collect();
        let e2 = inst
            .e2
            .iter()
            .flat_map(|&id| [d.edge_map[id].0, d.edge_map[id].1])
            .collect();
        let host = GbsInstance::new(d.host.clone(), e1, e2, 2 * inst.nu)?;
        let host_omega = &two * &omega;
        let out = ir_solve(&host, &host_omega)?;
        let (x_hat, blocking_set) = pull_back(&d, &out.x_hat, &out.blocking_set);
        BlockingSetResult {
            blocking_set,
            x_hat,
            root_lp_value,
            guarantee_factor: Rational::from(8) * &omega + two,
            omega,
            doubled: true,
            trace: out.trace,
            stats: out.stats,
        }
    };
    check_result(inst, &result)?;
    Ok(result)
}

/// Feasibility of `(x̂, B̂)` on the input instance and the certified bound.
fn check_result(inst: &GbsInstance, r: &BlockingSetResult) -> Result<()> {
    for id in inst.edges() {
        if r.blocking_set.contains(&id) {
            continue;
        }
        let e = inst.graph.edge(id);
        if &r.x_hat[e.0] + &r.x_hat[e.1] < Rational::one() {
            return Err(Error::invariant(format!(
                "edge {} is neither blocked nor covered",
                inst.graph.edge_label(&e)
            )));
        }
    }
    let total: Rational = r.x_hat.iter().sum();
    if total > Rational::from(inst.nu as i64) || r.x_hat.iter().any(Rational::is_negative) {
        return Err(Error::invariant(format!(
            "allocation total {total} exceeds budget {}",
            inst.nu
        )));
    }
    if !r.bound_holds() {
        return Err(Error::invariant(format!(
            "|B| = {} exceeds {} * {}",
            r.blocking_set.len(),
            r.guarantee_factor,
            r.root_lp_value
        )));
    }
    Ok(())
}
