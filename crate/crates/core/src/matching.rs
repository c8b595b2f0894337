//! Maximum matchings and the core of the matching game.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::lp::{self, LpProblem, LpStatus, Relation, Sense};
use crate::rational::Rational;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Matched edge ids in increasing order.
    pub edges: Vec<EdgeId>,
    pub mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn exposed(&self) -> Vec<usize> {
        (0..self.mate.len())
            .filter(|&v| self.mate[v].is_none())
            .collect()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.edges.binary_search(&id).is_ok()
    }
}

/// Edmonds' blossom algorithm; deterministic for a given graph.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.vertex_count();
    let mut mate = vec![NONE; n];
    for e in g.edges() {
        if mate[e.0] == NONE && mate[e.1] == NONE {
            mate[e.0] = e.1;
            mate[e.1] = e.0;
        }
    }
    let mut search = Search::new(n);
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        if let Some(end) = search.find_path(g, &mate, root) {
            let mut v = end;
            while v != NONE {
                let pv = search.parent[v];
                let next = mate[pv];
                mate[v] = pv;
                mate[pv] = v;
                v = next;
            }
        }
    }
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| mate[e.0] == e.1)
        .map(|(id, _)| id)
        .collect();
    Matching {
        edges,
        mate: mate.into_iter().map(|m| (m != NONE).then_some(m)).collect(),
    }
}

struct Search {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: std::collections::VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Search {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
            queue: Default::default(),
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_path(&mut self, g: &Graph, mate: &[usize], root: usize) -> Option<usize> {
        let n = mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for to in g.neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

/// ν(G).
pub fn matching_number(g: &Graph) -> usize {
    max_matching(g).size()
}

/// Vertices `i` with ν(G − i) = ν(G), in increasing order.
pub fn inessential_vertices(g: &Graph) -> Vec<usize> {
    let nu = matching_number(g);
    (0..g.vertex_count())
        .into_par_iter()
        .filter(|&i| {
            let without = g.filter_edges(|id| !g.edge(id).touches(i));
            matching_number(&without) == nu
        })
        .collect()
}

/// Optimum of the fractional matching LP: max Σ y_e with Σ_{e ∋ v} y_e ≤ 1.
pub fn fractional_matching_value(g: &Graph) -> Rational {
    let mut p = LpProblem::new(Sense::Maximize);
    for id in 0..g.edge_count() {
        let (a, b) = g.edge_names(id);
        let v = p.add_nonneg(format!("y_{a}_{b}"));
        p.set_objective(v, Rational::one());
    }
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            continue;
        }
        let terms = g
            .incident(v)
            .iter()
            .map(|&(_, id)| (id, Rational::one()))
            .collect();
        p.add_constraint(
            format!("deg_{}", g.name(v)),
            terms,
            Relation::Le,
            Rational::one(),
        );
    }
    let s = lp::solve(&p);
    debug_assert!(s.is_optimal());
    s.objective
}

fn allocation_lp(g: &Graph, nu: usize) -> LpProblem {
    let mut p = LpProblem::new(Sense::Minimize);
    for v in 0..g.vertex_count() {
        let x = p.add_nonneg(format!("x_{}", g.name(v)));
        p.set_objective(x, Rational::one());
    }
    for (id, e) in g.edges().iter().enumerate() {
        let (a, b) = g.edge_names(id);
        p.add_constraint(
            format!("cover_{a}_{b}"),
            vec![(e.0, Rational::one()), (e.1, Rational::one())],
            Relation::Ge,
            Rational::one(),
        );
    }
    let all = (0..g.vertex_count())
        .map(|v| (v, Rational::one()))
        .collect();
    p.add_constraint("total", all, Relation::Eq, Rational::from(nu as i64));
    p
}

/// A core allocation: x ≥ 0, x(V) = ν(G), x_u + x_v ≥ 1 on every edge.
pub fn stable_allocation(g: &Graph) -> Result<Vec<Rational>> {
    let nu = matching_number(g);
    let s = lp::solve(&allocation_lp(g, nu));
    match s.status {
        LpStatus::Optimal => Ok(s.values),
        _ => Err(Error::precondition("the core of this graph is empty")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreStatus {
    Empty,
    Nonempty,
}

impl CoreStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoreStatus::Empty => "empty",
            CoreStatus::Nonempty => "nonempty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreWitness {
    Allocation(Vec<Rational>),
    /// An edge joining two inessential vertices.
    OffendingEdge(EdgeId),
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    pub nu: usize,
    pub fractional_value: Rational,
    pub inessential: Vec<usize>,
    pub status: CoreStatus,
    pub witness: CoreWitness,
}

/// Decides core non-emptiness three ways and fails if they disagree.
pub fn core_status(g: &Graph) -> Result<CoreReport> {
    let nu = matching_number(g);
    let fractional_value = fractional_matching_value(g);
    let inessential = inessential_vertices(g);
    let mut mask = vec![false; g.vertex_count()];
    for &v in &inessential {
        mask[v] = true;
    }
    let offending = g.edges().iter().position(|e| mask[e.0] && mask[e.1]);
    let allocation = stable_allocation(g).ok();

    let by_lp = fractional_value == Rational::from(nu as i64);
    let by_structure = offending.is_none();
    let by_allocation = allocation.is_some();
    if by_lp != by_structure || by_lp != by_allocation {
        return Err(Error::invariant(format!(
            "core criteria disagree: fractional={by_lp} inessential={by_structure} allocation={by_allocation}"
        )));
    }
    let (status, witness) = match (allocation, offending) {
        (Some(x), _) => (CoreStatus::Nonempty, CoreWitness::Allocation(x)),
        (None, Some(id)) => (CoreStatus::Empty, CoreWitness::OffendingEdge(id)),
        (None, None) => unreachable!("criteria agree"),
    };
    Ok(CoreReport {
        nu,
        fractional_value,
        inessential,
        status,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn g(edges: &[(&str, &str)]) -> Graph {
        Graph::new(Vec::<&str>::new(), edges.iter().copied()).unwrap()
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((format!("o{i}"), format!("o{}", (i + 1) % 5)));
            e.push((format!("o{i}"), format!("i{i}")));
            e.push((format!("i{i}"), format!("i{}", (i + 2) % 5)));
        }
        Graph::new(
            Vec::<&str>::new(),
            e.iter().map(|(a, b)| (a.as_str(), b.as_str())),
        )
        .unwrap()
    }

    fn brute_nu(g: &Graph) -> usize {
        fn rec(g: &Graph, k: usize, used: &mut Vec<bool>) -> usize {
            if k == g.edge_count() {
                return 0;
            }
            let skip = rec(g, k + 1, used);
            let e = g.edge(k);
            if used[e.0] || used[e.1] {
                return skip;
            }
            used[e.0] = true;
            used[e.1] = true;
            let take = 1 + rec(g, k + 1, used);
            used[e.0] = false;
            used[e.1] = false;
            skip.max(take)
        }
        rec(g, 0, &mut vec![false; g.vertex_count()])
    }

    fn names(g: &Graph, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| g.name(v).to_string()).collect()
    }

    fn is_stable(g: &Graph, x: &[Rational], nu: usize) -> bool {
        x.iter().all(|v| !v.is_negative())
            && x.iter().sum::<Rational>() == Rational::from(nu as i64)
            && g.edges()
                .iter()
                .all(|e| &x[e.0] + &x[e.1] >= Rational::one())
    }

    #[test]
    fn matching_sizes() {
        assert_eq!(
            max_matching(&g(&[("a", "b"), ("b", "c"), ("a", "c")])).size(),
            1
        );
        assert_eq!(
            max_matching(&g(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])).size(),
            2
        );
        let p = petersen();
        let m = max_matching(&p);
        assert_eq!(m.size(), 5);
        assert_eq!(brute_nu(&p), 5);
        assert!(m.exposed().is_empty());
    }

    #[test]
    fn inessential_examples() {
        let p3 = g(&[("a", "b"), ("b", "c")]);
        assert_eq!(names(&p3, &inessential_vertices(&p3)), ["a", "c"]);
        let k3 = g(&[("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(names(&k3, &inessential_vertices(&k3)), ["a", "b", "c"]);
        assert!(inessential_vertices(&g(&[("u", "v")])).is_empty());
    }

    #[test]
    fn core_examples() {
        let k3 = g(&[("a", "b"), ("b", "c"), ("a", "c")]);
        let r = core_status(&k3).unwrap();
        assert_eq!(r.status, CoreStatus::Empty);
        assert_eq!(r.fractional_value, q(3, 2));
        assert_eq!(r.witness, CoreWitness::OffendingEdge(0));

        let p3 = g(&[("a", "b"), ("b", "c")]);
        let r = core_status(&p3).unwrap();
        assert_eq!(r.status, CoreStatus::Nonempty);
        let zero_one_zero = vec![q(0, 1), q(1, 1), q(0, 1)];
        assert_eq!(r.witness, CoreWitness::Allocation(zero_one_zero.clone()));
        assert_eq!(stable_allocation(&p3).unwrap(), zero_one_zero);

        let edge = g(&[("u", "v")]);
        let x = stable_allocation(&edge).unwrap();
        assert_eq!(x.iter().sum::<Rational>(), Rational::one());

        let c4 = g(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        assert!(is_stable(&c4, &stable_allocation(&c4).unwrap(), 2));
        assert!(stable_allocation(&k3).is_err());

        let empty = Graph::empty();
        assert_eq!(core_status(&empty).unwrap().status, CoreStatus::Nonempty);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (
            1usize..=12,
            proptest::collection::vec((0usize..12, 0usize..12), 0..22),
        )
            .prop_map(|(n, raw)| {
                let names: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
                let edges: Vec<(&str, &str)> = raw
                    .iter()
                    .filter(|(a, b)| a != b && *a < n && *b < n)
                    .map(|&(a, b)| (names[a].as_str(), names[b].as_str()))
                    .collect();
                Graph::new(names.iter().map(String::as_str), edges).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn blossom_matches_brute_force(gr in arb_graph()) {
            let m = max_matching(&gr);
            prop_assert_eq!(m.size(), brute_nu(&gr));
            let mut seen = vec![false; gr.vertex_count()];
            for &id in &m.edges {
                let e = gr.edge(id);
                prop_assert!(!seen[e.0] && !seen[e.1]);
                seen[e.0] = true;
                seen[e.1] = true;
            }
        }

        #[test]
        fn core_criteria_agree(gr in arb_graph()) {
            let r = core_status(&gr).unwrap();
            if let CoreWitness::Allocation(x) = &r.witness {
                prop_assert!(is_stable(&gr, x, r.nu));
            }
        }
    }
}
