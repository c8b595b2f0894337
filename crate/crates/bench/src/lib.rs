//! Fixture builders shared by the criterion benches.

use netbargain::oracle::{gen_gap, gen_sparse_bounded, GapInstance};
use netbargain::{q, Graph, Rational};

/// Sparsity target used by the random fixtures.
pub fn default_omega() -> Rational {
    q(3, 2)
}

/// Seeded sparse graph on `n` vertices with at most `max_edges` edges.
pub fn sparse(n: usize, max_edges: usize, seed: u64) -> Graph {
    gen_sparse_bounded(n, &default_omega(), max_edges, seed).expect("sparse fixture")
}

/// Integrality-gap instance of size `n`.
pub fn gap(n: usize) -> GapInstance {
    gen_gap(n).expect("gap fixture")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (format!("o{i}"), format!("o{}", (i + 1) % 5)));
    let inner = (0..5).map(|i| (format!("i{i}"), format!("i{}", (i + 2) % 5)));
    let spokes = (0..5).map(|i| (format!("o{i}"), format!("i{i}")));
    Graph::new(Vec::<String>::new(), outer.chain(inner).chain(spokes)).expect("petersen fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(petersen().edge_count(), 15);
        assert_eq!(sparse(10, 12, 1).vertex_count(), 10);
        assert_eq!(gap(2).x_set.len(), 2);
    }
}
