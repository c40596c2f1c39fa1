//! Exhaustive enumeration of graphs up to isomorphism by vertex
//! augmentation with canonical-form deduplication.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::structures::{canonical_graph, canonical_key, serialize, FinStructure};

/// Largest universe the exhaustive enumerator accepts.
pub const MAX_ENUMERATION_SIZE: usize = 7;

fn check_bound(max_size: usize) -> Result<()> {
    if max_size > MAX_ENUMERATION_SIZE {
        return Err(Error::BoundExceeded(format!(
            "exhaustive enumeration is limited to {MAX_ENUMERATION_SIZE} vertices, asked for {max_size}"
        )));
    }
    Ok(())
}

/// All graphs on exactly `n` vertices, one canonical representative per
/// isomorphism class, sorted by canonical serialization.
pub fn graphs_of_size(n: usize) -> Result<Vec<FinStructure>> {
    check_bound(n)?;
    let mut level: Vec<FinStructure> = vec![FinStructure::edgeless(0)];
    for new_vertex in 0..n {
        let mut seen: HashSet<(usize, Vec<u64>)> = HashSet::new();
        let mut next: Vec<FinStructure> = Vec::new();
        for g in &level {
            let base_edges = g.edges();
            for mask in 0u64..(1 << new_vertex) {
                let mut edges = base_edges.clone();
                for u in 0..new_vertex {
                    if mask & (1 << u) != 0 {
                        edges.push((u, new_vertex));
                    }
                }
                let candidate =
                    FinStructure::graph(new_vertex + 1, &edges).expect("augmented graph is valid");
                let (canon, _) = canonical_graph(&candidate);
                if seen.insert(canonical_key(&canon)) {
                    next.push(canon);
                }
            }
        }
        level = next;
    }
    level.sort_by_key(serialize);
    Ok(level)
}

/// All graphs with at most `max_size` vertices up to isomorphism, including
/// the empty graph, ordered by size then canonical serialization.
pub fn all_graphs(max_size: usize) -> Result<Vec<FinStructure>> {
    check_bound(max_size)?;
    let mut out = Vec::new();
    for n in 0..=max_size {
        out.extend(graphs_of_size(n)?);
    }
    Ok(out)
}

/// All connected graphs with 1..=max_size vertices up to isomorphism.
pub fn connected_graphs(max_size: usize) -> Result<Vec<FinStructure>> {
    Ok(all_graphs(max_size)?
        .into_iter()
        .filter(|g| !g.is_empty() && g.is_connected())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlabelled_graph_counts() {
        // 1, 2, 4, 11, 34 graphs on 1..=5 vertices
        assert_eq!(graphs_of_size(1).unwrap().len(), 1);
        assert_eq!(graphs_of_size(2).unwrap().len(), 2);
        assert_eq!(graphs_of_size(3).unwrap().len(), 4);
        assert_eq!(graphs_of_size(4).unwrap().len(), 11);
        assert_eq!(graphs_of_size(5).unwrap().len(), 34);
    }

    #[test]
    fn connected_graph_counts() {
        // 1, 1, 2, 6, 21 connected graphs on 1..=5 vertices
        let counts: Vec<usize> = (1..=5)
            .map(|n| {
                connected_graphs(n)
                    .unwrap()
                    .iter()
                    .filter(|g| g.size() == n)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn six_vertex_counts() {
        assert_eq!(graphs_of_size(6).unwrap().len(), 156);
        let connected = connected_graphs(6)
            .unwrap()
            .iter()
            .filter(|g| g.size() == 6)
            .count();
        assert_eq!(connected, 112);
    }

    #[test]
    fn seven_vertex_counts_at_the_bound() {
        let graphs = graphs_of_size(7).unwrap();
        assert_eq!(graphs.len(), 1044);
        assert_eq!(graphs.iter().filter(|g| g.is_connected()).count(), 853);
    }

    #[test]
    fn enumeration_is_deterministic_and_canonical() {
        let a = all_graphs(4).unwrap();
        let b = all_graphs(4).unwrap();
        assert_eq!(a, b);
        for g in &a {
            assert_eq!(crate::structures::canonical_graph(g).0, *g);
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert!(all_graphs(8).is_err());
    }
}
