//! Colour refinement and fractional isomorphism.
//!
//! Fractional isomorphism of two graphs is decided by refining the disjoint
//! union jointly and comparing, per colour, how many vertices of each side
//! hold it. Joint refinement makes colour ids comparable across the two
//! graphs without any canonical-hashing conventions.

use std::collections::HashMap;

use crate::structures::FinStructure;

/// Per-round vertex colourings until stabilization, colours normalized to
/// ranks of their defining signatures.
#[derive(Clone, Debug)]
pub struct RefinementHistory {
    pub rounds: Vec<Vec<usize>>,
}

impl RefinementHistory {
    pub fn stable(&self) -> &[usize] {
        self.rounds.last().expect("at least the initial round")
    }

    pub fn color_classes(&self) -> usize {
        let stable = self.stable();
        let mut distinct: Vec<usize> = stable.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }
}

fn refine_rounds(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut rounds = vec![vec![0usize; n]];
    if n == 0 {
        return rounds;
    }
    loop {
        let current = rounds.last().unwrap();
        let mut signatures: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut neigh: Vec<usize> = adj[v].iter().map(|&u| current[u]).collect();
            neigh.sort_unstable();
            signatures.push((current[v], neigh));
        }
        let mut sorted: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
        sorted.sort();
        sorted.dedup();
        let rank: HashMap<&(usize, Vec<usize>), usize> =
            sorted.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = signatures.iter().map(|s| rank[s]).collect();
        let old_classes = {
            let mut d = current.clone();
            d.sort_unstable();
            d.dedup();
            d.len()
        };
        let stabilized = sorted.len() == old_classes;
        rounds.push(next);
        if stabilized {
            return rounds;
        }
    }
}

/// Iterated refinement of vertex colours by neighbour-colour multisets until
/// stable, starting from the uniform colouring.
pub fn color_refinement(g: &FinStructure) -> RefinementHistory {
    RefinementHistory {
        rounds: refine_rounds(&g.gaifman_adjacency()),
    }
}

fn side_histogram(colors: &[usize], side: std::ops::Range<usize>) -> Vec<(usize, usize)> {
    let mut h: HashMap<usize, usize> = HashMap::new();
    for v in side {
        *h.entry(colors[v]).or_insert(0) += 1;
    }
    let mut out: Vec<_> = h.into_iter().collect();
    out.sort_unstable();
    out
}

/// Fractional isomorphism as colour-refinement equivalence: refine the two
/// graphs jointly and compare the colour-class size histograms of the two
/// sides. Requires equal vertex counts.
///
/// Classes only ever split, so equal histograms at the stable round force
/// equal histograms at every earlier round as well.
pub fn fractional_iso(a: &FinStructure, b: &FinStructure) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let mut adj = a.gaifman_adjacency();
    adj.extend(
        b.gaifman_adjacency()
            .into_iter()
            .map(|list| list.into_iter().map(|v| v + a.size()).collect::<Vec<_>>()),
    );
    let rounds = refine_rounds(&adj);
    let stable = rounds.last().unwrap();
    side_histogram(stable, 0..a.size()) == side_histogram(stable, a.size()..adj.len())
}
