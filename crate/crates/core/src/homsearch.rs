//! Enumeration and counting of homomorphisms, monomorphisms and isomorphisms
//! by backtracking search.
//!
//! Enumeration order is total and stable: results are returned sorted
//! lexicographically by map vector, independent of search heuristics.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::structures::{components, FinStructure, Homomorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    /// All homomorphisms.
    Hom,
    /// Injective homomorphisms.
    Mono,
    /// Isomorphisms.
    Iso,
}

#[derive(Clone, Debug)]
pub struct HomQuery {
    pub source: FinStructure,
    pub target: FinStructure,
    pub mode: HomMode,
    /// Enumerating more maps than this is an error, not a truncation.
    pub limit: Option<usize>,
}

impl HomQuery {
    pub fn homs(source: FinStructure, target: FinStructure) -> Self {
        HomQuery {
            source,
            target,
            mode: HomMode::Hom,
            limit: None,
        }
    }
}

struct Search<'a> {
    source: &'a FinStructure,
    target: &'a FinStructure,
    mode: HomMode,
    /// variable assignment order: source vertices, highest Gaifman degree first
    order: Vec<usize>,
    /// source Gaifman adjacency
    src_adj: Vec<Vec<usize>>,
    /// target Gaifman adjacency, sorted for binary search
    tgt_adj: Vec<Vec<usize>>,
    /// for non-graph signatures: tuples grouped by the depth completing them
    completed: Vec<Vec<(usize, usize)>>,
    graph_mode: bool,
    assignment: Vec<usize>,
    used: Vec<bool>,
}

const UNASSIGNED: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(source: &'a FinStructure, target: &'a FinStructure, mode: HomMode) -> Self {
        let src_adj = source.gaifman_adjacency();
        let tgt_adj = target.gaifman_adjacency();
        let mut order: Vec<usize> = (0..source.size()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(src_adj[v].len()), v));

        let graph_mode = source.sig().is_graph();
        let mut completed: Vec<Vec<(usize, usize)>> = vec![Vec::new(); source.size()];
        if !graph_mode {
            let mut depth_of = vec![0usize; source.size()];
            for (d, &v) in order.iter().enumerate() {
                depth_of[v] = d;
            }
            for rel in 0..source.relation_count() {
                for (ti, t) in source.tuples(rel).iter().enumerate() {
                    let last = t.iter().map(|&x| depth_of[x]).max().unwrap();
                    completed[last].push((rel, ti));
                }
            }
        }
        Search {
            assignment: vec![UNASSIGNED; source.size()],
            used: vec![false; target.size()],
            source,
            target,
            mode,
            order,
            src_adj,
            tgt_adj,
            completed,
            graph_mode,
        }
    }

    fn consistent(&self, v: usize, w: usize, depth: usize) -> bool {
        if self.graph_mode {
            // candidate generation already restricted to common neighbours
            // of assigned neighbours, nothing further to check
            let _ = (v, w);
            true
        } else {
            let mut image = Vec::new();
            for &(rel, ti) in &self.completed[depth] {
                let t = &self.source.tuples(rel)[ti];
                image.clear();
                image.extend(t.iter().map(|&x| self.assignment[x]));
                if !self.target.has_tuple(rel, &image) {
                    return false;
                }
            }
            true
        }
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        if self.graph_mode {
            let assigned: Vec<usize> = self.src_adj[v]
                .iter()
                .filter(|&&u| self.assignment[u] != UNASSIGNED)
                .map(|&u| self.assignment[u])
                .collect();
            match assigned.split_first() {
                None => (0..self.target.size()).collect(),
                Some((&first, rest)) => self.tgt_adj[first]
                    .iter()
                    .copied()
                    .filter(|&w| {
                        rest.iter()
                            .all(|&a| self.tgt_adj[a].binary_search(&w).is_ok())
                    })
                    .collect(),
            }
        } else {
            (0..self.target.size()).collect()
        }
    }

    fn run<F: FnMut(&[usize]) -> Result<()>>(&mut self, emit: &mut F) -> Result<()> {
        self.step(0, emit)
    }

    fn step<F: FnMut(&[usize]) -> Result<()>>(&mut self, depth: usize, emit: &mut F) -> Result<()> {
        if depth == self.order.len() {
            return emit(&self.assignment);
        }
        let v = self.order[depth];
        for w in self.candidates(v) {
            if self.mode != HomMode::Hom && self.used[w] {
                continue;
            }
            self.assignment[v] = w;
            if self.consistent(v, w, depth) {
                self.used[w] = true;
                self.step(depth + 1, emit)?;
                self.used[w] = false;
            }
            self.assignment[v] = UNASSIGNED;
        }
        Ok(())
    }
}

fn check_query(source: &FinStructure, target: &FinStructure) -> Result<()> {
    if source.sig() != target.sig() {
        return Err(Error::SignatureMismatch(
            "homomorphism query endpoints have different signatures".into(),
        ));
    }
    Ok(())
}

/// Isomorphism queries can be settled early on counting invariants.
fn iso_precheck(source: &FinStructure, target: &FinStructure) -> bool {
    source.size() == target.size()
        && (0..source.relation_count())
            .all(|rel| source.tuples(rel).len() == target.tuples(rel).len())
}

/// Enumerate all maps satisfying the query, sorted lexicographically by map
/// vector. Exceeding `limit` is an error carrying the cap.
pub fn enumerate_homs(q: &HomQuery) -> Result<Vec<Homomorphism>> {
    check_query(&q.source, &q.target)?;
    if q.mode == HomMode::Iso && !iso_precheck(&q.source, &q.target) {
        return Ok(Vec::new());
    }
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut search = Search::new(&q.source, &q.target, q.mode);
    search.run(&mut |assignment| {
        if let Some(limit) = q.limit {
            if maps.len() == limit {
                return Err(Error::LimitExceeded { limit });
            }
        }
        maps.push(assignment.to_vec());
        Ok(())
    })?;
    maps.sort_unstable();
    Ok(maps
        .into_iter()
        .map(|m| Homomorphism::from_parts_unchecked(q.source.clone(), q.target.clone(), m))
        .collect())
}

/// 64-bit counter escalating to arbitrary precision on overflow.
enum Counter {
    Small(u64),
    Big(BigUint),
}

impl Counter {
    fn bump(&mut self) {
        match self {
            Counter::Small(n) => match n.checked_add(1) {
                Some(m) => *n = m,
                None => *self = Counter::Big(BigUint::from(*n) + 1u32),
            },
            Counter::Big(n) => *n += 1u32,
        }
    }

    fn into_big(self) -> BigUint {
        match self {
            Counter::Small(n) => BigUint::from(n),
            Counter::Big(n) => n,
        }
    }
}

/// The number of homomorphisms `source -> target`, counted by backtracking
/// without materializing the maps.
///
/// The count factors through the connected components of the source
/// (`hom(C1 + C2, B) = hom(C1, B) * hom(C2, B)`), so results can exceed 64
/// bits and are returned as big integers.
pub fn count_homs(source: &FinStructure, target: &FinStructure) -> Result<BigUint> {
    check_query(source, target)?;
    let mut product = BigUint::from(1u32);
    for comp in components(source).components {
        let mut counter = Counter::Small(0);
        let mut search = Search::new(&comp, target, HomMode::Hom);
        search
            .run(&mut |_| {
                counter.bump();
                Ok(())
            })
            .expect("counting emits no errors");
        let n = counter.into_big();
        if n == BigUint::from(0u32) {
            return Ok(BigUint::from(0u32));
        }
        product *= n;
    }
    Ok(product)
}
