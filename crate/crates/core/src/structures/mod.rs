//! Finite relational structures and graphs: the objects everything else is
//! built from, together with coproducts, Gaifman graphs, connected-component
//! decomposition and isomorphism testing.

mod iso;
mod text;

pub use iso::{canonical_graph, canonical_key, is_isomorphic};
pub use text::{parse, serialize};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A relational signature: a list of named relations with arities.
///
/// In graph mode the signature is a single binary relation `E`, interpreted
/// symmetrically and irreflexively, and serialized in the compact edge format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    relations: Vec<(String, usize)>,
    graph_mode: bool,
}

const RESERVED_WORDS: [&str; 3] = ["signature", "graph", "universe"];

impl Signature {
    /// The graph signature: one symmetric irreflexive binary relation `E`.
    pub fn graph() -> Self {
        Signature {
            relations: vec![("E".to_string(), 2)],
            graph_mode: true,
        }
    }

    /// A general relational signature from `(name, arity)` pairs.
    pub fn relational(relations: Vec<(String, usize)>) -> Result<Self> {
        for (name, arity) in &relations {
            if *arity == 0 {
                return Err(Error::InvalidStructure(format!(
                    "relation {name} has arity 0"
                )));
            }
            if name.is_empty()
                || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                || name.chars().next().is_some_and(|c| c.is_ascii_digit())
                || RESERVED_WORDS.contains(&name.as_str())
            {
                return Err(Error::InvalidStructure(format!(
                    "invalid relation name {name:?}"
                )));
            }
        }
        for i in 0..relations.len() {
            for j in (i + 1)..relations.len() {
                if relations[i].0 == relations[j].0 {
                    return Err(Error::InvalidStructure(format!(
                        "duplicate relation name {:?}",
                        relations[i].0
                    )));
                }
            }
        }
        Ok(Signature {
            relations,
            graph_mode: false,
        })
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn arity(&self, rel: usize) -> usize {
        self.relations[rel].1
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn is_graph(&self) -> bool {
        self.graph_mode
    }
}

/// A finite relational structure with universe `{0, .., size-1}`.
///
/// Tuple sets are kept sorted and duplicate-free; in graph mode both
/// orientations of every edge are stored. Values are immutable after
/// construction and cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    sig: Arc<Signature>,
    size: usize,
    tuples: Arc<Vec<Vec<Vec<usize>>>>,
}

impl fmt::Debug for FinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sig.is_graph() {
            write!(f, "Graph({}v; {:?})", self.size, self.edges())
        } else {
            write!(f, "FinStructure({}el; {:?})", self.size, self.tuples)
        }
    }
}

impl FinStructure {
    /// Build a structure, validating all invariants of the signature.
    pub fn new(sig: Signature, size: usize, mut tuples: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if tuples.len() != sig.relations().len() {
            return Err(Error::InvalidStructure(format!(
                "expected {} tuple sets, got {}",
                sig.relations().len(),
                tuples.len()
            )));
        }
        for (rel, rel_tuples) in tuples.iter_mut().enumerate() {
            let arity = sig.arity(rel);
            for t in rel_tuples.iter() {
                if t.len() != arity {
                    return Err(Error::InvalidStructure(format!(
                        "tuple {t:?} has wrong arity for relation {}",
                        sig.relations()[rel].0
                    )));
                }
                if let Some(&x) = t.iter().find(|&&x| x >= size) {
                    return Err(Error::InvalidStructure(format!(
                        "tuple entry {x} outside universe of size {size}"
                    )));
                }
            }
            rel_tuples.sort_unstable();
            rel_tuples.dedup();
        }
        if sig.is_graph() {
            let edges = &tuples[0];
            for t in edges {
                if t[0] == t[1] {
                    return Err(Error::InvalidStructure(format!("loop at vertex {}", t[0])));
                }
                if edges.binary_search(&vec![t[1], t[0]]).is_err() {
                    return Err(Error::InvalidStructure(format!(
                        "edge ({}, {}) is missing its reverse orientation",
                        t[0], t[1]
                    )));
                }
            }
        }
        Ok(FinStructure {
            sig: Arc::new(sig),
            size,
            tuples: Arc::new(tuples),
        })
    }

    pub(crate) fn from_parts(
        sig: Arc<Signature>,
        size: usize,
        mut tuples: Vec<Vec<Vec<usize>>>,
    ) -> Self {
        for rel_tuples in tuples.iter_mut() {
            rel_tuples.sort_unstable();
            rel_tuples.dedup();
        }
        FinStructure {
            sig,
            size,
            tuples: Arc::new(tuples),
        }
    }

    /// An undirected loopless graph from an edge list; both orientations are
    /// stored internally.
    pub fn graph(size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut tuples = Vec::with_capacity(edges.len() * 2);
        for &(u, v) in edges {
            tuples.push(vec![u, v]);
            tuples.push(vec![v, u]);
        }
        FinStructure::new(Signature::graph(), size, vec![tuples])
    }

    /// The edgeless graph on `n` vertices.
    pub fn edgeless(n: usize) -> Self {
        FinStructure::graph(n, &[]).expect("edgeless graph is always valid")
    }

    /// The complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        FinStructure::graph(n, &edges).expect("complete graph is always valid")
    }

    /// The cycle `C_n` (requires `n >= 3`).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FinStructure::graph(n, &edges).expect("cycle is always valid")
    }

    /// The path `P_n` on `n` vertices (so `n - 1` edges).
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        FinStructure::graph(n, &edges).expect("path is always valid")
    }

    /// The star `K_{1,m}` with centre 0 and `m` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
        FinStructure::graph(leaves + 1, &edges).expect("star is always valid")
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub(crate) fn sig_arc(&self) -> Arc<Signature> {
        Arc::clone(&self.sig)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Tuples of one relation, sorted lexicographically.
    pub fn tuples(&self, rel: usize) -> &[Vec<usize>] {
        &self.tuples[rel]
    }

    pub fn relation_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn has_tuple(&self, rel: usize, t: &[usize]) -> bool {
        self.tuples[rel]
            .binary_search_by(|probe| probe.as_slice().cmp(t))
            .is_ok()
    }

    /// Undirected edges as `u < v` pairs (graph mode only).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        assert!(self.sig.is_graph(), "edges() requires graph mode");
        self.tuples[0]
            .iter()
            .filter(|t| t[0] < t[1])
            .map(|t| (t[0], t[1]))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        assert!(self.sig.is_graph(), "edge_count() requires graph mode");
        self.tuples[0].len() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.has_tuple(0, &[u, v])
    }

    /// Adjacency lists of the Gaifman graph (for graphs: plain adjacency).
    pub fn gaifman_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.size];
        for rel_tuples in self.tuples.iter() {
            for t in rel_tuples {
                for i in 0..t.len() {
                    for j in (i + 1)..t.len() {
                        if t[i] != t[j] {
                            adj[t[i]].push(t[j]);
                            adj[t[j]].push(t[i]);
                        }
                    }
                }
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// The Gaifman graph: vertices are the universe, edges join distinct
    /// elements co-occurring in some tuple.
    pub fn gaifman(&self) -> FinStructure {
        let adj = self.gaifman_adjacency();
        let mut tuples = Vec::new();
        for (u, list) in adj.iter().enumerate() {
            for &v in list {
                tuples.push(vec![u, v]);
            }
        }
        FinStructure::from_parts(Arc::new(Signature::graph()), self.size, vec![tuples])
    }

    pub fn is_connected(&self) -> bool {
        if self.size == 0 {
            return true;
        }
        let adj = self.gaifman_adjacency();
        let mut seen = vec![false; self.size];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.size
    }

    /// Total number of tuples across all relations.
    pub fn tuple_count(&self) -> usize {
        self.tuples.iter().map(|t| t.len()).sum()
    }
}

/// A relation-preserving total map between two structures.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: FinStructure,
    target: FinStructure,
    map: Vec<usize>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom{:?}", self.map)
    }
}

impl Homomorphism {
    /// Build a homomorphism, checking totality and preservation of every
    /// relation.
    pub fn new(source: FinStructure, target: FinStructure, map: Vec<usize>) -> Result<Self> {
        if source.sig() != target.sig() {
            return Err(Error::SignatureMismatch(
                "homomorphism endpoints have different signatures".into(),
            ));
        }
        if map.len() != source.size() {
            return Err(Error::InvalidHomomorphism(format!(
                "map has length {}, source has size {}",
                map.len(),
                source.size()
            )));
        }
        if let Some(&x) = map.iter().find(|&&x| x >= target.size()) {
            return Err(Error::InvalidHomomorphism(format!(
                "map value {x} outside target universe of size {}",
                target.size()
            )));
        }
        let hom = Homomorphism {
            source,
            target,
            map,
        };
        hom.check_preservation()?;
        Ok(hom)
    }

    pub(crate) fn from_parts_unchecked(
        source: FinStructure,
        target: FinStructure,
        map: Vec<usize>,
    ) -> Self {
        debug_assert!(map.len() == source.size());
        Homomorphism {
            source,
            target,
            map,
        }
    }

    fn check_preservation(&self) -> Result<()> {
        let mut image = Vec::new();
        for rel in 0..self.source.relation_count() {
            for t in self.source.tuples(rel) {
                image.clear();
                image.extend(t.iter().map(|&x| self.map[x]));
                if !self.target.has_tuple(rel, &image) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "tuple {t:?} of relation {} maps to {image:?}, absent in target",
                        self.source.sig().relations()[rel].0
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(s: &FinStructure) -> Self {
        Homomorphism {
            source: s.clone(),
            target: s.clone(),
            map: (0..s.size()).collect(),
        }
    }

    pub fn source(&self) -> &FinStructure {
        &self.source
    }

    pub fn target(&self) -> &FinStructure {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ inner`: apply `inner` first. Requires `inner.target == self.source`.
    pub fn compose(&self, inner: &Homomorphism) -> Result<Homomorphism> {
        if inner.target != self.source {
            return Err(Error::InvalidHomomorphism(
                "composition endpoints do not match".into(),
            ));
        }
        Ok(Homomorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: inner.map.iter().map(|&x| self.map[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map
            .iter()
            .all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        for &x in &self.map {
            seen[x] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// The inverse homomorphism, when this map is an isomorphism.
    pub fn inverse(&self) -> Option<Homomorphism> {
        if self.source.size() != self.target.size() || !self.is_injective() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Homomorphism::new(self.target.clone(), self.source.clone(), inv).ok()
    }

    /// Checks that this map is a homomorphism (used to re-validate values
    /// assembled through unchecked internal paths).
    pub fn is_valid(&self) -> bool {
        self.map.len() == self.source.size()
            && self.map.iter().all(|&x| x < self.target.size())
            && self.check_preservation().is_ok()
    }
}

/// The decomposition of a structure into its Gaifman-connected components.
#[derive(Clone, Debug)]
pub struct ComponentDecomposition {
    /// Components as standalone structures, ordered by smallest original
    /// element.
    pub components: Vec<FinStructure>,
    /// Inclusion homomorphisms `component -> original`.
    pub inclusions: Vec<Homomorphism>,
    /// For each original element: `(component index, local index)`.
    pub witness: Vec<(usize, usize)>,
}

/// The disjoint union of `parts`, with injection homomorphisms.
///
/// The signature argument disambiguates the empty coproduct.
pub fn coproduct(
    sig: &Signature,
    parts: &[FinStructure],
) -> Result<(FinStructure, Vec<Homomorphism>)> {
    for p in parts {
        if p.sig() != sig {
            return Err(Error::SignatureMismatch(
                "coproduct parts must all share the given signature".into(),
            ));
        }
    }
    let total: usize = parts.iter().map(|p| p.size()).sum();
    let rel_count = sig.relations().len();
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new(); rel_count];
    let mut offsets = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for p in parts {
        offsets.push(offset);
        for (rel, dst) in tuples.iter_mut().enumerate() {
            for t in p.tuples(rel) {
                dst.push(t.iter().map(|&x| x + offset).collect());
            }
        }
        offset += p.size();
    }
    let sum = FinStructure::from_parts(Arc::new(sig.clone()), total, tuples);
    let injections = parts
        .iter()
        .zip(&offsets)
        .map(|(p, &off)| {
            Homomorphism::from_parts_unchecked(
                p.clone(),
                sum.clone(),
                (off..off + p.size()).collect(),
            )
        })
        .collect();
    Ok((sum, injections))
}

/// Decompose a structure into Gaifman-connected components.
pub fn components(s: &FinStructure) -> ComponentDecomposition {
    let adj = s.gaifman_adjacency();
    let mut comp_of = vec![usize::MAX; s.size()];
    let mut comp_members: Vec<Vec<usize>> = Vec::new();
    for start in 0..s.size() {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let idx = comp_members.len();
        let mut members = vec![start];
        comp_of[start] = idx;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if comp_of[v] == usize::MAX {
                    comp_of[v] = idx;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        comp_members.push(members);
    }

    let mut witness = vec![(0, 0); s.size()];
    let mut components = Vec::with_capacity(comp_members.len());
    let mut inclusions = Vec::with_capacity(comp_members.len());
    for (idx, members) in comp_members.iter().enumerate() {
        let mut local = vec![usize::MAX; s.size()];
        for (l, &v) in members.iter().enumerate() {
            local[v] = l;
            witness[v] = (idx, l);
        }
        let mut tuples: Vec<Vec<Vec<usize>>> = vec![Vec::new(); s.relation_count()];
        for (rel, dst) in tuples.iter_mut().enumerate() {
            for t in s.tuples(rel) {
                if t.iter().all(|&x| comp_of[x] == idx) {
                    dst.push(t.iter().map(|&x| local[x]).collect());
                }
            }
        }
        let comp = FinStructure::from_parts(s.sig_arc(), members.len(), tuples);
        let incl = Homomorphism::from_parts_unchecked(comp.clone(), s.clone(), members.clone());
        components.push(comp);
        inclusions.push(incl);
    }
    ComponentDecomposition {
        components,
        inclusions,
        witness,
    }
}
