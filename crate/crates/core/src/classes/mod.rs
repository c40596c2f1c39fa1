//! Component-based classes of graphs: connected-member predicates, generator
//! enumeration at bounded size, membership, snapshot closure checks, and the
//! subdivided cliques used for density arguments.

mod enumerate;
mod planar;

pub use enumerate::{all_graphs, connected_graphs, graphs_of_size, MAX_ENUMERATION_SIZE};
pub use planar::is_planar;

use std::sync::Arc;

use crate::density::GeneratorFamily;
use crate::error::{Error, Result};
use crate::homsearch::{enumerate_homs, HomQuery};
use crate::params;
use crate::structures::{components, coproduct, is_isomorphic, FinStructure};

type Predicate = Arc<dyn Fn(&FinStructure) -> Result<bool> + Send + Sync>;

/// A component-based class described by its predicate on connected graphs: a
/// graph belongs to the class iff every component satisfies the predicate.
#[derive(Clone)]
pub struct ClassSpec {
    name: String,
    monotone: bool,
    predicate: Predicate,
}

impl std::fmt::Debug for ClassSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassSpec({})", self.name)
    }
}

impl ClassSpec {
    pub fn new(
        name: impl Into<String>,
        monotone: bool,
        predicate: impl Fn(&FinStructure) -> Result<bool> + Send + Sync + 'static,
    ) -> Self {
        ClassSpec {
            name: name.into(),
            monotone,
            predicate: Arc::new(predicate),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    /// The predicate on a connected graph.
    pub fn connected_member(&self, g: &FinStructure) -> Result<bool> {
        (self.predicate)(g)
    }

    /// Stable CLI identifiers: `cycles`, `trees`, `paths`, `bipartite`,
    /// `planar`, `cores`, `td<=K`, `tw<K`, `pw<K`, `maxdeg<=K`.
    pub fn builtin(name: &str) -> Option<ClassSpec> {
        match name {
            "cycles" => Some(ClassSpec::new("cycles", false, |g| {
                Ok(g.size() >= 3 && (0..g.size()).all(|v| degree(g, v) == 2))
            })),
            "trees" => Some(ClassSpec::new("trees", true, |g| {
                Ok(g.edge_count() + 1 == g.size())
            })),
            "paths" => Some(ClassSpec::new("paths", true, |g| {
                Ok(g.edge_count() + 1 == g.size() && (0..g.size()).all(|v| degree(g, v) <= 2))
            })),
            "bipartite" => Some(ClassSpec::new("bipartite", true, |g| Ok(is_bipartite(g)))),
            "planar" => Some(ClassSpec::new("planar", true, |g| Ok(is_planar(g)))),
            "cores" => Some(ClassSpec::new("cores", false, is_core)),
            _ => {
                if let Some(k) = name
                    .strip_prefix("td<=")
                    .and_then(|k| k.parse::<i64>().ok())
                {
                    return Some(ClassSpec::new(name, true, move |g| {
                        Ok(params::tree_depth(g)? <= params::ExtReal::Fin(k))
                    }));
                }
                if let Some(k) = name.strip_prefix("tw<").and_then(|k| k.parse::<i64>().ok()) {
                    return Some(ClassSpec::new(name, true, move |g| {
                        Ok(params::tree_width(g)? < params::ExtReal::Fin(k))
                    }));
                }
                if let Some(k) = name.strip_prefix("pw<").and_then(|k| k.parse::<i64>().ok()) {
                    return Some(ClassSpec::new(name, true, move |g| {
                        Ok(params::path_width(g)? < params::ExtReal::Fin(k))
                    }));
                }
                if let Some(k) = name
                    .strip_prefix("maxdeg<=")
                    .and_then(|k| k.parse::<i64>().ok())
                {
                    return Some(ClassSpec::new(name, true, move |g| {
                        Ok(params::max_degree(g)? <= params::ExtReal::Fin(k))
                    }));
                }
                None
            }
        }
    }

    pub fn builtin_names() -> [&'static str; 10] {
        [
            "cycles",
            "trees",
            "paths",
            "bipartite",
            "planar",
            "cores",
            "td<=K",
            "tw<K",
            "pw<K",
            "maxdeg<=K",
        ]
    }
}

fn degree(g: &FinStructure, v: usize) -> usize {
    g.gaifman_adjacency()[v].len()
}

/// Two-colourability via BFS on each component.
pub fn is_bipartite(g: &FinStructure) -> bool {
    let adj = g.gaifman_adjacency();
    let mut color = vec![usize::MAX; g.size()];
    for start in 0..g.size() {
        if color[start] != usize::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if color[v] == usize::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether every endomorphism is an automorphism.
pub fn is_core(g: &FinStructure) -> Result<bool> {
    let endos = enumerate_homs(&HomQuery::homs(g.clone(), g.clone()))?;
    Ok(endos.iter().all(|h| h.is_injective()))
}

/// All connected graphs up to `max_size` satisfying the class predicate, as
/// a generator family ordered by (size, canonical serialization).
pub fn generators(spec: &ClassSpec, max_size: usize) -> Result<GeneratorFamily> {
    let mut gens = Vec::new();
    for g in connected_graphs(max_size)? {
        if spec.connected_member(&g)? {
            gens.push(g);
        }
    }
    GeneratorFamily::connected(gens)
}

/// Whether every component of `g` satisfies the class predicate. The empty
/// graph is a member (the empty coproduct).
pub fn membership(spec: &ClassSpec, g: &FinStructure) -> Result<bool> {
    if !g.sig().is_graph() {
        return Err(Error::UnsupportedConfiguration(
            "built-in class predicates are defined on graphs only".into(),
        ));
    }
    for comp in components(g).components {
        if !spec.connected_member(&comp)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of checking the three component-based closure properties on a
/// finite snapshot of a class.
#[derive(Clone, Debug, Default)]
pub struct SnapshotReport {
    pub violations: Vec<String>,
}

impl SnapshotReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn in_snapshot(snapshot: &[FinStructure], g: &FinStructure) -> Result<bool> {
    for member in snapshot {
        if is_isomorphic(member, g)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Verify, on a finite snapshot, closure under isomorphism (relabelling
/// invariance), summands, and coproducts up to the snapshot's size bound.
pub fn component_based_snapshot_check(snapshot: &[FinStructure]) -> Result<SnapshotReport> {
    let mut report = SnapshotReport::default();
    let bound = snapshot.iter().map(FinStructure::size).max().unwrap_or(0);

    for (i, g) in snapshot.iter().enumerate() {
        // relabelling invariance: reverse the vertex order
        if g.sig().is_graph() {
            let n = g.size();
            let edges: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .map(|&(u, v)| (n - 1 - u, n - 1 - v))
                .collect();
            let relabelled = FinStructure::graph(n, &edges).expect("relabelling is valid");
            if !in_snapshot(snapshot, &relabelled)? {
                report
                    .violations
                    .push(format!("iso-closure: relabelled member #{i} not matched"));
            }
        }

        for (ci, comp) in components(g).components.iter().enumerate() {
            if !in_snapshot(snapshot, comp)? {
                report.violations.push(format!(
                    "summand-closure: component {ci} of member #{i} is missing"
                ));
            }
        }
    }

    for (i, a) in snapshot.iter().enumerate() {
        for (j, b) in snapshot.iter().enumerate().skip(i) {
            if a.size() + b.size() > bound {
                continue;
            }
            let (sum, _) = coproduct(a.sig(), &[a.clone(), b.clone()])?;
            if !in_snapshot(snapshot, &sum)? {
                report.violations.push(format!(
                    "coproduct-closure: member #{i} + member #{j} is missing"
                ));
            }
        }
    }
    Ok(report)
}

/// The p-th subdivision of the complete graph on `n` vertices: each round
/// replaces every edge `uv` by a path `u - w - v` through a fresh vertex.
pub fn subdivided_clique(n: usize, p: usize) -> FinStructure {
    let mut g = FinStructure::complete(n);
    for _ in 0..p {
        g = subdivide_all_edges(&g);
    }
    g
}

fn subdivide_all_edges(g: &FinStructure) -> FinStructure {
    let old_edges = g.edges();
    let mut next = g.size();
    let mut edges = Vec::with_capacity(old_edges.len() * 2);
    for (u, v) in old_edges {
        edges.push((u, next));
        edges.push((next, v));
        next += 1;
    }
    FinStructure::graph(next, &edges).expect("subdivision is a valid graph")
}
