//! Homomorphism-count vectors over class snapshots and the independent
//! combinatorial oracles they are compared against: co-spectrality for
//! cycles, fractional isomorphism for trees, bipartite double covers for
//! bipartite graphs.

mod refinement;
mod spectral;

pub use refinement::{color_refinement, fractional_iso, RefinementHistory};
pub use spectral::{char_poly, cospectral, CharPoly};

use num_bigint::BigUint;

use crate::classes::{generators, ClassSpec};
use crate::density::GeneratorFamily;
use crate::error::Result;
use crate::homsearch::count_homs;
use crate::structures::{is_isomorphic, FinStructure};

/// Homomorphism counts from each generator of a family into a target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomVector {
    pub counts: Vec<BigUint>,
}

pub fn hom_vector(fam: &GeneratorFamily, g: &FinStructure) -> Result<HomVector> {
    let counts = fam
        .generators()
        .iter()
        .map(|gen| count_homs(gen, g))
        .collect::<Result<_>>()?;
    Ok(HomVector { counts })
}

/// Equality of hom-count vectors over the family snapshot.
pub fn lovasz_equiv(fam: &GeneratorFamily, a: &FinStructure, b: &FinStructure) -> Result<bool> {
    for gen in fam.generators() {
        if count_homs(gen, a)? != count_homs(gen, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The bipartite double cover: the tensor product with an edge. Vertex
/// `(v, i)` is encoded as `v + i * n`.
pub fn bipartite_double_cover(g: &FinStructure) -> FinStructure {
    let n = g.size();
    let mut edges = Vec::with_capacity(g.edge_count() * 2);
    for (u, v) in g.edges() {
        edges.push((u, v + n));
        edges.push((v, u + n));
    }
    FinStructure::graph(2 * n, &edges).expect("double cover is a valid graph")
}

/// Isomorphism of the two bipartite double covers.
pub fn double_cover_iso(a: &FinStructure, b: &FinStructure) -> Result<bool> {
    Ok(is_isomorphic(&bipartite_double_cover(a), &bipartite_double_cover(b))?.is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowVerdict {
    /// Truncated hom-vectors equal and oracle positive.
    AgreeTrue,
    /// Truncated hom-vectors differ and oracle negative.
    AgreeFalse,
    /// Hom-vectors equal at this bound but oracle negative: the truncation
    /// is too weak to separate, not a contradiction.
    InconclusiveAtBound,
    /// Hom-vectors differ but the oracle claims equivalence: a genuine
    /// contradiction (inequality at any bound refutes full equality).
    Contradiction,
    /// The row's preconditions do not hold for these inputs.
    NotApplicable,
}

impl RowVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            RowVerdict::AgreeTrue => "agree-true",
            RowVerdict::AgreeFalse => "agree-false",
            RowVerdict::InconclusiveAtBound => "inconclusive-at-bound",
            RowVerdict::Contradiction => "CONTRADICTION",
            RowVerdict::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationRow {
    pub name: &'static str,
    pub oracle_name: &'static str,
    /// hom-vector equality at the bound; absent when not applicable
    pub hom_equal: Option<bool>,
    pub oracle_equal: Option<bool>,
    pub verdict: RowVerdict,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub max_size: usize,
    pub rows: Vec<RelationRow>,
}

impl RelationReport {
    pub fn has_contradiction(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.verdict == RowVerdict::Contradiction)
    }
}

fn verdict(hom_equal: bool, oracle_equal: bool) -> RowVerdict {
    match (hom_equal, oracle_equal) {
        (true, true) => RowVerdict::AgreeTrue,
        (false, false) => RowVerdict::AgreeFalse,
        (true, false) => RowVerdict::InconclusiveAtBound,
        (false, true) => RowVerdict::Contradiction,
    }
}

/// Evaluate the three standard rows side by side: cycle hom-vectors against
/// co-spectrality, tree hom-vectors against fractional isomorphism, and
/// connected-bipartite hom-vectors against double-cover isomorphism.
///
/// Co-spectrality is only meaningful between equal-order graphs (isolated
/// vertices change the spectrum but no cycle hom count), so the cycles row
/// is restricted to equal orders.
pub fn relation_report(
    a: &FinStructure,
    b: &FinStructure,
    max_size: usize,
) -> Result<RelationReport> {
    let mut rows = Vec::new();

    if a.size() != b.size() || max_size < 3 {
        rows.push(RelationRow {
            name: "cycles",
            oracle_name: "cospectral",
            hom_equal: None,
            oracle_equal: None,
            verdict: RowVerdict::NotApplicable,
        });
    } else {
        let fam = GeneratorFamily::connected((3..=max_size).map(FinStructure::cycle).collect())?;
        let hom_equal = lovasz_equiv(&fam, a, b)?;
        let oracle = cospectral(a, b);
        rows.push(RelationRow {
            name: "cycles",
            oracle_name: "cospectral",
            hom_equal: Some(hom_equal),
            oracle_equal: Some(oracle),
            verdict: verdict(hom_equal, oracle),
        });
    }

    let trees = generators(&ClassSpec::builtin("trees").expect("builtin"), max_size)?;
    let hom_equal = lovasz_equiv(&trees, a, b)?;
    let oracle = fractional_iso(a, b);
    rows.push(RelationRow {
        name: "trees",
        oracle_name: "fractional-iso",
        hom_equal: Some(hom_equal),
        oracle_equal: Some(oracle),
        verdict: verdict(hom_equal, oracle),
    });

    let bip = generators(&ClassSpec::builtin("bipartite").expect("builtin"), max_size)?;
    let hom_equal = lovasz_equiv(&bip, a, b)?;
    let oracle = double_cover_iso(a, b)?;
    rows.push(RelationRow {
        name: "bipartite",
        oracle_name: "double-cover-iso",
        hom_equal: Some(hom_equal),
        oracle_equal: Some(oracle),
        verdict: verdict(hom_equal, oracle),
    });

    Ok(RelationReport { max_size, rows })
}
