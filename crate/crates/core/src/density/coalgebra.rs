//! Coalgebras for density comonads: the canonical coalgebra on a generator,
//! existence by component decomposition, existence by direct semantic
//! search, cofree coalgebras, and the cofree-isomorphism test.
//!
//! Decomposition and search are two independent routes to the same
//! existence question; their agreement is the executable content of the
//! classification theorem.

use num_bigint::BigUint;

use super::{DensityComonad, DensityStructure};
use crate::comonad::Coalgebra;
use crate::error::{Error, Result};
use crate::homsearch::count_homs;
use crate::structures::{components, is_isomorphic, FinStructure, Homomorphism};

/// The canonical coalgebra on generator `index`: the carrier is the
/// generator itself and the structure map is the inclusion of its identity
/// block.
pub fn canonical_coalgebra(dc: &DensityComonad, index: usize) -> Result<Coalgebra> {
    let eta = dc.unit(index)?;
    Ok(Coalgebra::new(dc.family().generators()[index].clone(), eta))
}

/// The matching underlying coalgebra-by-decomposition: for every component
/// of `x`, an isomorphism onto some generator. `None` if any component
/// matches no generator. Does not materialize any density structure, so it
/// is also the cheap existence test used for coalgebra numbers.
pub fn decomposition_witnesses(
    dc: &DensityComonad,
    x: &FinStructure,
) -> Result<Option<Vec<(usize, Homomorphism)>>> {
    if !dc.family().requires_connected() {
        return Err(Error::UnsupportedConfiguration(
            "decomposition classification needs a connected-generator family".into(),
        ));
    }
    if x.sig() != dc.family().sig() {
        return Err(Error::SignatureMismatch(
            "structure signature differs from the family's".into(),
        ));
    }
    let dec = components(x);
    let mut witnesses = Vec::with_capacity(dec.components.len());
    for comp in &dec.components {
        let mut found = None;
        for (gi, g) in dc.family().generators().iter().enumerate() {
            if g.size() != comp.size() {
                continue;
            }
            if let Some(z) = is_isomorphic(comp, g)? {
                found = Some((gi, z));
                break;
            }
        }
        match found {
            Some(w) => witnesses.push(w),
            None => return Ok(None),
        }
    }
    Ok(Some(witnesses))
}

/// Classify `x` by decomposing it into components and transporting the
/// canonical generator coalgebras along the component isomorphisms. The
/// family must consist of connected generators.
pub fn coalgebra_by_decomposition(
    dc: &DensityComonad,
    x: &FinStructure,
) -> Result<Option<Coalgebra>> {
    let Some(witnesses) = decomposition_witnesses(dc, x)? else {
        return Ok(None);
    };
    let dec = components(x);
    let d = dc.build(x)?;

    // Component i maps into the block indexed by the injection
    // f_i = inclusion_i . z_i^{-1} : M(A) -> X; the element picked inside
    // that block is z_i(local element). The counit and square laws then hold
    // by construction.
    let mut map = vec![0usize; x.size()];
    for (ci, (gi, z)) in witnesses.iter().enumerate() {
        let z_inv = z.inverse().expect("component witnesses are isomorphisms");
        let f = dec.inclusions[ci]
            .compose(&z_inv)
            .expect("inverse witness composes with the inclusion");
        let block = d
            .find_block(*gi, f.map())
            .expect("the injection is among the enumerated homs");
        for local in 0..dec.components[ci].size() {
            let original = dec.inclusions[ci].apply(local);
            map[original] = d.element_index(block, z.apply(local));
        }
    }
    let alpha = Homomorphism::from_parts_unchecked(x.clone(), d.carrier().clone(), map);
    debug_assert!(alpha.is_valid());
    Ok(Some(Coalgebra::new(x.clone(), alpha)))
}

/// Decide coalgebra existence by direct backtracking over structure maps,
/// independent of the classification route. Works for any family, including
/// disconnected generators.
///
/// The counit law restricts candidates for `alpha(v)` to elements whose
/// counit is `v`; picking `(A, f, y)` forces `alpha(f(w)) = (A, f, w)` for
/// every `w` (the square law), which is propagated eagerly.
pub fn coalgebra_by_search(dc: &DensityComonad, x: &FinStructure) -> Result<Option<Coalgebra>> {
    if x.size() > dc.caps().search_universe {
        return Err(Error::CapExceeded {
            what: "coalgebra search universe".into(),
            needed: x.size(),
            cap: dc.caps().search_universe,
        });
    }
    let d = dc.build(x)?;

    // candidates per element of x, in carrier order
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); x.size()];
    for block in 0..d.block_count() {
        for (y, &fy) in d.block_map(block).iter().enumerate() {
            candidates[fy].push(d.element_index(block, y));
        }
    }

    let adj = x.gaifman_adjacency();
    let mut alpha: Vec<usize> = vec![usize::MAX; x.size()];
    let found = assign(&d, x, &adj, &candidates, &mut alpha, 0);
    if !found {
        return Ok(None);
    }
    let alpha = Homomorphism::new(x.clone(), d.carrier().clone(), alpha)
        .expect("search result is a homomorphism");
    let coalg = Coalgebra::new(x.clone(), alpha);
    verify_density_coalgebra(dc, &coalg)?;
    Ok(Some(coalg))
}

fn assign(
    d: &DensityStructure,
    x: &FinStructure,
    adj: &[Vec<usize>],
    candidates: &[Vec<usize>],
    alpha: &mut Vec<usize>,
    from: usize,
) -> bool {
    let Some(v) = (from..x.size()).find(|&v| alpha[v] == usize::MAX) else {
        return check_relations(d, x, alpha);
    };
    for &e in &candidates[v] {
        let (block, _) = d.element_at(e);
        // the square law forces the whole image of the block's hom
        let mut touched: Vec<usize> = Vec::new();
        let mut ok = true;
        for (w, &fw) in d.block_map(block).iter().enumerate() {
            let target = d.element_index(block, w);
            if alpha[fw] == usize::MAX {
                alpha[fw] = target;
                touched.push(fw);
            } else if alpha[fw] != target {
                ok = false;
                break;
            }
        }
        // Gaifman edges must stay within one block (cross-block pairs share
        // no tuple in the carrier)
        if ok {
            ok = touched.iter().all(|&u| {
                adj[u].iter().all(|&w| {
                    alpha[w] == usize::MAX || d.element_at(alpha[w]).0 == d.element_at(alpha[u]).0
                })
            });
        }
        if ok && assign(d, x, adj, candidates, alpha, v) {
            return true;
        }
        for &u in &touched {
            alpha[u] = usize::MAX;
        }
    }
    false
}

fn check_relations(d: &DensityStructure, x: &FinStructure, alpha: &[usize]) -> bool {
    let mut image = Vec::new();
    for rel in 0..x.relation_count() {
        for t in x.tuples(rel) {
            image.clear();
            image.extend(t.iter().map(|&v| alpha[v]));
            if !d.carrier().has_tuple(rel, &image) {
                return false;
            }
        }
    }
    true
}

/// Verify the two coalgebra laws against a density comonad without
/// materializing the square: the square law holds iff whenever
/// `alpha(v) = (A, f, y)`, then `alpha(f(w)) = (A, f, w)` for every `w`.
pub fn verify_density_coalgebra(dc: &DensityComonad, coalg: &Coalgebra) -> Result<()> {
    let x = &coalg.carrier;
    let alpha = &coalg.structure_map;
    let d = dc.build(x)?;
    if alpha.source() != x || alpha.target() != d.carrier() || !alpha.is_valid() {
        return Err(Error::LawViolation {
            law: "coalgebra shape".into(),
            witness: "structure map endpoints or preservation broken".into(),
        });
    }
    for v in 0..x.size() {
        let (block, local) = d.element_at(alpha.apply(v));
        if d.block_map(block)[local] != v {
            return Err(Error::LawViolation {
                law: "counit".into(),
                witness: format!(
                    "element {v} maps into a block position over {}",
                    d.block_map(block)[local]
                ),
            });
        }
        for (w, &fw) in d.block_map(block).iter().enumerate() {
            if alpha.apply(fw) != d.element_index(block, w) {
                return Err(Error::LawViolation {
                    law: "square".into(),
                    witness: format!(
                        "element {v} picks a block whose image element {fw} maps elsewhere"
                    ),
                });
            }
        }
    }
    Ok(())
}

/// The cofree coalgebra on `b`: carrier `D(B)`, structure map the
/// comultiplication.
pub fn cofree(dc: &DensityComonad, b: &FinStructure) -> Result<Coalgebra> {
    let d = dc.build(b)?;
    let (delta, _) = dc.comult_of(&d)?;
    Ok(Coalgebra::new(d.carrier().clone(), delta))
}

/// Whether the cofree coalgebras on `a` and `b` are isomorphic.
///
/// For a family of connected, pairwise non-isomorphic generators the images
/// `D(A)` and `D(B)` are coproducts of generator copies whose multiplicities
/// are exactly the hom counts, so equality of the hom-count vectors is
/// equivalent to carrier isomorphism, and the block-permuting isomorphism
/// commutes with the comultiplications.
pub fn cofree_iso(dc: &DensityComonad, a: &FinStructure, b: &FinStructure) -> Result<bool> {
    if !dc.family().requires_connected() {
        return Err(Error::UnsupportedConfiguration(
            "the cofree-isomorphism shortcut needs a connected-generator family".into(),
        ));
    }
    for g in dc.family().generators() {
        if count_homs(g, a)? != count_homs(g, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Hom-count multiplicities of each generator in `b`'s image, exposed for
/// cross-checks.
pub fn block_multiplicities(dc: &DensityComonad, b: &FinStructure) -> Result<Vec<BigUint>> {
    dc.family()
        .generators()
        .iter()
        .map(|g| count_homs(g, b))
        .collect()
}
