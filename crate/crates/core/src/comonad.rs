//! A minimal behavioural interface for comonads on finite structures, and
//! Eilenberg-Moore coalgebras checked against it.
//!
//! Density comonads and the Ehrenfeucht-Fraisse comonad both implement this
//! trait, so law checks and comonad-morphism checks apply to either.

use crate::error::{Error, Result};
use crate::structures::{FinStructure, Homomorphism};

pub trait Comonad {
    fn name(&self) -> String;

    /// The object part of the endofunctor.
    fn apply(&self, b: &FinStructure) -> Result<FinStructure>;

    /// The morphism part: `h: B -> C` lifts to `T(B) -> T(C)`.
    fn lift(&self, h: &Homomorphism) -> Result<Homomorphism>;

    /// The counit component at `b`: `T(B) -> B`.
    fn counit(&self, b: &FinStructure) -> Result<Homomorphism>;

    /// The comultiplication component at `b`: `T(B) -> T(T(B))`.
    fn comult(&self, b: &FinStructure) -> Result<Homomorphism>;
}

/// An Eilenberg-Moore coalgebra: a structure together with a map into its
/// comonad image satisfying the counit and square laws.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    pub carrier: FinStructure,
    pub structure_map: Homomorphism,
}

impl Coalgebra {
    pub fn new(carrier: FinStructure, structure_map: Homomorphism) -> Self {
        Coalgebra {
            carrier,
            structure_map,
        }
    }
}

/// Check both coalgebra laws by materializing the comonad compositions.
///
/// This is exact but needs `T(T(X))`, so it is meant for small carriers; the
/// density module has an equivalent check that avoids the square.
pub fn verify_coalgebra(comonad: &dyn Comonad, coalgebra: &Coalgebra) -> Result<()> {
    let x = &coalgebra.carrier;
    let alpha = &coalgebra.structure_map;
    if alpha.source() != x {
        return Err(Error::LawViolation {
            law: "coalgebra shape".into(),
            witness: "structure map does not start at the carrier".into(),
        });
    }
    let tx = comonad.apply(x)?;
    if alpha.target() != &tx {
        return Err(Error::LawViolation {
            law: "coalgebra shape".into(),
            witness: "structure map does not land in the comonad image".into(),
        });
    }
    if !alpha.is_valid() {
        return Err(Error::LawViolation {
            law: "coalgebra shape".into(),
            witness: "structure map is not a homomorphism".into(),
        });
    }
    let eps = comonad.counit(x)?;
    for v in 0..x.size() {
        if eps.apply(alpha.apply(v)) != v {
            return Err(Error::LawViolation {
                law: "counit".into(),
                witness: format!("element {v} is not fixed by counit after the structure map"),
            });
        }
    }
    let delta = comonad.comult(x)?;
    let lifted = comonad.lift(alpha)?;
    for v in 0..x.size() {
        let via_delta = delta.apply(alpha.apply(v));
        let via_lift = lifted.apply(alpha.apply(v));
        if via_delta != via_lift {
            return Err(Error::LawViolation {
                law: "square".into(),
                witness: format!(
                    "element {v}: comultiplication gives {via_delta}, lifted map gives {via_lift}"
                ),
            });
        }
    }
    Ok(())
}
