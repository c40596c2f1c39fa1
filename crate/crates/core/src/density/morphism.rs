//! Comonad morphisms out of density comonads: the grade morphism induced by
//! a subfamily inclusion, and the weakly initial morphism into any comonad
//! equipped with coalgebras on the generators.
//!
//! Both are natural transformations whose counit triangle and
//! comultiplication square can be checked pointwise on any finite corpus.

use super::{DensityComonad, DensityStructure};
use crate::comonad::{verify_coalgebra, Coalgebra, Comonad};
use crate::error::{Error, Result};
use crate::homsearch::{enumerate_homs, HomQuery};
use crate::structures::{FinStructure, Homomorphism};

/// The comonad morphism from the density comonad of a subfamily into the
/// density comonad of a superfamily: each block re-indexes to the block of
/// the same generator and the same map.
pub struct GradeMorphism {
    sub: DensityComonad,
    sup: DensityComonad,
    embedding: Vec<usize>,
}

impl GradeMorphism {
    pub fn new(sub: DensityComonad, sup: DensityComonad) -> Result<Self> {
        let embedding = sub
            .family()
            .subfamily_embedding(sup.family())
            .ok_or_else(|| {
                Error::NotASubfamily(
                    "the source generators are not a sub-list of the target generators".into(),
                )
            })?;
        Ok(GradeMorphism {
            sub,
            sup,
            embedding,
        })
    }

    pub fn source(&self) -> &DensityComonad {
        &self.sub
    }

    pub fn target(&self) -> &DensityComonad {
        &self.sup
    }

    /// The component at `b`, re-indexing blocks between the built images.
    pub fn component_between(
        &self,
        d_sub: &DensityStructure,
        d_sup: &DensityStructure,
    ) -> Homomorphism {
        let mut map = vec![0usize; d_sub.carrier().size()];
        for block in 0..d_sub.block_count() {
            let gen = self.embedding[d_sub.block_generator(block)];
            let sup_block = d_sup
                .find_block(gen, d_sub.block_map(block))
                .expect("subfamily homs are enumerated in the superfamily image");
            for x in 0..d_sub.block_map(block).len() {
                map[d_sub.element_index(block, x)] = d_sup.element_index(sup_block, x);
            }
        }
        Homomorphism::from_parts_unchecked(d_sub.carrier().clone(), d_sup.carrier().clone(), map)
    }

    pub fn component(&self, b: &FinStructure) -> Result<Homomorphism> {
        let d_sub = self.sub.build(b)?;
        let d_sup = self.sup.build(b)?;
        Ok(self.component_between(&d_sub, &d_sup))
    }
}

/// The morphism from a density comonad into an arbitrary comonad `T`,
/// determined by a choice of `T`-coalgebra on every generator: a block
/// element `(A, f, x)` goes to `T(f)` applied to the chosen coalgebra's
/// image of `x`. Supplied coalgebras are validated on construction.
pub struct WeakInitialMorphism<'a> {
    source: &'a DensityComonad,
    target: &'a dyn Comonad,
    coalgebras: Vec<Coalgebra>,
}

impl<'a> WeakInitialMorphism<'a> {
    pub fn new(
        source: &'a DensityComonad,
        target: &'a dyn Comonad,
        coalgebras: Vec<Coalgebra>,
    ) -> Result<Self> {
        if coalgebras.len() != source.family().len() {
            return Err(Error::InvalidStructure(format!(
                "expected one coalgebra per generator ({}), got {}",
                source.family().len(),
                coalgebras.len()
            )));
        }
        for (i, (g, c)) in source
            .family()
            .generators()
            .iter()
            .zip(&coalgebras)
            .enumerate()
        {
            if &c.carrier != g {
                return Err(Error::InvalidStructure(format!(
                    "coalgebra {i} does not live on generator {i}"
                )));
            }
            verify_coalgebra(target, c).map_err(|e| match e {
                Error::LawViolation { law, witness } => Error::LawViolation {
                    law: format!("generator {i} coalgebra: {law}"),
                    witness,
                },
                other => other,
            })?;
        }
        Ok(WeakInitialMorphism {
            source,
            target,
            coalgebras,
        })
    }

    pub fn source(&self) -> &DensityComonad {
        self.source
    }

    pub fn target(&self) -> &dyn Comonad {
        self.target
    }

    pub fn component(&self, b: &FinStructure) -> Result<Homomorphism> {
        let d = self.source.build(b)?;
        let tb = self.target.apply(b)?;
        let mut map = vec![0usize; d.carrier().size()];
        for block in 0..d.block_count() {
            let gen = d.block_generator(block);
            let f = d.block_hom(block);
            let lifted = self.target.lift(&f)?;
            let alpha = &self.coalgebras[gen].structure_map;
            for x in 0..f.map().len() {
                map[d.element_index(block, x)] = lifted.apply(alpha.apply(x));
            }
        }
        let hom = Homomorphism::from_parts_unchecked(d.carrier().clone(), tb, map);
        debug_assert!(hom.is_valid());
        Ok(hom)
    }

    /// The factorization property on generators: the component at `M(A)`
    /// composed with the unit is the chosen coalgebra.
    pub fn check_factorization(&self) -> Result<()> {
        for (i, coalg) in self.coalgebras.iter().enumerate() {
            let eta = self.source.unit(i)?;
            let phi_star = self.component(&coalg.carrier)?;
            let via = phi_star.compose(&eta)?;
            if via.map() != coalg.structure_map.map() {
                return Err(Error::LawViolation {
                    law: "unit factorization".into(),
                    witness: format!("generator {i}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct MorphismReport {
    /// (subject, law, failure witness if any)
    pub checks: Vec<(String, String, Option<String>)>,
    pub skipped: Vec<(String, String)>,
}

impl MorphismReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, _, w)| w.is_none())
    }

    pub fn checked_count(&self) -> usize {
        self.checks.len()
    }

    fn record(&mut self, subject: &str, law: &str, witness: Option<String>) {
        self.checks
            .push((subject.to_string(), law.to_string(), witness));
    }

    fn skip(&mut self, subject: &str, reason: String) {
        self.skipped.push((subject.to_string(), reason));
    }
}

fn first_difference(a: &Homomorphism, b: &Homomorphism) -> Option<String> {
    if a.map() == b.map() {
        None
    } else {
        let e = (0..a.map().len()).find(|&i| a.apply(i) != b.apply(i));
        Some(format!(
            "maps differ at element {}",
            e.map_or("<length>".to_string(), |i| i.to_string())
        ))
    }
}

/// Check the two comonad-morphism diagrams of a natural transformation given
/// by `component`, pointwise on a corpus: the counit triangle
/// `eps_T . component = eps_S` and the comultiplication square
/// `delta_T . component = component_at(T(B)) . S(component) . delta_S`.
/// Structures whose composites exceed caps are recorded as skipped.
pub fn check_morphism(
    source: &dyn Comonad,
    target: &dyn Comonad,
    component: &dyn Fn(&FinStructure) -> Result<Homomorphism>,
    corpus: &[FinStructure],
) -> MorphismReport {
    let mut report = MorphismReport::default();
    for (i, b) in corpus.iter().enumerate() {
        let subject = format!("structure #{i} ({} elements)", b.size());
        let lambda = match component(b) {
            Ok(l) => l,
            Err(e) => {
                report.skip(&subject, e.to_string());
                continue;
            }
        };

        match (source.counit(b), target.counit(b)) {
            (Ok(eps_s), Ok(eps_t)) => match eps_t.compose(&lambda) {
                Ok(via) => {
                    report.record(&subject, "counit triangle", first_difference(&via, &eps_s))
                }
                Err(e) => report.skip(&subject, e.to_string()),
            },
            (Err(e), _) | (_, Err(e)) => report.skip(&subject, e.to_string()),
        }

        let square = (|| -> Result<Option<String>> {
            let delta_s = source.comult(b)?;
            let delta_t = target.comult(b)?;
            let tb = target.apply(b)?;
            let lambda_tb = component(&tb)?;
            let s_lambda = source.lift(&lambda)?;
            let left = delta_t.compose(&lambda)?;
            let right = lambda_tb.compose(&s_lambda.compose(&delta_s)?)?;
            Ok(first_difference(&left, &right))
        })();
        match square {
            Ok(witness) => report.record(&subject, "comultiplication square", witness),
            Err(e) => report.skip(&subject, e.to_string()),
        }
    }
    report
}

/// Check naturality of `component` over every homomorphism between corpus
/// structures: `component_C . S(h) = T(h) . component_B`.
pub fn check_naturality(
    source: &dyn Comonad,
    target: &dyn Comonad,
    component: &dyn Fn(&FinStructure) -> Result<Homomorphism>,
    corpus: &[FinStructure],
) -> MorphismReport {
    let mut report = MorphismReport::default();
    for (i, b) in corpus.iter().enumerate() {
        for (j, c) in corpus.iter().enumerate() {
            let subject = format!("pair #{i} -> #{j}");
            let result = (|| -> Result<Option<String>> {
                let lambda_b = component(b)?;
                let lambda_c = component(c)?;
                let homs = enumerate_homs(&HomQuery::homs(b.clone(), c.clone()))?;
                for h in &homs {
                    let left = lambda_c.compose(&source.lift(h)?)?;
                    let right = target.lift(h)?.compose(&lambda_b)?;
                    if let Some(w) = first_difference(&left, &right) {
                        return Ok(Some(w));
                    }
                }
                Ok(None)
            })();
            match result {
                Ok(witness) => report.record(&subject, "naturality", witness),
                Err(e) => report.skip(&subject, e.to_string()),
            }
        }
    }
    report
}
