//! Pointwise law checking for comonads over a finite corpus of structures.
//!
//! Laws whose check needs a composite that would exceed the configured size
//! caps are reported as skipped, never silently dropped and never failed.

use std::fmt;

use crate::comonad::Comonad;
use crate::error::Result;
use crate::homsearch::{enumerate_homs, HomQuery};
use crate::structures::FinStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    CounitLeft,
    CounitRight,
    Coassociativity,
    Dc1,
    Dc2,
    Dc3,
}

impl Law {
    pub fn name(&self) -> &'static str {
        match self {
            Law::CounitLeft => "counit-left",
            Law::CounitRight => "counit-right",
            Law::Coassociativity => "coassociativity",
            Law::Dc1 => "DC1",
            Law::Dc2 => "DC2",
            Law::Dc3 => "DC3",
        }
    }

    pub const CORE: [Law; 3] = [Law::CounitLeft, Law::CounitRight, Law::Coassociativity];
    pub const ALL: [Law; 6] = [
        Law::CounitLeft,
        Law::CounitRight,
        Law::Coassociativity,
        Law::Dc1,
        Law::Dc2,
        Law::Dc3,
    ];
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub enum CheckStatus {
    Passed,
    Failed { witness: String },
    Skipped { reason: String },
}

#[derive(Clone, Debug)]
pub struct LawCheck {
    pub law: Law,
    /// Which corpus structure (or pair) the check ran on.
    pub subject: String,
    pub status: CheckStatus,
}

#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub checks: Vec<LawCheck>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.status, CheckStatus::Failed { .. }))
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.checks
            .iter()
            .filter(|c| matches!(c.status, CheckStatus::Failed { .. }))
    }

    pub fn passed(&self, law: Law) -> usize {
        self.count(law, |s| matches!(s, CheckStatus::Passed))
    }

    pub fn skipped(&self, law: Law) -> usize {
        self.count(law, |s| matches!(s, CheckStatus::Skipped { .. }))
    }

    pub fn failed(&self, law: Law) -> usize {
        self.count(law, |s| matches!(s, CheckStatus::Failed { .. }))
    }

    fn count(&self, law: Law, pred: impl Fn(&CheckStatus) -> bool) -> usize {
        self.checks
            .iter()
            .filter(|c| c.law == law && pred(&c.status))
            .count()
    }

    fn push(&mut self, law: Law, subject: impl Into<String>, status: CheckStatus) {
        self.checks.push(LawCheck {
            law,
            subject: subject.into(),
            status,
        });
    }

    /// One `law: PASS/FAIL` summary line per law that was attempted.
    pub fn summary_lines(&self, laws: &[Law]) -> Vec<String> {
        laws.iter()
            .map(|&law| {
                let failed = self.failed(law);
                let status = if failed > 0 { "FAIL" } else { "PASS" };
                format!(
                    "law={} status={status} checked={} skipped={} failed={failed}",
                    law.name(),
                    self.passed(law),
                    self.skipped(law),
                )
            })
            .collect()
    }
}

fn skip_all(report: &mut LawReport, laws: &[Law], subject: &str, reason: &str) {
    for &law in laws {
        report.push(
            law,
            subject,
            CheckStatus::Skipped {
                reason: reason.to_string(),
            },
        );
    }
}

/// Check the counit and coassociativity laws of any comonad pointwise on a
/// corpus. Structures whose composites exceed the comonad's caps are skipped
/// with a reason.
pub fn check_comonad(comonad: &dyn Comonad, corpus: &[FinStructure]) -> LawReport {
    let mut report = LawReport::default();
    for (i, b) in corpus.iter().enumerate() {
        let subject = format!("structure #{i} ({} elements)", b.size());
        check_core_at(comonad, b, &subject, &mut report);
    }
    report
}

fn check_core_at(comonad: &dyn Comonad, b: &FinStructure, subject: &str, report: &mut LawReport) {
    let tb = match comonad.apply(b) {
        Ok(tb) => tb,
        Err(e) => {
            skip_all(report, &Law::CORE, subject, &e.to_string());
            return;
        }
    };
    let delta = match comonad.comult(b) {
        Ok(d) => d,
        Err(e) => {
            skip_all(report, &Law::CORE, subject, &e.to_string());
            return;
        }
    };

    // counit-left: counit at T(B) after comultiplication is the identity
    match comonad.counit(&tb) {
        Ok(eps_tb) => {
            let witness = (0..tb.size()).find(|&e| eps_tb.apply(delta.apply(e)) != e);
            report.push(
                Law::CounitLeft,
                subject,
                match witness {
                    None => CheckStatus::Passed,
                    Some(e) => CheckStatus::Failed {
                        witness: format!("element {e} of the comonad image"),
                    },
                },
            );
        }
        Err(e) => skip_all(report, &[Law::CounitLeft], subject, &e.to_string()),
    }

    // counit-right: lifted counit after comultiplication is the identity
    match comonad.counit(b).and_then(|eps| comonad.lift(&eps)) {
        Ok(lifted_eps) => {
            let witness = (0..tb.size()).find(|&e| lifted_eps.apply(delta.apply(e)) != e);
            report.push(
                Law::CounitRight,
                subject,
                match witness {
                    None => CheckStatus::Passed,
                    Some(e) => CheckStatus::Failed {
                        witness: format!("element {e} of the comonad image"),
                    },
                },
            );
        }
        Err(e) => skip_all(report, &[Law::CounitRight], subject, &e.to_string()),
    }

    // coassociativity: comultiplying either copy agrees; needs T^3
    match comonad
        .comult(&tb)
        .and_then(|delta_tb| comonad.lift(&delta).map(|l| (delta_tb, l)))
    {
        Ok((delta_tb, lifted_delta)) => {
            let witness = (0..tb.size()).find(|&e| {
                let d = delta.apply(e);
                delta_tb.apply(d) != lifted_delta.apply(d)
            });
            report.push(
                Law::Coassociativity,
                subject,
                match witness {
                    None => CheckStatus::Passed,
                    Some(e) => CheckStatus::Failed {
                        witness: format!("element {e} of the comonad image"),
                    },
                },
            );
        }
        Err(e) => skip_all(report, &[Law::Coassociativity], subject, &e.to_string()),
    }
}

/// Check the density comonad laws on a corpus: the general comonad laws plus
/// the three inclusion triangles, with the functor-action triangle quantified
/// over every homomorphism between corpus structures.
///
/// All six laws are decided from the image and its square alone. The
/// composites at the square level (the counit component there, the lifted
/// counit, the twice-comultiplied maps) are compared through the square's
/// block table, so only the square cap binds.
pub fn check_density_comonad(
    dc: &crate::density::DensityComonad,
    corpus: &[FinStructure],
) -> LawReport {
    let mut report = LawReport::default();

    let built: Vec<Result<crate::density::DensityStructure>> =
        corpus.iter().map(|b| dc.build(b)).collect();

    for (i, b) in corpus.iter().enumerate() {
        let subject = format!("structure #{i} ({} elements)", b.size());
        let d = match &built[i] {
            Ok(d) => d,
            Err(e) => {
                skip_all(&mut report, &Law::CORE, &subject, &e.to_string());
                skip_all(&mut report, &[Law::Dc2, Law::Dc3], &subject, &e.to_string());
                continue;
            }
        };

        // DC2: counit restricted to a block is the block's indexing map
        let eps = dc.counit_of(d);
        let mut witness = None;
        'dc2: for block in 0..d.block_count() {
            let f = d.block_map(block);
            for (x, &fx) in f.iter().enumerate() {
                if eps.apply(d.element_index(block, x)) != fx {
                    witness = Some(format!("block {block}, element {x}"));
                    break 'dc2;
                }
            }
        }
        report.push(
            Law::Dc2,
            &subject,
            match witness {
                None => CheckStatus::Passed,
                Some(w) => CheckStatus::Failed { witness: w },
            },
        );

        let (delta, square) = match dc.comult_of(d) {
            Ok(pair) => pair,
            Err(e) => {
                skip_all(&mut report, &Law::CORE, &subject, &e.to_string());
                skip_all(&mut report, &[Law::Dc3], &subject, &e.to_string());
                continue;
            }
        };

        // DC3: comultiplication sends a block onto the block of its own inclusion
        let mut witness = None;
        'dc3: for block in 0..d.block_count() {
            let gen = d.block_generator(block);
            let iota_map = d.inclusion_map(block);
            let Some(sq_block) = square.find_block(gen, &iota_map) else {
                witness = Some(format!("block {block}: inclusion map not found"));
                break;
            };
            for x in 0..iota_map.len() {
                if delta.apply(d.element_index(block, x)) != square.element_index(sq_block, x) {
                    witness = Some(format!("block {block}, element {x}"));
                    break 'dc3;
                }
            }
        }
        report.push(
            Law::Dc3,
            &subject,
            match witness {
                None => CheckStatus::Passed,
                Some(w) => CheckStatus::Failed { witness: w },
            },
        );

        // counit-left: the square's own counit undoes comultiplication
        let eps_tb = dc.counit_of(&square);
        let witness = (0..d.carrier().size()).find(|&e| eps_tb.apply(delta.apply(e)) != e);
        report.push(
            Law::CounitLeft,
            &subject,
            match witness {
                None => CheckStatus::Passed,
                Some(e) => CheckStatus::Failed {
                    witness: format!("element {e} of the image"),
                },
            },
        );

        // counit-right: the lifted counit undoes comultiplication
        match dc.lift_between(&eps, &square, d) {
            Ok(lifted_eps) => {
                let witness =
                    (0..d.carrier().size()).find(|&e| lifted_eps.apply(delta.apply(e)) != e);
                report.push(
                    Law::CounitRight,
                    &subject,
                    match witness {
                        None => CheckStatus::Passed,
                        Some(e) => CheckStatus::Failed {
                            witness: format!("element {e} of the image"),
                        },
                    },
                );
            }
            Err(e) => skip_all(&mut report, &[Law::CounitRight], &subject, &e.to_string()),
        }

        // coassociativity: comultiplying either copy sends the element of
        // the cube identified by (generator, hom into the square, local
        // element) to the same triple, so compare those triples directly
        let mut witness = None;
        for block in 0..d.block_count() {
            let gen = d.block_generator(block);
            let iota_map = d.inclusion_map(block);
            let Some(sq_block) = square.find_block(gen, &iota_map) else {
                witness = Some(format!("block {block}: inclusion map not found"));
                break;
            };
            // one path includes the square's block, the other pushes the
            // inclusion through the comultiplication
            let included = square.inclusion_map(sq_block);
            let pushed: Vec<usize> = iota_map.iter().map(|&e| delta.apply(e)).collect();
            if included != pushed {
                witness = Some(format!("block {block}"));
                break;
            }
        }
        report.push(
            Law::Coassociativity,
            &subject,
            match witness {
                None => CheckStatus::Passed,
                Some(w) => CheckStatus::Failed { witness: w },
            },
        );
    }

    // DC1: lifting h and including commute, for every corpus homomorphism h
    for (i, b) in corpus.iter().enumerate() {
        for (j, c) in corpus.iter().enumerate() {
            let subject = format!("pair #{i} -> #{j}");
            let (Ok(db), Ok(dcs)) = (&built[i], &built[j]) else {
                skip_all(
                    &mut report,
                    &[Law::Dc1],
                    &subject,
                    "density image exceeds caps",
                );
                continue;
            };
            let homs = match enumerate_homs(&HomQuery::homs(b.clone(), c.clone())) {
                Ok(h) => h,
                Err(e) => {
                    skip_all(&mut report, &[Law::Dc1], &subject, &e.to_string());
                    continue;
                }
            };
            let mut witness = None;
            'dc1: for (hi, h) in homs.iter().enumerate() {
                let lifted = match dc.lift_between(h, db, dcs) {
                    Ok(l) => l,
                    Err(e) => {
                        witness = Some(format!("hom #{hi}: lift failed: {e}"));
                        break;
                    }
                };
                for block in 0..db.block_count() {
                    let gen = db.block_generator(block);
                    let composite: Vec<usize> =
                        db.block_map(block).iter().map(|&x| h.apply(x)).collect();
                    let Some(c_block) = dcs.find_block(gen, &composite) else {
                        witness = Some(format!("hom #{hi}, block {block}: composite not found"));
                        break 'dc1;
                    };
                    for x in 0..composite.len() {
                        if lifted.apply(db.element_index(block, x)) != dcs.element_index(c_block, x)
                        {
                            witness = Some(format!("hom #{hi}, block {block}, element {x}"));
                            break 'dc1;
                        }
                    }
                }
            }
            report.push(
                Law::Dc1,
                &subject,
                match witness {
                    None => CheckStatus::Passed,
                    Some(w) => CheckStatus::Failed { witness: w },
                },
            );
        }
    }

    report
}
