//! The comonad machinery over a general relational signature (one ternary
//! relation): blocks, laws, both coalgebra routes, and the game comonad all
//! behave exactly as in graph mode.

use ddc::comonad::Comonad;
use ddc::density::{
    coalgebra_by_decomposition, coalgebra_by_search, verify_density_coalgebra, DensityComonad,
    GeneratorFamily,
};
use ddc::gamecomonad::EfComonad;
use ddc::homsearch::count_homs;
use ddc::laws::{check_comonad, check_density_comonad, Law};
use ddc::structures::{coproduct, FinStructure, Signature};

fn ternary_sig() -> Signature {
    Signature::relational(vec![("R".into(), 3)]).unwrap()
}

/// One ternary tuple over three elements: the smallest connected generator.
fn simplex() -> FinStructure {
    FinStructure::new(ternary_sig(), 3, vec![vec![vec![0, 1, 2]]]).unwrap()
}

/// A chain of two overlapping ternary tuples.
fn chain() -> FinStructure {
    FinStructure::new(ternary_sig(), 5, vec![vec![vec![0, 1, 2], vec![2, 3, 4]]]).unwrap()
}

#[test]
fn density_blocks_on_relational_structures() {
    let dc = DensityComonad::new(GeneratorFamily::connected(vec![simplex()]).unwrap());
    let base = chain();
    // homomorphisms send the single generator tuple onto either base tuple
    let expected = count_homs(&simplex(), &base).unwrap();
    let d = dc.build(&base).unwrap();
    assert_eq!(
        num_bigint::BigUint::from(d.block_count()),
        expected,
        "one block per homomorphism"
    );
    assert_eq!(d.carrier().size(), d.block_count() * 3);
    // relations hold exactly within blocks
    assert_eq!(d.carrier().tuples(0).len(), d.block_count());
}

#[test]
fn density_laws_hold_over_the_ternary_signature() {
    let dc = DensityComonad::new(GeneratorFamily::connected(vec![simplex()]).unwrap());
    let corpus = vec![
        FinStructure::new(ternary_sig(), 0, vec![vec![]]).unwrap(),
        simplex(),
        chain(),
        FinStructure::new(ternary_sig(), 3, vec![vec![vec![0, 1, 2], vec![2, 1, 0]]]).unwrap(),
    ];
    let report = check_density_comonad(&dc, &corpus);
    assert!(report.all_passed(), "{:?}", report.checks);
    for law in Law::ALL {
        assert_eq!(report.skipped(law), 0);
    }
}

#[test]
fn both_coalgebra_routes_agree_on_relational_structures() {
    let dc = DensityComonad::new(GeneratorFamily::connected(vec![simplex()]).unwrap());
    let (two_simplices, _) = coproduct(&ternary_sig(), &[simplex(), simplex()]).unwrap();
    let positive_cases = [simplex(), two_simplices];
    for x in &positive_cases {
        let dec = coalgebra_by_decomposition(&dc, x).unwrap();
        let search = coalgebra_by_search(&dc, x).unwrap();
        assert!(dec.is_some() && search.is_some(), "{x:?}");
        verify_density_coalgebra(&dc, &dec.unwrap()).unwrap();
        verify_density_coalgebra(&dc, &search.unwrap()).unwrap();
    }
    // the chain is connected but not a generator copy
    assert!(coalgebra_by_decomposition(&dc, &chain()).unwrap().is_none());
    assert!(coalgebra_by_search(&dc, &chain()).unwrap().is_none());
    // a structure with the tuple reversed as well is not a generator copy
    let doubled =
        FinStructure::new(ternary_sig(), 3, vec![vec![vec![0, 1, 2], vec![2, 1, 0]]]).unwrap();
    assert!(coalgebra_by_search(&dc, &doubled).unwrap().is_none());
}

#[test]
fn game_comonad_handles_higher_arities() {
    let ef = EfComonad::new(2);
    let s = simplex();
    let image = ef.apply(&s).unwrap();
    assert_eq!(image.size(), 3 + 9);
    // tuples in the image are pairwise prefix-comparable with the original
    // relation on last elements; verify a known one exists: the length-one
    // sequences (0), (1), (2) are not comparable, but ((0), (0,1), (0,2))
    // is not comparable either ((0,1) vs (0,2) diverge), so only chains
    // with repeated entries qualify at two rounds
    for t in image.tuples(0) {
        // all entries must lie on one prefix chain
        let seqs: Vec<Vec<usize>> = t.iter().map(|&i| seq_of(3, i)).collect();
        for a in &seqs {
            for b in &seqs {
                assert!(
                    a.starts_with(b.as_slice()) || b.starts_with(a.as_slice()),
                    "incomparable entries in {t:?}"
                );
            }
        }
    }
    let report = check_comonad(&ef, &[s]);
    assert!(report.all_passed(), "{:?}", report.checks);
}

/// Unpack the mixed-radix sequence indexing used by the game comonad
/// (length-major, then lexicographic).
fn seq_of(n: usize, index: usize) -> Vec<usize> {
    let mut len = 1;
    let mut power = n;
    let mut offset = 0;
    while index >= offset + power {
        offset += power;
        power *= n;
        len += 1;
    }
    let mut rem = index - offset;
    let mut seq = vec![0; len];
    for slot in seq.iter_mut().rev() {
        *slot = rem % n;
        rem /= n;
    }
    seq
}
