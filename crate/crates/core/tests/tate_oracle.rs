mod common;

use common::{load_tate, tate_mismatches};
use dihedral_parity::tate::{local_reduction, Kodaira};

#[test]
fn corpus_matches_oracle() {
    let records = load_tate("tate_corpus.txt");
    assert_eq!(records.len(), 150);
    let bad = tate_mismatches(&records);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn random_curves_match_oracle() {
    let records = load_tate("tate_random.txt");
    assert_eq!(records.len(), 400);
    let bad = tate_mismatches(&records);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn corpus_covers_every_symbol_at_every_small_prime() {
    let records = load_tate("tate_corpus.txt");
    for ell in [2u64, 3, 5, 7, 11] {
        let mut seen: Vec<&'static str> = records
            .iter()
            .filter(|r| r.ell == ell)
            .map(|r| match r.kodaira {
                Kodaira::In(0) => "I0",
                Kodaira::In(_) => "In",
                Kodaira::II => "II",
                Kodaira::III => "III",
                Kodaira::IV => "IV",
                Kodaira::InStar(0) => "I0*",
                Kodaira::InStar(_) => "In*",
                Kodaira::IVStar => "IV*",
                Kodaira::IIIStar => "III*",
                Kodaira::IIStar => "II*",
            })
            .collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 10, "ell = {ell}: {seen:?}");
    }
}

#[test]
fn minimal_model_is_a_fixed_point() {
    for r in load_tate("tate_corpus.txt").iter().chain(load_tate("tate_random.txt").iter()) {
        let first = local_reduction(&r.curve, r.ell).unwrap();
        let again = local_reduction(&first.minimal_model, r.ell).unwrap();
        assert!(first.same_invariants(&again), "{} at {}", r.curve, r.ell);
        assert_eq!(first.delta, arith_val(&first.minimal_model, r.ell));
    }
}

fn arith_val(e: &dihedral_parity::weierstrass::WeierstrassCurve, ell: u64) -> u32 {
    dihedral_parity::arith::valuation(&e.discriminant(), ell)
}
