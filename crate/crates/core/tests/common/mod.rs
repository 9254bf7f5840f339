#![allow(dead_code)]

use std::path::PathBuf;

use dihedral_parity::tate::{Kodaira, SplitFlag};
use dihedral_parity::weierstrass::WeierstrassCurve;

pub struct TateRecord {
    pub curve: WeierstrassCurve,
    pub ell: u64,
    pub kodaira: Kodaira,
    pub delta: u32,
    pub tamagawa: u32,
    pub conductor_exp: u32,
    pub split: SplitFlag,
}

pub fn oracle_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("oracle").join(name)
}

pub fn load_tate(name: &str) -> Vec<TateRecord> {
    let text = std::fs::read_to_string(oracle_path(name)).expect("oracle file");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|line| {
            let f: Vec<&str> = line.split('|').map(str::trim).collect();
            assert_eq!(f.len(), 7, "bad oracle line {line:?}");
            TateRecord {
                curve: f[0].parse().unwrap(),
                ell: f[1].parse().unwrap(),
                kodaira: f[2].parse().unwrap(),
                delta: f[3].parse().unwrap(),
                tamagawa: f[4].parse().unwrap(),
                conductor_exp: f[5].parse().unwrap(),
                split: match f[6] {
                    "split" => SplitFlag::Split,
                    "nonsplit" => SplitFlag::Nonsplit,
                    _ => SplitFlag::NotApplicable,
                },
            }
        })
        .collect()
}

/// Mismatch descriptions against the oracle; empty on full agreement.
pub fn tate_mismatches(records: &[TateRecord]) -> Vec<String> {
    let mut bad = Vec::new();
    for r in records {
        let got = dihedral_parity::tate::local_reduction(&r.curve, r.ell).unwrap();
        let expected = (r.kodaira, r.delta, r.tamagawa, r.conductor_exp, r.split);
        let actual = (got.kodaira, got.delta, got.tamagawa, got.conductor_exp, got.split);
        if expected != actual {
            bad.push(format!("{} at {}: expected {:?}, got {:?}", r.curve, r.ell, expected, actual));
        }
    }
    bad
}
