use std::collections::BTreeMap;

use proptest::prelude::*;

use dihedral_parity::base_change::BaseReduction;
use dihedral_parity::dihedral_reps::SubgroupTag;
use dihedral_parity::parity_engine::{
    self, enumerate_settings, global_parity, verify_local, EnumerationBounds, LocalCompletion, LocalSetting, CP, D2P,
};
use dihedral_parity::weierstrass::WeierstrassCurve;
use dihedral_parity::Error;

fn base_strategy() -> impl Strategy<Value = BaseReduction> {
    prop_oneof![
        Just(BaseReduction::Good),
        (1u32..60).prop_map(BaseReduction::SplitMult),
        (1u32..60).prop_map(BaseReduction::NonsplitMult),
        (1u32..60).prop_map(BaseReduction::AdditivePotMult),
        prop::sample::select(parity_engine::POT_GOOD_DELTAS.to_vec()).prop_map(BaseReduction::AdditivePotGood),
    ]
}

fn setting_strategy() -> impl Strategy<Value = LocalSetting> {
    let primes = prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31]);
    let ells = prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    let pairs = prop::sample::select(vec![
        (SubgroupTag::Trivial, SubgroupTag::Trivial),
        (SubgroupTag::Order2, SubgroupTag::Trivial),
        (SubgroupTag::Order2, SubgroupTag::Order2),
        (CP, SubgroupTag::Trivial),
        (CP, CP),
        (D2P, CP),
        (D2P, D2P),
    ]);
    (primes, ells, 1u32..5, pairs, base_strategy(), any::<bool>(), any::<bool>()).prop_filter_map(
        "admissible",
        |(p, ell, r, (g, i), base, same_ell, flag)| {
            let ell = if same_ell || i == D2P { p } else { ell };
            let needs_flag = matches!(base, BaseReduction::AdditivePotMult(_)) && i == D2P;
            LocalSetting::new(p, ell, r, g, i, base, needs_flag.then_some(flag)).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn local_identity_holds(s in setting_strategy()) {
        let v = verify_local(&s).unwrap();
        prop_assert!(v.equal, "{}: {:?}", s, v.case_trace);
    }

    #[test]
    fn split_verdict_independent_of_n(p in prop::sample::select(vec![5u64, 7, 11]), n in 1u32..500, m in 1u32..500) {
        let at = |k| verify_local(&LocalSetting::new(p, 2, 1, D2P, CP, BaseReduction::SplitMult(k), None).unwrap()).unwrap();
        let (a, b) = (at(n), at(m));
        prop_assert_eq!((a.w_ratio, a.c_parity), (b.w_ratio, b.c_parity));
    }
}

#[test]
fn enumeration_is_deterministic_and_unique() {
    let bounds = EnumerationBounds { max_n: 3, rs: vec![2, 1, 1], ells: vec![3, 2, 5, 7, 11, 5], strict: false };
    let a = enumerate_settings(5, &bounds).unwrap();
    let b = enumerate_settings(5, &bounds).unwrap();
    assert_eq!(a, b);
    let mut dedup = a.clone();
    dedup.sort_by_key(|s| s.to_string());
    dedup.dedup();
    assert_eq!(dedup.len(), a.len());
}

#[test]
fn enumeration_matching_rules() {
    let settings = enumerate_settings(7, &EnumerationBounds::default()).unwrap();
    for s in &settings {
        let flagged = matches!(s.base, BaseReduction::AdditivePotMult(_)) && s.i_v == D2P;
        assert_eq!(s.eta_equals_chi.is_some(), flagged, "{s}");
        assert!(s.ell == 7 || s.i_v != D2P);
    }
    let both: Vec<_> = settings
        .iter()
        .filter(|s| s.base == BaseReduction::AdditivePotMult(1) && s.i_v == D2P && s.r == 1)
        .map(|s| s.eta_equals_chi)
        .collect();
    assert_eq!(both, vec![Some(true), Some(false)]);
}

#[test]
fn strict_mode_keeps_only_tame_compatible_settings() {
    let bounds = EnumerationBounds { strict: true, ..Default::default() };
    for s in enumerate_settings(5, &bounds).unwrap() {
        if s.ell != 5 && s.i_v == CP {
            let q = (s.ell.pow(s.r)) % 5;
            let expected = if s.g_v == CP { 1 } else { 4 };
            assert_eq!(q, expected, "{s}");
        }
    }
}

#[test]
fn table_rows() {
    let c = parity_engine::c_table().unwrap();
    assert_eq!(c[3], [1, 1, 1, 1]);
    // III at p ≡ 7 mod 12
    assert_eq!(c[1][2], -1);
    let rendered = parity_engine::render_table(&c);
    assert_eq!(rendered.lines().count(), 5);
}

#[test]
fn global_products() {
    let e = WeierstrassCurve::from_coeffs([0, -1, 1, -10, -20]).unwrap();
    let mut map = BTreeMap::new();
    map.insert(11, LocalCompletion { g_v: D2P, i_v: CP, eta_equals_chi: None });
    let g = global_parity(&e, 5, &map).unwrap();
    assert_eq!((g.w_product, g.c_product), (-1, -1));

    // entries at good primes are ignored
    map.insert(13, LocalCompletion { g_v: D2P, i_v: CP, eta_equals_chi: None });
    assert_eq!(global_parity(&e, 5, &map).unwrap().w_product, -1);

    // split everywhere gives the empty product
    let mut trivial = BTreeMap::new();
    trivial.insert(11, LocalCompletion { g_v: SubgroupTag::Trivial, i_v: SubgroupTag::Trivial, eta_equals_chi: None });
    let g = global_parity(&e, 7, &trivial).unwrap();
    assert_eq!((g.w_product, g.c_product, g.equal), (1, 1, true));

    assert_eq!(global_parity(&e, 3, &map), Err(Error::PrimeTooSmall(3)));
}

#[test]
fn global_with_additive_primes() {
    // y² = x³ − x: additive at 2; y² + y = x³ − 7: additive at 3
    for (coeffs, p) in [([0, 0, 0, -1, 0], 5u64), ([0, 0, 1, 0, -7], 7)] {
        let e = WeierstrassCurve::from_coeffs(coeffs).unwrap();
        let bad = dihedral_parity::tate::bad_primes(&e).unwrap();
        for g_v in [SubgroupTag::Trivial, CP, D2P] {
            let i_v = if g_v == SubgroupTag::Trivial { SubgroupTag::Trivial } else { CP };
            let map: BTreeMap<u64, LocalCompletion> =
                bad.iter().map(|&l| (l, LocalCompletion { g_v, i_v, eta_equals_chi: None })).collect();
            let g = global_parity(&e, p, &map).unwrap();
            assert!(g.equal, "{coeffs:?} {g_v}");
        }
    }
}
