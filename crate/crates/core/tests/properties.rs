//! Structural properties on random small diagrams: reordering invariance,
//! d(d) = 0, and JSON round trips of tables and certificates.

use khtorsion::complex::ChainComplex;
use khtorsion::diagram::Diagram;
use khtorsion::homology::{khovanov_table, KhovanovTable, DEFAULT_CROSSING_LIMIT};
use khtorsion::smoothing::{EnhancedState, KauffmanState};
use khtorsion::torsion::{Certifier, Grid, TorsionCertificate};
use proptest::prelude::*;

fn small_family() -> impl Strategy<Value = Diagram> {
    prop_oneof![
        prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 2..=3)
            .prop_filter_map("pretzel", |a| Diagram::pretzel(&a).ok()),
        prop::collection::vec(prop_oneof![-2i64..=-1, 1i64..=3], 2..=2)
            .prop_filter_map("braid", |a| Diagram::braid3_closure(&a).ok()),
        prop::collection::vec(prop_oneof![-2i64..=-1, 1i64..=3], 1..=3)
            .prop_filter_map("rational", |a| Diagram::rational(&a).ok()),
    ]
    .prop_filter("size", |d| d.num_crossings() <= 8)
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reordering_preserves_homology((d, perm) in small_family().prop_flat_map(|d| {
        let n = d.num_crossings();
        (Just(d), shuffled(n))
    })) {
        let a = khovanov_table(&ChainComplex::new(d.clone()), DEFAULT_CROSSING_LIMIT).unwrap();
        let r = d.reorder_crossings(&perm).unwrap();
        let b = khovanov_table(&ChainComplex::new(r), DEFAULT_CROSSING_LIMIT).unwrap();
        prop_assert_eq!(a.hq_groups(), b.hq_groups());
    }

    #[test]
    fn differential_squares_to_zero(d in small_family(), seed in any::<u64>()) {
        let cx = ChainComplex::new(d);
        let n = cx.n();
        let bits = seed & ((1u64 << n) - 1);
        let sm = cx.smoothing(bits);
        let c = sm.num_circles();
        let minus = (seed >> 32) & ((1u64 << c) - 1);
        let e = EnhancedState::new(KauffmanState::from_bits(bits, n), minus, c);
        prop_assert!(cx.differential_chain(&cx.differential(&e)).is_zero());
    }

    #[test]
    fn table_json_round_trip(d in small_family()) {
        let t = khovanov_table(&ChainComplex::new(d), DEFAULT_CROSSING_LIMIT).unwrap();
        let back = KhovanovTable::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn grid_json_round_trip(h1 in 2usize..9, h2 in 2usize..9) {
        let g = Grid::new(h1, h2);
        let back: Grid = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn certificate_json_round_trip_with_oracle() {
    let d = Diagram::monocircular(4, 4).unwrap();
    let c = Certifier::new(&d, &KauffmanState::all_a(8)).unwrap();
    for mu in c.admissible_mus() {
        let mut cert = c.certify(&mu, true).unwrap();
        c.confirm_with_oracle(&mut cert, DEFAULT_CROSSING_LIMIT).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: TorsionCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(back.is_valid());
    }
}

#[test]
fn input_order_is_reported_not_hidden() {
    // Chains built in the input order still verify or fail visibly; the
    // certificate never claims validity it does not have.
    let d = Diagram::monocircular(3, 6).unwrap();
    let c = Certifier::with_order(&d, &KauffmanState::all_a(9), false).unwrap();
    let cert = c.certify(&[2, 2], false).unwrap();
    assert_eq!(
        cert.is_valid(),
        cert.checks.dx_equals_2v && cert.checks.dv_zero && cert.checks.not_exact_parity && cert.checks.degrees_match
    );
}
