// SPDX-License-Identifier: Apache-2.0
use ortolog::cube::{Cover, Cube, Literal};
use ortolog::decompose::{decompose, DecomposeOptions};
use ortolog::netlist::verify;
use proptest::prelude::*;

fn cover_strategy(max_n: usize, max_m: usize) -> impl Strategy<Value = Cover> {
    (1..=max_n).prop_flat_map(move |n| {
        let lit = prop_oneof![Just(Literal::Zero), Just(Literal::One), Just(Literal::DontCare)];
        prop::collection::vec(prop::collection::vec(lit, n), 0..=max_m).prop_map(move |rows| {
            let cubes: Vec<Cube> = rows.into_iter().map(Cube::new).collect();
            Cover::new(ortolog::cube::default_names(n), cubes).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decomposition_is_equivalent(c in cover_strategy(8, 16)) {
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        prop_assert!(verify(&nl, &c).unwrap().is_equivalent());
        prop_assert!(nl.and_supports_disjoint());
        prop_assert!(nl.sym_nodes_consistent());
    }

    #[test]
    fn dc_partition_is_equivalent(c in cover_strategy(7, 12)) {
        let opts = DecomposeOptions { dc_partition: true, ..Default::default() };
        let nl = decompose(&c, &opts).unwrap();
        prop_assert!(verify(&nl, &c).unwrap().is_equivalent());
    }

    #[test]
    fn text_form_round_trips(c in cover_strategy(6, 10)) {
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        let back = ortolog::netlist::Netlist::parse_text(&nl.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), nl.to_text());
        prop_assert!(verify(&back, &c).unwrap().is_equivalent());
    }
}
