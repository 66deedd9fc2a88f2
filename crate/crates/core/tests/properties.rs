// SPDX-License-Identifier: Apache-2.0
use std::collections::BTreeSet;

use ortolog::cube::{default_names, parse_pla, write_pla, Cover, Cube, Literal, MintermSet, PhaseVector};
use ortolog::decompose::{decompose, DecomposeOptions};
use ortolog::grid::{build_grid_dag, is_planar_plot};
use ortolog::planar::{derive_pf, is_planar_function, TemplateGrid, TemplateLink};
use ortolog::spectrum::{binomial, spectrum_of};
use ortolog::symmetry::{best_pair_cores, dc_partition, expand_core, find_best_core, CoreMeasure};
use ortolog::tcell::{library_inventory, map_netlist};
use proptest::prelude::*;

fn cover(max_n: usize, max_m: usize) -> impl Strategy<Value = Cover> {
    (1..=max_n).prop_flat_map(move |n| {
        let lit = prop_oneof![Just(Literal::Zero), Just(Literal::One), Just(Literal::DontCare)];
        prop::collection::vec(prop::collection::vec(lit, n), 0..=max_m)
            .prop_map(move |rows| Cover::new(default_names(n), rows.into_iter().map(Cube::new).collect()).unwrap())
    })
}

fn set(max_n: usize) -> impl Strategy<Value = MintermSet> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), 1usize << n)
            .prop_map(move |bits| MintermSet::from_indices(n, (0..bits.len() as u64).filter(|&i| bits[i as usize])))
    })
}

fn configuration(n: usize) -> impl Strategy<Value = (Vec<usize>, PhaseVector)> {
    (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n))
        .prop_map(|(order, p)| (order, PhaseVector(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spectrum_is_permutation_invariant(s in set(7), seed in any::<u64>()) {
        let n = s.n();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left((seed as usize) % n);
        prop_assert_eq!(spectrum_of(&s.permute(&perm).unwrap()), spectrum_of(&s));
        let sp = spectrum_of(&s);
        prop_assert!(sp.counts.iter().enumerate().all(|(r, &c)| c <= binomial(n, r)));
    }

    #[test]
    fn grid_dag_accepts_the_function(s in set(6), seed in any::<u64>()) {
        let n = s.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.rotate_left((seed as usize) % n);
        let phases = PhaseVector::from_mask(n, seed >> 8);
        let g = build_grid_dag(&s, &order, &phases).unwrap();
        prop_assert_eq!(g.accepted(), s.clone());
        let spectrum_of_words = spectrum_of(&s.apply_phase(&phases).unwrap()).counts;
        prop_assert_eq!(g.paths_per_rank(), spectrum_of_words);
    }

    #[test]
    fn cores_are_sound_and_monotone(c in cover(7, 14)) {
        if c.n() >= 2 {
            for p in best_pair_cores(&c).values() {
                let (e, s) = expand_core(&p.core, &c);
                prop_assert!(e.is_sound());
                prop_assert!(s.score >= p.core.score().score);
            }
        }
        if let Some(core) = find_best_core(&c, CoreMeasure::Cubes) {
            prop_assert!(core.is_sound());
        }
    }

    #[test]
    fn dc_partition_covers_the_function(c in cover(6, 12)) {
        let parts = dc_partition(&c);
        prop_assert_eq!(parts.iter().map(Cover::m).sum::<usize>(), c.m());
        let mut union = MintermSet::empty(c.n());
        for p in &parts {
            union = union.union(&p.to_minterms().unwrap());
        }
        prop_assert_eq!(union, c.to_minterms().unwrap());
    }

    #[test]
    fn pla_round_trip(c in cover(8, 10)) {
        let back = parse_pla(&write_pla(&c)).unwrap();
        prop_assert_eq!(back.cubes(), c.cubes());
        prop_assert_eq!(back.input_names(), c.input_names());
    }

    #[test]
    fn mapping_preserves_function(c in cover(7, 12)) {
        let nl = decompose(&c, &DecomposeOptions::default()).unwrap();
        let m = map_netlist(&nl, &library_inventory(c.n().max(2))).unwrap();
        for i in 0..1u64 << c.n() {
            prop_assert_eq!(m.evaluate_index(i), nl.evaluate_index(i));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn derived_functions_are_planar(n in 1usize..=5, picks in prop::collection::vec(any::<bool>(), 30)) {
        let t = TemplateGrid::full(n);
        let deleted: BTreeSet<TemplateLink> =
            t.links.iter().zip(picks.iter().cycle()).filter(|(_, &d)| d).map(|(l, _)| *l).collect();
        let s = derive_pf(&t, &deleted);
        let id: Vec<usize> = (0..n).collect();
        prop_assert!(is_planar_plot(&build_grid_dag(&s, &id, &PhaseVector::identity(n)).unwrap()));
        prop_assert!(is_planar_function(&s).unwrap().is_some());
    }

    #[test]
    fn planarity_survives_permutation_and_phase(
        (s, (order, phases)) in set(4).prop_flat_map(|s| { let n = s.n(); (Just(s), configuration(n)) })
    ) {
        let planar = is_planar_function(&s).unwrap().is_some();
        let image = s.apply_phase(&phases).unwrap().permute(&order).unwrap();
        prop_assert_eq!(is_planar_function(&image).unwrap().is_some(), planar);
    }
}
