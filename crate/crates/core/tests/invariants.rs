use duc_core::ca::{self, Circuit};
use duc_core::perm_map::all_du_maps;
use duc_core::{PermMap, Tolerance};
use proptest::prelude::*;

fn du3() -> &'static [PermMap] {
    use std::sync::OnceLock;
    static MAPS: OnceLock<Vec<PermMap>> = OnceLock::new();
    MAPS.get_or_init(|| all_du_maps(3).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn space_reflection_is_an_involution(i in 0usize..1296) {
        let maps = du3();
        let m = &maps[i % maps.len()];
        prop_assert_eq!(&m.space_reflect().space_reflect(), m);
        prop_assert!(m.space_reflect().is_dual_unitary());
    }

    #[test]
    fn canonical_form_is_a_class_invariant(i in 0usize..1296, a in 0usize..6, b in 0usize..6) {
        let maps = du3();
        let m = &maps[i % maps.len()];
        let perms = duc_core::perm_map::all_permutations(3);
        let other = m.diag_sim(&perms[a], &perms[b]).unwrap();
        let c = m.canonical_form().unwrap();
        prop_assert_eq!(&other.canonical_form().unwrap(), &c);
        prop_assert_eq!(&c.canonical_form().unwrap(), &c);
    }

    #[test]
    fn permutation_gates_are_unitary_and_flags_agree(i in 0usize..1296) {
        let maps = du3();
        let m = &maps[i % maps.len()];
        let g = m.to_gate();
        let tol = Tolerance::default();
        prop_assert!(g.is_unitary(&tol));
        prop_assert_eq!(g.is_dual_unitary(&tol), m.is_dual_unitary());
        prop_assert_eq!(g.is_perfect(&tol), m.is_perfect());
    }

    #[test]
    fn floquet_orbits_close(i in 0usize..1296, seed in any::<u64>(), half in 1usize..5) {
        let maps = du3();
        let m = &maps[i % maps.len()];
        let l = 2 * half;
        let s = ca::sample_state(3, l, seed, 0);
        let k = ca::orbit_length(&s, m, 1 << 20).unwrap();
        prop_assert!(matches!(k, ca::Orbit::Length(_)));
        let c = Circuit::new(m);
        let mut t = s.clone();
        for _ in 0..k.value() {
            c.floquet(&mut t);
        }
        prop_assert_eq!(t, s);
    }
}
