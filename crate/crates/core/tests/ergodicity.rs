use duc_core::builtins::{self, GLIDER_MODELS};
use duc_core::ergodicity::{
    extract_gliders, glider_count, spectrum, transfer_matrix, trivial_spectrum_check, Direction, DEFAULT_CAP,
};
use duc_core::Tolerance;

#[test]
fn glider_counts_through_range_three() {
    let want = [[0, 0, 0], [0, 0, 0], [4, 40, 364], [8, 80, 728], [0, 2, 11], [0, 0, 1]];
    let tol = Tolerance::default();
    for (name, row) in GLIDER_MODELS.iter().zip(want) {
        let g = builtins::builtin(name).unwrap().gate();
        let mut prev = 0;
        for (k, &c) in row.iter().enumerate() {
            let r = glider_count(&g, k + 1, &tol, DEFAULT_CAP).unwrap();
            assert_eq!(r.count, c, "{name} α={}", k + 1);
            assert_eq!(r.exact_count, Some(c));
            assert!(r.count >= prev, "monotone in α");
            prev = r.count;
        }
    }
}

#[test]
fn perfect_gates_are_trivial_at_alpha_one() {
    let tol = Tolerance::default();
    for name in ["Z3", "V1", "V2", "MOLS7"] {
        let g = builtins::builtin(name).unwrap().gate();
        for dir in [Direction::Right, Direction::Left] {
            let t = transfer_matrix(&g, 1, dir, DEFAULT_CAP).unwrap();
            let s = spectrum(&t, &tol).unwrap();
            let mods: Vec<f64> = s.eigenvalues.iter().map(|e| e[0].hypot(e[1])).collect();
            assert!((mods[0] - 1.0).abs() < 1e-9, "{name}");
            assert!(mods[1..].iter().all(|&m| m < 1e-9), "{name}");
            let exact = trivial_spectrum_check(&t, 4, t.dim).unwrap();
            assert_eq!(exact.trivial, Some(true), "{name}");
            assert_eq!(exact.stabilization_index, Some(1));
        }
    }
}

#[test]
fn linear_perfect_maps_are_trivial_at_alpha_two() {
    for name in ["Z3", "V1"] {
        let g = builtins::builtin(name).unwrap().gate();
        for dir in [Direction::Right, Direction::Left] {
            let t = transfer_matrix(&g, 2, dir, DEFAULT_CAP).unwrap();
            let exact = trivial_spectrum_check(&t, 4, t.dim).unwrap();
            assert_eq!(exact.trivial, Some(true), "{name}");
            // a nilpotent part of index 2, seen as ~1e-8 moduli in floating point
            assert_eq!(exact.stabilization_index, Some(2));
            assert_eq!(exact.unit_multiplicity, Some(1));
        }
    }
}

#[test]
fn nonlinear_perfect_maps_are_not_trivial_at_alpha_two() {
    // Tr (N t)^k ≠ N^k is an exact integer refutation of {1, 0, …, 0}
    let want: [(&str, [u128; 4], [u128; 4]); 2] = [
        ("V2", [3, 19, 144, 667], [5, 25, 125, 725]),
        ("MOLS7", [7, 55, 361, 2503], [2, 32, 371, 2464]),
    ];
    for (name, right, left) in want {
        let g = builtins::builtin(name).unwrap().gate();
        for (dir, tr) in [(Direction::Right, right), (Direction::Left, left)] {
            let t = transfer_matrix(&g, 2, dir, DEFAULT_CAP).unwrap();
            let exact = trivial_spectrum_check(&t, 4, t.dim).unwrap();
            assert_eq!(exact.power_traces, tr, "{name}");
            assert_eq!(exact.trivial, Some(false));
            // still no gliders
            assert_eq!(spectrum(&t, &Tolerance::default()).unwrap().exact_unimodular_count, Some(1));
        }
    }
}

#[test]
fn e2_glider_is_verified() {
    let g = builtins::builtin("E2").unwrap().gate();
    let c = extract_gliders(&g, 3, &Tolerance::default(), DEFAULT_CAP, 5).unwrap();
    let nontrivial: Vec<_> = c.iter().filter(|x| x.support_range > 1).collect();
    assert_eq!(nontrivial.len(), 1);
    assert!(nontrivial[0].verified);
}
