use duc_core::linear_ca::checks::{self, BlockKind};
use duc_core::linear_ca::{brickwork, build_v, matrix_order, OrderOptions};
use num_bigint::BigUint;

const TABLE_III: [u64; 24] = [
    4, 4, 12, 12, 20, 12, 52, 60, 36, 40, 244, 36, 364, 364, 60, 240, 820, 36, 1036, 4920, 156, 244, 354292, 180,
];

#[test]
fn published_recurrence_times() {
    for (i, l) in (2..=48).step_by(2).enumerate() {
        let r = matrix_order(&build_v(l, 3).unwrap(), &OrderOptions::default()).unwrap();
        assert_eq!(r.t, BigUint::from(TABLE_III[i]), "L={l}");
        assert_eq!(r.methods_agree, Some(true), "L={l}");
        assert!(r.divisor_certificate.unwrap().verified);
    }
}

#[test]
fn l54_by_two_routes() {
    let m = build_v(54, 3).unwrap();
    let r = matrix_order(&m, &OrderOptions::default()).unwrap();
    assert_eq!(r.t, BigUint::from(108u32));
    assert_eq!(r.direct, Some(BigUint::from(108u32)));
}

#[test]
fn block_orders_reproduce_t10() {
    let r = checks::block_spectrum(3, 10, &OrderOptions::default()).unwrap();
    assert_eq!(r.n, 4);
    assert_eq!(r.lcm, 20);
    assert!(r.lcm_equals_t);
    let minus = checks::block_spectrum(5, 4, &OrderOptions::default()).unwrap();
    let b = minus.blocks.iter().find(|b| b.kind == BlockKind::MinusOne).unwrap();
    // −2 ≡ 3 has order 4 in F_5
    assert_eq!(b.order, 4);
}

#[test]
fn divisibility_examples() {
    let o = OrderOptions::default();
    let r = checks::verify_divisibility(3, 26, &o).unwrap();
    assert_eq!((r.n, r.s), (3, 3));
    assert_eq!(r.quotient, Some(BigUint::from(6u32)));
    let r = checks::verify_divisibility(3, 46, &o).unwrap();
    assert_eq!((r.n, r.s), (11, 11));
    assert!(r.divides);
    let r = checks::verify_divisibility(3, 8, &o).unwrap();
    assert_eq!(r.repunit.as_ref().unwrap().quadratic_bound, BigUint::from(216u32));
    assert!(r.repunit.unwrap().within);
    assert!(checks::verify_divisibility(3, 6, &o).is_err());
}

#[test]
fn parity_rule_needs_minus_one_among_powers_of_p() {
    // whenever −1 is a power of p mod ℓ, or n is odd, the parity-rule bound holds;
    // s = n always holds
    let o = OrderOptions::default();
    for l in (2..=48).step_by(2) {
        if (l / 2) % 3 == 0 {
            continue;
        }
        let r = checks::verify_divisibility(3, l, &o).unwrap();
        assert!(r.divides_s_equals_n, "L={l}");
        assert_ne!(r.within_exponential_bound, Some(false), "L={l}");
        if r.minus_one_in_p_powers || r.n % 2 == 1 {
            assert!(r.divides, "L={l}");
        }
    }
}

#[test]
fn coprime_split_measures_d() {
    let r = checks::coprime_decomposition_check(3, 2, 5, &OrderOptions::default()).unwrap();
    assert_eq!((r.t_2a.clone(), r.t_2b.clone(), r.t_2ab.clone()), (4u32.into(), 20u32.into(), 40u32.into()));
    assert_eq!(r.d, Some(2));
}

#[test]
fn component_formula() {
    for l in [4, 8, 12] {
        assert!(brickwork::check_component_formula(l, 3, 50, 1).unwrap());
    }
}
