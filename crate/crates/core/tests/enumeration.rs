use duc_core::perm_map::{all_du_maps, class_size_histogram, enumerate_du};

#[test]
fn two_states_give_five_classes() {
    let r = enumerate_du(2).unwrap();
    assert_eq!(r.class_count, 5);
    assert_eq!(r.non_interacting_classes, 3);
    assert_eq!(r.class_sizes.iter().sum::<u64>(), r.total_maps);
}

#[test]
fn three_state_classes_are_consistent() {
    let r = enumerate_du(3).unwrap();
    // independent brute force over all 9! bijections of pairs gives 8784 DU maps
    assert_eq!(r.total_maps, 8784);
    // dressing by arbitrary one-site permutations leaves 18 classes
    assert!(r.class_count >= 18);
    assert_eq!(r.class_sizes.iter().sum::<u64>(), r.total_maps);
    assert_eq!(r.total_maps as usize, all_du_maps(3).unwrap().len());
    // orbit-stabilizer: every class size divides the group order
    for &s in &r.class_sizes {
        assert_eq!(r.group_order % s, 0);
    }
    assert_eq!(class_size_histogram(&r).values().sum::<usize>(), r.class_count);
    assert!(r.reshuffle_inclusive_count <= r.class_count);
}
