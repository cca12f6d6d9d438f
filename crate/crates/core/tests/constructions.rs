use sperner::bounds::binomial;
use sperner::construct::{
    construct_2k1, construct_2k2, construct_3k1, construct_k2, develop, latin_lift, CircularLayout,
    InitialPartition, INF,
};
use sperner::fixtures;
use sperner::{is_almost_uniform, verify_sperner};

#[test]
fn every_fixture_is_sperner() {
    for f in fixtures::FIXTURES {
        let s = fixtures::system(f.name).unwrap();
        let report = verify_sperner(&s);
        assert!(report.valid, "{}: {:?}", f.name, report.describe(&s));
    }
}

#[test]
fn developing_the_seventeen_point_seed_gives_the_fixture() {
    let layout = CircularLayout::new(16, true).unwrap();
    let seed = InitialPartition::from_labels(
        layout,
        &[
            vec![1, 5, 9],
            vec![8, 11],
            vec![7, 12],
            vec![6, 13],
            vec![2, 16],
            vec![4, 10],
            vec![3, INF],
            vec![14, 15],
        ],
    )
    .unwrap();
    let developed = develop(&seed);
    assert!(developed.same_as(&fixtures::system("fig-17-8").unwrap()));
}

#[test]
fn eleven_point_triangle_construction_matches_fixture() {
    let built = construct_3k1(4).unwrap();
    assert!(built.same_as(&fixtures::system("fig-11-4").unwrap()));
}

#[test]
fn nine_point_construction_is_the_fixture() {
    let built = construct_2k1(4).unwrap();
    assert!(built.same_as(&fixtures::system("fig-9-4").unwrap()));
}

#[test]
fn rotational_families_have_expected_sizes() {
    for k in (4..=12).step_by(2) {
        let s = construct_2k1(k).unwrap();
        assert_eq!((s.n(), s.len()), (2 * k + 1, 2 * k));
        assert!(is_almost_uniform(&s), "k = {k}");
    }
    for k in 3..=10 {
        let s = construct_2k2(k).unwrap();
        assert_eq!((s.n(), s.len()), (2 * k + 2, 2 * k + 1));
    }
    for k in 4..=10 {
        let s = construct_3k1(k).unwrap();
        assert_eq!((s.n(), s.len()), (3 * k - 1, 3 * k - 1));
    }
}

#[test]
fn two_class_systems_use_both_half_sizes() {
    for n in (3..=13).step_by(2) {
        let l = (n - 1) / 2;
        let s = construct_k2(n).unwrap();
        assert_eq!(s.len() as u128, binomial(n - 1, l - 1), "n = {n}");
        for p in s.partitions() {
            assert_eq!(p.class_sizes(), vec![l, l + 1]);
        }
    }
}

#[test]
fn latin_lift_multiplies_by_k() {
    for (name, expect) in [("fig1", 15), ("fig-9-4", 32)] {
        let lifted = latin_lift(&fixtures::system(name).unwrap()).unwrap();
        assert_eq!(lifted.len(), expect);
        assert!(verify_sperner(&lifted).valid);
    }
}
