use epi_mackey::cube::kan::{
    extend_by_layers, is_rke_by_oracle, is_rke_from, limit_over, limit_over_all_arrows, pointwise_rke,
    truncated_limit,
};
use epi_mackey::cube::random::{constant_in_direction, mode_for, random_diagram, transport, Mode};
use epi_mackey::cube::{CubePoset, SubPoset, VectDiagram};
use epi_mackey::linalg::QMatrix;
use proptest::prelude::*;

fn shapes() -> Vec<(usize, usize)> {
    vec![(3, 2), (4, 2), (5, 2), (4, 3), (5, 3)]
}

fn cone_rank(f: &VectDiagram, a: usize, members: &[usize]) -> usize {
    let mut stacked = QMatrix::zeros(0, f.dim(a));
    for &x in members {
        stacked = stacked.vstack(&f.map_between(a, x).unwrap()).unwrap();
    }
    stacked.rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn criterion_matches_oracle(shape in 0usize..5, seed in any::<u64>()) {
        let (d, r) = shapes()[shape];
        let p = CubePoset::subdivided(d, r).unwrap();
        let s = SubPoset::truncated(&p).unwrap();
        let f = random_diagram(&p, &s, mode_for(seed), seed);
        prop_assert_eq!(is_rke_from(&f, &s).unwrap().pass, is_rke_by_oracle(&f, &s).unwrap().pass);
    }

    #[test]
    fn extensions_are_extended_and_idempotent(shape in 0usize..5, seed in any::<u64>()) {
        let (d, r) = shapes()[shape];
        let p = CubePoset::subdivided(d, r).unwrap();
        let s = SubPoset::truncated(&p).unwrap();
        let f = random_diagram(&p, &s, Mode::Free, seed);
        let e = pointwise_rke(&f.restrict(&s).unwrap(), &s).unwrap();
        prop_assert!(is_rke_from(&e, &s).unwrap().pass);
        let again = pointwise_rke(&e.restrict(&s).unwrap(), &s).unwrap();
        prop_assert_eq!(&again, &e);
        // the initial corner sees the whole truncated cube
        let lim = truncated_limit(&f).unwrap();
        prop_assert_eq!(e.dim(p.initial()), lim.dim());
        prop_assert_eq!(truncated_limit(&e).unwrap().dim(), lim.dim());
    }

    #[test]
    fn extended_diagrams_see_the_truncated_limit(shape in 0usize..5, seed in any::<u64>()) {
        let (d, r) = shapes()[shape];
        let p = CubePoset::subdivided(d, r).unwrap();
        let s = SubPoset::truncated(&p).unwrap();
        let f = random_diagram(&p, &s, mode_for(seed), seed);
        if is_rke_from(&f, &s).unwrap().pass {
            let lim = truncated_limit(&f).unwrap();
            let a = p.initial();
            prop_assert_eq!(f.dim(a), lim.dim());
            prop_assert_eq!(cone_rank(&f, a, lim.members()), lim.dim());
        }
    }

    #[test]
    fn layered_extension_matches_one_shot(which in 0usize..4, seed in any::<u64>()) {
        let (bounds, n) = [(vec![1, 1], 1), (vec![2, 1], 2), (vec![1, 1, 1], 2), (vec![2, 2], 3)][which].clone();
        let p = CubePoset::boxed(bounds).unwrap();
        let s = SubPoset::at_least(&p, n).unwrap();
        let g = random_diagram(&p, &s, Mode::Free, seed).restrict(&s).unwrap();
        let one = pointwise_rke(&g, &s).unwrap();
        let layered = extend_by_layers(&g, &s).unwrap();
        prop_assert_eq!(one.dims(), layered.dims());
        prop_assert!(is_rke_by_oracle(&layered, &s).unwrap().pass);
        prop_assert!(is_rke_from(&one, &s).unwrap().pass);
        // stage by stage: extending to B_{n-1} first, then the rest
        if n >= 2 {
            let mid = SubPoset::at_least(&p, n - 1).unwrap();
            let step = pointwise_rke(&g, &s).unwrap().restrict(&mid).unwrap();
            let rest = pointwise_rke(&step, &mid).unwrap();
            prop_assert_eq!(rest.dims(), one.dims());
            prop_assert!(is_rke_by_oracle(&rest, &s).unwrap().pass);
        }
    }

    #[test]
    fn degenerate_cubes_are_limits(r in 2usize..4, direction in 0usize..3, seed in any::<u64>()) {
        let direction = direction % r;
        let face_poset = CubePoset::boxed(vec![1; r - 1]).unwrap();
        let face = random_diagram(&face_poset, &SubPoset::full(&face_poset), Mode::Free, seed);
        let f = transport(&constant_in_direction(&face, direction, &vec![1; r]).unwrap(), seed ^ 0x5eed);
        f.check_commutes().unwrap();
        let s = SubPoset::at_least(f.poset(), 1).unwrap();
        prop_assert!(is_rke_from(&f, &s).unwrap().pass);
    }

    #[test]
    fn hasse_limits_match_brute_force(shape in 0usize..5, seed in any::<u64>()) {
        let (d, r) = shapes()[shape];
        let p = CubePoset::subdivided(d, r).unwrap();
        let s = SubPoset::truncated(&p).unwrap();
        let f = random_diagram(&p, &s, Mode::Free, seed);
        let members: Vec<usize> = s.members().collect();
        let fast = limit_over(&f, &members);
        let slow = limit_over_all_arrows(&f, &members);
        prop_assert_eq!(fast.dim(), slow.dim());
        // same subspace of the product
        let both = fast.basis().hstack(slow.basis()).unwrap();
        prop_assert_eq!(both.rank(), fast.dim());
    }
}

#[test]
fn json_round_trip_of_random_diagrams() {
    let p = CubePoset::subdivided(5, 3).unwrap();
    let s = SubPoset::truncated(&p).unwrap();
    for seed in 0..5 {
        let f = random_diagram(&p, &s, mode_for(seed), seed);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = VectDiagram::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
