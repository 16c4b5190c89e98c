use epi_mackey::burnside::{build_ring, build_ring_with, BurnsideElement};
use epi_mackey::epi_cat::{enumerate_objects, SliceObject};
use epi_mackey::mackey::{representable, representable_with, MackeyData};
use epi_mackey::span_cat::{spans_between, SpanSum};
use epi_mackey::{suites, Exec};
use proptest::prelude::*;

/// Every connected span class among objects of `Epi_{d,r}` with apex at
/// most `bound`, grouped by feet.
fn all_spans(d: usize, r: usize, bound: usize) -> Vec<(SliceObject, SliceObject, Vec<SpanSum>)> {
    let objects = enumerate_objects(d, r).unwrap();
    let mut out = Vec::new();
    for u in &objects {
        for v in &objects {
            let spans: Vec<SpanSum> = spans_between(u, v, bound).into_iter().map(SpanSum::single).collect();
            out.push((u.clone(), v.clone(), spans));
        }
    }
    out
}

#[test]
fn span_composition_is_associative() {
    for d in 1..=4 {
        for r in 1..=d.min(2) {
            let bound = d.min(3);
            let spans = all_spans(d, r, bound);
            let from = |u: &SliceObject| -> Vec<&(SliceObject, SliceObject, Vec<SpanSum>)> {
                spans.iter().filter(|(a, _, _)| a == u).collect()
            };
            for (_, b, first) in &spans {
                for (_, c, second) in from(b) {
                    for (_, _, third) in from(c) {
                        for x in first {
                            for y in second {
                                for z in third {
                                    let left = SpanSum::compose(z, &SpanSum::compose(y, x, d).unwrap(), d).unwrap();
                                    let right = SpanSum::compose(&SpanSum::compose(z, y, d).unwrap(), x, d).unwrap();
                                    assert_eq!(left, right, "d={d} r={r}: {x} then {y} then {z}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn exhaustive_suites_at_small_bounds() {
    let exec = Exec::default();
    for report in [
        suites::representables(4, 2, exec).unwrap(),
        suites::universal_property(4, exec).unwrap(),
        suites::orbitality(5, exec).unwrap(),
        suites::triple_consistency(5, 2, exec).unwrap(),
    ] {
        assert!(report.pass, "{report:?}");
    }
}

#[test]
fn execution_modes_agree() {
    for (d, r) in [(4, 1), (4, 2), (5, 2)] {
        assert_eq!(build_ring_with(d, r, Exec::Sequential).unwrap(), build_ring_with(d, r, Exec::Parallel).unwrap());
    }
    let v = SliceObject::new(vec![2, 1]).unwrap();
    let seq = representable_with(4, 2, &v, Exec::Sequential).unwrap();
    let par = representable_with(4, 2, &v, Exec::Parallel).unwrap();
    assert_eq!(seq, par);
    assert_eq!(
        seq.check_axioms_with(Exec::Sequential).unwrap(),
        par.check_axioms_with(Exec::Parallel).unwrap()
    );
}

fn element(n: usize) -> impl Strategy<Value = BurnsideElement> {
    proptest::collection::vec(-4i64..=4, n).prop_map(|coefficients| BurnsideElement { coefficients })
}

fn ring_and_elements() -> impl Strategy<Value = ((usize, usize), BurnsideElement, BurnsideElement, BurnsideElement)> {
    prop_oneof![Just((4, 1)), Just((5, 1)), Just((4, 2)), Just((5, 2)), Just((5, 3))].prop_flat_map(|(d, r)| {
        let n = enumerate_objects(d, r).unwrap().len();
        (Just((d, r)), element(n), element(n), element(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_and_marks((dims, x, y, z) in ring_and_elements()) {
        let ring = build_ring(dims.0, dims.1).unwrap();
        let xy = ring.mul(&x, &y).unwrap();
        prop_assert_eq!(&xy, &ring.mul(&y, &x).unwrap());
        prop_assert_eq!(ring.mul(&xy, &z).unwrap(), ring.mul(&x, &ring.mul(&y, &z).unwrap()).unwrap());
        prop_assert_eq!(ring.mul(&ring.unit(), &x).unwrap(), x.clone());
        for u in 0..ring.rank() {
            let product = ring.mark_at(u, &x).unwrap() * ring.mark_at(u, &y).unwrap();
            prop_assert_eq!(ring.mark_at(u, &xy).unwrap(), product);
        }
    }

    #[test]
    fn mackey_json_round_trips(which in 0usize..6) {
        let objects = enumerate_objects(3, 2).unwrap();
        let v = &objects[which % objects.len()];
        let m = representable(3, 2, v).unwrap();
        let back = MackeyData::from_json_str(&m.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }
}
