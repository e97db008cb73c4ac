use std::collections::BTreeMap;

use diffpi::diffpoly::parse_polynomial;
use diffpi::exactla::{Scalar, SparseVec};
use diffpi::ideals::{cocharacter, EvaluationPlan};
use diffpi::repsn::{
    decompose, hwv_polynomial, mn_character, multiplicity_lower_bound, CycleType, DecoratedTableau,
    MultiplicityMap, Partition,
};
use diffpi::zoo::{build_named, Model};
use diffpi::Error;
use proptest::prelude::*;

fn model(name: &str) -> Model {
    build_named(&name.parse().unwrap()).unwrap()
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn class(s: &str) -> CycleType {
    CycleType(part(s))
}

/// Hook length formula, written independently of the library.
fn hook_dimension(parts: &[usize]) -> u64 {
    let n: usize = parts.iter().sum();
    let mut hooks = 1u64;
    for (r, &len) in parts.iter().enumerate() {
        for c in 0..len {
            let below = parts[r + 1..].iter().filter(|&&l| l > c).count();
            hooks *= (len - c + below) as u64;
        }
    }
    (1..=n as u64).product::<u64>() / hooks
}

#[test]
fn partition_text_forms() {
    assert_eq!(part("(3,1^2)").parts(), [3, 1, 1]);
    assert_eq!(part("(1^4)").to_string(), "(1^4)");
    assert_eq!(part("(2,1)").to_string(), "(2,1)");
    assert_eq!(Partition::hook(4, 2).unwrap().to_string(), "(3,1)");
    assert_eq!(Partition::all(4).len(), 5);
    assert_eq!(Partition::all(4)[0], Partition::row(4));
    assert!("(2,3)".parse::<Partition>().is_err());
}

#[test]
fn trivial_and_sign_characters() {
    for n in 1..=6 {
        for mu in CycleType::all(n) {
            assert_eq!(mn_character(&Partition::row(n), &mu).unwrap(), 1);
            let column = Partition::new(vec![1; n]).unwrap();
            assert_eq!(mn_character(&column, &mu).unwrap(), mu.sign());
        }
    }
}

#[test]
fn character_table_of_s4() {
    // classes (1^4), (2,1^2), (2^2), (3,1), (4)
    let classes = ["(1^4)", "(2,1^2)", "(2^2)", "(3,1)", "(4)"];
    let table: [(&str, [i64; 5]); 5] = [
        ("(4)", [1, 1, 1, 1, 1]),
        ("(3,1)", [3, 1, -1, 0, -1]),
        ("(2^2)", [2, 0, 2, -1, 0]),
        ("(2,1^2)", [3, -1, -1, 0, 1]),
        ("(1^4)", [1, -1, 1, 1, -1]),
    ];
    for (lambda, row) in table {
        for (mu, value) in classes.iter().zip(row) {
            assert_eq!(mn_character(&part(lambda), &class(mu)).unwrap(), value, "{lambda} at {mu}");
        }
    }
}

#[test]
fn class_sizes_sum_to_the_group_order() {
    for n in 1..=7 {
        let total: u64 = CycleType::all(n).iter().map(CycleType::class_size).sum();
        assert_eq!(total, (1..=n as u64).product::<u64>());
    }
}

fn traces(n: usize, f: impl Fn(&CycleType) -> i64) -> BTreeMap<CycleType, Scalar> {
    CycleType::all(n).into_iter().map(|c| {
        let v = f(&c);
        (c, Scalar::from_int(v))
    }).collect()
}

#[test]
fn decomposition_examples() {
    let regular = traces(3, |c| if c.partition().parts() == [1, 1, 1] { 6 } else { 0 });
    assert_eq!(decompose(&regular, 3).unwrap().to_string(), "(3):1, (2,1):2, (1^3):1");
    let trivial = traces(5, |_| 1);
    let m = decompose(&trivial, 5).unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m.get(&Partition::row(5)), 1);
}

#[test]
fn grassmann_degree_three_cocharacter_is_all_hooks_once() {
    let g = build_named(&"grassmann(6)".parse().unwrap()).unwrap();
    let c = cocharacter(&g.algebra, &g.w, 3, &EvaluationPlan::canonical()).unwrap();
    assert_eq!(c.multiplicities.to_string(), "(3):1, (2,1):1, (1^3):1");
}

#[test]
fn bad_traces_are_rejected() {
    let half = traces(2, |_| 0).into_iter().map(|(c, _)| (c, Scalar::new(1, 2))).collect();
    assert!(matches!(decompose(&half, 2), Err(Error::BadMultiplicity { .. })));
    // the sign character with a negated trivial part: m_(2) = −1
    let neg = traces(2, |c| if c.partition().parts() == [2] { -2 } else { 0 });
    assert!(matches!(decompose(&neg, 2), Err(Error::BadMultiplicity { .. })));
}

#[test]
fn multiplicity_map_helpers() {
    let a = MultiplicityMap::from_map([(part("(2)"), 1), (part("(1^2)"), 0)].into_iter().collect());
    let b = MultiplicityMap::from_map([(part("(2)"), 3), (part("(1^2)"), 2)].into_iter().collect());
    assert_eq!(a.len(), 1);
    assert_eq!(a.get(&part("(1^2)")), 0);
    assert!(a.dominated_by(&b));
    assert!(!b.dominated_by(&a));
    assert_eq!(b.weighted_total(), 5);
    assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"(2)":3,"(1^2)":2}"#);
}

#[test]
fn tableau_polynomials() {
    let d = model("ut2_delta");
    let delta = d.w.label_index("delta").unwrap();
    let p = |t: &str| parse_polynomial(t, &d.w).unwrap();
    assert_eq!(hwv_polynomial(&DecoratedTableau::row(3)), p("x x x"));
    assert_eq!(hwv_polynomial(&DecoratedTableau::row_with_label(3, 2, delta)), p("x x^delta x"));
    let b = DecoratedTableau::two_row_window(1, 1, 1, Some(delta)).unwrap();
    assert_eq!(hwv_polynomial(&b), p("x (x^delta y - y^delta x)"));
    let b = DecoratedTableau::two_row_window(2, 1, 0, Some(delta)).unwrap();
    assert_eq!(
        hwv_polynomial(&b),
        p("(x (x^delta y - y^delta x) y - y (x^delta y - y^delta x) x) x")
    );
    assert!(DecoratedTableau::new(part("(1^4)"), vec![(0, 0), (0, 1), (0, 2), (0, 3)], vec![0; 4]).is_err());
    assert!(DecoratedTableau::two_row_window(1, 1, 2, None).is_err());
}

fn e(coords: &[i64]) -> SparseVec {
    SparseVec::from_ints(coords)
}

#[test]
fn lower_bound_for_the_row_of_ut2_delta() {
    let d = model("ut2_delta");
    let delta = d.w.label_index("delta").unwrap();
    let mut candidates = vec![DecoratedTableau::row(3)];
    candidates.extend((1..=3).map(|k| DecoratedTableau::row_with_label(3, k, delta)));
    let points: Vec<BTreeMap<u32, SparseVec>> =
        [1, 2, 3, 5].iter().map(|&b| [(0u32, e(&[b, 0, 1]))].into_iter().collect()).collect();
    let lam = part("(3)");
    assert_eq!(multiplicity_lower_bound(&d.algebra, &d.w, &lam, &candidates, Some(&points)).unwrap(), 4);
    assert_eq!(multiplicity_lower_bound(&d.algebra, &d.w, &lam, &candidates, None).unwrap(), 4);
}

#[test]
fn lower_bound_for_a_two_row_shape_of_ut2_delta() {
    let d = model("ut2_delta");
    let delta = d.w.label_index("delta").unwrap();
    let candidates: Vec<DecoratedTableau> = [None, Some(delta)]
        .into_iter()
        .flat_map(|l| (0..=1).map(move |i| DecoratedTableau::two_row_window(1, 1, i, l).unwrap()))
        .collect();
    let mut points = Vec::new();
    for b in [1, 2, 3, 5] {
        for x in [e(&[b, 1, 1]), e(&[b, 0, 1])] {
            points.push([(0u32, x), (1u32, e(&[1, 0, 0]))].into_iter().collect());
        }
    }
    let lam = part("(2,1)");
    assert_eq!(multiplicity_lower_bound(&d.algebra, &d.w, &lam, &candidates, Some(&points)).unwrap(), 4);
}

#[test]
fn lower_bound_for_the_row_of_c_eps() {
    let c = model("c_eps");
    let eps = c.w.label_index("eps").unwrap();
    for n in 2..=5 {
        let candidates = [DecoratedTableau::row(n), DecoratedTableau::row_with_label(n, 1, eps)];
        let bound = multiplicity_lower_bound(&c.algebra, &c.w, &Partition::row(n), &candidates, None).unwrap();
        assert_eq!(bound, 2);
    }
}

#[test]
fn candidates_of_the_wrong_shape_are_refused() {
    let c = model("c_eps");
    let err = multiplicity_lower_bound(&c.algebra, &c.w, &part("(2,1)"), &[DecoratedTableau::row(3)], None);
    assert!(matches!(err, Err(Error::InvalidTableau(_))));
}

proptest! {
    #[test]
    fn degrees_follow_the_hook_length_formula(n in 1usize..9) {
        let id = CycleType(Partition::new(vec![1; n]).unwrap());
        let mut squares = 0u64;
        for lambda in Partition::all(n) {
            let d = mn_character(&lambda, &id).unwrap();
            prop_assert_eq!(d as u64, hook_dimension(lambda.parts()));
            prop_assert_eq!(d as u64, lambda.dimension());
            squares += (d * d) as u64;
        }
        prop_assert_eq!(squares, (1..=n as u64).product::<u64>());
    }

    #[test]
    fn row_orthogonality(n in 1usize..8) {
        let order: i64 = (1..=n as i64).product();
        let classes = CycleType::all(n);
        for a in Partition::all(n) {
            for b in Partition::all(n) {
                let s: i64 = classes.iter()
                    .map(|c| c.class_size() as i64 * mn_character(&a, c).unwrap() * mn_character(&b, c).unwrap())
                    .sum();
                prop_assert_eq!(s, if a == b { order } else { 0 });
            }
        }
    }

    #[test]
    fn decomposing_a_sum_of_characters_recovers_it(coeffs in prop::collection::vec(0u64..4, 7)) {
        let n = 5;
        let parts = Partition::all(n);
        let wanted: BTreeMap<Partition, u64> = parts.iter().cloned().zip(coeffs).collect();
        let t: BTreeMap<CycleType, Scalar> = CycleType::all(n).into_iter().map(|c| {
            let v: i64 = wanted.iter().map(|(l, &m)| m as i64 * mn_character(l, &c).unwrap()).sum();
            (c, Scalar::from_int(v))
        }).collect();
        prop_assert_eq!(decompose(&t, n).unwrap(), MultiplicityMap::from_map(wanted));
    }
}
