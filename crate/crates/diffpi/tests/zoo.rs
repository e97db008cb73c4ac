use diffpi::diffpoly::parse_polynomial;
use diffpi::exactla::{Scalar, SparseVec};
use diffpi::fdalg::operator_closure;
use diffpi::ideals::{codimension, is_identity, EvaluationPlan};
use diffpi::zoo::{
    build_named, canonical_grassmann_plan, closed_form, expected_multiplicities, generator_set,
    generator_texts, grassmann_algebra, grassmann_der_codim, grassmann_scan, list_models, tuple_patterns,
    Action, Model, ModelSpec,
};
use diffpi::Error;

fn model(name: &str) -> Model {
    build_named(&name.parse().unwrap()).unwrap()
}

#[test]
fn c_eps_shape() {
    let c = model("c_eps");
    assert_eq!((c.algebra.dim(), c.w.dim()), (2, 2));
    let eps = &c.algebra.derivations()[0].matrix;
    assert!(eps.apply(c.algebra.unit().unwrap()).is_zero());
    assert_eq!(eps.apply(&SparseVec::unit(2, 1)), SparseVec::unit(2, 1));
}

#[test]
fn ut2_with_both_derivations() {
    let u = model("ut2_D");
    assert_eq!((u.algebra.dim(), u.w.dim()), (3, 3));
    assert!(u.algebra.brackets().is_some());
}

#[test]
fn names_round_trip() {
    for spec in ModelSpec::all(3) {
        let back: ModelSpec = spec.to_string().parse().unwrap();
        assert_eq!(back, spec);
    }
    assert_eq!("ut2_eps".parse::<ModelSpec>().unwrap(), ModelSpec::Ut2(Action::Eps));
    assert_eq!(
        ModelSpec::parse_with("grassmann_der", Some(9), Some(2)).unwrap(),
        ModelSpec::GrassmannDer { m: 9, t: 2 }
    );
    assert!(matches!("ut3".parse::<ModelSpec>(), Err(Error::InvalidModel(_))));
    assert!("grassmann".parse::<ModelSpec>().is_err());
    assert!("ut2(3)".parse::<ModelSpec>().is_err());
}

#[test]
fn zoo_lists_fifteen_models() {
    let list = list_models(3).unwrap();
    assert_eq!(list.len(), 15);
    let dims: Vec<(String, usize, usize)> = list.iter().map(|s| (s.name.clone(), s.dim, s.dim_w)).collect();
    assert_eq!(dims[0], ("ut2".into(), 3, 1));
    assert_eq!(dims[3], ("ut2_D".into(), 3, 3));
    assert_eq!(dims[13], ("grassmann(6)".into(), 64, 1));
    assert_eq!(dims[14], ("grassmann_der(7,1)".into(), 128, 2));
}

/// Sign of `e_a e_b` for bitmask supports by counting inversions directly.
fn oracle_product(a: u64, b: u64) -> Option<(i64, u64)> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            inversions += (a >> (i + 1)).count_ones();
        }
    }
    Some((if inversions % 2 == 0 { 1 } else { -1 }, a | b))
}

#[test]
fn grassmann_products_match_the_sign_rule() {
    let a = grassmann_algebra(5, 0).unwrap();
    for x in 0..32usize {
        for y in 0..32usize {
            let expected = match oracle_product(x as u64, y as u64) {
                None => SparseVec::zero(32),
                Some((s, z)) => SparseVec::unit(32, z as usize).scale(&Scalar::from_int(s)),
            };
            assert_eq!(a.basis_product(x, y), expected, "{x} · {y}");
        }
    }
}

#[test]
fn grassmann_derivations() {
    let a = grassmann_algebra(5, 2).unwrap();
    a.validate().unwrap();
    let w = operator_closure(&a);
    assert_eq!(w.dim(), 3);
    for i in 1..3 {
        for j in 1..3 {
            assert!(w.compose(i, j).is_zero());
        }
    }
    // δ_1 on e2 (odd, disjoint) is e1 e2; on e1 e2 (even) it is 0; on e1 (overlap) it is 0
    let d1 = &a.derivations()[0].matrix;
    assert_eq!(d1.apply(&SparseVec::unit(32, 0b10)), SparseVec::unit(32, 0b11));
    assert!(d1.apply(&SparseVec::unit(32, 0b11)).is_zero());
    assert!(d1.apply(&SparseVec::unit(32, 0b1)).is_zero());
    assert!(matches!(grassmann_algebra(1, 2), Err(Error::Truncation { .. })));
}

#[test]
fn canonical_plans() {
    let plan = canonical_grassmann_plan(1, 1, 3).unwrap();
    assert_eq!(plan.patterns, 4);
    assert!(plan.all_realizable);
    let mut pats: Vec<(u32, Vec<usize>)> =
        plan.tuples.iter().map(|t| tuple_patterns(t, 1)).map(|p| (p[0].parity, p[0].reserved.clone())).collect();
    pats.sort();
    assert_eq!(pats, [(0, vec![]), (0, vec![0]), (1, vec![]), (1, vec![0])]);
    assert!(matches!(canonical_grassmann_plan(2, 3, 2), Err(Error::Truncation { .. })));
    // too small a truncation drops patterns instead of failing
    assert!(!canonical_grassmann_plan(3, 1, 2).unwrap().all_realizable);
}

#[test]
fn small_grassmann_codimensions() {
    let cases = [(1, 1, 2), (2, 1, 4), (2, 2, 7)];
    for (n, t, c) in cases {
        let a = grassmann_algebra(2 * n + t, t).unwrap();
        let w = operator_closure(&a);
        assert_eq!(codimension(&a, &w, n, &EvaluationPlan::canonical()).unwrap().c_n, c, "n={n} t={t}");
        assert_eq!(grassmann_der_codim(n, t), c as u64);
    }
}

#[test]
fn grassmann_scans() {
    for (n, t, c) in [(3, 1, 8), (4, 1, 16), (3, 2, 15), (5, 0, 16)] {
        let s = grassmann_scan(n, t, 2 * n + t, 2 * n + t + 4).unwrap();
        assert_eq!(s.stable, Some(c), "n={n} t={t}: {:?}", s.values);
        assert!(s.matches);
        assert!(s.note.contains("single generators"));
    }
    let s = grassmann_scan(3, 1, 2, 3).unwrap();
    assert!(s.stable.is_none() && !s.matches, "{:?}", s.values);
}

#[test]
fn canonical_plan_agrees_with_full_enumeration() {
    for t in 1..=2 {
        for m in t.max(2)..=8 {
            let a = grassmann_algebra(m, t).unwrap();
            let w = operator_closure(&a);
            for n in 1..=2 {
                let full = codimension(&a, &w, n, &EvaluationPlan::full().with_cap(u128::MAX)).unwrap();
                let canon = codimension(&a, &w, n, &EvaluationPlan::canonical()).unwrap();
                assert_eq!(full.c_n, canon.c_n, "m={m} t={t} n={n}");
            }
        }
    }
}

#[test]
fn grassmann_identities_hold_after_truncation() {
    for m in 1..=8 {
        let g = build_named(&ModelSpec::Grassmann { m }).unwrap();
        let p = parse_polynomial("[x,y,z]", &g.w).unwrap();
        assert!(is_identity(&g.algebra, &g.w, &p).unwrap(), "m={m}");
    }
    let g = build_named(&"grassmann_der(8,2)".parse().unwrap()).unwrap();
    for text in ["[x^delta1,y]", "[x^delta2,y]", "x^{delta1 delta2}", "x^{delta2 delta2}"] {
        let p = parse_polynomial(text, &g.w).unwrap();
        assert!(is_identity(&g.algebra, &g.w, &p).unwrap(), "{text}");
    }
    assert!(!is_identity(&g.algebra, &g.w, &parse_polynomial("[x,y]", &g.w).unwrap()).unwrap());
}

#[test]
fn registry_generators_are_identities() {
    for spec in ModelSpec::all(2) {
        let m = build_named(&spec).unwrap();
        let gens = generator_set(&spec, &m.w).unwrap();
        assert_eq!(gens.len(), generator_texts(&spec).len());
        for g in gens {
            assert!(is_identity(&m.algebra, &m.w, &g).unwrap(), "{spec}: {}", g.display(Some(&m.w)));
        }
    }
}

#[test]
fn registry_formulas() {
    let ut2 = ModelSpec::Ut2(Action::Trivial);
    let values: Vec<u64> = (1..=6).map(|n| closed_form(&ut2, n).unwrap()).collect();
    assert_eq!(values, [1, 2, 6, 18, 50, 130]);
    let eps = ModelSpec::Ut2(Action::Eps);
    let values: Vec<u64> = (1..=5).map(|n| closed_form(&eps, n).unwrap()).collect();
    assert_eq!(values, [2, 5, 13, 33, 81]);
    let m = expected_multiplicities(&ModelSpec::Ut2(Action::Delta), 3).unwrap();
    assert_eq!(m.to_string(), "(3):4, (2,1):4, (1^3):1");
    let m = expected_multiplicities(&ModelSpec::GrassmannDer { m: 9, t: 1 }, 4).unwrap();
    assert!(m.iter().all(|(l, k)| l.hook_rows().is_some() && k == 2));
    assert_eq!(m.len(), 4);
}
