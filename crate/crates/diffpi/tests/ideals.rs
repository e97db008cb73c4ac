use std::collections::BTreeMap;

use diffpi::diffpoly::{evaluate, parse_list, parse_polynomial, DiffPolynomial, MultilinearIndex};
use diffpi::exactla::{Scalar, SparseVec};
use diffpi::ideals::{
    cocharacter, codimension, consequence_space, generator_hash, in_ideal, is_identity,
    verify_generating_set, EvaluationPlan, PlanMode,
};
use diffpi::repsn::Partition;
use diffpi::zoo::{build_named, closed_form, generator_set, Model};
use diffpi::Error;

fn model(name: &str) -> Model {
    build_named(&name.parse().unwrap()).unwrap()
}

fn p(text: &str, m: &Model) -> DiffPolynomial {
    parse_polynomial(text, &m.w).unwrap()
}

fn full() -> EvaluationPlan {
    EvaluationPlan::full()
}

/// Rank by dense elimination of the matrix (monomial × (tuple, coordinate)), each entry
/// obtained by evaluating the monomial itself.
fn brute_codim(m: &Model, n: usize) -> usize {
    let idx = MultilinearIndex::new(n, m.w.dim()).unwrap();
    let dim = m.algebra.dim();
    let mut tuples = vec![vec![]];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<usize>| (0..dim).map(move |b| [t.clone(), vec![b]].concat()))
            .collect();
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..idx.len() {
        let mono = DiffPolynomial::term(idx.index_monomial(i).unwrap(), Scalar::one());
        let mut row = Vec::new();
        for t in &tuples {
            let pt: BTreeMap<u32, SparseVec> =
                t.iter().enumerate().map(|(v, &b)| (v as u32, m.algebra.basis_vector(b))).collect();
            row.extend(evaluate(&mono, &m.algebra, &m.w, &pt).unwrap().to_dense());
        }
        rows.push(row);
    }
    dense_rank(rows)
}

fn dense_rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = m[rank][c].recip();
        for r in rank + 1..m.len() {
            if !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                for j in c..cols {
                    let d = &m[rank][j] * &f;
                    m[r][j] -= &d;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn codimension_examples() {
    let cases = [("ut2", 4, 18), ("c_eps", 3, 4), ("m1_D", 3, 5), ("ut2_delta", 1, 2)];
    for (name, n, c) in cases {
        let m = model(name);
        let r = codimension(&m.algebra, &m.w, n, &full()).unwrap();
        assert_eq!(r.c_n, c, "{name} n={n}");
        assert!(r.exact);
        assert_eq!(r.kernel_dim + r.c_n, r.ambient);
        assert_eq!(r.pivots.len(), c);
    }
}

#[test]
fn codimension_agrees_with_brute_force() {
    for name in ["ut2_D", "ut2_eps", "c_eps", "m1_delta", "m2_D"] {
        let m = model(name);
        for n in 1..=3 {
            let fast = codimension(&m.algebra, &m.w, n, &full()).unwrap().c_n;
            assert_eq!(fast, brute_codim(&m, n), "{name} n={n}");
        }
    }
}

#[test]
fn quotient_basis_monomials_are_printable() {
    let m = model("ut2_delta");
    let r = codimension(&m.algebra, &m.w, 1, &full()).unwrap();
    assert_eq!(r.pivot_monomials(&m.w), ["x1", "x1^delta"]);
}

#[test]
fn cap_refuses_oversized_enumeration() {
    let m = model("ut2");
    let err = codimension(&m.algebra, &m.w, 6, &full().with_cap(100)).unwrap_err();
    assert!(matches!(err, Error::PlanCapExceeded { .. }));
    assert!(err.to_string().contains("sampled"));
}

#[test]
fn sampled_runs_are_reproducible_lower_bounds() {
    let m = model("ut2_D");
    let a = codimension(&m.algebra, &m.w, 4, &EvaluationPlan::sampled(11)).unwrap();
    let b = codimension(&m.algebra, &m.w, 4, &EvaluationPlan::sampled(11)).unwrap();
    assert_eq!(a.c_n, b.c_n);
    assert_eq!(a.tuples_evaluated, b.tuples_evaluated);
    assert_eq!(a.mode, PlanMode::Sampled);
    assert!(a.c_n <= 48);
    let exact = codimension(&m.algebra, &m.w, 4, &full()).unwrap().c_n;
    assert!(a.c_n <= exact);
}

#[test]
fn canonical_mode_needs_a_grassmann_algebra() {
    let m = model("ut2");
    assert!(matches!(codimension(&m.algebra, &m.w, 2, &EvaluationPlan::canonical()), Err(Error::Plan(_))));
}

#[test]
fn identities() {
    let ut2 = model("ut2");
    assert!(is_identity(&ut2.algebra, &ut2.w, &p("[x1,x2][x3,x4]", &ut2)).unwrap());
    assert!(!is_identity(&ut2.algebra, &ut2.w, &p("[x,y]", &ut2)).unwrap());
    let d = model("ut2_delta");
    assert!(is_identity(&d.algebra, &d.w, &p("x^delta [y,z]", &d)).unwrap());
    let m1 = model("m1");
    assert!(is_identity(&m1.algebra, &m1.w, &p("x[y,z]", &m1)).unwrap());
    let m2 = model("m2");
    assert!(is_identity(&m2.algebra, &m2.w, &p("[x,y]z", &m2)).unwrap());
    // non-multilinear identities are checked through their polarizations
    assert!(is_identity(&m1.algebra, &m1.w, &p("x[y,x]", &m1)).unwrap());
}

#[test]
fn consequence_dimensions() {
    let m1 = model("m1");
    assert_eq!(consequence_space(&[p("x[y,z]", &m1)], &m1.w, 3).unwrap().dim(), 3);
    let c = model("c_eps");
    let s = parse_list("[x,y]; x^eps y^eps; x^{eps eps} - x^eps", &c.w).unwrap();
    assert_eq!(consequence_space(&s, &c.w, 3).unwrap().dim(), 44);
    let d = model("ut2_delta");
    let s = generator_set(&d.spec, &d.w).unwrap();
    assert_eq!(consequence_space(&s, &d.w, 2).unwrap().dim(), 3);
}

#[test]
fn consequence_space_is_the_kernel_when_generators_suffice() {
    for name in ["ut2_eps", "m2_D", "c_eps"] {
        let m = model(name);
        let s = generator_set(&m.spec, &m.w).unwrap();
        for n in 1..=3 {
            let space = consequence_space(&s, &m.w, n).unwrap();
            let r = codimension(&m.algebra, &m.w, n, &full()).unwrap();
            assert_eq!(space.dim(), r.kernel_dim, "{name} n={n}");
            // every consequence is annihilated by every evaluation functional
            for row in space.basis.rows() {
                for f in r.functionals().rows() {
                    assert!(row.dot(f).is_zero());
                }
            }
        }
    }
}

#[test]
fn membership() {
    let m = model("m1_D");
    let s = generator_set(&m.spec, &m.w).unwrap();
    assert!(in_ideal(&p("x^delta y - y^delta x", &m), &s, &m.w, 2).unwrap());
    let d = model("ut2_delta");
    let s = parse_list("x^delta y^delta; x^delta [y,z]; [x,y]^delta", &d.w).unwrap();
    assert!(in_ideal(&p("x^delta y [z,w]", &d), &s, &d.w, 4).unwrap());
    let all = generator_set(&d.spec, &d.w).unwrap();
    assert!(!in_ideal(&p("x1 x2", &d), &all, &d.w, 2).unwrap());
    assert!(matches!(in_ideal(&p("x1 x2", &d), &all, &d.w, 3), Err(Error::DegreeMismatch { .. })));
}

#[test]
fn sandwich_examples() {
    let d = model("ut2_delta");
    let s = parse_list("[x,y][z,w]; [x,y]^delta; x^delta [y,z]; x^delta y^delta; x^{delta delta}", &d.w).unwrap();
    let v = verify_generating_set(&d.algebra, &d.w, &s, 3, closed_form(&d.spec, 3), &full()).unwrap();
    assert!(v.equal);
    assert_eq!((v.lower, v.upper), (13, 13));
    assert_eq!(v.matches_closed_form, Some(true));
    assert_eq!(v.assumptions.len(), 1);

    let c = model("c_eps");
    let s = parse_list("[x,y]; x^eps y^eps; x^{eps eps} - x^eps", &c.w).unwrap();
    let v = verify_generating_set(&c.algebra, &c.w, &s, 4, None, &full()).unwrap();
    assert!(v.equal && v.lower == 5);

    let u = model("ut2_D");
    let s = parse_list(
        "[x,y]^eps - [x,y]; x^eps y^eps; x^{eps eps} - x^eps; x^{delta eps}; x^{eps delta} - x^delta",
        &u.w,
    )
    .unwrap();
    let v = verify_generating_set(&u.algebra, &u.w, &s, 3, None, &full()).unwrap();
    assert!(v.equal && v.lower == 20);

    let t = model("ut2");
    let s = parse_list("[x1,x2][x3,x4]", &t.w).unwrap();
    let v = verify_generating_set(&t.algebra, &t.w, &s, 5, None, &full()).unwrap();
    assert!(v.equal && v.lower == 50);
}

#[test]
fn too_few_generators_leave_a_gap() {
    let d = model("ut2_delta");
    let s = parse_list("[x,y][z,w]; x^delta y^delta", &d.w).unwrap();
    let v = verify_generating_set(&d.algebra, &d.w, &s, 3, None, &full()).unwrap();
    assert!(!v.equal);
    assert!(v.upper > v.lower);
    assert!(!v.stopped_early);
}

#[test]
fn a_non_identity_is_refuted_with_a_witness() {
    let t = model("ut2");
    let s = parse_list("[x,y]", &t.w).unwrap();
    match verify_generating_set(&t.algebra, &t.w, &s, 2, None, &full()) {
        Err(Error::NotAnIdentity { generator, tuple }) => {
            assert_eq!(generator, "x1 x2 - x2 x1");
            let pt: BTreeMap<u32, SparseVec> =
                tuple.iter().enumerate().map(|(v, &b)| (v as u32, t.algebra.basis_vector(b))).collect();
            assert!(!evaluate(&s[0], &t.algebra, &t.w, &pt).unwrap().is_zero());
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
}

#[test]
fn generator_hash_is_stable() {
    let h = generator_hash(&["a".into(), "b".into()]);
    // sha256 of "a\nb\n"
    assert_eq!(h, "911169ddaaf146aff539f58c26c489af3b892dff0fe283c1c264c65ae5aa59a2");
    assert_ne!(h, generator_hash(&["b".into(), "a".into()]));
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

#[test]
fn cocharacter_examples() {
    let t = model("ut2");
    let c = cocharacter(&t.algebra, &t.w, 3, &full()).unwrap();
    assert_eq!(c.multiplicities.get(&part("(3)")), 1);
    assert_eq!(c.multiplicities.get(&part("(2,1)")), 2);
    assert_eq!(c.multiplicities.get(&part("(1^3)")), 1);

    let d = model("ut2_delta");
    let c = cocharacter(&d.algebra, &d.w, 2, &full()).unwrap();
    assert_eq!(c.multiplicities.get(&part("(2)")), 3);
    assert_eq!(c.multiplicities.get(&part("(1^2)")), 2);

    let e = model("c_eps");
    let c = cocharacter(&e.algebra, &e.w, 4, &full()).unwrap();
    assert_eq!(c.multiplicities.to_string(), "(4):2, (3,1):1");

    let g = build_named(&"grassmann_der(7,1)".parse().unwrap()).unwrap();
    let c = cocharacter(&g.algebra, &g.w, 3, &EvaluationPlan::canonical()).unwrap();
    assert_eq!(c.multiplicities.to_string(), "(3):2, (2,1):2, (1^3):2");
    assert_eq!(c.c_n, 8);
}

#[test]
fn cocharacters_need_an_exact_plan() {
    let t = model("ut2");
    assert!(matches!(cocharacter(&t.algebra, &t.w, 3, &EvaluationPlan::sampled(1)), Err(Error::Plan(_))));
}
