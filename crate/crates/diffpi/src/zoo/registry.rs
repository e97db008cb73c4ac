//! Closed forms, generating sets and multiplicity rules attached to each model family.

use std::collections::BTreeMap;

use super::grassmann::{binomial, grassmann_der_codim};
use super::models::{Action, ModelSpec};
use crate::diffpoly::{parse_polynomial, DiffPolynomial};
use crate::error::Result;
use crate::fdalg::OperatorBasis;
use crate::repsn::{MultiplicityMap, Partition};

/// Expected `c_n` for the model.
pub fn closed_form(spec: &ModelSpec, n: usize) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let n64 = n as u64;
    let p = 1u64 << (n - 1);
    Some(match spec {
        ModelSpec::Ut2(Action::Trivial) => p * n64 + 2 - 2 * p,
        ModelSpec::Ut2(Action::Eps | Action::Delta) => p * n64 + 1,
        ModelSpec::Ut2(Action::Both) => p * (n64 + 2),
        ModelSpec::CEps => n64 + 1,
        ModelSpec::M1(a) | ModelSpec::M2(a) => match a {
            Action::Trivial => n64,
            Action::Eps | Action::Delta => n64 + 1,
            Action::Both => n64 + 2,
        },
        ModelSpec::Grassmann { .. } => p,
        ModelSpec::GrassmannDer { t, .. } => grassmann_der_codim(n, *t),
    })
}

/// Text of the generating set of the model's identities.
pub fn generator_texts(spec: &ModelSpec) -> Vec<String> {
    const EPS_REL: &str = "x^{eps eps} - x^eps";
    const D_REL: [&str; 2] = ["x^{delta eps}", "x^{eps delta} - x^delta"];
    let list: Vec<&str> = match spec {
        ModelSpec::Ut2(Action::Trivial) => vec!["[x1,x2][x3,x4]"],
        ModelSpec::Ut2(Action::Eps) => vec!["[x,y]^eps - [x,y]", "x^eps y^eps", EPS_REL],
        ModelSpec::Ut2(Action::Delta) => vec![
            "[x,y][z,w]",
            "[x,y]^delta",
            "x^delta [y,z]",
            "x^delta y^delta",
            "x^{delta delta}",
        ],
        ModelSpec::Ut2(Action::Both) => {
            vec!["[x,y]^eps - [x,y]", "x^eps y^eps", EPS_REL, D_REL[0], D_REL[1]]
        }
        ModelSpec::CEps => vec!["[x,y]", "x^eps y^eps", EPS_REL],
        ModelSpec::M1(Action::Trivial) => vec!["x[y,z]"],
        ModelSpec::M1(Action::Eps) => vec!["x y^eps", "x^eps y - y^eps x - [x,y]", EPS_REL],
        ModelSpec::M1(Action::Delta) => {
            vec!["x[y,z]", "x^delta y - y^delta x", "x y^delta", "x^{delta delta}"]
        }
        ModelSpec::M1(Action::Both) => {
            vec!["x y^eps", "x^eps y - y^eps x - [x,y]", EPS_REL, D_REL[0], D_REL[1]]
        }
        ModelSpec::M2(Action::Trivial) => vec!["[x,y]z"],
        ModelSpec::M2(Action::Eps) => vec!["x^eps y", "x y^eps - y x^eps - [x,y]", EPS_REL],
        ModelSpec::M2(Action::Delta) => {
            vec!["[x,y]z", "x y^delta - y x^delta", "x^delta y", "x^{delta delta}"]
        }
        ModelSpec::M2(Action::Both) => {
            vec!["x^eps y", "x y^eps - y x^eps - [x,y]", EPS_REL, D_REL[0], D_REL[1]]
        }
        ModelSpec::Grassmann { .. } => vec!["[x,y,z]"],
        ModelSpec::GrassmannDer { t, .. } => {
            let mut out = vec!["[x,y,z]".to_string()];
            for i in 1..=*t {
                out.push(format!("[x^delta{i},y]"));
            }
            for i in 1..=*t {
                for j in 1..=*t {
                    out.push(format!("x^{{delta{i} delta{j}}}"));
                }
            }
            return out;
        }
    };
    list.into_iter().map(String::from).collect()
}

/// The generating set parsed against `w`. Relations that `w` already enforces (such as
/// `x^{ε²} − x^ε` when `ε∘ε = ε`) come out as zero polynomials.
pub fn generator_set(spec: &ModelSpec, w: &OperatorBasis) -> Result<Vec<DiffPolynomial>> {
    generator_texts(spec).iter().map(|g| parse_polynomial(g, w)).collect()
}

/// Expected cocharacter multiplicities in degree `n` (zero entries omitted).
pub fn expected_multiplicities(spec: &ModelSpec, n: usize) -> Option<MultiplicityMap> {
    if n == 0 {
        return None;
    }
    let mut out: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut set = |parts: Vec<usize>, m: u64| {
        if m > 0 {
            out.insert(Partition::new(parts).expect("valid partition"), m);
        }
    };
    // (first-row multiplicity, factor for (p+q,p), factor for (p+q,p,1))
    let ut2_rule = |row: u64, two: u64, set: &mut dyn FnMut(Vec<usize>, u64)| {
        set(vec![n], row);
        for p in 1..=n / 2 {
            let q = n - 2 * p;
            set(vec![p + q, p], two * (q as u64 + 1));
        }
        for p in 1..=(n - 1) / 2 {
            let q = n - 1 - 2 * p;
            set(vec![p + q, p, 1], q as u64 + 1);
        }
    };
    let n64 = n as u64;
    // a χ_(n) + χ_(n−1,1)
    let linear_rule = |a: u64, set: &mut dyn FnMut(Vec<usize>, u64)| {
        set(vec![n], a);
        if n >= 2 {
            set(vec![n - 1, 1], 1);
        }
    };
    match spec {
        ModelSpec::Ut2(Action::Trivial) => ut2_rule(1, 1, &mut set),
        ModelSpec::Ut2(Action::Eps | Action::Delta) => ut2_rule(n64 + 1, 2, &mut set),
        ModelSpec::Ut2(Action::Both) => ut2_rule(2 * n64 + 1, 3, &mut set),
        ModelSpec::CEps => linear_rule(2, &mut set),
        ModelSpec::M1(a) | ModelSpec::M2(a) => match a {
            Action::Trivial => linear_rule(1, &mut set),
            Action::Eps | Action::Delta => linear_rule(2, &mut set),
            Action::Both => linear_rule(3, &mut set),
        },
        ModelSpec::Grassmann { .. } => {
            for r in 1..=n {
                set(hook(n, r), 1);
            }
        }
        ModelSpec::GrassmannDer { t, .. } => {
            for r in 1..=n {
                let m = if r < *t { (0..=r).map(|i| binomial(*t, i)).sum() } else { 1u64 << t };
                set(hook(n, r), m);
            }
        }
    }
    Some(MultiplicityMap::from_map(out))
}

/// `(n − r + 1, 1^{r−1})`.
fn hook(n: usize, r: usize) -> Vec<usize> {
    let mut parts = vec![n - r + 1];
    parts.extend(std::iter::repeat(1).take(r - 1));
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_tables() {
        let vals = |spec: ModelSpec, ns: std::ops::RangeInclusive<usize>| -> Vec<u64> {
            ns.map(|n| closed_form(&spec, n).unwrap()).collect()
        };
        assert_eq!(vals(ModelSpec::Ut2(Action::Eps), 1..=5), [2, 5, 13, 33, 81]);
        assert_eq!(vals(ModelSpec::Ut2(Action::Trivial), 1..=6), [1, 2, 6, 18, 50, 130]);
        assert_eq!(vals(ModelSpec::M1(Action::Trivial), 1..=6), [1, 2, 3, 4, 5, 6]);
        assert_eq!(vals(ModelSpec::Ut2(Action::Both), 3..=3), [20]);
    }

    #[test]
    fn multiplicities_sum_to_codimension() {
        for spec in ModelSpec::all(4) {
            for n in 1..=6 {
                let m = expected_multiplicities(&spec, n).unwrap();
                assert_eq!(m.weighted_total(), closed_form(&spec, n).unwrap(), "{spec} n={n}");
            }
        }
        let t2 = ModelSpec::GrassmannDer { m: 8, t: 2 };
        for n in 1..=5 {
            let m = expected_multiplicities(&t2, n).unwrap();
            assert_eq!(m.weighted_total(), closed_form(&t2, n).unwrap(), "t=2 n={n}");
        }
    }
}
