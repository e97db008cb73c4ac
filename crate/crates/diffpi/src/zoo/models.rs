use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::grassmann::grassmann_algebra;
use crate::error::{Error, Result};
use crate::exactla::{Scalar, SparseMatrix, SparseVec};
use crate::fdalg::{operator_closure, Derivation, FDAlgebra, Multiplication, OperatorBasis};

/// Which derivations act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Action {
    Trivial,
    Eps,
    Delta,
    /// Both `ε` and `δ`.
    Both,
}

impl Action {
    fn suffix(self) -> &'static str {
        match self {
            Action::Trivial => "",
            Action::Eps => "_eps",
            Action::Delta => "_delta",
            Action::Both => "_D",
        }
    }
}

/// A named model from the zoo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelSpec {
    Ut2(Action),
    /// `C = F(e11 + e22) ⊕ F e12` with `ε`.
    CEps,
    M1(Action),
    M2(Action),
    /// Grassmann algebra truncated to `m` generators.
    Grassmann { m: usize },
    /// Truncated Grassmann algebra with `t` inner derivations.
    GrassmannDer { m: usize, t: usize },
}

impl ModelSpec {
    /// The fifteen families, with Grassmann truncations sized for degree `n`.
    pub fn all(n: usize) -> Vec<ModelSpec> {
        use Action::*;
        let mut out = Vec::new();
        for a in [Trivial, Eps, Delta, Both] {
            out.push(ModelSpec::Ut2(a));
        }
        out.push(ModelSpec::CEps);
        for a in [Trivial, Eps, Delta, Both] {
            out.push(ModelSpec::M1(a));
        }
        for a in [Trivial, Eps, Delta, Both] {
            out.push(ModelSpec::M2(a));
        }
        out.push(ModelSpec::Grassmann { m: default_truncation(n, 0) });
        out.push(ModelSpec::GrassmannDer { m: default_truncation(n, 1), t: 1 });
        out
    }

    /// Family name without parameters (`ut2_delta`, `grassmann_der`, …).
    pub fn family(&self) -> String {
        match self {
            ModelSpec::Ut2(a) => format!("ut2{}", a.suffix()),
            ModelSpec::CEps => "c_eps".into(),
            ModelSpec::M1(a) => format!("m1{}", a.suffix()),
            ModelSpec::M2(a) => format!("m2{}", a.suffix()),
            ModelSpec::Grassmann { .. } => "grassmann".into(),
            ModelSpec::GrassmannDer { .. } => "grassmann_der".into(),
        }
    }

    /// Parses a family name; Grassmann truncation and derivation count come from `m`/`t`,
    /// or from a parameter list such as `grassmann_der(9,2)`.
    pub fn parse_with(name: &str, m: Option<usize>, t: Option<usize>) -> Result<ModelSpec> {
        let bad = || Error::InvalidModel(name.to_string());
        let (base, params) = match name.find('(') {
            Some(i) if name.ends_with(')') => {
                let inner = &name[i + 1..name.len() - 1];
                let params: Vec<usize> = inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<_>>()?;
                (&name[..i], params)
            }
            _ => (name, Vec::new()),
        };
        let simple = |spec: ModelSpec| if params.is_empty() { Ok(spec) } else { Err(bad()) };
        use Action::*;
        match base {
            "ut2" => simple(ModelSpec::Ut2(Trivial)),
            "ut2_eps" => simple(ModelSpec::Ut2(Eps)),
            "ut2_delta" => simple(ModelSpec::Ut2(Delta)),
            "ut2_D" => simple(ModelSpec::Ut2(Both)),
            "c_eps" => simple(ModelSpec::CEps),
            "m1" => simple(ModelSpec::M1(Trivial)),
            "m1_eps" => simple(ModelSpec::M1(Eps)),
            "m1_delta" => simple(ModelSpec::M1(Delta)),
            "m1_D" => simple(ModelSpec::M1(Both)),
            "m2" => simple(ModelSpec::M2(Trivial)),
            "m2_eps" => simple(ModelSpec::M2(Eps)),
            "m2_delta" => simple(ModelSpec::M2(Delta)),
            "m2_D" => simple(ModelSpec::M2(Both)),
            "grassmann" => {
                let m = params.first().copied().or(m).ok_or_else(|| {
                    Error::InvalidModel("grassmann needs a truncation m".into())
                })?;
                if params.len() > 1 {
                    return Err(bad());
                }
                Ok(ModelSpec::Grassmann { m })
            }
            "grassmann_der" => {
                let m = params.first().copied().or(m);
                let t = params.get(1).copied().or(t).unwrap_or(1);
                let m = m.ok_or_else(|| {
                    Error::InvalidModel("grassmann_der needs a truncation m".into())
                })?;
                if params.len() > 2 || t == 0 {
                    return Err(bad());
                }
                Ok(ModelSpec::GrassmannDer { m, t })
            }
            _ => Err(bad()),
        }
    }

    pub fn is_grassmann(&self) -> bool {
        matches!(self, ModelSpec::Grassmann { .. } | ModelSpec::GrassmannDer { .. })
    }

    /// `(m, t)` for Grassmann models.
    pub fn grassmann_params(&self) -> Option<(usize, usize)> {
        match *self {
            ModelSpec::Grassmann { m } => Some((m, 0)),
            ModelSpec::GrassmannDer { m, t } => Some((m, t)),
            _ => None,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Grassmann { m } => write!(f, "grassmann({m})"),
            ModelSpec::GrassmannDer { m, t } => write!(f, "grassmann_der({m},{t})"),
            _ => f.write_str(&self.family()),
        }
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelSpec::parse_with(s, None, None)
    }
}

/// Truncation used by default for degree-`n` work with `t` inner derivations.
pub fn default_truncation(n: usize, t: usize) -> usize {
    2 * n + t
}

/// A built model: the algebra with its derivations and the operator algebra they generate.
#[derive(Clone, Debug)]
pub struct Model {
    pub spec: ModelSpec,
    pub algebra: FDAlgebra,
    pub w: OperatorBasis,
}

fn q(n: i64) -> Scalar {
    Scalar::from_int(n)
}

fn table(dim: usize, products: &[(usize, usize, usize)]) -> Vec<SparseVec> {
    let mut t = vec![SparseVec::zero(dim); dim * dim];
    for &(i, j, k) in products {
        t[i * dim + j] = SparseVec::unit(dim, k);
    }
    t
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn derivation(name: &str, m: SparseMatrix) -> Derivation {
    Derivation { name: name.into(), matrix: m }
}

/// Keeps the derivations the action asks for; `[ε, δ] = δ` is declared when both act.
fn with_action(base: FDAlgebra, eps: SparseMatrix, delta: SparseMatrix, action: Action) -> Result<FDAlgebra> {
    let a = match action {
        Action::Trivial => base,
        Action::Eps => base.with_derivations(vec![derivation("eps", eps)])?,
        Action::Delta => base.with_derivations(vec![derivation("delta", delta)])?,
        Action::Both => base
            .with_derivations(vec![derivation("eps", eps), derivation("delta", delta)])?
            .with_brackets(vec![
                vec![SparseVec::zero(2), SparseVec::unit(2, 1)],
                vec![SparseVec::unit(2, 1).scale(&q(-1)), SparseVec::zero(2)],
            ])?,
    };
    Ok(a)
}

/// Upper triangular 2×2 matrices, basis `e11, e12, e22`, with `ε = ½ ad(e11 − e22)` and
/// `δ = ½ ad e12`.
fn ut2(action: Action) -> Result<FDAlgebra> {
    let (e11, e12, e22) = (0, 1, 2);
    let base = FDAlgebra::new(
        names(&["e11", "e12", "e22"]),
        Multiplication::Table(table(
            3,
            &[(e11, e11, e11), (e11, e12, e12), (e12, e22, e12), (e22, e22, e22)],
        )),
        Some(SparseVec::from_ints(&[1, 0, 1])),
        Vec::new(),
    )?;
    let half = Scalar::new(1, 2);
    let eps = base.inner_derivation(&SparseVec::from_ints(&[1, 0, -1]))?.scale(&half);
    let delta = base.inner_derivation(&SparseVec::unit(3, e12))?.scale(&half);
    with_action(base, eps, delta, action)
}

/// `C = F(e11 + e22) ⊕ F e12` with `ε(α(e11 + e22) + β e12) = β e12`.
fn c_eps() -> Result<FDAlgebra> {
    let base = FDAlgebra::new(
        names(&["e11+e22", "e12"]),
        Multiplication::Table(table(2, &[(0, 0, 0), (0, 1, 1), (1, 0, 1)])),
        Some(SparseVec::unit(2, 0)),
        Vec::new(),
    )?;
    let eps = SparseMatrix::from_int_rows(&[&[0, 0], &[0, 1]])?;
    base.with_derivations(vec![derivation("eps", eps)])
}

/// `M1 = F e22 ⊕ F e12` with `ε(α e22 + β e12) = β e12` and `δ(α e22 + β e12) = α e12`.
fn m1(action: Action) -> Result<FDAlgebra> {
    let base = FDAlgebra::new(
        names(&["e22", "e12"]),
        Multiplication::Table(table(2, &[(0, 0, 0), (1, 0, 1)])),
        None,
        Vec::new(),
    )?;
    let eps = SparseMatrix::from_int_rows(&[&[0, 0], &[0, 1]])?;
    let delta = SparseMatrix::from_int_rows(&[&[0, 0], &[1, 0]])?;
    with_action(base, eps, delta, action)
}

/// `M2 = F e11 ⊕ F e12` with `ε(α e11 + β e12) = β e12` and `δ(α e11 + β e12) = α e12`.
fn m2(action: Action) -> Result<FDAlgebra> {
    let base = FDAlgebra::new(
        names(&["e11", "e12"]),
        Multiplication::Table(table(2, &[(0, 0, 0), (0, 1, 1)])),
        None,
        Vec::new(),
    )?;
    let eps = SparseMatrix::from_int_rows(&[&[0, 0], &[0, 1]])?;
    let delta = SparseMatrix::from_int_rows(&[&[0, 0], &[1, 0]])?;
    with_action(base, eps, delta, action)
}

/// Builds, validates and closes a named model.
pub fn build_named(spec: &ModelSpec) -> Result<Model> {
    let algebra = match *spec {
        ModelSpec::Ut2(a) => ut2(a)?,
        ModelSpec::CEps => c_eps()?,
        ModelSpec::M1(a) => m1(a)?,
        ModelSpec::M2(a) => m2(a)?,
        ModelSpec::Grassmann { m } => grassmann_algebra(m, 0)?,
        ModelSpec::GrassmannDer { m, t } => {
            if t == 0 {
                return Err(Error::InvalidModel("grassmann_der needs t ≥ 1".into()));
            }
            grassmann_algebra(m, t)?
        }
    };
    if !spec.is_grassmann() {
        algebra.validate()?;
    }
    let w = operator_closure(&algebra);
    Ok(Model { spec: *spec, algebra, w })
}

/// One line of `zoo list`.
#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub name: String,
    pub dim: usize,
    pub dim_w: usize,
    pub derivations: Vec<String>,
    pub w_labels: Vec<String>,
}

/// Summaries of the fifteen families, Grassmann ones at the truncation for degree `n`.
pub fn list_models(n: usize) -> Result<Vec<ModelSummary>> {
    ModelSpec::all(n)
        .iter()
        .map(|spec| {
            let m = build_named(spec)?;
            Ok(ModelSummary {
                name: spec.to_string(),
                dim: m.algebra.dim(),
                dim_w: m.w.dim(),
                derivations: m.w.generator_names().to_vec(),
                w_labels: m.w.labels().to_vec(),
            })
        })
        .collect()
}
