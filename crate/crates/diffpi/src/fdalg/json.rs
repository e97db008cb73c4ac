use serde::{Deserialize, Serialize};

use super::{Derivation, FDAlgebra, Multiplication};
use crate::error::{Error, Result};
use crate::exactla::{Scalar, SparseMatrix, SparseVec};

/// On-disk form of an algebra with derivations. All numbers are rational strings.
///
/// `mult[i][j]` lists the coordinates of `b_i·b_j`; a derivation `matrix[r][c]` is the
/// coefficient of `b_r` in the image of `b_c`; `brackets[i][j]` lists the coefficients of
/// `[γ_i, γ_j]` over the derivations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub unit: Option<Vec<Scalar>>,
    pub mult: Vec<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub derivations: Vec<DerivationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brackets: Option<Vec<Vec<Vec<Scalar>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationJson {
    pub name: String,
    pub matrix: Vec<Vec<Scalar>>,
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedAlgebra(msg.into())
}

impl AlgebraJson {
    /// Builds and validates the algebra.
    pub fn to_algebra(&self) -> Result<FDAlgebra> {
        let n = self.dim;
        if self.basis.len() != n {
            return Err(malformed(format!("{} basis names for dimension {n}", self.basis.len())));
        }
        if self.mult.len() != n || self.mult.iter().any(|r| r.len() != n) {
            return Err(malformed("mult must be a dim×dim table of coordinate vectors"));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in &self.mult {
            for coords in row {
                if coords.len() != n {
                    return Err(malformed("product coordinates must have length dim"));
                }
                table.push(SparseVec::from_dense(coords));
            }
        }
        let unit = match &self.unit {
            None => None,
            Some(u) if u.len() == n => Some(SparseVec::from_dense(u)),
            Some(_) => return Err(malformed("unit must have length dim")),
        };
        let mut derivations = Vec::new();
        for d in &self.derivations {
            if d.matrix.len() != n || d.matrix.iter().any(|r| r.len() != n) {
                return Err(malformed(format!("derivation {} must be dim×dim", d.name)));
            }
            derivations.push(Derivation {
                name: d.name.clone(),
                matrix: SparseMatrix::from_rows(&d.matrix)?,
            });
        }
        let g = derivations.len();
        let mut a = FDAlgebra::new(self.basis.clone(), Multiplication::Table(table), unit, derivations)?;
        if let Some(br) = &self.brackets {
            if br.len() != g || br.iter().any(|r| r.len() != g || r.iter().any(|c| c.len() != g)) {
                return Err(malformed("brackets must be g×g×g"));
            }
            let table = br
                .iter()
                .map(|r| r.iter().map(|c| SparseVec::from_dense(c)).collect())
                .collect();
            a = a.with_brackets(table)?;
        }
        a.validate()?;
        Ok(a)
    }

    pub fn from_algebra(a: &FDAlgebra) -> Self {
        let n = a.dim();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| a.basis_product(i, j).to_dense()).collect())
            .collect();
        AlgebraJson {
            dim: n,
            basis: a.basis_names().to_vec(),
            unit: a.unit().map(SparseVec::to_dense),
            mult,
            derivations: a
                .derivations()
                .iter()
                .map(|d| DerivationJson { name: d.name.clone(), matrix: d.matrix.to_rows() })
                .collect(),
            brackets: a
                .brackets()
                .map(|t| t.iter().map(|r| r.iter().map(SparseVec::to_dense).collect()).collect()),
        }
    }

    pub fn parse(text: &str) -> Result<FDAlgebra> {
        let raw: AlgebraJson = serde_json::from_str(text)?;
        raw.to_algebra()
    }
}
