use crate::error::{Error, Result};
use crate::exactla::{RankAccumulator, Scalar, SparseMatrix, SparseVec};
use crate::zoo::grassmann::GrassmannMonomial;

/// How basis elements multiply.
#[derive(Clone, Debug)]
pub enum Multiplication {
    /// `table[i * dim + j]` holds the coordinates of `b_i · b_j`.
    Table(Vec<SparseVec>),
    /// Truncated Grassmann algebra on `generators` anticommuting generators; basis
    /// element `k` is the monomial whose support is the bitmask `k`.
    Grassmann { generators: usize },
}

/// A named derivation together with its matrix (column `j` is the image of `b_j`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub name: String,
    pub matrix: SparseMatrix,
}

/// A finite-dimensional associative algebra with a list of derivations acting on it.
#[derive(Clone, Debug)]
pub struct FDAlgebra {
    dim: usize,
    basis_names: Vec<String>,
    mult: Multiplication,
    unit: Option<SparseVec>,
    derivations: Vec<Derivation>,
    /// `brackets[i][j]` expresses `[γ_i, γ_j]` over the derivation list.
    brackets: Option<Vec<Vec<SparseVec>>>,
    /// Number of leading Grassmann generators reserved for inner derivations.
    reserved: usize,
}

impl FDAlgebra {
    pub fn new(
        basis_names: Vec<String>,
        mult: Multiplication,
        unit: Option<SparseVec>,
        derivations: Vec<Derivation>,
    ) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::MalformedAlgebra("dimension must be positive".into()));
        }
        match &mult {
            Multiplication::Table(t) => {
                if t.len() != dim * dim {
                    return Err(Error::MalformedAlgebra(format!(
                        "{} structure constants for dimension {dim}",
                        t.len()
                    )));
                }
                for v in t {
                    v.check_dim(dim)?;
                }
            }
            Multiplication::Grassmann { generators } => {
                if 1usize.checked_shl(*generators as u32) != Some(dim) || *generators > 20 {
                    return Err(Error::MalformedAlgebra(format!(
                        "Grassmann algebra on {generators} generators needs {} basis names",
                        1u64 << (*generators).min(63)
                    )));
                }
            }
        }
        if let Some(u) = &unit {
            u.check_dim(dim)?;
        }
        for d in &derivations {
            if d.matrix.nrows() != dim || d.matrix.ncols() != dim {
                return Err(Error::MalformedAlgebra(format!(
                    "derivation {} is not a {dim}×{dim} matrix",
                    d.name
                )));
            }
        }
        Ok(FDAlgebra { dim, basis_names, mult, unit, derivations, brackets: None, reserved: 0 })
    }

    pub fn with_brackets(mut self, brackets: Vec<Vec<SparseVec>>) -> Result<Self> {
        let g = self.derivations.len();
        if brackets.len() != g || brackets.iter().any(|r| r.len() != g) {
            return Err(Error::MalformedAlgebra("bracket table must be g×g".into()));
        }
        for v in brackets.iter().flatten() {
            v.check_dim(g)?;
        }
        self.brackets = Some(brackets);
        Ok(self)
    }

    pub(crate) fn with_reserved_generators(mut self, reserved: usize) -> Self {
        self.reserved = reserved;
        self
    }

    /// The same algebra with a different derivation list (the bracket table is dropped).
    pub fn with_derivations(&self, derivations: Vec<Derivation>) -> Result<Self> {
        let mut out = FDAlgebra::new(
            self.basis_names.clone(),
            self.mult.clone(),
            self.unit.clone(),
            derivations,
        )?;
        out.reserved = self.reserved;
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn multiplication(&self) -> &Multiplication {
        &self.mult
    }

    pub fn unit(&self) -> Option<&SparseVec> {
        self.unit.as_ref()
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    pub fn brackets(&self) -> Option<&Vec<Vec<SparseVec>>> {
        self.brackets.as_ref()
    }

    /// `(generators, reserved)` when the algebra is a truncated Grassmann algebra.
    pub fn grassmann_shape(&self) -> Option<(usize, usize)> {
        match self.mult {
            Multiplication::Grassmann { generators } => Some((generators, self.reserved)),
            Multiplication::Table(_) => None,
        }
    }

    pub fn basis_vector(&self, i: usize) -> SparseVec {
        SparseVec::unit(self.dim, i)
    }

    /// Coordinates of `b_i · b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> SparseVec {
        match &self.mult {
            Multiplication::Table(t) => t[i * self.dim + j].clone(),
            Multiplication::Grassmann { .. } => {
                match GrassmannMonomial(i as u64).mul(GrassmannMonomial(j as u64)) {
                    None => SparseVec::zero(self.dim),
                    Some((negative, k)) => {
                        let c = if negative { -Scalar::one() } else { Scalar::one() };
                        SparseVec::from_sorted_unchecked(self.dim, vec![(k.0 as u32, c)])
                    }
                }
            }
        }
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        if a.is_zero() || b.is_zero() {
            return SparseVec::zero(self.dim);
        }
        let mut entries: Vec<(usize, Scalar)> = Vec::new();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let xy = x * y;
                match &self.mult {
                    Multiplication::Table(t) => {
                        for (k, c) in t[i * self.dim + j].iter() {
                            entries.push((k, &xy * c));
                        }
                    }
                    Multiplication::Grassmann { .. } => {
                        if let Some((neg, k)) =
                            GrassmannMonomial(i as u64).mul(GrassmannMonomial(j as u64))
                        {
                            entries.push((k.0 as usize, if neg { -xy } else { xy }));
                        }
                    }
                }
            }
        }
        if entries.len() == 1 {
            let (k, v) = entries.pop().unwrap();
            if v.is_zero() {
                return SparseVec::zero(self.dim);
            }
            return SparseVec::from_sorted_unchecked(self.dim, vec![(k as u32, v)]);
        }
        SparseVec::from_entries(self.dim, entries).expect("product coordinates in range")
    }

    pub fn commutator(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// Checks associativity, the Leibniz rule for every derivation, the unit and the
    /// bracket table, reporting the first witnessing basis indices.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        let products: Vec<SparseVec> =
            (0..n * n).map(|ij| self.basis_product(ij / n, ij % n)).collect();
        let prod = |i: usize, j: usize| &products[i * n + j];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(prod(i, j), &self.basis_vector(k));
                    let right = self.mul(&self.basis_vector(i), prod(j, k));
                    if left != right {
                        return Err(Error::Associativity(i, j, k));
                    }
                }
            }
        }
        self.validate_derivations_with(&prod)?;
        if let Some(u) = &self.unit {
            for i in 0..n {
                let b = self.basis_vector(i);
                if self.mul(u, &b) != b || self.mul(&b, u) != b {
                    return Err(Error::Unit(i));
                }
            }
        }
        self.validate_brackets()
    }

    /// The Leibniz and bracket part of [`validate`](Self::validate), for algebras whose
    /// associativity holds by construction.
    pub fn validate_derivations(&self) -> Result<()> {
        let n = self.dim;
        let prod = |i: usize, j: usize| self.basis_product(i, j);
        for d in &self.derivations {
            for i in 0..n {
                for j in 0..n {
                    if !is_leibniz_on(self, &d.matrix, i, j, &prod(i, j)) {
                        return Err(Error::Leibniz { name: d.name.clone(), i, j });
                    }
                }
            }
        }
        self.validate_brackets()
    }

    fn validate_derivations_with<'a, F>(&self, prod: &F) -> Result<()>
    where
        F: Fn(usize, usize) -> &'a SparseVec,
    {
        for d in &self.derivations {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    if !is_leibniz_on(self, &d.matrix, i, j, prod(i, j)) {
                        return Err(Error::Leibniz { name: d.name.clone(), i, j });
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_brackets(&self) -> Result<()> {
        let Some(table) = &self.brackets else {
            return Ok(());
        };
        for (i, row) in table.iter().enumerate() {
            for (j, coeffs) in row.iter().enumerate() {
                let lhs = self.derivations[i].matrix.bracket(&self.derivations[j].matrix);
                let mut rhs = SparseMatrix::zero(self.dim, self.dim);
                for (k, c) in coeffs.iter() {
                    rhs = rhs.add_scaled(c, &self.derivations[k].matrix);
                }
                if lhs != rhs {
                    return Err(Error::BracketMismatch { i, j });
                }
            }
        }
        Ok(())
    }

    /// Whether `m` satisfies the Leibniz rule on every pair of basis elements.
    pub fn is_derivation(&self, m: &SparseMatrix) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| is_leibniz_on(self, m, i, j, &self.basis_product(i, j)))
        })
    }

    /// Matrix of `b ↦ ab − ba`.
    pub fn inner_derivation(&self, a: &SparseVec) -> Result<SparseMatrix> {
        a.check_dim(self.dim)?;
        let cols = (0..self.dim).map(|j| self.commutator(a, &self.basis_vector(j))).collect();
        SparseMatrix::from_columns(self.dim, cols)
    }

    /// A basis of the Lie algebra of all derivations, from the linear system
    /// `D(b_i b_j) = D(b_i) b_j + b_i D(b_j)` in the `dim²` matrix entries.
    pub fn derivation_space(&self) -> Vec<SparseMatrix> {
        let n = self.dim;
        // unknown d[k][l] (coefficient of b_k in D(b_l)) sits at index l * n + k
        let var = |k: usize, l: usize| l * n + k;
        let mut eqs = RankAccumulator::new(n * n);
        for i in 0..n {
            for j in 0..n {
                let bij = self.basis_product(i, j);
                let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
                for (s, c) in bij.iter() {
                    for (t, row) in rows.iter_mut().enumerate() {
                        row.push((var(t, s), c.clone()));
                    }
                }
                for k in 0..n {
                    for (t, c) in self.basis_product(k, j).iter() {
                        rows[t].push((var(k, i), -c.clone()));
                    }
                    for (t, c) in self.basis_product(i, k).iter() {
                        rows[t].push((var(k, j), -c.clone()));
                    }
                }
                for row in rows {
                    let v = SparseVec::from_entries(n * n, row).expect("in range");
                    if !v.is_zero() {
                        eqs.insert(&v).expect("consistent dimension");
                    }
                }
            }
        }
        eqs.nullspace().iter().map(|v| SparseMatrix::unflatten(n, n, v)).collect()
    }
}

fn is_leibniz_on(a: &FDAlgebra, m: &SparseMatrix, i: usize, j: usize, bij: &SparseVec) -> bool {
    let lhs = m.apply(bij);
    let rhs = a
        .mul(m.column(i), &a.basis_vector(j))
        .add(&a.mul(&a.basis_vector(i), m.column(j)));
    lhs == rhs
}

/// Dimensions describing a finite-dimensional Lie algebra of matrices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LieStructure {
    pub dim: usize,
    pub derived_dim: usize,
    pub abelian: bool,
    /// The derived algebra is abelian.
    pub metabelian: bool,
}

/// Analyses the span of `basis` under the commutator bracket.
pub fn lie_structure(basis: &[SparseMatrix]) -> LieStructure {
    let Some(first) = basis.first() else {
        return LieStructure { dim: 0, derived_dim: 0, abelian: true, metabelian: true };
    };
    let (r, c) = (first.nrows(), first.ncols());
    let mut span = RankAccumulator::new(r * c);
    for m in basis {
        span.insert(&m.flatten()).expect("same shape");
    }
    let mut derived = RankAccumulator::new(r * c);
    let mut derived_basis = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            let br = a.bracket(b);
            if derived.insert(&br.flatten()).expect("same shape") {
                derived_basis.push(br);
            }
        }
    }
    let metabelian = derived_basis
        .iter()
        .enumerate()
        .all(|(i, a)| derived_basis[i + 1..].iter().all(|b| a.bracket(b).is_zero()));
    LieStructure {
        dim: span.rank(),
        derived_dim: derived.rank(),
        abelian: derived.rank() == 0,
        metabelian,
    }
}
