use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

/// A vector stored as strictly increasing `(index, value)` pairs with no zero values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseVec {
    dim: usize,
    entries: Vec<(u32, Scalar)>,
}

impl SparseVec {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: Vec::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "unit index {index} out of range {dim}");
        SparseVec { dim, entries: vec![(index as u32, Scalar::one())] }
    }

    /// Collects arbitrary `(index, value)` pairs, summing repeats and dropping zeros.
    pub fn from_entries<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let mut raw: Vec<(u32, Scalar)> = Vec::new();
        for (i, v) in entries {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            raw.push((i as u32, v));
        }
        raw.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(u32, Scalar)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(SparseVec { dim, entries: out })
    }

    /// Builds from entries already sorted by strictly increasing index and nonzero.
    pub(crate) fn from_sorted_unchecked(dim: usize, entries: Vec<(u32, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(i, v)| (*i as usize) < dim && !v.is_zero()));
        SparseVec { dim, entries }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as u32, v.clone()))
            .collect();
        SparseVec { dim: values.len(), entries }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        let dense: Vec<Scalar> = values.iter().map(|&v| Scalar::from_int(v)).collect();
        Self::from_dense(&dense)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(i, v)| (*i as usize, v))
    }

    pub(crate) fn raw(&self) -> &[(u32, Scalar)] {
        &self.entries
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&(index as u32), |(i, _)| *i) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub(crate) fn get_ref(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&(index as u32), |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }

    /// First nonzero coordinate.
    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, v)| (*i as usize, v))
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, v) in self.iter() {
            out[i] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec {
            dim: self.dim,
            entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect(),
        }
    }

    pub fn scale_in_place(&mut self, c: &Scalar) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in self.entries.iter_mut() {
            *v *= c;
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        debug_assert_eq!(self.dim, other.dim);
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let mut v = a[i].1.clone();
                v.add_mul(c, &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec { dim: self.dim, entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(&-Scalar::one(), other)
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Scalar::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc.add_mul(&a[i].1, &b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim });
        }
        Ok(())
    }
}

/// A square or rectangular matrix stored by columns: column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![SparseVec::zero(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix { rows: n, cols: (0..n).map(|i| SparseVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Result<Self> {
        for c in &cols {
            c.check_dim(rows)?;
        }
        Ok(SparseMatrix { rows, cols })
    }

    /// Row-major dense input: `entries[r][c]` is the coefficient of basis vector `r` in the image of `c`.
    pub fn from_rows(entries: &[Vec<Scalar>]) -> Result<Self> {
        let rows = entries.len();
        let ncols = entries.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); ncols];
        for (r, row) in entries.iter().enumerate() {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, found: row.len() });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[c].push((r as u32, v.clone()));
                }
            }
        }
        Ok(SparseMatrix {
            rows,
            cols: cols.into_iter().map(|e| SparseVec::from_sorted_unchecked(rows, e)).collect(),
        })
    }

    pub fn from_int_rows(entries: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Scalar>> =
            entries.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r)
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![Scalar::zero(); self.cols.len()]; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.iter() {
                out[r][c] = v.clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        debug_assert_eq!(v.dim(), self.cols.len());
        let mut acc = SparseVec::zero(self.rows);
        for (j, c) in v.iter() {
            acc = acc.add_scaled(c, &self.cols[j]);
        }
        acc
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(&-Scalar::one(), other)
    }

    pub fn add_scaled(&self, c: &Scalar, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(c, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        SparseMatrix { rows: self.rows, cols: self.cols.iter().map(|a| a.scale(c)).collect() }
    }

    /// Commutator `self∘other − other∘self`.
    pub fn bracket(&self, other: &SparseMatrix) -> SparseMatrix {
        self.compose(other).sub(&other.compose(self))
    }

    /// Column-major flattening into a vector of length `rows * cols`.
    pub fn flatten(&self) -> SparseVec {
        let mut entries = Vec::new();
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.iter() {
                entries.push(((c * self.rows + r) as u32, v.clone()));
            }
        }
        SparseVec::from_sorted_unchecked(self.rows * self.cols.len(), entries)
    }

    pub fn unflatten(rows: usize, cols: usize, v: &SparseVec) -> SparseMatrix {
        let mut out = vec![Vec::new(); cols];
        for (i, x) in v.iter() {
            out[i / rows].push(((i % rows) as u32, x.clone()));
        }
        SparseMatrix {
            rows,
            cols: out.into_iter().map(|e| SparseVec::from_sorted_unchecked(rows, e)).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (j, c) in self.cols.iter().enumerate() {
            acc += &c.get(j);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_entries_merges_and_drops_zeros() {
        let v = SparseVec::from_entries(
            4,
            vec![(2, Scalar::from_int(1)), (0, Scalar::from_int(3)), (2, Scalar::from_int(-1))],
        )
        .unwrap();
        assert_eq!(v.nnz(), 1);
        assert_eq!(v.get(0), Scalar::from_int(3));
        assert!(SparseVec::from_entries(2, vec![(5, Scalar::one())]).is_err());
    }

    #[test]
    fn compose_applies_right_factor_first() {
        // a: e0 -> e1, b: e1 -> e0
        let a = SparseMatrix::from_int_rows(&[&[0, 0], &[1, 0]]).unwrap();
        let b = SparseMatrix::from_int_rows(&[&[0, 1], &[0, 0]]).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab.apply(&SparseVec::unit(2, 1)), SparseVec::unit(2, 1));
        assert!(ab.apply(&SparseVec::unit(2, 0)).is_zero());
        let flat = ab.flatten();
        assert_eq!(SparseMatrix::unflatten(2, 2, &flat), ab);
    }
}
