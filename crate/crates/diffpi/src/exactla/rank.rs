use super::{Scalar, SparseVec};
use crate::error::{Error, Result};

const NO_ROW: u32 = u32::MAX;

/// Incremental reduced row echelon form over streamed vectors.
///
/// Every stored row has leading coefficient 1 at its pivot, and no stored row
/// has a nonzero entry in the pivot column of another row. The pivot of an
/// inserted vector is its first nonzero coordinate after reduction, so the set
/// of pivots is the lexicographically first basis of the row space's column
/// support in the ambient coordinate order.
#[derive(Clone, Debug)]
pub struct RankAccumulator {
    dim: usize,
    rows: Vec<SparseVec>,
    row_of_pivot: Vec<u32>,
}

impl RankAccumulator {
    pub fn new(dim: usize) -> Self {
        RankAccumulator { dim, rows: Vec::new(), row_of_pivot: vec![NO_ROW; dim] }
    }

    pub fn from_rows<'a, I>(dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut acc = RankAccumulator::new(dim);
        for r in rows {
            acc.insert(r)?;
        }
        Ok(acc)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.row_of_pivot[index] != NO_ROW
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.leading().unwrap().0).collect();
        p.sort_unstable();
        p
    }

    /// Columns that are not pivots, in increasing order.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.dim).filter(|&i| !self.is_pivot(i)).collect()
    }

    /// The stored rows ordered by pivot.
    pub fn rows(&self) -> Vec<&SparseVec> {
        let mut rows: Vec<&SparseVec> = self.rows.iter().collect();
        rows.sort_by_key(|r| r.leading().unwrap().0);
        rows
    }

    /// The stored row whose pivot is `pivot`, if any.
    pub fn row_for_pivot(&self, pivot: usize) -> Option<&SparseVec> {
        match self.row_of_pivot[pivot] {
            NO_ROW => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    /// Reduces `v` against the stored rows; the result has no entries in pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec> {
        v.check_dim(self.dim)?;
        Ok(self.reduce_unchecked(v))
    }

    fn reduce_unchecked(&self, v: &SparseVec) -> SparseVec {
        // Full reduction means subtracting a row never creates entries in other pivot
        // columns, so one pass over the pivot hits of `v` suffices.
        let hits: Vec<(u32, Scalar)> = v
            .raw()
            .iter()
            .filter(|(i, _)| self.row_of_pivot[*i as usize] != NO_ROW)
            .map(|(i, c)| (self.row_of_pivot[*i as usize], c.clone()))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        let mut out = v.clone();
        for (r, c) in hits {
            out = out.add_scaled(&-c, &self.rows[r as usize]);
        }
        out
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> Result<bool> {
        v.check_dim(self.dim)?;
        let reduced = self.reduce_unchecked(v);
        Ok(self.absorb(reduced))
    }

    /// Adds an already reduced nonzero vector as a new row.
    fn absorb(&mut self, mut reduced: SparseVec) -> bool {
        let Some((pivot, lead)) = reduced.leading() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            reduced.scale_in_place(&inv);
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = row.get_ref(pivot) {
                let c = -c.clone();
                *row = row.add_scaled(&c, &reduced);
            }
        }
        self.row_of_pivot[pivot] = self.rows.len() as u32;
        self.rows.push(reduced);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Basis of the vectors orthogonal to every stored row, one per non-pivot column `f`:
    /// `e_f − Σ_p row_p[f] e_p`.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for f in self.non_pivots() {
            let mut entries = vec![(f, Scalar::one())];
            for row in &self.rows {
                if let Some(c) = row.get_ref(f) {
                    entries.push((row.leading().unwrap().0, -c.clone()));
                }
            }
            out.push(SparseVec::from_entries(self.dim, entries).expect("indices in range"));
        }
        out
    }

    /// Trace of a linear map on the quotient `V / K`, where the stored rows span the
    /// annihilator of `K`. The pivot columns index the quotient basis `{e_p + K}` and the
    /// coordinates of `w + K` are the products `row_p · w`.
    pub fn trace_on_annihilator_quotient<F>(&self, apply: F) -> Scalar
    where
        F: Fn(usize) -> SparseVec,
    {
        let mut acc = Scalar::zero();
        for row in &self.rows {
            let p = row.leading().unwrap().0;
            acc += &row.dot(&apply(p));
        }
        acc
    }
}

/// Rank-increasing insertion as a free function.
pub fn rank_insert(acc: &mut RankAccumulator, v: &SparseVec) -> Result<bool> {
    acc.insert(v)
}

/// Whether `v` is a linear combination of `rows`.
pub fn kernel_contains(rows: &[SparseVec], v: &SparseVec) -> Result<bool> {
    let acc = RankAccumulator::from_rows(v.dim(), rows)?;
    acc.contains(v)
}

/// Trace of the map induced on `V / span(kernel)`.
///
/// `apply(q)` must return the image of the coordinate vector `e_q`. The quotient basis is
/// `{e_q + K : q ∈ quotient_pivots}`, which must be exactly the complement of the pivot
/// columns of the reduced kernel basis.
pub fn trace_on_quotient<F>(
    dim: usize,
    kernel: &[SparseVec],
    apply: F,
    quotient_pivots: &[usize],
) -> Result<Scalar>
where
    F: Fn(usize) -> SparseVec,
{
    let acc = RankAccumulator::from_rows(dim, kernel)?;
    let mut seen = vec![false; dim];
    for &q in quotient_pivots {
        if q >= dim || acc.is_pivot(q) || seen[q] {
            return Err(Error::InconsistentBasis(format!(
                "coordinate {q} cannot index the quotient basis"
            )));
        }
        seen[q] = true;
    }
    if quotient_pivots.len() + acc.rank() != dim {
        return Err(Error::InconsistentBasis(format!(
            "{} quotient coordinates for a quotient of dimension {}",
            quotient_pivots.len(),
            dim - acc.rank()
        )));
    }
    let mut trace = Scalar::zero();
    for &q in quotient_pivots {
        let image = apply(q);
        image.check_dim(dim)?;
        trace += &acc.reduce_unchecked(&image).get(q);
    }
    Ok(trace)
}

/// A growing list of independent vectors that can express members of their span as
/// coordinates in that list.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    dim: usize,
    members: usize,
    capacity: usize,
    rows: Vec<(SparseVec, SparseVec)>,
    row_of_pivot: Vec<u32>,
}

impl SpanSolver {
    /// `capacity` bounds the number of members ever added.
    pub fn new(dim: usize, capacity: usize) -> Self {
        SpanSolver { dim, members: 0, capacity, rows: Vec::new(), row_of_pivot: vec![NO_ROW; dim] }
    }

    pub fn len(&self) -> usize {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut residual = v.clone();
        let mut combo = SparseVec::zero(self.capacity);
        let hits: Vec<(u32, Scalar)> = v
            .raw()
            .iter()
            .filter(|(i, _)| self.row_of_pivot[*i as usize] != NO_ROW)
            .map(|(i, c)| (self.row_of_pivot[*i as usize], c.clone()))
            .collect();
        for (r, c) in hits {
            let (row, rc) = &self.rows[r as usize];
            residual = residual.add_scaled(&-c.clone(), row);
            combo = combo.add_scaled(&c, rc);
        }
        (residual, combo)
    }

    /// Adds `v` as a new member if it is independent of the current members.
    pub fn try_add(&mut self, v: &SparseVec) -> Result<Option<usize>> {
        v.check_dim(self.dim)?;
        let (residual, combo) = self.reduce(v);
        let Some((pivot, lead)) = residual.leading() else {
            return Ok(None);
        };
        if self.members == self.capacity {
            return Err(Error::InconsistentBasis("span solver capacity exceeded".into()));
        }
        let id = self.members;
        self.members += 1;
        // residual = v − combo·members, expressed over members
        let mut rc = SparseVec::unit(self.capacity, id).sub(&combo);
        let inv = lead.recip();
        let row = residual.scale(&inv);
        rc.scale_in_place(&inv);
        for (r, c) in self.rows.iter_mut() {
            if let Some(x) = r.get_ref(pivot) {
                let x = -x.clone();
                *r = r.add_scaled(&x, &row);
                *c = c.add_scaled(&x, &rc);
            }
        }
        self.row_of_pivot[pivot] = self.rows.len() as u32;
        self.rows.push((row, rc));
        Ok(Some(id))
    }

    /// Coordinates of `v` over the members (a vector of length `len()`), or `None` when
    /// `v` is outside their span.
    pub fn express(&self, v: &SparseVec) -> Result<Option<SparseVec>> {
        v.check_dim(self.dim)?;
        let (residual, combo) = self.reduce(v);
        if !residual.is_zero() {
            return Ok(None);
        }
        Ok(Some(SparseVec::from_sorted_unchecked(self.members, combo.raw().to_vec())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> SparseVec {
        SparseVec::from_ints(xs)
    }

    #[test]
    fn standard_basis_and_colinear() {
        let mut acc = RankAccumulator::new(2);
        assert!(rank_insert(&mut acc, &v(&[1, 0])).unwrap());
        assert!(rank_insert(&mut acc, &v(&[0, 1])).unwrap());
        assert_eq!(acc.rank(), 2);

        let mut acc = RankAccumulator::new(2);
        assert!(acc.insert(&v(&[1, 1])).unwrap());
        assert!(!acc.insert(&v(&[2, 2])).unwrap());
        assert_eq!(acc.rank(), 1);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut acc = RankAccumulator::new(3);
        assert!(matches!(acc.insert(&v(&[1, 0])), Err(Error::DimensionMismatch { .. })));
        assert!(kernel_contains(&[v(&[1, 0, 0])], &v(&[1, 0])).is_err());
    }

    #[test]
    fn kernel_membership() {
        assert!(kernel_contains(&[v(&[1, 0]), v(&[0, 1])], &v(&[3, 5])).unwrap());
        assert!(!kernel_contains(&[v(&[1, 1])], &v(&[1, 0])).unwrap());
    }

    #[test]
    fn rows_stay_fully_reduced() {
        let mut acc = RankAccumulator::new(4);
        for row in [[0, 2, 1, 3], [1, 1, 0, 0], [1, 3, 1, 3], [0, 0, 5, 1]] {
            acc.insert(&v(&row)).unwrap();
        }
        assert_eq!(acc.rank(), 3);
        let pivots = acc.pivots();
        assert_eq!(pivots, vec![0, 1, 2]);
        for row in acc.rows() {
            let p = row.leading().unwrap().0;
            assert!(row.get(p).is_one());
            for &q in &pivots {
                if q != p {
                    assert!(row.get(q).is_zero());
                }
            }
        }
        for n in acc.nullspace() {
            for row in acc.rows() {
                assert!(row.dot(&n).is_zero());
            }
        }
    }

    #[test]
    fn trace_of_identity_and_full_kernel() {
        let id = |q: usize| SparseVec::unit(5, q);
        let t = trace_on_quotient(5, &[], id, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(t, Scalar::from_int(5));
        let all: Vec<SparseVec> = (0..5).map(|i| SparseVec::unit(5, i)).collect();
        let t = trace_on_quotient(5, &all, id, &[]).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn trace_rejects_non_complementary_pivots() {
        let k = vec![v(&[1, 1, 0])];
        let id = |q: usize| SparseVec::unit(3, q);
        assert!(matches!(
            trace_on_quotient(3, &k, id, &[0, 2]),
            Err(Error::InconsistentBasis(_))
        ));
        assert!(matches!(trace_on_quotient(3, &k, id, &[1]), Err(Error::InconsistentBasis(_))));
        assert_eq!(trace_on_quotient(3, &k, id, &[1, 2]).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn swap_trace_on_quotient() {
        // V = F^2 with the swap map; K = span(e0 - e1) is invariant, swap acts as +1 on V/K.
        let swap = |q: usize| SparseVec::unit(2, 1 - q);
        let t = trace_on_quotient(2, &[v(&[1, -1])], swap, &[1]).unwrap();
        assert!(t.is_one());
        // Same quotient through the annihilator route: K^⊥ = span(e0 + e1).
        let ann = RankAccumulator::from_rows(2, &[v(&[1, 1])]).unwrap();
        assert!(ann.trace_on_annihilator_quotient(swap).is_one());
    }

    #[test]
    fn span_solver_coordinates() {
        let mut s = SpanSolver::new(3, 3);
        assert_eq!(s.try_add(&v(&[1, 1, 0])).unwrap(), Some(0));
        assert_eq!(s.try_add(&v(&[0, 1, 1])).unwrap(), Some(1));
        assert_eq!(s.try_add(&v(&[1, 2, 1])).unwrap(), None);
        let c = s.express(&v(&[2, 5, 3])).unwrap().unwrap();
        assert_eq!(c.to_dense(), vec![Scalar::from_int(2), Scalar::from_int(3)]);
        assert!(s.express(&v(&[1, 0, 0])).unwrap().is_none());
    }
}
