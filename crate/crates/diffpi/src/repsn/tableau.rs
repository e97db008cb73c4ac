use std::collections::BTreeMap;

use super::Partition;
use crate::diffpoly::{evaluate, permutations, DiffMonomial, DiffPolynomial, Factor};
use crate::error::{Error, Result};
use crate::exactla::{RankAccumulator, Scalar, SparseVec};
use crate::fdalg::{FDAlgebra, OperatorBasis};

/// A Young diagram with at most three rows whose boxes are laid out as a word, with an
/// optional operator label per position.
///
/// Row `r` stands for variable `r` (`x`, `y`, `z`). The polynomial alternates the
/// variables inside each column independently and keeps the word order of the positions,
/// so the column `(x^δ, y)` contributes `x^δ y − y^δ x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTableau {
    shape: Partition,
    /// `(column, row)` of each position in word order.
    slots: Vec<(usize, usize)>,
    /// W-basis label carried by each position.
    labels: Vec<usize>,
}

impl DecoratedTableau {
    pub fn new(shape: Partition, slots: Vec<(usize, usize)>, labels: Vec<usize>) -> Result<Self> {
        if shape.rows() > 3 {
            return Err(Error::InvalidTableau(format!("{shape} has more than three rows")));
        }
        if labels.len() != slots.len() {
            return Err(Error::InvalidTableau("one label per position is required".into()));
        }
        let heights = shape.conjugate();
        let mut seen: Vec<Vec<bool>> = heights.parts().iter().map(|&h| vec![false; h]).collect();
        for &(c, r) in &slots {
            let cell = seen.get_mut(c).and_then(|col| col.get_mut(r));
            match cell {
                Some(cell) if !*cell => *cell = true,
                _ => {
                    return Err(Error::InvalidTableau(format!(
                        "position ({c},{r}) is outside {shape} or repeated"
                    )))
                }
            }
        }
        if slots.len() != shape.n() {
            return Err(Error::InvalidTableau(format!("{} positions for {shape}", slots.len())));
        }
        Ok(DecoratedTableau { shape, slots, labels })
    }

    /// `x^n`.
    pub fn row(n: usize) -> Self {
        Self::row_with_label(n, 1, 0)
    }

    /// `x^{k−1} x^w x^{n−k}` for the 1-based position `k`.
    pub fn row_with_label(n: usize, k: usize, label: usize) -> Self {
        let mut labels = vec![0; n];
        if (1..=n).contains(&k) {
            labels[k - 1] = label;
        }
        DecoratedTableau {
            shape: Partition::row(n),
            slots: (0..n).map(|c| (c, 0)).collect(),
            labels,
        }
    }

    /// Shape `(p+q, p)`: `x^i`, the first-row boxes of the `p` two-box columns, their
    /// second-row boxes, then `x^{q−i}`.
    ///
    /// With a label, the first two-box column becomes the adjacent pair `(x^w y − y^w x)`
    /// placed between the remaining first-row and second-row boxes.
    pub fn two_row_window(p: usize, q: usize, i: usize, label: Option<usize>) -> Result<Self> {
        if p == 0 || i > q {
            return Err(Error::InvalidTableau(format!("window {i} of ({},{p})", p + q)));
        }
        let shape = Partition::new(vec![p + q, p])?;
        let singles: Vec<(usize, usize)> = (p..p + q).map(|c| (c, 0)).collect();
        let mut slots: Vec<(usize, usize)> = singles[..i].to_vec();
        let mut labels = vec![0; i];
        match label {
            None => {
                slots.extend((0..p).map(|c| (c, 0)));
                slots.extend((0..p).map(|c| (c, 1)));
                labels.extend(std::iter::repeat(0).take(2 * p));
            }
            Some(w) => {
                slots.extend((1..p).map(|c| (c, 0)));
                labels.extend(std::iter::repeat(0).take(p - 1));
                slots.extend([(0, 0), (0, 1)]);
                labels.extend([w, 0]);
                slots.extend((1..p).map(|c| (c, 1)));
                labels.extend(std::iter::repeat(0).take(p - 1));
            }
        }
        slots.extend_from_slice(&singles[i..]);
        labels.extend(std::iter::repeat(0).take(q - i));
        DecoratedTableau::new(shape, slots, labels)
    }

    /// Shape `(p+q, p, 1)`: `x^i`, the first-row boxes of the columns of height two or
    /// more, their second-row boxes, the third-row box, then `x^{q−i}`.
    pub fn three_row_window(p: usize, q: usize, i: usize) -> Result<Self> {
        if p == 0 || i > q {
            return Err(Error::InvalidTableau(format!("window {i} of ({},{p},1)", p + q)));
        }
        let shape = Partition::new(vec![p + q, p, 1])?;
        let mut slots: Vec<(usize, usize)> = (p..p + i).map(|c| (c, 0)).collect();
        slots.extend((0..p).map(|c| (c, 0)));
        slots.extend((0..p).map(|c| (c, 1)));
        slots.push((0, 2));
        slots.extend((p + i..p + q).map(|c| (c, 0)));
        let n = slots.len();
        DecoratedTableau::new(shape, slots, vec![0; n])
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// Column-alternated polynomial of a decorated tableau in the variables `0..rows`.
pub fn hwv_polynomial(t: &DecoratedTableau) -> DiffPolynomial {
    let heights = t.shape.conjugate();
    let perms: Vec<Vec<Vec<usize>>> = heights.parts().iter().map(|&h| permutations(h)).collect();
    let mut out = DiffPolynomial::zero();
    let mut choice = vec![0usize; perms.len()];
    loop {
        let mut negative = false;
        for (c, &k) in choice.iter().enumerate() {
            negative ^= odd(&perms[c][k]);
        }
        let factors = t
            .slots
            .iter()
            .zip(&t.labels)
            .map(|(&(c, r), &l)| Factor::new(perms[c][choice[c]][r] as u32, l))
            .collect();
        let coef = if negative { -Scalar::one() } else { Scalar::one() };
        out.add_term(DiffMonomial::new(factors), coef);
        // advance the mixed-radix counter over column permutations
        let mut c = 0;
        loop {
            if c == choice.len() {
                return out;
            }
            choice[c] += 1;
            if choice[c] < perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

fn odd(perm: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

const PRIMES: [i64; 24] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89];

/// `count` assignments of `rows` variables: with `β` running over the primes, variable `r`
/// is `Σ_j β^{r·dim + j} b_j`.
pub fn default_points(a: &FDAlgebra, rows: usize, count: usize) -> Vec<BTreeMap<u32, SparseVec>> {
    let dim = a.dim();
    (0..count)
        .map(|s| {
            let beta = Scalar::from_int(PRIMES[s % PRIMES.len()] + (s / PRIMES.len()) as i64 * 100);
            (0..rows as u32)
                .map(|r| {
                    let mut power = Scalar::one();
                    for _ in 0..(r as usize * dim) {
                        power = &power * &beta;
                    }
                    let mut coords = Vec::with_capacity(dim);
                    for _ in 0..dim {
                        coords.push(power.clone());
                        power = &power * &beta;
                    }
                    (r, SparseVec::from_dense(&coords))
                })
                .collect()
        })
        .collect()
}

/// Rank of the values of the candidates' polynomials on the points: the number of
/// candidates independent modulo the identities of `A`, a lower bound for `m_λ`.
///
/// Without explicit points, `#candidates + 2` prime-parameterized points are used.
pub fn multiplicity_lower_bound(
    a: &FDAlgebra,
    w: &OperatorBasis,
    lambda: &Partition,
    candidates: &[DecoratedTableau],
    points: Option<&[BTreeMap<u32, SparseVec>]>,
) -> Result<usize> {
    for t in candidates {
        if t.shape() != lambda {
            return Err(Error::InvalidTableau(format!("candidate of shape {} for {lambda}", t.shape())));
        }
        if let Some(&l) = t.labels.iter().find(|&&l| l >= w.dim()) {
            return Err(Error::InvalidLabel { label: l, dim_w: w.dim() });
        }
    }
    let owned;
    let points = match points {
        Some(p) => p,
        None => {
            owned = default_points(a, lambda.rows(), candidates.len() + 2);
            &owned
        }
    };
    let dim = a.dim();
    let mut acc = RankAccumulator::new(dim * points.len());
    for t in candidates {
        let p = hwv_polynomial(t);
        let mut entries = Vec::new();
        for (s, point) in points.iter().enumerate() {
            let v = evaluate(&p, a, w, point)?;
            entries.extend(v.iter().map(|(j, c)| (s * dim + j, c.clone())));
        }
        acc.insert(&SparseVec::from_entries(dim * points.len(), entries)?)?;
    }
    Ok(acc.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::parse_plain;

    #[test]
    fn row_shapes() {
        assert_eq!(hwv_polynomial(&DecoratedTableau::row(3)), parse_plain("x x x").unwrap());
        let t = DecoratedTableau::row_with_label(3, 2, 1);
        let p = hwv_polynomial(&t);
        assert_eq!(p.num_terms(), 1);
        let (m, _) = p.terms().next().unwrap();
        assert_eq!(m.factors()[1], Factor::new(0, 1));
    }

    #[test]
    fn two_row_alternation() {
        let t = DecoratedTableau::two_row_window(1, 1, 0, None).unwrap();
        assert_eq!(hwv_polynomial(&t), parse_plain("x y x - y x x").unwrap());
        let t = DecoratedTableau::two_row_window(2, 0, 0, None).unwrap();
        assert_eq!(hwv_polynomial(&t).num_terms(), 4);
    }

    #[test]
    fn rejects_bad_layouts() {
        let shape = Partition::new(vec![2]).unwrap();
        assert!(DecoratedTableau::new(shape.clone(), vec![(0, 0), (0, 0)], vec![0, 0]).is_err());
        assert!(DecoratedTableau::new(shape, vec![(0, 0), (0, 1)], vec![0, 0]).is_err());
        let four = Partition::new(vec![1, 1, 1, 1]).unwrap();
        let slots = (0..4).map(|r| (0, r)).collect();
        assert!(DecoratedTableau::new(four, slots, vec![0; 4]).is_err());
    }
}
