use super::poly::{DiffMonomial, DiffPolynomial, Factor};
use crate::error::{Error, Result};
use crate::exactla::SparseVec;

/// Enumerates the multilinear monomials `x_{π(1)}^{w_1} ⋯ x_{π(n)}^{w_n}` of degree `n`.
///
/// `index = rank(π) · dim_W^n + word(w)` where `rank` is the lexicographic rank of the
/// permutation and `word` reads the labels in base `dim_W`, first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearIndex {
    n: usize,
    dim_w: usize,
    words: usize,
    size: usize,
}

fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

impl MultilinearIndex {
    pub fn new(n: usize, dim_w: usize) -> Result<Self> {
        if n == 0 || dim_w == 0 {
            return Err(Error::Plan("degree and dim W must be positive".into()));
        }
        let words = dim_w
            .checked_pow(n as u32)
            .ok_or_else(|| Error::Plan(format!("dim_W^n overflows for n = {n}")))?;
        let size = factorial(n)
            .and_then(|f| f.checked_mul(words))
            .filter(|&s| s <= u32::MAX as usize)
            .ok_or_else(|| Error::Plan(format!("P_{n} is too large to index")))?;
        Ok(MultilinearIndex { n, dim_w, words, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_w(&self) -> usize {
        self.dim_w
    }

    /// `n! · dim_W^n`.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of label words, `dim_W^n`.
    pub fn num_words(&self) -> usize {
        self.words
    }

    pub fn compose_index(&self, perm_rank: usize, word: usize) -> usize {
        perm_rank * self.words + word
    }

    pub fn split_index(&self, index: usize) -> (usize, usize) {
        (index / self.words, index % self.words)
    }

    pub fn monomial_index(&self, m: &DiffMonomial) -> Result<usize> {
        if m.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: m.degree() });
        }
        let mut perm = Vec::with_capacity(self.n);
        let mut word = 0usize;
        for f in m.factors() {
            if (f.label as usize) >= self.dim_w {
                return Err(Error::InvalidLabel { label: f.label as usize, dim_w: self.dim_w });
            }
            perm.push(f.var as usize);
            word = word * self.dim_w + f.label as usize;
        }
        let rank = perm_rank(&perm).ok_or_else(|| {
            Error::NonMultilinear(format!("variables {perm:?} are not a permutation of 0..{}", self.n))
        })?;
        Ok(self.compose_index(rank, word))
    }

    pub fn index_monomial(&self, index: usize) -> Result<DiffMonomial> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange { index, dim: self.size });
        }
        let (rank, mut word) = self.split_index(index);
        let perm = perm_unrank(self.n, rank);
        let mut labels = vec![0usize; self.n];
        for k in (0..self.n).rev() {
            labels[k] = word % self.dim_w;
            word /= self.dim_w;
        }
        Ok(DiffMonomial::new(
            perm.iter().zip(labels).map(|(&v, l)| Factor::new(v as u32, l)).collect(),
        ))
    }

    /// Coordinates of a multilinear polynomial in the variables `0..n`.
    pub fn to_vector(&self, p: &DiffPolynomial) -> Result<SparseVec> {
        let mut entries = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            entries.push((self.monomial_index(m)?, c.clone()));
        }
        SparseVec::from_entries(self.size, entries)
    }

    pub fn from_vector(&self, v: &SparseVec) -> Result<DiffPolynomial> {
        v.check_dim(self.size)?;
        let mut p = DiffPolynomial::zero();
        for (i, c) in v.iter() {
            p.add_term(self.index_monomial(i)?, c.clone());
        }
        Ok(p)
    }

    /// Index of `σ · m` where `σ(x_i^w) = x_{σ(i)}^w`: the permutation `π` becomes `σ∘π`
    /// and the label word is unchanged.
    pub fn permute(&self, sigma: &[usize], index: usize) -> usize {
        let (rank, word) = self.split_index(index);
        let pi = perm_unrank(self.n, rank);
        let composed: Vec<usize> = pi.iter().map(|&p| sigma[p]).collect();
        self.compose_index(perm_rank(&composed).expect("σ∘π is a permutation"), word)
    }
}

/// Lexicographic rank of a permutation of `0..n`, or `None` when `perm` is not one.
pub fn perm_rank(perm: &[usize]) -> Option<usize> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut rank = 0usize;
    for (k, &p) in perm.iter().enumerate() {
        if p >= n || seen[p] {
            return None;
        }
        let smaller_unused = (0..p).filter(|&q| !seen[q]).count();
        rank = rank * (n - k) + smaller_unused;
        seen[p] = true;
    }
    Some(rank)
}

/// Inverse of [`perm_rank`].
pub fn perm_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut digits = vec![0usize; n];
    for k in (0..n).rev() {
        let base = n - k;
        digits[k] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}
