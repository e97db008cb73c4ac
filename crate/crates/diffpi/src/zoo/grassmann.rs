//! Truncated Grassmann algebras on bitset monomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::{Scalar, SparseMatrix, SparseVec};
use crate::fdalg::{operator_closure, Derivation, FDAlgebra, Multiplication};
use crate::ideals::{codimension, EvaluationPlan};

/// A basis monomial `e_{i_1}⋯e_{i_k}` (`i_1 < ⋯ < i_k`) of a Grassmann algebra, stored as the
/// bitmask of its support; bit `i` stands for generator `e_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrassmannMonomial(pub u64);

impl GrassmannMonomial {
    pub const ONE: GrassmannMonomial = GrassmannMonomial(0);

    pub fn generator(i: usize) -> Self {
        GrassmannMonomial(1 << i)
    }

    pub fn from_support(indices: &[usize]) -> Self {
        GrassmannMonomial(indices.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    /// 0 for even monomials, 1 for odd ones.
    pub fn parity(self) -> u32 {
        self.0.count_ones() & 1
    }

    pub fn support(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| self.0 >> i & 1 == 1)
    }

    pub fn disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// `self · other = ±monomial`, or `None` when the supports overlap. The flag is true
    /// for a minus sign, which is the parity of the number of transpositions needed to
    /// sort the concatenated generator list.
    pub fn mul(self, other: Self) -> Option<(bool, Self)> {
        if !self.disjoint(other) {
            return None;
        }
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let j = rest.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            rest &= rest - 1;
        }
        Some((swaps & 1 == 1, GrassmannMonomial(self.0 | other.0)))
    }

    pub fn name(self) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        self.support().map(|i| format!("e{}", i + 1)).collect()
    }
}

/// Truncated Grassmann algebra on `m` generators with the inner derivations
/// `δ_i = ½ ad e_i` for the first `t` generators (named `delta1`, …, `deltat`).
///
/// On a basis monomial `u`, `δ_i(u)` is `0` when `u` is even or contains `e_i`, and
/// `e_i u` otherwise.
pub fn grassmann_algebra(m: usize, t: usize) -> Result<FDAlgebra> {
    if m > 20 {
        return Err(Error::InvalidModel(format!("{m} Grassmann generators is beyond desk scale")));
    }
    if t > m {
        return Err(Error::Truncation { m, needed: t });
    }
    let dim = 1usize << m;
    let names = (0..dim as u64).map(|k| GrassmannMonomial(k).name()).collect();
    let derivations = (0..t)
        .map(|i| {
            let g = GrassmannMonomial::generator(i);
            let cols = (0..dim as u64)
                .map(|k| {
                    let u = GrassmannMonomial(k);
                    match (u.parity(), g.mul(u)) {
                        (1, Some((neg, v))) => {
                            let c = if neg { -Scalar::one() } else { Scalar::one() };
                            SparseVec::from_sorted_unchecked(dim, vec![(v.0 as u32, c)])
                        }
                        _ => SparseVec::zero(dim),
                    }
                })
                .collect();
            Derivation {
                name: format!("delta{}", i + 1),
                matrix: SparseMatrix::from_columns(dim, cols).expect("square"),
            }
        })
        .collect();
    let a = FDAlgebra::new(
        names,
        Multiplication::Grassmann { generators: m },
        Some(SparseVec::unit(dim, 0)),
        derivations,
    )?
    .with_reserved_generators(t);
    if dim <= 64 {
        a.validate()?;
    } else {
        // associativity holds by construction; the cubic check is skipped at this size
        a.validate_derivations()?;
    }
    Ok(a)
}

/// Shape of one variable's value in a canonical Grassmann tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportPattern {
    /// 0 for even, 1 for odd.
    pub parity: u32,
    /// Reserved generators (0-based) in the support.
    pub reserved: Vec<usize>,
    /// Fresh generators needed to reach the parity.
    pub fresh: usize,
}

/// The canonical evaluation tuples of degree `n` on `G(m)` with `t` reserved generators.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalPlan {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    /// Number of patterns, realizable or not.
    pub patterns: usize,
    /// Basis tuples, one per realizable pattern.
    pub tuples: Vec<Vec<usize>>,
    /// Every pattern fits into `m` generators, so the plan also matches the untruncated algebra.
    pub all_realizable: bool,
}

/// Enumerates support patterns: each variable gets a parity and a set of reserved
/// generators, with reserved sets pairwise disjoint, and the rest of its support is made of
/// fresh generators (the fewest that reach the parity).
///
/// Tuples sharing a pattern give the same evaluation functionals up to relabeling the
/// output coordinates, and tuples with overlapping supports evaluate every multilinear
/// monomial to zero, so the realizable patterns reproduce the full rank on `G(m)`.
pub fn canonical_grassmann_plan(n: usize, t: usize, m: usize) -> Result<CanonicalPlan> {
    if m < t {
        return Err(Error::Truncation { m, needed: t });
    }
    // owner[i] = which variable holds reserved generator i (n = nobody)
    let mut tuples = Vec::new();
    let mut patterns = 0usize;
    let owners = (n + 1).pow(t as u32);
    for code in 0..owners {
        let mut reserved = vec![0u64; n];
        let mut c = code;
        for i in 0..t {
            let owner = c % (n + 1);
            c /= n + 1;
            if owner < n {
                reserved[owner] |= 1 << i;
            }
        }
        for parities in 0..(1u64 << n) {
            patterns += 1;
            let mut next_fresh = t;
            let mut tuple = Vec::with_capacity(n);
            let mut ok = true;
            for (j, &r) in reserved.iter().enumerate() {
                let parity = (parities >> j & 1) as u32;
                let mut bits = r;
                if (r.count_ones() & 1) != parity {
                    if next_fresh >= m {
                        ok = false;
                        break;
                    }
                    bits |= 1 << next_fresh;
                    next_fresh += 1;
                }
                tuple.push(bits as usize);
            }
            if ok {
                tuples.push(tuple);
            }
        }
    }
    let all_realizable = tuples.len() == patterns;
    Ok(CanonicalPlan { n, m, t, patterns, tuples, all_realizable })
}

/// Patterns of a tuple from [`canonical_grassmann_plan`].
pub fn tuple_patterns(tuple: &[usize], t: usize) -> Vec<SupportPattern> {
    tuple
        .iter()
        .map(|&b| {
            let u = GrassmannMonomial(b as u64);
            let reserved: Vec<usize> = u.support().filter(|&i| i < t).collect();
            SupportPattern { parity: u.parity(), fresh: u.degree() as usize - reserved.len(), reserved }
        })
        .collect()
}

/// Outcome of increasing the truncation until the codimension stops changing.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: usize,
    pub t: usize,
    /// `(m, c_n)` for each truncation tried.
    pub values: Vec<(usize, u64)>,
    /// The value shared by the last two truncations, if they agreed with every pattern realized.
    pub stable: Option<u64>,
    pub closed_form: u64,
    pub matches: bool,
    /// Inner derivations use single generators `g_i = e_i`.
    pub note: String,
}

/// Computes `c_n` on `G(m)` with `t` inner derivations for `m = m_start, m_start + 1, …`
/// until two consecutive values agree at a truncation that realizes every support pattern,
/// or `m_max` is passed.
pub fn grassmann_scan(n: usize, t: usize, m_start: usize, m_max: usize) -> Result<ScanReport> {
    let mut values: Vec<(usize, u64)> = Vec::new();
    let mut stable = None;
    for m in m_start.max(t)..=m_max {
        let a = grassmann_algebra(m, t)?;
        let w = operator_closure(&a);
        let report = codimension(&a, &w, n, &EvaluationPlan::canonical())?;
        let c = report.c_n as u64;
        let complete = canonical_grassmann_plan(n, t, m)?.all_realizable;
        if complete && values.last().is_some_and(|&(_, prev)| prev == c) {
            values.push((m, c));
            stable = Some(c);
            break;
        }
        values.push((m, c));
    }
    let closed_form = grassmann_der_codim(n, t);
    Ok(ScanReport {
        n,
        t,
        matches: stable == Some(closed_form),
        values,
        stable,
        closed_form,
        note: "inner derivations built from single generators g_i = e_i".into(),
    })
}

/// `2^t 2^{n−1} − Σ_{j=1}^{⌊t/2⌋} Σ_{i=2j}^{t} C(t,i) C(n,i−2j)`.
pub fn grassmann_der_codim(n: usize, t: usize) -> u64 {
    let mut total = (1u64 << t) << (n - 1);
    for j in 1..=t / 2 {
        for i in 2 * j..=t {
            total -= binomial(t, i) * binomial(n, i - 2 * j);
        }
    }
    total
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sign of sorting the concatenation by counting inversions directly.
    fn inversion_sign(a: &[usize], b: &[usize]) -> bool {
        let seq: Vec<usize> = a.iter().chain(b).copied().collect();
        let mut inv = 0;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if seq[i] > seq[j] {
                    inv += 1;
                }
            }
        }
        inv % 2 == 1
    }

    #[test]
    fn sign_rule_exhaustive_up_to_six_generators() {
        for m in 0..=6usize {
            for a in 0u64..(1 << m) {
                for b in 0u64..(1 << m) {
                    let (x, y) = (GrassmannMonomial(a), GrassmannMonomial(b));
                    match x.mul(y) {
                        None => assert!(!x.disjoint(y)),
                        Some((neg, z)) => {
                            let sa: Vec<usize> = x.support().collect();
                            let sb: Vec<usize> = y.support().collect();
                            assert_eq!(neg, inversion_sign(&sa, &sb));
                            assert_eq!(z.0, a | b);
                            // u·v = (−1)^{pq} v·u for disjoint supports
                            let (neg2, _) = y.mul(x).unwrap();
                            let graded = x.parity() * y.parity() == 1;
                            assert_eq!(neg ^ neg2, graded);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(grassmann_der_codim(3, 1), 8);
        assert_eq!(grassmann_der_codim(4, 1), 16);
        assert_eq!(grassmann_der_codim(3, 2), 15);
        assert_eq!(grassmann_der_codim(5, 0), 16);
    }

    #[test]
    fn pattern_counts() {
        let p = canonical_grassmann_plan(1, 1, 3).unwrap();
        assert_eq!(p.patterns, 4);
        assert!(p.all_realizable);
        let tight = canonical_grassmann_plan(2, 1, 1).unwrap();
        assert!(!tight.all_realizable);
        assert!(canonical_grassmann_plan(2, 3, 2).is_err());
    }

    #[test]
    fn inner_derivation_rule() {
        let a = grassmann_algebra(4, 2).unwrap();
        for (i, d) in a.derivations().iter().enumerate() {
            let half = Scalar::new(1, 2);
            let g = a.basis_vector(1 << i);
            assert_eq!(d.matrix, a.inner_derivation(&g).unwrap().scale(&half));
        }
    }

    #[test]
    fn names() {
        assert_eq!(GrassmannMonomial::ONE.name(), "1");
        assert_eq!(GrassmannMonomial::from_support(&[0, 2]).name(), "e1e3");
    }
}
