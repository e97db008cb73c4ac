use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diffpoly::{apply_generator, apply_label, DiffPolynomial, Factor, MultilinearIndex};
use crate::error::{Error, Result};
use crate::exactla::{RankAccumulator, Scalar, SparseVec};
use crate::fdalg::OperatorBasis;

/// `P_n^W ∩ ⟨S⟩` as a reduced basis in multilinear-index coordinates.
#[derive(Clone, Debug)]
pub struct ConsequenceSpace {
    pub n: usize,
    pub dim_w: usize,
    pub basis: RankAccumulator,
    /// Dimension of the span of each generator's orbit under the derivations, by generator
    /// degree.
    pub closed_generators: BTreeMap<usize, usize>,
    /// False when generation stopped early on reaching a requested dimension.
    pub complete: bool,
}

impl ConsequenceSpace {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn ambient(&self) -> usize {
        self.basis.dim()
    }
}

/// Renames the variables of a multilinear polynomial to `0..k` in increasing order.
fn normalize(g: &DiffPolynomial, w: &OperatorBasis) -> Result<Option<DiffPolynomial>> {
    if g.is_zero() {
        return Ok(None);
    }
    g.check_labels(w)?;
    if !g.is_multilinear() {
        return Err(Error::NonMultilinear(g.display(Some(w)).to_string()));
    }
    let vars: Vec<u32> = g.variables().into_iter().collect();
    Ok(Some(g.rename(|v| vars.binary_search(&v).expect("own variable") as u32)))
}

/// Closes the generators of one degree under every derivation generator, inside `P_k^W`.
fn close_under_derivations(
    gens: &[DiffPolynomial],
    w: &OperatorBasis,
    k: usize,
) -> Result<Vec<DiffPolynomial>> {
    let idx = MultilinearIndex::new(k, w.dim())?;
    let mut acc = RankAccumulator::new(idx.len());
    let mut basis = Vec::new();
    let mut queue: Vec<DiffPolynomial> = gens.to_vec();
    while let Some(p) = queue.pop() {
        if p.is_zero() || !acc.insert(&idx.to_vector(&p)?)? {
            continue;
        }
        for g in 0..w.num_generators() {
            queue.push(apply_generator(g, &p, w)?);
        }
        basis.push(p);
    }
    Ok(basis)
}

/// Strictly increasing cut points `c_0 < ⋯ < c_k` in `0..=n`.
fn cut_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for c in start..=n + 1 - left {
            cur.push(c);
            go(c + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k + 1, &mut Vec::new(), &mut out);
    out
}

/// The instances `m_0 · g(m_1, …, m_k) · m_{k+1}` for the identity permutation: the
/// blocks are consecutive runs of `x_0 ⋯ x_{n−1}` carrying the labels of `word`.
fn instances_for_word(
    gens: &[(usize, Vec<DiffPolynomial>)],
    w: &OperatorBasis,
    idx: &MultilinearIndex,
    word: usize,
) -> Result<Vec<SparseVec>> {
    let n = idx.n();
    let dim_w = w.dim();
    let mut labels = vec![0usize; n];
    let mut rest = word;
    for k in (0..n).rev() {
        labels[k] = rest % dim_w;
        rest /= dim_w;
    }
    let block = |from: usize, to: usize| -> Vec<Factor> {
        (from..to).map(|v| Factor::new(v as u32, labels[v])).collect()
    };
    let mut out = Vec::new();
    for (k, closed) in gens {
        for cuts in cut_sets(n, *k) {
            let head = block(0, cuts[0]);
            let tail = block(cuts[*k], n);
            // expansions[i][l]: terms of w_l applied to the block substituted for x_i
            let mut expansions: Vec<Vec<Option<Vec<(Scalar, Vec<Factor>)>>>> =
                vec![vec![None; dim_w]; *k];
            let mut entries: Vec<(usize, Scalar)> = Vec::new();
            for g in closed {
                entries.clear();
                for (m, c) in g.terms() {
                    let mut partial: Vec<(Scalar, Vec<Factor>)> = vec![(c.clone(), head.clone())];
                    for f in m.factors() {
                        let i = f.var as usize;
                        let l = f.label as usize;
                        if expansions[i][l].is_none() {
                            let m_i = DiffPolynomial::term(
                                crate::diffpoly::DiffMonomial::new(block(cuts[i], cuts[i + 1])),
                                Scalar::one(),
                            );
                            let e = apply_label(l, &m_i, w)?;
                            expansions[i][l] =
                                Some(e.terms().map(|(mm, cc)| (cc.clone(), mm.factors().to_vec())).collect());
                        }
                        let terms = expansions[i][l].as_ref().unwrap();
                        let mut grown = Vec::with_capacity(partial.len() * terms.len());
                        for (pc, pf) in &partial {
                            for (tc, tf) in terms {
                                let mut fs = pf.clone();
                                fs.extend_from_slice(tf);
                                grown.push((pc * tc, fs));
                            }
                        }
                        partial = grown;
                        if partial.is_empty() {
                            break;
                        }
                    }
                    for (pc, mut fs) in partial {
                        fs.extend_from_slice(&tail);
                        let mono = crate::diffpoly::DiffMonomial::new(fs);
                        entries.push((idx.monomial_index(&mono)?, pc));
                    }
                }
                let v = SparseVec::from_entries(idx.len(), entries.drain(..))?;
                if !v.is_zero() {
                    out.push(v);
                }
            }
        }
    }
    Ok(out)
}

fn permute_vector(idx: &MultilinearIndex, sigma: &[usize], v: &SparseVec) -> SparseVec {
    SparseVec::from_entries(idx.len(), v.iter().map(|(i, c)| (idx.permute(sigma, i), c.clone())))
        .expect("permuted indices in range")
}

/// Degree-`n` consequences of `s`, generating until the dimension reaches `stop_at` if given.
///
/// Each generator is first closed under the derivations; then substitution instances are
/// formed for the identity permutation of the variables, and the span is closed under
/// `S_n` through a transposition and an `n`-cycle.
pub(crate) fn consequence_space_until(
    s: &[DiffPolynomial],
    w: &OperatorBasis,
    n: usize,
    stop_at: Option<usize>,
) -> Result<ConsequenceSpace> {
    let idx = MultilinearIndex::new(n, w.dim())?;
    let mut by_degree: BTreeMap<usize, Vec<DiffPolynomial>> = BTreeMap::new();
    for g in s {
        if let Some(g) = normalize(g, w)? {
            by_degree.entry(g.variables().len()).or_default().push(g);
        }
    }
    let mut gens: Vec<(usize, Vec<DiffPolynomial>)> = Vec::new();
    let mut closed_generators = BTreeMap::new();
    for (k, list) in by_degree {
        let closed = close_under_derivations(&list, w, k)?;
        closed_generators.insert(k, closed.len());
        if k <= n && !closed.is_empty() {
            gens.push((k, closed));
        }
    }
    let mut basis = RankAccumulator::new(idx.len());
    let done = |b: &RankAccumulator| b.is_full() || stop_at.is_some_and(|s| b.rank() >= s);
    let mut grown: Vec<SparseVec> = Vec::new();
    let words: Vec<usize> = (0..idx.num_words()).collect();
    'words: for chunk in words.chunks(16) {
        let batches: Vec<Result<Vec<SparseVec>>> =
            chunk.par_iter().map(|&wd| instances_for_word(&gens, w, &idx, wd)).collect();
        for batch in batches {
            for v in batch? {
                if basis.insert(&v)? {
                    grown.push(v);
                }
                if done(&basis) {
                    break 'words;
                }
            }
        }
    }
    let swap: Vec<usize> = (0..n).map(|i| if i < 2 && n > 1 { 1 - i } else { i }).collect();
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut frontier = grown;
    while !frontier.is_empty() && !done(&basis) {
        let mut next = Vec::new();
        'front: for v in &frontier {
            for sigma in [&swap, &cycle] {
                let u = permute_vector(&idx, sigma, v);
                if basis.insert(&u)? {
                    next.push(u);
                }
                if done(&basis) {
                    break 'front;
                }
            }
        }
        frontier = next;
    }
    let complete = !stop_at.is_some_and(|s| basis.rank() >= s) || basis.is_full();
    Ok(ConsequenceSpace { n, dim_w: w.dim(), basis, closed_generators, complete })
}

/// `P_n^W ∩ ⟨S⟩_T`: the degree-`n` multilinear consequences of multilinear generators.
pub fn consequence_space(s: &[DiffPolynomial], w: &OperatorBasis, n: usize) -> Result<ConsequenceSpace> {
    consequence_space_until(s, w, n, None)
}

/// Whether the multilinear polynomial `p` of degree `n` is a consequence of `s`.
pub fn in_ideal(p: &DiffPolynomial, s: &[DiffPolynomial], w: &OperatorBasis, n: usize) -> Result<bool> {
    let vars = p.variables();
    if !p.is_zero() && vars.len() != n {
        return Err(Error::DegreeMismatch { expected: n, found: vars.len() });
    }
    let Some(p) = normalize(p, w)? else {
        return Ok(true);
    };
    let space = consequence_space(s, w, n)?;
    let idx = MultilinearIndex::new(n, w.dim())?;
    space.basis.contains(&idx.to_vector(&p)?)
}
