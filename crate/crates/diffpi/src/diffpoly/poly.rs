use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::{Scalar, SparseVec};
use crate::fdalg::{FDAlgebra, OperatorBasis};

/// A labeled variable occurrence `x_var^{w_label}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub var: u32,
    pub label: u16,
}

impl Factor {
    pub fn new(var: u32, label: usize) -> Self {
        Factor { var, label: label as u16 }
    }
}

/// A nonempty product of labeled variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffMonomial(Vec<Factor>);

impl DiffMonomial {
    pub fn new(factors: Vec<Factor>) -> Self {
        assert!(!factors.is_empty(), "monomials are nonempty");
        DiffMonomial(factors)
    }

    pub fn var(v: u32) -> Self {
        DiffMonomial(vec![Factor::new(v, 0)])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &DiffMonomial) -> DiffMonomial {
        let mut f = self.0.clone();
        f.extend_from_slice(&other.0);
        DiffMonomial(f)
    }

    fn with_label(&self, pos: usize, label: usize) -> DiffMonomial {
        let mut f = self.0.clone();
        f[pos].label = label as u16;
        DiffMonomial(f)
    }
}

impl Ord for DiffMonomial {
    /// Degree, then the variable sequence, then the label sequence.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().map(|f| f.var).cmp(other.0.iter().map(|f| f.var)))
            .then_with(|| self.0.iter().map(|f| f.label).cmp(other.0.iter().map(|f| f.label)))
    }
}

impl PartialOrd for DiffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An exact-rational linear combination of differential monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPolynomial {
    terms: BTreeMap<DiffMonomial, Scalar>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        DiffPolynomial::default()
    }

    pub fn var(v: u32) -> Self {
        Self::labeled(v, 0)
    }

    pub fn labeled(v: u32, label: usize) -> Self {
        Self::term(DiffMonomial(vec![Factor::new(v, label)]), Scalar::one())
    }

    pub fn term(m: DiffMonomial, c: Scalar) -> Self {
        let mut p = DiffPolynomial::zero();
        p.add_term(m, c);
        p
    }

    /// Product of plain variables in the given order.
    pub fn word(vars: &[u32]) -> Self {
        Self::term(DiffMonomial(vars.iter().map(|&v| Factor::new(v, 0)).collect()), Scalar::one())
    }

    pub fn add_term(&mut self, m: DiffMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &DiffMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|f| f.var)).collect()
    }

    pub fn max_label(&self) -> Option<usize> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|f| f.label as usize)).max()
    }

    /// Every term is a product of the same variable set with each variable exactly once.
    pub fn is_multilinear(&self) -> bool {
        let vars = self.variables();
        self.terms.keys().all(|m| {
            m.degree() == vars.len() && m.0.iter().map(|f| f.var).collect::<BTreeSet<_>>() == vars
        })
    }

    pub fn add(&self, other: &DiffPolynomial) -> DiffPolynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffPolynomial) -> DiffPolynomial {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> DiffPolynomial {
        if c.is_zero() {
            return DiffPolynomial::zero();
        }
        DiffPolynomial { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &DiffPolynomial) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.concat(b), x * y);
            }
        }
        out
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &DiffPolynomial) -> DiffPolynomial {
        self.mul(other).sub(&other.mul(self))
    }

    /// Left-normed commutator `[[p_1, p_2], …, p_k]`.
    pub fn left_normed(parts: &[DiffPolynomial]) -> DiffPolynomial {
        let mut it = parts.iter();
        let mut acc = it.next().cloned().unwrap_or_default();
        for p in it {
            acc = acc.commutator(p);
        }
        acc
    }

    /// Renames variables through `f`.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> DiffPolynomial {
        let mut out = DiffPolynomial::zero();
        for (m, c) in &self.terms {
            let factors = m.0.iter().map(|x| Factor { var: f(x.var), label: x.label }).collect();
            out.add_term(DiffMonomial(factors), c.clone());
        }
        out
    }

    pub fn check_labels(&self, w: &OperatorBasis) -> Result<()> {
        match self.max_label() {
            Some(l) if l >= w.dim() => Err(Error::InvalidLabel { label: l, dim_w: w.dim() }),
            _ => Ok(()),
        }
    }

    /// Text form using the operator labels of `w` (`x1^eps x2 - x2 x1^eps`).
    pub fn display<'a>(&'a self, w: Option<&'a OperatorBasis>) -> PolyDisplay<'a> {
        PolyDisplay { p: self, w }
    }
}

pub struct PolyDisplay<'a> {
    p: &'a DiffPolynomial,
    w: Option<&'a OperatorBasis>,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.p.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs} ")?;
            }
            for (k, x) in m.0.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "x{}", x.var + 1)?;
                if x.label != 0 {
                    match self.w {
                        Some(w) if (x.label as usize) < w.dim() => {
                            let l = w.label(x.label as usize);
                            if l.contains('∘') {
                                write!(f, "^{{{l}}}")?;
                            } else {
                                write!(f, "^{l}")?;
                            }
                        }
                        _ => write!(f, "^#{}", x.label)?,
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display(None).fmt(f)
    }
}

/// Applies the derivation generator `generator` by the Leibniz rule, rewriting each
/// `γ ∘ w` in the operator basis.
pub fn apply_generator(
    generator: usize,
    p: &DiffPolynomial,
    w: &OperatorBasis,
) -> Result<DiffPolynomial> {
    let table = w
        .left_mult_table(generator)
        .map_err(|_| Error::UnknownGenerator(format!("#{generator}")))?;
    p.check_labels(w)?;
    let mut out = DiffPolynomial::zero();
    for (m, c) in &p.terms {
        for (pos, f) in m.0.iter().enumerate() {
            for (u, x) in table.column(f.label as usize).iter() {
                out.add_term(m.with_label(pos, u), c * x);
            }
        }
    }
    Ok(out)
}

/// Applies a word in the generators, rightmost generator first.
pub fn apply_word(word: &[usize], p: &DiffPolynomial, w: &OperatorBasis) -> Result<DiffPolynomial> {
    let mut cur = p.clone();
    for &g in word.iter().rev() {
        cur = apply_generator(g, &cur, w)?;
    }
    Ok(cur)
}

/// Applies the operator basis element `label` (through its defining word).
pub fn apply_label(label: usize, p: &DiffPolynomial, w: &OperatorBasis) -> Result<DiffPolynomial> {
    if label >= w.dim() {
        return Err(Error::InvalidLabel { label, dim_w: w.dim() });
    }
    if label == 0 {
        return Ok(p.clone());
    }
    // single labeled variable: compose directly in W
    if p.num_terms() == 1 {
        let (m, c) = p.terms.iter().next().unwrap();
        if m.degree() == 1 {
            let f = m.0[0];
            let mut out = DiffPolynomial::zero();
            for (u, x) in w.compose(label, f.label as usize).iter() {
                out.add_term(DiffMonomial(vec![Factor::new(f.var, u)]), c * x);
            }
            return Ok(out);
        }
    }
    apply_word(w.word(label), p, w)
}

/// Substitutes `assignment[v]` for every variable `v` of `g`; a label on `x_v` is pushed
/// into the substituted polynomial.
pub fn substitute(
    g: &DiffPolynomial,
    assignment: &BTreeMap<u32, DiffPolynomial>,
    w: &OperatorBasis,
) -> Result<DiffPolynomial> {
    let mut images: BTreeMap<(u32, u16), DiffPolynomial> = BTreeMap::new();
    let mut out = DiffPolynomial::zero();
    for (m, c) in &g.terms {
        let mut prod = DiffPolynomial::term(
            DiffMonomial(Vec::new()),
            c.clone(),
        );
        for f in &m.0 {
            let key = (f.var, f.label);
            if !images.contains_key(&key) {
                let base = assignment.get(&f.var).ok_or(Error::MissingAssignment(f.var))?;
                images.insert(key, apply_label(f.label as usize, base, w)?);
            }
            prod = prod.mul(&images[&key]);
            if prod.is_zero() {
                break;
            }
        }
        out = out.add(&prod);
    }
    Ok(out)
}

/// Evaluates `p` with `x_v ↦ assignment[v]`; a labeled variable `x^w` evaluates to the
/// operator `w` applied to the assigned element.
pub fn evaluate(
    p: &DiffPolynomial,
    a: &FDAlgebra,
    w: &OperatorBasis,
    assignment: &BTreeMap<u32, SparseVec>,
) -> Result<SparseVec> {
    p.check_labels(w)?;
    let mut cache: BTreeMap<(u32, u16), SparseVec> = BTreeMap::new();
    let mut acc = SparseVec::zero(a.dim());
    for (m, c) in &p.terms {
        let mut val: Option<SparseVec> = None;
        for f in &m.0 {
            let key = (f.var, f.label);
            if !cache.contains_key(&key) {
                let x = assignment.get(&f.var).ok_or(Error::MissingAssignment(f.var))?;
                x.check_dim(a.dim())?;
                cache.insert(key, w.op(f.label as usize).apply(x));
            }
            let x = &cache[&key];
            val = Some(match val {
                None => x.clone(),
                Some(v) => a.mul(&v, x),
            });
            if val.as_ref().is_some_and(SparseVec::is_zero) {
                break;
            }
        }
        acc = acc.add_scaled(c, &val.expect("nonempty monomial"));
    }
    Ok(acc)
}

/// Full polarization: splits `p` into multihomogeneous components and replaces each
/// variable of degree `d` by `d` fresh variables, summing over all placements.
///
/// Fresh variables are numbered consecutively from 0, following the variables of `p`
/// in increasing order; zero components are dropped.
pub fn multilinearize(p: &DiffPolynomial) -> Vec<DiffPolynomial> {
    let mut components: BTreeMap<BTreeMap<u32, usize>, DiffPolynomial> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut degs: BTreeMap<u32, usize> = BTreeMap::new();
        for f in &m.0 {
            *degs.entry(f.var).or_default() += 1;
        }
        components.entry(degs).or_default().add_term(m.clone(), c.clone());
    }
    let mut out = Vec::new();
    for (degs, comp) in components {
        let mut first_fresh: BTreeMap<u32, u32> = BTreeMap::new();
        let mut next = 0u32;
        for (&v, &d) in &degs {
            first_fresh.insert(v, next);
            next += d as u32;
        }
        let mut result = DiffPolynomial::zero();
        for (m, c) in &comp.terms {
            // occurrence positions of each variable
            let mut occ: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
            for (pos, f) in m.0.iter().enumerate() {
                occ.entry(f.var).or_default().push(pos);
            }
            let mut partial: Vec<Vec<Factor>> = vec![m.0.clone()];
            for (v, positions) in &occ {
                let base = first_fresh[v];
                let mut grown = Vec::new();
                for perm in permutations(positions.len()) {
                    for f in &partial {
                        let mut f = f.clone();
                        for (k, &pos) in positions.iter().enumerate() {
                            f[pos].var = base + perm[k] as u32;
                        }
                        grown.push(f);
                    }
                }
                partial = grown;
            }
            for f in partial {
                result.add_term(DiffMonomial(f), c.clone());
            }
        }
        if !result.is_zero() {
            out.push(result);
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
