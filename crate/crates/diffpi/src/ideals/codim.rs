use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::plan::{EvaluationPlan, PlanMode};
use crate::diffpoly::{evaluate, multilinearize, DiffPolynomial, MultilinearIndex};
use crate::error::{Error, Result};
use crate::exactla::{RankAccumulator, Scalar, SparseVec};
use crate::fdalg::{FDAlgebra, OperatorBasis};
use crate::repsn::{decompose, CycleType, MultiplicityMap};
use crate::zoo::canonical_grassmann_plan;

const CHUNK: usize = 64;

/// Result of an evaluation-rank computation in degree `n`.
#[derive(Clone, Debug, Serialize)]
pub struct CodimReport {
    pub n: usize,
    pub c_n: usize,
    /// False for sampled runs, whose rank is only a lower bound.
    pub exact: bool,
    pub mode: PlanMode,
    pub dim_w: usize,
    /// `n! · dim_W^n`.
    pub ambient: usize,
    /// `ambient − c_n`.
    pub kernel_dim: usize,
    /// Indices of the multilinear monomials forming a basis of the quotient.
    pub pivots: Vec<usize>,
    pub tuples_evaluated: usize,
    pub ms: u128,
    #[serde(skip)]
    pub(crate) functionals: RankAccumulator,
}

impl CodimReport {
    /// The quotient basis monomials written out with the labels of `w`.
    pub fn pivot_monomials(&self, w: &OperatorBasis) -> Vec<String> {
        let idx = MultilinearIndex::new(self.n, self.dim_w).expect("indexed before");
        self.pivots
            .iter()
            .map(|&p| {
                let m = idx.index_monomial(p).expect("pivot in range");
                DiffPolynomial::term(m, Scalar::one()).display(Some(w)).to_string()
            })
            .collect()
    }

    /// Reduced evaluation functionals; their common kernel is `P_n ∩ Id(A)`.
    pub fn functionals(&self) -> &RankAccumulator {
        &self.functionals
    }
}

/// Evaluation functionals of one basis tuple: for each output coordinate `o`, the vector
/// whose entry at a multilinear monomial is coordinate `o` of its value.
fn tuple_functionals(
    a: &FDAlgebra,
    w: &OperatorBasis,
    idx: &MultilinearIndex,
    tuple: &[usize],
) -> Vec<SparseVec> {
    let n = tuple.len();
    let dim_w = w.dim();
    // images[v][l] = w_l(b_{tuple[v]})
    let images: Vec<Vec<&SparseVec>> =
        tuple.iter().map(|&b| (0..dim_w).map(|l| w.apply_to_basis(l, b)).collect()).collect();
    let mut fact = vec![1usize; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k;
    }
    let mut out: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); a.dim()];
    struct Ctx<'a> {
        a: &'a FDAlgebra,
        images: Vec<Vec<&'a SparseVec>>,
        fact: Vec<usize>,
        dim_w: usize,
        words: usize,
    }
    fn dfs(
        ctx: &Ctx,
        depth: usize,
        used: u32,
        rank: usize,
        word: usize,
        value: Option<SparseVec>,
        out: &mut Vec<Vec<(usize, Scalar)>>,
    ) {
        let n = ctx.images.len();
        if depth == n {
            let value = value.expect("n ≥ 1");
            let index = rank * ctx.words + word;
            for (o, c) in value.iter() {
                out[o].push((index, c.clone()));
            }
            return;
        }
        let mut smaller_unused = 0;
        for v in 0..n {
            if used >> v & 1 == 1 {
                continue;
            }
            let rank = rank + smaller_unused * ctx.fact[n - 1 - depth];
            smaller_unused += 1;
            for l in 0..ctx.dim_w {
                let img = ctx.images[v][l];
                if img.is_zero() {
                    continue;
                }
                let next = match &value {
                    None => img.clone(),
                    Some(p) => ctx.a.mul(p, img),
                };
                if next.is_zero() {
                    continue;
                }
                dfs(ctx, depth + 1, used | 1 << v, rank, word * ctx.dim_w + l, Some(next), out);
            }
        }
    }
    let ctx = Ctx { a, images, fact, dim_w, words: idx.num_words() };
    dfs(&ctx, 0, 0, 0, 0, None, &mut out);
    out.into_iter()
        .filter(|e| !e.is_empty())
        .map(|e| SparseVec::from_entries(idx.len(), e).expect("indices in range"))
        .collect()
}

pub(crate) struct EvaluationRun {
    pub acc: RankAccumulator,
    pub tuples: usize,
}

/// Streams the evaluation functionals of the plan's tuples into a rank accumulator.
pub(crate) fn evaluation_rank(
    a: &FDAlgebra,
    w: &OperatorBasis,
    n: usize,
    plan: &EvaluationPlan,
) -> Result<EvaluationRun> {
    if n == 0 {
        return Err(Error::Plan("degree must be at least 1".into()));
    }
    if n > 32 {
        return Err(Error::Plan(format!("degree {n} is beyond desk scale")));
    }
    if w.dim_a() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: w.dim_a() });
    }
    let idx = MultilinearIndex::new(n, w.dim())?;
    let mut source = plan.tuples(a, n)?;
    let mut acc = RankAccumulator::new(idx.len());
    let mut tuples = 0usize;
    let mut idle = 0usize;
    'outer: loop {
        if acc.is_full() {
            break;
        }
        let chunk = source.next_chunk(CHUNK);
        if chunk.is_empty() {
            break;
        }
        let columns: Vec<Vec<SparseVec>> =
            chunk.par_iter().map(|t| tuple_functionals(a, w, &idx, t)).collect();
        for fs in columns {
            tuples += 1;
            let mut grew = false;
            for f in &fs {
                grew |= acc.insert(f)?;
            }
            if plan.mode == PlanMode::Sampled {
                idle = if grew { 0 } else { idle + 1 };
                if idle >= plan.patience {
                    break 'outer;
                }
            }
            if acc.is_full() {
                break 'outer;
            }
        }
    }
    Ok(EvaluationRun { acc, tuples })
}

/// `c_n` as the rank of the evaluation functionals on `P_n^W`.
pub fn codimension(
    a: &FDAlgebra,
    w: &OperatorBasis,
    n: usize,
    plan: &EvaluationPlan,
) -> Result<CodimReport> {
    let start = Instant::now();
    let run = evaluation_rank(a, w, n, plan)?;
    let ambient = run.acc.dim();
    let c_n = run.acc.rank();
    Ok(CodimReport {
        n,
        c_n,
        exact: plan.is_exact() || c_n == ambient,
        mode: plan.mode,
        dim_w: w.dim(),
        ambient,
        kernel_dim: ambient - c_n,
        pivots: run.acc.pivots(),
        tuples_evaluated: run.tuples,
        ms: start.elapsed().as_millis(),
        functionals: run.acc,
    })
}

/// Basis tuples on which multilinear polynomials of degree `k` must be tested.
fn witness_tuples(a: &FDAlgebra, k: usize) -> Result<Vec<Vec<usize>>> {
    if let Some((m, t)) = a.grassmann_shape() {
        return Ok(canonical_grassmann_plan(k, t, m)?.tuples);
    }
    let plan = EvaluationPlan::full();
    let mut source = plan.tuples(a, k)?;
    let mut out = Vec::new();
    loop {
        let chunk = source.next_chunk(1024);
        if chunk.is_empty() {
            return Ok(out);
        }
        out.extend(chunk);
    }
}

/// A basis tuple on which some multilinear component of `p` is nonzero, if any.
pub fn identity_witness(a: &FDAlgebra, w: &OperatorBasis, p: &DiffPolynomial) -> Result<Option<Vec<usize>>> {
    p.check_labels(w)?;
    for q in multilinearize(p) {
        let k = q.variables().len();
        let tuples = witness_tuples(a, k)?;
        let hit = tuples.par_iter().find_map_first(|t| {
            let assignment: BTreeMap<u32, SparseVec> =
                t.iter().enumerate().map(|(v, &b)| (v as u32, a.basis_vector(b))).collect();
            match evaluate(&q, a, w, &assignment) {
                Ok(v) if v.is_zero() => None,
                other => Some(other.map(|_| t.clone())),
            }
        });
        if let Some(found) = hit {
            return found.map(Some);
        }
    }
    Ok(None)
}

/// Whether `p` vanishes on `A` (each multilinear component on every basis tuple).
pub fn is_identity(a: &FDAlgebra, w: &OperatorBasis, p: &DiffPolynomial) -> Result<bool> {
    Ok(identity_witness(a, w, p)?.is_none())
}

/// Cocharacter multiplicities with the traces they came from.
#[derive(Clone, Debug, Serialize)]
pub struct Cocharacter {
    pub n: usize,
    pub c_n: usize,
    pub multiplicities: MultiplicityMap,
    /// `(cycle type, trace)` per conjugacy class.
    pub traces: Vec<(String, Scalar)>,
}

/// Traces of one permutation per cycle type on the quotient described by the reduced
/// evaluation functionals, decomposed into irreducible characters.
pub fn cocharacter_from_functionals(functionals: &RankAccumulator, n: usize, dim_w: usize) -> Result<Cocharacter> {
    let idx = MultilinearIndex::new(n, dim_w)?;
    let mut traces = BTreeMap::new();
    for ct in CycleType::all(n) {
        let sigma = ct.representative();
        let tr = functionals
            .trace_on_annihilator_quotient(|p| SparseVec::unit(idx.len(), idx.permute(&sigma, p)));
        traces.insert(ct, tr);
    }
    finish(n, functionals.rank(), traces)
}

/// The same decomposition computed from a kernel basis (for example a consequence space)
/// by reducing images modulo the kernel.
pub fn cocharacter_from_kernel(kernel: &RankAccumulator, n: usize, dim_w: usize) -> Result<Cocharacter> {
    let idx = MultilinearIndex::new(n, dim_w)?;
    let rows: Vec<SparseVec> = kernel.rows().into_iter().cloned().collect();
    let quotient = kernel.non_pivots();
    let mut traces = BTreeMap::new();
    for ct in CycleType::all(n) {
        let sigma = ct.representative();
        let tr = crate::exactla::trace_on_quotient(
            idx.len(),
            &rows,
            |q| SparseVec::unit(idx.len(), idx.permute(&sigma, q)),
            &quotient,
        )?;
        traces.insert(ct, tr);
    }
    finish(n, quotient.len(), traces)
}

fn finish(n: usize, c_n: usize, traces: BTreeMap<crate::repsn::CycleType, Scalar>) -> Result<Cocharacter> {
    let multiplicities = decompose(&traces, n)?;
    if multiplicities.weighted_total() != c_n as u64 {
        return Err(Error::InconsistentBasis(format!(
            "multiplicities account for dimension {}, not {c_n}",
            multiplicities.weighted_total()
        )));
    }
    Ok(Cocharacter {
        n,
        c_n,
        multiplicities,
        traces: traces.into_iter().map(|(c, t)| (c.to_string(), t)).collect(),
    })
}

/// `χ_n(A) = Σ m_λ χ_λ`; needs an exact plan.
pub fn cocharacter(a: &FDAlgebra, w: &OperatorBasis, n: usize, plan: &EvaluationPlan) -> Result<Cocharacter> {
    if !plan.is_exact() {
        return Err(Error::Plan("cocharacters need the exact kernel of a full or canonical run".into()));
    }
    let report = codimension(a, w, n, plan)?;
    cocharacter_from_functionals(&report.functionals, n, w.dim())
}
