use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fdalg::FDAlgebra;
use crate::zoo::canonical_grassmann_plan;

/// Default bound on `dim_A^n · dim_A` for full enumeration.
pub const DEFAULT_CAP: u128 = 10_000_000;

/// Default number of consecutive unproductive tuples that ends a sampled run.
pub const DEFAULT_PATIENCE: usize = 50;

/// How evaluation tuples are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    /// Every tuple of basis elements.
    Full,
    /// Seeded random tuples until the rank stops growing; a lower bound.
    Sampled,
    /// One tuple per support pattern of a truncated Grassmann algebra.
    Canonical,
}

impl std::fmt::Display for PlanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PlanMode::Full => "full",
            PlanMode::Sampled => "sampled",
            PlanMode::Canonical => "canonical",
        })
    }
}

impl std::str::FromStr for PlanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(PlanMode::Full),
            "sampled" => Ok(PlanMode::Sampled),
            "canonical" => Ok(PlanMode::Canonical),
            _ => Err(Error::Plan(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluationPlan {
    pub mode: PlanMode,
    pub seed: u64,
    /// Sampled mode stops after this many consecutive tuples that add no rank.
    pub patience: usize,
    pub cap: u128,
}

/// The cap from `DIFFPI_CAP`, or [`DEFAULT_CAP`].
pub fn configured_cap() -> u128 {
    std::env::var("DIFFPI_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_CAP)
}

impl EvaluationPlan {
    pub fn new(mode: PlanMode) -> Self {
        EvaluationPlan { mode, seed: 0, patience: DEFAULT_PATIENCE, cap: configured_cap() }
    }

    pub fn full() -> Self {
        Self::new(PlanMode::Full)
    }

    pub fn sampled(seed: u64) -> Self {
        EvaluationPlan { seed, ..Self::new(PlanMode::Sampled) }
    }

    pub fn canonical() -> Self {
        Self::new(PlanMode::Canonical)
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_patience(mut self, patience: usize) -> Self {
        self.patience = patience;
        self
    }

    /// Whether a run under this plan yields the exact rank.
    pub fn is_exact(&self) -> bool {
        self.mode != PlanMode::Sampled
    }

    /// The tuples for degree `n` on `a`.
    pub(crate) fn tuples(&self, a: &FDAlgebra, n: usize) -> Result<TupleSource> {
        match self.mode {
            PlanMode::Full => {
                let entries = (a.dim() as u128)
                    .checked_pow(n as u32)
                    .and_then(|t| t.checked_mul(a.dim() as u128))
                    .unwrap_or(u128::MAX);
                if entries > self.cap {
                    return Err(Error::PlanCapExceeded { entries, cap: self.cap });
                }
                Ok(TupleSource::Full { dim: a.dim(), next: Some(vec![0; n]) })
            }
            PlanMode::Canonical => {
                let (m, t) = a.grassmann_shape().ok_or_else(|| {
                    Error::Plan("canonical tuples exist only for truncated Grassmann algebras".into())
                })?;
                let plan = canonical_grassmann_plan(n, t, m)?;
                Ok(TupleSource::Explicit { tuples: plan.tuples, pos: 0 })
            }
            PlanMode::Sampled => Ok(TupleSource::Sampled {
                dim: a.dim(),
                n,
                rng: Box::new(ChaCha8Rng::seed_from_u64(self.seed)),
            }),
        }
    }
}

pub(crate) enum TupleSource {
    Full { dim: usize, next: Option<Vec<usize>> },
    Explicit { tuples: Vec<Vec<usize>>, pos: usize },
    Sampled { dim: usize, n: usize, rng: Box<ChaCha8Rng> },
}

impl TupleSource {
    pub(crate) fn next_chunk(&mut self, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(size);
        match self {
            TupleSource::Full { dim, next } => {
                while out.len() < size {
                    let Some(cur) = next.take() else { break };
                    let mut succ = cur.clone();
                    // odometer, last position fastest
                    let mut k = succ.len();
                    *next = loop {
                        if k == 0 {
                            break None;
                        }
                        k -= 1;
                        succ[k] += 1;
                        if succ[k] < *dim {
                            break Some(succ);
                        }
                        succ[k] = 0;
                    };
                    out.push(cur);
                }
            }
            TupleSource::Explicit { tuples, pos } => {
                let end = (*pos + size).min(tuples.len());
                out.extend_from_slice(&tuples[*pos..end]);
                *pos = end;
            }
            TupleSource::Sampled { dim, n, rng } => {
                for _ in 0..size {
                    out.push((0..*n).map(|_| rng.gen_range(0..*dim)).collect());
                }
            }
        }
        out
    }
}
