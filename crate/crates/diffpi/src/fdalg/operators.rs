use super::FDAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{SpanSolver, SparseMatrix, SparseVec};

/// Basis of the operator algebra `W ⊆ End(A)` generated by the identity and the
/// derivations, closed under composition.
///
/// Basis element 0 is the identity. Every other element is a word in the generators;
/// the word `[a, b]` denotes `γ_a ∘ γ_b` (apply `γ_b` first).
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim_a: usize,
    generator_names: Vec<String>,
    generators: Vec<SparseMatrix>,
    ops: Vec<SparseMatrix>,
    words: Vec<Vec<usize>>,
    labels: Vec<String>,
    /// `left_mult[γ]` has column `j` equal to the coordinates of `γ ∘ w_j`.
    left_mult: Vec<SparseMatrix>,
    /// `compose[a][b]` holds the coordinates of `w_a ∘ w_b`.
    compose: Vec<Vec<SparseVec>>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn num_generators(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|g| g == name)
    }

    pub fn generator(&self, g: usize) -> &SparseMatrix {
        &self.generators[g]
    }

    pub fn op(&self, w: usize) -> &SparseMatrix {
        &self.ops[w]
    }

    pub fn ops(&self) -> &[SparseMatrix] {
        &self.ops
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn label(&self, w: usize) -> &str {
        &self.labels[w]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The `dim_W × dim_W` matrix of `w ↦ γ ∘ w`.
    pub fn left_mult_table(&self, generator: usize) -> Result<&SparseMatrix> {
        self.left_mult
            .get(generator)
            .ok_or_else(|| Error::UnknownGenerator(format!("#{generator}")))
    }

    /// Coordinates of `w_a ∘ w_b`.
    pub fn compose(&self, a: usize, b: usize) -> &SparseVec {
        &self.compose[a][b]
    }

    /// Image of basis element `j` of the algebra under `w`.
    pub fn apply_to_basis(&self, w: usize, j: usize) -> &SparseVec {
        self.ops[w].column(j)
    }

    /// The operator with the given coordinates over the basis.
    pub fn combination(&self, coords: &SparseVec) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.dim_a, self.dim_a);
        for (w, c) in coords.iter() {
            m = m.add_scaled(c, &self.ops[w]);
        }
        m
    }

    /// Re-derives every composition `γ ∘ w_j` from the matrices and checks it against the
    /// stored tables.
    pub fn check_closed(&self) -> bool {
        self.generators.iter().enumerate().all(|(g, m)| {
            (0..self.dim()).all(|j| {
                let lhs = m.compose(&self.ops[j]);
                lhs == self.combination(self.left_mult[g].column(j))
            })
        })
    }
}

fn word_label(names: &[String], word: &[usize]) -> String {
    if word.is_empty() {
        "1".to_string()
    } else {
        word.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("∘")
    }
}

/// Closes `{identity} ∪ derivations` under composition.
///
/// Words are visited by length and then lexicographically; a word is kept when its
/// operator is independent of the operators kept so far. Only kept words are extended.
pub fn operator_closure(a: &FDAlgebra) -> OperatorBasis {
    let n = a.dim();
    let names: Vec<String> = a.derivations().iter().map(|d| d.name.clone()).collect();
    let gens: Vec<&SparseMatrix> = a.derivations().iter().map(|d| &d.matrix).collect();
    let mut solver = SpanSolver::new(n * n, n * n + 1);
    let mut ops = vec![SparseMatrix::identity(n)];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    solver.try_add(&ops[0].flatten()).expect("shape");
    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        let mut candidates: Vec<(Vec<usize>, SparseMatrix)> = Vec::new();
        for &w in &frontier {
            for (g, m) in gens.iter().enumerate() {
                let mut word = vec![g];
                word.extend_from_slice(&words[w]);
                candidates.push((word, m.compose(&ops[w])));
            }
        }
        candidates.sort_by(|x, y| x.0.cmp(&y.0));
        frontier.clear();
        for (word, m) in candidates {
            if solver.try_add(&m.flatten()).expect("shape").is_some() {
                frontier.push(ops.len());
                ops.push(m);
                words.push(word);
            }
        }
    }
    let dim_w = ops.len();
    let coords = |m: &SparseMatrix| -> SparseVec {
        let c = solver
            .express(&m.flatten())
            .expect("shape")
            .expect("operator algebra is closed under composition");
        debug_assert_eq!(c.dim(), dim_w);
        c
    };
    let left_mult = gens
        .iter()
        .map(|g| {
            let cols = ops.iter().map(|w| coords(&g.compose(w))).collect();
            SparseMatrix::from_columns(dim_w, cols).expect("shape")
        })
        .collect();
    let compose = ops
        .iter()
        .map(|x| ops.iter().map(|y| coords(&x.compose(y))).collect())
        .collect();
    let labels = words.iter().map(|w| word_label(&names, w)).collect();
    let generators = gens.into_iter().cloned().collect();
    OperatorBasis { dim_a: n, generator_names: names, generators, ops, words, labels, left_mult, compose }
}
