//! Hermitian generator basis of SU(N).
//!
//! Generators are emitted in the interleaved order: for `k = 2..=N`, the
//! symmetric and antisymmetric pair for each `j < k`, then the diagonal
//! generator with `k - 1` leading ones. For `N = 3` this is the usual
//! Gell-Mann list λ₁…λ₈; for `N = 2` it is σ₁, σ₂, σ₃.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Non-zero entries `(row, col, value)` of a generator.
pub type SparseEntries = Vec<(usize, usize, C64)>;

/// Ordered list of `N² − 1` traceless Hermitian generators normalized to
/// `Tr(λᵢλⱼ) = 2δᵢⱼ`.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    sparse: Vec<SparseEntries>,
}

impl GeneratorBasis {
    fn build(dim: usize) -> Self {
        let mut generators = Vec::with_capacity(dim * dim - 1);
        for k in 1..dim {
            for j in 0..k {
                let mut sym = CMatrix::zeros(dim, dim);
                sym[(j, k)] = C64::new(1.0, 0.0);
                sym[(k, j)] = C64::new(1.0, 0.0);
                generators.push(sym);

                let mut anti = CMatrix::zeros(dim, dim);
                anti[(j, k)] = C64::new(0.0, -1.0);
                anti[(k, j)] = C64::new(0.0, 1.0);
                generators.push(anti);
            }
            // k counts the leading ones
            let scale = (2.0 / ((k * (k + 1)) as f64)).sqrt();
            let mut diag = CMatrix::zeros(dim, dim);
            for i in 0..k {
                diag[(i, i)] = C64::new(scale, 0.0);
            }
            diag[(k, k)] = C64::new(-(k as f64) * scale, 0.0);
            generators.push(diag);
        }
        Self::from_generators(dim, generators)
    }

    fn from_generators(dim: usize, generators: Vec<CMatrix>) -> Self {
        let sparse = generators.iter().map(sparse_entries).collect();
        Self {
            dim,
            generators,
            sparse,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `N² − 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, index: usize) -> &CMatrix {
        &self.generators[index]
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn sparse(&self, index: usize) -> &[(usize, usize, C64)] {
        &self.sparse[index]
    }

    /// A new basis `λ'ₖ = signs[k]·λ_{order[k]}`.
    ///
    /// This is an orthogonal change of coefficient basis (a signed
    /// permutation), so every comparison made entirely inside one
    /// relabeled basis gives the same verdict as in the canonical one.
    pub fn relabeled(&self, order: &[usize], signs: &[f64]) -> Result<Self> {
        let n = self.len();
        if order.len() != n || signs.len() != n {
            return Err(Error::InvalidShape(format!(
                "relabeling needs {n} indices and signs, got {} and {}",
                order.len(),
                signs.len()
            )));
        }
        let mut seen = vec![false; n];
        for &i in order {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput(format!(
                    "relabeling {order:?} is not a permutation of 0..{n}"
                )));
            }
        }
        if signs.iter().any(|s| *s != 1.0 && *s != -1.0) {
            return Err(Error::InvalidInput("relabeling signs must be ±1".into()));
        }
        let generators = order
            .iter()
            .zip(signs)
            .map(|(&i, &s)| self.generators[i].map(|z| z * s))
            .collect();
        Ok(Self::from_generators(self.dim, generators))
    }

    /// `Tr(m·λᵢ)` for a dense `m` of side `N`.
    pub fn trace_with(&self, m: &CMatrix, index: usize) -> C64 {
        self.sparse[index]
            .iter()
            .map(|&(r, c, v)| m[(c, r)] * v)
            .sum()
    }

    /// Expansion `h = (Tr h / N)·I + Σ cᵢλᵢ` of a Hermitian matrix.
    ///
    /// Returns `(Tr h, c)` with `cᵢ = Tr(hλᵢ)/2`.
    pub fn expand(&self, h: &CMatrix) -> Result<(f64, Vec<f64>)> {
        if h.nrows() != self.dim || h.ncols() != self.dim {
            return Err(Error::InvalidShape(format!(
                "expected {0}x{0} matrix, got {1}x{2}",
                self.dim,
                h.nrows(),
                h.ncols()
            )));
        }
        let trace = h.trace();
        let coeffs = (0..self.len())
            .map(|i| self.trace_with(h, i).re / 2.0)
            .collect();
        Ok((trace.re, coeffs))
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn synthesize(&self, trace: f64, coeffs: &[f64]) -> Result<CMatrix> {
        if coeffs.len() != self.len() {
            return Err(Error::InvalidShape(format!(
                "expected {} coefficients, got {}",
                self.len(),
                coeffs.len()
            )));
        }
        let mut out = CMatrix::identity(self.dim, self.dim) * C64::new(trace / self.dim as f64, 0.0);
        for (c, entries) in coeffs.iter().zip(&self.sparse) {
            for &(r, col, v) in entries {
                out[(r, col)] += v * *c;
            }
        }
        Ok(out)
    }

    /// Real Gram matrix `Tr(λᵢλⱼ)`.
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| self.trace_with(&self.generators[j], i).re)
    }
}

fn sparse_entries(m: &CMatrix) -> SparseEntries {
    let mut out = Vec::new();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v.re != 0.0 || v.im != 0.0 {
                out.push((r, c, v));
            }
        }
    }
    out
}

static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();

/// Canonical generator basis for SU(`dim`), built once per dimension.
pub fn su_generators(dim: usize) -> Result<Arc<GeneratorBasis>> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            dim,
            reason: "SU(N) generators need N >= 2",
        });
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    Ok(guard
        .entry(dim)
        .or_insert_with(|| Arc::new(GeneratorBasis::build(dim)))
        .clone())
}
