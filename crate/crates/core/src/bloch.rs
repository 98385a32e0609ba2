//! Generalized Bloch representations of two- and three-qudit states.
//!
//! Bipartite:
//! `ρ = I⊗I/N² + Σ Rᵢ λᵢ⊗I + Σ Sⱼ I⊗λⱼ + Σ Tᵢⱼ λᵢ⊗λⱼ` with
//! `Rᵢ = Tr(ρ λᵢ⊗I)/(2N)`, `Sⱼ = Tr(ρ I⊗λⱼ)/(2N)`, `Tᵢⱼ = Tr(ρ λᵢ⊗λⱼ)/4`.
//!
//! Tripartite, each coefficient is the trace against the matching product
//! of generators and identities divided by its squared Hilbert-Schmidt
//! norm: `2N²` for single-party terms, `4N` for pairs, `8` for the triple.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gellmann::{su_generators, GeneratorBasis};
use crate::state::DensityMatrix;
use crate::{CMatrix, C64};

/// Imaginary residue of a coefficient trace above which a state is rejected.
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Coefficients `(R, S, T)` of a two-qudit state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochBipartite {
    dim: usize,
    r: DVector<f64>,
    s: DVector<f64>,
    t: DMatrix<f64>,
}

impl BlochBipartite {
    pub fn new(dim: usize, r: DVector<f64>, s: DVector<f64>, t: DMatrix<f64>) -> Result<Self> {
        let n = generator_count(dim)?;
        if r.len() != n || s.len() != n || t.shape() != (n, n) {
            return Err(Error::InvalidShape(format!(
                "N={dim} needs R, S of length {n} and a {n}x{n} T; got {}, {}, {}x{}",
                r.len(),
                s.len(),
                t.nrows(),
                t.ncols()
            )));
        }
        Ok(Self { dim, r, s, t })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self) -> &DVector<f64> {
        &self.r
    }

    pub fn s(&self) -> &DVector<f64> {
        &self.s
    }

    pub fn t(&self) -> &DMatrix<f64> {
        &self.t
    }
}

/// Dense cubic order-3 tensor, row-major over `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    side: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(side: usize) -> Self {
        Self {
            side,
            data: vec![0.0; side * side * side],
        }
    }

    pub fn from_vec(side: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != side * side * side {
            return Err(Error::InvalidShape(format!(
                "cubic tensor of side {side} needs {} entries, got {}",
                side * side * side,
                data.len()
            )));
        }
        Ok(Self { side, data })
    }

    pub fn from_fn(side: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(side * side * side);
        for i in 0..side {
            for j in 0..side {
                for k in 0..side {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { side, data }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.side + j) * self.side + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Coefficients of a three-qudit state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochTripartite {
    dim: usize,
    singles: [DVector<f64>; 3],
    /// T₁₂, T₁₃, T₂₃
    pairs: [DMatrix<f64>; 3],
    triple: Tensor3,
}

impl BlochTripartite {
    pub fn new(dim: usize, singles: [DVector<f64>; 3], pairs: [DMatrix<f64>; 3], triple: Tensor3) -> Result<Self> {
        let n = generator_count(dim)?;
        let ok = singles.iter().all(|v| v.len() == n)
            && pairs.iter().all(|m| m.shape() == (n, n))
            && triple.side() == n;
        if !ok {
            return Err(Error::InvalidShape(format!(
                "N={dim} needs vectors of length {n}, {n}x{n} matrices and a side-{n} tensor"
            )));
        }
        Ok(Self {
            dim,
            singles,
            pairs,
            triple,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Single-party vector `T_party`, `party ∈ {1, 2, 3}`.
    pub fn single(&self, party: usize) -> Result<&DVector<f64>> {
        match party {
            1..=3 => Ok(&self.singles[party - 1]),
            _ => Err(Error::InvalidInput(format!("party label {party} not in 1..=3"))),
        }
    }

    /// Pair matrix `T_{βγ}` for `β < γ`.
    pub fn pair(&self, beta: usize, gamma: usize) -> Result<&DMatrix<f64>> {
        match (beta, gamma) {
            (1, 2) => Ok(&self.pairs[0]),
            (1, 3) => Ok(&self.pairs[1]),
            (2, 3) => Ok(&self.pairs[2]),
            _ => Err(Error::InvalidInput(format!(
                "pair ({beta},{gamma}) is not one of (1,2), (1,3), (2,3)"
            ))),
        }
    }

    pub fn triple(&self) -> &Tensor3 {
        &self.triple
    }
}

fn generator_count(dim: usize) -> Result<usize> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            dim,
            reason: "Bloch coefficients need N >= 2",
        });
    }
    Ok(dim * dim - 1)
}

type Sparse<'a> = &'a [(usize, usize, C64)];

/// `Tr(ρ · A₁⊗…⊗A_p)` with each factor given by its non-zero entries.
fn trace_product(rho: &CMatrix, dim: usize, factors: &[Sparse<'_>]) -> C64 {
    fn walk(rho: &CMatrix, dim: usize, factors: &[Sparse<'_>], row: usize, col: usize, weight: C64, acc: &mut C64) {
        match factors.split_first() {
            None => *acc += rho[(col, row)] * weight,
            Some((head, rest)) => {
                for &(r, c, v) in head.iter() {
                    walk(rho, dim, rest, row * dim + r, col * dim + c, weight * v, acc);
                }
            }
        }
    }
    let mut acc = C64::new(0.0, 0.0);
    walk(rho, dim, factors, 0, 0, C64::new(1.0, 0.0), &mut acc);
    acc
}

/// Adds `coeff · A₁⊗…⊗A_p` into `out`.
fn scatter_product(out: &mut CMatrix, dim: usize, factors: &[Sparse<'_>], coeff: f64) {
    fn walk(out: &mut CMatrix, dim: usize, factors: &[Sparse<'_>], row: usize, col: usize, weight: C64) {
        match factors.split_first() {
            None => out[(row, col)] += weight,
            Some((head, rest)) => {
                for &(r, c, v) in head.iter() {
                    walk(out, dim, rest, row * dim + r, col * dim + c, weight * v);
                }
            }
        }
    }
    if coeff != 0.0 {
        walk(out, dim, factors, 0, 0, C64::new(coeff, 0.0));
    }
}

fn identity_entries(dim: usize) -> Vec<(usize, usize, C64)> {
    (0..dim).map(|i| (i, i, C64::new(1.0, 0.0))).collect()
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOL {
        return Err(Error::InvalidState {
            invariant: "real Bloch coefficients",
            residual: z.im.abs(),
            tolerance: IMAGINARY_TOL,
        });
    }
    Ok(z.re)
}

fn equal_party_dim(rho: &DensityMatrix, parties: usize) -> Result<usize> {
    let dims = rho.dims();
    if dims.len() != parties {
        return Err(Error::UnsupportedShape(format!(
            "expected {parties} parties, got {}",
            dims.len()
        )));
    }
    if dims.iter().any(|&d| d != dims[0]) {
        return Err(Error::UnsupportedShape(format!(
            "party dimensions must be equal, got {dims:?}"
        )));
    }
    Ok(dims[0])
}

fn check_basis(basis: &GeneratorBasis, dim: usize) -> Result<()> {
    if basis.dim() != dim {
        return Err(Error::InvalidShape(format!(
            "basis is for N={}, state has N={dim}",
            basis.dim()
        )));
    }
    Ok(())
}

/// Bipartite coefficients in the canonical generator basis.
pub fn decompose_bipartite(rho: &DensityMatrix) -> Result<BlochBipartite> {
    let dim = equal_party_dim(rho, 2)?;
    decompose_bipartite_in(rho, &*su_generators(dim)?)
}

pub fn decompose_bipartite_in(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochBipartite> {
    let dim = equal_party_dim(rho, 2)?;
    check_basis(basis, dim)?;
    let m = rho.entries();
    let n = basis.len();
    let id = identity_entries(dim);
    let scale = 2.0 * dim as f64;

    let mut r = DVector::zeros(n);
    let mut s = DVector::zeros(n);
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        r[i] = real_part(trace_product(m, dim, &[basis.sparse(i), &id]))? / scale;
        s[i] = real_part(trace_product(m, dim, &[&id, basis.sparse(i)]))? / scale;
        for j in 0..n {
            t[(i, j)] = real_part(trace_product(m, dim, &[basis.sparse(i), basis.sparse(j)]))? / 4.0;
        }
    }
    BlochBipartite::new(dim, r, s, t)
}

/// Sum of the bipartite expansion. Positivity is not checked.
pub fn reconstruct_bipartite(b: &BlochBipartite) -> Result<DensityMatrix> {
    reconstruct_bipartite_in(b, &*su_generators(b.dim())?)
}

pub fn reconstruct_bipartite_in(b: &BlochBipartite, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    let dim = b.dim();
    check_basis(basis, dim)?;
    let n = basis.len();
    let id = identity_entries(dim);
    let d = dim * dim;
    let mut out = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    for i in 0..n {
        scatter_product(&mut out, dim, &[basis.sparse(i), &id], b.r[i]);
        scatter_product(&mut out, dim, &[&id, basis.sparse(i)], b.s[i]);
        for j in 0..n {
            scatter_product(&mut out, dim, &[basis.sparse(i), basis.sparse(j)], b.t[(i, j)]);
        }
    }
    DensityMatrix::hermitian(vec![dim, dim], out)
}

/// Tripartite coefficients in the canonical generator basis.
pub fn decompose_tripartite(rho: &DensityMatrix) -> Result<BlochTripartite> {
    let dim = equal_party_dim(rho, 3)?;
    decompose_tripartite_in(rho, &*su_generators(dim)?)
}

pub fn decompose_tripartite_in(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochTripartite> {
    let dim = equal_party_dim(rho, 3)?;
    check_basis(basis, dim)?;
    let m = rho.entries();
    let n = basis.len();
    let id = identity_entries(dim);
    let nf = dim as f64;
    let single_scale = 2.0 * nf * nf;
    let pair_scale = 4.0 * nf;

    let single = |party: usize| -> Result<DVector<f64>> {
        let values = (0..n)
            .map(|i| {
                let mut factors: [Sparse<'_>; 3] = [&id, &id, &id];
                factors[party] = basis.sparse(i);
                Ok(real_part(trace_product(m, dim, &factors))? / single_scale)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DVector::from_vec(values))
    };
    let singles = [single(0)?, single(1)?, single(2)?];

    let mut pairs = [DMatrix::zeros(n, n), DMatrix::zeros(n, n), DMatrix::zeros(n, n)];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (basis.sparse(i), basis.sparse(j));
            pairs[0][(i, j)] = real_part(trace_product(m, dim, &[a, b, &id]))? / pair_scale;
            pairs[1][(i, j)] = real_part(trace_product(m, dim, &[a, &id, b]))? / pair_scale;
            pairs[2][(i, j)] = real_part(trace_product(m, dim, &[&id, a, b]))? / pair_scale;
        }
    }

    let mut data = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let z = trace_product(m, dim, &[basis.sparse(i), basis.sparse(j), basis.sparse(k)]);
                data.push(real_part(z)? / 8.0);
            }
        }
    }
    BlochTripartite::new(dim, singles, pairs, Tensor3::from_vec(n, data)?)
}

pub fn reconstruct_tripartite(b: &BlochTripartite) -> Result<DensityMatrix> {
    reconstruct_tripartite_in(b, &*su_generators(b.dim())?)
}

pub fn reconstruct_tripartite_in(b: &BlochTripartite, basis: &GeneratorBasis) -> Result<DensityMatrix> {
    let dim = b.dim();
    check_basis(basis, dim)?;
    let n = basis.len();
    let id = identity_entries(dim);
    let d = dim * dim * dim;
    let mut out = CMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0);
    for i in 0..n {
        let g = basis.sparse(i);
        scatter_product(&mut out, dim, &[g, &id, &id], b.singles[0][i]);
        scatter_product(&mut out, dim, &[&id, g, &id], b.singles[1][i]);
        scatter_product(&mut out, dim, &[&id, &id, g], b.singles[2][i]);
    }
    for i in 0..n {
        for j in 0..n {
            let (a, c) = (basis.sparse(i), basis.sparse(j));
            scatter_product(&mut out, dim, &[a, c, &id], b.pairs[0][(i, j)]);
            scatter_product(&mut out, dim, &[a, &id, c], b.pairs[1][(i, j)]);
            scatter_product(&mut out, dim, &[&id, a, c], b.pairs[2][(i, j)]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let sparse = [basis.sparse(i), basis.sparse(j), basis.sparse(k)];
                scatter_product(&mut out, dim, &sparse, b.triple.get(i, j, k));
            }
        }
    }
    DensityMatrix::hermitian(vec![dim, dim, dim], out)
}

/// Mode-`mode` flattening of a cubic tensor.
///
/// The row index is the subscript of `mode`; the remaining two subscripts
/// index the columns in party order with the later one fastest.
pub fn flatten_mode(t: &Tensor3, mode: usize) -> Result<DMatrix<f64>> {
    let s = t.side();
    let mut out = DMatrix::zeros(s, s * s);
    for i in 0..s {
        for j in 0..s {
            for k in 0..s {
                let (row, col) = match mode {
                    1 => (i, j * s + k),
                    2 => (j, i * s + k),
                    3 => (k, i * s + j),
                    _ => return Err(Error::InvalidInput(format!("mode {mode} not in 1..=3"))),
                };
                out[(row, col)] = t.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// Rows of `m` concatenated, so that `vec(A X Bᵗ) = (A⊗B) vec(X)`.
pub fn vec_row_major(m: &DMatrix<f64>) -> DVector<f64> {
    let cols = m.ncols();
    DVector::from_iterator(m.len(), (0..m.nrows()).flat_map(|r| (0..cols).map(move |c| m[(r, c)])))
}
