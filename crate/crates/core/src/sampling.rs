//! Seeded random states, Haar unitaries and local-unitary orbits.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`). A seed fully determines
//! the stream, so every sample in tests and fixtures is reproducible.
//! Haar sampling yields U(N) rather than SU(N); the global phase cancels in
//! conjugation and in [`adjoint_rotation`].

use nalgebra::DMatrix;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gellmann::GeneratorBasis;
use crate::state::{hermitian_eigenvalues, DensityMatrix};
use crate::{CMatrix, C64};

/// Identifier of the stream contract: algorithm and crate version family.
pub const RNG_ALGORITHM: &str = "chacha20/rand_chacha-0.9";

/// Unitarity residual accepted by [`apply_lu`] and [`adjoint_rotation`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Eigenvalues above this count towards the rank of a sampled state.
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn algorithm(&self) -> &'static str {
        RNG_ALGORITHM
    }

    /// Independent child stream, e.g. one per worker or per test case.
    pub fn fork(&mut self) -> SeededRng {
        SeededRng::new(self.inner.next_u64())
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Complex Gaussian with `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let re = self.standard_normal();
        let im = self.standard_normal();
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        // column-major fill order is part of the stream contract
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Real matrix with independent standard normal entries.
    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DMatrix<f64> {
        DMatrix::from_fn(rows, cols, |_, _| self.standard_normal())
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Haar-distributed unitary: Ginibre matrix, QR, then the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> Result<CMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension {
            dim,
            reason: "unitary needs dim >= 1",
        });
    }
    let qr = rng.ginibre(dim, dim).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Random state `G G† / Tr(G G†)` with `G` a `d × rank` Ginibre matrix,
/// `d = ∏ dims`.
pub fn random_density(dims: &[usize], rank: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if rank == 0 || rank > d {
        return Err(Error::InvalidInput(format!("rank {rank} outside 1..={d}")));
    }
    let g = rng.ginibre(d, rank);
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    // exact Hermitian symmetry
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let rho = DensityMatrix::new(dims.to_vec(), m)?;
    let found = rho.eigenvalues().iter().filter(|&&e| e > RANK_TOL).count();
    if found != rank {
        return Err(Error::Numerical(format!(
            "sampled state has rank {found}, expected {rank}"
        )));
    }
    Ok(rho)
}

pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.ncols();
    (u.adjoint() * u - CMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::InvalidShape(format!("{}x{} unitary", u.nrows(), u.ncols())));
    }
    let res = unitarity_residual(u);
    if res.is_nan() || res > UNITARY_TOL {
        return Err(Error::NotUnitary(res));
    }
    Ok(())
}

/// `(U₁⊗…⊗U_p) ρ (U₁⊗…⊗U_p)†`.
pub fn apply_lu(rho: &DensityMatrix, locals: &[CMatrix]) -> Result<DensityMatrix> {
    if locals.len() != rho.parties() {
        return Err(Error::InvalidShape(format!(
            "{} local unitaries for a {}-party state",
            locals.len(),
            rho.parties()
        )));
    }
    for (u, &d) in locals.iter().zip(rho.dims()) {
        if u.nrows() != d {
            return Err(Error::InvalidShape(format!(
                "party of dimension {d} got a {}x{} unitary",
                u.nrows(),
                u.ncols()
            )));
        }
        check_unitary(u)?;
    }
    let full = locals[1..]
        .iter()
        .fold(locals[0].clone(), |acc, u| acc.kronecker(u));
    let m = &full * rho.entries() * full.adjoint();
    let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::hermitian(rho.dims().to_vec(), m)
}

/// Real orthogonal matrix `O(u)ᵢⱼ = ½ Tr(λᵢ u λⱼ u†)`.
///
/// With this convention the coefficients of `(u⊗v)ρ(u⊗v)†` are
/// `R' = O(u)R`, `S' = O(v)S`, `T' = O(u) T O(v)ᵗ`.
pub fn adjoint_rotation(u: &CMatrix, basis: &GeneratorBasis) -> Result<DMatrix<f64>> {
    if u.nrows() != basis.dim() {
        return Err(Error::InvalidShape(format!(
            "{}x{} unitary for a basis of SU({})",
            u.nrows(),
            u.ncols(),
            basis.dim()
        )));
    }
    check_unitary(u)?;
    let n = basis.len();
    let ud = u.adjoint();
    let mut o = DMatrix::zeros(n, n);
    for j in 0..n {
        let w = u * basis.generator(j) * &ud;
        for i in 0..n {
            o[(i, j)] = 0.5 * basis.trace_with(&w, i).re;
        }
    }
    Ok(o)
}

/// Count of eigenvalues above [`RANK_TOL`].
pub fn numerical_rank(rho: &DensityMatrix) -> usize {
    hermitian_eigenvalues(rho.entries())
        .into_iter()
        .filter(|&e| e > RANK_TOL)
        .count()
}
