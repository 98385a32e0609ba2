//! Density matrices with party-dimension metadata.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Max-norm tolerance for Hermiticity and unit trace.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Smallest admissible eigenvalue is `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-9;

/// Measured residuals of the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    /// First violated invariant, if any, as an [`Error::InvalidState`].
    pub fn check(&self) -> Result<()> {
        self.check_hermitian()?;
        if self.min_eigenvalue < -PSD_TOL {
            return Err(Error::InvalidState {
                invariant: "positive semidefiniteness",
                residual: -self.min_eigenvalue,
                tolerance: PSD_TOL,
            });
        }
        Ok(())
    }

    fn check_hermitian(&self) -> Result<()> {
        if self.hermiticity.is_nan() || self.hermiticity > HERMITICITY_TOL {
            return Err(Error::InvalidState {
                invariant: "hermiticity",
                residual: self.hermiticity,
                tolerance: HERMITICITY_TOL,
            });
        }
        if self.trace_error.is_nan() || self.trace_error > HERMITICITY_TOL {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                residual: self.trace_error,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(())
    }
}

/// A Hermitian, unit-trace operator on `⊗ C^{dims[i]}`.
///
/// Rows and columns run over the computational product basis with the
/// last party's index varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    entries: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(dims: Vec<usize>, entries: CMatrix) -> Result<Self> {
        check_shape(&dims, &entries)?;
        diagnostics(&entries).check()?;
        Ok(Self { dims, entries })
    }

    /// Validates Hermiticity and trace only.
    ///
    /// Bloch coefficients rotated by an arbitrary orthogonal matrix can
    /// describe an operator that is not positive; this constructor accepts
    /// those.
    pub fn hermitian(dims: Vec<usize>, entries: CMatrix) -> Result<Self> {
        check_shape(&dims, &entries)?;
        hermiticity_and_trace(&entries).check_hermitian()?;
        Ok(Self { dims, entries })
    }

    /// `|ψ⟩⟨ψ|` for a normalized amplitude vector.
    pub fn pure(dims: Vec<usize>, amplitudes: &[C64]) -> Result<Self> {
        let d: usize = dims.iter().product();
        if amplitudes.len() != d {
            return Err(Error::InvalidShape(format!(
                "expected {d} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > HERMITICITY_TOL {
            return Err(Error::InvalidState {
                invariant: "unit norm",
                residual: (norm - 1.0).abs(),
                tolerance: HERMITICITY_TOL,
            });
        }
        let entries = CMatrix::from_fn(d, d, |r, c| amplitudes[r] * amplitudes[c].conj());
        Self::new(dims, entries)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// Total Hilbert-space dimension.
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        diagnostics(&self.entries)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Max-norm distance `max |ρ_ij − σ_ij|`.
    pub fn max_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Frobenius distance.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.entries - &other.entries).norm()
    }
}

fn check_shape(dims: &[usize], entries: &CMatrix) -> Result<()> {
    if dims.is_empty() || dims.len() > 3 {
        return Err(Error::UnsupportedShape(format!(
            "expected 1 to 3 parties, got {}",
            dims.len()
        )));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension {
            dim: d,
            reason: "party dimensions must be >= 2",
        });
    }
    let d: usize = dims.iter().product();
    if entries.nrows() != d || entries.ncols() != d {
        return Err(Error::InvalidShape(format!(
            "dims {dims:?} need a {d}x{d} matrix, got {}x{}",
            entries.nrows(),
            entries.ncols()
        )));
    }
    if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

fn hermiticity_and_trace(m: &CMatrix) -> StateDiagnostics {
    let hermiticity = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let trace_error = (m.trace() - C64::new(1.0, 0.0)).norm();
    StateDiagnostics {
        hermiticity,
        trace_error,
        min_eigenvalue: f64::NAN,
    }
}

fn diagnostics(m: &CMatrix) -> StateDiagnostics {
    let mut d = hermiticity_and_trace(m);
    d.min_eigenvalue = hermitian_eigenvalues(m)
        .first()
        .copied()
        .unwrap_or(f64::NAN);
    d
}

pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}
