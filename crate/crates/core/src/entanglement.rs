//! Concurrence of pure two-qudit states and its relation to the block
//! norms of the bipartite fingerprint.
//!
//! For a pure state, `Σ_m ‖π_m(R̃)‖² = Σ_m ‖π_m(S̃)‖² = (N−1)/(2N³)·(1 − C_N²)`
//! with `C_N = √(N/(N−1)·(1 − Tr ρ₁²))`.

use serde::{Deserialize, Serialize};

use crate::bloch::decompose_bipartite;
use crate::error::{Error, Result};
use crate::gaugesvd::SpectralThresholds;
use crate::invariants::bipartite_fingerprint;
use crate::state::DensityMatrix;
use crate::CMatrix;

/// `Tr ρ² > 1 − PURITY_TOL` counts as pure.
pub const PURITY_TOL: f64 = 1e-8;
/// Allowed gap between `‖R‖` and `‖S‖` for a pure state.
pub const NORM_BALANCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceReport {
    pub c: f64,
    pub purity_reduced: f64,
    /// `Σ_m ‖π_m(R̃)‖²`
    pub lhs: f64,
    /// `Σ_m ‖π_m(S̃)‖²`
    pub lhs_s: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Reduced state of the first party.
pub fn partial_trace_first_out(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if dims.len() != 2 {
        return Err(Error::UnsupportedShape(format!(
            "partial trace needs a bipartite state, got {} parties",
            dims.len()
        )));
    }
    let (da, db) = (dims[0], dims[1]);
    let m = rho.entries();
    let reduced = CMatrix::from_fn(da, da, |a, b| (0..db).map(|k| m[(a * db + k, b * db + k)]).sum());
    DensityMatrix::hermitian(vec![da], reduced)
}

pub fn concurrence_pure(rho: &DensityMatrix, thresholds: SpectralThresholds) -> Result<ConcurrenceReport> {
    let purity = rho.purity();
    if purity.is_nan() || purity <= 1.0 - PURITY_TOL {
        return Err(Error::NotPure {
            purity,
            tolerance: PURITY_TOL,
        });
    }
    let n = rho.dims().first().copied().unwrap_or(0) as f64;
    let reduced = partial_trace_first_out(rho)?;
    let purity_reduced = reduced.purity();
    let c = (n / (n - 1.0) * (1.0 - purity_reduced)).clamp(0.0, 1.0).sqrt();

    let bloch = decompose_bipartite(rho)?;
    let (r, s) = (bloch.r().norm(), bloch.s().norm());
    if (r - s).abs() > NORM_BALANCE_TOL {
        return Err(Error::Numerical(format!(
            "pure state with unbalanced local Bloch norms: |R| = {r}, |S| = {s}"
        )));
    }
    let f = bipartite_fingerprint(&bloch, thresholds)?;
    let lhs: f64 = f.r_norms.iter().map(|x| x * x).sum();
    let lhs_s: f64 = f.s_norms.iter().map(|x| x * x).sum();
    let rhs = (n - 1.0) / (2.0 * n.powi(3)) * (1.0 - c * c);
    Ok(ConcurrenceReport {
        c,
        purity_reduced,
        lhs,
        lhs_s,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    fn amps(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn bell_state() {
        let s = 0.5f64.sqrt();
        let rho = DensityMatrix::pure(vec![2, 2], &amps(&[s, 0.0, 0.0, s])).unwrap();
        let red = partial_trace_first_out(&rho).unwrap();
        assert!((red.entries()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!(red.entries()[(0, 1)].norm() < 1e-15);
        let rep = concurrence_pure(&rho, SpectralThresholds::default()).unwrap();
        assert!((rep.c - 1.0).abs() < 1e-12);
        assert!(rep.lhs.abs() < 1e-15 && rep.rhs.abs() < 1e-12);
    }

    #[test]
    fn product_state() {
        let rho = DensityMatrix::pure(vec![2, 2], &amps(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        let rep = concurrence_pure(&rho, SpectralThresholds::default()).unwrap();
        assert!(rep.c.abs() < 1e-12);
        assert!((rep.lhs - 1.0 / 16.0).abs() < 1e-14);
        assert!((rep.rhs - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn cos_sin_family() {
        use std::f64::consts::PI;
        for theta in [0.0, PI / 8.0, PI / 4.0] {
            let rho = DensityMatrix::pure(vec![2, 2], &amps(&[theta.cos(), 0.0, 0.0, theta.sin()])).unwrap();
            let rep = concurrence_pure(&rho, SpectralThresholds::default()).unwrap();
            assert!((rep.c - (2.0 * theta).sin().abs()).abs() < 1e-12, "theta={theta}");
            assert!(rep.residual < 1e-12);
        }
    }

    #[test]
    fn mixed_state_is_rejected() {
        let m = CMatrix::identity(4, 4) * C64::new(0.25, 0.0);
        let rho = DensityMatrix::new(vec![2, 2], m).unwrap();
        assert!(matches!(
            concurrence_pure(&rho, SpectralThresholds::default()),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn partial_trace_needs_two_parties() {
        let m = CMatrix::identity(8, 8) * C64::new(0.125, 0.0);
        let rho = DensityMatrix::new(vec![2, 2, 2], m).unwrap();
        assert!(partial_trace_first_out(&rho).is_err());
    }
}
