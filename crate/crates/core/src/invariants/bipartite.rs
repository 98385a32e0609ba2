//! Two-qudit fingerprints built from the feature matrix
//! `M(ρ) = [[1, Sᵗ], [R, T]]`.
//!
//! With `T = P Σ Qᵗ`, `R̃ = PᵗR` and `S̃ = QᵗS`, the fingerprint holds
//! `Σ`, `det T`, `det M`, the block norms `‖π_m(R̃)‖`, `‖π_m(S̃)‖` for
//! every block, and `π_m(S̃)ᵗπ_m(R̃)` for the nonzero blocks only (the
//! zero block admits independent rotations on its two sides).

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::verdict::{Comparator, Verdict};
use super::{paired_projections, DetInvariant};
use crate::bloch::BlochBipartite;
use crate::error::{Error, Result};
use crate::gaugesvd::{ordered_svd, partition_blocks, BlockSpectrum, OrderedSvd, SpectralThresholds};
use crate::linalg::bordered;

/// The `N² × N²` bordered matrix `[[1, Sᵗ], [R, T]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix(DMatrix<f64>);

impl FeatureMatrix {
    pub(crate) fn from_raw(m: DMatrix<f64>) -> Self {
        Self(m)
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

pub fn feature_matrix(b: &BlochBipartite) -> Result<FeatureMatrix> {
    bordered(1.0, b.s(), b.r(), b.t()).map(FeatureMatrix)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantFingerprint {
    pub dim: usize,
    pub thresholds: SpectralThresholds,
    pub sigma: Vec<f64>,
    pub det_t: DetInvariant,
    pub det_m: DetInvariant,
    pub blocks: BlockSpectrum,
    pub r_norms: Vec<f64>,
    pub s_norms: Vec<f64>,
    pub rs_inner: Vec<f64>,
}

pub fn bipartite_fingerprint(b: &BlochBipartite, thresholds: SpectralThresholds) -> Result<InvariantFingerprint> {
    let svd = ordered_svd(b.t())?;
    bipartite_fingerprint_with_svd(b, &svd, thresholds)
}

/// Fingerprint from a caller-supplied factorization of `T`.
///
/// Any valid ordered SVD of `T` gives the same fingerprint up to
/// roundoff; this entry point exists so that can be checked with
/// deliberately re-gauged factors.
pub fn bipartite_fingerprint_with_svd(
    b: &BlochBipartite,
    svd: &OrderedSvd,
    thresholds: SpectralThresholds,
) -> Result<InvariantFingerprint> {
    let n = b.t().nrows();
    if svd.p.shape() != (n, n) || svd.q.shape() != (n, n) || svd.sigma.len() != n {
        return Err(Error::InvalidShape(format!("factorization does not match a {n}x{n} T")));
    }
    let sigma: Vec<f64> = svd.sigma.iter().copied().collect();
    let blocks = partition_blocks(&sigma, thresholds.eps_deg, thresholds.eps_zero)?;
    let proj = paired_projections(svd, b.r(), b.s(), &blocks, &blocks)?;
    let m = feature_matrix(b)?;
    Ok(InvariantFingerprint {
        dim: b.dim(),
        thresholds,
        det_t: DetInvariant::of(b.t(), thresholds.eps_zero)?,
        det_m: DetInvariant::of(m.entries(), thresholds.eps_zero)?,
        sigma,
        blocks,
        r_norms: proj.left_norms,
        s_norms: proj.right_norms,
        rs_inner: proj.inner,
    })
}

pub(crate) fn check_comparable(d1: usize, d2: usize, t1: &SpectralThresholds, t2: &SpectralThresholds) -> Result<()> {
    if d1 != d2 {
        return Err(Error::IncomparableFingerprints(format!("local dimensions {d1} and {d2} differ")));
    }
    if t1 != t2 {
        return Err(Error::IncomparableFingerprints(format!(
            "fingerprints built with different thresholds {t1:?} and {t2:?}"
        )));
    }
    Ok(())
}

pub(crate) use self::check_comparable as check_comparable_fingerprints;

/// Lists every invariant that differs beyond `eps_cmp`.
pub fn compare_fingerprints(
    f1: &InvariantFingerprint,
    f2: &InvariantFingerprint,
    eps_cmp: f64,
) -> Result<Verdict> {
    check_comparable(f1.dim, f2.dim, &f1.thresholds, &f2.thresholds)?;
    let mut c = Comparator::new(eps_cmp);
    let spectra_agree = c.list("sigma", &f1.sigma, &f2.sigma);
    c.det("det_T", &f1.det_t, &f2.det_t);
    c.det("det_M", &f1.det_m, &f2.det_m);
    if c.blocks("blocks", &f1.blocks, &f2.blocks, spectra_agree) {
        c.list("r_norms", &f1.r_norms, &f2.r_norms);
        c.list("s_norms", &f1.s_norms, &f2.s_norms);
        c.list("rs_inner", &f1.rs_inner, &f2.rs_inner);
    }
    Ok(c.finish())
}
