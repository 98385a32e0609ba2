//! Local-unitary invariant fingerprints and their comparison.

pub mod bipartite;
pub mod tripartite;
pub mod verdict;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gaugesvd::{project_blocks, BlockSpectrum, OrderedSvd};
use crate::linalg::determinant;

/// Determinant of a square matrix together with its 2-norm condition
/// number.
///
/// A matrix whose smallest singular value is at most
/// `eps_zero·max(σ₁, 1)` is treated as singular: `value` is exactly 0 and
/// `condition` is `None`. The condition number sets the comparison
/// tolerance, since the relative error of a computed determinant grows
/// with it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetInvariant {
    pub value: f64,
    pub condition: Option<f64>,
}

impl DetInvariant {
    pub fn of(m: &DMatrix<f64>, eps_zero: f64) -> Result<Self> {
        let value = determinant(m)?;
        if m.is_empty() {
            return Ok(Self { value, condition: Some(1.0) });
        }
        let sv = m.singular_values();
        let max = sv.max();
        let min = sv.min();
        if min <= eps_zero * max.max(1.0) {
            return Ok(Self {
                value: 0.0,
                condition: None,
            });
        }
        Ok(Self {
            value,
            condition: Some(max / min),
        })
    }

    pub fn is_singular(&self) -> bool {
        self.condition.is_none()
    }
}

/// Block-resolved norms and inner products of a pair of vectors rotated
/// into the left and right singular frames.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PairedProjections {
    pub left_norms: Vec<f64>,
    pub right_norms: Vec<f64>,
    pub inner: Vec<f64>,
}

/// `‖π_m(Pᵗ left)‖`, `‖π_m(Qᵗ right)‖` over every block and
/// `π_m(Qᵗ right)ᵗ π_m(Pᵗ left)` over the nonzero blocks.
pub(crate) fn paired_projections(
    svd: &OrderedSvd,
    left: &DVector<f64>,
    right: &DVector<f64>,
    row_blocks: &BlockSpectrum,
    col_blocks: &BlockSpectrum,
) -> Result<PairedProjections> {
    let lp = project_blocks(&(svd.p.transpose() * left), row_blocks)?;
    let rp = project_blocks(&(svd.q.transpose() * right), col_blocks)?;
    let inner = rp.inner(&lp, row_blocks.n_prime)?;
    Ok(PairedProjections {
        left_norms: lp.norms(),
        right_norms: rp.norms(),
        inner,
    })
}

pub use bipartite::{
    bipartite_fingerprint, bipartite_fingerprint_with_svd, compare_fingerprints, feature_matrix, FeatureMatrix,
    InvariantFingerprint,
};
pub use tripartite::{
    compare_tripartite, flat_feature_matrices, pair_feature_matrix, role_invariants_with_svds, tripartite_fingerprint,
    Role, RoleInvariants, TripartiteFingerprint, ROLES,
};
pub use verdict::{Outcome, Verdict, Witness, DEFAULT_EPS_CMP};
