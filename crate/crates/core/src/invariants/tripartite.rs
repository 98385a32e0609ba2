//! Three-qudit fingerprints.
//!
//! For each role assignment `(α, β, γ)` in `(1,2,3)`, `(2,1,3)`, `(3,1,2)`:
//! the pair block uses `T_{βγ} = P Σ Qᵗ` with `u₁ = PᵗT_β`, `v₁ = QᵗT_γ`;
//! the flattened block uses `T_{α|βγ} = P' Σ' Q'ᵗ` with `u₂ = u₃ = P'ᵗT_α`,
//! `v₂ = Q'ᵗ(T_β⊗T_γ)` and `v₃ = Q'ᵗ vec(T_{βγ})`. The flattening is
//! `(N²−1) × (N²−1)²`, so `v₂`, `v₃` are projected on the column-side
//! blocks, whose zero block absorbs every direction outside the row rank.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::bipartite::check_comparable_fingerprints;
use super::verdict::{Comparator, Verdict};
use super::{paired_projections, DetInvariant, FeatureMatrix};
use crate::bloch::{flatten_mode, vec_row_major, BlochTripartite};
use crate::error::{Error, Result};
use crate::gaugesvd::{ordered_svd, partition_blocks, BlockSpectrum, OrderedSvd, SpectralThresholds};
use crate::linalg::bordered;

/// A role assignment `(α, β, γ)` with `β < γ`.
pub type Role = [usize; 3];

pub const ROLES: [Role; 3] = [[1, 2, 3], [2, 1, 3], [3, 1, 2]];

fn check_role(role: Role) -> Result<()> {
    if ROLES.contains(&role) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("role {role:?} is not one of {ROLES:?}")))
    }
}

/// `M_{βγ} = [[1, T_γᵗ], [T_β, T_{βγ}]]`.
pub fn pair_feature_matrix(b: &BlochTripartite, beta: usize, gamma: usize) -> Result<FeatureMatrix> {
    let t = b.pair(beta, gamma)?;
    let m = bordered(1.0, b.single(gamma)?, b.single(beta)?, t)?;
    Ok(FeatureMatrix::from_raw(m))
}

/// `(M_{α|βγ}, M̂_{α|βγ})`: the flattening bordered by `T_α` on the left
/// and by `T_β⊗T_γ` or `vec(T_{βγ})` on top.
pub fn flat_feature_matrices(b: &BlochTripartite, alpha: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let [_, beta, gamma] = role_for(alpha)?;
    let flat = flatten_mode(b.triple(), alpha)?;
    let ta = b.single(alpha)?;
    let kron = b.single(beta)?.kronecker(b.single(gamma)?);
    let vec = vec_row_major(b.pair(beta, gamma)?);
    Ok((bordered(1.0, &kron, ta, &flat)?, bordered(1.0, &vec, ta, &flat)?))
}

fn role_for(alpha: usize) -> Result<Role> {
    ROLES
        .iter()
        .copied()
        .find(|r| r[0] == alpha)
        .ok_or_else(|| Error::InvalidInput(format!("alpha {alpha} not in 1..=3")))
}

/// Invariants of one role assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "RoleRepr", try_from = "RoleRepr")]
pub struct RoleInvariants {
    pub role: Role,
    pub sigma_pair: Vec<f64>,
    pub det_t_pair: DetInvariant,
    pub det_m_pair: DetInvariant,
    pub pair_blocks: BlockSpectrum,
    pub u1_norms: Vec<f64>,
    pub v1_norms: Vec<f64>,
    pub uv1_inner: Vec<f64>,
    pub sigma_flat: Vec<f64>,
    pub flat_row_blocks: BlockSpectrum,
    pub flat_col_blocks: BlockSpectrum,
    /// Norms of `u₂`, which equals `u₃`.
    pub u2_norms: Vec<f64>,
    pub v2_norms: Vec<f64>,
    pub uv2_inner: Vec<f64>,
    pub v3_norms: Vec<f64>,
    pub uv3_inner: Vec<f64>,
}

impl RoleInvariants {
    pub fn u3_norms(&self) -> &[f64] {
        &self.u2_norms
    }
}

/// Serialized form: `u3_norms` is written out next to `u2_norms`.
#[derive(Serialize, Deserialize)]
struct RoleRepr {
    role: Role,
    sigma_pair: Vec<f64>,
    det_t_pair: DetInvariant,
    det_m_pair: DetInvariant,
    pair_blocks: BlockSpectrum,
    u1_norms: Vec<f64>,
    v1_norms: Vec<f64>,
    uv1_inner: Vec<f64>,
    sigma_flat: Vec<f64>,
    flat_row_blocks: BlockSpectrum,
    flat_col_blocks: BlockSpectrum,
    u2_norms: Vec<f64>,
    v2_norms: Vec<f64>,
    uv2_inner: Vec<f64>,
    u3_norms: Vec<f64>,
    v3_norms: Vec<f64>,
    uv3_inner: Vec<f64>,
}

impl From<RoleInvariants> for RoleRepr {
    fn from(r: RoleInvariants) -> Self {
        RoleRepr {
            u3_norms: r.u2_norms.clone(),
            role: r.role,
            sigma_pair: r.sigma_pair,
            det_t_pair: r.det_t_pair,
            det_m_pair: r.det_m_pair,
            pair_blocks: r.pair_blocks,
            u1_norms: r.u1_norms,
            v1_norms: r.v1_norms,
            uv1_inner: r.uv1_inner,
            sigma_flat: r.sigma_flat,
            flat_row_blocks: r.flat_row_blocks,
            flat_col_blocks: r.flat_col_blocks,
            u2_norms: r.u2_norms,
            v2_norms: r.v2_norms,
            uv2_inner: r.uv2_inner,
            v3_norms: r.v3_norms,
            uv3_inner: r.uv3_inner,
        }
    }
}

impl TryFrom<RoleRepr> for RoleInvariants {
    type Error = String;

    fn try_from(r: RoleRepr) -> std::result::Result<Self, String> {
        if r.u3_norms != r.u2_norms {
            return Err("u3_norms must equal u2_norms".into());
        }
        check_role(r.role).map_err(|e| e.to_string())?;
        Ok(RoleInvariants {
            role: r.role,
            sigma_pair: r.sigma_pair,
            det_t_pair: r.det_t_pair,
            det_m_pair: r.det_m_pair,
            pair_blocks: r.pair_blocks,
            u1_norms: r.u1_norms,
            v1_norms: r.v1_norms,
            uv1_inner: r.uv1_inner,
            sigma_flat: r.sigma_flat,
            flat_row_blocks: r.flat_row_blocks,
            flat_col_blocks: r.flat_col_blocks,
            u2_norms: r.u2_norms,
            v2_norms: r.v2_norms,
            uv2_inner: r.uv2_inner,
            v3_norms: r.v3_norms,
            uv3_inner: r.uv3_inner,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripartiteFingerprint {
    pub dim: usize,
    pub thresholds: SpectralThresholds,
    pub roles: Vec<RoleInvariants>,
}

pub fn tripartite_fingerprint(b: &BlochTripartite, thresholds: SpectralThresholds) -> Result<TripartiteFingerprint> {
    let roles = ROLES
        .iter()
        .map(|&role| {
            let [alpha, beta, gamma] = role;
            let pair_svd = ordered_svd(b.pair(beta, gamma)?)?;
            let flat_svd = ordered_svd(&flatten_mode(b.triple(), alpha)?)?;
            role_invariants_with_svds(b, role, &pair_svd, &flat_svd, thresholds)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TripartiteFingerprint {
        dim: b.dim(),
        thresholds,
        roles,
    })
}

/// Invariants of one role from caller-supplied factorizations of
/// `T_{βγ}` and `T_{α|βγ}`.
pub fn role_invariants_with_svds(
    b: &BlochTripartite,
    role: Role,
    pair_svd: &OrderedSvd,
    flat_svd: &OrderedSvd,
    thresholds: SpectralThresholds,
) -> Result<RoleInvariants> {
    check_role(role)?;
    let [alpha, beta, gamma] = role;
    let n = b.dim() * b.dim() - 1;
    if pair_svd.p.nrows() != n || pair_svd.q.nrows() != n || flat_svd.p.nrows() != n || flat_svd.q.nrows() != n * n {
        return Err(Error::InvalidShape("factorizations do not match the coefficient shapes".into()));
    }
    let (ta, tb, tg) = (b.single(alpha)?, b.single(beta)?, b.single(gamma)?);
    let t_pair = b.pair(beta, gamma)?;

    let sigma_pair: Vec<f64> = pair_svd.sigma.iter().copied().collect();
    let pair_blocks = partition_blocks(&sigma_pair, thresholds.eps_deg, thresholds.eps_zero)?;
    let s1 = paired_projections(pair_svd, tb, tg, &pair_blocks, &pair_blocks)?;
    let m_pair = pair_feature_matrix(b, beta, gamma)?;

    let sigma_flat: Vec<f64> = flat_svd.sigma.iter().copied().collect();
    let flat_row_blocks = partition_blocks(&sigma_flat, thresholds.eps_deg, thresholds.eps_zero)?;
    let flat_col_blocks = flat_row_blocks.with_side(n * n)?;
    let kron: DVector<f64> = tb.kronecker(tg);
    let vec = vec_row_major(t_pair);
    let s2 = paired_projections(flat_svd, ta, &kron, &flat_row_blocks, &flat_col_blocks)?;
    let s3 = paired_projections(flat_svd, ta, &vec, &flat_row_blocks, &flat_col_blocks)?;
    debug_assert_eq!(s2.left_norms, s3.left_norms);

    Ok(RoleInvariants {
        role,
        det_t_pair: DetInvariant::of(t_pair, thresholds.eps_zero)?,
        det_m_pair: DetInvariant::of(m_pair.entries(), thresholds.eps_zero)?,
        sigma_pair,
        pair_blocks,
        u1_norms: s1.left_norms,
        v1_norms: s1.right_norms,
        uv1_inner: s1.inner,
        sigma_flat,
        flat_row_blocks,
        flat_col_blocks,
        u2_norms: s2.left_norms,
        v2_norms: s2.right_norms,
        uv2_inner: s2.inner,
        v3_norms: s3.right_norms,
        uv3_inner: s3.inner,
    })
}

fn role_label(role: Role) -> String {
    format!("{}|{}{}", role[0], role[1], role[2])
}

pub fn compare_tripartite(f1: &TripartiteFingerprint, f2: &TripartiteFingerprint, eps_cmp: f64) -> Result<Verdict> {
    check_comparable_fingerprints(f1.dim, f2.dim, &f1.thresholds, &f2.thresholds)?;
    let r1: Vec<Role> = f1.roles.iter().map(|r| r.role).collect();
    let r2: Vec<Role> = f2.roles.iter().map(|r| r.role).collect();
    if r1 != r2 {
        return Err(Error::IncomparableFingerprints(format!("role lists {r1:?} and {r2:?} differ")));
    }
    let mut c = Comparator::new(eps_cmp);
    for (a, b) in f1.roles.iter().zip(&f2.roles) {
        let p = role_label(a.role);
        let pair_ok = c.list(&format!("{p}.sigma_pair"), &a.sigma_pair, &b.sigma_pair);
        let flat_ok = c.list(&format!("{p}.sigma_flat"), &a.sigma_flat, &b.sigma_flat);
        c.det(format!("{p}.det_T_pair"), &a.det_t_pair, &b.det_t_pair);
        c.det(format!("{p}.det_M_pair"), &a.det_m_pair, &b.det_m_pair);
        if c.blocks(&format!("{p}.pair_blocks"), &a.pair_blocks, &b.pair_blocks, pair_ok) {
            c.list(&format!("{p}.u1_norms"), &a.u1_norms, &b.u1_norms);
            c.list(&format!("{p}.v1_norms"), &a.v1_norms, &b.v1_norms);
            c.list(&format!("{p}.uv1_inner"), &a.uv1_inner, &b.uv1_inner);
        }
        if c.blocks(&format!("{p}.flat_blocks"), &a.flat_row_blocks, &b.flat_row_blocks, flat_ok) {
            c.list(&format!("{p}.u2_norms"), &a.u2_norms, &b.u2_norms);
            c.list(&format!("{p}.v2_norms"), &a.v2_norms, &b.v2_norms);
            c.list(&format!("{p}.uv2_inner"), &a.uv2_inner, &b.uv2_inner);
            c.list(&format!("{p}.v3_norms"), &a.v3_norms, &b.v3_norms);
            c.list(&format!("{p}.uv3_inner"), &a.uv3_inner, &b.uv3_inner);
        }
    }
    Ok(c.finish())
}
