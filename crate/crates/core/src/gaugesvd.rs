//! Ordered SVD, degeneracy blocks and block projections.
//!
//! When singular values repeat, the singular vectors are fixed only up
//! to an orthogonal rotation inside each block (and independent rotations
//! on the two sides of the zero block). No canonical gauge is chosen here;
//! the quantities built on top of these blocks are the gauge-free ones.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complete_orthonormal, jacobi_svd};

pub const DEFAULT_EPS_DEG: f64 = 1e-8;
pub const DEFAULT_EPS_ZERO: f64 = 1e-10;

/// Thresholds that decide block membership. Both are relative to
/// `max(σ₁, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralThresholds {
    pub eps_deg: f64,
    pub eps_zero: f64,
}

impl Default for SpectralThresholds {
    fn default() -> Self {
        Self {
            eps_deg: DEFAULT_EPS_DEG,
            eps_zero: DEFAULT_EPS_ZERO,
        }
    }
}

/// `m = P · Σ · Qᵗ` with square orthogonal `P`, `Q` and nonincreasing `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSvd {
    pub p: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub q: DMatrix<f64>,
}

impl OrderedSvd {
    /// `P Σ Qᵗ` with `Σ` padded to the original shape.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let (m, n) = (self.p.nrows(), self.q.nrows());
        let mut s = DMatrix::zeros(m, n);
        for (i, &v) in self.sigma.iter().enumerate() {
            s[(i, i)] = v;
        }
        &self.p * s * self.q.transpose()
    }
}

pub fn ordered_svd(m: &DMatrix<f64>) -> Result<OrderedSvd> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(OrderedSvd {
            p: DMatrix::identity(rows, rows),
            sigma: DVector::zeros(0),
            q: DMatrix::identity(cols, cols),
        });
    }
    // Work on the tall orientation; for a wide matrix the roles of the
    // two factors swap.
    let wide = rows < cols;
    let tall = if wide { m.transpose() } else { m.clone() };
    let (w, v) = jacobi_svd(&tall)?;
    let norms: Vec<f64> = w.column_iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let k = norms.len();
    let sigma = DVector::from_iterator(k, order.iter().map(|&i| norms[i]));
    // Columns this small carry no reliable direction; they are replaced by
    // the orthogonal completion, at a reconstruction cost of at most σⱼ.
    let floor = f64::EPSILON * (rows.max(cols) as f64) * sigma[0];
    let kept = sigma.iter().take_while(|&&s| s > floor && s > 0.0).count();
    let mut left = DMatrix::zeros(tall.nrows(), kept);
    let mut right = DMatrix::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        if dst < kept {
            left.column_mut(dst).copy_from(&(w.column(src) / norms[src]));
        }
        right.column_mut(dst).copy_from(&v.column(src));
    }
    let left = complete_orthonormal(&left);
    let (p, q) = if wide { (right, left) } else { (left, right) };
    Ok(OrderedSvd { p, sigma, q })
}

/// Singular values grouped into degeneracy blocks.
///
/// `n_blocks` counts every block including the zero block; `n_prime` is
/// the number of blocks with a nonzero singular value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpectrum {
    pub distinct_values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub has_zero_block: bool,
    pub n_blocks: usize,
    pub n_prime: usize,
}

impl BlockSpectrum {
    pub fn side(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Offsets of each block in a vector of length [`side`](Self::side).
    pub fn offsets(&self) -> Vec<usize> {
        self.multiplicities
            .iter()
            .scan(0, |acc, &m| {
                let start = *acc;
                *acc += m;
                Some(start)
            })
            .collect()
    }

    /// Same nonzero blocks, with the zero block grown to fill `side`.
    ///
    /// Used for the longer side of a rectangular SVD, where the extra
    /// singular directions all belong to the zero block.
    pub fn with_side(&self, side: usize) -> Result<BlockSpectrum> {
        let nonzero: usize = self.multiplicities[..self.n_prime].iter().sum();
        if side < nonzero {
            return Err(Error::InvalidShape(format!(
                "side {side} cannot hold {nonzero} nonzero singular directions"
            )));
        }
        let mut distinct_values = self.distinct_values[..self.n_prime].to_vec();
        let mut multiplicities = self.multiplicities[..self.n_prime].to_vec();
        let zero = side - nonzero;
        if zero > 0 {
            let value = if self.has_zero_block {
                *self.distinct_values.last().expect("zero block present")
            } else {
                0.0
            };
            distinct_values.push(value);
            multiplicities.push(zero);
        }
        Ok(BlockSpectrum {
            n_blocks: multiplicities.len(),
            n_prime: self.n_prime,
            has_zero_block: zero > 0,
            distinct_values,
            multiplicities,
        })
    }
}

/// Groups a nonincreasing spectrum into blocks.
///
/// Values `≤ eps_zero·max(σ₁,1)` form the trailing zero block. Among the
/// rest, neighbours closer than `eps_deg·max(σ₁,1)` share a block
/// (chained, so blocks stay contiguous).
pub fn partition_blocks(sigma: &[f64], eps_deg: f64, eps_zero: f64) -> Result<BlockSpectrum> {
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::InvalidInput("singular values must be finite and nonnegative".into()));
    }
    if let Some(w) = sigma.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::InvalidInput(format!(
            "singular values not sorted: σ[{}] = {} < σ[{}] = {}",
            w,
            sigma[w],
            w + 1,
            sigma[w + 1]
        )));
    }
    let scale = sigma.first().copied().unwrap_or(0.0).max(1.0);
    let zero_cut = eps_zero * scale;
    let deg_gap = eps_deg * scale;

    let nonzero = sigma.iter().take_while(|&&s| s > zero_cut).count();
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for i in 0..nonzero {
        match groups.last_mut() {
            Some((sum, count)) if sigma[i - 1] - sigma[i] <= deg_gap => {
                *sum += sigma[i];
                *count += 1;
            }
            _ => groups.push((sigma[i], 1)),
        }
    }
    let n_prime = groups.len();
    let zeros = sigma.len() - nonzero;
    if zeros > 0 {
        groups.push((sigma[nonzero..].iter().sum(), zeros));
    }
    Ok(BlockSpectrum {
        distinct_values: groups.iter().map(|(s, c)| s / *c as f64).collect(),
        multiplicities: groups.iter().map(|&(_, c)| c).collect(),
        has_zero_block: zeros > 0,
        n_blocks: groups.len(),
        n_prime,
    })
}

/// A vector cut into the contiguous parts of a [`BlockSpectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlockProjection {
    pub parts: Vec<DVector<f64>>,
}

impl BlockProjection {
    pub fn norms(&self) -> Vec<f64> {
        self.parts.iter().map(|p| p.norm()).collect()
    }

    /// `π_m(self)ᵗ π_m(other)` for the first `blocks` blocks.
    pub fn inner(&self, other: &BlockProjection, blocks: usize) -> Result<Vec<f64>> {
        if blocks > self.parts.len() || blocks > other.parts.len() {
            return Err(Error::InvalidShape(format!(
                "{blocks} blocks requested from projections with {} and {}",
                self.parts.len(),
                other.parts.len()
            )));
        }
        self.parts[..blocks]
            .iter()
            .zip(&other.parts[..blocks])
            .map(|(a, b)| {
                if a.len() != b.len() {
                    Err(Error::InvalidShape(format!(
                        "block sizes {} and {} differ",
                        a.len(),
                        b.len()
                    )))
                } else {
                    Ok(a.dot(b))
                }
            })
            .collect()
    }
}

pub fn project_blocks(v: &DVector<f64>, bs: &BlockSpectrum) -> Result<BlockProjection> {
    if v.len() != bs.side() {
        return Err(Error::InvalidShape(format!(
            "vector of length {} against blocks covering {}",
            v.len(),
            bs.side()
        )));
    }
    let parts = bs
        .offsets()
        .into_iter()
        .zip(&bs.multiplicities)
        .map(|(start, &len)| v.rows(start, len).into_owned())
        .collect();
    Ok(BlockProjection { parts })
}
