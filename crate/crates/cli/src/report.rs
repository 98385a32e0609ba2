//! Report documents: fingerprints, verdicts and Bloch coefficients.

use luinv_core::invariants::{
    bipartite_fingerprint, compare_fingerprints, compare_tripartite, tripartite_fingerprint, DEFAULT_EPS_CMP,
};
use luinv_core::{
    bloch, BlochBipartite, BlochTripartite, DMatrix, DensityMatrix, InvariantFingerprint, Outcome, SpectralThresholds,
    TripartiteFingerprint, Verdict, Witness,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::format::{check_schema, Input, StateFile, SCHEMA_VERSION};

/// Every threshold a report depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub eps_deg: f64,
    pub eps_zero: f64,
    pub eps_cmp: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        let s = SpectralThresholds::default();
        Self {
            eps_deg: s.eps_deg,
            eps_zero: s.eps_zero,
            eps_cmp: DEFAULT_EPS_CMP,
        }
    }
}

impl Thresholds {
    pub fn spectral(&self) -> SpectralThresholds {
        SpectralThresholds {
            eps_deg: self.eps_deg,
            eps_zero: self.eps_zero,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Fingerprint {
    Bipartite(InvariantFingerprint),
    Tripartite(TripartiteFingerprint),
}

impl Fingerprint {
    pub fn of(rho: &DensityMatrix, thresholds: SpectralThresholds) -> Result<Self, CliError> {
        match rho.parties() {
            2 => Ok(Self::Bipartite(bipartite_fingerprint(
                &bloch::decompose_bipartite(rho)?,
                thresholds,
            )?)),
            3 => Ok(Self::Tripartite(tripartite_fingerprint(
                &bloch::decompose_tripartite(rho)?,
                thresholds,
            )?)),
            p => Err(CliError::Invalid(format!("fingerprints need 2 or 3 parties, got {p}"))),
        }
    }

    pub fn compare(&self, other: &Self, eps_cmp: f64) -> Result<Verdict, CliError> {
        match (self, other) {
            (Self::Bipartite(a), Self::Bipartite(b)) => Ok(compare_fingerprints(a, b, eps_cmp)?),
            (Self::Tripartite(a), Self::Tripartite(b)) => Ok(compare_tripartite(a, b, eps_cmp)?),
            _ => Err(CliError::Invalid(
                "cannot compare a bipartite with a tripartite fingerprint".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub input_sha256: String,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingerprintReport {
    pub schema_version: String,
    pub dims: Vec<usize>,
    pub thresholds: Thresholds,
    pub fingerprint: Fingerprint,
    pub provenance: Provenance,
}

impl FingerprintReport {
    pub fn build(input: &Input, file: &StateFile, thresholds: Thresholds) -> Result<Self, CliError> {
        let rho = file.to_state(&input.name)?;
        Ok(Self {
            schema_version: SCHEMA_VERSION.into(),
            dims: file.dims.clone(),
            thresholds,
            fingerprint: Fingerprint::of(&rho, thresholds.spectral())?,
            provenance: Provenance {
                input_sha256: input.sha256(),
                seed: file.provenance.as_ref().and_then(|p| p.seed),
            },
        })
    }
}

/// A compare input is either a state file or a previously written report.
pub enum Loaded {
    State(StateFile),
    Report(Box<FingerprintReport>),
}

pub fn load(input: &Input) -> Result<Loaded, CliError> {
    let value = input.json()?;
    if value.get("fingerprint").is_some() {
        let report: FingerprintReport = serde_json::from_value(value).map_err(|e| CliError::parse(&input.name, e))?;
        check_schema(&input.name, &report.schema_version)?;
        Ok(Loaded::Report(Box::new(report)))
    } else {
        Ok(Loaded::State(StateFile::parse(input)?))
    }
}

/// Fingerprint of a compare input under `thresholds`.
///
/// Reports carry their own thresholds and are rejected when those differ
/// from the ones in effect.
pub fn fingerprint_of(input: &Input, thresholds: Thresholds) -> Result<(Vec<usize>, Fingerprint), CliError> {
    match load(input)? {
        Loaded::State(file) => {
            let rho = file.to_state(&input.name)?;
            Ok((file.dims.clone(), Fingerprint::of(&rho, thresholds.spectral())?))
        }
        Loaded::Report(report) => {
            if report.thresholds.spectral() != thresholds.spectral() {
                return Err(CliError::Invalid(format!(
                    "{}: report was built with eps_deg={:e}, eps_zero={:e}; rerun with matching flags",
                    input.name, report.thresholds.eps_deg, report.thresholds.eps_zero
                )));
            }
            Ok((report.dims, report.fingerprint))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema_version: String,
    pub inputs: [String; 2],
    pub thresholds: Thresholds,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub warnings: Vec<String>,
}

impl VerdictReport {
    pub fn new(inputs: [String; 2], thresholds: Thresholds, v: Verdict) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            inputs,
            thresholds,
            outcome: v.outcome,
            witnesses: v.witnesses,
            warnings: v.warnings,
        }
    }
}

/// One line of a batch comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub inputs: [String; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(default)]
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub schema_version: String,
    pub thresholds: Thresholds,
    pub results: Vec<BatchEntry>,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Coefficients {
    Bipartite {
        r: Vec<f64>,
        s: Vec<f64>,
        t: Vec<Vec<f64>>,
    },
    Tripartite {
        t1: Vec<f64>,
        t2: Vec<f64>,
        t3: Vec<f64>,
        t12: Vec<Vec<f64>>,
        t13: Vec<Vec<f64>>,
        t23: Vec<Vec<f64>>,
        /// `t123[i][j][k]`
        t123: Vec<Vec<Vec<f64>>>,
    },
}

impl From<&BlochBipartite> for Coefficients {
    fn from(b: &BlochBipartite) -> Self {
        Self::Bipartite {
            r: b.r().iter().copied().collect(),
            s: b.s().iter().copied().collect(),
            t: rows(b.t()),
        }
    }
}

impl From<&BlochTripartite> for Coefficients {
    fn from(b: &BlochTripartite) -> Self {
        let single = |p| b.single(p).expect("party in range").iter().copied().collect();
        let pair = |x, y| rows(b.pair(x, y).expect("pair in range"));
        let t = b.triple();
        let n = t.side();
        Self::Tripartite {
            t1: single(1),
            t2: single(2),
            t3: single(3),
            t12: pair(1, 2),
            t13: pair(1, 3),
            t23: pair(2, 3),
            t123: (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| t.get(i, j, k)).collect()).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub schema_version: String,
    pub dims: Vec<usize>,
    /// Generator order used for every coefficient index.
    pub basis: String,
    pub coefficients: Coefficients,
}

pub const BASIS_DESCRIPTION: &str =
    "su(N) generators, Tr(l_i l_j) = 2 delta_ij; for k = 2..N: symmetric then antisymmetric for each j < k, then diagonal";
