//! Field-by-field fingerprint comparison.
//!
//! Equal fingerprints never prove equivalence, so the only outcomes are
//! `NotEquivalent` (some invariant differs) and `Inconclusive`.

use serde::{Deserialize, Serialize};

use super::DetInvariant;
use crate::gaugesvd::BlockSpectrum;

pub const DEFAULT_EPS_CMP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    NotEquivalent,
    Inconclusive,
}

/// One invariant that differs between the two states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub invariant: String,
    pub value1: f64,
    pub value2: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    /// Non-certifying observations, e.g. block structures that disagree
    /// while the spectra agree within tolerance.
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn is_not_equivalent(&self) -> bool {
        self.outcome == Outcome::NotEquivalent
    }

    pub fn witness(&self, name: &str) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.invariant == name)
    }
}

pub(crate) struct Comparator {
    eps_cmp: f64,
    witnesses: Vec<Witness>,
    warnings: Vec<String>,
}

impl Comparator {
    pub fn new(eps_cmp: f64) -> Self {
        Self {
            eps_cmp,
            witnesses: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push(&mut self, invariant: String, a: f64, b: f64) {
        self.witnesses.push(Witness {
            invariant,
            value1: a,
            value2: b,
            delta: (a - b).abs(),
        });
    }

    /// `|a − b| ≤ eps·max(1, |a|, |b|)`; returns whether they matched.
    pub fn scalar(&mut self, name: impl Into<String>, a: f64, b: f64) -> bool {
        let tol = self.eps_cmp * 1f64.max(a.abs()).max(b.abs());
        let ok = (a - b).abs() <= tol;
        if !ok {
            self.push(name.into(), a, b);
        }
        ok
    }

    pub fn list(&mut self, name: &str, a: &[f64], b: &[f64]) -> bool {
        let mut ok = true;
        for (i, (x, y)) in a.iter().zip(b).enumerate() {
            ok &= self.scalar(format!("{name}[{i}]"), *x, *y);
        }
        if a.len() != b.len() {
            self.push(format!("{name}.len"), a.len() as f64, b.len() as f64);
            ok = false;
        }
        ok
    }

    /// Relative comparison widened by the condition number.
    pub fn det(&mut self, name: impl Into<String>, a: &DetInvariant, b: &DetInvariant) -> bool {
        let ok = match (a.condition, b.condition) {
            (None, None) => true,
            (Some(ca), Some(cb)) => {
                let cond = 1f64.max(ca).max(cb);
                let tol = self.eps_cmp * a.value.abs().max(b.value.abs()) * cond;
                (a.value - b.value).abs() <= tol
            }
            _ => false,
        };
        if !ok {
            self.push(name.into(), a.value, b.value);
        }
        ok
    }

    /// Whether block-resolved lists can be compared.
    pub fn blocks(&mut self, name: &str, a: &BlockSpectrum, b: &BlockSpectrum, spectra_agree: bool) -> bool {
        let same = a.multiplicities == b.multiplicities && a.has_zero_block == b.has_zero_block;
        if !same && spectra_agree {
            self.warnings.push(format!(
                "{name}: block structures {:?} and {:?} differ although the spectra agree within tolerance; \
                 the degeneracy/zero thresholds are unstable for these inputs",
                a.multiplicities, b.multiplicities
            ));
        }
        same
    }

    pub fn finish(self) -> Verdict {
        let outcome = if self.witnesses.is_empty() {
            Outcome::Inconclusive
        } else {
            Outcome::NotEquivalent
        };
        Verdict {
            outcome,
            witnesses: self.witnesses,
            warnings: self.warnings,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_tolerance() {
        let mut c = Comparator::new(1e-9);
        assert!(c.scalar("a", 1e-3, 1e-3 + 5e-10));
        assert!(!c.scalar("b", 1e-3, 1e-3 + 2e-9));
        assert!(c.scalar("c", 1e4, 1e4 + 5e-6));
        let v = c.finish();
        assert_eq!(v.outcome, Outcome::NotEquivalent);
        assert_eq!(v.witnesses.len(), 1);
        assert_eq!(v.witnesses[0].invariant, "b");
    }

    #[test]
    fn determinants_compare_relatively() {
        let d = |value, c| DetInvariant { value, condition: Some(c) };
        let mut c = Comparator::new(1e-9);
        assert!(!c.det("opposite", &d(-1.4e-14, 1e3), &d(1.4e-14, 1e3)));
        assert!(c.det("noise", &d(1.4e-14, 1e3), &d(1.4e-14 * (1.0 + 1e-8), 1e3)));
        let zero = DetInvariant { value: 0.0, condition: None };
        assert!(c.det("both singular", &zero, &zero));
        assert!(!c.det("one singular", &zero, &d(1e-3, 10.0)));
        assert_eq!(c.finish().witnesses.len(), 2);
    }

    #[test]
    fn empty_comparison_is_inconclusive() {
        let v = Comparator::new(1e-9).finish();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.witnesses.is_empty());
    }
}
