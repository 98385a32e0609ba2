//! Local-unitary invariants of two- and three-qudit density matrices.
//!
//! A state is expanded over tensor products of SU(N) generators
//! ([`bloch`]). The coefficient vectors and matrices transform by real
//! orthogonal rotations under local unitaries, so quantities built from
//! singular value decompositions of the coefficient matrices, with care
//! for degenerate singular values ([`gaugesvd`]), are invariant on the
//! whole local-unitary orbit. [`invariants`] collects them into
//! fingerprints; a fingerprint mismatch certifies that two states are
//! *not* locally unitarily equivalent. Equal fingerprints are
//! inconclusive.
//!
//! ```
//! use luinv_core::{bloch, invariants, sampling, SpectralThresholds};
//!
//! let mut rng = sampling::SeededRng::new(7);
//! let rho = sampling::random_density(&[2, 2], 2, &mut rng).unwrap();
//! let u = sampling::haar_unitary(2, &mut rng).unwrap();
//! let v = sampling::haar_unitary(2, &mut rng).unwrap();
//! let image = sampling::apply_lu(&rho, &[u, v]).unwrap();
//!
//! let t = SpectralThresholds::default();
//! let f1 = invariants::bipartite_fingerprint(&bloch::decompose_bipartite(&rho).unwrap(), t).unwrap();
//! let f2 = invariants::bipartite_fingerprint(&bloch::decompose_bipartite(&image).unwrap(), t).unwrap();
//! let verdict = invariants::compare_fingerprints(&f1, &f2, invariants::DEFAULT_EPS_CMP).unwrap();
//! assert!(!verdict.is_not_equivalent());
//! ```

pub mod bloch;
pub mod entanglement;
pub mod error;
pub mod gaugesvd;
pub mod gellmann;
pub mod invariants;
pub mod linalg;
pub mod sampling;
pub mod state;

pub use nalgebra::{Complex, DMatrix, DVector};

/// Complex double.
pub type C64 = nalgebra::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

pub use bloch::{BlochBipartite, BlochTripartite, Tensor3};
pub use entanglement::ConcurrenceReport;
pub use error::{Error, Result};
pub use gaugesvd::{BlockSpectrum, OrderedSvd, SpectralThresholds};
pub use gellmann::{su_generators, GeneratorBasis};
pub use invariants::{InvariantFingerprint, Outcome, TripartiteFingerprint, Verdict, Witness};
pub use sampling::SeededRng;
pub use state::DensityMatrix;
