use luinv_core::bloch::{decompose_bipartite, decompose_bipartite_in, reconstruct_bipartite};
use luinv_core::invariants::{bipartite_fingerprint, compare_fingerprints, feature_matrix, DEFAULT_EPS_CMP};
use luinv_core::{su_generators, BlochBipartite, CMatrix, DensityMatrix, SpectralThresholds, C64};

fn noisy_qutrits(q: f64) -> DensityMatrix {
    let a = 2f64.sqrt() / 4.0;
    let psi = [a, 0.0, 0.0, 0.0, a, 0.0, 0.0, 0.0, 3f64.sqrt() / 2.0];
    let mut m = CMatrix::from_fn(9, 9, |i, j| C64::new(q * psi[i] * psi[j], 0.0));
    for i in [1, 2, 3, 5, 6, 7] {
        m[(i, i)] += C64::new((1.0 - q) / 6.0, 0.0);
    }
    DensityMatrix::new(vec![3, 3], m).unwrap()
}

fn flipped(b: &BlochBipartite) -> DensityMatrix {
    let b2 = BlochBipartite::new(3, b.r().clone(), b.s().clone(), -b.t()).unwrap();
    let rho = reconstruct_bipartite(&b2).unwrap();
    DensityMatrix::new(vec![3, 3], rho.into_entries()).unwrap()
}

#[test]
fn coefficients_in_both_orders() {
    let rho = noisy_qutrits(4.0 / 17.0);
    let (s6, r8) = (6f64.sqrt() / 68.0, -5.0 * 3f64.sqrt() / 306.0);
    let b = decompose_bipartite(&rho).unwrap();
    let canonical = [1.0 / 68.0, -1.0 / 68.0, -5.0 / 102.0, s6, -s6, s6, -s6, 0.0];
    for (i, &diag) in canonical.iter().enumerate() {
        let want_r = if i == 7 { r8 } else { 0.0 };
        assert!((b.r()[i] - want_r).abs() < 1e-12);
        assert!((b.s()[i] - want_r).abs() < 1e-12);
        for j in 0..8 {
            let want = if i == j { diag } else { 0.0 };
            assert!((b.t()[(i, j)] - want).abs() < 1e-12, "T[{i},{j}]");
        }
    }

    let order = [0, 3, 1, 2, 5, 4, 6, 7];
    let basis = su_generators(3).unwrap().relabeled(&order, &[1.0; 8]).unwrap();
    let b = decompose_bipartite_in(&rho, &basis).unwrap();
    let displayed = [1.0 / 68.0, s6, -1.0 / 68.0, -5.0 / 102.0, s6, -s6, -s6, 0.0];
    for (i, want) in displayed.iter().enumerate() {
        assert!((b.t()[(i, i)] - want).abs() < 1e-12);
    }
}

#[test]
fn sign_flip_is_caught_by_det_m_only() {
    let rho = noisy_qutrits(4.0 / 17.0);
    let b = decompose_bipartite(&rho).unwrap();
    let rho2 = flipped(&b);
    let b2 = decompose_bipartite(&rho2).unwrap();
    let th = SpectralThresholds::default();
    let f1 = bipartite_fingerprint(&b, th).unwrap();
    let f2 = bipartite_fingerprint(&b2, th).unwrap();

    let s6 = 6f64.sqrt() / 68.0;
    let want_sigma = [5.0 / 102.0, s6, s6, s6, s6, 1.0 / 68.0, 1.0 / 68.0, 0.0];
    for (s, w) in f1.sigma.iter().zip(want_sigma) {
        assert!((s - w).abs() < 1e-12);
    }
    assert_eq!(f1.blocks.multiplicities, vec![1, 4, 2, 1]);
    assert_eq!(f1.blocks.n_prime, 3);
    assert!(f1.det_t.is_singular());

    let r8 = -5.0 * 3f64.sqrt() / 306.0;
    let prod: f64 = b.t().diagonal().iter().take(7).product();
    let oracle = -prod * r8 * r8;
    assert!((f1.det_m.value - oracle).abs() / oracle.abs() < 1e-9);
    assert!((f2.det_m.value + oracle).abs() / oracle.abs() < 1e-9);

    let m = feature_matrix(&b).unwrap();
    assert!((m.entries()[(0, 8)] - r8).abs() < 1e-12);

    let v = compare_fingerprints(&f1, &f2, DEFAULT_EPS_CMP).unwrap();
    assert!(v.is_not_equivalent());
    let names: Vec<&str> = v.witnesses.iter().map(|w| w.invariant.as_str()).collect();
    assert_eq!(names, ["det_M"]);
}
