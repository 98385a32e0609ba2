//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use luinv_cli::format::{to_json_bytes, Input, StateFile};
use luinv_cli::report::{FingerprintReport, Thresholds};
use luinv_core::bloch::{
    decompose_bipartite, decompose_bipartite_in, decompose_tripartite, flatten_mode, reconstruct_bipartite,
    reconstruct_tripartite,
};
use luinv_core::entanglement::{concurrence_pure, partial_trace_first_out};
use luinv_core::gaugesvd::{ordered_svd, BlockSpectrum, OrderedSvd};
use luinv_core::invariants::{
    bipartite_fingerprint, bipartite_fingerprint_with_svd, compare_fingerprints, compare_tripartite, feature_matrix,
    tripartite_fingerprint, InvariantFingerprint, RoleInvariants, TripartiteFingerprint, DEFAULT_EPS_CMP, ROLES,
};
use luinv_core::sampling::{adjoint_rotation, apply_lu, haar_unitary, random_density};
use luinv_core::{
    su_generators, BlochBipartite, CMatrix, DMatrix, DVector, DensityMatrix, SeededRng, SpectralThresholds, C64,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn max_diff(a: &[f64], b: &[f64]) -> Result<f64, String> {
    ensure(a.len() == b.len(), || format!("length {} vs {}", a.len(), b.len()))?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

fn same_blocks(a: &BlockSpectrum, b: &BlockSpectrum) -> Result<(), String> {
    ensure(
        a.multiplicities == b.multiplicities && a.has_zero_block == b.has_zero_block,
        || format!("block structure {:?} vs {:?}", a.multiplicities, b.multiplicities),
    )
}

fn bipartite_gap(a: &InvariantFingerprint, b: &InvariantFingerprint) -> Result<f64, String> {
    same_blocks(&a.blocks, &b.blocks)?;
    Ok([
        max_diff(&a.sigma, &b.sigma)?,
        (a.det_t.value - b.det_t.value).abs(),
        (a.det_m.value - b.det_m.value).abs(),
        max_diff(&a.r_norms, &b.r_norms)?,
        max_diff(&a.s_norms, &b.s_norms)?,
        max_diff(&a.rs_inner, &b.rs_inner)?,
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

fn role_gap(a: &RoleInvariants, b: &RoleInvariants) -> Result<f64, String> {
    same_blocks(&a.pair_blocks, &b.pair_blocks)?;
    same_blocks(&a.flat_row_blocks, &b.flat_row_blocks)?;
    same_blocks(&a.flat_col_blocks, &b.flat_col_blocks)?;
    let lists = [
        (&a.sigma_pair, &b.sigma_pair),
        (&a.u1_norms, &b.u1_norms),
        (&a.v1_norms, &b.v1_norms),
        (&a.uv1_inner, &b.uv1_inner),
        (&a.sigma_flat, &b.sigma_flat),
        (&a.u2_norms, &b.u2_norms),
        (&a.v2_norms, &b.v2_norms),
        (&a.uv2_inner, &b.uv2_inner),
        (&a.v3_norms, &b.v3_norms),
        (&a.uv3_inner, &b.uv3_inner),
    ];
    let mut gap = (a.det_t_pair.value - b.det_t_pair.value)
        .abs()
        .max((a.det_m_pair.value - b.det_m_pair.value).abs());
    for (x, y) in lists {
        gap = gap.max(max_diff(x, y)?);
    }
    Ok(gap)
}

fn tripartite_gap(a: &TripartiteFingerprint, b: &TripartiteFingerprint) -> Result<f64, String> {
    a.roles
        .iter()
        .zip(&b.roles)
        .map(|(x, y)| role_gap(x, y))
        .try_fold(0.0, |acc, g| g.map(|g| f64::max(acc, g)))
}

fn noisy_qutrits(q: f64) -> DensityMatrix {
    let a = 2f64.sqrt() / 4.0;
    let psi = [a, 0.0, 0.0, 0.0, a, 0.0, 0.0, 0.0, 3f64.sqrt() / 2.0];
    let mut m = CMatrix::from_fn(9, 9, |i, j| C64::new(q * psi[i] * psi[j], 0.0));
    for i in [1, 2, 3, 5, 6, 7] {
        m[(i, i)] += C64::new((1.0 - q) / 6.0, 0.0);
    }
    DensityMatrix::new(vec![3, 3], m).expect("valid state")
}

fn load_state(name: &str) -> Result<DensityMatrix, String> {
    let input = Input::read(&fixture(name)).map_err(|e| e.to_string())?;
    StateFile::parse(&input)
        .and_then(|f| f.to_state(name))
        .map_err(|e| e.to_string())
}

fn example_reproduction() -> Check {
    let start = Instant::now();
    let b = decompose_bipartite(&noisy_qutrits(4.0 / 17.0)).map_err(|e| e.to_string())?;
    let order = [0, 3, 1, 2, 5, 4, 6, 7];
    let displayed_basis = su_generators(3).unwrap().relabeled(&order, &[1.0; 8]).unwrap();
    let bd = decompose_bipartite_in(&noisy_qutrits(4.0 / 17.0), &displayed_basis).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    let s6 = 6f64.sqrt() / 68.0;
    let r8 = -5.0 * 3f64.sqrt() / 306.0;
    let rs: Vec<f64> = (0..8).map(|i| if i == 7 { r8 } else { 0.0 }).collect();
    let displayed = [1.0 / 68.0, s6, -1.0 / 68.0, -5.0 / 102.0, s6, -s6, -s6, 0.0];
    let canonical = [1.0 / 68.0, -1.0 / 68.0, -5.0 / 102.0, s6, -s6, s6, -s6, 0.0];
    let diag = |v: &[f64]| DMatrix::from_diagonal(&DVector::from_column_slice(v));
    let err = [
        max_diff(b.r().as_slice(), &rs)?,
        max_diff(b.s().as_slice(), &rs)?,
        (b.t() - diag(&canonical)).amax(),
        max_diff(bd.r().as_slice(), &rs)?,
        (bd.t() - diag(&displayed)).amax(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    ensure(err < 1e-12, || format!("max abs error {err:.3e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {}", ms(elapsed)))?;
    Ok(format!("max abs error {err:.1e} in both generator orders, {}", ms(elapsed)))
}

fn example_separation() -> Check {
    let rho = load_state("example1_rho.json")?;
    let flipped = load_state("example1_rho_flipped.json")?;
    let th = SpectralThresholds::default();
    let b1 = decompose_bipartite(&rho).map_err(|e| e.to_string())?;
    let b2 = decompose_bipartite(&flipped).map_err(|e| e.to_string())?;
    ensure((b2.t() + b1.t()).amax() < 1e-12, || "fixture T' is not -T".into())?;
    let f1 = bipartite_fingerprint(&b1, th).map_err(|e| e.to_string())?;
    let f2 = bipartite_fingerprint(&b2, th).map_err(|e| e.to_string())?;
    let v = compare_fingerprints(&f1, &f2, DEFAULT_EPS_CMP).map_err(|e| e.to_string())?;
    let names: Vec<&str> = v.witnesses.iter().map(|w| w.invariant.as_str()).collect();
    ensure(v.is_not_equivalent() && names == ["det_M"], || format!("witnesses {names:?}"))?;
    ensure(v.warnings.is_empty(), || format!("warnings {:?}", v.warnings))?;
    let shared = [
        max_diff(&f1.sigma, &f2.sigma)?,
        max_diff(&f1.r_norms, &f2.r_norms)?,
        max_diff(&f1.s_norms, &f2.s_norms)?,
        max_diff(&f1.rs_inner, &f2.rs_inner)?,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    ensure(shared < 1e-12, || format!("shared invariants differ by {shared:.3e}"))?;

    // det M = -(T11…T77) R8 S8 from the exact coefficients.
    let s6 = 6f64.sqrt() / 68.0;
    let r8 = -5.0 * 3f64.sqrt() / 306.0;
    let prod = (1.0 / 68.0) * (-1.0 / 68.0) * (-5.0 / 102.0) * s6 * -s6 * s6 * -s6;
    let oracle = -prod * r8 * r8;
    let (d1, d2) = (f1.det_m.value, f2.det_m.value);
    ensure(oracle != 0.0 && d1 != 0.0, || "det_M vanished".into())?;
    ensure((d1 - oracle).abs() < 1e-12 && (d2 + oracle).abs() < 1e-12, || {
        format!("det_M {d1:e}, {d2:e} vs oracle {oracle:e}")
    })?;
    let rel = ((d1 - oracle) / oracle).abs().max(((d2 + oracle) / oracle).abs());
    ensure(rel < 1e-9, || format!("relative det_M error {rel:.3e}"))?;
    let m = feature_matrix(&b1).unwrap();
    ensure((m.entries()[(0, 8)] - r8).abs() < 1e-12, || "feature matrix border".into())?;
    Ok(format!(
        "only det_M differs: {d1:.6e} vs {d2:.6e} (oracle {oracle:.6e}, rel err {rel:.1e})"
    ))
}

fn bipartite_orbit() -> Check {
    let start = Instant::now();
    let th = SpectralThresholds::default();
    let mut worst = 0.0f64;
    let mut count = 0;
    for dim in 2..=4usize {
        let mut rng = SeededRng::new(1000 + dim as u64);
        for i in 0..200 {
            let rank = [1, 2, dim * dim][i % 3];
            let rho = random_density(&[dim, dim], rank, &mut rng).map_err(|e| e.to_string())?;
            let u = [haar_unitary(dim, &mut rng).unwrap(), haar_unitary(dim, &mut rng).unwrap()];
            let image = apply_lu(&rho, &u).map_err(|e| e.to_string())?;
            let f1 = bipartite_fingerprint(&decompose_bipartite(&rho).unwrap(), th).map_err(|e| e.to_string())?;
            let f2 = bipartite_fingerprint(&decompose_bipartite(&image).unwrap(), th).map_err(|e| e.to_string())?;
            let v = compare_fingerprints(&f1, &f2, DEFAULT_EPS_CMP).map_err(|e| e.to_string())?;
            ensure(!v.is_not_equivalent(), || format!("N={dim} sample {i}: witnesses {:?}", v.witnesses))?;
            let gap = bipartite_gap(&f1, &f2).map_err(|e| format!("N={dim} sample {i}: {e}"))?;
            ensure(gap < 1e-9, || format!("N={dim} sample {i}: gap {gap:.3e}"))?;
            worst = worst.max(gap);
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {}", ms(elapsed)))?;
    Ok(format!("{count} pairs, max field gap {worst:.1e}, 0 NotEquivalent, {}", ms(elapsed)))
}

fn random_orthogonal(n: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    let qr = rng.gaussian_matrix(n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn block_rotation(bs: &BlockSpectrum, rng: &mut SeededRng) -> DMatrix<f64> {
    let side = bs.side();
    let mut w = DMatrix::zeros(side, side);
    let mut start = 0;
    for &m in &bs.multiplicities {
        w.view_mut((start, start), (m, m)).copy_from(&random_orthogonal(m, rng));
        start += m;
    }
    w
}

/// Same rotation on both sides of every nonzero block, independent
/// rotations on the two sides of the zero block.
fn regauge(svd: &OrderedSvd, blocks: &BlockSpectrum, rng: &mut SeededRng) -> OrderedSvd {
    let wp = block_rotation(blocks, rng);
    let mut wq = block_rotation(blocks, rng);
    let nz: usize = blocks.multiplicities[..blocks.n_prime].iter().sum();
    wq.view_mut((0, 0), (nz, nz)).copy_from(&wp.view((0, 0), (nz, nz)));
    OrderedSvd {
        p: &svd.p * wp,
        sigma: svd.sigma.clone(),
        q: &svd.q * wq,
    }
}

fn gauge_robustness() -> Check {
    let layouts: [(usize, &[usize], &[f64]); 5] = [
        (2, &[2, 1], &[0.2, 0.0]),
        (2, &[1, 2], &[0.25, 0.0]),
        (3, &[3, 2, 3], &[0.3, 0.2, 0.0]),
        (3, &[1, 4, 2, 1], &[0.1, 0.05, 0.02, 0.0]),
        (4, &[5, 5, 5], &[0.07, 0.03, 0.0]),
    ];
    let th = SpectralThresholds::default();
    let mut rng = SeededRng::new(4);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let (dim, mults, values) = layouts[case % layouts.len()];
        let n = dim * dim - 1;
        let d: Vec<f64> = mults
            .iter()
            .zip(values)
            .flat_map(|(&m, &v)| std::iter::repeat_n(v, m))
            .collect();
        let t = random_orthogonal(n, &mut rng)
            * DMatrix::from_diagonal(&DVector::from_vec(d))
            * random_orthogonal(n, &mut rng).transpose();
        let r = DVector::from_fn(n, |_, _| 0.05 * rng.standard_normal());
        let s = DVector::from_fn(n, |_, _| 0.05 * rng.standard_normal());
        let b = BlochBipartite::new(dim, r, s, t).map_err(|e| e.to_string())?;
        let base = bipartite_fingerprint(&b, th).map_err(|e| e.to_string())?;
        ensure(base.blocks.multiplicities == mults, || {
            format!("case {case}: engineered blocks {mults:?} found {:?}", base.blocks.multiplicities)
        })?;
        let svd = ordered_svd(b.t()).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let g = regauge(&svd, &base.blocks, &mut rng);
            let other = bipartite_fingerprint_with_svd(&b, &g, th).map_err(|e| e.to_string())?;
            let gap = bipartite_gap(&base, &other)?;
            ensure(gap <= 1e-10, || format!("case {case}: invariants moved by {gap:.3e}"))?;
            worst = worst.max(gap);
        }
    }
    Ok(format!("50 engineered T, 3 re-gaugings each, max change {worst:.1e}"))
}

fn feature_matrix_law() -> Check {
    let mut worst = 0.0f64;
    let mut det_err = 0.0f64;
    for dim in 2..=3usize {
        let basis = su_generators(dim).unwrap();
        let mut rng = SeededRng::new(500 + dim as u64);
        let n = dim * dim;
        let lift = |o: &DMatrix<f64>| {
            let mut d = DMatrix::identity(n, n);
            d.view_mut((1, 1), (n - 1, n - 1)).copy_from(o);
            d
        };
        for _ in 0..100 {
            let rho = random_density(&[dim, dim], 1 + rng.next_index(n), &mut rng).map_err(|e| e.to_string())?;
            let (u, v) = (haar_unitary(dim, &mut rng).unwrap(), haar_unitary(dim, &mut rng).unwrap());
            let image = apply_lu(&rho, &[u.clone(), v.clone()]).map_err(|e| e.to_string())?;
            let (ou, ov) = (adjoint_rotation(&u, &basis).unwrap(), adjoint_rotation(&v, &basis).unwrap());
            let m = feature_matrix(&decompose_bipartite(&rho).unwrap()).unwrap().into_inner();
            let m2 = feature_matrix(&decompose_bipartite(&image).unwrap()).unwrap().into_inner();
            let err = (m2 - lift(&ou) * m * lift(&ov).transpose()).norm();
            worst = worst.max(err);
            det_err = det_err.max((ou.determinant() - 1.0).abs()).max((ov.determinant() - 1.0).abs());
        }
    }
    ensure(worst < 1e-10, || format!("Frobenius error {worst:.3e}"))?;
    ensure(det_err < 1e-10, || format!("|det O - 1| = {det_err:.3e}"))?;
    Ok(format!("200 samples, Frobenius error {worst:.1e}, |det O - 1| {det_err:.1e}"))
}

trait NextIndex {
    fn next_index(&mut self, n: usize) -> usize;
}

impl NextIndex for SeededRng {
    fn next_index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }
}

fn tripartite_orbit() -> Check {
    let start = Instant::now();
    let th = SpectralThresholds::default();
    let (mut worst, mut law) = (0.0f64, 0.0f64);
    let mut count = 0;
    for dim in 2..=3usize {
        let basis = su_generators(dim).unwrap();
        let mut rng = SeededRng::new(600 + dim as u64);
        for i in 0..100 {
            let rank = [1, 2, dim.pow(3)][i % 3];
            let rho = random_density(&[dim; 3], rank, &mut rng).map_err(|e| e.to_string())?;
            let us: Vec<_> = (0..3).map(|_| haar_unitary(dim, &mut rng).unwrap()).collect();
            let image = apply_lu(&rho, &us).map_err(|e| e.to_string())?;
            let os: Vec<_> = us.iter().map(|u| adjoint_rotation(u, &basis).unwrap()).collect();
            let b1 = decompose_tripartite(&rho).map_err(|e| e.to_string())?;
            let b2 = decompose_tripartite(&image).map_err(|e| e.to_string())?;
            for [alpha, beta, gamma] in ROLES {
                let (oa, ob, og) = (&os[alpha - 1], &os[beta - 1], &os[gamma - 1]);
                let flat = oa * flatten_mode(b1.triple(), alpha).unwrap() * ob.kronecker(og).transpose();
                let pair = ob * b1.pair(beta, gamma).unwrap() * og.transpose();
                law = law
                    .max((flatten_mode(b2.triple(), alpha).unwrap() - flat).norm())
                    .max((b2.pair(beta, gamma).unwrap() - pair).norm())
                    .max((b2.single(alpha).unwrap() - oa * b1.single(alpha).unwrap()).norm());
            }
            let f1 = tripartite_fingerprint(&b1, th).map_err(|e| e.to_string())?;
            let f2 = tripartite_fingerprint(&b2, th).map_err(|e| e.to_string())?;
            let v = compare_tripartite(&f1, &f2, DEFAULT_EPS_CMP).map_err(|e| e.to_string())?;
            ensure(!v.is_not_equivalent(), || format!("N={dim} sample {i}: witnesses {:?}", v.witnesses))?;
            let gap = tripartite_gap(&f1, &f2).map_err(|e| format!("N={dim} sample {i}: {e}"))?;
            ensure(gap < 1e-9, || format!("N={dim} sample {i}: gap {gap:.3e}"))?;
            worst = worst.max(gap);
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(law < 1e-10, || format!("transformation law error {law:.3e}"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {}", ms(elapsed)))?;
    Ok(format!(
        "{count} pairs, max field gap {worst:.1e}, transformation laws {law:.1e}, {}",
        ms(elapsed)
    ))
}

fn concurrence_identity() -> Check {
    let th = SpectralThresholds::default();
    let mut worst = 0.0f64;
    for dim in 2..=4usize {
        let mut rng = SeededRng::new(700 + dim as u64);
        for i in 0..500 {
            let rho = random_density(&[dim, dim], 1, &mut rng).map_err(|e| e.to_string())?;
            let rep = concurrence_pure(&rho, th).map_err(|e| format!("N={dim} sample {i}: {e}"))?;
            ensure(rep.residual < 1e-10, || format!("N={dim} sample {i}: residual {:.3e}", rep.residual))?;
            worst = worst.max(rep.residual);
        }
    }
    let bell = concurrence_pure(&load_state("bell.json")?, th).map_err(|e| e.to_string())?;
    ensure((bell.c - 1.0).abs() < 1e-12, || format!("Bell c = {}", bell.c))?;

    let psi = load_state("example1_psi.json")?;
    let rep = concurrence_pure(&psi, th).map_err(|e| e.to_string())?;
    let reduced = partial_trace_first_out(&psi).map_err(|e| e.to_string())?;
    let want = [1.0 / 8.0, 1.0 / 8.0, 3.0 / 4.0];
    let diag_err = (0..3)
        .map(|i| (reduced.entries()[(i, i)] - C64::new(want[i], 0.0)).norm())
        .fold(0.0, f64::max);
    let c_err = (rep.c - 39f64.sqrt() / 8.0).abs();
    let p_err = (rep.purity_reduced - 19.0 / 32.0).abs();
    ensure(diag_err < 1e-12 && c_err < 1e-12 && p_err < 1e-12, || {
        format!("reduced diag {diag_err:.3e}, c {c_err:.3e}, purity {p_err:.3e}")
    })?;
    Ok(format!(
        "1500 pure states, max residual {worst:.1e}; Bell c = {:.15}; c(psi) error {c_err:.1e}",
        bell.c
    ))
}

fn luinv(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_luinv"))
        .args(args)
        .env_remove("LU_INVAR_SEED")
        .output()
        .map_err(|e| e.to_string())
}

fn roundtrips_and_formats() -> Check {
    let mut rng = SeededRng::new(800);
    let mut worst = 0.0f64;
    for dim in 2..=4usize {
        for rank in [1, 3, dim * dim] {
            let rho = random_density(&[dim, dim], rank, &mut rng).map_err(|e| e.to_string())?;
            let back = reconstruct_bipartite(&decompose_bipartite(&rho).unwrap()).map_err(|e| e.to_string())?;
            worst = worst.max(rho.frobenius_distance(&back));
        }
    }
    for dim in 2..=3usize {
        for rank in [1, 4] {
            let rho = random_density(&[dim; 3], rank, &mut rng).map_err(|e| e.to_string())?;
            let back = reconstruct_tripartite(&decompose_tripartite(&rho).unwrap()).map_err(|e| e.to_string())?;
            worst = worst.max(rho.frobenius_distance(&back));
        }
    }
    ensure(worst < 1e-12, || format!("roundtrip error {worst:.3e}"))?;

    // Reports: deterministic, reload-stable, same verdict after reload.
    for name in ["example1_rho.json", "w.json"] {
        let input = Input::read(&fixture(name)).map_err(|e| e.to_string())?;
        let file = StateFile::parse(&input).map_err(|e| e.to_string())?;
        let r1 = FingerprintReport::build(&input, &file, Thresholds::default()).map_err(|e| e.to_string())?;
        let r2 = FingerprintReport::build(&input, &file, Thresholds::default()).map_err(|e| e.to_string())?;
        let bytes = to_json_bytes(&r1).map_err(|e| e.to_string())?;
        ensure(bytes == to_json_bytes(&r2).unwrap(), || format!("{name}: report not deterministic"))?;
        let reloaded: FingerprintReport = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
        ensure(reloaded == r1, || format!("{name}: reload changed the report"))?;
        ensure(to_json_bytes(&reloaded).unwrap() == bytes, || format!("{name}: reload not byte-stable"))?;
        let v1 = r1.fingerprint.compare(&r1.fingerprint, DEFAULT_EPS_CMP).map_err(|e| e.to_string())?;
        let v2 = reloaded.fingerprint.compare(&r1.fingerprint, DEFAULT_EPS_CMP).map_err(|e| e.to_string())?;
        ensure(v1 == v2, || format!("{name}: verdict changed after reload"))?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = dir.path().join("rho.json");
    let report = report.to_str().unwrap();
    let rho = fixture("example1_rho.json");
    let flipped = fixture("example1_rho_flipped.json");
    luinv(&["invariants", &rho, "-o", report])?;
    let from_states = luinv(&["compare", &rho, &flipped])?;
    let from_report = luinv(&["compare", report, &flipped])?;
    ensure(!from_states.stdout.is_empty(), || "compare printed nothing".into())?;
    let strip = |o: &std::process::Output| -> Result<serde_json::Value, String> {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
        v["inputs"] = serde_json::Value::Null;
        Ok(v)
    };
    ensure(strip(&from_states)? == strip(&from_report)?, || "verdict differs when loaded from a report".into())?;

    let codes = [
        (from_states.status.code(), Some(1)),
        (luinv(&["compare", &fixture("haar_seed42_dim2.json"), &fixture("haar_seed42_dim2.lu.json")])?.status.code(), Some(0)),
        (luinv(&["compare", &fixture("bell.json"), &fixture("ghz.json")])?.status.code(), Some(2)),
        (luinv(&["invariants", &fixture("malformed_missing_matrix.json")])?.status.code(), Some(2)),
        (luinv(&["concurrence", &fixture("mixed_2x2.json")])?.status.code(), Some(2)),
        (luinv(&["decompose", &fixture("bell.json")])?.status.code(), Some(0)),
    ];
    for (i, (got, want)) in codes.iter().enumerate() {
        ensure(got == want, || format!("exit-code case {i}: got {got:?}, want {want:?}"))?;
    }
    Ok(format!("roundtrip error {worst:.1e}; reports byte-stable; exit codes 0/1/2 observed"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("example state coefficients", example_reproduction),
        ("example state separated by det_M", example_separation),
        ("bipartite orbit invariance", bipartite_orbit),
        ("gauge robustness", gauge_robustness),
        ("feature matrix transformation law", feature_matrix_law),
        ("tripartite orbit invariance", tripartite_orbit),
        ("concurrence identity", concurrence_identity),
        ("roundtrips and formats", roundtrips_and_formats),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
