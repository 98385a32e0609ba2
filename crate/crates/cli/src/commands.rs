use std::path::{Path, PathBuf};

use luinv_core::entanglement::{concurrence_pure, ConcurrenceReport};
use luinv_core::sampling::{apply_lu, haar_unitary, random_density, RNG_ALGORITHM};
use luinv_core::{bloch, Outcome, SeededRng};
use serde::{Deserialize, Serialize};

use crate::args::{Command, RandomArgs};
use crate::error::CliError;
use crate::format::{emit, matrix_to_pairs, to_json_bytes, Input, StateFile, StateProvenance, UnitariesFile, SCHEMA_VERSION};
use crate::report::{
    fingerprint_of, load, BatchEntry, BatchReport, Coefficients, DecompositionReport, FingerprintReport, Loaded,
    Thresholds, VerdictReport, BASIS_DESCRIPTION,
};

/// Exit status of a command that did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotEquivalent,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotEquivalent => 1,
        }
    }
}

pub fn run(command: Command) -> Result<Status, CliError> {
    match command {
        Command::Decompose { file, parties, out } => decompose(&file, parties, out.as_deref()),
        Command::Invariants {
            file,
            parties,
            thresholds,
            out,
        } => invariants(&file, parties, thresholds.into(), out.as_deref()),
        Command::Compare {
            files,
            pairs,
            jobs,
            thresholds,
            out,
        } => match pairs {
            Some(list) => compare_batch(&list, jobs, thresholds.into(), out.as_deref()),
            None => match files.as_slice() {
                [a, b] => compare(a, b, thresholds.into(), out.as_deref()),
                _ => Err(CliError::Usage("compare needs two files or --pairs".into())),
            },
        },
        Command::Concurrence { file, thresholds, out } => concurrence(&file, thresholds.into(), out.as_deref()),
        Command::Random(args) => random(&args),
    }
}

fn check_parties(name: &str, dims: &[usize], parties: Option<usize>) -> Result<(), CliError> {
    match parties {
        Some(p) if p != dims.len() => Err(CliError::Invalid(format!(
            "{name}: --parties {p} but the file has dims {dims:?}"
        ))),
        _ => Ok(()),
    }
}

fn decompose(name: &str, parties: Option<usize>, out: Option<&Path>) -> Result<Status, CliError> {
    let input = Input::read(name)?;
    let file = StateFile::parse(&input)?;
    check_parties(name, &file.dims, parties)?;
    let rho = file.to_state(name)?;
    let coefficients = match rho.parties() {
        2 => Coefficients::from(&bloch::decompose_bipartite(&rho)?),
        3 => Coefficients::from(&bloch::decompose_tripartite(&rho)?),
        p => return Err(CliError::Invalid(format!("{name}: decompose needs 2 or 3 parties, got {p}"))),
    };
    let report = DecompositionReport {
        schema_version: SCHEMA_VERSION.into(),
        dims: file.dims,
        basis: BASIS_DESCRIPTION.into(),
        coefficients,
    };
    emit(out, &to_json_bytes(&report)?)?;
    Ok(Status::Ok)
}

fn invariants(name: &str, parties: Option<usize>, thresholds: Thresholds, out: Option<&Path>) -> Result<Status, CliError> {
    let input = Input::read(name)?;
    let report = match load(&input)? {
        Loaded::State(file) => {
            check_parties(name, &file.dims, parties)?;
            FingerprintReport::build(&input, &file, thresholds)?
        }
        Loaded::Report(report) => {
            check_parties(name, &report.dims, parties)?;
            *report
        }
    };
    emit(out, &to_json_bytes(&report)?)?;
    Ok(Status::Ok)
}

fn compare_pair(a: &str, b: &str, thresholds: Thresholds) -> Result<VerdictReport, CliError> {
    let (dims_a, fa) = fingerprint_of(&Input::read(a)?, thresholds)?;
    let (dims_b, fb) = fingerprint_of(&Input::read(b)?, thresholds)?;
    if dims_a != dims_b {
        return Err(CliError::Invalid(format!("{a} has dims {dims_a:?} but {b} has dims {dims_b:?}")));
    }
    let verdict = fa.compare(&fb, thresholds.eps_cmp)?;
    Ok(VerdictReport::new([a.to_string(), b.to_string()], thresholds, verdict))
}

fn compare(a: &str, b: &str, thresholds: Thresholds, out: Option<&Path>) -> Result<Status, CliError> {
    let report = compare_pair(a, b, thresholds)?;
    emit(out, &to_json_bytes(&report)?)?;
    Ok(match report.outcome {
        Outcome::NotEquivalent => Status::NotEquivalent,
        Outcome::Inconclusive => Status::Ok,
    })
}

fn parse_pairs(list: &Path) -> Result<Vec<[String; 2]>, CliError> {
    let text = std::fs::read_to_string(list).map_err(|e| CliError::io(&list.display().to_string(), e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| match l.split_whitespace().collect::<Vec<_>>().as_slice() {
            [a, b] => Ok([a.to_string(), b.to_string()]),
            _ => Err(CliError::Invalid(format!(
                "{}:{}: expected two paths, got {l:?}",
                list.display(),
                i + 1
            ))),
        })
        .collect()
}

/// Runs every pair, fanning out over `jobs` threads; results keep the
/// input order. Exit status is 2 if any pair failed, else 1 if any pair is
/// certified not equivalent.
fn compare_batch(list: &Path, jobs: usize, thresholds: Thresholds, out: Option<&Path>) -> Result<Status, CliError> {
    let pairs = parse_pairs(list)?;
    let jobs = jobs.clamp(1, pairs.len().max(1));
    let mut results: Vec<Option<BatchEntry>> = vec![None; pairs.len()];
    std::thread::scope(|scope| {
        let chunk = pairs.len().div_ceil(jobs).max(1);
        for (pairs, slots) in pairs.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (pair, slot) in pairs.iter().zip(slots) {
                    *slot = Some(batch_entry(pair, thresholds));
                }
            });
        }
    });
    let results: Vec<BatchEntry> = results.into_iter().map(|r| r.expect("every slot is filled")).collect();
    let failed = results.iter().filter(|r| r.error.is_some()).count();
    let separated = results.iter().any(|r| r.outcome == Some(Outcome::NotEquivalent));
    let report = BatchReport {
        schema_version: SCHEMA_VERSION.into(),
        thresholds,
        results,
    };
    emit(out, &to_json_bytes(&report)?)?;
    if failed > 0 {
        return Err(CliError::Invalid(format!("{failed} of {} pairs failed", report.results.len())));
    }
    Ok(if separated { Status::NotEquivalent } else { Status::Ok })
}

fn batch_entry(pair: &[String; 2], thresholds: Thresholds) -> BatchEntry {
    match compare_pair(&pair[0], &pair[1], thresholds) {
        Ok(r) => BatchEntry {
            inputs: r.inputs,
            outcome: Some(r.outcome),
            witnesses: r.witnesses,
            warnings: r.warnings,
            error: None,
        },
        Err(e) => BatchEntry {
            inputs: pair.clone(),
            outcome: None,
            witnesses: Vec::new(),
            warnings: Vec::new(),
            error: Some(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceDocument {
    pub schema_version: String,
    pub input: String,
    #[serde(flatten)]
    pub report: ConcurrenceReport,
}

fn concurrence(name: &str, thresholds: Thresholds, out: Option<&Path>) -> Result<Status, CliError> {
    let input = Input::read(name)?;
    let file = StateFile::parse(&input)?;
    let rho = file.to_state(name)?;
    if rho.parties() != 2 || rho.dims()[0] != rho.dims()[1] {
        return Err(CliError::Invalid(format!(
            "{name}: concurrence needs two parties of equal dimension, got dims {:?}",
            rho.dims()
        )));
    }
    let report = concurrence_pure(&rho, thresholds.spectral()).map_err(|e| CliError::Invalid(format!("{name}: {e}")))?;
    let doc = ConcurrenceDocument {
        schema_version: SCHEMA_VERSION.into(),
        input: name.to_string(),
        report,
    };
    emit(out, &to_json_bytes(&doc)?)?;
    Ok(Status::Ok)
}

/// `dir/stem.json` → `dir/stem.<suffix>.json`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}.json"))
}

/// Draws the state first, then one Haar unitary per party.
fn random(args: &RandomArgs) -> Result<Status, CliError> {
    if !(2..=3).contains(&args.parties) {
        return Err(CliError::Usage(format!("--parties must be 2 or 3, got {}", args.parties)));
    }
    let dims = vec![args.dim; args.parties];
    let full: usize = dims.iter().product();
    let rank = args.rank.unwrap_or(full);
    let mut rng = SeededRng::new(args.seed);
    let rho = random_density(&dims, rank, &mut rng)?;
    let provenance = |note: Option<&str>| StateProvenance {
        generator: "luinv random".into(),
        seed: Some(args.seed),
        rng: Some(RNG_ALGORITHM.into()),
        rank: Some(rank),
        note: note.map(str::to_string),
    };
    let state = StateFile::from_state(&rho, Some(provenance(None)));
    emit(args.out.as_deref(), &to_json_bytes(&state)?)?;

    if args.apply_lu {
        let out = args.out.as_deref().expect("clap requires --out with --apply-lu");
        let unitaries = (0..args.parties)
            .map(|_| haar_unitary(args.dim, &mut rng))
            .collect::<Result<Vec<_>, _>>()?;
        let image = apply_lu(&rho, &unitaries)?;
        let image_file = StateFile::from_state(&image, Some(provenance(Some("local-unitary image of the state file"))));
        emit(Some(&sibling(out, "lu")), &to_json_bytes(&image_file)?)?;
        let u_file = UnitariesFile {
            schema_version: SCHEMA_VERSION.into(),
            seed: args.seed,
            rng: RNG_ALGORITHM.into(),
            unitaries: unitaries.iter().map(matrix_to_pairs).collect(),
        };
        emit(Some(&sibling(out, "unitaries")), &to_json_bytes(&u_file)?)?;
    }
    Ok(Status::Ok)
}
