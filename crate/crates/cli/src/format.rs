//! JSON documents read and written by the command line.
//!
//! Every float is written with 17 significant digits in scientific
//! notation, so parsing a document and writing it again reproduces it
//! byte for byte.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use luinv_core::{CMatrix, DensityMatrix, C64};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Pretty JSON with `{:.16e}` floats.
pub struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Default for ExactFloats<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

macro_rules! forward {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for ExactFloats<'_> {
    forward! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes with [`ExactFloats`] and a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ExactFloats::default());
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Output(format!("serialization failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// A named input, either a path or `-` for standard input.
#[derive(Debug, Clone)]
pub struct Input {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(name: &str) -> Result<Self, CliError> {
        let bytes = if name == "-" {
            let mut buf = Vec::new();
            io::stdin()
                .read_to_end(&mut buf)
                .map_err(|e| CliError::io("<stdin>", e))?;
            buf
        } else {
            fs::read(name).map_err(|e| CliError::io(name, e))?
        };
        Ok(Self {
            name: name.to_string(),
            bytes,
        })
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    pub fn json(&self) -> Result<serde_json::Value, CliError> {
        serde_json::from_slice(&self.bytes).map_err(|e| CliError::parse(&self.name, e))
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir.display().to_string(), e))?;
    tmp.write_all(bytes)
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(&path.display().to_string(), e))?;
    tmp.persist(path)
        .map_err(|e| CliError::io(&path.display().to_string(), e.error))?;
    Ok(())
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

/// On-disk density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub schema_version: String,
    pub dims: Vec<usize>,
    /// Rows of `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<StateProvenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateProvenance {
    pub generator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn pairs_to_matrix(rows: &[Vec<[f64; 2]>], what: &str) -> Result<CMatrix, String> {
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(format!("{what} is not square: row {i} has {} entries, expected {n}", r.len()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let [re, im] = rows[i][j];
        C64::new(re, im)
    }))
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix, provenance: Option<StateProvenance>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            dims: rho.dims().to_vec(),
            matrix: matrix_to_pairs(rho.entries()),
            provenance,
        }
    }

    pub fn parse(input: &Input) -> Result<Self, CliError> {
        let file: StateFile = serde_json::from_slice(&input.bytes).map_err(|e| CliError::parse(&input.name, e))?;
        check_schema(&input.name, &file.schema_version)?;
        Ok(file)
    }

    /// Validated density matrix; failures name the violated invariant.
    pub fn to_state(&self, name: &str) -> Result<DensityMatrix, CliError> {
        let size: usize = self.dims.iter().product();
        if self.matrix.len() != size {
            return Err(CliError::Invalid(format!(
                "{name}: matrix has {} rows but dims {:?} need {size}",
                self.matrix.len(),
                self.dims
            )));
        }
        let m = pairs_to_matrix(&self.matrix, "matrix").map_err(|e| CliError::Invalid(format!("{name}: {e}")))?;
        DensityMatrix::new(self.dims.clone(), m).map_err(|e| CliError::Invalid(format!("{name}: {e}")))
    }
}

pub fn check_schema(name: &str, version: &str) -> Result<(), CliError> {
    if version == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(CliError::Invalid(format!(
            "{name}: unsupported schema_version {version:?}, expected {SCHEMA_VERSION:?}"
        )))
    }
}

/// Local unitaries written next to an LU image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitariesFile {
    pub schema_version: String,
    pub seed: u64,
    pub rng: String,
    pub unitaries: Vec<Vec<Vec<[f64; 2]>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_roundtrip_byte_for_byte() {
        let values = vec![-5.0 * 3f64.sqrt() / 306.0, 0.0, -0.0, 1e-300, 1.0 / 3.0, 12345.678];
        let a = to_json_bytes(&values).unwrap();
        let back: Vec<f64> = serde_json::from_slice(&a).unwrap();
        assert_eq!(back.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), values.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        assert_eq!(to_json_bytes(&back).unwrap(), a);
        let text = String::from_utf8(a).unwrap();
        for token in text.split(|c: char| c.is_whitespace() || "[],".contains(c)).filter(|t| !t.is_empty()) {
            let mantissa = token.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.len(), 18, "{token}");
        }
    }

    #[test]
    fn state_file_validation_names_invariant() {
        let file = StateFile {
            schema_version: "1".into(),
            dims: vec![2],
            matrix: vec![vec![[0.5, 0.0], [0.3, 0.0]], vec![[0.0, 0.0], [0.5, 0.0]]],
            provenance: None,
        };
        let err = file.to_state("x").unwrap_err().to_string();
        assert!(err.contains("hermiticity"), "{err}");

        let file = StateFile {
            matrix: vec![vec![[0.5, 0.0]]],
            ..file
        };
        assert!(file.to_state("x").unwrap_err().to_string().contains("rows"));
    }

    #[test]
    fn missing_field_is_named() {
        let input = Input {
            name: "bad.json".into(),
            bytes: br#"{"schema_version": "1", "dims": [2, 2]}"#.to_vec(),
        };
        let err = StateFile::parse(&input).unwrap_err().to_string();
        assert!(err.contains("matrix"), "{err}");
    }

    #[test]
    fn schema_version_is_checked() {
        let input = Input {
            name: "v2.json".into(),
            bytes: br#"{"schema_version": "2", "dims": [2], "matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}"#.to_vec(),
        };
        assert!(StateFile::parse(&input).unwrap_err().to_string().contains("schema_version"));
    }
}
