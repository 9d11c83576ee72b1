//! Versioned JSON artifacts for length spectra and resonance catalogs.
//!
//! Floating-point values are rounded to 15 significant digits before
//! writing, so a read followed by a write reproduces the file byte for byte.
//! Writes go to a temporary file in the target directory and are renamed
//! into place.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use crate::error::{Error, Result};
use crate::groups::{LengthSpectrum, ModelDescriptor};
use crate::zeta::{ResonanceSet, ResonanceSource, TruncationPolicy};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Spectrum,
    ResonanceCatalog,
    VerifyReport,
    AsymptoticFit,
    EvalGrid,
}

/// Self-describing wrapper around every JSON artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Artifact<T> {
    pub schema_version: u32,
    pub library_version: String,
    pub kind: ArtifactKind,
    #[serde(default)]
    pub model: Option<ModelDescriptor>,
    #[serde(default)]
    pub policy: Option<TruncationPolicy>,
    /// Excluded from determinism comparisons.
    #[serde(default)]
    pub timestamp: Option<String>,
    pub data: T,
}

impl<T> Artifact<T> {
    pub fn new(kind: ArtifactKind, data: T) -> Self {
        Artifact {
            schema_version: SCHEMA_VERSION,
            library_version: crate::VERSION.to_string(),
            kind,
            model: None,
            policy: None,
            timestamp: None,
            data,
        }
    }

    pub fn with_model(mut self, model: ModelDescriptor) -> Self {
        self.model = Some(model);
        self
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = Some(policy);
        self
    }

    pub fn with_timestamp(mut self, timestamp: impl Into<String>) -> Self {
        self.timestamp = Some(timestamp.into());
        self
    }
}

/// Rounds `x` to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.14e}").parse().unwrap_or(x)
    } else {
        x
    }
}

fn canonicalize(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round15).and_then(Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(canonicalize),
        Value::Object(o) => o.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to 15 significant digits and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::DomainError(format!("serialization failed: {e}")))?;
    canonicalize(&mut v);
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| Error::DomainError(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(text.len());
        }
        offset += l.len();
    }
    text.len()
}

fn classify(text: &str, e: serde_json::Error) -> Error {
    let msg = e.to_string();
    let is_schema = msg.contains("unknown field") || msg.contains("missing field") || msg.contains("unknown variant");
    if e.is_data() && is_schema {
        Error::SchemaMismatch(msg)
    } else {
        Error::ParseError { offset: byte_offset(text, e.line(), e.column()), message: msg }
    }
}

/// Parses an artifact, checking the schema version before the payload.
pub fn artifact_from_str<T: DeserializeOwned>(text: &str, kind: ArtifactKind) -> Result<Artifact<T>> {
    let v: Value = serde_json::from_str(text).map_err(|e| classify(text, e))?;
    match v.get("schema_version").and_then(Value::as_u64) {
        Some(n) if n == SCHEMA_VERSION as u64 => {}
        Some(n) => return Err(Error::SchemaMismatch(format!("schema_version {n}, expected {SCHEMA_VERSION}"))),
        None => return Err(Error::SchemaMismatch("missing field `schema_version`".into())),
    }
    let a: Artifact<T> = serde_json::from_str(text).map_err(|e| classify(text, e))?;
    if a.kind != kind {
        return Err(Error::SchemaMismatch(format!("artifact kind {:?}, expected {kind:?}", a.kind)));
    }
    Ok(a)
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.to_path_buf(), message: e.to_string() }
}

/// Writes `contents` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| io_error(path, e))?;
    tmp.as_file().sync_all().map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}

pub fn write_artifact<T: Serialize>(path: &Path, artifact: &Artifact<T>) -> Result<()> {
    write_atomic(path, &to_canonical_json(artifact)?)
}

pub fn read_artifact<T: DeserializeOwned>(path: &Path, kind: ArtifactKind) -> Result<Artifact<T>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    artifact_from_str(&text, kind)
}

pub fn write_catalog(
    path: &Path,
    set: &ResonanceSet,
    model: Option<ModelDescriptor>,
    policy: Option<TruncationPolicy>,
) -> Result<()> {
    let mut a = Artifact::new(ArtifactKind::ResonanceCatalog, set.clone());
    a.model = model;
    a.policy = policy;
    write_artifact(path, &a)
}

/// Loads a resonance catalog; the returned set is marked `Loaded`.
pub fn load_catalog(path: &Path) -> Result<ResonanceSet> {
    let a: Artifact<ResonanceSet> = read_artifact(path, ArtifactKind::ResonanceCatalog)?;
    let mut set = ResonanceSet::new(a.data.points, a.data.region, ResonanceSource::Loaded)?;
    set.jitter = a.data.jitter;
    Ok(set)
}

pub fn write_spectrum(path: &Path, spec: &LengthSpectrum, model: Option<ModelDescriptor>) -> Result<()> {
    let mut a = Artifact::new(ArtifactKind::Spectrum, spec.clone());
    a.model = model;
    write_artifact(path, &a)
}

pub fn load_spectrum(path: &Path) -> Result<LengthSpectrum> {
    Ok(read_artifact::<LengthSpectrum>(path, ArtifactKind::Spectrum)?.data)
}
