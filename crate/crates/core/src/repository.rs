//! On-disk repository layout:
//!
//! ```text
//! <root>/structure.json
//! <root>/extractions/<reference-key>.json
//! <root>/iterations.json   (optional)
//! <root>/manifest.json     (optional)
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ending::{parse_iterations, parse_manifest, CorpusManifest, IterationLog};
use crate::extraction::{decode_extraction, ExtractionRecord};
use crate::finding::{Finding, FindingCode};
use crate::schema::{parse_structure, TaxonomySchema};
use crate::snapshot::OntologySnapshot;
use crate::validate::{validate_and_build, ValidationReport};
use crate::ParseError;

pub const STRUCTURE_FILE: &str = "structure.json";
pub const EXTRACTIONS_DIR: &str = "extractions";
pub const ITERATIONS_FILE: &str = "iterations.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum RepositoryError {
    #[error("structure file not found: {}", .0.display())]
    MissingStructure(PathBuf),
    #[error("extractions directory not found: {}", .0.display())]
    MissingExtractions(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {error}", path.display())]
    Parse { path: PathBuf, error: ParseError },
}

impl RepositoryError {
    fn io(path: &Path, source: io::Error) -> Self {
        RepositoryError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepositoryLayout {
    pub root: PathBuf,
    pub structure: PathBuf,
    pub extractions: PathBuf,
    pub iterations: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

impl RepositoryLayout {
    pub fn discover(root: impl AsRef<Path>) -> Result<Self, RepositoryError> {
        let root = root.as_ref().to_path_buf();
        let structure = root.join(STRUCTURE_FILE);
        if !structure.is_file() {
            return Err(RepositoryError::MissingStructure(structure));
        }
        let extractions = root.join(EXTRACTIONS_DIR);
        if !extractions.is_dir() {
            return Err(RepositoryError::MissingExtractions(extractions));
        }
        let optional = |name: &str| Some(root.join(name)).filter(|p| p.is_file());
        Ok(RepositoryLayout {
            iterations: optional(ITERATIONS_FILE),
            manifest: optional(MANIFEST_FILE),
            root,
            structure,
            extractions,
        })
    }

    /// `*.json` files of the extractions directory, sorted by name.
    pub fn extraction_files(&self) -> Result<Vec<PathBuf>, RepositoryError> {
        json_files(&self.extractions)
    }
}

pub fn json_files(dir: &Path) -> Result<Vec<PathBuf>, RepositoryError> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| RepositoryError::io(dir, e))? {
        let path = entry.map_err(|e| RepositoryError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, RepositoryError> {
    fs::read(path).map_err(|e| RepositoryError::io(path, e))
}

pub fn load_schema(path: &Path) -> Result<TaxonomySchema, RepositoryError> {
    parse_structure(&read_file(path)?).map_err(|error| RepositoryError::Parse {
        path: path.to_path_buf(),
        error,
    })
}

/// Decode every extraction file of `dir`. Files whose stem differs from
/// the reference key they contain are reported as findings.
pub fn load_extractions(
    dir: &Path,
    schema: &TaxonomySchema,
) -> Result<(Vec<ExtractionRecord>, Vec<Finding>), RepositoryError> {
    let mut records = Vec::new();
    let mut findings = Vec::new();
    for path in json_files(dir)? {
        let record = decode_extraction(&read_file(&path)?, schema).map_err(|error| RepositoryError::Parse {
            path: path.clone(),
            error,
        })?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        if stem != record.key() {
            findings.push(Finding::new(
                FindingCode::FileNameMismatch,
                record.key(),
                format!("extraction file `{}` should be named `{}.json`", path.display(), record.key()),
            ));
        }
        records.push(record);
    }
    Ok((records, findings))
}

/// Everything read from a repository, before validation.
#[derive(Debug, Clone)]
pub struct LoadedRepository {
    pub layout: RepositoryLayout,
    pub schema: TaxonomySchema,
    pub records: Vec<ExtractionRecord>,
    pub file_findings: Vec<Finding>,
    pub logs: Vec<IterationLog>,
    pub manifest: Option<CorpusManifest>,
}

impl LoadedRepository {
    /// Read and parse every file. Fails only on I/O and syntax or shape
    /// errors; schema mismatches are left to [`LoadedRepository::validate`].
    pub fn load(layout: RepositoryLayout) -> Result<Self, RepositoryError> {
        let schema = load_schema(&layout.structure)?;
        let (records, file_findings) = load_extractions(&layout.extractions, &schema)?;
        let parse_at = |path: &Path| {
            let path = path.to_path_buf();
            move |error| RepositoryError::Parse { path, error }
        };
        let logs = match &layout.iterations {
            Some(path) => parse_iterations(&read_file(path)?).map_err(parse_at(path))?,
            None => Vec::new(),
        };
        let manifest = match &layout.manifest {
            Some(path) => Some(parse_manifest(&read_file(path)?).map_err(parse_at(path))?),
            None => None,
        };
        Ok(LoadedRepository {
            layout,
            schema,
            records,
            file_findings,
            logs,
            manifest,
        })
    }

    pub fn open(root: impl AsRef<Path>) -> Result<Self, RepositoryError> {
        Self::load(RepositoryLayout::discover(root)?)
    }

    /// Validation report (without ending conditions) and snapshot.
    pub fn validate(&self) -> (ValidationReport, OntologySnapshot) {
        let (mut report, snapshot) = validate_and_build(&self.schema, &self.records);
        report.object_violations.extend(self.file_findings.iter().cloned());
        report.object_violations.sort();
        (report, snapshot)
    }

    /// Validation report with ending conditions, and snapshot.
    pub fn validate_with_ending_conditions(&self) -> (ValidationReport, OntologySnapshot) {
        let (report, snapshot) = self.validate();
        let report = report.with_ending_conditions(&snapshot, &self.logs, self.manifest.as_ref());
        (report, snapshot)
    }
}
