//! Corpus validation: schema, object and link findings, conflicts, lints and
//! optionally the ending conditions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ending::{check_ending_conditions, subjective_conditions, CorpusManifest, EndingConditions, IterationLog, SubjectiveCondition};
use crate::extraction::{check_record, ExtractionRecord};
use crate::finding::{Finding, FindingCode};
use crate::schema::{validate_schema, TaxonomySchema};
use crate::snapshot::{build_snapshot_lenient, ObjectRef, OntologySnapshot};

/// Taxonomies with fewer or more cluster-abbreviated dimensions than this
/// range get a conciseness lint.
pub const CONCISE_DIMENSIONS: std::ops::RangeInclusive<usize> = 5..=9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum LintCode {
    #[serde(rename = "CONCISENESS")]
    Conciseness,
    #[serde(rename = "UNIQUE-CELL")]
    UniqueCell,
}

impl LintCode {
    pub fn as_str(self) -> &'static str {
        match self {
            LintCode::Conciseness => "CONCISENESS",
            LintCode::UniqueCell => "UNIQUE-CELL",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Lint {
    pub code: LintCode,
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub schema_violations: Vec<Finding>,
    pub object_violations: Vec<Finding>,
    pub link_errors: Vec<Finding>,
    /// Competing factor assertions; warnings, not errors.
    pub conflicts: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ending_conditions: Option<EndingConditions>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub subjective_conditions: Vec<SubjectiveCondition>,
    pub lints: Vec<Lint>,
}

impl ValidationReport {
    /// No schema, object or link findings. Conflicts and lints are allowed.
    pub fn is_clean(&self) -> bool {
        self.schema_violations.is_empty() && self.object_violations.is_empty() && self.link_errors.is_empty()
    }

    /// All blocking findings, ordered.
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.schema_violations
            .iter()
            .chain(&self.object_violations)
            .chain(&self.link_errors)
    }

    pub fn codes(&self) -> Vec<FindingCode> {
        let mut codes: Vec<_> = self.errors().chain(&self.conflicts).map(|f| f.code).collect();
        codes.sort();
        codes
    }

    /// Evaluate the ending conditions and attach them.
    pub fn with_ending_conditions(
        mut self,
        snapshot: &OntologySnapshot,
        logs: &[IterationLog],
        manifest: Option<&CorpusManifest>,
    ) -> Self {
        self.ending_conditions = Some(check_ending_conditions(snapshot, logs, manifest));
        self.subjective_conditions = subjective_conditions();
        self
    }
}

/// Validate raw records and build the snapshot used for everything else.
/// Records failing object checks are still merged so that link problems and
/// lints are reported in the same pass.
pub fn validate_and_build(schema: &TaxonomySchema, records: &[ExtractionRecord]) -> (ValidationReport, OntologySnapshot) {
    let mut object_violations: Vec<Finding> = records.iter().flat_map(|r| check_record(schema, r)).collect();
    object_violations.sort();
    let (snapshot, link_errors) = build_snapshot_lenient(schema, records);
    let report = ValidationReport {
        schema_violations: validate_schema(schema),
        object_violations,
        link_errors,
        conflicts: snapshot.warnings().to_vec(),
        ending_conditions: None,
        subjective_conditions: Vec::new(),
        lints: lint(&snapshot),
    };
    (report, snapshot)
}

/// Report for an already built snapshot, without ending conditions.
pub fn validate_corpus(snapshot: &OntologySnapshot) -> ValidationReport {
    validate_and_build(snapshot.schema(), snapshot.records()).0
}

pub fn lint(snapshot: &OntologySnapshot) -> Vec<Lint> {
    let mut lints = Vec::new();
    for taxonomy in &snapshot.schema().taxonomies {
        let count = taxonomy.abbreviated_dimension_count();
        if !CONCISE_DIMENSIONS.contains(&count) {
            lints.push(Lint {
                code: LintCode::Conciseness,
                severity: Severity::Warning,
                subject: taxonomy.name.clone(),
                message: format!(
                    "{count} dimensions (clusters counted once); a concise taxonomy has {} to {}",
                    CONCISE_DIMENSIONS.start(),
                    CONCISE_DIMENSIONS.end()
                ),
            });
        }

        if taxonomy.expanded_dimensions().is_empty() {
            continue;
        }
        let mut cells: BTreeMap<&BTreeMap<String, String>, Vec<(&ObjectRef, &BTreeMap<String, String>)>> = BTreeMap::new();
        for (at, object) in snapshot.objects_of(&taxonomy.name) {
            cells.entry(&object.values).or_default().push((at, &object.notes));
        }
        for objects in cells.values().filter(|o| o.len() > 1) {
            if objects.iter().all(|(_, notes)| *notes == objects[0].1) {
                continue;
            }
            let names: Vec<String> = objects.iter().map(|(at, _)| at.to_string()).collect();
            lints.push(Lint {
                code: LintCode::UniqueCell,
                severity: Severity::Info,
                subject: names.join(", "),
                message: format!(
                    "{} `{}` objects share every characteristic and differ only in scope notes",
                    objects.len(),
                    taxonomy.name
                ),
            });
        }
    }
    lints.sort();
    lints
}
