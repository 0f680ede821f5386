//! Extraction files: one publication and the objects extracted from it.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::to_canonical_bytes;
use crate::error::{from_json_slice, ParseError};
use crate::finding::{Finding, FindingCode};
use crate::schema::TaxonomySchema;
use crate::text::normalize_label;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    pub key: String,
    pub title: String,
    pub authors: Vec<String>,
    pub year: i32,
    pub venue: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
}

/// An object of one taxonomy, identified by `<taxonomy>:<slug>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntologyObject {
    pub id: String,
    pub taxonomy: String,
    /// Expanded dimension name to characteristic, defaults included.
    pub values: BTreeMap<String, String>,
    pub notes: BTreeMap<String, String>,
    /// Relation name to targets: factor names, local object ids or
    /// `<reference-key>#<id>` links into other extractions.
    pub relations: BTreeMap<String, Vec<String>>,
    /// Dimensions whose value was filled from the schema default.
    #[serde(skip_serializing_if = "BTreeSet::is_empty")]
    pub defaulted: BTreeSet<String>,
}

impl OntologyObject {
    pub fn value(&self, dimension: &str) -> Option<&str> {
        self.values.get(dimension).map(String::as_str)
    }

    pub fn note(&self, name: &str) -> Option<&str> {
        self.notes.get(name).map(String::as_str)
    }

    /// Non-blank note text.
    pub fn filled_note(&self, name: &str) -> Option<&str> {
        self.note(name).filter(|n| !n.trim().is_empty())
    }

    /// Values stated in the file, defaults left out.
    pub fn explicit_values(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter().filter(|(k, _)| !self.defaulted.contains(*k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractionRecord {
    pub reference: Reference,
    pub objects: Vec<OntologyObject>,
}

impl ExtractionRecord {
    pub fn key(&self) -> &str {
        &self.reference.key
    }

    pub fn object(&self, id: &str) -> Option<&OntologyObject> {
        self.objects.iter().find(|o| o.id == id)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRecord {
    reference: Reference,
    #[serde(default)]
    objects: Vec<WireObject>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireObject {
    id: String,
    taxonomy: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    notes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    relations: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{} field error(s), first: {}", .0.len(), .0[0])]
    Field(Vec<Finding>),
}

/// Decode an extraction file and fill schema defaults for omitted
/// dimensions, without checking values against the schema.
///
/// Used where every problem should be collected as a finding rather than
/// failing on the first one; see [`check_record`].
pub fn decode_extraction(raw: &[u8], schema: &TaxonomySchema) -> Result<ExtractionRecord, ParseError> {
    let wire: WireRecord = from_json_slice(raw)?;
    let objects = wire
        .objects
        .into_iter()
        .map(|o| {
            let mut object = OntologyObject {
                id: o.id,
                taxonomy: o.taxonomy,
                values: o.values.into_iter().map(|(k, v)| (k, normalize_label(&v))).collect(),
                notes: o.notes,
                relations: o.relations,
                defaulted: BTreeSet::new(),
            };
            fill_defaults(&mut object, schema);
            object
        })
        .collect();
    Ok(ExtractionRecord {
        reference: wire.reference,
        objects,
    })
}

fn fill_defaults(object: &mut OntologyObject, schema: &TaxonomySchema) {
    let Some(taxonomy) = schema.taxonomy(&object.taxonomy) else {
        return;
    };
    for dim in taxonomy.expanded_dimensions() {
        let Some(default) = dim.default else { continue };
        // Invalid defaults are reported against the schema, not filled in.
        if object.values.contains_key(&dim.name) || !dim.characteristics.contains(&default) {
            continue;
        }
        object.defaulted.insert(dim.name.clone());
        object.values.insert(dim.name, default);
    }
}

/// Parse an extraction file against `schema`: syntax errors are
/// [`ExtractionError::Parse`], schema mismatches are
/// [`ExtractionError::Field`]. No cross-record resolution happens here.
pub fn parse_extraction(raw: &[u8], schema: &TaxonomySchema) -> Result<ExtractionRecord, ExtractionError> {
    let record = decode_extraction(raw, schema)?;
    let findings = check_record(schema, &record);
    if findings.is_empty() {
        Ok(record)
    } else {
        Err(ExtractionError::Field(findings))
    }
}

/// Canonical file bytes: sorted keys, two-space indent, trailing newline.
/// Values filled from defaults are left out so the file stays as written.
pub fn canonical_serialize(record: &ExtractionRecord) -> Vec<u8> {
    let wire = WireRecord {
        reference: record.reference.clone(),
        objects: record
            .objects
            .iter()
            .map(|o| WireObject {
                id: o.id.clone(),
                taxonomy: o.taxonomy.clone(),
                values: o.explicit_values().map(|(k, v)| (k.clone(), v.clone())).collect(),
                notes: o.notes.clone(),
                relations: o.relations.clone(),
            })
            .collect(),
    };
    to_canonical_bytes(&wire)
}

/// Object-level findings for one record: reference fields, object ids,
/// taxonomy membership, values, scope notes and relation names.
pub fn check_record(schema: &TaxonomySchema, record: &ExtractionRecord) -> Vec<Finding> {
    let mut out = Vec::new();
    let reference = &record.reference;
    let key = reference.key.as_str();

    let bad_key = key.trim().is_empty() || key.contains(['#', '/', '\\']) || key.chars().any(char::is_whitespace);
    if bad_key {
        out.push(Finding::new(
            FindingCode::InvalidReference,
            key,
            "reference key must be non-empty without whitespace, `#` or path separators",
        ));
    }
    if !(1900..=2100).contains(&reference.year) {
        out.push(Finding::new(
            FindingCode::InvalidReference,
            key,
            format!("year {} is outside 1900..=2100", reference.year),
        ));
    }
    if reference.authors.is_empty() || reference.authors.iter().any(|a| a.trim().is_empty()) {
        out.push(Finding::new(
            FindingCode::InvalidReference,
            key,
            "authors must be a non-empty list of names",
        ));
    }

    let mut ids = BTreeSet::new();
    for object in &record.objects {
        let subject = format!("{key}#{}", object.id);
        if !ids.insert(object.id.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateObjectId,
                &subject,
                "object id is not unique within the extraction",
            ));
        }
        check_object(schema, object, &subject, &mut out);
    }
    out
}

fn check_object(schema: &TaxonomySchema, object: &OntologyObject, subject: &str, out: &mut Vec<Finding>) {
    let well_formed = object
        .id
        .split_once(':')
        .is_some_and(|(prefix, slug)| prefix == object.taxonomy && !slug.trim().is_empty())
        && !object.id.contains('#');
    if !well_formed {
        out.push(Finding::new(
            FindingCode::InvalidObjectId,
            subject,
            format!("object id must have the form `{}:<slug>`", object.taxonomy),
        ));
    }

    let Some(taxonomy) = schema.taxonomy(&object.taxonomy) else {
        out.push(Finding::new(
            FindingCode::UnknownTaxonomy,
            subject,
            format!("taxonomy `{}` is not in the structure", object.taxonomy),
        ));
        return;
    };

    let dims = taxonomy.expanded_dimensions();
    for (name, value) in &object.values {
        match dims.iter().find(|d| &d.name == name) {
            None => out.push(Finding::new(
                FindingCode::UnknownDimension,
                subject,
                format!("`{name}` is not a dimension of taxonomy `{}`", taxonomy.name),
            )),
            Some(dim) if !dim.characteristics.contains(value) => out.push(Finding::new(
                FindingCode::UnknownCharacteristic,
                subject,
                format!("dimension `{name}` has no characteristic `{value}`"),
            )),
            Some(_) => {}
        }
    }
    for dim in &dims {
        if dim.required && !object.values.contains_key(&dim.name) {
            out.push(Finding::new(
                FindingCode::MissingValue,
                subject,
                format!("no value for required dimension `{}`", dim.name),
            ));
        }
    }

    for name in object.notes.keys() {
        if taxonomy.scope_note(name).is_none() {
            out.push(Finding::new(
                FindingCode::UnknownScopeNote,
                subject,
                format!("`{name}` is not a scope note of taxonomy `{}`", taxonomy.name),
            ));
        }
    }
    for note in taxonomy.scope_notes.iter().filter(|n| n.required) {
        if object.filled_note(&note.name).is_none() {
            out.push(Finding::new(
                FindingCode::MissingScopeNote,
                subject,
                format!("required scope note `{}` is missing or empty", note.name),
            ));
        }
    }

    for name in object.relations.keys() {
        if taxonomy.relation(name).is_none() {
            out.push(Finding::new(
                FindingCode::UnknownRelation,
                subject,
                format!("`{name}` is not a relation of taxonomy `{}`", taxonomy.name),
            ));
        }
    }
}

/// Synonym names listed in a factor's `aliases` note.
pub(crate) fn alias_list(object: &OntologyObject) -> Vec<&str> {
    object
        .note(vocab::ALIASES)
        .map(|a| a.split(vocab::ALIAS_SEPARATOR).map(str::trim).filter(|s| !s.is_empty()).collect())
        .unwrap_or_default()
}
