//! Goal-oriented queries: faceted factor search, resources connected to a
//! factor, literature gaps and the author index.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extraction::{OntologyObject, Reference};
use crate::snapshot::{FactorNode, MergedValue, ObjectRef, OntologySnapshot};
use crate::text::normalize_label;
use crate::vocab;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("`{value}` is not a characteristic of {field}")]
    UnknownCharacteristic { field: String, value: String },
    #[error("no factor with key `{0}`")]
    UnknownFactor(String),
}

/// Aspect clause: the `aspect.<member>` dimension takes `impact`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectFilter {
    pub member: String,
    pub impact: String,
}

impl AspectFilter {
    /// Parse `<member>:<impact>`.
    pub fn parse(raw: &str) -> Option<AspectFilter> {
        let (member, impact) = raw.split_once(':')?;
        Some(AspectFilter {
            member: member.trim().to_string(),
            impact: normalize_label(impact),
        })
    }
}

/// Conjunction of optional clauses; an empty filter matches every factor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorFilter {
    pub scope: Option<String>,
    pub aspect: Option<AspectFilter>,
    /// Case-insensitive substring of a factor name or description definition.
    pub text_query: Option<String>,
    pub has_approach: Option<bool>,
    pub has_dataset: Option<bool>,
    /// A linked dataset or approach has this accessibility.
    pub accessibility: Option<String>,
    /// Some linked description is backed by empirical evidence.
    pub evidence: Option<bool>,
    /// Some linked description involved practitioners.
    pub practitioners: Option<bool>,
}

impl FactorFilter {
    /// Reject clause values that are not characteristics of the schema.
    pub fn check(&self, snapshot: &OntologySnapshot) -> Result<(), QueryError> {
        let schema = snapshot.schema();
        let characteristics = |taxonomy: &str, dimension: &str| {
            schema
                .taxonomy(taxonomy)
                .and_then(|t| t.dimension(dimension))
                .map(|d| d.characteristics)
                .unwrap_or_default()
        };
        let unknown = |field: &str, value: &str| QueryError::UnknownCharacteristic {
            field: field.to_string(),
            value: value.to_string(),
        };
        if let Some(scope) = &self.scope {
            if !characteristics(vocab::FACTOR, vocab::SCOPE).contains(scope) {
                return Err(unknown("factor.scope", scope));
            }
        }
        if let Some(aspect) = &self.aspect {
            let dimension = format!("{}.{}", vocab::ASPECT, aspect.member);
            let allowed = characteristics(vocab::FACTOR, &dimension);
            if allowed.is_empty() {
                return Err(unknown("factor.aspect", &aspect.member));
            }
            if !allowed.contains(&aspect.impact) {
                return Err(unknown(&format!("factor.{dimension}"), &aspect.impact));
            }
        }
        if let Some(accessibility) = &self.accessibility {
            let known = [vocab::DATASET, vocab::APPROACH]
                .iter()
                .any(|t| characteristics(t, vocab::ACCESSIBILITY).contains(accessibility));
            if !known {
                return Err(unknown("dataset.accessibility or approach.accessibility", accessibility));
            }
        }
        Ok(())
    }

    fn matches(&self, snapshot: &OntologySnapshot, node: &FactorNode) -> bool {
        let key = &node.normalized_key;
        let index = snapshot.indexes();
        let admits = |dimension: &str, value: &str| {
            node.merged_values
                .get(dimension)
                .is_some_and(|m: &MergedValue| m.admits(value))
        };
        let descriptions = || {
            index.factor_descriptions[key]
                .iter()
                .filter_map(|at| snapshot.object(at))
        };
        let described_with = |dimension: &str| descriptions().any(|d| d.value(dimension) == Some(vocab::YES));

        if let Some(scope) = &self.scope {
            if !admits(vocab::SCOPE, scope) {
                return false;
            }
        }
        if let Some(aspect) = &self.aspect {
            if !admits(&format!("{}.{}", vocab::ASPECT, aspect.member), &aspect.impact) {
                return false;
            }
        }
        if let Some(text) = self.text_query.as_deref().map(str::trim).filter(|t| !t.is_empty()) {
            let needle = text.to_lowercase();
            let hit = |s: &str| s.to_lowercase().contains(&needle);
            let named = hit(&node.canonical_name)
                || node.assertions.iter().any(|a| a.object.note(vocab::NAME).is_some_and(hit));
            let defined = descriptions().any(|d| d.note(vocab::DEFINITION).is_some_and(hit));
            if !named && !defined {
                return false;
            }
        }
        if let Some(wanted) = self.has_approach {
            if index.factor_approaches[key].is_empty() == wanted {
                return false;
            }
        }
        if let Some(wanted) = self.has_dataset {
            if index.factor_datasets[key].is_empty() == wanted {
                return false;
            }
        }
        if let Some(accessibility) = &self.accessibility {
            let found = index.factor_datasets[key]
                .iter()
                .chain(&index.factor_approaches[key])
                .filter_map(|at| snapshot.object(at))
                .any(|o| o.value(vocab::ACCESSIBILITY) == Some(accessibility.as_str()));
            if !found {
                return false;
            }
        }
        if let Some(wanted) = self.evidence {
            if described_with(vocab::EMPIRICAL_EVIDENCE) != wanted {
                return false;
            }
        }
        if let Some(wanted) = self.practitioners {
            if described_with(vocab::PRACTITIONERS_INVOLVED) != wanted {
                return false;
            }
        }
        true
    }
}

/// Factors satisfying every clause, ordered by normalized key.
pub fn query_factors<'a>(snapshot: &'a OntologySnapshot, filter: &FactorFilter) -> Result<Vec<&'a FactorNode>, QueryError> {
    filter.check(snapshot)?;
    Ok(snapshot
        .factors()
        .values()
        .filter(|node| filter.matches(snapshot, node))
        .collect())
}

/// Flat, serializable summary of a factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorView {
    pub key: String,
    pub name: String,
    pub implicit: bool,
    pub aliases: Vec<String>,
    pub values: BTreeMap<String, MergedValue>,
    pub n_descriptions: usize,
    pub n_datasets: usize,
    pub n_approaches: usize,
    /// References asserting the factor or describing it.
    pub references: Vec<String>,
    pub assertions: Vec<ObjectRef>,
}

impl FactorView {
    pub fn new(snapshot: &OntologySnapshot, node: &FactorNode) -> Self {
        let key = &node.normalized_key;
        let index = snapshot.indexes();
        let descriptions = &index.factor_descriptions[key];
        let references: BTreeSet<String> = node
            .assertions
            .iter()
            .map(|a| a.reference.clone())
            .chain(descriptions.iter().map(|d| d.reference.clone()))
            .collect();
        FactorView {
            key: key.clone(),
            name: node.canonical_name.clone(),
            implicit: node.implicit,
            aliases: node.aliases.iter().cloned().collect(),
            values: node.merged_values.clone(),
            n_descriptions: descriptions.len(),
            n_datasets: index.factor_datasets[key].len(),
            n_approaches: index.factor_approaches[key].len(),
            references: references.into_iter().collect(),
            assertions: node
                .assertions
                .iter()
                .map(|a| ObjectRef::new(&a.reference, &a.object.id))
                .collect(),
        }
    }
}

/// One object with its address, for resource listings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectView {
    pub at: ObjectRef,
    pub reference: String,
    pub id: String,
    pub taxonomy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessibility: Option<String>,
    /// Factors linked directly.
    pub factors: Vec<String>,
    pub values: BTreeMap<String, String>,
    pub notes: BTreeMap<String, String>,
    pub relations: BTreeMap<String, Vec<String>>,
}

impl ObjectView {
    pub fn new(snapshot: &OntologySnapshot, at: &ObjectRef, object: &OntologyObject) -> Self {
        ObjectView {
            at: at.clone(),
            reference: at.reference.clone(),
            id: at.id.clone(),
            taxonomy: object.taxonomy.clone(),
            name: object.note(vocab::NAME).map(str::to_string),
            accessibility: object.value(vocab::ACCESSIBILITY).map(str::to_string),
            factors: snapshot.linked_factors(at).into_iter().map(str::to_string).collect(),
            values: object.values.clone(),
            notes: object.notes.clone(),
            relations: object.relations.clone(),
        }
    }
}

/// Every object of one taxonomy, ordered by address.
pub fn list_objects(snapshot: &OntologySnapshot, taxonomy: &str) -> Vec<ObjectView> {
    snapshot
        .objects_of(taxonomy)
        .map(|(at, o)| ObjectView::new(snapshot, at, o))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorResources {
    pub factor: FactorView,
    pub descriptions: Vec<ObjectView>,
    pub datasets: Vec<ObjectView>,
    /// Approaches linked directly or through one of the descriptions.
    pub approaches: Vec<ObjectView>,
    pub references: Vec<Reference>,
}

pub fn resources_for_factor(snapshot: &OntologySnapshot, key: &str) -> Result<FactorResources, QueryError> {
    let node = snapshot
        .factor(key)
        .ok_or_else(|| QueryError::UnknownFactor(key.to_string()))?;
    let index = snapshot.indexes();
    let views = |refs: &BTreeSet<ObjectRef>| -> Vec<ObjectView> {
        refs.iter()
            .filter_map(|at| snapshot.object(at).map(|o| ObjectView::new(snapshot, at, o)))
            .collect()
    };
    let descriptions = views(&index.factor_descriptions[key]);
    let datasets = views(&index.factor_datasets[key]);
    let approaches = views(&index.factor_approaches[key]);
    let keys: BTreeSet<&str> = node
        .assertions
        .iter()
        .map(|a| a.reference.as_str())
        .chain(descriptions.iter().chain(&datasets).chain(&approaches).map(|v| v.reference.as_str()))
        .collect();
    let references = keys
        .into_iter()
        .filter_map(|k| snapshot.record(k).map(|r| r.reference.clone()))
        .collect();
    Ok(FactorResources {
        factor: FactorView::new(snapshot, node),
        descriptions,
        datasets,
        approaches,
        references,
    })
}

/// An object found by a gap check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GapEntry {
    pub reference: String,
    pub object_id: String,
    /// Factor key, or the object's name note.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub accessibility: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub factors_without_approach: Vec<GapEntry>,
    pub factors_without_dataset: Vec<GapEntry>,
    /// Neither empirical evidence nor practitioner involvement.
    pub descriptions_without_evidence: Vec<GapEntry>,
    pub descriptions_without_impact: Vec<GapEntry>,
    /// Datasets and approaches whose accessibility is not public.
    pub undisclosed_resources: Vec<GapEntry>,
}

pub fn gap_report(snapshot: &OntologySnapshot) -> GapReport {
    let index = snapshot.indexes();
    let mut report = GapReport::default();

    for (key, node) in snapshot.factors() {
        // a factor is located by its first assertion, or its first
        // description when implicit
        let located = node
            .assertions
            .first()
            .map(|a| (a.reference.clone(), a.object.id.clone()))
            .or_else(|| {
                index.factor_descriptions[key]
                    .iter()
                    .next()
                    .map(|d| (d.reference.clone(), d.id.clone()))
            })
            .unwrap_or_default();
        let entry = GapEntry {
            reference: located.0,
            object_id: located.1,
            name: Some(key.clone()),
            accessibility: None,
        };
        if index.factor_approaches[key].is_empty() {
            report.factors_without_approach.push(entry.clone());
        }
        if index.factor_datasets[key].is_empty() {
            report.factors_without_dataset.push(entry);
        }
    }

    for (at, object) in snapshot.objects_of(vocab::DESCRIPTION) {
        let entry = || GapEntry {
            reference: at.reference.clone(),
            object_id: at.id.clone(),
            name: snapshot.linked_factors(at).into_iter().next().map(str::to_string),
            accessibility: None,
        };
        let evidenced = object.value(vocab::EMPIRICAL_EVIDENCE) == Some(vocab::YES)
            || object.value(vocab::PRACTITIONERS_INVOLVED) == Some(vocab::YES);
        if !evidenced {
            report.descriptions_without_evidence.push(entry());
        }
        if object.filled_note(vocab::IMPACT).is_none() {
            report.descriptions_without_impact.push(entry());
        }
    }

    for taxonomy in [vocab::DATASET, vocab::APPROACH] {
        let public = snapshot.schema().public_accessibility(taxonomy);
        for (at, object) in snapshot.objects_of(taxonomy) {
            let accessibility = object.value(vocab::ACCESSIBILITY);
            if !accessibility.is_some_and(|a| public.contains(a)) {
                report.undisclosed_resources.push(GapEntry {
                    reference: at.reference.clone(),
                    object_id: at.id.clone(),
                    name: object.note(vocab::NAME).map(str::to_string),
                    accessibility: accessibility.map(str::to_string),
                });
            }
        }
    }
    report.undisclosed_resources.sort();
    report
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AuthorEntry {
    pub references: Vec<String>,
    /// Factors asserted or described in the author's references.
    pub factors: Vec<String>,
    pub datasets: Vec<ObjectRef>,
    pub approaches: Vec<ObjectRef>,
}

/// Authors by exact name with what their references contributed.
pub fn author_index(snapshot: &OntologySnapshot) -> BTreeMap<String, AuthorEntry> {
    let index = snapshot.indexes();
    index
        .author_references
        .iter()
        .map(|(author, references)| {
            let mut factors = BTreeSet::new();
            let mut datasets = Vec::new();
            let mut approaches = Vec::new();
            for reference in references {
                for at in index.reference_objects.get(reference).into_iter().flatten() {
                    let Some(object) = snapshot.object(at) else { continue };
                    match object.taxonomy.as_str() {
                        vocab::FACTOR | vocab::DESCRIPTION => {
                            factors.extend(snapshot.factor_of(at).map(str::to_string));
                        }
                        vocab::DATASET => datasets.push(at.clone()),
                        vocab::APPROACH => approaches.push(at.clone()),
                        _ => {}
                    }
                }
            }
            let entry = AuthorEntry {
                references: references.iter().cloned().collect(),
                factors: factors.into_iter().collect(),
                datasets,
                approaches,
            };
            (author.clone(), entry)
        })
        .collect()
}
