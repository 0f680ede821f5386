//! Inter-annotator agreement between two independent extractions of the
//! same references.
//!
//! Dimensions score 1 when both extractors chose the same characteristic and
//! 0 otherwise; scope notes score their gestalt similarity. Objects only one
//! extractor found score 0 on every attribute they carry.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::extraction::{ExtractionRecord, OntologyObject};
use crate::schema::TaxonomySchema;
use crate::similarity::similarity;
use crate::text::normalize_factor_name;
use crate::vocab;

pub const UNMATCHED_POLICY: &str =
    "objects extracted by only one side score 0 on every dimension and scope note they carry";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("cannot align `{a}` with `{b}`: reference keys differ")]
    ReferenceMismatch { a: String, b: String },
    #[error("the two extraction sets share no reference key")]
    EmptyComparison,
}

/// Alignment key: taxonomy plus the normalized name the object is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectKey {
    pub taxonomy: String,
    pub name: String,
}

impl fmt::Display for ObjectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.taxonomy, self.name)
    }
}

impl Serialize for ObjectKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl ObjectKey {
    /// Factors, datasets and approaches by their name note; descriptions by
    /// the factor they describe. Falls back to the object id.
    pub fn of(object: &OntologyObject) -> ObjectKey {
        let named = if object.taxonomy == vocab::DESCRIPTION {
            object.relations.values().flatten().next().map(String::as_str)
        } else {
            object.note(vocab::NAME)
        };
        let name = named
            .and_then(|n| normalize_factor_name(n).ok())
            .unwrap_or_else(|| object.id.clone());
        ObjectKey {
            taxonomy: object.taxonomy.clone(),
            name,
        }
    }
}

/// One aligned position; `None` marks an object the other side lacks.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPair<'a> {
    pub key: ObjectKey,
    pub a: Option<&'a OntologyObject>,
    pub b: Option<&'a OntologyObject>,
}

/// Pair the objects of two extractions of one reference. Objects sharing a
/// key on one side are paired in id order.
pub fn align_objects<'a>(
    a: &'a ExtractionRecord,
    b: &'a ExtractionRecord,
) -> Result<Vec<AlignedPair<'a>>, AgreementError> {
    if a.key() != b.key() {
        return Err(AgreementError::ReferenceMismatch {
            a: a.key().to_string(),
            b: b.key().to_string(),
        });
    }
    let group = |record: &'a ExtractionRecord| {
        let mut groups: BTreeMap<ObjectKey, Vec<&'a OntologyObject>> = BTreeMap::new();
        for object in &record.objects {
            groups.entry(ObjectKey::of(object)).or_default().push(object);
        }
        for objects in groups.values_mut() {
            objects.sort_by(|x, y| x.id.cmp(&y.id));
        }
        groups
    };
    let (mut left, mut right) = (group(a), group(b));
    let mut keys: Vec<ObjectKey> = left.keys().chain(right.keys()).cloned().collect();
    keys.sort();
    keys.dedup();

    let mut pairs = Vec::new();
    for key in keys {
        let xs = left.remove(&key).unwrap_or_default();
        let ys = right.remove(&key).unwrap_or_default();
        for i in 0..xs.len().max(ys.len()) {
            pairs.push(AlignedPair {
                key: key.clone(),
                a: xs.get(i).copied(),
                b: ys.get(i).copied(),
            });
        }
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttributeKind {
    Dimension,
    ScopeNote,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueScore {
    pub reference: String,
    pub object_key: ObjectKey,
    pub attribute: String,
    pub kind: AttributeKind,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupScore {
    pub name: String,
    pub n_values: usize,
    pub mean_agreement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub pair: (String, String),
    pub references_compared: Vec<String>,
    pub only_in_a: Vec<String>,
    pub only_in_b: Vec<String>,
    pub n_values: usize,
    pub mean_agreement: f64,
    pub per_reference: Vec<GroupScore>,
    pub per_attribute: Vec<GroupScore>,
    pub unmatched_policy: &'static str,
    pub value_scores: Vec<ValueScore>,
}

impl AgreementReport {
    pub fn summary(&self) -> String {
        format_agreement(self.n_values, self.mean_agreement)
    }
}

impl fmt::Display for AgreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

/// `n=<count>, agreement=<percent with two decimals>%`.
pub fn format_agreement(n_values: usize, mean_agreement: f64) -> String {
    format!("n={n_values}, agreement={mean_agreement:.2}%")
}

/// Percentage mean of scores; an empty comparison counts as full agreement.
pub fn mean_percentage<'a>(scores: impl IntoIterator<Item = &'a f64>) -> (usize, f64) {
    let (n, sum) = scores.into_iter().fold((0usize, 0.0f64), |(n, s), x| (n + 1, s + x));
    if n == 0 {
        (0, 100.0)
    } else {
        (n, 100.0 * sum / n as f64)
    }
}

/// Compare two extractors over the references both of them extracted.
/// `pair` defaults to `("A", "B")`; set it on the result to name the sides.
pub fn agreement_report(
    a: &[ExtractionRecord],
    b: &[ExtractionRecord],
    schema: &TaxonomySchema,
) -> Result<AgreementReport, AgreementError> {
    let index = |records: &[ExtractionRecord]| {
        let mut map: BTreeMap<String, ExtractionRecord> = BTreeMap::new();
        for record in records {
            map.entry(record.key().to_string()).or_insert_with(|| record.clone());
        }
        map
    };
    let (left, right) = (index(a), index(b));
    let references_compared: Vec<String> = left.keys().filter(|k| right.contains_key(*k)).cloned().collect();
    if references_compared.is_empty() {
        return Err(AgreementError::EmptyComparison);
    }

    let mut value_scores = Vec::new();
    for key in &references_compared {
        for pair in align_objects(&left[key], &right[key])? {
            score_pair(schema, key, &pair, &mut value_scores);
        }
    }

    let (n_values, mean_agreement) = mean_percentage(value_scores.iter().map(|s| &s.score));
    let mut by_reference: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut by_attribute: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for score in &value_scores {
        by_reference.entry(&score.reference).or_default().push(score.score);
        by_attribute
            .entry(format!("{}.{}", score.object_key.taxonomy, score.attribute))
            .or_default()
            .push(score.score);
    }
    let groups = |map: BTreeMap<&str, Vec<f64>>| {
        map.into_iter()
            .map(|(name, scores)| {
                let (n_values, mean_agreement) = mean_percentage(&scores);
                GroupScore {
                    name: name.to_string(),
                    n_values,
                    mean_agreement,
                }
            })
            .collect()
    };
    let per_reference = groups(by_reference);
    let per_attribute = groups(by_attribute.iter().map(|(k, v)| (k.as_str(), v.clone())).collect());

    Ok(AgreementReport {
        pair: ("A".into(), "B".into()),
        only_in_a: left.keys().filter(|k| !right.contains_key(*k)).cloned().collect(),
        only_in_b: right.keys().filter(|k| !left.contains_key(*k)).cloned().collect(),
        references_compared,
        n_values,
        mean_agreement,
        per_reference,
        per_attribute,
        unmatched_policy: UNMATCHED_POLICY,
        value_scores,
    })
}

fn score_pair(schema: &TaxonomySchema, reference: &str, pair: &AlignedPair<'_>, out: &mut Vec<ValueScore>) {
    let Some(taxonomy) = schema.taxonomy(&pair.key.taxonomy) else {
        return;
    };
    let mut push = |attribute: &str, kind, score| {
        out.push(ValueScore {
            reference: reference.to_string(),
            object_key: pair.key.clone(),
            attribute: attribute.to_string(),
            kind,
            score,
        })
    };
    match (pair.a, pair.b) {
        (Some(a), Some(b)) => {
            for dim in taxonomy.expanded_dimensions() {
                let equal = a.value(&dim.name) == b.value(&dim.name);
                push(&dim.name, AttributeKind::Dimension, if equal { 1.0 } else { 0.0 });
            }
            for note in &taxonomy.scope_notes {
                if a.note(&note.name).is_some() || b.note(&note.name).is_some() {
                    let score = similarity(a.note(&note.name).unwrap_or(""), b.note(&note.name).unwrap_or(""));
                    push(&note.name, AttributeKind::ScopeNote, score);
                }
            }
        }
        (Some(only), None) | (None, Some(only)) => {
            for dim in taxonomy.expanded_dimensions() {
                if only.value(&dim.name).is_some() {
                    push(&dim.name, AttributeKind::Dimension, 0.0);
                }
            }
            for note in &taxonomy.scope_notes {
                if only.note(&note.name).is_some() {
                    push(&note.name, AttributeKind::ScopeNote, 0.0);
                }
            }
        }
        (None, None) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatter() {
        assert_eq!(format_agreement(799, 85.03), "n=799, agreement=85.03%");
        assert_eq!(format_agreement(6, 500.0 / 6.0), "n=6, agreement=83.33%");
    }

    #[test]
    fn empty_mean_is_full_agreement() {
        assert_eq!(mean_percentage(&[]), (0, 100.0));
        assert_eq!(mean_percentage(&[1.0, 0.0]), (2, 50.0));
    }
}
