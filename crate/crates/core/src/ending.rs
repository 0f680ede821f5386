//! Objective ending conditions of the iterative taxonomy-development method.
//!
//! EC1 all candidate references examined; EC2 nothing merged or split in the
//! last iteration; EC3 every characteristic taken by some object; EC4 no
//! dimension, characteristic or taxonomy added in the last iteration; EC5
//! dimension and characteristic names unique.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{from_json_slice, ParseError};
use crate::finding::FindingCode;
use crate::schema::validate_schema;
use crate::snapshot::OntologySnapshot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ConditionId {
    EC1,
    EC2,
    EC3,
    EC4,
    EC5,
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotEvaluable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotEvaluable => "not-evaluable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub verdict: Verdict,
    pub evidence: String,
}

impl ConditionVerdict {
    fn new(verdict: Verdict, evidence: impl Into<String>) -> Self {
        ConditionVerdict {
            verdict,
            evidence: evidence.into(),
        }
    }
}

pub type EndingConditions = BTreeMap<ConditionId, ConditionVerdict>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DevelopmentApproach {
    EmpiricalToConceptual,
    ConceptualToEmpirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChangeKind {
    AddDimension,
    RemoveDimension,
    MergeDimensions,
    SplitDimension,
    AddCharacteristic,
    RemoveCharacteristic,
    MergeCharacteristics,
    SplitCharacteristic,
    MergeObjects,
    SplitObjects,
    AddTaxonomy,
}

impl ChangeKind {
    pub fn is_merge_or_split(self) -> bool {
        matches!(
            self,
            ChangeKind::MergeDimensions
                | ChangeKind::SplitDimension
                | ChangeKind::MergeCharacteristics
                | ChangeKind::SplitCharacteristic
                | ChangeKind::MergeObjects
                | ChangeKind::SplitObjects
        )
    }

    pub fn is_addition(self) -> bool {
        matches!(
            self,
            ChangeKind::AddDimension | ChangeKind::AddCharacteristic | ChangeKind::AddTaxonomy
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ChangeKind::AddDimension => "add-dimension",
            ChangeKind::RemoveDimension => "remove-dimension",
            ChangeKind::MergeDimensions => "merge-dimensions",
            ChangeKind::SplitDimension => "split-dimension",
            ChangeKind::AddCharacteristic => "add-characteristic",
            ChangeKind::RemoveCharacteristic => "remove-characteristic",
            ChangeKind::MergeCharacteristics => "merge-characteristics",
            ChangeKind::SplitCharacteristic => "split-characteristic",
            ChangeKind::MergeObjects => "merge-objects",
            ChangeKind::SplitObjects => "split-objects",
            ChangeKind::AddTaxonomy => "add-taxonomy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeEvent {
    pub kind: ChangeKind,
    pub taxonomy: String,
    #[serde(default)]
    pub details: String,
}

impl fmt::Display for ChangeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in `{}`", self.kind.as_str(), self.taxonomy)?;
        if !self.details.is_empty() {
            write!(f, " ({})", self.details)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationLog {
    pub iteration: u32,
    pub approach: DevelopmentApproach,
    #[serde(default)]
    pub examined_references: Vec<String>,
    #[serde(default)]
    pub events: Vec<ChangeEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IterationFile {
    iterations: Vec<IterationLog>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub candidate_references: Vec<String>,
}

/// Parse `iterations.json`. Iteration numbers must be unique and
/// contiguous from 1; the result is ordered by iteration.
pub fn parse_iterations(raw: &[u8]) -> Result<Vec<IterationLog>, ParseError> {
    let file: IterationFile = from_json_slice(raw)?;
    let mut logs = file.iterations;
    logs.sort_by_key(|l| l.iteration);
    for (expected, log) in (1..).zip(&logs) {
        if log.iteration != expected {
            return Err(ParseError {
                path: "iterations".into(),
                line: 0,
                column: 0,
                message: format!(
                    "iteration numbers must be unique and contiguous from 1; expected {expected}, found {}",
                    log.iteration
                ),
            });
        }
    }
    Ok(logs)
}

pub fn serialize_iterations(logs: &[IterationLog]) -> Vec<u8> {
    crate::canonical::to_canonical_bytes(&IterationFile {
        iterations: logs.to_vec(),
    })
}

pub fn parse_manifest(raw: &[u8]) -> Result<CorpusManifest, ParseError> {
    from_json_slice(raw)
}

/// `(taxonomy, expanded dimension, characteristic)` triples no object takes.
pub fn uncovered_characteristics(snapshot: &OntologySnapshot) -> Vec<(String, String, String)> {
    let mut taken: BTreeSet<(&str, &str, &str)> = BTreeSet::new();
    for (_, object) in snapshot.objects() {
        for (dimension, value) in &object.values {
            taken.insert((&object.taxonomy, dimension, value));
        }
    }
    let mut uncovered = Vec::new();
    for taxonomy in &snapshot.schema().taxonomies {
        for dimension in taxonomy.expanded_dimensions() {
            for characteristic in &dimension.characteristics {
                if !taken.contains(&(&taxonomy.name, &dimension.name, characteristic)) {
                    uncovered.push((taxonomy.name.clone(), dimension.name.clone(), characteristic.clone()));
                }
            }
        }
    }
    uncovered
}

pub fn check_ending_conditions(
    snapshot: &OntologySnapshot,
    logs: &[IterationLog],
    manifest: Option<&CorpusManifest>,
) -> EndingConditions {
    let last = logs.iter().max_by_key(|l| l.iteration);
    let mut verdicts = BTreeMap::new();

    verdicts.insert(ConditionId::EC1, examined_all(logs, manifest));
    verdicts.insert(
        ConditionId::EC2,
        last_iteration_free_of(last, ChangeKind::is_merge_or_split, "merge or split"),
    );

    let uncovered = uncovered_characteristics(snapshot);
    let ec3 = if uncovered.is_empty() {
        let total: usize = snapshot
            .schema()
            .taxonomies
            .iter()
            .flat_map(|t| t.expanded_dimensions())
            .map(|d| d.characteristics.len())
            .sum();
        ConditionVerdict::new(Verdict::Pass, format!("all {total} characteristics are taken by at least one object"))
    } else {
        let names: Vec<String> = uncovered.iter().map(|(t, d, c)| format!("{t}.{d}:{c}")).collect();
        ConditionVerdict::new(Verdict::Fail, names.join(", "))
    };
    verdicts.insert(ConditionId::EC3, ec3);

    verdicts.insert(
        ConditionId::EC4,
        last_iteration_free_of(last, ChangeKind::is_addition, "addition"),
    );

    let duplicates: Vec<String> = validate_schema(snapshot.schema())
        .into_iter()
        .filter(|f| matches!(f.code, FindingCode::DuplicateDimension | FindingCode::DuplicateCharacteristic))
        .map(|f| f.subject)
        .collect();
    let ec5 = if duplicates.is_empty() {
        ConditionVerdict::new(Verdict::Pass, "all dimensions and characteristics are unique")
    } else {
        ConditionVerdict::new(Verdict::Fail, format!("not unique: {}", duplicates.join(", ")))
    };
    verdicts.insert(ConditionId::EC5, ec5);
    verdicts
}

fn examined_all(logs: &[IterationLog], manifest: Option<&CorpusManifest>) -> ConditionVerdict {
    let Some(manifest) = manifest.filter(|m| !m.candidate_references.is_empty()) else {
        return ConditionVerdict::new(Verdict::NotEvaluable, "no candidate reference manifest");
    };
    let examined: BTreeSet<&str> = logs
        .iter()
        .flat_map(|l| l.examined_references.iter().map(String::as_str))
        .collect();
    let candidates: BTreeSet<&str> = manifest.candidate_references.iter().map(String::as_str).collect();
    let missing: Vec<&str> = candidates.difference(&examined).copied().collect();
    if missing.is_empty() {
        ConditionVerdict::new(Verdict::Pass, format!("all {} candidate references examined", candidates.len()))
    } else {
        ConditionVerdict::new(Verdict::Fail, format!("not examined: {}", missing.join(", ")))
    }
}

fn last_iteration_free_of(
    last: Option<&IterationLog>,
    offending: fn(ChangeKind) -> bool,
    what: &str,
) -> ConditionVerdict {
    let Some(last) = last else {
        return ConditionVerdict::new(Verdict::NotEvaluable, "no iteration log");
    };
    let events: Vec<String> = last
        .events
        .iter()
        .filter(|e| offending(e.kind))
        .map(ToString::to_string)
        .collect();
    if events.is_empty() {
        ConditionVerdict::new(
            Verdict::Pass,
            format!("no {what} events in iteration {}", last.iteration),
        )
    } else {
        ConditionVerdict::new(
            Verdict::Fail,
            format!("iteration {}: {}", last.iteration, events.join("; ")),
        )
    }
}

/// Subjective ending conditions, reported for completeness only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubjectiveCondition {
    pub name: &'static str,
    pub status: &'static str,
    pub pointer: &'static str,
}

pub fn subjective_conditions() -> Vec<SubjectiveCondition> {
    const HUMAN: &str = "requires human assessment";
    vec![
        SubjectiveCondition {
            name: "concise",
            status: HUMAN,
            pointer: "see CONCISENESS lints (dimension count per taxonomy within 7 plus or minus 2)",
        },
        SubjectiveCondition {
            name: "robust",
            status: HUMAN,
            pointer: "do the dimensions and characteristics differentiate the objects",
        },
        SubjectiveCondition {
            name: "comprehensive",
            status: HUMAN,
            pointer: "can all objects of the domain be classified",
        },
        SubjectiveCondition {
            name: "extendable",
            status: HUMAN,
            pointer: "can new dimensions or characteristics be added easily",
        },
        SubjectiveCondition {
            name: "explanatory",
            status: HUMAN,
            pointer: "do the dimensions and characteristics explain the objects",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iteration_numbers_must_be_contiguous() {
        let gap = br#"{"iterations": [
            {"iteration": 1, "approach": "conceptual-to-empirical"},
            {"iteration": 3, "approach": "empirical-to-conceptual"}]}"#;
        assert!(parse_iterations(gap).unwrap_err().message.contains("expected 2"));
        let dup = br#"{"iterations": [
            {"iteration": 1, "approach": "conceptual-to-empirical"},
            {"iteration": 1, "approach": "empirical-to-conceptual"}]}"#;
        assert!(parse_iterations(dup).is_err());
        let ok = br#"{"iterations": [
            {"iteration": 2, "approach": "empirical-to-conceptual"},
            {"iteration": 1, "approach": "conceptual-to-empirical"}]}"#;
        let logs = parse_iterations(ok).unwrap();
        assert_eq!(logs.iter().map(|l| l.iteration).collect::<Vec<_>>(), [1, 2]);
    }

    #[test]
    fn unknown_event_kind_is_rejected() {
        let raw = br#"{"iterations": [{"iteration": 1, "approach": "conceptual-to-empirical",
            "events": [{"kind": "rename-dimension", "taxonomy": "factor"}]}]}"#;
        let err = parse_iterations(raw).unwrap_err();
        assert!(err.path.contains("kind"), "{err}");
    }

    #[test]
    fn manifest_round_trips() {
        let m = parse_manifest(br#"{"candidate_references": ["a", "b"]}"#).unwrap();
        assert_eq!(m.candidate_references, ["a", "b"]);
        assert!(parse_manifest(br#"{"candidates": []}"#).is_err());
    }

    #[test]
    fn event_kinds_partition() {
        use ChangeKind::*;
        let all = [
            AddDimension,
            RemoveDimension,
            MergeDimensions,
            SplitDimension,
            AddCharacteristic,
            RemoveCharacteristic,
            MergeCharacteristics,
            SplitCharacteristic,
            MergeObjects,
            SplitObjects,
            AddTaxonomy,
        ];
        for kind in all {
            assert!(!(kind.is_addition() && kind.is_merge_or_split()));
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.as_str()));
        }
        assert_eq!(all.iter().filter(|k| k.is_merge_or_split()).count(), 6);
        assert_eq!(all.iter().filter(|k| k.is_addition()).count(), 3);
    }
}
