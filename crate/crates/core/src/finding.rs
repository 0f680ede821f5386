//! Validation findings shared by the schema, object and corpus checks.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Stable machine-readable identifier of a finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    // structure file
    EmptyName,
    DuplicateTaxonomy,
    DuplicateDimension,
    DuplicateCharacteristic,
    EmptyCluster,
    BadDefault,
    DuplicateScopeNote,
    DuplicateRelation,
    DanglingRelationTarget,
    InvalidCardinality,
    InvalidPublicOverride,
    // individual extraction records
    InvalidReference,
    DuplicateObjectId,
    InvalidObjectId,
    UnknownTaxonomy,
    UnknownDimension,
    UnknownCharacteristic,
    MissingValue,
    UnknownScopeNote,
    MissingScopeNote,
    UnknownRelation,
    FileNameMismatch,
    // cross-record links
    DuplicateReference,
    DanglingRelation,
    RelationTargetMismatch,
    CardinalityBreach,
    FactorWithoutDescription,
    // competing literature claims (warnings)
    ConflictingAssertion,
}

impl FindingCode {
    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::EmptyName => "EMPTY_NAME",
            FindingCode::DuplicateTaxonomy => "DUPLICATE_TAXONOMY",
            FindingCode::DuplicateDimension => "DUPLICATE_DIMENSION",
            FindingCode::DuplicateCharacteristic => "DUPLICATE_CHARACTERISTIC",
            FindingCode::EmptyCluster => "EMPTY_CLUSTER",
            FindingCode::BadDefault => "BAD_DEFAULT",
            FindingCode::DuplicateScopeNote => "DUPLICATE_SCOPE_NOTE",
            FindingCode::DuplicateRelation => "DUPLICATE_RELATION",
            FindingCode::DanglingRelationTarget => "DANGLING_RELATION_TARGET",
            FindingCode::InvalidCardinality => "INVALID_CARDINALITY",
            FindingCode::InvalidPublicOverride => "INVALID_PUBLIC_OVERRIDE",
            FindingCode::InvalidReference => "INVALID_REFERENCE",
            FindingCode::DuplicateObjectId => "DUPLICATE_OBJECT_ID",
            FindingCode::InvalidObjectId => "INVALID_OBJECT_ID",
            FindingCode::UnknownTaxonomy => "UNKNOWN_TAXONOMY",
            FindingCode::UnknownDimension => "UNKNOWN_DIMENSION",
            FindingCode::UnknownCharacteristic => "UNKNOWN_CHARACTERISTIC",
            FindingCode::MissingValue => "MISSING_VALUE",
            FindingCode::UnknownScopeNote => "UNKNOWN_SCOPE_NOTE",
            FindingCode::MissingScopeNote => "MISSING_SCOPE_NOTE",
            FindingCode::UnknownRelation => "UNKNOWN_RELATION",
            FindingCode::FileNameMismatch => "FILE_NAME_MISMATCH",
            FindingCode::DuplicateReference => "DUPLICATE_REFERENCE",
            FindingCode::DanglingRelation => "DANGLING_RELATION",
            FindingCode::RelationTargetMismatch => "RELATION_TARGET_MISMATCH",
            FindingCode::CardinalityBreach => "CARDINALITY_BREACH",
            FindingCode::FactorWithoutDescription => "FACTOR_WITHOUT_DESCRIPTION",
            FindingCode::ConflictingAssertion => "CONFLICTING_ASSERTION",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One problem found in the structure file or the corpus.
///
/// `subject` locates it: `taxonomy.dimension` for structure findings,
/// `reference#object-id` for objects, a factor key for merged factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Finding {
    pub code: FindingCode,
    pub subject: String,
    pub message: String,
}

impl Finding {
    pub fn new(code: FindingCode, subject: impl Into<String>, message: impl Into<String>) -> Self {
        Finding {
            code,
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.code, self.subject, self.message)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_name_matches_as_str() {
        for code in [
            FindingCode::EmptyName,
            FindingCode::BadDefault,
            FindingCode::DanglingRelationTarget,
            FindingCode::FactorWithoutDescription,
            FindingCode::ConflictingAssertion,
        ] {
            let json = serde_json::to_string(&code).unwrap();
            assert_eq!(json, format!("\"{}\"", code.as_str()));
        }
    }
}
