//! Names the query, statistics and agreement layers rely on.
//!
//! Everything else is driven by the structure file; these are the taxonomy,
//! dimension and scope-note names that carry fixed meaning.

pub const FACTOR: &str = "factor";
pub const DESCRIPTION: &str = "description";
pub const DATASET: &str = "dataset";
pub const APPROACH: &str = "approach";

pub const SCOPE: &str = "scope";
pub const ASPECT: &str = "aspect";
pub const ACCESSIBILITY: &str = "accessibility";
pub const EMPIRICAL_EVIDENCE: &str = "empirical_evidence";
pub const PRACTITIONERS_INVOLVED: &str = "practitioners_involved";
pub const YES: &str = "yes";

pub const NAME: &str = "name";
pub const ALIASES: &str = "aliases";
pub const DEFINITION: &str = "definition";
pub const IMPACT: &str = "impact";

/// Separator between synonym names in a factor's `aliases` note.
pub const ALIAS_SEPARATOR: char = ';';

/// Dataset accessibility characteristics counted as publicly available.
pub const PUBLIC_DATASET_ACCESSIBILITY: &[&str] = &["available in paper", "open access link"];
/// Approach accessibility characteristics counted as publicly available.
pub const PUBLIC_APPROACH_ACCESSIBILITY: &[&str] = &["open access", "open source"];
