//! Schema-driven repository engine for an ontology of requirements quality
//! factors.
//!
//! The ontology is made of taxonomies (factor, description, dataset,
//! approach). A structure file declares each taxonomy's dimensions,
//! dimension-clusters, scope notes and relations; one extraction file per
//! publication records the objects extracted from it. This crate parses and
//! validates both, merges extractions into an immutable [`OntologySnapshot`],
//! evaluates taxonomy ending conditions, computes inter-annotator agreement
//! and answers the goal-oriented queries served by the `reqont` binary.

pub mod agreement;
pub mod canonical;
pub mod ending;
pub mod extraction;
pub mod finding;
pub mod query;
pub mod repository;
pub mod schema;
pub mod similarity;
pub mod snapshot;
pub mod stats;
pub mod text;
pub mod validate;
pub mod vocab;

mod error;

pub use error::ParseError;
pub use extraction::{
    canonical_serialize, parse_extraction, ExtractionRecord, OntologyObject, Reference,
};
pub use finding::{Finding, FindingCode};
pub use schema::{expand_clusters, parse_structure, validate_schema, TaxonomySchema};
pub use snapshot::{build_snapshot, ObjectRef, OntologySnapshot};
pub use text::normalize_factor_name;
