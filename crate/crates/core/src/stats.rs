use std::collections::BTreeMap;

use serde::Serialize;

use crate::snapshot::OntologySnapshot;
use crate::vocab;

/// Corpus counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SummaryStats {
    pub n_references: usize,
    /// References with at least one factor or description object.
    pub n_references_with_factor: usize,
    pub n_factors: usize,
    pub n_descriptions: usize,
    pub n_datasets: usize,
    pub n_approaches: usize,
    /// Number of linked descriptions to number of factors with that many.
    pub description_count_histogram: BTreeMap<usize, usize>,
    pub n_datasets_public: usize,
    pub n_approaches_public: usize,
    pub n_descriptions_with_evidence_or_practitioners: usize,
    pub n_descriptions_with_impact: usize,
}

pub fn summary_stats(snapshot: &OntologySnapshot) -> SummaryStats {
    let count = |taxonomy: &str| snapshot.objects_of(taxonomy).count();
    let public = |taxonomy: &str| {
        let public = snapshot.schema().public_accessibility(taxonomy);
        snapshot
            .objects_of(taxonomy)
            .filter(|(_, o)| o.value(vocab::ACCESSIBILITY).is_some_and(|a| public.contains(a)))
            .count()
    };

    let mut histogram = BTreeMap::new();
    for descriptions in snapshot.indexes().factor_descriptions.values() {
        *histogram.entry(descriptions.len()).or_insert(0) += 1;
    }

    let descriptions: Vec<_> = snapshot.objects_of(vocab::DESCRIPTION).map(|(_, o)| o).collect();
    SummaryStats {
        n_references: snapshot.records().len(),
        n_references_with_factor: snapshot
            .records()
            .iter()
            .filter(|r| {
                r.objects
                    .iter()
                    .any(|o| o.taxonomy == vocab::FACTOR || o.taxonomy == vocab::DESCRIPTION)
            })
            .count(),
        n_factors: snapshot.factors().len(),
        n_descriptions: descriptions.len(),
        n_datasets: count(vocab::DATASET),
        n_approaches: count(vocab::APPROACH),
        description_count_histogram: histogram,
        n_datasets_public: public(vocab::DATASET),
        n_approaches_public: public(vocab::APPROACH),
        n_descriptions_with_evidence_or_practitioners: descriptions
            .iter()
            .filter(|d| {
                d.value(vocab::EMPIRICAL_EVIDENCE) == Some(vocab::YES)
                    || d.value(vocab::PRACTITIONERS_INVOLVED) == Some(vocab::YES)
            })
            .count(),
        n_descriptions_with_impact: descriptions
            .iter()
            .filter(|d| d.filled_note(vocab::IMPACT).is_some())
            .count(),
    }
}
