mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use reqont_core::agreement::agreement_report;
use reqont_core::{ExtractionRecord, TaxonomySchema};

fn mean(a: &[ExtractionRecord], b: &[ExtractionRecord], schema: &TaxonomySchema) -> f64 {
    agreement_report(a, b, schema).unwrap().mean_agreement
}

// the second extractor disagrees on a few values and rewrites a few notes
fn disagreeing(records: &[ExtractionRecord], schema: &TaxonomySchema, rng: &mut StdRng) -> Vec<ExtractionRecord> {
    let mut out = records.to_vec();
    for record in &mut out {
        for object in &mut record.objects {
            let dims = schema.taxonomy(&object.taxonomy).unwrap().expanded_dimensions();
            for dim in dims {
                if rng.gen_bool(0.15) {
                    let pick = dim.characteristics.choose(rng).unwrap().clone();
                    object.defaulted.remove(&dim.name);
                    object.values.insert(dim.name, pick);
                }
            }
            for text in object.notes.values_mut() {
                if rng.gen_bool(0.2) {
                    text.push_str(" (paraphrased)");
                }
            }
        }
    }
    out
}

#[test]
fn self_agreement_is_total() {
    for repo in [common::seed(), common::synthetic()] {
        let report = agreement_report(&repo.records, &repo.records, &repo.schema).unwrap();
        assert_eq!(report.mean_agreement, 100.0);
        assert!(report.n_values > 0);
        assert_eq!(report.n_values, report.value_scores.len());
    }
}

#[test]
fn disjoint_extractions_cannot_be_compared() {
    let seed = common::seed();
    let synthetic = common::synthetic();
    assert!(agreement_report(&seed.records, &synthetic.records, &synthetic.schema).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scores_are_bounded_and_the_mean_is_their_average(seed in any::<u64>()) {
        let repo = common::synthetic();
        let other = disagreeing(&repo.records, &repo.schema, &mut StdRng::seed_from_u64(seed));
        let report = agreement_report(&repo.records, &other, &repo.schema).unwrap();
        prop_assert!(report.value_scores.iter().all(|s| (0.0..=1.0).contains(&s.score)));
        let sum: f64 = report.value_scores.iter().map(|s| s.score).sum();
        let expected = 100.0 * sum / report.n_values as f64;
        prop_assert!((report.mean_agreement - expected).abs() < 1e-9);
    }

    #[test]
    fn mean_ignores_record_and_object_order(seed in any::<u64>()) {
        let repo = common::synthetic();
        let mut rng = StdRng::seed_from_u64(seed);
        let other = disagreeing(&repo.records, &repo.schema, &mut rng);
        let baseline = mean(&repo.records, &other, &repo.schema);
        let shuffle = |records: &[ExtractionRecord], rng: &mut StdRng| {
            let mut records = records.to_vec();
            records.shuffle(rng);
            for record in &mut records {
                record.objects.shuffle(rng);
            }
            records
        };
        let (a, b) = (shuffle(&repo.records, &mut rng), shuffle(&other, &mut rng));
        prop_assert!((mean(&a, &b, &repo.schema) - baseline).abs() < 1e-9);
    }

    #[test]
    fn a_perfect_pair_never_lowers_the_mean(seed in any::<u64>(), split in 1usize..12) {
        let repo = common::synthetic();
        let other = disagreeing(&repo.records, &repo.schema, &mut StdRng::seed_from_u64(seed));
        // compare the first `split` references; the next one is added agreeing perfectly
        let without = mean(&repo.records[..split], &other[..split], &repo.schema);
        let mut b = other[..split].to_vec();
        b.push(repo.records[split].clone());
        let with = mean(&repo.records[..=split], &b, &repo.schema);
        prop_assert!(with >= without - 1e-9, "{} < {}", with, without);
    }
}
