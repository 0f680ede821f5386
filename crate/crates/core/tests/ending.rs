mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use reqont_core::ending::{check_ending_conditions, uncovered_characteristics, ConditionId, Verdict};
use reqont_core::snapshot::build_snapshot_lenient;
use reqont_core::{ExtractionRecord, OntologySnapshot};

// every (taxonomy, dimension, characteristic) no object carries
fn brute_force_uncovered(snapshot: &OntologySnapshot) -> BTreeSet<(String, String, String)> {
    let mut out = BTreeSet::new();
    for taxonomy in &snapshot.schema().taxonomies {
        for dim in taxonomy.expanded_dimensions() {
            for c in &dim.characteristics {
                let covered = snapshot
                    .objects_of(&taxonomy.name)
                    .any(|(_, o)| o.value(&dim.name) == Some(c.as_str()));
                if !covered {
                    out.insert((taxonomy.name.clone(), dim.name.clone(), c.clone()));
                }
            }
        }
    }
    out
}

fn ec3(snapshot: &OntologySnapshot) -> Verdict {
    check_ending_conditions(snapshot, &[], None)[&ConditionId::EC3].verdict
}

#[test]
fn coverage_matches_brute_force_on_fixtures() {
    for repo in [common::seed(), common::synthetic()] {
        let snapshot = common::clean_snapshot(&repo);
        let found: BTreeSet<_> = uncovered_characteristics(&snapshot).into_iter().collect();
        assert_eq!(found, brute_force_uncovered(&snapshot));
        let expected = if found.is_empty() { Verdict::Pass } else { Verdict::Fail };
        assert_eq!(ec3(&snapshot), expected);
    }
}

#[test]
fn reports_are_pure() {
    let repo = common::seed();
    let snapshot = common::clean_snapshot(&repo);
    let first = check_ending_conditions(&snapshot, &repo.logs, repo.manifest.as_ref());
    let second = check_ending_conditions(&snapshot, &repo.logs, repo.manifest.as_ref());
    assert_eq!(first, second);
    assert_eq!(first[&ConditionId::EC3].verdict, Verdict::Fail);
    for id in [ConditionId::EC1, ConditionId::EC2, ConditionId::EC4, ConditionId::EC5] {
        assert_eq!(first[&id].verdict, Verdict::Pass, "{id}");
    }
}

#[test]
fn missing_logs_are_not_evaluable() {
    let repo = common::seed();
    let snapshot = common::clean_snapshot(&repo);
    let report = check_ending_conditions(&snapshot, &[], None);
    for id in [ConditionId::EC1, ConditionId::EC2, ConditionId::EC4] {
        assert_eq!(report[&id].verdict, Verdict::NotEvaluable, "{id}");
    }
}

// one object per record, so objects can be added one at a time
fn singletons(records: &[ExtractionRecord]) -> Vec<ExtractionRecord> {
    records
        .iter()
        .flat_map(|r| {
            r.objects.iter().map(|o| {
                let mut single = r.clone();
                single.reference.key = format!("{}-{}", r.key(), o.id);
                single.objects = vec![o.clone()];
                single
            })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adding_objects_never_uncovers_anything(seed in any::<u64>()) {
        let repo = common::synthetic();
        let mut pool = singletons(&repo.records);
        pool.shuffle(&mut StdRng::seed_from_u64(seed));
        let mut previous: Option<BTreeSet<_>> = None;
        let mut previous_verdict = Verdict::Fail;
        for n in 0..=pool.len() {
            let (snapshot, _) = build_snapshot_lenient(&repo.schema, &pool[..n]);
            let uncovered: BTreeSet<_> = uncovered_characteristics(&snapshot).into_iter().collect();
            prop_assert_eq!(&uncovered, &brute_force_uncovered(&snapshot));
            if let Some(previous) = &previous {
                prop_assert!(uncovered.is_subset(previous));
            }
            let verdict = ec3(&snapshot);
            prop_assert!(!(previous_verdict == Verdict::Pass && verdict == Verdict::Fail));
            previous = Some(uncovered);
            previous_verdict = verdict;
        }
    }
}
