#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use reqont_core::repository::LoadedRepository;
use reqont_core::OntologySnapshot;
use serde_json::Value;

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn seed() -> LoadedRepository {
    LoadedRepository::open(workspace_root().join("seed")).expect("seed loads")
}

pub fn synthetic() -> LoadedRepository {
    LoadedRepository::open(workspace_root().join("fixtures/synthetic12")).expect("synthetic corpus loads")
}

/// Snapshot of a repository that must validate clean.
pub fn clean_snapshot(repo: &LoadedRepository) -> OntologySnapshot {
    let (report, snapshot) = repo.validate();
    assert!(report.is_clean(), "{:?}", report.codes());
    snapshot
}

/// JSON text of `value` with object keys in a random order.
pub fn write_shuffled(value: &Value, rng: &mut StdRng, out: &mut String) {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<_> = map.iter().collect();
            entries.shuffle(rng);
            out.push('{');
            for (i, (key, item)) in entries.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key"));
                out.push(':');
                write_shuffled(item, rng, out);
            }
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_shuffled(item, rng, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&serde_json::to_string(scalar).expect("scalar")),
    }
}
