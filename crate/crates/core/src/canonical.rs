//! Deterministic JSON rendering used for every file this crate writes.
//!
//! Object keys are sorted by byte order at every depth, arrays keep their
//! order, indentation is two spaces and the output ends with one newline.

use serde::Serialize;
use serde_json::{Map, Value};

pub fn to_canonical_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let value = serde_json::to_value(value).expect("in-memory values serialize to JSON");
    canonical_value_bytes(&value)
}

pub fn canonical_value_bytes(value: &Value) -> Vec<u8> {
    let mut out =
        serde_json::to_vec_pretty(&sorted(value)).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

fn sorted(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by(|a, b| a.0.cmp(b.0));
            let mut out = Map::new();
            for (k, v) in entries {
                out.insert(k.clone(), sorted(v));
            }
            Value::Object(out)
        }
        Value::Array(items) => Value::Array(items.iter().map(sorted).collect()),
        other => other.clone(),
    }
}
