#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use reqont::service::{router, AppState, TOTAL_COUNT_HEADER, VERSION_HEADER};
use reqont_core::canonical::to_canonical_bytes;
use serde_json::{json, Value};
use tower::ServiceExt;

pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn seed_dir() -> PathBuf {
    workspace_root().join("seed")
}

pub fn synthetic_dir() -> PathBuf {
    workspace_root().join("fixtures/synthetic12")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn app(root: &Path) -> (Arc<AppState>, Router) {
    let state = Arc::new(AppState::open(root).expect("repository loads"));
    let app = router(Arc::clone(&state));
    (state, app)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Captured {
    pub status: StatusCode,
    pub version: Option<u64>,
    pub total_count: Option<usize>,
    pub raw: Vec<u8>,
    pub body: Value,
}

pub async fn get(app: &Router, uri: &str) -> Captured {
    let request = Request::get(uri).body(Body::empty()).expect("request");
    let response = app.clone().oneshot(request).await.expect("infallible");
    let (parts, body) = response.into_parts();
    let header = |name: &str| {
        parts
            .headers
            .get(name)
            .map(|v| v.to_str().expect("ascii header").parse().expect("numeric header"))
    };
    let version = header(VERSION_HEADER);
    let total_count = header(TOTAL_COUNT_HEADER).map(|n: u64| n as usize);
    let status = parts.status;
    let raw = body.collect().await.expect("body").to_bytes().to_vec();
    let body = serde_json::from_slice(&raw).expect("JSON body");
    Captured {
        status,
        version,
        total_count,
        raw,
        body,
    }
}

/// Every endpoint with its success and error paths, against the seed corpus.
pub const GOLDEN_CASES: &[(&str, &str)] = &[
    ("schema", "/api/v1/schema"),
    ("factors", "/api/v1/factors"),
    ("factors_scope_use_case", "/api/v1/factors?scope=use%20case"),
    ("factors_scope_word_empty", "/api/v1/factors?scope=word"),
    ("factors_aspect", "/api/v1/factors?aspect=understandability:impacted%20negatively"),
    ("factors_text_query", "/api/v1/factors?text_query=REUSE"),
    ("factors_has_dataset", "/api/v1/factors?has_dataset=true&has_approach=true"),
    ("factors_evidence_false", "/api/v1/factors?evidence=false"),
    ("factors_accessibility", "/api/v1/factors?accessibility=private"),
    ("factors_limit_zero", "/api/v1/factors?limit=0"),
    ("factors_offset_past_end", "/api/v1/factors?offset=5"),
    ("factors_unknown_scope_400", "/api/v1/factors?scope=paragraphs"),
    ("factors_unknown_aspect_400", "/api/v1/factors?aspect=elegance:not%20impacted"),
    ("factors_bad_aspect_format_400", "/api/v1/factors?aspect=understandability"),
    ("factors_unknown_accessibility_400", "/api/v1/factors?accessibility=leaked"),
    ("factors_bad_flag_400", "/api/v1/factors?has_dataset=maybe"),
    ("factors_unknown_param_400", "/api/v1/factors?colour=blue"),
    ("factors_repeated_param_400", "/api/v1/factors?scope=word&scope=phrase"),
    ("factors_limit_too_large_400", "/api/v1/factors?limit=1001"),
    ("factors_negative_offset_400", "/api/v1/factors?offset=-1"),
    ("factor", "/api/v1/factors/containing-subflows"),
    ("factor_unknown_404", "/api/v1/factors/passive-voice"),
    ("factor_resources", "/api/v1/factors/containing-subflows/resources"),
    ("factor_resources_unknown_404", "/api/v1/factors/passive-voice/resources"),
    ("descriptions", "/api/v1/descriptions"),
    ("descriptions_filter_param_400", "/api/v1/descriptions?scope=word"),
    ("datasets", "/api/v1/datasets"),
    ("datasets_paged", "/api/v1/datasets?limit=1&offset=1"),
    ("approaches", "/api/v1/approaches"),
    ("stats", "/api/v1/stats"),
    ("gaps", "/api/v1/gaps"),
    ("authors", "/api/v1/authors"),
    ("validation", "/api/v1/validation"),
    ("health", "/api/v1/health"),
    ("unknown_endpoint_404", "/api/v1/glossary"),
];

/// Status, headers and body as stored on disk; the load time is masked.
pub fn golden_record(uri: &str, captured: &Captured) -> Value {
    let mut body = captured.body.clone();
    if let Some(at) = body.get_mut("snapshot_loaded_at") {
        *at = json!("<masked>");
    }
    json!({
        "request": uri,
        "status": captured.status.as_u16(),
        "x-snapshot-version": captured.version,
        "x-total-count": captured.total_count,
        "body": body,
    })
}

/// Compare every golden case; with `UPDATE_GOLDEN=1` rewrite the files
/// instead. Returns the number of cases checked.
pub async fn check_goldens(app: &Router) -> Result<usize, String> {
    let update = std::env::var("UPDATE_GOLDEN").is_ok_and(|v| v == "1");
    let mut mismatches = Vec::new();
    for (name, uri) in GOLDEN_CASES {
        let captured = get(app, uri).await;
        let expect_status = if name.ends_with("_400") {
            400
        } else if name.ends_with("_404") {
            404
        } else {
            200
        };
        if captured.status.as_u16() != expect_status {
            mismatches.push(format!("{name}: status {} (wanted {expect_status})", captured.status));
        }
        let record = to_canonical_bytes(&golden_record(uri, &captured));
        let path = golden_dir().join(format!("{name}.json"));
        if update {
            fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
            fs::write(&path, &record).map_err(|e| e.to_string())?;
            continue;
        }
        match fs::read(&path) {
            Ok(stored) if stored == record => {}
            Ok(_) => mismatches.push(format!("{name}: differs from {}", path.display())),
            Err(e) => mismatches.push(format!("{name}: {e}")),
        }
    }
    if mismatches.is_empty() {
        Ok(GOLDEN_CASES.len())
    } else {
        Err(mismatches.join("; "))
    }
}

/// Recursive copy of a repository into a fresh temporary directory.
pub fn copy_repo(src: &Path) -> tempfile::TempDir {
    fn copy(src: &Path, dst: &Path) {
        fs::create_dir_all(dst).expect("mkdir");
        for entry in fs::read_dir(src).expect("readdir") {
            let entry = entry.expect("entry");
            let target = dst.join(entry.file_name());
            if entry.file_type().expect("type").is_dir() {
                copy(&entry.path(), &target);
            } else {
                fs::copy(entry.path(), target).expect("copy");
            }
        }
    }
    let dir = tempfile::tempdir().expect("tempdir");
    copy(src, dir.path());
    dir
}

/// Run the built binary and capture its exit code and output.
pub fn run_cli(args: &[&str]) -> (i32, Vec<u8>, String) {
    let output = std::process::Command::new(env!("CARGO_BIN_EXE_reqont"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        output.stdout,
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

/// An extraction of a made-up reference with no objects; adding one
/// changes `n_references`, which tells snapshots apart after a reload.
pub fn extra_reference(key: &str) -> Vec<u8> {
    to_canonical_bytes(&json!({
        "reference": {
            "key": key,
            "title": format!("Study {key}"),
            "authors": ["Test Author"],
            "year": 2020,
            "venue": "Test Venue"
        },
        "objects": []
    }))
}
