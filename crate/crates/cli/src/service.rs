//! Read-only JSON service over a repository snapshot.
//!
//! Each request clones the current snapshot handle once and answers from
//! it; a reload builds a new snapshot off to the side and swaps the handle.
//! Every response names the snapshot version it was computed from in the
//! `x-snapshot-version` header.

use std::collections::BTreeMap;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use chrono::{DateTime, SecondsFormat, Utc};
use reqont_core::canonical::to_canonical_bytes;
use reqont_core::query::{
    author_index, gap_report, list_objects, query_factors, resources_for_factor, AspectFilter, FactorFilter, FactorView,
    QueryError,
};
use reqont_core::repository::{LoadedRepository, RepositoryError};
use reqont_core::stats::summary_stats;
use reqont_core::validate::ValidationReport;
use reqont_core::{vocab, OntologySnapshot};
use serde::Serialize;
use serde_json::json;

pub const VERSION_HEADER: &str = "x-snapshot-version";
pub const TOTAL_COUNT_HEADER: &str = "x-total-count";
pub const DEFAULT_LIMIT: usize = 100;
pub const MAX_LIMIT: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReloadMode {
    /// Serve the startup snapshot until restarted.
    Manual,
    /// Reload on SIGHUP.
    OnSignal,
}

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub bind: IpAddr,
    pub port: u16,
    pub root: PathBuf,
    pub reload: ReloadMode,
}

/// One immutable, validated snapshot and when it was built.
#[derive(Debug)]
pub struct Loaded {
    pub version: u64,
    pub loaded_at: DateTime<Utc>,
    pub snapshot: OntologySnapshot,
    pub report: ValidationReport,
}

#[derive(Debug)]
pub struct AppState {
    root: PathBuf,
    current: RwLock<Arc<Loaded>>,
    reload_error: RwLock<Option<String>>,
    reloading: Mutex<()>,
    versions: AtomicU64,
}

fn load(root: &Path, version: u64) -> Result<Loaded, RepositoryError> {
    let repo = LoadedRepository::open(root)?;
    let (report, snapshot) = repo.validate_with_ending_conditions();
    Ok(Loaded {
        version,
        loaded_at: Utc::now(),
        snapshot,
        report,
    })
}

impl AppState {
    /// Load the repository; fails on I/O and parse errors only.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, RepositoryError> {
        let root = root.into();
        let loaded = load(&root, 1)?;
        Ok(AppState {
            root,
            current: RwLock::new(Arc::new(loaded)),
            reload_error: RwLock::new(None),
            reloading: Mutex::new(()),
            versions: AtomicU64::new(1),
        })
    }

    /// The snapshot new requests are answered from.
    pub fn current(&self) -> Arc<Loaded> {
        Arc::clone(&self.current.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Build a fresh snapshot and swap it in. On failure the old snapshot
    /// stays and the error is reported by the health endpoint until the
    /// next successful reload.
    pub fn reload(&self) -> Result<u64, RepositoryError> {
        let _one_at_a_time = self.reloading.lock().unwrap_or_else(|e| e.into_inner());
        let version = self.versions.load(Ordering::SeqCst) + 1;
        let built = load(&self.root, version);
        let mut error_slot = self.reload_error.write().unwrap_or_else(|e| e.into_inner());
        match built {
            Ok(loaded) => {
                self.versions.store(version, Ordering::SeqCst);
                *self.current.write().unwrap_or_else(|e| e.into_inner()) = Arc::new(loaded);
                *error_slot = None;
                tracing::info!(version, "snapshot reloaded");
                Ok(version)
            }
            Err(err) => {
                tracing::error!(%err, "reload failed; keeping previous snapshot");
                *error_slot = Some(err.to_string());
                Err(err)
            }
        }
    }

    pub fn reload_error(&self) -> Option<String> {
        self.reload_error.read().unwrap_or_else(|e| e.into_inner()).clone()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/schema", get(schema))
        .route("/factors", get(factors))
        .route("/factors/{key}", get(factor))
        .route("/factors/{key}/resources", get(resources))
        .route("/descriptions", get(descriptions))
        .route("/datasets", get(datasets))
        .route("/approaches", get(approaches))
        .route("/stats", get(stats))
        .route("/gaps", get(gaps))
        .route("/authors", get(authors))
        .route("/validation", get(validation))
        .route("/health", get(health));
    Router::new()
        .nest("/api/v1", api)
        .fallback(not_found)
        .with_state(state)
}

/// Serve until interrupted.
pub async fn serve(config: ServiceConfig) -> Result<(), ServeError> {
    let root = config.root.clone();
    let state = Arc::new(tokio::task::spawn_blocking(move || AppState::open(root)).await??);
    let report = &state.current().report;
    if !report.is_clean() {
        tracing::warn!(
            findings = report.errors().count(),
            "repository has validation findings; see /api/v1/validation"
        );
    }
    if config.reload == ReloadMode::OnSignal {
        spawn_signal_reloader(Arc::clone(&state))?;
    }

    let addr = SocketAddr::new(config.bind, config.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "serving");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[cfg(unix)]
fn spawn_signal_reloader(state: Arc<AppState>) -> Result<(), ServeError> {
    use tokio::signal::unix::{signal, SignalKind};
    let mut hangups = signal(SignalKind::hangup())?;
    tokio::spawn(async move {
        while hangups.recv().await.is_some() {
            let state = Arc::clone(&state);
            let _ = tokio::task::spawn_blocking(move || state.reload()).await;
        }
    });
    Ok(())
}

#[cfg(not(unix))]
fn spawn_signal_reloader(_state: Arc<AppState>) -> Result<(), ServeError> {
    Err(ServeError::Io(std::io::Error::other("reload on signal needs a unix platform")))
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error(transparent)]
    Repository(#[from] RepositoryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("loader task failed: {0}")]
    Join(#[from] tokio::task::JoinError),
}

/// JSON error body with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
}

impl ApiError {
    fn invalid_parameter(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: "invalid_parameter",
            message: message.into(),
        }
    }
}

impl From<QueryError> for ApiError {
    fn from(err: QueryError) -> Self {
        let (status, code) = match err {
            QueryError::UnknownCharacteristic { .. } => (StatusCode::BAD_REQUEST, "unknown_characteristic"),
            QueryError::UnknownFactor(_) => (StatusCode::NOT_FOUND, "unknown_factor"),
        };
        ApiError {
            status,
            code,
            message: err.to_string(),
        }
    }
}

fn json_response<T: Serialize + ?Sized>(version: u64, status: StatusCode, body: &T) -> Response {
    let mut response = (status, to_canonical_bytes(body)).into_response();
    let headers = response.headers_mut();
    headers.insert(header::CONTENT_TYPE, HeaderValue::from_static("application/json"));
    headers.insert(HeaderName::from_static(VERSION_HEADER), HeaderValue::from(version));
    response
}

fn respond<T: Serialize + ?Sized>(loaded: &Loaded, result: Result<&T, ApiError>) -> Response {
    match result {
        Ok(body) => json_response(loaded.version, StatusCode::OK, body),
        Err(err) => json_response(loaded.version, err.status, &err),
    }
}

type Params = Query<Vec<(String, String)>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Page {
    limit: usize,
    offset: usize,
}

/// Split query parameters into a factor filter and a page. Unknown or
/// repeated parameters are rejected.
fn parse_params(params: &[(String, String)], filters: bool) -> Result<(FactorFilter, Page), ApiError> {
    let mut seen = BTreeMap::new();
    for (name, value) in params {
        if seen.insert(name.as_str(), value.as_str()).is_some() {
            return Err(ApiError::invalid_parameter(format!("parameter `{name}` given more than once")));
        }
    }
    let number = |name: &str, default: usize| -> Result<usize, ApiError> {
        seen.get(name).map_or(Ok(default), |v| {
            v.parse()
                .map_err(|_| ApiError::invalid_parameter(format!("`{name}` must be a non-negative integer, got `{v}`")))
        })
    };
    let page = Page {
        limit: number("limit", DEFAULT_LIMIT)?,
        offset: number("offset", 0)?,
    };
    if page.limit > MAX_LIMIT {
        return Err(ApiError::invalid_parameter(format!("`limit` must be at most {MAX_LIMIT}")));
    }

    let mut filter = FactorFilter::default();
    for (&name, &value) in &seen {
        let flag = || match value {
            "true" => Ok(Some(true)),
            "false" => Ok(Some(false)),
            _ => Err(ApiError::invalid_parameter(format!("`{name}` must be `true` or `false`, got `{value}`"))),
        };
        match name {
            "limit" | "offset" => {}
            "scope" if filters => filter.scope = Some(value.to_string()),
            "aspect" if filters => {
                filter.aspect = Some(AspectFilter::parse(value).ok_or_else(|| {
                    ApiError::invalid_parameter(format!("`aspect` must be `<member>:<impact>`, got `{value}`"))
                })?)
            }
            "text_query" if filters => filter.text_query = Some(value.to_string()),
            "accessibility" if filters => filter.accessibility = Some(value.to_string()),
            "has_approach" if filters => filter.has_approach = flag()?,
            "has_dataset" if filters => filter.has_dataset = flag()?,
            "evidence" if filters => filter.evidence = flag()?,
            "practitioners" if filters => filter.practitioners = flag()?,
            _ => return Err(ApiError::invalid_parameter(format!("unknown parameter `{name}`"))),
        }
    }
    Ok((filter, page))
}

fn paginate<T: Serialize>(loaded: &Loaded, items: Vec<T>, page: Page) -> Response {
    let total = items.len();
    let window: Vec<T> = items.into_iter().skip(page.offset).take(page.limit).collect();
    let mut response = json_response(loaded.version, StatusCode::OK, &window);
    response
        .headers_mut()
        .insert(HeaderName::from_static(TOTAL_COUNT_HEADER), HeaderValue::from(total));
    response
}

/// Schema with expanded dimensions and public accessibility sets, enough
/// to build every filter control.
#[derive(Debug, Serialize)]
pub struct SchemaView<'a> {
    pub structure: &'a reqont_core::TaxonomySchema,
    pub expanded_dimensions: BTreeMap<&'a str, Vec<reqont_core::schema::DimensionDef>>,
    pub public_accessibility: BTreeMap<&'static str, Vec<String>>,
}

impl<'a> SchemaView<'a> {
    pub fn new(schema: &'a reqont_core::TaxonomySchema) -> Self {
        SchemaView {
            structure: schema,
            expanded_dimensions: schema
                .taxonomies
                .iter()
                .map(|t| (t.name.as_str(), t.expanded_dimensions()))
                .collect(),
            public_accessibility: [vocab::DATASET, vocab::APPROACH]
                .into_iter()
                .map(|t| (t, schema.public_accessibility(t).into_iter().collect()))
                .collect(),
        }
    }
}

/// Matching factors as served and printed.
pub fn factor_views(snapshot: &OntologySnapshot, filter: &FactorFilter) -> Result<Vec<FactorView>, QueryError> {
    Ok(query_factors(snapshot, filter)?
        .into_iter()
        .map(|node| FactorView::new(snapshot, node))
        .collect())
}

async fn schema(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    respond(&loaded, Ok(&SchemaView::new(loaded.snapshot.schema())))
}

async fn factors(State(state): State<Arc<AppState>>, Query(params): Params) -> Response {
    let loaded = state.current();
    let result = parse_params(&params, true)
        .and_then(|(filter, page)| Ok((factor_views(&loaded.snapshot, &filter)?, page)));
    match result {
        Ok((views, page)) => paginate(&loaded, views, page),
        Err(err) => respond::<()>(&loaded, Err(err)),
    }
}

async fn factor(State(state): State<Arc<AppState>>, UrlPath(key): UrlPath<String>) -> Response {
    let loaded = state.current();
    let view = loaded
        .snapshot
        .factor(&key)
        .map(|node| FactorView::new(&loaded.snapshot, node))
        .ok_or(QueryError::UnknownFactor(key));
    respond(&loaded, view.as_ref().map_err(|e| e.clone().into()))
}

async fn resources(State(state): State<Arc<AppState>>, UrlPath(key): UrlPath<String>) -> Response {
    let loaded = state.current();
    let found = resources_for_factor(&loaded.snapshot, &key).map_err(ApiError::from);
    respond(&loaded, found.as_ref().map_err(Clone::clone))
}

async fn objects(state: &AppState, taxonomy: &str, params: &[(String, String)]) -> Response {
    let loaded = state.current();
    match parse_params(params, false) {
        Ok((_, page)) => paginate(&loaded, list_objects(&loaded.snapshot, taxonomy), page),
        Err(err) => respond::<()>(&loaded, Err(err)),
    }
}

async fn descriptions(State(state): State<Arc<AppState>>, Query(params): Params) -> Response {
    objects(&state, vocab::DESCRIPTION, &params).await
}

async fn datasets(State(state): State<Arc<AppState>>, Query(params): Params) -> Response {
    objects(&state, vocab::DATASET, &params).await
}

async fn approaches(State(state): State<Arc<AppState>>, Query(params): Params) -> Response {
    objects(&state, vocab::APPROACH, &params).await
}

async fn stats(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    respond(&loaded, Ok(&summary_stats(&loaded.snapshot)))
}

async fn gaps(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    respond(&loaded, Ok(&gap_report(&loaded.snapshot)))
}

async fn authors(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    respond(&loaded, Ok(&author_index(&loaded.snapshot)))
}

async fn validation(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    respond(&loaded, Ok(&loaded.report))
}

async fn health(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    let loaded_at = loaded.loaded_at.to_rfc3339_opts(SecondsFormat::Millis, true);
    let n_references = loaded.snapshot.records().len();
    match state.reload_error() {
        None => json_response(
            loaded.version,
            StatusCode::OK,
            &json!({
                "status": "ok",
                "snapshot_loaded_at": loaded_at,
                "snapshot_version": loaded.version,
                "n_references": n_references,
            }),
        ),
        Some(error) => json_response(
            loaded.version,
            StatusCode::SERVICE_UNAVAILABLE,
            &json!({
                "status": "reload_failed",
                "error": error,
                "snapshot_loaded_at": loaded_at,
                "snapshot_version": loaded.version,
                "n_references": n_references,
            }),
        ),
    }
}

async fn not_found(State(state): State<Arc<AppState>>) -> Response {
    let loaded = state.current();
    let err = ApiError {
        status: StatusCode::NOT_FOUND,
        code: "not_found",
        message: "no such endpoint".into(),
    };
    respond::<()>(&loaded, Err(err))
}
