//! Command runners. Exit statuses: 0 success, 1 domain problem (violations,
//! failed ending conditions, non-canonical files), 2 usage, I/O or parse
//! failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use reqont_core::agreement::{agreement_report, AgreementError};
use reqont_core::canonical::to_canonical_bytes;
use reqont_core::ending::{parse_iterations, parse_manifest, serialize_iterations, Verdict};
use reqont_core::extraction::decode_extraction;
use reqont_core::query::{author_index, gap_report, QueryError};
use reqont_core::repository::{load_extractions, load_schema, read_file, LoadedRepository, RepositoryError, RepositoryLayout};
use reqont_core::schema::serialize_structure;
use reqont_core::stats::summary_stats;
use reqont_core::{canonical_serialize, parse_structure, OntologySnapshot};
use serde::Serialize;

use crate::cli::{AgreementArgs, Cli, Command, FmtArgs, Format, QueryArgs, ServeArgs};
use crate::render;
use crate::service::{factor_views, serve, ServiceConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Repository(#[from] RepositoryError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Agreement(#[from] AgreementError),
    #[error("{0}")]
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Agreement(_) => EXIT_DOMAIN,
            Failure::Repository(_) | Failure::Query(_) | Failure::Io(_) => EXIT_USAGE,
        }
    }
}

struct Output<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit<T: Serialize + ?Sized>(&mut self, value: &T, text: impl FnOnce(&T) -> String) -> Result<(), Failure> {
        let bytes = match self.format {
            Format::Json => to_canonical_bytes(value),
            Format::Text => text(value).into_bytes(),
        };
        self.out.write_all(&bytes).map_err(|e| Failure::Io(e.to_string()))
    }

    fn note(&mut self, message: &str) {
        let _ = writeln!(self.err, "{message}");
    }
}

/// Run one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut output = Output {
        format: cli.format,
        out,
        err,
    };
    let result = match cli.command {
        Command::Validate => validate(&cli.repo, &mut output),
        Command::Stats => with_snapshot(&cli.repo, &mut output, |snapshot, o| {
            o.emit(&summary_stats(snapshot), render::stats)
        }),
        Command::Query(args) => query(&cli.repo, &args, &mut output),
        Command::Gaps => with_snapshot(&cli.repo, &mut output, |snapshot, o| o.emit(&gap_report(snapshot), render::gaps)),
        Command::Authors => with_snapshot(&cli.repo, &mut output, |snapshot, o| {
            o.emit(&author_index(snapshot), render::authors)
        }),
        Command::Agreement(args) => agreement(&cli.repo, &args, &mut output),
        Command::ExitCheck => exit_check(&cli.repo, &mut output),
        Command::Fmt(args) => fmt(&cli.repo, &args, &mut output),
        Command::Serve(args) => serve_blocking(&cli.repo, &args),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            output.note(&format!("error: {failure}"));
            failure.exit_code()
        }
    }
}

fn open(repo: &Path) -> Result<LoadedRepository, Failure> {
    Ok(LoadedRepository::open(repo)?)
}

/// Run `f` against the repository snapshot, warning when the repository
/// does not validate.
fn with_snapshot(
    repo: &Path,
    output: &mut Output<'_>,
    f: impl FnOnce(&OntologySnapshot, &mut Output<'_>) -> Result<(), Failure>,
) -> Result<u8, Failure> {
    let (report, snapshot) = open(repo)?.validate();
    if !report.is_clean() {
        output.note(&format!(
            "warning: repository has {} validation finding(s); run `reqont validate`",
            report.errors().count()
        ));
    }
    f(&snapshot, output)?;
    Ok(EXIT_OK)
}

fn validate(repo: &Path, output: &mut Output<'_>) -> Result<u8, Failure> {
    let (report, _) = open(repo)?.validate();
    output.emit(&report, render::validation)?;
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_DOMAIN })
}

fn query(repo: &Path, args: &QueryArgs, output: &mut Output<'_>) -> Result<u8, Failure> {
    with_snapshot(repo, output, |snapshot, o| {
        let views = factor_views(snapshot, &args.filter())?;
        o.emit(&views[..], render::factor_names)
    })
}

fn exit_check(repo: &Path, output: &mut Output<'_>) -> Result<u8, Failure> {
    let (report, _) = open(repo)?.validate_with_ending_conditions();
    let conditions = report.ending_conditions.unwrap_or_default();
    let failed = conditions.values().any(|v| v.verdict == Verdict::Fail);
    #[derive(Serialize)]
    struct Payload<'a> {
        ending_conditions: &'a reqont_core::ending::EndingConditions,
        subjective_conditions: &'a [reqont_core::ending::SubjectiveCondition],
    }
    let payload = Payload {
        ending_conditions: &conditions,
        subjective_conditions: &report.subjective_conditions,
    };
    output.emit(&payload, |p| {
        let mut text = String::new();
        render::ending_conditions(&mut text, p.ending_conditions, p.subjective_conditions);
        text
    })?;
    Ok(if failed { EXIT_DOMAIN } else { EXIT_OK })
}

fn agreement(repo: &Path, args: &AgreementArgs, output: &mut Output<'_>) -> Result<u8, Failure> {
    let structure = match &args.structure {
        Some(path) => path.clone(),
        None => RepositoryLayout::discover(repo)?.structure,
    };
    let schema = load_schema(&structure)?;
    let (a, _) = load_extractions(&args.a, &schema)?;
    let (b, _) = load_extractions(&args.b, &schema)?;
    let mut report = agreement_report(&a, &b, &schema)?;
    report.pair = (side_name(&args.a), side_name(&args.b));
    output.emit(&report, render::agreement)?;
    Ok(EXIT_OK)
}

fn side_name(dir: &Path) -> String {
    dir.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

/// Canonical bytes of every repository file, paired with its path.
fn canonical_forms(layout: &RepositoryLayout) -> Result<Vec<(PathBuf, Vec<u8>, Vec<u8>)>, Failure> {
    let parse_failure = |path: &Path, error| RepositoryError::Parse {
        path: path.to_path_buf(),
        error,
    };
    let mut files = Vec::new();
    let raw = read_file(&layout.structure)?;
    let schema = parse_structure(&raw).map_err(|e| parse_failure(&layout.structure, e))?;
    files.push((layout.structure.clone(), serialize_structure(&schema), raw));
    for path in layout.extraction_files()? {
        let raw = read_file(&path)?;
        let record = decode_extraction(&raw, &schema).map_err(|e| parse_failure(&path, e))?;
        files.push((path, canonical_serialize(&record), raw));
    }
    if let Some(path) = &layout.iterations {
        let raw = read_file(path)?;
        let logs = parse_iterations(&raw).map_err(|e| parse_failure(path, e))?;
        files.push((path.clone(), serialize_iterations(&logs), raw));
    }
    if let Some(path) = &layout.manifest {
        let raw = read_file(path)?;
        let manifest = parse_manifest(&raw).map_err(|e| parse_failure(path, e))?;
        files.push((path.clone(), to_canonical_bytes(&manifest), raw));
    }
    Ok(files)
}

fn fmt(repo: &Path, args: &FmtArgs, output: &mut Output<'_>) -> Result<u8, Failure> {
    let layout = RepositoryLayout::discover(repo)?;
    let stale: Vec<(PathBuf, Vec<u8>)> = canonical_forms(&layout)?
        .into_iter()
        .filter(|(_, canonical, raw)| canonical != raw)
        .map(|(path, canonical, _)| (path, canonical))
        .collect();
    #[derive(Serialize)]
    struct Payload {
        check: bool,
        files: Vec<String>,
    }
    let payload = Payload {
        check: args.check,
        files: stale.iter().map(|(p, _)| p.display().to_string()).collect(),
    };
    if !args.check {
        for (path, canonical) in &stale {
            fs::write(path, canonical).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    output.emit(&payload, |p| {
        let verb = if p.check { "not canonical" } else { "formatted" };
        p.files.iter().map(|f| format!("{verb}: {f}\n")).collect()
    })?;
    Ok(if args.check && !stale.is_empty() { EXIT_DOMAIN } else { EXIT_OK })
}

fn serve_blocking(repo: &Path, args: &ServeArgs) -> Result<u8, Failure> {
    let config = ServiceConfig {
        bind: args.bind,
        port: args.port,
        root: repo.to_path_buf(),
        reload: args.reload,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime
        .block_on(serve(config))
        .map_err(|e| Failure::Io(e.to_string()))?;
    Ok(EXIT_OK)
}
