use std::net::IpAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reqont_core::query::{AspectFilter, FactorFilter};

use crate::service::ReloadMode;

/// Repository engine for an ontology of requirements quality factors.
#[derive(Debug, Parser)]
#[command(name = "reqont", version, about)]
pub struct Cli {
    /// Repository root holding structure.json and extractions/.
    #[arg(long, env = "REQONT_REPO", default_value = ".", global = true)]
    pub repo: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check structure, extractions and links; exit 1 on any violation.
    Validate,
    /// Corpus summary counts.
    Stats,
    /// Factors matching every given filter, one name per line.
    Query(QueryArgs),
    /// Factors without resources, descriptions without evidence or impact,
    /// undisclosed resources.
    Gaps,
    /// Authors with their references and contributed objects.
    Authors,
    /// Agreement between two directories of extraction files.
    Agreement(AgreementArgs),
    /// Evaluate the objective ending conditions; exit 1 if any fails.
    ExitCheck,
    /// Rewrite repository files in canonical form.
    Fmt(FmtArgs),
    /// Serve the read-only JSON API.
    Serve(ServeArgs),
}

#[derive(Debug, Default, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub scope: Option<String>,
    /// `<member>:<impact>`, e.g. `maintainability:impacted positively`.
    #[arg(long, value_parser = parse_aspect)]
    pub aspect: Option<AspectFilter>,
    /// Case-insensitive substring of a factor name or definition.
    #[arg(long = "text")]
    pub text_query: Option<String>,
    #[arg(long)]
    pub has_approach: Option<bool>,
    #[arg(long)]
    pub has_dataset: Option<bool>,
    #[arg(long)]
    pub accessibility: Option<String>,
    #[arg(long)]
    pub evidence: Option<bool>,
    #[arg(long)]
    pub practitioners: Option<bool>,
}

fn parse_aspect(raw: &str) -> Result<AspectFilter, String> {
    AspectFilter::parse(raw).ok_or_else(|| format!("expected `<member>:<impact>`, got `{raw}`"))
}

impl QueryArgs {
    pub fn filter(&self) -> FactorFilter {
        FactorFilter {
            scope: self.scope.clone(),
            aspect: self.aspect.clone(),
            text_query: self.text_query.clone(),
            has_approach: self.has_approach,
            has_dataset: self.has_dataset,
            accessibility: self.accessibility.clone(),
            evidence: self.evidence,
            practitioners: self.practitioners,
        }
    }
}

#[derive(Debug, Args)]
pub struct AgreementArgs {
    /// Extraction directory of the first extractor.
    pub a: PathBuf,
    /// Extraction directory of the second extractor.
    pub b: PathBuf,
    /// Structure file; defaults to the repository's structure.json.
    #[arg(long)]
    pub structure: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FmtArgs {
    /// Report non-canonical files without writing; exit 1 if any.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080, value_parser = clap::value_parser!(u16).range(1..))]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: IpAddr,
    #[arg(long, value_enum, default_value_t = ReloadMode::Manual)]
    pub reload: ReloadMode,
}
