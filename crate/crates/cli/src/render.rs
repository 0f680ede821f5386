//! Human-readable renderings. JSON output is the serialized core types.

use std::collections::BTreeMap;
use std::fmt::Write;

use reqont_core::agreement::AgreementReport;
use reqont_core::ending::{EndingConditions, SubjectiveCondition};
use reqont_core::query::{AuthorEntry, FactorView, GapEntry, GapReport};
use reqont_core::stats::SummaryStats;
use reqont_core::validate::{Lint, ValidationReport};
use reqont_core::Finding;

fn findings(out: &mut String, title: &str, items: &[Finding]) {
    let _ = writeln!(out, "{title}: {}", items.len());
    for f in items {
        let _ = writeln!(out, "  {} {}: {}", f.code, f.subject, f.message);
    }
}

fn lints(out: &mut String, items: &[Lint]) {
    let _ = writeln!(out, "lints: {}", items.len());
    for l in items {
        let _ = writeln!(out, "  {} ({}) {}: {}", l.code.as_str(), l.severity.as_str(), l.subject, l.message);
    }
}

pub fn ending_conditions(out: &mut String, conditions: &EndingConditions, subjective: &[SubjectiveCondition]) {
    let _ = writeln!(out, "ending conditions:");
    for (id, verdict) in conditions {
        let _ = writeln!(out, "  {id} {}: {}", verdict.verdict, verdict.evidence);
    }
    for s in subjective {
        let _ = writeln!(out, "  {} {}: {}", s.name, s.status, s.pointer);
    }
}

pub fn validation(report: &ValidationReport) -> String {
    let mut out = String::new();
    findings(&mut out, "schema violations", &report.schema_violations);
    findings(&mut out, "object violations", &report.object_violations);
    findings(&mut out, "link errors", &report.link_errors);
    findings(&mut out, "conflicts", &report.conflicts);
    lints(&mut out, &report.lints);
    if let Some(conditions) = &report.ending_conditions {
        ending_conditions(&mut out, conditions, &report.subjective_conditions);
    }
    out.push_str(if report.is_clean() { "OK\n" } else { "FAILED\n" });
    out
}

pub fn stats(stats: &SummaryStats) -> String {
    let rows = [
        ("references", stats.n_references),
        ("references with factor", stats.n_references_with_factor),
        ("factors", stats.n_factors),
        ("descriptions", stats.n_descriptions),
        ("datasets", stats.n_datasets),
        ("public datasets", stats.n_datasets_public),
        ("approaches", stats.n_approaches),
        ("public approaches", stats.n_approaches_public),
        (
            "descriptions with evidence or practitioners",
            stats.n_descriptions_with_evidence_or_practitioners,
        ),
        ("descriptions with impact", stats.n_descriptions_with_impact),
    ];
    let mut out = String::new();
    for (label, n) in rows {
        let _ = writeln!(out, "{label:<44} {n}");
    }
    let _ = writeln!(out, "factors by number of descriptions:");
    for (descriptions, factors) in &stats.description_count_histogram {
        let _ = writeln!(out, "  {descriptions:>3} description(s): {factors} factor(s)");
    }
    out
}

pub fn factor_names(views: &[FactorView]) -> String {
    views.iter().map(|v| format!("{}\n", v.name)).collect()
}

fn gap_section(out: &mut String, title: &str, entries: &[GapEntry]) {
    let _ = writeln!(out, "{title}: {}", entries.len());
    for e in entries {
        let _ = write!(out, "  {}#{}", e.reference, e.object_id);
        if let Some(name) = &e.name {
            let _ = write!(out, " {name}");
        }
        if let Some(accessibility) = &e.accessibility {
            let _ = write!(out, " [{accessibility}]");
        }
        out.push('\n');
    }
}

pub fn gaps(report: &GapReport) -> String {
    let mut out = String::new();
    gap_section(&mut out, "factors without approach", &report.factors_without_approach);
    gap_section(&mut out, "factors without dataset", &report.factors_without_dataset);
    gap_section(&mut out, "descriptions without evidence", &report.descriptions_without_evidence);
    gap_section(&mut out, "descriptions without impact", &report.descriptions_without_impact);
    gap_section(&mut out, "undisclosed resources", &report.undisclosed_resources);
    out
}

pub fn authors(index: &BTreeMap<String, AuthorEntry>) -> String {
    let mut out = String::new();
    for (author, entry) in index {
        let list = |items: Vec<String>| if items.is_empty() { "-".to_string() } else { items.join(", ") };
        let _ = writeln!(out, "{author}");
        let _ = writeln!(out, "  references: {}", list(entry.references.clone()));
        let _ = writeln!(out, "  factors: {}", list(entry.factors.clone()));
        let _ = writeln!(out, "  datasets: {}", list(entry.datasets.iter().map(ToString::to_string).collect()));
        let _ = writeln!(out, "  approaches: {}", list(entry.approaches.iter().map(ToString::to_string).collect()));
    }
    out
}

pub fn agreement(report: &AgreementReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} vs {}", report.pair.0, report.pair.1);
    let _ = writeln!(out, "{:<40} {:>8} {:>10}", "attribute", "values", "agreement");
    for g in &report.per_attribute {
        let _ = writeln!(out, "{:<40} {:>8} {:>9.2}%", g.name, g.n_values, g.mean_agreement);
    }
    let _ = writeln!(out, "{:<40} {:>8} {:>10}", "reference", "values", "agreement");
    for g in &report.per_reference {
        let _ = writeln!(out, "{:<40} {:>8} {:>9.2}%", g.name, g.n_values, g.mean_agreement);
    }
    for key in &report.only_in_a {
        let _ = writeln!(out, "only in {}: {key}", report.pair.0);
    }
    for key in &report.only_in_b {
        let _ = writeln!(out, "only in {}: {key}", report.pair.1);
    }
    let _ = writeln!(out, "note: {}", report.unmatched_policy);
    let _ = writeln!(out, "{}", report.summary());
    out
}
