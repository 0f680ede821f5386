//! The ontology structure: taxonomies with their dimensions,
//! dimension-clusters, scope notes and relations.
//!
//! [`parse_structure`] reads the `structure.json` document and enforces the
//! shape of every definition. Cross-definition invariants (uniqueness,
//! defaults, relation targets) are reported by [`validate_schema`] as data so
//! a curator sees all of them at once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::to_canonical_bytes;
use crate::error::{from_json_slice, ParseError};
use crate::finding::{Finding, FindingCode};
use crate::text::normalize_label;
use crate::vocab;

/// The collection of all taxonomy structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomySchema {
    #[serde(deserialize_with = "positive_version")]
    pub version: u32,
    pub taxonomies: Vec<TaxonomyDef>,
    /// Extra accessibility characteristics counted as public, per taxonomy.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub public_accessibility: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaxonomyDef {
    pub name: String,
    #[serde(default)]
    pub dimensions: Vec<DimensionDef>,
    #[serde(default)]
    pub dimension_clusters: Vec<ClusterDef>,
    #[serde(default)]
    pub scope_notes: Vec<ScopeNoteDef>,
    #[serde(default)]
    pub relations: Vec<RelationDef>,
}

/// A categorical attribute; every object takes one of its characteristics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDimension")]
pub struct DimensionDef {
    pub name: String,
    pub characteristics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
    #[serde(skip_serializing_if = "is_true")]
    pub required: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDimension {
    name: String,
    #[serde(deserialize_with = "labels")]
    characteristics: Vec<String>,
    #[serde(default, deserialize_with = "optional_label")]
    default: Option<String>,
    #[serde(default = "yes")]
    required: bool,
}

impl TryFrom<RawDimension> for DimensionDef {
    type Error = String;

    fn try_from(raw: RawDimension) -> Result<Self, Self::Error> {
        check_characteristic_count("dimension", &raw.name, raw.characteristics.len())?;
        Ok(DimensionDef {
            name: raw.name,
            characteristics: raw.characteristics,
            default: raw.default,
            required: raw.required,
        })
    }
}

/// Shorthand for several dimensions sharing one characteristic set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCluster")]
pub struct ClusterDef {
    pub name: String,
    #[serde(rename = "members")]
    pub member_dimensions: Vec<String>,
    pub characteristics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub default: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCluster {
    name: String,
    members: Vec<String>,
    #[serde(deserialize_with = "labels")]
    characteristics: Vec<String>,
    #[serde(default, deserialize_with = "optional_label")]
    default: Option<String>,
}

impl TryFrom<RawCluster> for ClusterDef {
    type Error = String;

    fn try_from(raw: RawCluster) -> Result<Self, Self::Error> {
        check_characteristic_count("dimension-cluster", &raw.name, raw.characteristics.len())?;
        Ok(ClusterDef {
            name: raw.name,
            member_dimensions: raw.members,
            characteristics: raw.characteristics,
            default: raw.default,
        })
    }
}

/// Free-text attribute of an object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScopeNoteDef {
    pub name: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub required: bool,
}

/// Link from objects of one taxonomy to objects of another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDef {
    pub name: String,
    #[serde(rename = "target")]
    pub target_taxonomy: String,
    #[serde(rename = "min")]
    pub min_cardinality: u32,
    #[serde(rename = "max")]
    pub max_cardinality: MaxCardinality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxCardinality {
    Bounded(u32),
    Unbounded,
}

impl MaxCardinality {
    pub fn admits(self, count: usize) -> bool {
        match self {
            MaxCardinality::Bounded(max) => count <= max as usize,
            MaxCardinality::Unbounded => true,
        }
    }
}

impl fmt::Display for MaxCardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaxCardinality::Bounded(n) => write!(f, "{n}"),
            MaxCardinality::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for MaxCardinality {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            MaxCardinality::Bounded(n) => serializer.serialize_u32(*n),
            MaxCardinality::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for MaxCardinality {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct MaxVisitor;

        impl Visitor<'_> for MaxVisitor {
            type Value = MaxCardinality;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive integer or \"unbounded\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                match u32::try_from(v) {
                    Ok(n) if n >= 1 => Ok(MaxCardinality::Bounded(n)),
                    _ => Err(E::invalid_value(de::Unexpected::Unsigned(v), &self)),
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                match u64::try_from(v) {
                    Ok(v) => self.visit_u64(v),
                    Err(_) => Err(E::invalid_value(de::Unexpected::Signed(v), &self)),
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "unbounded" {
                    Ok(MaxCardinality::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(MaxVisitor)
    }
}

fn is_true(b: &bool) -> bool {
    *b
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn yes() -> bool {
    true
}

fn positive_version<'de, D: Deserializer<'de>>(d: D) -> Result<u32, D::Error> {
    let v = u32::deserialize(d)?;
    if v == 0 {
        return Err(de::Error::custom("version must be at least 1"));
    }
    Ok(v)
}

fn labels<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    let raw = Vec::<String>::deserialize(d)?;
    Ok(raw.iter().map(|l| normalize_label(l)).collect())
}

fn optional_label<'de, D: Deserializer<'de>>(d: D) -> Result<Option<String>, D::Error> {
    Ok(Option::<String>::deserialize(d)?.map(|l| normalize_label(&l)))
}

fn check_characteristic_count(kind: &str, name: &str, count: usize) -> Result<(), String> {
    if count < 2 {
        Err(format!(
            "{kind} `{name}` declares {count} characteristic(s); at least 2 are required"
        ))
    } else {
        Ok(())
    }
}

/// Parse a structure file. Clusters stay unexpanded.
pub fn parse_structure(raw: &[u8]) -> Result<TaxonomySchema, ParseError> {
    from_json_slice(raw)
}

/// Canonical bytes of a structure file.
pub fn serialize_structure(schema: &TaxonomySchema) -> Vec<u8> {
    to_canonical_bytes(schema)
}

impl TaxonomySchema {
    pub fn taxonomy(&self, name: &str) -> Option<&TaxonomyDef> {
        self.taxonomies.iter().find(|t| t.name == name)
    }

    /// Accessibility characteristics of `taxonomy` that count as public.
    pub fn public_accessibility(&self, taxonomy: &str) -> BTreeSet<String> {
        let builtin: &[&str] = match taxonomy {
            vocab::DATASET => vocab::PUBLIC_DATASET_ACCESSIBILITY,
            vocab::APPROACH => vocab::PUBLIC_APPROACH_ACCESSIBILITY,
            _ => &[],
        };
        let mut out: BTreeSet<String> = builtin.iter().map(|s| s.to_string()).collect();
        if let Some(extra) = self.public_accessibility.get(taxonomy) {
            out.extend(extra.iter().map(|l| normalize_label(l)));
        }
        out
    }
}

impl TaxonomyDef {
    /// Plain dimensions followed by the cluster expansions.
    pub fn expanded_dimensions(&self) -> Vec<DimensionDef> {
        expand_clusters(self)
    }

    pub fn dimension(&self, name: &str) -> Option<DimensionDef> {
        if let Some(d) = self.dimensions.iter().find(|d| d.name == name) {
            return Some(d.clone());
        }
        let (cluster, member) = name.split_once('.')?;
        self.dimension_clusters
            .iter()
            .find(|c| c.name == cluster && c.member_dimensions.iter().any(|m| m == member))
            .map(|c| c.expand_member(member))
    }

    pub fn cluster(&self, name: &str) -> Option<&ClusterDef> {
        self.dimension_clusters.iter().find(|c| c.name == name)
    }

    pub fn scope_note(&self, name: &str) -> Option<&ScopeNoteDef> {
        self.scope_notes.iter().find(|n| n.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationDef> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Dimension count as seen by a reader, each cluster counting once.
    pub fn abbreviated_dimension_count(&self) -> usize {
        self.dimensions.len() + self.dimension_clusters.len()
    }
}

impl ClusterDef {
    fn expand_member(&self, member: &str) -> DimensionDef {
        DimensionDef {
            name: format!("{}.{}", self.name, member),
            characteristics: self.characteristics.clone(),
            default: self.default.clone(),
            required: true,
        }
    }
}

/// Plain dimensions in declaration order, then one `<cluster>.<member>`
/// dimension per cluster member carrying the cluster's characteristics and
/// default.
pub fn expand_clusters(taxonomy: &TaxonomyDef) -> Vec<DimensionDef> {
    let mut out = taxonomy.dimensions.clone();
    for cluster in &taxonomy.dimension_clusters {
        out.extend(cluster.member_dimensions.iter().map(|m| cluster.expand_member(m)));
    }
    out
}

/// Report every violated structure invariant. An empty result means the
/// schema is valid. Output is sorted, so it does not depend on declaration
/// order.
pub fn validate_schema(schema: &TaxonomySchema) -> Vec<Finding> {
    let mut out = Vec::new();
    let taxonomy_names: BTreeSet<&str> = schema.taxonomies.iter().map(|t| t.name.as_str()).collect();

    let mut seen = BTreeSet::new();
    for taxonomy in &schema.taxonomies {
        if taxonomy.name.trim().is_empty() {
            out.push(Finding::new(FindingCode::EmptyName, "<taxonomy>", "taxonomy name is empty"));
        } else if !seen.insert(taxonomy.name.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateTaxonomy,
                &taxonomy.name,
                format!("taxonomy `{}` is declared more than once", taxonomy.name),
            ));
        }
        validate_taxonomy(taxonomy, &taxonomy_names, &mut out);
    }

    for (taxonomy, extra) in &schema.public_accessibility {
        let accessibility = schema
            .taxonomy(taxonomy)
            .and_then(|t| t.dimension(vocab::ACCESSIBILITY));
        match accessibility {
            None => out.push(Finding::new(
                FindingCode::InvalidPublicOverride,
                taxonomy,
                format!("public accessibility override names `{taxonomy}`, which has no `accessibility` dimension"),
            )),
            Some(dim) => {
                for label in extra {
                    let label = normalize_label(label);
                    if !dim.characteristics.contains(&label) {
                        out.push(Finding::new(
                            FindingCode::InvalidPublicOverride,
                            format!("{taxonomy}.{}", vocab::ACCESSIBILITY),
                            format!("`{label}` is not an accessibility characteristic"),
                        ));
                    }
                }
            }
        }
    }

    out.sort();
    out
}

fn validate_taxonomy(taxonomy: &TaxonomyDef, taxonomy_names: &BTreeSet<&str>, out: &mut Vec<Finding>) {
    let tax = taxonomy.name.as_str();

    for dim in &taxonomy.dimensions {
        check_name(&dim.name, tax, "dimension", out);
        check_characteristics(&format!("{tax}.{}", dim.name), &dim.characteristics, dim.default.as_deref(), out);
    }
    for cluster in &taxonomy.dimension_clusters {
        check_name(&cluster.name, tax, "dimension-cluster", out);
        let subject = format!("{tax}.{}", cluster.name);
        if cluster.member_dimensions.is_empty() {
            out.push(Finding::new(
                FindingCode::EmptyCluster,
                &subject,
                format!("dimension-cluster `{}` has no member dimensions", cluster.name),
            ));
        }
        for member in &cluster.member_dimensions {
            check_name(member, tax, "cluster member", out);
        }
        check_characteristics(&subject, &cluster.characteristics, cluster.default.as_deref(), out);
    }

    let mut dims = BTreeSet::new();
    for dim in expand_clusters(taxonomy) {
        if !dims.insert(dim.name.clone()) {
            out.push(Finding::new(
                FindingCode::DuplicateDimension,
                format!("{tax}.{}", dim.name),
                format!("dimension `{}` is not unique in taxonomy `{tax}`", dim.name),
            ));
        }
    }

    let mut notes = BTreeSet::new();
    for note in &taxonomy.scope_notes {
        check_name(&note.name, tax, "scope note", out);
        if !notes.insert(note.name.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateScopeNote,
                format!("{tax}.{}", note.name),
                format!("scope note `{}` is declared more than once", note.name),
            ));
        }
    }

    let mut relations = BTreeSet::new();
    for rel in &taxonomy.relations {
        check_name(&rel.name, tax, "relation", out);
        let subject = format!("{tax}.{}", rel.name);
        if !relations.insert(rel.name.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateRelation,
                &subject,
                format!("relation `{}` is declared more than once", rel.name),
            ));
        }
        if !taxonomy_names.contains(rel.target_taxonomy.as_str()) {
            out.push(Finding::new(
                FindingCode::DanglingRelationTarget,
                &subject,
                format!("relation targets unknown taxonomy `{}`", rel.target_taxonomy),
            ));
        }
        if !rel.max_cardinality.admits(rel.min_cardinality as usize) {
            out.push(Finding::new(
                FindingCode::InvalidCardinality,
                &subject,
                format!("min {} exceeds max {}", rel.min_cardinality, rel.max_cardinality),
            ));
        }
    }
}

fn check_name(name: &str, taxonomy: &str, kind: &str, out: &mut Vec<Finding>) {
    if name.trim().is_empty() {
        out.push(Finding::new(
            FindingCode::EmptyName,
            taxonomy,
            format!("{kind} name is empty"),
        ));
    }
}

fn check_characteristics(subject: &str, labels: &[String], default: Option<&str>, out: &mut Vec<Finding>) {
    let mut seen = BTreeSet::new();
    for label in labels {
        if !seen.insert(label.as_str()) {
            out.push(Finding::new(
                FindingCode::DuplicateCharacteristic,
                subject,
                format!("characteristic `{label}` is not unique"),
            ));
        }
    }
    if let Some(default) = default {
        if !seen.contains(default) {
            out.push(Finding::new(
                FindingCode::BadDefault,
                subject,
                format!("default `{default}` is not one of the characteristics"),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema(json: &str) -> TaxonomySchema {
        parse_structure(json.as_bytes()).unwrap()
    }

    fn codes(findings: &[Finding]) -> Vec<FindingCode> {
        findings.iter().map(|f| f.code).collect()
    }

    const ASPECTS: &str = r#"{
      "version": 1,
      "taxonomies": [{
        "name": "factor",
        "dimensions": [{"name": "scope", "characteristics": ["word", "sentence", "use case"]}],
        "dimension_clusters": [{
          "name": "aspect",
          "members": ["ambiguity", "complexity", "understandability", "maintainability", "verifiability"],
          "characteristics": ["impacted positively", "impacted negatively", "not impacted"],
          "default": "not impacted"
        }],
        "scope_notes": [{"name": "name", "required": true}]
      }]
    }"#;

    #[test]
    fn empty_structure_is_valid_at_parse_stage() {
        let s = schema(r#"{"version": 1, "taxonomies": []}"#);
        assert!(s.taxonomies.is_empty());
        assert!(validate_schema(&s).is_empty());
    }

    #[test]
    fn single_characteristic_is_rejected_naming_the_dimension() {
        let err = parse_structure(
            br#"{"version": 1, "taxonomies": [{"name": "factor",
                "dimensions": [{"name": "scope", "characteristics": ["word"]}]}]}"#,
        )
        .unwrap_err();
        assert!(err.message.contains("`scope`"), "{err}");
        assert_eq!(err.path, "taxonomies[0].dimensions[0]");
        assert_eq!(err.line, 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_structure(br#"{"version": 1, "taxonomies": [], "extra": 1}"#).unwrap_err();
        assert!(err.message.contains("unknown field `extra`"), "{err}");
        let err = parse_structure(
            br#"{"version": 1, "taxonomies": [{"name": "f", "scope_notes": [{"name": "n", "kind": "x"}]}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "taxonomies[0].scope_notes[0].kind");
    }

    #[test]
    fn wrong_value_kinds_and_missing_fields() {
        let err = parse_structure(br#"{"version": "1", "taxonomies": []}"#).unwrap_err();
        assert_eq!(err.path, "version");
        let err = parse_structure(br#"{"version": 0, "taxonomies": []}"#).unwrap_err();
        assert!(err.message.contains("at least 1"));
        let err = parse_structure(br#"{"version": 1}"#).unwrap_err();
        assert!(err.message.contains("missing field `taxonomies`"));
        let err = parse_structure(
            br#"{"version": 1, "taxonomies": [{"name": "d",
                "relations": [{"name": "r", "target": "d", "min": 0, "max": 0}]}]}"#,
        )
        .unwrap_err();
        assert_eq!(err.path, "taxonomies[0].relations[0].max");
        assert!(parse_structure(b"{ not json").is_err());
    }

    #[test]
    fn unbounded_max_round_trips() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "d",
                "relations": [{"name": "r", "target": "d", "min": 1, "max": "unbounded"}]}]}"#,
        );
        assert_eq!(s.taxonomies[0].relations[0].max_cardinality, MaxCardinality::Unbounded);
        assert_eq!(parse_structure(&serialize_structure(&s)).unwrap(), s);
    }

    #[test]
    fn labels_are_nfc_trimmed() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "t",
                "dimensions": [{"name": "d", "characteristics": [" café", "tea"], "default": "café "}]}]}"#,
        );
        let dim = &s.taxonomies[0].dimensions[0];
        assert_eq!(dim.characteristics[0], "café");
        assert_eq!(dim.default.as_deref(), Some("café"));
        assert!(validate_schema(&s).is_empty());
    }

    #[test]
    fn expands_aspect_cluster() {
        let s = schema(ASPECTS);
        let dims = expand_clusters(&s.taxonomies[0]);
        let names: Vec<&str> = dims.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "scope",
                "aspect.ambiguity",
                "aspect.complexity",
                "aspect.understandability",
                "aspect.maintainability",
                "aspect.verifiability"
            ]
        );
        for d in &dims[1..] {
            assert_eq!(d.characteristics, ["impacted positively", "impacted negatively", "not impacted"]);
            assert_eq!(d.default.as_deref(), Some("not impacted"));
        }
        assert_eq!(s.taxonomies[0].abbreviated_dimension_count(), 2);
    }

    #[test]
    fn expansion_without_clusters_is_identity_and_singletons_expand_once() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "t",
                "dimensions": [{"name": "a", "characteristics": ["x", "y"]}, {"name": "b", "characteristics": ["x", "y"]}]},
                {"name": "u", "dimension_clusters": [{"name": "c", "members": ["only"], "characteristics": ["x", "y"]}]}]}"#,
        );
        assert_eq!(expand_clusters(&s.taxonomies[0]), s.taxonomies[0].dimensions);
        let single = expand_clusters(&s.taxonomies[1]);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].name, "c.only");
    }

    #[test]
    fn dimension_lookup_covers_cluster_members() {
        let s = schema(ASPECTS);
        let t = &s.taxonomies[0];
        assert!(t.dimension("scope").is_some());
        assert_eq!(t.dimension("aspect.complexity").unwrap().name, "aspect.complexity");
        assert!(t.dimension("aspect.correctness").is_none());
        assert!(t.dimension("aspect").is_none());
    }

    #[test]
    fn duplicate_dimension_reported_once() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "factor", "dimensions": [
                {"name": "scope", "characteristics": ["word", "sentence"]},
                {"name": "scope", "characteristics": ["word", "sentence"]}]}]}"#,
        );
        let v = validate_schema(&s);
        assert_eq!(codes(&v), [FindingCode::DuplicateDimension]);
        assert_eq!(v[0].subject, "factor.scope");
    }

    #[test]
    fn expansion_collision_is_a_duplicate_dimension() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "t",
                "dimensions": [{"name": "c.m", "characteristics": ["x", "y"]}],
                "dimension_clusters": [{"name": "c", "members": ["m"], "characteristics": ["x", "y"]}]}]}"#,
        );
        assert_eq!(codes(&validate_schema(&s)), [FindingCode::DuplicateDimension]);
    }

    #[test]
    fn dangling_relation_target() {
        let s = schema(
            r#"{"version": 1, "taxonomies": [{"name": "factor",
                "relations": [{"name": "impacts", "target": "activity", "min": 0, "max": "unbounded"}]}]}"#,
        );
        let v = validate_schema(&s);
        assert_eq!(codes(&v), [FindingCode::DanglingRelationTarget]);
        assert!(v[0].message.contains("activity"));
    }

    #[test]
    fn reports_every_other_invariant() {
        let s = schema(
            r#"{"version": 1, "public_accessibility": {"factor": ["x"]}, "taxonomies": [
                {"name": "t",
                 "dimensions": [{"name": "d", "characteristics": ["x", "x", "y"], "default": "z"}],
                 "dimension_clusters": [{"name": "c", "members": [], "characteristics": ["p", "q"]}],
                 "scope_notes": [{"name": "n"}, {"name": "n"}, {"name": " "}],
                 "relations": [{"name": "r", "target": "t", "min": 3, "max": 2},
                               {"name": "r", "target": "t", "min": 0, "max": 1}]},
                {"name": "t"},
                {"name": "factor"}]}"#,
        );
        let mut got = codes(&validate_schema(&s));
        got.sort();
        let mut want = vec![
            FindingCode::DuplicateCharacteristic,
            FindingCode::BadDefault,
            FindingCode::EmptyCluster,
            FindingCode::DuplicateScopeNote,
            FindingCode::EmptyName,
            FindingCode::DuplicateRelation,
            FindingCode::InvalidCardinality,
            FindingCode::DuplicateTaxonomy,
            FindingCode::InvalidPublicOverride,
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn validation_is_independent_of_taxonomy_order() {
        let mut s = schema(
            r#"{"version": 1, "taxonomies": [
                {"name": "a", "relations": [{"name": "r", "target": "zzz", "min": 0, "max": 1}]},
                {"name": "b", "dimensions": [{"name": "d", "characteristics": ["x", "x"]}]},
                {"name": "c", "dimensions": [{"name": "d", "characteristics": ["x", "y"], "default": "q"}]}]}"#,
        );
        let forward = validate_schema(&s);
        s.taxonomies.reverse();
        assert_eq!(validate_schema(&s), forward);
        assert_eq!(forward.len(), 3);
    }
}
