//! Merging parsed extractions into one immutable, fully resolved corpus.
//!
//! Factors are identified across references by their normalized name. A
//! factor's `aliases` note merges synonym names explicitly. Descriptions may
//! name a factor no extraction declares; such factors are created as
//! implicit nodes. Competing dimension values for one factor are kept as
//! conflict markers with a warning instead of being overwritten.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::canonical::to_canonical_bytes;
use crate::extraction::{alias_list, ExtractionRecord, OntologyObject};
use crate::finding::{Finding, FindingCode};
use crate::schema::TaxonomySchema;
use crate::text::normalize_factor_name;
use crate::vocab;

/// Global address of an object: `<reference-key>#<object-id>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectRef {
    pub reference: String,
    pub id: String,
}

impl ObjectRef {
    pub fn new(reference: impl Into<String>, id: impl Into<String>) -> Self {
        ObjectRef {
            reference: reference.into(),
            id: id.into(),
        }
    }

    /// Resolve a relation target written inside extraction `local`.
    pub fn parse_target(target: &str, local: &str) -> ObjectRef {
        match target.split_once('#') {
            Some((reference, id)) => ObjectRef::new(reference.trim(), id.trim()),
            None => ObjectRef::new(local, target.trim()),
        }
    }
}

impl fmt::Display for ObjectRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.reference, self.id)
    }
}

impl Serialize for ObjectRef {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Resolved endpoint of a relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkTarget {
    Factor(String),
    Object(ObjectRef),
}

/// Merged value of one factor dimension across all assertions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MergedValue {
    Agreed(String),
    Conflict { conflict: Vec<String> },
}

impl MergedValue {
    /// Whether `characteristic` is among the asserted values.
    pub fn admits(&self, characteristic: &str) -> bool {
        match self {
            MergedValue::Agreed(v) => v == characteristic,
            MergedValue::Conflict { conflict } => conflict.iter().any(|v| v == characteristic),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorAssertion {
    pub reference: String,
    pub object: OntologyObject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorNode {
    pub canonical_name: String,
    pub normalized_key: String,
    /// Created from a description naming a factor no extraction declares.
    pub implicit: bool,
    /// Other normalized names merged into this factor.
    pub aliases: BTreeSet<String>,
    pub assertions: Vec<FactorAssertion>,
    pub merged_values: BTreeMap<String, MergedValue>,
}

impl FactorNode {
    pub fn references(&self) -> BTreeSet<&str> {
        self.assertions.iter().map(|a| a.reference.as_str()).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SnapshotIndexes {
    pub factor_descriptions: BTreeMap<String, BTreeSet<ObjectRef>>,
    pub factor_datasets: BTreeMap<String, BTreeSet<ObjectRef>>,
    /// Approaches linked to a factor directly or through one of its
    /// descriptions.
    pub factor_approaches: BTreeMap<String, BTreeSet<ObjectRef>>,
    pub reference_objects: BTreeMap<String, Vec<ObjectRef>>,
    pub author_references: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnapshotError {
    #[error("reference key `{0}` appears in more than one extraction")]
    DuplicateReference(String),
    #[error("{} unresolved link(s), first: {}", .0.len(), .0[0])]
    Link(Vec<Finding>),
}

/// Immutable, fully resolved corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologySnapshot {
    schema: TaxonomySchema,
    records: Vec<ExtractionRecord>,
    factors: BTreeMap<String, FactorNode>,
    indexes: SnapshotIndexes,
    links: BTreeMap<ObjectRef, BTreeMap<String, Vec<LinkTarget>>>,
    warnings: Vec<Finding>,
    object_index: BTreeMap<ObjectRef, (usize, usize)>,
}

/// Build a snapshot, failing on the first class of integrity problem.
pub fn build_snapshot(
    schema: &TaxonomySchema,
    records: &[ExtractionRecord],
) -> Result<OntologySnapshot, SnapshotError> {
    let (snapshot, problems) = build_snapshot_lenient(schema, records);
    if let Some(dup) = problems.iter().find(|f| f.code == FindingCode::DuplicateReference) {
        return Err(SnapshotError::DuplicateReference(dup.subject.clone()));
    }
    if problems.is_empty() {
        Ok(snapshot)
    } else {
        Err(SnapshotError::Link(problems))
    }
}

/// Build a snapshot from whatever resolves and return the integrity problems
/// alongside it. Unresolvable links are dropped; of several records sharing
/// a reference key the one with the smallest canonical form is kept.
pub fn build_snapshot_lenient(
    schema: &TaxonomySchema,
    records: &[ExtractionRecord],
) -> (OntologySnapshot, Vec<Finding>) {
    let mut problems = Vec::new();
    let records = dedup_records(records, &mut problems);

    let mut object_index = BTreeMap::new();
    for (ri, record) in records.iter().enumerate() {
        for (oi, object) in record.objects.iter().enumerate() {
            if schema.taxonomy(&object.taxonomy).is_some() {
                object_index
                    .entry(ObjectRef::new(record.key(), &object.id))
                    .or_insert((ri, oi));
            }
        }
    }

    let identity = FactorIdentity::from_records(&records);
    let mut factors = identity.explicit_nodes(&records);

    let mut links: BTreeMap<ObjectRef, BTreeMap<String, Vec<LinkTarget>>> = BTreeMap::new();
    let mut implicit: BTreeMap<String, String> = BTreeMap::new();
    for record in &records {
        for object in &record.objects {
            let Some(taxonomy) = schema.taxonomy(&object.taxonomy) else {
                continue;
            };
            let source = ObjectRef::new(record.key(), &object.id);
            if object_index.get(&source).map(|&(ri, oi)| &records[ri].objects[oi]) != Some(object) {
                // shadowed duplicate id, already reported per record
                continue;
            }
            for def in &taxonomy.relations {
                let targets = object.relations.get(&def.name).map(Vec::as_slice).unwrap_or(&[]);
                if (targets.len() as u64) < u64::from(def.min_cardinality)
                    || !def.max_cardinality.admits(targets.len())
                {
                    problems.push(Finding::new(
                        FindingCode::CardinalityBreach,
                        source.to_string(),
                        format!(
                            "relation `{}` has {} target(s); expected {}..{}",
                            def.name,
                            targets.len(),
                            def.min_cardinality,
                            def.max_cardinality
                        ),
                    ));
                }
                let mut resolved = Vec::new();
                for target in targets {
                    if def.target_taxonomy == vocab::FACTOR {
                        let key = match normalize_factor_name(target) {
                            Ok(key) => key,
                            Err(_) => {
                                problems.push(dangling(&source, &def.name, target, "empty factor name"));
                                continue;
                            }
                        };
                        if let Some(canonical) = identity.resolve(&key) {
                            resolved.push(LinkTarget::Factor(canonical.to_string()));
                        } else if object.taxonomy == vocab::DESCRIPTION {
                            implicit.entry(key.clone()).or_insert_with(|| target.trim().to_string());
                            resolved.push(LinkTarget::Factor(key));
                        } else {
                            problems.push(dangling(&source, &def.name, target, "no factor has this name"));
                        }
                        continue;
                    }
                    let target_ref = ObjectRef::parse_target(target, record.key());
                    match object_index.get(&target_ref) {
                        None => problems.push(dangling(&source, &def.name, target, "no such object")),
                        Some(&(ri, oi)) if records[ri].objects[oi].taxonomy != def.target_taxonomy => {
                            problems.push(Finding::new(
                                FindingCode::RelationTargetMismatch,
                                source.to_string(),
                                format!(
                                    "relation `{}` expects a `{}` object but `{target}` is a `{}`",
                                    def.name, def.target_taxonomy, records[ri].objects[oi].taxonomy
                                ),
                            ))
                        }
                        Some(_) => resolved.push(LinkTarget::Object(target_ref)),
                    }
                }
                if !resolved.is_empty() {
                    links.entry(source.clone()).or_default().insert(def.name.clone(), resolved);
                }
            }
        }
    }

    for (key, name) in implicit {
        factors.insert(
            key.clone(),
            FactorNode {
                canonical_name: name,
                normalized_key: key,
                implicit: true,
                aliases: BTreeSet::new(),
                assertions: Vec::new(),
                merged_values: BTreeMap::new(),
            },
        );
    }

    let taxonomy_of = |r: &ObjectRef| object_index.get(r).map(|&(ri, oi)| records[ri].objects[oi].taxonomy.as_str());
    let mut direct: BTreeMap<&ObjectRef, BTreeSet<&str>> = BTreeMap::new();
    for (source, by_relation) in &links {
        for target in by_relation.values().flatten() {
            if let LinkTarget::Factor(key) = target {
                direct.entry(source).or_default().insert(key);
            }
        }
    }

    let mut indexes = SnapshotIndexes::default();
    for key in factors.keys() {
        indexes.factor_descriptions.insert(key.clone(), BTreeSet::new());
        indexes.factor_datasets.insert(key.clone(), BTreeSet::new());
        indexes.factor_approaches.insert(key.clone(), BTreeSet::new());
    }
    for (source, keys) in &direct {
        let index = match taxonomy_of(source) {
            Some(vocab::DESCRIPTION) => &mut indexes.factor_descriptions,
            Some(vocab::DATASET) => &mut indexes.factor_datasets,
            Some(vocab::APPROACH) => &mut indexes.factor_approaches,
            _ => continue,
        };
        for key in keys {
            index.entry(key.to_string()).or_default().insert((*source).clone());
        }
    }
    for (source, by_relation) in &links {
        if taxonomy_of(source) != Some(vocab::APPROACH) {
            continue;
        }
        for target in by_relation.values().flatten() {
            let LinkTarget::Object(target) = target else { continue };
            if taxonomy_of(target) != Some(vocab::DESCRIPTION) {
                continue;
            }
            for key in direct.get(target).into_iter().flatten() {
                indexes
                    .factor_approaches
                    .entry(key.to_string())
                    .or_default()
                    .insert(source.clone());
            }
        }
    }
    for record in &records {
        let refs = record
            .objects
            .iter()
            .map(|o| ObjectRef::new(record.key(), &o.id))
            .filter(|r| object_index.contains_key(r))
            .collect::<BTreeSet<_>>();
        indexes
            .reference_objects
            .insert(record.key().to_string(), refs.into_iter().collect());
        for author in &record.reference.authors {
            indexes
                .author_references
                .entry(author.clone())
                .or_default()
                .insert(record.key().to_string());
        }
    }

    for (key, descriptions) in &indexes.factor_descriptions {
        if descriptions.is_empty() {
            problems.push(Finding::new(
                FindingCode::FactorWithoutDescription,
                key,
                format!("factor `{}` has no linked description", factors[key].canonical_name),
            ));
        }
    }

    let mut warnings = Vec::new();
    if let Some(factor_taxonomy) = schema.taxonomy(vocab::FACTOR) {
        let dims = factor_taxonomy.expanded_dimensions();
        for node in factors.values_mut().filter(|n| !n.implicit) {
            for dim in &dims {
                if let Some(merged) = merge_dimension(node, &dim.name, &mut warnings) {
                    node.merged_values.insert(dim.name.clone(), merged);
                }
            }
        }
    }

    problems.sort();
    problems.dedup();
    let snapshot = OntologySnapshot {
        schema: schema.clone(),
        records,
        factors,
        indexes,
        links,
        warnings,
        object_index,
    };
    (snapshot, problems)
}

fn dangling(source: &ObjectRef, relation: &str, target: &str, why: &str) -> Finding {
    Finding::new(
        FindingCode::DanglingRelation,
        source.to_string(),
        format!("relation `{relation}` target `{target}` does not resolve: {why}"),
    )
}

fn dedup_records(records: &[ExtractionRecord], problems: &mut Vec<Finding>) -> Vec<ExtractionRecord> {
    let mut by_key: BTreeMap<&str, Vec<&ExtractionRecord>> = BTreeMap::new();
    for record in records {
        by_key.entry(record.key()).or_default().push(record);
    }
    by_key
        .into_iter()
        .map(|(key, mut group)| {
            if group.len() > 1 {
                group.sort_by_cached_key(|r| to_canonical_bytes(r));
                for _ in 1..group.len() {
                    problems.push(Finding::new(
                        FindingCode::DuplicateReference,
                        key,
                        format!("reference key `{key}` appears in more than one extraction"),
                    ));
                }
            }
            group[0].clone()
        })
        .collect()
}

/// Explicit and alias-driven grouping of factor names.
struct FactorIdentity {
    /// Every known normalized name (own or alias) to its group's key.
    canonical: BTreeMap<String, String>,
}

impl FactorIdentity {
    fn from_records(records: &[ExtractionRecord]) -> Self {
        let mut sets = DisjointSets::default();
        let mut own_names = BTreeSet::new();
        for object in factor_objects(records).map(|(_, o)| o) {
            let Some(key) = object.note(vocab::NAME).and_then(|n| normalize_factor_name(n).ok()) else {
                continue;
            };
            sets.insert(&key);
            for alias in alias_list(object) {
                if let Ok(alias) = normalize_factor_name(alias) {
                    sets.union(&key, &alias);
                }
            }
            own_names.insert(key);
        }

        // Each group is named after its smallest declared (non-alias) name.
        let mut group_key: BTreeMap<String, String> = BTreeMap::new();
        for name in &own_names {
            group_key.entry(sets.find(name)).or_insert_with(|| name.clone());
        }
        let canonical = sets
            .members()
            .into_iter()
            .filter_map(|m| {
                let root = sets.find(&m);
                group_key.get(&root).map(|k| (m, k.clone()))
            })
            .collect();
        FactorIdentity { canonical }
    }

    fn resolve(&self, key: &str) -> Option<&str> {
        self.canonical.get(key).map(String::as_str)
    }

    fn explicit_nodes(&self, records: &[ExtractionRecord]) -> BTreeMap<String, FactorNode> {
        let mut nodes: BTreeMap<String, FactorNode> = BTreeMap::new();
        let mut assertions: Vec<(&str, &OntologyObject, String)> = factor_objects(records)
            .filter_map(|(reference, object)| {
                let key = object.note(vocab::NAME).and_then(|n| normalize_factor_name(n).ok())?;
                Some((reference, object, key))
            })
            .collect();
        assertions.sort_by(|a, b| (a.0, &a.1.id).cmp(&(b.0, &b.1.id)));

        for (reference, object, own_key) in assertions {
            let canonical = self.canonical[&own_key].clone();
            let node = nodes.entry(canonical.clone()).or_insert_with(|| FactorNode {
                canonical_name: String::new(),
                normalized_key: canonical.clone(),
                implicit: false,
                aliases: BTreeSet::new(),
                assertions: Vec::new(),
                merged_values: BTreeMap::new(),
            });
            if node.canonical_name.is_empty() && own_key == canonical {
                node.canonical_name = object.note(vocab::NAME).unwrap_or_default().trim().to_string();
            }
            node.assertions.push(FactorAssertion {
                reference: reference.to_string(),
                object: object.clone(),
            });
        }
        for (member, canonical) in &self.canonical {
            if member != canonical {
                if let Some(node) = nodes.get_mut(canonical) {
                    node.aliases.insert(member.clone());
                }
            }
        }
        nodes
    }
}

fn factor_objects(records: &[ExtractionRecord]) -> impl Iterator<Item = (&str, &OntologyObject)> {
    records.iter().flat_map(|r| {
        r.objects
            .iter()
            .filter(|o| o.taxonomy == vocab::FACTOR)
            .map(move |o| (r.key(), o))
    })
}

fn merge_dimension(node: &FactorNode, dimension: &str, warnings: &mut Vec<Finding>) -> Option<MergedValue> {
    let mut explicit: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut defaulted = None;
    for assertion in &node.assertions {
        let Some(value) = assertion.object.value(dimension) else { continue };
        if assertion.object.defaulted.contains(dimension) {
            defaulted.get_or_insert(value);
        } else {
            explicit.entry(value).or_default().push(&assertion.reference);
        }
    }
    match explicit.len() {
        0 => defaulted.map(|v| MergedValue::Agreed(v.to_string())),
        1 => explicit.keys().next().map(|v| MergedValue::Agreed(v.to_string())),
        _ => {
            let claims: Vec<String> = explicit
                .iter()
                .map(|(value, refs)| format!("`{value}` ({})", refs.join(", ")))
                .collect();
            warnings.push(Finding::new(
                FindingCode::ConflictingAssertion,
                &node.normalized_key,
                format!("dimension `{dimension}` is asserted as {}", claims.join(" vs ")),
            ));
            Some(MergedValue::Conflict {
                conflict: explicit.keys().map(|v| v.to_string()).collect(),
            })
        }
    }
}

#[derive(Default)]
struct DisjointSets {
    parent: BTreeMap<String, String>,
}

impl DisjointSets {
    fn insert(&mut self, key: &str) {
        self.parent.entry(key.to_string()).or_insert_with(|| key.to_string());
    }

    fn find(&self, key: &str) -> String {
        let mut current = key;
        while let Some(parent) = self.parent.get(current) {
            if parent == current {
                break;
            }
            current = parent;
        }
        current.to_string()
    }

    fn union(&mut self, a: &str, b: &str) {
        self.insert(a);
        self.insert(b);
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so the result does not depend on call order
            let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(drop, keep);
        }
    }

    fn members(&self) -> Vec<String> {
        self.parent.keys().cloned().collect()
    }
}

impl OntologySnapshot {
    pub fn schema(&self) -> &TaxonomySchema {
        &self.schema
    }

    /// Records ordered by reference key.
    pub fn records(&self) -> &[ExtractionRecord] {
        &self.records
    }

    pub fn record(&self, key: &str) -> Option<&ExtractionRecord> {
        self.records
            .binary_search_by(|r| r.key().cmp(key))
            .ok()
            .map(|i| &self.records[i])
    }

    pub fn factors(&self) -> &BTreeMap<String, FactorNode> {
        &self.factors
    }

    pub fn factor(&self, key: &str) -> Option<&FactorNode> {
        self.factors.get(key)
    }

    pub fn indexes(&self) -> &SnapshotIndexes {
        &self.indexes
    }

    /// Conflicting factor assertions found while merging.
    pub fn warnings(&self) -> &[Finding] {
        &self.warnings
    }

    pub fn object(&self, object: &ObjectRef) -> Option<&OntologyObject> {
        self.object_index
            .get(object)
            .map(|&(ri, oi)| &self.records[ri].objects[oi])
    }

    /// Every object of a known taxonomy, ordered by address.
    pub fn objects(&self) -> impl Iterator<Item = (&ObjectRef, &OntologyObject)> {
        self.object_index
            .iter()
            .map(|(r, &(ri, oi))| (r, &self.records[ri].objects[oi]))
    }

    pub fn objects_of<'a>(&'a self, taxonomy: &'a str) -> impl Iterator<Item = (&'a ObjectRef, &'a OntologyObject)> {
        self.objects().filter(move |(_, o)| o.taxonomy == taxonomy)
    }

    /// Resolved relations of an object.
    pub fn links(&self, object: &ObjectRef) -> Option<&BTreeMap<String, Vec<LinkTarget>>> {
        self.links.get(object)
    }

    /// Factor a factor object asserts, or the first factor another object
    /// links to.
    pub fn factor_of(&self, object: &ObjectRef) -> Option<&str> {
        let asserted = self.factors.values().find(|node| {
            node.assertions
                .iter()
                .any(|a| a.reference == object.reference && a.object.id == object.id)
        });
        match asserted {
            Some(node) => Some(&node.normalized_key),
            None => self.linked_factors(object).into_iter().next(),
        }
    }

    /// Factors an object links to directly.
    pub fn linked_factors(&self, object: &ObjectRef) -> BTreeSet<&str> {
        self.links(object)
            .into_iter()
            .flat_map(|m| m.values().flatten())
            .filter_map(|t| match t {
                LinkTarget::Factor(k) => Some(k.as_str()),
                LinkTarget::Object(_) => None,
            })
            .collect()
    }
}
