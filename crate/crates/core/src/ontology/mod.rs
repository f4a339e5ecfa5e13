//! Domain ontology: a class hierarchy, object properties with domain and
//! range, and instance triples, grown document by document.

mod populate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use populate::{populate_from_document, PopulationReport};

pub const INSTANCE_OF: &str = "instance_of";
pub const SYNONYM_OF: &str = "synonym_of";
pub const BASE_PROVENANCE: &str = "base";

const BUNDLED_BASE: &str = include_str!("../../data/base_ontology.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectProperty {
    pub name: String,
    pub domain: String,
    pub range: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cardinality: Option<usize>,
}

/// `(subject, predicate, object)` plus where it came from. Serialized as a
/// four-element array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(String, String, String, String)", into = "(String, String, String, String)")]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub provenance: String,
}

impl Triple {
    pub fn new(subject: &str, predicate: &str, object: &str, provenance: &str) -> Self {
        Self {
            subject: subject.to_string(),
            predicate: predicate.to_string(),
            object: object.to_string(),
            provenance: provenance.to_string(),
        }
    }

    fn key(&self) -> (String, String, String) {
        (norm(&self.subject), norm(&self.predicate), norm(&self.object))
    }
}

impl From<(String, String, String, String)> for Triple {
    fn from((subject, predicate, object, provenance): (String, String, String, String)) -> Self {
        Self {
            subject,
            predicate,
            object,
            provenance,
        }
    }
}

impl From<Triple> for (String, String, String, String) {
    fn from(t: Triple) -> Self {
        (t.subject, t.predicate, t.object, t.provenance)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate property `{0}`")]
    DuplicateProperty(String),
    #[error("{record} refers to unknown class `{class}`")]
    UnknownClass { record: String, class: String },
    #[error("class hierarchy has a cycle through `{0}`")]
    Cycle(String),
    #[error("predicate `{0}` is not declared")]
    UndeclaredPredicate(String),
    #[error("triple has an empty term")]
    EmptyTerm,
    #[error("`{term}` is a {actual}, but `{property}` requires {expected}")]
    Incompatible {
        term: String,
        property: String,
        expected: String,
        actual: String,
    },
    #[error("`{subject}` already has {max} value(s) for `{property}`")]
    Cardinality {
        subject: String,
        property: String,
        max: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum OntologyError {
    #[error("cannot read ontology {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed ontology: {0}")]
    Schema(String),
    #[error("invalid ontology: {0}")]
    Constraint(#[from] ConstraintError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OntologyStats {
    pub classes: usize,
    pub properties: usize,
    pub triples: usize,
}

/// A term next to another in the ontology and how they are linked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelatedConcept {
    pub term: String,
    pub relation: String,
}

/// One hop of a relation path, in the direction the triple was asserted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationStep {
    pub subject: String,
    pub property: String,
    pub object: String,
}

pub type RelationPath = Vec<RelationStep>;

#[derive(Serialize, Deserialize)]
struct OntologyFile {
    #[serde(default)]
    classes: Vec<ClassDef>,
    #[serde(default)]
    properties: Vec<ObjectProperty>,
    #[serde(default)]
    triples: Vec<Triple>,
}

fn norm(term: &str) -> String {
    term.trim().to_lowercase()
}

fn is_builtin(predicate: &str) -> bool {
    predicate == INSTANCE_OF || predicate == SYNONYM_OF
}

/// In-memory triple store with subject, predicate and object indexes.
///
/// Term lookups are case-insensitive; stored triples keep the spelling of
/// their first assertion.
#[derive(Debug, Clone, Default)]
pub struct Ontology {
    classes: BTreeMap<String, ClassDef>,
    properties: BTreeMap<String, ObjectProperty>,
    triples: Vec<Triple>,
    keys: HashMap<(String, String, String), usize>,
    by_subject: HashMap<String, Vec<usize>>,
    by_predicate: HashMap<String, Vec<usize>>,
    by_object: HashMap<String, Vec<usize>>,
}

impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes && self.properties == other.properties && self.triples == other.triples
    }
}

impl Eq for Ontology {}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bundled_base() -> Self {
        Self::from_json(BUNDLED_BASE).expect("bundled base ontology is valid")
    }

    pub fn load_base(path: &Path) -> Result<Self, OntologyError> {
        let text = std::fs::read_to_string(path).map_err(|source| OntologyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, OntologyError> {
        let file: OntologyFile = serde_json::from_str(text).map_err(|e| OntologyError::Schema(e.to_string()))?;
        let mut ont = Ontology::new();
        for c in &file.classes {
            if c.name.trim().is_empty() {
                return Err(OntologyError::Schema("class with an empty name".into()));
            }
            if ont.classes.insert(c.name.clone(), c.clone()).is_some() {
                return Err(ConstraintError::DuplicateClass(c.name.clone()).into());
            }
        }
        ont.check_hierarchy()?;
        for p in file.properties {
            ont.add_property(p)?;
        }
        for t in file.triples {
            ont.assert_triple(t)?;
        }
        Ok(ont)
    }

    pub fn to_json(&self) -> String {
        let file = OntologyFile {
            classes: self.classes.values().cloned().collect(),
            properties: self.properties.values().cloned().collect(),
            triples: self.triples.clone(),
        };
        serde_json::to_string_pretty(&file).expect("ontology serializes")
    }

    pub fn export(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    fn check_hierarchy(&self) -> Result<(), ConstraintError> {
        for c in self.classes.values() {
            if let Some(p) = &c.parent {
                if !self.classes.contains_key(p) {
                    return Err(ConstraintError::UnknownClass {
                        record: format!("class `{}`", c.name),
                        class: p.clone(),
                    });
                }
            }
            let mut seen = BTreeSet::new();
            let mut cur = Some(c.name.as_str());
            while let Some(name) = cur {
                if !seen.insert(name) {
                    return Err(ConstraintError::Cycle(c.name.clone()));
                }
                cur = self.classes.get(name).and_then(|d| d.parent.as_deref());
            }
        }
        Ok(())
    }

    /// Whether the parent links form a forest.
    pub fn is_acyclic(&self) -> bool {
        self.check_hierarchy().is_ok()
    }

    pub fn add_class(&mut self, class: ClassDef) -> Result<(), ConstraintError> {
        if self.classes.contains_key(&class.name) {
            return Err(ConstraintError::DuplicateClass(class.name));
        }
        let name = class.name.clone();
        self.classes.insert(name.clone(), class);
        if let Err(e) = self.check_hierarchy() {
            self.classes.remove(&name);
            return Err(e);
        }
        Ok(())
    }

    pub fn add_property(&mut self, property: ObjectProperty) -> Result<(), ConstraintError> {
        if self.properties.contains_key(&property.name) || is_builtin(&property.name) {
            return Err(ConstraintError::DuplicateProperty(property.name));
        }
        for class in [&property.domain, &property.range] {
            if !self.classes.contains_key(class) {
                return Err(ConstraintError::UnknownClass {
                    record: format!("property `{}`", property.name),
                    class: class.clone(),
                });
            }
        }
        self.properties.insert(property.name.clone(), property);
        Ok(())
    }

    /// Add a triple. Returns `false` when the same subject, predicate and
    /// object are already present, whatever the provenance.
    pub fn assert_triple(&mut self, triple: Triple) -> Result<bool, ConstraintError> {
        if triple.subject.trim().is_empty() || triple.object.trim().is_empty() {
            return Err(ConstraintError::EmptyTerm);
        }
        let key = triple.key();
        if self.keys.contains_key(&key) {
            return Ok(false);
        }
        self.check_triple(&triple)?;
        let idx = self.triples.len();
        self.by_subject.entry(key.0.clone()).or_default().push(idx);
        self.by_predicate.entry(key.1.clone()).or_default().push(idx);
        self.by_object.entry(key.2.clone()).or_default().push(idx);
        self.keys.insert(key, idx);
        self.triples.push(triple);
        Ok(true)
    }

    fn check_triple(&self, t: &Triple) -> Result<(), ConstraintError> {
        match t.predicate.as_str() {
            SYNONYM_OF => Ok(()),
            INSTANCE_OF => {
                if self.classes.contains_key(&t.object) {
                    Ok(())
                } else {
                    Err(ConstraintError::UnknownClass {
                        record: format!("instance `{}`", t.subject),
                        class: t.object.clone(),
                    })
                }
            }
            name => {
                let p = self
                    .properties
                    .get(name)
                    .ok_or_else(|| ConstraintError::UndeclaredPredicate(name.to_string()))?;
                self.check_type(&t.subject, &p.domain, name)?;
                self.check_type(&t.object, &p.range, name)?;
                if let Some(max) = p.max_cardinality {
                    let have = self.objects_of(&t.subject, name).len();
                    if have >= max {
                        return Err(ConstraintError::Cardinality {
                            subject: t.subject.clone(),
                            property: name.to_string(),
                            max,
                        });
                    }
                }
                Ok(())
            }
        }
    }

    /// A term passes when it has no known class or one of its classes is
    /// `expected` or below it.
    fn check_type(&self, term: &str, expected: &str, property: &str) -> Result<(), ConstraintError> {
        let classes = self.classes_of(term);
        if classes.is_empty() || classes.iter().any(|c| self.is_subclass_of(c, expected)) {
            return Ok(());
        }
        Err(ConstraintError::Incompatible {
            term: term.to_string(),
            property: property.to_string(),
            expected: expected.to_string(),
            actual: classes.join("/"),
        })
    }

    pub fn is_class(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    /// Reflexive, transitive subclass test.
    pub fn is_subclass_of(&self, class: &str, ancestor: &str) -> bool {
        let mut cur = Some(class);
        let mut hops = 0;
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            hops += 1;
            if hops > self.classes.len() {
                return false;
            }
            cur = self.classes.get(c).and_then(|d| d.parent.as_deref());
        }
        false
    }

    /// Classes a term is asserted to be an instance of.
    pub fn classes_of(&self, term: &str) -> Vec<String> {
        self.objects_of(term, INSTANCE_OF)
    }

    fn objects_of(&self, subject: &str, predicate: &str) -> Vec<String> {
        self.by_subject
            .get(&norm(subject))
            .into_iter()
            .flatten()
            .map(|&i| &self.triples[i])
            .filter(|t| t.predicate == predicate)
            .map(|t| t.object.clone())
            .collect()
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn properties(&self) -> impl Iterator<Item = &ObjectProperty> {
        self.properties.values()
    }

    pub fn property(&self, name: &str) -> Option<&ObjectProperty> {
        self.properties.get(name)
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, subject: &str, predicate: &str, object: &str) -> bool {
        self.keys.contains_key(&(norm(subject), norm(predicate), norm(object)))
    }

    pub fn triples_with_predicate(&self, predicate: &str) -> impl Iterator<Item = &Triple> {
        self.by_predicate
            .get(&norm(predicate))
            .into_iter()
            .flatten()
            .map(|&i| &self.triples[i])
    }

    fn touching<'a>(&'a self, term: &str) -> impl Iterator<Item = &'a Triple> {
        let key = norm(term);
        let subj = self.by_subject.get(&key).into_iter().flatten();
        let obj = self.by_object.get(&key).into_iter().flatten();
        let mut idx: Vec<usize> = subj.chain(obj).copied().collect();
        idx.sort_unstable();
        idx.dedup();
        idx.into_iter().map(move |i| &self.triples[i])
    }

    pub fn stats(&self) -> OntologyStats {
        OntologyStats {
            classes: self.classes.len(),
            properties: self.properties.len(),
            triples: self.triples.len(),
        }
    }

    /// Synonyms, direct super- and subclasses, instances or classes, and
    /// terms one object-property triple away. Never contains `term` itself.
    pub fn related_concepts(&self, term: &str) -> BTreeSet<RelatedConcept> {
        let key = norm(term);
        let mut out = BTreeSet::new();
        let mut add = |t: &str, relation: &str| {
            if norm(t) != key {
                out.insert(RelatedConcept {
                    term: t.to_string(),
                    relation: relation.to_string(),
                });
            }
        };
        for c in self.classes.values() {
            if norm(&c.name) == key {
                if let Some(p) = &c.parent {
                    add(p, "superclass");
                }
            }
            if c.parent.as_deref().is_some_and(|p| norm(p) == key) {
                add(&c.name, "subclass");
            }
        }
        for t in self.touching(term) {
            let other = if norm(&t.subject) == key { &t.object } else { &t.subject };
            add(other, &t.predicate);
        }
        out
    }

    /// Lowercased synonym classes: connected components of `synonym_of`.
    pub fn synonym_classes(&self) -> Vec<BTreeSet<String>> {
        let mut parent: BTreeMap<String, String> = BTreeMap::new();
        fn find(parent: &mut BTreeMap<String, String>, x: &str) -> String {
            let p = parent.get(x).cloned().unwrap_or_else(|| x.to_string());
            if p == x {
                return p;
            }
            let root = find(parent, &p);
            parent.insert(x.to_string(), root.clone());
            root
        }
        for t in self.triples_with_predicate(SYNONYM_OF) {
            let (a, b) = (norm(&t.subject), norm(&t.object));
            parent.entry(a.clone()).or_insert_with(|| a.clone());
            parent.entry(b.clone()).or_insert_with(|| b.clone());
            let (ra, rb) = (find(&mut parent, &a), find(&mut parent, &b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo);
            }
        }
        let terms: Vec<String> = parent.keys().cloned().collect();
        let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for t in terms {
            let root = find(&mut parent, &t);
            groups.entry(root).or_default().insert(t);
        }
        groups.into_values().collect()
    }

    /// Property paths of one or two hops between `a` and `b`, following
    /// triples in either direction. Builtin predicates are not traversed.
    /// Shorter paths first, then lexicographic.
    pub fn identify_relations(&self, a: &str, b: &str) -> Vec<RelationPath> {
        let (ka, kb) = (norm(a), norm(b));
        if ka == kb {
            return Vec::new();
        }
        let step = |t: &Triple| RelationStep {
            subject: t.subject.clone(),
            property: t.predicate.clone(),
            object: t.object.clone(),
        };
        let far_end = |t: &Triple, from: &str| {
            if norm(&t.subject) == from {
                norm(&t.object)
            } else {
                norm(&t.subject)
            }
        };
        let mut paths: BTreeSet<(usize, Vec<String>, RelationPath)> = BTreeSet::new();
        for t in self.touching(a).filter(|t| !is_builtin(&t.predicate)) {
            let mid = far_end(t, &ka);
            if mid == kb {
                paths.insert((1, vec![t.predicate.clone()], vec![step(t)]));
                continue;
            }
            if mid == ka {
                continue;
            }
            for u in self.touching(&mid).filter(|u| !is_builtin(&u.predicate)) {
                if u.key() != t.key() && far_end(u, &mid) == kb {
                    paths.insert((
                        2,
                        vec![t.predicate.clone(), u.predicate.clone()],
                        vec![step(t), step(u)],
                    ));
                }
            }
        }
        paths.into_iter().map(|(_, _, p)| p).collect()
    }
}
