//! Triple store: single-writer construction, then a frozen immutable
//! graph with indexed pattern lookup.
//!
//! Graphs are built through [`GraphBuilder`] and frozen into [`Graph`].
//! A frozen graph cannot be mutated (there is no insert on `Graph`), so
//! it is safe to share across threads and hand to any number of readers.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::term::{Term, Triple};
use crate::vocab;

/// Namespace prefix declarations carried by a graph for serialization.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrefixMap {
    entries: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn new() -> PrefixMap {
        PrefixMap::default()
    }

    /// The default declarations present on every graph this crate emits.
    pub fn with_defaults() -> PrefixMap {
        let mut map = PrefixMap::new();
        map.declare("rdf", vocab::RDF_NS);
        map.declare("xsd", vocab::XSD_NS);
        map.declare("tr", vocab::TR_NS);
        map.declare("pq", vocab::PQ_NS);
        map
    }

    pub fn declare(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.entries.insert(prefix.into(), namespace.into());
    }

    pub fn namespace(&self, prefix: &str) -> Option<&str> {
        self.entries.get(prefix).map(String::as_str)
    }

    /// Prefix/namespace pairs sorted by prefix.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    /// Splits an IRI into (prefix, local) using the longest declared
    /// namespace that is a prefix of the IRI.
    pub fn qualify<'a>(&'a self, iri: &'a str) -> Option<(&'a str, &'a str)> {
        let mut best: Option<(&str, &str)> = None;
        for (prefix, ns) in self.entries.iter() {
            if let Some(local) = iri.strip_prefix(ns.as_str()) {
                if best.is_none_or(|(_, b)| ns.len() > iri.len() - b.len()) {
                    best = Some((prefix.as_str(), local));
                }
            }
        }
        best
    }
}

/// Mutable graph under construction. Inserting the same triple twice is
/// a no-op; the builder also mints anonymous-node labels that are unique
/// within this construction session.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
    prefixes: PrefixMap,
    anon_counter: usize,
}

impl GraphBuilder {
    pub fn new() -> GraphBuilder {
        GraphBuilder {
            prefixes: PrefixMap::with_defaults(),
            ..GraphBuilder::default()
        }
    }

    pub fn declare_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.declare(prefix, namespace);
    }

    /// Mints a fresh anonymous node `_:b<n>`.
    pub fn fresh_anonymous(&mut self) -> Term {
        self.anon_counter += 1;
        Term::anonymous(format!("b{}", self.anon_counter))
    }

    pub fn insert(&mut self, triple: Triple) {
        if self.seen.insert(triple.clone()) {
            self.triples.push(triple);
        }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Freezes the builder into an immutable, indexed graph.
    pub fn freeze(self) -> Graph {
        let mut by_subject: HashMap<Term, Vec<usize>> = HashMap::new();
        let mut by_predicate: HashMap<Term, Vec<usize>> = HashMap::new();
        let mut by_object: HashMap<Term, Vec<usize>> = HashMap::new();
        let mut by_predicate_object: HashMap<(Term, Term), Vec<usize>> = HashMap::new();
        for (i, t) in self.triples.iter().enumerate() {
            by_subject.entry(t.subject.clone()).or_default().push(i);
            by_predicate.entry(t.predicate.clone()).or_default().push(i);
            by_object.entry(t.object.clone()).or_default().push(i);
            by_predicate_object
                .entry((t.predicate.clone(), t.object.clone()))
                .or_default()
                .push(i);
        }
        Graph {
            triples: self.triples,
            prefixes: self.prefixes,
            by_subject,
            by_predicate,
            by_object,
            by_predicate_object,
        }
    }
}

/// An immutable triple set with pattern-lookup indexes.
#[derive(Debug)]
pub struct Graph {
    triples: Vec<Triple>,
    prefixes: PrefixMap,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Term, Vec<usize>>,
    by_object: HashMap<Term, Vec<usize>>,
    by_predicate_object: HashMap<(Term, Term), Vec<usize>>,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.by_subject
            .get(&triple.subject)
            .is_some_and(|idxs| idxs.iter().any(|&i| &self.triples[i] == triple))
    }

    /// All triples matching the bound positions of the pattern. Unbound
    /// positions (`None`) match any term. Lookup goes through whichever
    /// index covers the most selective bound position.
    pub fn triples_matching(
        &self,
        subject: Option<&Term>,
        predicate: Option<&Term>,
        object: Option<&Term>,
    ) -> Vec<&Triple> {
        let candidates: Option<&Vec<usize>> = match (subject, predicate, object) {
            (Some(s), _, _) => Some(self.by_subject.get(s).unwrap_or(&EMPTY)),
            (None, Some(p), Some(o)) => Some(
                self.by_predicate_object
                    .get(&(p.clone(), o.clone()))
                    .unwrap_or(&EMPTY),
            ),
            (None, None, Some(o)) => Some(self.by_object.get(o).unwrap_or(&EMPTY)),
            (None, Some(p), None) => Some(self.by_predicate.get(p).unwrap_or(&EMPTY)),
            (None, None, None) => None,
        };
        let matches = |t: &Triple| {
            subject.is_none_or(|s| &t.subject == s)
                && predicate.is_none_or(|p| &t.predicate == p)
                && object.is_none_or(|o| &t.object == o)
        };
        match candidates {
            Some(idxs) => idxs
                .iter()
                .map(|&i| &self.triples[i])
                .filter(|t| matches(t))
                .collect(),
            None => self.triples.iter().collect(),
        }
    }

    /// Distinct subjects of triples matching (?, predicate, object).
    pub fn subjects_matching(&self, predicate: &Term, object: &Term) -> Vec<&Term> {
        let mut seen = HashSet::new();
        self.triples_matching(None, Some(predicate), Some(object))
            .into_iter()
            .filter_map(|t| seen.insert(&t.subject).then_some(&t.subject))
            .collect()
    }

    /// Objects of triples matching (subject, predicate, ?).
    pub fn objects_matching(&self, subject: &Term, predicate: &Term) -> Vec<&Term> {
        self.triples_matching(Some(subject), Some(predicate), None)
            .into_iter()
            .map(|t| &t.object)
            .collect()
    }

    /// The triple set with anonymous nodes relabeled in first-occurrence
    /// order over the sorted triple list. Two graphs that differ only in
    /// anonymous-node labels canonicalize to the same set.
    pub fn canonical_triples(&self) -> Vec<Triple> {
        let mut sorted: Vec<&Triple> = self.triples.iter().collect();
        sorted.sort();
        let mut relabel: HashMap<String, String> = HashMap::new();
        let rename = |term: &Term, relabel: &mut HashMap<String, String>| match term {
            Term::Anonymous(label) => {
                let next = relabel.len();
                let canonical = relabel
                    .entry(label.clone())
                    .or_insert_with(|| format!("c{next}"))
                    .clone();
                Term::Anonymous(canonical)
            }
            other => other.clone(),
        };
        let mut out: Vec<Triple> = sorted
            .into_iter()
            .map(|t| Triple {
                subject: rename(&t.subject, &mut relabel),
                predicate: t.predicate.clone(),
                object: rename(&t.object, &mut relabel),
            })
            .collect();
        out.sort();
        out
    }
}

static EMPTY: Vec<usize> = Vec::new();
