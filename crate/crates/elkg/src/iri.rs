//! IRI minting for log entities.
//!
//! Every entity of a log (events, objects, traces, activities, object
//! types, attribute names) is mapped to an IRI in one log-specific
//! namespace. Minting is deterministic, and injective over the log's id
//! space: two distinct raw names that sanitize to the same local name
//! are reported as a collision instead of silently aliasing.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// What kind of entity a local name was minted for. Events, objects and
/// traces are distinct individuals, so a shared local name between them
/// is a collision. Concept names (activities, object types, attribute
/// names) share one space: the same raw string names the same concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NameKind {
    Event,
    Object,
    Trace,
    Concept,
}

/// Replaces every character outside `[A-Za-z0-9_-]` with `_`. A leading
/// `-` is also replaced so the result is always a valid local name in
/// the supported Turtle subset.
pub fn sanitize_local_name(raw: &str) -> String {
    let mut out: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect();
    if out.is_empty() {
        out.push('_');
    }
    if out.starts_with('-') {
        out.replace_range(0..1, "_");
    }
    out
}

/// Deterministic IRI minting for one log within one base namespace.
#[derive(Debug, Clone)]
pub struct IriScheme {
    base: String,
    minted: HashMap<String, (NameKind, String)>,
}

impl IriScheme {
    /// A scheme over the given base namespace. A `#` is appended when
    /// the base ends in neither `#` nor `/`.
    pub fn new(base: impl Into<String>) -> Result<IriScheme> {
        let mut base = base.into();
        if base.is_empty() || !base.contains(':') {
            return Err(Error::InvalidIri(base));
        }
        if !base.ends_with('#') && !base.ends_with('/') {
            base.push('#');
        }
        Ok(IriScheme {
            base,
            minted: HashMap::new(),
        })
    }

    /// The default namespace for a log file: `http://example.org/<stem>#`
    /// with the file stem sanitized.
    pub fn for_log_name(stem: &str) -> IriScheme {
        let local = sanitize_local_name(stem);
        IriScheme::new(format!("http://example.org/{local}#"))
            .expect("default base namespace is a valid IRI")
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    /// Mints (or re-resolves) the IRI for an entity, enforcing
    /// injectivity of the sanitization over this log's id space.
    pub fn mint(&mut self, kind: NameKind, raw: &str) -> Result<String> {
        let prefix = match kind {
            NameKind::Trace => "trace_",
            _ => "",
        };
        let local = format!("{prefix}{}", sanitize_local_name(raw));
        match self.minted.get(&local) {
            Some((k, r)) if *k == kind && r == raw => {}
            Some((_, r)) => {
                return Err(Error::IriCollision {
                    raw_a: r.clone(),
                    raw_b: raw.to_owned(),
                    local,
                });
            }
            None => {
                self.minted.insert(local.clone(), (kind, raw.to_owned()));
            }
        }
        Ok(format!("{}{local}", self.base))
    }

    pub fn event_iri(&mut self, id: &str) -> Result<String> {
        self.mint(NameKind::Event, id)
    }

    pub fn object_iri(&mut self, id: &str) -> Result<String> {
        self.mint(NameKind::Object, id)
    }

    pub fn trace_iri(&mut self, case_id: &str) -> Result<String> {
        self.mint(NameKind::Trace, case_id)
    }

    /// Activities, object types, and attribute names share the concept
    /// space.
    pub fn concept_iri(&mut self, name: &str) -> Result<String> {
        self.mint(NameKind::Concept, name)
    }
}
