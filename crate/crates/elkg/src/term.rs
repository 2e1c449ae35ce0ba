//! RDF terms and triples.

use crate::error::{Error, Result};
use crate::vocab;

/// An RDF term: an identified resource, an anonymous (blank) node, or a
/// typed literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// A resource identified by an absolute IRI.
    Resource(String),
    /// An anonymous node; the label is unique within one graph's
    /// construction session and carries no meaning across graphs.
    Anonymous(String),
    /// A literal with lexical form and datatype IRI. The language tag is
    /// present only for `rdf:langString` literals.
    Literal {
        lexical: String,
        datatype: String,
        language: Option<String>,
    },
}

impl Term {
    /// A resource term, validating that the IRI is absolute (contains a
    /// scheme separator).
    pub fn resource(iri: impl Into<String>) -> Result<Term> {
        let iri = iri.into();
        if iri.is_empty() || !iri.contains(':') {
            return Err(Error::InvalidIri(iri));
        }
        Ok(Term::Resource(iri))
    }

    pub fn anonymous(label: impl Into<String>) -> Term {
        Term::Anonymous(label.into())
    }

    /// A plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::XSD_STRING.to_owned(),
            language: None,
        }
    }

    pub fn boolean(value: bool) -> Term {
        Term::Literal {
            lexical: if value { "true" } else { "false" }.to_owned(),
            datatype: vocab::XSD_BOOLEAN.to_owned(),
            language: None,
        }
    }

    pub fn integer(value: i64) -> Term {
        Term::Literal {
            lexical: value.to_string(),
            datatype: vocab::XSD_INTEGER.to_owned(),
            language: None,
        }
    }

    /// A decimal literal. The lexical form always contains a decimal
    /// point so it survives a Turtle round trip as `xsd:decimal`.
    pub fn decimal(value: f64) -> Term {
        let mut lexical = value.to_string();
        if !lexical.contains('.') {
            lexical.push_str(".0");
        }
        Term::Literal {
            lexical,
            datatype: vocab::XSD_DECIMAL.to_owned(),
            language: None,
        }
    }

    pub fn date_time(lexical: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::XSD_DATE_TIME.to_owned(),
            language: None,
        }
    }

    pub fn typed_literal(lexical: impl Into<String>, datatype: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: datatype.into(),
            language: None,
        }
    }

    pub fn lang_string(lexical: impl Into<String>, language: impl Into<String>) -> Term {
        Term::Literal {
            lexical: lexical.into(),
            datatype: vocab::RDF_LANG_STRING.to_owned(),
            language: Some(language.into()),
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Term::Resource(_))
    }

    pub fn is_anonymous(&self) -> bool {
        matches!(self, Term::Anonymous(_))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }

    /// The IRI of a resource term, if it is one.
    pub fn iri(&self) -> Option<&str> {
        match self {
            Term::Resource(iri) => Some(iri),
            _ => None,
        }
    }

    /// The local name of a resource IRI: the part after the last `#` or
    /// `/`, or after the last `:` for IRIs without either.
    pub fn local_name(&self) -> Option<&str> {
        self.iri().map(local_name_of)
    }
}

/// The part of an IRI after the last `#`, `/`, or `:` separator.
pub fn local_name_of(iri: &str) -> &str {
    match iri.rfind(['#', '/']) {
        Some(pos) => &iri[pos + 1..],
        None => match iri.rfind(':') {
            Some(pos) => &iri[pos + 1..],
            None => iri,
        },
    }
}

/// An RDF triple. Subjects are resources or anonymous nodes; predicates
/// are always resources.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple> {
        if subject.is_literal() {
            return Err(Error::Constraint(
                "triple subject must be a resource or anonymous node".to_owned(),
            ));
        }
        if !predicate.is_resource() {
            return Err(Error::Constraint(
                "triple predicate must be a resource".to_owned(),
            ));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }
}
