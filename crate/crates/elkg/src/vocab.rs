//! Fixed vocabulary: namespaces and predicate IRIs used by every graph
//! this crate emits.
//!
//! The trace vocabulary (`tr:`) carries the structural predicates of a
//! trace graph: trace membership, sequential relations, activities,
//! timestamps, and the reified event/object relations of object-centric
//! logs.

/// RDF namespace.
pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
/// XML Schema datatype namespace.
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
/// Trace vocabulary namespace.
pub const TR_NS: &str = "http://notation3.org/trace#";
/// Query vocabulary namespace (declared on every graph for downstream use).
pub const PQ_NS: &str = "http://notation3.org/pquery#";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_NIL: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

/// Class of trace nodes.
pub const TR_TRACE: &str = "http://notation3.org/trace#Trace";
/// Links an event to the trace it belongs to.
pub const TR_IN: &str = "http://notation3.org/trace#in";
/// Links an event to the next event of the same trace (or `rdf:nil`).
pub const TR_NEXT: &str = "http://notation3.org/trace#next";
/// Links an event to its activity resource.
pub const TR_ACTIVITY: &str = "http://notation3.org/trace#activity";
/// Links an event to its timestamp literal.
pub const TR_TIMESTAMP: &str = "http://notation3.org/trace#timestamp";
/// Event side of a reified event-to-object relation.
pub const TR_EVENT: &str = "http://notation3.org/trace#event";
/// Object side of a reified relation.
pub const TR_OBJECT: &str = "http://notation3.org/trace#object";
/// Second object of a reified object-to-object relation.
pub const TR_OBJECT2: &str = "http://notation3.org/trace#object2";
/// Qualifier of a reified relation.
pub const TR_QUALIFIER: &str = "http://notation3.org/trace#qualifier";
