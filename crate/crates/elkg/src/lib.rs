//! Event log knowledge graphs.
//!
//! This crate converts case-centric (XES) and object-centric (OCEL 2.0)
//! event logs into a trace-based RDF graph, flattens object-centric
//! logs into traces through object-path perspectives, and answers
//! conjunctive trace queries built from occurrence and sequential-
//! relation constraints.
//!
//! The usual pipeline:
//!
//! ```text
//! XES ──parse_xes──────► CaseLog ──ccel_to_elkg──────┐
//! OCEL2 ─parse_ocel2_json► OcelLog ─ocel2_to_elkg/flatten┤
//!                                                    ▼
//!                       Graph ◄──parse_turtle / serialize_turtle──► .ttl
//!                         │
//!                    TraceIndex ──evaluate(query)──► ResultSet
//! ```
//!
//! [`oracle`] holds reference evaluators used by the test suites; they
//! work directly on the log models and share no code with the engines.

pub mod constraints;
pub mod convert;
pub mod error;
pub mod graph;
pub mod iri;
pub mod model;
pub mod ocel;
pub mod oracle;
pub mod perspective;
pub mod query;
pub mod term;
pub mod trace_index;
pub mod turtle;
pub mod vocab;
pub mod xes;

pub use constraints::Constraint;
pub use convert::{ccel_to_elkg, ocel2_to_elkg};
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, PrefixMap};
pub use iri::IriScheme;
pub use model::{AttributeValue, CaseLog, Event, OcelEvent, OcelLog, OcelObject, Trace};
pub use ocel::parse_ocel2_json;
pub use perspective::{
    collect, enumerate_instances, flatten, materialize_traces, parse_perspective, Direction,
    PathStep, Perspective, PerspectiveInstance,
};
pub use query::{evaluate, parse_query, serialize_results, QueryAst, ResultFormat, ResultSet};
pub use term::{Term, Triple};
pub use trace_index::TraceIndex;
pub use turtle::{parse_turtle, serialize_turtle};
pub use xes::parse_xes;
