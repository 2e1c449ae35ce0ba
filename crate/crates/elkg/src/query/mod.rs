//! Conjunctive trace queries: a trace variable, a conjunction of
//! constraint / attribute / duration clauses, and a projection.
//!
//! A trace matches when some assignment of its events to the query's
//! event variables satisfies every clause. The surface grammar is
//! documented on [`parse_query`].

mod eval;
mod parse;

pub use eval::evaluate;
pub use parse::parse_query;

use std::collections::{BTreeMap, BTreeSet};

use crate::constraints::Constraint;

/// A parsed, validated query.
#[derive(Debug, Clone)]
pub struct QueryAst {
    /// The trace variable from `MATCH TRACE ?t` (without the `?`).
    pub trace_variable: String,
    pub clauses: Vec<Clause>,
    /// Variables projected by `RETURN` (without `?`); the first is the
    /// trace variable.
    pub returns: Vec<String>,
    /// Non-fatal validation notes, e.g. witness variables never used.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Clause {
    Constraint(ConstraintClause),
    Attribute(AttributeClause),
    Duration(DurationClause),
}

/// A constraint call, optionally binding witness event variables with
/// `AS ?e` / `AS ?x, ?y`.
#[derive(Debug, Clone)]
pub struct ConstraintClause {
    pub constraint: Constraint,
    pub binds: Vec<String>,
}

/// `attr(?e, "Name") <cmp> <literal>`
#[derive(Debug, Clone)]
pub struct AttributeClause {
    pub event_var: String,
    pub attribute: String,
    pub comparator: Comparator,
    pub literal: QueryLiteral,
}

/// `timeBetween(?from, ?to) <cmp> duration("...")`
#[derive(Debug, Clone)]
pub struct DurationClause {
    pub from_var: String,
    pub to_var: String,
    pub comparator: Comparator,
    pub duration_millis: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn apply<T: PartialOrd>(&self, left: &T, right: &T) -> bool {
        match self {
            Comparator::Eq => left == right,
            Comparator::Ne => left != right,
            Comparator::Lt => left < right,
            Comparator::Le => left <= right,
            Comparator::Gt => left > right,
            Comparator::Ge => left >= right,
        }
    }

    pub fn is_equality(&self) -> bool {
        matches!(self, Comparator::Eq | Comparator::Ne)
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

/// A literal on the right-hand side of an attribute comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryLiteral {
    String(String),
    Integer(i64),
    Decimal(f64),
    Boolean(bool),
}

/// One satisfying assignment, projected to the returned variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ResultRow {
    /// Trace IRI.
    pub trace: String,
    /// Returned event variable to event IRI.
    pub bindings: BTreeMap<String, String>,
}

/// Query answers: distinct matching traces plus the projected rows.
#[derive(Debug, Clone, Default)]
pub struct ResultSet {
    pub rows: Vec<ResultRow>,
    pub traces: BTreeSet<String>,
    /// Evaluation warnings (e.g. attribute type mismatches).
    pub warnings: Vec<String>,
}

/// Output format of [`serialize_results`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultFormat {
    /// One trace IRI per line, sorted.
    Ids,
    /// A JSON document with the trace list and per-row bindings.
    BindingsJson,
}

/// Renders a result set deterministically (traces sorted by id).
pub fn serialize_results(results: &ResultSet, format: ResultFormat) -> String {
    match format {
        ResultFormat::Ids => {
            let mut out = String::new();
            for trace in &results.traces {
                out.push_str(trace);
                out.push('\n');
            }
            out
        }
        ResultFormat::BindingsJson => {
            let traces: Vec<_> = results.traces.iter().collect();
            let rows: Vec<serde_json::Value> = results
                .rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "trace": row.trace,
                        "bindings": row.bindings,
                    })
                })
                .collect();
            let doc = serde_json::json!({ "traces": traces, "rows": rows });
            serde_json::to_string_pretty(&doc).expect("result sets serialize")
        }
    }
}
