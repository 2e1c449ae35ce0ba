//! Query evaluation over a trace index.
//!
//! A trace matches when some assignment of its events to the query's
//! event variables satisfies every clause. Clauses run left to right
//! with backtracking over constraint witnesses; constraints without
//! witness variables prune the trace outright. Attribute comparisons
//! that mismatch on type evaluate to false and are recorded as
//! warnings so one malformed trace cannot abort a query.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::Result;
use crate::iri::sanitize_local_name;
use crate::model::{parse_instant, AttributeValue};
use crate::query::{Clause, Comparator, QueryAst, QueryLiteral, ResultRow, ResultSet};
use crate::trace_index::{TraceData, TraceIndex};

pub fn evaluate(ast: &QueryAst, index: &TraceIndex) -> Result<ResultSet> {
    let collect_all = ast.returns.iter().any(|v| v != &ast.trace_variable);
    let mut rows: BTreeSet<ResultRow> = BTreeSet::new();
    let mut warnings: BTreeSet<String> = BTreeSet::new();

    for (trace_id, trace) in index.iter() {
        let mut bindings: HashMap<&str, usize> = HashMap::new();
        solve(
            ast,
            index,
            trace_id,
            trace,
            0,
            &mut bindings,
            &mut rows,
            &mut warnings,
            collect_all,
        )?;
    }

    let traces: BTreeSet<String> = rows.iter().map(|r| r.trace.clone()).collect();
    Ok(ResultSet {
        rows: rows.into_iter().collect(),
        traces,
        warnings: warnings.into_iter().collect(),
    })
}

#[allow(clippy::too_many_arguments)]
fn solve<'q>(
    ast: &'q QueryAst,
    index: &TraceIndex,
    trace_id: &str,
    trace: &TraceData,
    clause_index: usize,
    bindings: &mut HashMap<&'q str, usize>,
    rows: &mut BTreeSet<ResultRow>,
    warnings: &mut BTreeSet<String>,
    collect_all: bool,
) -> Result<bool> {
    if clause_index == ast.clauses.len() {
        let mut projected = BTreeMap::new();
        for var in &ast.returns {
            if var == &ast.trace_variable {
                continue;
            }
            if let Some(&position) = bindings.get(var.as_str()) {
                let event = trace.event(position).expect("witness positions are valid");
                projected.insert(var.clone(), event.id.clone());
            }
        }
        rows.insert(ResultRow {
            trace: trace_id.to_owned(),
            bindings: projected,
        });
        return Ok(true);
    }

    match &ast.clauses[clause_index] {
        Clause::Constraint(cc) => {
            if cc.binds.is_empty() {
                if cc.constraint.holds(index, trace_id)? {
                    return solve(
                        ast,
                        index,
                        trace_id,
                        trace,
                        clause_index + 1,
                        bindings,
                        rows,
                        warnings,
                        collect_all,
                    );
                }
                return Ok(false);
            }
            let witnesses = cc.constraint.witnesses(index, trace_id)?;
            let mut matched = false;
            let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
            for witness in witnesses {
                let prefix: Vec<usize> = witness.iter().take(cc.binds.len()).copied().collect();
                if prefix.len() < cc.binds.len() || !seen.insert(prefix.clone()) {
                    continue;
                }
                for (var, &position) in cc.binds.iter().zip(&prefix) {
                    bindings.insert(var.as_str(), position);
                }
                if solve(
                    ast,
                    index,
                    trace_id,
                    trace,
                    clause_index + 1,
                    bindings,
                    rows,
                    warnings,
                    collect_all,
                )? {
                    matched = true;
                }
                for var in &cc.binds {
                    bindings.remove(var.as_str());
                }
                if matched && !collect_all {
                    return Ok(true);
                }
            }
            Ok(matched)
        }
        Clause::Attribute(ac) => {
            let position = bound_position(bindings, &ac.event_var, clause_index)?;
            let event = trace.event(position).expect("bound positions are valid");
            let satisfied = match event.attributes.get(&sanitize_local_name(&ac.attribute)) {
                Some(value) => match compare_attribute(value, ac.comparator, &ac.literal) {
                    Comparison::Value(v) => v,
                    Comparison::TypeMismatch(have, want) => {
                        warnings.insert(format!(
                            "attribute {:?}: cannot compare {have} with {want} using '{}'",
                            ac.attribute,
                            ac.comparator.symbol(),
                        ));
                        false
                    }
                },
                None => false,
            };
            if satisfied {
                solve(
                    ast,
                    index,
                    trace_id,
                    trace,
                    clause_index + 1,
                    bindings,
                    rows,
                    warnings,
                    collect_all,
                )
            } else {
                Ok(false)
            }
        }
        Clause::Duration(dc) => {
            let from = bound_position(bindings, &dc.from_var, clause_index)?;
            let to = bound_position(bindings, &dc.to_var, clause_index)?;
            let millis = trace
                .time_between(from, to)
                .expect("bound positions are valid");
            if dc.comparator.apply(&millis, &dc.duration_millis) {
                solve(
                    ast,
                    index,
                    trace_id,
                    trace,
                    clause_index + 1,
                    bindings,
                    rows,
                    warnings,
                    collect_all,
                )
            } else {
                Ok(false)
            }
        }
    }
}

fn bound_position(
    bindings: &HashMap<&str, usize>,
    var: &str,
    clause_index: usize,
) -> Result<usize> {
    bindings
        .get(var)
        .copied()
        .ok_or_else(|| crate::error::Error::QueryValidation {
            clause: clause_index + 1,
            message: format!("event variable ?{var} is not bound"),
        })
}

enum Comparison {
    Value(bool),
    TypeMismatch(&'static str, &'static str),
}

fn compare_attribute(value: &AttributeValue, cmp: Comparator, literal: &QueryLiteral) -> Comparison {
    let literal_type = match literal {
        QueryLiteral::String(_) => "string",
        QueryLiteral::Integer(_) => "integer",
        QueryLiteral::Decimal(_) => "decimal",
        QueryLiteral::Boolean(_) => "boolean",
    };
    match (value, literal) {
        (AttributeValue::Integer(x), QueryLiteral::Integer(y)) => {
            Comparison::Value(cmp.apply(x, y))
        }
        (AttributeValue::Integer(x), QueryLiteral::Decimal(y)) => {
            Comparison::Value(cmp.apply(&(*x as f64), y))
        }
        (AttributeValue::Decimal(x), QueryLiteral::Integer(y)) => {
            Comparison::Value(cmp.apply(x, &(*y as f64)))
        }
        (AttributeValue::Decimal(x), QueryLiteral::Decimal(y)) => {
            Comparison::Value(cmp.apply(x, y))
        }
        (AttributeValue::Boolean(x), QueryLiteral::Boolean(y)) if cmp.is_equality() => {
            Comparison::Value(cmp.apply(x, y))
        }
        (AttributeValue::String(x), QueryLiteral::String(y)) if cmp.is_equality() => {
            Comparison::Value(cmp.apply(x, y))
        }
        (AttributeValue::Instant(x), QueryLiteral::String(y)) => match parse_instant(y) {
            Ok(instant) => Comparison::Value(cmp.apply(x, &instant)),
            Err(_) => Comparison::TypeMismatch("instant", literal_type),
        },
        (value, _) => Comparison::TypeMismatch(value.type_name(), literal_type),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;
    use crate::trace_index::test_index;

    fn ids(results: &ResultSet) -> Vec<&str> {
        results.traces.iter().map(String::as_str).collect()
    }

    #[test]
    fn conjunction_filters_traces() {
        let idx = test_index(&[
            ("1", &["Create Purchase Requisition", "Order"]),
            ("2", &["Create Purchase Requisition", "Approve Purchase Requisition"]),
            ("3", &["Order"]),
        ]);
        let ast = parse_query(
            r#"MATCH TRACE ?t
               WHERE activityOccurs(?t, "Create Purchase Requisition") AS ?e
               AND activityDoesNotOccur(?t, "Approve Purchase Requisition")
               RETURN ?t"#,
        )
        .unwrap();
        let results = evaluate(&ast, &idx).unwrap();
        assert_eq!(ids(&results), vec!["http://example.org/test#trace_1"]);
    }

    #[test]
    fn single_always_true_clause_matches_all() {
        let idx = test_index(&[("1", &["a"]), ("2", &["a", "b"])]);
        let ast = parse_query(
            r#"MATCH TRACE ?t WHERE activityOccursAtMostNTimes(?t, "zzz", 99) RETURN ?t"#,
        )
        .unwrap();
        assert_eq!(evaluate(&ast, &idx).unwrap().traces.len(), 2);
    }

    #[test]
    fn witness_bindings_project_into_rows() {
        let idx = test_index(&[("1", &["a", "b", "a"])]);
        let ast = parse_query(
            r#"MATCH TRACE ?t WHERE activityOccurs(?t, "a") AS ?e RETURN ?t, ?e"#,
        )
        .unwrap();
        let results = evaluate(&ast, &idx).unwrap();
        // two distinct witnesses for `a`
        assert_eq!(results.rows.len(), 2);
        let bound: Vec<&str> = results
            .rows
            .iter()
            .map(|r| r.bindings["e"].as_str())
            .collect();
        assert_eq!(
            bound,
            vec!["http://example.org/test#1_e1", "http://example.org/test#1_e3"]
        );
    }

    #[test]
    fn type_mismatch_is_false_with_warning() {
        let idx = test_index(&[("1", &["a"])]);
        // activities have no attributes in the test index, so compare a
        // missing attribute first: false, no warning
        let ast = parse_query(
            r#"MATCH TRACE ?t
               WHERE activityOccurs(?t, "a") AS ?e
               AND attr(?e, "Age") >= 65
               RETURN ?t"#,
        )
        .unwrap();
        let results = evaluate(&ast, &idx).unwrap();
        assert!(results.traces.is_empty());
        assert!(results.warnings.is_empty());
    }

    #[test]
    fn duration_clause_compares_millis() {
        let idx = test_index(&[("1", &["a", "b"])]);
        // events are one minute apart in the test index
        let ast = parse_query(
            r#"MATCH TRACE ?t
               WHERE activityOccurs(?t, "a") AS ?x
               AND activityOccurs(?t, "b") AS ?y
               AND timeBetween(?x, ?y) = duration("PT1M")
               RETURN ?t"#,
        )
        .unwrap();
        assert_eq!(evaluate(&ast, &idx).unwrap().traces.len(), 1);
    }
}
