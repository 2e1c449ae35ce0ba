//! Independent reference evaluation for tests.
//!
//! Everything here works directly on the in-memory log models and is a
//! literal transcription of the set definitions the trace constraints,
//! the object-path `collect`, and conjunctive query matching are
//! specified by. None of the indexed engines' code is reused: the
//! constraint checks quantify over events with an explicit order
//! predicate, `collect_objects` expands frontiers by scanning the raw
//! relation lists, and `query_matches` enumerates every assignment of
//! events to query variables. Activity labels are compared verbatim.

use std::collections::BTreeSet;

use crate::constraints::Constraint;
use crate::error::{Error, Result};
use crate::model::{parse_instant, AttributeValue, CaseLog, Event, OcelLog, Trace};
use crate::perspective::{Direction, PathStep};
use crate::query::{Clause, Comparator, ConstraintClause, QueryAst, QueryLiteral};

/// Strict total order on events: timestamp, then id.
fn precedes(a: &Event, b: &Event) -> bool {
    (a.timestamp, &a.id) < (b.timestamp, &b.id)
}

/// The sequential relation: `a` before `b` with no event in between.
fn directly_precedes(trace: &Trace, a: &Event, b: &Event) -> bool {
    precedes(a, b)
        && !trace
            .events
            .iter()
            .any(|mid| precedes(a, mid) && precedes(mid, b))
}

/// Case ids of the traces a constraint matches.
pub fn constraint_matches(log: &CaseLog, constraint: &Constraint) -> BTreeSet<String> {
    log.traces
        .iter()
        .filter(|t| trace_satisfies(t, constraint))
        .map(|t| t.case_id.clone())
        .collect()
}

/// Direct transcription of the constraint set definitions on one trace.
pub fn trace_satisfies(trace: &Trace, constraint: &Constraint) -> bool {
    let occurs = |a: &String| trace.events.iter().any(|e| &e.activity == a);
    match constraint {
        Constraint::ActivityOccurs(a) => occurs(a),
        Constraint::AllActivitiesOccur(set) => set.iter().all(occurs),
        Constraint::AnyActivityOccurs(set) => set.iter().any(occurs),
        Constraint::ActivityOccursAtLeastNTimes(a, k) => {
            trace.events.iter().filter(|e| &e.activity == a).count() >= *k
        }
        Constraint::ActivityOccursAtMostNTimes(a, k) => {
            trace.events.iter().filter(|e| &e.activity == a).count() <= *k
        }
        Constraint::ActivityDoesNotOccur(a) => !occurs(a),
        Constraint::ActivitiesCoOccurOrNoneOccurs(set) => {
            set.iter().all(occurs) || set.iter().all(|a| !occurs(a))
        }
        Constraint::ActivitiesDoNotCoOccur(set) => !set.iter().all(occurs),
        Constraint::ActivityOccursAsStart(a) => trace
            .events
            .iter()
            .any(|e| &e.activity == a && !trace.events.iter().any(|e0| precedes(e0, e))),
        Constraint::ActivityOccursAsEnd(a) => trace
            .events
            .iter()
            .any(|e| &e.activity == a && !trace.events.iter().any(|en| precedes(e, en))),
        Constraint::ActivitiesDirectlyFollow(a, b) => trace.events.iter().any(|ea| {
            &ea.activity == a
                && trace
                    .events
                    .iter()
                    .any(|eb| &eb.activity == b && directly_precedes(trace, ea, eb))
        }),
        Constraint::ActivitiesEventuallyFollow(a, b) => trace.events.iter().any(|ea| {
            &ea.activity == a
                && trace
                    .events
                    .iter()
                    .any(|eb| &eb.activity == b && precedes(ea, eb))
        }),
        Constraint::ActivitiesAlwaysPrecede(first, second) => {
            first.iter().all(occurs)
                && second.iter().all(occurs)
                && trace
                    .events
                    .iter()
                    .filter(|ea| first.contains(&ea.activity))
                    .all(|ea| {
                        trace
                            .events
                            .iter()
                            .filter(|eb| second.contains(&eb.activity))
                            .all(|eb| precedes(ea, eb))
                    })
        }
    }
}

/// Exhaustive frontier expansion of an object path, scanning the raw
/// o2o lists (no index, no shared code with the perspective engine).
pub fn collect_objects(log: &OcelLog, start: &str, step: &PathStep) -> Result<BTreeSet<String>> {
    if log.object(start).is_none() {
        return Err(Error::UnknownObject(start.to_owned()));
    }
    Ok(expand(log, start, step))
}

fn expand(log: &OcelLog, start: &str, step: &PathStep) -> BTreeSet<String> {
    match step {
        PathStep::Rel {
            direction: Direction::Forward,
            qualifier,
        } => match log.object(start) {
            Some(object) => object
                .o2o
                .iter()
                .filter(|(q, _)| q == qualifier)
                .map(|(_, target)| target.clone())
                .collect(),
            None => BTreeSet::new(),
        },
        PathStep::Rel {
            direction: Direction::Reverse,
            qualifier,
        } => log
            .objects
            .iter()
            .filter(|o| {
                o.o2o
                    .iter()
                    .any(|(q, target)| q == qualifier && target == start)
            })
            .map(|o| o.id.clone())
            .collect(),
        PathStep::Alt(steps) => steps.iter().flat_map(|s| expand(log, start, s)).collect(),
        PathStep::Path(steps) => {
            let mut collected = BTreeSet::new();
            let mut frontier: BTreeSet<String> = BTreeSet::from([start.to_owned()]);
            for s in steps {
                let next: BTreeSet<String> = frontier
                    .iter()
                    .flat_map(|o| expand(log, o, s))
                    .collect();
                collected.extend(next.iter().cloned());
                frontier = next;
            }
            collected
        }
    }
}

/// Case ids of the traces a query matches: for every trace, every
/// assignment of events to the query's event variables is enumerated
/// and each clause checked directly on the model.
pub fn query_matches(log: &CaseLog, ast: &QueryAst) -> BTreeSet<String> {
    let variables: Vec<&str> = ast
        .clauses
        .iter()
        .filter_map(|c| match c {
            Clause::Constraint(cc) => Some(cc.binds.iter().map(String::as_str)),
            _ => None,
        })
        .flatten()
        .collect();

    log.traces
        .iter()
        .filter(|trace| trace_matches_query(trace, ast, &variables))
        .map(|t| t.case_id.clone())
        .collect()
}

fn trace_matches_query(trace: &Trace, ast: &QueryAst, variables: &[&str]) -> bool {
    let n = trace.events.len();
    if variables.is_empty() {
        return check_all_clauses(trace, ast, variables, &[]);
    }
    if n == 0 {
        return false;
    }
    // odometer over all |events|^|variables| assignments
    let mut assignment = vec![0usize; variables.len()];
    loop {
        if check_all_clauses(trace, ast, variables, &assignment) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == assignment.len() {
                return false;
            }
            assignment[i] += 1;
            if assignment[i] < n {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

fn lookup<'t>(
    trace: &'t Trace,
    variables: &[&str],
    assignment: &[usize],
    var: &str,
) -> Option<&'t Event> {
    let slot = variables.iter().position(|v| *v == var)?;
    trace.events.get(*assignment.get(slot)?)
}

fn check_all_clauses(
    trace: &Trace,
    ast: &QueryAst,
    variables: &[&str],
    assignment: &[usize],
) -> bool {
    ast.clauses.iter().all(|clause| match clause {
        Clause::Constraint(cc) => check_constraint_clause(trace, cc, variables, assignment),
        Clause::Attribute(ac) => {
            match lookup(trace, variables, assignment, &ac.event_var)
                .and_then(|e| e.attributes.get(&ac.attribute))
            {
                Some(value) => compare_attribute(value, ac.comparator, &ac.literal),
                None => false,
            }
        }
        Clause::Duration(dc) => {
            let from = lookup(trace, variables, assignment, &dc.from_var);
            let to = lookup(trace, variables, assignment, &dc.to_var);
            match (from, to) {
                (Some(a), Some(b)) => {
                    let millis = (b.timestamp - a.timestamp).num_milliseconds();
                    dc.comparator.apply(&millis, &dc.duration_millis)
                }
                _ => false,
            }
        }
    })
}

fn check_constraint_clause(
    trace: &Trace,
    clause: &ConstraintClause,
    variables: &[&str],
    assignment: &[usize],
) -> bool {
    if clause.binds.is_empty() {
        return trace_satisfies(trace, &clause.constraint);
    }
    let bound: Vec<&Event> = match clause
        .binds
        .iter()
        .map(|v| lookup(trace, variables, assignment, v))
        .collect::<Option<Vec<_>>>()
    {
        Some(events) => events,
        None => return false,
    };
    match (&clause.constraint, bound.as_slice()) {
        (Constraint::ActivityOccurs(a), [e]) => &e.activity == a,
        (Constraint::ActivityOccursAsStart(a), [e]) => {
            &e.activity == a && !trace.events.iter().any(|e0| precedes(e0, e))
        }
        (Constraint::ActivityOccursAsEnd(a), [e]) => {
            &e.activity == a && !trace.events.iter().any(|en| precedes(e, en))
        }
        (Constraint::ActivitiesDirectlyFollow(a, b), [ea]) => {
            &ea.activity == a
                && trace
                    .events
                    .iter()
                    .any(|eb| &eb.activity == b && directly_precedes(trace, ea, eb))
        }
        (Constraint::ActivitiesDirectlyFollow(a, b), [ea, eb]) => {
            &ea.activity == a && &eb.activity == b && directly_precedes(trace, ea, eb)
        }
        (Constraint::ActivitiesEventuallyFollow(a, b), [ea]) => {
            &ea.activity == a
                && trace
                    .events
                    .iter()
                    .any(|eb| &eb.activity == b && precedes(ea, eb))
        }
        (Constraint::ActivitiesEventuallyFollow(a, b), [ea, eb]) => {
            &ea.activity == a && &eb.activity == b && precedes(ea, eb)
        }
        _ => false,
    }
}

/// The attribute comparison typing rules, implemented for the oracle:
/// numeric comparisons need two numbers, booleans and strings compare
/// only under (in)equality, instants compare against parseable instant
/// strings; anything else is a type mismatch and therefore false.
pub fn compare_attribute(value: &AttributeValue, cmp: Comparator, literal: &QueryLiteral) -> bool {
    match (value, literal) {
        (AttributeValue::Integer(x), QueryLiteral::Integer(y)) => cmp.apply(x, y),
        (AttributeValue::Integer(x), QueryLiteral::Decimal(y)) => cmp.apply(&(*x as f64), y),
        (AttributeValue::Decimal(x), QueryLiteral::Integer(y)) => cmp.apply(x, &(*y as f64)),
        (AttributeValue::Decimal(x), QueryLiteral::Decimal(y)) => cmp.apply(x, y),
        (AttributeValue::Boolean(x), QueryLiteral::Boolean(y)) => {
            cmp.is_equality() && cmp.apply(x, y)
        }
        (AttributeValue::String(x), QueryLiteral::String(y)) => {
            cmp.is_equality() && cmp.apply(x, y)
        }
        (AttributeValue::Instant(x), QueryLiteral::String(y)) => match parse_instant(y) {
            Ok(instant) => cmp.apply(x, &instant),
            Err(_) => false,
        },
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AttributeMap;

    fn trace(case: &str, activities: &[&str]) -> Trace {
        let base = parse_instant("2020-01-01T00:00:00Z").unwrap();
        Trace {
            case_id: case.to_owned(),
            events: activities
                .iter()
                .enumerate()
                .map(|(i, a)| Event {
                    id: format!("e{}", i + 1),
                    activity: (*a).to_owned(),
                    timestamp: base + chrono::Duration::minutes(i as i64),
                    attributes: AttributeMap::new(),
                })
                .collect(),
        }
    }

    fn two_trace_log() -> CaseLog {
        CaseLog {
            traces: vec![trace("1", &["a", "b"]), trace("2", &["b", "c"])],
        }
    }

    #[test]
    fn occurrence_comprehensions() {
        let log = two_trace_log();
        let ids = |c: &Constraint| constraint_matches(&log, c);
        assert_eq!(
            ids(&Constraint::activity_occurs("a")),
            BTreeSet::from(["1".to_owned()])
        );
        assert_eq!(
            ids(&Constraint::does_not_occur("a")),
            BTreeSet::from(["2".to_owned()])
        );
        assert_eq!(
            ids(&Constraint::any_activity_occurs(vec!["c".to_owned()])),
            BTreeSet::from(["2".to_owned()])
        );
    }

    #[test]
    fn sequential_comprehensions() {
        let t = trace("1", &["a", "b", "a", "c"]);
        assert!(trace_satisfies(
            &t,
            &Constraint::directly_follow("a", "b")
        ));
        assert!(!trace_satisfies(
            &t,
            &Constraint::directly_follow("b", "c")
        ));
        assert!(trace_satisfies(
            &t,
            &Constraint::eventually_follow("b", "a")
        ));
        assert!(!trace_satisfies(
            &t,
            &Constraint::eventually_follow("c", "a")
        ));
        assert!(trace_satisfies(
            &t,
            &Constraint::always_precede(vec!["a".to_owned()], vec!["c".to_owned()]).unwrap()
        ));
        assert!(!trace_satisfies(
            &t,
            &Constraint::always_precede(vec!["a".to_owned()], vec!["b".to_owned()]).unwrap()
        ));
    }

    #[test]
    fn collect_scans_relations() {
        use crate::model::{OcelObject, OcelLog};
        let object = |id: &str, o2o: &[(&str, &str)]| OcelObject {
            id: id.to_owned(),
            object_type: "t".to_owned(),
            attributes: AttributeMap::new(),
            o2o: o2o
                .iter()
                .map(|(q, t)| ((*q).to_owned(), (*t).to_owned()))
                .collect(),
        };
        let log = OcelLog {
            events: vec![],
            objects: vec![
                object("PR1", &[("quotation", "Q1")]),
                object("Q1", &[("purchase order", "PO1")]),
                object("PO1", &[]),
                object("GR1", &[("goods receipt", "PO1")]),
            ],
        };
        let rel = |dir, q: &str| PathStep::Rel {
            direction: dir,
            qualifier: q.to_owned(),
        };
        // forward step
        assert_eq!(
            collect_objects(&log, "PR1", &rel(Direction::Forward, "quotation")).unwrap(),
            BTreeSet::from(["Q1".to_owned()])
        );
        // reverse step
        assert_eq!(
            collect_objects(&log, "PO1", &rel(Direction::Reverse, "goods receipt")).unwrap(),
            BTreeSet::from(["GR1".to_owned()])
        );
        // empty o2o yields nothing for any rel
        assert!(collect_objects(&log, "PO1", &rel(Direction::Forward, "quotation"))
            .unwrap()
            .is_empty());
        // alt of identical steps equals the single step
        let alt = PathStep::Alt(vec![
            rel(Direction::Forward, "quotation"),
            rel(Direction::Forward, "quotation"),
        ]);
        assert_eq!(
            collect_objects(&log, "PR1", &alt).unwrap(),
            collect_objects(&log, "PR1", &rel(Direction::Forward, "quotation")).unwrap()
        );
        // path unions every frontier
        let path = PathStep::Path(vec![
            rel(Direction::Forward, "quotation"),
            rel(Direction::Forward, "purchase order"),
        ]);
        assert_eq!(
            collect_objects(&log, "PR1", &path).unwrap(),
            BTreeSet::from(["Q1".to_owned(), "PO1".to_owned()])
        );
        assert!(collect_objects(&log, "missing", &path).is_err());
    }

    #[test]
    fn attribute_typing_rules() {
        use AttributeValue as V;
        use QueryLiteral as L;
        assert!(compare_attribute(&V::Integer(70), Comparator::Ge, &L::Integer(65)));
        assert!(compare_attribute(&V::Decimal(4.2), Comparator::Lt, &L::Integer(5)));
        assert!(compare_attribute(&V::Boolean(true), Comparator::Eq, &L::Boolean(true)));
        // ordered comparison on booleans and strings is a mismatch
        assert!(!compare_attribute(&V::Boolean(true), Comparator::Gt, &L::Boolean(false)));
        assert!(!compare_attribute(
            &V::String("x".into()),
            Comparator::Lt,
            &L::String("y".into())
        ));
        // instants compare against parseable instant strings
        let ts = parse_instant("2020-01-02T00:00:00Z").unwrap();
        assert!(compare_attribute(
            &V::Instant(ts),
            Comparator::Gt,
            &L::String("2020-01-01T00:00:00Z".into())
        ));
        assert!(!compare_attribute(&V::Instant(ts), Comparator::Gt, &L::Integer(5)));
    }
}
