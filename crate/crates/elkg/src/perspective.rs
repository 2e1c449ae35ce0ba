//! Flattening an object-centric log into traces via object paths.
//!
//! A [`Perspective`] names a start object type and a path through the
//! qualified object-to-object graph. For every object of the start
//! type, [`collect`] gathers the objects reachable along the path (the
//! union of every step's frontier, so intermediate objects are kept);
//! the events linked to any collected object form one trace per start
//! object.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::iri::IriScheme;
use crate::model::OcelLog;
use crate::term::{Term, Triple};
use crate::vocab;

/// Which way a relation step traverses an o2o tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// One step of an object path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathStep {
    /// Follow o2o tuples with this qualifier, forward (start is the
    /// source) or reverse (start is the target). Qualifiers match by
    /// exact, case-sensitive string equality.
    Rel {
        direction: Direction,
        qualifier: String,
    },
    /// Alternatives, each evaluated from the same start object.
    Alt(Vec<PathStep>),
    /// A sequence of steps; each step starts from the previous step's
    /// frontier, and the result is the union of all frontiers.
    Path(Vec<PathStep>),
}

impl PathStep {
    pub fn rel(direction: Direction, qualifier: impl Into<String>) -> Result<PathStep> {
        let qualifier = qualifier.into();
        if qualifier.is_empty() {
            return Err(Error::Perspective {
                path: String::new(),
                message: "relation qualifier must be non-empty".to_owned(),
            });
        }
        Ok(PathStep::Rel {
            direction,
            qualifier,
        })
    }

    pub fn alt(steps: Vec<PathStep>) -> Result<PathStep> {
        if steps.is_empty() {
            return Err(Error::Perspective {
                path: String::new(),
                message: "alt requires at least one step".to_owned(),
            });
        }
        Ok(PathStep::Alt(steps))
    }

    pub fn path(steps: Vec<PathStep>) -> Result<PathStep> {
        if steps.is_empty() {
            return Err(Error::Perspective {
                path: String::new(),
                message: "path requires at least one step".to_owned(),
            });
        }
        Ok(PathStep::Path(steps))
    }
}

/// A start object type plus an object path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perspective {
    pub start_object_type: String,
    /// Always the `Path` variant.
    pub path: PathStep,
}

impl Perspective {
    pub fn new(start_object_type: impl Into<String>, steps: Vec<PathStep>) -> Result<Perspective> {
        let start_object_type = start_object_type.into();
        if start_object_type.is_empty() {
            return Err(Error::Perspective {
                path: "$.startObjectType".to_owned(),
                message: "start object type must be non-empty".to_owned(),
            });
        }
        Ok(Perspective {
            start_object_type,
            path: PathStep::path(steps)?,
        })
    }
}

/// The objects collected for one start object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerspectiveInstance {
    pub start_object: String,
    /// Includes the start object itself.
    pub objects: BTreeSet<String>,
}

// ---------------------------------------------------------------------
// Perspective definition files
// ---------------------------------------------------------------------

/// Parses a perspective definition document:
///
/// ```json
/// {
///   "startObjectType": "purchase_requisition",
///   "path": [
///     { "dir": "fwd", "qualifier": "quotation" },
///     { "alt": [ { "dir": "rev", "qualifier": "goods receipt" } ] }
///   ]
/// }
/// ```
///
/// Errors name the offending field with a JSON-pointer-style path.
pub fn parse_perspective(text: &str) -> Result<Perspective> {
    let doc: serde_json::Value = serde_json::from_str(text)?;
    let err = |path: &str, message: &str| Error::Perspective {
        path: path.to_owned(),
        message: message.to_owned(),
    };
    let root = doc
        .as_object()
        .ok_or_else(|| err("$", "expected an object"))?;
    let start = root
        .get("startObjectType")
        .ok_or_else(|| err("$.startObjectType", "missing"))?
        .as_str()
        .ok_or_else(|| err("$.startObjectType", "expected a string"))?;
    let steps_value = root
        .get("path")
        .ok_or_else(|| err("$.path", "missing"))?;
    let steps = parse_steps(steps_value, "$.path")?;
    Perspective::new(start, steps)
}

fn parse_steps(value: &serde_json::Value, path: &str) -> Result<Vec<PathStep>> {
    let items = value.as_array().ok_or_else(|| Error::Perspective {
        path: path.to_owned(),
        message: "expected an array of steps".to_owned(),
    })?;
    if items.is_empty() {
        return Err(Error::Perspective {
            path: path.to_owned(),
            message: "expected at least one step".to_owned(),
        });
    }
    items
        .iter()
        .enumerate()
        .map(|(i, item)| parse_step(item, &format!("{path}[{i}]")))
        .collect()
}

fn parse_step(value: &serde_json::Value, path: &str) -> Result<PathStep> {
    let err = |suffix: &str, message: &str| Error::Perspective {
        path: format!("{path}{suffix}"),
        message: message.to_owned(),
    };
    let object = value
        .as_object()
        .ok_or_else(|| err("", "expected a step object"))?;
    if object.contains_key("dir") || object.contains_key("qualifier") {
        let dir = object
            .get("dir")
            .ok_or_else(|| err(".dir", "missing"))?
            .as_str()
            .ok_or_else(|| err(".dir", "expected a string"))?;
        let direction = match dir {
            "fwd" => Direction::Forward,
            "rev" => Direction::Reverse,
            other => return Err(err(".dir", &format!("expected \"fwd\" or \"rev\", got {other:?}"))),
        };
        let qualifier = object
            .get("qualifier")
            .ok_or_else(|| err(".qualifier", "missing"))?
            .as_str()
            .ok_or_else(|| err(".qualifier", "expected a string"))?;
        if qualifier.is_empty() {
            return Err(err(".qualifier", "must be non-empty"));
        }
        PathStep::rel(direction, qualifier)
    } else if let Some(alt) = object.get("alt") {
        Ok(PathStep::Alt(parse_steps(alt, &format!("{path}.alt"))?))
    } else if let Some(nested) = object.get("path") {
        Ok(PathStep::Path(parse_steps(nested, &format!("{path}.path"))?))
    } else {
        Err(err("", "expected {dir, qualifier}, {alt: [...]}, or {path: [...]}"))
    }
}

// ---------------------------------------------------------------------
// Collection over the object graph
// ---------------------------------------------------------------------

/// Indexed form of a log's o2o relations.
pub struct ObjectGraph<'a> {
    forward: HashMap<(&'a str, &'a str), BTreeSet<&'a str>>,
    reverse: HashMap<(&'a str, &'a str), BTreeSet<&'a str>>,
    by_type: BTreeMap<&'a str, Vec<&'a str>>,
    ids: HashSet<&'a str>,
}

impl<'a> ObjectGraph<'a> {
    pub fn build(log: &'a OcelLog) -> ObjectGraph<'a> {
        let mut graph = ObjectGraph {
            forward: HashMap::new(),
            reverse: HashMap::new(),
            by_type: BTreeMap::new(),
            ids: HashSet::new(),
        };
        for object in &log.objects {
            graph.ids.insert(&object.id);
            graph
                .by_type
                .entry(object.object_type.as_str())
                .or_default()
                .push(&object.id);
            for (qualifier, target) in &object.o2o {
                graph
                    .forward
                    .entry((object.id.as_str(), qualifier.as_str()))
                    .or_default()
                    .insert(target);
                graph
                    .reverse
                    .entry((target.as_str(), qualifier.as_str()))
                    .or_default()
                    .insert(&object.id);
            }
        }
        for ids in graph.by_type.values_mut() {
            ids.sort_unstable();
        }
        graph
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    /// Object ids of one type, sorted.
    pub fn objects_of_type(&self, object_type: &str) -> &[&'a str] {
        self.by_type
            .get(object_type)
            .map_or(&[], Vec::as_slice)
    }

    /// The collected object set for a step, starting from one object.
    pub fn collect(&self, start: &str, step: &PathStep) -> BTreeSet<&'a str> {
        match step {
            PathStep::Rel {
                direction,
                qualifier,
            } => {
                let index = match direction {
                    Direction::Forward => &self.forward,
                    Direction::Reverse => &self.reverse,
                };
                index
                    .get(&(start, qualifier.as_str()))
                    .cloned()
                    .unwrap_or_default()
            }
            PathStep::Alt(steps) => steps
                .iter()
                .flat_map(|s| self.collect(start, s))
                .collect(),
            PathStep::Path(steps) => {
                let mut collected: BTreeSet<&'a str> = BTreeSet::new();
                let mut frontier: BTreeSet<&str> = BTreeSet::from([start]);
                for s in steps {
                    let next: BTreeSet<&'a str> = frontier
                        .iter()
                        .flat_map(|o| self.collect(o, s))
                        .collect();
                    collected.extend(next.iter().copied());
                    frontier = next.iter().copied().collect();
                }
                collected
            }
        }
    }
}

/// Objects reachable from `start` along `step`. Errors when the start
/// object is unknown.
pub fn collect(log: &OcelLog, start: &str, step: &PathStep) -> Result<BTreeSet<String>> {
    let graph = ObjectGraph::build(log);
    if !graph.contains(start) {
        return Err(Error::UnknownObject(start.to_owned()));
    }
    Ok(graph
        .collect(start, step)
        .into_iter()
        .map(str::to_owned)
        .collect())
}

/// One instance per object of the perspective's start type, sorted by
/// start object id. Each instance holds the start object plus every
/// collected object.
pub fn enumerate_instances(log: &OcelLog, perspective: &Perspective) -> Vec<PerspectiveInstance> {
    let graph = ObjectGraph::build(log);
    graph
        .objects_of_type(&perspective.start_object_type)
        .iter()
        .map(|start| {
            let mut objects: BTreeSet<String> = graph
                .collect(start, &perspective.path)
                .into_iter()
                .map(str::to_owned)
                .collect();
            objects.insert((*start).to_owned());
            PerspectiveInstance {
                start_object: (*start).to_owned(),
                objects,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------
// Trace materialization
// ---------------------------------------------------------------------

/// Emits the trace layer for the given instances: per instance one
/// trace node typed `tr:Trace`, membership triples for every event
/// linked to any of its objects, and the `next` chain ending at
/// `rdf:nil`. Layered over the base object-centric graph this forms the
/// flattened graph.
pub fn materialize_traces(
    log: &OcelLog,
    instances: &[PerspectiveInstance],
    scheme: &mut IriScheme,
) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    builder.declare_prefix("log", scheme.base());
    emit_trace_layer(&mut builder, log, instances, scheme)?;
    Ok(builder.freeze())
}

/// A flattened object-centric graph: base triples plus materialized
/// traces.
pub struct Flattened {
    pub graph: Graph,
    pub instances: Vec<PerspectiveInstance>,
    /// Traces emitted without any linked event. They are kept in the
    /// graph and reported here so trace counts stay auditable.
    pub empty_traces: usize,
}

/// Converts the log and layers the perspective's traces over it.
pub fn flatten(
    log: &OcelLog,
    perspective: &Perspective,
    scheme: &mut IriScheme,
) -> Result<Flattened> {
    let instances = enumerate_instances(log, perspective);
    let mut builder = GraphBuilder::new();
    builder.declare_prefix("log", scheme.base());
    crate::convert::emit_ocel_base(&mut builder, log, scheme)?;
    let empty_traces = emit_trace_layer(&mut builder, log, &instances, scheme)?;
    Ok(Flattened {
        graph: builder.freeze(),
        instances,
        empty_traces,
    })
}

fn emit_trace_layer(
    builder: &mut GraphBuilder,
    log: &OcelLog,
    instances: &[PerspectiveInstance],
    scheme: &mut IriScheme,
) -> Result<usize> {
    let known: HashSet<&str> = log.objects.iter().map(|o| o.id.as_str()).collect();
    let mut events_by_object: HashMap<&str, Vec<usize>> = HashMap::new();
    for (i, event) in log.events.iter().enumerate() {
        for (_, object) in &event.e2o {
            events_by_object.entry(object.as_str()).or_default().push(i);
        }
    }

    let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
    let tr_trace = Term::Resource(vocab::TR_TRACE.to_owned());
    let tr_in = Term::Resource(vocab::TR_IN.to_owned());
    let tr_next = Term::Resource(vocab::TR_NEXT.to_owned());
    let nil = Term::Resource(vocab::RDF_NIL.to_owned());

    let mut ordered: Vec<&PerspectiveInstance> = instances.iter().collect();
    ordered.sort_by_key(|i| &i.start_object);

    let mut empty_traces = 0;
    for instance in ordered {
        for object in &instance.objects {
            if !known.contains(object.as_str()) {
                return Err(Error::UnknownObject(object.clone()));
            }
        }
        let trace = Term::Resource(scheme.trace_iri(&instance.start_object)?);
        builder.insert(Triple::new(trace.clone(), rdf_type.clone(), tr_trace.clone())?);

        let mut event_indices: BTreeSet<usize> = BTreeSet::new();
        for object in &instance.objects {
            if let Some(indices) = events_by_object.get(object.as_str()) {
                event_indices.extend(indices.iter().copied());
            }
        }
        let mut events: Vec<&crate::model::OcelEvent> =
            event_indices.into_iter().map(|i| &log.events[i]).collect();
        events.sort_by(|a, b| (a.timestamp, &a.id).cmp(&(b.timestamp, &b.id)));

        if events.is_empty() {
            empty_traces += 1;
            continue;
        }
        let mut iris = Vec::with_capacity(events.len());
        for event in &events {
            let iri = Term::Resource(scheme.event_iri(&event.id)?);
            builder.insert(Triple::new(iri.clone(), tr_in.clone(), trace.clone())?);
            iris.push(iri);
        }
        for pair in iris.windows(2) {
            builder.insert(Triple::new(pair[0].clone(), tr_next.clone(), pair[1].clone())?);
        }
        builder.insert(Triple::new(
            iris.last().expect("non-empty").clone(),
            tr_next.clone(),
            nil.clone(),
        )?);
    }
    Ok(empty_traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttributeMap, OcelEvent, OcelObject};
    use crate::model::parse_instant;

    fn object(id: &str, object_type: &str, o2o: &[(&str, &str)]) -> OcelObject {
        OcelObject {
            id: id.to_owned(),
            object_type: object_type.to_owned(),
            attributes: AttributeMap::new(),
            o2o: o2o
                .iter()
                .map(|(q, t)| ((*q).to_owned(), (*t).to_owned()))
                .collect(),
        }
    }

    fn event(id: &str, event_type: &str, minute: i64, e2o: &[(&str, &str)]) -> OcelEvent {
        let base = parse_instant("2021-06-01T08:00:00Z").unwrap();
        OcelEvent {
            id: id.to_owned(),
            event_type: event_type.to_owned(),
            timestamp: base + chrono::Duration::minutes(minute),
            attributes: AttributeMap::new(),
            e2o: e2o
                .iter()
                .map(|(q, o)| ((*q).to_owned(), (*o).to_owned()))
                .collect(),
        }
    }

    fn rel(direction: Direction, qualifier: &str) -> PathStep {
        PathStep::rel(direction, qualifier).unwrap()
    }

    /// One object per type, o2o links as in the procure-to-pay example.
    pub(crate) fn p2p_micro_log() -> OcelLog {
        OcelLog {
            objects: vec![
                object("PR1", "purchase_requisition", &[("quotation", "Q1")]),
                object("Q1", "quotation", &[("purchase order", "PO1")]),
                object(
                    "PO1",
                    "purchase_order",
                    &[("invoice receipt", "IR1"), ("payment", "PAY1"), ("material", "MAT1")],
                ),
                object("IR1", "invoice_receipt", &[]),
                object("PAY1", "payment", &[]),
                object("GR1", "goods_receipt", &[("goods receipt", "PO1")]),
                object("MAT1", "material", &[]),
            ],
            events: vec![
                event("e1", "create_purchase_requisition", 0, &[("pr", "PR1")]),
                event("e2", "create_quotation", 10, &[("quotation", "Q1")]),
                event("e3", "create_purchase_order", 20, &[("po", "PO1")]),
                event("e4", "receive_goods", 30, &[("gr", "GR1")]),
                event("e5", "receive_invoice", 40, &[("ir", "IR1")]),
                event("e6", "make_payment", 50, &[("pay", "PAY1")]),
                event("e7", "use_material", 60, &[("mat", "MAT1")]),
            ],
        }
    }

    /// The procure-to-pay path: quotation, purchase order, then the
    /// alternatives invoice receipt / payment / reverse goods receipt.
    pub(crate) fn p2p_path() -> Vec<PathStep> {
        vec![
            rel(Direction::Forward, "quotation"),
            rel(Direction::Forward, "purchase order"),
            PathStep::alt(vec![
                rel(Direction::Forward, "invoice receipt"),
                rel(Direction::Forward, "payment"),
                rel(Direction::Reverse, "goods receipt"),
            ])
            .unwrap(),
        ]
    }

    #[test]
    fn rel_forward_and_reverse() {
        let log = p2p_micro_log();
        assert_eq!(
            collect(&log, "PR1", &rel(Direction::Forward, "quotation")).unwrap(),
            BTreeSet::from(["Q1".to_owned()])
        );
        assert_eq!(
            collect(&log, "PO1", &rel(Direction::Reverse, "goods receipt")).unwrap(),
            BTreeSet::from(["GR1".to_owned()])
        );
    }

    #[test]
    fn alt_with_no_matches_is_empty() {
        let log = p2p_micro_log();
        let step = PathStep::alt(vec![
            rel(Direction::Forward, "nope"),
            rel(Direction::Reverse, "also nope"),
        ])
        .unwrap();
        assert!(collect(&log, "PR1", &step).unwrap().is_empty());
    }

    #[test]
    fn path_unions_intermediate_frontiers() {
        let log = p2p_micro_log();
        let step = PathStep::path(vec![
            rel(Direction::Forward, "quotation"),
            rel(Direction::Forward, "purchase order"),
        ])
        .unwrap();
        assert_eq!(
            collect(&log, "PR1", &step).unwrap(),
            BTreeSet::from(["Q1".to_owned(), "PO1".to_owned()])
        );
    }

    #[test]
    fn unknown_start_is_an_error() {
        let log = p2p_micro_log();
        assert!(collect(&log, "nope", &rel(Direction::Forward, "quotation")).is_err());
    }

    #[test]
    fn instance_covers_the_six_collected_objects() {
        let log = p2p_micro_log();
        let perspective = Perspective::new("purchase_requisition", p2p_path()).unwrap();
        let instances = enumerate_instances(&log, &perspective);
        assert_eq!(instances.len(), 1);
        let expected: BTreeSet<String> = ["PR1", "Q1", "PO1", "IR1", "PAY1", "GR1"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(instances[0].objects, expected);
    }

    #[test]
    fn start_without_links_is_a_singleton_instance() {
        let mut log = p2p_micro_log();
        log.objects.push(object("PR2", "purchase_requisition", &[]));
        let perspective = Perspective::new("purchase_requisition", p2p_path()).unwrap();
        let instances = enumerate_instances(&log, &perspective);
        assert_eq!(instances.len(), 2);
        let lone = instances.iter().find(|i| i.start_object == "PR2").unwrap();
        assert_eq!(lone.objects, BTreeSet::from(["PR2".to_owned()]));
    }

    #[test]
    fn unknown_start_type_yields_no_instances() {
        let log = p2p_micro_log();
        let perspective = Perspective::new("warehouse", p2p_path()).unwrap();
        assert!(enumerate_instances(&log, &perspective).is_empty());
    }

    #[test]
    fn materialized_trace_counts() {
        // instance touching three events: 3 in, 2 internal next, 1 nil,
        // 1 type triple
        let log = OcelLog {
            objects: vec![object("A", "t", &[])],
            events: vec![
                event("e1", "x", 0, &[("q", "A")]),
                event("e2", "y", 1, &[("q", "A")]),
                event("e3", "z", 2, &[("q", "A")]),
            ],
        };
        let instance = PerspectiveInstance {
            start_object: "A".to_owned(),
            objects: BTreeSet::from(["A".to_owned()]),
        };
        let mut scheme = IriScheme::for_log_name("t");
        let graph = materialize_traces(&log, &[instance], &mut scheme).unwrap();
        assert_eq!(graph.len(), 1 + 3 + 2 + 1);
    }

    #[test]
    fn shared_event_gets_two_membership_triples() {
        let log = OcelLog {
            objects: vec![object("A", "t", &[]), object("B", "t", &[])],
            events: vec![event("e1", "x", 0, &[("q", "A"), ("q", "B")])],
        };
        let instances = vec![
            PerspectiveInstance {
                start_object: "A".to_owned(),
                objects: BTreeSet::from(["A".to_owned()]),
            },
            PerspectiveInstance {
                start_object: "B".to_owned(),
                objects: BTreeSet::from(["B".to_owned()]),
            },
        ];
        let mut scheme = IriScheme::for_log_name("t");
        let graph = materialize_traces(&log, &instances, &mut scheme).unwrap();
        let tr_in = Term::Resource(vocab::TR_IN.to_owned());
        let memberships = graph.triples_matching(None, Some(&tr_in), None);
        assert_eq!(memberships.len(), 2);
    }

    #[test]
    fn zero_event_trace_is_emitted_and_counted() {
        let log = OcelLog {
            objects: vec![object("A", "t", &[])],
            events: vec![],
        };
        let perspective = Perspective::new("t", vec![rel(Direction::Forward, "q")]).unwrap();
        let mut scheme = IriScheme::for_log_name("t");
        let flattened = flatten(&log, &perspective, &mut scheme).unwrap();
        assert_eq!(flattened.empty_traces, 1);
        let tr_trace = Term::Resource(vocab::TR_TRACE.to_owned());
        let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
        assert_eq!(flattened.graph.subjects_matching(&rdf_type, &tr_trace).len(), 1);
    }

    #[test]
    fn instance_with_unknown_object_is_an_error() {
        let log = OcelLog {
            objects: vec![],
            events: vec![],
        };
        let instance = PerspectiveInstance {
            start_object: "ghost".to_owned(),
            objects: BTreeSet::from(["ghost".to_owned()]),
        };
        let mut scheme = IriScheme::for_log_name("t");
        assert!(materialize_traces(&log, &[instance], &mut scheme).is_err());
    }

    #[test]
    fn perspective_json_round_trip_of_shapes() {
        let text = r#"{
            "startObjectType": "purchase_requisition",
            "path": [
                { "dir": "fwd", "qualifier": "quotation" },
                { "dir": "fwd", "qualifier": "purchase order" },
                { "alt": [
                    { "dir": "fwd", "qualifier": "invoice receipt" },
                    { "dir": "fwd", "qualifier": "payment" },
                    { "dir": "rev", "qualifier": "goods receipt" }
                ] }
            ]
        }"#;
        let parsed = parse_perspective(text).unwrap();
        let expected = Perspective::new("purchase_requisition", p2p_path()).unwrap();
        assert_eq!(parsed, expected);
    }

    #[test]
    fn perspective_json_errors_name_the_field() {
        let bad = r#"{ "startObjectType": "x", "path": [ { "dir": "up", "qualifier": "q" } ] }"#;
        let err = parse_perspective(bad).unwrap_err().to_string();
        assert!(err.contains("$.path[0].dir"), "{err}");
        let missing = r#"{ "path": [] }"#;
        let err = parse_perspective(missing).unwrap_err().to_string();
        assert!(err.contains("startObjectType"), "{err}");
    }
}
