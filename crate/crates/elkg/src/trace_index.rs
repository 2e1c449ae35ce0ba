//! Per-trace event index reconstructed from a trace graph.
//!
//! The index rebuilds each trace's ordered event sequence by following
//! `tr:next` chains between the trace's members and validates the chain
//! while doing so: it must be acyclic, cover every member exactly once,
//! and terminate at `rdf:nil`. Traces flattened from an object-centric
//! log may share events, so chain edges are restricted to the trace's
//! own member set; where a shared event carries several outgoing edges
//! into the same trace, the earlier event under (timestamp, IRI) is the
//! chain successor.

use std::collections::{BTreeMap, HashMap, HashSet};

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::model::{parse_instant, AttributeMap, AttributeValue};
use crate::term::{local_name_of, Term};
use crate::vocab;

/// One event of an indexed trace.
#[derive(Debug, Clone)]
pub struct IndexedEvent {
    /// The event's IRI.
    pub id: String,
    /// Local name of the activity resource.
    pub activity: String,
    pub timestamp: DateTime<Utc>,
    pub attributes: AttributeMap,
}

/// One trace: events in chain order plus an activity-position lookup.
#[derive(Debug, Clone, Default)]
pub struct TraceData {
    ordered: Vec<IndexedEvent>,
    /// Activity local name to sorted 1-based positions.
    positions: HashMap<String, Vec<usize>>,
}

impl TraceData {
    fn from_events(ordered: Vec<IndexedEvent>) -> TraceData {
        let mut positions: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, ev) in ordered.iter().enumerate() {
            positions.entry(ev.activity.clone()).or_default().push(i + 1);
        }
        TraceData { ordered, positions }
    }

    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }

    pub fn events(&self) -> &[IndexedEvent] {
        &self.ordered
    }

    /// The event at a 1-based position.
    pub fn event(&self, position: usize) -> Option<&IndexedEvent> {
        self.ordered.get(position.checked_sub(1)?)
    }

    /// Sorted 1-based positions of an activity (by local name).
    pub fn positions(&self, activity: &str) -> &[usize] {
        self.positions.get(activity).map_or(&[], Vec::as_slice)
    }

    pub fn occurs(&self, activity: &str) -> bool {
        !self.positions(activity).is_empty()
    }

    pub fn occurrence_count(&self, activity: &str) -> usize {
        self.positions(activity).len()
    }

    pub fn first_activity(&self) -> Option<&str> {
        self.ordered.first().map(|e| e.activity.as_str())
    }

    pub fn last_activity(&self) -> Option<&str> {
        self.ordered.last().map(|e| e.activity.as_str())
    }

    /// All adjacent position pairs (i, i+1) whose activities are (a, b).
    pub fn directly_follow_witnesses(&self, a: &str, b: &str) -> Vec<(usize, usize)> {
        self.positions(a)
            .iter()
            .filter(|&&i| {
                self.ordered
                    .get(i) // i is 1-based, so index i is the following event
                    .is_some_and(|next| next.activity == b)
            })
            .map(|&i| (i, i + 1))
            .collect()
    }

    /// Signed duration in milliseconds from the event at `from` to the
    /// event at `to` (1-based positions).
    pub fn time_between(&self, from: usize, to: usize) -> Option<i64> {
        let a = self.event(from)?;
        let b = self.event(to)?;
        Some((b.timestamp - a.timestamp).num_milliseconds())
    }
}

/// All traces of a graph, indexed and validated.
#[derive(Debug, Default)]
pub struct TraceIndex {
    traces: BTreeMap<String, TraceData>,
}

impl TraceIndex {
    /// Indexes every `tr:Trace`-typed node of the graph.
    pub fn build(graph: &Graph) -> Result<TraceIndex> {
        let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
        let tr_trace = Term::Resource(vocab::TR_TRACE.to_owned());
        let tr_in = Term::Resource(vocab::TR_IN.to_owned());

        let mut traces = BTreeMap::new();
        for trace_term in graph.subjects_matching(&rdf_type, &tr_trace) {
            let trace_iri = match trace_term {
                Term::Resource(iri) => iri.clone(),
                other => {
                    return Err(Error::TraceStructure {
                        trace: format!("{other:?}"),
                        message: "trace node is not a resource".to_owned(),
                    })
                }
            };
            let members: Vec<&Term> = graph.subjects_matching(&tr_in, trace_term);
            let ordered = order_members(graph, &trace_iri, &members)?;
            traces.insert(trace_iri, TraceData::from_events(ordered));
        }
        Ok(TraceIndex { traces })
    }

    pub fn trace_ids(&self) -> Vec<&str> {
        self.traces.keys().map(String::as_str).collect()
    }

    pub fn trace_count(&self) -> usize {
        self.traces.len()
    }

    pub fn trace(&self, id: &str) -> Result<&TraceData> {
        self.traces
            .get(id)
            .ok_or_else(|| Error::UnknownTrace(id.to_owned()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &TraceData)> {
        self.traces.iter().map(|(k, v)| (k.as_str(), v))
    }
}

fn order_members(graph: &Graph, trace_iri: &str, members: &[&Term]) -> Result<Vec<IndexedEvent>> {
    if members.is_empty() {
        return Ok(Vec::new());
    }
    let structure_err = |message: String| Error::TraceStructure {
        trace: trace_iri.to_owned(),
        message,
    };

    let mut meta: HashMap<&str, IndexedEvent> = HashMap::new();
    for member in members {
        let iri = member.iri().ok_or_else(|| {
            structure_err(format!("trace member {member:?} is not a resource"))
        })?;
        meta.insert(iri, read_event(graph, trace_iri, member, iri)?);
    }

    let tr_next = Term::Resource(vocab::TR_NEXT.to_owned());
    let nil = Term::Resource(vocab::RDF_NIL.to_owned());
    let member_set: HashSet<&str> = meta.keys().copied().collect();

    // Chain start: the member no other member points at.
    let mut has_incoming: HashSet<&str> = HashSet::new();
    for member in members {
        for target in graph.objects_matching(member, &tr_next) {
            if let Some(iri) = target.iri() {
                if member_set.contains(iri) {
                    has_incoming.insert(iri);
                }
            }
        }
    }
    let mut starts: Vec<&str> = member_set
        .iter()
        .filter(|m| !has_incoming.contains(**m))
        .copied()
        .collect();
    starts.sort();
    let start = match starts.as_slice() {
        [one] => *one,
        [] => return Err(structure_err("next chain has no start (cycle)".to_owned())),
        many => {
            return Err(structure_err(format!(
                "next chain has {} disconnected starts",
                many.len()
            )))
        }
    };

    let mut ordered: Vec<IndexedEvent> = Vec::with_capacity(members.len());
    let mut visited: HashSet<&str> = HashSet::new();
    let mut current = start;
    loop {
        visited.insert(current);
        ordered.push(meta[current].clone());

        let current_term = Term::Resource(current.to_owned());
        let targets = graph.objects_matching(&current_term, &tr_next);
        let mut candidates: Vec<&str> = targets
            .iter()
            .filter_map(|t| t.iri())
            .filter(|iri| member_set.contains(iri) && !visited.contains(iri))
            .collect();
        if candidates.is_empty() {
            if !targets.iter().any(|t| **t == nil) {
                return Err(structure_err(format!(
                    "next chain breaks at {current} without reaching rdf:nil"
                )));
            }
            break;
        }
        // Shared events may fan out into several traces; the successor
        // within this trace is the earliest remaining member.
        candidates.sort_by(|a, b| {
            let (ta, tb) = (&meta[*a].timestamp, &meta[*b].timestamp);
            (ta, *a).cmp(&(tb, *b))
        });
        current = candidates[0];
    }

    if ordered.len() != members.len() {
        return Err(structure_err(format!(
            "next chain visits {} of {} members",
            ordered.len(),
            members.len()
        )));
    }
    Ok(ordered)
}

fn read_event(graph: &Graph, trace_iri: &str, event: &Term, iri: &str) -> Result<IndexedEvent> {
    let structure_err = |message: String| Error::TraceStructure {
        trace: trace_iri.to_owned(),
        message,
    };
    let tr_activity = Term::Resource(vocab::TR_ACTIVITY.to_owned());
    let tr_timestamp = Term::Resource(vocab::TR_TIMESTAMP.to_owned());

    let activities = graph.objects_matching(event, &tr_activity);
    let activity = match activities.as_slice() {
        [Term::Resource(a)] => local_name_of(a).to_owned(),
        [] => return Err(structure_err(format!("event {iri} has no activity"))),
        [other] => {
            return Err(structure_err(format!(
                "event {iri} activity {other:?} is not a resource"
            )))
        }
        _ => return Err(structure_err(format!("event {iri} has several activities"))),
    };

    let timestamps = graph.objects_matching(event, &tr_timestamp);
    let timestamp = match timestamps.as_slice() {
        [Term::Literal { lexical, .. }] => parse_instant(lexical)?,
        [] => return Err(structure_err(format!("event {iri} has no timestamp"))),
        _ => return Err(structure_err(format!("event {iri} has several timestamps"))),
    };

    let mut attributes = AttributeMap::new();
    for triple in graph.triples_matching(Some(event), None, None) {
        let predicate = triple.predicate.iri().unwrap_or_default();
        if matches!(
            predicate,
            vocab::TR_IN | vocab::TR_NEXT | vocab::TR_ACTIVITY | vocab::TR_TIMESTAMP
                | vocab::RDF_TYPE
        ) {
            continue;
        }
        if let Term::Literal {
            lexical, datatype, ..
        } = &triple.object
        {
            attributes.insert(
                local_name_of(predicate).to_owned(),
                decode_literal(lexical, datatype),
            );
        }
    }

    Ok(IndexedEvent {
        id: iri.to_owned(),
        activity,
        timestamp,
        attributes,
    })
}

/// Maps a typed literal back to an attribute value; lexical forms that
/// do not parse under their datatype fall back to plain strings.
fn decode_literal(lexical: &str, datatype: &str) -> AttributeValue {
    match datatype {
        vocab::XSD_BOOLEAN => match lexical {
            "true" => AttributeValue::Boolean(true),
            "false" => AttributeValue::Boolean(false),
            _ => AttributeValue::String(lexical.to_owned()),
        },
        vocab::XSD_INTEGER => lexical
            .parse::<i64>()
            .map(AttributeValue::Integer)
            .unwrap_or_else(|_| AttributeValue::String(lexical.to_owned())),
        vocab::XSD_DECIMAL => lexical
            .parse::<f64>()
            .map(AttributeValue::Decimal)
            .unwrap_or_else(|_| AttributeValue::String(lexical.to_owned())),
        vocab::XSD_DATE_TIME => parse_instant(lexical)
            .map(AttributeValue::Instant)
            .unwrap_or_else(|_| AttributeValue::String(lexical.to_owned())),
        _ => AttributeValue::String(lexical.to_owned()),
    }
}

/// Builds an index directly from (case id, activity labels) pairs;
/// events get synthetic ids and minute-spaced timestamps.
#[cfg(test)]
pub fn test_index(traces: &[(&str, &[&str])]) -> TraceIndex {
    use crate::iri::sanitize_local_name;
    let base = parse_instant("2020-01-01T00:00:00Z").unwrap();
    let mut out = BTreeMap::new();
    for (case, labels) in traces {
        let ordered: Vec<IndexedEvent> = labels
            .iter()
            .enumerate()
            .map(|(i, label)| IndexedEvent {
                id: format!("http://example.org/test#{case}_e{}", i + 1),
                activity: sanitize_local_name(label),
                timestamp: base + chrono::Duration::minutes(i as i64),
                attributes: AttributeMap::new(),
            })
            .collect();
        out.insert(
            format!("http://example.org/test#trace_{case}"),
            TraceData::from_events(ordered),
        );
    }
    TraceIndex { traces: out }
}
