//! Shared test-corpus generators: randomized logs, object graphs, and
//! object paths with fixed-seed determinism.

#![allow(dead_code)]

use std::collections::BTreeSet;

use chrono::{Duration, TimeZone, Utc};
use rand::rngs::StdRng;
use rand::Rng;

use elkg::model::AttributeMap;
use elkg::perspective::{Direction, PathStep};
use elkg::{
    AttributeValue, CaseLog, Constraint, Event, IriScheme, OcelEvent, OcelLog, OcelObject, Trace,
    TraceIndex,
};

pub const ALPHABET: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

pub fn base_time() -> chrono::DateTime<Utc> {
    Utc.with_ymd_and_hms(2020, 1, 1, 0, 0, 0).unwrap()
}

/// A random case log. Timestamps are drawn from a small window so ties
/// are common; empty traces occur.
pub fn random_case_log(rng: &mut StdRng, max_traces: usize, max_events: usize) -> CaseLog {
    let trace_count = rng.gen_range(0..=max_traces);
    let mut event_counter = 0usize;
    let traces = (0..trace_count)
        .map(|t| {
            let event_count = rng.gen_range(0..=max_events);
            let mut trace = Trace {
                case_id: format!("c{t}"),
                events: (0..event_count)
                    .map(|_| {
                        event_counter += 1;
                        let mut attributes = AttributeMap::new();
                        if rng.gen_bool(0.5) {
                            attributes.insert(
                                "Age".to_owned(),
                                AttributeValue::Integer(rng.gen_range(0..100)),
                            );
                        }
                        if rng.gen_bool(0.3) {
                            attributes.insert(
                                "flag".to_owned(),
                                AttributeValue::Boolean(rng.gen_bool(0.5)),
                            );
                        }
                        Event {
                            id: format!("e{event_counter}"),
                            activity: ALPHABET[rng.gen_range(0..ALPHABET.len())].to_owned(),
                            timestamp: base_time()
                                + Duration::minutes(rng.gen_range(0..(max_events as i64 * 2 + 1))),
                            attributes,
                        }
                    })
                    .collect(),
            };
            trace.sort_events();
            trace
        })
        .collect();
    CaseLog { traces }
}

/// A random constraint with arguments over the test alphabet.
pub fn random_constraint(rng: &mut StdRng) -> Constraint {
    let activity = |rng: &mut StdRng| ALPHABET[rng.gen_range(0..ALPHABET.len())].to_owned();
    let set = |rng: &mut StdRng| -> Vec<String> {
        let size = rng.gen_range(1..=3);
        let mut set = BTreeSet::new();
        while set.len() < size {
            set.insert(activity(rng));
        }
        set.into_iter().collect()
    };
    match rng.gen_range(0..13) {
        0 => Constraint::activity_occurs(activity(rng)),
        1 => Constraint::all_activities_occur(set(rng)).unwrap(),
        2 => Constraint::any_activity_occurs(set(rng)),
        3 => Constraint::at_least(activity(rng), rng.gen_range(1..=3)).unwrap(),
        4 => Constraint::at_most(activity(rng), rng.gen_range(0..=3)),
        5 => Constraint::does_not_occur(activity(rng)),
        6 => Constraint::co_occur_or_none(set(rng)).unwrap(),
        7 => Constraint::do_not_co_occur(set(rng)).unwrap(),
        8 => Constraint::occurs_as_start(activity(rng)),
        9 => Constraint::occurs_as_end(activity(rng)),
        10 => Constraint::directly_follow(activity(rng), activity(rng)),
        11 => Constraint::eventually_follow(activity(rng), activity(rng)),
        _ => Constraint::always_precede(set(rng), set(rng)).unwrap(),
    }
}

/// All thirteen constraint shapes, with arguments drawn by `seed_args`.
pub fn constraints_of_every_kind(rng: &mut StdRng) -> Vec<Constraint> {
    let activity = |rng: &mut StdRng| ALPHABET[rng.gen_range(0..ALPHABET.len())].to_owned();
    let set = |rng: &mut StdRng| -> Vec<String> {
        let size = rng.gen_range(1..=3);
        let mut set = BTreeSet::new();
        while set.len() < size {
            set.insert(activity(rng));
        }
        set.into_iter().collect()
    };
    vec![
        Constraint::activity_occurs(activity(rng)),
        Constraint::all_activities_occur(set(rng)).unwrap(),
        Constraint::any_activity_occurs(set(rng)),
        Constraint::at_least(activity(rng), rng.gen_range(1..=3)).unwrap(),
        Constraint::at_most(activity(rng), rng.gen_range(0..=3)),
        Constraint::does_not_occur(activity(rng)),
        Constraint::co_occur_or_none(set(rng)).unwrap(),
        Constraint::do_not_co_occur(set(rng)).unwrap(),
        Constraint::occurs_as_start(activity(rng)),
        Constraint::occurs_as_end(activity(rng)),
        Constraint::directly_follow(activity(rng), activity(rng)),
        Constraint::eventually_follow(activity(rng), activity(rng)),
        Constraint::always_precede(set(rng), set(rng)).unwrap(),
    ]
}

/// Converts and indexes a case log, returning the scheme for id mapping.
pub fn index_of(log: &CaseLog) -> (TraceIndex, IriScheme) {
    let mut scheme = IriScheme::for_log_name("gen");
    let graph = elkg::ccel_to_elkg(log, &mut scheme).expect("generated logs convert");
    let index = TraceIndex::build(&graph).expect("generated graphs index");
    (index, scheme)
}

/// Maps model-side case ids to graph-side trace IRIs.
pub fn trace_iris(scheme: &mut IriScheme, case_ids: &BTreeSet<String>) -> BTreeSet<String> {
    case_ids
        .iter()
        .map(|c| scheme.trace_iri(c).expect("minted during conversion"))
        .collect()
}

pub const QUALIFIERS: [&str; 4] = ["q0", "q1", "q2", "q3"];

/// A random object-centric log: up to `max_objects` objects of three
/// types with random qualified o2o tuples; no events.
pub fn random_object_log(rng: &mut StdRng, max_objects: usize, max_o2o: usize) -> OcelLog {
    let object_count = rng.gen_range(1..=max_objects.max(1));
    let mut objects: Vec<OcelObject> = (0..object_count)
        .map(|i| OcelObject {
            id: format!("o{i}"),
            object_type: format!("t{}", i % 3),
            attributes: AttributeMap::new(),
            o2o: Vec::new(),
        })
        .collect();
    let o2o_count = rng.gen_range(0..=max_o2o);
    for _ in 0..o2o_count {
        let source = rng.gen_range(0..object_count);
        let target = format!("o{}", rng.gen_range(0..object_count));
        let qualifier = QUALIFIERS[rng.gen_range(0..QUALIFIERS.len())].to_owned();
        objects[source].o2o.push((qualifier, target));
    }
    OcelLog {
        events: Vec::new(),
        objects,
    }
}

/// A random object-centric log with events: objects as in
/// [`random_object_log`], plus events carrying 1..=3 qualified links to
/// random objects (duplicate tuples allowed on purpose).
pub fn random_ocel_log(rng: &mut StdRng, max_objects: usize, max_events: usize) -> OcelLog {
    let mut log = random_object_log(rng, max_objects, max_objects * 2);
    let object_count = log.objects.len();
    let event_count = rng.gen_range(0..=max_events);
    log.events = (0..event_count)
        .map(|i| OcelEvent {
            id: format!("e{i}"),
            event_type: ALPHABET[rng.gen_range(0..ALPHABET.len())].to_owned(),
            timestamp: base_time() + Duration::minutes(rng.gen_range(0..(max_events as i64 + 1))),
            attributes: AttributeMap::new(),
            e2o: (0..rng.gen_range(1..=3))
                .map(|_| {
                    (
                        QUALIFIERS[rng.gen_range(0..QUALIFIERS.len())].to_owned(),
                        format!("o{}", rng.gen_range(0..object_count)),
                    )
                })
                .collect(),
        })
        .collect();
    log
}

/// A random path step tree of bounded depth with `Alt` nesting.
pub fn random_step(rng: &mut StdRng, depth: usize) -> PathStep {
    let rel = |rng: &mut StdRng| {
        let direction = if rng.gen_bool(0.5) {
            Direction::Forward
        } else {
            Direction::Reverse
        };
        PathStep::rel(direction, QUALIFIERS[rng.gen_range(0..QUALIFIERS.len())]).unwrap()
    };
    if depth == 0 {
        return rel(rng);
    }
    match rng.gen_range(0..10) {
        0..=5 => rel(rng),
        6..=8 => {
            let steps = (0..rng.gen_range(1..=3))
                .map(|_| random_step(rng, depth - 1))
                .collect();
            PathStep::alt(steps).unwrap()
        }
        _ => {
            let steps = (0..rng.gen_range(1..=2))
                .map(|_| random_step(rng, depth - 1))
                .collect();
            PathStep::path(steps).unwrap()
        }
    }
}

/// A random top-level path of the shape perspectives use.
pub fn random_path(rng: &mut StdRng, max_depth: usize) -> PathStep {
    let steps = (0..rng.gen_range(1..=max_depth.max(1)))
        .map(|_| random_step(rng, max_depth.saturating_sub(1)))
        .collect();
    PathStep::path(steps).unwrap()
}

/// The worked procure-to-pay micro-log: one object per object type,
/// o2o links as in the running example, one event per activity (plus a
/// material-only event that the perspective must exclude).
pub fn p2p_micro_log() -> OcelLog {
    let object = |id: &str, object_type: &str, o2o: &[(&str, &str)]| OcelObject {
        id: id.to_owned(),
        object_type: object_type.to_owned(),
        attributes: AttributeMap::new(),
        o2o: o2o
            .iter()
            .map(|(q, t)| ((*q).to_owned(), (*t).to_owned()))
            .collect(),
    };
    let event = |id: &str, event_type: &str, minute: i64, e2o: &[(&str, &str)]| OcelEvent {
        id: id.to_owned(),
        event_type: event_type.to_owned(),
        timestamp: base_time() + Duration::minutes(minute),
        attributes: AttributeMap::new(),
        e2o: e2o
            .iter()
            .map(|(q, o)| ((*q).to_owned(), (*o).to_owned()))
            .collect(),
    };
    OcelLog {
        objects: vec![
            object("PR1", "purchase_requisition", &[("quotation", "Q1")]),
            object("Q1", "quotation", &[("purchase order", "PO1")]),
            object(
                "PO1",
                "purchase_order",
                &[
                    ("invoice receipt", "IR1"),
                    ("payment", "PAY1"),
                    ("material", "MAT1"),
                ],
            ),
            object("IR1", "invoice_receipt", &[]),
            object("PAY1", "payment", &[]),
            object("GR1", "goods_receipt", &[("goods receipt", "PO1")]),
            object("MAT1", "material", &[]),
        ],
        events: vec![
            event("ev1", "Create Purchase Requisition", 0, &[("pr", "PR1")]),
            event("ev2", "Create Quotation", 10, &[("quote", "Q1")]),
            event("ev3", "Create Purchase Order", 20, &[("po", "PO1")]),
            event("ev4", "Receive Goods", 30, &[("gr", "GR1")]),
            event("ev5", "Receive Invoice", 40, &[("ir", "IR1")]),
            event("ev6", "Clear Invoice", 50, &[("pay", "PAY1")]),
            event("ev7", "Issue Material", 60, &[("mat", "MAT1")]),
        ],
    }
}

/// The procure-to-pay object path of the running example.
pub fn p2p_path_steps() -> Vec<PathStep> {
    vec![
        PathStep::rel(Direction::Forward, "quotation").unwrap(),
        PathStep::rel(Direction::Forward, "purchase order").unwrap(),
        PathStep::alt(vec![
            PathStep::rel(Direction::Forward, "invoice receipt").unwrap(),
            PathStep::rel(Direction::Forward, "payment").unwrap(),
            PathStep::rel(Direction::Reverse, "goods receipt").unwrap(),
        ])
        .unwrap(),
    ]
}
