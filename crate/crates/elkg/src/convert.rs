//! Conversion of event logs into trace graphs.
//!
//! A case-centric log yields, per trace, one `tr:Trace` type triple;
//! per event a membership triple, one attribute triple per attribute
//! plus activity and timestamp, and one `tr:next` triple (to the
//! following event, or `rdf:nil` for the last). The total is therefore
//! `T + 2E + A` triples for `T` traces, `E` events, and `A` attribute
//! triples counting activity and timestamp.
//!
//! An object-centric log yields activity/timestamp (and attribute)
//! triples per event, a type (and attribute) triple per object, and one
//! fresh anonymous node per distinct e2o/o2o tuple carrying its event,
//! object(s), and qualifier.

use std::collections::HashSet;

use crate::error::Result;
use crate::graph::{Graph, GraphBuilder};
use crate::iri::IriScheme;
use crate::model::{format_instant, AttributeValue, CaseLog, OcelLog};
use crate::term::{Term, Triple};
use crate::vocab;

fn encode_value(value: &AttributeValue) -> Term {
    match value {
        AttributeValue::String(s) => Term::string(s.clone()),
        AttributeValue::Boolean(b) => Term::boolean(*b),
        AttributeValue::Integer(i) => Term::integer(*i),
        AttributeValue::Decimal(d) => Term::decimal(*d),
        AttributeValue::Instant(ts) => Term::date_time(format_instant(ts)),
    }
}

/// Converts a case-centric log into its trace graph.
///
/// Activity values become resources minted from the activity label;
/// all other attribute values become literals. Events are chained in
/// (timestamp, id) order.
pub fn ccel_to_elkg(log: &CaseLog, scheme: &mut IriScheme) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    builder.declare_prefix("log", scheme.base());

    let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
    let tr_trace = Term::Resource(vocab::TR_TRACE.to_owned());
    let tr_in = Term::Resource(vocab::TR_IN.to_owned());
    let tr_next = Term::Resource(vocab::TR_NEXT.to_owned());
    let tr_activity = Term::Resource(vocab::TR_ACTIVITY.to_owned());
    let tr_timestamp = Term::Resource(vocab::TR_TIMESTAMP.to_owned());
    let nil = Term::Resource(vocab::RDF_NIL.to_owned());

    for trace in &log.traces {
        let trace_term = Term::Resource(scheme.trace_iri(&trace.case_id)?);
        builder.insert(Triple::new(trace_term.clone(), rdf_type.clone(), tr_trace.clone())?);

        let mut ordered: Vec<&crate::model::Event> = trace.events.iter().collect();
        ordered.sort_by(|a, b| (a.timestamp, &a.id).cmp(&(b.timestamp, &b.id)));

        let mut event_terms = Vec::with_capacity(ordered.len());
        for event in &ordered {
            let event_term = Term::Resource(scheme.event_iri(&event.id)?);
            builder.insert(Triple::new(event_term.clone(), tr_in.clone(), trace_term.clone())?);
            builder.insert(Triple::new(
                event_term.clone(),
                tr_activity.clone(),
                Term::Resource(scheme.concept_iri(&event.activity)?),
            )?);
            builder.insert(Triple::new(
                event_term.clone(),
                tr_timestamp.clone(),
                Term::date_time(format_instant(&event.timestamp)),
            )?);
            for (name, value) in &event.attributes {
                builder.insert(Triple::new(
                    event_term.clone(),
                    Term::Resource(scheme.concept_iri(name)?),
                    encode_value(value),
                )?);
            }
            event_terms.push(event_term);
        }
        for pair in event_terms.windows(2) {
            builder.insert(Triple::new(pair[0].clone(), tr_next.clone(), pair[1].clone())?);
        }
        if let Some(last) = event_terms.last() {
            builder.insert(Triple::new(last.clone(), tr_next.clone(), nil.clone())?);
        }
    }
    Ok(builder.freeze())
}

/// Converts an object-centric log into its base graph (no traces).
pub fn ocel2_to_elkg(log: &OcelLog, scheme: &mut IriScheme) -> Result<Graph> {
    let mut builder = GraphBuilder::new();
    builder.declare_prefix("log", scheme.base());
    emit_ocel_base(&mut builder, log, scheme)?;
    Ok(builder.freeze())
}

pub(crate) fn emit_ocel_base(
    builder: &mut GraphBuilder,
    log: &OcelLog,
    scheme: &mut IriScheme,
) -> Result<()> {
    let rdf_type = Term::Resource(vocab::RDF_TYPE.to_owned());
    let tr_activity = Term::Resource(vocab::TR_ACTIVITY.to_owned());
    let tr_timestamp = Term::Resource(vocab::TR_TIMESTAMP.to_owned());
    let tr_event = Term::Resource(vocab::TR_EVENT.to_owned());
    let tr_object = Term::Resource(vocab::TR_OBJECT.to_owned());
    let tr_object2 = Term::Resource(vocab::TR_OBJECT2.to_owned());
    let tr_qualifier = Term::Resource(vocab::TR_QUALIFIER.to_owned());

    for event in &log.events {
        let event_term = Term::Resource(scheme.event_iri(&event.id)?);
        builder.insert(Triple::new(
            event_term.clone(),
            tr_activity.clone(),
            Term::Resource(scheme.concept_iri(&event.event_type)?),
        )?);
        builder.insert(Triple::new(
            event_term.clone(),
            tr_timestamp.clone(),
            Term::date_time(format_instant(&event.timestamp)),
        )?);
        for (name, value) in &event.attributes {
            builder.insert(Triple::new(
                event_term.clone(),
                Term::Resource(scheme.concept_iri(name)?),
                encode_value(value),
            )?);
        }
    }

    for object in &log.objects {
        let object_term = Term::Resource(scheme.object_iri(&object.id)?);
        builder.insert(Triple::new(
            object_term.clone(),
            rdf_type.clone(),
            Term::Resource(scheme.concept_iri(&object.object_type)?),
        )?);
        for (name, value) in &object.attributes {
            builder.insert(Triple::new(
                object_term.clone(),
                Term::Resource(scheme.concept_iri(name)?),
                encode_value(value),
            )?);
        }
    }

    // e2o/o2o are relation *sets*: repeated tuples reify once
    let mut seen_e2o: HashSet<(&str, &str, &str)> = HashSet::new();
    for event in &log.events {
        let event_term = Term::Resource(scheme.event_iri(&event.id)?);
        for (qualifier, object) in &event.e2o {
            if !seen_e2o.insert((&event.id, qualifier, object)) {
                continue;
            }
            let node = builder.fresh_anonymous();
            builder.insert(Triple::new(node.clone(), tr_event.clone(), event_term.clone())?);
            builder.insert(Triple::new(
                node.clone(),
                tr_object.clone(),
                Term::Resource(scheme.object_iri(object)?),
            )?);
            builder.insert(Triple::new(
                node,
                tr_qualifier.clone(),
                Term::string(qualifier.clone()),
            )?);
        }
    }

    let mut seen_o2o: HashSet<(&str, &str, &str)> = HashSet::new();
    for object in &log.objects {
        let object_term = Term::Resource(scheme.object_iri(&object.id)?);
        for (qualifier, target) in &object.o2o {
            if !seen_o2o.insert((&object.id, qualifier, target)) {
                continue;
            }
            let node = builder.fresh_anonymous();
            builder.insert(Triple::new(node.clone(), tr_object.clone(), object_term.clone())?);
            builder.insert(Triple::new(
                node.clone(),
                tr_object2.clone(),
                Term::Resource(scheme.object_iri(target)?),
            )?);
            builder.insert(Triple::new(
                node,
                tr_qualifier.clone(),
                Term::string(qualifier.clone()),
            )?);
        }
    }
    Ok(())
}
