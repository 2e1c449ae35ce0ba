//! XES (XML event stream) parsing into a case-centric log.
//!
//! Traces are grouped by the trace-level `concept:name` attribute, the
//! conventional case identifier; traces without one are rejected, as
//! are events outside a trace. Each event needs `concept:name`
//! (activity) and `time:timestamp`; both map to dedicated fields while
//! every other direct attribute lands in the event's attribute map
//! (lifecycle, resource, and domain attributes alike). Extension
//! declarations, globals, and classifiers are ignored. Events have no
//! ids in XES, so ids `event1`, `event2`, ... are assigned in document
//! order; within a trace, events sort by (timestamp, id).

use std::collections::HashSet;

use chrono::{DateTime, Utc};
use quick_xml::events::{BytesStart, Event as XmlEvent};
use quick_xml::Reader;

use crate::error::{Error, Result};
use crate::model::{parse_instant, AttributeMap, AttributeValue, CaseLog, Event, Trace};

pub fn parse_xes(text: &str) -> Result<CaseLog> {
    XesParser::default().run(text)
}

#[derive(Default)]
struct XesParser {
    traces: Vec<Trace>,
    seen_case_ids: HashSet<String>,
    depth: usize,
    trace_depth: Option<usize>,
    event_depth: Option<usize>,
    current_trace: Option<PendingTrace>,
    current_event: Option<PendingEvent>,
    event_counter: usize,
}

#[derive(Default)]
struct PendingTrace {
    ordinal: usize,
    case_id: Option<String>,
    events: Vec<Event>,
}

#[derive(Default)]
struct PendingEvent {
    ordinal_in_trace: usize,
    activity: Option<String>,
    timestamp: Option<DateTime<Utc>>,
    attributes: AttributeMap,
}

impl XesParser {
    fn run(mut self, text: &str) -> Result<CaseLog> {
        let mut reader = Reader::from_str(text);
        loop {
            match reader.read_event()? {
                XmlEvent::Start(element) => {
                    self.open_element(&element)?;
                    self.depth += 1;
                }
                XmlEvent::Empty(element) => {
                    let name = element.name().as_ref().to_vec();
                    self.open_element(&element)?;
                    // self-closing traces/events never see an End event
                    if name == b"trace" || name == b"event" {
                        self.close_element(&name)?;
                    }
                }
                XmlEvent::End(element) => {
                    self.depth -= 1;
                    self.close_element(element.name().as_ref())?;
                }
                XmlEvent::Eof => break,
                _ => {}
            }
        }
        if self.current_event.is_some() || self.current_trace.is_some() {
            return Err(Error::Xes(
                "document ended inside an open trace or event".to_owned(),
            ));
        }
        Ok(CaseLog {
            traces: self.traces,
        })
    }

    fn open_element(&mut self, element: &BytesStart<'_>) -> Result<()> {
        match element.name().as_ref() {
            b"trace" => {
                self.trace_depth = Some(self.depth);
                self.current_trace = Some(PendingTrace {
                    ordinal: self.traces.len() + 1,
                    ..PendingTrace::default()
                });
            }
            b"event" => {
                let trace = self.current_trace.as_ref().ok_or_else(|| {
                    Error::Xes("event outside of a trace has no case".to_owned())
                })?;
                self.event_depth = Some(self.depth);
                self.current_event = Some(PendingEvent {
                    ordinal_in_trace: trace.events.len() + 1,
                    ..PendingEvent::default()
                });
            }
            kind @ (b"string" | b"date" | b"int" | b"float" | b"boolean" | b"id") => {
                self.attribute_element(kind, element)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn attribute_element(&mut self, kind: &[u8], element: &BytesStart<'_>) -> Result<()> {
        // only direct children of the enclosing trace/event count
        let event_level = self.current_event.is_some()
            && self.event_depth.is_some_and(|d| self.depth == d + 1);
        let trace_level = !event_level
            && self.current_event.is_none()
            && self.current_trace.is_some()
            && self.trace_depth.is_some_and(|d| self.depth == d + 1);
        if !event_level && !trace_level {
            return Ok(());
        }

        let mut key: Option<String> = None;
        let mut value: Option<String> = None;
        for attribute in element.attributes() {
            let attribute = attribute.map_err(|e| Error::Xes(e.to_string()))?;
            match attribute.key.as_ref() {
                b"key" => key = Some(attribute.unescape_value()?.into_owned()),
                b"value" => value = Some(attribute.unescape_value()?.into_owned()),
                _ => {}
            }
        }
        let (key, value) = match (key, value) {
            (Some(k), Some(v)) => (k, v),
            _ => return Ok(()), // attribute without key/value carries nothing
        };

        if event_level {
            let event = self.current_event.as_mut().expect("checked");
            match key.as_str() {
                "concept:name" => event.activity = Some(value),
                "time:timestamp" => event.timestamp = Some(parse_instant(&value)?),
                _ => {
                    event.attributes.insert(key, typed_value(kind, &value)?);
                }
            }
        } else {
            let trace = self.current_trace.as_mut().expect("checked");
            if key == "concept:name" {
                trace.case_id = Some(value);
            }
            // other trace-level attributes are not part of the model
        }
        Ok(())
    }

    fn close_element(&mut self, name: &[u8]) -> Result<()> {
        match name {
            b"event" => {
                let pending = self.current_event.take().expect("balanced XML");
                self.event_depth = None;
                let trace = self.current_trace.as_mut().expect("event inside trace");
                let context = || {
                    format!(
                        "event #{} in trace #{}{}",
                        pending.ordinal_in_trace,
                        trace.ordinal,
                        trace
                            .case_id
                            .as_deref()
                            .map(|c| format!(" ({c})"))
                            .unwrap_or_default()
                    )
                };
                let activity = pending
                    .activity
                    .ok_or_else(|| Error::Xes(format!("{} has no concept:name", context())))?;
                let timestamp = pending
                    .timestamp
                    .ok_or_else(|| Error::Xes(format!("{} has no time:timestamp", context())))?;
                self.event_counter += 1;
                trace.events.push(Event {
                    id: format!("event{}", self.event_counter),
                    activity,
                    timestamp,
                    attributes: pending.attributes,
                });
            }
            b"trace" => {
                let pending = self.current_trace.take().expect("balanced XML");
                self.trace_depth = None;
                let case_id = pending.case_id.ok_or_else(|| {
                    Error::Xes(format!(
                        "trace #{} has no concept:name case attribute",
                        pending.ordinal
                    ))
                })?;
                if !self.seen_case_ids.insert(case_id.clone()) {
                    return Err(Error::Xes(format!("duplicate case id {case_id:?}")));
                }
                let mut trace = Trace {
                    case_id,
                    events: pending.events,
                };
                trace.sort_events();
                self.traces.push(trace);
            }
            _ => {}
        }
        Ok(())
    }
}

fn typed_value(kind: &[u8], value: &str) -> Result<AttributeValue> {
    Ok(match kind {
        b"boolean" => match value {
            "true" => AttributeValue::Boolean(true),
            "false" => AttributeValue::Boolean(false),
            other => {
                return Err(Error::Xes(format!("invalid boolean attribute {other:?}")))
            }
        },
        b"int" => AttributeValue::Integer(value.parse().map_err(|_| {
            Error::Xes(format!("invalid int attribute {value:?}"))
        })?),
        b"float" => AttributeValue::Decimal(value.parse().map_err(|_| {
            Error::Xes(format!("invalid float attribute {value:?}"))
        })?),
        b"date" => AttributeValue::Instant(parse_instant(value)?),
        _ => AttributeValue::String(value.to_owned()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1849-2016">
  <extension name="Concept" prefix="concept" uri="http://www.xes-standard.org/concept.xesext"/>
  <global scope="event">
    <string key="concept:name" value="__INVALID__"/>
  </global>
  <trace>
    <string key="concept:name" value="A"/>
    <event>
      <string key="concept:name" value="ER Registration"/>
      <date key="time:timestamp" value="2014-10-22T09:15:41.000+00:00"/>
      <boolean key="InfectionSuspected" value="true"/>
      <int key="Age" value="70"/>
    </event>
    <event>
      <string key="concept:name" value="Leucocytes"/>
      <date key="time:timestamp" value="2014-10-22T09:27:00.000+00:00"/>
      <float key="Leucocytes" value="9.6"/>
    </event>
  </trace>
</log>"#;

    #[test]
    fn parses_trace_with_typed_attributes() {
        let log = parse_xes(SMALL).unwrap();
        assert_eq!(log.traces.len(), 1);
        let trace = &log.traces[0];
        assert_eq!(trace.case_id, "A");
        assert_eq!(trace.events.len(), 2);
        let first = &trace.events[0];
        assert_eq!(first.activity, "ER Registration");
        assert_eq!(first.id, "event1");
        assert_eq!(
            first.attributes.get("InfectionSuspected"),
            Some(&AttributeValue::Boolean(true))
        );
        assert_eq!(first.attributes.get("Age"), Some(&AttributeValue::Integer(70)));
        // the global template's concept:name did not leak in
        assert!(!first.attributes.contains_key("concept:name"));
    }

    #[test]
    fn events_re_sort_by_timestamp() {
        let text = r#"<log><trace>
            <string key="concept:name" value="A"/>
            <event>
              <string key="concept:name" value="late"/>
              <date key="time:timestamp" value="2020-01-01T10:00:00+00:00"/>
            </event>
            <event>
              <string key="concept:name" value="early"/>
              <date key="time:timestamp" value="2020-01-01T08:00:00+00:00"/>
            </event>
        </trace></log>"#;
        let log = parse_xes(text).unwrap();
        let activities: Vec<_> = log.traces[0]
            .events
            .iter()
            .map(|e| e.activity.as_str())
            .collect();
        assert_eq!(activities, vec!["early", "late"]);
    }

    #[test]
    fn offsets_influence_order_not_identity() {
        // 09:27+02:00 is 07:27 UTC, before 09:15 UTC
        let text = r#"<log><trace>
            <string key="concept:name" value="A"/>
            <event>
              <string key="concept:name" value="utc"/>
              <date key="time:timestamp" value="2014-10-22T09:15:41+00:00"/>
            </event>
            <event>
              <string key="concept:name" value="offset"/>
              <date key="time:timestamp" value="2014-10-22T09:27:00+02:00"/>
            </event>
        </trace></log>"#;
        let log = parse_xes(text).unwrap();
        let first = &log.traces[0].events[0];
        assert_eq!(first.activity, "offset");
    }

    #[test]
    fn missing_activity_names_the_event() {
        let text = r#"<log><trace>
            <string key="concept:name" value="A"/>
            <event>
              <date key="time:timestamp" value="2020-01-01T08:00:00+00:00"/>
            </event>
        </trace></log>"#;
        let err = parse_xes(text).unwrap_err().to_string();
        assert!(err.contains("event #1"), "{err}");
        assert!(err.contains("concept:name"), "{err}");
    }

    #[test]
    fn missing_timestamp_and_bad_timestamp_fail() {
        let no_ts = r#"<log><trace><string key="concept:name" value="A"/>
            <event><string key="concept:name" value="x"/></event></trace></log>"#;
        assert!(parse_xes(no_ts).unwrap_err().to_string().contains("time:timestamp"));
        let bad_ts = r#"<log><trace><string key="concept:name" value="A"/>
            <event><string key="concept:name" value="x"/>
            <date key="time:timestamp" value="not-a-time"/></event></trace></log>"#;
        assert!(matches!(parse_xes(bad_ts), Err(Error::Timestamp { .. })));
    }

    #[test]
    fn trace_without_case_is_rejected() {
        let text = r#"<log><trace>
            <event><string key="concept:name" value="x"/>
            <date key="time:timestamp" value="2020-01-01T08:00:00+00:00"/></event>
        </trace></log>"#;
        let err = parse_xes(text).unwrap_err().to_string();
        assert!(err.contains("trace #1"), "{err}");
    }

    #[test]
    fn event_outside_trace_is_rejected() {
        let text = r#"<log><event><string key="concept:name" value="x"/></event></log>"#;
        assert!(parse_xes(text).is_err());
    }

    #[test]
    fn xml_syntax_error_surfaces() {
        // mismatched close tag
        assert!(matches!(
            parse_xes("<log><trace></log>"),
            Err(Error::Xml(_))
        ));
        // truncated document
        assert!(parse_xes("<log><trace>").is_err());
    }

    #[test]
    fn parsing_is_deterministic() {
        let a = parse_xes(SMALL).unwrap();
        let b = parse_xes(SMALL).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn self_closing_trace_and_event_are_still_validated() {
        // a self-closing event has no activity
        let text = r#"<log><trace><string key="concept:name" value="A"/><event/></trace></log>"#;
        assert!(parse_xes(text).unwrap_err().to_string().contains("concept:name"));
        // a self-closing trace has no case and must not swallow siblings
        let text = r#"<log><trace/></log>"#;
        assert!(parse_xes(text).unwrap_err().to_string().contains("trace #1"));
    }
}
