//! In-memory models of the two event-log families: case-centric logs
//! (traces of events) and object-centric logs (events linked to typed
//! objects through qualified relations).

use std::collections::{BTreeMap, HashMap, HashSet};

use chrono::{DateTime, SecondsFormat, Timelike, Utc};

use crate::error::{Error, Result};

/// A typed attribute value.
#[derive(Debug, Clone, PartialEq)]
pub enum AttributeValue {
    String(String),
    Boolean(bool),
    Integer(i64),
    Decimal(f64),
    Instant(DateTime<Utc>),
}

impl AttributeValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            AttributeValue::String(_) => "string",
            AttributeValue::Boolean(_) => "boolean",
            AttributeValue::Integer(_) => "integer",
            AttributeValue::Decimal(_) => "decimal",
            AttributeValue::Instant(_) => "instant",
        }
    }
}

/// Attribute maps are ordered by name so model traversal is deterministic.
pub type AttributeMap = BTreeMap<String, AttributeValue>;

/// A single event of a case-centric log.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub id: String,
    pub activity: String,
    pub timestamp: DateTime<Utc>,
    pub attributes: AttributeMap,
}

/// A trace: events sharing one case, sorted ascending by
/// (timestamp, id). Equal timestamps are broken by the event id so the
/// ordering is total.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub case_id: String,
    pub events: Vec<Event>,
}

impl Trace {
    /// Sorts the events into canonical (timestamp, id) order.
    pub fn sort_events(&mut self) {
        self.events
            .sort_by(|a, b| (a.timestamp, &a.id).cmp(&(b.timestamp, &b.id)));
    }
}

/// A case-centric event log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CaseLog {
    pub traces: Vec<Trace>,
}

impl CaseLog {
    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }
}

/// An object of an object-centric log, with its qualified links to
/// other objects.
#[derive(Debug, Clone, PartialEq)]
pub struct OcelObject {
    pub id: String,
    pub object_type: String,
    pub attributes: AttributeMap,
    /// Qualified object-to-object relations: (qualifier, target object id).
    pub o2o: Vec<(String, String)>,
}

/// An event of an object-centric log, with its qualified links to objects.
#[derive(Debug, Clone, PartialEq)]
pub struct OcelEvent {
    pub id: String,
    pub event_type: String,
    pub timestamp: DateTime<Utc>,
    pub attributes: AttributeMap,
    /// Qualified event-to-object relations: (qualifier, object id).
    pub e2o: Vec<(String, String)>,
}

/// An object-centric event log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OcelLog {
    pub events: Vec<OcelEvent>,
    pub objects: Vec<OcelObject>,
}

impl OcelLog {
    /// Checks id uniqueness and referential integrity of every e2o/o2o
    /// target. Dangling references are all reported at once.
    pub fn validate(&self) -> Result<()> {
        let mut object_ids = HashSet::new();
        for o in &self.objects {
            if !object_ids.insert(o.id.as_str()) {
                return Err(Error::Ocel(format!("duplicate object id {:?}", o.id)));
            }
        }
        let mut event_ids = HashSet::new();
        for e in &self.events {
            if !event_ids.insert(e.id.as_str()) {
                return Err(Error::Ocel(format!("duplicate event id {:?}", e.id)));
            }
        }
        let mut dangling: Vec<String> = Vec::new();
        for e in &self.events {
            for (_, target) in &e.e2o {
                if !object_ids.contains(target.as_str()) {
                    dangling.push(format!("event {:?} -> object {:?}", e.id, target));
                }
            }
        }
        for o in &self.objects {
            for (_, target) in &o.o2o {
                if !object_ids.contains(target.as_str()) {
                    dangling.push(format!("object {:?} -> object {:?}", o.id, target));
                }
            }
        }
        if !dangling.is_empty() {
            return Err(Error::Ocel(format!(
                "dangling object references: {}",
                dangling.join(", ")
            )));
        }
        Ok(())
    }

    pub fn object(&self, id: &str) -> Option<&OcelObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    /// Object lookup table keyed by id.
    pub fn objects_by_id(&self) -> HashMap<&str, &OcelObject> {
        self.objects.iter().map(|o| (o.id.as_str(), o)).collect()
    }
}

/// Formats an instant the way every graph in this crate serializes
/// timestamps: UTC with an explicit `+00:00` offset, milliseconds only
/// when non-zero.
pub fn format_instant(instant: &DateTime<Utc>) -> String {
    if instant.timestamp_subsec_millis() == 0 && instant.timestamp_subsec_nanos() == 0 {
        instant.format("%Y-%m-%dT%H:%M:%S+00:00").to_string()
    } else {
        instant.to_rfc3339_opts(SecondsFormat::Millis, false)
    }
}

/// Parses an ISO-8601 timestamp with a numeric UTC offset (or `Z`) and
/// normalizes it to UTC at millisecond precision.
pub fn parse_instant(value: &str) -> Result<DateTime<Utc>> {
    let parsed = DateTime::parse_from_rfc3339(value)
        .or_else(|_| DateTime::parse_from_str(value, "%Y-%m-%dT%H:%M:%S%.f%z"))
        .map_err(|e| Error::Timestamp {
            value: value.to_owned(),
            message: e.to_string(),
        })?;
    let utc = parsed.with_timezone(&Utc);
    // truncate below millisecond precision
    let millis = utc.timestamp_subsec_nanos() / 1_000_000;
    utc.with_nanosecond(millis * 1_000_000)
        .ok_or_else(|| Error::Timestamp {
            value: value.to_owned(),
            message: "out of range".to_owned(),
        })
}
