//! OCEL 2.0 JSON parsing into an object-centric log.
//!
//! Expects the standard layout: a top-level `objects` array (id, type,
//! attributes, relationships) and `events` array (id, type, time,
//! attributes, relationships), with relationships carrying `objectId`
//! and `qualifier`. Attribute values keep their JSON type; timestamped
//! object attributes keep the last value per name. Referential
//! integrity of every relationship target is validated after parsing.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::{parse_instant, AttributeMap, AttributeValue, OcelEvent, OcelLog, OcelObject};

pub fn parse_ocel2_json(text: &str) -> Result<OcelLog> {
    let doc: Value = serde_json::from_str(text)?;
    let root = doc
        .as_object()
        .ok_or_else(|| Error::Ocel("expected a top-level JSON object".to_owned()))?;

    let objects = match root.get("objects") {
        Some(value) => parse_objects(value)?,
        None => Vec::new(),
    };
    let events = match root.get("events") {
        Some(value) => parse_events(value)?,
        None => Vec::new(),
    };

    let log = OcelLog { events, objects };
    log.validate()?;
    Ok(log)
}

fn parse_objects(value: &Value) -> Result<Vec<OcelObject>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Ocel("\"objects\" must be an array".to_owned()))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let entry = item
                .as_object()
                .ok_or_else(|| Error::Ocel(format!("objects[{i}] must be an object")))?;
            let id = required_str(entry, "id", &format!("objects[{i}]"))?;
            let context = format!("object {id:?}");
            Ok(OcelObject {
                object_type: required_str(entry, "type", &context)?,
                attributes: parse_attributes(entry.get("attributes"), &context)?,
                o2o: parse_relationships(entry.get("relationships"), &context)?,
                id,
            })
        })
        .collect()
}

fn parse_events(value: &Value) -> Result<Vec<OcelEvent>> {
    let items = value
        .as_array()
        .ok_or_else(|| Error::Ocel("\"events\" must be an array".to_owned()))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let entry = item
                .as_object()
                .ok_or_else(|| Error::Ocel(format!("events[{i}] must be an object")))?;
            let id = required_str(entry, "id", &format!("events[{i}]"))?;
            let context = format!("event {id:?}");
            let time = required_str(entry, "time", &context)?;
            Ok(OcelEvent {
                event_type: required_str(entry, "type", &context)?,
                timestamp: parse_instant(&time)?,
                attributes: parse_attributes(entry.get("attributes"), &context)?,
                e2o: parse_relationships(entry.get("relationships"), &context)?,
                id,
            })
        })
        .collect()
}

fn required_str(
    entry: &serde_json::Map<String, Value>,
    field: &str,
    context: &str,
) -> Result<String> {
    entry
        .get(field)
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or_else(|| Error::Ocel(format!("{context}: missing or non-string \"{field}\"")))
}

fn parse_attributes(value: Option<&Value>, context: &str) -> Result<AttributeMap> {
    let mut map = AttributeMap::new();
    let Some(value) = value else {
        return Ok(map);
    };
    let items = value
        .as_array()
        .ok_or_else(|| Error::Ocel(format!("{context}: \"attributes\" must be an array")))?;
    for item in items {
        let entry = item
            .as_object()
            .ok_or_else(|| Error::Ocel(format!("{context}: attribute entries must be objects")))?;
        let name = entry
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Ocel(format!("{context}: attribute without a name")))?;
        let value = entry
            .get("value")
            .ok_or_else(|| Error::Ocel(format!("{context}: attribute {name:?} has no value")))?;
        map.insert(name.to_owned(), typed_value(value, name, context)?);
    }
    Ok(map)
}

fn typed_value(value: &Value, name: &str, context: &str) -> Result<AttributeValue> {
    Ok(match value {
        Value::Bool(b) => AttributeValue::Boolean(*b),
        Value::String(s) => AttributeValue::String(s.clone()),
        Value::Number(n) => match n.as_i64() {
            Some(i) => AttributeValue::Integer(i),
            None => AttributeValue::Decimal(n.as_f64().ok_or_else(|| {
                Error::Ocel(format!("{context}: attribute {name:?} is not a finite number"))
            })?),
        },
        other => {
            return Err(Error::Ocel(format!(
                "{context}: attribute {name:?} has unsupported value {other}"
            )))
        }
    })
}

fn parse_relationships(value: Option<&Value>, context: &str) -> Result<Vec<(String, String)>> {
    let Some(value) = value else {
        return Ok(Vec::new());
    };
    let items = value
        .as_array()
        .ok_or_else(|| Error::Ocel(format!("{context}: \"relationships\" must be an array")))?;
    items
        .iter()
        .map(|item| {
            let entry = item.as_object().ok_or_else(|| {
                Error::Ocel(format!("{context}: relationship entries must be objects"))
            })?;
            let object_id = required_str(entry, "objectId", context)?;
            let qualifier = required_str(entry, "qualifier", context)?;
            Ok((qualifier, object_id))
        })
        .collect()
}
