//! Trace constraints: the occurrence and sequential-relation checks a
//! query is built from.
//!
//! [`Constraint`] is the validated form shared by the query parser, the
//! index-backed evaluator in this module, and the independent reference
//! evaluator in [`crate::oracle`]. Evaluation here works on a
//! [`TraceIndex`]; the oracle works on the raw log model and shares
//! none of this code.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::iri::sanitize_local_name;
use crate::trace_index::TraceIndex;

/// A fully validated constraint call.
///
/// Universal set constraints (`all`, `coOccur`, `doNotCoOccur`,
/// `alwaysPrecede`) reject empty activity sets at construction: vacuous
/// truth would silently match every trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    ActivityOccurs(String),
    AllActivitiesOccur(Vec<String>),
    AnyActivityOccurs(Vec<String>),
    ActivityOccursAtLeastNTimes(String, usize),
    ActivityOccursAtMostNTimes(String, usize),
    ActivityDoesNotOccur(String),
    ActivitiesCoOccurOrNoneOccurs(Vec<String>),
    ActivitiesDoNotCoOccur(Vec<String>),
    ActivityOccursAsStart(String),
    ActivityOccursAsEnd(String),
    ActivitiesDirectlyFollow(String, String),
    ActivitiesEventuallyFollow(String, String),
    ActivitiesAlwaysPrecede(Vec<String>, Vec<String>),
}

/// Argument shape of a constraint in the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArgShape {
    /// One activity label.
    Activity,
    /// One set of activity labels.
    ActivitySet,
    /// One activity label and a count.
    ActivityCount,
    /// Two activity labels.
    ActivityPair,
    /// Two sets of activity labels.
    ActivitySetPair,
}

/// Registry entry: name, argument shape, and how many event-variable
/// witnesses the constraint can bind in a query.
pub struct RegistryEntry {
    pub name: &'static str,
    pub args: ArgShape,
    pub max_witness_vars: usize,
}

/// All thirteen constraints, by their query-language names.
pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry { name: "activityOccurs", args: ArgShape::Activity, max_witness_vars: 1 },
    RegistryEntry { name: "allActivitiesOccur", args: ArgShape::ActivitySet, max_witness_vars: 0 },
    RegistryEntry { name: "anyActivityOccurs", args: ArgShape::ActivitySet, max_witness_vars: 0 },
    RegistryEntry { name: "activityOccursAtLeastNTimes", args: ArgShape::ActivityCount, max_witness_vars: 0 },
    RegistryEntry { name: "activityOccursAtMostNTimes", args: ArgShape::ActivityCount, max_witness_vars: 0 },
    RegistryEntry { name: "activityDoesNotOccur", args: ArgShape::Activity, max_witness_vars: 0 },
    RegistryEntry { name: "activitiesCoOccurOrNoneOccurs", args: ArgShape::ActivitySet, max_witness_vars: 0 },
    RegistryEntry { name: "activitiesDoNotCoOccur", args: ArgShape::ActivitySet, max_witness_vars: 0 },
    RegistryEntry { name: "activityOccursAsStart", args: ArgShape::Activity, max_witness_vars: 1 },
    RegistryEntry { name: "activityOccursAsEnd", args: ArgShape::Activity, max_witness_vars: 1 },
    RegistryEntry { name: "activitiesDirectlyFollow", args: ArgShape::ActivityPair, max_witness_vars: 2 },
    RegistryEntry { name: "activitiesEventuallyFollow", args: ArgShape::ActivityPair, max_witness_vars: 2 },
    RegistryEntry { name: "activitiesAlwaysPrecede", args: ArgShape::ActivitySetPair, max_witness_vars: 0 },
];

pub fn registry_entry(name: &str) -> Option<&'static RegistryEntry> {
    REGISTRY.iter().find(|e| e.name == name)
}

fn non_empty(name: &str, set: &[String]) -> Result<()> {
    if set.is_empty() {
        Err(Error::Constraint(format!(
            "{name} requires a non-empty activity set"
        )))
    } else {
        Ok(())
    }
}

impl Constraint {
    /// Builds a constraint from its registry name and raw arguments,
    /// validating set emptiness and count ranges.
    pub fn activity_occurs(a: impl Into<String>) -> Constraint {
        Constraint::ActivityOccurs(a.into())
    }

    pub fn all_activities_occur(set: Vec<String>) -> Result<Constraint> {
        non_empty("allActivitiesOccur", &set)?;
        Ok(Constraint::AllActivitiesOccur(set))
    }

    pub fn any_activity_occurs(set: Vec<String>) -> Constraint {
        Constraint::AnyActivityOccurs(set)
    }

    pub fn at_least(a: impl Into<String>, k: usize) -> Result<Constraint> {
        if k == 0 {
            return Err(Error::Constraint(
                "activityOccursAtLeastNTimes requires a positive count".to_owned(),
            ));
        }
        Ok(Constraint::ActivityOccursAtLeastNTimes(a.into(), k))
    }

    pub fn at_most(a: impl Into<String>, k: usize) -> Constraint {
        Constraint::ActivityOccursAtMostNTimes(a.into(), k)
    }

    pub fn does_not_occur(a: impl Into<String>) -> Constraint {
        Constraint::ActivityDoesNotOccur(a.into())
    }

    pub fn co_occur_or_none(set: Vec<String>) -> Result<Constraint> {
        non_empty("activitiesCoOccurOrNoneOccurs", &set)?;
        Ok(Constraint::ActivitiesCoOccurOrNoneOccurs(set))
    }

    pub fn do_not_co_occur(set: Vec<String>) -> Result<Constraint> {
        non_empty("activitiesDoNotCoOccur", &set)?;
        Ok(Constraint::ActivitiesDoNotCoOccur(set))
    }

    pub fn occurs_as_start(a: impl Into<String>) -> Constraint {
        Constraint::ActivityOccursAsStart(a.into())
    }

    pub fn occurs_as_end(a: impl Into<String>) -> Constraint {
        Constraint::ActivityOccursAsEnd(a.into())
    }

    pub fn directly_follow(a: impl Into<String>, b: impl Into<String>) -> Constraint {
        Constraint::ActivitiesDirectlyFollow(a.into(), b.into())
    }

    pub fn eventually_follow(a: impl Into<String>, b: impl Into<String>) -> Constraint {
        Constraint::ActivitiesEventuallyFollow(a.into(), b.into())
    }

    pub fn always_precede(first: Vec<String>, second: Vec<String>) -> Result<Constraint> {
        non_empty("activitiesAlwaysPrecede", &first)?;
        non_empty("activitiesAlwaysPrecede", &second)?;
        Ok(Constraint::ActivitiesAlwaysPrecede(first, second))
    }

    /// The registry name of this constraint.
    pub fn name(&self) -> &'static str {
        match self {
            Constraint::ActivityOccurs(_) => "activityOccurs",
            Constraint::AllActivitiesOccur(_) => "allActivitiesOccur",
            Constraint::AnyActivityOccurs(_) => "anyActivityOccurs",
            Constraint::ActivityOccursAtLeastNTimes(..) => "activityOccursAtLeastNTimes",
            Constraint::ActivityOccursAtMostNTimes(..) => "activityOccursAtMostNTimes",
            Constraint::ActivityDoesNotOccur(_) => "activityDoesNotOccur",
            Constraint::ActivitiesCoOccurOrNoneOccurs(_) => "activitiesCoOccurOrNoneOccurs",
            Constraint::ActivitiesDoNotCoOccur(_) => "activitiesDoNotCoOccur",
            Constraint::ActivityOccursAsStart(_) => "activityOccursAsStart",
            Constraint::ActivityOccursAsEnd(_) => "activityOccursAsEnd",
            Constraint::ActivitiesDirectlyFollow(..) => "activitiesDirectlyFollow",
            Constraint::ActivitiesEventuallyFollow(..) => "activitiesEventuallyFollow",
            Constraint::ActivitiesAlwaysPrecede(..) => "activitiesAlwaysPrecede",
        }
    }

    pub fn max_witness_vars(&self) -> usize {
        registry_entry(self.name()).map_or(0, |e| e.max_witness_vars)
    }
}

// ---------------------------------------------------------------------
// Index-backed evaluation
// ---------------------------------------------------------------------

impl Constraint {
    /// Evaluates this constraint on one trace of the index. Activity
    /// labels are matched through the same sanitization the IRI scheme
    /// applies when minting activity resources.
    pub fn holds(&self, index: &TraceIndex, trace: &str) -> Result<bool> {
        let t = index.trace(trace)?;
        Ok(match self {
            Constraint::ActivityOccurs(a) => t.occurs(&key(a)),
            Constraint::AllActivitiesOccur(set) => set.iter().all(|a| t.occurs(&key(a))),
            Constraint::AnyActivityOccurs(set) => set.iter().any(|a| t.occurs(&key(a))),
            Constraint::ActivityOccursAtLeastNTimes(a, k) => t.occurrence_count(&key(a)) >= *k,
            Constraint::ActivityOccursAtMostNTimes(a, k) => t.occurrence_count(&key(a)) <= *k,
            Constraint::ActivityDoesNotOccur(a) => !t.occurs(&key(a)),
            Constraint::ActivitiesCoOccurOrNoneOccurs(set) => {
                set.iter().all(|a| t.occurs(&key(a))) || set.iter().all(|a| !t.occurs(&key(a)))
            }
            Constraint::ActivitiesDoNotCoOccur(set) => !set.iter().all(|a| t.occurs(&key(a))),
            Constraint::ActivityOccursAsStart(a) => t.first_activity() == Some(key(a).as_str()),
            Constraint::ActivityOccursAsEnd(a) => t.last_activity() == Some(key(a).as_str()),
            Constraint::ActivitiesDirectlyFollow(a, b) => {
                !t.directly_follow_witnesses(&key(a), &key(b)).is_empty()
            }
            Constraint::ActivitiesEventuallyFollow(a, b) => {
                let (pa, pb) = (t.positions(&key(a)), t.positions(&key(b)));
                match (pa.first(), pb.last()) {
                    (Some(&first_a), Some(&last_b)) => first_a < last_b,
                    _ => false,
                }
            }
            Constraint::ActivitiesAlwaysPrecede(first, second) => {
                let occurs_all = first.iter().chain(second).all(|a| t.occurs(&key(a)));
                occurs_all && {
                    let max_first = first
                        .iter()
                        .filter_map(|a| t.positions(&key(a)).last().copied())
                        .max();
                    let min_second = second
                        .iter()
                        .filter_map(|a| t.positions(&key(a)).first().copied())
                        .min();
                    match (max_first, min_second) {
                        (Some(hi), Some(lo)) => hi < lo,
                        _ => false,
                    }
                }
            }
        })
    }

    /// Witness positions (1-based) for existential constraints, in
    /// position order. Constraints without witnesses yield an empty list
    /// when they hold and an empty list when they do not; use
    /// [`Constraint::holds`] for their truth value.
    pub fn witnesses(&self, index: &TraceIndex, trace: &str) -> Result<Vec<Vec<usize>>> {
        let t = index.trace(trace)?;
        Ok(match self {
            Constraint::ActivityOccurs(a) => {
                t.positions(&key(a)).iter().map(|&p| vec![p]).collect()
            }
            Constraint::ActivityOccursAsStart(a) => {
                if t.first_activity() == Some(key(a).as_str()) {
                    vec![vec![1]]
                } else {
                    Vec::new()
                }
            }
            Constraint::ActivityOccursAsEnd(a) => {
                if t.last_activity() == Some(key(a).as_str()) {
                    vec![vec![t.len()]]
                } else {
                    Vec::new()
                }
            }
            Constraint::ActivitiesDirectlyFollow(a, b) => t
                .directly_follow_witnesses(&key(a), &key(b))
                .into_iter()
                .map(|(i, j)| vec![i, j])
                .collect(),
            Constraint::ActivitiesEventuallyFollow(a, b) => {
                let pa = t.positions(&key(a));
                let pb = t.positions(&key(b));
                let mut out = Vec::new();
                for &i in pa {
                    for &j in pb {
                        if i < j {
                            out.push(vec![i, j]);
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        })
    }

    /// Log-level form: the set of trace ids (IRIs) on which this
    /// constraint holds.
    pub fn matching_traces(&self, index: &TraceIndex) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for id in index.trace_ids() {
            if self.holds(index, id)? {
                out.insert(id.to_owned());
            }
        }
        Ok(out)
    }
}

/// Activity labels are matched by minted resource identity, which under
/// the deterministic IRI scheme is sanitized-label equality.
fn key(activity: &str) -> String {
    sanitize_local_name(activity)
}
