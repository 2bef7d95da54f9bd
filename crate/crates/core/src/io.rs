//! JSON instance files, verdict documents and kernel traces.
//!
//! ```json
//! {
//!   "version": 1,
//!   "resources": ["r1", "r2"],
//!   "users": [{ "id": "alice", "resources": ["r1", "r2"] }],
//!   "policy": { "P": ["r1", "r2"], "s": 0, "d": 1, "t": "inf" },
//!   "provenance": { "family": "random", "expected": "unknown", "seed": 42, "params": {} }
//! }
//! ```
//!
//! Ids are strings on disk and dense indices in memory, in file order.
//! Parsing never normalizes. Documents are written with a fixed field order
//! and carry no timings, so equal inputs give byte-identical output.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bits::{ResourceSet, MAX_RESOURCES};
use crate::error::{Error, Result};
use crate::generators::{Expected, GeneratedInstance};
use crate::kernel::KernelTrace;
use crate::policy::{
    Answer, BlockerSet, Instance, Policy, Stats, TeamBound, TeamSet, UserId, Verdict, Witness,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub resources: Vec<String>,
    pub users: Vec<UserEntry>,
    pub policy: PolicyEntry,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UserEntry {
    pub id: String,
    pub resources: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyEntry {
    #[serde(rename = "P")]
    pub resources: Vec<String>,
    pub s: usize,
    pub d: usize,
    pub t: TeamBoundEntry,
}

/// `t` on disk: a non-negative integer or `"inf"`. Zero is rejected later,
/// with a field diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TeamBoundEntry(pub Option<u64>);

impl Serialize for TeamBoundEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0 {
            Some(t) => s.serialize_u64(t),
            None => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for TeamBoundEntry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = TeamBoundEntry;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(TeamBoundEntry(Some(v)))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                u64::try_from(v)
                    .map(|v| TeamBoundEntry(Some(v)))
                    .map_err(|_| E::invalid_value(de::Unexpected::Signed(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(TeamBoundEntry(None))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceBlock {
    pub family: String,
    pub expected: Expected,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

fn field_error(field: impl AsRef<str>, msg: impl AsRef<str>) -> Error {
    Error::Parse(format!("{}: {}", field.as_ref(), msg.as_ref()))
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, provenance: Option<ProvenanceBlock>) -> Self {
        let labels = |set: ResourceSet| {
            set.iter()
                .map(|r| inst.resource_label(r).to_string())
                .collect()
        };
        let p = inst.policy();
        InstanceFile {
            version: FORMAT_VERSION,
            resources: inst.resource_labels().to_vec(),
            users: (0..inst.n())
                .map(|u| UserEntry {
                    id: inst.user_label(u).to_string(),
                    resources: labels(inst.user_resources(u)),
                })
                .collect(),
            policy: PolicyEntry {
                resources: labels(p.resources),
                s: p.s,
                d: p.d,
                t: TeamBoundEntry(match p.t {
                    TeamBound::Finite(t) => Some(t as u64),
                    TeamBound::Unbounded => None,
                }),
            },
            provenance,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        if self.version != FORMAT_VERSION {
            return Err(field_error(
                "version",
                format!(
                    "unsupported version {} (expected {FORMAT_VERSION})",
                    self.version
                ),
            ));
        }
        if self.resources.len() > MAX_RESOURCES {
            return Err(field_error(
                "resources",
                format!(
                    "{} resources exceed the limit of {MAX_RESOURCES}",
                    self.resources.len()
                ),
            ));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (r, id) in self.resources.iter().enumerate() {
            if index.insert(id.as_str(), r).is_some() {
                return Err(field_error(
                    format!("resources[{r}]"),
                    format!("duplicate resource id {id:?}"),
                ));
            }
        }
        let resolve = |ids: &[String], field: &str| -> Result<ResourceSet> {
            let mut set = ResourceSet::EMPTY;
            for (k, id) in ids.iter().enumerate() {
                let r = *index.get(id.as_str()).ok_or_else(|| {
                    field_error(
                        format!("{field}[{k}]"),
                        format!("unknown resource id {id:?}"),
                    )
                })?;
                if set.contains(r) {
                    return Err(field_error(
                        format!("{field}[{k}]"),
                        format!("resource id {id:?} listed twice"),
                    ));
                }
                set.insert(r);
            }
            Ok(set)
        };

        let mut seen = HashSet::new();
        let mut auth = Vec::with_capacity(self.users.len());
        for (u, entry) in self.users.iter().enumerate() {
            if !seen.insert(entry.id.as_str()) {
                return Err(field_error(
                    format!("users[{u}].id"),
                    format!("duplicate user id {:?}", entry.id),
                ));
            }
            auth.push(resolve(&entry.resources, &format!("users[{u}].resources"))?);
        }
        let resources = resolve(&self.policy.resources, "policy.P")?;
        if self.policy.d == 0 {
            return Err(field_error("policy.d", "d must be at least 1"));
        }
        let t = match self.policy.t.0 {
            Some(0) => return Err(field_error("policy.t", "t must be at least 1 or \"inf\"")),
            Some(t) => TeamBound::Finite(
                usize::try_from(t).map_err(|_| field_error("policy.t", "t is too large"))?,
            ),
            None => TeamBound::Unbounded,
        };
        let policy = Policy {
            resources,
            s: self.policy.s,
            d: self.policy.d,
            t,
        };
        Instance::with_labels(
            self.users.iter().map(|e| e.id.clone()).collect(),
            self.resources.clone(),
            auth,
            policy,
        )
    }
}

pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    serde_json::from_str(text).map_err(syntax_error)
}

/// Parses and validates an instance; the provenance block, if any, is
/// ignored.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_file(text)?.to_instance()
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut out =
        serde_json::to_string_pretty(value).expect("in-memory documents always serialize");
    out.push('\n');
    out
}

pub fn emit_instance(inst: &Instance) -> String {
    to_pretty(&InstanceFile::from_instance(inst, None))
}

pub fn emit_generated(g: &GeneratedInstance) -> String {
    let provenance = ProvenanceBlock {
        family: g.provenance.family.clone(),
        expected: g.expected,
        seed: g.provenance.seed,
        params: g.provenance.params.clone(),
    };
    to_pretty(&InstanceFile::from_instance(&g.instance, Some(provenance)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum WitnessEntry {
    Teams(Vec<Vec<String>>),
    Blocker(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsEntry {
    pub nodes: u64,
    pub states: u64,
}

/// A verdict with user ids in place of indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictDocument {
    pub answer: String,
    pub algorithm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsEntry>,
}

/// Which optional parts of a verdict to write.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerdictFields {
    pub witness: bool,
    pub stats: bool,
}

impl VerdictFields {
    pub const ALL: VerdictFields = VerdictFields {
        witness: true,
        stats: true,
    };
}

impl VerdictDocument {
    pub fn new(inst: &Instance, v: &Verdict, fields: VerdictFields) -> Self {
        let label = |u: &UserId| inst.user_label(*u).to_string();
        let witness = v
            .witness
            .as_ref()
            .filter(|_| fields.witness)
            .map(|w| match w {
                Witness::Teams(t) => WitnessEntry::Teams(
                    t.teams
                        .iter()
                        .map(|team| team.iter().map(label).collect())
                        .collect(),
                ),
                Witness::Blocker(b) => WitnessEntry::Blocker(b.users.iter().map(label).collect()),
            });
        VerdictDocument {
            answer: v.answer.to_string(),
            algorithm: v.stats.algorithm.clone(),
            witness,
            stats: fields.stats.then_some(StatsEntry {
                nodes: v.stats.nodes,
                states: v.stats.states,
            }),
        }
    }

    /// Rebuilds the verdict against `inst`; elapsed time reads as zero.
    pub fn to_verdict(&self, inst: &Instance) -> Result<Verdict> {
        let answer = match self.answer.as_str() {
            "SAT" => Answer::Sat,
            "UNSAT" => Answer::Unsat,
            other => {
                return Err(field_error(
                    "answer",
                    format!("expected \"SAT\" or \"UNSAT\", got {other:?}"),
                ))
            }
        };
        let index: HashMap<&str, UserId> = inst
            .user_labels()
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |id: &String, field: String| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| field_error(field, format!("unknown user id {id:?}")))
        };
        let witness = match &self.witness {
            None => None,
            Some(WitnessEntry::Teams(teams)) => Some(Witness::Teams(TeamSet::new(
                teams
                    .iter()
                    .enumerate()
                    .map(|(i, team)| {
                        team.iter()
                            .enumerate()
                            .map(|(k, id)| lookup(id, format!("witness.teams[{i}][{k}]")))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ))),
            Some(WitnessEntry::Blocker(users)) => Some(Witness::Blocker(BlockerSet::new(
                users
                    .iter()
                    .enumerate()
                    .map(|(k, id)| lookup(id, format!("witness.blocker[{k}]")))
                    .collect::<Result<Vec<_>>>()?,
            ))),
        };
        let stats = self
            .stats
            .as_ref()
            .map_or(Stats::named(self.algorithm.clone()), |s| Stats {
                algorithm: self.algorithm.clone(),
                nodes: s.nodes,
                states: s.states,
                ..Stats::default()
            });
        Ok(Verdict {
            answer,
            witness,
            stats,
        })
    }
}

pub fn emit_verdict(inst: &Instance, v: &Verdict) -> String {
    emit_verdict_with(inst, v, VerdictFields::ALL)
}

pub fn emit_verdict_with(inst: &Instance, v: &Verdict, fields: VerdictFields) -> String {
    to_pretty(&VerdictDocument::new(inst, v, fields))
}

pub fn parse_verdict(inst: &Instance, text: &str) -> Result<Verdict> {
    let doc: VerdictDocument = serde_json::from_str(text).map_err(syntax_error)?;
    doc.to_verdict(inst)
}

pub fn emit_trace(trace: &KernelTrace) -> String {
    to_pretty(trace)
}

pub fn parse_trace(text: &str) -> Result<KernelTrace> {
    serde_json::from_str(text).map_err(syntax_error)
}
