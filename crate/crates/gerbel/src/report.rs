//! Machine-readable and text reports.

use std::fmt::Write as _;

use gerbel_core::Report;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationJson {
    pub location: String,
    pub equation: String,
    /// Non-finite residuals are written as the strings `"inf"`, `"-inf"` and
    /// `"nan"`, which JSON numbers cannot carry.
    #[serde(serialize_with = "write_residual", deserialize_with = "read_residual")]
    pub residual: f64,
}

/// The verdict of one command on one named declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskResult {
    pub command: String,
    pub name: String,
    pub status: Status,
    #[serde(default)]
    pub violations: Vec<ViolationJson>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub info: Map<String, Value>,
}

impl TaskResult {
    /// Violations are prefixed by `name: ` so they stay unambiguous once
    /// merged into the top-level list.
    pub fn new(command: &str, name: &str, report: Report, info: Map<String, Value>) -> Self {
        let violations: Vec<_> = report
            .violations
            .into_iter()
            .map(|v| ViolationJson {
                location: format!("{name}: {}", v.location),
                equation: v.equation,
                residual: v.residual,
            })
            .collect();
        Self {
            command: command.to_string(),
            name: name.to_string(),
            status: if violations.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            violations,
            info,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub status: Status,
    pub violations: Vec<ViolationJson>,
    pub results: Vec<TaskResult>,
}

impl RunReport {
    pub fn new(results: Vec<TaskResult>) -> Self {
        let violations: Vec<_> = results
            .iter()
            .flat_map(|r| r.violations.iter().cloned())
            .collect();
        Self {
            status: if violations.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            violations,
            results,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let verdict = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(out, "{verdict} {} {}", r.command, r.name);
            for (k, v) in &r.info {
                match v {
                    Value::String(s) => {
                        let _ = writeln!(out, "    {k}: {s}");
                    }
                    Value::Object(_) | Value::Array(_) => {}
                    _ => {
                        let _ = writeln!(out, "    {k}: {v}");
                    }
                }
            }
            for v in &r.violations {
                let _ = writeln!(
                    out,
                    "    at {}: {} (residual {:.3e})",
                    v.location, v.equation, v.residual
                );
            }
        }
        out
    }
}

fn write_residual<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_nan() {
        s.serialize_str("nan")
    } else if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

fn read_residual<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Number(x) => Ok(x),
        Raw::Text(t) => match t.as_str() {
            "nan" => Ok(f64::NAN),
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => Err(serde::de::Error::custom(format!("bad residual '{t}'"))),
        },
    }
}
