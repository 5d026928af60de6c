use serde::{Deserialize, Serialize};

use crate::ratfunc::Scalar;
use crate::{Error, Result};

/// Echo of the run configuration; part of every report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub n_max: u32,
    pub l_max: i64,
    pub lambda: String,
    pub seed: u64,
    pub sign_convention: String,
}

/// One verified case.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    /// "pass" | "fail" | "vanishing-at-truncation"
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub truncation_losses: u64,
}

impl CaseReport {
    pub fn pass(id: impl Into<String>) -> CaseReport {
        CaseReport {
            id: id.into(),
            status: "pass".into(),
            detail: None,
            witness: None,
            truncation_losses: 0,
        }
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> CaseReport {
        CaseReport {
            id: id.into(),
            status: "fail".into(),
            detail: Some(detail.into()),
            witness: None,
            truncation_losses: 0,
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> CaseReport {
        self.witness = Some(w.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// Full run report. Deterministic for a fixed config and seed; wall time is
/// reported only on request so byte-identical reports hold by default.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub config: ConfigEcho,
    pub cases: Vec<CaseReport>,
    pub passed: bool,
    pub truncation_drops: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: impl Into<String>, config: ConfigEcho, cases: Vec<CaseReport>) -> Report {
        let passed = cases.iter().all(CaseReport::passed);
        Report {
            suite: suite.into(),
            config,
            cases,
            passed,
            truncation_drops: 0,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

pub fn config_echo(n_max: u32, l_max: i64, lambda: &Scalar, seed: u64, signs: &str) -> ConfigEcho {
    ConfigEcho {
        n_max,
        l_max,
        lambda: lambda.to_string(),
        seed,
        sign_convention: signs.to_string(),
    }
}

/// The JSON schema the report files conform to; shipped in-repo and used by
/// the validation test.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Minimal structural validation of a report value against the shipped
/// schema (type / required-property / enum checks — the subset the schema
/// uses).
pub fn validate_against_schema(report_json: &str) -> Result<()> {
    let schema: serde_json::Value =
        serde_json::from_str(REPORT_SCHEMA).map_err(|e| Error::Invalid(e.to_string()))?;
    let value: serde_json::Value =
        serde_json::from_str(report_json).map_err(|e| Error::Invalid(e.to_string()))?;
    validate_value(&schema, &value, "$")
}

fn validate_value(schema: &serde_json::Value, value: &serde_json::Value, path: &str) -> Result<()> {
    use serde_json::Value;
    let fail = |msg: String| Err(Error::Invalid(format!("schema violation at {path}: {msg}")));
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "integer" => value.is_i64() || value.is_u64(),
            "number" => value.is_number(),
            _ => true,
        };
        if !ok {
            return fail(format!("expected {ty}"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for r in required {
            let key = r.as_str().unwrap_or_default();
            if value.get(key).is_none() {
                return fail(format!("missing required property {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(obj) = value.as_object() {
            for (k, v) in obj {
                if let Some(sub) = props.get(k) {
                    validate_value(sub, v, &format!("{path}.{k}"))?;
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate_value(items, v, &format!("{path}[{i}]"))?;
            }
        }
    }
    if let Some(en) = schema.get("enum").and_then(Value::as_array) {
        if !en.contains(value) {
            return fail("value not in enum".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::q;

    #[test]
    fn schema_accepts_valid_and_rejects_invalid() {
        let cfg = config_echo(6, 3, &q(1), 0, "default");
        let rep = Report::new(
            "demo",
            cfg,
            vec![CaseReport::pass("a"), CaseReport::fail("b", "detail")],
        );
        assert!(!rep.passed);
        validate_against_schema(&rep.to_json()).unwrap();
        // wrong status string rejected
        let bad = rep.to_json().replace("\"fail\"", "\"maybe\"");
        assert!(validate_against_schema(&bad).is_err());
        // missing required field rejected
        let bad2 = rep.to_json().replace("\"suite\"", "\"suit\"");
        assert!(validate_against_schema(&bad2).is_err());
    }
}
