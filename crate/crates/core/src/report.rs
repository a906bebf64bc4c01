//! Structured pass/fail reports for the verification drivers.

use serde::Serialize;

/// Outcome of one verification case. Serializes with deterministic field
/// order; `details` and `first_mismatch` are omitted when empty.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub case: serde_json::Value,
    pub status: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<serde_json::Value>,
}

impl Report {
    pub fn pass(case: serde_json::Value) -> Self {
        Report { case, status: "pass".to_string(), details: Vec::new(), first_mismatch: None }
    }

    pub fn fail(case: serde_json::Value, mismatch: serde_json::Value) -> Self {
        Report {
            case,
            status: "fail".to_string(),
            details: Vec::new(),
            first_mismatch: Some(mismatch),
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == "pass"
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.details.push(d.into());
        self
    }

    /// Keep this report if it already failed, otherwise adopt the other.
    pub fn and(self, other: Report) -> Report {
        if self.is_pass() {
            other
        } else {
            self
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_shape() {
        let r = Report::pass(serde_json::json!({"n": 2}));
        let v = r.to_json();
        assert_eq!(v["status"], "pass");
        assert!(v.get("first_mismatch").is_none());
        let f = Report::fail(serde_json::json!({"n": 2}), serde_json::json!({"qexp": -1}));
        assert_eq!(f.to_json()["first_mismatch"]["qexp"], -1);
        assert!(!f.is_pass());
        assert!(f.and(Report::pass(serde_json::json!({}))).is_pass() == false);
    }
}
