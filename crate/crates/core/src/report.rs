//! Claim reports: an ordered list of claim ids with a verdict and evidence.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: String,
    pub pass: bool,
    pub evidence: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub name: String,
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
    /// Unasserted output such as verdicts and witnesses.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    /// CSV tables keyed by file stem; written next to the JSON, not inside it.
    #[serde(skip)]
    pub tables: BTreeMap<String, String>,
}

impl Report {
    pub fn new(name: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            name: name.into(),
            seed,
            ..Default::default()
        }
    }

    pub fn claim(
        &mut self,
        id: impl Into<String>,
        pass: bool,
        evidence: impl IntoIterator<Item = (&'static str, Value)>,
    ) -> &mut Claim {
        self.claims.push(Claim {
            id: id.into(),
            pass,
            evidence: evidence.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        });
        self.claims.last_mut().expect("just pushed")
    }

    pub fn detail(&mut self, key: impl Into<String>, value: Value) {
        self.details.insert(key.into(), value);
    }

    pub fn table(&mut self, stem: impl Into<String>, csv: String) {
        self.tables.insert(stem.into(), csv);
    }

    pub fn get(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.claims.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn failing_claims_are_listed_in_order() {
        let mut r = Report::new("t", Some(3));
        r.claim("a", true, [("x", json!(1))]);
        r.claim("b", false, []);
        r.claim("c", false, [("why", json!("n/a"))]);
        assert!(!r.pass());
        assert_eq!(r.failing(), vec!["b", "c"]);
        let text = r.to_json();
        assert!(text.contains("\"seed\": 3"));
        assert!(!text.contains("tables"));
    }
}
