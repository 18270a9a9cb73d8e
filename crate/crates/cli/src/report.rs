//! Single-line JSON reports with a fixed key order.

use serde_json::{Map, Number, Value};

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Ordered key-value builder for the `details` object.
#[derive(Debug, Default)]
pub struct Details(Map<String, Value>);

impl Details {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn float(&mut self, key: &str, x: f64) -> &mut Self {
        self.put(key, num(x))
    }
}

#[derive(Debug)]
pub struct Report {
    pub command: String,
    pub n: usize,
    /// `None` for commands that compute rather than decide.
    pub verdict: Option<bool>,
    pub reason: Option<String>,
    pub distinct_queries: usize,
    pub total_queries: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub elapsed_ms: u128,
    pub details: Details,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("n".into(), self.n.into());
        m.insert(
            "verdict".into(),
            self.verdict.map_or(Value::Null, Value::Bool),
        );
        m.insert(
            "reason".into(),
            self.reason.clone().map_or(Value::Null, Value::String),
        );
        m.insert("distinct_queries".into(), self.distinct_queries.into());
        m.insert("total_queries".into(), self.total_queries.into());
        m.insert("seed".into(), self.seed.into());
        m.insert("tolerance".into(), num(self.tolerance));
        m.insert("elapsed_ms".into(), (self.elapsed_ms as u64).into());
        m.insert("details".into(), Value::Object(self.details.0.clone()));
        Value::Object(m).to_string()
    }
}
