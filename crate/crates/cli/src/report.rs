//! JSON certificate assembly. Every integer travels as a decimal string so
//! consumers never round-trip values through floating point; keys are
//! sorted, so identical runs render byte-identical documents (the timestamp
//! field is the one designed exception).

use eds_core::tower::Element;
use serde_json::{Map, Value};

pub fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn strings<I>(xs: I) -> Value
where
    I: IntoIterator,
    I::Item: ToString,
{
    Value::Array(xs.into_iter().map(s).collect())
}

/// Field element as its coordinate vector over the power basis.
pub fn element(e: &Element) -> Value {
    Value::Array(e.coords.iter().map(s).collect())
}

pub struct Certificate {
    map: Map<String, Value>,
}

impl Certificate {
    pub fn new(kind: &str, inputs: Value) -> Certificate {
        let mut map = Map::new();
        map.insert("certificate".into(), s(kind));
        let mut env = Map::new();
        env.insert("package".into(), s("eds-cli"));
        env.insert("version".into(), s(env!("CARGO_PKG_VERSION")));
        map.insert("environment".into(), Value::Object(env));
        map.insert("inputs".into(), inputs);
        let ts = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        map.insert("timestamp".into(), s(ts));
        Certificate { map }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.map.insert(key.into(), value);
    }

    pub fn outcome(&mut self, ok: bool) {
        self.set("outcome", s(if ok { "pass" } else { "incomplete" }));
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&Value::Object(self.map.clone()))
            .expect("certificate serializes")
    }
}
