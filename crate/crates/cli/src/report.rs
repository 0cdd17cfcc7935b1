use serde_json::{json, Value};

use crate::Format;

/// A finished command: exit code plus text and JSON renderings.
pub struct Report {
    pub code: u8,
    text: String,
    json: Value,
}

impl Report {
    pub fn new(code: u8, text: String, json: Value) -> Report {
        Report { code, text, json }
    }

    pub fn unknown(reason: String, base: Value) -> Report {
        Report::new(3, format!("Unknown: {reason}\n"), base)
            .with("verdict", json!("unknown"))
            .with("reason", json!(reason))
    }

    pub fn with(mut self, key: &str, value: Value) -> Report {
        self.json[key] = value;
        self
    }

    pub fn print(&self, format: Format) {
        match format {
            Format::Text => print!("{}", self.text),
            Format::Json => {
                let mut v = json!({"v": 1});
                if let Value::Object(fields) = &self.json {
                    for (k, x) in fields {
                        v[k] = x.clone();
                    }
                }
                println!("{v}");
            }
        }
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Failure {
        Failure { code: 2, message }
    }

    pub fn internal(message: String) -> Failure {
        Failure { code: 3, message }
    }
}
