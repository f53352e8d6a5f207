use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a command prints, in both shapes.
pub struct Report {
    text: String,
    json: Value,
}

impl Report {
    pub fn new() -> Self {
        Report {
            text: String::new(),
            json: Value::Object(Default::default()),
        }
    }

    /// A report whose JSON form is exactly `value`.
    pub fn raw<T: Serialize>(value: &T, text: impl Into<String>) -> Self {
        Report {
            text: text.into(),
            json: serde_json::to_value(value).expect("report values serialize"),
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        let _ = writeln!(self.text, "{}", s.as_ref());
        self
    }

    pub fn field<T: Serialize>(&mut self, key: &str, value: &T) -> &mut Self {
        if let Value::Object(m) = &mut self.json {
            m.insert(key.to_string(), serde_json::to_value(value).expect("report values serialize"));
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut t = self.text.clone();
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t
            }
            Format::Json => {
                let mut t = serde_json::to_string_pretty(&self.json).expect("json renders");
                t.push('\n');
                t
            }
        }
    }
}

/// How a command ended.
pub enum Outcome {
    Ok(Report),
    /// A verification ran and failed.
    Failed(Report),
}

impl Outcome {
    pub fn from_check(ok: bool, report: Report) -> Self {
        if ok {
            Outcome::Ok(report)
        } else {
            Outcome::Failed(report)
        }
    }
}

/// Bad input: unreadable, malformed, or outside what the engine handles.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<birzeta::Error> for InputError {
    fn from(e: birzeta::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(e.to_string())
    }
}

impl From<serde_json::Error> for InputError {
    fn from(e: serde_json::Error) -> Self {
        InputError(e.to_string())
    }
}
