use serde_json::Value;

use crate::Format;

/// A result in every format the subcommand supports.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub dot: Option<String>,
}

impl Output {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, dot: None }
    }

    pub fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }

    pub fn render(self, format: Format) -> Result<String, Failure> {
        let mut s = match format {
            Format::Text => self.text,
            Format::Json => serde_json::to_string_pretty(&self.json).map_err(|e| Failure::computation(e.to_string()))?,
            Format::Dot => self.dot.ok_or_else(|| Failure::validation("this subcommand has no dot output"))?,
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        Ok(s)
    }
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(msg: impl Into<String>) -> Self {
        Failure { code: 1, message: msg.into() }
    }

    pub fn computation(msg: impl Into<String>) -> Self {
        Failure { code: 2, message: msg.into() }
    }
}

impl From<renorm_core::Error> for Failure {
    fn from(e: renorm_core::Error) -> Self {
        Failure { code: if e.is_validation() { 1 } else { 2 }, message: e.to_string() }
    }
}
