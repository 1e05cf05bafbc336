//! Number formatting and provenance headers shared by the file writers.

use std::io::Write;

use serde::ser::{Serialize, SerializeMap, Serializer};

pub const TOOL_NAME: &str = "seqppi";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Scientific notation with 17 significant digits; parses back to the same
/// bits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Ordered `key=value` metadata embedded in output files.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Provenance {
    entries: Vec<(String, String)>,
}

impl Provenance {
    /// Starts with the tool name and version.
    pub fn new() -> Self {
        Provenance {
            entries: vec![
                ("tool".into(), TOOL_NAME.into()),
                ("tool_version".into(), TOOL_VERSION.into()),
            ],
        }
    }

    /// Sets `key`, replacing an existing entry in place.
    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn write_comments<W: Write + ?Sized>(&self, w: &mut W, prefix: &str) -> std::io::Result<()> {
        for (k, v) in &self.entries {
            writeln!(w, "{prefix}{k}={v}")?;
        }
        Ok(())
    }

    /// Records a `key=value` comment body; anything else is ignored.
    pub fn absorb_comment(&mut self, comment: &str) {
        if let Some((k, v)) = comment.split_once('=') {
            let k = k.trim();
            if !k.is_empty() && !k.contains(char::is_whitespace) {
                self.set(k, v.trim());
            }
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
