//! Sorted `key = value` text documents used for certificates and spectrum reports.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvDoc {
    entries: BTreeMap<String, String>,
}

/// Shortest round-trip scientific rendering.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

impl KvDoc {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        let value = value.to_string();
        assert!(!value.contains('\n'), "multi-line value");
        self.entries.insert(key.into(), value);
        self
    }

    pub fn set_f64(&mut self, key: impl Into<String>, x: f64) -> &mut Self {
        self.set(key, fmt_f64(x))
    }

    pub fn set_opt(&mut self, key: impl Into<String>, value: Option<impl Display>) -> &mut Self {
        match value {
            Some(v) => self.set(key, v),
            None => self.set(key, "none"),
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Parse(format!("duplicate key {k}")));
            }
        }
        Ok(KvDoc { entries })
    }

    pub fn get(&self, key: &str) -> Result<&str> {
        self.entries.get(key).map(String::as_str).ok_or_else(|| Error::Parse(format!("missing key {key}")))
    }

    pub fn get_parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self.get(key)?;
        raw.parse().map_err(|_| Error::Parse(format!("bad value for {key}: {raw:?}")))
    }

    pub fn get_opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key)? {
            "none" => Ok(None),
            _ => self.get_parsed(key).map(Some),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
