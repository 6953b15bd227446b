//! Common certificate schema for width measurements, canonical JSON and CSV
//! emitters.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How fiber diameters were obtained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    /// Exact per evaluated fiber.
    Exact,
    /// Samples binned by target `delta`-balls.
    Sampled { delta: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiberRow {
    pub key: String,
    pub diameter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub inputs_hash: String,
    pub method: Method,
    pub fibers: Vec<FiberRow>,
    pub width: f64,
    pub bound: Option<f64>,
    pub passed: bool,
    pub seed: u64,
    pub sample_count: usize,
    pub version: String,
    #[serde(default)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl Certificate {
    pub fn new<I: Serialize>(name: &str, inputs: &I, method: Method, seed: u64, sample_count: usize) -> Self {
        Self {
            name: name.to_string(),
            inputs_hash: hash_json(inputs),
            method,
            fibers: Vec::new(),
            width: 0.0,
            bound: None,
            passed: true,
            seed,
            sample_count,
            version: VERSION.to_string(),
            extra: BTreeMap::new(),
        }
    }

    /// Records a fiber and updates the running maximum.
    pub fn push_fiber(&mut self, key: impl Into<String>, diameter: f64) {
        self.width = self.width.max(diameter);
        self.fibers.push(FiberRow { key: key.into(), diameter });
    }

    /// Sets the bound and the verdict `width < bound` (strict) or `<=`.
    pub fn judge(&mut self, bound: f64, strict: bool) -> bool {
        self.bound = Some(bound);
        self.passed = if strict { self.width < bound } else { self.width <= bound };
        self.passed
    }

    pub fn with_extra(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
        self
    }
}

/// JSON with recursively sorted object keys.
pub fn canonical_json<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).map(|v| v.to_string()).unwrap_or_default()
}

pub fn canonical_json_pretty<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).and_then(|v| serde_json::to_string_pretty(&v)).unwrap_or_default()
}

/// SHA-256 of the canonical JSON form.
pub fn hash_json<T: Serialize>(x: &T) -> String {
    hex::encode(Sha256::digest(canonical_json(x).as_bytes()))
}

pub fn write_json<T: Serialize>(path: &Path, x: &T) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(canonical_json_pretty(x).as_bytes())?;
    f.write_all(b"\n")?;
    Ok(())
}

/// Writes a numeric series with a header row.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| std::io::Error::other(e.to_string()))?;
    w.write_record(header).map_err(|e| std::io::Error::other(e.to_string()))?;
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v}"))).map_err(|e| std::io::Error::other(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
