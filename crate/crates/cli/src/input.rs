//! Reading the job object: a file path, `-` for stdin, or inline JSON.

use std::io::Read;

use serde_json::Value;
use tropical_pencil::json::{config_from_json, point_from_json, support_from_json, tree_from_json, TreeInput};
use tropical_pencil::primitives::{ProjPoint, SupportSet};
use tropical_pencil::{fixtures, Error, Result};

pub struct Job {
    pub value: Value,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

impl Job {
    pub fn load(source: Option<&str>) -> Result<Job> {
        let text = match source {
            None | Some("-") => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| bad(format!("stdin: {e}")))?;
                s
            }
            Some(s) if s.trim_start().starts_with('{') => s.to_string(),
            Some(path) => std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?,
        };
        let value: Value = serde_json::from_str(&text).map_err(|e| bad(format!("JSON: {e}")))?;
        if !value.is_object() {
            return Err(bad("input must be a JSON object"));
        }
        Ok(Job { value })
    }

    fn field(&self, key: &str) -> Result<&Value> {
        self.value.get(key).ok_or_else(|| bad(format!("missing field \"{key}\"")))
    }

    pub fn has(&self, key: &str) -> bool {
        self.value.get(key).is_some_and(|v| !v.is_null())
    }

    /// `"support"` is a support object or one of the fixture names.
    pub fn support(&self) -> Result<SupportSet> {
        match self.field("support")? {
            Value::String(name) => match name.as_str() {
                "square" => Ok(fixtures::square()),
                "triangle" => Ok(fixtures::triangle()),
                "conic" => Ok(fixtures::conic()),
                "conic_boundary" => Ok(fixtures::conic_boundary()),
                other => Err(bad(format!("unknown support name {other:?}"))),
            },
            v => support_from_json(v),
        }
    }

    pub fn coeffs(&self, n: usize) -> Result<ProjPoint> {
        point_from_json(self.field("coeffs")?, Some(n))
    }

    pub fn point(&self) -> Result<ProjPoint> {
        point_from_json(self.field("point")?, Some(3))
    }

    pub fn configuration(&self) -> Result<Vec<ProjPoint>> {
        config_from_json(self.field("configuration")?)
    }

    pub fn tree(&self) -> Result<TreeInput> {
        tree_from_json(self.field("tree")?)
    }

    pub fn type_id(&self) -> Result<usize> {
        self.field("type_id")?.as_u64().map(|k| k as usize).ok_or_else(|| bad("\"type_id\" must be a positive integer"))
    }
}
