use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::Failure;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::Core(wnl_core::Error::Schema(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::Core(wnl_core::Error::Schema(format!("{}: {e}", path.display())))
    })
}

/// Stamp the document version onto a JSON object.
pub fn with_schema(v: Value) -> Value {
    let mut obj = match v {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    obj.insert("schema".into(), Value::String("1".into()));
    Value::Object(obj)
}

pub fn json_line<T: serde::Serialize>(v: &T) -> String {
    with_schema(serde_json::to_value(v).expect("serializable document")).to_string()
}

/// Collects the payload and writes it once, to stdout or to --out.
pub struct Sink {
    out: Option<PathBuf>,
    buf: String,
}

impl Sink {
    pub fn new(out: Option<PathBuf>) -> Self {
        Sink {
            out,
            buf: String::new(),
        }
    }

    pub fn line(&mut self, s: &str) {
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    pub fn finish(self) -> Result<(), Failure> {
        match self.out {
            Some(path) => std::fs::write(&path, self.buf).map_err(|e| {
                Failure::Core(wnl_core::Error::Schema(format!(
                    "cannot write {}: {e}",
                    path.display()
                )))
            }),
            None => {
                print!("{}", self.buf);
                Ok(())
            }
        }
    }
}
