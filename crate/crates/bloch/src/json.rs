//! JSON documents: finite numbers only, rounded to 15 significant digits,
//! complex numbers as `[re, im]`.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    format!("{x:.14e}").parse().expect("formatted float parses")
}

pub fn num(name: &str, x: f64) -> Result<Value> {
    if !x.is_finite() {
        return Err(CliError::Invalid(format!("{name} is not finite ({x})")));
    }
    Ok(Value::from(round15(x)))
}

pub fn complex(name: &str, z: Complex64) -> Result<Value> {
    Ok(Value::Array(vec![num(name, z.re)?, num(name, z.im)?]))
}

/// Insertion-checked object builder.
#[derive(Debug, Default)]
pub struct Obj(Map<String, Value>);

impl Obj {
    pub fn new() -> Self {
        Obj(Map::new())
    }

    pub fn num(mut self, key: &str, x: f64) -> Result<Self> {
        self.0.insert(key.to_owned(), num(key, x)?);
        Ok(self)
    }

    pub fn complex(mut self, key: &str, z: Complex64) -> Result<Self> {
        self.0.insert(key.to_owned(), complex(key, z)?);
        Ok(self)
    }

    pub fn val(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.0.insert(key.to_owned(), v.into());
        self
    }

    pub fn build(self) -> Value {
        Value::Object(self.0)
    }
}

/// Wrap a command's payload with the schema version and command name.
pub fn document(command: &str, body: Value) -> Value {
    Obj::new()
        .val("schema_version", SCHEMA_VERSION)
        .val("command", command)
        .val("result", body)
        .build()
}

pub fn to_string(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("values are serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round15(0.656_393_613_152_193_8), 0.656_393_613_152_194);
        assert_eq!(round15(1.0), 1.0);
        assert_eq!(round15(-2.5e-300), -2.5e-300);
        assert_eq!(serde_json::to_string(&num("x", 1.0 / 3.0).unwrap()).unwrap(), "0.333333333333333");
    }

    #[test]
    fn non_finite_is_an_error() {
        assert!(num("x", f64::NAN).is_err());
        assert!(num("x", f64::INFINITY).is_err());
        assert!(complex("z", Complex64::new(0.0, f64::NEG_INFINITY)).is_err());
    }
}
