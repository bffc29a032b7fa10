use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// `x` rounded to 12 significant digits, printed in its shortest round-trip form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let magnitude = rounded.abs();
    if magnitude != 0.0 && !(1e-4..1e12).contains(&magnitude) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// CSV writer with LF endings and a mandatory header.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> anyhow::Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Self { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn finish(self) -> anyhow::Result<String> {
        let bytes = self.writer.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(String::from_utf8(bytes)?)
    }
}

/// Serializes `body` with `schema_version` as the first key.
pub fn versioned<T: Serialize>(body: &T) -> anyhow::Result<Value> {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    match serde_json::to_value(body)? {
        Value::Object(fields) => out.extend(fields),
        other => {
            out.insert("result".into(), other);
        }
    }
    Ok(Value::Object(out))
}

pub fn emit(text: &str) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        stdout.write_all(b"\n")?;
    }
    stdout.flush()?;
    Ok(())
}

pub fn emit_json(value: &Value) -> anyhow::Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(sig12(4.0 * std::f64::consts::PI), "12.5663706144");
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(f64::INFINITY), "inf");
        assert_eq!(sig12(-2.5e-20), "-2.5e-20");
        assert_eq!(sig12(2.6645352591e-15), "2.6645352591e-15");
        assert_eq!(sig12(123456789012345.0), "1.23456789012e14");
    }

    #[test]
    fn table_layout() {
        let mut t = Table::new(&["a", "b"]).unwrap();
        t.row(["1", "x,y"]).unwrap();
        assert_eq!(t.finish().unwrap(), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn schema_first() {
        let v = versioned(&json!({"capacity": 1.0})).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with("{\"schema_version\":1"));
    }
}
