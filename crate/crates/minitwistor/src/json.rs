//! Deterministic JSON emission: fields are written in the order the caller
//! requests them and every float is printed with 17 significant digits, so a
//! repeated run produces byte-identical output.

use std::io::Write;
use std::path::Path;

use crate::error::Result;

/// Fixed-format float: 17 significant digits, scientific notation.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".into()
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Streaming writer for JSON documents with caller-controlled field order.
pub struct JsonWriter {
    buf: String,
    /// One entry per open container: true until the first element is written.
    first: Vec<bool>,
}

impl JsonWriter {
    pub fn new() -> JsonWriter {
        JsonWriter {
            buf: String::new(),
            first: Vec::new(),
        }
    }

    fn sep(&mut self) {
        if let Some(first) = self.first.last_mut() {
            if *first {
                *first = false;
            } else {
                self.buf.push(',');
            }
        }
    }

    pub fn begin_object(&mut self) -> &mut Self {
        self.sep();
        self.buf.push('{');
        self.first.push(true);
        self
    }

    pub fn end_object(&mut self) -> &mut Self {
        self.first.pop();
        self.buf.push('}');
        self
    }

    pub fn begin_array(&mut self) -> &mut Self {
        self.sep();
        self.buf.push('[');
        self.first.push(true);
        self
    }

    pub fn end_array(&mut self) -> &mut Self {
        self.first.pop();
        self.buf.push(']');
        self
    }

    pub fn key(&mut self, k: &str) -> &mut Self {
        self.sep();
        self.buf.push('"');
        self.buf.push_str(&escape(k));
        self.buf.push_str("\":");
        // the value that follows must not emit another separator
        self.first.push(true);
        self
    }

    fn end_value(&mut self) {
        // pop the guard pushed by `key`, if the value closed it
        if let Some(true) = self.first.last() {
            // value not yet written; nothing to do
        }
    }

    fn raw_value(&mut self, s: &str) -> &mut Self {
        self.sep();
        self.buf.push_str(s);
        self.end_value();
        self
    }

    pub fn num(&mut self, v: f64) -> &mut Self {
        let s = fmt_f64(v);
        self.raw_value(&s)
    }

    pub fn int(&mut self, v: i64) -> &mut Self {
        let s = v.to_string();
        self.raw_value(&s)
    }

    pub fn boolean(&mut self, v: bool) -> &mut Self {
        self.raw_value(if v { "true" } else { "false" })
    }

    pub fn string(&mut self, v: &str) -> &mut Self {
        let s = format!("\"{}\"", escape(v));
        self.raw_value(&s)
    }

    /// Close the guard opened by `key` after its value has been written.
    fn close_key(&mut self) {
        self.first.pop();
    }

    pub fn field_num(&mut self, k: &str, v: f64) -> &mut Self {
        self.key(k).num(v);
        self.close_key();
        self
    }

    pub fn field_int(&mut self, k: &str, v: i64) -> &mut Self {
        self.key(k).int(v);
        self.close_key();
        self
    }

    pub fn field_bool(&mut self, k: &str, v: bool) -> &mut Self {
        self.key(k).boolean(v);
        self.close_key();
        self
    }

    pub fn field_str(&mut self, k: &str, v: &str) -> &mut Self {
        self.key(k).string(v);
        self.close_key();
        self
    }

    pub fn field_nums(&mut self, k: &str, vs: &[f64]) -> &mut Self {
        self.key(k).begin_array();
        for &v in vs {
            self.num(v);
        }
        self.end_array();
        self.close_key();
        self
    }

    /// Open an object-valued field; the caller ends it with `end_field`.
    pub fn field_object(&mut self, k: &str) -> &mut Self {
        self.key(k).begin_object();
        self
    }

    /// Open an array-valued field; the caller ends it with `end_field_array`.
    pub fn field_array(&mut self, k: &str) -> &mut Self {
        self.key(k).begin_array();
        self
    }

    pub fn end_field(&mut self) -> &mut Self {
        self.end_object();
        self.close_key();
        self
    }

    pub fn end_field_array(&mut self) -> &mut Self {
        self.end_array();
        self.close_key();
        self
    }

    pub fn finish(mut self) -> String {
        self.buf.push('\n');
        self.buf
    }
}

impl Default for JsonWriter {
    fn default() -> Self {
        JsonWriter::new()
    }
}

/// Write a file atomically: to a sibling temp file first, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{stem}.tmp"));
    {
        let mut fh = std::fs::File::create(&tmp)?;
        fh.write_all(bytes)?;
        fh.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_order_and_float_format() {
        let mut w = JsonWriter::new();
        w.begin_object();
        w.field_str("name", "a \"b\"\n");
        w.field_num("x", 0.25);
        w.field_int("n", -3);
        w.field_bool("ok", true);
        w.field_nums("v", &[1.0, -2.0]);
        w.field_object("inner").field_num("y", 1e-300).end_field();
        w.field_array("rows");
        w.begin_array().num(1.5).end_array();
        w.end_field_array();
        w.end_object();
        let s = w.finish();
        assert!(s.starts_with("{\"name\":\"a \\\"b\\\"\\n\",\"x\":2.5000000000000000e-1,"));
        assert!(s.contains("\"n\":-3,\"ok\":true,\"v\":[1.0000000000000000e0,-2.0000000000000000e0]"));
        assert!(s.contains("\"inner\":{\"y\":1.0000000000000000e-300}"));
        assert!(s.contains("\"rows\":[[1.5000000000000000e0]]"));
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn deterministic_repeat() {
        let build = || {
            let mut w = JsonWriter::new();
            w.begin_object();
            w.field_num("a", std::f64::consts::PI);
            w.field_num("b", 1.0 / 3.0);
            w.end_object();
            w.finish()
        };
        assert_eq!(build(), build());
    }
}
