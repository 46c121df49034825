//! Minimal deterministic JSON writer.
//!
//! The command-line tool and the trace writer emit JSON whose key order,
//! number formatting and whitespace must be byte-identical across runs and
//! platforms: the test suite diffs outputs literally.  General-purpose
//! serializers make no ordering promise for maps, so this module provides a
//! tiny document model that preserves insertion order and renders every float
//! through the same 17-significant-digit formatter as the field files.
//!
//! Only writing is implemented — the crate never needs to parse JSON.

use crate::fieldcsv::fmt_float;

/// A JSON value with insertion-ordered object keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    /// `null`.
    Null,
    /// `true` / `false`.
    Bool(bool),
    /// A float, rendered with 17 significant digits; non-finite values render
    /// as `null` since JSON has no representation for them.
    Num(f64),
    /// An integer, rendered without an exponent.
    Int(i64),
    /// A string, escaped per the JSON grammar.
    Str(String),
    /// An array.
    Arr(Vec<Json>),
    /// An object; keys keep their insertion order.
    Obj(Vec<(String, Json)>),
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<i64> for Json {
    fn from(v: i64) -> Self {
        Json::Int(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_owned())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl Json {
    /// Renders the value as pretty-printed JSON with two-space indentation
    /// and no trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Num(v) => {
                if v.is_finite() {
                    out.push_str(&fmt_float(*v));
                } else {
                    out.push_str("null");
                }
            }
            Json::Int(v) => out.push_str(&v.to_string()),
            Json::Str(s) => write_escaped(out, s),
            Json::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    item.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push(']');
            }
            Json::Obj(entries) => {
                if entries.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push('{');
                for (i, (key, value)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('\n');
                    push_indent(out, indent + 1);
                    write_escaped(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                }
                out.push('\n');
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, levels: usize) {
    for _ in 0..levels {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{08}' => out.push_str("\\b"),
            '\u{0c}' => out.push_str("\\f"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Incremental builder for ordered objects; `maybe` entries with `None`
/// values are omitted entirely rather than rendered as `null`, matching the
/// output contract for optional report fields.
#[derive(Debug, Default)]
pub struct ObjBuilder {
    entries: Vec<(String, Json)>,
}

impl ObjBuilder {
    /// An empty object builder.
    pub fn new() -> Self {
        ObjBuilder::default()
    }

    /// Appends a key–value entry.
    pub fn field(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.entries.push((key.to_owned(), value.into()));
        self
    }

    /// Appends the entry only when the value is present.
    pub fn maybe(mut self, key: &str, value: Option<impl Into<Json>>) -> Self {
        if let Some(v) = value {
            self.entries.push((key.to_owned(), v.into()));
        }
        self
    }

    /// Finishes the object.
    pub fn build(self) -> Json {
        Json::Obj(self.entries)
    }
}
