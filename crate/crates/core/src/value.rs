//! A small ordered value tree with a compact one-line text syntax.
//!
//! ```text
//! none   42   -3   H10   "your turn to bet"   [a, b]   {amount: 3, eligible: [0, 1]}
//! ```
//!
//! Strings are written bare when they are a single token that cannot be read
//! back as something else, and quoted otherwise. Both the state codec and the
//! diff language are built on this syntax.

use std::fmt::{self, Write};

use thiserror::Error;

use crate::card::is_token_text;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    None,
    Int(i64),
    Str(String),
    List(Vec<Value>),
    /// Ordered map; key order is significant.
    Map(Vec<(String, Value)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {reason}")]
pub struct ValueError {
    pub col: usize,
    pub reason: String,
}

impl Value {
    pub fn str(s: impl Into<String>) -> Self {
        Value::Str(s.into())
    }

    pub fn list<T: Into<Value>>(items: impl IntoIterator<Item = T>) -> Self {
        Value::List(items.into_iter().map(Into::into).collect())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Str(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        match self {
            Value::Map(entries) => entries.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    pub fn get_mut(&mut self, key: &str) -> Option<&mut Value> {
        match self {
            Value::Map(entries) => entries.iter_mut().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }

    /// Compact one-line rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out);
        out
    }

    pub fn write_to(&self, out: &mut String) {
        match self {
            Value::None => out.push_str("none"),
            Value::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Value::Str(s) => write_str(s, out),
            Value::List(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write_to(out);
                }
                out.push(']');
            }
            Value::Map(entries) => {
                out.push('{');
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_str(k, out);
                    out.push_str(": ");
                    v.write_to(out);
                }
                out.push('}');
            }
        }
    }

    pub fn parse(text: &str) -> Result<Value, ValueError> {
        let mut p = Parser { src: text, pos: 0 };
        p.skip_ws();
        let v = p.value()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing characters"));
        }
        Ok(v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::Int(n)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::Int(n as i64)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

/// True when `s` can be written without quotes and read back as the same string.
pub(crate) fn is_bare(s: &str) -> bool {
    is_token_text(s) && s != "none" && !looks_numeric(s)
}

fn looks_numeric(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn write_str(s: &str, out: &mut String) {
    if is_bare(s) {
        out.push_str(s);
        return;
    }
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl Into<String>) -> ValueError {
        ValueError { col: self.pos + 1, reason: reason.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn expect(&mut self, want: char) -> Result<(), ValueError> {
        self.skip_ws();
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of input"))),
        }
    }

    fn value(&mut self) -> Result<Value, ValueError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("expected a value")),
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                self.skip_ws();
                if self.peek() == Some(']') {
                    self.bump();
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.value()?);
                    self.skip_ws();
                    match self.bump() {
                        Some(',') => continue,
                        Some(']') => return Ok(Value::List(items)),
                        _ => return Err(self.err("expected `,` or `]`")),
                    }
                }
            }
            Some('{') => {
                self.bump();
                let mut entries: Vec<(String, Value)> = Vec::new();
                self.skip_ws();
                if self.peek() == Some('}') {
                    self.bump();
                    return Ok(Value::Map(entries));
                }
                loop {
                    self.skip_ws();
                    let key = match self.scalar()? {
                        Value::Str(s) => s,
                        _ => return Err(self.err("map keys must be strings")),
                    };
                    if entries.iter().any(|(k, _)| *k == key) {
                        return Err(self.err(format!("duplicate key `{key}`")));
                    }
                    self.expect(':')?;
                    let v = self.value()?;
                    entries.push((key, v));
                    self.skip_ws();
                    match self.bump() {
                        Some(',') => continue,
                        Some('}') => return Ok(Value::Map(entries)),
                        _ => return Err(self.err("expected `,` or `}`")),
                    }
                }
            }
            Some(_) => self.scalar(),
        }
    }

    fn scalar(&mut self) -> Result<Value, ValueError> {
        if self.peek() == Some('"') {
            self.bump();
            let mut s = String::new();
            loop {
                match self.bump() {
                    None => return Err(self.err("unterminated string")),
                    Some('"') => return Ok(Value::Str(s)),
                    Some('\\') => match self.bump() {
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('r') => s.push('\r'),
                        _ => return Err(self.err("bad escape")),
                    },
                    Some(c) => s.push(c),
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '[' | ']' | '{' | '}' | ',' | ':' | '"' | '=' | '#') {
                break;
            }
            self.bump();
        }
        let tok = &self.src[start..self.pos];
        if tok.is_empty() {
            return Err(self.err("expected a value"));
        }
        if tok == "none" {
            return Ok(Value::None);
        }
        if looks_numeric(tok) {
            return tok.parse().map(Value::Int).map_err(|_| self.err("integer out of range"));
        }
        Ok(Value::Str(tok.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_compactly() {
        let v = Value::Map(vec![
            ("amount".into(), Value::Int(3)),
            ("eligible".into(), Value::list([0usize, 1])),
            ("text".into(), Value::str("your turn")),
            ("card".into(), Value::str("H10")),
            ("n".into(), Value::str("12")),
            ("empty".into(), Value::None),
        ]);
        assert_eq!(v.render(), r#"{amount: 3, eligible: [0, 1], text: "your turn", card: H10, n: "12", empty: none}"#);
        assert_eq!(Value::parse(&v.render()).unwrap(), v);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["[1, 2", "{a 1}", "{a: 1, a: 2}", "\"open", "1 2", ""] {
            assert!(Value::parse(bad).is_err(), "{bad}");
        }
    }

    fn arb_value() -> impl Strategy<Value = Value> {
        let leaf = prop_oneof![
            Just(Value::None),
            any::<i64>().prop_map(Value::Int),
            "[a-zA-Z0-9 _\\-\"\\\\/*().]{0,8}".prop_map(Value::Str),
        ];
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 0..4).prop_map(Value::List),
                prop::collection::btree_map("[a-z_]{1,6}", inner, 0..4)
                    .prop_map(|m| Value::Map(m.into_iter().collect())),
            ]
        })
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(v in arb_value()) {
            prop_assert_eq!(Value::parse(&v.render()).unwrap(), v);
        }
    }
}
