//! Runtime values.
//!
//! Every value flowing through a query is a [`Value`]. Equality is numeric
//! across `Int` and `Double`; the ordering used by `Sort`, `Top`, `Min` and
//! `Max` ranks types as
//! `Bool < Int/Double < DateTime < Duration < String < Text < Id < Record`
//! and treats all records as equal to one another.

mod temporal;

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

pub use temporal::{Date, DateTime, Duration, TimeOfDay};

#[derive(Debug, Clone)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Double(f64),
    String(String),
    Text { text: String, lang: String },
    DateTime(DateTime),
    Duration(Duration),
    Id(String),
    Record(Record),
}

impl Value {
    pub fn id(s: impl Into<String>) -> Self {
        Value::Id(s.into())
    }

    pub fn string(s: impl Into<String>) -> Self {
        Value::String(s.into())
    }

    pub fn text(text: impl Into<String>, lang: impl Into<String>) -> Self {
        Value::Text {
            text: text.into(),
            lang: lang.into(),
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "Bool",
            Value::Int(_) => "Int",
            Value::Double(_) => "Double",
            Value::String(_) => "String",
            Value::Text { .. } => "Text",
            Value::DateTime(_) => "DateTime",
            Value::Duration(_) => "Duration",
            Value::Id(_) => "Id",
            Value::Record(_) => "Record",
        }
    }

    pub fn is_record(&self) -> bool {
        matches!(self, Value::Record(_))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Double(_))
    }

    pub fn as_record(&self) -> Option<&Record> {
        match self {
            Value::Record(r) => Some(r),
            _ => None,
        }
    }

    /// Only `false` is falsy.
    pub fn is_truthy(&self) -> bool {
        !matches!(self, Value::Bool(false))
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Bool(_) => 0,
            Value::Int(_) | Value::Double(_) => 1,
            Value::DateTime(_) => 2,
            Value::Duration(_) => 3,
            Value::String(_) => 4,
            Value::Text { .. } => 5,
            Value::Id(_) => 6,
            Value::Record(_) => 7,
        }
    }

    /// Semantic equality. `NaN` is unequal to everything, itself included.
    pub fn equals(&self, other: &Value) -> bool {
        use Value::*;
        match (self, other) {
            (Bool(a), Bool(b)) => a == b,
            (Int(a), Int(b)) => a == b,
            (Double(a), Double(b)) => a == b,
            (Int(i), Double(d)) | (Double(d), Int(i)) => {
                !d.is_nan() && cmp_int_double(*i, *d) == Ordering::Equal
            }
            (String(a), String(b)) | (Id(a), Id(b)) => a == b,
            (Text { text: t1, lang: l1 }, Text { text: t2, lang: l2 }) => t1 == t2 && l1 == l2,
            (DateTime(a), DateTime(b)) => a == b,
            (Duration(a), Duration(b)) => a == b,
            (Record(a), Record(b)) => a.equals(b),
            _ => false,
        }
    }

    /// The nearly-total value ordering. Records compare equal to each other.
    pub fn compare(&self, other: &Value) -> Ordering {
        use Value::*;
        match (self, other) {
            (Bool(a), Bool(b)) => a.cmp(b),
            (Int(a), Int(b)) => a.cmp(b),
            (Double(a), Double(b)) => cmp_doubles(*a, *b),
            (Int(i), Double(d)) => cmp_int_double(*i, *d),
            (Double(d), Int(i)) => cmp_int_double(*i, *d).reverse(),
            (DateTime(a), DateTime(b)) => a.cmp(b),
            (Duration(a), Duration(b)) => a.cmp(b),
            (String(a), String(b)) | (Id(a), Id(b)) => a.cmp(b),
            (Text { text: t1, lang: l1 }, Text { text: t2, lang: l2 }) => {
                t1.cmp(t2).then_with(|| l1.cmp(l2))
            }
            (Record(_), Record(_)) => Ordering::Equal,
            (a, b) => a.rank().cmp(&b.rank()),
        }
    }

    /// A hashable key such that `a.equals(b)` iff both keys are `Some` and
    /// equal. Values containing `NaN` have no key.
    pub fn eq_key(&self) -> Option<EqKey> {
        Some(match self {
            Value::Bool(b) => EqKey::Bool(*b),
            Value::Int(i) => EqKey::Int(*i),
            Value::Double(d) => {
                if d.is_nan() {
                    return None;
                }
                match exact_i64(*d) {
                    Some(i) => EqKey::Int(i),
                    None => EqKey::Double(d.to_bits()),
                }
            }
            Value::String(s) => EqKey::String(s.clone()),
            Value::Text { text, lang } => EqKey::Text(text.clone(), lang.clone()),
            Value::DateTime(dt) => EqKey::DateTime(*dt),
            Value::Duration(d) => EqKey::Duration(*d),
            Value::Id(s) => EqKey::Id(s.clone()),
            Value::Record(r) => EqKey::Record(
                r.fields()
                    .iter()
                    .map(|(name, vals)| {
                        let keys = vals.iter().map(Value::eq_key).collect::<Option<Vec<_>>>()?;
                        Some((name.clone(), keys))
                    })
                    .collect::<Option<Vec<_>>>()?,
            ),
        })
    }

    /// The literal syntax for this value. Records span several lines.
    pub fn render_literal(&self) -> String {
        let mut out = String::new();
        self.write_literal(&mut out, Some(0));
        out
    }

    /// Like [`Value::render_literal`] but always on one line.
    pub fn render_compact(&self) -> String {
        let mut out = String::new();
        self.write_literal(&mut out, None);
        out
    }

    /// `indent` is `None` for single-line output.
    fn write_literal(&self, out: &mut String, indent: Option<usize>) {
        match self {
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Value::Double(d) => write_double(out, *d),
            Value::String(s) => write_quoted(out, s),
            Value::Text { text, lang } => {
                out.push_str("Text(");
                write_quoted(out, text);
                out.push_str(", ");
                write_quoted(out, lang);
                out.push(')');
            }
            Value::DateTime(dt) => {
                let _ = write!(out, "DateTime('{dt}')");
            }
            Value::Duration(d) => {
                let _ = write!(out, "Duration('{d}')");
            }
            Value::Id(s) => {
                out.push_str("Id(");
                write_quoted(out, s);
                out.push(')');
            }
            Value::Record(r) => r.write_literal(out, indent),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_literal())
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<f64> for Value {
    fn from(d: f64) -> Self {
        Value::Double(d)
    }
}

impl From<Record> for Value {
    fn from(r: Record) -> Self {
        Value::Record(r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EqKey {
    Bool(bool),
    Int(i64),
    Double(u64),
    String(String),
    Text(String, String),
    DateTime(DateTime),
    Duration(Duration),
    Id(String),
    Record(Vec<(String, Vec<EqKey>)>),
}

/// `NaN` sorts after `+inf` and equal to itself.
fn cmp_doubles(a: f64, b: f64) -> Ordering {
    match (a.is_nan(), b.is_nan()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => a.partial_cmp(&b).expect("non-NaN doubles are comparable"),
    }
}

/// Exact comparison of an integer against a double, without rounding the
/// integer through `f64`.
fn cmp_int_double(i: i64, d: f64) -> Ordering {
    if d.is_nan() {
        return Ordering::Less;
    }
    // 2^63 is exactly representable; every i64 is below it.
    const TWO_63: f64 = 9_223_372_036_854_775_808.0;
    if d >= TWO_63 {
        return Ordering::Less;
    }
    if d < -TWO_63 {
        return Ordering::Greater;
    }
    let whole = d.trunc();
    let t = whole as i64;
    match i.cmp(&t) {
        Ordering::Equal => {
            let frac = d - whole;
            if frac > 0.0 {
                Ordering::Less
            } else if frac < 0.0 {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        }
        other => other,
    }
}

fn exact_i64(d: f64) -> Option<i64> {
    if d.is_finite() && d.trunc() == d && (-9.223_372_036_854_776e18..9.223_372_036_854_776e18).contains(&d)
    {
        Some(d as i64)
    } else {
        None
    }
}

fn write_double(out: &mut String, d: f64) {
    if d.is_nan() {
        out.push_str("Double('nan')");
    } else if d.is_infinite() {
        out.push_str(if d > 0.0 { "Double('inf')" } else { "Double('-inf')" });
    } else {
        // `{:?}` is the shortest round-tripping form and keeps a `.0` or an
        // exponent, so it never reads back as an Int.
        let _ = write!(out, "{d:?}");
    }
}

pub(crate) fn write_quoted(out: &mut String, s: &str) {
    out.push('\'');
    for c in s.chars() {
        match c {
            '\'' => out.push_str("\\'"),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{{{:x}}}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('\'');
}

/// Named fields, each holding one or more values, in first-insertion order.
#[derive(Debug, Clone, Default)]
pub struct Record {
    fields: Vec<(String, Vec<Value>)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    /// Appends `value` to field `name`, creating the field if needed.
    pub fn push(&mut self, name: &str, value: Value) {
        match self.fields.iter_mut().find(|(n, _)| n == name) {
            Some((_, vals)) => vals.push(value),
            None => self.fields.push((name.to_string(), vec![value])),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<Value>) -> Self {
        self.push(name, value.into());
        self
    }

    /// Splices every field of `other` into this record.
    pub fn merge(&mut self, other: &Record) {
        for (name, vals) in &other.fields {
            for v in vals {
                self.push(name, v.clone());
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&[Value]> {
        self.fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn fields(&self) -> &[(String, Vec<Value>)] {
        &self.fields
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    fn equals(&self, other: &Record) -> bool {
        self.fields.len() == other.fields.len()
            && self.fields.iter().zip(&other.fields).all(|((n1, v1), (n2, v2))| {
                n1 == n2 && v1.len() == v2.len() && v1.iter().zip(v2).all(|(a, b)| a.equals(b))
            })
    }

    fn write_literal(&self, out: &mut String, indent: Option<usize>) {
        match indent {
            None => {
                out.push('{');
                for (name, vals) in &self.fields {
                    for v in vals {
                        let _ = write!(out, " {name}: ");
                        v.write_literal(out, None);
                    }
                }
                out.push_str(" }");
            }
            Some(depth) => {
                out.push_str("{\n");
                let pad = "  ".repeat(depth + 1);
                for (name, vals) in &self.fields {
                    for v in vals {
                        let _ = write!(out, "{pad}{name}: ");
                        v.write_literal(out, Some(depth + 1));
                        out.push('\n');
                    }
                }
                out.push_str(&"  ".repeat(depth));
                out.push('}');
            }
        }
    }
}

impl PartialEq for Record {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_not_strings() {
        assert!(!Value::id("/x").equals(&Value::string("/x")));
        assert_ne!(Value::id("/x").compare(&Value::string("/x")), Ordering::Equal);
    }

    #[test]
    fn int_and_double_are_numerically_equal() {
        assert!(Value::Int(5).equals(&Value::Double(5.0)));
        assert_eq!(Value::Int(2).compare(&Value::Double(2.5)), Ordering::Less);
        assert_eq!(Value::Double(2.5).compare(&Value::Int(2)), Ordering::Greater);
        // 2^53 + 1 has no exact double; it must not collapse onto 2^53.
        let big = (1i64 << 53) + 1;
        assert!(!Value::Int(big).equals(&Value::Double((1i64 << 53) as f64)));
        assert_eq!(
            Value::Int(big).compare(&Value::Double((1i64 << 53) as f64)),
            Ordering::Greater
        );
    }

    #[test]
    fn nan_handling() {
        let nan = Value::Double(f64::NAN);
        assert!(!nan.equals(&nan));
        assert_eq!(nan.compare(&nan), Ordering::Equal);
        assert_eq!(
            Value::Double(f64::INFINITY).compare(&nan),
            Ordering::Less
        );
        assert_eq!(Value::Int(i64::MAX).compare(&nan), Ordering::Less);
        assert!(nan.eq_key().is_none());
    }

    #[test]
    fn records_are_unordered_among_themselves() {
        let a = Value::Record(Record::new().with("f", 1i64));
        let b = Value::Record(Record::new().with("g", 2i64));
        assert_eq!(a.compare(&b), Ordering::Equal);
        assert!(!a.equals(&b));
        assert_eq!(Value::id("/z").compare(&a), Ordering::Less);
    }

    #[test]
    fn type_rank_order() {
        let ascending = [
            Value::Bool(false),
            Value::Bool(true),
            Value::Int(-3),
            Value::Double(0.5),
            Value::DateTime(DateTime::parse("2019-10-31").unwrap()),
            Value::Duration(Duration::from_secs(1).unwrap()),
            Value::string("a"),
            Value::text("a", "en"),
            Value::id("/a"),
            Value::Record(Record::new().with("f", 1i64)),
        ];
        for w in ascending.windows(2) {
            assert_eq!(w[0].compare(&w[1]), Ordering::Less, "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn truthiness() {
        assert!(!Value::Bool(false).is_truthy());
        assert!(Value::Bool(true).is_truthy());
        assert!(Value::Int(0).is_truthy());
        assert!(Value::string("").is_truthy());
        assert!(Value::Record(Record::new().with("f", 5i64)).is_truthy());
    }

    #[test]
    fn render_table_forms() {
        assert_eq!(Value::id("/z/14znzk").render_literal(), "Id('/z/14znzk')");
        assert_eq!(
            Value::text("hello world", "en").render_literal(),
            "Text('hello world', 'en')"
        );
        assert_eq!(
            Value::Duration(Duration::from_secs(90).unwrap()).render_literal(),
            "Duration('PT1M30S')"
        );
        assert_eq!(Value::Double(5.0).render_literal(), "5.0");
        assert_eq!(Value::Double(-0.01e-15).render_literal(), "-1e-17");
        assert_eq!(Value::Double(f64::NEG_INFINITY).render_literal(), "Double('-inf')");
        assert_eq!(Value::string("it's").render_literal(), r"'it\'s'");
    }

    #[test]
    fn record_render_nests() {
        let hours = Record::new()
            .with("days", Value::string("MTWR"))
            .with("start", Value::DateTime(DateTime::parse("T09:00").unwrap()));
        let r = Record::new()
            .with("id", Value::id("/z/1"))
            .with("open_hours", hours.clone())
            .with("open_hours", hours);
        let expected = "{\n  id: Id('/z/1')\n  open_hours: {\n    days: 'MTWR'\n    start: DateTime('T09:00')\n  }\n  open_hours: {\n    days: 'MTWR'\n    start: DateTime('T09:00')\n  }\n}";
        assert_eq!(Value::Record(r.clone()).render_literal(), expected);
        assert_eq!(
            Value::Record(Record::new().with("f", 5i64)).render_compact(),
            "{ f: 5 }"
        );
    }

    #[test]
    fn eq_key_matches_equals() {
        let vals = [
            Value::Int(5),
            Value::Double(5.0),
            Value::Double(-0.0),
            Value::Int(0),
            Value::Double(0.5),
            Value::text("a", "en"),
            Value::text("a", "fr"),
        ];
        for a in &vals {
            for b in &vals {
                assert_eq!(a.equals(b), a.eq_key() == b.eq_key(), "{a} vs {b}");
            }
        }
    }
}
