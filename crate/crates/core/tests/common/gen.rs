//! Value generators.

use proptest::prelude::*;

use pathquery::value::{Date, DateTime, Duration, Record, TimeOfDay, Value};

fn double() -> impl Strategy<Value = f64> {
    prop_oneof![
        4 => any::<f64>(),
        2 => (-1000i64..1000).prop_map(|i| i as f64 / 8.0),
        1 => Just(f64::INFINITY),
        1 => Just(f64::NEG_INFINITY),
        1 => Just(-0.0),
        1 => Just(f64::NAN),
    ]
}

fn int() -> impl Strategy<Value = i64> {
    prop_oneof![
        3 => -1000i64..1000,
        1 => any::<i64>(),
        1 => Just(i64::MIN),
        1 => Just(i64::MAX),
    ]
}

fn datetime() -> impl Strategy<Value = DateTime> {
    let date = (1i32..=9999, 1u8..=12, 1u8..=28).prop_map(|(year, month, day)| Date { year, month, day });
    let time = (0u8..24, 0u8..60, 0u8..60).prop_map(|(hour, minute, second)| TimeOfDay {
        hour,
        minute,
        second,
    });
    let offset = prop_oneof![Just(None), (-23 * 60 + 1..23 * 60).prop_map(|m: i32| Some(m - m % 15))];
    (
        proptest::option::of(date),
        proptest::option::of(time),
        offset,
    )
        .prop_filter_map("needs a date or a time", |(d, t, off)| {
            DateTime::new(d, t, if t.is_some() { off } else { None }).ok()
        })
}

pub fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => "[a-zA-Z0-9 ]{0,8}",
        1 => any::<String>(),
        1 => Just("it's \"quoted\" \\ \n\t".to_string()),
    ]
}

/// Every non-Record type, including awkward doubles and strings.
pub fn scalar() -> impl Strategy<Value = Value> {
    prop_oneof![
        any::<bool>().prop_map(Value::Bool),
        int().prop_map(Value::Int),
        double().prop_map(Value::Double),
        text().prop_map(Value::String),
        (text(), "[a-z]{2}(-[A-Z]{2})?").prop_map(|(t, l)| Value::text(t, l)),
        datetime().prop_map(Value::DateTime),
        (-100_000_000i64..100_000_000).prop_map(|s| Value::Duration(Duration::from_secs(s).unwrap())),
        prop_oneof!["/[a-z0-9_/]{0,10}", any::<String>()].prop_map(Value::Id),
    ]
}

/// Scalars without NaN, so that every value equals itself.
pub fn scalar_no_nan() -> impl Strategy<Value = Value> {
    scalar().prop_filter("NaN", |v| !matches!(v, Value::Double(d) if d.is_nan()))
}

pub fn field_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,5}"
}

/// Any value, Records nested up to two levels.
pub fn value() -> impl Strategy<Value = Value> {
    scalar().prop_recursive(2, 16, 4, |inner| {
        proptest::collection::vec((field_name(), inner), 1..4).prop_map(|fields| {
            let mut r = Record::new();
            for (n, v) in fields {
                r.push(&n, v);
            }
            Value::Record(r)
        })
    })
}

/// Small non-NaN scalars drawn from a narrow pool, so duplicates are common.
pub fn pooled_scalar() -> impl Strategy<Value = Value> {
    prop_oneof![
        (-3i64..4).prop_map(Value::Int),
        (-3i64..4).prop_map(|i| Value::Double(i as f64 / 2.0)),
        "[ab]{1,2}".prop_map(Value::String),
        ("[ab]", prop_oneof![Just("en"), Just("fr")]).prop_map(|(t, l)| Value::text(t, l)),
        "/[xy]".prop_map(Value::Id),
        any::<bool>().prop_map(Value::Bool),
    ]
}

/// Query text for a tuple of literal sources, e.g. `(1, 'a')` or `(1,)`.
pub fn tuple_source(vals: &[Value]) -> String {
    let parts: Vec<String> = vals.iter().map(Value::render_compact).collect();
    if parts.len() == 1 {
        format!("({},)", parts[0])
    } else {
        format!("({})", parts.join(", "))
    }
}
