//! `DateTime` and `Duration` values: ISO 8601 subsets without subsecond
//! precision.

use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeOfDay {
    pub hour: u8,
    pub minute: u8,
    pub second: u8,
}

/// A date, a time of day, or both, with an optional UTC offset in minutes.
///
/// At least one of `date` and `time` is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DateTime {
    date: Option<Date>,
    time: Option<TimeOfDay>,
    offset_minutes: Option<i32>,
}

impl DateTime {
    pub fn new(
        date: Option<Date>,
        time: Option<TimeOfDay>,
        offset_minutes: Option<i32>,
    ) -> Result<Self, String> {
        if date.is_none() && time.is_none() {
            return Err("DateTime needs a date or a time".into());
        }
        if let Some(d) = date {
            if !(1..=12).contains(&d.month) || d.day == 0 || d.day > days_in_month(d.year, d.month)
            {
                return Err(format!("invalid date {:04}-{:02}-{:02}", d.year, d.month, d.day));
            }
        }
        if let Some(t) = time {
            if t.hour > 23 || t.minute > 59 || t.second > 59 {
                return Err(format!(
                    "invalid time {:02}:{:02}:{:02}",
                    t.hour, t.minute, t.second
                ));
            }
        }
        if let Some(off) = offset_minutes {
            if off.abs() >= 24 * 60 {
                return Err(format!("invalid UTC offset of {off} minutes"));
            }
        }
        Ok(DateTime {
            date,
            time,
            offset_minutes,
        })
    }

    pub fn date(&self) -> Option<Date> {
        self.date
    }

    pub fn time(&self) -> Option<TimeOfDay> {
        self.time
    }

    pub fn offset_minutes(&self) -> Option<i32> {
        self.offset_minutes
    }

    /// Seconds relative to 1970-01-01T00:00:00Z with absent parts zeroed.
    fn instant(&self) -> i64 {
        let days = self
            .date
            .map(|d| days_from_civil(d.year, d.month, d.day))
            .unwrap_or(0);
        let secs = self
            .time
            .map(|t| i64::from(t.hour) * 3600 + i64::from(t.minute) * 60 + i64::from(t.second))
            .unwrap_or(0);
        days * 86_400 + secs - i64::from(self.offset_minutes.unwrap_or(0)) * 60
    }

    fn sort_key(&self) -> (bool, bool, i64, Option<i32>) {
        (
            self.date.is_some(),
            self.time.is_some(),
            self.instant(),
            self.offset_minutes,
        )
    }

    /// Parses the body of a `DateTime('...')` literal.
    pub fn parse(text: &str) -> Result<Self, String> {
        let bad = || format!("malformed DateTime '{text}'");
        let (date_part, rest) = match text.find('T') {
            Some(i) => (&text[..i], Some(&text[i + 1..])),
            None => (text, None),
        };
        let date = if date_part.is_empty() {
            None
        } else {
            let mut it = date_part.splitn(3, '-');
            let (y, m, d) = (it.next(), it.next(), it.next());
            match (y, m, d) {
                (Some(y), Some(m), Some(d))
                    if y.len() == 4 && m.len() == 2 && d.len() == 2 =>
                {
                    Some(Date {
                        year: digits(y).ok_or_else(bad)? as i32,
                        month: digits(m).ok_or_else(bad)? as u8,
                        day: digits(d).ok_or_else(bad)? as u8,
                    })
                }
                _ => return Err(bad()),
            }
        };
        let (time, offset) = match rest {
            None => (None, None),
            Some(rest) => {
                let (clock, offset) = split_offset(rest).ok_or_else(bad)?;
                let parts: Vec<&str> = clock.split(':').collect();
                if !(2..=3).contains(&parts.len()) || parts.iter().any(|p| p.len() != 2) {
                    return Err(bad());
                }
                let hour = digits(parts[0]).ok_or_else(bad)? as u8;
                let minute = digits(parts[1]).ok_or_else(bad)? as u8;
                let second = match parts.get(2) {
                    Some(s) => digits(s).ok_or_else(bad)? as u8,
                    None => 0,
                };
                (
                    Some(TimeOfDay {
                        hour,
                        minute,
                        second,
                    }),
                    offset,
                )
            }
        };
        DateTime::new(date, time, offset).map_err(|e| format!("{e} in '{text}'"))
    }
}

fn split_offset(s: &str) -> Option<(&str, Option<i32>)> {
    if let Some(clock) = s.strip_suffix('Z') {
        return Some((clock, Some(0)));
    }
    if let Some(i) = s.rfind(['+', '-']) {
        let (clock, off) = s.split_at(i);
        let sign = if off.starts_with('-') { -1 } else { 1 };
        let off = &off[1..];
        let (h, m) = off.split_once(':')?;
        if h.len() != 2 || m.len() != 2 {
            return None;
        }
        let h = digits(h)? as i32;
        let m = digits(m)? as i32;
        if m > 59 {
            return None;
        }
        return Some((clock, Some(sign * (h * 60 + m))));
    }
    Some((s, None))
}

fn digits(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => 0,
    }
}

// Howard Hinnant's days_from_civil.
fn days_from_civil(year: i32, month: u8, day: u8) -> i64 {
    let y = i64::from(year) - i64::from(month <= 2);
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let m = i64::from(month);
    let doy = (153 * (if m > 2 { m - 3 } else { m + 9 }) + 2) / 5 + i64::from(day) - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

impl Ord for DateTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for DateTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DateTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.date {
            write!(f, "{:04}-{:02}-{:02}", d.year, d.month, d.day)?;
        }
        if let Some(t) = self.time {
            write!(f, "T{:02}:{:02}", t.hour, t.minute)?;
            if self.date.is_some() || t.second != 0 {
                write!(f, ":{:02}", t.second)?;
            }
        }
        match self.offset_minutes {
            None => Ok(()),
            Some(0) => f.write_str("Z"),
            Some(off) => {
                let sign = if off < 0 { '-' } else { '+' };
                write!(f, "{sign}{:02}:{:02}", off.abs() / 60, off.abs() % 60)
            }
        }
    }
}

/// A signed span of time held in whole milliseconds. Literals carry days,
/// hours, minutes and whole seconds only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Duration {
    millis: i64,
}

impl Duration {
    pub fn from_secs(secs: i64) -> Option<Self> {
        secs.checked_mul(1000).map(|millis| Duration { millis })
    }

    pub fn millis(&self) -> i64 {
        self.millis
    }

    /// Parses the body of a `Duration('...')` literal, e.g. `PT1M30S`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let bad = || format!("malformed Duration '{text}'");
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let body = body.strip_prefix('P').ok_or_else(bad)?;
        let (day_part, time_part) = match body.split_once('T') {
            Some((d, t)) => {
                if t.is_empty() {
                    return Err(bad());
                }
                (d, Some(t))
            }
            None => (body, None),
        };
        let mut total: i64 = 0;
        let mut seen = false;
        let mut add = |n: i64, unit: i64| -> Option<()> {
            total = total.checked_add(n.checked_mul(unit)?)?;
            Some(())
        };
        for (n, unit) in components(day_part).ok_or_else(bad)? {
            match unit {
                'D' => add(n, 86_400).ok_or_else(bad)?,
                _ => return Err(bad()),
            }
            seen = true;
        }
        if let Some(t) = time_part {
            let mut last = 0;
            for (n, unit) in components(t).ok_or_else(bad)? {
                let (rank, secs) = match unit {
                    'H' => (1, 3600),
                    'M' => (2, 60),
                    'S' => (3, 1),
                    _ => return Err(bad()),
                };
                if rank <= last {
                    return Err(bad());
                }
                last = rank;
                add(n, secs).ok_or_else(bad)?;
                seen = true;
            }
        }
        if !seen {
            return Err(bad());
        }
        let secs = if negative { -total } else { total };
        Duration::from_secs(secs).ok_or_else(bad)
    }
}

/// Splits `12D` / `1H30M` style runs into (number, unit) pairs.
fn components(s: &str) -> Option<Vec<(i64, char)>> {
    let mut out = Vec::new();
    let mut num = String::new();
    for c in s.chars() {
        if c.is_ascii_digit() {
            num.push(c);
        } else {
            if num.is_empty() {
                return None;
            }
            out.push((num.parse().ok()?, c));
            num.clear();
        }
    }
    if !num.is_empty() {
        return None;
    }
    Some(out)
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let total = self.millis / 1000;
        if total == 0 {
            return f.write_str("PT0S");
        }
        if total < 0 {
            f.write_str("-")?;
        }
        let mut rest = total.unsigned_abs();
        let days = rest / 86_400;
        rest %= 86_400;
        let (h, m, s) = (rest / 3600, rest % 3600 / 60, rest % 60);
        f.write_str("P")?;
        if days > 0 {
            write!(f, "{days}D")?;
        }
        if h + m + s > 0 {
            f.write_str("T")?;
            if h > 0 {
                write!(f, "{h}H")?;
            }
            if m > 0 {
                write!(f, "{m}M")?;
            }
            if s > 0 {
                write!(f, "{s}S")?;
            }
        }
        Ok(())
    }
}
