//! Report rendering: one JSON object per line, or a fixed-width table.

use parakost::report::Report;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// Keeps detail keys in the order the suite produced them.
struct Details<'a>(&'a [(String, String)]);

impl Serialize for Details<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Line<'a> {
    check: &'a str,
    n: usize,
    status: String,
    cases_run: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<&'a str>,
    wall_time_ms: Option<u64>,
    details: Details<'a>,
}

pub fn json_line(r: &Report, wall_time_ms: Option<u64>) -> String {
    let line = Line {
        check: &r.check,
        n: r.n,
        status: r.status.to_string(),
        cases_run: r.cases_run,
        counterexample: r.counterexample.as_deref(),
        wall_time_ms,
        details: Details(&r.details),
    };
    serde_json::to_string(&line).expect("report serializes")
}

pub fn table_header(timings: bool) -> String {
    let mut s = format!("{:<18} {:>3}  {:<10} {:>10}", "check", "n", "status", "cases");
    if timings {
        s.push_str(&format!(" {:>9}", "ms"));
    }
    s
}

pub fn table_row(r: &Report, wall_time_ms: Option<u64>) -> String {
    let mut s = format!("{:<18} {:>3}  {:<10} {:>10}", r.check, r.n, r.status.to_string(), r.cases_run);
    if let Some(ms) = wall_time_ms {
        s.push_str(&format!(" {ms:>9}"));
    }
    if let Some(c) = &r.counterexample {
        s.push_str(&format!("\n    {c}"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_fields_in_order() {
        let mut r = Report::new("hodge", 2);
        r.cases_run = 3;
        r.detail("z", 1);
        r.detail("a", 2);
        assert_eq!(
            json_line(&r, None),
            r#"{"check":"hodge","n":2,"status":"PASS","cases_run":3,"wall_time_ms":null,"details":{"z":"1","a":"2"}}"#
        );
        r.fail("x".into());
        assert!(json_line(&r, Some(5)).contains(r#""status":"FAIL","cases_run":3,"counterexample":"x","wall_time_ms":5"#));
    }
}
