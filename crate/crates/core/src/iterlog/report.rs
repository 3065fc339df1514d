use std::fmt::Write as _;

/// One line of a verification report: `lhs` compared with `rhs`, with
/// `slack` positive when the check holds with room to spare.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub x: String,
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl CheckRow {
    /// Row for `lhs ≤ rhs` (or `<` when `strict`).
    pub fn at_most(x: String, check: &str, lhs: f64, rhs: f64, strict: bool) -> Self {
        let pass = if strict { lhs < rhs } else { lhs <= rhs };
        CheckRow {
            x,
            check: check.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            pass,
        }
    }

    /// Row for `lhs ≥ rhs` (or `>` when `strict`).
    pub fn at_least(x: String, check: &str, lhs: f64, rhs: f64, strict: bool) -> Self {
        let pass = if strict { lhs > rhs } else { lhs >= rhs };
        CheckRow {
            x,
            check: check.into(),
            lhs,
            rhs,
            slack: lhs - rhs,
            pass,
        }
    }
}

pub const REPORT_HEADER: &str = "x,check,lhs,rhs,slack,pass";

/// CSV text with header, `\n` line ends.
pub fn rows_to_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{:e},{}",
            quote(&r.x),
            r.check,
            r.lhs,
            r.rhs,
            r.slack,
            r.pass
        );
    }
    out
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
