//! Text input grammar and report serialization.
//!
//! Problems are written as space-separated conditions with optional
//! exponents, e.g. `(2,2) (1)^5`. Reports start with a versioned header line
//! and come in a line-record text form and a JSON form.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::criterion::{Assessment, ProblemRecord, ScanReport, Status, TreePolicy, Witness};
use crate::error::{Error, Result};
use crate::partition::{GrassmannianShape, Partition, SchubertProblem};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(x) => self.error(format!("expected '{c}', found '{x}'")),
            None => self.error(format!("expected '{c}', found end of input")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some(c) => self.error(format!("expected a number, found '{c}'")),
                None => self.error("expected a number, found end of input"),
            };
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::Syntax {
                position: start,
                message: "number too large".into(),
            })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn partition(&mut self) -> Result<Partition> {
        self.expect('(')?;
        let start = self.pos;
        let mut parts = Vec::new();
        if !self.eat(')') {
            loop {
                parts.push(self.number()?);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Partition::new(parts).map_err(|e| Error::Syntax {
            position: start,
            message: e.to_string(),
        })
    }
}

/// Parses `G(k,n)`.
pub fn parse_shape(text: &str) -> Result<GrassmannianShape> {
    let mut c = Cursor::new(text);
    c.skip_ws();
    if !(c.eat('G') || c.eat('g')) {
        return c.error("expected 'G(k,n)'");
    }
    c.expect('(')?;
    let k = c.number()?;
    c.expect(',')?;
    let n = c.number()?;
    c.expect(')')?;
    if !c.at_end() {
        return c.error("unexpected trailing input");
    }
    GrassmannianShape::new(k, n)
}

/// Parses one partition such as `(2,1)` or `()`.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut c = Cursor::new(text);
    let p = c.partition()?;
    if !c.at_end() {
        return c.error("unexpected trailing input");
    }
    Ok(p)
}

/// Parses a problem written as `(a,b)^r (c)^s ...` on `shape`. Positions in
/// syntax errors are byte offsets into `text`.
pub fn parse_problem(text: &str, shape: GrassmannianShape) -> Result<SchubertProblem> {
    let mut c = Cursor::new(text);
    let mut conditions = Vec::new();
    while !c.at_end() {
        let p = c.partition()?;
        let mut reps = 1;
        if c.eat('^') {
            let at = c.pos;
            reps = c.number()?;
            if reps == 0 {
                return Err(Error::Syntax {
                    position: at,
                    message: "exponent must be positive".into(),
                });
            }
        }
        conditions.extend(std::iter::repeat_n(p, reps));
    }
    if conditions.is_empty() {
        return c.error("expected at least one condition");
    }
    SchubertProblem::new(shape, conditions)
}

/// Renders a problem in the grammar accepted by [`parse_problem`].
pub fn render_problem(problem: &SchubertProblem) -> String {
    problem.conditions_string()
}

/// A report: a kind, ordered header fields, and one record per item.
#[derive(Clone, Debug)]
pub struct Report {
    kind: String,
    fields: Vec<(String, Value)>,
    records: Vec<(String, Value)>,
}

impl Report {
    pub fn new(kind: impl Into<String>) -> Self {
        Report {
            kind: kind.into(),
            fields: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn record(&mut self, line: String, value: Value) {
        self.records.push((line, value));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn records(&self) -> impl Iterator<Item = &str> {
        self.records.iter().map(|(l, _)| l.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# schubert-report v{REPORT_VERSION} {}\n", self.kind);
        for (k, v) in &self.fields {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {v}\n"));
        }
        for (line, _) in &self.records {
            out.push_str("record: ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut fields = Map::new();
        for (k, v) in &self.fields {
            fields.insert(k.clone(), v.clone());
        }
        let doc = json!({
            "format": "schubert-report",
            "version": REPORT_VERSION,
            "kind": self.kind,
            "fields": fields,
            "records": self.records.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, format: Format, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.render(format))?;
        Ok(())
    }
}

fn witness_json(w: &Witness) -> Value {
    json!({
        "pending": w.pending.conditions_string(),
        "factors": [w.factors.0.to_string(), w.factors.1.to_string()],
        "row": w.cursor.row,
        "cell": w.cursor.cell,
        "leaves": [w.left.to_string(), w.right.to_string()],
        "clause": w.clause.as_str(),
    })
}

fn first_game_string(g: &Option<(Partition, Partition)>) -> String {
    g.as_ref()
        .map_or_else(|| "-".into(), |(a, b)| format!("{a}*{b}"))
}

fn record_line(r: &ProblemRecord) -> String {
    let mut line = format!(
        "{} | degree={} | status={} | primitive={} | orderings={} | first-game={} | witness={}",
        r.problem.conditions_string(),
        r.degree,
        r.status.as_str(),
        r.primitive,
        r.orderings_tried,
        first_game_string(&r.first_game),
        r.witness
            .as_ref()
            .map_or_else(|| "-".into(), Witness::describe),
    );
    if r.per_ordering.len() > 1 {
        let tried: Vec<String> = r
            .per_ordering
            .iter()
            .map(|(o, s)| format!("[{}]={}", o.conditions_string(), s.as_str()))
            .collect();
        line.push_str(&format!(" | tried={}", tried.join(" ")));
    }
    line
}

fn record_json(r: &ProblemRecord) -> Value {
    json!({
        "problem": r.problem.conditions_string(),
        "degree": r.degree.to_string(),
        "status": r.status.as_str(),
        "primitive": r.primitive,
        "orderings": r.per_ordering.iter().map(|(o, s)| json!({
            "order": o.conditions_string(),
            "status": s.as_str(),
        })).collect::<Vec<_>>(),
        "first_game": r.first_game.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
        "witness": r.witness.as_ref().map(witness_json),
    })
}

/// Scan report. Timing and thread count are left out so that reports are
/// reproducible; they belong in the human-readable summary.
pub fn scan_report(scan: &ScanReport) -> Report {
    let mut report = Report::new("scan")
        .field("shape", scan.shape.to_string())
        .field("policy", scan.policy.as_str())
        .field("ordering-budget", scan.ordering_budget)
        .field("primitive-only", scan.primitive_only)
        .field("problems", scan.total_problems)
        .field("failures", scan.failures().len())
        .field("primitive-failures", scan.primitive_failures().len())
        .field("conditional", scan.conditional().len());
    for r in &scan.records {
        report.record(record_line(r), record_json(r));
    }
    report
}

/// Report for a single problem's criterion verdict.
pub fn verdict_report(problem: &SchubertProblem, policy: TreePolicy, a: &Assessment) -> Report {
    let mut report = Report::new("criterion")
        .field("shape", problem.shape().to_string())
        .field("problem", problem.conditions_string())
        .field("policy", policy.as_str())
        .field("degree", a.degree.to_string())
        .field("status", a.status.as_str())
        .field("first-game", first_game_string(&a.first_game));
    let used: Vec<String> = a
        .assertions_used
        .iter()
        .map(|p| p.conditions_string())
        .collect();
    report = report.field("assertions-used", Value::from(used));
    if let Some(w) = &a.witness {
        report.record(w.describe(), witness_json(w));
    }
    report
}

/// One-line summary of a scan for humans.
pub fn scan_summary(scan: &ScanReport) -> String {
    let failures = scan.failures();
    let mut s = format!(
        "{}: {} problems, {} failures ({} primitive), {} conditional [{} policy, {:.2}s, {} threads]",
        scan.shape,
        scan.total_problems,
        failures.len(),
        scan.primitive_failures().len(),
        scan.conditional().len(),
        scan.policy.as_str(),
        scan.elapsed_secs,
        scan.threads,
    );
    for f in failures {
        let tag = if f.primitive { "" } else { " (induced)" };
        s.push_str(&format!("\n  fail: {}{tag}", f.problem.conditions_string()));
    }
    s
}

pub fn status_meaning(status: Status) -> &'static str {
    match status {
        Status::Pass => "at least alternating",
        Status::PassConditional => "at least alternating, given the asserted two-transitivity",
        Status::Fail => "criterion does not apply",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_problems;

    fn shape(k: usize, n: usize) -> GrassmannianShape {
        GrassmannianShape::new(k, n).unwrap()
    }

    #[test]
    fn parses_the_grammar() {
        let q = parse_problem("(2,2)^4", shape(4, 8)).unwrap();
        assert_eq!(q.conditions().len(), 4);
        assert!(q.conditions().iter().all(|c| c.parts() == [2, 2]));
        let q = parse_problem("(1)^9", shape(3, 6)).unwrap();
        assert_eq!(q.conditions().len(), 9);
        let q = parse_problem("  (2, 1) (1)^2 ( 1 ) ", shape(3, 6)).unwrap();
        assert_eq!(q.conditions_string(), "(2,1) (1)^3");
        assert_eq!(parse_shape("G(3,6)").unwrap(), shape(3, 6));
        assert_eq!(parse_shape(" g( 2 , 8 ) ").unwrap(), shape(2, 8));
        assert_eq!(parse_partition("()").unwrap(), Partition::empty());
    }

    #[test]
    fn reports_positions() {
        let err = parse_problem("(2,2)^4 (1", shape(4, 8)).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                position: 10,
                message: "expected ',', found end of input".into()
            }
        );
        match parse_problem("(2,x)", shape(4, 8)).unwrap_err() {
            Error::Syntax { position, .. } => assert_eq!(position, 3),
            e => panic!("{e}"),
        }
        match parse_problem("(1)^0", shape(2, 4)).unwrap_err() {
            Error::Syntax { position, .. } => assert_eq!(position, 4),
            e => panic!("{e}"),
        }
        match parse_problem("(1,2)", shape(2, 4)).unwrap_err() {
            Error::Syntax { position, .. } => assert_eq!(position, 1),
            e => panic!("{e}"),
        }
        assert!(matches!(
            parse_problem("", shape(2, 4)),
            Err(Error::Syntax { position: 0, .. })
        ));
        assert!(matches!(
            parse_shape("G(3,6"),
            Err(Error::Syntax { position: 5, .. })
        ));
        assert!(matches!(
            parse_shape("G(3,3)"),
            Err(Error::InvalidShape { .. })
        ));
    }

    #[test]
    fn box_violations_name_the_condition() {
        match parse_problem("(7)^2", shape(2, 8)).unwrap_err() {
            Error::BoxViolation { partition, .. } => assert_eq!(partition.parts(), [7]),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn round_trips() {
        for s in [shape(2, 5), shape(3, 6)] {
            for q in enumerate_problems(s, 1, false) {
                assert_eq!(parse_problem(&render_problem(&q), s).unwrap(), q);
            }
        }
    }

    #[test]
    fn text_and_json_reports() {
        let mut r = Report::new("demo")
            .field("shape", "G(2,4)")
            .field("count", 3);
        r.record("a | b".into(), json!({"a": 1}));
        assert_eq!(
            r.to_text(),
            "# schubert-report v1 demo\nshape: G(2,4)\ncount: 3\nrecord: a | b\n"
        );
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["fields"]["count"], 3);
        assert_eq!(v["records"][0]["a"], 1);
    }
}
