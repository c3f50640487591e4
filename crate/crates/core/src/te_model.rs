//! The topic event record.
//!
//! A [`TopicEvent`] summarises one article. Six elements take part in
//! similarity scoring (target, domain, style, methodology, keywords, date);
//! the remaining descriptive fields are carried verbatim in `extras`.
//!
//! Records are stored as JSON objects, one per file or one per line:
//!
//! ```text
//! {"eid":"te-P1","did":"P1","target":["relation extraction"],"methodology":[],
//!  "domain":{"surface":"information extraction","concept":"InformationExtraction"},
//!  "style":"IssueSolution","keywords":[],"date":"2009-06"}
//! ```
//!
//! A terminology is written as a plain string, or as an object with
//! `surface` and `concept` once it has been linked to an ontology node.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::text::normalize_term;

/// Optional descriptive fields. Stored as opaque text, never scored.
pub const EXTRA_FIELDS: [&str; 10] = [
    "name",
    "object",
    "tools",
    "feature",
    "conclusion",
    "background",
    "forecast",
    "performance",
    "dataset",
    "metadata",
];

/// Month assumed when a date carries only a year.
pub const IMPUTED_MONTH: u32 = 6;

/// A terminology as extracted from text, with its canonical form and the
/// ontology node it was linked to (if any).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Terminology {
    pub surface: String,
    pub canonical: String,
    pub concept_id: Option<String>,
}

impl Terminology {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let canonical = normalize_term(&surface);
        Self {
            surface,
            canonical,
            concept_id: None,
        }
    }

    pub fn linked(surface: impl Into<String>, concept_id: impl Into<String>) -> Self {
        Self::new(surface).with_concept(concept_id)
    }

    pub fn with_concept(mut self, concept_id: impl Into<String>) -> Self {
        self.concept_id = Some(concept_id.into());
        self
    }
}

impl fmt::Display for Terminology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// Publication year and month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PubDate {
    pub year: i32,
    pub month: u32,
    /// Set when the source gave only a year and `month` was filled in.
    pub month_imputed: bool,
}

impl PubDate {
    pub fn new(year: i32, month: u32) -> Self {
        Self {
            year,
            month,
            month_imputed: false,
        }
    }

    pub fn year_only(year: i32) -> Self {
        Self {
            year,
            month: IMPUTED_MONTH,
            month_imputed: true,
        }
    }

    /// Months since year 0, used for exact interval arithmetic.
    pub fn month_index(&self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month)
    }
}

impl fmt::Display for PubDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid date {0:?}: expected YYYY-MM or YYYY")]
pub struct DateParseError(pub String);

impl FromStr for PubDate {
    type Err = DateParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DateParseError(s.to_string());
        let s = s.trim();
        let all_digits = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        match s.split_once('-') {
            Some((y, m)) if y.len() == 4 && all_digits(y) && all_digits(m) && m.len() <= 2 => Ok(
                PubDate::new(y.parse().map_err(|_| err())?, m.parse().map_err(|_| err())?),
            ),
            None if s.len() == 4 && all_digits(s) => {
                Ok(PubDate::year_only(s.parse().map_err(|_| err())?))
            }
            _ => Err(err()),
        }
    }
}

/// Category of research manner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResearchStyle {
    TheoreticalOrigination,
    MethodologyImprovement,
    SystemImplementation,
    IssueSolution,
    Survey,
    Analysis,
    PhenomenonDiscovery,
}

impl ResearchStyle {
    pub const ALL: [ResearchStyle; 7] = [
        ResearchStyle::TheoreticalOrigination,
        ResearchStyle::MethodologyImprovement,
        ResearchStyle::SystemImplementation,
        ResearchStyle::IssueSolution,
        ResearchStyle::Survey,
        ResearchStyle::Analysis,
        ResearchStyle::PhenomenonDiscovery,
    ];

    /// Identifier used in records, rule files and the style ontology.
    pub fn name(self) -> &'static str {
        match self {
            ResearchStyle::TheoreticalOrigination => "TheoreticalOrigination",
            ResearchStyle::MethodologyImprovement => "MethodologyImprovement",
            ResearchStyle::SystemImplementation => "SystemImplementation",
            ResearchStyle::IssueSolution => "IssueSolution",
            ResearchStyle::Survey => "Survey",
            ResearchStyle::Analysis => "Analysis",
            ResearchStyle::PhenomenonDiscovery => "PhenomenonDiscovery",
        }
    }

    /// Human-readable label, e.g. "issue solution".
    pub fn label(self) -> &'static str {
        match self {
            ResearchStyle::TheoreticalOrigination => "theoretical origination",
            ResearchStyle::MethodologyImprovement => "methodology improvement",
            ResearchStyle::SystemImplementation => "system implementation",
            ResearchStyle::IssueSolution => "issue solution",
            ResearchStyle::Survey => "survey",
            ResearchStyle::Analysis => "analysis",
            ResearchStyle::PhenomenonDiscovery => "phenomenon discovery",
        }
    }
}

impl fmt::Display for ResearchStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown research style {0:?}")]
pub struct StyleParseError(pub String);

impl FromStr for ResearchStyle {
    type Err = StyleParseError;

    /// Accepts `IssueSolution`, `issue solution`, `issue_solution` and
    /// similar spellings, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let squash = |x: &str| -> String {
            x.chars()
                .filter(|c| c.is_alphanumeric())
                .flat_map(char::to_lowercase)
                .collect()
        };
        let key = squash(s);
        ResearchStyle::ALL
            .into_iter()
            .find(|st| squash(st.name()) == key)
            .ok_or_else(|| StyleParseError(s.to_string()))
    }
}

/// Structured summary of one article.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicEvent {
    pub eid: String,
    pub did: String,
    pub target: Vec<Terminology>,
    pub methodology: Vec<Terminology>,
    pub domain: Terminology,
    pub style: ResearchStyle,
    pub keywords: Vec<Terminology>,
    pub date: PubDate,
    pub extras: BTreeMap<String, String>,
}

/// One violated invariant, named by field path (`target`, `date.month`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fields(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.field.as_str()).collect()
    }

    fn push(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation {
            field: field.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

fn check_term(report: &mut ValidationReport, field: &str, term: &Terminology) {
    let canonical = normalize_term(&term.surface);
    if canonical.is_empty() {
        report.push(field, "terminology is empty after normalization");
    } else if term.canonical != canonical {
        report.push(
            format!("{field}.canonical"),
            "canonical form does not match surface",
        );
    }
    if term
        .concept_id
        .as_deref()
        .is_some_and(|c| c.trim().is_empty())
    {
        report.push(format!("{field}.concept"), "concept id is blank");
    }
}

/// Lists every violated invariant of `te`. Never fails.
pub fn validate_topic_event(te: &TopicEvent) -> ValidationReport {
    let mut report = ValidationReport::default();
    if te.eid.trim().is_empty() {
        report.push("eid", "required identifier is empty");
    }
    if te.did.trim().is_empty() {
        report.push("did", "required identifier is empty");
    }
    if te.target.is_empty() {
        report.push("target", "at least one target terminology is required");
    }
    for (name, terms) in [
        ("target", &te.target),
        ("methodology", &te.methodology),
        ("keywords", &te.keywords),
    ] {
        for (i, t) in terms.iter().enumerate() {
            check_term(&mut report, &format!("{name}[{i}]"), t);
        }
    }
    check_term(&mut report, "domain", &te.domain);
    if !(1900..=2100).contains(&te.date.year) {
        report.push(
            "date.year",
            format!("year {} outside 1900..=2100", te.date.year),
        );
    }
    if !(1..=12).contains(&te.date.month) {
        report.push(
            "date.month",
            format!("month {} outside 1..=12", te.date.month),
        );
    }
    for key in te.extras.keys() {
        if !EXTRA_FIELDS.contains(&key.as_str()) {
            report.push(format!("extras.{key}"), "not a known optional field");
        }
    }
    report
}

impl TopicEvent {
    pub fn validate(&self) -> ValidationReport {
        validate_topic_event(self)
    }

    /// Serializes to a single-line JSON record.
    pub fn to_record(&self) -> String {
        let out = RecordOut {
            eid: &self.eid,
            did: &self.did,
            target: self.target.iter().map(TermOut::from).collect(),
            methodology: self.methodology.iter().map(TermOut::from).collect(),
            domain: TermOut::from(&self.domain),
            style: self.style.name(),
            keywords: self.keywords.iter().map(TermOut::from).collect(),
            date: self.date.to_string(),
            date_month_imputed: self.date.month_imputed,
            extras: &self.extras,
        };
        serde_json::to_string(&out).expect("record serialization is infallible")
    }

    /// Parses exactly one record.
    pub fn from_record(text: &str) -> Result<TopicEvent, RecordError> {
        let mut all = parse_records(text)?;
        match all.len() {
            1 => Ok(all.remove(0)),
            n => Err(RecordError::Count(n)),
        }
    }
}

/// Parses `serialized` as a single [`TopicEvent`] record.
pub fn parse_topic_event(serialized: &str) -> Result<TopicEvent, RecordError> {
    TopicEvent::from_record(serialized)
}

#[derive(Debug, Error, PartialEq)]
pub enum RecordError {
    #[error("malformed record at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("record at byte {offset} is not a JSON object")]
    NotAnObject { offset: usize },
    #[error("missing required field `{0}`")]
    MissingField(&'static str),
    #[error("invalid field `{field}`: {message}")]
    InvalidField { field: String, message: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("invalid topic event: {0}")]
    Invalid(ValidationReport),
    #[error("expected exactly one record, found {0}")]
    Count(usize),
}

impl RecordError {
    /// Field named by this error, when there is one.
    pub fn field(&self) -> Option<&str> {
        match self {
            RecordError::MissingField(f) => Some(f),
            RecordError::InvalidField { field, .. } => Some(field),
            RecordError::UnknownField(f) => Some(f),
            RecordError::Invalid(report) => report.violations.first().map(|v| v.field.as_str()),
            _ => None,
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

/// Parses a batch of records: one object per file, or one per line.
pub fn parse_records(text: &str) -> Result<Vec<TopicEvent>, RecordError> {
    let mut stream = serde_json::Deserializer::from_str(text).into_iter::<Value>();
    let mut out = Vec::new();
    loop {
        let start = stream.byte_offset();
        match stream.next() {
            None => break,
            Some(Err(e)) => {
                return Err(RecordError::Syntax {
                    offset: byte_offset(text, e.line(), e.column()),
                    message: e.to_string(),
                })
            }
            Some(Ok(Value::Object(obj))) => out.push(from_object(obj)?),
            Some(Ok(_)) => {
                let skipped = text[start..].len() - text[start..].trim_start().len();
                return Err(RecordError::NotAnObject {
                    offset: start + skipped,
                });
            }
        }
    }
    Ok(out)
}

fn invalid(field: &str, message: impl Into<String>) -> RecordError {
    RecordError::InvalidField {
        field: field.to_string(),
        message: message.into(),
    }
}

fn take_string(obj: &mut Map<String, Value>, field: &'static str) -> Result<String, RecordError> {
    match obj.remove(field) {
        None | Some(Value::Null) => Err(RecordError::MissingField(field)),
        Some(Value::String(s)) => Ok(s),
        Some(_) => Err(invalid(field, "expected a string")),
    }
}

fn term_from_value(field: &str, v: Value) -> Result<Terminology, RecordError> {
    match v {
        Value::String(s) => Ok(Terminology::new(s)),
        Value::Object(mut o) => {
            let surface = match o.remove("surface") {
                Some(Value::String(s)) => s,
                _ => {
                    return Err(invalid(
                        field,
                        "terminology object needs a string `surface`",
                    ))
                }
            };
            let term = Terminology::new(surface);
            let term = match o.remove("concept") {
                None | Some(Value::Null) => term,
                Some(Value::String(c)) => term.with_concept(c),
                Some(_) => return Err(invalid(field, "`concept` must be a string")),
            };
            if let Some(k) = o.keys().next() {
                return Err(invalid(
                    field,
                    format!("unexpected key `{k}` in terminology"),
                ));
            }
            Ok(term)
        }
        _ => Err(invalid(
            field,
            "expected a string or {surface, concept} object",
        )),
    }
}

fn take_terms(
    obj: &mut Map<String, Value>,
    field: &'static str,
    required: bool,
) -> Result<Vec<Terminology>, RecordError> {
    match obj.remove(field) {
        None | Some(Value::Null) if required => Err(RecordError::MissingField(field)),
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .into_iter()
            .enumerate()
            .map(|(i, v)| term_from_value(&format!("{field}[{i}]"), v))
            .collect(),
        Some(other) => Ok(vec![term_from_value(field, other)?]),
    }
}

fn from_object(mut obj: Map<String, Value>) -> Result<TopicEvent, RecordError> {
    let eid = take_string(&mut obj, "eid")?;
    let did = take_string(&mut obj, "did")?;
    let target = take_terms(&mut obj, "target", true)?;
    let methodology = take_terms(&mut obj, "methodology", false)?;
    let domain = match obj.remove("domain") {
        None | Some(Value::Null) => return Err(RecordError::MissingField("domain")),
        Some(v) => term_from_value("domain", v)?,
    };
    let style_text = take_string(&mut obj, "style")?;
    let style = style_text
        .parse()
        .map_err(|e: StyleParseError| invalid("style", e.to_string()))?;
    let keywords = take_terms(&mut obj, "keywords", false)?;
    let date_text = take_string(&mut obj, "date")?;
    let mut date: PubDate = date_text
        .parse()
        .map_err(|e: DateParseError| invalid("date", e.to_string()))?;
    match obj.remove("date_month_imputed") {
        None | Some(Value::Null) => {}
        Some(Value::Bool(b)) => date.month_imputed |= b,
        Some(_) => return Err(invalid("date_month_imputed", "expected a boolean")),
    }
    let mut extras = BTreeMap::new();
    for (key, value) in obj {
        if !EXTRA_FIELDS.contains(&key.as_str()) {
            return Err(RecordError::UnknownField(key));
        }
        let text = match value {
            Value::String(s) => s,
            Value::Null => continue,
            other => other.to_string(),
        };
        extras.insert(key, text);
    }
    let te = TopicEvent {
        eid,
        did,
        target,
        methodology,
        domain,
        style,
        keywords,
        date,
        extras,
    };
    let report = te.validate();
    if report.is_valid() {
        Ok(te)
    } else {
        Err(RecordError::Invalid(report))
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum TermOut<'a> {
    Plain(&'a str),
    Linked { surface: &'a str, concept: &'a str },
}

impl<'a> From<&'a Terminology> for TermOut<'a> {
    fn from(t: &'a Terminology) -> Self {
        match &t.concept_id {
            None => TermOut::Plain(&t.surface),
            Some(c) => TermOut::Linked {
                surface: &t.surface,
                concept: c,
            },
        }
    }
}

#[derive(Serialize)]
struct RecordOut<'a> {
    eid: &'a str,
    did: &'a str,
    target: Vec<TermOut<'a>>,
    methodology: Vec<TermOut<'a>>,
    domain: TermOut<'a>,
    style: &'static str,
    keywords: Vec<TermOut<'a>>,
    date: String,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    date_month_imputed: bool,
    #[serde(flatten)]
    extras: &'a BTreeMap<String, String>,
}
