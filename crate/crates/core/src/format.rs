//! Reading and writing partition systems.
//!
//! Two encodings are supported and [`parse`] detects which one it is given.
//!
//! Plain text:
//!
//! ```text
//! # comment
//! 7 3 2            <- n k m [0-based|1-based], default 0-based
//! 0,1|2,3|4,5,6    <- one partition per line, classes split by '|'
//! 0,2,6|1,5|3,4
//! ```
//!
//! JSON ([`SystemDocument`]):
//!
//! ```text
//! {"format_version":1,"n":7,"k":3,"name":"...","label_base":0,
//!  "partitions":[[[0,1],[2,3],[4,5,6]]],"metadata":{}}
//! ```
//!
//! In either encoding the token `inf` names the last element `n - 1`, and
//! 1-based labels are shifted down by one.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    validate_partition, ClassSet, Partition, PartitionDefect, PartitionSystem, MAX_ELEMENTS,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column.
    Text { line: usize, column: usize },
    /// Position inside a JSON document's `partitions` array (0-based).
    Document {
        partition: Option<usize>,
        class: Option<usize>,
    },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line}, column {column}"),
            Location::Document {
                partition: None, ..
            } => write!(f, "document"),
            Location::Document {
                partition: Some(p),
                class: None,
            } => write!(f, "partition {p}"),
            Location::Document {
                partition: Some(p),
                class: Some(c),
            } => {
                write!(f, "partition {p}, class {c}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    DuplicateElement(usize),
    MissingElement(usize),
    ElementOutOfRange(String),
    EmptyClass,
    ParameterMismatch(String),
    UnsupportedVersion(u32),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::DuplicateElement(x) => write!(f, "element {x} appears twice"),
            ParseErrorKind::MissingElement(x) => write!(f, "element {x} uncovered"),
            ParseErrorKind::ElementOutOfRange(label) => {
                write!(f, "label {label} outside the ground set")
            }
            ParseErrorKind::EmptyClass => write!(f, "empty class"),
            ParseErrorKind::ParameterMismatch(msg) => write!(f, "parameter mismatch: {msg}"),
            ParseErrorKind::UnsupportedVersion(v) => write!(f, "unsupported format_version {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub location: Location,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn text(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError {
            location: Location::Text { line, column },
            kind,
        }
    }

    fn doc(partition: Option<usize>, class: Option<usize>, kind: ParseErrorKind) -> Self {
        ParseError {
            location: Location::Document { partition, class },
            kind,
        }
    }
}

/// How external labels map onto `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LabelBase {
    #[default]
    Zero,
    One,
}

impl LabelBase {
    fn offset(self) -> usize {
        match self {
            LabelBase::Zero => 0,
            LabelBase::One => 1,
        }
    }
}

/// An element label as written in a document: an index or the token `inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(u64),
    Named(String),
}

/// The versioned structured encoding of a [`PartitionSystem`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub format_version: u32,
    pub n: usize,
    pub k: usize,
    #[serde(default)]
    pub name: String,
    #[serde(default, with = "label_base_num")]
    pub label_base: LabelBase,
    pub partitions: Vec<Vec<Vec<Label>>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

mod label_base_num {
    use super::LabelBase;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &LabelBase, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(b.offset() as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LabelBase, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(LabelBase::Zero),
            1 => Ok(LabelBase::One),
            other => Err(D::Error::custom(format!(
                "label_base must be 0 or 1, got {other}"
            ))),
        }
    }
}

impl SystemDocument {
    /// Canonical 0-based document for `s`.
    pub fn from_system(s: &PartitionSystem) -> Self {
        let mut metadata = BTreeMap::new();
        if let Some(name) = s.name() {
            metadata.insert("construction".to_string(), name.to_string());
        }
        SystemDocument {
            format_version: FORMAT_VERSION,
            n: s.n(),
            k: s.k(),
            name: s.name().unwrap_or_default().to_string(),
            label_base: LabelBase::Zero,
            partitions: s
                .canonical_partitions()
                .iter()
                .map(|p| {
                    p.classes()
                        .iter()
                        .map(|c| c.iter().map(|x| Label::Index(x as u64)).collect())
                        .collect()
                })
                .collect(),
            metadata,
        }
    }

    pub fn into_system(self) -> Result<PartitionSystem, ParseError> {
        if self.format_version != FORMAT_VERSION {
            return Err(ParseError::doc(
                None,
                None,
                ParseErrorKind::UnsupportedVersion(self.format_version),
            ));
        }
        check_params(self.n, self.k).map_err(|k| ParseError::doc(None, None, k))?;
        let mut partitions = Vec::with_capacity(self.partitions.len());
        for (pi, classes) in self.partitions.iter().enumerate() {
            let mut sets = Vec::with_capacity(classes.len());
            for (ci, class) in classes.iter().enumerate() {
                let mut set = ClassSet::EMPTY;
                for label in class {
                    let text = match label {
                        Label::Index(i) => i.to_string(),
                        Label::Named(s) => s.clone(),
                    };
                    let x = resolve_label(&text, self.n, self.label_base)
                        .map_err(|k| ParseError::doc(Some(pi), Some(ci), k))?;
                    if set.contains(x) {
                        return Err(ParseError::doc(
                            Some(pi),
                            Some(ci),
                            ParseErrorKind::DuplicateElement(x),
                        ));
                    }
                    set.insert(x);
                }
                sets.push(set);
            }
            let p = check_partition(self.n, self.k, sets)
                .map_err(|(class, kind)| ParseError::doc(Some(pi), class, kind))?;
            partitions.push(p);
        }
        let system = PartitionSystem::new(self.n, self.k, partitions);
        Ok(if self.name.is_empty() {
            system
        } else {
            system.with_name(self.name)
        })
    }
}

fn check_params(n: usize, k: usize) -> Result<(), ParseErrorKind> {
    if n == 0 || n > MAX_ELEMENTS {
        return Err(ParseErrorKind::ParameterMismatch(format!(
            "n = {n} must be in 1..={MAX_ELEMENTS}"
        )));
    }
    if k == 0 || k > n {
        return Err(ParseErrorKind::ParameterMismatch(format!(
            "k = {k} must be in 1..={n}"
        )));
    }
    Ok(())
}

fn resolve_label(text: &str, n: usize, base: LabelBase) -> Result<usize, ParseErrorKind> {
    if text.eq_ignore_ascii_case("inf") || text == "∞" {
        return Ok(n - 1);
    }
    let raw: usize = text.parse().map_err(|_| {
        ParseErrorKind::Syntax(format!("expected an element label, found {text:?}"))
    })?;
    raw.checked_sub(base.offset())
        .filter(|&x| x < n)
        .ok_or_else(|| ParseErrorKind::ElementOutOfRange(text.to_string()))
}

/// Validates one partition; the error carries the offending class index when known.
fn check_partition(
    n: usize,
    k: usize,
    sets: Vec<ClassSet>,
) -> Result<Partition, (Option<usize>, ParseErrorKind)> {
    if let Some(ci) = sets.iter().position(|c| c.is_empty()) {
        return Err((Some(ci), ParseErrorKind::EmptyClass));
    }
    let mut seen = ClassSet::EMPTY;
    for (ci, &c) in sets.iter().enumerate() {
        if let Some(x) = seen.intersection(c).min_element() {
            return Err((Some(ci), ParseErrorKind::DuplicateElement(x)));
        }
        seen = seen.union(c);
    }
    if sets.len() != k {
        return Err((
            None,
            ParseErrorKind::ParameterMismatch(format!(
                "expected {k} classes, found {}",
                sets.len()
            )),
        ));
    }
    let p = Partition::from_classes(n, k, sets);
    match validate_partition(&p).into_iter().next() {
        None => Ok(p),
        Some(PartitionDefect::Uncovered { element }) => {
            Err((None, ParseErrorKind::MissingElement(element)))
        }
        Some(other) => Err((None, ParseErrorKind::Syntax(other.to_string()))),
    }
}

/// Pretty-printed JSON, partitions in canonical order.
pub fn serialize_json(s: &PartitionSystem) -> String {
    let mut out = serde_json::to_string_pretty(&SystemDocument::from_system(s))
        .expect("documents always serialise");
    out.push('\n');
    out
}

/// Plain text with an `n k m` header, partitions in canonical order.
pub fn serialize_text(s: &PartitionSystem) -> String {
    let mut out = String::new();
    if let Some(name) = s.name() {
        out.push_str(&format!("# {name}\n"));
    }
    out.push_str(&format!("{} {} {}\n", s.n(), s.k(), s.len()));
    for p in s.canonical_partitions() {
        let classes: Vec<String> = p
            .classes()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        out.push_str(&classes.join("|"));
        out.push('\n');
    }
    out
}

/// Parses either encoding.
pub fn parse(doc: &str) -> Result<PartitionSystem, ParseError> {
    if doc.trim_start().starts_with('{') {
        parse_json(doc)
    } else {
        parse_text(doc)
    }
}

pub fn parse_json(doc: &str) -> Result<PartitionSystem, ParseError> {
    let document: SystemDocument = serde_json::from_str(doc).map_err(|e| {
        ParseError::text(
            e.line(),
            e.column(),
            ParseErrorKind::Syntax(strip_position(&e.to_string())),
        )
    })?;
    document.into_system()
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn parse_text(doc: &str) -> Result<PartitionSystem, ParseError> {
    let mut lines = doc
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| ParseError::text(1, 1, ParseErrorKind::Syntax("missing header".into())))?;
    let mut name = None;
    for l in doc
        .lines()
        .take_while(|l| l.trim().is_empty() || l.trim().starts_with('#'))
    {
        if let Some(rest) = l.trim().strip_prefix('#') {
            if name.is_none() && !rest.trim().is_empty() {
                name = Some(rest.trim().to_string());
            }
        }
    }

    let tokens = tokens_with_columns(header, |c| c.is_whitespace());
    if !(3..=4).contains(&tokens.len()) {
        return Err(ParseError::text(
            header_line,
            1,
            ParseErrorKind::Syntax("header must be `n k m [0-based|1-based]`".into()),
        ));
    }
    let number = |(col, tok): (usize, &str)| {
        tok.parse::<usize>().map_err(|_| {
            ParseError::text(
                header_line,
                col,
                ParseErrorKind::Syntax(format!("expected an integer, found {tok:?}")),
            )
        })
    };
    let n = number(tokens[0])?;
    let k = number(tokens[1])?;
    let m = number(tokens[2])?;
    let base = match tokens.get(3) {
        None => LabelBase::Zero,
        Some((_, "0-based")) | Some((_, "0")) => LabelBase::Zero,
        Some((_, "1-based")) | Some((_, "1")) => LabelBase::One,
        Some(&(col, tok)) => {
            return Err(ParseError::text(
                header_line,
                col,
                ParseErrorKind::Syntax(format!("unknown label base {tok:?}")),
            ))
        }
    };
    check_params(n, k).map_err(|kind| ParseError::text(header_line, 1, kind))?;

    let mut partitions = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line_no, line) in lines {
        last_line = line_no;
        let mut sets = Vec::new();
        let mut class_columns = Vec::new();
        for (col, class_text) in tokens_with_columns(line, |c| c == '|') {
            let mut set = ClassSet::EMPTY;
            class_columns.push(col);
            for (ecol, label) in tokens_with_columns(class_text, |c| c == ',') {
                let label_col = col + ecol - 1;
                if label.is_empty() {
                    return Err(ParseError::text(
                        line_no,
                        label_col,
                        ParseErrorKind::Syntax("empty element label".into()),
                    ));
                }
                let x = resolve_label(label, n, base)
                    .map_err(|kind| ParseError::text(line_no, label_col, kind))?;
                if set.contains(x) {
                    return Err(ParseError::text(
                        line_no,
                        label_col,
                        ParseErrorKind::DuplicateElement(x),
                    ));
                }
                set.insert(x);
            }
            sets.push(set);
        }
        let p = check_partition(n, k, sets).map_err(|(class, kind)| {
            let column = class.map_or(1, |c| class_columns[c]);
            ParseError::text(line_no, column, kind)
        })?;
        partitions.push(p);
    }
    if partitions.len() != m {
        return Err(ParseError::text(
            last_line,
            1,
            ParseErrorKind::ParameterMismatch(format!(
                "header declares {m} partitions, found {}",
                partitions.len()
            )),
        ));
    }
    let system = PartitionSystem::new(n, k, partitions);
    Ok(match name {
        Some(name) => system.with_name(name),
        None => system,
    })
}

/// Splits `s` on `sep`, trimming whitespace, and reports each piece's
/// 1-based starting column. Whitespace separators collapse.
fn tokens_with_columns(s: &str, sep: impl Fn(char) -> bool) -> Vec<(usize, &str)> {
    let collapse = sep(' ');
    let mut pieces = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if sep(c) {
            pieces.push((start, i));
            start = i + c.len_utf8();
        }
    }
    pieces.push((start, s.len()));
    pieces
        .into_iter()
        .filter_map(|(from, to)| {
            let piece = &s[from..to];
            let lead = piece.len() - piece.trim_start().len();
            let trimmed = piece.trim();
            (!(collapse && trimmed.is_empty()))
                .then(|| (s[..from + lead].chars().count() + 1, trimmed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_partition() {
        let s = parse("7 3 1\n0,1|2,3|4,5,6").unwrap();
        assert_eq!((s.n(), s.k(), s.len()), (7, 3, 1));
    }

    #[test]
    fn uncovered_element_reported() {
        let e = parse("7 3 1\n0,1|2,3|4,5").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingElement(6));
        assert_eq!(e.to_string(), "line 2, column 1: element 6 uncovered");
    }

    #[test]
    fn duplicate_element_located() {
        let e = parse("4 2 1\n0,1|1,3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateElement(1));
        assert_eq!(e.location, Location::Text { line: 2, column: 5 });
    }

    #[test]
    fn class_count_mismatch() {
        let e = parse("4 2 1\n0,1|2|3").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ParameterMismatch(_)));
    }

    #[test]
    fn partition_count_mismatch() {
        let e = parse("4 2 2\n0,1|2,3").unwrap_err();
        assert!(
            matches!(e.kind, ParseErrorKind::ParameterMismatch(ref m) if m.contains("declares 2"))
        );
    }

    #[test]
    fn malformed_syntax() {
        let e = parse("4 2 1\n0,x|2,3").unwrap_err();
        assert_eq!(e.location, Location::Text { line: 2, column: 3 });
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert!(parse("").is_err());
        assert!(parse("4 two 1\n0,1|2,3").is_err());
    }

    #[test]
    fn one_based_with_inf() {
        let s = parse("# demo\n4 2 1 1-based\n1, 2 | 3, inf\n").unwrap();
        assert_eq!(s.partitions()[0].to_lists(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(s.name(), Some("demo"));
        let e = parse("4 2 1 1-based\n0,1|2,3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ElementOutOfRange("0".into()));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let s = parse("7 3 1\n0,1|2,3|4,5,6").unwrap();
        let json = serialize_json(&s);
        assert!(parse(&json).unwrap().same_as(&s));
        let e = parse(r#"{"format_version":2,"n":3,"k":1,"partitions":[]}"#).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnsupportedVersion(2));
        let e =
            parse(r#"{"format_version":1,"n":3,"k":2,"partitions":[[[0],[0,1,2]]]}"#).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateElement(0));
        assert_eq!(
            e.location,
            Location::Document {
                partition: Some(0),
                class: Some(1)
            }
        );
        let e = parse("{\"format_version\":1,\n\"n\":}").unwrap_err();
        assert!(matches!(e.location, Location::Text { line: 2, .. }));
        let s = parse(
            r#"{"format_version":1,"n":3,"k":2,"label_base":1,"partitions":[[[1,"inf"],[2]]]}"#,
        )
        .unwrap();
        assert_eq!(s.partitions()[0].to_lists(), vec![vec![1], vec![0, 2]]);
    }

    #[test]
    fn empty_system_serialises() {
        let s = PartitionSystem::new(5, 2, vec![]);
        let json = serialize_json(&s);
        assert!(json.contains("\"partitions\": []"));
        assert_eq!(parse(&json).unwrap().len(), 0);
        assert_eq!(parse(&serialize_text(&s)).unwrap().len(), 0);
    }
}
