//! Reader for PDTB 3.0 pipe-delimited relation files.
//!
//! Each line holds one relation. Only the columns named in [`ColumnMap`]
//! are interpreted; everything else (attribution spans, provenance,
//! PropBank fields) is skipped. A trailing `LINKn` field ties several
//! lines to one underlying relation.

use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::model::{PdtbRelation, RelationKind, SenseTag, Span};

#[derive(Debug, Error)]
pub enum PdtbError {
    #[error("malformed span '{0}'")]
    MalformedSpan(String),

    #[error("unknown relation kind '{0}'")]
    UnknownKind(String),

    #[error("short line: {found} fields, column map needs {needed}")]
    ShortLine { found: usize, needed: usize },

    #[error("{kind} relation without a sense")]
    MissingSense { kind: RelationKind },

    #[error("{kind} relation with empty {arg}")]
    MissingArgument { kind: RelationKind, arg: &'static str },

    #[error("invalid column map '{0}'")]
    ColumnMap(String),

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<PdtbError>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Field indices of the interpreted columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColumnMap {
    pub kind: usize,
    pub conn_span: usize,
    pub conn1: usize,
    pub sense1: usize,
    pub conn2: usize,
    pub sense2: usize,
    pub arg1: usize,
    pub arg2: usize,
}

impl ColumnMap {
    fn indices(&self) -> [usize; 8] {
        [
            self.kind,
            self.conn_span,
            self.conn1,
            self.sense1,
            self.conn2,
            self.sense2,
            self.arg1,
            self.arg2,
        ]
    }

    /// Minimum number of fields a line needs.
    pub fn required_fields(&self) -> usize {
        self.indices().iter().max().copied().unwrap_or(0) + 1
    }
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            kind: 0,
            conn_span: 1,
            conn1: 7,
            sense1: 8,
            conn2: 10,
            sense2: 11,
            arg1: 14,
            arg2: 20,
        }
    }
}

impl FromStr for ColumnMap {
    type Err = PdtbError;

    /// Parse eight comma-separated indices in the order
    /// kind, conn_span, conn1, sense1, conn2, sense2, arg1, arg2.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PdtbError::ColumnMap(s.to_owned());
        let values = s
            .split(',')
            .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let [kind, conn_span, conn1, sense1, conn2, sense2, arg1, arg2] =
            <[usize; 8]>::try_from(values).map_err(|_| bad())?;
        let map = ColumnMap {
            kind,
            conn_span,
            conn1,
            sense1,
            conn2,
            sense2,
            arg1,
            arg2,
        };
        let mut seen = map.indices().to_vec();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != 8 {
            return Err(bad());
        }
        Ok(map)
    }
}

fn parse_span_list(field: &str) -> Result<Vec<Span>, PdtbError> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(Vec::new());
    }
    field
        .split(';')
        .map(|token| {
            let malformed = || PdtbError::MalformedSpan(token.to_owned());
            let (first, last) = token.trim().split_once("..").ok_or_else(malformed)?;
            let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
            if !digits(first) || !digits(last) {
                return Err(malformed());
            }
            let first: usize = first.parse().map_err(|_| malformed())?;
            let last: usize = last.parse().map_err(|_| malformed())?;
            Span::from_inclusive(first, last).map_err(|_| malformed())
        })
        .collect()
}

fn non_empty(field: &str) -> Option<&str> {
    let field = field.trim();
    if field.is_empty() {
        None
    } else {
        Some(field)
    }
}

fn is_link_marker(field: &str) -> bool {
    field
        .strip_prefix("LINK")
        .map(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        .unwrap_or(false)
}

/// Parse one relation line.
pub fn parse_relation_line(
    line: &str,
    map: &ColumnMap,
    line_no: usize,
) -> Result<PdtbRelation, PdtbError> {
    let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split('|').collect();
    let needed = map.required_fields();
    if fields.len() < needed {
        return Err(PdtbError::ShortLine {
            found: fields.len(),
            needed,
        });
    }

    let kind: RelationKind = fields[map.kind]
        .parse()
        .map_err(PdtbError::UnknownKind)?;

    let mut senses = Vec::new();
    for col in [map.sense1, map.sense2] {
        if let Some(text) = non_empty(fields[col]) {
            // Non-empty input always parses.
            senses.push(text.parse::<SenseTag>().expect("non-empty sense"));
        }
    }
    if senses.is_empty() {
        match kind {
            RelationKind::EntRel | RelationKind::NoRel => {
                senses.push(SenseTag::single(kind.as_str()))
            }
            _ => return Err(PdtbError::MissingSense { kind }),
        }
    }

    let arg1_spans = parse_span_list(fields[map.arg1])?;
    let arg2_spans = parse_span_list(fields[map.arg2])?;
    if kind != RelationKind::NoRel {
        if arg1_spans.is_empty() {
            return Err(PdtbError::MissingArgument { kind, arg: "Arg1" });
        }
        if arg2_spans.is_empty() {
            return Err(PdtbError::MissingArgument { kind, arg: "Arg2" });
        }
    }

    let connective = non_empty(fields[map.conn1])
        .or_else(|| non_empty(fields[map.conn2]))
        .map(str::to_owned);

    let link_group = fields
        .iter()
        .rev()
        .map(|f| f.trim())
        .find(|f| !f.is_empty())
        .filter(|f| is_link_marker(f))
        .map(str::to_owned);

    Ok(PdtbRelation {
        kind,
        connective,
        connective_spans: parse_span_list(fields[map.conn_span])?,
        senses,
        arg1_spans,
        arg2_spans,
        link_group,
        raw_line_no: line_no,
    })
}

/// Parse relation-file contents.
///
/// Blank lines are ignored. In strict mode the first bad line is an error;
/// otherwise bad lines are skipped and reported as diagnostics.
pub fn parse_relations(
    text: &str,
    map: &ColumnMap,
    strict: bool,
) -> Result<(Vec<PdtbRelation>, Vec<Diagnostic>), PdtbError> {
    let mut relations = Vec::new();
    let mut diagnostics = Vec::new();

    for (pos, line) in text.lines().enumerate() {
        let line_no = pos + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_relation_line(line, map, line_no) {
            Ok(relation) => relations.push(relation),
            Err(err) if strict => {
                return Err(PdtbError::Line {
                    line: line_no,
                    source: Box::new(err),
                })
            }
            Err(err) => diagnostics
                .push(Diagnostic::new(DiagnosticKind::Parse, err.to_string()).at_line(line_no)),
        }
    }

    Ok((relations, diagnostics))
}

/// Read and parse a relation file. IO failures always propagate.
pub fn parse_relation_file(
    path: impl AsRef<Path>,
    map: &ColumnMap,
    strict: bool,
) -> Result<(Vec<PdtbRelation>, Vec<Diagnostic>), PdtbError> {
    let text = fs::read_to_string(path)?;
    parse_relations(&text, map, strict)
}
