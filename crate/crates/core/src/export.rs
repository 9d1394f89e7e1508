//! File formats for dependency graphs, metrics and correlations.
//!
//! All writers are byte-deterministic: reals use fixed 6-decimal notation,
//! lines end in `\n`, and every file ends with a newline.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DependencyArc, DependencyGraph, Flavor, Head};
use crate::metrics::{CorrelationResult, MetricsRecord};
use crate::model::SenseTag;
use crate::registry::{Named, Registry};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}{}: {message}", column.map(|c| format!(", column {}", c)).unwrap_or_default())]
pub struct FormatError {
    pub line: usize,
    pub column: Option<usize>,
    pub message: String,
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            column: None,
            message: message.into(),
        }
    }

    fn at_column(line: usize, column: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            column: Some(column),
            message: message.into(),
        }
    }
}

/// Encodes and decodes dependency graphs in one file format.
pub trait DepCodec: Named + Send + Sync {
    /// File extension, without the dot.
    fn extension(&self) -> &'static str;

    fn write(&self, graph: &DependencyGraph) -> Vec<u8>;

    /// Decode `bytes`. `doc_id_hint` names the document when the format
    /// does not carry its own id (usually the file stem).
    fn read(&self, bytes: &[u8], doc_id_hint: &str) -> Result<DependencyGraph, FormatError>;
}

pub fn dep_codecs() -> Registry<dyn DepCodec> {
    let mut registry: Registry<dyn DepCodec> = Registry::new("format");
    registry.register(Arc::new(Conll)).expect("unique name");
    registry.register(Arc::new(Csv)).expect("unique name");
    registry.register(Arc::new(Json)).expect("unique name");
    registry
}

/// Codec whose extension matches `path`'s, if any.
pub fn codec_for_path(path: &std::path::Path) -> Option<Arc<dyn DepCodec>> {
    let ext = path.extension()?.to_str()?.to_ascii_lowercase();
    let codecs = dep_codecs();
    codecs
        .names()
        .into_iter()
        .filter_map(|name| codecs.get(name).ok())
        .find(|codec| codec.extension() == ext)
}

fn utf8(bytes: &[u8]) -> Result<&str, FormatError> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        FormatError::at(line, "invalid UTF-8")
    })
}

fn infer_flavor(arcs: &[DependencyArc]) -> Flavor {
    if arcs.iter().any(|a| a.head.is_root()) {
        Flavor::RootedTree
    } else {
        Flavor::LocalForest
    }
}

fn check_distance(arc: &DependencyArc, written: Option<usize>) -> Result<(), String> {
    if written != arc.distance() {
        return Err(format!(
            "distance {} does not match arc {}->{}",
            written.map(|d| d.to_string()).unwrap_or_else(|| "_".into()),
            arc.dependent,
            arc.head
        ));
    }
    Ok(())
}

/// Tab-separated, one line per arc sorted by unit:
/// `unit  head  level1  level2  level3  distance`, `_` for absent fields,
/// ROOT as head 0. Units without a head get a line of `_`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Conll;

const ABSENT: &str = "_";

impl Named for Conll {
    fn name(&self) -> &'static str {
        "conll"
    }
}

impl DepCodec for Conll {
    fn extension(&self) -> &'static str {
        "conll"
    }

    fn write(&self, graph: &DependencyGraph) -> Vec<u8> {
        let mut out = String::new();
        let _ = writeln!(out, "# doc_id = {}", graph.doc_id());
        let _ = writeln!(out, "# flavor = {}", graph.flavor().as_str());
        let mut arcs = graph.arcs().iter().peekable();
        for unit in 1..=graph.unit_count().max(max_unit(graph.arcs())) {
            let mut attached = false;
            while let Some(arc) = arcs.next_if(|a| a.dependent == unit) {
                attached = true;
                let sense = &arc.sense;
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    unit,
                    arc.head.index(),
                    sense.level1,
                    sense.level2.as_deref().unwrap_or(ABSENT),
                    sense.level3.as_deref().unwrap_or(ABSENT),
                    arc.distance()
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| ABSENT.into()),
                );
            }
            if !attached {
                let _ = writeln!(out, "{}\t_\t_\t_\t_\t_", unit);
            }
        }
        out.into_bytes()
    }

    fn read(&self, bytes: &[u8], doc_id_hint: &str) -> Result<DependencyGraph, FormatError> {
        let text = utf8(bytes)?;
        let mut doc_id = doc_id_hint.to_owned();
        let mut flavor = None;
        let mut unit_count = 0;
        let mut arcs = Vec::new();

        for (pos, line) in text.lines().enumerate() {
            let line_no = pos + 1;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    match key.trim() {
                        "doc_id" => doc_id = value.trim().to_owned(),
                        "flavor" => {
                            flavor = Some(value.trim().parse::<Flavor>().map_err(|v| {
                                FormatError::at(line_no, format!("unknown flavor '{}'", v))
                            })?)
                        }
                        _ => {}
                    }
                }
                continue;
            }

            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(FormatError::at(
                    line_no,
                    format!("expected 6 tab-separated fields, found {}", fields.len()),
                ));
            }
            let column_of = |index: usize| {
                fields[..index].iter().map(|f| f.len() + 1).sum::<usize>() + 1
            };
            let number = |index: usize, what: &str| {
                fields[index].parse::<usize>().map_err(|_| {
                    FormatError::at_column(
                        line_no,
                        column_of(index),
                        format!("invalid {} '{}'", what, fields[index]),
                    )
                })
            };
            let unit = number(0, "unit")?;
            if unit == 0 {
                return Err(FormatError::at_column(line_no, 1, "units are numbered from 1"));
            }
            unit_count = unit_count.max(unit);
            if fields[1] == ABSENT {
                continue;
            }
            let head = Head::from_index(number(1, "head")?);
            if fields[2] == ABSENT || fields[2].is_empty() {
                return Err(FormatError::at_column(line_no, column_of(2), "missing sense"));
            }
            let optional = |field: &str| (field != ABSENT).then(|| field.to_owned());
            let sense = SenseTag::new(fields[2], optional(fields[3]), optional(fields[4]));
            let written = if fields[5] == ABSENT {
                None
            } else {
                Some(number(5, "distance")?)
            };
            let arc = DependencyArc::new(unit, head, sense);
            check_distance(&arc, written)
                .map_err(|m| FormatError::at_column(line_no, column_of(5), m))?;
            arcs.push(arc);
        }

        let flavor = flavor.unwrap_or_else(|| infer_flavor(&arcs));
        Ok(DependencyGraph::new(doc_id, unit_count, arcs, flavor))
    }
}

fn max_unit(arcs: &[DependencyArc]) -> usize {
    arcs.iter()
        .map(|a| a.dependent.max(a.head.index()))
        .max()
        .unwrap_or(0)
}

/// Comma-separated edge list with header
/// `dependent,head,distance,sense1,class,type`; absent values are empty.
///
/// The format has no place for document metadata: on reading, the doc id
/// comes from the hint, the unit count is the largest unit mentioned, and
/// the graph is a rooted tree iff some arc points at ROOT.
#[derive(Clone, Copy, Debug, Default)]
pub struct Csv;

const CSV_HEADER: [&str; 6] = ["dependent", "head", "distance", "sense1", "class", "type"];

impl Named for Csv {
    fn name(&self) -> &'static str {
        "csv"
    }
}

impl DepCodec for Csv {
    fn extension(&self) -> &'static str {
        "csv"
    }

    fn write(&self, graph: &DependencyGraph) -> Vec<u8> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(CSV_HEADER).expect("write to memory");
        for arc in graph.arcs() {
            let distance = arc.distance().map(|d| d.to_string()).unwrap_or_default();
            writer
                .write_record([
                    arc.dependent.to_string().as_str(),
                    arc.head.index().to_string().as_str(),
                    distance.as_str(),
                    arc.sense.level1.as_str(),
                    arc.sense.level2.as_deref().unwrap_or(""),
                    arc.sense.level3.as_deref().unwrap_or(""),
                ])
                .expect("write to memory");
        }
        writer.into_inner().expect("flush to memory")
    }

    fn read(&self, bytes: &[u8], doc_id_hint: &str) -> Result<DependencyGraph, FormatError> {
        utf8(bytes)?;
        if bytes.iter().all(u8::is_ascii_whitespace) {
            return Ok(DependencyGraph::new(doc_id_hint, 0, vec![], Flavor::LocalForest));
        }
        let mut reader = csv::ReaderBuilder::new()
            .flexible(true)
            .has_headers(true)
            .from_reader(bytes);
        let header = reader
            .headers()
            .map_err(|e| FormatError::at(1, e.to_string()))?
            .clone();
        if header.iter().map(str::trim).ne(CSV_HEADER) {
            return Err(FormatError::at(
                1,
                format!("expected header '{}'", CSV_HEADER.join(",")),
            ));
        }

        let mut arcs = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
                FormatError::at(line, e.to_string())
            })?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            if record.len() != CSV_HEADER.len() {
                return Err(FormatError::at(
                    line,
                    format!(
                        "row has {} fields, expected {}",
                        record.len(),
                        CSV_HEADER.len()
                    ),
                ));
            }
            let number = |index: usize| {
                record[index].trim().parse::<usize>().map_err(|_| {
                    FormatError::at_column(
                        line,
                        index + 1,
                        format!("invalid {} '{}'", CSV_HEADER[index], &record[index]),
                    )
                })
            };
            let dependent = number(0)?;
            if dependent == 0 {
                return Err(FormatError::at_column(line, 1, "units are numbered from 1"));
            }
            let head = Head::from_index(number(1)?);
            let written = if record[2].is_empty() {
                None
            } else {
                Some(number(2)?)
            };
            if record[3].is_empty() {
                return Err(FormatError::at_column(line, 4, "missing sense1"));
            }
            let optional = |field: &str| (!field.is_empty()).then(|| field.to_owned());
            let sense = SenseTag::new(&record[3], optional(&record[4]), optional(&record[5]));
            let arc = DependencyArc::new(dependent, head, sense);
            check_distance(&arc, written).map_err(|m| FormatError::at_column(line, 3, m))?;
            arcs.push(arc);
        }

        let flavor = infer_flavor(&arcs);
        Ok(DependencyGraph::new(doc_id_hint, max_unit(&arcs), arcs, flavor))
    }
}

/// A JSON document object with every field of the graph.
#[derive(Clone, Copy, Debug, Default)]
pub struct Json;

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    doc_id: String,
    unit_count: usize,
    flavor: Flavor,
    arcs: Vec<JsonArc>,
}

#[derive(Serialize, Deserialize)]
struct JsonArc {
    dependent: usize,
    head: usize,
    distance: Option<usize>,
    sense: SenseTag,
}

impl Named for Json {
    fn name(&self) -> &'static str {
        "json"
    }
}

impl DepCodec for Json {
    fn extension(&self) -> &'static str {
        "json"
    }

    fn write(&self, graph: &DependencyGraph) -> Vec<u8> {
        let doc = JsonGraph {
            doc_id: graph.doc_id().to_owned(),
            unit_count: graph.unit_count(),
            flavor: graph.flavor(),
            arcs: graph
                .arcs()
                .iter()
                .map(|arc| JsonArc {
                    dependent: arc.dependent,
                    head: arc.head.index(),
                    distance: arc.distance(),
                    sense: arc.sense.clone(),
                })
                .collect(),
        };
        let mut bytes = serde_json::to_vec_pretty(&doc).expect("serializable graph");
        bytes.push(b'\n');
        bytes
    }

    fn read(&self, bytes: &[u8], doc_id_hint: &str) -> Result<DependencyGraph, FormatError> {
        if bytes.iter().all(u8::is_ascii_whitespace) {
            return Ok(DependencyGraph::new(doc_id_hint, 0, vec![], Flavor::LocalForest));
        }
        let doc: JsonGraph = serde_json::from_slice(bytes)
            .map_err(|e| FormatError::at_column(e.line(), e.column(), e.to_string()))?;
        let mut arcs = Vec::with_capacity(doc.arcs.len());
        for (i, raw) in doc.arcs.into_iter().enumerate() {
            let arc = DependencyArc::new(raw.dependent, Head::from_index(raw.head), raw.sense);
            check_distance(&arc, raw.distance)
                .map_err(|m| FormatError::at(0, format!("arcs[{}]: {}", i, m)))?;
            arcs.push(arc);
        }
        Ok(DependencyGraph::new(doc.doc_id, doc.unit_count, arcs, doc.flavor))
    }
}

fn real(value: Option<f64>) -> String {
    value.map(|v| format!("{:.6}", v)).unwrap_or_default()
}

pub const METRICS_HEADER: &str = "doc_id,n_units,n_arcs,mdd,sd";

/// `doc_id,n_units,n_arcs,mdd,sd`, one row per document in doc_id order.
pub fn write_metrics(records: &[MetricsRecord]) -> Vec<u8> {
    let mut sorted: Vec<&MetricsRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.doc_id.cmp(&b.doc_id));
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer
        .write_record(METRICS_HEADER.split(','))
        .expect("write to memory");
    for record in sorted {
        writer
            .write_record([
                record.doc_id.clone(),
                record.unit_count.to_string(),
                record.arc_count.to_string(),
                real(record.mdd),
                real(record.sd),
            ])
            .expect("write to memory");
    }
    writer.into_inner().expect("flush to memory")
}

/// Parse a metrics file written by [`write_metrics`].
pub fn read_metrics(bytes: &[u8]) -> Result<Vec<MetricsRecord>, FormatError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(bytes);
    let header = reader
        .headers()
        .map_err(|e| FormatError::at(1, e.to_string()))?
        .clone();
    if header.iter().map(str::trim).ne(METRICS_HEADER.split(',')) {
        return Err(FormatError::at(1, format!("expected header '{}'", METRICS_HEADER)));
    }
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            FormatError::at(line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.len() != 5 {
            return Err(FormatError::at(
                line,
                format!("row has {} fields, expected 5", row.len()),
            ));
        }
        let count = |i: usize| {
            row[i].trim().parse::<usize>().map_err(|_| {
                FormatError::at_column(line, i + 1, format!("invalid count '{}'", &row[i]))
            })
        };
        let value = |i: usize| -> Result<Option<f64>, FormatError> {
            let cell = row[i].trim();
            if cell.is_empty() {
                return Ok(None);
            }
            cell.parse::<f64>().map(Some).map_err(|_| {
                FormatError::at_column(line, i + 1, format!("invalid number '{}'", cell))
            })
        };
        records.push(MetricsRecord {
            doc_id: row[0].to_owned(),
            unit_count: count(1)?,
            arc_count: count(2)?,
            mdd: value(3)?,
            sd: value(4)?,
        });
    }
    Ok(records)
}

/// `pairs,r,t,df` with one data row.
pub fn write_correlation(result: &CorrelationResult) -> Vec<u8> {
    format!(
        "pairs,r,t,df\n{},{:.6},{:.6},{}\n",
        result.pairs, result.r, result.t, result.df
    )
    .into_bytes()
}
