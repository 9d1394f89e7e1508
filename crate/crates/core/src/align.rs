//! Mapping PDTB argument spans onto a document's EDU inventory.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{Document, Edu, ModelError, Span};

/// Default minimum fraction of an EDU that must be covered.
pub const DEFAULT_THETA: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum AlignError {
    #[error("overlap fraction {0} outside (0, 1]")]
    Theta(f64),

    #[error("argument maps to no EDU (document '{doc_id}' has no EDU inventory)")]
    EmptyAlignment { doc_id: String },

    #[error("segmentation line {line}: {message}")]
    Segmentation { line: usize, message: String },

    #[error("segmentation for '{doc_id}': {source}")]
    Inventory {
        doc_id: String,
        #[source]
        source: ModelError,
    },
}

fn merge(spans: &[Span]) -> Vec<Span> {
    let mut sorted = spans.to_vec();
    sorted.sort();
    let mut merged: Vec<Span> = Vec::with_capacity(sorted.len());
    for span in sorted {
        match merged.last_mut() {
            Some(last) if span.start() <= last.end() => {
                if span.end() > last.end() {
                    // start < end holds for the widened span.
                    *last = Span::new(last.start(), span.end()).expect("widened span");
                }
            }
            _ => merged.push(span),
        }
    }
    merged
}

/// Characters of `edu` covered by the union of `spans`.
fn covered(merged: &[Span], edu: &Edu) -> usize {
    merged.iter().map(|span| span.overlap(&edu.span)).sum()
}

/// Every EDU whose overlap with the union of `spans` is at least
/// `theta` times the EDU length. May be empty.
pub fn map_span_set(spans: &[Span], doc: &Document, theta: f64) -> BTreeSet<usize> {
    let merged = merge(spans);
    doc.edus()
        .iter()
        .filter(|edu| {
            let overlap = covered(&merged, edu);
            overlap > 0 && overlap as f64 >= theta * edu.span.len() as f64
        })
        .map(|edu| edu.index)
        .collect()
}

/// Result of aligning one argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub units: BTreeSet<usize>,
    /// True when no EDU met the threshold and a single fallback unit was used.
    pub fallback: bool,
}

/// Strategy for turning an argument's character spans into EDUs.
pub trait SpanAligner: Send + Sync {
    fn align(&self, spans: &[Span], doc: &Document) -> Result<Alignment, AlignError>;
}

/// Threshold alignment with a single-EDU fallback.
///
/// When no EDU reaches `theta`, the EDU with the largest absolute overlap
/// is used; if nothing overlaps at all, the nearest EDU by character gap.
/// Ties go to the earlier EDU.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapAligner {
    theta: f64,
}

impl OverlapAligner {
    pub fn new(theta: f64) -> Result<OverlapAligner, AlignError> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(AlignError::Theta(theta));
        }
        Ok(OverlapAligner { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for OverlapAligner {
    fn default() -> Self {
        OverlapAligner {
            theta: DEFAULT_THETA,
        }
    }
}

impl SpanAligner for OverlapAligner {
    fn align(&self, spans: &[Span], doc: &Document) -> Result<Alignment, AlignError> {
        let empty = || AlignError::EmptyAlignment {
            doc_id: doc.doc_id().to_owned(),
        };
        if doc.edus().is_empty() || spans.is_empty() {
            return Err(empty());
        }

        let units = map_span_set(spans, doc, self.theta);
        if !units.is_empty() {
            return Ok(Alignment {
                units,
                fallback: false,
            });
        }

        let merged = merge(spans);
        // min_by_key keeps the first minimum, so ties resolve to the earlier EDU.
        let best = doc
            .edus()
            .iter()
            .min_by_key(|edu| {
                let overlap = covered(&merged, edu);
                let gap = merged.iter().map(|s| s.gap(&edu.span)).min().unwrap_or(0);
                (std::cmp::Reverse(overlap), gap)
            })
            .ok_or_else(empty)?;

        Ok(Alignment {
            units: BTreeSet::from([best.index]),
            fallback: true,
        })
    }
}

/// Parse a segmentation file: `doc_id<TAB>edu_index<TAB>start<TAB>end`
/// per line, offsets half-open. Blank lines and `#` comments are skipped.
pub fn parse_segmentation(text: &str) -> Result<BTreeMap<String, Document>, AlignError> {
    let mut rows: BTreeMap<String, Vec<Edu>> = BTreeMap::new();

    for (pos, line) in text.lines().enumerate() {
        let line_no = pos + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fail = |message: String| AlignError::Segmentation {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(fail(format!("expected 4 fields, found {}", fields.len())));
        }
        let number = |field: &str, name: &str| {
            field
                .parse::<usize>()
                .map_err(|_| fail(format!("invalid {} '{}'", name, field)))
        };
        let index = number(fields[1], "edu_index")?;
        let start = number(fields[2], "start")?;
        let end = number(fields[3], "end")?;
        let span = Span::new(start, end).map_err(|e| fail(e.to_string()))?;
        rows.entry(fields[0].to_owned())
            .or_default()
            .push(Edu { index, span });
    }

    rows.into_iter()
        .map(|(doc_id, mut edus)| {
            edus.sort_by_key(|edu| edu.index);
            let doc = Document::new(doc_id.clone(), "", edus).map_err(|source| {
                AlignError::Inventory {
                    doc_id: doc_id.clone(),
                    source,
                }
            })?;
            Ok((doc_id, doc))
        })
        .collect()
}
