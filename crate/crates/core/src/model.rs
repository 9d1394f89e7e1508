//! Documents, character spans, sense tags and PDTB relation records.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("empty span [{start}, {end})")]
    EmptySpan { start: usize, end: usize },

    #[error("EDU indices must be contiguous from 1: expected {expected}, found {found}")]
    NonContiguousEdu { expected: usize, found: usize },

    #[error("EDU {index} overlaps or precedes EDU {previous}")]
    UnorderedEdu { index: usize, previous: usize },

    #[error("empty sense tag")]
    EmptySense,
}

/// Half-open character range `[start, end)` into the raw document text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    start: usize,
    end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Result<Span, ModelError> {
        if start >= end {
            return Err(ModelError::EmptySpan { start, end });
        }
        Ok(Span { start, end })
    }

    /// Span from inclusive bounds, as written `a..b` in PDTB relation files.
    pub fn from_inclusive(first: usize, last: usize) -> Result<Span, ModelError> {
        Span::new(first, last + 1)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    /// Always false; spans are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of characters shared with `other`.
    pub fn overlap(&self, other: &Span) -> usize {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        end.saturating_sub(start)
    }

    /// Characters between the two spans, 0 if they touch or overlap.
    pub fn gap(&self, other: &Span) -> usize {
        other
            .start
            .saturating_sub(self.end)
            .max(self.start.saturating_sub(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// An elementary discourse unit: 1-based position plus its character span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edu {
    pub index: usize,
    pub span: Span,
}

/// A document with its EDU inventory.
///
/// The text may be empty when only a segmentation is available (offsets
/// still refer to the original raw text).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    doc_id: String,
    text: String,
    edus: Vec<Edu>,
}

impl Document {
    /// Build a document, checking that EDU indices run 1..n and that spans
    /// ascend without overlapping.
    pub fn new(
        doc_id: impl Into<String>,
        text: impl Into<String>,
        edus: Vec<Edu>,
    ) -> Result<Document, ModelError> {
        for (pos, edu) in edus.iter().enumerate() {
            if edu.index != pos + 1 {
                return Err(ModelError::NonContiguousEdu {
                    expected: pos + 1,
                    found: edu.index,
                });
            }
            if pos > 0 && edus[pos - 1].span.end() > edu.span.start() {
                return Err(ModelError::UnorderedEdu {
                    index: edu.index,
                    previous: edu.index - 1,
                });
            }
        }

        Ok(Document {
            doc_id: doc_id.into(),
            text: text.into(),
            edus,
        })
    }

    /// Convenience constructor from spans in order; indices are assigned 1..n.
    pub fn from_spans(
        doc_id: impl Into<String>,
        text: impl Into<String>,
        spans: impl IntoIterator<Item = Span>,
    ) -> Result<Document, ModelError> {
        let edus = spans
            .into_iter()
            .enumerate()
            .map(|(pos, span)| Edu {
                index: pos + 1,
                span,
            })
            .collect();
        Document::new(doc_id, text, edus)
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn edus(&self) -> &[Edu] {
        &self.edus
    }

    /// Number of discourse units.
    pub fn unit_count(&self) -> usize {
        self.edus.len()
    }
}

/// A (up to) three-level PDTB sense: sense, class and type.
///
/// Level components are kept verbatim; comparisons that matter for
/// conversion are case-insensitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SenseTag {
    pub level1: String,
    pub level2: Option<String>,
    pub level3: Option<String>,
}

impl SenseTag {
    pub fn new(
        level1: impl Into<String>,
        level2: Option<String>,
        level3: Option<String>,
    ) -> SenseTag {
        SenseTag {
            level1: level1.into(),
            level2,
            level3,
        }
    }

    /// Single-level tag, used for EntRel/NoRel and the RST ROOT arc.
    pub fn single(level1: impl Into<String>) -> SenseTag {
        SenseTag::new(level1, None, None)
    }

    /// The components that are present, outermost first.
    pub fn levels(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.level1.as_str())
            .chain(self.level2.as_deref())
            .chain(self.level3.as_deref())
    }

    /// True when the dotted `pattern` matches this tag level by level,
    /// case-insensitively. `Contingency.Purpose` matches every
    /// `Contingency.Purpose.*` tag.
    pub fn matches_prefix(&self, pattern: &str) -> bool {
        let mut levels = self.levels();
        pattern.split('.').all(|want| {
            levels
                .next()
                .map(|have| have.eq_ignore_ascii_case(want.trim()))
                .unwrap_or(false)
        })
    }
}

impl FromStr for SenseTag {
    type Err = ModelError;

    /// Parse a dotted tag such as `Contingency.Condition.Arg2-as-cond`.
    /// Components beyond the third are folded into level 3.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ModelError::EmptySense);
        }
        let mut parts = s.splitn(3, '.');
        let level1 = parts.next().unwrap_or_default().to_owned();
        let level2 = parts.next().filter(|p| !p.is_empty()).map(str::to_owned);
        let level3 = parts.next().filter(|p| !p.is_empty()).map(str::to_owned);
        if level1.is_empty() {
            return Err(ModelError::EmptySense);
        }
        Ok(SenseTag {
            level1,
            level2,
            level3,
        })
    }
}

impl fmt::Display for SenseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for level in self.levels() {
            if !first {
                f.write_str(".")?;
            }
            f.write_str(level)?;
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Explicit,
    Implicit,
    AltLex,
    AltLexC,
    EntRel,
    Hypophora,
    NoRel,
}

impl RelationKind {
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Explicit,
        RelationKind::Implicit,
        RelationKind::AltLex,
        RelationKind::AltLexC,
        RelationKind::EntRel,
        RelationKind::Hypophora,
        RelationKind::NoRel,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RelationKind::Explicit => "Explicit",
            RelationKind::Implicit => "Implicit",
            RelationKind::AltLex => "AltLex",
            RelationKind::AltLexC => "AltLexC",
            RelationKind::EntRel => "EntRel",
            RelationKind::Hypophora => "Hypophora",
            RelationKind::NoRel => "NoRel",
        }
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        RelationKind::ALL
            .iter()
            .copied()
            .find(|kind| kind.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| s.to_owned())
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One PDTB annotation row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdtbRelation {
    pub kind: RelationKind,
    pub connective: Option<String>,
    pub connective_spans: Vec<Span>,
    /// Non-empty; the first sense is primary.
    pub senses: Vec<SenseTag>,
    pub arg1_spans: Vec<Span>,
    pub arg2_spans: Vec<Span>,
    pub link_group: Option<String>,
    /// 1-based line number in the source file.
    pub raw_line_no: usize,
}

impl PdtbRelation {
    pub fn primary_sense(&self) -> &SenseTag {
        &self.senses[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_rejects_empty() {
        assert_eq!(
            Span::new(4, 4),
            Err(ModelError::EmptySpan { start: 4, end: 4 })
        );
        let span = Span::from_inclusive(96, 100).unwrap();
        assert_eq!((span.start(), span.end(), span.len()), (96, 101, 5));
    }

    #[test]
    fn span_overlap_and_gap() {
        let a = Span::new(0, 10).unwrap();
        let b = Span::new(5, 20).unwrap();
        let c = Span::new(25, 30).unwrap();
        assert_eq!(a.overlap(&b), 5);
        assert_eq!(a.overlap(&c), 0);
        assert_eq!(a.gap(&c), 15);
        assert_eq!(c.gap(&a), 15);
        assert_eq!(a.gap(&b), 0);
    }

    #[test]
    fn document_checks_inventory() {
        let s = |a, b| Span::new(a, b).unwrap();
        assert!(Document::from_spans("d", "", vec![s(0, 5), s(5, 9)]).is_ok());
        assert_eq!(
            Document::from_spans("d", "", vec![s(0, 5), s(4, 9)]),
            Err(ModelError::UnorderedEdu {
                index: 2,
                previous: 1
            })
        );
        let edus = vec![Edu {
            index: 2,
            span: s(0, 3),
        }];
        assert_eq!(
            Document::new("d", "", edus),
            Err(ModelError::NonContiguousEdu {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn sense_parsing() {
        let tag: SenseTag = "Contingency.Condition.Arg2-as-cond".parse().unwrap();
        assert_eq!(tag.level1, "Contingency");
        assert_eq!(tag.level2.as_deref(), Some("Condition"));
        assert_eq!(tag.level3.as_deref(), Some("Arg2-as-cond"));
        assert_eq!(tag.to_string(), "Contingency.Condition.Arg2-as-cond");

        let two: SenseTag = "Expansion.Conjunction".parse().unwrap();
        assert_eq!(two.level3, None);
        assert_eq!("".parse::<SenseTag>(), Err(ModelError::EmptySense));
    }

    #[test]
    fn sense_prefix_matching_ignores_case() {
        let tag: SenseTag = "Comparison.Concession.Arg2-as-denier".parse().unwrap();
        assert!(tag.matches_prefix("comparison.concession"));
        assert!(tag.matches_prefix("Comparison.Concession.arg2-as-denier"));
        assert!(!tag.matches_prefix("Comparison.Contrast"));
        assert!(!tag.matches_prefix("Comparison.Concession.Arg2-as-denier.extra"));
    }

    #[test]
    fn relation_kind_parsing() {
        assert_eq!("Explicit".parse(), Ok(RelationKind::Explicit));
        assert_eq!("altlexc".parse(), Ok(RelationKind::AltLexC));
        assert_eq!("Bogus".parse::<RelationKind>(), Err("Bogus".to_owned()));
    }
}
