//! Conversion of PDTB relations into local dependency forests.
//!
//! Each kept relation yields one arc between the heads of its two
//! arguments. Which argument heads the other is decided by a [`HeadRule`].
//! Multi-EDU arguments are reduced to a single head EDU using arcs already
//! emitted inside the argument, so relations are processed innermost first.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::align::{AlignError, OverlapAligner, SpanAligner};
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::graph::{DependencyArc, DependencyGraph, Flavor, Head};
use crate::model::{Document, PdtbRelation, RelationKind, SenseTag};
use crate::registry::{Named, Registry};

#[derive(Debug, Error, PartialEq)]
pub enum ConvertError {
    #[error(transparent)]
    Align(#[from] AlignError),

    #[error("head override line {line}: {message}")]
    Override { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arg {
    Arg1,
    Arg2,
}

/// Whether a sense singles out one argument as subordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryVerdict {
    Symmetric,
    /// The marked argument is the dependent; the other one is the head.
    Asymmetric { marked: Arg },
}

/// Classify a sense by its level-3 `ArgN-as-...` marker (case-insensitive).
pub fn sense_symmetry(tag: &SenseTag) -> SymmetryVerdict {
    let Some(level3) = tag.level3.as_deref() else {
        return SymmetryVerdict::Symmetric;
    };
    let lower = level3.to_ascii_lowercase();
    if lower.starts_with("arg1-as-") {
        SymmetryVerdict::Asymmetric { marked: Arg::Arg1 }
    } else if lower.starts_with("arg2-as-") {
        SymmetryVerdict::Asymmetric { marked: Arg::Arg2 }
    } else {
        SymmetryVerdict::Symmetric
    }
}

/// Which side of a relation becomes the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Arg1's head governs Arg2's head.
    Arg1Head,
    /// Arg2's head governs Arg1's head.
    Arg2Head,
    /// The linearly later head governs the earlier one.
    LaterHead,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Arg1Head => "arg1",
            Direction::Arg2Head => "arg2",
            Direction::LaterHead => "later",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "arg1" => Ok(Direction::Arg1Head),
            "arg2" => Ok(Direction::Arg2Head),
            "later" => Ok(Direction::LaterHead),
            other => Err(format!("unknown head direction '{}'", other)),
        }
    }
}

impl From<SymmetryVerdict> for Direction {
    fn from(verdict: SymmetryVerdict) -> Self {
        match verdict {
            SymmetryVerdict::Symmetric => Direction::LaterHead,
            SymmetryVerdict::Asymmetric { marked: Arg::Arg1 } => Direction::Arg2Head,
            SymmetryVerdict::Asymmetric { marked: Arg::Arg2 } => Direction::Arg1Head,
        }
    }
}

/// Decides head direction from a relation's primary sense.
pub trait HeadRule: Named + Send + Sync {
    fn direction(&self, sense: &SenseTag) -> Direction;
}

/// The `ArgN-as-` marker rule: the marked argument depends on the other;
/// unmarked senses attach the earlier unit to the later one.
#[derive(Clone, Copy, Debug, Default)]
pub struct MarkerRule;

impl Named for MarkerRule {
    fn name(&self) -> &'static str {
        "marker"
    }
}

impl HeadRule for MarkerRule {
    fn direction(&self, sense: &SenseTag) -> Direction {
        sense_symmetry(sense).into()
    }
}

/// A base rule with per-sense exceptions.
///
/// Patterns are dotted sense prefixes matched level by level; the first
/// matching pattern wins.
pub struct OverrideRule {
    name: &'static str,
    base: Arc<dyn HeadRule>,
    overrides: Vec<(String, Direction)>,
}

impl OverrideRule {
    pub fn new(
        name: &'static str,
        base: Arc<dyn HeadRule>,
        overrides: Vec<(String, Direction)>,
    ) -> OverrideRule {
        OverrideRule {
            name,
            base,
            overrides,
        }
    }

    /// The default rule: marker rule, except that a purpose clause
    /// (`Arg2-as-goal`) heads its Arg1 partner.
    pub fn marker_goal() -> OverrideRule {
        OverrideRule::new(
            "marker-goal",
            Arc::new(MarkerRule),
            vec![(
                "Contingency.Purpose.Arg2-as-goal".to_owned(),
                Direction::Arg2Head,
            )],
        )
    }

    /// Parse override lines `sense-pattern<TAB>arg1|arg2|later`.
    pub fn parse_overrides(text: &str) -> Result<Vec<(String, Direction)>, ConvertError> {
        let mut overrides = Vec::new();
        for (pos, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fail = |message: String| ConvertError::Override {
                line: pos + 1,
                message,
            };
            let (pattern, direction) = trimmed
                .split_once('\t')
                .ok_or_else(|| fail("expected pattern<TAB>direction".to_owned()))?;
            let direction: Direction = direction.parse().map_err(fail)?;
            overrides.push((pattern.trim().to_owned(), direction));
        }
        Ok(overrides)
    }

    pub fn overrides(&self) -> &[(String, Direction)] {
        &self.overrides
    }
}

impl Named for OverrideRule {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl HeadRule for OverrideRule {
    fn direction(&self, sense: &SenseTag) -> Direction {
        self.overrides
            .iter()
            .find(|(pattern, _)| sense.matches_prefix(pattern))
            .map(|(_, direction)| *direction)
            .unwrap_or_else(|| self.base.direction(sense))
    }
}

/// Name of the head rule used when none is requested.
pub const DEFAULT_HEAD_RULE: &str = "marker-goal";

/// Built-in head rules.
pub fn head_rules() -> Registry<dyn HeadRule> {
    let mut registry: Registry<dyn HeadRule> = Registry::new("head rule");
    registry
        .register(Arc::new(MarkerRule))
        .expect("unique name");
    registry
        .register(Arc::new(OverrideRule::marker_goal()))
        .expect("unique name");
    registry
}

/// The head of a constituent: the unit of `units` that no arc internal to
/// `units` makes a dependent. If several qualify, the linearly last one.
///
/// # Panics
///
/// If `units` is empty.
pub fn head_of_constituent(units: &BTreeSet<usize>, arcs: &[DependencyArc]) -> usize {
    let governed: HashSet<usize> = arcs
        .iter()
        .filter(|arc| {
            units.contains(&arc.dependent)
                && matches!(arc.head, Head::Unit(head) if units.contains(&head))
        })
        .map(|arc| arc.dependent)
        .collect();
    units
        .iter()
        .rev()
        .find(|unit| !governed.contains(unit))
        .or_else(|| units.iter().next_back())
        .copied()
        .expect("constituent must not be empty")
}

/// Aligner plus head rule.
pub struct PdtbConverter {
    aligner: Box<dyn SpanAligner>,
    rule: Arc<dyn HeadRule>,
}

impl PdtbConverter {
    pub fn new(aligner: Box<dyn SpanAligner>, rule: Arc<dyn HeadRule>) -> PdtbConverter {
        PdtbConverter { aligner, rule }
    }

    pub fn rule(&self) -> &dyn HeadRule {
        self.rule.as_ref()
    }

    /// Convert one document's relations into a local dependency forest.
    pub fn convert(
        &self,
        doc: &Document,
        relations: &[PdtbRelation],
    ) -> Result<(DependencyGraph, Vec<Diagnostic>), ConvertError> {
        let mut diagnostics = Vec::new();

        let mut seen_links = HashSet::new();
        let mut kept = Vec::new();
        for relation in relations {
            if relation.kind == RelationKind::NoRel {
                continue;
            }
            if let Some(link) = &relation.link_group {
                if !seen_links.insert(link.as_str()) {
                    diagnostics.push(
                        Diagnostic::new(
                            DiagnosticKind::LinkGroupDuplicate,
                            format!("{} already represented; relation dropped", link),
                        )
                        .at_line(relation.raw_line_no),
                    );
                    continue;
                }
            }
            kept.push(relation);
        }

        let mut aligned = Vec::with_capacity(kept.len());
        for (order, relation) in kept.into_iter().enumerate() {
            let mut sides = Vec::with_capacity(2);
            for (name, spans) in [("Arg1", &relation.arg1_spans), ("Arg2", &relation.arg2_spans)] {
                let alignment = self.aligner.align(spans, doc)?;
                if alignment.fallback {
                    log::debug!(
                        "{} line {}: {} below threshold, using EDU {:?}",
                        doc.doc_id(),
                        relation.raw_line_no,
                        name,
                        alignment.units
                    );
                    diagnostics.push(
                        Diagnostic::new(
                            DiagnosticKind::AlignmentFallback,
                            format!(
                                "{} aligned by fallback to EDU {}",
                                name,
                                join(&alignment.units)
                            ),
                        )
                        .at_line(relation.raw_line_no),
                    );
                }
                sides.push(alignment.units);
            }
            let arg2 = sides.pop().expect("two sides");
            let arg1 = sides.pop().expect("two sides");
            aligned.push((order, relation, arg1, arg2));
        }

        // Innermost constituents first; file order breaks ties.
        aligned.sort_by_key(|(order, _, arg1, arg2)| (arg1.union(arg2).count(), *order));

        let mut arcs: Vec<DependencyArc> = Vec::with_capacity(aligned.len());
        for (_, relation, arg1, arg2) in aligned {
            if !arg1.is_disjoint(&arg2) {
                diagnostics.push(
                    Diagnostic::new(
                        DiagnosticKind::ArgumentOverlap,
                        format!(
                            "Arg1 (EDU {}) and Arg2 (EDU {}) share units; no arc",
                            join(&arg1),
                            join(&arg2)
                        ),
                    )
                    .at_line(relation.raw_line_no),
                );
                continue;
            }
            let head1 = head_of_constituent(&arg1, &arcs);
            let head2 = head_of_constituent(&arg2, &arcs);
            let sense = relation.primary_sense();
            let (dependent, head) = match self.rule.direction(sense) {
                Direction::Arg1Head => (head2, head1),
                Direction::Arg2Head => (head1, head2),
                Direction::LaterHead => (head1.min(head2), head1.max(head2)),
            };
            arcs.push(DependencyArc::new(dependent, Head::Unit(head), sense.clone()));
        }

        let graph = DependencyGraph::new(doc.doc_id(), doc.unit_count(), arcs, Flavor::LocalForest);
        Ok((graph, diagnostics))
    }
}

impl Default for PdtbConverter {
    fn default() -> Self {
        PdtbConverter::new(
            Box::new(OverlapAligner::default()),
            Arc::new(OverrideRule::marker_goal()),
        )
    }
}

/// Convert with the default aligner and head rule.
pub fn convert_pdtb(
    doc: &Document,
    relations: &[PdtbRelation],
) -> Result<(DependencyGraph, Vec<Diagnostic>), ConvertError> {
    PdtbConverter::default().convert(doc, relations)
}

fn join(units: &BTreeSet<usize>) -> String {
    units
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
