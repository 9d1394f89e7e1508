//! Non-fatal findings reported alongside results.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    /// A relation-file line could not be parsed and was skipped.
    Parse,
    /// A unit has more than one head.
    MultipleHeads,
    /// A unit has no head in a rooted tree.
    MissingHead,
    /// Arcs form a cycle.
    Cycle,
    /// Wrong number of ROOT arcs for the graph flavor.
    RootCount,
    /// A unit cannot reach ROOT.
    Disconnected,
    /// An arc whose dependent is its own head.
    SelfLoop,
    /// An arc refers to a unit outside 1..=n.
    OutOfRange,
    /// No EDU met the overlap threshold; the fallback EDU was used.
    AlignmentFallback,
    /// Both arguments of a relation map onto a shared EDU; no arc emitted.
    ArgumentOverlap,
    /// A relation was dropped because an earlier one shares its link group.
    LinkGroupDuplicate,
    /// A document has no segmentation and was skipped.
    MissingSegmentation,
}

impl DiagnosticKind {
    /// Whether the finding means the output is wrong or incomplete, as
    /// opposed to a note about how it was produced. Strict runs fail on
    /// errors only.
    pub fn is_error(&self) -> bool {
        !matches!(
            self,
            DiagnosticKind::AlignmentFallback | DiagnosticKind::LinkGroupDuplicate
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    /// Source line (1-based) when the finding comes from a file.
    pub line: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            kind,
            line: None,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Diagnostic {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {}: {}", line, self.message),
            None => f.write_str(&self.message),
        }
    }
}
