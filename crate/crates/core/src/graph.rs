//! Discourse dependency graphs and their structural validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::model::SenseTag;

/// Head of an arc: the artificial ROOT (written as 0) or a 1-based unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Root,
    Unit(usize),
}

impl Head {
    /// Numeric form used by every file format: ROOT is 0.
    pub fn index(&self) -> usize {
        match *self {
            Head::Root => 0,
            Head::Unit(unit) => unit,
        }
    }

    pub fn from_index(index: usize) -> Head {
        if index == 0 {
            Head::Root
        } else {
            Head::Unit(index)
        }
    }

    pub fn is_root(&self) -> bool {
        matches!(self, Head::Root)
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A labeled arc from a dependent unit to its head.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyArc {
    pub dependent: usize,
    pub head: Head,
    pub sense: SenseTag,
}

impl DependencyArc {
    pub fn new(dependent: usize, head: Head, sense: SenseTag) -> DependencyArc {
        DependencyArc {
            dependent,
            head,
            sense,
        }
    }

    /// Linear distance `|dependent - head|`; `None` for ROOT arcs.
    pub fn distance(&self) -> Option<usize> {
        match self.head {
            Head::Root => None,
            Head::Unit(head) => Some(self.dependent.abs_diff(head)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flavor {
    /// Single ROOT, every unit headed once, acyclic and connected (RST).
    RootedTree,
    /// No ROOT; at most one head per unit, acyclic (PDTB).
    LocalForest,
}

impl Flavor {
    pub fn as_str(&self) -> &'static str {
        match self {
            Flavor::RootedTree => "RootedTree",
            Flavor::LocalForest => "LocalForest",
        }
    }
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "RootedTree" => Ok(Flavor::RootedTree),
            "LocalForest" => Ok(Flavor::LocalForest),
            other => Err(other.to_owned()),
        }
    }
}

/// Dependency structure over the units of one document.
///
/// Arcs are kept in canonical order (by dependent, then head, then sense)
/// so that equal graphs compare and serialize identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    doc_id: String,
    unit_count: usize,
    arcs: Vec<DependencyArc>,
    flavor: Flavor,
}

impl DependencyGraph {
    pub fn new(
        doc_id: impl Into<String>,
        unit_count: usize,
        mut arcs: Vec<DependencyArc>,
        flavor: Flavor,
    ) -> DependencyGraph {
        arcs.sort();
        DependencyGraph {
            doc_id: doc_id.into(),
            unit_count,
            arcs,
            flavor,
        }
    }

    pub fn doc_id(&self) -> &str {
        &self.doc_id
    }

    pub fn unit_count(&self) -> usize {
        self.unit_count
    }

    pub fn arcs(&self) -> &[DependencyArc] {
        &self.arcs
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Distances of all non-ROOT arcs, in arc order.
    pub fn distances(&self) -> Vec<usize> {
        self.arcs.iter().filter_map(DependencyArc::distance).collect()
    }

    /// Copy of this graph under another document id.
    pub fn with_doc_id(&self, doc_id: impl Into<String>) -> DependencyGraph {
        DependencyGraph {
            doc_id: doc_id.into(),
            ..self.clone()
        }
    }

    /// Copy with every arc's sense rewritten by `f`.
    pub fn map_senses(&self, mut f: impl FnMut(&SenseTag) -> SenseTag) -> DependencyGraph {
        let arcs = self
            .arcs
            .iter()
            .map(|arc| DependencyArc::new(arc.dependent, arc.head, f(&arc.sense)))
            .collect();
        DependencyGraph::new(self.doc_id.clone(), self.unit_count, arcs, self.flavor)
    }
}

/// Check the flavor-specific invariants of `graph`.
///
/// Returns one diagnostic per violation; an empty list means the graph is
/// well-formed. Anomalies are reported, never repaired.
pub fn validate_graph(graph: &DependencyGraph) -> Vec<Diagnostic> {
    let n = graph.unit_count();
    let mut diagnostics = Vec::new();
    let in_range = |unit: usize| (1..=n).contains(&unit);

    let mut heads: BTreeMap<usize, Vec<Head>> = BTreeMap::new();
    let mut root_arcs = 0;

    for arc in graph.arcs() {
        if !in_range(arc.dependent) {
            diagnostics.push(Diagnostic::new(
                DiagnosticKind::OutOfRange,
                format!(
                    "arc {}->{}: dependent outside units 1..={}",
                    arc.dependent, arc.head, n
                ),
            ));
            continue;
        }
        match arc.head {
            Head::Root => root_arcs += 1,
            Head::Unit(head) if !in_range(head) => {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::OutOfRange,
                    format!(
                        "arc {}->{}: head outside units 1..={}",
                        arc.dependent, head, n
                    ),
                ));
                continue;
            }
            Head::Unit(head) if head == arc.dependent => {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::SelfLoop,
                    format!("unit {} is its own head", head),
                ));
                continue;
            }
            Head::Unit(_) => {}
        }
        heads.entry(arc.dependent).or_default().push(arc.head);
    }

    match graph.flavor() {
        Flavor::LocalForest => {
            if root_arcs > 0 {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::RootCount,
                    format!("local forest has {} ROOT arc(s)", root_arcs),
                ));
            }
        }
        Flavor::RootedTree => {
            if root_arcs != 1 {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::RootCount,
                    format!("rooted tree has {} ROOT arcs, expected 1", root_arcs),
                ));
            }
        }
    }

    for (unit, unit_heads) in &heads {
        if unit_heads.len() > 1 {
            let listed: Vec<String> = unit_heads.iter().map(Head::to_string).collect();
            diagnostics.push(Diagnostic::new(
                DiagnosticKind::MultipleHeads,
                format!("multiple heads for unit {} ({})", unit, listed.join(", ")),
            ));
        }
    }

    let mut missing = BTreeSet::new();
    if graph.flavor() == Flavor::RootedTree {
        for unit in 1..=n {
            if !heads.contains_key(&unit) {
                missing.insert(unit);
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::MissingHead,
                    format!("unit {} has no head", unit),
                ));
            }
        }
    }

    // Node 0 stands for ROOT; edges point from dependent to head.
    let mut digraph = DiGraph::<usize, ()>::with_capacity(n + 1, graph.arcs().len());
    let nodes: Vec<_> = (0..=n).map(|unit| digraph.add_node(unit)).collect();
    for (&unit, unit_heads) in &heads {
        for head in unit_heads {
            digraph.add_edge(nodes[unit], nodes[head.index()], ());
        }
    }

    let mut in_cycle = BTreeSet::new();
    let mut cycles: Vec<Vec<usize>> = tarjan_scc(&digraph)
        .into_iter()
        .filter(|component| component.len() > 1)
        .map(|component| {
            let mut units: Vec<usize> = component.iter().map(|&ix| digraph[ix]).collect();
            units.sort_unstable();
            units
        })
        .collect();
    cycles.sort();
    for units in cycles {
        in_cycle.extend(units.iter().copied());
        let listed: Vec<String> = units.iter().map(usize::to_string).collect();
        diagnostics.push(Diagnostic::new(
            DiagnosticKind::Cycle,
            format!("cycle among units {}", listed.join(", ")),
        ));
    }

    if graph.flavor() == Flavor::RootedTree && root_arcs > 0 {
        let mut reached = BTreeSet::new();
        let mut stack = vec![0];
        while let Some(head) = stack.pop() {
            for (&unit, unit_heads) in &heads {
                if unit_heads.iter().any(|h| h.index() == head) && reached.insert(unit) {
                    stack.push(unit);
                }
            }
        }
        for unit in 1..=n {
            if !reached.contains(&unit) && !missing.contains(&unit) && !in_cycle.contains(&unit)
            {
                diagnostics.push(Diagnostic::new(
                    DiagnosticKind::Disconnected,
                    format!("unit {} is not connected to ROOT", unit),
                ));
            }
        }
    }

    diagnostics
}
