//! Discourse dependency structures from PDTB and RST annotations.
//!
//! The crate reads PDTB relation files and RST `.dis` trees, converts them
//! into dependency graphs over elementary discourse units (EDUs), and
//! computes dependency-distance statistics over the result.
//!
//! Each algorithm family (head rules, RST conversions, distance modes,
//! output codecs) sits behind a trait and is looked up by name in a
//! [`Registry`].

pub mod align;
pub mod diag;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod pdtb;
pub mod pdtb2dep;
pub mod registry;
pub mod rst;
pub mod rst2dep;

pub use align::{map_span_set, parse_segmentation, Alignment, OverlapAligner, SpanAligner};
pub use diag::{Diagnostic, DiagnosticKind};
pub use export::{dep_codecs, read_metrics, write_correlation, write_metrics, DepCodec, FormatError};
pub use graph::{validate_graph, DependencyArc, DependencyGraph, Flavor, Head};
pub use metrics::{
    corpus_mean, mdd_local, mdd_modes, mdd_rooted, pearson, sd_distances, CorrelationResult,
    MddMode, MetricField, MetricsRecord,
};
pub use model::{Document, Edu, PdtbRelation, RelationKind, SenseTag, Span};
pub use pdtb::{parse_relation_file, parse_relations, ColumnMap};
pub use pdtb2dep::{convert_pdtb, head_of_constituent, head_rules, HeadRule, PdtbConverter};
pub use registry::{Named, Registry};
pub use rst::{edu_inventory_of, parse_dis, LabelMap, RstTree};
pub use rst2dep::{hirao_convert, li_convert, rst_converters, tree_heads, RstConverter};
