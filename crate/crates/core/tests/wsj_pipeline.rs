use std::path::PathBuf;

use approx::assert_abs_diff_eq;
use discodep::align::OverlapAligner;
use discodep::diag::DiagnosticKind;
use discodep::export::{dep_codecs, write_metrics};
use discodep::metrics::{mdd_local, sd_distances, LocalMdd, MddMode};
use discodep::pdtb2dep::{head_rules, PdtbConverter};
use discodep::{
    convert_pdtb, parse_relation_file, parse_segmentation, validate_graph, ColumnMap,
    DependencyGraph, Document,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/wsj_0618")
        .join(name)
}

fn inputs() -> (Document, Vec<discodep::PdtbRelation>) {
    let seg = std::fs::read_to_string(fixture("edus.tsv")).unwrap();
    let mut docs = parse_segmentation(&seg).unwrap();
    let doc = docs.remove("wsj_0618").unwrap();
    let (relations, diagnostics) =
        parse_relation_file(fixture("wsj_0618.pdtb"), &ColumnMap::default(), true).unwrap();
    assert!(diagnostics.is_empty());
    (doc, relations)
}

fn triples(graph: &DependencyGraph) -> Vec<(usize, usize, String)> {
    graph
        .arcs()
        .iter()
        .map(|a| (a.dependent, a.head.index(), a.sense.to_string()))
        .collect()
}

#[test]
fn fixture_shape() {
    let (doc, relations) = inputs();
    assert_eq!(doc.unit_count(), 17);
    assert_eq!(relations.len(), 12);
    assert_eq!(
        relations.iter().filter(|r| r.link_group.is_some()).count(),
        2
    );
}

#[test]
fn default_conversion() {
    let (doc, relations) = inputs();
    let (graph, diagnostics) = convert_pdtb(&doc, &relations).unwrap();

    let expected: Vec<(usize, usize, &str)> = vec![
        (2, 1, "Contingency.Condition.Arg2-as-cond"),
        (3, 4, "Temporal.Asynchronous.Succession"),
        (5, 6, "Expansion.Disjunction"),
        (6, 7, "Contingency.Cause.Reason"),
        (9, 8, "Comparison.Concession.Arg2-as-denier"),
        (10, 9, "Contingency.Condition.Arg2-as-cond"),
        (11, 12, "EntRel"),
        (13, 14, "Contingency.Cause.Reason"),
        (15, 17, "Contingency.Cause.Result"),
        (16, 17, "Contingency.Purpose.Arg2-as-goal"),
        (17, 14, "Expansion.Exception.Arg2-as-excpt"),
    ];
    let expected: Vec<(usize, usize, String)> = expected
        .into_iter()
        .map(|(d, h, s)| (d, h, s.to_owned()))
        .collect();
    assert_eq!(triples(&graph), expected);

    let mut distances = graph.distances();
    distances.sort();
    assert_eq!(distances, vec![1, 1, 1, 1, 1, 1, 1, 1, 1, 2, 3]);
    assert_abs_diff_eq!(mdd_local(&graph).unwrap(), 14.0 / 11.0, epsilon = 1e-12);
    assert_abs_diff_eq!(sd_distances(&graph).unwrap(), 0.646669790683, epsilon = 1e-9);
    assert!(validate_graph(&graph).is_empty());

    // The second LINK1 line is folded into the first.
    assert!(diagnostics
        .iter()
        .any(|d| d.kind == DiagnosticKind::LinkGroupDuplicate && d.line == Some(11)));
    assert!(!diagnostics
        .iter()
        .any(|d| d.kind == DiagnosticKind::ArgumentOverlap));
}

#[test]
fn pure_marker_rule_keeps_arc_count() {
    let (doc, relations) = inputs();
    let rule = head_rules().get("marker").unwrap();
    let converter = PdtbConverter::new(Box::new(OverlapAligner::default()), rule);
    let (graph, _) = converter.convert(&doc, &relations).unwrap();
    let pairs: Vec<(usize, usize)> = graph
        .arcs()
        .iter()
        .map(|a| (a.dependent, a.head.index()))
        .collect();
    assert!(pairs.contains(&(17, 16)));
    assert!(pairs.contains(&(15, 16)));
    assert!(pairs.contains(&(16, 14)));
    assert_eq!(pairs.len(), 11);
    assert_abs_diff_eq!(mdd_local(&graph).unwrap(), 12.0 / 11.0, epsilon = 1e-12);
}

#[test]
fn strict_overlap_logs_fallbacks() {
    let (doc, relations) = inputs();
    let converter = PdtbConverter::new(
        Box::new(OverlapAligner::new(1.0).unwrap()),
        head_rules().get("marker-goal").unwrap(),
    );
    let (graph, diagnostics) = converter.convert(&doc, &relations).unwrap();
    assert_eq!(graph.arcs().len(), 11);
    assert!(diagnostics
        .iter()
        .any(|d| d.kind == DiagnosticKind::AlignmentFallback));
}

#[test]
fn metrics_row_and_round_trips() {
    let (doc, relations) = inputs();
    let (graph, _) = convert_pdtb(&doc, &relations).unwrap();

    let metrics = String::from_utf8(write_metrics(&[LocalMdd.record(&graph)])).unwrap();
    assert_eq!(
        metrics,
        "doc_id,n_units,n_arcs,mdd,sd\nwsj_0618,17,11,1.272727,0.646670\n"
    );

    let codecs = dep_codecs();
    for name in codecs.names() {
        let codec = codecs.get(name).unwrap();
        let back = codec.read(&codec.write(&graph), "wsj_0618").unwrap();
        assert_eq!(back, graph, "{} round trip", name);
    }

    let csv = String::from_utf8(codecs.get("csv").unwrap().write(&graph)).unwrap();
    assert_eq!(csv.lines().count(), 12);
    assert!(csv
        .lines()
        .any(|l| l == "17,14,3,Expansion,Exception,Arg2-as-excpt"));
}
