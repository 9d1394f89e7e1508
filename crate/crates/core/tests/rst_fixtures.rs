use std::path::PathBuf;

use approx::assert_abs_diff_eq;
use discodep::export::Csv;
use discodep::metrics::{mdd_local, mdd_rooted, sd_distances};
use discodep::rst::{parse_dis_file, write_dis};
use discodep::rst2dep::{root_sense, Hirao};
use discodep::{
    hirao_convert, li_convert, parse_dis, tree_heads, validate_graph, DepCodec, DiagnosticKind,
    LabelMap, RstConverter,
};

fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(path)
}

fn pairs(graph: &discodep::DependencyGraph) -> Vec<(usize, usize)> {
    graph
        .arcs()
        .iter()
        .map(|a| (a.dependent, a.head.index()))
        .collect()
}

#[test]
fn fig1_global_rows() {
    let tree = parse_dis_file(&fixture("fig1/fig1.dis")).unwrap();
    assert_eq!(tree.unit_count(), 11);
    assert_eq!(tree_heads(&tree)[&vec![]], 3);

    let labels = LabelMap::parse(&std::fs::read_to_string(fixture("fig1/labels.tsv")).unwrap())
        .unwrap();
    let graph = Hirao.convert(&tree, "fig1", Some(&labels));
    assert!(validate_graph(&graph).is_empty());

    // (dependent, head, distance, relation, class) as published.
    let published: [(usize, usize, Option<usize>, &str, &str); 11] = [
        (1, 3, Some(2), "preparation", "ELABORATION"),
        (2, 3, Some(1), "circumstance", "BACKGROUND"),
        (3, 0, None, "ROOT", "NONE"),
        (4, 3, Some(1), "background", "BACKGROUND"),
        (5, 4, Some(1), "result", "CAUSE"),
        (6, 3, Some(3), "background", "BACKGROUND"),
        (7, 3, Some(4), "background", "BACKGROUND"),
        (8, 3, Some(5), "background", "BACKGROUND"),
        (9, 3, Some(6), "background", "BACKGROUND"),
        (10, 3, Some(7), "background", "BACKGROUND"),
        (11, 10, Some(1), "concession", "CONTRAST"),
    ];
    assert_eq!(graph.arcs().len(), published.len());
    for (arc, row) in graph.arcs().iter().zip(published) {
        assert_eq!(arc.dependent, row.0);
        assert_eq!(arc.head.index(), row.1);
        assert_eq!(arc.distance(), row.2);
        assert_eq!(arc.sense.level1, row.3);
        assert_eq!(arc.sense.level2.as_deref(), Some(row.4));
    }
    assert_eq!(graph.arcs()[2].sense, root_sense());

    assert_eq!(mdd_rooted(&graph).unwrap(), 3.1);
    assert_abs_diff_eq!(sd_distances(&graph).unwrap(), 2.282785822435, epsilon = 1e-9);

    // The fixture is binary, so both variants agree.
    assert_eq!(li_convert(&tree, "fig1"), hirao_convert(&tree, "fig1"));
}

#[test]
fn fig1_local_rows() {
    let bytes = std::fs::read(fixture("fig1/fig1_local.csv")).unwrap();
    let graph = Csv.read(&bytes, "fig1").unwrap();
    assert_eq!(graph.arcs().len(), 8);
    let mut distances = graph.distances();
    distances.sort();
    assert_eq!(distances, vec![1, 1, 1, 1, 1, 1, 1, 2]);
    assert_eq!(mdd_local(&graph).unwrap(), 1.125);
    assert_abs_diff_eq!(sd_distances(&graph).unwrap(), 0.353553390593, epsilon = 1e-9);

    let problems = validate_graph(&graph);
    assert_eq!(problems.len(), 1);
    assert_eq!(problems[0].kind, DiagnosticKind::MultipleHeads);
    assert!(problems[0].message.contains("unit 3"));
}

#[test]
fn mixed_nuclearity_fixture() {
    let tree = parse_dis_file(&fixture("rst/mixed4.dis")).unwrap();
    let hirao = hirao_convert(&tree, "mixed4");
    let li = li_convert(&tree, "mixed4");
    assert_eq!(pairs(&hirao), vec![(1, 0), (2, 1), (3, 1), (4, 3)]);
    assert_eq!(pairs(&li), vec![(1, 0), (2, 3), (3, 1), (4, 3)]);
    assert!(validate_graph(&hirao).is_empty());
    assert!(validate_graph(&li).is_empty());
}

#[test]
fn small_fixtures() {
    let pair = parse_dis_file(&fixture("rst/pair.dis")).unwrap();
    assert_eq!(pairs(&hirao_convert(&pair, "pair")), vec![(1, 2), (2, 0)]);

    let list = parse_dis_file(&fixture("rst/list3.dis")).unwrap();
    assert_eq!(pairs(&hirao_convert(&list, "list3")), vec![(1, 0), (2, 1), (3, 1)]);
    assert_eq!(pairs(&li_convert(&list, "list3")), vec![(1, 0), (2, 1), (3, 2)]);
}

#[test]
fn fixtures_survive_pretty_printing() {
    for name in ["fig1/fig1.dis", "rst/mixed4.dis", "rst/pair.dis", "rst/list3.dis"] {
        let tree = parse_dis_file(&fixture(name)).unwrap();
        assert_eq!(parse_dis(&write_dis(&tree)).unwrap(), tree, "{}", name);
    }
}
