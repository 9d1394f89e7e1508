use std::collections::BTreeSet;
use std::sync::Arc;

use discodep::align::OverlapAligner;
use discodep::metrics::{mdd_local, mdd_rooted, pearson, sd_distances};
use discodep::pdtb2dep::{head_rules, Direction, HeadRule, PdtbConverter};
use discodep::{
    dep_codecs, validate_graph, DependencyArc, DependencyGraph, DiagnosticKind, Document, Flavor,
    Head, Named, PdtbRelation, RelationKind, SenseTag, Span,
};
use proptest::prelude::*;
use proptest::sample::Index;

fn sense() -> impl Strategy<Value = SenseTag> {
    let level = "[A-Za-z][A-Za-z-]{0,8}";
    (level, proptest::option::of(level), proptest::option::of(level))
        .prop_map(|(a, b, c)| SenseTag::new(a, b, c))
}

/// A random rooted tree: units are visited in a random order, the first
/// attaches to ROOT and each later one to some earlier-visited unit.
fn rooted_tree() -> impl Strategy<Value = DependencyGraph> {
    (1usize..14)
        .prop_flat_map(|n| {
            (
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(any::<Index>(), n),
                prop::collection::vec(sense(), n),
                "[a-z0-9_]{1,10}",
            )
        })
        .prop_map(|(order, picks, senses, doc_id)| {
            let arcs = order
                .iter()
                .enumerate()
                .zip(senses)
                .map(|((pos, &unit), sense)| {
                    let head = if pos == 0 {
                        Head::Root
                    } else {
                        Head::Unit(order[picks[pos].index(pos)])
                    };
                    DependencyArc::new(unit, head, sense)
                })
                .collect();
            DependencyGraph::new(doc_id, order.len(), arcs, Flavor::RootedTree)
        })
}

/// A random forest without ROOT arcs: like [`rooted_tree`] but each unit
/// may stay unattached.
fn local_forest() -> impl Strategy<Value = DependencyGraph> {
    (1usize..14)
        .prop_flat_map(|n| {
            (
                Just((1..=n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec((any::<Index>(), any::<bool>()), n),
                prop::collection::vec(sense(), n),
                "[a-z0-9_]{1,10}",
            )
        })
        .prop_map(|(order, picks, senses, doc_id)| {
            let arcs = order
                .iter()
                .enumerate()
                .zip(senses)
                .filter(|((pos, _), _)| *pos > 0 && picks[*pos].1)
                .map(|((pos, &unit), sense)| {
                    DependencyArc::new(unit, Head::Unit(order[picks[pos].0.index(pos)]), sense)
                })
                .collect();
            DependencyGraph::new(doc_id, order.len(), arcs, Flavor::LocalForest)
        })
}

fn any_graph() -> impl Strategy<Value = DependencyGraph> {
    prop_oneof![rooted_tree(), local_forest()]
}

fn sorted_distances(graph: &DependencyGraph) -> Vec<usize> {
    let mut d = graph.distances();
    d.sort();
    d
}

/// A document of `n` EDUs with random lengths, and relations between
/// single EDUs with random senses and link groups.
fn pdtb_document() -> impl Strategy<Value = (Document, Vec<PdtbRelation>)> {
    let senses = prop::sample::select(vec![
        "Contingency.Condition.Arg2-as-cond",
        "Comparison.Concession.Arg1-as-denier",
        "Contingency.Purpose.Arg2-as-goal",
        "Expansion.Conjunction",
        "Temporal.Synchronous",
        "EntRel",
    ]);
    (2usize..16)
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(1usize..60, n),
                prop::collection::vec(
                    (0..n, 1..n, senses.clone(), proptest::option::of(0u8..3)),
                    0..20,
                ),
            )
        })
        .prop_map(|(lengths, raw)| {
            let n = lengths.len();
            let mut spans = Vec::with_capacity(n);
            let mut start = 0;
            for len in lengths {
                spans.push(Span::new(start, start + len).unwrap());
                start += len + 1;
            }
            let doc = Document::from_spans("gen", "", spans.clone()).unwrap();
            let relations = raw
                .into_iter()
                .enumerate()
                .map(|(line, (a, offset, sense, link))| {
                    let b = (a + offset) % n;
                    PdtbRelation {
                        kind: RelationKind::Implicit,
                        connective: None,
                        connective_spans: vec![],
                        senses: vec![sense.parse().unwrap()],
                        arg1_spans: vec![spans[a]],
                        arg2_spans: vec![spans[b]],
                        link_group: link.map(|l| format!("LINK{}", l)),
                        raw_line_no: line + 1,
                    }
                })
                .collect();
            (doc, relations)
        })
}

/// Mirror image of a head rule: whichever argument it would make the
/// head becomes the dependent.
struct Flipped(Arc<dyn HeadRule>);

impl Named for Flipped {
    fn name(&self) -> &'static str {
        "flipped"
    }
}

impl HeadRule for Flipped {
    fn direction(&self, sense: &SenseTag) -> Direction {
        match self.0.direction(sense) {
            Direction::Arg1Head => Direction::Arg2Head,
            Direction::Arg2Head | Direction::LaterHead => Direction::Arg1Head,
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn flipping_directions_keeps_distances((doc, relations) in pdtb_document()) {
        let rule = head_rules().get("marker-goal").unwrap();
        let forward = PdtbConverter::new(Box::new(OverlapAligner::default()), rule.clone());
        let backward = PdtbConverter::new(Box::new(OverlapAligner::default()), Arc::new(Flipped(rule)));
        let (a, _) = forward.convert(&doc, &relations).unwrap();
        let (b, _) = backward.convert(&doc, &relations).unwrap();
        prop_assert_eq!(a.arcs().len(), b.arcs().len());
        prop_assert_eq!(sorted_distances(&a), sorted_distances(&b));
    }

    #[test]
    fn reversing_arcs_keeps_distances(graph in local_forest()) {
        let reversed: Vec<DependencyArc> = graph
            .arcs()
            .iter()
            .map(|a| DependencyArc::new(a.head.index(), Head::Unit(a.dependent), a.sense.clone()))
            .collect();
        let reversed = DependencyGraph::new(graph.doc_id(), graph.unit_count(), reversed, Flavor::LocalForest);
        prop_assert_eq!(sorted_distances(&graph), sorted_distances(&reversed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conll_and_json_round_trip(graph in any_graph()) {
        let codecs = dep_codecs();
        for name in ["conll", "json"] {
            let codec = codecs.get(name).unwrap();
            let back = codec.read(&codec.write(&graph), "hint").unwrap();
            prop_assert_eq!(&back, &graph, "{}", name);
        }
    }

    #[test]
    fn csv_round_trips_arcs(graph in any_graph()) {
        let codec = dep_codecs().get("csv").unwrap();
        let back = codec.read(&codec.write(&graph), graph.doc_id()).unwrap();
        prop_assert_eq!(back.arcs(), graph.arcs());
        prop_assert_eq!(back.doc_id(), graph.doc_id());
        if !graph.arcs().is_empty() {
            prop_assert_eq!(back.flavor(), graph.flavor());
        }
        // Rooted trees mention every unit, so nothing is lost.
        if graph.flavor() == Flavor::RootedTree {
            prop_assert_eq!(&back, &graph);
        }
    }

    #[test]
    fn writers_are_deterministic(graph in any_graph()) {
        for name in ["conll", "csv", "json"] {
            let codec = dep_codecs().get(name).unwrap();
            let bytes = codec.write(&graph);
            prop_assert_eq!(&bytes, &codec.write(&graph.clone()));
            prop_assert!(bytes.ends_with(b"\n"));
        }
    }

    #[test]
    fn generated_trees_and_forests_validate(graph in any_graph()) {
        prop_assert_eq!(validate_graph(&graph), vec![]);
    }

    #[test]
    fn dropping_an_arc_breaks_a_tree(graph in rooted_tree(), pick in any::<Index>()) {
        let arcs = graph.arcs();
        let dropped = pick.index(arcs.len());
        let kept: Vec<DependencyArc> = arcs
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != dropped)
            .map(|(_, a)| a.clone())
            .collect();
        let broken = DependencyGraph::new(graph.doc_id(), graph.unit_count(), kept, Flavor::RootedTree);
        let kinds: BTreeSet<DiagnosticKind> = validate_graph(&broken).into_iter().map(|d| d.kind).collect();
        prop_assert!(kinds.contains(&DiagnosticKind::MissingHead));
        if arcs[dropped].head.is_root() {
            prop_assert!(kinds.contains(&DiagnosticKind::RootCount));
        }
    }

    #[test]
    fn second_head_is_reported(graph in rooted_tree(), a in any::<Index>(), b in any::<Index>()) {
        let n = graph.unit_count();
        prop_assume!(n >= 2);
        let dependent = a.index(n) + 1;
        let current = graph.arcs().iter().find(|x| x.dependent == dependent).unwrap().head;
        let head = b.index(n) + 1;
        prop_assume!(head != dependent && Head::Unit(head) != current);
        let mut arcs = graph.arcs().to_vec();
        arcs.push(DependencyArc::new(dependent, Head::Unit(head), SenseTag::single("extra")));
        let doubled = DependencyGraph::new(graph.doc_id(), n, arcs, Flavor::RootedTree);
        let needle = format!("unit {} ", dependent);
        let reported = validate_graph(&doubled)
            .iter()
            .any(|d| d.kind == DiagnosticKind::MultipleHeads && d.message.contains(&needle));
        prop_assert!(reported);
    }

    #[test]
    fn back_arc_makes_a_cycle(graph in local_forest(), pick in any::<Index>()) {
        prop_assume!(!graph.arcs().is_empty());
        let arc = &graph.arcs()[pick.index(graph.arcs().len())];
        let mut arcs = graph.arcs().to_vec();
        arcs.push(DependencyArc::new(arc.head.index(), Head::Unit(arc.dependent), SenseTag::single("back")));
        let cyclic = DependencyGraph::new(graph.doc_id(), graph.unit_count(), arcs, Flavor::LocalForest);
        prop_assert!(validate_graph(&cyclic).iter().any(|d| d.kind == DiagnosticKind::Cycle));
    }

    #[test]
    fn forests_reject_root_arcs(graph in local_forest(), pick in any::<Index>()) {
        let unit = pick.index(graph.unit_count()) + 1;
        let mut arcs = graph.arcs().to_vec();
        arcs.push(DependencyArc::new(unit, Head::Root, SenseTag::single("ROOT")));
        let rooted = DependencyGraph::new(graph.doc_id(), graph.unit_count(), arcs, Flavor::LocalForest);
        prop_assert!(validate_graph(&rooted).iter().any(|d| d.kind == DiagnosticKind::RootCount));
    }
}

/// Straight loops, no shared helpers with the library.
fn naive_mean(values: &[f64]) -> f64 {
    let mut total = 0.0;
    for v in values {
        total += v;
    }
    total / values.len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn mdd_and_sd_match_loops(graph in any_graph()) {
        let distances: Vec<f64> = graph
            .arcs()
            .iter()
            .filter(|a| !a.head.is_root())
            .map(|a| {
                let h = a.head.index() as f64;
                let d = a.dependent as f64;
                if h > d { h - d } else { d - h }
            })
            .collect();

        match mdd_local(&graph) {
            Ok(mdd) => prop_assert!((mdd - naive_mean(&distances)).abs() <= 1e-9),
            Err(_) => prop_assert!(distances.is_empty()),
        }
        match mdd_rooted(&graph) {
            Ok(mdd) => {
                let total: f64 = distances.iter().sum();
                prop_assert!((mdd - total / (graph.unit_count() - 1) as f64).abs() <= 1e-9);
            }
            Err(_) => prop_assert!(graph.unit_count() < 2),
        }
        match sd_distances(&graph) {
            Ok(sd) => {
                let mean = naive_mean(&distances);
                let mut squares = 0.0;
                for d in &distances {
                    squares += (d - mean) * (d - mean);
                }
                prop_assert!((sd * sd * (distances.len() - 1) as f64 - squares).abs() <= 1e-9);
                prop_assert!(sd >= 0.0);
            }
            Err(_) => prop_assert!(distances.len() < 2),
        }
    }

    #[test]
    fn pearson_invariances(
        pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..60),
        scale in 0.01f64..100.0,
        shift in -100.0f64..100.0,
        perm_seed in any::<u64>(),
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        let base = pearson(&xs, &ys);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        prop_assert!(base.r.abs() <= 1.0);

        let scaled: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
        let r = pearson(&scaled, &ys).unwrap().r;
        prop_assert!((r - base.r).abs() <= 1e-12, "scaled r {} vs {}", r, base.r);

        // Fisher-Yates driven by a small LCG so the permutation is reproducible.
        let mut order: Vec<usize> = (0..xs.len()).collect();
        let mut state = perm_seed | 1;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let px: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
        let py: Vec<f64> = order.iter().map(|&i| ys[i]).collect();
        let r = pearson(&px, &py).unwrap().r;
        prop_assert!((r - base.r).abs() <= 1e-12, "permuted r {} vs {}", r, base.r);

        // Textbook raw-moment formula.
        let n = xs.len() as f64;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (x, y) in xs.iter().zip(&ys) {
            sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
        }
        let textbook = (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        prop_assert!((textbook - base.r).abs() <= 1e-9);
    }
}
