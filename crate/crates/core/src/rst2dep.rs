//! RST constituency trees to rooted dependency trees.
//!
//! Every node is headed by the head of its leftmost Nucleus child. A child
//! whose head differs from its parent's head attaches to the parent's head,
//! labelled with the child's relation; the root head attaches to ROOT.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::graph::{DependencyArc, DependencyGraph, Flavor, Head};
use crate::model::SenseTag;
use crate::registry::{Named, Registry};
use crate::rst::{LabelMap, Nuclearity, RstChild, RstNode, RstTree};

/// Head EDU of `node`: itself for a leaf, else its leftmost nucleus's head.
pub fn node_head(node: &RstNode) -> usize {
    match node {
        RstNode::Leaf { edu, .. } => *edu,
        RstNode::Internal { children } => {
            let nucleus = children
                .iter()
                .find(|c| c.is_nucleus())
                .expect("validated trees have a nucleus under every internal node");
            node_head(&nucleus.node)
        }
    }
}

/// Head EDU of every node, keyed by the child-index path from the root
/// (the root's path is empty).
pub fn tree_heads(tree: &RstTree) -> BTreeMap<Vec<usize>, usize> {
    fn walk(node: &RstNode, path: &mut Vec<usize>, out: &mut BTreeMap<Vec<usize>, usize>) -> usize {
        let head = match node {
            RstNode::Leaf { edu, .. } => *edu,
            RstNode::Internal { children } => {
                let mut head = None;
                for (i, child) in children.iter().enumerate() {
                    path.push(i);
                    let child_head = walk(&child.node, path, out);
                    path.pop();
                    if head.is_none() && child.is_nucleus() {
                        head = Some(child_head);
                    }
                }
                head.expect("validated trees have a nucleus under every internal node")
            }
        };
        out.insert(path.clone(), head);
        head
    }
    let mut out = BTreeMap::new();
    walk(tree.root(), &mut Vec::new(), &mut out);
    out
}

/// Sense carried by the ROOT arc.
pub fn root_sense() -> SenseTag {
    SenseTag::new("ROOT", Some("NONE".to_owned()), None)
}

fn relation_sense(relation: &str, labels: Option<&LabelMap>) -> SenseTag {
    let class = labels
        .and_then(|map| map.class_of(relation))
        .map(str::to_owned);
    SenseTag::new(relation, class, None)
}

/// Head percolation over `root` as given.
fn percolate(root: &RstNode, doc_id: &str, labels: Option<&LabelMap>) -> DependencyGraph {
    fn walk(node: &RstNode, labels: Option<&LabelMap>, arcs: &mut Vec<DependencyArc>) -> usize {
        match node {
            RstNode::Leaf { edu, .. } => *edu,
            RstNode::Internal { children } => {
                let heads: Vec<usize> = children
                    .iter()
                    .map(|c| walk(&c.node, labels, arcs))
                    .collect();
                let head = children
                    .iter()
                    .zip(&heads)
                    .find(|(c, _)| c.is_nucleus())
                    .map(|(_, h)| *h)
                    .expect("validated trees have a nucleus under every internal node");
                for (child, &child_head) in children.iter().zip(&heads) {
                    if child_head != head {
                        arcs.push(DependencyArc::new(
                            child_head,
                            Head::Unit(head),
                            relation_sense(&child.relation, labels),
                        ));
                    }
                }
                head
            }
        }
    }
    let mut arcs = Vec::with_capacity(root.leaf_count());
    let top = walk(root, labels, &mut arcs);
    arcs.push(DependencyArc::new(top, Head::Root, root_sense()));
    DependencyGraph::new(doc_id, root.leaf_count(), arcs, Flavor::RootedTree)
}

/// Rewrite every node with more than two children as nested binary nodes,
/// grouping to the right: `c1 (c2 (... ck))`.
///
/// A right-hand group that would contain no nucleus is grouped to the left
/// instead (`(c1 ... ck-1) ck`), so every synthetic node keeps a nucleus.
/// Synthetic nodes are nuclei labelled with their first nucleus's relation.
pub fn binarize(node: &RstNode) -> RstNode {
    match node {
        RstNode::Leaf { .. } => node.clone(),
        RstNode::Internal { children } => {
            let children: Vec<RstChild> = children
                .iter()
                .map(|c| RstChild {
                    nuclearity: c.nuclearity,
                    relation: c.relation.clone(),
                    node: binarize(&c.node),
                })
                .collect();
            RstNode::Internal {
                children: binarize_children(children),
            }
        }
    }
}

fn binarize_children(mut children: Vec<RstChild>) -> Vec<RstChild> {
    if children.len() <= 2 {
        return children;
    }
    if children[1..].iter().any(RstChild::is_nucleus) {
        let rest = children.split_off(1);
        children.push(group(binarize_children(rest)));
        children
    } else {
        let last = children.pop().expect("more than two children");
        vec![group(binarize_children(children)), last]
    }
}

fn group(children: Vec<RstChild>) -> RstChild {
    let relation = children
        .iter()
        .find(|c| c.is_nucleus())
        .map(|c| c.relation.clone())
        .expect("groups are formed around a nucleus");
    RstChild {
        nuclearity: Nuclearity::Nucleus,
        relation,
        node: RstNode::Internal { children },
    }
}

/// A strategy for turning an RST tree into a rooted dependency tree.
pub trait RstConverter: Named + Send + Sync {
    fn convert(&self, tree: &RstTree, doc_id: &str, labels: Option<&LabelMap>) -> DependencyGraph;
}

/// Percolation on the tree as annotated.
#[derive(Clone, Copy, Debug, Default)]
pub struct Hirao;

impl Named for Hirao {
    fn name(&self) -> &'static str {
        "hirao"
    }
}

impl RstConverter for Hirao {
    fn convert(&self, tree: &RstTree, doc_id: &str, labels: Option<&LabelMap>) -> DependencyGraph {
        percolate(tree.root(), doc_id, labels)
    }
}

/// Percolation after right-grouping binarization.
#[derive(Clone, Copy, Debug, Default)]
pub struct Li;

impl Named for Li {
    fn name(&self) -> &'static str {
        "li"
    }
}

impl RstConverter for Li {
    fn convert(&self, tree: &RstTree, doc_id: &str, labels: Option<&LabelMap>) -> DependencyGraph {
        percolate(&binarize(tree.root()), doc_id, labels)
    }
}

pub fn hirao_convert(tree: &RstTree, doc_id: &str) -> DependencyGraph {
    Hirao.convert(tree, doc_id, None)
}

pub fn li_convert(tree: &RstTree, doc_id: &str) -> DependencyGraph {
    Li.convert(tree, doc_id, None)
}

/// Built-in RST conversions.
pub fn rst_converters() -> Registry<dyn RstConverter> {
    let mut registry: Registry<dyn RstConverter> = Registry::new("RST conversion");
    registry.register(Arc::new(Hirao)).expect("unique name");
    registry.register(Arc::new(Li)).expect("unique name");
    registry
}
