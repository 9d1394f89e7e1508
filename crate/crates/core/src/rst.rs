//! RST constituency trees in the parenthesized `.dis` notation.
//!
//! ```text
//! ( Root (span 1 2)
//!   ( Satellite (leaf 1) (rel2par condition) (text _!If it rains,_!) )
//!   ( Nucleus (leaf 2) (rel2par span) (text _!we stay home._!) )
//! )
//! ```

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use thiserror::Error;

use crate::model::{Document, Edu, ModelError, Span};

#[derive(Debug, Error, PartialEq)]
pub enum RstError {
    #[error("unbalanced parentheses")]
    UnbalancedParens,

    #[error("unexpected {found} at offset {offset}: {expected}")]
    Syntax {
        offset: usize,
        found: String,
        expected: String,
    },

    #[error("node over EDUs {first}-{last} has no Nucleus child")]
    MissingNuclearity { first: usize, last: usize },

    #[error("leaves out of order: expected EDU {expected}, found {found}")]
    NonContiguousLeaves { expected: usize, found: usize },

    #[error("declared span {declared_first}-{declared_last} but leaves cover {first}-{last}")]
    SpanMismatch {
        declared_first: usize,
        declared_last: usize,
        first: usize,
        last: usize,
    },

    #[error("child node over EDUs {first}-{last} has no rel2par label")]
    MissingRelation { first: usize, last: usize },

    #[error("EDU {edu}: text fragment not found after offset {offset}")]
    FragmentNotFound { edu: usize, offset: usize },

    #[error("EDU {edu} carries no text")]
    MissingText { edu: usize },

    #[error("label map line {line}: {message}")]
    LabelMap { line: usize, message: String },

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Nuclearity {
    Nucleus,
    Satellite,
}

impl Nuclearity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Nuclearity::Nucleus => "Nucleus",
            Nuclearity::Satellite => "Satellite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RstNode {
    Leaf { edu: usize, text: Option<String> },
    Internal { children: Vec<RstChild> },
}

/// A child edge: the child's nuclearity and its relation to the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RstChild {
    pub nuclearity: Nuclearity,
    pub relation: String,
    pub node: RstNode,
}

impl RstChild {
    pub fn new(nuclearity: Nuclearity, relation: impl Into<String>, node: RstNode) -> RstChild {
        RstChild {
            nuclearity,
            relation: relation.into(),
            node,
        }
    }

    pub fn is_nucleus(&self) -> bool {
        self.nuclearity == Nuclearity::Nucleus
    }
}

impl RstNode {
    pub fn leaf(edu: usize) -> RstNode {
        RstNode::Leaf { edu, text: None }
    }

    /// First and last EDU covered.
    pub fn edu_range(&self) -> (usize, usize) {
        match self {
            RstNode::Leaf { edu, .. } => (*edu, *edu),
            RstNode::Internal { children } => {
                let first = children.first().map(|c| c.node.edu_range().0).unwrap_or(0);
                let last = children.last().map(|c| c.node.edu_range().1).unwrap_or(0);
                (first, last)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RstNode::Leaf { .. } => 1,
            RstNode::Internal { children } => children.iter().map(|c| c.node.leaf_count()).sum(),
        }
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(usize, Option<&'a str>)>) {
        match self {
            RstNode::Leaf { edu, text } => out.push((*edu, text.as_deref())),
            RstNode::Internal { children } => {
                for child in children {
                    child.node.collect_leaves(out);
                }
            }
        }
    }
}

/// A validated tree: leaves are EDUs `1..=n` left to right and every
/// internal node has at least one Nucleus child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RstTree {
    root: RstNode,
}

impl RstTree {
    pub fn new(root: RstNode) -> Result<RstTree, RstError> {
        let mut next = 1;
        check_node(&root, &mut next)?;
        Ok(RstTree { root })
    }

    pub fn root(&self) -> &RstNode {
        &self.root
    }

    pub fn unit_count(&self) -> usize {
        self.root.leaf_count()
    }

    /// `(edu, text)` for every leaf, in order.
    pub fn leaves(&self) -> Vec<(usize, Option<&str>)> {
        let mut out = Vec::new();
        self.root.collect_leaves(&mut out);
        out
    }
}

fn check_node(node: &RstNode, next: &mut usize) -> Result<(), RstError> {
    match node {
        RstNode::Leaf { edu, .. } => {
            if *edu != *next {
                return Err(RstError::NonContiguousLeaves {
                    expected: *next,
                    found: *edu,
                });
            }
            *next += 1;
        }
        RstNode::Internal { children } => {
            for child in children {
                check_node(&child.node, next)?;
            }
            if !children.iter().any(RstChild::is_nucleus) {
                let (first, last) = node.edu_range();
                return Err(RstError::MissingNuclearity { first, last });
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
enum Token<'a> {
    Open,
    Close,
    Atom(&'a str),
    Text(&'a str),
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token<'_>)>, RstError> {
    let mut tokens = Vec::new();
    let mut rest = input.char_indices().peekable();
    while let Some(&(offset, c)) = rest.peek() {
        match c {
            '(' => {
                tokens.push((offset, Token::Open));
                rest.next();
            }
            ')' => {
                tokens.push((offset, Token::Close));
                rest.next();
            }
            c if c.is_whitespace() => {
                rest.next();
            }
            _ if input[offset..].starts_with("_!") => {
                let body = offset + 2;
                let close = input[body..]
                    .find("_!")
                    .map(|pos| body + pos)
                    .ok_or_else(|| RstError::Syntax {
                        offset,
                        found: "unterminated text".into(),
                        expected: "closing _!".into(),
                    })?;
                tokens.push((offset, Token::Text(&input[body..close])));
                while rest.peek().is_some_and(|&(pos, _)| pos < close + 2) {
                    rest.next();
                }
            }
            _ => {
                let end = input[offset..]
                    .find(|ch: char| ch.is_whitespace() || ch == '(' || ch == ')')
                    .map(|pos| offset + pos)
                    .unwrap_or(input.len());
                tokens.push((offset, Token::Atom(&input[offset..end])));
                while rest.peek().is_some_and(|&(pos, _)| pos < end) {
                    rest.next();
                }
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end_offset: usize,
    /// First declared span that disagrees with its leaves.
    mismatch: Option<RstError>,
}

/// What a node header introduces, before its body is read.
struct RawNode {
    nuclearity: Option<Nuclearity>,
    relation: Option<String>,
    declared: Option<(usize, usize)>,
    node: RstNode,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.end_offset)
    }

    fn syntax(&self, expected: &str) -> RstError {
        let found = match self.peek() {
            None => "end of input".to_owned(),
            Some(Token::Open) => "'('".to_owned(),
            Some(Token::Close) => "')'".to_owned(),
            Some(Token::Atom(a)) => format!("'{}'", a),
            Some(Token::Text(_)) => "text".to_owned(),
        };
        RstError::Syntax {
            offset: self.offset(),
            found,
            expected: expected.to_owned(),
        }
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let token = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        token
    }

    fn expect_open(&mut self) -> Result<(), RstError> {
        match self.peek() {
            Some(Token::Open) => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.syntax("'('")),
            None => Err(RstError::UnbalancedParens),
        }
    }

    fn expect_close(&mut self) -> Result<(), RstError> {
        match self.peek() {
            Some(Token::Close) => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.syntax("')'")),
            None => Err(RstError::UnbalancedParens),
        }
    }

    fn atom(&mut self, what: &str) -> Result<&'a str, RstError> {
        match self.peek() {
            Some(Token::Atom(a)) => {
                let a = *a;
                self.pos += 1;
                Ok(a)
            }
            None => Err(RstError::UnbalancedParens),
            _ => Err(self.syntax(what)),
        }
    }

    fn number(&mut self) -> Result<usize, RstError> {
        let offset = self.offset();
        let atom = self.atom("a number")?;
        atom.parse().map_err(|_| RstError::Syntax {
            offset,
            found: format!("'{}'", atom),
            expected: "a number".into(),
        })
    }

    /// Parse `( Header ... )` after checking the header is allowed.
    fn node(&mut self, root: bool) -> Result<RawNode, RstError> {
        self.expect_open()?;
        let header_offset = self.offset();
        let header = self.atom("a node header")?;
        let nuclearity = match (header, root) {
            ("Root", true) => None,
            ("Nucleus", false) => Some(Nuclearity::Nucleus),
            ("Satellite", false) => Some(Nuclearity::Satellite),
            _ => {
                return Err(RstError::Syntax {
                    offset: header_offset,
                    found: format!("'{}'", header),
                    expected: if root { "Root" } else { "Nucleus or Satellite" }.into(),
                })
            }
        };

        let mut relation = None;
        let mut declared = None;
        let mut leaf = None;
        let mut text = None;
        let mut children = Vec::new();

        loop {
            match self.peek() {
                Some(Token::Close) => {
                    self.pos += 1;
                    break;
                }
                Some(Token::Open) => {}
                None => return Err(RstError::UnbalancedParens),
                Some(_) => return Err(self.syntax("'(' or ')'")),
            }
            // Look past the '(' to decide what kind of item follows.
            let keyword = match self.tokens.get(self.pos + 1) {
                Some((_, Token::Atom(a))) => *a,
                None => return Err(RstError::UnbalancedParens),
                Some(_) => {
                    self.pos += 1;
                    return Err(self.syntax("a keyword"));
                }
            };
            match keyword {
                "Nucleus" | "Satellite" => {
                    let raw = self.node(false)?;
                    self.note_declared(&raw);
                    children.push(raw);
                }
                "span" => {
                    self.pos += 2;
                    let first = self.number()?;
                    let last = self.number()?;
                    declared = Some((first, last));
                    self.expect_close()?;
                }
                "leaf" => {
                    self.pos += 2;
                    let edu = self.number()?;
                    leaf = Some(edu);
                    declared = Some((edu, edu));
                    self.expect_close()?;
                }
                "rel2par" => {
                    self.pos += 2;
                    relation = Some(self.atom("a relation label")?.to_owned());
                    self.expect_close()?;
                }
                "text" => {
                    self.pos += 2;
                    match self.next() {
                        Some(Token::Text(t)) => text = Some(t.to_owned()),
                        None => return Err(RstError::UnbalancedParens),
                        Some(_) => {
                            self.pos -= 1;
                            return Err(self.syntax("_!text_!"));
                        }
                    }
                    self.expect_close()?;
                }
                _ => {
                    self.pos += 1;
                    return Err(self.syntax("span, leaf, rel2par, text or a child node"));
                }
            }
        }

        let node = match leaf {
            Some(edu) if children.is_empty() => RstNode::Leaf { edu, text },
            Some(edu) => {
                return Err(RstError::SpanMismatch {
                    declared_first: edu,
                    declared_last: edu,
                    first: children[0].node.edu_range().0,
                    last: children[children.len() - 1].node.edu_range().1,
                })
            }
            None => {
                let mut built = Vec::with_capacity(children.len());
                for child in children {
                    let (first, last) = child.node.edu_range();
                    let relation = child
                        .relation
                        .ok_or(RstError::MissingRelation { first, last })?;
                    built.push(RstChild {
                        nuclearity: child.nuclearity.expect("child header"),
                        relation,
                        node: child.node,
                    });
                }
                if built.is_empty() {
                    return Err(RstError::Syntax {
                        offset: header_offset,
                        found: format!("'{}' node", header),
                        expected: "a leaf or child nodes".into(),
                    });
                }
                RstNode::Internal { children: built }
            }
        };

        Ok(RawNode {
            nuclearity,
            relation,
            declared,
            node,
        })
    }
}

impl Parser<'_> {
    fn note_declared(&mut self, raw: &RawNode) {
        if self.mismatch.is_some() {
            return;
        }
        if let Some((declared_first, declared_last)) = raw.declared {
            let (first, last) = raw.node.edu_range();
            if (declared_first, declared_last) != (first, last) {
                self.mismatch = Some(RstError::SpanMismatch {
                    declared_first,
                    declared_last,
                    first,
                    last,
                });
            }
        }
    }
}

/// Parse one `.dis` tree.
pub fn parse_dis(text: &str) -> Result<RstTree, RstError> {
    let tokens = tokenize(text)?;
    let depth = tokens.iter().try_fold(0i64, |depth, (_, t)| {
        let depth = match t {
            Token::Open => depth + 1,
            Token::Close => depth - 1,
            _ => depth,
        };
        (depth >= 0).then_some(depth)
    });
    if depth != Some(0) {
        return Err(RstError::UnbalancedParens);
    }

    let mut parser = Parser {
        tokens,
        pos: 0,
        end_offset: text.len(),
        mismatch: None,
    };
    let raw = parser.node(true)?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.syntax("end of input"));
    }
    parser.note_declared(&raw);

    // Leaf order and nuclearity are reported before span declarations, so
    // a misnumbered leaf is not misreported as a span mismatch.
    let tree = RstTree::new(raw.node)?;
    match parser.mismatch {
        Some(err) => Err(err),
        None => Ok(tree),
    }
}

/// Read and parse a `.dis` file.
pub fn parse_dis_file(path: &Path) -> Result<RstTree, RstError> {
    let text = std::fs::read_to_string(path).map_err(|err| RstError::Io {
        path: path.display().to_string(),
        message: err.to_string(),
    })?;
    parse_dis(&text)
}

/// Pretty-print a tree in `.dis` notation. Internal nodes get `(span a b)`
/// declarations; texts are written only when present.
pub fn write_dis(tree: &RstTree) -> String {
    let mut out = String::new();
    write_node(&mut out, "Root", None, tree.root(), 0);
    out
}

fn write_node(
    out: &mut String,
    header: &str,
    relation: Option<&str>,
    node: &RstNode,
    depth: usize,
) {
    let indent = "  ".repeat(depth);
    match node {
        RstNode::Leaf { edu, text } => {
            let _ = write!(out, "{}( {} (leaf {})", indent, header, edu);
            if let Some(relation) = relation {
                let _ = write!(out, " (rel2par {})", relation);
            }
            if let Some(text) = text {
                let _ = write!(out, " (text _!{}_!)", text);
            }
            out.push_str(" )\n");
        }
        RstNode::Internal { children } => {
            let (first, last) = node.edu_range();
            let _ = write!(out, "{}( {} (span {} {})", indent, header, first, last);
            if let Some(relation) = relation {
                let _ = write!(out, " (rel2par {})", relation);
            }
            out.push('\n');
            for child in children {
                write_node(
                    out,
                    child.nuclearity.as_str(),
                    Some(&child.relation),
                    &child.node,
                    depth + 1,
                );
            }
            let _ = writeln!(out, "{})", indent);
        }
    }
}

impl fmt::Display for RstTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_dis(self))
    }
}

/// Undo the markup RST-DT puts inside leaf texts.
pub fn unescape_fragment(fragment: &str) -> String {
    fragment
        .replace("<P>", " ")
        .replace("<p>", " ")
        .replace("&quot;", "\"")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
}

/// Recover EDU character spans by locating each leaf's text in `text`,
/// left to right, ignoring whitespace differences. Each EDU extends over
/// the whitespace that follows it. Offsets are in characters.
pub fn edu_inventory_of(tree: &RstTree, doc_id: &str, text: &str) -> Result<Document, RstError> {
    // Non-whitespace characters of the document with their char offsets.
    let visible: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let total = text.chars().count();

    let mut cursor = 0;
    let mut found: Vec<(usize, usize, usize)> = Vec::new();
    for (edu, fragment) in tree.leaves() {
        let fragment = fragment.ok_or(RstError::MissingText { edu })?;
        let needle: Vec<char> = unescape_fragment(fragment)
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let not_found = || RstError::FragmentNotFound {
            edu,
            offset: visible.get(cursor).map(|(o, _)| *o).unwrap_or(total),
        };
        if needle.is_empty() {
            return Err(not_found());
        }
        let hit = (cursor..visible.len().saturating_sub(needle.len() - 1))
            .find(|&at| {
                visible[at..at + needle.len()]
                    .iter()
                    .map(|(_, c)| *c)
                    .eq(needle.iter().copied())
            })
            .ok_or_else(not_found)?;
        let start = visible[hit].0;
        let end = visible[hit + needle.len() - 1].0 + 1;
        found.push((edu, start, end));
        cursor = hit + needle.len();
    }

    let mut edus = Vec::with_capacity(found.len());
    for (i, &(edu, start, end)) in found.iter().enumerate() {
        let next_start = found.get(i + 1).map(|f| f.1).unwrap_or(total);
        let chars: Vec<char> = text.chars().skip(end).take(next_start - end).collect();
        let trailing = chars.iter().take_while(|c| c.is_whitespace()).count();
        edus.push(Edu {
            index: edu,
            span: Span::new(start, end + trailing)?,
        });
    }
    Ok(Document::new(doc_id, text, edus)?)
}

/// Maps fine-grained relation labels onto coarse classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelMap {
    classes: HashMap<String, String>,
}

impl LabelMap {
    /// Parse `relation<TAB>class` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<LabelMap, RstError> {
        let mut classes = HashMap::new();
        for (pos, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (relation, class) =
                trimmed
                    .split_once('\t')
                    .ok_or_else(|| RstError::LabelMap {
                        line: pos + 1,
                        message: "expected relation<TAB>class".into(),
                    })?;
            classes.insert(relation.trim().to_lowercase(), class.trim().to_owned());
        }
        Ok(LabelMap { classes })
    }

    /// Class of `relation`, matched case-insensitively.
    pub fn class_of(&self, relation: &str) -> Option<&str> {
        self.classes.get(&relation.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}
