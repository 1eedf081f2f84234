//! Owned, read-only element tree stored as a preorder arena.
//!
//! Node ids are preorder indices, so comparing two ids compares document
//! order and a subtree is a contiguous id range.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::ParseError;
use crate::text::{byte_offset, normalize_whitespace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeData {
    Document,
    Element { name: String, attrs: Vec<(String, String)> },
    Text(String),
}

#[derive(Debug, Clone)]
struct Node {
    data: NodeData,
    parent: Option<NodeId>,
    end: u32,
    offset: usize,
}

/// Elements whose text flows inline with their siblings when flattened.
const INLINE: &[&str] = &[
    "a", "b", "i", "u", "em", "strong", "span", "sup", "sub", "font", "inline",
];

pub(crate) fn is_inline(name: &str) -> bool {
    INLINE.contains(&name)
}

#[derive(Debug, Clone)]
pub struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    /// Parse well-formed XML. Whitespace-only text between block elements is
    /// dropped; whitespace inside inline markup is kept.
    pub fn parse(text: &str) -> Result<Tree, ParseError> {
        let opts = roxmltree::ParsingOptions {
            allow_dtd: true,
            ..Default::default()
        };
        let doc = roxmltree::Document::parse_with_options(text, opts).map_err(|e| {
            let pos = e.pos();
            ParseError::MalformedXml {
                offset: byte_offset(text, pos.row, pos.col),
                message: e.to_string(),
            }
        })?;
        let mut tree = Tree { nodes: Vec::new() };
        tree.push(doc.root(), None);
        Ok(tree)
    }

    fn push(&mut self, node: roxmltree::Node<'_, '_>, parent: Option<NodeId>) {
        let data = match node.node_type() {
            roxmltree::NodeType::Root => NodeData::Document,
            roxmltree::NodeType::Element => NodeData::Element {
                name: node.tag_name().name().to_string(),
                attrs: node
                    .attributes()
                    .map(|a| (a.name().to_string(), a.value().to_string()))
                    .collect(),
            },
            roxmltree::NodeType::Text => {
                let t = node.text().unwrap_or("");
                if t.trim().is_empty() && !keeps_blank(node) {
                    return;
                }
                NodeData::Text(t.to_string())
            }
            _ => return,
        };
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node {
            data,
            parent,
            end: 0,
            offset: node.range().start,
        });
        for child in node.children() {
            self.push(child, Some(id));
        }
        let end = self.nodes.len() as u32;
        self.nodes[id.index()].end = end;
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn document(&self) -> NodeId {
        NodeId(0)
    }

    pub fn root_element(&self) -> Option<NodeId> {
        self.children(self.document()).find(|&c| self.name(c).is_some())
    }

    pub fn data(&self, id: NodeId) -> &NodeData {
        &self.nodes[id.index()].data
    }

    pub fn name(&self, id: NodeId) -> Option<&str> {
        match &self.nodes[id.index()].data {
            NodeData::Element { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn is(&self, id: NodeId, name: &str) -> bool {
        self.name(id) == Some(name)
    }

    pub fn text(&self, id: NodeId) -> Option<&str> {
        match &self.nodes[id.index()].data {
            NodeData::Text(t) => Some(t),
            _ => None,
        }
    }

    pub fn attr(&self, id: NodeId, key: &str) -> Option<&str> {
        match &self.nodes[id.index()].data {
            NodeData::Element { attrs, .. } => attrs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str()),
            _ => None,
        }
    }

    /// Byte offset of the node's start in the source text.
    pub fn offset(&self, id: NodeId) -> usize {
        self.nodes[id.index()].offset
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.nodes[id.index()].parent
    }

    pub fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        core::iter::successors(self.parent(id), move |&p| self.parent(p))
    }

    /// True when `node` lies inside the subtree of `ancestor` (or is it).
    pub fn contains(&self, ancestor: NodeId, node: NodeId) -> bool {
        ancestor <= node && node.0 < self.nodes[ancestor.index()].end
    }

    pub fn children(&self, id: NodeId) -> Children<'_> {
        Children {
            tree: self,
            next: id.0 + 1,
            end: self.nodes[id.index()].end,
        }
    }

    pub fn descendants(&self, id: NodeId) -> impl Iterator<Item = NodeId> {
        (id.0 + 1..self.nodes[id.index()].end).map(NodeId)
    }

    pub fn child_elements<'a>(&'a self, id: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        self.children(id).filter(move |&c| self.name(c).is_some())
    }

    pub fn child_element(&self, id: NodeId, name: &str) -> Option<NodeId> {
        self.children(id).find(|&c| self.is(c, name))
    }

    pub fn first_descendant(&self, id: NodeId, name: &str) -> Option<NodeId> {
        self.descendants(id).find(|&d| self.is(d, name))
    }

    pub fn nearest_ancestor(&self, id: NodeId, names: &[&str]) -> Option<NodeId> {
        self.ancestors(id)
            .find(|&a| self.name(a).is_some_and(|n| names.contains(&n)))
    }

    /// Raw concatenation of every text node below `id`.
    pub fn text_content(&self, id: NodeId) -> String {
        let mut out = String::new();
        if let Some(t) = self.text(id) {
            out.push_str(t);
        }
        for d in self.descendants(id) {
            if let Some(t) = self.text(d) {
                out.push_str(t);
            }
        }
        out
    }

    /// Whitespace-normalized text of the first child element called `name`,
    /// or `None` when absent or empty.
    pub fn child_text(&self, id: NodeId, name: &str) -> Option<String> {
        let c = self.child_element(id, name)?;
        let t = normalize_whitespace(&self.text_content(c));
        (!t.is_empty()).then_some(t)
    }

    /// Slash-separated element names from the root element down to `id`.
    pub fn path(&self, id: NodeId) -> String {
        let mut names: Vec<&str> = self.ancestors(id).filter_map(|a| self.name(a)).collect();
        names.reverse();
        if let Some(n) = self.name(id) {
            names.push(n);
        }
        names.join("/")
    }

    /// Evaluate a small path language: element names joined by `/` (child)
    /// or `//` (descendant), a leading `/` or `//` anchoring at the document,
    /// and `|` for unions. Results come back in document order.
    pub fn select(&self, ctx: NodeId, expr: &str) -> Vec<NodeId> {
        let mut out = BTreeSet::new();
        for branch in expr.split('|') {
            out.extend(self.select_path(ctx, branch.trim()));
        }
        out.into_iter().collect()
    }

    fn select_path(&self, ctx: NodeId, path: &str) -> BTreeSet<NodeId> {
        let mut set = BTreeSet::new();
        let (start, rest, mut descendant) = if let Some(r) = path.strip_prefix("//") {
            (self.document(), r, true)
        } else if let Some(r) = path.strip_prefix('/') {
            (self.document(), r, false)
        } else {
            (ctx, path, false)
        };
        set.insert(start);
        for step in rest.split('/') {
            if step.is_empty() {
                descendant = true;
                continue;
            }
            let mut next = BTreeSet::new();
            for &n in &set {
                if descendant {
                    next.extend(self.descendants(n).filter(|&d| self.step_matches(d, step)));
                } else {
                    next.extend(self.children(n).filter(|&c| self.step_matches(c, step)));
                }
            }
            set = next;
            descendant = false;
        }
        set
    }

    fn step_matches(&self, id: NodeId, step: &str) -> bool {
        match self.name(id) {
            Some(n) => step == "*" || n == step,
            None => false,
        }
    }

    /// Flatten the text below `id` into one string. Text nodes sharing a block
    /// element are concatenated directly; a newline separates text from
    /// different blocks. Everything inside one `talker` element counts as a
    /// single block, so its fields run together. Subtrees rooted at elements
    /// for which `skip` returns true are left out.
    pub fn flatten<F: Fn(&Tree, NodeId) -> bool>(&self, id: NodeId, skip: F) -> String {
        let mut out = String::new();
        let mut last_block: Option<NodeId> = None;
        let mut i = id.0;
        let end = self.nodes[id.index()].end;
        while i < end {
            let n = NodeId(i);
            match &self.nodes[i as usize].data {
                NodeData::Element { .. } if n != id && skip(self, n) => {
                    i = self.nodes[i as usize].end;
                    continue;
                }
                NodeData::Text(t) => {
                    let block = self.block_of(n);
                    if last_block.is_some_and(|b| b != block) {
                        out.push('\n');
                    }
                    last_block = Some(block);
                    out.extend(t.chars().map(|c| if c == '\u{a0}' { ' ' } else { c }));
                }
                _ => {}
            }
            i += 1;
        }
        out
    }

    fn block_of(&self, text: NodeId) -> NodeId {
        let mut block = None;
        for a in self.ancestors(text) {
            match self.name(a) {
                Some("talker") => return a,
                Some(name) if block.is_none() && !is_inline(name) => block = Some(a),
                _ => {}
            }
        }
        block.unwrap_or(self.document())
    }
}

fn keeps_blank(node: roxmltree::Node<'_, '_>) -> bool {
    let inline = |n: Option<roxmltree::Node<'_, '_>>| {
        n.is_some_and(|n| n.is_element() && is_inline(n.tag_name().name()))
    };
    inline(node.parent()) || inline(node.prev_sibling()) || inline(node.next_sibling())
}

pub struct Children<'a> {
    tree: &'a Tree,
    next: u32,
    end: u32,
}

impl Iterator for Children<'_> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.next >= self.end {
            return None;
        }
        let id = NodeId(self.next);
        self.next = self.tree.nodes[id.index()].end;
        Some(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = "<hansard><x><b>one</b><c><b>two</b></c></x>\n  <d><b>three</b></d></hansard>";

    #[test]
    fn select_follows_document_order() {
        let t = Tree::parse(DOC).unwrap();
        let found: Vec<_> = t
            .select(t.document(), "//d/b | //x//b")
            .into_iter()
            .map(|n| t.text_content(n))
            .collect();
        assert_eq!(found, ["one", "two", "three"]);
        assert_eq!(t.select(t.document(), "hansard/x/b").len(), 1);
        assert_eq!(t.select(t.document(), "/hansard/*").len(), 2);
        assert!(t.select(t.document(), "//missing").is_empty());
    }

    #[test]
    fn blank_text_between_blocks_is_dropped() {
        let t = Tree::parse(DOC).unwrap();
        let root = t.root_element().unwrap();
        assert_eq!(t.children(root).count(), 2);
    }

    #[test]
    fn blank_text_inside_inline_markup_survives() {
        let t = Tree::parse("<p><span>Mr</span> <span>SMITH</span></p>").unwrap();
        assert_eq!(t.flatten(t.document(), |_, _| false), "Mr SMITH");
    }

    #[test]
    fn flatten_separates_blocks_but_not_talker_fields() {
        let xml = "<speech><talk.start><talker><time.stamp>09:31:00</time.stamp>\
                   <page.no>10261</page.no></talker><para>Hello</para></talk.start>\
                   <para>World <span>again</span></para></speech>";
        let t = Tree::parse(xml).unwrap();
        assert_eq!(
            t.flatten(t.document(), |_, _| false),
            "09:31:0010261\nHello\nWorld again"
        );
        let skipped = t.flatten(t.document(), |t, n| t.is(n, "talker"));
        assert_eq!(skipped, "Hello\nWorld again");
    }

    #[test]
    fn truncated_input_reports_offset() {
        let err = Tree::parse("<hansard><a>").unwrap_err();
        match err {
            ParseError::MalformedXml { offset, .. } => assert!(offset <= 12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn subtree_ranges() {
        let t = Tree::parse(DOC).unwrap();
        let a = t.select(t.document(), "//x")[0];
        let two = t.select(t.document(), "//c/b")[0];
        let d = t.select(t.document(), "//d")[0];
        assert!(t.contains(a, two));
        assert!(!t.contains(a, d));
        assert_eq!(t.path(two), "hansard/x/c/b");
    }
}
