//! Concrete syntax trees for Java snippets.
//!
//! Parsing is backed by tree-sitter's Java grammar. The resulting tree is
//! copied into an owned arena so it can be shared freely across threads and
//! indexed by [`NodeId`] for rewriting.

mod edit;
pub mod lexer;

use std::cell::RefCell;
use std::fmt;

pub use edit::{apply_edits, text_differs, normalize_newlines, EditError, TextEdit};

/// Synthetic class header used when a fragment only parses inside a class body.
const WRAP_PREFIX: &str = "class __Wrap__ {\n";
const WRAP_SUFFIX: &str = "\n}";

/// Half-open byte range into a source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "span start {start} after end {end}");
        Span { start, end }
    }

    pub fn empty(at: usize) -> Self {
        Span { start: at, end: at }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, other: Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("no syntax tree could be produced: {0}")]
    Fatal(String),
}

/// Index of a node inside its [`SyntaxTree`] arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
struct NodeData {
    kind: &'static str,
    field: Option<&'static str>,
    span: Span,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    named: bool,
    error: bool,
    missing: bool,
}

/// An immutable, owned syntax tree over a single source text.
#[derive(Clone)]
pub struct SyntaxTree {
    source: String,
    nodes: Vec<NodeData>,
    wrapped: bool,
}

impl fmt::Debug for SyntaxTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyntaxTree")
            .field("len", &self.source.len())
            .field("nodes", &self.nodes.len())
            .field("wrapped", &self.wrapped)
            .finish()
    }
}

static JAVA: std::sync::LazyLock<tree_sitter::Language> =
    std::sync::LazyLock::new(|| tree_sitter_java::LANGUAGE.into());

fn kind_of(node: &tree_sitter::Node<'_>) -> &'static str {
    if node.is_error() {
        return "ERROR";
    }
    JAVA.node_kind_for_id(node.kind_id()).unwrap_or("ERROR")
}

fn field_of(cursor: &tree_sitter::TreeCursor<'_>) -> Option<&'static str> {
    cursor.field_id().and_then(|id| JAVA.field_name_for_id(id.get()))
}

thread_local! {
    static PARSER: RefCell<Option<tree_sitter::Parser>> = const { RefCell::new(None) };
}

fn ts_parse(text: &str) -> Result<tree_sitter::Tree, ParseError> {
    PARSER.with(|cell| {
        let mut slot = cell.borrow_mut();
        if slot.is_none() {
            let mut parser = tree_sitter::Parser::new();
            parser
                .set_language(&JAVA)
                .map_err(|e| ParseError::Fatal(format!("java grammar unavailable: {e}")))?;
            *slot = Some(parser);
        }
        let parser = slot.as_mut().expect("parser initialised above");
        parser
            .parse(text, None)
            .ok_or_else(|| ParseError::Fatal("parser produced no tree".into()))
    })
}

fn ts_error_count(tree: &tree_sitter::Tree) -> usize {
    if !tree.root_node().has_error() {
        return 0;
    }
    let mut count = 0;
    let mut cursor = tree.walk();
    'walk: loop {
        let node = cursor.node();
        if node.is_error() || node.is_missing() {
            count += 1;
        }
        if cursor.goto_first_child() {
            continue;
        }
        loop {
            if cursor.goto_next_sibling() {
                continue 'walk;
            }
            if !cursor.goto_parent() {
                break 'walk;
            }
        }
    }
    count
}

/// Parse Java source text: a compilation unit, a class fragment, bare methods
/// or bare statements.
///
/// The returned tree always renders back to `source` byte-for-byte. Regions
/// the grammar cannot recover show up as `ERROR` / missing nodes.
pub fn parse_java(source: &str) -> Result<SyntaxTree, ParseError> {
    if source.trim().is_empty() {
        return Err(ParseError::Fatal("empty input".into()));
    }
    let direct = ts_parse(source)?;
    let direct_errors = ts_error_count(&direct);
    if direct_errors > 0 {
        let wrapped_src = format!("{WRAP_PREFIX}{source}{WRAP_SUFFIX}");
        let wrapped = ts_parse(&wrapped_src)?;
        if ts_error_count(&wrapped) < direct_errors {
            if let Some(tree) = SyntaxTree::from_wrapped(source, &wrapped) {
                return Ok(tree);
            }
        }
    }
    Ok(SyntaxTree::from_ts(source, direct.root_node(), 0, None))
}

impl SyntaxTree {
    fn from_ts(
        source: &str,
        root: tree_sitter::Node<'_>,
        shift: usize,
        root_override: Option<(&'static str, Span)>,
    ) -> SyntaxTree {
        let mut tree = SyntaxTree {
            source: source.to_string(),
            nodes: Vec::new(),
            wrapped: shift > 0,
        };
        let (kind, span) = root_override.unwrap_or((
            kind_of(&root),
            Span::new(root.start_byte() - shift, root.end_byte() - shift),
        ));
        tree.nodes.push(NodeData {
            kind,
            field: None,
            span,
            parent: None,
            children: Vec::new(),
            named: true,
            error: root.is_error(),
            missing: false,
        });
        let mut cursor = root.walk();
        if cursor.goto_first_child() {
            tree.copy_children(&mut cursor, NodeId(0), shift, source.len());
        }
        tree
    }

    fn from_wrapped(source: &str, wrapped: &tree_sitter::Tree) -> Option<SyntaxTree> {
        // program > class_declaration > class_body; the body's inner children
        // become the children of a synthetic program root.
        let root = wrapped.root_node();
        let class = root.named_child(0)?;
        if class.kind() != "class_declaration" || root.named_child_count() != 1 {
            return None;
        }
        let body = class.child_by_field_name("body")?;
        let shift = WRAP_PREFIX.len();
        let mut tree = SyntaxTree {
            source: source.to_string(),
            nodes: vec![NodeData {
                kind: "program",
                field: None,
                span: Span::new(0, source.len()),
                parent: None,
                children: Vec::new(),
                named: true,
                error: false,
                missing: false,
            }],
            wrapped: true,
        };
        let mut cursor = body.walk();
        if !cursor.goto_first_child() {
            return Some(tree);
        }
        loop {
            let node = cursor.node();
            let inside = node.start_byte() >= shift && node.end_byte() <= shift + source.len();
            let brace = !node.is_named() && (node.kind() == "{" || node.kind() == "}");
            if inside && !brace {
                let id = tree.push_ts(&cursor, NodeId(0), shift, source.len());
                if cursor.goto_first_child() {
                    tree.copy_children(&mut cursor, id, shift, source.len());
                    cursor.goto_parent();
                }
            }
            if !cursor.goto_next_sibling() {
                break;
            }
        }
        Some(tree)
    }

    fn push_ts(
        &mut self,
        cursor: &tree_sitter::TreeCursor<'_>,
        parent: NodeId,
        shift: usize,
        len: usize,
    ) -> NodeId {
        let node = cursor.node();
        let clamp = |b: usize| b.saturating_sub(shift).min(len);
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(NodeData {
            kind: kind_of(&node),
            field: field_of(cursor),
            span: Span::new(clamp(node.start_byte()), clamp(node.end_byte())),
            parent: Some(parent),
            children: Vec::new(),
            named: node.is_named(),
            error: node.is_error(),
            missing: node.is_missing(),
        });
        self.nodes[parent.index()].children.push(id);
        id
    }

    fn copy_children(
        &mut self,
        cursor: &mut tree_sitter::TreeCursor<'_>,
        parent: NodeId,
        shift: usize,
        len: usize,
    ) {
        loop {
            let id = self.push_ts(cursor, parent, shift, len);
            if cursor.goto_first_child() {
                self.copy_children(cursor, id, shift, len);
                cursor.goto_parent();
            }
            if !cursor.goto_next_sibling() {
                break;
            }
        }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> SyntaxNode<'_> {
        self.node(NodeId(0))
    }

    pub fn node(&self, id: NodeId) -> SyntaxNode<'_> {
        SyntaxNode { tree: self, id }
    }

    /// True when the fragment needed a synthetic class wrapper to parse.
    pub fn was_wrapped(&self) -> bool {
        self.wrapped
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of `ERROR` and missing nodes.
    pub fn error_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.error || n.missing).count()
    }

    pub fn has_errors(&self) -> bool {
        self.error_count() > 0
    }

    /// Rebuild the text from the tree: leaf tokens plus the gaps between them.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.source.len());
        let mut cursor = 0;
        self.render_into(self.root(), &mut out, &mut cursor);
        out.push_str(&self.source[cursor..]);
        out
    }

    fn render_into(&self, node: SyntaxNode<'_>, out: &mut String, cursor: &mut usize) {
        let span = node.span();
        if node.child_count() == 0 {
            if span.start >= *cursor {
                out.push_str(&self.source[*cursor..span.end]);
                *cursor = span.end;
            }
            return;
        }
        for child in node.children() {
            self.render_into(child, out, cursor);
        }
    }

    /// Every node in pre-order (document order).
    pub fn descendants(&self) -> impl Iterator<Item = SyntaxNode<'_>> {
        self.root().descendants()
    }
}

/// Borrowed handle to a node of a [`SyntaxTree`].
#[derive(Clone, Copy)]
pub struct SyntaxNode<'t> {
    tree: &'t SyntaxTree,
    id: NodeId,
}

impl PartialEq for SyntaxNode<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.tree, other.tree) && self.id == other.id
    }
}

impl Eq for SyntaxNode<'_> {}

impl fmt::Debug for SyntaxNode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}..{}", self.kind(), self.span().start, self.span().end)
    }
}

impl<'t> SyntaxNode<'t> {
    fn data(&self) -> &'t NodeData {
        &self.tree.nodes[self.id.index()]
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn tree(&self) -> &'t SyntaxTree {
        self.tree
    }

    /// Grammar production name, e.g. `method_declaration`, or the literal
    /// token text for anonymous tokens such as `{`.
    pub fn kind(&self) -> &'static str {
        self.data().kind
    }

    pub fn span(&self) -> Span {
        self.data().span
    }

    pub fn start(&self) -> usize {
        self.data().span.start
    }

    pub fn end(&self) -> usize {
        self.data().span.end
    }

    pub fn text(&self) -> &'t str {
        let span = self.span();
        &self.tree.source[span.start..span.end]
    }

    /// Field name under which this node hangs off its parent.
    pub fn field(&self) -> Option<&'static str> {
        self.data().field
    }

    pub fn is_named(&self) -> bool {
        self.data().named
    }

    pub fn is_error(&self) -> bool {
        self.data().error
    }

    pub fn is_missing(&self) -> bool {
        self.data().missing
    }

    /// True if this node or any ancestor is an `ERROR` node.
    pub fn in_error_region(&self) -> bool {
        self.ancestors_inclusive().any(|n| n.is_error())
    }

    pub fn parent(&self) -> Option<SyntaxNode<'t>> {
        self.data().parent.map(|id| self.tree.node(id))
    }

    pub fn child_count(&self) -> usize {
        self.data().children.len()
    }

    pub fn children(&self) -> impl DoubleEndedIterator<Item = SyntaxNode<'t>> + 't {
        let tree = self.tree;
        self.data().children.iter().map(move |&id| tree.node(id))
    }

    pub fn named_children(&self) -> impl Iterator<Item = SyntaxNode<'t>> + 't {
        self.children().filter(|c| c.is_named() && !is_comment(c.kind()))
    }

    pub fn child_by_field(&self, field: &str) -> Option<SyntaxNode<'t>> {
        self.children().find(|c| c.field() == Some(field))
    }

    pub fn children_by_field<'a>(
        &self,
        field: &'a str,
    ) -> impl Iterator<Item = SyntaxNode<'t>> + use<'t, 'a> {
        self.children().filter(move |c| c.field() == Some(field))
    }

    pub fn ancestors(&self) -> impl Iterator<Item = SyntaxNode<'t>> + 't {
        std::iter::successors(self.parent(), |n| n.parent())
    }

    pub fn ancestors_inclusive(&self) -> impl Iterator<Item = SyntaxNode<'t>> + 't {
        std::iter::successors(Some(*self), |n| n.parent())
    }

    /// Pre-order walk over this node and everything below it.
    pub fn descendants(&self) -> impl Iterator<Item = SyntaxNode<'t>> + 't {
        let tree = self.tree;
        let mut stack = vec![self.id];
        std::iter::from_fn(move || {
            let id = stack.pop()?;
            stack.extend(tree.nodes[id.index()].children.iter().rev().copied());
            Some(tree.node(id))
        })
    }

    pub fn is_ancestor_of(&self, other: &SyntaxNode<'_>) -> bool {
        other.ancestors().any(|a| a.id == self.id)
    }
}

pub(crate) fn is_comment(kind: &str) -> bool {
    kind == "line_comment" || kind == "block_comment"
}

/// All nodes of `kind`, in document order.
pub fn find_nodes<'t>(tree: &'t SyntaxTree, kind: &str) -> Vec<SyntaxNode<'t>> {
    tree.descendants().filter(|n| n.kind() == kind).collect()
}
