use std::collections::{HashMap, HashSet};

use crate::syntax::{apply_edits, NodeId, SyntaxNode, SyntaxTree, TextEdit};

/// Collects node replacements and insertions, then renders the rewritten text.
///
/// Replacement text for a node is usually built from `render` of its
/// children, so nested rewrites compose. Register insertions before building
/// replacements of enclosing nodes, and build replacements bottom-up.
pub(crate) struct Rewriter<'t> {
    tree: &'t SyntaxTree,
    replaced: HashMap<NodeId, String>,
    before: HashMap<NodeId, Vec<String>>,
    after: HashMap<NodeId, Vec<String>>,
    dirty: HashSet<NodeId>,
    sites: usize,
}

impl<'t> Rewriter<'t> {
    pub fn new(tree: &'t SyntaxTree) -> Self {
        Rewriter {
            tree,
            replaced: HashMap::new(),
            before: HashMap::new(),
            after: HashMap::new(),
            dirty: HashSet::new(),
            sites: 0,
        }
    }

    fn mark(&mut self, node: SyntaxNode<'_>) {
        for n in node.ancestors_inclusive() {
            if !self.dirty.insert(n.id()) {
                break;
            }
        }
        self.sites += 1;
    }

    pub fn replace(&mut self, node: SyntaxNode<'_>, text: String) {
        self.replaced.insert(node.id(), text);
        self.mark(node);
    }

    pub fn insert_before(&mut self, node: SyntaxNode<'_>, text: String) {
        self.before.entry(node.id()).or_default().push(text);
        self.mark(node);
    }

    pub fn insert_after(&mut self, node: SyntaxNode<'_>, text: String) {
        self.after.entry(node.id()).or_default().push(text);
        self.mark(node);
    }

    /// Current text of `node`, including pending changes at or below it.
    pub fn render(&self, node: SyntaxNode<'_>) -> String {
        let mut out = String::new();
        self.render_outer(node, &mut out);
        out
    }

    fn render_outer(&self, node: SyntaxNode<'_>, out: &mut String) {
        if let Some(texts) = self.before.get(&node.id()) {
            texts.iter().for_each(|t| out.push_str(t));
        }
        self.render_inner(node, out);
        if let Some(texts) = self.after.get(&node.id()) {
            texts.iter().for_each(|t| out.push_str(t));
        }
    }

    fn render_inner(&self, node: SyntaxNode<'_>, out: &mut String) {
        if let Some(text) = self.replaced.get(&node.id()) {
            out.push_str(text);
            return;
        }
        if !self.dirty.contains(&node.id()) {
            out.push_str(node.text());
            return;
        }
        let src = self.tree.source();
        let mut cursor = node.start();
        for child in node.children() {
            out.push_str(&src[cursor..child.start()]);
            self.render_outer(child, out);
            cursor = child.end();
        }
        out.push_str(&src[cursor..node.end()]);
    }

    /// One edit per outermost changed node.
    pub fn edits(&self) -> Vec<TextEdit> {
        let mut edits = Vec::new();
        self.collect(self.tree.root(), &mut edits);
        edits
    }

    fn collect(&self, node: SyntaxNode<'_>, edits: &mut Vec<TextEdit>) {
        let id = node.id();
        if self.replaced.contains_key(&id) || self.before.contains_key(&id) || self.after.contains_key(&id)
        {
            edits.push(TextEdit::new(node.span(), self.render(node)));
        } else if self.dirty.contains(&id) {
            for child in node.children() {
                self.collect(child, edits);
            }
        }
    }

    /// Rewritten source and the number of recorded change sites.
    pub fn finish(self) -> (String, usize) {
        let edits = self.edits();
        let text = apply_edits(self.tree.source(), &edits)
            .expect("edits of disjoint subtrees never overlap");
        (text, self.sites)
    }
}

/// Whitespace between the start of `offset`'s line and `offset`, if nothing
/// else precedes it on that line.
pub(crate) fn line_indent(src: &str, offset: usize) -> Option<&str> {
    let line_start = src[..offset].rfind('\n').map_or(0, |p| p + 1);
    let prefix = &src[line_start..offset];
    prefix.chars().all(|c| c == ' ' || c == '\t').then_some(prefix)
}

/// Text to insert immediately before the node at `offset` so that `stmt`
/// becomes its own statement in front of it. `stmt` must not end in a newline.
pub(crate) fn statement_before(src: &str, offset: usize, stmt: &str, line_comment: bool) -> String {
    match line_indent(src, offset) {
        Some(indent) => format!("{stmt}\n{indent}"),
        None if line_comment => format!("{stmt}\n"),
        None => format!("{stmt} "),
    }
}

/// Text to insert before the closing brace at `close` so that `stmt` becomes
/// the last statement of the block. `body_indent` is the indentation of the
/// block's existing statements, if known.
pub(crate) fn statement_before_close(
    src: &str,
    close: usize,
    stmt: &str,
    line_comment: bool,
    body_indent: Option<&str>,
) -> String {
    match line_indent(src, close) {
        Some(indent) => {
            let extra = body_indent
                .and_then(|b| b.strip_prefix(indent))
                .filter(|e| !e.is_empty())
                .unwrap_or("    ");
            format!("{extra}{stmt}\n{indent}")
        }
        None if line_comment => format!("{stmt}\n"),
        None => format!("{stmt} "),
    }
}
