//! Syntactic facts shared by several relations.

use crate::syntax::{SyntaxNode, SyntaxTree};

/// Statement kinds of the Java grammar.
pub(crate) fn is_statement(kind: &str) -> bool {
    matches!(
        kind,
        "expression_statement"
            | "local_variable_declaration"
            | "block"
            | "if_statement"
            | "for_statement"
            | "enhanced_for_statement"
            | "while_statement"
            | "do_statement"
            | "return_statement"
            | "break_statement"
            | "continue_statement"
            | "throw_statement"
            | "try_statement"
            | "try_with_resources_statement"
            | "switch_expression"
            | "switch_statement"
            | "synchronized_statement"
            | "labeled_statement"
            | "assert_statement"
            | "yield_statement"
            | "local_class_declaration"
            | "class_declaration"
            | "record_declaration"
            | "enum_declaration"
            | "interface_declaration"
            | ";"
    )
}

/// Whether a `program` root holds bare statements, i.e. is a snippet rather
/// than a compilation unit.
pub(crate) fn is_snippet_root(node: SyntaxNode<'_>) -> bool {
    node.kind() == "program"
        && node.children().any(|c| {
            is_statement(c.kind())
                && !matches!(
                    c.kind(),
                    "class_declaration"
                        | "record_declaration"
                        | "enum_declaration"
                        | "interface_declaration"
                        | ";"
                )
        })
}

/// A body that the per-method relations operate on.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Body<'t> {
    /// The `block` of a method, or the snippet `program` root.
    pub node: SyntaxNode<'t>,
    /// The enclosing method declaration; `None` for a snippet root.
    #[allow(dead_code)]
    pub method: Option<SyntaxNode<'t>>,
}

impl<'t> Body<'t> {
    /// Top-level statements, in order.
    pub fn statements(&self) -> Vec<SyntaxNode<'t>> {
        self.node
            .children()
            .filter(|c| c.is_named() && is_statement(c.kind()) && !c.is_error())
            .collect()
    }

    /// Closing brace of a block body.
    pub fn close_brace(&self) -> Option<SyntaxNode<'t>> {
        if self.node.kind() != "block" {
            return None;
        }
        self.node.children().last().filter(|c| c.kind() == "}" && !c.is_missing())
    }
}

/// Bodies of method declarations (optionally constructors too) plus a
/// snippet root, in document order. Bodies inside error regions are skipped.
pub(crate) fn bodies(tree: &SyntaxTree, with_constructors: bool) -> Vec<Body<'_>> {
    let mut out = Vec::new();
    let root = tree.root();
    if is_snippet_root(root) {
        out.push(Body { node: root, method: None });
    }
    for node in tree.descendants() {
        let wanted = node.kind() == "method_declaration"
            || (with_constructors && node.kind() == "constructor_declaration");
        if !wanted || node.in_error_region() {
            continue;
        }
        if let Some(body) = node.child_by_field("body") {
            if body.kind() == "block" || body.kind() == "constructor_body" {
                out.push(Body { node: body, method: Some(node) });
            }
        }
    }
    out
}

/// Insertion point for a new statement in a body.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Boundary<'t> {
    Before(SyntaxNode<'t>),
    /// Before the closing brace.
    BeforeClose(SyntaxNode<'t>),
    /// After the last statement of a snippet root.
    After(SyntaxNode<'t>),
}

/// Statement boundaries of a body. With `reachable_only`, boundaries behind a
/// statement that may not complete normally are dropped.
pub(crate) fn boundaries<'t>(body: &Body<'t>, reachable_only: bool) -> Vec<Boundary<'t>> {
    let stmts = body.statements();
    let mut out = Vec::new();
    let mut reachable = true;
    for stmt in &stmts {
        if !reachable_only || reachable {
            out.push(Boundary::Before(*stmt));
        }
        reachable = reachable && completion(*stmt) == Completion::Normal;
    }
    if !reachable_only || reachable {
        match body.close_brace() {
            Some(close) => out.push(Boundary::BeforeClose(close)),
            None => {
                if let Some(last) = stmts.last() {
                    out.push(Boundary::After(*last));
                }
            }
        }
    }
    out
}

/// Whether control can fall out of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completion {
    Normal,
    Abrupt,
    Unknown,
}

fn strip_parens(node: SyntaxNode<'_>) -> SyntaxNode<'_> {
    let mut n = node;
    while n.kind() == "parenthesized_expression" {
        match n.named_children().next() {
            Some(inner) => n = inner,
            None => break,
        }
    }
    n
}

fn is_constant_true(cond: Option<SyntaxNode<'_>>) -> bool {
    match cond {
        None => true,
        Some(c) => strip_parens(c).kind() == "true",
    }
}

/// Whether `body` contains a `break` that may exit the loop or switch owning it.
fn breaks_out(body: SyntaxNode<'_>) -> bool {
    fn walk(n: SyntaxNode<'_>, nested: bool) -> bool {
        if n.kind() == "break_statement" {
            let labeled = n.named_children().next().is_some();
            return labeled || !nested;
        }
        if matches!(n.kind(), "lambda_expression" | "class_body") {
            return false;
        }
        let nested = nested
            || matches!(
                n.kind(),
                "for_statement"
                    | "enhanced_for_statement"
                    | "while_statement"
                    | "do_statement"
                    | "switch_expression"
                    | "switch_statement"
            );
        n.children().any(|c| walk(c, nested))
    }
    body.children().any(|c| walk(c, false))
}

fn loop_completion(cond: Option<SyntaxNode<'_>>, body: Option<SyntaxNode<'_>>) -> Completion {
    if !is_constant_true(cond) {
        return Completion::Normal;
    }
    match body {
        Some(b) if breaks_out(b) => Completion::Unknown,
        _ => Completion::Abrupt,
    }
}

/// Conservative normal-completion analysis of a statement.
pub(crate) fn completion(stmt: SyntaxNode<'_>) -> Completion {
    use Completion::*;
    if stmt.is_error() || stmt.is_missing() {
        return Unknown;
    }
    match stmt.kind() {
        "return_statement" | "throw_statement" | "break_statement" | "continue_statement"
        | "yield_statement" => Abrupt,
        "block" | "constructor_body" => sequence(stmt.children().filter(|c| is_statement(c.kind()))),
        "if_statement" => match stmt.child_by_field("alternative") {
            None => Normal,
            Some(alt) => {
                let cons = stmt.child_by_field("consequence").map_or(Unknown, completion);
                match (cons, completion(alt)) {
                    (Normal, _) | (_, Normal) => Normal,
                    (Abrupt, Abrupt) => Abrupt,
                    _ => Unknown,
                }
            }
        },
        "while_statement" => {
            loop_completion(stmt.child_by_field("condition"), stmt.child_by_field("body"))
        }
        "for_statement" => {
            loop_completion(stmt.child_by_field("condition"), stmt.child_by_field("body"))
        }
        "do_statement" => {
            let body = stmt.child_by_field("body");
            let cond = stmt.child_by_field("condition");
            if is_constant_true(cond) {
                loop_completion(cond, body)
            } else if body.map_or(Unknown, completion) == Normal {
                Normal
            } else {
                Unknown
            }
        }
        "labeled_statement" => match stmt.named_children().last().map(completion) {
            Some(Normal) => Normal,
            _ => Unknown,
        },
        "switch_expression" | "switch_statement" => {
            let has_default = stmt
                .descendants()
                .any(|n| n.kind() == "switch_label" && n.text().trim_start().starts_with("default"));
            if has_default { Unknown } else { Normal }
        }
        "synchronized_statement" => stmt.child_by_field("body").map_or(Unknown, completion),
        "try_statement" | "try_with_resources_statement" => {
            if let Some(fin) = stmt.children().find(|c| c.kind() == "finally_clause") {
                match fin.children().find(|c| c.kind() == "block").map(completion) {
                    Some(Normal) => {}
                    Some(Abrupt) => return Abrupt,
                    _ => return Unknown,
                }
            }
            let body = stmt.child_by_field("body").map_or(Unknown, completion);
            let catches: Vec<Completion> = stmt
                .children()
                .filter(|c| c.kind() == "catch_clause")
                .map(|c| c.child_by_field("body").map_or(Unknown, completion))
                .collect();
            if body == Normal || catches.contains(&Normal) {
                Normal
            } else if body == Abrupt && catches.iter().all(|c| *c == Abrupt) {
                Abrupt
            } else {
                Unknown
            }
        }
        _ => Normal,
    }
}

fn sequence<'t>(stmts: impl Iterator<Item = SyntaxNode<'t>>) -> Completion {
    for s in stmts {
        match completion(s) {
            Completion::Normal => {}
            other => return other,
        }
    }
    Completion::Normal
}

/// Expressions whose evaluation has no side effects and cannot observe any,
/// so evaluation order relative to each other does not matter.
pub(crate) fn is_side_effect_free(node: SyntaxNode<'_>) -> bool {
    match node.kind() {
        "identifier" | "this" | "true" | "false" | "null_literal" | "character_literal"
        | "string_literal" | "decimal_integer_literal" | "hex_integer_literal"
        | "octal_integer_literal" | "binary_integer_literal" | "decimal_floating_point_literal"
        | "hex_floating_point_literal" | "class_literal" => true,
        "field_access" | "array_access" | "parenthesized_expression" | "cast_expression" => {
            node.named_children().all(|c| {
                is_side_effect_free(c) || (node.kind() == "cast_expression" && c.field() == Some("type"))
            })
        }
        "unary_expression" => node.named_children().all(is_side_effect_free),
        "binary_expression" => {
            let op = node.child_by_field("operator").map(|o| o.kind()).unwrap_or("");
            !matches!(op, "/" | "%")
                && node.named_children().all(is_side_effect_free)
        }
        _ => is_type_like(node.kind()),
    }
}

fn is_type_like(kind: &str) -> bool {
    matches!(
        kind,
        "integral_type"
            | "floating_point_type"
            | "boolean_type"
            | "type_identifier"
            | "scoped_type_identifier"
            | "generic_type"
            | "array_type"
    )
}

/// Whether `name` occurs as an identifier token anywhere in `node`.
pub(crate) fn mentions(node: SyntaxNode<'_>, name: &str) -> bool {
    node.descendants()
        .any(|n| n.kind() == "identifier" && n.text() == name)
}
