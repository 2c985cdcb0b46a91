use std::collections::HashMap;

use super::rewrite::{statement_before, Rewriter};
use super::analysis::is_statement;
use super::MrOutcome;
use crate::syntax::{NodeId, SyntaxNode, SyntaxTree};

struct Plan<'t> {
    decl: SyntaxNode<'t>,
    /// `type name;` statements to hoist.
    hoisted: Vec<String>,
}

fn is_type_declaration(kind: &str) -> bool {
    matches!(
        kind,
        "class_declaration" | "local_class_declaration" | "record_declaration" | "enum_declaration"
            | "interface_declaration"
    )
}

/// First statement of `block` in front of which declarations are hoisted.
fn hoist_anchor(block: SyntaxNode<'_>) -> Option<SyntaxNode<'_>> {
    let mut stmts = block
        .children()
        .filter(|c| c.is_named() && (is_statement(c.kind()) || c.kind() == "explicit_constructor_invocation"));
    let first = stmts.next()?;
    if first.kind() == "explicit_constructor_invocation" {
        stmts.next()
    } else {
        Some(first)
    }
}

fn plan<'t>(decl: SyntaxNode<'t>) -> Option<Plan<'t>> {
    let block = decl.parent()?;
    if !matches!(block.kind(), "block" | "constructor_body" | "program") || decl.in_error_region() {
        return None;
    }
    let ty = decl.child_by_field("type")?;
    if ty.text() == "var" {
        return None;
    }
    let declarators: Vec<SyntaxNode<'t>> = decl.children_by_field("declarator").collect();
    if declarators.is_empty() || declarators.iter().all(|d| d.child_by_field("value").is_none()) {
        return None;
    }
    if declarators
        .iter()
        .any(|d| d.child_by_field("value").is_some_and(|v| v.kind() == "array_initializer"))
    {
        return None;
    }
    // Anything earlier in the block that mentions one of the names (a field it
    // would shadow, a local type it needs) rules the move out.
    for earlier in block.children().take_while(|c| c.start() < decl.start()) {
        if is_type_declaration(earlier.kind()) {
            return None;
        }
        for d in &declarators {
            let name = d.child_by_field("name")?.text();
            if earlier.descendants().any(|n| n.kind() == "identifier" && n.text() == name) {
                return None;
            }
        }
    }
    let modifiers = decl
        .children()
        .find(|c| c.kind() == "modifiers")
        .map(|m| format!("{} ", m.text()))
        .unwrap_or_default();
    let hoisted = declarators
        .iter()
        .map(|d| {
            let name = d.child_by_field("name").map_or("", |n| n.text());
            let dims = d.child_by_field("dimensions").map_or("", |x| x.text());
            format!("{modifiers}{} {name}{dims};", ty.text())
        })
        .collect();
    Some(Plan { decl, hoisted })
}

pub(super) fn apply(tree: &SyntaxTree) -> MrOutcome {
    let src = tree.source();
    let plans: Vec<Plan<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "local_variable_declaration")
        .filter_map(plan)
        .collect();
    let mut rw = Rewriter::new(tree);

    let mut anchors: HashMap<NodeId, Option<SyntaxNode<'_>>> = HashMap::new();
    for p in &plans {
        let block = p.decl.parent().expect("planned declarations have a parent");
        let Some(anchor) = *anchors.entry(block.id()).or_insert_with(|| hoist_anchor(block)) else {
            continue;
        };
        for h in &p.hoisted {
            rw.insert_before(anchor, statement_before(src, anchor.start(), h, false));
        }
    }
    // Replace innermost first so initialisers carry nested rewrites.
    for p in plans.iter().rev() {
        let assigns: Vec<String> = p
            .decl
            .children_by_field("declarator")
            .filter_map(|d| {
                let name = d.child_by_field("name")?.text();
                let value = d.child_by_field("value")?;
                Some(format!("{name} = {};", rw.render(value)))
            })
            .collect();
        rw.replace(p.decl, assigns.join(" "));
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(src, text, sites, Default::default())
}
