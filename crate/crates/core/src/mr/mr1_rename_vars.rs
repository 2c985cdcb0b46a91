use std::collections::{BTreeMap, HashMap, HashSet};

use super::rewrite::Rewriter;
use super::{fresh_name, identifier_set, MrContext, MrOutcome, RenameMap};
use crate::syntax::{NodeId, SyntaxNode, SyntaxTree};

#[derive(Debug, Clone, Copy)]
struct Decl<'t> {
    name: SyntaxNode<'t>,
    scope: SyntaxNode<'t>,
    visible_from: usize,
    renamable: bool,
}

/// Nearest enclosing node that owns executable code, or `None` when the node
/// sits in a class body outside any method (field initialisers and such).
fn code_owner(node: SyntaxNode<'_>) -> Option<SyntaxNode<'_>> {
    for a in node.ancestors() {
        match a.kind() {
            "method_declaration" | "constructor_declaration" | "compact_constructor_declaration" => {
                return Some(a)
            }
            "class_body" | "interface_body" | "enum_body" | "enum_body_declarations"
            | "annotation_type_body" | "record_declaration" => return None,
            "program" => return Some(a),
            _ => {}
        }
    }
    None
}

fn scope_of_local(decl_stmt: SyntaxNode<'_>) -> Option<SyntaxNode<'_>> {
    let parent = decl_stmt.parent()?;
    Some(match parent.kind() {
        "switch_block_statement_group" => parent.parent()?,
        _ => parent,
    })
}

fn is_pattern_binding(id: SyntaxNode<'_>) -> bool {
    let Some(parent) = id.parent() else { return false };
    match parent.kind() {
        "instanceof_expression" => id.field() == Some("name"),
        "type_pattern" | "record_pattern_component" => true,
        _ => false,
    }
}

fn collect_decls<'t>(tree: &'t SyntaxTree) -> Vec<Decl<'t>> {
    let mut decls = Vec::new();
    let mut pinned = Vec::new();
    let mut push = |name: SyntaxNode<'t>, scope: SyntaxNode<'t>, visible_from: usize| {
        decls.push(Decl { name, scope, visible_from, renamable: true });
    };
    for node in tree.descendants() {
        match node.kind() {
            "variable_declarator" => {
                let Some(name) = node.child_by_field("name") else { continue };
                let Some(parent) = node.parent() else { continue };
                match parent.kind() {
                    "local_variable_declaration" => {
                        if let Some(scope) = scope_of_local(parent) {
                            push(name, scope, node.start());
                        }
                    }
                    "spread_parameter" => {
                        if let Some(owner) = parent.parent().and_then(|p| p.parent()) {
                            push(name, owner, owner.start());
                        }
                    }
                    _ => {}
                }
            }
            "formal_parameter" => {
                let Some(name) = node.child_by_field("name") else { continue };
                let Some(owner) = node.parent().and_then(|p| p.parent()) else { continue };
                if owner.kind() != "record_declaration" {
                    push(name, owner, owner.start());
                }
            }
            "catch_formal_parameter" | "resource" | "enhanced_for_statement" => {
                let Some(name) = node.child_by_field("name") else { continue };
                let scope = match node.kind() {
                    "catch_formal_parameter" => node.parent(),
                    "resource" => node.ancestors().find(|a| a.kind() == "try_with_resources_statement"),
                    _ => Some(node),
                };
                if let Some(scope) = scope {
                    push(name, scope, scope.start());
                }
            }
            "inferred_parameters" => {
                if let Some(lambda) = node.parent() {
                    for id in node.named_children().filter(|c| c.kind() == "identifier") {
                        push(id, lambda, lambda.start());
                    }
                }
            }
            "lambda_expression" => {
                if let Some(p) = node.child_by_field("parameters").filter(|p| p.kind() == "identifier") {
                    push(p, node, node.start());
                }
            }
            "identifier" if is_pattern_binding(node) => {
                // Flow-sensitive scope: pin to the whole enclosing body and never rename.
                let scope = node
                    .ancestors()
                    .find(|a| {
                        matches!(
                            a.kind(),
                            "method_declaration" | "constructor_declaration" | "lambda_expression" | "program"
                        )
                    })
                    .unwrap_or_else(|| tree.root());
                pinned.push(Decl { name: node, scope, visible_from: scope.start(), renamable: false });
            }
            _ => {}
        }
    }
    decls.extend(pinned);
    decls
}

/// Names of fields declared directly in a type body.
fn member_variables<'t>(body: SyntaxNode<'t>) -> HashSet<&'t str> {
    let mut names = HashSet::new();
    fn scan<'t>(n: SyntaxNode<'t>, names: &mut HashSet<&'t str>) {
        for member in n.children() {
            match member.kind() {
                "field_declaration" | "constant_declaration" => {
                    for d in member.children_by_field("declarator") {
                        if let Some(name) = d.child_by_field("name") {
                            names.insert(name.text());
                        }
                    }
                }
                "enum_constant" => {
                    if let Some(name) = member.child_by_field("name") {
                        names.insert(name.text());
                    }
                }
                _ => {}
            }
        }
    }
    scan(body, &mut names);
    if body.kind() == "enum_body" {
        for c in body.children().filter(|c| c.kind() == "enum_body_declarations") {
            scan(c, &mut names);
        }
    }
    if let Some(record) = body.parent().filter(|p| p.kind() == "record_declaration") {
        if let Some(params) = record.child_by_field("parameters") {
            for p in params.named_children() {
                if let Some(name) = p.child_by_field("name") {
                    names.insert(name.text());
                }
            }
        }
    }
    names
}

/// Whether an `identifier` node stands for a variable reference.
fn is_variable_position(id: SyntaxNode<'_>) -> bool {
    let Some(parent) = id.parent() else { return true };
    let field = id.field();
    match parent.kind() {
        "method_invocation" => field != Some("name"),
        "field_access" => field != Some("field"),
        "method_reference" => parent.named_children().next().map(|c| c.id()) == Some(id.id()),
        "labeled_statement" | "break_statement" | "continue_statement" | "scoped_identifier"
        | "marker_annotation" | "annotation" | "element_value_pair" | "module_declaration"
        | "package_declaration" | "import_declaration" => false,
        "method_declaration" | "constructor_declaration" | "class_declaration"
        | "interface_declaration" | "enum_declaration" | "record_declaration"
        | "annotation_type_declaration" | "enum_constant" | "annotation_type_element_declaration"
        | "compact_constructor_declaration" => field != Some("name"),
        _ => true,
    }
}

struct Resolver<'t> {
    by_scope: HashMap<(NodeId, &'t str), Vec<usize>>,
    decls: Vec<Decl<'t>>,
    barriers: HashMap<NodeId, HashSet<&'t str>>,
}

impl<'t> Resolver<'t> {
    fn new(decls: Vec<Decl<'t>>) -> Self {
        let mut by_scope: HashMap<(NodeId, &str), Vec<usize>> = HashMap::new();
        for (i, d) in decls.iter().enumerate() {
            by_scope.entry((d.scope.id(), d.name.text())).or_default().push(i);
        }
        Resolver { by_scope, decls, barriers: HashMap::new() }
    }

    fn resolve(&mut self, id: SyntaxNode<'t>) -> Option<usize> {
        let name = id.text();
        for a in id.ancestors() {
            if let Some(candidates) = self.by_scope.get(&(a.id(), name)) {
                let hit = candidates
                    .iter()
                    .rev()
                    .find(|&&i| self.decls[i].visible_from <= id.start())
                    .copied();
                if hit.is_some() {
                    return hit;
                }
            }
            if matches!(a.kind(), "class_body" | "enum_body" | "interface_body") {
                let fields = self.barriers.entry(a.id()).or_insert_with(|| member_variables(a));
                if fields.contains(name) {
                    return None;
                }
            }
        }
        None
    }
}

pub(super) fn apply(tree: &SyntaxTree, ctx: &mut MrContext) -> MrOutcome {
    let src = tree.source();
    let mut decls = collect_decls(tree);

    // Pattern bindings pin every same-named declaration in their body.
    let pinned: HashSet<(NodeId, &str)> = decls
        .iter()
        .filter(|d| !d.renamable)
        .map(|d| (d.scope.id(), d.name.text()))
        .collect();
    for d in decls.iter_mut() {
        let owner = code_owner(d.name);
        let body_pinned = d
            .name
            .ancestors()
            .any(|a| pinned.contains(&(a.id(), d.name.text())));
        if owner.is_none() || d.name.in_error_region() || body_pinned {
            d.renamable = false;
        }
    }

    let decl_ids: HashSet<NodeId> = decls.iter().map(|d| d.name.id()).collect();
    let mut resolver = Resolver::new(decls);
    let mut uses: Vec<(SyntaxNode<'_>, usize)> = Vec::new();
    for node in tree.descendants() {
        if node.kind() != "identifier" || decl_ids.contains(&node.id()) || !is_variable_position(node) {
            continue;
        }
        if let Some(i) = resolver.resolve(node) {
            if node.in_error_region() {
                resolver.decls[i].renamable = false;
            }
            uses.push((node, i));
        }
    }

    let mut taken = identifier_set(src);
    let mut mapping: BTreeMap<String, String> = BTreeMap::new();
    let mut rw = Rewriter::new(tree);
    for d in resolver.decls.iter().filter(|d| d.renamable) {
        let old = d.name.text();
        let new = mapping
            .entry(old.to_string())
            .or_insert_with(|| {
                let n = fresh_name(old, "_var", &mut ctx.var_counter, &taken);
                taken.insert(n.clone());
                n
            })
            .clone();
        rw.replace(d.name, new);
    }
    for (node, i) in uses {
        if resolver.decls[i].renamable {
            rw.replace(node, mapping[node.text()].clone());
        }
    }
    let (text, sites) = rw.finish();
    let map = RenameMap { variable_renames: mapping, ..RenameMap::default() };
    MrOutcome::new(src, text, sites, map)
}
