use std::collections::{BTreeMap, HashSet};

use super::rewrite::Rewriter;
use super::types::TypeEnv;
use super::{fresh_name, identifier_set, MrContext, MrOutcome, RenameMap};
use crate::syntax::{SyntaxNode, SyntaxTree};

/// Methods every class inherits; renaming a declaration would drop an override.
const OBJECT_METHODS: &[&str] = &["equals", "hashCode", "toString", "clone", "finalize"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Receiver {
    Unit,
    External,
    Unknown,
}

struct Unit<'t> {
    classes: HashSet<&'t str>,
    env: TypeEnv,
}

fn strip_type(text: &str) -> &str {
    let t = text.split('<').next().unwrap_or(text).trim();
    let t = t.trim_end_matches("[]").trim();
    t.rsplit('.').next().unwrap_or(t)
}

impl Unit<'_> {
    fn classify_type_name(&self, ty: &str) -> Receiver {
        if ty.contains('[') {
            return Receiver::External;
        }
        if self.classes.contains(strip_type(ty)) { Receiver::Unit } else { Receiver::External }
    }

    fn receiver(&self, object: SyntaxNode<'_>) -> Receiver {
        match object.kind() {
            "this" => Receiver::Unit,
            "super" => Receiver::Unknown,
            "identifier" => {
                let name = object.text();
                if let Some(ty) = self.env.var_type(name) {
                    self.classify_type_name(ty)
                } else if self.classes.contains(name) {
                    Receiver::Unit
                } else if name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    Receiver::External
                } else {
                    Receiver::Unknown
                }
            }
            "field_access" => {
                let Some(field) = object.child_by_field("field") else { return Receiver::Unknown };
                let owner = object.child_by_field("object");
                if field.kind() == "this" {
                    return Receiver::Unit;
                }
                match (owner.map(|o| o.kind()), self.env.var_type(field.text())) {
                    (Some("this"), Some(ty)) => self.classify_type_name(ty),
                    _ => Receiver::Unknown,
                }
            }
            "object_creation_expression" => object
                .child_by_field("type")
                .map_or(Receiver::Unknown, |t| self.classify_type_name(t.text())),
            "string_literal" | "array_creation_expression" | "class_literal" => Receiver::External,
            "parenthesized_expression" => {
                object.named_children().next().map_or(Receiver::Unknown, |o| self.receiver(o))
            }
            "cast_expression" => object
                .child_by_field("type")
                .map_or(Receiver::Unknown, |t| self.classify_type_name(t.text())),
            "scoped_type_identifier" | "type_identifier" | "generic_type" => {
                self.classify_type_name(object.text())
            }
            _ => Receiver::Unknown,
        }
    }
}

fn has_override_annotation(method: SyntaxNode<'_>) -> bool {
    method.children().filter(|c| c.kind() == "modifiers").any(|m| {
        m.named_children().any(|a| {
            matches!(a.kind(), "marker_annotation" | "annotation")
                && a.child_by_field("name").is_some_and(|n| n.text() == "Override")
        })
    })
}

fn has_modifier(method: SyntaxNode<'_>, word: &str) -> bool {
    method
        .children()
        .filter(|c| c.kind() == "modifiers")
        .any(|m| m.children().any(|t| t.kind() == word))
}

/// Whether the type owning `method` inherits from something outside the
/// unit, in which case the method may implement an external contract.
fn owner_extends_external(method: SyntaxNode<'_>, unit: &Unit<'_>) -> bool {
    let Some(mut body) = method.parent() else { return true };
    if body.kind() == "program" {
        return false;
    }
    if body.kind() == "enum_body_declarations" {
        let Some(b) = body.parent() else { return true };
        body = b;
    }
    let Some(owner) = body.parent() else { return true };
    let supertypes: Vec<SyntaxNode<'_>> = match owner.kind() {
        "object_creation_expression" => owner.child_by_field("type").into_iter().collect(),
        "class_declaration" | "enum_declaration" | "record_declaration" | "interface_declaration" => owner
            .children()
            .filter(|c| matches!(c.kind(), "superclass" | "super_interfaces" | "extends_interfaces"))
            .flat_map(|c| c.descendants().filter(|n| n.kind() == "type_identifier").collect::<Vec<_>>())
            .collect(),
        _ => return true,
    };
    supertypes
        .iter()
        .any(|t| unit.classify_type_name(t.text()) == Receiver::External)
}

pub(super) fn apply(tree: &SyntaxTree, ctx: &mut MrContext) -> MrOutcome {
    let src = tree.source();
    let classes: HashSet<&str> = tree
        .descendants()
        .filter(|n| {
            matches!(
                n.kind(),
                "class_declaration" | "interface_declaration" | "enum_declaration" | "record_declaration"
            )
        })
        .filter_map(|n| n.child_by_field("name").map(|x| x.text()))
        .collect();
    let unit = Unit { classes, env: TypeEnv::build(tree) };

    let methods: Vec<SyntaxNode<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "method_declaration")
        .collect();
    let mut blocked: HashSet<&str> = OBJECT_METHODS.iter().copied().collect();
    blocked.insert("main");
    for m in &methods {
        let Some(name) = m.child_by_field("name") else { continue };
        let private_or_static = has_modifier(*m, "private") || has_modifier(*m, "static");
        if m.in_error_region()
            || has_override_annotation(*m)
            || (!private_or_static && owner_extends_external(*m, &unit))
        {
            blocked.insert(name.text());
        }
    }
    let declared: HashSet<&str> = methods
        .iter()
        .filter_map(|m| m.child_by_field("name").map(|n| n.text()))
        .collect();

    // Call sites: rename those on unit receivers, and give up on a name when
    // some receiver cannot be classified.
    let mut sites: Vec<SyntaxNode<'_>> = Vec::new();
    for node in tree.descendants() {
        let (name, object) = match node.kind() {
            "method_invocation" => {
                let Some(name) = node.child_by_field("name") else { continue };
                (name, node.child_by_field("object"))
            }
            "method_reference" => {
                let mut parts = node.named_children();
                let (Some(object), Some(name)) = (parts.next(), parts.last()) else { continue };
                if name.kind() != "identifier" {
                    continue;
                }
                (name, Some(object))
            }
            _ => continue,
        };
        if !declared.contains(name.text()) {
            continue;
        }
        if node.in_error_region() {
            blocked.insert(name.text());
            continue;
        }
        match object.map(|o| unit.receiver(o)) {
            None | Some(Receiver::Unit) => sites.push(name),
            Some(Receiver::External) => {}
            Some(Receiver::Unknown) => {
                blocked.insert(name.text());
            }
        }
    }

    let mut taken = identifier_set(src);
    let mut mapping: BTreeMap<String, String> = BTreeMap::new();
    let mut rw = Rewriter::new(tree);
    for m in &methods {
        let Some(name) = m.child_by_field("name") else { continue };
        let old = name.text();
        if blocked.contains(old) {
            continue;
        }
        let new = mapping
            .entry(old.to_string())
            .or_insert_with(|| {
                let n = fresh_name(old, "Method", &mut ctx.meth_counter, &taken);
                taken.insert(n.clone());
                n
            })
            .clone();
        rw.replace(name, new);
    }
    for name in sites {
        if let Some(new) = mapping.get(name.text()) {
            rw.replace(name, new.clone());
        }
    }
    let (text, n) = rw.finish();
    MrOutcome::new(src, text, n, RenameMap { method_renames: mapping, ..RenameMap::default() })
}
