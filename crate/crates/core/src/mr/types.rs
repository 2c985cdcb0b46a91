//! Just enough local type inference to tell numbers from strings.
//!
//! Types come from declarations in the same source unit, keyed by name. A
//! name declared with two different types is treated as unknown.

use std::collections::HashMap;

use crate::syntax::{SyntaxNode, SyntaxTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ty {
    /// byte, short, char, int, long and their boxes.
    Integral,
    Float,
    Double,
    /// Some numeric type, but not known which.
    Numeric,
    Boolean,
    Str,
    Other,
}

impl Ty {
    pub fn is_numeric(self) -> bool {
        matches!(self, Ty::Integral | Ty::Float | Ty::Double | Ty::Numeric)
    }

    pub fn is_floating(self) -> bool {
        matches!(self, Ty::Float | Ty::Double)
    }
}

/// Binary numeric promotion.
fn promote(a: Option<Ty>, b: Option<Ty>) -> Ty {
    match (a, b) {
        (Some(Ty::Double), _) | (_, Some(Ty::Double)) => Ty::Double,
        (Some(Ty::Float), Some(Ty::Float | Ty::Integral))
        | (Some(Ty::Integral), Some(Ty::Float)) => Ty::Float,
        (Some(Ty::Integral), Some(Ty::Integral)) => Ty::Integral,
        _ => Ty::Numeric,
    }
}

pub(crate) fn classify_type(text: &str) -> Ty {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.strip_prefix("java.lang.").unwrap_or(&t);
    match t {
        "byte" | "short" | "char" | "int" | "long" | "Byte" | "Short" | "Character" | "Integer"
        | "Long" => Ty::Integral,
        "float" | "Float" => Ty::Float,
        "double" | "Double" => Ty::Double,
        "boolean" | "Boolean" => Ty::Boolean,
        "String" => Ty::Str,
        _ => Ty::Other,
    }
}

pub(crate) fn is_primitive_numeric(text: &str) -> bool {
    matches!(text.trim(), "byte" | "short" | "char" | "int" | "long" | "float" | "double")
}

/// Declared types of variables, fields and methods in one unit.
#[derive(Debug, Default)]
pub(crate) struct TypeEnv {
    vars: HashMap<String, Option<String>>,
    methods: HashMap<String, Option<String>>,
}

fn record(map: &mut HashMap<String, Option<String>>, name: &str, ty: String) {
    map.entry(name.to_string())
        .and_modify(|prev| {
            if prev.as_deref() != Some(ty.as_str()) {
                *prev = None;
            }
        })
        .or_insert(Some(ty));
}

fn squash(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

impl TypeEnv {
    pub fn build(tree: &SyntaxTree) -> TypeEnv {
        let mut env = TypeEnv::default();
        for node in tree.descendants() {
            match node.kind() {
                "local_variable_declaration" | "field_declaration" | "constant_declaration" => {
                    let Some(ty) = node.child_by_field("type") else { continue };
                    for decl in node.children_by_field("declarator") {
                        env.declare(decl, ty.text());
                    }
                }
                "formal_parameter" | "catch_formal_parameter" | "resource"
                | "enhanced_for_statement" => {
                    let ty = match node.kind() {
                        "catch_formal_parameter" => "Throwable".to_string(),
                        _ => match node.child_by_field("type") {
                            Some(t) => t.text().to_string(),
                            None => continue,
                        },
                    };
                    if let Some(name) = node.child_by_field("name") {
                        let dims = node.child_by_field("dimensions").map_or("", |d| d.text());
                        record(&mut env.vars, name.text(), squash(&format!("{ty}{dims}")));
                    }
                }
                "spread_parameter" => {
                    let ty = node.named_children().next().map(|t| t.text().to_string());
                    if let (Some(ty), Some(decl)) =
                        (ty, node.children().find(|c| c.kind() == "variable_declarator"))
                    {
                        env.declare(decl, &format!("{ty}[]"));
                    }
                }
                "inferred_parameters" => {
                    for id in node.named_children() {
                        env.vars.insert(id.text().to_string(), None);
                    }
                }
                "lambda_expression" => {
                    if let Some(p) = node.child_by_field("parameters").filter(|p| p.kind() == "identifier") {
                        env.vars.insert(p.text().to_string(), None);
                    }
                }
                "instanceof_expression" => {
                    if let (Some(name), Some(ty)) =
                        (node.child_by_field("name"), node.child_by_field("right"))
                    {
                        record(&mut env.vars, name.text(), squash(ty.text()));
                    }
                }
                "method_declaration" => {
                    if let (Some(name), Some(ty)) =
                        (node.child_by_field("name"), node.child_by_field("type"))
                    {
                        let dims = node.child_by_field("dimensions").map_or("", |d| d.text());
                        record(&mut env.methods, name.text(), squash(&format!("{}{dims}", ty.text())));
                    }
                }
                _ => {}
            }
        }
        env
    }

    fn declare(&mut self, declarator: SyntaxNode<'_>, ty: &str) {
        let Some(name) = declarator.child_by_field("name") else { return };
        let dims = declarator.child_by_field("dimensions").map_or("", |d| d.text());
        record(&mut self.vars, name.text(), squash(&format!("{ty}{dims}")));
    }

    /// Declared type text of a variable or field, if unambiguous.
    pub fn var_type(&self, name: &str) -> Option<&str> {
        self.vars.get(name).and_then(|t| t.as_deref())
    }

    pub fn method_type(&self, name: &str) -> Option<&str> {
        self.methods.get(name).and_then(|t| t.as_deref())
    }

    /// Static type of an expression, where it can be read off locally.
    pub fn infer(&self, node: SyntaxNode<'_>) -> Option<Ty> {
        match node.kind() {
            "decimal_integer_literal" | "hex_integer_literal" | "octal_integer_literal"
            | "binary_integer_literal" | "character_literal" => Some(Ty::Integral),
            "decimal_floating_point_literal" | "hex_floating_point_literal" => {
                let t = node.text();
                Some(if t.ends_with(['f', 'F']) { Ty::Float } else { Ty::Double })
            }
            "string_literal" => Some(Ty::Str),
            "true" | "false" => Some(Ty::Boolean),
            "identifier" => self.var_type(node.text()).map(classify_type),
            "field_access" => {
                let object = node.child_by_field("object")?;
                if object.kind() != "this" {
                    return None;
                }
                self.var_type(node.child_by_field("field")?.text()).map(classify_type)
            }
            "array_access" => {
                let array = node.child_by_field("array")?;
                let name = match array.kind() {
                    "identifier" => array.text(),
                    "field_access" if array.child_by_field("object")?.kind() == "this" => {
                        array.child_by_field("field")?.text()
                    }
                    _ => return None,
                };
                let ty = self.var_type(name)?;
                ty.strip_suffix("[]").map(classify_type)
            }
            "parenthesized_expression" => self.infer(node.named_children().next()?),
            "cast_expression" => Some(classify_type(node.child_by_field("type")?.text())),
            "unary_expression" => {
                let op = node.child_by_field("operator")?.kind();
                let operand = self.infer(node.child_by_field("operand")?);
                match op {
                    "!" => Some(Ty::Boolean),
                    "~" => Some(Ty::Integral),
                    _ => Some(promote(operand, operand)),
                }
            }
            "update_expression" => {
                let operand = node.named_children().next()?;
                Some(self.infer(operand).unwrap_or(Ty::Numeric))
            }
            "assignment_expression" => self.infer(node.child_by_field("left")?),
            "ternary_expression" => {
                let a = self.infer(node.child_by_field("consequence")?)?;
                let b = self.infer(node.child_by_field("alternative")?)?;
                if a == b {
                    Some(a)
                } else if a.is_numeric() && b.is_numeric() {
                    Some(promote(Some(a), Some(b)))
                } else {
                    None
                }
            }
            "method_invocation" => {
                if node.child_by_field("object").is_some() {
                    return None;
                }
                self.method_type(node.child_by_field("name")?.text()).map(classify_type)
            }
            "binary_expression" => {
                let op = node.child_by_field("operator")?.kind();
                let l = self.infer(node.child_by_field("left")?);
                let r = self.infer(node.child_by_field("right")?);
                match op {
                    "+" => {
                        if l == Some(Ty::Str) || r == Some(Ty::Str) {
                            Some(Ty::Str)
                        } else if l.is_some_and(Ty::is_numeric) && r.is_some_and(Ty::is_numeric) {
                            Some(promote(l, r))
                        } else {
                            None
                        }
                    }
                    "-" | "*" | "/" | "%" => Some(promote(l, r)),
                    "<<" | ">>" | ">>>" => Some(Ty::Integral),
                    "&" | "|" | "^" => {
                        if l == Some(Ty::Boolean) || r == Some(Ty::Boolean) {
                            Some(Ty::Boolean)
                        } else if l.is_some_and(Ty::is_numeric) || r.is_some_and(Ty::is_numeric) {
                            Some(Ty::Integral)
                        } else {
                            None
                        }
                    }
                    _ => Some(Ty::Boolean),
                }
            }
            "instanceof_expression" => Some(Ty::Boolean),
            "object_creation_expression" => {
                Some(classify_type(node.child_by_field("type")?.text())).filter(|t| *t == Ty::Str)
            }
            _ => None,
        }
    }

    pub fn is_numeric(&self, node: SyntaxNode<'_>) -> bool {
        self.infer(node).is_some_and(Ty::is_numeric)
    }

    /// Whether the value of `node` is consumed where only a number is legal,
    /// which rules out string concatenation for a `+` at `node`.
    pub fn in_numeric_context(&self, node: SyntaxNode<'_>) -> bool {
        let Some(parent) = node.parent() else { return false };
        match parent.kind() {
            "parenthesized_expression" => self.in_numeric_context(parent),
            "variable_declarator" if node.field() == Some("value") => parent
                .parent()
                .and_then(|decl| decl.child_by_field("type"))
                .is_some_and(|t| is_primitive_numeric(t.text()) && parent.child_by_field("dimensions").is_none()),
            "assignment_expression" if node.field() == Some("right") => {
                let op = parent.child_by_field("operator").map_or("", |o| o.kind());
                match op {
                    "=" => parent
                        .child_by_field("left")
                        .and_then(|l| self.infer(l))
                        .is_some_and(Ty::is_numeric),
                    "+=" => parent
                        .child_by_field("left")
                        .and_then(|l| self.infer(l))
                        .is_some_and(Ty::is_numeric),
                    _ => true,
                }
            }
            "binary_expression" => {
                let op = parent.child_by_field("operator").map_or("", |o| o.kind());
                match op {
                    "-" | "*" | "/" | "%" | "<" | ">" | "<=" | ">=" | "<<" | ">>" | ">>>" => true,
                    // an operand of a sum is numeric only if the sum is
                    "+" => self.in_numeric_context(parent),
                    _ => false,
                }
            }
            "unary_expression" => {
                let op = parent.child_by_field("operator").map_or("", |o| o.kind());
                matches!(op, "-" | "+" | "~")
            }
            "array_access" => node.field() == Some("index"),
            "dimensions_expr" => true,
            "cast_expression" => parent
                .child_by_field("type")
                .is_some_and(|t| is_primitive_numeric(t.text())),
            "return_statement" => enclosing_return_type(parent).is_some_and(|t| is_primitive_numeric(&t)),
            _ => false,
        }
    }
}

fn enclosing_return_type(node: SyntaxNode<'_>) -> Option<String> {
    for a in node.ancestors() {
        match a.kind() {
            "lambda_expression" | "class_body" => return None,
            "method_declaration" => {
                if a.child_by_field("dimensions").is_some() {
                    return None;
                }
                return a.child_by_field("type").map(|t| t.text().to_string());
            }
            _ => {}
        }
    }
    None
}
