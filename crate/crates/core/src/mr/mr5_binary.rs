use super::analysis::is_side_effect_free;
use super::rewrite::Rewriter;
use super::types::{Ty, TypeEnv};
use super::MrOutcome;
use crate::syntax::{SyntaxNode, SyntaxTree};

fn precedence(op: &str) -> u8 {
    match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => 0,
    }
}

fn op_of(node: SyntaxNode<'_>) -> Option<&'static str> {
    node.child_by_field("operator").map(|o| o.kind())
}

/// Whether `operand` needs parentheses as the right operand of `op`.
fn needs_parens_on_right(operand: SyntaxNode<'_>, op: &str) -> bool {
    match operand.kind() {
        "binary_expression" => op_of(operand).is_some_and(|o| precedence(o) <= precedence(op)),
        "ternary_expression" | "assignment_expression" | "lambda_expression"
        | "instanceof_expression" => true,
        _ => false,
    }
}

/// Operands that can follow a unary minus without parentheses.
fn is_primary(node: SyntaxNode<'_>) -> bool {
    matches!(
        node.kind(),
        "identifier"
            | "field_access"
            | "array_access"
            | "method_invocation"
            | "parenthesized_expression"
            | "this"
            | "decimal_integer_literal"
            | "hex_integer_literal"
            | "octal_integer_literal"
            | "binary_integer_literal"
            | "decimal_floating_point_literal"
            | "hex_floating_point_literal"
            | "character_literal"
    )
}

fn wrap_if(cond: bool, text: String) -> String {
    if cond { format!("({text})") } else { text }
}

pub(super) fn apply(tree: &SyntaxTree) -> MrOutcome {
    let env = TypeEnv::build(tree);
    let mut rw = Rewriter::new(tree);
    let candidates: Vec<SyntaxNode<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "binary_expression" && !n.in_error_region())
        .collect();
    for node in candidates.into_iter().rev() {
        let (Some(l), Some(op), Some(r)) = (node.child_by_field("left"), op_of(node), node.child_by_field("right"))
        else {
            continue;
        };
        let text = match op {
            "+" | "*" => {
                let numeric = op == "*"
                    || (env.is_numeric(l) && env.is_numeric(r))
                    || env.in_numeric_context(node);
                let string_lit = [l, r].iter().any(|x| x.kind() == "string_literal");
                if !numeric || string_lit || !is_side_effect_free(l) || !is_side_effect_free(r) {
                    continue;
                }
                let moved = wrap_if(needs_parens_on_right(l, op), rw.render(l));
                format!("{} {op} {moved}", rw.render(r))
            }
            "-" => {
                let negated = wrap_if(!is_primary(r), rw.render(r));
                format!("{} + (-{negated})", rw.render(l))
            }
            "/" => {
                let (lt, rt) = (env.infer(l), env.infer(r));
                let floating = lt.is_some_and(Ty::is_floating) || rt.is_some_and(Ty::is_floating);
                if !floating {
                    continue;
                }
                // float reciprocal keeps float arithmetic float; a double operand widens anyway
                let one = if lt == Some(Ty::Double) || rt == Some(Ty::Double) { "1.0" } else { "1.0f" };
                let divisor = wrap_if(needs_parens_on_right(r, "/"), rw.render(r));
                format!("{} * ({one} / {divisor})", rw.render(l))
            }
            _ => continue,
        };
        rw.replace(node, text);
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(tree.source(), text, sites, Default::default())
}
