use super::analysis::is_side_effect_free;
use super::rewrite::Rewriter;
use super::MrOutcome;
use crate::syntax::{SyntaxNode, SyntaxTree};

/// Parentheses that belong to a statement header rather than the expression.
fn is_header_parens(paren: SyntaxNode<'_>) -> bool {
    paren.field() == Some("condition")
        && paren.parent().is_some_and(|p| {
            matches!(
                p.kind(),
                "if_statement" | "while_statement" | "do_statement" | "switch_expression" | "switch_statement"
            )
        })
        || paren.parent().is_some_and(|p| p.kind() == "synchronized_statement")
}

fn already_parenthesized(node: SyntaxNode<'_>) -> bool {
    node.parent()
        .is_some_and(|p| p.kind() == "parenthesized_expression" && !is_header_parens(p))
}

pub(super) fn apply(tree: &SyntaxTree) -> MrOutcome {
    let mut rw = Rewriter::new(tree);
    let candidates: Vec<SyntaxNode<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "binary_expression" && !n.in_error_region())
        .collect();
    for node in candidates.into_iter().rev() {
        let (Some(l), Some(op), Some(r)) = (
            node.child_by_field("left"),
            node.child_by_field("operator"),
            node.child_by_field("right"),
        ) else {
            continue;
        };
        match op.kind() {
            ">" | "<" if is_side_effect_free(l) && is_side_effect_free(r) => {
                let flipped = if op.kind() == ">" { "<" } else { ">" };
                let text = format!("{} {} {}", rw.render(r), flipped, rw.render(l));
                rw.replace(node, text);
            }
            "&&" | "||" if !already_parenthesized(node) => {
                let text = format!("({})", rw.render(node));
                rw.replace(node, text);
            }
            _ => {}
        }
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(tree.source(), text, sites, Default::default())
}

#[cfg(test)]
mod tests {
    use crate::mr::{apply_mr, MrContext, MrId};

    fn run(src: &str) -> String {
        apply_mr(MrId::ConditionalExpression, src, &mut MrContext::new(0)).unwrap().text
    }

    #[test]
    fn flips_comparisons() {
        assert_eq!(run("if (a > 0) f();"), "if (0 < a) f();");
        assert_eq!(run("b = a < b;"), "b = b > a;");
        assert_eq!(run("b = x.f[i] > -y;"), "b = -y < x.f[i];");
        assert_eq!(run("b = a <= b;"), "b = a <= b;");
    }

    #[test]
    fn effectful_operands_stay_put() {
        assert_eq!(run("if (f() > 0) g();"), "if (f() > 0) g();");
        assert_eq!(run("if (i++ < n) g();"), "if (i++ < n) g();");
    }

    #[test]
    fn logical_operators_get_parentheses_once() {
        assert_eq!(run("if (a && b) f();"), "if ((a && b)) f();");
        assert_eq!(run("x = (a || b);"), "x = (a || b);");
        assert_eq!(run("x = a && b || c;"), "x = ((a && b) || c);");
        assert_eq!(run("while (p && q) f();"), "while ((p && q)) f();");
    }

    #[test]
    fn nested_flip_inside_logical() {
        assert_eq!(run("if (a > 0 && b < 1) f();"), "if ((0 < a && 1 > b)) f();");
    }
}
