use super::analysis::is_side_effect_free;
use super::rewrite::Rewriter;
use super::types::{Ty, TypeEnv};
use super::MrOutcome;
use crate::syntax::{lexer, SyntaxNode, SyntaxTree};

fn same_tokens(a: SyntaxNode<'_>, b: SyntaxNode<'_>) -> bool {
    lexer::token_texts(a.text()) == lexer::token_texts(b.text())
}

fn is_assignable_target(node: SyntaxNode<'_>) -> bool {
    matches!(node.kind(), "identifier" | "field_access" | "array_access") && is_side_effect_free(node)
}

pub(super) fn apply(tree: &SyntaxTree) -> MrOutcome {
    let env = TypeEnv::build(tree);
    let mut rw = Rewriter::new(tree);
    let candidates: Vec<SyntaxNode<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "assignment_expression" && !n.in_error_region())
        .collect();
    // Reverse document order rewrites inner assignments first.
    for assign in candidates.into_iter().rev() {
        let (Some(target), Some(op), Some(value)) = (
            assign.child_by_field("left"),
            assign.child_by_field("operator"),
            assign.child_by_field("right"),
        ) else {
            continue;
        };
        if op.kind() != "=" || value.kind() != "binary_expression" || !is_assignable_target(target) {
            continue;
        }
        let target_ty = env.infer(target);
        if target_ty == Some(Ty::Str) {
            continue;
        }
        let (Some(l), Some(bop), Some(r)) = (
            value.child_by_field("left"),
            value.child_by_field("operator"),
            value.child_by_field("right"),
        ) else {
            continue;
        };
        let bop = bop.kind();
        if !matches!(bop, "+" | "-" | "*" | "/") {
            continue;
        }
        let operand = if same_tokens(l, target) {
            r
        } else if matches!(bop, "+" | "*")
            && same_tokens(r, target)
            && is_side_effect_free(l)
            && (bop == "*" || target_ty.is_some_and(Ty::is_numeric))
        {
            l
        } else {
            continue;
        };
        let text = format!("{} {}= {}", rw.render(target), bop, rw.render(operand));
        rw.replace(assign, text);
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(tree.source(), text, sites, Default::default())
}

#[cfg(test)]
mod tests {
    use crate::mr::{apply_mr, MrContext, MrId};

    fn run(src: &str) -> String {
        apply_mr(MrId::AssignExpression, src, &mut MrContext::new(0)).unwrap().text
    }

    #[test]
    fn both_forms() {
        assert_eq!(run("x = x + y;"), "x += y;");
        assert_eq!(run("x = y * x;"), "x *= y;");
        assert_eq!(run("a[i] = a[i] / 2;"), "a[i] /= 2;");
        assert_eq!(run("this.n = this.n - k;"), "this.n -= k;");
    }

    #[test]
    fn not_applicable() {
        assert_eq!(run("x = y + z;"), "x = y + z;");
        assert_eq!(run("x = y - x;"), "x = y - x;");
        assert_eq!(run("a[i++] = a[i++] + 1;"), "a[i++] = a[i++] + 1;");
        // commuted sum needs a provably numeric target
        assert_eq!(run("x = y + x;"), "x = y + x;");
        assert_eq!(run("int x = 0; x = y + x;"), "int x = 0; x += y;");
    }

    #[test]
    fn string_targets_are_skipped() {
        assert_eq!(run("String s = \"\"; s = s + t;"), "String s = \"\"; s = s + t;");
    }

    #[test]
    fn right_operand_keeps_its_grouping() {
        assert_eq!(run("x = x - (a - b);"), "x -= (a - b);");
        assert_eq!(run("x = x * y + z;"), "x = x * y + z;");
    }
}
