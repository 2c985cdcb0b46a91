use super::analysis::{completion, mentions, Completion};
use super::rewrite::{line_indent, statement_before_close, Rewriter};
use super::MrOutcome;
use crate::syntax::{SyntaxNode, SyntaxTree};

/// An unlabeled `continue` that would jump to this loop's update.
fn has_own_continue(body: SyntaxNode<'_>) -> bool {
    fn walk(n: SyntaxNode<'_>) -> bool {
        match n.kind() {
            "continue_statement" => n.named_children().next().is_none(),
            "for_statement" | "enhanced_for_statement" | "while_statement" | "do_statement"
            | "lambda_expression" | "class_body" => false,
            _ => n.children().any(walk),
        }
    }
    walk(body)
}

fn declared_names<'t>(init: &[SyntaxNode<'t>]) -> Vec<&'t str> {
    init.iter()
        .filter(|n| n.kind() == "local_variable_declaration")
        .flat_map(|d| d.children_by_field("declarator"))
        .filter_map(|d| d.child_by_field("name").map(|n| n.text()))
        .collect()
}

/// Names declared directly in a block body.
fn body_locals<'t>(body: SyntaxNode<'t>) -> Vec<&'t str> {
    body.children()
        .filter(|c| c.kind() == "local_variable_declaration")
        .flat_map(|d| d.children_by_field("declarator"))
        .filter_map(|d| d.child_by_field("name").map(|n| n.text()))
        .collect()
}

fn convertible(lp: SyntaxNode<'_>) -> bool {
    if lp.in_error_region() || lp.parent().is_some_and(|p| p.kind() == "labeled_statement") {
        return false;
    }
    let Some(body) = lp.child_by_field("body") else { return false };
    if has_own_continue(body) {
        return false;
    }
    let has_update = lp.child_by_field("update").is_some();
    !has_update || completion(body) == Completion::Normal
}

pub(super) fn apply(tree: &SyntaxTree) -> MrOutcome {
    let src = tree.source();
    let mut rw = Rewriter::new(tree);
    let loops: Vec<SyntaxNode<'_>> = tree
        .descendants()
        .filter(|n| n.kind() == "for_statement")
        .collect();
    for lp in loops.into_iter().rev() {
        if !convertible(lp) {
            continue;
        }
        let body = lp.child_by_field("body").expect("checked in convertible");
        let init: Vec<SyntaxNode<'_>> = lp.children_by_field("init").collect();
        let updates: Vec<String> = lp
            .children_by_field("update")
            .map(|u| format!("{};", rw.render(u)))
            .collect();
        let cond = lp.child_by_field("condition").map_or_else(|| "true".to_string(), |c| rw.render(c));

        let update_names_clash = body.kind() == "block"
            && lp
                .children_by_field("update")
                .any(|u| body_locals(body).iter().any(|name| mentions(u, name)));
        let body_text = if updates.is_empty() {
            if body.kind() == "block" { rw.render(body) } else { format!("{{ {} }}", rw.render(body)) }
        } else if body.kind() == "block" && !update_names_clash {
            let close = body.children().last().filter(|c| c.kind() == "}");
            match close {
                Some(close) => {
                    let first = body.named_children().next();
                    let indent = first.and_then(|f| line_indent(src, f.start()));
                    let text = statement_before_close(src, close.start(), &updates.join(" "), false, indent);
                    rw.insert_before(close, text);
                    rw.render(body)
                }
                None => continue,
            }
        } else {
            format!("{{ {} {} }}", rw.render(body), updates.join(" "))
        };

        let while_text = format!("while ({cond}) {body_text}");
        let init_text = match init.first() {
            None => String::new(),
            Some(d) if d.kind() == "local_variable_declaration" => rw.render(*d),
            Some(_) => init.iter().map(|e| format!("{};", rw.render(*e))).collect::<Vec<_>>().join(" "),
        };
        let text = if init_text.is_empty() {
            while_text
        } else {
            // Keep a one-line loop on one line.
            let own_line = src[..lp.start()].contains('\n');
            let sep = match line_indent(src, lp.start()) {
                Some(indent) if own_line => format!("\n{indent}"),
                _ => " ".to_string(),
            };
            let parent = lp.parent();
            let names = declared_names(&init);
            let sequence_ok = parent.is_some_and(|p| matches!(p.kind(), "block" | "program" | "constructor_body"));
            let clash = parent.is_some_and(|p| {
                p.descendants().any(|n| {
                    n.kind() == "identifier"
                        && names.contains(&n.text())
                        && (n.end() <= lp.start() || n.start() >= lp.end())
                })
            });
            if sequence_ok && !clash {
                format!("{init_text}{sep}{while_text}")
            } else {
                format!("{{ {init_text}{sep}{while_text} }}")
            }
        };
        rw.replace(lp, text);
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(src, text, sites, Default::default())
}

#[cfg(test)]
mod tests {
    use crate::mr::{apply_mr, MrContext, MrId};

    fn run(src: &str) -> String {
        apply_mr(MrId::ForToWhileLoop, src, &mut MrContext::new(0)).unwrap().text
    }

    #[test]
    fn basic_loop() {
        assert_eq!(
            run("for (int i = 0; i < 10; i++) { sum += i; }"),
            "int i = 0; while (i < 10) { sum += i; i++; }"
        );
    }

    #[test]
    fn missing_condition_is_true() {
        assert_eq!(run("for(;;) {}"), "while (true) {}");
    }

    #[test]
    fn continue_blocks_conversion() {
        let src = "for(int i=0;i<n;i++){ if(p) continue; s(); }";
        assert_eq!(run(src), src);
        // a continue of an inner loop is fine
        let out = run("for(int i=0;i<n;i++){ while(q) { continue; } }");
        assert!(out.starts_with("int i=0; while (i<n)"));
    }

    #[test]
    fn labeled_loops_are_skipped() {
        let src = "L: for(int i=0;i<n;i++){ s(); }";
        assert_eq!(run(src), src);
    }

    #[test]
    fn single_statement_body_gets_braces() {
        assert_eq!(
            run("void m(){ for (i = 0, j = 1; i < n; i++, j--) f(i, j); }"),
            "void m(){ i = 0; j = 1; while (i < n) { f(i, j); i++; j--; } }"
        );
    }

    #[test]
    fn reused_loop_variable_gets_own_block() {
        assert_eq!(
            run("void m(){ for (int i = 0; i < 2; i++) {} for (int i = 0; i < 3; i++) {} }"),
            "void m(){ { int i = 0; while (i < 2) {i++; } } { int i = 0; while (i < 3) {i++; } } }"
        );
    }

    #[test]
    fn nested_loops_both_convert() {
        let out = run("void m(){ for (int i = 0; i < 2; i++) { for (int j = 0; j < 2; j++) { f(); } } }");
        assert_eq!(
            out,
            "void m(){ int i = 0; while (i < 2) { int j = 0; while (j < 2) { f(); j++; } i++; } }"
        );
    }

    #[test]
    fn multiline_layout() {
        let src = "void m() {\n    for (int i = 0; i < n; i++) {\n        f(i);\n    }\n}";
        assert_eq!(
            run(src),
            "void m() {\n    int i = 0;\n    while (i < n) {\n        f(i);\n        i++;\n    }\n}"
        );
    }

    #[test]
    fn body_that_cannot_complete_is_skipped() {
        let src = "for (int i = 0; i < n; i++) { return; }";
        assert_eq!(run(src), src);
    }
}
