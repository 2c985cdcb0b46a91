use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::analysis::{bodies, boundaries, Boundary};
use super::rewrite::{line_indent, statement_before, statement_before_close, Rewriter};
use super::{fresh_name, identifier_set, MrContext, MrOutcome};
use crate::syntax::SyntaxTree;

pub(super) const STREAM: u64 = 6;

pub(super) fn apply(tree: &SyntaxTree, ctx: &mut MrContext) -> MrOutcome {
    let src = tree.source();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    rng.set_stream(STREAM);
    let mut taken = identifier_set(src);
    let mut rw = Rewriter::new(tree);
    for body in bodies(tree, false) {
        let points = boundaries(&body, true);
        if points.is_empty() {
            continue;
        }
        let pick = points[rng.random_range(0..points.len())];
        let name = fresh_name("dummyVar", "", &mut ctx.dummy_counter, &taken);
        taken.insert(name.clone());
        let stmt = format!("int {name} = 0;");
        insert_statement(&mut rw, src, &body.statements(), pick, &stmt, false);
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(src, text, sites, Default::default())
}

/// Place `stmt` at a statement boundary, matching the surrounding layout.
pub(super) fn insert_statement(
    rw: &mut Rewriter<'_>,
    src: &str,
    stmts: &[crate::syntax::SyntaxNode<'_>],
    at: Boundary<'_>,
    stmt: &str,
    line_comment: bool,
) {
    match at {
        Boundary::Before(node) => {
            rw.insert_before(node, statement_before(src, node.start(), stmt, line_comment));
        }
        Boundary::BeforeClose(close) => {
            let body_indent = stmts.first().and_then(|s| line_indent(src, s.start()));
            rw.insert_before(close, statement_before_close(src, close.start(), stmt, line_comment, body_indent));
        }
        Boundary::After(last) => {
            let rest = &src[last.end()..];
            let newline_follows = rest.starts_with('\n') || rest.starts_with('\r');
            let text = if line_comment && !newline_follows {
                format!(" {stmt}\n")
            } else {
                format!(" {stmt}")
            };
            rw.insert_after(last, text);
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::mr::{apply_mr, MrContext, MrId};

    fn run(src: &str, seed: u64) -> String {
        apply_mr(MrId::DummyVariable, src, &mut MrContext::new(seed)).unwrap().text
    }

    #[test]
    fn lands_on_one_of_the_boundaries() {
        let allowed = [
            "void m(){ int dummyVar1 = 0; a(); b(); }",
            "void m(){ a(); int dummyVar1 = 0; b(); }",
            "void m(){ a(); b(); int dummyVar1 = 0; }",
        ];
        let mut seen = std::collections::HashSet::new();
        for seed in 0..64 {
            let out = run("void m(){ a(); b(); }", seed);
            assert!(allowed.contains(&out.as_str()), "{out}");
            assert_eq!(out, run("void m(){ a(); b(); }", seed));
            seen.insert(out);
        }
        assert_eq!(seen.len(), 3);
    }

    #[test]
    fn one_per_method_in_document_order() {
        let out = run("class A { void a(){ f(); } void b(){ g(); } }", 3);
        assert!(out.find("dummyVar1").unwrap() < out.find("dummyVar2").unwrap());
    }

    #[test]
    fn never_after_a_return() {
        for seed in 0..32 {
            let out = run("int m(){ a(); return 1; }", seed);
            assert!(!out.contains("return 1; int"), "{out}");
        }
    }

    #[test]
    fn interfaces_have_no_bodies() {
        let out = apply_mr(MrId::DummyVariable, "interface I { void m(); }", &mut MrContext::new(1)).unwrap();
        assert!(!out.applied);
    }

    #[test]
    fn keeps_indentation() {
        let src = "class A {\n    void m() {\n        a();\n    }\n}\n";
        let outs: std::collections::HashSet<String> = (0..16).map(|s| run(src, s)).collect();
        assert!(outs.contains("class A {\n    void m() {\n        int dummyVar1 = 0;\n        a();\n    }\n}\n"));
        assert!(outs.contains("class A {\n    void m() {\n        a();\n        int dummyVar1 = 0;\n    }\n}\n"));
    }
}
