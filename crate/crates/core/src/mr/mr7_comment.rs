use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::analysis::{bodies, boundaries};
use super::mr6_dummy_var::insert_statement;
use super::rewrite::Rewriter;
use super::{MrContext, MrOutcome};
use crate::syntax::SyntaxTree;

const STREAM: u64 = 7;

pub(super) const COMMENT_PREFIX: &str = "//This method was modified -";

pub(super) fn apply(tree: &SyntaxTree, ctx: &MrContext) -> MrOutcome {
    let src = tree.source();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    rng.set_stream(STREAM);
    let mut rw = Rewriter::new(tree);
    for body in bodies(tree, false) {
        let points = boundaries(&body, false);
        if points.is_empty() {
            // only possible for an empty snippet, which has no statements
            continue;
        }
        let pick = points[rng.random_range(0..points.len())];
        let mut bytes = [0u8; 16];
        rng.fill_bytes(&mut bytes);
        let id = uuid::Builder::from_random_bytes(bytes).into_uuid();
        let comment = format!("{COMMENT_PREFIX}{}", id.hyphenated());
        insert_statement(&mut rw, src, &body.statements(), pick, &comment, true);
    }
    let (text, sites) = rw.finish();
    MrOutcome::new(src, text, sites, Default::default())
}

#[cfg(test)]
mod tests {
    use crate::mr::{apply_mr, MrContext, MrId};
    use crate::syntax::parse_java;

    fn run(src: &str, seed: u64) -> String {
        apply_mr(MrId::AddingComments, src, &mut MrContext::new(seed)).unwrap().text
    }

    fn uuid_shaped(s: &str) -> bool {
        let groups: Vec<&str> = s.split('-').collect();
        groups.iter().map(|g| g.len()).collect::<Vec<_>>() == [8, 4, 4, 4, 12]
            && groups.iter().all(|g| g.chars().all(|c| c.is_ascii_hexdigit()))
            && groups[2].starts_with('4')
    }

    #[test]
    fn inserts_comment_with_uuid() {
        let out = run("void m(){ a(); }", 11);
        let start = out.find("//This method was modified -").unwrap();
        let tail = &out[start + "//This method was modified -".len()..];
        let id = &tail[..36];
        assert!(uuid_shaped(id), "{id}");
        assert!(
            out == format!("void m(){{ //This method was modified -{id}\na(); }}")
                || out == format!("void m(){{ a(); //This method was modified -{id}\n}}"),
            "{out}"
        );
    }

    #[test]
    fn empty_body_gets_comment() {
        let out = run("void m(){}", 2);
        assert!(out.starts_with("void m(){//This method was modified -"));
        assert!(out.ends_with("\n}"));
        assert!(!parse_java(&out).unwrap().has_errors());
    }

    #[test]
    fn deterministic_per_seed() {
        let src = "class A { void m(){ a(); b(); } void n(){ c(); } }";
        assert_eq!(run(src, 5), run(src, 5));
        assert_ne!(run(src, 5), run(src, 6));
    }

    #[test]
    fn snippet_tail_comment_is_terminated() {
        for seed in 0..16 {
            let out = run("int x = 1; x++;", seed);
            assert!(!parse_java(&out).unwrap().has_errors(), "{out}");
            assert!(out.contains("x++;"));
        }
    }
}
