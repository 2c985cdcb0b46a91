//! Seeded generator of small, well-formed Java classes.
//!
//! Shared by the core property tests and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand::seq::IndexedRandom;
use rand_chacha::ChaCha8Rng;

const NAMES: &[&str] = &["x", "y", "sum", "count", "value", "tmp", "acc", "n", "total_var1", "idx", "lo", "hi"];

struct Gen {
    rng: ChaCha8Rng,
    out: String,
    helpers: Vec<(String, usize)>,
}

impl Gen {
    fn pick<'a>(&mut self, xs: &'a [String]) -> &'a str {
        xs.choose(&mut self.rng).expect("non-empty")
    }

    fn int_expr(&mut self, locals: &[String]) -> String {
        let a = self.pick(locals).to_string();
        let k = self.rng.random_range(1..10);
        match self.rng.random_range(0..6) {
            0 => k.to_string(),
            1 => a,
            2 => format!("{a} + {k}"),
            3 => {
                let b = self.pick(locals).to_string();
                format!("{a} - {b}")
            }
            4 => format!("({a} * {k})"),
            _ => match self.helpers.choose(&mut self.rng).cloned() {
                Some((h, arity)) => {
                    let args: Vec<String> = (0..arity).map(|_| self.pick(locals).to_string()).collect();
                    format!("{h}({})", args.join(", "))
                }
                None => format!("{a} % {k}"),
            },
        }
    }

    fn fresh(&mut self, locals: &[String]) -> Option<String> {
        let free: Vec<&str> = NAMES.iter().copied().filter(|n| !locals.iter().any(|l| l == n)).collect();
        free.choose(&mut self.rng).map(|s| s.to_string())
    }

    fn statement(&mut self, locals: &mut Vec<String>, indent: &str, fresh_no: &mut u32) {
        let choice = self.rng.random_range(0..11);
        let a = self.pick(locals).to_string();
        let line = match choice {
            0 => match self.fresh(locals) {
                Some(name) => {
                    let e = self.int_expr(locals);
                    locals.push(name.clone());
                    format!("int {name} = {e};")
                }
                None => format!("{a}++;"),
            },
            1 => {
                let e = self.int_expr(locals);
                format!("{a} = {a} + {e};")
            }
            2 => {
                let k = self.rng.random_range(2..5);
                format!("{a} = {k} * {a};")
            }
            3 => {
                let b = self.pick(locals).to_string();
                let k = self.rng.random_range(0..5);
                let op = if self.rng.random_bool(0.5) { "&&" } else { "||" };
                let inner = format!("{indent}    {a}++;\n");
                format!("if ({a} < {b} {op} {b} > {k}) {{\n{inner}{indent}}} else {{\n{indent}    {a}--;\n{indent}}}")
            }
            4 => {
                *fresh_no += 1;
                let i = format!("i{fresh_no}");
                let k = self.rng.random_range(1..6);
                format!("for (int {i} = 0; {i} < {k}; {i}++) {{\n{indent}    {a} += {i};\n{indent}}}")
            }
            5 => {
                let k = self.rng.random_range(2..9);
                *fresh_no += 1;
                format!("double d{fresh_no} = {a} / {k}.0;")
            }
            6 => {
                *fresh_no += 1;
                format!("String s{fresh_no} = \"{a}=\" + {a};")
            }
            7 => format!("// adjust {a} before use"),
            8 => {
                let k = self.rng.random_range(10..50);
                format!("while ({a} > {k}) {{\n{indent}    {a} = {a} - 1;\n{indent}}}")
            }
            9 => {
                let b = self.pick(locals).to_string();
                format!("{a} = {a} - {b};")
            }
            _ => {
                let e = self.int_expr(locals);
                format!("{a} = {e};")
            }
        };
        self.out.push_str(indent);
        self.out.push_str(&line);
        self.out.push('\n');
    }

    fn method(&mut self, no: usize) {
        let arity = self.rng.random_range(1..4);
        let params: Vec<String> = NAMES.iter().take(arity).map(|s| s.to_string()).collect();
        let name = ["compute", "step", "mix", "scale"][no % 4].to_string() + &no.to_string();
        let sig: Vec<String> = params.iter().map(|p| format!("int {p}")).collect();
        self.out.push_str(&format!("    static int {name}({}) {{\n", sig.join(", ")));
        let mut locals = params.clone();
        let mut fresh_no = 0;
        for _ in 0..self.rng.random_range(1..7) {
            self.statement(&mut locals, "        ", &mut fresh_no);
        }
        let ret = self.pick(&locals).to_string();
        self.out.push_str(&format!("        return {ret};\n    }}\n\n"));
        self.helpers.push((name, arity));
    }
}

/// A class with a few static helpers and a `main` that calls them.
pub fn program(seed: u64) -> String {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), out: String::new(), helpers: Vec::new() };
    g.out.push_str(&format!("class Gen{} {{\n", seed % 1000));
    for no in 0..g.rng.random_range(1..4) {
        g.method(no);
    }
    g.out.push_str("    public static void main(String[] args) {\n");
    let calls: Vec<(String, usize)> = g.helpers.clone();
    for (i, (h, arity)) in calls.iter().enumerate() {
        let args: Vec<String> = (0..*arity).map(|k| (i + k + 1).to_string()).collect();
        g.out.push_str(&format!("        System.out.println({h}({}));\n", args.join(", ")));
    }
    g.out.push_str("    }\n}\n");
    g.out
}
