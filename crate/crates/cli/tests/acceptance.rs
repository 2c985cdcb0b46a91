//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.
//!
//! The semantic tier needs a Java toolchain: `javac` on PATH, or
//! `MORPHREPAIR_JAVA` plus `MORPHREPAIR_JANINO_CP` (janino and
//! commons-compiler jars). Without one it is skipped.

#[path = "../../core/tests/common/javagen.rs"]
mod javagen;

use std::collections::BTreeMap;
use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use morphrepair_core::harness::{reverse_rename, AttemptRecord, Outcome};
use morphrepair_core::metrics::{edit_distance, group_metrics, r_score, read_csv, spearman, ErrorPolicy, GroupKey};
use morphrepair_core::mr::{apply_mr, MrContext, MrId};
use morphrepair_core::mutant::{
    detect_applicable, enumerate_combos, generate_mutant, BaseSample, ComboSpec, MutantStore, PerturbationList,
};
use morphrepair_core::syntax::lexer::token_texts;
use morphrepair_core::syntax::text_differs;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned tolerances and budgets.
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const SEMANTIC_BUDGET: Duration = Duration::from_secs(300);
const SEMANTIC_MULTI: usize = 100;
const CORPUS_MIN: usize = 25;
const CAP: usize = 20;
const ROUND_TRIP_PROGRAMS: u64 = 200;
const R_SCORE_TOL: f64 = 0.0005;
const EDIT_PAIRS: usize = 1000;
const SPEARMAN_VECTORS: usize = 100;
const SPEARMAN_TOL: f64 = 1e-9;
const E2E_BUDGET: Duration = Duration::from_secs(30);

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn squash(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

// ---------------------------------------------------------------- golden

fn golden() -> Check {
    let start = Instant::now();
    let exact: &[(MrId, &str, &str)] = &[
        (MrId::VariableRenaming, "void m() { int x = 1; x++; }", "void m() { int x_var1 = 1; x_var1++; }"),
        (
            MrId::VariableRenaming,
            "int m() { int x=1; int y=2; return x+y; }",
            "int m() { int x_var1=1; int y_var2=2; return x_var1+y_var2; }",
        ),
        (
            MrId::MethodRenaming,
            "int calculate() { return 1; }\nint twice() { return calculate() * 2; }",
            "int calculateMethod1() { return 1; }\nint twiceMethod2() { return calculateMethod1() * 2; }",
        ),
        (MrId::AssignExpression, "void m(int x, int y) { x = x + y; }", "void m(int x, int y) { x += y; }"),
        (MrId::AssignExpression, "void m(int x, int y) { x = y * x; }", "void m(int x, int y) { x *= y; }"),
        (MrId::ConditionalExpression, "void m(int a) { if (a > 0) { a++; } }", "void m(int a) { if (0 < a) { a++; } }"),
        (MrId::ConditionalExpression, "boolean m(int a, int b) { return a < b; }", "boolean m(int a, int b) { return b > a; }"),
        (MrId::BinaryExpression, "int m(int a, int b) { return a - b; }", "int m(int a, int b) { return a + (-b); }"),
        (MrId::BinaryExpression, "int m(int a, int b) { return a + b; }", "int m(int a, int b) { return b + a; }"),
        (MrId::VariableDeclaration, "void m() { foo(); int x = 5; }", "void m() { int x; foo(); x = 5; }"),
        (
            MrId::VariableDeclaration,
            "void m(boolean c) { while (c) { int t = g(); use(t); } }",
            "void m(boolean c) { while (c) { int t; t = g(); use(t); } }",
        ),
        (
            MrId::ForToWhileLoop,
            "void m() { for (int i = 0; i < 10; i++) { a(); } }",
            "void m() { int i = 0; while (i < 10) { a(); i++; } }",
        ),
        (MrId::ForToWhileLoop, "void m() { for (;;) {} }", "void m() { while (true) {} }"),
    ];
    let unchanged: &[(MrId, &str)] = &[
        (MrId::MethodRenaming, "public static void main(String[] a) {}"),
        (MrId::AssignExpression, "void m(int x, int y, int z) { x = y + z; }"),
        (MrId::BinaryExpression, "String m(String t) { return \"s\" + t; }"),
        (MrId::BinaryExpression, "int m() { return 5 / 2; }"),
        (MrId::VariableDeclaration, "void m() { int x; }"),
    ];
    for &(mr, src, want) in exact {
        let out = apply_mr(mr, src, &mut MrContext::new(1)).map_err(|e| e.to_string())?;
        ensure(out.applied && squash(&out.text) == squash(want), || {
            format!("{mr:?} on `{src}` gave `{}`, expected `{want}`", out.text)
        })?;
    }
    for &(mr, src) in unchanged {
        let out = apply_mr(mr, src, &mut MrContext::new(1)).map_err(|e| e.to_string())?;
        ensure(!out.applied && out.text == src, || format!("{mr:?} changed `{src}` to `{}`", out.text))?;
    }

    // Seeded position: one of three boundaries, the same one every time.
    let src = "void m(){ a(); b(); }";
    let options = [
        "void m(){ int dummyVar1 = 0; a(); b(); }",
        "void m(){ a(); int dummyVar1 = 0; b(); }",
        "void m(){ a(); b(); int dummyVar1 = 0; }",
    ];
    for seed in 0..16 {
        let a = apply_mr(MrId::DummyVariable, src, &mut MrContext::new(seed)).map_err(|e| e.to_string())?;
        let b = apply_mr(MrId::DummyVariable, src, &mut MrContext::new(seed)).map_err(|e| e.to_string())?;
        ensure(a == b && options.iter().any(|o| squash(o) == squash(&a.text)), || {
            format!("dummy variable insertion gave `{}`", a.text)
        })?;
    }
    let two = apply_mr(MrId::DummyVariable, "void f(){ a(); }\nvoid g(){ b(); }", &mut MrContext::new(3))
        .map_err(|e| e.to_string())?;
    let (p1, p2) = (two.text.find("dummyVar1"), two.text.find("dummyVar2"));
    ensure(matches!((p1, p2), (Some(a), Some(b)) if a < b), || format!("two methods gave `{}`", two.text))?;

    let out = apply_mr(MrId::AddingComments, "void m(){ a(); }", &mut MrContext::new(5)).map_err(|e| e.to_string())?;
    let marker = "//This method was modified -";
    let at = out.text.find(marker).ok_or_else(|| format!("no comment in `{}`", out.text))?;
    let uuid: String = out.text[at + marker.len()..].chars().take(36).collect();
    ensure(is_uuid(&uuid), || format!("`{uuid}` is not a UUID"))?;
    let rest = squash(&out.text.replacen(&format!("{marker}{uuid}"), "", 1));
    ensure(rest == squash("void m(){ a(); }"), || format!("comment insertion also changed code: `{}`", out.text))?;
    let empty = apply_mr(MrId::AddingComments, "void m(){}", &mut MrContext::new(5)).map_err(|e| e.to_string())?;
    ensure(empty.applied && empty.text.contains(marker), || format!("empty body gave `{}`", empty.text))?;

    let took = start.elapsed();
    ensure(took < GOLDEN_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{} rewrites, {} refusals, insertions checked in {took:.2?}", exact.len(), unchanged.len()))
}

fn is_uuid(s: &str) -> bool {
    s.len() == 36
        && s.char_indices().all(|(i, c)| match i {
            8 | 13 | 18 | 23 => c == '-',
            _ => c.is_ascii_hexdigit(),
        })
}

// ---------------------------------------------------------------- semantic

enum Toolchain {
    Javac { javac: PathBuf, java: PathBuf },
    Janino { java: PathBuf, classpath: String },
}

fn on_path(name: &str) -> Option<PathBuf> {
    env::split_paths(&env::var_os("PATH")?).map(|d| d.join(name)).find(|p| p.is_file())
}

fn toolchain() -> Option<Toolchain> {
    if let Some(javac) = on_path("javac") {
        let java = javac.with_file_name("java");
        let java = if java.is_file() { java } else { on_path("java")? };
        return Some(Toolchain::Javac { javac, java });
    }
    let java = PathBuf::from(env::var_os("MORPHREPAIR_JAVA")?);
    let classpath = env::var("MORPHREPAIR_JANINO_CP").ok()?;
    java.is_file().then_some(Toolchain::Janino { java, classpath })
}

impl Toolchain {
    fn java(&self) -> &Path {
        match self {
            Toolchain::Javac { java, .. } | Toolchain::Janino { java, .. } => java,
        }
    }

    fn compile(&self, out: &Path, files: &[PathBuf]) -> Result<(), String> {
        let mut cmd = match self {
            Toolchain::Javac { javac, .. } => {
                let mut c = Command::new(javac);
                c.arg("-nowarn").arg("-d").arg(out);
                c
            }
            Toolchain::Janino { java, classpath } => {
                let mut c = Command::new(java);
                c.args(["-cp", classpath, "org.codehaus.commons.compiler.samples.CompilerDemo", "-d"]).arg(out);
                c
            }
        };
        cmd.args(files);
        let (ok, text) = run(&mut cmd, Duration::from_secs(240))?;
        if ok { Ok(()) } else { Err(tail(&text, 8)) }
    }
}

fn tail(text: &str, n: usize) -> String {
    let lines: Vec<&str> = text.lines().collect();
    lines[lines.len().saturating_sub(n)..].join("\n")
}

/// Runs to completion or kills the child after `limit`. Returns (success, stdout+stderr).
fn run(cmd: &mut Command, limit: Duration) -> Result<(bool, String), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let log = dir.path().join("log");
    let file = fs::File::create(&log).map_err(|e| e.to_string())?;
    let err = file.try_clone().map_err(|e| e.to_string())?;
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(file)
        .stderr(err)
        .spawn()
        .map_err(|e| format!("spawn: {e}"))?;
    let deadline = Instant::now() + limit;
    let status = loop {
        if let Some(s) = child.try_wait().map_err(|e| e.to_string())? {
            break s;
        }
        if Instant::now() > deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Err(format!("timed out after {limit:?}"));
        }
        std::thread::sleep(Duration::from_millis(20));
    };
    Ok((status.success(), fs::read_to_string(&log).unwrap_or_default()))
}

const RUNNER: &str = r#"public class Runner {
    public static void main(String[] args) throws Exception {
        int failed = 0;
        for (int i = 0; i < args.length; i++) {
            try {
                Class c = Class.forName(args[i]);
                java.lang.reflect.Method m = c.getMethod("main", new Class[] { String[].class });
                m.invoke(null, new Object[] { new String[0] });
                System.out.println("RESULT PASS " + args[i]);
            } catch (java.lang.reflect.InvocationTargetException e) {
                failed++;
                System.out.println("RESULT FAIL " + args[i] + " " + e.getCause());
            }
        }
        System.exit(failed == 0 ? 0 : 1);
    }
}
"#;

struct Case {
    label: String,
    text: String,
}

fn corpus() -> Result<Vec<(String, BaseSample)>, String> {
    let root = fixtures().join("corpus");
    let mut out = Vec::new();
    for entry in fs::read_dir(&root).map_err(|e| format!("{}: {e}", root.display()))? {
        let dir = entry.map_err(|e| e.to_string())?.path();
        let file = dir.join("Main.java");
        if file.is_file() {
            let name = dir.file_name().unwrap().to_string_lossy().into_owned();
            let src = fs::read_to_string(&file).map_err(|e| e.to_string())?;
            out.push((name.clone(), BaseSample::new(name, &src)));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn semantic() -> Result<Verdict, String> {
    let start = Instant::now();
    let programs = corpus()?;
    if programs.len() < CORPUS_MIN {
        return Ok(Verdict::Fail(format!("corpus has {} programs, need {CORPUS_MIN}", programs.len())));
    }
    let Some(tc) = toolchain() else {
        return Ok(Verdict::Skip("no javac on PATH and MORPHREPAIR_JAVA/MORPHREPAIR_JANINO_CP unset".into()));
    };

    let mut cases = Vec::new();
    let mut lists = Vec::new();
    for (name, s) in &programs {
        cases.push(Case { label: format!("{name} (original)"), text: s.source.clone() });
        let list = detect_applicable(s, 11).map_err(|e| e.to_string())?;
        for &mr in &list.applicable {
            let combo = ComboSpec::new(vec![mr]).unwrap();
            let m = generate_mutant(s, &combo, 11).map_err(|e| e.to_string())?;
            cases.push(Case { label: format!("{name} {combo}"), text: m.text });
        }
        lists.push((s, list.applicable));
    }
    let singles = cases.len() - programs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut multi = 0;
    while multi < SEMANTIC_MULTI {
        let (s, applicable) = lists.choose(&mut rng).unwrap();
        let ids: Vec<MrId> = applicable.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if ids.len() < 2 {
            continue;
        }
        let combo = ComboSpec::new(ids).unwrap();
        let seed: u64 = rng.random_range(0..1_000_000);
        let m = generate_mutant(s, &combo, seed).map_err(|e| e.to_string())?;
        cases.push(Case { label: format!("{} {combo} s{seed}", s.id), text: m.text });
        multi += 1;
    }

    let failures = run_java_cases(&tc, &cases)?;
    let took = start.elapsed();
    if !failures.is_empty() {
        let shown: Vec<_> = failures.iter().take(5).cloned().collect();
        return Ok(Verdict::Fail(format!("{} of {} failed: {}", failures.len(), cases.len(), shown.join("; "))));
    }
    if took > SEMANTIC_BUDGET {
        return Ok(Verdict::Fail(format!("took {took:?}")));
    }
    Ok(Verdict::Pass(format!(
        "{} programs, {singles} single-relation and {multi} multi-relation mutants compiled and passed in {took:.1?}",
        programs.len()
    )))
}

/// Compiles every case under its own class name and runs all of them in one
/// JVM. Returns labels of the failures.
fn run_java_cases(tc: &Toolchain, cases: &[Case]) -> Result<Vec<String>, String> {
    let work = tempfile::tempdir().map_err(|e| e.to_string())?;
    let src = work.path().join("src");
    let classes = work.path().join("classes");
    fs::create_dir_all(&src).map_err(|e| e.to_string())?;
    fs::create_dir_all(&classes).map_err(|e| e.to_string())?;
    let mut files = Vec::new();
    let mut names = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let class = format!("Case{i}");
        let text = case.text.replacen("class Main ", &format!("class {class} "), 1);
        if text == case.text {
            return Err(format!("{}: no `class Main`", case.label));
        }
        let path = src.join(format!("{class}.java"));
        fs::write(&path, text).map_err(|e| e.to_string())?;
        files.push(path);
        names.push(class);
    }
    let runner = src.join("Runner.java");
    fs::write(&runner, RUNNER).map_err(|e| e.to_string())?;

    let mut failures = Vec::new();
    let mut runnable = Vec::new();
    let mut all = files.clone();
    all.push(runner.clone());
    if tc.compile(&classes, &all).is_ok() {
        runnable = (0..cases.len()).collect();
    } else {
        // Find the culprits one file at a time.
        tc.compile(&classes, std::slice::from_ref(&runner)).map_err(|e| format!("runner: {e}"))?;
        for (i, f) in files.iter().enumerate() {
            match tc.compile(&classes, std::slice::from_ref(f)) {
                Ok(()) => runnable.push(i),
                Err(e) => failures.push(format!("{} does not compile: {e}", cases[i].label)),
            }
        }
    }
    let mut cmd = Command::new(tc.java());
    cmd.arg("-cp").arg(&classes).arg("Runner");
    cmd.args(runnable.iter().map(|&i| &names[i]));
    let (_, log) = run(&mut cmd, Duration::from_secs(240))?;
    let mut seen = 0;
    for line in log.lines() {
        let Some(rest) = line.strip_prefix("RESULT ") else { continue };
        seen += 1;
        if let Some(fail) = rest.strip_prefix("FAIL ") {
            let (class, why) = fail.split_once(' ').unwrap_or((fail, ""));
            let i: usize = class.trim_start_matches("Case").parse().map_err(|_| line.to_string())?;
            failures.push(format!("{}: {why}", cases[i].label));
        }
    }
    if seen != runnable.len() {
        failures.push(format!("runner reported {seen} of {} cases: {}", runnable.len(), tail(&log, 5)));
    }
    Ok(failures)
}

// ---------------------------------------------------------------- combinatorics

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

fn combinatorics() -> Check {
    let mut checked = 0;
    for l in 1..=9 {
        let list = PerturbationList { sample_id: format!("s{l}"), applicable: MrId::ALL[..l].to_vec() };
        for pd in 1..=l {
            let expect = (factorial(l) / (factorial(pd) * factorial(l - pd))).min(CAP as u128) as usize;
            let combos = enumerate_combos(&list, pd, CAP, 42).map_err(|e| e.to_string())?;
            ensure(combos.len() == expect, || format!("l={l} pd={pd}: {} combos, expected {expect}", combos.len()))?;
            let mut dedup = combos.clone();
            dedup.dedup();
            ensure(dedup.len() == combos.len(), || format!("l={l} pd={pd}: duplicates"))?;
            ensure(
                combos.iter().all(|c| c.len() == pd && c.ids().iter().all(|m| list.applicable.contains(m))),
                || format!("l={l} pd={pd}: combo outside the list"),
            )?;
            checked += 1;
        }
    }
    let list = PerturbationList { sample_id: "example".into(), applicable: MrId::ALL[..3].to_vec() };
    let multi: usize = (2..=3)
        .map(|pd| enumerate_combos(&list, pd, CAP, 0).map(|c| c.len()))
        .sum::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(multi == 4, || format!("three relations gave {multi} multi-relation combos, expected 4"))?;
    Ok(format!("{checked} (l, pd) cells match the factorial oracle; l=3 gives 4 multi-relation combos"))
}

// ---------------------------------------------------------------- pd semantics

const NON_INTERACTING: &str = "\
int scale(int a, int b) {
    int total = a * b;
    total = total - 1;
    if (total > b) {
        total = b;
    }
    for (int i = 0; i < 3; i++) {
        a = a + i;
    }
    return total + a;
}
";

const INTERACTING: &str = "\
int shrink(int x, int y) {
    x = x - y;
    return x;
}
";

fn pd_semantics() -> Check {
    let s = BaseSample::new("plain", NON_INTERACTING);
    let list = detect_applicable(&s, 9).map_err(|e| e.to_string())?;
    ensure(list.applicable.len() == 9, || format!("fixture should admit all nine relations, got {:?}", list.applicable))?;
    let mut n = 0;
    for mask in 1u32..512 {
        let ids: Vec<MrId> = MrId::ALL.into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|x| x.1).collect();
        let combo = ComboSpec::new(ids).unwrap();
        let m = generate_mutant(&s, &combo, 9).map_err(|e| e.to_string())?;
        ensure(m.pd == combo.len() && !m.interacting(), || format!("{combo}: pd {} on the non-interacting fixture", m.pd))?;
        n += 1;
    }

    let s = BaseSample::new("clash", INTERACTING);
    let list = detect_applicable(&s, 9).map_err(|e| e.to_string())?;
    let both = [MrId::AssignExpression, MrId::BinaryExpression];
    ensure(both.iter().all(|m| list.applicable.contains(m)), || "both relations should apply alone".into())?;
    let combo = ComboSpec::new(both.to_vec()).unwrap();
    let m = generate_mutant(&s, &combo, 9).map_err(|e| e.to_string())?;
    ensure(m.pd == 1 && m.interacting(), || format!("interacting fixture: pd {} flags {:?}", m.pd, m.flags))?;
    Ok(format!("pd = |combo| for all {n} combos; compound assignment consumes the subtraction (pd 1 of 2, flagged)"))
}

// ---------------------------------------------------------------- rename round trip

fn round_trip() -> Check {
    let combo = ComboSpec::new(vec![MrId::VariableRenaming, MrId::MethodRenaming]).unwrap();
    let mut renamed = 0;
    for seed in 0..ROUND_TRIP_PROGRAMS {
        let src = javagen::program(seed + 10_000);
        let m = generate_mutant(&BaseSample::new("g", &src), &combo, seed).map_err(|e| e.to_string())?;
        let back = reverse_rename(&m.text, &m.rename_map);
        ensure(token_texts(&back) == token_texts(&src), || format!("program {seed} did not round-trip"))?;
        renamed += m.rename_map.variable_renames.len() + m.rename_map.method_renames.len();
    }
    Ok(format!("{ROUND_TRIP_PROGRAMS} programs, {renamed} renamed identifiers restored"))
}

// ---------------------------------------------------------------- metrics

#[derive(serde::Deserialize)]
struct CountRow {
    model: String,
    dataset: String,
    invalid: u64,
    valid: u64,
    r_score: f64,
}

fn record(model: &str, dataset: &str, i: u64, outcome: Outcome) -> AttemptRecord {
    AttemptRecord {
        mutant_id: format!("{dataset}-{i}__m1__s0"),
        base_id: format!("{dataset}-{i}"),
        combo: "m1".parse().unwrap(),
        pd: 1,
        outcome,
        detail: String::new(),
        prompt_hash: String::new(),
        response_hash: None,
        latency_ms: 0,
        timestamp: 0,
        model: model.into(),
        repair_pattern: "unknown".into(),
        dataset: dataset.into(),
        edit_distance: None,
    }
}

fn dp_oracle(a: &[&str], b: &[&str]) -> usize {
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        d[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn ranks_oracle(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let below = xs.iter().filter(|&&y| y < x).count() as f64;
            let equal = xs.iter().filter(|&&y| y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

fn metrics() -> Check {
    let path = fixtures().join("model_counts.csv");
    let mut reader = csv::Reader::from_path(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let rows: Vec<CountRow> = reader.deserialize().collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(rows.len() == 8, || format!("expected 8 rows, found {}", rows.len()))?;
    let mut records = Vec::new();
    for row in &rows {
        let r = r_score(row.valid, row.invalid).map_err(|e| e.to_string())?;
        ensure((r - row.r_score).abs() <= R_SCORE_TOL, || format!("{} {}: {r:.4} vs {}", row.model, row.dataset, row.r_score))?;
        for i in 0..row.valid {
            records.push(record(&row.model, &row.dataset, i, Outcome::Valid));
        }
        for i in 0..row.invalid {
            records.push(record(&row.model, &row.dataset, row.valid + i, Outcome::Invalid));
        }
        // Errors are excluded and must not move the score.
        records.push(record(&row.model, &row.dataset, u64::MAX, Outcome::Error));
    }
    for row in &rows {
        let subset: Vec<AttemptRecord> = records.iter().filter(|r| r.dataset == row.dataset).cloned().collect();
        let summary = group_metrics(&subset, GroupKey::Model, ErrorPolicy::Exclude);
        let s = summary.iter().find(|s| s.scope_key == row.model).ok_or("model missing from summary")?;
        let r = s.r_score.ok_or("empty group")?;
        ensure((r - row.r_score).abs() <= R_SCORE_TOL && s.valid == row.valid && s.invalid == row.invalid, || {
            format!("grouped {} {}: {r:.4} vs {}", row.model, row.dataset, row.r_score)
        })?;
    }

    let vocab = ["x", "y", "i", "+", "-", "*", "(", ")", "{", "}", ";", "=", "return", "int", "0", "1", "foo"];
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..EDIT_PAIRS {
        let seq = |rng: &mut ChaCha8Rng| -> Vec<&str> {
            let n = rng.random_range(0..25);
            (0..n).map(|_| *vocab.choose(rng).unwrap()).collect()
        };
        let (a, b) = (seq(&mut rng), seq(&mut rng));
        let got = edit_distance(&a.join(" "), &b.join(" "));
        let want = dp_oracle(&a, &b);
        ensure(got == want, || format!("pair {k}: {got} vs oracle {want} for {a:?} / {b:?}"))?;
    }

    let mut worst: f64 = 0.0;
    let mut tested = 0;
    while tested < SPEARMAN_VECTORS {
        let n = rng.random_range(3..40);
        let spread = rng.random_range(3..100);
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let ys: Vec<f64> = (0..n).map(|_| rng.random_range(0..spread) as f64).collect();
        let (rx, ry) = (ranks_oracle(&xs), ranks_oracle(&ys));
        let want = pearson(&rx, &ry);
        if !want.is_finite() {
            continue;
        }
        let got = spearman(&xs, &ys).map_err(|e| e.to_string())?.rho;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= SPEARMAN_TOL, || format!("rho {got} vs oracle {want} on {xs:?} / {ys:?}"))?;
        tested += 1;
    }
    for n in [3usize, 7, 12, 60] {
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1000.0..1000.0)).collect();
        let up: Vec<f64> = xs.iter().map(|x| x.powi(3) + 5.0).collect();
        let down: Vec<f64> = xs.iter().map(|x| 5.0 - 2.0 * x).collect();
        let r_up = spearman(&xs, &up).map_err(|e| e.to_string())?.rho;
        let r_down = spearman(&xs, &down).map_err(|e| e.to_string())?.rho;
        ensure(r_up == 1.0 && r_down == -1.0, || format!("monotone n={n}: {r_up}, {r_down}"))?;
    }
    Ok(format!(
        "8 reference R-scores within {R_SCORE_TOL}; {EDIT_PAIRS} edit distances match the DP oracle; \
         spearman max deviation {worst:.1e} over {SPEARMAN_VECTORS} vectors; monotone inputs give exactly ±1"
    ))
}

// ---------------------------------------------------------------- end to end

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_morphrepair"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "`morphrepair {}` exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn campaign(out: &Path) -> Result<(), String> {
    let f = fixtures().join("e2e");
    let cfg = |m: &str| f.join(format!("{m}.toml")).to_string_lossy().into_owned();
    let mock = |m: &str| f.join(format!("mock-{m}.json")).to_string_lossy().into_owned();
    let out = out.to_string_lossy();
    cli(&["detect", "--config", &cfg("steady"), "--out", &out])?;
    cli(&["mutate", "--config", &cfg("steady"), "--out", &out])?;
    for m in ["steady", "fragile"] {
        cli(&["repair", "--config", &cfg(m), "--out", &out, "--mock", &mock(m)])?;
    }
    cli(&["report", "--config", &cfg("steady"), "--out", &out])?;
    Ok(())
}

/// attempts.jsonl with wall-clock fields removed.
fn stable_attempts(out: &Path) -> Result<Vec<serde_json::Value>, String> {
    let raw = fs::read_to_string(out.join("runs/fixture/attempts.jsonl")).map_err(|e| e.to_string())?;
    raw.lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).map_err(|e| e.to_string())?;
            let obj = v.as_object_mut().ok_or("record is not an object")?;
            obj.remove("timestamp");
            obj.remove("latency_ms");
            Ok(v)
        })
        .collect()
}

// Canned verdicts: the steady model fixes every sample except `average`; the
// fragile model fixes everything unless a dummy variable or the comment shows up.
fn expected_counts(out: &Path) -> Result<BTreeMap<String, (u64, u64)>, String> {
    let stored = MutantStore::new(out.join("mutants")).load_all().map_err(|e| e.to_string())?;
    let mut steady = (0, 0);
    let mut fragile = (0, 0);
    for m in stored.iter().filter(|m| !m.meta.degenerate) {
        if m.meta.base_id == "average" { steady.1 += 1 } else { steady.0 += 1 }
        let noisy = m.meta.flags.iter().any(|f| {
            f.applied && matches!(f.mr, MrId::DummyVariable | MrId::AddingComments)
        });
        if noisy { fragile.1 += 1 } else { fragile.0 += 1 }
    }
    Ok(BTreeMap::from([("mock-fragile".to_string(), fragile), ("mock-steady".to_string(), steady)]))
}

fn end_to_end() -> Check {
    let start = Instant::now();
    let (a, b) = (tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?);
    campaign(a.path())?;
    campaign(b.path())?;
    let took = start.elapsed();

    let expected = expected_counts(a.path())?;
    // Frozen from the fixture: 146 mutants, sample `average` has 49 of them.
    ensure(expected["mock-steady"] == (97, 49) && expected["mock-fragile"] == (79, 67), || {
        format!("fixture drifted: {expected:?}")
    })?;
    let summaries = read_csv(&a.path().join("report/fixture/model.csv")).map_err(|e| e.to_string())?;
    for (model, &(valid, invalid)) in &expected {
        let s = summaries.iter().find(|s| &s.scope_key == model).ok_or_else(|| format!("{model} missing"))?;
        let want = valid as f64 / (valid + invalid) as f64;
        ensure(s.valid == valid && s.invalid == invalid, || {
            format!("{model}: {}/{} vs hand-computed {valid}/{invalid}", s.valid, s.invalid)
        })?;
        ensure((s.r_score.unwrap_or(f64::NAN) - want).abs() < 1e-9, || format!("{model}: R {:?} vs {want}", s.r_score))?;
    }

    let (ra, rb) = (stable_attempts(a.path())?, stable_attempts(b.path())?);
    ensure(!ra.is_empty() && ra == rb, || format!("runs differ ({} vs {} records)", ra.len(), rb.len()))?;
    ensure(took < E2E_BUDGET, || format!("two campaigns took {took:?}"))?;
    let r = |m: &str| expected[m].0 as f64 / (expected[m].0 + expected[m].1) as f64;
    Ok(format!(
        "R mock-steady {:.3}, mock-fragile {:.3} as hand-computed; {} records identical across runs; {took:.1?}",
        r("mock-steady"),
        r("mock-fragile"),
        ra.len()
    ))
}

// ---------------------------------------------------------------- pairs

fn pairs() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path();
    let f = fixtures().join("e2e");
    let out_s = out.to_string_lossy();
    let cfg = f.join("steady.toml");
    cli(&["mutate", "--config", &cfg.to_string_lossy(), "--out", &out_s])?;
    // Add degenerate mutants: relations that have nothing to rewrite.
    let store = MutantStore::new(out.join("mutants"));
    let plain = BaseSample::new("plain", "void log() {\n    System.out.println(\"x\");\n}\n");
    store.write_base(&plain).map_err(|e| e.to_string())?;
    for combo in ["m3", "m9", "m3m4m9"] {
        let m = generate_mutant(&plain, &combo.parse().unwrap(), 1).map_err(|e| e.to_string())?;
        ensure(m.degenerate, || format!("{combo} should not change the plain sample"))?;
        store.write(&m).map_err(|e| e.to_string())?;
    }
    let changed = generate_mutant(&plain, &"m7".parse().unwrap(), 1).map_err(|e| e.to_string())?;
    store.write(&changed).map_err(|e| e.to_string())?;

    let stored = store.load_all().map_err(|e| e.to_string())?;
    let non_degenerate = stored.iter().filter(|m| !m.meta.degenerate).count();
    cli(&["export-pairs", "--out", &out_s])?;
    let raw = fs::read_to_string(out.join("pairs.jsonl")).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = raw.lines().collect();
    ensure(lines.len() == non_degenerate, || format!("{} lines, {non_degenerate} non-degenerate mutants", lines.len()))?;
    for l in &lines {
        let v: serde_json::Value = serde_json::from_str(l).map_err(|e| e.to_string())?;
        let (x, xp) = (v["x"].as_str().unwrap_or(""), v["x_prime"].as_str().unwrap_or(""));
        ensure(text_differs(x, xp), || format!("identical pair for {}", v["base_id"]))?;
    }
    Ok(format!("{} lines for {} mutants ({} degenerate skipped)", lines.len(), stored.len(), stored.len() - non_degenerate))
}

// ---------------------------------------------------------------- main

fn main() {
    let checks: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("golden-mr-examples", Box::new(|| into_verdict(golden()))),
        ("semantic-preservation", Box::new(|| semantic().unwrap_or_else(Verdict::Fail))),
        ("combinatorics", Box::new(|| into_verdict(combinatorics()))),
        ("pd-semantics", Box::new(|| into_verdict(pd_semantics()))),
        ("rename-round-trip", Box::new(|| into_verdict(round_trip()))),
        ("metrics-arithmetic", Box::new(|| into_verdict(metrics()))),
        ("end-to-end-mock-campaign", Box::new(|| into_verdict(end_to_end()))),
        ("pairs-export", Box::new(|| into_verdict(pairs()))),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Verdict::Pass(d) => println!("PASS {name}: {d}"),
            Verdict::Skip(d) => println!("SKIP {name}: {d}"),
            Verdict::Fail(d) => {
                failed += 1;
                println!("FAIL {name}: {d}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

fn into_verdict(c: Check) -> Verdict {
    match c {
        Ok(d) => Verdict::Pass(d),
        Err(d) => Verdict::Fail(d),
    }
}
