//! Acceptance target: one PASS/FAIL line per criterion, nonzero exit if any
//! gating criterion fails.
//!
//! Set `AXIAL_ACCEPT_OPT_IN=1` to also run the large stress jobs; their
//! lines are printed as INFO and never gate.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use axial::analysis::{self, radical_quotient, FormClass};
use axial::catalog;
use axial::engine::{EngineOptions, Status};
use axial::fusion::FusionLaw;
use axial::linalg::Rat;
use axial::pipeline::{self, ShapeRun};

// Pinned budgets.
const CATALOG_BUDGET: Duration = Duration::from_secs(1);
const SLOW_TIER_BUDGET: Duration = Duration::from_secs(3600);
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const ORACLE_CHECKS: usize = 500;
const BRUTE_FORCE_MAX_DIM: usize = 15;

struct Outcome {
    failed: usize,
    completed: Vec<(String, ShapeRun)>,
}

impl Outcome {
    fn line(&mut self, n: usize, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("{} criterion {n} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    fn keep(&mut self, job: &str, runs: Vec<ShapeRun>) {
        for r in runs {
            if r.result.status == Status::Completed {
                self.completed.push((format!("{job} {}", r.label), r));
            }
        }
    }
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn run(job: &str, only: Option<&[&str]>) -> Vec<ShapeRun> {
    let cfg = common::load_job(job);
    let g = cfg.group();
    let norm = pipeline::normalizer(&cfg, &g);
    let mut plan = pipeline::plan(&cfg, &g, norm.as_ref()).unwrap();
    if let Some(labels) = only {
        plan.retain(|(_, _, graph, s)| labels.contains(&s.label(graph).as_str()));
    }
    let opts = pipeline::options(&cfg, EngineOptions::default());
    pipeline::build_all(&cfg, &g, &plan, &opts, threads(), |_| {})
}

/// Drops the form label when the expected value has none (`dim/m`).
fn trim(v: &str, want: &str) -> String {
    if want.matches('/').count() == 1 {
        v.rsplitn(2, '/').nth(1).unwrap_or(v).to_string()
    } else {
        v.to_string()
    }
}

/// Compares rows against `expected` by exact label.
fn compare(job: &str, runs: &[ShapeRun], expected: &[(&str, &str)]) -> Vec<String> {
    let got = common::rows(runs);
    let mut bad = Vec::new();
    for (label, want) in expected {
        match got.iter().find(|(l, _)| l == label) {
            None => bad.push(format!("{job} {label}: shape missing")),
            Some((_, v)) => {
                let v = trim(v, want);
                if v != *want {
                    bad.push(format!("{job} {label}: got {v}, expected {want}"));
                }
            }
        }
    }
    bad
}

fn table_criterion(out: &mut Outcome, jobs: &[(&str, &[(&str, &str)])]) -> (bool, String) {
    let mut bad = Vec::new();
    let mut rows = 0;
    for (job, expected) in jobs {
        let labels: Vec<&str> = expected.iter().map(|(l, _)| *l).collect();
        let runs = run(job, Some(&labels));
        bad.extend(compare(job, &runs, expected));
        rows += expected.len();
        out.keep(job, runs);
    }
    let detail = if bad.is_empty() { format!("{rows} rows match") } else { bad.join("; ") };
    (bad.is_empty(), detail)
}

fn criterion_1(out: &mut Outcome) {
    let t = Instant::now();
    let all = catalog::all();
    let mut bad = Vec::new();
    for d in &all {
        if let Err(e) = d.self_check() {
            bad.push(e.to_string());
        }
    }
    let dims: Vec<usize> = all.iter().map(|d| d.dim()).collect();
    if dims != [1, 3, 2, 4, 3, 5, 5, 6, 8] {
        bad.push(format!("dimensions {dims:?}"));
    }
    let listed: usize = all.iter().map(|d| d.listed_form.len()).sum();
    let elapsed = t.elapsed();
    if elapsed >= CATALOG_BUDGET {
        bad.push(format!("took {elapsed:.2?}"));
    }
    let detail = if bad.is_empty() { format!("9 algebras, {listed} listed form values, {elapsed:.2?}") } else { bad.join("; ") };
    out.line(1, "catalog fidelity", bad.is_empty(), detail);
}

fn criterion_2(out: &mut Outcome) {
    let law = FusionLaw::monster();
    let set = |xs: &[&str]| xs.iter().fold(0, |s, x| s | 1 << law.index_of(&x.parse::<Rat>().unwrap()).unwrap());
    let expected: &[(&[&str], &[&str], &[&str])] = &[
        (&["1"], &["0"], &[]),
        (&["1"], &["1", "0"], &["1"]),
        (&["1"], &["0", "1/4"], &["1/4"]),
        (&["1"], &["1", "0", "1/4"], &["1", "1/4"]),
        (&["0"], &["1", "0"], &["0"]),
        (&["0"], &["1", "1/4"], &["1/4"]),
        (&["0"], &["1", "0", "1/4"], &["0", "1/4"]),
        (&["1/4"], &["1/4"], &["1", "0"]),
        (&["1/4"], &["1", "0"], &["1/4"]),
        (&["1", "0"], &["1", "0"], &["1", "0"]),
        (&["1", "0"], &["1", "1/4"], &["1", "1/4"]),
        (&["1", "0"], &["0", "1/4"], &["0", "1/4"]),
    ];
    let norm = |a: u32, b: u32, c: u32| (a.min(b), a.max(b), c);
    let mut want: Vec<_> = expected.iter().map(|(a, b, c)| norm(set(a), set(b), set(c))).collect();
    let mut got: Vec<_> = law.useful_rules().iter().map(|r| norm(r.left as u32, r.right as u32, r.result as u32)).collect();
    want.sort();
    got.sort();
    got.dedup();
    let ok = got == want;
    out.line(2, "useful rules", ok, format!("{} rules{}", got.len(), if ok { ", equal as a set" } else { ", differ from the expected set" }));
}

fn criterion_3(out: &mut Outcome) {
    let t = Instant::now();
    let (ok, detail) = table_criterion(
        out,
        &[
            ("s3xs3_3+3", &[("3A3A2B", "8/2/pos"), ("3A3C2A", "0"), ("3A3C2B", "7/2/pos"), ("3C3C2A", "0"), ("3C3C2B", "6/1/pos")]),
            ("s4_6", &[("3A2A", "13/2/pos"), ("3A2B", "13/3/pos"), ("3C2A", "9/2/pos"), ("3C2B", "6/1/pos")]),
            (
                "s4_6+3",
                &[
                    ("4A3A2A", "23/3/pos"),
                    ("4A3A2B", "25/3/pos"),
                    ("4A3C2A", "0"),
                    ("4A3C2B", "12/2/pos"),
                    ("4B3A2A", "13/2/pos"),
                    ("4B3A2B", "16/2/pos"),
                    ("4B3C2A", "9/1/pos"),
                    ("4B3C2B", "12/2/pos"),
                ],
            ),
        ],
    );
    out.line(3, "results table, fast tier", ok, format!("{detail}, {:.1?}", t.elapsed()));
}

fn criterion_4(out: &mut Outcome) {
    let t = Instant::now();
    // Rows listed without a form label compare dim/m only.
    let (mut ok, mut detail) = table_criterion(
        out,
        &[
            ("a5_15", &[("3A2A", "26/2"), ("3A2B", "46/3"), ("3C2A", "20/2"), ("3C2B", "21/2")]),
            ("s3xs3_3+3+9", &[("3A2A", "18/2"), ("3A2B", "25/3"), ("3C2A", "0"), ("3C2B", "0")]),
            ("l3_2_21", &[("4A3C", "57/3"), ("4B3A", "49/2"), ("4B3C", "21/1")]),
        ],
    );
    let elapsed = t.elapsed();
    if elapsed > SLOW_TIER_BUDGET {
        ok = false;
        detail.push_str(", over budget");
    }
    out.line(4, "results table, slow tier", ok, format!("{detail}, {elapsed:.1?}"));
}

fn criterion_5(out: &mut Outcome) {
    let runs = run("v4_2+2+1", Some(&["4A2A2A"]));
    let mut bad = Vec::new();
    let mut quo_dim = 0;
    match runs.first().and_then(|r| Some((r.result.algebra.as_ref()?, r.summary.as_ref()?))) {
        None => bad.push("4A2A2A did not complete".to_string()),
        Some((alg, s)) => {
            if alg.dim() != 14 {
                bad.push(format!("dim {}", alg.dim()));
            }
            if s.form.signature.1 != 3 {
                bad.push(format!("signature {:?}", s.form.signature));
            }
            let quo = radical_quotient(alg, &s.form);
            quo_dim = quo.dim();
            if quo_dim != 11 {
                bad.push(format!("quotient dim {quo_dim}"));
            }
            let rep = analysis::verify_axial(&quo);
            if !rep.ok() || !rep.all_primitive() {
                bad.push("quotient fails the axial checks".into());
            }
            let form = analysis::frobenius_form(&quo, &vec![Rat::one(); quo.axes().len()]);
            if form.class != FormClass::Positive {
                bad.push(format!("quotient form signature {:?}", form.signature));
            }
        }
    }
    out.keep("v4_2+2+1", runs);
    let detail = if bad.is_empty() { format!("dim 14, 3 null directions, quotient dim {quo_dim} positive definite and primitive") } else { bad.join("; ") };
    out.line(5, "radical quotient", bad.is_empty(), detail);
}

fn criterion_6(out: &mut Outcome) {
    let mut bad = Vec::new();
    for (job, label) in [("s3xs3_3+3", "3A3A2A"), ("s5_10", "3A2A")] {
        let runs = run(job, Some(&[label]));
        match runs.first().map(|r| r.result.status) {
            Some(Status::Incomplete) => {}
            other => bad.push(format!("{job} {label}: {other:?}")),
        }
    }
    let detail = if bad.is_empty() { "both stop incomplete under default caps".to_string() } else { bad.join("; ") };
    out.line(6, "incompleteness", bad.is_empty(), detail);
}

fn criterion_7(out: &mut Outcome) {
    let mut bad = Vec::new();
    let mut brute = 0;
    for (name, r) in &out.completed {
        let (Some(alg), Some(s)) = (&r.result.algebra, &r.summary) else {
            bad.push(format!("{name}: completed without an algebra"));
            continue;
        };
        // The summary carries the property checks run at build time.
        for f in &s.failures {
            bad.push(format!("{name}: {f}"));
        }
        if alg.dim() <= BRUTE_FORCE_MAX_DIM {
            brute += 1;
            if analysis::m_closure(alg) != common::brute_m_closure(alg) {
                bad.push(format!("{name}: m-closure differs from the filtration"));
            }
        }
    }
    for d in catalog::all() {
        let vals = vec![Rat::one(); d.algebra.axes().len()];
        for f in analysis::check_properties(&d.algebra, None, None, Some(&d.form), &vals) {
            bad.push(format!("{}: {f}", d.name));
        }
        brute += 1;
        if analysis::m_closure(&d.algebra) != common::brute_m_closure(&d.algebra) {
            bad.push(format!("{}: m-closure differs from the filtration", d.name));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} built and 9 catalog algebras pass, {brute} m-closures checked by brute force", out.completed.len())
    } else {
        bad.join("; ")
    };
    out.line(7, "property suite", bad.is_empty(), detail);
}

fn criterion_8(out: &mut Outcome) {
    let t = Instant::now();
    let res = common::linalg_oracle_checks(ORACLE_CHECKS, 2024);
    let elapsed = t.elapsed();
    let ok = res.is_ok() && elapsed < ORACLE_BUDGET;
    let detail = match res {
        Ok(()) => format!("{ORACLE_CHECKS} checks in {elapsed:.2?}"),
        Err(e) => e,
    };
    out.line(8, "linear algebra oracles", ok, detail);
}

fn criterion_9(out: &mut Outcome) {
    let mut bad = Vec::new();
    for d in catalog::all() {
        let cfg = common::dihedral_job(&d);
        let runs = common::run_job(&cfg, None, &EngineOptions::default());
        let mine: Vec<&ShapeRun> = runs.iter().filter(|r| r.label.starts_with(&d.name)).collect();
        let [r] = mine[..] else {
            bad.push(format!("{}: {} matching shapes", d.name, mine.len()));
            continue;
        };
        match &r.result.algebra {
            Some(alg) if common::canonical_on(alg, alg.axes()) == common::catalog_canonical(&d) => {}
            Some(_) => bad.push(format!("{}: structure constants differ", d.name)),
            None => bad.push(format!("{}: {:?}", d.name, r.result.status)),
        }
    }
    let detail = if bad.is_empty() { "all nine rebuilt equal to the catalog".to_string() } else { bad.join("; ") };
    out.line(9, "dihedral self-consistency", bad.is_empty(), detail);
}

fn opt_in() {
    let jobs: &[(&str, &[(&str, &str)])] = &[
        ("s5_10", &[("3C2A", "0"), ("3C2B", "10/1/pos")]),
        ("s5_10+15", &[("4A", "61/2"), ("4B", "36/2")]),
        ("s6_15", &[("3C2A", "0"), ("3C2B", "15/1")]),
        ("a6_45", &[("4A3A3C", "0"), ("4A3C3C", "187/3"), ("4B3A3A", "76/2"), ("4B3A3C", "105/2"), ("4B3C3C", "70/2")]),
        ("l2_11_55", &[("6A5A5A", "101/2/pos")]),
    ];
    for (job, expected) in jobs {
        let t = Instant::now();
        let runs = run(job, None);
        let rows: Vec<String> = common::rows(&runs).iter().map(|(l, v)| format!("{l}:{v}")).collect();
        let bad = compare_prefix(job, &runs, expected);
        let verdict = if bad.is_empty() { "as listed".to_string() } else { bad.join("; ") };
        println!("INFO opt-in {job}: {} ({verdict}), {:.1?}", rows.join(" "), t.elapsed());
    }
}

/// Like `compare`, but shape labels only need to start with the expected one
/// (multi-orbit labels carry extra letters for the later orbits).
fn compare_prefix(job: &str, runs: &[ShapeRun], expected: &[(&str, &str)]) -> Vec<String> {
    let mut bad = Vec::new();
    for (label, want) in expected {
        let hits: Vec<String> = common::rows(runs)
            .into_iter()
            .filter(|(l, _)| l.starts_with(label))
            .map(|(_, v)| trim(&v, want))
            .collect();
        if !hits.iter().any(|v| v == want) {
            bad.push(format!("{job} {label}: got {hits:?}, expected {want}"));
        }
    }
    bad
}

fn main() -> ExitCode {
    // The libtest harness passes flags such as --list; nothing to list here.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let t = Instant::now();
    let mut out = Outcome { failed: 0, completed: Vec::new() };
    criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    criterion_6(&mut out);
    criterion_7(&mut out);
    criterion_8(&mut out);
    criterion_9(&mut out);
    if std::env::var_os("AXIAL_ACCEPT_OPT_IN").is_some_and(|v| v == "1") {
        opt_in();
    }
    println!("acceptance: {} of 9 criteria pass, {:.1?}", 9 - out.failed, t.elapsed());
    if out.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
