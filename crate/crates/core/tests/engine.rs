mod common;

use axial::algfile::AlgebraFile;
use axial::analysis::{self, radical_quotient, FormClass};
use axial::catalog;
use axial::engine::{EngineOptions, Status};
use axial::pipeline;

fn fast() -> EngineOptions {
    EngineOptions::default()
}

#[test]
fn dihedral_jobs_reproduce_the_catalog() {
    for d in catalog::all() {
        let cfg = common::dihedral_job(&d);
        let runs = common::run_job(&cfg, None, &fast());
        let mine: Vec<_> = runs.iter().filter(|r| r.label.starts_with(&d.name)).collect();
        assert_eq!(mine.len(), 1, "{}", d.name);
        let r = mine[0];
        assert_eq!(r.result.status, Status::Completed, "{}", d.name);
        let alg = r.result.algebra.as_ref().unwrap();
        assert_eq!(alg.dim(), d.dim(), "{}", d.name);
        assert_eq!(common::canonical_on(alg, alg.axes()), common::catalog_canonical(&d), "{}", d.name);
        assert!(r.summary.as_ref().unwrap().failures.is_empty(), "{}", d.name);
    }
}

#[test]
fn exact_and_modular_runs_agree() {
    let exact = EngineOptions { exact: true, ..fast() };
    for (job, only) in [("s4_6", None), ("s3xs3_3+3", Some(&["3A3C2B", "3C3C2B", "3C3C2A"][..])), ("v4_2+2+1", None)] {
        let cfg = common::load_job(job);
        let a = common::run_job(&cfg, only, &fast());
        let b = common::run_job(&cfg, only, &exact);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.result.status, y.result.status, "{job} {}", x.label);
            assert_eq!(x.result.algebra, y.result.algebra, "{job} {}", x.label);
            assert_eq!(y.result.stats.moduli, 0);
        }
    }
}

#[test]
fn partial_expansion_gives_the_same_algebras() {
    let cfg = common::load_job("s4_6");
    let partial = EngineOptions { partial_expand: true, ..fast() };
    let a = common::run_job(&cfg, None, &fast());
    let b = common::run_job(&cfg, None, &partial);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.result.algebra, y.result.algebra, "{}", x.label);
    }
}

#[test]
fn four_group_on_five_axes() {
    let cfg = common::load_job("v4_2+2+1");
    let runs = common::run_job(&cfg, None, &fast());
    let r = &runs[0];
    let alg = r.result.algebra.as_ref().unwrap();
    let s = r.summary.as_ref().unwrap();
    assert_eq!(alg.dim(), 14);
    assert_eq!(s.form.signature.1, 3);
    let quo = radical_quotient(alg, &s.form);
    assert_eq!(quo.dim(), 11);
    let rep = analysis::verify_axial(&quo);
    assert!(rep.ok() && rep.all_primitive());
    let form = analysis::frobenius_form(&quo, &vec![axial::linalg::Rat::one(); quo.axes().len()]);
    assert_eq!(form.class, FormClass::Positive);
}

#[test]
fn tau_and_shape_counts() {
    let count = |job: &str| {
        let cfg = common::load_job(job);
        let g = cfg.group();
        let norm = pipeline::normalizer(&cfg, &g);
        let taus = pipeline::tau_maps(&cfg, &g, norm.as_ref()).unwrap();
        let shapes: Vec<Vec<String>> = taus
            .iter()
            .map(|t| {
                let (graph, s) = pipeline::shapes(&cfg, &g, t, norm.as_ref()).unwrap();
                s.iter().map(|s| s.label(&graph)).collect()
            })
            .collect();
        shapes
    };
    assert_eq!(count("2^4_2+2+2+2").len(), 4);
    assert_eq!(count("trivial_1"), vec![vec!["1A".to_string()]]);
    assert_eq!(count("s4_6"), vec![vec!["3A2A", "3A2B", "3C2A", "3C2B"]]);
}

#[test]
fn single_axis_is_one_dimensional() {
    let runs = common::run_job(&common::load_job("trivial_1"), None, &fast());
    assert_eq!(common::rows(&runs), vec![("1A".to_string(), "1/1/pos".to_string())]);
}

#[test]
fn s4_on_one_three_and_six_axes() {
    let cfg = common::load_job("s4_1+3+6");
    let runs = common::run_job(&cfg, Some(&["4A3A2A2B2B", "4A3C2A2B2B"]), &fast());
    let rows = common::rows(&runs);
    assert_eq!(rows, vec![("4A3A2A2B2B".into(), "52/5/pos".into()), ("4A3C2A2B2B".into(), "27/5/pos".into())]);
}

#[test]
fn m_closure_matches_brute_force() {
    let mut seen = 0;
    for d in catalog::all() {
        assert_eq!(analysis::m_closure(&d.algebra), common::brute_m_closure(&d.algebra), "{}", d.name);
        seen += 1;
    }
    for job in ["s4_6", "s3xs3_3+3", "v4_2+2+1", "s3xs3_3+9"] {
        let cfg = common::load_job(job);
        for r in common::run_job(&cfg, None, &fast()) {
            let Some(alg) = &r.result.algebra else { continue };
            if alg.dim() <= 15 {
                assert_eq!(analysis::m_closure(alg), common::brute_m_closure(alg), "{job} {}", r.label);
                seen += 1;
            }
        }
    }
    assert!(seen >= 15);
}

#[test]
fn built_algebras_round_trip_through_files() {
    let cfg = common::load_job("s4_6");
    for r in common::run_job(&cfg, None, &fast()) {
        let f = r.algebra_file(&cfg).unwrap();
        let text = f.dump();
        let back = AlgebraFile::parse(&text).unwrap();
        assert_eq!(back.dump(), text);
        assert_eq!(back.algebra, *r.result.algebra.as_ref().unwrap());
    }
}

#[test]
fn fix_trick_is_recorded() {
    let cfg = common::load_job("s4_6");
    let off = EngineOptions { fix_trick: false, ..fast() };
    for r in common::run_job(&cfg, Some(&["3C2B"]), &off) {
        assert!(!r.result.stats.fix_trick_fired);
        assert!(r.report().map_or(true, |s| s.contains("fix-trick=unused")));
    }
}

#[test]
fn parallel_build_keeps_plan_order() {
    let cfg = common::load_job("s3xs3_3+3");
    let g = cfg.group();
    let norm = pipeline::normalizer(&cfg, &g);
    let mut plan = pipeline::plan(&cfg, &g, norm.as_ref()).unwrap();
    plan.retain(|(_, _, graph, s)| s.label(graph) != "3A3A2A");
    let opts = fast();
    let serial = pipeline::build_all(&cfg, &g, &plan, &opts, 1, |_| {});
    let mut order = Vec::new();
    let par = pipeline::build_all(&cfg, &g, &plan, &opts, 4, |r| order.push(r.label.clone()));
    let labels: Vec<String> = serial.iter().map(|r| r.label.clone()).collect();
    assert_eq!(order, labels);
    for (a, b) in serial.iter().zip(&par) {
        assert_eq!(a.result.algebra, b.result.algebra);
    }
}
