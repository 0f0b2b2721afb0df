//! From a job file to finished algebras: tau-maps, shapes, expansion and the
//! invariants reported for each result.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use log::warn;

use crate::algfile::AlgebraFile;
use crate::analysis::{self, frobenius_form, Algebra, ConditionReport, FormResult};
use crate::engine::{self, EngineOptions, RunResult, Status};
use crate::linalg::Rat;
use crate::job::{JobConfig, ShapeSpec, TauSpec};
use crate::permgroup::{normalizer_in_sym, GroupAction, NORMALIZER_NODE_BOUND};
use crate::shape::{self, Shape, ShapeGraph, TauError, TauMap};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid tau-map: {0}")]
    Tau(#[from] TauError),
    #[error("shape {label:?} is not one of the shapes of this tau-map: {known}")]
    UnknownShape { label: String, known: String },
    #[error("shape {label:?} fails the full check: {msg}")]
    BadShape { label: String, msg: String },
}

/// The normaliser used to identify tau-maps and shapes: the job's
/// `normalizer-gen` lines if present, otherwise computed in `Sym(X)`.
pub fn normalizer(cfg: &JobConfig, g: &GroupAction) -> Option<GroupAction> {
    if !cfg.normalizer_gens.is_empty() {
        let mut gens = cfg.normalizer_gens.clone();
        gens.extend(g.generators().iter().cloned());
        return GroupAction::new(g.degree(), gens).ok();
    }
    match normalizer_in_sym(g, NORMALIZER_NODE_BOUND) {
        Ok(n) => Some(n),
        Err(e) => {
            warn!("no normaliser, results are not reduced up to isomorphism: {e}");
            None
        }
    }
}

pub fn tau_maps(cfg: &JobConfig, g: &GroupAction, norm: Option<&GroupAction>) -> Result<Vec<TauMap>, PipelineError> {
    match &cfg.tau {
        TauSpec::Given(t) => {
            shape::validate_tau(g, t, &cfg.law)?;
            Ok(vec![t.clone()])
        }
        TauSpec::Enumerate => Ok(shape::enumerate_tau_maps(g, &cfg.law, norm)),
    }
}

/// The shape graph of a tau-map and the shapes the job asks for.
pub fn shapes(cfg: &JobConfig, g: &GroupAction, t: &TauMap, norm: Option<&GroupAction>) -> Result<(ShapeGraph, Vec<Shape>), PipelineError> {
    let graph = shape::shape_graph(g, t)?;
    let k = norm.map(|n| shape::tau_stabilizer(n, t));
    let all = shape::enumerate_shapes(&graph, k.as_ref());
    let chosen = match &cfg.shape {
        ShapeSpec::Enumerate => all,
        ShapeSpec::Label(label) => {
            // Compare against every shape, not only orbit representatives.
            let every = shape::enumerate_shapes(&graph, None);
            let s = every.into_iter().find(|s| &s.label(&graph) == label).ok_or_else(|| PipelineError::UnknownShape {
                label: label.clone(),
                known: all.iter().map(|s| s.label(&graph)).collect::<Vec<_>>().join(" "),
            })?;
            vec![s]
        }
    };
    for s in &chosen {
        shape::check_shape(g, t, &graph, s).map_err(|msg| PipelineError::BadShape { label: s.label(&graph), msg })?;
    }
    Ok((graph, chosen))
}

/// Invariants of a finished algebra and the outcome of the property checks.
#[derive(Clone, Debug)]
pub struct Summary {
    pub dim: usize,
    pub m: Option<usize>,
    pub form: FormResult,
    pub conditions: ConditionReport,
    /// Order of the group generated by the Miyamoto involutions.
    pub group_order: Option<usize>,
    /// Witnesses of failed checks; empty when everything holds.
    pub failures: Vec<String>,
}

impl Summary {
    /// `group0` and `tau` are what the algebra was built from, if known.
    pub fn of(alg: &Algebra, axis_values: &[Rat], group0: Option<&GroupAction>, tau: Option<&TauMap>) -> Summary {
        let form = frobenius_form(alg, axis_values);
        let failures = analysis::check_properties(alg, group0, tau, form.gram.as_ref(), axis_values);
        Summary {
            dim: alg.dim(),
            m: analysis::m_closure(alg),
            conditions: analysis::condition_report(alg),
            group_order: analysis::miyamoto_reconstruct(alg).ok().map(|(g, _)| g.order()),
            form,
            failures,
        }
    }

    pub fn form_label(&self) -> &'static str {
        self.form.class.label()
    }

    /// `dim=.. m=.. form=.. signature=(p,z,n) conditions=.. group=..`.
    pub fn report(&self) -> String {
        let (p, z, n) = self.form.signature;
        format!(
            "dim={} m={} form={} signature=({p},{z},{n}) conditions={} group={}",
            self.dim,
            self.m.map_or("-".into(), |m| m.to_string()),
            self.form_label(),
            self.conditions.summary(),
            self.group_order.map_or("-".into(), |o| o.to_string())
        )
    }
}

#[derive(Clone, Debug)]
pub struct ShapeRun {
    /// Index of the tau-map among those of the job.
    pub tau_index: usize,
    pub tau: TauMap,
    pub label: String,
    pub result: RunResult,
    pub summary: Option<Summary>,
}

impl ShapeRun {
    /// `GROUP AXES SHAPE dim m form status`.
    pub fn line(&self, cfg: &JobConfig) -> String {
        let (dim, m, form) = match (&self.summary, self.result.status) {
            (Some(s), _) => (s.dim.to_string(), s.m.map_or("-".into(), |m| m.to_string()), s.form_label()),
            (None, Status::Collapsed) => ("0".into(), "0".into(), "-"),
            (None, _) => ("-".into(), "-".into(), "-"),
        };
        format!("{} {} {} {} {} {} {}", cfg.name, cfg.orbit_label(), self.label, dim, m, form, self.result.status)
    }

    /// The full report line: invariants, whether the stabiliser deduction
    /// was used and whether all checks passed.
    pub fn report(&self) -> Option<String> {
        let s = self.summary.as_ref()?;
        let fired = if self.result.stats.fix_trick_fired { "fired" } else { "unused" };
        let checks = if s.failures.is_empty() { "ok" } else { "failed" };
        Some(format!("{} fix-trick={fired} checks={checks}", s.report()))
    }

    /// The finished algebra as a file, with its form and report.
    pub fn algebra_file(&self, cfg: &JobConfig) -> Option<AlgebraFile> {
        let alg = self.result.algebra.clone()?;
        let mut f = AlgebraFile::new(&cfg.name, alg);
        f.gens = cfg.gens.clone();
        f.tau = Some(self.tau.clone());
        f.shape = Some(self.label.clone());
        f.form = self.summary.as_ref().and_then(|s| s.form.gram.clone());
        f.report = self.report();
        Some(f)
    }
}

pub fn build_shape(cfg: &JobConfig, g: &GroupAction, t: &TauMap, graph: &ShapeGraph, s: &Shape, opts: &EngineOptions) -> ShapeRun {
    let result = engine::build(&cfg.law, g, t, graph, s, opts);
    let g0 = t.miyamoto_group();
    let summary = result.algebra.as_ref().map(|a| Summary::of(a, &cfg.axis_form_values(), Some(&g0), Some(t)));
    ShapeRun { tau_index: 0, tau: t.clone(), label: s.label(graph), result, summary }
}

/// Every `(tau, shape)` pair of a job, in order.
pub fn plan(cfg: &JobConfig, g: &GroupAction, norm: Option<&GroupAction>) -> Result<Vec<(usize, TauMap, ShapeGraph, Shape)>, PipelineError> {
    let mut out = Vec::new();
    for (k, t) in tau_maps(cfg, g, norm)?.into_iter().enumerate() {
        let (graph, shapes) = shapes(cfg, g, &t, norm)?;
        for s in shapes {
            out.push((k, t.clone(), graph.clone(), s));
        }
    }
    Ok(out)
}

/// Builds every planned pair on up to `jobs` threads. Results come back in
/// plan order whatever the number of threads; `done` sees each in that order
/// as soon as it and all earlier ones are finished.
pub fn build_all(
    cfg: &JobConfig,
    g: &GroupAction,
    plan: &[(usize, TauMap, ShapeGraph, Shape)],
    opts: &EngineOptions,
    jobs: usize,
    mut done: impl FnMut(&ShapeRun),
) -> Vec<ShapeRun> {
    let run = |i: usize| {
        let (k, t, graph, s) = &plan[i];
        let mut r = build_shape(cfg, g, t, graph, s, opts);
        r.tau_index = *k;
        r
    };
    if jobs <= 1 || plan.len() <= 1 {
        return (0..plan.len())
            .map(|i| {
                let r = run(i);
                done(&r);
                r
            })
            .collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let mut slots: Vec<Option<ShapeRun>> = vec![None; plan.len()];
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(plan.len()) {
            let tx = tx.clone();
            let (next, run) = (&next, &run);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= plan.len() || tx.send((i, run(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut emitted = 0;
        for (i, r) in rx {
            slots[i] = Some(r);
            while emitted < slots.len() {
                match &slots[emitted] {
                    Some(r) => done(r),
                    None => break,
                }
                emitted += 1;
            }
        }
    });
    slots.into_iter().map(|r| r.expect("every pair was built")).collect()
}

/// Tau-map classes and shape labels of a job.
pub fn listing(cfg: &JobConfig, g: &GroupAction, norm: Option<&GroupAction>) -> Result<String, PipelineError> {
    let taus = tau_maps(cfg, g, norm)?;
    let mut out = String::new();
    let mut lines = Vec::new();
    let mut total = 0;
    for (k, t) in taus.iter().enumerate() {
        let (graph, shapes) = shapes(cfg, g, t, norm)?;
        total += shapes.len();
        lines.push(format!("tau#{k} shapes={} miyamoto-group={}", shapes.len(), t.miyamoto_group().order()));
        for s in &shapes {
            lines.push(format!("tau#{k} shape={}", s.label(&graph)));
        }
    }
    out.push_str(&format!("{} {} taus={} shapes={total}\n", cfg.name, cfg.orbit_label(), taus.len()));
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    Ok(out)
}

/// Engine options from the defaults, overridden by the job file.
pub fn options(cfg: &JobConfig, mut base: EngineOptions) -> EngineOptions {
    if let Some(x) = cfg.max_expansions {
        base.max_expansions = x;
    }
    if let Some(x) = cfg.max_dim {
        base.max_dim = x;
    }
    if let Some(x) = cfg.fix_trick {
        base.fix_trick = x;
    }
    if let Some(x) = cfg.partial_expand {
        base.partial_expand = x;
    }
    base
}
