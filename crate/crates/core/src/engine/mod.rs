//! Expansion algorithm: grow a partial algebra from the axes, deduce
//! relations from gluings and eigenvectors, factor them out, repeat until the
//! products close up.

pub mod canonical;
mod gluing;
mod partial;

use std::fmt;
use std::time::{Duration, Instant};

use log::{debug, info, warn};

use crate::analysis::{self, Algebra};
use crate::linalg::field::PRIMES;
use crate::linalg::{Field, Fp, Rat};
use crate::fusion::FusionLaw;
use crate::permgroup::GroupAction;
use crate::shape::{Shape, ShapeGraph, TauMap};

use canonical::{Canonical, Residues};
pub use gluing::Gluing;
pub use partial::{Collapse, PartialAlgebra};

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub max_expansions: usize,
    pub max_dim: usize,
    pub time_budget: Option<Duration>,
    /// Use `u^g - u` for stabiliser elements to find eigenvectors early.
    pub fix_trick: bool,
    /// Expand over a `G`-submodule of the complement at a time.
    pub partial_expand: bool,
    /// Average to a group-invariant complement before expanding when the
    /// group has at most this many elements.
    pub invariant_complement_bound: Option<usize>,
    /// Factor out relations early once they exceed `1/early_reduce` of `W`.
    pub early_reduce: usize,
    /// Compute over the rationals instead of modulo primes.
    pub exact: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            max_expansions: 8,
            max_dim: 20_000,
            time_budget: None,
            fix_trick: true,
            partial_expand: false,
            invariant_complement_bound: Some(100_000),
            early_reduce: 8,
            exact: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Completed,
    Collapsed,
    Incomplete,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Completed => "completed",
            Status::Collapsed => "collapsed",
            Status::Incomplete => "incomplete",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, Default)]
pub struct Stats {
    pub expansions: usize,
    pub peak_dim: usize,
    pub expand_time: Duration,
    pub reduce_time: Duration,
    pub saturate_time: Duration,
    /// Why an incomplete or collapsed run stopped.
    pub reason: Option<String>,
    /// Number of primes used; zero for an exact run.
    pub moduli: usize,
    /// Whether the stabiliser deduction contributed anything. Without it the
    /// result is the universal algebra of the shape.
    pub fix_trick_fired: bool,
}

impl Stats {
    fn merge(&mut self, o: &Stats) {
        self.expansions = self.expansions.max(o.expansions);
        self.peak_dim = self.peak_dim.max(o.peak_dim);
        self.expand_time += o.expand_time;
        self.reduce_time += o.reduce_time;
        self.saturate_time += o.saturate_time;
        self.moduli += o.moduli;
        self.fix_trick_fired |= o.fix_trick_fired;
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub status: Status,
    pub algebra: Option<Algebra>,
    pub stats: Stats,
}

/// Builds the algebra for one shape.
///
/// By default the construction runs modulo large primes and the result is
/// lifted to the rationals, then checked exactly: it must be an axial algebra
/// for the law whose Miyamoto involutions induce the given tau-map. With
/// `exact` set the construction runs over the rationals throughout. Both give
/// the same algebra on the canonical basis.
pub fn build(law: &FusionLaw, group: &GroupAction, tau: &TauMap, graph: &ShapeGraph, shape: &Shape, opts: &EngineOptions) -> RunResult {
    if opts.exact {
        return build_exact(law, group, tau, graph, shape, opts);
    }
    let mut parts: Vec<Residues> = Vec::new();
    let mut stats = Stats::default();
    for k in 0..PRIMES.len() {
        let (status, st, res) = run_mod(k, law, group, tau, graph, shape, opts);
        stats.moduli += 1;
        stats.merge(&st);
        if status != Status::Completed {
            if parts.is_empty() {
                stats.reason = st.reason;
                return RunResult { status, algebra: None, stats };
            }
            warn!("prime {k} disagrees with earlier primes ({status}); skipping it");
            continue;
        }
        let res = res.expect("completed runs have a result");
        if parts.first().is_some_and(|p| p.origin != res.origin) {
            warn!("prime {k} gives a different closure basis; skipping it");
            continue;
        }
        parts.push(res);
        if parts.len() < 2 {
            continue;
        }
        let Some(c) = canonical::reconstruct(&parts) else { continue };
        let alg = c.to_algebra(law);
        match verify(&c, &alg, tau) {
            Ok(()) => {
                return RunResult { status: Status::Completed, algebra: Some(alg), stats };
            }
            Err(e) => debug!("lift from {} primes rejected: {e}", parts.len()),
        }
    }
    warn!("modular lifting failed; rerunning over the rationals");
    let mut r = build_exact(law, group, tau, graph, shape, opts);
    r.stats.merge(&stats);
    r
}

/// Exact checks on a lifted algebra.
pub fn verify(c: &Canonical<Rat>, alg: &Algebra, tau: &TauMap) -> Result<(), String> {
    if !canonical::origins_consistent(c) {
        return Err("closure basis is not reproduced".into());
    }
    let rep = analysis::verify_axial(alg);
    if let Some(v) = rep.violations.first() {
        return Err(v.to_string());
    }
    let (_, taus) = analysis::miyamoto_reconstruct(alg).map_err(|v| v.to_string())?;
    if taus.as_slice() != tau.as_slice() {
        return Err("Miyamoto involutions do not match the tau-map".into());
    }
    Ok(())
}

fn build_exact(law: &FusionLaw, group: &GroupAction, tau: &TauMap, graph: &ShapeGraph, shape: &Shape, opts: &EngineOptions) -> RunResult {
    let (status, stats, c) = run::<Rat>(law, group, tau, graph, shape, opts);
    RunResult { status, algebra: c.map(|c| c.to_algebra(law)), stats }
}

fn run_mod(k: usize, law: &FusionLaw, group: &GroupAction, tau: &TauMap, graph: &ShapeGraph, shape: &Shape, opts: &EngineOptions) -> (Status, Stats, Option<Residues>) {
    macro_rules! at {
        ($i:expr) => {{
            let (s, st, c) = run::<Fp<{ PRIMES[$i] }>>(law, group, tau, graph, shape, opts);
            (s, st, c.map(|c| c.residues()))
        }};
    }
    match k {
        0 => at!(0),
        1 => at!(1),
        2 => at!(2),
        3 => at!(3),
        4 => at!(4),
        _ => at!(5),
    }
}

/// One construction over the field `F`.
fn run<F: Field>(law: &FusionLaw, group: &GroupAction, tau: &TauMap, graph: &ShapeGraph, shape: &Shape, opts: &EngineOptions) -> (Status, Stats, Option<Canonical<F>>) {
    let start = Instant::now();
    let mut pa = PartialAlgebra::<F>::new(law, group, tau, graph, shape);
    let mut stats = Stats::default();
    let out_of_time = |stats: &Stats| opts.time_budget.is_some_and(|b| start.elapsed() > b) && stats.expansions > 0;
    let finish = |status, mut stats: Stats, pa: &PartialAlgebra<F>| {
        stats.expansions = pa.expansions;
        stats.peak_dim = pa.peak_dim;
        stats.fix_trick_fired = pa.fix_fired;
        let canon = (status == Status::Completed).then(|| {
            let (dim, mu, axes) = pa.finished();
            canonical::canonicalize(dim, mu, axes).expect("the axes generate the finished algebra")
        });
        (status, stats, canon)
    };
    let collapsed = |c: Collapse, mut stats: Stats, pa: &PartialAlgebra<F>| {
        stats.reason = Some(c.to_string());
        finish(Status::Collapsed, stats, pa)
    };
    pa.pull_eigenvectors();
    loop {
        if pa.is_closed() {
            return finish(Status::Completed, stats, &pa);
        }
        let next = if opts.partial_expand { pa.partial_expanded_dim() } else { pa.expanded_dim() };
        if pa.expansions >= opts.max_expansions || next > opts.max_dim {
            stats.reason = Some(format!("cap reached: {} expansions, next dimension {next}", pa.expansions));
            return finish(Status::Incomplete, stats, &pa);
        }
        if out_of_time(&stats) {
            stats.reason = Some("time budget exhausted".into());
            return finish(Status::Incomplete, stats, &pa);
        }

        let t = Instant::now();
        if opts.partial_expand {
            pa.expand_partial();
        } else {
            pa.expand(opts.invariant_complement_bound);
        }
        pa.glue_products();
        stats.expand_time += t.elapsed();
        info!("expansion {}: dim {} ({} closed)", pa.expansions, pa.dim(), pa.closed_dim());

        let t = Instant::now();
        if let Err(c) = pa.reduce() {
            return collapsed(c, stats, &pa);
        }
        pa.pull_eigenvectors();
        stats.reduce_time += t.elapsed();
        debug!("after gluing: dim {} ({} closed)", pa.dim(), pa.closed_dim());

        loop {
            let t = Instant::now();
            let mut changed = false;
            for k in 0..pa.states.len() {
                changed |= pa.saturate(k, opts.fix_trick);
                if pa.relations_dim() * opts.early_reduce > pa.dim() {
                    break;
                }
            }
            stats.saturate_time += t.elapsed();
            let t = Instant::now();
            if pa.relations_dim() > 0 && (!changed || pa.relations_dim() * opts.early_reduce > pa.dim()) {
                match pa.reduce() {
                    Err(c) => return collapsed(c, stats, &pa),
                    Ok(_) => {
                        pa.pull_eigenvectors();
                        changed = true;
                    }
                }
                debug!("reduced: dim {} ({} closed)", pa.dim(), pa.closed_dim());
            }
            stats.reduce_time += t.elapsed();
            if !changed {
                break;
            }
            if out_of_time(&stats) {
                stats.reason = Some("time budget exhausted".into());
                return finish(Status::Incomplete, stats, &pa);
            }
        }
    }
}
