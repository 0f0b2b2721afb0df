//! The partial algebra `(W, V, mu)` with its group action, known relations,
//! eigenvector information and gluings.
//!
//! `V` is always the coordinate prefix `e_0 .. e_{v-1}` of `W`, and products
//! are stored only for pairs inside `V`. Relations are collected in `rel` and
//! factored out by [`PartialAlgebra::reduce`].

use std::fmt;

use crate::analysis::tri;
use crate::catalog;
use crate::fusion::{members, FusionLaw, Rule, ValueSet};
use crate::linalg::sparse::{self, Accumulator, SVec};
use crate::linalg::{Field, Quotient, Rat, Subspace};
use crate::permgroup::GroupAction;
use crate::shape::{Shape, ShapeGraph, TauMap};

use super::gluing::Gluing;

/// Why a construction stopped with a degenerate result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Collapse {
    AxisVanishes(usize),
    AxesCoincide(usize, usize),
}

impl fmt::Display for Collapse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Collapse::AxisVanishes(x) => write!(f, "axis {x} lies in the relations"),
            Collapse::AxesCoincide(x, y) => write!(f, "axes {x} and {y} are identified"),
        }
    }
}

pub(crate) fn apply_rows<F: Field>(rows: &[SVec<F>], x: &SVec<F>, acc: &mut Accumulator<F>) -> SVec<F> {
    for (i, c) in x {
        acc.add_scaled(c, &rows[*i]);
    }
    acc.drain()
}

pub(crate) fn mul_in<F: Field>(mu: &[SVec<F>], x: &SVec<F>, y: &SVec<F>, acc: &mut Accumulator<F>) -> SVec<F> {
    for (i, a) in x {
        for (j, b) in y {
            acc.add_scaled(&a.fmul(b), &mu[tri(*i, *j)]);
        }
    }
    acc.drain()
}

/// Per axis-orbit representative: eigenvector spaces and bookkeeping of
/// which parts have already been pushed through each deduction.
#[derive(Default)]
pub(crate) struct AxisState<F: Field> {
    pub point: usize,
    pub tau: usize,
    pub stab: Vec<usize>,
    /// Indexed like `PartialAlgebra::sets`; each contains the relations.
    pub spaces: Vec<Subspace<F>>,
    pub closed: Vec<Subspace<F>>,
    pub projected: Vec<Subspace<F>>,
    pub lowered: Vec<Subspace<F>>,
    pub lowered_parts: [Subspace<F>; 2],
    pub rules_done: Vec<(Subspace<F>, Subspace<F>)>,
    pub meet_dims: Vec<usize>,
    pub fixed_at: Option<usize>,
    pub cache_epoch: Option<usize>,
    pub tau_rows: Vec<SVec<F>>,
    pub stab_rows: Vec<Vec<SVec<F>>>,
    /// `W_+ ∩ V` and `W_- ∩ V`.
    pub parts_v: [Subspace<F>; 2],
}

impl<F: Field> AxisState<F> {
    fn tracked_mut(&mut self) -> impl Iterator<Item = &mut Subspace<F>> {
        self.spaces
            .iter_mut()
            .chain(self.closed.iter_mut())
            .chain(self.projected.iter_mut())
            .chain(self.lowered.iter_mut())
            .chain(self.lowered_parts.iter_mut())
            .chain(self.rules_done.iter_mut().flat_map(|(a, b)| [a, b]))
    }
}

pub struct PartialAlgebra<F: Field> {
    pub(crate) law: FusionLaw,
    pub(crate) group: GroupAction,
    pub(crate) w: usize,
    pub(crate) v: usize,
    pub(crate) mu: Vec<SVec<F>>,
    /// Per group generator, the image of each basis vector.
    pub(crate) gens: Vec<Vec<SVec<F>>>,
    pub(crate) axes: Vec<SVec<F>>,
    pub(crate) gluings: Vec<Gluing<F>>,
    pub(crate) rel: Subspace<F>,
    rel_pending: Vec<SVec<F>>,
    rel_grown: Subspace<F>,
    pub(crate) states: Vec<AxisState<F>>,
    /// Pure value sets with explicit eigenspaces: all but the two grading parts.
    pub(crate) sets: Vec<ValueSet>,
    pub(crate) rules: Vec<Rule>,
    /// The law's eigenvalues in `F`.
    pub(crate) values: Vec<F>,
    /// Axis point -> index of its orbit's state.
    pub(crate) state_of: Vec<usize>,
    /// Axis point -> element carrying it to its orbit representative.
    pub(crate) transporter: Vec<usize>,
    pub(crate) acc: Accumulator<F>,
    pub(crate) epoch: usize,
    pub(crate) expansions: usize,
    pub(crate) peak_dim: usize,
    /// Whether the stabiliser deduction ever produced something new.
    pub(crate) fix_fired: bool,
}

impl<F: Field> PartialAlgebra<F> {
    pub fn new(law: &FusionLaw, group: &GroupAction, tau: &TauMap, graph: &ShapeGraph, shape: &Shape) -> Self {
        let n = group.degree();
        let gens = group.generators().iter().map(|g| (0..n).map(|i| sparse::unit(g.apply(i))).collect()).collect();
        let plus = law.plus();
        let minus = law.minus();
        let sets: Vec<ValueSet> = law.pure_subsets().into_iter().filter(|&s| s != plus && s != minus).collect();
        let mut pull_sets = sets.clone();
        pull_sets.extend([plus, minus].into_iter().filter(|&p| p != 0));
        let gluings = graph
            .vertices
            .iter()
            .zip(&shape.choice)
            .map(|(vx, name)| {
                let target = catalog::get(name).expect("shape names come from the catalog");
                Gluing::new(vx.rep, vx.polygon.points.clone(), target, n, &pull_sets)
            })
            .collect();
        let rules = law.useful_rules();
        let mut state_of = vec![0; n];
        let mut transporter = vec![0; n];
        let mut states = Vec::new();
        for orbit in group.orbits() {
            let x = orbit[0];
            for &y in &orbit {
                state_of[y] = states.len();
                transporter[y] = group.transporter(y, x).expect("same orbit");
            }
            let tau_elem = group.index_of(tau.get(x)).expect("tau lies in the group");
            let mut st = AxisState {
                point: x,
                tau: tau_elem,
                stab: group.stabilizer_generators(x),
                spaces: vec![Subspace::zero(n); sets.len()],
                closed: vec![Subspace::zero(n); sets.len()],
                projected: vec![Subspace::zero(n); sets.len()],
                lowered: vec![Subspace::zero(n); sets.len()],
                lowered_parts: [Subspace::zero(n), Subspace::zero(n)],
                rules_done: vec![(Subspace::zero(n), Subspace::zero(n)); rules.len()],
                ..Default::default()
            };
            let one = 1 << law.one_index();
            if let Some(k) = sets.iter().position(|&s| s == one) {
                st.spaces[k].insert(&sparse::unit(x));
            }
            states.push(st);
        }
        PartialAlgebra {
            law: law.clone(),
            group: group.clone(),
            w: n,
            v: 0,
            mu: Vec::new(),
            gens,
            axes: (0..n).map(sparse::unit).collect(),
            gluings,
            rel: Subspace::zero(n),
            rel_pending: Vec::new(),
            rel_grown: Subspace::zero(n),
            states,
            sets,
            rules,
            values: law.values().iter().map(|x| F::from_rat(x).expect("eigenvalue defined in the field")).collect(),
            state_of,
            transporter,
            acc: Accumulator::new(n),
            epoch: 0,
            expansions: 0,
            peak_dim: n,
            fix_fired: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.w
    }

    pub fn closed_dim(&self) -> usize {
        self.v
    }

    pub fn relations_dim(&self) -> usize {
        self.rel.dim()
    }

    pub fn is_closed(&self) -> bool {
        self.v == self.w && self.expansions > 0
    }

    pub fn mul(&mut self, x: &SVec<F>, y: &SVec<F>) -> SVec<F> {
        debug_assert!(x.iter().chain(y).all(|e| e.0 < self.v));
        mul_in(&self.mu, x, y, &mut self.acc)
    }

    pub fn apply_gen(&mut self, s: usize, x: &SVec<F>) -> SVec<F> {
        apply_rows(&self.gens[s], x, &mut self.acc)
    }

    pub fn apply_elem(&mut self, e: usize, x: &SVec<F>) -> SVec<F> {
        let mut y = x.clone();
        for s in self.group.word(e) {
            y = apply_rows(&self.gens[s], &y, &mut self.acc);
        }
        y
    }

    fn elem_rows(&mut self, e: usize) -> Vec<SVec<F>> {
        let word = self.group.word(e);
        (0..self.w)
            .map(|i| {
                let mut y = sparse::unit(i);
                for &s in &word {
                    y = apply_rows(&self.gens[s], &y, &mut self.acc);
                }
                y
            })
            .collect()
    }

    pub fn add_rel(&mut self, x: &SVec<F>) -> bool {
        if self.rel.insert(x) {
            self.rel_pending.push(x.clone());
            true
        } else {
            false
        }
    }

    /// Structure constants and axes of the finished algebra once `V = W`.
    pub fn finished(&self) -> (usize, &[SVec<F>], &[SVec<F>]) {
        assert!(self.is_closed());
        (self.w, &self.mu, &self.axes)
    }

    fn tracked_mut(&mut self) -> impl Iterator<Item = &mut Subspace<F>> {
        std::iter::once(&mut self.rel_grown).chain(self.states.iter_mut().flat_map(|s| s.tracked_mut()))
    }

    fn invalidate(&mut self) {
        self.epoch += 1;
        for st in &mut self.states {
            st.cache_epoch = None;
            st.meet_dims.clear();
        }
    }

    // ---- expansion ------------------------------------------------------

    /// Dimension after the next full expansion.
    pub fn expanded_dim(&self) -> usize {
        self.expanded_dim_to(self.w)
    }

    fn expanded_dim_to(&self, vp: usize) -> usize {
        let u = vp - self.v;
        self.w + self.v * u + u * (u + 1) / 2
    }

    /// `W ⊕ V⊗C ⊕ S²C`, where `C` is the complement of `V`; every product
    /// with a factor outside `V` becomes a new coordinate.
    pub fn expand(&mut self, invariant_complement: Option<usize>) {
        assert!(self.rel.is_zero(), "expansion with pending relations");
        if let Some(bound) = invariant_complement {
            self.make_complement_invariant(bound);
        }
        self.expand_to(self.w);
    }

    /// Dimension after [`PartialAlgebra::expand_partial`].
    pub fn partial_expanded_dim(&mut self) -> usize {
        let u = self.submodule_step().len();
        self.expanded_dim_to(self.v + u)
    }

    /// Expands only over a `G`-submodule: `V` grows to the submodule `V'`
    /// generated by `V` and the first complement coordinate, and only
    /// products inside `V'` become new coordinates. Products with a factor
    /// in the rest of `W` stay undefined until a later expansion.
    pub fn expand_partial(&mut self) {
        assert!(self.rel.is_zero(), "expansion with pending relations");
        let (v, w) = (self.v, self.w);
        let rows = self.submodule_step();
        let u = rows.len();
        if v + u == w {
            self.expand_to(w);
            return;
        }
        // New basis: e_i (i < v), the rows of the submodule by pivot, then the
        // remaining coordinates. The rows vanish below v and at each other's
        // pivots, which makes the coordinate map direct.
        let mut pivot_slot = vec![usize::MAX; w];
        for (k, r) in rows.iter().enumerate() {
            pivot_slot[r.last().expect("nonzero row").0] = v + k;
        }
        let mut pos = vec![0; w];
        let mut next = v + u;
        for (i, p) in pos.iter_mut().enumerate() {
            if i < v {
                *p = i;
            } else if pivot_slot[i] != usize::MAX {
                *p = pivot_slot[i];
            } else {
                *p = next;
                next += 1;
            }
        }
        let mut basis: Vec<SVec<F>> = vec![Vec::new(); w];
        for i in 0..w {
            if i < v || pivot_slot[i] == usize::MAX {
                basis[pos[i]] = sparse::unit(i);
            }
        }
        for (k, r) in rows.iter().enumerate() {
            basis[v + k] = r.clone();
        }
        let by_pivot: Vec<Option<&SVec<F>>> = (0..w).map(|i| (pivot_slot[i] != usize::MAX).then(|| &rows[pivot_slot[i] - v])).collect();
        let t = |x: &SVec<F>, acc: &mut Accumulator<F>| -> SVec<F> {
            for (i, c) in x {
                match by_pivot[*i] {
                    Some(r) => {
                        acc.add(pos[*i], c);
                        let minus = c.fneg();
                        for (j, d) in &r[..r.len() - 1] {
                            acc.add(pos[*j], &minus.fmul(d));
                        }
                    }
                    None => acc.add(pos[*i], c),
                }
            }
            acc.drain()
        };
        self.rebase(&basis, t);
        self.expand_to(v + u);
    }

    /// Reduced rows, with pivots at or above `v`, of the `G`-submodule
    /// generated by `V` and `e_v`, modulo `V`.
    fn submodule_step(&mut self) -> Vec<SVec<F>> {
        let (v, w) = (self.v, self.w);
        if v == w {
            return Vec::new();
        }
        let mut s = Subspace::prefix_coords(w, v);
        let mut queue = vec![sparse::unit(v)];
        s.insert(&queue[0]);
        while let Some(x) = queue.pop() {
            for g in 0..self.gens.len() {
                let y = self.apply_gen(g, &x);
                if s.insert(&y) {
                    queue.push(y);
                }
            }
        }
        let mut rows: Vec<SVec<F>> = s.rows().iter().filter(|r| r.last().expect("nonzero row").0 >= v).cloned().collect();
        rows.sort_by_key(|r| r.last().expect("nonzero row").0);
        rows
    }

    /// Expansion over the `G`-invariant coordinate prefix `[0, vp)`: every
    /// product of two of its vectors with a factor outside `V` becomes a new
    /// coordinate, and `V` becomes `[0, vp)`.
    fn expand_to(&mut self, vp: usize) {
        let (v, w) = (self.v, self.w);
        let u = vp - v;
        let new_w = self.expanded_dim_to(vp);
        let idx = |i: usize, j: usize| if i < v { w + i * u + (j - v) } else { w + v * u + tri(i - v, j - v) };
        let old = std::mem::take(&mut self.mu);
        let mut mu = Vec::with_capacity(vp * (vp + 1) / 2);
        let mut old = old.into_iter();
        for j in 0..vp {
            for i in 0..=j {
                mu.push(if j < v { old.next().expect("stored product") } else { sparse::unit(idx(i, j)) });
            }
        }
        self.mu = mu;
        self.v = vp;
        self.w = new_w;
        self.acc.ensure_len(new_w);
        for s in 0..self.gens.len() {
            let rows = std::mem::take(&mut self.gens[s]);
            debug_assert!(rows[..vp].iter().all(|r| r.last().map_or(true, |e| e.0 < vp)), "expanded prefix is invariant");
            let mut out = rows.clone();
            out.reserve(new_w - w);
            for i in 0..v {
                for j in v..vp {
                    out.push(mul_in(&self.mu, &rows[i], &rows[j], &mut self.acc));
                }
            }
            for jj in 0..u {
                for ii in 0..=jj {
                    out.push(mul_in(&self.mu, &rows[v + ii], &rows[v + jj], &mut self.acc));
                }
            }
            debug_assert_eq!(out.len(), new_w);
            self.gens[s] = out;
        }
        self.rel.extend_ambient(new_w);
        for s in self.tracked_mut() {
            s.extend_ambient(new_w);
        }
        for g in &mut self.gluings {
            g.extend_ambient(new_w);
        }
        self.expansions += 1;
        self.peak_dim = self.peak_dim.max(new_w);
        self.invalidate();
    }

    /// Changes basis of `W`. `basis[k]` is the new `k`-th basis vector in old
    /// coordinates and `t` maps old coordinates to new ones. Must fix `V`
    /// coordinatewise, since stored products are only rewritten, not
    /// recombined.
    fn rebase(&mut self, basis: &[SVec<F>], t: impl Fn(&SVec<F>, &mut Accumulator<F>) -> SVec<F>) {
        debug_assert!(self.rel.is_zero());
        let w = self.w;
        let mut acc = std::mem::take(&mut self.acc);
        for m in &mut self.mu {
            *m = t(m, &mut acc);
        }
        for a in &mut self.axes {
            *a = t(a, &mut acc);
        }
        for rows in &mut self.gens {
            let old = std::mem::take(rows);
            *rows = basis.iter().map(|b| {
                let img = apply_rows(&old, b, &mut acc);
                t(&img, &mut acc)
            }).collect();
        }
        let map = |s: &mut Subspace<F>, acc: &mut Accumulator<F>| {
            let mut out = Subspace::zero(w);
            for r in s.rows() {
                out.insert(&t(r, acc));
            }
            *s = out;
        };
        map(&mut self.rel_grown, &mut acc);
        for st in &mut self.states {
            for s in st.tracked_mut() {
                map(s, &mut acc);
            }
        }
        for g in &mut self.gluings {
            g.map_w_mut(w, |x| t(x, &mut acc));
        }
        self.acc = acc;
        self.invalidate();
    }

    /// Replaces the coordinate complement of `V` by a `G`-invariant one,
    /// using the group-averaged projection onto `V`. Skipped if the group
    /// has more than `bound` elements.
    fn make_complement_invariant(&mut self, bound: usize) {
        let (v, w) = (self.v, self.w);
        if v == 0 || v == w || self.group.order() > bound {
            return;
        }
        let invariant = self.gens.iter().all(|rows| rows[v..].iter().all(|r| r.iter().all(|e| e.0 >= v)));
        if invariant {
            return;
        }
        // proj[j - v] = average over g of ((e_j)^{g^-1} restricted to V)^g
        let mut proj: Vec<SVec<F>> = vec![Vec::new(); w - v];
        let order = self.group.order();
        for e in 0..order {
            let inv = self.group.index_of(&self.group.element(e).inverse()).expect("closed under inverses");
            let rows = self.elem_rows(inv);
            let word = self.group.word(e);
            for j in v..w {
                let y: SVec<F> = rows[j].iter().filter(|x| x.0 < v).cloned().collect();
                if y.is_empty() {
                    continue;
                }
                let mut z = y;
                for &s in &word {
                    z = apply_rows(&self.gens[s], &z, &mut self.acc);
                }
                proj[j - v] = sparse::add_scaled(&proj[j - v], &F::one(), &z);
            }
        }
        let scale = F::from_rat(&Rat::new(1, order as i64)).expect("group order invertible");
        for p in &mut proj {
            *p = sparse::scale(p, &scale);
        }
        // x -> x + sum_{j >= v} x_j P(e_j) rewrites coordinates in the basis
        // { e_i (i < v), e_j - P(e_j) (j >= v) }.
        let basis: Vec<SVec<F>> = (0..w)
            .map(|j| if j < v { sparse::unit(j) } else { sparse::sub(&sparse::unit(j), &proj[j - v]) })
            .collect();
        let t = |x: &SVec<F>, acc: &mut Accumulator<F>| -> SVec<F> {
            if x.last().map_or(true, |e| e.0 < v) {
                return x.clone();
            }
            acc.add_scaled(&F::one(), x);
            for (j, c) in x.iter().filter(|e| e.0 >= v) {
                acc.add_scaled(c, &proj[j - v]);
            }
            acc.drain()
        };
        self.rebase(&basis, t);
    }

    /// Adds products of pairs of glued vectors now inside `V`.
    pub fn glue_products(&mut self) {
        let v = self.v;
        let (mu, acc) = (&self.mu, &mut self.acc);
        let mut mul = |x: &SVec<F>, y: &SVec<F>| mul_in(mu, x, y, acc);
        for g in &mut self.gluings {
            g.add_products(v, &mut mul);
        }
    }

    // ---- relations ------------------------------------------------------

    fn close_rel(&mut self) -> bool {
        let mut grew = false;
        while let Some(x) = self.rel_pending.pop() {
            for s in 0..self.gens.len() {
                let y = self.apply_gen(s, &x);
                if self.rel.insert(&y) {
                    grew = true;
                    self.rel_pending.push(y);
                }
            }
        }
        grew
    }

    fn grow_rel(&mut self) -> bool {
        let v = self.v;
        let fresh: Vec<SVec<F>> = self.rel.prefix_rows(v).filter(|r| !self.rel_grown.contains(r)).cloned().collect();
        let mut grew = false;
        for r in fresh {
            if !self.rel_grown.insert(&r) {
                continue;
            }
            for j in 0..v {
                let p = self.mul(&r, &sparse::unit(j));
                grew |= self.add_rel(&p);
            }
        }
        grew
    }

    /// Closes the relations under the group, multiplication by `V` and the
    /// gluings, then factors them out. Returns whether `W` shrank.
    pub fn reduce(&mut self) -> Result<bool, Collapse> {
        loop {
            let mut grew = self.close_rel();
            grew |= self.grow_rel();
            if !self.rel.is_zero() {
                let q = Quotient::new(self.rel.clone());
                for g in &mut self.gluings {
                    g.push_relations(&q);
                }
            }
            let w = self.w;
            let kernels: Vec<Subspace<F>> = self.gluings.iter().map(|g| g.pullback(w, None)).collect();
            for k in &kernels {
                for r in k.rows() {
                    grew |= self.add_rel(r);
                }
            }
            grew |= !self.rel_pending.is_empty();
            if !grew {
                break;
            }
        }
        if self.rel.is_zero() {
            return Ok(false);
        }
        self.check_collapse()?;
        self.quotient();
        Ok(true)
    }

    fn check_collapse(&self) -> Result<(), Collapse> {
        for (x, a) in self.axes.iter().enumerate() {
            if self.rel.contains(a) {
                return Err(Collapse::AxisVanishes(x));
            }
        }
        for x in 0..self.axes.len() {
            for y in x + 1..self.axes.len() {
                if self.rel.contains(&sparse::sub(&self.axes[x], &self.axes[y])) {
                    return Err(Collapse::AxesCoincide(x, y));
                }
            }
        }
        Ok(())
    }

    fn quotient(&mut self) {
        let rel = std::mem::replace(&mut self.rel, Subspace::zero(0));
        let q = Quotient::new(rel);
        let (v, w) = (self.v, self.w);
        let nv = q.count_below(v);
        let nw = q.new_dim();
        let keep: Vec<usize> = (0..w).filter(|&i| q.index(i).is_some()).collect();
        let mut mu = Vec::with_capacity(nv * (nv + 1) / 2);
        for jj in 0..nv {
            for ii in 0..=jj {
                mu.push(q.apply(&self.mu[tri(keep[ii], keep[jj])]));
            }
        }
        self.mu = mu;
        for rows in &mut self.gens {
            *rows = keep.iter().map(|&i| q.apply(&rows[i])).collect();
        }
        for a in &mut self.axes {
            *a = q.apply(a);
        }
        for s in self.tracked_mut() {
            *s = q.apply_subspace(s);
        }
        for g in &mut self.gluings {
            g.map_w(nw, |x| q.apply(x));
        }
        self.rel = Subspace::zero(nw);
        self.rel_pending.clear();
        self.rel_grown = Subspace::zero(nw);
        self.v = nv;
        self.w = nw;
        self.invalidate();
    }

    // ---- eigenvectors ----------------------------------------------------

    fn ensure_cache(&mut self, k: usize) {
        if self.states[k].cache_epoch == Some(self.epoch) {
            return;
        }
        let tau_rows = self.elem_rows(self.states[k].tau);
        let stab_rows: Vec<Vec<SVec<F>>> = self.states[k].stab.clone().into_iter().map(|e| self.elem_rows(e)).collect();
        let v = self.v;
        let w = self.w;
        let mut plus = Subspace::zero(w);
        let mut minus = Subspace::zero(w);
        for (i, t) in tau_rows.iter().enumerate().take(v) {
            let e = sparse::unit(i);
            plus.insert(&sparse::add_scaled(&e, &F::one(), t));
            minus.insert(&sparse::sub(&e, t));
        }
        let st = &mut self.states[k];
        st.tau_rows = tau_rows;
        st.stab_rows = stab_rows;
        st.parts_v = [plus, minus];
        st.cache_epoch = Some(self.epoch);
    }

    /// Records that `x` lies in the eigenspace sum for `set` of axis state `k`.
    fn add_to(&mut self, k: usize, set: ValueSet, x: &SVec<F>) -> bool {
        if x.is_empty() {
            return false;
        }
        if set == 0 {
            return self.add_rel(x);
        }
        let (plus, minus) = (self.law.plus(), self.law.minus());
        if set == plus || set == minus {
            if minus == 0 {
                return false;
            }
            let t = apply_rows(&self.states[k].tau_rows, x, &mut self.acc);
            let c = if set == plus { F::one().fneg() } else { F::one() };
            return self.add_rel(&sparse::add_scaled(x, &c, &t));
        }
        let i = self.sets.iter().position(|&s| s == set).expect("pure value set");
        self.states[k].spaces[i].insert(x)
    }

    /// Pulls eigenvectors back from the catalog algebras through each
    /// gluing, moving them to the orbit representatives.
    pub fn pull_eigenvectors(&mut self) {
        let w = self.w;
        for gi in 0..self.gluings.len() {
            let pulls: Vec<(usize, ValueSet, Subspace<F>)> = {
                let g = &self.gluings[gi];
                let mut out = Vec::new();
                for (res, &y) in g.points.iter().enumerate() {
                    for set in self.sets.iter().copied().chain([self.law.plus(), self.law.minus()]) {
                        if let Some(b) = g.eigenspace(res, set) {
                            out.push((y, set, g.pullback(w, Some(b))));
                        }
                    }
                }
                out
            };
            for (y, set, sub) in pulls {
                let k = self.state_of[y];
                self.ensure_cache(k);
                let t = self.transporter[y];
                for r in sub.rows() {
                    let x = self.apply_elem(t, r);
                    self.add_to(k, set, &x);
                }
            }
        }
    }

    /// One pass of eigenvector deductions for axis state `k`. Returns
    /// whether anything new was learned.
    pub fn saturate(&mut self, k: usize, fix_trick: bool) -> bool {
        self.ensure_cache(k);
        let before = (self.rel.dim(), self.states[k].spaces.iter().map(Subspace::dim).sum::<usize>());
        let (v, w) = (self.v, self.w);
        let nsets = self.sets.len();
        let law = self.law.clone();
        let a = self.axes[self.states[k].point].clone();

        // relations lie in every eigenspace sum
        for i in 0..nsets {
            let st = &mut self.states[k];
            if st.spaces[i].dim() < self.rel.dim() || !self.rel.is_subspace_of(&st.spaces[i]) {
                st.spaces[i].add_all(&self.rel);
            }
        }

        // monotonicity
        for i in 0..nsets {
            for j in 0..nsets {
                if i != j && self.sets[i] & !self.sets[j] == 0 {
                    let src = self.states[k].spaces[i].clone();
                    let dst = &mut self.states[k].spaces[j];
                    if !src.is_subspace_of(dst) {
                        dst.add_all(&src);
                    }
                }
            }
        }

        // intersections
        let dims: Vec<usize> = self.states[k].spaces.iter().map(Subspace::dim).collect();
        if self.states[k].meet_dims != dims {
            for i in 0..nsets {
                for j in i + 1..nsets {
                    let (si, sj) = (self.sets[i], self.sets[j]);
                    if si & !sj == 0 || sj & !si == 0 || law.part_of(si) != law.part_of(sj) {
                        continue;
                    }
                    let meet = self.states[k].spaces[i].intersect(&self.states[k].spaces[j]);
                    for r in meet.rows().to_vec() {
                        self.add_to(k, si & sj, &r);
                    }
                }
            }
            self.states[k].meet_dims = self.states[k].spaces.iter().map(Subspace::dim).collect();
        }

        // grading: explicit sets lie in one part
        for i in 0..nsets {
            let part = law.part_of(self.sets[i]).expect("pure");
            let st = &mut self.states[k];
            let fresh = fresh_rows(&st.spaces[i], &mut st.projected[i], w);
            for r in fresh {
                self.add_to(k, part, &r);
            }
        }

        // multiplying down by the axis
        for i in 0..nsets {
            let set = self.sets[i];
            let inside = self.states[k].spaces[i].prefix(v);
            let fresh = fresh_rows(&inside, &mut self.states[k].lowered[i], w);
            for u in fresh {
                let ua = self.mul(&u, &a);
                for lam in members(set) {
                    let x = sparse::add_scaled(&ua, &self.values[lam].fneg(), &u);
                    self.add_to(k, set & !(1 << lam), &x);
                }
            }
        }
        for (p, part) in [law.plus(), law.minus()].into_iter().enumerate() {
            if part == 0 {
                continue;
            }
            let inside = self.states[k].parts_v[p].clone();
            let fresh = fresh_rows(&inside, &mut self.states[k].lowered_parts[p], w);
            for u in fresh {
                let ua = self.mul(&u, &a);
                for lam in members(part) {
                    let x = sparse::add_scaled(&ua, &self.values[lam].fneg(), &u);
                    self.add_to(k, part & !(1 << lam), &x);
                }
            }
        }

        // fusion rules
        for ri in 0..self.rules.len() {
            let rule = self.rules[ri];
            let left = self.space_in_v(k, rule.left);
            let right = self.space_in_v(k, rule.right);
            let (mut dl, mut dr) = std::mem::take(&mut self.states[k].rules_done[ri]);
            if dl.ambient_dim() != w {
                dl = Subspace::zero(w);
                dr = Subspace::zero(w);
            }
            let old_left: Vec<SVec<F>> = dl.rows().to_vec();
            let fresh_left = fresh_rows(&left, &mut dl, w);
            let fresh_right = fresh_rows(&right, &mut dr, w);
            for u in &fresh_left {
                for y in right.rows() {
                    let p = self.mul(u, y);
                    self.add_to(k, rule.result, &p);
                }
            }
            if rule.left != rule.right {
                for u in &old_left {
                    for y in &fresh_right {
                        let p = self.mul(u, y);
                        self.add_to(k, rule.result, &p);
                    }
                }
            }
            self.states[k].rules_done[ri] = (dl, dr);
        }

        // u^g - u has no 1-component for u in W_+ and g fixing the axis
        if fix_trick && self.states[k].fixed_at != Some(self.expansions) && law.minus() != 0 {
            let target = law.plus() & !(1 << law.one_index());
            if target != 0 {
                for i in 0..w {
                    let u = sparse::add_scaled(&sparse::unit(i), &F::one(), &self.states[k].tau_rows[i]);
                    for s in 0..self.states[k].stab_rows.len() {
                        let ug = apply_rows(&self.states[k].stab_rows[s], &u, &mut self.acc);
                        self.fix_fired |= self.add_to(k, target, &sparse::sub(&ug, &u));
                    }
                }
            }
            self.states[k].fixed_at = Some(self.expansions);
        }

        // closure under the stabiliser
        for i in 0..nsets {
            loop {
                let fresh = fresh_rows(&self.states[k].spaces[i].clone(), &mut self.states[k].closed[i], w);
                if fresh.is_empty() {
                    break;
                }
                for r in fresh {
                    for s in 0..self.states[k].stab_rows.len() {
                        let y = apply_rows(&self.states[k].stab_rows[s], &r, &mut self.acc);
                        self.states[k].spaces[i].insert(&y);
                    }
                }
            }
        }

        let after = (self.rel.dim(), self.states[k].spaces.iter().map(Subspace::dim).sum::<usize>());
        after != before
    }

    /// The eigenspace sum for `set` intersected with `V`.
    fn space_in_v(&self, k: usize, set: ValueSet) -> Subspace<F> {
        let st = &self.states[k];
        if set == self.law.plus() {
            return st.parts_v[0].clone();
        }
        if set == self.law.minus() {
            return st.parts_v[1].clone();
        }
        let i = self.sets.iter().position(|&s| s == set).expect("pure value set");
        st.spaces[i].prefix(self.v)
    }
}

/// Rows of `space` not yet in `done`, recording them in `done`.
fn fresh_rows<F: Field>(space: &Subspace<F>, done: &mut Subspace<F>, w: usize) -> Vec<SVec<F>> {
    if done.ambient_dim() != w {
        *done = Subspace::zero(w);
    }
    if done.dim() == space.dim() {
        return Vec::new();
    }
    space.rows().iter().filter(|r| done.insert(r)).cloned().collect()
}

