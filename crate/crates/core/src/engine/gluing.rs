//! Partial homomorphisms from dihedral catalog algebras into the algebra
//! being built.
//!
//! A gluing is stored as its graph `{(b, w)}` inside `B ⊕ W`, with the `B`
//! coordinates first. Rows whose pivot lies in the `B` block are pairs
//! `(b, 0)`: the part of `B` already known to map to zero.

use crate::catalog::DihedralAlgebra;
use crate::fusion::ValueSet;
use crate::analysis::tri;
use crate::linalg::sparse::{self, Accumulator, SVec};
use crate::linalg::{Field, Quotient, Subspace};

use super::partial::mul_in;

#[derive(Clone, Debug)]
pub struct Gluing<F: Field> {
    /// Orbit representative `(a, b)` of the pair this gluing belongs to.
    pub pair: (usize, usize),
    /// The polygon `a_0, a_1, ...` of axis points.
    pub points: Vec<usize>,
    pub target: &'static DihedralAlgebra,
    /// Structure constants of the target, indexed by `tri`.
    bmu: Vec<SVec<F>>,
    acc: Accumulator<F>,
    graph: Subspace<F>,
    /// Subspace<F> of the graph whose pairwise products are already in.
    multiplied: Subspace<F>,
    /// Eigenspaces of the polygon axes of `B`, indexed by residue, keyed by value set.
    eig: Vec<Vec<(ValueSet, Subspace<F>)>>,
}

impl<F: Field> Gluing<F> {
    pub fn new(pair: (usize, usize), points: Vec<usize>, target: &'static DihedralAlgebra, w: usize, sets: &[ValueSet]) -> Self {
        let db = target.dim();
        let conv = |x: &SVec| sparse::convert::<F>(x).expect("catalog constants defined in the field");
        let mut graph = Subspace::zero(db + w);
        for (i, &x) in points.iter().enumerate() {
            graph.insert(&vec![(target.polygon[i], F::one()), (db + x, F::one())]);
        }
        let eig = (0..target.n)
            .map(|i| {
                let dec = target.decomposition(i);
                sets.iter()
                    .map(|&s| {
                        let rows: Vec<SVec<F>> = dec.space_of_set(s).iter().map(conv).collect();
                        (s, Subspace::span_sparse(db, &rows))
                    })
                    .collect()
            })
            .collect();
        let mut bmu = Vec::with_capacity(db * (db + 1) / 2);
        for j in 0..db {
            for i in 0..=j {
                bmu.push(conv(target.algebra.basis_product(i, j)));
            }
        }
        debug_assert_eq!(bmu.len(), tri(db - 1, db - 1) + 1);
        Gluing { pair, points, target, bmu, acc: Accumulator::new(db), graph, multiplied: Subspace::zero(db + w), eig }
    }

    fn db(&self) -> usize {
        self.target.dim()
    }

    fn split(&self, r: &SVec<F>) -> (SVec<F>, SVec<F>) {
        let db = self.db();
        let b = r.iter().filter(|e| e.0 < db).cloned().collect();
        let w = r.iter().filter(|e| e.0 >= db).map(|(i, x)| (i - db, x.clone())).collect();
        (b, w)
    }

    fn join(&self, b: &SVec<F>, w: &SVec<F>) -> SVec<F> {
        let db = self.db();
        let mut out = b.clone();
        out.extend(w.iter().map(|(i, x)| (i + db, x.clone())));
        out
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    /// Dimension of the part of `B` known to vanish.
    pub fn ideal_dim(&self) -> usize {
        self.graph.prefix_rows(self.db()).count()
    }

    /// Whether the whole of `B` maps to zero, i.e. the gluing collapsed.
    pub fn collapsed(&self) -> bool {
        self.ideal_dim() == self.db()
    }

    pub fn extend_ambient(&mut self, w: usize) {
        let n = self.db() + w;
        self.graph.extend_ambient(n);
        self.multiplied.extend_ambient(n);
    }

    /// Applies a linear map to the `W` components.
    pub fn map_w(&mut self, w: usize, f: impl Fn(&SVec<F>) -> SVec<F>) {
        self.map_w_mut(w, f)
    }

    pub fn map_w_mut(&mut self, w: usize, mut f: impl FnMut(&SVec<F>) -> SVec<F>) {
        let n = self.db() + w;
        let mut graph = Subspace::zero(n);
        let mut multiplied = Subspace::zero(n);
        for (src, dst) in [(&self.graph, &mut graph), (&self.multiplied, &mut multiplied)] {
            for r in src.rows() {
                let (b, x) = self.split(r);
                dst.insert(&self.join(&b, &f(&x)));
            }
        }
        self.graph = graph;
        self.multiplied = multiplied;
    }

    /// Adds `(b_k b_l, w_k w_l)` for pairs of graph rows inside `B ⊕ V`, where
    /// `V` is the coordinate prefix of length `v` on which `mul` is defined.
    /// Returns whether the graph grew.
    pub fn add_products(&mut self, v: usize, mul: &mut impl FnMut(&SVec<F>, &SVec<F>) -> SVec<F>) -> bool {
        let db = self.db();
        let inside: Vec<SVec<F>> = self.graph.prefix_rows(db + v).cloned().collect();
        let fresh: Vec<SVec<F>> = {
            let mut s = self.multiplied.clone();
            inside.iter().filter(|r| s.insert(r)).cloned().collect()
        };
        if fresh.is_empty() {
            return false;
        }
        let halves: Vec<(SVec<F>, SVec<F>)> = inside.iter().map(|r| self.split(r)).collect();
        let fresh: Vec<(SVec<F>, SVec<F>)> = fresh.iter().map(|r| self.split(r)).collect();
        let mut grew = false;
        for (fb, fw) in &fresh {
            for (hb, hw) in &halves {
                let bb = mul_in(&self.bmu, fb, hb, &mut self.acc);
                let row = self.join(&bb, &mul(fw, hw));
                grew |= self.graph.insert(&row);
            }
        }
        for r in &inside {
            self.multiplied.insert(r);
        }
        grew
    }

    /// Pushes relations into `B`: every `b` with `(b, w)` in the graph for
    /// some `w` in `rel` is added as `(b, 0)`, and the vanishing part of `B`
    /// is closed to an ideal. Returns whether anything changed.
    pub fn push_relations(&mut self, rel: &Quotient<F>) -> bool {
        let db = self.db();
        let wq = rel.new_dim();
        let mut layout = Subspace::zero(db + wq);
        for r in self.graph.rows() {
            let (b, w) = self.split(r);
            let mut row = b;
            row.extend(rel.apply(&w).into_iter().map(|(i, x)| (i + db, x)));
            layout.insert(&row);
        }
        let mut changed = false;
        for r in layout.prefix_rows(db) {
            changed |= self.graph.insert(r);
        }
        changed | self.close_ideal()
    }

    fn close_ideal(&mut self) -> bool {
        let db = self.db();
        let mut changed = false;
        let mut k = 0;
        let mut queue: Vec<SVec<F>> = self.graph.prefix_rows(db).cloned().collect();
        while k < queue.len() {
            for i in 0..db {
                let p = mul_in(&self.bmu, &queue[k], &sparse::unit(i), &mut self.acc);
                if self.graph.insert(&p) {
                    changed = true;
                    queue.push(p);
                }
            }
            k += 1;
        }
        changed
    }

    /// `{w : (b, w) in graph for some b in j}`; `None` means `j = 0`.
    pub fn pullback(&self, w: usize, j: Option<&Subspace<F>>) -> Subspace<F> {
        let db = self.db();
        let q = Quotient::new(j.cloned().unwrap_or_else(|| Subspace::zero(db)));
        let mut layout = Subspace::zero(w + q.new_dim());
        for r in self.graph.rows() {
            let (b, x) = self.split(r);
            let mut row = x;
            row.extend(q.apply(&b).into_iter().map(|(i, c)| (i + w, c)));
            layout.insert(&row);
        }
        let mut out = Subspace::zero(w);
        for r in layout.prefix_rows(w) {
            out.insert(r);
        }
        out
    }

    /// Eigenspace of the polygon axis at `residue` for a value set.
    pub fn eigenspace(&self, residue: usize, set: ValueSet) -> Option<&Subspace<F>> {
        self.eig[residue].iter().find(|e| e.0 == set).map(|e| &e.1)
    }
}
