//! Subspaces of `Q^n` in fully reduced echelon form.
//!
//! Pivots are taken at the *last* nonzero coordinate of each row and every
//! other row is zero in that column. With this convention the intersection
//! with a coordinate prefix `span(e_0..e_{k-1})` is just the set of rows whose
//! pivot is below `k`, which the expansion engine relies on heavily.

use std::fmt;

use super::field::Field;
use super::mat::Mat;
use super::rat::Rat;
use super::sparse::{self, SVec};

const NONE: u32 = u32::MAX;

#[derive(Clone)]
pub struct Subspace<F = Rat> {
    ambient: usize,
    rows: Vec<SVec<F>>,
    pivot_row: Vec<u32>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivot_row: vec![NONE; ambient] }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Subspace::zero(ambient);
        for i in 0..ambient {
            s.pivot_row[i] = i as u32;
            s.rows.push(sparse::unit(i));
        }
        s
    }

    /// Span of `e_0 .. e_{k-1}`.
    pub fn prefix_coords(ambient: usize, k: usize) -> Self {
        let mut s = Subspace::zero(ambient);
        for i in 0..k {
            s.pivot_row[i] = i as u32;
            s.rows.push(sparse::unit(i));
        }
        s
    }

    pub fn span_dense<'a>(ambient: usize, vs: impl IntoIterator<Item = &'a Vec<F>>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vs {
            s.insert_dense(v.clone());
        }
        s
    }

    pub fn span_sparse<'a>(ambient: usize, vs: impl IntoIterator<Item = &'a SVec<F>>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows in storage order; each row's last entry is its pivot with value 1.
    pub fn rows(&self) -> &[SVec<F>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.last().unwrap().0).collect();
        p.sort_unstable();
        p
    }

    pub fn has_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NONE
    }

    /// Canonical basis, sorted by pivot.
    pub fn basis(&self) -> Vec<SVec<F>> {
        let mut r = self.rows.clone();
        r.sort_by_key(|x| x.last().unwrap().0);
        r
    }

    /// Reduces a dense vector modulo the subspace, in place.
    pub fn reduce_dense(&self, x: &mut [F]) {
        debug_assert_eq!(x.len(), self.ambient);
        if self.rows.len() * 4 < self.ambient {
            for r in &self.rows {
                let p = r.last().unwrap().0;
                if !x[p].is_zero() {
                    let c = x[p].fneg();
                    sparse::axpy_dense(x, &c, r);
                }
            }
        } else {
            for p in 0..self.ambient {
                let k = self.pivot_row[p];
                if k != NONE && !x[p].is_zero() {
                    let c = x[p].fneg();
                    sparse::axpy_dense(x, &c, &self.rows[k as usize]);
                }
            }
        }
    }

    pub fn reduce(&self, x: &SVec<F>) -> SVec<F> {
        let mut d = sparse::to_dense(x, self.ambient);
        self.reduce_dense(&mut d);
        sparse::drain_dense(&mut d)
    }

    pub fn contains(&self, x: &SVec<F>) -> bool {
        if x.iter().all(|(i, _)| self.pivot_row[*i] == NONE) {
            return x.is_empty();
        }
        self.reduce(x).is_empty()
    }

    pub fn contains_dense(&self, x: &[F]) -> bool {
        let mut d = x.to_vec();
        self.reduce_dense(&mut d);
        d.iter().all(|v| v.is_zero())
    }

    /// Adds a vector; returns whether the dimension grew.
    pub fn insert(&mut self, x: &SVec<F>) -> bool {
        if x.is_empty() {
            return false;
        }
        self.insert_dense(sparse::to_dense(x, self.ambient))
    }

    pub fn insert_dense(&mut self, mut x: Vec<F>) -> bool {
        self.reduce_dense(&mut x);
        self.insert_reduced(sparse::drain_dense(&mut x))
    }

    /// Inserts a vector already reduced modulo `self`.
    pub fn insert_reduced(&mut self, mut r: SVec<F>) -> bool {
        let Some(&(p, ref lead)) = r.last() else { return false };
        if !lead.is_one() {
            let inv = lead.finv();
            for e in r.iter_mut() {
                e.1 = e.1.fmul(&inv);
            }
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = sparse::get(row, p) {
                let c = c.fneg();
                *row = sparse::add_scaled(row, &c, &r);
            }
        }
        self.pivot_row[p] = self.rows.len() as u32;
        self.rows.push(r);
        true
    }

    /// `self += other`; returns whether anything changed.
    pub fn add_all(&mut self, other: &Self) -> bool {
        let mut changed = false;
        for r in &other.rows {
            changed |= self.insert(r);
        }
        changed
    }

    pub fn sum(&self, other: &Self) -> Self {
        let (big, small) = if self.dim() >= other.dim() { (self, other) } else { (other, self) };
        let mut s = big.clone();
        s.add_all(small);
        s
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains(r))
    }

    /// Zassenhaus-style intersection: residues of the smaller space modulo the
    /// larger are eliminated jointly with the original vectors on a doubled
    /// ambient space; rows whose residue half vanishes span the intersection.
    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.ambient, other.ambient);
        let (small, big) = if self.dim() <= other.dim() { (self, other) } else { (other, self) };
        let n = self.ambient;
        if small.is_zero() {
            return Subspace::zero(n);
        }
        if small.rows.iter().all(|r| big.contains(r)) {
            return small.clone();
        }
        let mut aux = Subspace::zero(2 * n);
        for r in &small.rows {
            let mut d = sparse::to_dense(r, n);
            big.reduce_dense(&mut d);
            let mut v: SVec<F> = r.clone();
            for (i, x) in d.into_iter().enumerate() {
                if !x.is_zero() {
                    v.push((n + i, x));
                }
            }
            aux.insert(&v);
        }
        let mut out = Subspace::zero(n);
        for r in &aux.rows {
            if r.last().unwrap().0 < n {
                out.insert(r);
            }
        }
        out
    }

    /// Rows whose pivot lies below `k`: the intersection with `span(e_0..e_{k-1})`.
    pub fn prefix(&self, k: usize) -> Self {
        let mut s = Subspace::zero(self.ambient);
        for r in &self.rows {
            let p = r.last().unwrap().0;
            if p < k {
                s.pivot_row[p] = s.rows.len() as u32;
                s.rows.push(r.clone());
            }
        }
        s
    }

    pub fn prefix_rows(&self, k: usize) -> impl Iterator<Item = &SVec<F>> {
        self.rows.iter().filter(move |r| r.last().unwrap().0 < k)
    }

    /// Embeds into a larger ambient space (new trailing coordinates are zero).
    pub fn extend_ambient(&mut self, n: usize) {
        assert!(n >= self.ambient);
        self.ambient = n;
        self.pivot_row.resize(n, NONE);
    }

    /// Image under a linear map given on rows.
    pub fn map(&self, new_ambient: usize, f: impl Fn(&SVec<F>) -> SVec<F>) -> Self {
        let mut s = Subspace::zero(new_ambient);
        for r in &self.rows {
            s.insert(&f(r));
        }
        s
    }
}

impl Subspace<Rat> {
    pub fn basis_matrix(&self) -> Mat {
        let b = self.basis();
        let mut m = Mat::zeros(b.len(), self.ambient);
        for (i, r) in b.iter().enumerate() {
            for (j, v) in r {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }
}

impl<F: Field> Default for Subspace<F> {
    fn default() -> Self {
        Subspace::zero(0)
    }
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.dim() == o.dim() && self.basis() == o.basis()
    }
}

impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient, self.basis())
    }
}

/// Projection onto `Q^n / R` in surviving coordinates.
///
/// Surviving coordinates are the non-pivot columns of `R`; their relative
/// order is preserved, so a coordinate prefix maps onto a coordinate prefix.
#[derive(Clone)]
pub struct Quotient<F = Rat> {
    rel: Subspace<F>,
    new_index: Vec<u32>,
    new_dim: usize,
}

impl<F: Field> Quotient<F> {
    pub fn new(rel: Subspace<F>) -> Self {
        let mut new_index = vec![NONE; rel.ambient];
        let mut k = 0;
        for i in 0..rel.ambient {
            if !rel.has_pivot(i) {
                new_index[i] = k;
                k += 1;
            }
        }
        Quotient { rel, new_index, new_dim: k as usize }
    }

    pub fn old_dim(&self) -> usize {
        self.rel.ambient
    }

    pub fn new_dim(&self) -> usize {
        self.new_dim
    }

    pub fn relations(&self) -> &Subspace<F> {
        &self.rel
    }

    /// New index of an old coordinate, if it survives.
    pub fn index(&self, i: usize) -> Option<usize> {
        let k = self.new_index[i];
        (k != NONE).then_some(k as usize)
    }

    /// Number of surviving coordinates below `k`.
    pub fn count_below(&self, k: usize) -> usize {
        (0..k).filter(|&i| self.new_index[i] != NONE).count()
    }

    pub fn apply(&self, x: &SVec<F>) -> SVec<F> {
        if x.iter().all(|(i, _)| !self.rel.has_pivot(*i)) {
            return x.iter().map(|(i, v)| (self.new_index[*i] as usize, v.clone())).collect();
        }
        let mut d = sparse::to_dense(x, self.rel.ambient);
        self.rel.reduce_dense(&mut d);
        let mut out = Vec::new();
        for (i, v) in d.into_iter().enumerate() {
            if !v.is_zero() {
                out.push((self.new_index[i] as usize, v));
            }
        }
        out
    }

    pub fn apply_subspace(&self, s: &Subspace<F>) -> Subspace<F> {
        s.map(self.new_dim, |r| self.apply(r))
    }
}

impl<F: Field> fmt::Debug for Quotient<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quotient({} -> {}) {:?}", self.rel.ambient, self.new_dim, self.rel)
    }
}

impl Quotient<Rat> {
    /// The projection as a `(n - dim R) x n` matrix acting on column vectors.
    pub fn matrix(&self) -> Mat {
        let n = self.rel.ambient;
        let mut m = Mat::zeros(self.new_dim, n);
        for j in 0..n {
            for (i, v) in self.apply(&sparse::unit(j)) {
                m[(i, j)] = v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat::q;

    fn sv(xs: &[(usize, i64)]) -> SVec {
        xs.iter().map(|&(i, v)| (i, Rat::from_int(v))).collect()
    }

    #[test]
    fn trailing_pivots_and_prefix() {
        let mut s = Subspace::zero(4);
        assert!(s.insert(&sv(&[(0, 1), (2, 2)])));
        assert!(s.insert(&sv(&[(0, 1), (1, 1), (3, 1)])));
        assert!(!s.insert(&sv(&[(0, 2), (2, 4)])));
        assert_eq!(s.pivots(), vec![2, 3]);
        assert_eq!(s.prefix(3).dim(), 1);
        let b = s.basis();
        assert_eq!(b[0], vec![(0, q(1, 2)), (2, Rat::one())]);
    }

    #[test]
    fn intersection_small() {
        let a = Subspace::span_sparse(3, &[sv(&[(0, 1)]), sv(&[(1, 1)])]);
        let b = Subspace::span_sparse(3, &[sv(&[(0, 1), (1, 1)]), sv(&[(2, 1)])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&sv(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn quotient_keeps_prefix_order() {
        let r = Subspace::span_sparse(4, &[sv(&[(1, 1), (3, -1)])]);
        let qt = Quotient::new(r);
        assert_eq!(qt.new_dim(), 3);
        assert_eq!(qt.apply(&sv(&[(3, 1)])), sv(&[(1, 1)]));
        assert_eq!(qt.apply(&sv(&[(1, 1), (3, -1)])), sv(&[]));
        assert_eq!(qt.index(2), Some(2));
    }
}
