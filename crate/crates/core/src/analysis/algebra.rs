use std::collections::HashMap;

use crate::fusion::FusionLaw;
use crate::linalg::sparse::{self, SVec};
use crate::linalg::{Mat, Rat};

/// A commutative algebra given by structure constants on a basis, with a
/// distinguished list of axis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    /// Products `e_i e_j` for `i <= j`, indexed by `tri(i, j)`.
    mu: Vec<SVec>,
    axes: Vec<SVec>,
    law: FusionLaw,
}

#[inline]
pub fn tri(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl Algebra {
    pub fn new(dim: usize, mu: Vec<SVec>, axes: Vec<SVec>, law: FusionLaw) -> Algebra {
        assert_eq!(mu.len(), dim * (dim + 1) / 2, "structure constant count");
        Algebra { dim, mu, axes, law }
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> SVec, axes: Vec<SVec>, law: FusionLaw) -> Algebra {
        let mut mu = Vec::with_capacity(dim * (dim + 1) / 2);
        for j in 0..dim {
            for i in 0..=j {
                mu.push(f(i, j));
            }
        }
        Algebra::new(dim, mu, axes, law)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn axes(&self) -> &[SVec] {
        &self.axes
    }

    pub fn law(&self) -> &FusionLaw {
        &self.law
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SVec {
        &self.mu[tri(i, j)]
    }

    pub fn mul(&self, x: &SVec, y: &SVec) -> SVec {
        let mut acc = vec![Rat::zero(); self.dim];
        for (i, a) in x {
            for (j, b) in y {
                let c = a * b;
                sparse::axpy_dense(&mut acc, &c, &self.mu[tri(*i, *j)]);
            }
        }
        sparse::drain_dense(&mut acc)
    }

    /// Matrix of `v -> v x` acting on row vectors: row `i` is `e_i x`.
    pub fn adjoint(&self, x: &SVec) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            let mut acc = vec![Rat::zero(); self.dim];
            for (j, b) in x {
                sparse::axpy_dense(&mut acc, b, &self.mu[tri(i, *j)]);
            }
            for (k, v) in acc.into_iter().enumerate() {
                m[(i, k)] = v;
            }
        }
        m
    }

    /// Index of the axis equal to `v`, if any.
    pub fn axis_index(&self, v: &SVec) -> Option<usize> {
        self.axes.iter().position(|a| a == v)
    }

    pub fn axis_lookup(&self) -> HashMap<SVec, usize> {
        self.axes.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect()
    }

    /// Structure constants after the change of basis whose new basis vectors
    /// are the rows of `b` (invertible).
    pub fn change_basis(&self, b: &Mat) -> Algebra {
        let binv = b.inverse().expect("basis change must be invertible");
        let rows: Vec<SVec> = (0..self.dim).map(|i| sparse::from_dense(b.row(i))).collect();
        let to_new = |x: &SVec| sparse::from_dense(&binv.vec_mul(&sparse::to_dense(x, self.dim)));
        Algebra::from_fn(
            self.dim,
            |i, j| to_new(&self.mul(&rows[i], &rows[j])),
            self.axes.iter().map(to_new).collect(),
            self.law.clone(),
        )
    }
}
