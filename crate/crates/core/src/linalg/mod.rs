//! Exact linear algebra over the rationals.

pub mod field;
pub mod mat;
pub mod rat;
pub mod sparse;
pub mod subspace;

pub use field::{Field, Fp};
pub use mat::{symmetric_signature, Mat};
pub use rat::{q, Rat};
pub use sparse::SVec;
pub use subspace::{Quotient, Subspace};

/// Span of dense vectors in `Q^n`.
pub fn span(ambient: usize, vectors: &[Vec<Rat>]) -> Subspace {
    Subspace::span_dense(ambient, vectors)
}

pub fn intersect(s: &Subspace, t: &Subspace) -> Subspace {
    s.intersect(t)
}

pub fn sum(s: &Subspace, t: &Subspace) -> Subspace {
    s.sum(t)
}

/// Projection `Q^n -> Q^n / r` as a matrix with kernel exactly `r`.
pub fn quotient(r: &Subspace) -> (Mat, usize) {
    let q = Quotient::new(r.clone());
    let n = q.new_dim();
    (q.matrix(), n)
}

pub fn solve(a: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    a.solve(b)
}

pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    m.rref()
}
