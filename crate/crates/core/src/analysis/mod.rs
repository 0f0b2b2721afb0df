//! Post-hoc verification and invariants of finished algebras.

mod algebra;
pub mod conditions;
mod form;
mod properties;

use std::fmt;

pub use algebra::{tri, Algebra};
pub use conditions::{condition_report, dihedral_type, ConditionReport};
pub use form::{frobenius_form, pair, radical_quotient, FormClass, FormResult};
pub use properties::{check_form, check_properties};

use crate::fusion::{members, FusionLaw, ValueSet};
use crate::linalg::sparse::{self, SVec};
use crate::linalg::{Field, Mat, Rat, Subspace};
use crate::permgroup::{GroupAction, Perm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotIdempotent { axis: usize, defect: SVec },
    NotDiagonalisable { axis: usize, eigen_dim_sum: usize },
    Fusion { axis: usize, left: usize, right: usize, product: SVec },
    NotGenerated { spanned: usize },
    TauNotPermutation { axis: usize },
    NotPrimitive { axis: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotIdempotent { axis, defect } => write!(f, "axis {axis} is not idempotent: a^2 - a = {defect:?}"),
            Violation::NotDiagonalisable { axis, eigen_dim_sum } => {
                write!(f, "axis {axis}: eigenspaces for the law's values only span dimension {eigen_dim_sum}")
            }
            Violation::Fusion { axis, left, right, product } => {
                write!(f, "axis {axis}: product of eigenvectors for value indices {left},{right} leaves the allowed sum: {product:?}")
            }
            Violation::NotGenerated { spanned } => write!(f, "axes only generate a subalgebra of dimension {spanned}"),
            Violation::TauNotPermutation { axis } => write!(f, "Miyamoto involution of axis {axis} does not permute the axes"),
            Violation::NotPrimitive { axis } => write!(f, "axis {axis} is not primitive"),
        }
    }
}

/// Eigenspace decomposition of `ad_a` for one axis.
#[derive(Clone, Debug)]
pub struct AxisDecomp {
    /// Law value index of each row of `basis`.
    pub row_value: Vec<usize>,
    /// Eigenvectors as rows, grouped by value; for the value 1 the axis comes first.
    pub basis: Mat,
    pub inv: Mat,
}

impl AxisDecomp {
    pub fn coords(&self, x: &SVec) -> Vec<Rat> {
        let n = self.basis.nrows();
        let mut out = vec![Rat::zero(); n];
        for (i, v) in x {
            for (k, e) in self.inv.row(*i).iter().enumerate() {
                if !e.is_zero() {
                    out[k] += &(v * e);
                }
            }
        }
        out
    }

    pub fn space(&self, value: usize) -> Vec<SVec> {
        (0..self.row_value.len())
            .filter(|&k| self.row_value[k] == value)
            .map(|k| sparse::from_dense(self.basis.row(k)))
            .collect()
    }

    pub fn space_of_set(&self, s: ValueSet) -> Vec<SVec> {
        members(s).flat_map(|v| self.space(v)).collect()
    }

    pub fn dim_of(&self, value: usize) -> usize {
        self.row_value.iter().filter(|&&v| v == value).count()
    }

    /// The grading automorphism: identity on the even part, minus one on the odd part.
    pub fn tau_matrix(&self, law: &FusionLaw) -> Mat {
        let n = self.basis.nrows();
        let mut d = self.basis.clone();
        for k in 0..n {
            if law.minus() & (1 << self.row_value[k]) != 0 {
                for j in 0..n {
                    d[(k, j)] = -&d[(k, j)];
                }
            }
        }
        self.inv.mul(&d)
    }
}

/// Eigen-decomposition of `ad_x` over the law's values.
pub fn axis_decomposition(alg: &Algebra, axis: usize) -> Result<AxisDecomp, Violation> {
    let a = &alg.axes()[axis];
    let n = alg.dim();
    let sq = alg.mul(a, a);
    if &sq != a {
        return Err(Violation::NotIdempotent { axis, defect: sparse::sub(&sq, a) });
    }
    let ad = alg.adjoint(a);
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut row_value = Vec::new();
    let law = alg.law();
    let one = law.one_index();
    for (vi, val) in law.values().iter().enumerate() {
        let shifted = ad.sub(&Mat::identity(n).scale(val)).transpose();
        let ker = shifted.kernel();
        if vi == one {
            let mut s = Subspace::zero(n);
            s.insert(a);
            rows.push(sparse::to_dense(a, n));
            row_value.push(vi);
            for k in ker {
                if s.insert_dense(k.clone()) {
                    rows.push(k);
                    row_value.push(vi);
                }
            }
        } else {
            for k in ker {
                rows.push(k);
                row_value.push(vi);
            }
        }
    }
    if rows.len() != n {
        return Err(Violation::NotDiagonalisable { axis, eigen_dim_sum: rows.len() });
    }
    let basis = Mat::from_rows(rows);
    let inv = basis.inverse().ok_or(Violation::NotDiagonalisable { axis, eigen_dim_sum: n })?;
    Ok(AxisDecomp { row_value, basis, inv })
}

#[derive(Clone, Debug, Default)]
pub struct AxialReport {
    pub violations: Vec<Violation>,
    /// Per checked axis: whether the 1-eigenspace is spanned by the axis.
    pub primitive: Vec<(usize, bool)>,
    pub generated: bool,
}

impl AxialReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn all_primitive(&self) -> bool {
        self.primitive.iter().all(|p| p.1)
    }
}

/// Checks idempotency, semisimplicity over the law's values, the full fusion
/// law on an eigenbasis and generation. `only` restricts the per-axis checks.
pub fn verify_axial_axes(alg: &Algebra, only: Option<&[usize]>) -> AxialReport {
    let mut rep = AxialReport::default();
    let all: Vec<usize> = (0..alg.axes().len()).collect();
    let axes = only.unwrap_or(&all);
    let law = alg.law();
    for &x in axes {
        let dec = match axis_decomposition(alg, x) {
            Ok(d) => d,
            Err(v) => {
                rep.violations.push(v);
                continue;
            }
        };
        rep.primitive.push((x, dec.dim_of(law.one_index()) == 1));
        if let Some(v) = check_fusion(alg, x, &dec) {
            rep.violations.push(v);
        }
    }
    let cb = closure_basis(alg);
    rep.generated = cb.m.is_some();
    if !rep.generated {
        rep.violations.push(Violation::NotGenerated { spanned: cb.vectors.len() });
    }
    rep
}

pub fn verify_axial(alg: &Algebra) -> AxialReport {
    verify_axial_axes(alg, None)
}

fn check_fusion(alg: &Algebra, axis: usize, dec: &AxisDecomp) -> Option<Violation> {
    let law = alg.law();
    let spaces: Vec<Vec<SVec>> = (0..law.len()).map(|v| dec.space(v)).collect();
    for i in 0..law.len() {
        for j in i..law.len() {
            let allowed = law.star(i, j);
            for u in &spaces[i] {
                for v in &spaces[j] {
                    let w = alg.mul(u, v);
                    let c = dec.coords(&w);
                    if c.iter().enumerate().any(|(k, x)| !x.is_zero() && allowed & (1 << dec.row_value[k]) == 0) {
                        return Some(Violation::Fusion { axis, left: i, right: j, product: w });
                    }
                }
            }
        }
    }
    None
}

/// A spanning basis built level by level from the axes, each non-axis vector
/// recorded as the product of two earlier basis vectors.
#[derive(Clone, Debug)]
pub struct ClosureBasis<F = Rat> {
    pub vectors: Vec<SVec<F>>,
    pub level: Vec<usize>,
    /// `Err(axis index)` for axes, `Ok((i, j))` for `vectors[i] * vectors[j]`.
    pub origin: Vec<Result<(usize, usize), usize>>,
    /// Smallest `m` with the level-`m` span equal to the algebra.
    pub m: Option<usize>,
}

pub fn closure_basis(alg: &Algebra) -> ClosureBasis {
    closure_basis_with(alg.dim(), alg.axes(), |x, y| alg.mul(x, y))
}

/// [`closure_basis`] over any field, for an algebra of dimension `n` given by
/// its multiplication.
pub fn closure_basis_with<F: Field>(n: usize, axes: &[SVec<F>], mut mul: impl FnMut(&SVec<F>, &SVec<F>) -> SVec<F>) -> ClosureBasis<F> {
    let mut span = Subspace::zero(n);
    let mut cb = ClosureBasis { vectors: Vec::new(), level: Vec::new(), origin: Vec::new(), m: None };
    for (i, a) in axes.iter().enumerate() {
        if span.insert(a) {
            cb.vectors.push(a.clone());
            cb.level.push(1);
            cb.origin.push(Err(i));
        }
    }
    if span.dim() == n {
        cb.m = Some(1);
        return cb;
    }
    let mut last_nonempty = 1;
    let mut k = 2;
    while k <= 2 * last_nonempty {
        let mut added = false;
        for i in 1..=k / 2 {
            let levels = cb.level.clone();
            let by_level = |l: usize| -> Vec<usize> { (0..levels.len()).filter(|&x| levels[x] == l).collect() };
            let (li, lj) = (by_level(i), by_level(k - i));
            for &x in &li {
                for &y in &lj {
                    if i == k - i && y < x {
                        continue;
                    }
                    let p = mul(&cb.vectors[x], &cb.vectors[y]);
                    if span.insert(&p) {
                        cb.vectors.push(p);
                        cb.level.push(k);
                        cb.origin.push(Ok((x, y)));
                        added = true;
                    }
                }
            }
        }
        if added {
            last_nonempty = k;
        }
        if span.dim() == n {
            cb.m = Some(k);
            return cb;
        }
        k += 1;
    }
    cb
}

/// Minimal `m` such that products of at most `m` axes span the algebra.
pub fn m_closure(alg: &Algebra) -> Option<usize> {
    if alg.dim() == 0 {
        return Some(0);
    }
    closure_basis(alg).m
}

/// Miyamoto involutions of all axes as permutations of the axis list, and the
/// group they generate.
pub fn miyamoto_reconstruct(alg: &Algebra) -> Result<(GroupAction, Vec<Perm>), Violation> {
    let lookup = alg.axis_lookup();
    let n = alg.dim();
    let mut taus = Vec::new();
    for x in 0..alg.axes().len() {
        let dec = axis_decomposition(alg, x)?;
        let t = dec.tau_matrix(alg.law());
        let mut img = Vec::new();
        for a in alg.axes() {
            let v = sparse::from_dense(&t.vec_mul(&sparse::to_dense(a, n)));
            img.push(*lookup.get(&v).ok_or(Violation::TauNotPermutation { axis: x })?);
        }
        taus.push(Perm::from_images(img).map_err(|_| Violation::TauNotPermutation { axis: x })?);
    }
    let g = GroupAction::new(alg.axes().len(), taus.clone()).map_err(|_| Violation::TauNotPermutation { axis: 0 })?;
    Ok((g, taus))
}

/// Grading automorphisms of all axes as matrices acting on row vectors.
pub fn tau_matrices(alg: &Algebra) -> Result<Vec<Mat>, Violation> {
    (0..alg.axes().len()).map(|x| Ok(axis_decomposition(alg, x)?.tau_matrix(alg.law()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sparse::unit;

    fn two_b() -> Algebra {
        Algebra::from_fn(2, |i, j| if i == j { unit(i) } else { Vec::new() }, vec![unit(0), unit(1)], FusionLaw::monster())
    }

    #[test]
    fn two_b_is_one_closed_and_primitive() {
        let a = two_b();
        let r = verify_axial(&a);
        assert!(r.ok() && r.all_primitive());
        assert_eq!(m_closure(&a), Some(1));
        let (g, _) = miyamoto_reconstruct(&a).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn non_idempotent_axis_is_reported() {
        let a = Algebra::from_fn(1, |_, _| vec![(0, Rat::from_int(2))], vec![unit(0)], FusionLaw::monster());
        let r = verify_axial(&a);
        assert!(matches!(r.violations[0], Violation::NotIdempotent { .. }));
    }
}
