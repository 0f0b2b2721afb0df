//! Frobenius forms.
//!
//! For an axis `a` the eigenspaces of `ad_a` are orthogonal under any
//! associating form, so `(a, x)` only sees the 1-eigencomponent of `x`. When
//! the axes generate the algebra this pins the form down from its values on
//! the 1-eigenspaces, via `(xy, v) = (x, yv)` along a product basis. The
//! unknown values on larger 1-eigenspaces become parameters of a small
//! linear system.

use super::{axis_decomposition, closure_basis, tau_matrices, Algebra, AxisDecomp};
use crate::linalg::sparse::{self, SVec};
use crate::linalg::{symmetric_signature, Mat, Quotient, Rat, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormClass {
    Positive,
    Semidefinite,
    Indefinite,
    None,
}

impl FormClass {
    pub fn label(self) -> &'static str {
        match self {
            FormClass::Positive => "pos",
            FormClass::Semidefinite => "semi",
            FormClass::Indefinite => "indef",
            FormClass::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<FormClass> {
        Some(match s {
            "pos" => FormClass::Positive,
            "semi" => FormClass::Semidefinite,
            "indef" => FormClass::Indefinite,
            "none" => FormClass::None,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct FormResult {
    pub gram: Option<Mat>,
    pub signature: (usize, usize, usize),
    pub class: FormClass,
}

impl FormResult {
    fn none() -> FormResult {
        FormResult { gram: None, signature: (0, 0, 0), class: FormClass::None }
    }

    pub fn from_gram(gram: Mat) -> FormResult {
        let signature = symmetric_signature(&gram);
        let class = match signature {
            (_, 0, 0) => FormClass::Positive,
            (_, _, 0) => FormClass::Semidefinite,
            _ => FormClass::Indefinite,
        };
        FormResult { gram: Some(gram), signature, class }
    }
}

/// Parameterised value: entry 0 is the constant term, entry `p` the
/// coefficient of unknown `p`.
type Affine = Vec<Rat>;

/// Solves for the associating, axis-normalised, grading-invariant form with
/// `(a_i, a_i) = axis_values[i]`.
pub fn frobenius_form(alg: &Algebra, axis_values: &[Rat]) -> FormResult {
    let n = alg.dim();
    assert_eq!(axis_values.len(), alg.axes().len());
    if n == 0 {
        return FormResult::from_gram(Mat::zeros(0, 0));
    }
    let decs: Vec<AxisDecomp> = match (0..alg.axes().len()).map(|x| axis_decomposition(alg, x)).collect() {
        Ok(d) => d,
        Err(_) => return FormResult::none(),
    };
    let cb = closure_basis(alg);
    if cb.m.is_none() {
        return FormResult::none();
    }
    let one = alg.law().one_index();

    // Unknowns: the form's values on the non-axis part of each 1-eigenspace.
    let mut nparams = 1;
    let mut first_param = Vec::new();
    for d in &decs {
        first_param.push(nparams);
        nparams += d.dim_of(one) - 1;
    }

    // phi[k][p] is the functional (b_k, .) restricted to parameter p.
    let mut phi: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(n);
    for k in 0..n {
        let f = match cb.origin[k] {
            Err(axis) => {
                let d = &decs[axis];
                let mut f = vec![vec![Rat::zero(); n]; nparams];
                let mut extra = 0;
                for (row, &val) in d.row_value.iter().enumerate() {
                    if val != one {
                        continue;
                    }
                    let (p, scale) = if extra == 0 { (0, axis_values[axis].clone()) } else { (first_param[axis] + extra - 1, Rat::one()) };
                    extra += 1;
                    if scale.is_zero() {
                        continue;
                    }
                    for i in 0..n {
                        let c = &d.inv[(i, row)];
                        if !c.is_zero() {
                            f[p][i] += &(c * &scale);
                        }
                    }
                }
                f
            }
            Ok((x, y)) => {
                let ad = alg.adjoint(&cb.vectors[y]);
                phi[x].iter().map(|fx| ad.mul_vec(fx)).collect()
            }
        };
        phi.push(f);
    }

    // gram[p] = B^{-1} Phi[p].
    let bmat = {
        let mut m = Mat::zeros(n, n);
        for (k, v) in cb.vectors.iter().enumerate() {
            for (j, x) in v {
                m[(k, *j)] = x.clone();
            }
        }
        m
    };
    let binv = bmat.inverse().expect("closure basis is a basis");
    let grams: Vec<Mat> = (0..nparams)
        .map(|p| {
            let mut phim = Mat::zeros(n, n);
            for k in 0..n {
                phim.row_mut(k).clone_from_slice(&phi[k][p]);
            }
            binv.mul(&phim)
        })
        .collect();

    let taus = match tau_matrices(alg) {
        Ok(t) => t,
        Err(_) => return FormResult::none(),
    };
    let mut distinct_taus: Vec<Mat> = Vec::new();
    for t in taus {
        if !t.sub(&Mat::identity(n)).is_zero() && !distinct_taus.contains(&t) {
            distinct_taus.push(t);
        }
    }

    let unknowns = nparams - 1;
    let solution: Vec<Rat> = if unknowns == 0 {
        vec![Rat::one()]
    } else {
        let mut eqs = Subspace::zero(nparams);
        let mut inconsistent = false;
        for_each_equation(alg, axis_values, &grams, &distinct_taus, |e| {
            if e.iter().all(|x| x.is_zero()) {
                return true;
            }
            eqs.insert_dense(e);
            if eqs.has_pivot(0) {
                inconsistent = true;
                return false;
            }
            !(1..nparams).all(|p| eqs.has_pivot(p))
        });
        if inconsistent {
            return FormResult::none();
        }
        let mut sol = vec![Rat::zero(); nparams];
        sol[0] = Rat::one();
        for r in eqs.rows() {
            let p = r.last().unwrap().0;
            sol[p] = -sparse::get(r, 0).cloned().unwrap_or_default();
        }
        sol
    };

    let mut gram = Mat::zeros(n, n);
    for (p, g) in grams.iter().enumerate() {
        if !solution[p].is_zero() {
            for i in 0..n {
                for j in 0..n {
                    if !g[(i, j)].is_zero() {
                        gram[(i, j)] += &(&g[(i, j)] * &solution[p]);
                    }
                }
            }
        }
    }
    let concrete = vec![gram.clone()];
    let mut ok = true;
    for_each_equation(alg, axis_values, &concrete, &distinct_taus, |e| {
        ok = e[0].is_zero();
        ok
    });
    if !ok {
        return FormResult::none();
    }
    FormResult::from_gram(gram)
}

/// Streams every defining equation as an affine vector over the parameters;
/// stops when `f` returns false.
fn for_each_equation(alg: &Algebra, axis_values: &[Rat], grams: &[Mat], taus: &[Mat], mut f: impl FnMut(Affine) -> bool) {
    let n = alg.dim();
    let np = grams.len();
    for i in 0..n {
        for j in i + 1..n {
            if !f(grams.iter().map(|g| &g[(i, j)] - &g[(j, i)]).collect()) {
                return;
            }
        }
    }
    for (a, c) in alg.axes().iter().zip(axis_values) {
        let mut e: Affine = grams.iter().map(|g| bilinear(g, a, a)).collect();
        e[0] -= c;
        if !f(e) {
            return;
        }
    }
    // (e_i e_j, e_k) = (e_i, e_j e_k)
    for i in 0..n {
        for j in 0..n {
            let ij = alg.basis_product(i, j);
            for k in i..n {
                let jk = alg.basis_product(j, k);
                let mut e = vec![Rat::zero(); np];
                for (p, g) in grams.iter().enumerate() {
                    let mut s = Rat::zero();
                    for (l, c) in ij {
                        s += &(c * &g[(*l, k)]);
                    }
                    for (l, c) in jk {
                        s -= &(c * &g[(i, *l)]);
                    }
                    e[p] = s;
                }
                if !f(e) {
                    return;
                }
            }
        }
    }
    for t in taus {
        let tt = t.transpose();
        let conj: Vec<Mat> = grams.iter().map(|g| t.mul(g).mul(&tt)).collect();
        for i in 0..n {
            for j in i..n {
                let e: Affine = (0..np).map(|p| &conj[p][(i, j)] - &grams[p][(i, j)]).collect();
                if !f(e) {
                    return;
                }
            }
        }
    }
}

fn bilinear(g: &Mat, x: &SVec, y: &SVec) -> Rat {
    let mut s = Rat::zero();
    for (i, a) in x {
        for (j, b) in y {
            s += &(&(a * b) * &g[(*i, *j)]);
        }
    }
    s
}

/// Quotient by the radical of a solved form.
pub fn radical_quotient(alg: &Algebra, form: &FormResult) -> Algebra {
    let n = alg.dim();
    let g = form.gram.as_ref().expect("radical quotient needs a form");
    let rad = Subspace::span_dense(n, &g.kernel());
    for r in rad.rows() {
        for i in 0..n {
            assert!(rad.contains(&alg.mul(r, &sparse::unit(i))), "radical of the form is not an ideal");
        }
    }
    let q = Quotient::new(rad);
    let m = q.new_dim();
    let reps: Vec<SVec> = (0..n).filter(|&i| q.index(i).is_some()).map(sparse::unit).collect();
    Algebra::from_fn(
        m,
        |i, j| q.apply(&alg.mul(&reps[i], &reps[j])),
        alg.axes().iter().map(|a| q.apply(a)).collect(),
        alg.law().clone(),
    )
}

/// Gram value `(x, y)`.
pub fn pair(g: &Mat, x: &SVec, y: &SVec) -> Rat {
    bilinear(g, x, y)
}
