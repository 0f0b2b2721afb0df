//! The checks every finished algebra has to pass, each failure reported with
//! a witness.

use super::{axis_decomposition, miyamoto_reconstruct, tau_matrices, verify_axial, Algebra};
use crate::linalg::sparse;
use crate::linalg::{Mat, Rat};
use crate::permgroup::GroupAction;
use crate::shape::TauMap;

/// Axiom, Miyamoto and (if a Gram matrix is given) form checks.
/// `group` and `tau` are what the algebra was built from.
pub fn check_properties(alg: &Algebra, group: Option<&GroupAction>, tau: Option<&TauMap>, gram: Option<&Mat>, axis_values: &[Rat]) -> Vec<String> {
    let rep = verify_axial(alg);
    let mut out: Vec<String> = rep.violations.iter().map(|v| v.to_string()).collect();
    if !out.is_empty() {
        return out;
    }
    match miyamoto_reconstruct(alg) {
        Err(v) => out.push(v.to_string()),
        Ok((g0, taus)) => {
            if let Some(t) = tau {
                if let Some(x) = (0..taus.len()).find(|&x| taus[x] != *t.get(x)) {
                    out.push(format!("Miyamoto involution of axis {x} is {}, tau gives {}", taus[x], t.get(x)));
                }
            }
            if let Some(g) = group {
                if !g0.same_group(g) {
                    out.push(format!("Miyamoto group has order {}, the input group {}", g0.order(), g.order()));
                }
            }
        }
    }
    if let Some(g) = gram {
        out.extend(check_form(alg, g, axis_values));
    }
    out
}

/// Symmetry, axis values, associativity, invariance under the grading
/// automorphisms and orthogonality of each axis's eigenspaces.
pub fn check_form(alg: &Algebra, g: &Mat, axis_values: &[Rat]) -> Vec<String> {
    let n = alg.dim();
    let mut out = Vec::new();
    if g.nrows() != n || g.ncols() != n {
        return vec![format!("form is {}x{} on an algebra of dimension {n}", g.nrows(), g.ncols())];
    }
    if !g.is_symmetric() {
        return vec!["form is not symmetric".into()];
    }
    for (x, a) in alg.axes().iter().enumerate() {
        let v = super::pair(g, a, a);
        if v.is_zero() {
            out.push(format!("(a, a) = 0 for axis {x}"));
        } else if axis_values.get(x).is_some_and(|w| *w != v) {
            out.push(format!("(a, a) = {v} for axis {x}, expected {}", axis_values[x]));
        }
    }

    // w[(j,k)][i] = (e_i, e_j e_k); associativity says w[(j,k)][i] = w[(i,j)][k].
    let mut w: Vec<Vec<Rat>> = Vec::with_capacity(n * (n + 1) / 2);
    for j in 0..n {
        for i in 0..=j {
            let p = alg.basis_product(i, j);
            w.push((0..n).map(|r| p.iter().fold(Rat::zero(), |s, (l, c)| &s + &(c * &g[(r, *l)]))).collect());
        }
    }
    let at = |a: usize, b: usize| &w[super::tri(a.min(b), a.max(b))];
    'assoc: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if at(j, k)[i] != at(i, j)[k] {
                    out.push(format!("(e_{i}, e_{j} e_{k}) = {} but (e_{i} e_{j}, e_{k}) = {}", at(j, k)[i], at(i, j)[k]));
                    break 'assoc;
                }
            }
        }
    }

    match tau_matrices(alg) {
        Err(v) => out.push(v.to_string()),
        Ok(ts) => {
            if let Some(x) = ts.iter().position(|t| t.mul(g).mul(&t.transpose()) != *g) {
                out.push(format!("form is not invariant under the Miyamoto involution of axis {x}"));
            }
        }
    }

    for x in 0..alg.axes().len() {
        let Ok(dec) = axis_decomposition(alg, x) else { continue };
        let b = &dec.basis;
        let bg = b.mul(g).mul(&b.transpose());
        let rows = dec.row_value.len();
        'orth: for r in 0..rows {
            for s in r + 1..rows {
                if dec.row_value[r] != dec.row_value[s] && !bg[(r, s)].is_zero() {
                    let law = alg.law();
                    out.push(format!(
                        "axis {x}: eigenvectors for {} and {} pair to {}: {:?}, {:?}",
                        law.values()[dec.row_value[r]],
                        law.values()[dec.row_value[s]],
                        bg[(r, s)],
                        sparse::from_dense(b.row(r)),
                        sparse::from_dense(b.row(s))
                    ));
                    break 'orth;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::q;

    #[test]
    fn catalog_forms_pass() {
        for d in catalog::all() {
            let vals = vec![Rat::one(); d.algebra.axes().len()];
            assert!(check_properties(&d.algebra, None, None, Some(&d.form), &vals).is_empty(), "{}", d.name);
        }
    }

    #[test]
    fn perturbed_form_fails() {
        let d = catalog::get("3A").unwrap();
        let mut g = d.form.clone();
        let n = g.nrows();
        g[(n - 1, n - 1)] = &g[(n - 1, n - 1)] + &q(1, 7);
        let vals = vec![Rat::one(); d.algebra.axes().len()];
        assert!(!check_form(&d.algebra, &g, &vals).is_empty());
    }
}
