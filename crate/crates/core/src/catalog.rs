//! The nine two-generated algebras of Monster type, as concrete
//! structure-constant algebras with marked generators.
//!
//! Only representative products are stored; the rest are generated by the
//! symmetries of the polygon of axes `a_i` (indices mod `n`), which fix the
//! extra basis vectors.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::analysis::{self, axis_decomposition, frobenius_form, verify_axial, Algebra, AxisDecomp, Violation};
use crate::fusion::FusionLaw;
use crate::linalg::sparse::{self, SVec};
use crate::linalg::{Mat, Rat};
use crate::permgroup::Perm;

pub const NAMES: [&str; 9] = ["1A", "2A", "2B", "3A", "3C", "4A", "4B", "5A", "6A"];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown dihedral algebra {0:?}")]
    Unknown(String),
    #[error("catalog algebra {name} failed its self-check: {msg}")]
    SelfCheck { name: String, msg: String },
}

#[derive(Clone, Debug)]
pub struct DihedralAlgebra {
    pub name: String,
    /// Number of axes in the orbit polygon `a_0 .. a_{n-1}`.
    pub n: usize,
    pub labels: Vec<String>,
    /// Axes: the polygon axes by residue, then any extra axes.
    pub algebra: Algebra,
    /// Basis index of `a_i` for each residue `i`.
    pub polygon: Vec<usize>,
    /// Axis-list indices of `a_0` and `a_1`.
    pub marked: (usize, usize),
    pub form: Mat,
    /// Form values as listed in the source table: `(label, label, value)`.
    pub listed_form: Vec<(String, String, Rat)>,
}

struct Raw {
    labels: &'static str,
    extra_axes: &'static str,
    products: &'static [(&'static str, &'static str, &'static str)],
    form: &'static [(&'static str, &'static str, &'static str)],
}

fn raw(name: &str) -> Option<Raw> {
    Some(match name {
        "1A" => Raw { labels: "a0", extra_axes: "", products: &[], form: &[] },
        "2A" => Raw {
            labels: "a0 a1 ar",
            extra_axes: "ar",
            products: &[("a0", "a1", "1/8 a0, 1/8 a1, -1/8 ar"), ("a0", "ar", "1/8 a0, 1/8 ar, -1/8 a1")],
            form: &[("a0", "a1", "1/8"), ("a0", "ar", "1/8"), ("a1", "ar", "1/8")],
        },
        "2B" => Raw { labels: "a0 a1", extra_axes: "", products: &[("a0", "a1", "")], form: &[("a0", "a1", "0")] },
        "3A" => Raw {
            labels: "a-1 a0 a1 u",
            extra_axes: "",
            products: &[
                ("a0", "a1", "1/16 a0, 1/16 a1, 1/32 a-1, -135/2048 u"),
                ("a0", "u", "2/9 a0, -1/9 a1, -1/9 a-1, 5/32 u"),
                ("u", "u", "1 u"),
            ],
            form: &[("a0", "a1", "13/256"), ("a0", "u", "1/4"), ("u", "u", "8/5")],
        },
        "3C" => Raw {
            labels: "a-1 a0 a1",
            extra_axes: "",
            products: &[("a0", "a1", "1/64 a0, 1/64 a1, -1/64 a-1")],
            form: &[("a0", "a1", "1/64")],
        },
        "4A" => Raw {
            labels: "a-1 a0 a1 a2 v",
            extra_axes: "",
            products: &[
                // The signs of a-1 and a2 here are the ones for which ad_a0 is
                // semisimple with the expected spectrum.
                ("a0", "a1", "3/64 a0, 3/64 a1, 1/64 a-1, 1/64 a2, -3/64 v"),
                ("a0", "v", "5/16 a0, -2/16 a1, -1/16 a2, -2/16 a-1, 3/16 v"),
                ("v", "v", "1 v"),
                ("a0", "a2", ""),
            ],
            form: &[("a0", "a1", "1/32"), ("a0", "a2", "0"), ("a0", "v", "3/8"), ("v", "v", "2")],
        },
        "4B" => Raw {
            labels: "a-1 a0 a1 a2 ar2",
            extra_axes: "ar2",
            products: &[
                ("a0", "a1", "1/64 a0, 1/64 a1, -1/64 a-1, -1/64 a2, 1/64 ar2"),
                ("a0", "a2", "1/8 a0, 1/8 a2, -1/8 ar2"),
                // third axis of the 2A subalgebra generated by a0 and a2
                ("a0", "ar2", "1/8 a0, 1/8 ar2, -1/8 a2"),
            ],
            form: &[("a0", "a1", "1/64"), ("a0", "a2", "1/8"), ("a0", "ar2", "1/8")],
        },
        "5A" => Raw {
            labels: "a-2 a-1 a0 a1 a2 w",
            extra_axes: "",
            products: &[
                ("a0", "a1", "3/128 a0, 3/128 a1, -1/128 a2, -1/128 a-1, -1/128 a-2, 1 w"),
                ("a0", "a2", "3/128 a0, 3/128 a2, -1/128 a1, -1/128 a-1, -1/128 a-2, -1 w"),
                ("a0", "w", "7/4096 a1, 7/4096 a-1, -7/4096 a2, -7/4096 a-2, 7/32 w"),
                ("w", "w", "175/524288 a-2, 175/524288 a-1, 175/524288 a0, 175/524288 a1, 175/524288 a2"),
            ],
            form: &[("a0", "a1", "3/128"), ("a0", "w", "0"), ("w", "w", "875/524288")],
        },
        "6A" => Raw {
            labels: "a-2 a-1 a0 a1 a2 a3 ar3 u2",
            extra_axes: "ar3",
            products: &[
                ("a0", "a1", "1/64 a0, 1/64 a1, -1/64 a-2, -1/64 a-1, -1/64 a2, -1/64 a3, 1/64 ar3, 45/2048 u2"),
                ("a0", "a2", "1/16 a0, 1/16 a2, 1/32 a-2, -135/2048 u2"),
                ("a0", "u2", "2/9 a0, -1/9 a2, -1/9 a-2, 5/32 u2"),
                ("a0", "a3", "1/8 a0, 1/8 a3, -1/8 ar3"),
                ("ar3", "u2", ""),
                // third axis of the 2A subalgebra generated by a0 and a3
                ("a0", "ar3", "1/8 a0, 1/8 ar3, -1/8 a3"),
                ("u2", "u2", "1 u2"),
            ],
            form: &[("a0", "a1", "5/256"), ("a0", "a2", "13/256"), ("a0", "a3", "1/8"), ("ar3", "u2", "0")],
        },
        _ => return None,
    })
}

fn polygon_size(name: &str) -> usize {
    name[..1].parse().unwrap()
}

/// Residue of a polygon label `a<i>` modulo `n`.
fn residue(label: &str, n: usize) -> Option<usize> {
    let i: i64 = label.strip_prefix('a')?.parse().ok()?;
    Some(i.rem_euclid(n as i64) as usize)
}

/// Builds a catalog algebra and runs its self-check.
pub fn ns_algebra(name: &str) -> Result<DihedralAlgebra, CatalogError> {
    let r = raw(name).ok_or_else(|| CatalogError::Unknown(name.to_string()))?;
    let n = polygon_size(name);
    let labels: Vec<String> = r.labels.split_whitespace().map(String::from).collect();
    let dim = labels.len();
    let idx: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let mut polygon = vec![usize::MAX; n];
    for (i, l) in labels.iter().enumerate() {
        if let Some(k) = residue(l, n) {
            polygon[k] = i;
        }
    }
    let extra: Vec<usize> = r.extra_axes.split_whitespace().map(|l| idx[l]).collect();

    // Symmetries of the polygon on basis indices: i -> s*i + k (mod n), s = +-1.
    let mut syms: Vec<Vec<usize>> = Vec::new();
    for s in [1i64, -1] {
        for k in 0..n as i64 {
            let mut p: Vec<usize> = (0..dim).collect();
            for (res, &b) in polygon.iter().enumerate() {
                let t = (s * res as i64 + k).rem_euclid(n as i64) as usize;
                p[b] = polygon[t];
            }
            syms.push(p);
        }
    }

    let parse_lc = |s: &str| -> SVec {
        let mut acc = vec![Rat::zero(); dim];
        for term in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (c, l) = term.split_once(' ').expect("coefficient and label");
            acc[idx[l.trim()]] += &c.parse::<Rat>().expect("coefficient");
        }
        sparse::drain_dense(&mut acc)
    };
    let mut table: Vec<Option<SVec>> = vec![None; dim * (dim + 1) / 2];
    let mut set = |i: usize, j: usize, v: SVec, what: &str| -> Result<(), CatalogError> {
        let t = analysis::tri(i, j);
        match &table[t] {
            Some(old) if *old != v => Err(CatalogError::SelfCheck {
                name: name.to_string(),
                msg: format!("inconsistent product {}*{} from {what}", labels[i], labels[j]),
            }),
            _ => {
                table[t] = Some(v);
                Ok(())
            }
        }
    };
    let mut given: Vec<(usize, usize, SVec)> = Vec::new();
    for &b in polygon.iter().chain(&extra) {
        given.push((b, b, sparse::unit(b)));
    }
    for (x, y, v) in r.products {
        given.push((idx[x], idx[y], parse_lc(v)));
    }
    for (x, y, v) in &given {
        for p in &syms {
            let img: SVec = {
                let mut acc = vec![Rat::zero(); dim];
                for (i, c) in v {
                    acc[p[*i]] += c;
                }
                sparse::drain_dense(&mut acc)
            };
            set(p[*x], p[*y], img, &format!("{}*{}", labels[*x], labels[*y]))?;
        }
    }
    let mut mu = Vec::with_capacity(table.len());
    for (t, e) in table.into_iter().enumerate() {
        match e {
            Some(v) => mu.push(v),
            None => {
                return Err(CatalogError::SelfCheck { name: name.to_string(), msg: format!("product {t} not determined") });
            }
        }
    }
    let axes: Vec<SVec> = polygon.iter().chain(&extra).map(|&b| sparse::unit(b)).collect();
    let algebra = Algebra::new(dim, mu, axes, FusionLaw::monster());
    let form = frobenius_form(&algebra, &vec![Rat::one(); polygon.len() + extra.len()])
        .gram
        .ok_or_else(|| CatalogError::SelfCheck { name: name.to_string(), msg: "no Frobenius form".into() })?;
    let listed_form = r.form.iter().map(|(x, y, v)| (x.to_string(), y.to_string(), v.parse().unwrap())).collect();
    let marked = (0, if n > 1 { 1 } else { 0 });
    let d = DihedralAlgebra { name: name.to_string(), n, labels, algebra, polygon, marked, form, listed_form };
    d.self_check()?;
    Ok(d)
}

impl DihedralAlgebra {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn label_index(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    pub fn decomposition(&self, axis: usize) -> AxisDecomp {
        axis_decomposition(&self.algebra, axis).expect("catalog axes decompose")
    }

    /// Miyamoto involution of an axis as a permutation of the axis list.
    pub fn miyamoto_perm(&self, axis: usize) -> Perm {
        let t = self.decomposition(axis).tau_matrix(self.algebra.law());
        let lookup = self.algebra.axis_lookup();
        let d = self.dim();
        let img = self
            .algebra
            .axes()
            .iter()
            .map(|a| lookup[&sparse::from_dense(&t.vec_mul(&sparse::to_dense(a, d)))])
            .collect();
        Perm::from_images(img).expect("Miyamoto image is a permutation")
    }

    /// Same, restricted to the polygon axes (indices are residues).
    pub fn polygon_perm(&self, axis: usize) -> Perm {
        let p = self.miyamoto_perm(axis);
        Perm::from_images((0..self.n).map(|i| p.apply(i)).collect()).expect("polygon is invariant")
    }

    pub fn self_check(&self) -> Result<(), CatalogError> {
        let fail = |msg: String| Err(CatalogError::SelfCheck { name: self.name.clone(), msg });
        let rep = verify_axial(&self.algebra);
        if let Some(v) = rep.violations.first() {
            return fail(v.to_string());
        }
        if !rep.all_primitive() {
            return fail("an axis is not primitive".into());
        }
        let gen = analysis::conditions::generated_dim(
            &self.algebra,
            &[self.algebra.axes()[self.marked.0].clone(), self.algebra.axes()[self.marked.1].clone()],
            self.dim(),
        );
        if gen != self.dim() {
            return fail(format!("marked generators span only {gen} dimensions"));
        }
        for (x, y, v) in &self.listed_form {
            let (i, j) = (self.label_index(x).unwrap(), self.label_index(y).unwrap());
            if &self.form[(i, j)] != v {
                return fail(format!("form value ({x},{y}) = {} but the table lists {v}", self.form[(i, j)]));
            }
        }
        for x in 0..self.algebra.axes().len() {
            let dec = self.decomposition(x);
            for k in 0..dec.row_value.len() {
                for l in 0..k {
                    if dec.row_value[k] != dec.row_value[l] {
                        let u = sparse::from_dense(dec.basis.row(k));
                        let w = sparse::from_dense(dec.basis.row(l));
                        if !analysis::pair(&self.form, &u, &w).is_zero() {
                            return fail(format!("eigenspaces of axis {x} are not orthogonal"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// All nine algebras, in the order of `NAMES`.
pub fn all() -> Vec<DihedralAlgebra> {
    NAMES.iter().map(|n| ns_algebra(n).expect("catalog data is valid")).collect()
}

struct Cached {
    alg: DihedralAlgebra,
    reflections: Vec<Perm>,
}

fn cache() -> &'static [Cached] {
    static CACHE: OnceLock<Vec<Cached>> = OnceLock::new();
    CACHE.get_or_init(|| {
        all()
            .into_iter()
            .map(|alg| {
                let reflections = (0..alg.n).map(|i| alg.polygon_perm(i)).collect();
                Cached { alg, reflections }
            })
            .collect()
    })
}

/// Shared, already checked copy of a catalog algebra.
pub fn get(name: &str) -> Result<&'static DihedralAlgebra, CatalogError> {
    cache().iter().find(|c| c.alg.name == name).map(|c| &c.alg).ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

/// Miyamoto involution of each polygon axis `a_i` as a permutation of residues.
pub fn reflections(name: &str) -> Result<&'static [Perm], CatalogError> {
    cache()
        .iter()
        .find(|c| c.alg.name == name)
        .map(|c| c.reflections.as_slice())
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

/// Type of the subalgebra generated by `a_0` and `a_k` inside `name`, where
/// `a_k` lies at polygon distance giving a smaller dihedral subalgebra.
pub fn contained_type(name: &str, sub_n: usize) -> Option<&'static str> {
    let n = polygon_size(name);
    if sub_n == n {
        return NAMES.iter().copied().find(|x| *x == name);
    }
    match (name, sub_n) {
        ("4A", 2) => Some("2B"),
        ("4B", 2) => Some("2A"),
        ("6A", 2) => Some("2A"),
        ("6A", 3) => Some("3A"),
        _ => None,
    }
}

/// The dihedral algebra names with a given polygon size.
pub fn names_with_n(n: usize) -> Vec<&'static str> {
    NAMES.iter().copied().filter(|x| polygon_size(x) == n).collect()
}

pub fn polygon_size_of(name: &str) -> usize {
    polygon_size(name)
}

/// Checks a user-supplied two-generated algebra: axial, primitive, and
/// generated by the two marked axes.
pub fn check_user_algebra(alg: &Algebra, marked: (usize, usize)) -> Result<(), Violation> {
    let rep = verify_axial(alg);
    if let Some((axis, _)) = rep.primitive.iter().find(|p| !p.1) {
        return Err(Violation::NotPrimitive { axis: *axis });
    }
    if let Some(v) = rep.violations.into_iter().next() {
        return Err(v);
    }
    if marked.0 >= alg.axes().len() || marked.1 >= alg.axes().len() {
        return Err(Violation::NotGenerated { spanned: 0 });
    }
    let d = analysis::conditions::generated_dim(alg, &[alg.axes()[marked.0].clone(), alg.axes()[marked.1].clone()], alg.dim());
    if d != alg.dim() {
        return Err(Violation::NotGenerated { spanned: d });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn all_nine_build_and_check() {
        let dims: Vec<usize> = all().iter().map(|d| d.dim()).collect();
        assert_eq!(dims, vec![1, 3, 2, 4, 3, 5, 5, 6, 8]);
    }

    #[test]
    fn two_a_quarter_space() {
        let d = ns_algebra("2A").unwrap();
        let dec = d.decomposition(0);
        let law = FusionLaw::monster();
        let quarter = dec.space(law.index_of(&q(1, 4)).unwrap());
        assert_eq!(quarter.len(), 1);
        let v = &quarter[0];
        assert_eq!(sparse::get(v, 1).unwrap(), &-sparse::get(v, 2).unwrap());
        assert!(sparse::get(v, 0).is_none());
    }

    #[test]
    fn three_a_tau_swaps_neighbours() {
        let d = ns_algebra("3A").unwrap();
        let p = d.polygon_perm(0);
        assert_eq!((p.apply(0), p.apply(1), p.apply(2)), (0, 2, 1));
    }

    #[test]
    fn corrupted_structure_constant_fails() {
        let d = ns_algebra("4A").unwrap();
        let a = &d.algebra;
        let bad = Algebra::from_fn(
            a.dim(),
            |i, j| {
                let mut v = a.basis_product(i, j).clone();
                if (i, j) == (1, 2) {
                    v = sparse::add_scaled(&v, &q(1, 1000), &sparse::unit(4));
                }
                v
            },
            a.axes().to_vec(),
            FusionLaw::monster(),
        );
        assert!(!verify_axial(&bad).ok());
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(ns_algebra("7A"), Err(CatalogError::Unknown(_))));
    }
}
