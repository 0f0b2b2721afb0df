//! Informational checks on how the dihedral subalgebras of a finished
//! algebra fit together. Nothing here is enforced during construction.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{axis_decomposition, miyamoto_reconstruct, Algebra, AxisDecomp};
use crate::linalg::sparse::{self, SVec};
use crate::linalg::{q, Rat, Subspace};
use crate::permgroup::Perm;

/// Subalgebra dimension and the projection value `lambda_a(b)` for each
/// two-generated algebra in the catalog.
const TYPES: &[(&str, usize, i64, i64)] = &[
    ("2A", 3, 1, 8),
    ("2B", 2, 0, 1),
    ("3A", 4, 13, 256),
    ("3C", 3, 1, 64),
    ("4A", 5, 1, 32),
    ("4B", 5, 1, 64),
    ("5A", 6, 3, 128),
    ("6A", 8, 5, 256),
];

/// Dimension of the subalgebra generated by `x` and `y`, giving up above `cap`.
pub fn generated_dim(alg: &Algebra, gens: &[SVec], cap: usize) -> usize {
    let mut span = Subspace::zero(alg.dim());
    let mut vecs: Vec<SVec> = Vec::new();
    for g in gens {
        if span.insert(g) {
            vecs.push(g.clone());
        }
    }
    let mut k = 0;
    while k < vecs.len() {
        for j in 0..=k {
            let p = alg.mul(&vecs[k], &vecs[j]);
            if span.insert(&p) {
                vecs.push(p);
                if vecs.len() > cap {
                    return vecs.len();
                }
            }
        }
        k += 1;
    }
    vecs.len()
}

/// Type label of the subalgebra generated by axes `a` and `b`, from its
/// dimension and the coefficient of `a` in the 1-eigencomponent of `b`.
pub fn dihedral_type(alg: &Algebra, dec_a: &AxisDecomp, a: usize, b: usize) -> Option<&'static str> {
    let axes = alg.axes();
    let dim = generated_dim(alg, &[axes[a].clone(), axes[b].clone()], 8);
    let c = dec_a.coords(&axes[b]);
    let lambda = c[dec_a.row_value.iter().position(|&v| v == alg.law().one_index())?].clone();
    TYPES.iter().find(|t| t.1 == dim && lambda == q(t.2, t.3)).map(|t| t.0)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConditionReport {
    /// `(name, holds, witness)` in the order M8, 2Aa, 2Ab, 3A, 4A, 5A.
    pub flags: Vec<(&'static str, bool, String)>,
}

impl ConditionReport {
    pub fn get(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|f| f.0 == name).map(|f| f.1)
    }

    /// `M8:T,2Aa:F,...`
    pub fn summary(&self) -> String {
        let v: Vec<String> = self.flags.iter().map(|f| format!("{}:{}", f.0, if f.1 { "T" } else { "F" })).collect();
        v.join(",")
    }
}

fn cyclic(rho: &Perm) -> Vec<Perm> {
    let mut out = vec![rho.clone()];
    let mut p = rho.then(rho);
    while &p != rho {
        out.push(p.clone());
        p = p.then(rho);
    }
    out.sort();
    out
}

pub fn condition_report(alg: &Algebra) -> ConditionReport {
    let mut rep = ConditionReport::default();
    let names = ["M8", "2Aa", "2Ab", "3A", "4A", "5A"];
    let Ok((_, taus)) = miyamoto_reconstruct(alg) else {
        for n in names {
            rep.flags.push((n, false, "axes do not carry Miyamoto permutations".into()));
        }
        return rep;
    };
    let decs: Vec<Option<AxisDecomp>> = (0..alg.axes().len()).map(|x| axis_decomposition(alg, x).ok()).collect();
    let axes = alg.axes();
    let lookup = alg.axis_lookup();
    let mut fail: HashMap<&str, String> = HashMap::new();
    let mut note = |k: &'static str, msg: String| {
        fail.entry(k).or_insert(msg);
    };
    let mut extra: HashMap<(&str, Vec<Perm>), (SVec, (usize, usize))> = HashMap::new();
    let lin = |terms: &[(Rat, &SVec)]| sparse::combine(alg.dim(), terms.iter().map(|(c, v)| (c, *v)));
    let image = |v: usize, t: usize| taus[t].apply(v);
    for a in 0..axes.len() {
        let Some(dec) = &decs[a] else { continue };
        for b in a + 1..axes.len() {
            let Some(t) = dihedral_type(alg, dec, a, b) else { continue };
            let rho = taus[a].then(&taus[b]);
            let ab = alg.mul(&axes[a], &axes[b]);
            if (t == "2A" || t == "2B") && !rho.is_identity() {
                let in_image = taus.contains(&rho);
                if in_image != (t == "2A") {
                    note("M8", format!("axes {a},{b} span {t} but tau product {} the image", if in_image { "is in" } else { "is not in" }));
                }
            }
            let key_vec: Option<(&str, SVec)> = match t {
                "2A" => {
                    let v = lin(&[(Rat::one(), &axes[a]), (Rat::one(), &axes[b]), (Rat::from_int(-8), &ab)]);
                    if !lookup.contains_key(&v) {
                        note("2Aa", format!("axes {a},{b}: third axis of their 2A is not an axis"));
                    }
                    Some(("2Ab", v))
                }
                "3A" => {
                    let am1 = &axes[image(b, a)];
                    let s = lin(&[(q(1, 16), &axes[a]), (q(1, 16), &axes[b]), (q(1, 32), am1), (q(-1, 1), &ab)]);
                    Some(("3A", sparse::scale(&s, &q(2048, 135))))
                }
                "4A" => {
                    let am1 = &axes[image(b, a)];
                    let a2 = &axes[image(a, b)];
                    let s = lin(&[(q(1, 1), &axes[a]), (q(1, 1), &axes[b]), (q(-1, 3), am1), (q(-1, 3), a2), (q(-64, 3), &ab)]);
                    Some(("4A", s))
                }
                "5A" => {
                    let am1 = &axes[image(b, a)];
                    let a2i = image(a, b);
                    let a2 = &axes[a2i];
                    let am2 = &axes[image(a2i, a)];
                    let c = q(-3, 128);
                    let d = q(1, 128);
                    Some(("5A", lin(&[(Rat::one(), &ab), (c.clone(), &axes[a]), (c, &axes[b]), (d.clone(), a2), (d.clone(), am1), (d, am2)])))
                }
                _ => None,
            };
            if let Some((k, v)) = key_vec {
                let key = if k == "2Ab" { (k, vec![rho.clone()]) } else { (k, cyclic(&rho)) };
                match extra.get(&key) {
                    None => {
                        extra.insert(key, (v, (a, b)));
                    }
                    Some((w, (c, d))) => {
                        let same = *w == v || (k == "5A" && *w == sparse::scale(&v, &Rat::from_int(-1)));
                        if !same {
                            note(k, format!("axes {a},{b} and {c},{d} share a rotation but not the extra element"));
                        }
                    }
                }
            }
        }
    }
    for n in names {
        match fail.get(n) {
            Some(w) => rep.flags.push((n, false, w.clone())),
            None => rep.flags.push((n, true, String::new())),
        }
    }
    rep
}

impl std::fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        for (n, ok, w) in &self.flags {
            if *ok {
                writeln!(s, "{n}: holds").unwrap();
            } else {
                writeln!(s, "{n}: fails ({w})").unwrap();
            }
        }
        f.write_str(&s)
    }
}
