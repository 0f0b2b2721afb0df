//! Text format for finished algebras, catalog dumps and user-supplied
//! two-generated algebras.
//!
//! ```text
//! algebra S4
//! law monster              (or an inline `fusion-law ... end` block)
//! axes 6
//! gen [1,0,2,3,5,4]        (generators of the group acting on the axes)
//! tau                      (optional, one permutation per axis)
//! ...
//! end
//! shape 3A2B               (optional)
//! marked 0 1               (optional: the two generating axes)
//! dim 13
//! axis 0 -> 0:1            (one line per axis)
//! products                 (nonzero products e_i e_j with i <= j)
//! 0 1 -> 6:1
//! end
//! form                     (optional Gram matrix entries, i <= j, nonzero)
//! 0 0 -> 1
//! end
//! report dim=13 m=3 ...    (optional, kept verbatim)
//! ```
//!
//! Rationals are written `p/q`, or `p` when `q = 1`. Dumping a parsed dump
//! gives back the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analysis::{tri, Algebra};
use crate::catalog::DihedralAlgebra;
use crate::fusion::FusionLaw;
use crate::linalg::{Mat, Rat, SVec};
use crate::permgroup::Perm;
use crate::shape::TauMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraFile {
    pub name: String,
    pub gens: Vec<Perm>,
    pub tau: Option<TauMap>,
    pub shape: Option<String>,
    pub marked: Option<(usize, usize)>,
    pub algebra: Algebra,
    pub form: Option<Mat>,
    pub report: Option<String>,
}

impl AlgebraFile {
    pub fn new(name: &str, algebra: Algebra) -> AlgebraFile {
        AlgebraFile { name: name.to_string(), gens: Vec::new(), tau: None, shape: None, marked: None, algebra, form: None, report: None }
    }

    /// A catalog algebra with its Miyamoto involutions as generators and tau.
    pub fn from_catalog(d: &DihedralAlgebra) -> AlgebraFile {
        let taus: Vec<Perm> = (0..d.algebra.axes().len()).map(|x| d.miyamoto_perm(x)).collect();
        AlgebraFile {
            name: d.name.clone(),
            gens: taus.clone(),
            tau: Some(TauMap::new(taus)),
            shape: Some(d.name.clone()),
            marked: Some(d.marked),
            algebra: d.algebra.clone(),
            form: Some(d.form.clone()),
            report: None,
        }
    }

    pub fn dump(&self) -> String {
        let alg = &self.algebra;
        let mut out = String::new();
        writeln!(out, "algebra {}", self.name).unwrap();
        if *alg.law() == FusionLaw::monster() {
            out.push_str("law monster\n");
        } else {
            out.push_str(&alg.law().to_text());
        }
        writeln!(out, "axes {}", alg.axes().len()).unwrap();
        for g in &self.gens {
            writeln!(out, "gen {g}").unwrap();
        }
        if let Some(t) = &self.tau {
            out.push_str("tau\n");
            for p in t.as_slice() {
                writeln!(out, "{p}").unwrap();
            }
            out.push_str("end\n");
        }
        if let Some(s) = &self.shape {
            writeln!(out, "shape {s}").unwrap();
        }
        if let Some((a, b)) = self.marked {
            writeln!(out, "marked {a} {b}").unwrap();
        }
        writeln!(out, "dim {}", alg.dim()).unwrap();
        for (x, a) in alg.axes().iter().enumerate() {
            writeln!(out, "axis {x} ->{}", terms(a)).unwrap();
        }
        out.push_str("products\n");
        for i in 0..alg.dim() {
            for j in i..alg.dim() {
                let p = alg.basis_product(i, j);
                if !p.is_empty() {
                    writeln!(out, "{i} {j} ->{}", terms(p)).unwrap();
                }
            }
        }
        out.push_str("end\n");
        if let Some(f) = &self.form {
            out.push_str("form\n");
            for i in 0..f.nrows() {
                for j in i..f.ncols() {
                    if !f[(i, j)].is_zero() {
                        writeln!(out, "{i} {j} -> {}", f[(i, j)]).unwrap();
                    }
                }
            }
            out.push_str("end\n");
        }
        if let Some(r) = &self.report {
            writeln!(out, "report {r}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut k = 0;
        let block = |k: &mut usize, start: usize| -> Result<Vec<(usize, &str)>, ParseError> {
            let mut out = Vec::new();
            loop {
                *k += 1;
                match lines.get(*k) {
                    None => return Err(err(start, "block is missing its end line")),
                    Some((_, "end")) => return Ok(out),
                    Some(&l) => out.push(l),
                }
            }
        };
        let mut name = None;
        let mut law = None;
        let mut naxes = None;
        let mut gens = Vec::new();
        let mut tau = None;
        let mut shape = None;
        let mut marked = None;
        let mut dim: Option<usize> = None;
        let mut axes: Vec<(usize, SVec)> = Vec::new();
        let mut products: Vec<(usize, usize, usize, SVec)> = Vec::new();
        let mut form_entries: Option<Vec<(usize, usize, usize, Rat)>> = None;
        let mut report = None;
        while k < lines.len() {
            let (ln, line) = lines[k];
            let (key, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(a, b)| (a, b.trim()));
            match key {
                "algebra" => name = Some(rest.to_string()),
                "law" if rest == "monster" => law = Some(FusionLaw::monster()),
                "law" => return Err(err(ln, format!("unknown law {rest:?}"))),
                "fusion-law" => {
                    let body = block(&mut k, ln)?;
                    let text = format!("fusion-law\n{}\nend\n", body.iter().map(|l| l.1).collect::<Vec<_>>().join("\n"));
                    law = Some(FusionLaw::parse(&text).map_err(|e| err(ln, e.to_string()))?);
                }
                "axes" => naxes = Some(number(ln, rest)?),
                "gen" => gens.push(Perm::from_str(rest).map_err(|e| err(ln, e.to_string()))?),
                "tau" => {
                    let body = block(&mut k, ln)?;
                    let perms: Result<Vec<Perm>, ParseError> = body.iter().map(|&(l, s)| Perm::from_str(s).map_err(|e| err(l, e.to_string()))).collect();
                    tau = Some(TauMap::new(perms?));
                }
                "shape" => shape = Some(rest.to_string()),
                "marked" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 2 {
                        return Err(err(ln, "marked needs two axis indices"));
                    }
                    marked = Some((number(ln, v[0])?, number(ln, v[1])?));
                }
                "dim" => dim = Some(number(ln, rest)?),
                "axis" => {
                    let (lhs, rhs) = rest.split_once("->").ok_or_else(|| err(ln, "missing ->"))?;
                    axes.push((number(ln, lhs.trim())?, parse_terms(ln, rhs)?));
                }
                "products" => {
                    for (l, s) in block(&mut k, ln)? {
                        let (lhs, rhs) = s.split_once("->").ok_or_else(|| err(l, "missing ->"))?;
                        let ij: Vec<&str> = lhs.split_whitespace().collect();
                        if ij.len() != 2 {
                            return Err(err(l, "expected two basis indices before ->"));
                        }
                        products.push((l, number(l, ij[0])?, number(l, ij[1])?, parse_terms(l, rhs)?));
                    }
                }
                "form" => {
                    let mut entries = Vec::new();
                    for (l, s) in block(&mut k, ln)? {
                        let (lhs, rhs) = s.split_once("->").ok_or_else(|| err(l, "missing ->"))?;
                        let ij: Vec<&str> = lhs.split_whitespace().collect();
                        if ij.len() != 2 {
                            return Err(err(l, "expected two basis indices before ->"));
                        }
                        let v = Rat::from_str(rhs.trim()).map_err(|_| err(l, format!("bad rational {:?}", rhs.trim())))?;
                        entries.push((l, number(l, ij[0])?, number(l, ij[1])?, v));
                    }
                    form_entries = Some(entries);
                }
                "report" => report = Some(rest.to_string()),
                _ => return Err(err(ln, format!("unrecognised line {line:?}"))),
            }
            k += 1;
        }
        let name = name.ok_or_else(|| err(0, "missing algebra line"))?;
        let law = law.ok_or_else(|| err(0, "missing law"))?;
        let n = dim.ok_or_else(|| err(0, "missing dim"))?;
        let naxes = naxes.ok_or_else(|| err(0, "missing axes"))?;
        let check_vec = |l: usize, v: &SVec| -> Result<(), ParseError> {
            match v.last() {
                Some((i, _)) if *i >= n => Err(err(l, format!("basis index {i} out of range for dimension {n}"))),
                _ => Ok(()),
            }
        };
        if axes.len() != naxes {
            return Err(err(0, format!("{} axis lines for {naxes} axes", axes.len())));
        }
        let mut axis_vecs = Vec::with_capacity(naxes);
        for (x, (idx, v)) in axes.into_iter().enumerate() {
            if idx != x {
                return Err(err(0, format!("axis lines out of order at axis {x}")));
            }
            check_vec(0, &v)?;
            axis_vecs.push(v);
        }
        let mut mu: Vec<Option<SVec>> = vec![None; n * (n + 1) / 2];
        for (l, i, j, v) in products {
            if i >= n || j >= n {
                return Err(err(l, format!("basis index out of range for dimension {n}")));
            }
            check_vec(l, &v)?;
            let slot = &mut mu[tri(i, j)];
            if slot.is_some() {
                return Err(err(l, format!("product {i} {j} given twice")));
            }
            *slot = Some(v);
        }
        let algebra = Algebra::new(n, mu.into_iter().map(Option::unwrap_or_default).collect(), axis_vecs, law);
        let form = match form_entries {
            None => None,
            Some(entries) => {
                let mut m = Mat::zeros(n, n);
                for (l, i, j, v) in entries {
                    if i >= n || j >= n {
                        return Err(err(l, format!("basis index out of range for dimension {n}")));
                    }
                    m[(i, j)] = v.clone();
                    m[(j, i)] = v;
                }
                Some(m)
            }
        };
        for g in gens.iter().chain(tau.iter().flat_map(|t| t.as_slice())) {
            if g.degree() != naxes {
                return Err(err(0, format!("permutation {g} does not act on {naxes} axes")));
            }
        }
        if tau.as_ref().is_some_and(|t| t.len() != naxes) {
            return Err(err(0, "tau needs one permutation per axis"));
        }
        if marked.is_some_and(|(a, b)| a >= naxes || b >= naxes) {
            return Err(err(0, "marked axis out of range"));
        }
        Ok(AlgebraFile { name, gens, tau, shape, marked, algebra, form, report })
    }
}

fn number(line: usize, s: &str) -> Result<usize, ParseError> {
    s.parse().map_err(|_| err(line, format!("bad number {s:?}")))
}

fn terms(v: &SVec) -> String {
    let mut s = String::new();
    for (i, c) in v {
        write!(s, " {i}:{c}").unwrap();
    }
    s
}

fn parse_terms(line: usize, s: &str) -> Result<SVec, ParseError> {
    let mut out: SVec = Vec::new();
    for t in s.split_whitespace() {
        let (i, c) = t.split_once(':').ok_or_else(|| err(line, format!("bad term {t:?}, expected index:value")))?;
        let i = number(line, i)?;
        let c = Rat::from_str(c).map_err(|_| err(line, format!("bad rational {c:?}")))?;
        if c.is_zero() {
            return Err(err(line, format!("zero coefficient in term {t:?}")));
        }
        if out.last().is_some_and(|e| e.0 >= i) {
            return Err(err(line, "term indices must increase"));
        }
        out.push((i, c));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_dumps_round_trip() {
        for d in catalog::all() {
            let f = AlgebraFile::from_catalog(&d);
            let text = f.dump();
            let back = AlgebraFile::parse(&text).unwrap();
            assert_eq!(back, f, "{}", d.name);
            assert_eq!(back.dump(), text);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "algebra X\nlaw monster\naxes 1\ndim 1\naxis 0 -> 0:1\nproducts\n0 0 -> 0:x\nend\n";
        let e = AlgebraFile::parse(text).unwrap_err();
        assert_eq!(e.line, 7);
    }
}
