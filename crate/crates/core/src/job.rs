//! Job files: the group, its axis orbits, the fusion law, the tau-map and
//! which shapes to build.
//!
//! ```text
//! # comment
//! name S4
//! axes 6+3
//! law monster              (or an inline `fusion-law ... end` block)
//! gen [0,4,5,3,1,2,6,8,7]
//! tau                      (one permutation per point, then `end`)
//! ...
//! end
//! shape enumerate          (or `shape 4A3A2B`)
//! ```
//!
//! Optional lines: `tau enumerate`, `normalizer-gen [..]`, `max-expansions N`,
//! `max-dim N`, `fix-trick on|off`, `partial-expand on|off`,
//! `form-value <point> <rational>`.

use std::str::FromStr;

use crate::fusion::FusionLaw;
use crate::linalg::Rat;
use crate::permgroup::{GroupAction, Perm};
use crate::shape::TauMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct JobError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSpec {
    Given(TauMap),
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeSpec {
    Enumerate,
    Label(String),
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub name: String,
    pub orbit_sizes: Vec<usize>,
    pub law: FusionLaw,
    pub gens: Vec<Perm>,
    pub tau: TauSpec,
    pub shape: ShapeSpec,
    pub normalizer_gens: Vec<Perm>,
    pub max_expansions: Option<usize>,
    pub max_dim: Option<usize>,
    pub fix_trick: Option<bool>,
    pub partial_expand: Option<bool>,
    /// `(a, a)` for axes other than 1, by point.
    pub form_values: Vec<(usize, Rat)>,
}

fn err(line: usize, msg: impl Into<String>) -> JobError {
    JobError { line, msg: msg.into() }
}

fn on_off(line: usize, s: &str) -> Result<bool, JobError> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(err(line, format!("expected on or off, got {s:?}"))),
    }
}

fn number(line: usize, s: &str) -> Result<usize, JobError> {
    s.parse().map_err(|_| err(line, format!("bad number {s:?}")))
}

impl JobConfig {
    pub fn degree(&self) -> usize {
        self.orbit_sizes.iter().sum()
    }

    pub fn orbit_label(&self) -> String {
        self.orbit_sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("+")
    }

    pub fn group(&self) -> GroupAction {
        GroupAction::new(self.degree(), self.gens.clone()).expect("validated when parsed")
    }

    pub fn parse(text: &str) -> Result<JobConfig, JobError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut name = None;
        let mut orbit_sizes: Option<Vec<usize>> = None;
        let mut law = None;
        let mut gens = Vec::new();
        let mut tau = None;
        let mut shape = None;
        let mut cfg_extra = (Vec::new(), None, None, None, None, Vec::new());
        let mut k = 0;
        let block = |k: &mut usize, start: usize| -> Result<Vec<&str>, JobError> {
            let mut out = Vec::new();
            loop {
                *k += 1;
                match lines.get(*k) {
                    None => return Err(err(start, "block is missing its end line")),
                    Some((_, "end")) => return Ok(out),
                    Some((_, l)) => out.push(*l),
                }
            }
        };
        while k < lines.len() {
            let (ln, line) = lines[k];
            let (key, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(a, b)| (a, b.trim()));
            match key {
                "name" => name = Some(rest.to_string()),
                "axes" => {
                    let sizes: Result<Vec<usize>, _> = rest.split('+').map(|s| number(ln, s.trim())).collect();
                    let sizes = sizes?;
                    if sizes.is_empty() || sizes.contains(&0) {
                        return Err(err(ln, "orbit sizes must be positive"));
                    }
                    orbit_sizes = Some(sizes);
                }
                "law" if rest == "monster" => law = Some(FusionLaw::monster()),
                "law" => return Err(err(ln, format!("unknown law {rest:?}"))),
                "fusion-law" => {
                    let body = block(&mut k, ln)?;
                    let text = format!("fusion-law\n{}\nend\n", body.join("\n"));
                    law = Some(FusionLaw::parse(&text).map_err(|e| err(ln, e.to_string()))?);
                }
                "gen" => gens.push(Perm::from_str(rest).map_err(|e| err(ln, e.to_string()))?),
                "tau" if rest == "enumerate" => tau = Some(TauSpec::Enumerate),
                "tau" if rest.is_empty() => {
                    let body = block(&mut k, ln)?;
                    let perms: Result<Vec<Perm>, _> = body.iter().map(|l| Perm::from_str(l)).collect();
                    tau = Some(TauSpec::Given(TauMap::new(perms.map_err(|e| err(ln, e.to_string()))?)));
                }
                "shape" if rest == "enumerate" => shape = Some(ShapeSpec::Enumerate),
                "shape" if !rest.is_empty() => shape = Some(ShapeSpec::Label(rest.to_string())),
                "normalizer-gen" => cfg_extra.0.push(Perm::from_str(rest).map_err(|e| err(ln, e.to_string()))?),
                "max-expansions" => cfg_extra.1 = Some(number(ln, rest)?),
                "max-dim" => cfg_extra.2 = Some(number(ln, rest)?),
                "fix-trick" => cfg_extra.3 = Some(on_off(ln, rest)?),
                "partial-expand" => cfg_extra.4 = Some(on_off(ln, rest)?),
                "form-value" => {
                    let (p, v) = rest.split_once(char::is_whitespace).ok_or_else(|| err(ln, "expected a point and a value"))?;
                    let v = Rat::from_str(v.trim()).map_err(|_| err(ln, format!("bad rational {v:?}")))?;
                    cfg_extra.5.push((number(ln, p)?, v));
                }
                _ => return Err(err(ln, format!("unrecognised line {line:?}"))),
            }
            k += 1;
        }
        let (normalizer_gens, max_expansions, max_dim, fix_trick, partial_expand, form_values) = cfg_extra;
        let cfg = JobConfig {
            name: name.ok_or_else(|| err(0, "missing name"))?,
            orbit_sizes: orbit_sizes.ok_or_else(|| err(0, "missing axes"))?,
            law: law.ok_or_else(|| err(0, "missing law"))?,
            gens,
            tau: tau.ok_or_else(|| err(0, "missing tau"))?,
            shape: shape.ok_or_else(|| err(0, "missing shape"))?,
            normalizer_gens,
            max_expansions,
            max_dim,
            fix_trick,
            partial_expand,
            form_values,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), JobError> {
        let n = self.degree();
        for g in self.gens.iter().chain(&self.normalizer_gens) {
            if g.degree() != n {
                return Err(err(0, format!("permutation {g} does not act on {n} points")));
            }
        }
        let g = GroupAction::new(n, self.gens.clone()).map_err(|e| err(0, e.to_string()))?;
        let sizes: Vec<usize> = g.orbits().iter().map(Vec::len).collect();
        if sizes != self.orbit_sizes {
            return Err(err(0, format!("generators have orbit sizes {sizes:?}, axes line says {:?}", self.orbit_sizes)));
        }
        if let TauSpec::Given(t) = &self.tau {
            if t.len() != n {
                return Err(err(0, format!("tau lists {} permutations for {n} points", t.len())));
            }
            if t.as_slice().iter().any(|p| p.degree() != n) {
                return Err(err(0, "tau permutation of the wrong degree"));
            }
        }
        if let Some((p, _)) = self.form_values.iter().find(|(p, _)| *p >= n) {
            return Err(err(0, format!("form-value for point {p} out of range")));
        }
        Ok(())
    }

    /// `(a, a)` for every axis point.
    pub fn axis_form_values(&self) -> Vec<Rat> {
        let mut out = vec![Rat::one(); self.degree()];
        for (p, v) in &self.form_values {
            out[*p] = v.clone();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_job() {
        let text = "# V4\nname V4\naxes 2+2+1\nlaw monster\ngen [1,0,2,3,4]\ngen [0,1,3,2,4]\ntau\n[0,1,3,2,4]\n[0,1,3,2,4]\n[1,0,2,3,4]\n[1,0,2,3,4]\n[0,1,2,3,4]\nend\nshape 4A2A2A\n";
        let j = JobConfig::parse(text).unwrap();
        assert_eq!(j.degree(), 5);
        assert_eq!(j.orbit_label(), "2+2+1");
        assert_eq!(j.shape, ShapeSpec::Label("4A2A2A".into()));
        assert!(matches!(j.tau, TauSpec::Given(ref t) if t.len() == 5));
    }

    #[test]
    fn orbit_mismatch_is_an_error() {
        let text = "name X\naxes 3\nlaw monster\ngen [1,0,2]\ntau enumerate\nshape enumerate\n";
        assert!(JobConfig::parse(text).is_err());
    }
}
