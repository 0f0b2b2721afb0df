//! Fusion laws, their gradings and the derived rules on pure subsets.
//!
//! Subsets of eigenvalues are bitmasks over the law's value list.

use std::fmt::Write as _;

use crate::linalg::Rat;

pub type ValueSet = u32;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FusionError {
    #[error("fusion law parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid fusion law: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionLaw {
    values: Vec<Rat>,
    table: Vec<Vec<ValueSet>>,
    plus: ValueSet,
    minus: ValueSet,
}

/// `left * right = result` for pure subsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub left: ValueSet,
    pub right: ValueSet,
    pub result: ValueSet,
}

impl FusionLaw {
    pub fn new(values: Vec<Rat>, table: Vec<Vec<ValueSet>>, plus: ValueSet, minus: ValueSet) -> Result<FusionLaw, FusionError> {
        let n = values.len();
        let inv = |m: &str| Err(FusionError::Invalid(m.to_string()));
        if n == 0 || n > 31 {
            return inv("a law needs between 1 and 31 values");
        }
        for i in 0..n {
            if values[i + 1..].contains(&values[i]) {
                return inv("repeated eigenvalue");
            }
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return inv("table shape does not match the value list");
        }
        let all = (1u32 << n) - 1;
        for i in 0..n {
            for j in 0..n {
                if table[i][j] != table[j][i] {
                    return inv("table is not symmetric");
                }
                if table[i][j] & !all != 0 {
                    return inv("table entry outside the value list");
                }
            }
        }
        if plus & minus != 0 || plus | minus != all {
            return inv("grading parts must partition the values");
        }
        let law = FusionLaw { values, table, plus, minus };
        if let Some(one) = law.index_of(&Rat::one()) {
            if plus & (1 << one) == 0 {
                return inv("1 must lie in the even part");
            }
        } else {
            return inv("the law must contain 1");
        }
        for i in 0..n {
            for j in 0..n {
                let s = law.table[i][j];
                let pi = plus & (1 << i) != 0;
                let pj = plus & (1 << j) != 0;
                let want = if pi == pj { plus } else { minus };
                if s & !want != 0 {
                    return inv("grading is not respected by the table");
                }
            }
        }
        Ok(law)
    }

    /// The law `{1, 0, 1/4, 1/32}` with its Z2-grading.
    pub fn monster() -> FusionLaw {
        let v = |s: &str| s.parse::<Rat>().unwrap();
        let values = vec![v("1"), v("0"), v("1/4"), v("1/32")];
        let (e, z, q, t) = (1u32, 2u32, 4u32, 8u32);
        let table = vec![
            vec![e, 0, q, t],
            vec![0, z, q, t],
            vec![q, q, e | z, t],
            vec![t, t, t, e | z | q],
        ];
        FusionLaw::new(values, table, e | z | q, t).unwrap()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn all(&self) -> ValueSet {
        (1 << self.values.len()) - 1
    }

    pub fn plus(&self) -> ValueSet {
        self.plus
    }

    pub fn minus(&self) -> ValueSet {
        self.minus
    }

    pub fn index_of(&self, v: &Rat) -> Option<usize> {
        self.values.iter().position(|x| x == v)
    }

    pub fn one_index(&self) -> usize {
        self.index_of(&Rat::one()).expect("law contains 1")
    }

    pub fn star(&self, i: usize, j: usize) -> ValueSet {
        self.table[i][j]
    }

    pub fn extended_star(&self, a: ValueSet, b: ValueSet) -> ValueSet {
        let mut out = 0;
        for i in members(a) {
            for j in members(b) {
                out |= self.table[i][j];
            }
        }
        out
    }

    /// The grading part containing `s`, if `s` is pure.
    pub fn part_of(&self, s: ValueSet) -> Option<ValueSet> {
        if s & !self.plus == 0 {
            Some(self.plus)
        } else if s & !self.minus == 0 {
            Some(self.minus)
        } else {
            None
        }
    }

    pub fn is_pure(&self, s: ValueSet) -> bool {
        self.part_of(s).is_some()
    }

    /// All nonempty pure subsets, by size then mask.
    pub fn pure_subsets(&self) -> Vec<ValueSet> {
        let mut out: Vec<ValueSet> = Vec::new();
        for part in [self.plus, self.minus] {
            let mut s = part;
            while s != 0 {
                out.push(s);
                s = (s - 1) & part;
            }
        }
        out.sort_by_key(|&s| (s.count_ones(), s));
        out
    }

    /// Rules `I * J = K` between nonempty pure subsets where `K` is a proper
    /// subset of its grading part and neither `I` nor `J` can be enlarged
    /// within its part without changing `K`. Each unordered pair once.
    pub fn useful_rules(&self) -> Vec<Rule> {
        let subs = self.pure_subsets();
        let mut out = Vec::new();
        for (x, &i) in subs.iter().enumerate() {
            for &j in &subs[x..] {
                let k = self.extended_star(i, j);
                let part = if self.part_of(i) == self.part_of(j) { self.plus } else { self.minus };
                if k == part {
                    continue;
                }
                let maximal = |a: ValueSet, b: ValueSet| {
                    let pa = self.part_of(a).unwrap();
                    let mut extra = pa & !a;
                    while extra != 0 {
                        if self.extended_star(a | extra, b) == k {
                            return false;
                        }
                        extra = (extra - 1) & (pa & !a);
                    }
                    true
                };
                if maximal(i, j) && maximal(j, i) {
                    out.push(Rule { left: i, right: j, result: k });
                }
            }
        }
        out
    }

    pub fn format_set(&self, s: ValueSet) -> String {
        let v: Vec<String> = members(s).map(|i| self.values[i].to_string()).collect();
        format!("{{{}}}", v.join(","))
    }

    pub fn parse(text: &str) -> Result<FusionLaw, FusionError> {
        let mut values: Option<Vec<Rat>> = None;
        let mut plus: Option<Vec<Rat>> = None;
        let mut minus: Option<Vec<Rat>> = None;
        let mut entries: Vec<(usize, Rat, Rat, Vec<Rat>)> = Vec::new();
        let perr = |line: usize, msg: &str| FusionError::Parse { line, msg: msg.to_string() };
        let rats = |line: usize, s: &str| -> Result<Vec<Rat>, FusionError> {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<Rat>().map_err(|_| perr(line, &format!("bad value {t:?}"))))
                .collect()
        };
        for (k, raw) in text.lines().enumerate() {
            let ln = k + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() || line == "fusion-law" || line == "end" {
                continue;
            }
            if let Some(rest) = line.strip_prefix("values:") {
                values = Some(rats(ln, rest)?);
            } else if let Some(rest) = line.strip_prefix("plus:") {
                plus = Some(rats(ln, rest)?);
            } else if let Some(rest) = line.strip_prefix("minus:") {
                minus = Some(rats(ln, rest)?);
            } else if line.starts_with('(') {
                let (lhs, rhs) = line.split_once("->").ok_or_else(|| perr(ln, "missing ->"))?;
                let lhs = lhs.trim().strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(|| perr(ln, "bad pair"))?;
                let pair = rats(ln, lhs)?;
                if pair.len() != 2 {
                    return Err(perr(ln, "pair needs two values"));
                }
                let rhs = rhs.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| perr(ln, "bad set"))?;
                entries.push((ln, pair[0].clone(), pair[1].clone(), rats(ln, rhs)?));
            } else {
                return Err(perr(ln, "unrecognised line"));
            }
        }
        let values = values.ok_or_else(|| perr(0, "missing values line"))?;
        let idx = |ln: usize, v: &Rat| values.iter().position(|x| x == v).ok_or_else(|| perr(ln, &format!("{v} is not a value")));
        let mask = |ln: usize, vs: &[Rat]| -> Result<ValueSet, FusionError> {
            vs.iter().try_fold(0, |m, v| Ok(m | (1 << idx(ln, v)?)))
        };
        let n = values.len();
        let mut table = vec![vec![0; n]; n];
        for (ln, a, b, set) in &entries {
            let (i, j) = (idx(*ln, a)?, idx(*ln, b)?);
            let m = mask(*ln, set)?;
            table[i][j] = m;
            table[j][i] = m;
        }
        let all = (1u32 << n) - 1;
        let plus = match &plus {
            Some(p) => mask(0, p)?,
            None => all,
        };
        let minus = match &minus {
            Some(m) => mask(0, m)?,
            None => all & !plus,
        };
        FusionLaw::new(values, table, plus, minus)
    }

    pub fn to_text(&self) -> String {
        let list = |s: ValueSet| members(s).map(|i| self.values[i].to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::from("fusion-law\n");
        writeln!(out, "values: {}", list(self.all())).unwrap();
        writeln!(out, "plus: {}", list(self.plus)).unwrap();
        writeln!(out, "minus: {}", list(self.minus)).unwrap();
        for i in 0..self.len() {
            for j in i..self.len() {
                let s = self.table[i][j];
                if s != 0 {
                    let inner = members(s).map(|k| self.values[k].to_string()).collect::<Vec<_>>().join(",");
                    writeln!(out, "({},{}) -> [{}]", self.values[i], self.values[j], inner).unwrap();
                }
            }
        }
        out.push_str("end\n");
        out
    }
}

pub fn members(s: ValueSet) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| s & (1 << i) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(law: &FusionLaw, vs: &[&str]) -> ValueSet {
        vs.iter().map(|v| 1 << law.index_of(&v.parse().unwrap()).unwrap()).fold(0, |a, b| a | b)
    }

    #[test]
    fn monster_rules_brute_force() {
        let law = FusionLaw::monster();
        let rules = law.useful_rules();
        let expected: &[(&[&str], &[&str], &[&str])] = &[
            (&["1"], &["0"], &[]),
            (&["1"], &["1", "0"], &["1"]),
            (&["1"], &["0", "1/4"], &["1/4"]),
            (&["1"], &["1", "0", "1/4"], &["1", "1/4"]),
            (&["0"], &["1", "0"], &["0"]),
            (&["0"], &["1", "1/4"], &["1/4"]),
            (&["0"], &["1", "0", "1/4"], &["0", "1/4"]),
            (&["1/4"], &["1/4"], &["1", "0"]),
            (&["1/4"], &["1", "0"], &["1/4"]),
            (&["1", "0"], &["1", "0"], &["1", "0"]),
            (&["1", "0"], &["1", "1/4"], &["1", "1/4"]),
            (&["1", "0"], &["0", "1/4"], &["0", "1/4"]),
        ];
        assert_eq!(rules.len(), 12);
        for (i, j, k) in expected {
            let (i, j, k) = (set(&law, i), set(&law, j), set(&law, k));
            assert!(
                rules.iter().any(|r| r.result == k && ((r.left, r.right) == (i, j) || (r.left, r.right) == (j, i))),
                "missing {} * {}",
                law.format_set(i),
                law.format_set(j)
            );
        }
    }

    #[test]
    fn text_roundtrip() {
        let law = FusionLaw::monster();
        let text = law.to_text();
        let back = FusionLaw::parse(&text).unwrap();
        assert_eq!(back, law);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn rejects_bad_grading() {
        let text = "values: 1 0\nplus: 1\nminus: 0\n(1,1) -> [1]\n(0,0) -> [0]\n";
        assert!(FusionLaw::parse(text).is_err());
    }
}
