//! Permutation groups given by generators on `{0..n-1}`.
//!
//! Groups act on the right: `x^(gh) = (x^g)^h`. Elements are enumerated
//! breadth-first from the generators, so every element carries a shortest
//! word in them.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("generators act on different numbers of points")]
    DegreeMismatch,
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("group order exceeds the bound {0}")]
    TooLarge(usize),
    #[error("normalizer search gave up after {0} nodes")]
    NormalizerTooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images.into_iter().map(|i| i as u32).collect()))
    }

    /// Product of disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Perm {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for k in 0..c.len() {
                img[c[k]] = c[(k + 1) % c.len()];
            }
        }
        Perm::from_images(img).expect("cycles must be disjoint")
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&x| x as usize).collect()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    /// `g^-1 self g`, the conjugate with `x^g -> (x^self)^g`.
    pub fn conj(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.then(self).is_identity()
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm {
    type Err = GroupError;
    fn from_str(s: &str) -> Result<Perm, GroupError> {
        let bad = || GroupError::NotAPermutation(s.to_string());
        let t = s.trim();
        let inner = t.strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(bad)?;
        if inner.trim().is_empty() {
            return Ok(Perm(Vec::new()));
        }
        let imgs: Result<Vec<usize>, _> = inner.split(',').map(|x| x.trim().parse::<usize>()).collect();
        Perm::from_images(imgs.map_err(|_| bad())?)
    }
}

/// A finite permutation group with its full element list.
#[derive(Clone)]
pub struct GroupAction {
    n: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `(parent element, generator)` for the BFS tree; the identity has none.
    parent: Vec<Option<(usize, usize)>>,
}

pub const DEFAULT_ORDER_BOUND: usize = 1_000_000;

impl GroupAction {
    pub fn new(n: usize, gens: Vec<Perm>) -> Result<GroupAction, GroupError> {
        GroupAction::with_bound(n, gens, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(n: usize, gens: Vec<Perm>, bound: usize) -> Result<GroupAction, GroupError> {
        if gens.iter().any(|g| g.degree() != n) {
            return Err(GroupError::DegreeMismatch);
        }
        let gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        let id = Perm::identity(n);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut parent = vec![None];
        let mut k = 0;
        while k < elements.len() {
            for (gi, g) in gens.iter().enumerate() {
                let h = elements[k].then(g);
                if !index.contains_key(&h) {
                    if elements.len() >= bound {
                        return Err(GroupError::TooLarge(bound));
                    }
                    index.insert(h.clone(), elements.len());
                    elements.push(h);
                    parent.push(Some((k, gi)));
                }
            }
            k += 1;
        }
        Ok(GroupAction { n, gens, elements, index, parent })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    /// Generator indices whose product (left to right) is element `i`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, g)) = self.parent[i] {
            w.push(g);
            i = p;
        }
        w.reverse();
        w
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[x] = true;
        let mut out = vec![x];
        let mut k = 0;
        while k < out.len() {
            for g in &self.gens {
                let y = g.apply(out[k]);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            k += 1;
        }
        out.sort_unstable();
        out
    }

    /// Orbits on points, each sorted, listed by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for x in 0..self.n {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    /// Orbits on unordered pairs `{a, b}`, `a < b`; each orbit is sorted and
    /// its first entry is the lexicographically least pair.
    pub fn orbits_on_pairs(&self) -> Vec<Vec<(usize, usize)>> {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if seen.contains(&(a, b)) {
                    continue;
                }
                let mut orb = vec![(a, b)];
                seen.insert((a, b));
                let mut k = 0;
                while k < orb.len() {
                    let (x, y) = orb[k];
                    for g in &self.gens {
                        let (u, v) = (g.apply(x), g.apply(y));
                        let p = (u.min(v), u.max(v));
                        if seen.insert(p) {
                            orb.push(p);
                        }
                    }
                    k += 1;
                }
                orb.sort_unstable();
                out.push(orb);
            }
        }
        out
    }

    /// Index of some element mapping `x` to `y`.
    pub fn transporter(&self, x: usize, y: usize) -> Option<usize> {
        self.elements.iter().position(|g| g.apply(x) == y)
    }

    /// Generators of the subgroup of elements satisfying `pred`, chosen
    /// greedily among the elements in BFS order.
    pub fn subgroup_generators(&self, pred: impl Fn(&Perm) -> bool) -> Vec<usize> {
        let id = Perm::identity(self.n);
        let mut sub: HashSet<Perm> = HashSet::from([id]);
        let mut gens = Vec::new();
        for (i, g) in self.elements.iter().enumerate() {
            if !pred(g) || sub.contains(g) {
                continue;
            }
            gens.push(i);
            let mut queue: VecDeque<Perm> = sub.iter().cloned().collect();
            while let Some(h) = queue.pop_front() {
                for &j in &gens {
                    let k = h.then(&self.elements[j]);
                    if sub.insert(k.clone()) {
                        queue.push_back(k);
                    }
                }
            }
        }
        gens
    }

    /// Stabiliser of a point, as element indices of its generators.
    pub fn stabilizer_generators(&self, x: usize) -> Vec<usize> {
        self.subgroup_generators(|g| g.fixes(x))
    }

    pub fn stabilizer(&self, x: usize) -> GroupAction {
        let gens = self.stabilizer_generators(x).into_iter().map(|i| self.elements[i].clone()).collect();
        GroupAction::new(self.n, gens).expect("subgroup of a bounded group")
    }

    /// Central involutions of the stabiliser of `x`.
    pub fn central_involutions_of_stabilizer(&self, x: usize) -> Vec<Perm> {
        let gens: Vec<&Perm> = self.stabilizer_generators(x).into_iter().map(|i| &self.elements[i]).collect();
        self.elements
            .iter()
            .filter(|t| t.fixes(x) && t.is_involution())
            .filter(|t| gens.iter().all(|g| t.then(g) == g.then(t)))
            .cloned()
            .collect()
    }

    pub fn subgroup(&self, gens: Vec<Perm>) -> GroupAction {
        GroupAction::new(self.n, gens).expect("subgroup of a bounded group")
    }

    pub fn same_group(&self, other: &GroupAction) -> bool {
        self.n == other.n
            && self.order() == other.order()
            && other.gens.iter().all(|g| self.contains(g))
    }
}

impl fmt::Debug for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupAction(n={}, order={}, gens={:?})", self.n, self.order(), self.gens)
    }
}

/// Default limit on search nodes for [`normalizer_in_sym`].
pub const NORMALIZER_NODE_BOUND: usize = 5_000_000;

/// Normaliser of `g` in the symmetric group on its points.
///
/// Points are visited in breadth-first order along the generators, so every
/// point after the first of its orbit is `s(p)` for an earlier `p`. Its image
/// must then be `c(m(p))` for a conjugate `c = m^-1 s m` still consistent
/// with the partial map, which keeps the branching small.
pub fn normalizer_in_sym(g: &GroupAction, node_bound: usize) -> Result<GroupAction, GroupError> {
    let n = g.degree();
    let mut order = Vec::with_capacity(n);
    let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut orbit_len = vec![0; n];
    for orb in g.orbits() {
        for &y in &orb {
            orbit_len[y] = orb.len();
        }
        let x = orb[0];
        seen[x] = true;
        let start = order.len();
        order.push(x);
        let mut k = start;
        while k < order.len() {
            let p = order[k];
            for (si, s) in g.gens.iter().enumerate() {
                let z = s.apply(p);
                if !seen[z] {
                    seen[z] = true;
                    via[z] = Some((p, si));
                    order.push(z);
                }
            }
            k += 1;
        }
    }
    let mut st = Search {
        g,
        order,
        via,
        orbit_len,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        nodes: 0,
        bound: node_bound,
    };
    let cands: Vec<Vec<usize>> = g.gens.iter().map(|_| (0..g.order()).collect()).collect();
    if !st.run(0, &cands) {
        return Err(GroupError::NormalizerTooLarge(node_bound));
    }
    let mut gens: Vec<Perm> = Vec::new();
    let mut sub = GroupAction::new(n, Vec::new())?;
    for p in st.found {
        if !sub.contains(&p) {
            gens.push(p);
            sub = GroupAction::new(n, gens.clone())?;
        }
    }
    Ok(sub)
}

struct Search<'a> {
    g: &'a GroupAction,
    order: Vec<usize>,
    via: Vec<Option<(usize, usize)>>,
    orbit_len: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Perm>,
    nodes: usize,
    bound: usize,
}

impl Search<'_> {
    /// Returns false when the node bound is hit.
    fn run(&mut self, k: usize, cands: &[Vec<usize>]) -> bool {
        let n = self.g.degree();
        if k == n {
            self.found.push(Perm(self.map.iter().map(|&y| y as u32).collect()));
            return true;
        }
        let x = self.order[k];
        let mut options: Vec<usize> = match self.via[x] {
            Some((p, si)) => cands[si].iter().map(|&c| self.g.elements[c].apply(self.map[p])).collect(),
            None => (0..n).filter(|&y| self.orbit_len[y] == self.orbit_len[x]).collect(),
        };
        options.sort_unstable();
        options.dedup();
        for y in options {
            if self.used[y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.bound {
                return false;
            }
            self.map[x] = y;
            self.used[y] = true;
            // Each conjugate c = m^-1 s m must send m(p) to m(s(p)) for all
            // mapped p; only pairs involving x are new.
            let mut next = Vec::with_capacity(cands.len());
            let mut ok = true;
            for (si, s) in self.g.gens.iter().enumerate() {
                let mut pairs = Vec::with_capacity(2);
                let sx = s.apply(x);
                if self.map[sx] != usize::MAX {
                    pairs.push((y, self.map[sx]));
                }
                let sinv_x = (0..n).find(|&p| s.apply(p) == x).unwrap();
                if sinv_x != x && self.map[sinv_x] != usize::MAX {
                    pairs.push((self.map[sinv_x], y));
                }
                let c: Vec<usize> = cands[si]
                    .iter()
                    .copied()
                    .filter(|&e| pairs.iter().all(|&(a, b)| self.g.elements[e].apply(a) == b))
                    .collect();
                if c.is_empty() {
                    ok = false;
                    break;
                }
                next.push(c);
            }
            if ok && !self.run(k + 1, &next) {
                return false;
            }
            self.used[y] = false;
            self.map[x] = usize::MAX;
        }
        true
    }
}

/// The subgroup generated by `tau_a`, `tau_b` and the union of the orbits of
/// `a` and `b` under it.
pub fn dihedral_data(tau_a: &Perm, tau_b: &Perm, a: usize, b: usize) -> (GroupAction, Vec<usize>) {
    let d = GroupAction::new(tau_a.degree(), vec![tau_a.clone(), tau_b.clone()])
        .expect("dihedral subgroup is small");
    let mut x: Vec<usize> = d.orbit(a);
    x.extend(d.orbit(b));
    x.sort_unstable();
    x.dedup();
    (d, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s4_on_4() -> GroupAction {
        GroupAction::new(4, vec![Perm::from_cycles(4, &[&[0, 1]]), Perm::from_cycles(4, &[&[0, 1, 2, 3]])]).unwrap()
    }

    #[test]
    fn orders_and_words() {
        let g = s4_on_4();
        assert_eq!(g.order(), 24);
        for i in 0..g.order() {
            let mut p = Perm::identity(4);
            for k in g.word(i) {
                p = p.then(&g.generators()[k]);
            }
            assert_eq!(&p, g.element(i));
        }
        assert_eq!(g.stabilizer(0).order(), 6);
        assert_eq!(g.orbits_on_pairs().len(), 1);
    }

    #[test]
    fn parse_perm() {
        let p: Perm = "[2,0,1]".parse().unwrap();
        assert_eq!(p.apply(0), 2);
        assert_eq!(p.to_string(), "[2,0,1]");
        assert!("[0,0]".parse::<Perm>().is_err());
    }

    #[test]
    fn normalizer_matches_brute_force() {
        // C4 = <(0 1 2 3)> in S4 has normaliser D8.
        let g = GroupAction::new(4, vec![Perm::from_cycles(4, &[&[0, 1, 2, 3]])]).unwrap();
        let n = normalizer_in_sym(&g, NORMALIZER_NODE_BOUND).unwrap();
        assert_eq!(n.order(), 8);
        let s4 = s4_on_4();
        let brute = s4
            .elements()
            .iter()
            .filter(|m| g.generators().iter().all(|s| g.contains(&s.conj(m))))
            .count();
        assert_eq!(brute, 8);
    }

    #[test]
    fn dihedral_orbits() {
        let t0 = Perm::from_cycles(3, &[&[1, 2]]);
        let t1 = Perm::from_cycles(3, &[&[0, 2]]);
        let (d, x) = dihedral_data(&t0, &t1, 0, 1);
        assert_eq!(d.order(), 6);
        assert_eq!(x, vec![0, 1, 2]);
    }
}
