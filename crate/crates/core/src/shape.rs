//! Tau-maps, their admissibility against the catalog, and shapes.
//!
//! For a pair of axes `{a, b}` the dihedral group `D = <tau_a, tau_b>`
//! moves `a` and `b` around a polygon `a_0 = a, a_1 = b, a_2, ...` with
//! `a_{i+1} = a_{i-1}^{tau(a_i)}`. Its length is the `n` of the pair and the
//! catalog algebras with that `n` are the candidates for the subalgebra
//! `<<a, b>>`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::catalog;
use crate::fusion::FusionLaw;
use crate::permgroup::{GroupAction, Perm};

/// Longest polygon in the catalog.
const MAX_POLYGON: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauMap {
    tau: Vec<Perm>,
}

impl TauMap {
    pub fn new(tau: Vec<Perm>) -> TauMap {
        TauMap { tau }
    }

    pub fn identity(n: usize) -> TauMap {
        TauMap { tau: vec![Perm::identity(n); n] }
    }

    pub fn get(&self, x: usize) -> &Perm {
        &self.tau[x]
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn as_slice(&self) -> &[Perm] {
        &self.tau
    }

    /// The map `x -> tau(x^(m^-1))^m` for a permutation `m` normalising the group.
    pub fn transform(&self, m: &Perm) -> TauMap {
        let inv = m.inverse();
        TauMap { tau: (0..self.tau.len()).map(|x| self.tau[inv.apply(x)].conj(m)).collect() }
    }

    /// Group generated by the image.
    pub fn miyamoto_group(&self) -> GroupAction {
        let n = self.tau.len();
        let gens: BTreeSet<Perm> = self.tau.iter().filter(|t| !t.is_identity()).cloned().collect();
        GroupAction::new(n, gens.into_iter().collect()).expect("image lies in a bounded group")
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TauError {
    #[error("tau map has {0} entries but the group acts on {1} points")]
    WrongLength(usize, usize),
    #[error("tau({0}) is neither the identity nor an involution")]
    NotInvolution(usize),
    #[error("tau({0}) is not an element of the group")]
    NotInGroup(usize),
    #[error("tau({0}) does not lie in the centre of the stabiliser of {0}")]
    NotCentral(usize),
    #[error("tau is not equivariant: tau({x})^g != tau({x}^g) for generator {gen}")]
    NotEquivariant { x: usize, gen: usize },
    #[error("the fusion law has no odd part, so tau({0}) must be the identity")]
    Ungraded(usize),
    #[error("pair {{{a},{b}}} is not admissible: {reason}")]
    Inadmissible { a: usize, b: usize, reason: String },
}

/// The polygon of a pair and the catalog algebras whose Miyamoto action on
/// their polygon axes agrees with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    /// `a_0 .. a_{n-1}` as points.
    pub points: Vec<usize>,
    pub types: Vec<&'static str>,
}

impl Polygon {
    pub fn n(&self) -> usize {
        self.points.len()
    }
}

pub fn polygon(t: &TauMap, a: usize, b: usize) -> Result<Polygon, String> {
    let mut pts = vec![a, b];
    loop {
        let k = pts.len();
        let next = t.get(pts[k - 1]).apply(pts[k - 2]);
        pts.push(next);
        let k = pts.len();
        if pts[k - 2] == a && pts[k - 1] == b {
            pts.truncate(k - 2);
            break;
        }
        if k > 2 * MAX_POLYGON + 2 {
            return Err(format!("dihedral orbit does not close up within {MAX_POLYGON} axes"));
        }
    }
    let n = pts.len();
    if n > MAX_POLYGON {
        return Err(format!("dihedral orbit has {n} axes"));
    }
    let distinct: HashSet<usize> = pts.iter().copied().collect();
    if distinct.len() != n {
        return Err(format!("polygon {pts:?} repeats an axis before closing"));
    }
    let pos: HashMap<usize, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut types = Vec::new();
    for name in catalog::names_with_n(n) {
        let refl = catalog::reflections(name).expect("catalog name");
        let agrees = (0..n).all(|i| {
            let ti = t.get(pts[i]);
            (0..n).all(|j| pos.get(&ti.apply(pts[j])) == Some(&refl[i].apply(j)))
        });
        if agrees {
            types.push(name);
        }
    }
    if types.is_empty() {
        return Err(format!("action on the {n} axes {pts:?} matches no catalog algebra"));
    }
    Ok(Polygon { points: pts, types })
}

/// Checks the tau-map axioms and admissibility of every pair orbit.
pub fn validate_tau(g: &GroupAction, t: &TauMap, law: &FusionLaw) -> Result<(), TauError> {
    let n = g.degree();
    if t.len() != n {
        return Err(TauError::WrongLength(t.len(), n));
    }
    for x in 0..n {
        let tx = t.get(x);
        if !tx.is_identity() && !tx.is_involution() {
            return Err(TauError::NotInvolution(x));
        }
        if law.minus() == 0 && !tx.is_identity() {
            return Err(TauError::Ungraded(x));
        }
        if !g.contains(tx) {
            return Err(TauError::NotInGroup(x));
        }
        for (k, s) in g.generators().iter().enumerate() {
            if t.get(s.apply(x)) != &tx.conj(s) {
                return Err(TauError::NotEquivariant { x, gen: k });
            }
        }
    }
    for orbit in g.orbits() {
        let x = orbit[0];
        let tx = t.get(x);
        if !tx.fixes(x) {
            return Err(TauError::NotCentral(x));
        }
        for i in g.stabilizer_generators(x) {
            let h = g.element(i);
            if tx.then(h) != h.then(tx) {
                return Err(TauError::NotCentral(x));
            }
        }
    }
    for orb in g.orbits_on_pairs() {
        let (a, b) = orb[0];
        polygon(t, a, b).map_err(|reason| TauError::Inadmissible { a, b, reason })?;
    }
    Ok(())
}

/// An element of the group carrying `x` to each point of its orbit.
fn transversal(g: &GroupAction, x: usize) -> Vec<Option<Perm>> {
    let mut out: Vec<Option<Perm>> = vec![None; g.degree()];
    out[x] = Some(Perm::identity(g.degree()));
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        let h = out[y].clone().unwrap();
        for s in g.generators() {
            let z = s.apply(y);
            if out[z].is_none() {
                out[z] = Some(h.then(s));
                queue.push_back(z);
            }
        }
    }
    out
}

/// All admissible tau-maps whose image generates the whole group, one per
/// class under `normalizer` when given. The result is sorted.
pub fn enumerate_tau_maps(g: &GroupAction, law: &FusionLaw, normalizer: Option<&GroupAction>) -> Vec<TauMap> {
    let n = g.degree();
    let orbits = g.orbits();
    let mut orbit_of = vec![0; n];
    for (k, o) in orbits.iter().enumerate() {
        for &y in o {
            orbit_of[y] = k;
        }
    }
    // Candidate extensions per orbit.
    let cands: Vec<Vec<Vec<(usize, Perm)>>> = orbits
        .iter()
        .map(|o| {
            let x = o[0];
            let tr = transversal(g, x);
            let mut cs = vec![Perm::identity(n)];
            if law.minus() != 0 {
                cs.extend(g.central_involutions_of_stabilizer(x));
            }
            cs.into_iter().map(|c| o.iter().map(|&y| (y, c.conj(tr[y].as_ref().unwrap()))).collect()).collect()
        })
        .collect();
    // Pair orbit representatives, filed under the later of their two orbits.
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); orbits.len()];
    for orb in g.orbits_on_pairs() {
        let (a, b) = orb[0];
        checks[orbit_of[a].max(orbit_of[b])].push((a, b));
    }

    let mut found = Vec::new();
    let mut cur = TauMap::identity(n);
    search(0, &cands, &checks, &mut cur, &mut found);

    let mut out: BTreeSet<TauMap> = BTreeSet::new();
    for t in found {
        if t.miyamoto_group().order() != g.order() {
            continue;
        }
        let canon = match normalizer {
            Some(nm) => nm.elements().iter().map(|m| t.transform(m)).min().unwrap(),
            None => t,
        };
        out.insert(canon);
    }
    out.into_iter().collect()
}

fn search(
    k: usize,
    cands: &[Vec<Vec<(usize, Perm)>>],
    checks: &[Vec<(usize, usize)>],
    cur: &mut TauMap,
    found: &mut Vec<TauMap>,
) {
    if k == cands.len() {
        found.push(cur.clone());
        return;
    }
    for c in &cands[k] {
        for (y, p) in c {
            cur.tau[*y] = p.clone();
        }
        if checks[k].iter().all(|&(a, b)| polygon(cur, a, b).is_ok()) {
            search(k + 1, cands, checks, cur, found);
        }
    }
}

/// Elements of `normalizer` fixing `t`.
pub fn tau_stabilizer(normalizer: &GroupAction, t: &TauMap) -> GroupAction {
    let gens = normalizer.subgroup_generators(|m| &t.transform(m) == t);
    normalizer.subgroup(gens.into_iter().map(|i| normalizer.element(i).clone()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    /// Lexicographically least pair in the orbit.
    pub rep: (usize, usize),
    pub orbit_size: usize,
    pub polygon: Polygon,
}

impl Vertex {
    pub fn n(&self) -> usize {
        self.polygon.n()
    }
}

/// Some pair in orbit `from` dominates a pair in orbit `to`, which then
/// spans a subalgebra with polygon length `sub_n` inside the larger one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub sub_n: usize,
}

#[derive(Clone, Debug)]
pub struct ShapeGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub components: Vec<Vec<usize>>,
    vertex_of: HashMap<(usize, usize), usize>,
}

impl ShapeGraph {
    pub fn vertex_of(&self, a: usize, b: usize) -> usize {
        self.vertex_of[&(a.min(b), a.max(b))]
    }

    pub fn dominated_by_larger(&self, v: usize) -> bool {
        self.edges.iter().any(|e| e.to == v && self.vertices[e.from].n() > self.vertices[v].n())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Pair orbits with their polygons, domination edges and weak components.
/// `t` must be admissible.
pub fn shape_graph(g: &GroupAction, t: &TauMap) -> Result<ShapeGraph, TauError> {
    let mut vertices = Vec::new();
    let mut vertex_of = HashMap::new();
    for (k, orb) in g.orbits_on_pairs().into_iter().enumerate() {
        let (a, b) = orb[0];
        let polygon = polygon(t, a, b).map_err(|reason| TauError::Inadmissible { a, b, reason })?;
        for &p in &orb {
            vertex_of.insert(p, k);
        }
        vertices.push(Vertex { rep: (a, b), orbit_size: orb.len(), polygon });
    }
    let mut edges = BTreeSet::new();
    for (u, v) in vertices.iter().enumerate() {
        let pts = &v.polygon.points;
        let n = pts.len();
        for i in 0..n {
            for j in i + 1..n {
                let w = vertex_of[&(pts[i].min(pts[j]), pts[i].max(pts[j]))];
                let sub_n = n / gcd(n, j - i);
                if w == u && sub_n == n {
                    continue;
                }
                edges.insert(Edge { from: u, to: w, sub_n });
            }
        }
    }
    let edges: Vec<Edge> = edges.into_iter().collect();

    let mut comp = vec![usize::MAX; vertices.len()];
    let mut components = Vec::new();
    for s in 0..vertices.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut k = 0;
        while k < members.len() {
            let x = members[k];
            for e in &edges {
                let y = if e.from == x {
                    e.to
                } else if e.to == x {
                    e.from
                } else {
                    continue;
                };
                if comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        components.push(members);
    }
    Ok(ShapeGraph { vertices, edges, components, vertex_of })
}

/// One catalog algebra per pair orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    pub choice: Vec<&'static str>,
}

impl Shape {
    pub fn label(&self, graph: &ShapeGraph) -> String {
        shape_label(graph, self)
    }
}

/// Label listing the free choices: larger polygons first, then by orbit
/// representative. Algebras forced by a larger dominating one are left out,
/// as are the forced 5A and 6A unless nothing else is left. With no pairs of
/// axes at all (a single axis) the label is `1A`.
pub fn shape_label(graph: &ShapeGraph, shape: &Shape) -> String {
    if graph.vertices.is_empty() {
        return "1A".into();
    }
    let mut order: Vec<usize> = (0..graph.vertices.len()).filter(|&v| !graph.dominated_by_larger(v)).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.vertices[v].n()), graph.vertices[v].rep));
    let has_free = order.iter().any(|&v| catalog::names_with_n(graph.vertices[v].n()).len() > 1);
    order
        .into_iter()
        .filter(|&v| !has_free || catalog::names_with_n(graph.vertices[v].n()).len() > 1)
        .map(|v| shape.choice[v])
        .collect()
}

fn consistent(graph: &ShapeGraph, choice: &[Option<&'static str>], e: &Edge) -> bool {
    if graph.vertices[e.to].n() != e.sub_n {
        return false;
    }
    match (choice[e.from], choice[e.to]) {
        (Some(big), Some(small)) => catalog::contained_type(big, e.sub_n) == Some(small),
        _ => true,
    }
}

/// All shapes satisfying the domination restrictions. With `k` (the
/// stabiliser of the tau-map in the normaliser) one shape per `k`-orbit is
/// kept, the one with the least label. Sorted by label.
pub fn enumerate_shapes(graph: &ShapeGraph, k: Option<&GroupAction>) -> Vec<Shape> {
    let nv = graph.vertices.len();
    let mut all = Vec::new();
    let mut choice: Vec<Option<&'static str>> = vec![None; nv];
    assign(graph, 0, &mut choice, &mut all);
    for comp in graph.components.iter().filter(|_| all.is_empty()) {
        let mut ch = vec![None; nv];
        let mut local = Vec::new();
        assign_subset(graph, comp, 0, &mut ch, &mut local);
        if local.is_empty() {
            log::warn!("shape component {comp:?} admits no consistent choice");
        }
    }
    let Some(k) = k else {
        let mut out = all;
        out.sort_by_cached_key(|s| (shape_label(graph, s), s.clone()));
        return out;
    };
    let perms: Vec<Vec<usize>> = k
        .generators()
        .iter()
        .map(|m| graph.vertices.iter().map(|v| graph.vertex_of(m.apply(v.rep.0), m.apply(v.rep.1))).collect())
        .collect();
    let mut seen: HashSet<Shape> = HashSet::new();
    let mut out = Vec::new();
    for s in all {
        if seen.contains(&s) {
            continue;
        }
        let mut orbit = vec![s.clone()];
        seen.insert(s);
        let mut i = 0;
        while i < orbit.len() {
            for p in &perms {
                let mut c = orbit[i].choice.clone();
                for (v, &w) in p.iter().enumerate() {
                    c[w] = orbit[i].choice[v];
                }
                let img = Shape { choice: c };
                if seen.insert(img.clone()) {
                    orbit.push(img);
                }
            }
            i += 1;
        }
        out.push(orbit.into_iter().min_by_key(|s| (shape_label(graph, s), s.clone())).unwrap());
    }
    out.sort_by_cached_key(|s| (shape_label(graph, s), s.clone()));
    out
}

fn assign(graph: &ShapeGraph, v: usize, choice: &mut Vec<Option<&'static str>>, out: &mut Vec<Shape>) {
    if v == choice.len() {
        out.push(Shape { choice: choice.iter().map(|c| c.unwrap()).collect() });
        return;
    }
    for name in graph.vertices[v].polygon.types.iter().copied() {
        choice[v] = Some(name);
        if graph.edges.iter().filter(|e| e.from == v || e.to == v).all(|e| consistent(graph, choice, e)) {
            assign(graph, v + 1, choice, out);
        }
    }
    choice[v] = None;
}

fn assign_subset(
    graph: &ShapeGraph,
    vs: &[usize],
    k: usize,
    choice: &mut Vec<Option<&'static str>>,
    out: &mut Vec<Vec<Option<&'static str>>>,
) {
    if k == vs.len() {
        out.push(choice.clone());
        return;
    }
    let v = vs[k];
    for name in graph.vertices[v].polygon.types.iter().copied() {
        choice[v] = Some(name);
        if graph.edges.iter().filter(|e| e.from == v || e.to == v).all(|e| consistent(graph, choice, e)) {
            assign_subset(graph, vs, k + 1, choice, out);
        }
    }
    choice[v] = None;
}

/// Independent check of a shape: walks every pair of axes, not only orbit
/// representatives, and every pair inside its polygon.
pub fn check_shape(g: &GroupAction, t: &TauMap, graph: &ShapeGraph, shape: &Shape) -> Result<(), String> {
    let n = g.degree();
    for a in 0..n {
        for b in a + 1..n {
            let big = shape.choice[graph.vertex_of(a, b)];
            let poly = polygon(t, a, b)?;
            let m = poly.n();
            if catalog::polygon_size_of(big) != m {
                return Err(format!("pair {{{a},{b}}} has {m} axes in its polygon but is assigned {big}"));
            }
            for i in 0..m {
                for j in i + 1..m {
                    let small = shape.choice[graph.vertex_of(poly.points[i], poly.points[j])];
                    let want = catalog::contained_type(big, m / gcd(m, j - i));
                    if want != Some(small) {
                        return Err(format!(
                            "pair {{{a},{b}}} is {big} but its sub-pair {{{},{}}} is {small}",
                            poly.points[i], poly.points[j]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Orbit lengths joined by `+`, in order of least point.
pub fn orbit_string(g: &GroupAction) -> String {
    let v: Vec<String> = g.orbits().iter().map(|o| o.len().to_string()).collect();
    v.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `S_4` acting by conjugation on its six transpositions.
    fn s4_on_transpositions() -> (GroupAction, TauMap) {
        let pairs: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let act = |p: &[usize; 4]| -> Perm {
            Perm::from_images(
                pairs
                    .iter()
                    .map(|&(x, y)| {
                        let (u, v) = (p[x], p[y]);
                        pairs.iter().position(|&q| q == (u.min(v), u.max(v))).unwrap()
                    })
                    .collect(),
            )
            .unwrap()
        };
        let g = GroupAction::new(6, vec![act(&[1, 0, 2, 3]), act(&[1, 2, 3, 0])]).unwrap();
        let tau = pairs
            .iter()
            .map(|&(x, y)| {
                let mut p = [0, 1, 2, 3];
                p.swap(x, y);
                act(&p)
            })
            .collect();
        (g, TauMap::new(tau))
    }

    #[test]
    fn identity_tau_is_admissible() {
        let (g, _) = s4_on_transpositions();
        assert!(validate_tau(&g, &TauMap::identity(6), &FusionLaw::monster()).is_ok());
    }

    #[test]
    fn transposition_tau_types() {
        let (g, t) = s4_on_transpositions();
        validate_tau(&g, &t, &FusionLaw::monster()).unwrap();
        let sg = shape_graph(&g, &t).unwrap();
        let ns: Vec<usize> = sg.vertices.iter().map(|v| v.n()).collect();
        assert_eq!(ns, vec![3, 2]);
        assert!(sg.edges.is_empty());
        assert_eq!(sg.components.len(), 2);
        let shapes = enumerate_shapes(&sg, None);
        let labels: Vec<String> = shapes.iter().map(|s| s.label(&sg)).collect();
        assert_eq!(labels, vec!["3A2A", "3A2B", "3C2A", "3C2B"]);
        for s in &shapes {
            check_shape(&g, &t, &sg, s).unwrap();
        }
    }

    #[test]
    fn non_equivariant_tau_is_rejected() {
        let (g, t) = s4_on_transpositions();
        let mut v = t.as_slice().to_vec();
        v.swap(0, 1);
        let r = validate_tau(&g, &TauMap::new(v), &FusionLaw::monster());
        assert!(matches!(r, Err(TauError::NotEquivariant { .. })));
    }

    #[test]
    fn trivial_group_on_one_point() {
        let g = GroupAction::new(1, vec![]).unwrap();
        let ts = enumerate_tau_maps(&g, &FusionLaw::monster(), None);
        assert_eq!(ts, vec![TauMap::identity(1)]);
    }

    #[test]
    fn s4_enumeration_contains_the_bijective_tau() {
        let (g, t) = s4_on_transpositions();
        let ts = enumerate_tau_maps(&g, &FusionLaw::monster(), None);
        assert!(ts.contains(&t));
        for x in &ts {
            validate_tau(&g, x, &FusionLaw::monster()).unwrap();
        }
    }
}
