//! Helpers shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::path::PathBuf;

use axial::analysis::{tri, Algebra};
use axial::catalog::DihedralAlgebra;
use axial::engine::{canonical, EngineOptions};
use axial::job::JobConfig;
use axial::linalg::sparse::{self, SVec};
use axial::linalg::{symmetric_signature, Mat, Quotient, Rat, Subspace};
use axial::pipeline::{self, ShapeRun};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn job_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/jobs").join(format!("{name}.job"))
}

pub fn load_job(name: &str) -> JobConfig {
    JobConfig::parse(&std::fs::read_to_string(job_path(name)).unwrap()).unwrap()
}

/// Builds every shape of a job (or only `only`), in plan order.
pub fn run_job(cfg: &JobConfig, only: Option<&[&str]>, opts: &EngineOptions) -> Vec<ShapeRun> {
    let g = cfg.group();
    let norm = pipeline::normalizer(cfg, &g);
    let mut plan = pipeline::plan(cfg, &g, norm.as_ref()).unwrap();
    if let Some(labels) = only {
        plan.retain(|(_, _, graph, s)| labels.contains(&s.label(graph).as_str()));
    }
    pipeline::build_all(cfg, &g, &plan, &pipeline::options(cfg, opts.clone()), 1, |_| {})
}

/// `(label, dim, m, form)` per run, `dim = "0"` for collapsed and `"?"` for
/// incomplete runs, as in a table of results.
pub fn rows(runs: &[ShapeRun]) -> Vec<(String, String)> {
    runs.iter()
        .map(|r| {
            let v = match (&r.summary, r.result.status) {
                (Some(s), _) => format!("{}/{}/{}", s.dim, s.m.map_or("-".into(), |m| m.to_string()), s.form_label()),
                (None, axial::engine::Status::Collapsed) => "0".into(),
                (None, _) => "?".into(),
            };
            (r.label.clone(), v)
        })
        .collect()
}

/// A job on the polygon axes of a catalog algebra, acted on by their
/// Miyamoto involutions, over all shapes. The catalog algebra's own shape is
/// the one whose label starts with its name.
pub fn dihedral_job(d: &DihedralAlgebra) -> JobConfig {
    let n = d.n;
    let restrict = |x: usize| -> String {
        let p = d.miyamoto_perm(x);
        let img: Vec<String> = (0..n).map(|i| p.apply(i).to_string()).collect();
        format!("[{}]", img.join(","))
    };
    let taus: Vec<String> = (0..n).map(restrict).collect();
    let gens = axial::permgroup::GroupAction::new(n, taus.iter().map(|t| t.parse().unwrap()).collect()).unwrap();
    let orbits: Vec<String> = gens.orbits().iter().map(|o| o.len().to_string()).collect();
    let mut text = format!("name D{}\naxes {}\nlaw monster\n", 2 * n, orbits.join("+"));
    for t in &taus {
        text.push_str(&format!("gen {t}\n"));
    }
    text.push_str("tau\n");
    for t in &taus {
        text.push_str(&format!("{t}\n"));
    }
    text.push_str("end\nshape enumerate\n");
    JobConfig::parse(&text).unwrap()
}

/// An algebra on the closure basis of the given axes.
pub fn canonical_on(alg: &Algebra, axes: &[SVec]) -> canonical::Canonical<Rat> {
    let n = alg.dim();
    let mut mu = vec![Vec::new(); n * (n + 1) / 2];
    for j in 0..n {
        for i in 0..=j {
            mu[tri(i, j)] = alg.basis_product(i, j).clone();
        }
    }
    canonical::canonicalize(n, &mu, axes).expect("axes generate")
}

/// The catalog algebra on the closure basis of its polygon axes.
pub fn catalog_canonical(d: &DihedralAlgebra) -> canonical::Canonical<Rat> {
    canonical_on(&d.algebra, &d.algebra.axes()[..d.n])
}

/// Least `k` with `A_k = A`, where `A_1` is the span of the axes and
/// `A_k = A_{k-1} + sum_{i+j=k} A_i A_j`, from full bases of every level.
pub fn brute_m_closure(alg: &Algebra) -> Option<usize> {
    let n = alg.dim();
    if n == 0 {
        return Some(0);
    }
    let mut levels: Vec<Subspace> = vec![Subspace::span_sparse(n, alg.axes())];
    loop {
        let k = levels.len() + 1;
        let mut next = levels[k - 2].clone();
        for i in 1..k {
            let j = k - i;
            if i > j {
                break;
            }
            for x in levels[i - 1].basis() {
                for y in levels[j - 1].basis() {
                    next.insert(&alg.mul(&x, &y));
                }
            }
        }
        if next.dim() == levels[k - 2].dim() {
            return (next.dim() == n).then_some(k - 1);
        }
        levels.push(next);
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    if rng.gen_bool(0.4) {
        return Rat::zero();
    }
    Rat::new(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

fn random_vectors(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<Vec<Rat>> {
    // Some vectors are combinations of earlier ones so that spaces overlap.
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for _ in 0..k {
        if out.len() >= 2 && rng.gen_bool(0.3) {
            let (a, b) = (rng.gen_range(0..out.len()), rng.gen_range(0..out.len()));
            let (c, d) = (random_rat(rng), random_rat(rng));
            out.push((0..n).map(|i| &(&c * &out[a][i]) + &(&d * &out[b][i])).collect());
        } else {
            out.push((0..n).map(|_| random_rat(rng)).collect());
        }
    }
    out
}

/// Vectors `y` with `x . y = 0` for every `x` in the span of `vs`.
fn annihilator(n: usize, vs: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if vs.is_empty() {
        return (0..n).map(|i| sparse::to_dense(&sparse::unit(i), n)).collect();
    }
    Mat::from_rows(vs.to_vec()).kernel()
}

fn rank(n: usize, vs: &[Vec<Rat>]) -> usize {
    if vs.is_empty() {
        0
    } else {
        Mat::from_rows(vs.iter().map(|v| v[..n].to_vec()).collect()).rank()
    }
}

/// Characteristic polynomial by Faddeev-LeVerrier, coefficients from the
/// leading one down.
fn char_poly(a: &Mat) -> Vec<Rat> {
    let n = a.nrows();
    let mut coeffs = vec![Rat::one()];
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &coeffs[k - 1];
        }
        m = next;
        let am = a.mul(&m);
        let tr = (0..n).fold(Rat::zero(), |s, i| &s + &am[(i, i)]);
        coeffs.push(-&(&tr / &Rat::from_int(k as i64)));
    }
    coeffs
}

fn sign_changes(c: &[Rat]) -> usize {
    let signs: Vec<i32> = c.iter().map(Rat::signum).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Signature from the characteristic polynomial: all roots are real, so
/// Descartes' rule counts positive and negative roots exactly.
fn signature_oracle(g: &Mat) -> (usize, usize, usize) {
    let c = char_poly(g);
    let n = g.nrows();
    let zero = c.iter().rev().take_while(|x| x.is_zero()).count();
    let neg: Vec<Rat> = c.iter().enumerate().map(|(i, x)| if (n - i) % 2 == 1 { -x } else { x.clone() }).collect();
    (sign_changes(&c), zero, sign_changes(&neg))
}

/// Runs `count` random checks of the subspace and form routines against
/// independent computations, four kinds in turn. Returns the first mismatch.
pub fn linalg_oracle_checks(count: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for check in 0..count {
        let n = rng.gen_range(1..=9);
        match check % 4 {
            0 => {
                let (ka, kb) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
                let (a, b) = (random_vectors(&mut rng, n, ka), random_vectors(&mut rng, n, kb));
                let (s, t) = (Subspace::span_dense(n, &a), Subspace::span_dense(n, &b));
                let (sum, meet) = (s.sum(&t), s.intersect(&t));
                if sum.dim() + meet.dim() != s.dim() + t.dim() {
                    return Err(format!("check {check}: dim(S+T) + dim(S^T) = {} + {} but dim S + dim T = {} + {}", sum.dim(), meet.dim(), s.dim(), t.dim()));
                }
                let ab: Vec<Vec<Rat>> = a.iter().chain(&b).cloned().collect();
                if sum.dim() != rank(n, &ab) || s.dim() != rank(n, &a) {
                    return Err(format!("check {check}: span dimension differs from matrix rank"));
                }
            }
            1 => {
                let (ka, kb) = (rng.gen_range(0..=n), rng.gen_range(0..=n));
                let (a, b) = (random_vectors(&mut rng, n, ka), random_vectors(&mut rng, n, kb));
                let (s, t) = (Subspace::span_dense(n, &a), Subspace::span_dense(n, &b));
                let meet = s.intersect(&t);
                // The joint kernel of both annihilators is the intersection.
                let mut ann = annihilator(n, &a);
                ann.extend(annihilator(n, &b));
                let joint: Vec<Vec<Rat>> = if ann.is_empty() {
                    (0..n).map(|i| sparse::to_dense(&sparse::unit(i), n)).collect()
                } else {
                    Mat::from_rows(ann).kernel()
                };
                let oracle = Subspace::span_dense(n, &joint);
                if oracle != meet {
                    return Err(format!("check {check}: intersection has dimension {}, joint kernel {}", meet.dim(), oracle.dim()));
                }
            }
            2 => {
                let k = rng.gen_range(0..=n);
                let a = random_vectors(&mut rng, n, k);
                let r = Subspace::span_dense(n, &a);
                let q = Quotient::new(r.clone());
                let m = q.matrix();
                // The projection acts on columns; its kernel must be exactly r.
                let kernel = if m.nrows() == 0 {
                    (0..n).map(|i| sparse::to_dense(&sparse::unit(i), n)).collect()
                } else {
                    m.kernel()
                };
                if Subspace::span_dense(n, &kernel) != r || q.new_dim() != n - r.dim() {
                    return Err(format!("check {check}: quotient kernel differs from the relations"));
                }
            }
            _ => {
                let k = rng.gen_range(0..=n);
                let b = random_vectors(&mut rng, n, k);
                let mut g = Mat::zeros(n, n);
                for (idx, v) in b.iter().enumerate() {
                    let sign = if idx % 3 == 2 { -Rat::one() } else { Rat::one() };
                    for i in 0..n {
                        for j in 0..n {
                            let t = &(&sign * &v[i]) * &v[j];
                            g[(i, j)] += &t;
                        }
                    }
                }
                let sig = symmetric_signature(&g);
                if sig != signature_oracle(&g) {
                    return Err(format!("check {check}: signature {sig:?}, characteristic polynomial gives {:?}", signature_oracle(&g)));
                }
                // Congruence by a random unipotent matrix keeps the signature.
                let mut p = Mat::identity(n);
                for i in 0..n {
                    for j in i + 1..n {
                        p[(i, j)] = random_rat(&mut rng);
                    }
                }
                let h = p.mul(&g).mul(&p.transpose());
                if symmetric_signature(&h) != sig {
                    return Err(format!("check {check}: signature changed under congruence"));
                }
            }
        }
    }
    Ok(())
}
