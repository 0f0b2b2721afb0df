//! Canonical form of a finished algebra: the closure basis grown from the
//! axes, so that the result does not depend on how it was computed.

use crate::analysis::{closure_basis_with, tri, Algebra};
use crate::fusion::FusionLaw;
use crate::linalg::field::{crt, rational_reconstruction};
use crate::linalg::sparse::{self, Accumulator, SVec};
use crate::linalg::{Field, Fp, Rat};

use super::partial::mul_in;

/// Structure constants on the closure basis. `origin[k]` says how basis
/// vector `k` arises: `Err(x)` is axis `x`, `Ok((i, j))` the product of basis
/// vectors `i` and `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical<F: Field> {
    pub origin: Vec<Result<(usize, usize), usize>>,
    pub mu: Vec<SVec<F>>,
    pub axes: Vec<SVec<F>>,
}

impl<F: Field> Canonical<F> {
    pub fn dim(&self) -> usize {
        self.origin.len()
    }
}

/// Rewrites an algebra given by `mu` (indexed by `tri`) and its axes in the
/// closure basis. `None` if the axes do not generate.
pub fn canonicalize<F: Field>(dim: usize, mu: &[SVec<F>], axes: &[SVec<F>]) -> Option<Canonical<F>> {
    let mut acc = Accumulator::new(dim);
    let cb = closure_basis_with(dim, axes, |x, y| mul_in(mu, x, y, &mut acc));
    if dim > 0 && cb.m.is_none() {
        return None;
    }
    let inv = invert(&cb.vectors, dim).expect("closure basis is a basis");
    let coords = |x: &SVec<F>, acc: &mut Accumulator<F>| -> SVec<F> {
        for (i, c) in x {
            acc.add_scaled(c, &inv[*i]);
        }
        acc.drain()
    };
    let mut new_mu = Vec::with_capacity(dim * (dim + 1) / 2);
    for j in 0..dim {
        for i in 0..=j {
            let p = mul_in(mu, &cb.vectors[i], &cb.vectors[j], &mut acc);
            new_mu.push(coords(&p, &mut acc));
        }
    }
    let new_axes = axes.iter().map(|a| coords(a, &mut acc)).collect();
    Some(Canonical { origin: cb.origin, mu: new_mu, axes: new_axes })
}

/// Inverse of the matrix with the given rows, as sparse rows: row `i` of the
/// result gives the coordinates of `e_i`.
fn invert<F: Field>(rows: &[SVec<F>], n: usize) -> Option<Vec<SVec<F>>> {
    if rows.len() != n {
        return None;
    }
    let mut a: Vec<Vec<F>> = rows.iter().map(|r| sparse::to_dense(r, n)).collect();
    let mut b: Vec<Vec<F>> = (0..n).map(|i| sparse::to_dense(&sparse::unit(i), n)).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let inv = a[col][col].finv();
        for x in a[col].iter_mut().chain(b[col].iter_mut()) {
            *x = x.fmul(&inv);
        }
        let (pa, pb) = (a[col].clone(), b[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let c = a[r][col].fneg();
            for k in 0..n {
                if !pa[k].is_zero() {
                    a[r][k] = a[r][k].fadd(&c.fmul(&pa[k]));
                }
                if !pb[k].is_zero() {
                    b[r][k] = b[r][k].fadd(&c.fmul(&pb[k]));
                }
            }
        }
    }
    // Row operations took A to I, so they took I to A^{-1}.
    Some(b.iter().map(|r| sparse::from_dense(r)).collect())
}

impl Canonical<Rat> {
    pub fn to_algebra(&self, law: &FusionLaw) -> Algebra {
        Algebra::new(self.dim(), self.mu.clone(), self.axes.clone(), law.clone())
    }
}

/// Residues of a canonical algebra modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residues {
    pub prime: u64,
    pub origin: Vec<Result<(usize, usize), usize>>,
    pub mu: Vec<Vec<(usize, u64)>>,
    pub axes: Vec<Vec<(usize, u64)>>,
}

impl<const P: u64> Canonical<Fp<P>> {
    pub fn residues(&self) -> Residues {
        let conv = |x: &SVec<Fp<P>>| x.iter().map(|(i, c)| (*i, c.value())).collect();
        Residues { prime: P, origin: self.origin.clone(), mu: self.mu.iter().map(conv).collect(), axes: self.axes.iter().map(conv).collect() }
    }
}

/// Lifts residues modulo several primes (with the same closure basis) to
/// rationals. `None` if some coefficient does not reconstruct yet.
pub fn reconstruct(parts: &[Residues]) -> Option<Canonical<Rat>> {
    let first = parts.first()?;
    if parts.iter().any(|p| p.origin != first.origin) {
        return None;
    }
    let primes: Vec<u64> = parts.iter().map(|p| p.prime).collect();
    let lift = |get: &dyn Fn(&Residues) -> &Vec<(usize, u64)>| -> Option<SVec> {
        let mut idx: Vec<usize> = parts.iter().flat_map(|p| get(p).iter().map(|e| e.0)).collect();
        idx.sort_unstable();
        idx.dedup();
        let mut out = Vec::with_capacity(idx.len());
        for i in idx {
            let res: Vec<u64> = parts.iter().map(|p| sparse::get(get(p), i).copied().unwrap_or(0)).collect();
            let (x, m) = crt(&res, &primes);
            let r = rational_reconstruction(&x, &m)?;
            if !r.is_zero() {
                out.push((i, r));
            }
        }
        Some(out)
    };
    let mut mu = Vec::with_capacity(first.mu.len());
    for k in 0..first.mu.len() {
        mu.push(lift(&|p: &Residues| &p.mu[k])?);
    }
    let mut axes = Vec::with_capacity(first.axes.len());
    for k in 0..first.axes.len() {
        axes.push(lift(&|p: &Residues| &p.axes[k])?);
    }
    Some(Canonical { origin: first.origin.clone(), mu, axes })
}

/// The defining property of the closure basis: each basis vector is the
/// axis or product it came from.
pub fn origins_consistent(c: &Canonical<Rat>) -> bool {
    c.origin.iter().enumerate().all(|(k, o)| {
        let v = match o {
            Err(x) => &c.axes[*x],
            Ok((i, j)) => &c.mu[tri(*i, *j)],
        };
        *v == sparse::unit::<Rat>(k)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::PRIMES;
    use crate::linalg::q;

    type F = Fp<{ PRIMES[0] }>;

    #[test]
    fn inverse_of_small_matrix() {
        let rows: Vec<SVec<F>> = vec![vec![(0, F::new(2)), (1, F::new(1))], vec![(1, F::new(3))]];
        let inv = invert(&rows, 2).unwrap();
        // e_0 = 1/2 r_0 - 1/6 r_1
        let half = F::from_rat(&q(1, 2)).unwrap();
        let sixth = F::from_rat(&q(-1, 6)).unwrap();
        assert_eq!(inv[0], vec![(0, half), (1, sixth)]);
    }
}
