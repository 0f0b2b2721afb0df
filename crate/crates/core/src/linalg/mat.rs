use std::fmt;
use std::ops::{Index, IndexMut};

use super::rat::Rat;

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_int(x)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Rat] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut out = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![Rat::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] += &(c * a);
                }
            }
        }
        out
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Reduced row echelon form with leading pivots, and the pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            let pivot_row: Vec<Rat> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !pivot_row[j].is_zero() {
                            let t = &f * &pivot_row[j];
                            m[(i, j)] -= &t;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` as vectors.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let (r, piv) = self.rref();
        let mut is_piv = vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut x = vec![Rat::zero(); self.cols];
            x[f] = Rat::one();
            for (k, &p) in piv.iter().enumerate() {
                x[p] = -&r[(k, f)];
            }
            out.push(x);
        }
        out
    }

    /// Some solution of `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (k, &p) in piv.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rat::one();
        }
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Rat;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Inertia `(positive, zero, negative)` of a symmetric matrix.
///
/// Symmetric Gaussian elimination. A zero diagonal pivot with a nonzero row
/// is handled by eliminating a 2x2 block `[[0, b], [b, d]]` at once, which
/// always contributes one positive and one negative direction.
pub fn symmetric_signature(g: &Mat) -> (usize, usize, usize) {
    assert!(g.is_symmetric(), "signature of a non-symmetric matrix");
    let mut m = g.clone();
    let mut alive: Vec<usize> = (0..g.nrows()).collect();
    let (mut pos, mut zero, mut neg) = (0, 0, 0);
    while let Some(&k) = alive.first() {
        if !m[(k, k)].is_zero() {
            let d = m[(k, k)].clone();
            if d.signum() > 0 {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.remove(0);
            let inv = d.recip();
            for &i in &alive {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] * &inv;
                for &j in &alive {
                    if !m[(k, j)].is_zero() {
                        let t = &f * &m[(k, j)];
                        m[(i, j)] -= &t;
                    }
                }
            }
            continue;
        }
        let Some(pos_j) = alive.iter().position(|&j| j != k && !m[(k, j)].is_zero()) else {
            zero += 1;
            alive.remove(0);
            continue;
        };
        let j = alive[pos_j];
        pos += 1;
        neg += 1;
        alive.retain(|&x| x != k && x != j);
        // Block B = [[0, b], [b, d]], B^{-1} = (1 / -b^2) [[d, -b], [-b, 0]].
        let b = m[(k, j)].clone();
        let d = m[(j, j)].clone();
        let s = (&b * &b).recip();
        let binv = [[-&(&d * &s), &b * &s], [&b * &s, Rat::zero()]];
        let cols = [k, j];
        for &x in &alive {
            let ux = [m[(x, k)].clone(), m[(x, j)].clone()];
            if ux[0].is_zero() && ux[1].is_zero() {
                continue;
            }
            // coeffs = u_x^T B^{-1}
            let cx = [
                &(&ux[0] * &binv[0][0]) + &(&ux[1] * &binv[1][0]),
                &(&ux[0] * &binv[0][1]) + &(&ux[1] * &binv[1][1]),
            ];
            for &y in &alive {
                let mut t = Rat::zero();
                for (a, &c) in cols.iter().enumerate() {
                    if !m[(c, y)].is_zero() {
                        t += &(&cx[a] * &m[(c, y)]);
                    }
                }
                if !t.is_zero() {
                    m[(x, y)] -= &t;
                }
            }
        }
    }
    (pos, zero, neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        let m = Mat::from_ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (_, p) = m.rref();
        assert_eq!(p, vec![0, 1]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn signature_hyperbolic() {
        let h = Mat::from_ints(&[&[0, 1], &[1, 0]]);
        assert_eq!(symmetric_signature(&h), (1, 0, 1));
        let z = Mat::from_ints(&[&[0, 0, 0], &[0, 0, 2], &[0, 2, 5]]);
        assert_eq!(symmetric_signature(&z), (1, 1, 1));
        let p = Mat::from_ints(&[&[2, 1], &[1, 2]]);
        assert_eq!(symmetric_signature(&p), (2, 0, 0));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_ints(&[&[2, 1], &[7, 4]]);
        let i = m.inverse().unwrap();
        assert_eq!(m.mul(&i), Mat::identity(2));
        assert!(Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
