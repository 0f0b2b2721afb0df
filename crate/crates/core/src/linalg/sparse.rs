use super::field::Field;
use super::rat::Rat;

/// Sparse vector: `(index, value)` pairs, indices strictly increasing, no zeros.
pub type SVec<F = Rat> = Vec<(usize, F)>;

pub fn unit<F: Field>(i: usize) -> SVec<F> {
    vec![(i, F::one())]
}

pub fn to_dense<F: Field>(x: &SVec<F>, len: usize) -> Vec<F> {
    let mut d = vec![F::zero(); len];
    for (i, v) in x {
        d[*i] = v.clone();
    }
    d
}

pub fn from_dense<F: Field>(x: &[F]) -> SVec<F> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Drains a dense accumulator into sparse form, leaving it zeroed.
pub fn drain_dense<F: Field>(x: &mut [F]) -> SVec<F> {
    let mut out = Vec::new();
    for (i, v) in x.iter_mut().enumerate() {
        if !v.is_zero() {
            out.push((i, std::mem::take(v)));
        }
    }
    out
}

pub fn get<F>(x: &SVec<F>, i: usize) -> Option<&F> {
    x.binary_search_by_key(&i, |e| e.0).ok().map(|k| &x[k].1)
}

/// `acc += c * x`, dense accumulator.
#[inline]
pub fn axpy_dense<F: Field>(acc: &mut [F], c: &F, x: &SVec<F>) {
    if c.is_zero() {
        return;
    }
    if c.is_one() {
        for (i, v) in x {
            acc[*i].fadd_assign(v);
        }
    } else {
        for (i, v) in x {
            acc[*i].fadd_assign(&c.fmul(v));
        }
    }
}

/// `x + c * y` by merging.
pub fn add_scaled<F: Field>(x: &SVec<F>, c: &F, y: &SVec<F>) -> SVec<F> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (0, 0);
    while a < x.len() || b < y.len() {
        let ia = x.get(a).map(|e| e.0).unwrap_or(usize::MAX);
        let ib = y.get(b).map(|e| e.0).unwrap_or(usize::MAX);
        if ia < ib {
            out.push(x[a].clone());
            a += 1;
        } else if ib < ia {
            let v = c.fmul(&y[b].1);
            if !v.is_zero() {
                out.push((ib, v));
            }
            b += 1;
        } else {
            let v = x[a].1.fadd(&c.fmul(&y[b].1));
            if !v.is_zero() {
                out.push((ia, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

pub fn scale<F: Field>(x: &SVec<F>, c: &F) -> SVec<F> {
    if c.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, c.fmul(v))).collect()
}

pub fn sub<F: Field>(x: &SVec<F>, y: &SVec<F>) -> SVec<F> {
    add_scaled(x, &F::one().fneg(), y)
}

pub fn dot<F: Field>(x: &SVec<F>, y: &SVec<F>) -> F {
    let (mut a, mut b) = (0, 0);
    let mut s = F::zero();
    while a < x.len() && b < y.len() {
        match x[a].0.cmp(&y[b].0) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                s.fadd_assign(&x[a].1.fmul(&y[b].1));
                a += 1;
                b += 1;
            }
        }
    }
    s
}

/// Linear combination `sum c_i x_i` from sparse terms.
pub fn combine<'a, F: Field>(len: usize, terms: impl IntoIterator<Item = (&'a F, &'a SVec<F>)>) -> SVec<F> {
    let mut acc = vec![F::zero(); len];
    for (c, x) in terms {
        axpy_dense(&mut acc, c, x);
    }
    drain_dense(&mut acc)
}

/// Image of a rational vector; `None` if a denominator is not invertible.
pub fn convert<F: Field>(x: &SVec<Rat>) -> Option<SVec<F>> {
    let mut out = Vec::with_capacity(x.len());
    for (i, v) in x {
        let c = F::from_rat(v)?;
        if !c.is_zero() {
            out.push((*i, c));
        }
    }
    Some(out)
}

/// Largest index present, i.e. the pivot under the trailing convention.
pub fn last_index<F>(x: &SVec<F>) -> Option<usize> {
    x.last().map(|e| e.0)
}

/// Dense scratch vector that remembers which entries it touched, so that
/// draining costs time proportional to the support rather than the length.
#[derive(Clone, Debug, Default)]
pub struct Accumulator<F = Rat> {
    vals: Vec<F>,
    mark: Vec<bool>,
    touched: Vec<usize>,
}

impl<F: Field> Accumulator<F> {
    pub fn new(len: usize) -> Self {
        Accumulator { vals: vec![F::zero(); len], mark: vec![false; len], touched: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// Grows (never shrinks) the length; must be empty.
    pub fn ensure_len(&mut self, len: usize) {
        debug_assert!(self.touched.is_empty());
        if self.vals.len() < len {
            self.vals.resize(len, F::zero());
            self.mark.resize(len, false);
        }
    }

    #[inline]
    pub fn add(&mut self, i: usize, c: &F) {
        if !self.mark[i] {
            self.mark[i] = true;
            self.touched.push(i);
        }
        self.vals[i].fadd_assign(c);
    }

    /// `self += c * x`.
    pub fn add_scaled(&mut self, c: &F, x: &SVec<F>) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (i, v) in x {
                self.add(*i, v);
            }
        } else {
            for (i, v) in x {
                self.add(*i, &c.fmul(v));
            }
        }
    }

    pub fn drain(&mut self) -> SVec<F> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            self.mark[i] = false;
            let v = std::mem::take(&mut self.vals[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
        }
        self.touched.clear();
        out
    }
}
