//! Sparse coordinate vectors: `(index, value)` pairs sorted by index with no
//! zero values.

use exactlin::Rational;

pub type SparseVec = Vec<(usize, Rational)>;

pub fn from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `acc += k · v`
pub fn axpy(acc: &mut [Rational], k: &Rational, v: &SparseVec) {
    if k.is_zero() {
        return;
    }
    for (i, x) in v {
        acc[*i] += k * x;
    }
}

pub fn scale(v: &SparseVec, k: &Rational) -> SparseVec {
    if k.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * k)).collect()
}

pub fn neg(v: &SparseVec) -> SparseVec {
    v.iter().map(|(i, x)| (*i, -x)).collect()
}

/// `x + k·y` by merging the sorted supports.
pub fn add_scaled(x: &SparseVec, k: &Rational, y: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut a, mut b) = (x.iter().peekable(), y.iter().peekable());
    loop {
        match (a.peek(), b.peek()) {
            (Some((i, u)), Some((j, v))) if i == j => {
                let s = u + &(k * v);
                if !s.is_zero() {
                    out.push((*i, s));
                }
                a.next();
                b.next();
            }
            (Some((i, u)), Some((j, _))) if i < j => {
                out.push((*i, u.clone()));
                a.next();
            }
            (_, Some((j, v))) => {
                let s = k * v;
                if !s.is_zero() {
                    out.push((*j, s));
                }
                b.next();
            }
            (Some((i, u)), None) => {
                out.push((*i, u.clone()));
                a.next();
            }
            (None, None) => return out,
        }
    }
}

/// A linear operator stored as sparse columns; column `c` is the image of
/// `e_c`. Equality is structural because every column is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SparseOp {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseOp {
    pub(crate) fn zero(rows: usize, cols: usize) -> Self {
        SparseOp {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub(crate) fn from_matrix(m: &exactlin::Matrix) -> Self {
        SparseOp {
            rows: m.rows(),
            cols: (0..m.cols()).map(|c| from_dense(&m.column(c))).collect(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self += k · other`
    pub(crate) fn add_scaled(&mut self, k: &Rational, other: &SparseOp) {
        if k.is_zero() {
            return;
        }
        for (a, b) in self.cols.iter_mut().zip(&other.cols) {
            if !b.is_empty() {
                *a = add_scaled(a, k, b);
            }
        }
    }

    pub(crate) fn add(&self, other: &SparseOp) -> SparseOp {
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        out
    }

    pub(crate) fn sub(&self, other: &SparseOp) -> SparseOp {
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        out
    }

    pub(crate) fn neg(&self) -> SparseOp {
        SparseOp {
            rows: self.rows,
            cols: self.cols.iter().map(neg).collect(),
        }
    }

    /// `self · other`
    pub(crate) fn mul(&self, other: &SparseOp) -> SparseOp {
        if self.is_zero() || other.is_zero() {
            return SparseOp::zero(self.rows, other.cols.len());
        }
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc = crate::algebra::Accum::new(self.rows);
                for (r, c) in col {
                    acc.add_scaled(c, &self.cols[*r]);
                }
                acc.finish()
            })
            .collect();
        SparseOp { rows: self.rows, cols }
    }

    /// Dense row-major entries.
    pub(crate) fn into_flat(self) -> Vec<Rational> {
        let n = self.cols.len();
        let mut out = vec![Rational::zero(); self.rows * n];
        for (c, col) in self.cols.into_iter().enumerate() {
            for (r, x) in col {
                out[r * n + c] = x;
            }
        }
        out
    }
}
