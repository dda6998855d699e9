//! Exact elimination.
//!
//! Two engines share one output contract (the unique reduced row echelon
//! form over Q):
//!
//! * [`rref`] runs Bareiss-style Gauss-Jordan on a dense integer copy of the
//!   matrix. Every intermediate entry is a minor of the input, so each
//!   division by the previous pivot is exact.
//! * [`RowReducer`] accepts rows one at a time, keeps them as monic sparse
//!   rational vectors in echelon form and back-substitutes at the end. It is
//!   used for the large, very sparse constraint systems (derivations,
//!   centroids, cocycles) where most assembled rows are zero or redundant.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::{Matrix, Rational};

/// Scales a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
    row.iter()
        .map(|x| {
            if x.is_zero() {
                BigInt::zero()
            } else {
                x.numer() * (&lcm / x.denom())
            }
        })
        .collect()
}

/// Reduced row echelon form and rank, computed by fraction-free
/// Gauss-Jordan elimination followed by pivot normalization.
///
/// The returned matrix has the same shape as `m`; rows past `rank` are zero.
pub fn rref(m: &Matrix) -> (Matrix, usize) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|r| integer_row(m.row(r))).collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            // Rows with a zero in the pivot column are still rescaled so that
            // every row stays at the same determinant level.
            let factor = row[c].clone();
            for (j, x) in row.iter_mut().enumerate() {
                let t = if factor.is_zero() || pivot_row[j].is_zero() {
                    if x.is_zero() {
                        continue;
                    }
                    &piv * &*x
                } else {
                    &piv * &*x - &factor * &pivot_row[j]
                };
                debug_assert!((&t % &prev).is_zero(), "inexact Bareiss division");
                *x = t / &prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let mut out = Matrix::zeros(rows, cols);
    for (i, &c) in pivots.iter().enumerate() {
        let piv = &a[i][c];
        for j in c..cols {
            if !a[i][j].is_zero() {
                out[(i, j)] = Rational::new(a[i][j].clone(), piv.clone());
            }
        }
    }
    (out, pivots.len())
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1
}

/// Pivot columns of a matrix already in reduced row echelon form.
pub fn pivot_columns(rref: &Matrix) -> Vec<usize> {
    (0..rref.rows())
        .filter_map(|r| rref.row(r).iter().position(|x| !x.is_zero()))
        .collect()
}

/// Kernel vectors read off a reduced row echelon form: one per free column,
/// with a one in that column.
pub(crate) fn kernel_from_rref(rows: &[Vec<Rational>], pivots: &[usize], cols: usize) -> Vec<Vec<Rational>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(pivots) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            v
        })
        .collect()
}

/// Sorted `(column, value)` pairs with no zero values.
pub type SparseRow = Vec<(usize, Rational)>;

/// Scales a nonempty row so that its leading entry is one.
fn make_monic(row: &mut SparseRow) {
    let Some(first) = row.first() else { return };
    if first.1.is_one() {
        return;
    }
    let inv = first.1.recip();
    for (_, x) in row.iter_mut() {
        *x = &*x * &inv;
    }
}

/// `x − k·y` on sorted sparse rows, dropping zeros.
fn sub_scaled(x: &SparseRow, k: &Rational, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ci = x.get(i).map_or(usize::MAX, |e| e.0);
        let cj = y.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, x[i - 1].1.clone())
        } else if cj < ci {
            j += 1;
            (cj, -(k * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &x[i - 1].1 - &(k * &y[j - 1].1))
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Incremental row reduction over sparse rational rows.
///
/// Rows are kept monic in echelon form keyed by leading column. Inserting a
/// row that is already in the span is a no-op; exact repeats (up to scaling)
/// are recognized without any elimination.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    rows: BTreeMap<usize, SparseRow>,
    seen: HashSet<SparseRow>,
}

/// A reduced row echelon basis of a row space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub cols: usize,
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis of `{v : row · v = 0 for every row}`.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        kernel_from_rref(&self.rows, &self.pivots, self.cols)
    }

    /// [`kernel`](Self::kernel) as sparse rows.
    pub fn kernel_sparse(&self) -> Vec<SparseRow> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v: SparseRow = self
                    .rows
                    .iter()
                    .zip(&self.pivots)
                    .filter(|(row, _)| !row[f].is_zero())
                    .map(|(row, &p)| (p, -&row[f]))
                    .collect();
                v.push((f, Rational::one()));
                v.sort_by_key(|e| e.0);
                v
            })
            .collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.cols, self.rows.clone()).expect("rows have width cols")
    }
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            rows: BTreeMap::new(),
            seen: HashSet::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a sparse rational row given as `(column, value)` pairs in any
    /// order (duplicates are summed). Returns whether the rank grew.
    pub fn insert_sparse(&mut self, entries: &[(usize, Rational)]) -> bool {
        let mut sorted: Vec<&(usize, Rational)> = entries.iter().filter(|(_, v)| !v.is_zero()).collect();
        sorted.sort_by_key(|e| e.0);
        let mut row: SparseRow = Vec::with_capacity(sorted.len());
        for (c, v) in sorted {
            assert!(*c < self.cols, "column {c} out of range {}", self.cols);
            match row.last_mut() {
                Some((last, x)) if last == c => *x += v,
                _ => row.push((*c, v.clone())),
            }
        }
        row.retain(|(_, v)| !v.is_zero());
        self.insert_row(row)
    }

    pub fn insert_dense(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.cols, "row width mismatch");
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(c, x)| (c, x.clone()))
            .collect();
        self.insert_row(sparse)
    }

    fn insert_row(&mut self, mut row: SparseRow) -> bool {
        make_monic(&mut row);
        if row.is_empty() || !self.seen.insert(row.clone()) {
            return false;
        }
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(piv) => {
                    row = sub_scaled(&row, &coeff, piv);
                }
                None => {
                    make_monic(&mut row);
                    self.rows.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes into the unique reduced echelon form, as sparse rows
    /// in pivot order.
    pub fn into_sparse_rref(self) -> Vec<SparseRow> {
        let mut rows: Vec<SparseRow> = self.rows.into_values().collect();
        for j in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(j);
            let piv = &tail[0];
            let pc = piv[0].0;
            for row in head.iter_mut() {
                if let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) {
                    let coeff = row[pos].1.clone();
                    *row = sub_scaled(row, &coeff, piv);
                }
            }
        }
        rows
    }

    /// Back-substitutes into the unique reduced echelon form.
    pub fn into_rref(self) -> Rref {
        let cols = self.cols;
        let rows = self.into_sparse_rref();
        let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
        let rows = rows
            .into_iter()
            .map(|r| {
                let mut dense = vec![Rational::zero(); cols];
                for (c, x) in r {
                    dense[c] = x;
                }
                dense
            })
            .collect();
        Rref { cols, rows, pivots }
    }
}
