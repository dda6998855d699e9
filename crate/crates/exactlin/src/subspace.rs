use serde::{Deserialize, Serialize};

use crate::elim::{kernel_from_rref, pivot_columns, rref, RowReducer};
use crate::error::ShapeError;
use crate::{Matrix, Rational};

/// A subspace of Qⁿ held by its reduced row echelon basis.
///
/// The basis is canonical: two subspaces of the same ambient space are equal
/// as sets exactly when their bases are identical, so `==` is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

/// Wire form: `{"ambient_dim": n, "basis": [["1","0",...], ...]}`.
#[derive(Serialize, Deserialize)]
struct SubspaceWire {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceWire {
            ambient_dim: self.ambient_dim,
            basis: self.basis.row_vecs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    /// Any generating set is accepted; the result is canonicalized.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = SubspaceWire::deserialize(d)?;
        Subspace::span(w.ambient_dim, &w.basis).map_err(serde::de::Error::custom)
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary generators.
    pub fn span(ambient_dim: usize, generators: &[Vec<Rational>]) -> Result<Self, ShapeError> {
        let mut red = RowReducer::new(ambient_dim);
        for g in generators {
            if g.len() != ambient_dim {
                return Err(ShapeError::Length {
                    found: g.len(),
                    expected: ambient_dim,
                });
            }
            red.insert_dense(g);
        }
        Ok(Subspace::from_reducer(red))
    }

    pub(crate) fn from_reducer(red: RowReducer) -> Self {
        let r = red.into_rref();
        let basis = r.to_matrix();
        Subspace {
            ambient_dim: r.cols,
            basis,
            pivots: r.pivots,
        }
    }

    /// Span of the standard basis vectors with the given (0-based) indices.
    pub fn coordinate(ambient_dim: usize, indices: &[usize]) -> Self {
        let gens: Vec<Vec<Rational>> = indices
            .iter()
            .map(|&i| unit(ambient_dim, i))
            .collect();
        Subspace::span(ambient_dim, &gens).expect("unit vectors have ambient length")
    }

    /// Row space of a matrix.
    pub fn row_space(m: &Matrix) -> Self {
        let (r, k) = rref(m);
        let rows: Vec<Vec<Rational>> = (0..k).map(|i| r.row(i).to_vec()).collect();
        let basis = Matrix::from_rows(m.cols(), rows).expect("rref rows have width cols");
        let pivots = pivot_columns(&basis);
        Subspace {
            ambient_dim: m.cols(),
            basis,
            pivots,
        }
    }

    /// Column space of a matrix.
    pub fn column_space(m: &Matrix) -> Self {
        Subspace::row_space(&m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// The canonical (RREF) basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.row_vecs()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, other: &Subspace) -> Result<(), ShapeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(ShapeError::Ambient {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Remainder of `v` after eliminating the pivot coordinates; zero iff
    /// `v` lies in the subspace.
    pub fn residual(&self, v: &[Rational]) -> Result<Vec<Rational>, ShapeError> {
        if v.len() != self.ambient_dim {
            return Err(ShapeError::Length {
                found: v.len(),
                expected: self.ambient_dim,
            });
        }
        let mut r = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if r[p].is_zero() {
                continue;
            }
            let k = r[p].clone();
            for (x, b) in r.iter_mut().zip(self.basis.row(i)) {
                if !b.is_zero() {
                    *x -= &k * b;
                }
            }
        }
        Ok(r)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, ShapeError> {
        Ok(self.residual(v)?.iter().all(Rational::is_zero))
    }

    /// `self ⊆ other`
    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, ShapeError> {
        self.check(other)?;
        for r in 0..self.dim() {
            if !other.contains(self.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, ShapeError> {
        self.check(other)?;
        let mut red = RowReducer::new(self.ambient_dim);
        for m in [&self.basis, &other.basis] {
            for r in 0..m.rows() {
                red.insert_dense(m.row(r));
            }
        }
        Ok(Subspace::from_reducer(red))
    }

    /// Intersection from the kernel of the stacked system `[A; −B]ᵀ`: a
    /// kernel vector `(λ, μ)` gives the common element `λ·A = μ·B`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, ShapeError> {
        self.check(other)?;
        let (da, db) = (self.dim(), other.dim());
        if da == 0 || db == 0 {
            return Ok(Subspace::zero(self.ambient_dim));
        }
        let mut stacked = Matrix::zeros(self.ambient_dim, da + db);
        for i in 0..da {
            for (c, x) in self.basis.row(i).iter().enumerate() {
                stacked[(c, i)] = x.clone();
            }
        }
        for j in 0..db {
            for (c, x) in other.basis.row(j).iter().enumerate() {
                stacked[(c, da + j)] = -x;
            }
        }
        let kernel = nullspace(&stacked);
        let gens: Vec<Vec<Rational>> = kernel
            .basis_vectors()
            .iter()
            .map(|coeffs| {
                let mut v = vec![Rational::zero(); self.ambient_dim];
                for (i, l) in coeffs[..da].iter().enumerate() {
                    if l.is_zero() {
                        continue;
                    }
                    for (x, b) in v.iter_mut().zip(self.basis.row(i)) {
                        *x += l * b;
                    }
                }
                v
            })
            .collect();
        Subspace::span(self.ambient_dim, &gens)
    }

    /// `{w : ⟨w, v⟩ = 0 for all v in self}` under the standard pairing.
    pub fn annihilator(&self) -> Subspace {
        nullspace(&self.basis)
    }
}

/// Standard basis vector.
pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// `{v ∈ Q^cols : m·v = 0}`, of dimension `cols − rank(m)`.
pub fn nullspace(m: &Matrix) -> Subspace {
    let (r, k) = rref(m);
    let rows: Vec<Vec<Rational>> = (0..k).map(|i| r.row(i).to_vec()).collect();
    let pivots: Vec<usize> = rows
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero rref row"))
        .collect();
    let kernel = kernel_from_rref(&rows, &pivots, m.cols());
    Subspace::span(m.cols(), &kernel).expect("kernel vectors have width cols")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn nullspace_trivial_cases() {
        assert!(nullspace(&Matrix::zeros(3, 3)).is_full());
        assert!(nullspace(&Matrix::identity(3)).is_zero());
    }

    #[test]
    fn nullspace_single_equation() {
        let ns = nullspace(&Matrix::from_i64(&[&[1, 1, 0]]));
        assert_eq!(ns.dim(), 2);
        for b in ns.basis_vectors() {
            assert!((&b[0] + &b[1]).is_zero());
        }
    }

    #[test]
    fn lattice_basics() {
        let a = Subspace::span(3, &[v(&[1, 0, 0])]).unwrap();
        let b = Subspace::span(3, &[v(&[0, 1, 0])]).unwrap();
        assert_eq!(a.sum(&Subspace::zero(3)).unwrap(), a);
        assert_eq!(a.intersect(&Subspace::full(3)).unwrap(), a);
        assert_eq!(a.sum(&b).unwrap().dim(), 2);
        assert!(a.intersect(&b).unwrap().is_zero());
        assert!(a.is_subspace_of(&a.sum(&b).unwrap()).unwrap());
        assert!(!a.is_subspace_of(&b).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_error() {
        let a = Subspace::zero(2);
        let b = Subspace::zero(3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
        assert!(a.is_subspace_of(&b).is_err());
        assert!(a.contains(&v(&[1, 2, 3])).is_err());
    }

    #[test]
    fn annihilator_of_line() {
        let a = Subspace::span(3, &[vec![q(1, 2), q(1, 1), q(0, 1)]]).unwrap();
        let ann = a.annihilator();
        assert_eq!(ann.dim(), 2);
        assert_eq!(ann.annihilator(), a);
    }

    #[test]
    fn serde_canonicalizes() {
        let s: Subspace =
            serde_json::from_str(r#"{"ambient_dim":2,"basis":[["2","4"],["1","2"]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"ambient_dim":2,"basis":[["1","2"]]}"#);
    }
}
