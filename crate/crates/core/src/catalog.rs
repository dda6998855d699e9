//! Small named algebras used in examples, tests and the CLI.

use exactlin::Rational;

use crate::algebra::ThreeAlgebra;
use crate::lie::ThreeLieAlgebra;

type Entry<'a> = ((usize, usize, usize), &'a [(usize, i64)]);

fn dense(dim: usize, out: &[(usize, i64)]) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    for &(l, c) in out {
        v[l - 1] = Rational::from(c);
    }
    v
}

/// Builds an algebra from 1-based entries with integer coefficients.
pub fn algebra(dim: usize, entries: &[Entry<'_>]) -> ThreeAlgebra {
    ThreeAlgebra::from_products(
        dim,
        entries
            .iter()
            .map(|&((i, j, k), out)| ((i - 1, j - 1, k - 1), dense(dim, out))),
    )
    .expect("catalog entries are consistent")
}

/// Builds a 3-Lie algebra from 1-based entries with integer coefficients.
pub fn lie(dim: usize, entries: &[Entry<'_>]) -> ThreeLieAlgebra {
    ThreeLieAlgebra::from_brackets(
        dim,
        entries
            .iter()
            .map(|&((i, j, k), out)| ((i - 1, j - 1, k - 1), dense(dim, out))),
    )
    .expect("catalog entries are consistent")
}

/// Dimension 3, `{e1,e2,e2} = e3`, all other products zero.
pub fn a3() -> ThreeAlgebra {
    algebra(3, &[((1, 2, 2), &[(3, 1)])]).with_label("A3")
}

/// Dimension 4, `{e1,e2,e3} = e4`.
pub fn n4() -> ThreeAlgebra {
    algebra(4, &[((1, 2, 3), &[(4, 1)])]).with_label("N4")
}

/// Dimension 3, `{e1,e2,e3} = e1`: violates the first mixing identity.
pub fn bad_e123_e1() -> ThreeAlgebra {
    algebra(3, &[((1, 2, 3), &[(1, 1)])]).with_label("bad")
}

/// The nilpotent 3-Lie algebra `[e1,e2,e3] = e4`.
pub fn lie_n4() -> ThreeLieAlgebra {
    lie(4, &[((1, 2, 3), &[(4, 1)])])
}

/// `[e1,e2,e3] = e1` in dimension 4. Satisfies the Filippov identity.
pub fn lie_e123_e1() -> ThreeLieAlgebra {
    lie(4, &[((1, 2, 3), &[(1, 1)])])
}

/// `[e1,e2,e3] = e4`, `[e1,e2,e4] = e1`: violates the Filippov identity.
pub fn lie_not_filippov() -> ThreeLieAlgebra {
    lie(4, &[((1, 2, 3), &[(4, 1)]), ((1, 2, 4), &[(1, 1)])])
}
