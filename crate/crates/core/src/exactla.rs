//! Exact symmetric Gaussian reduction `G = U^T D U` over `Q`.
//!
//! No pivoting is done: the factorization exists exactly when every leading
//! principal minor of `G` is nonzero, and then `d_i` is the ratio of the
//! `i`-th and `(i-1)`-th leading minors. A zero pivot is reported rather
//! than worked around.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    /// 1-based index of the vanishing pivot.
    #[error("pivot {0} is zero (leading principal minor {0} vanishes)")]
    ZeroPivot(usize),
}

/// A dense symmetric matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(LinalgError::NotSquare);
        }
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        for i in 0..dim {
            for j in (i + 1)..dim {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(LinalgError::NotSymmetric { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(SymMatrix { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Rational::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Rational::one();
        }
        SymMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.dim.max(1)).take(self.dim).map(<[_]>::to_vec).collect()
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_matrix(&self.rows()))
    }
}

/// `[[a, b], [c, d]]` with rationals in `p/q` form.
pub fn format_matrix(rows: &[Vec<Rational>]) -> String {
    let body: Vec<String> = rows
        .iter()
        .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", body.join(", "))
}

/// Factors of `G = U^T diag(d) U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlFactors {
    /// Unit upper triangular, row-major rows.
    u: Vec<Vec<Rational>>,
    d: Vec<Rational>,
}

impl LdlFactors {
    pub fn u(&self) -> &[Vec<Rational>] {
        &self.u
    }

    pub fn pivots(&self) -> &[Rational] {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    /// `U^T diag(d) U`, recomputed.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 0..=i.min(j) {
                    *entry += &self.u[k][i] * &self.d[k] * &self.u[k][j];
                }
            }
        }
        SymMatrix::from_rows(rows).expect("U^T D U is symmetric")
    }
}

pub fn ldl_decompose(g: &SymMatrix) -> Result<LdlFactors, LinalgError> {
    let n = g.dim();
    let mut u = vec![vec![Rational::zero(); n]; n];
    let mut d: Vec<Rational> = Vec::with_capacity(n);
    for j in 0..n {
        u[j][j] = Rational::one();
        let mut pivot = g.get(j, j).clone();
        for k in 0..j {
            pivot -= &u[k][j] * &u[k][j] * &d[k];
        }
        if pivot.is_zero() {
            return Err(LinalgError::ZeroPivot(j + 1));
        }
        for i in (j + 1)..n {
            let mut acc = g.get(j, i).clone();
            for k in 0..j {
                acc -= &u[k][j] * &u[k][i] * &d[k];
            }
            u[j][i] = acc / &pivot;
        }
        d.push(pivot);
    }
    Ok(LdlFactors { u, d })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    /// First pivot that is `<= 0`, 1-based, with its value.
    NotPositive { index: usize, pivot: Rational },
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Positivity::Positive)
    }
}

pub fn positivity_check(f: &LdlFactors) -> Positivity {
    match f.d.iter().position(|p| !p.is_positive()) {
        None => Positivity::Positive,
        Some(i) => Positivity::NotPositive { index: i + 1, pivot: f.d[i].clone() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, ratio};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn worked_example() {
        let g = mat(&[&[3, 0, 6], &[0, 6, -3], &[6, -3, 18]]);
        let f = ldl_decompose(&g).unwrap();
        assert_eq!(f.pivots(), &[rat(3), rat(6), ratio(9, 2)]);
        assert_eq!(
            f.u(),
            &[
                vec![rat(1), rat(0), rat(2)],
                vec![rat(0), rat(1), ratio(-1, 2)],
                vec![rat(0), rat(0), rat(1)]
            ]
        );
        assert_eq!(f.reconstruct(), g);
        assert!(positivity_check(&f).is_positive());
    }

    #[test]
    fn identity() {
        let f = ldl_decompose(&SymMatrix::identity(4)).unwrap();
        assert!(f.pivots().iter().all(One::is_one));
        assert_eq!(f.reconstruct(), SymMatrix::identity(4));
    }

    #[test]
    fn indefinite() {
        let f = ldl_decompose(&mat(&[&[1, 2], &[2, 1]])).unwrap();
        assert_eq!(f.pivots(), &[rat(1), rat(-3)]);
        assert_eq!(f.u()[0][1], rat(2));
        assert_eq!(positivity_check(&f), Positivity::NotPositive { index: 2, pivot: rat(-3) });
        assert!(positivity_check(&ldl_decompose(&mat(&[&[1]])).unwrap()).is_positive());
    }

    #[test]
    fn zero_pivot_and_shape_errors() {
        // trace matrix of x^3 - 2
        let g = mat(&[&[3, 0, 0], &[0, 0, 6], &[0, 6, 0]]);
        assert_eq!(ldl_decompose(&g), Err(LinalgError::ZeroPivot(2)));
        assert_eq!(ldl_decompose(&mat(&[&[0]])), Err(LinalgError::ZeroPivot(1)));
        assert_eq!(
            SymMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(3), rat(1)]]),
            Err(LinalgError::NotSymmetric { row: 1, col: 2 })
        );
        assert_eq!(SymMatrix::from_rows(vec![vec![rat(1), rat(2)]]), Err(LinalgError::NotSquare));
        assert_eq!(ldl_decompose(&SymMatrix::from_rows(vec![]).unwrap()).unwrap().dim(), 0);
    }

    fn sym_matrix() -> impl Strategy<Value = SymMatrix> {
        (1usize..6).prop_flat_map(|n| {
            proptest::collection::vec((-9i64..10, 1i64..4), n * n).prop_map(move |v| {
                let mut rows = vec![vec![rat(0); n]; n];
                for i in 0..n {
                    for j in i..n {
                        let (a, b) = v[i * n + j];
                        rows[i][j] = ratio(a, b);
                        rows[j][i] = ratio(a, b);
                    }
                }
                SymMatrix::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn reconstruction(g in sym_matrix()) {
            match ldl_decompose(&g) {
                Ok(f) => {
                    prop_assert_eq!(&f.pivots()[0], g.get(0, 0));
                    for i in 0..f.dim() {
                        prop_assert!(f.u()[i][i].is_one());
                        for j in 0..i {
                            prop_assert!(f.u()[i][j].is_zero());
                        }
                    }
                    prop_assert_eq!(f.reconstruct(), g);
                }
                Err(LinalgError::ZeroPivot(k)) => prop_assert!(k >= 1 && k <= g.dim()),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
            }
        }
    }
}
