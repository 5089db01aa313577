//! Dense exact linear algebra over [`Rational`].
//!
//! Elimination always takes the first nonzero entry of a column as the pivot,
//! so every result is a deterministic function of the input.

use num_traits::{One, Zero};

use crate::error::LinalgError;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            entries.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            entries,
        })
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul(&self, other: &MatrixQ) -> Result<MatrixQ, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = MatrixQ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            if !inv.is_one() {
                for j in c..m.cols {
                    let idx = r * m.cols + j;
                    if !m.entries[idx].is_zero() {
                        m.entries[idx] = &m.entries[idx] * &inv;
                    }
                }
            }
            let pivot_row: Vec<(usize, Rational)> = (c..m.cols)
                .filter(|&j| !m.get(r, j).is_zero())
                .map(|j| (j, m.get(r, j).clone()))
                .collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let idx = i * m.cols + j;
                    m.entries[idx] = &m.entries[idx] - &f * v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: MatrixQ,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// Kernel basis read off the free columns, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let cols = self.matrix.cols;
        let mut is_pivot = vec![false; cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rational::zero(); cols];
                v[f] = Rational::one();
                for (r, &p) in self.pivots.iter().enumerate() {
                    let x = self.matrix.get(r, f);
                    if !x.is_zero() {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// Solution set of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    /// `None` when the system is inconsistent.
    pub particular: Option<Vec<Rational>>,
    pub kernel: Vec<Vec<Rational>>,
}

impl AffineSolution {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }

    /// The solution when it exists and is unique.
    pub fn unique(&self) -> Option<&[Rational]> {
        match (&self.particular, self.kernel.is_empty()) {
            (Some(x), true) => Some(x),
            _ => None,
        }
    }
}

pub fn solve_affine(a: &MatrixQ, b: &[Rational]) -> Result<AffineSolution, LinalgError> {
    if a.rows != b.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let mut aug = MatrixQ::zeros(a.rows, a.cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, bi.clone());
    }
    let red = aug.rref();
    let particular = if red.pivots.last() == Some(&a.cols) {
        None
    } else {
        let mut x = vec![Rational::zero(); a.cols];
        for (r, &p) in red.pivots.iter().enumerate() {
            x[p] = red.matrix.get(r, a.cols).clone();
        }
        Some(x)
    };
    let kernel = a.rref().kernel();
    Ok(AffineSolution { particular, kernel })
}

pub fn nullspace(a: &MatrixQ) -> Vec<Vec<Rational>> {
    a.rref().kernel()
}

/// A basis of the column space, chosen as the pivot columns of `columns`.
pub fn independent_columns(rows: usize, columns: &[Vec<Rational>]) -> Vec<usize> {
    match MatrixQ::from_columns(rows, columns) {
        Ok(m) => m.rref().pivots,
        Err(_) => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn solves_the_level_two_weight_two_system() {
        let a = m(&[&[3, 10], &[20, 12]]);
        let s = solve_affine(&a, &[rat(1, 2), int(3)]).unwrap();
        assert_eq!(s.unique().unwrap(), &[rat(6, 41), rat(1, 164)]);
    }

    #[test]
    fn solves_the_level_two_weight_three_system() {
        let a = m(&[&[3, 14], &[24, 18]]);
        let s = solve_affine(&a, &[int(2), int(5)]).unwrap();
        assert_eq!(s.unique().unwrap(), &[rat(17, 141), rat(11, 94)]);
    }

    #[test]
    fn identity_system() {
        let b = vec![rat(1, 3), int(-7), int(0), rat(5, 2)];
        let s = solve_affine(&MatrixQ::identity(4), &b).unwrap();
        assert_eq!(s.particular.as_deref(), Some(&b[..]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn inconsistent_and_mismatch() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let s = solve_affine(&a, &[int(1), int(3)]).unwrap();
        assert!(!s.is_consistent());
        assert_eq!(s.kernel.len(), 1);
        assert!(matches!(
            solve_affine(&a, &[int(1)]),
            Err(LinalgError::DimensionMismatch { .. })
        ));
        assert!(MatrixQ::from_rows(vec![vec![int(1)], vec![int(1), int(2)]]).is_err());
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace(&MatrixQ::zeros(2, 2)).len(), 2);
        assert!(nullspace(&m(&[&[1, 2], &[3, 4]])).is_empty());
        let k = nullspace(&m(&[&[1, 1], &[2, 2]]));
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], int(0));
        assert_ne!(k[0][0], int(0));
    }

    fn small_matrix() -> impl Strategy<Value = MatrixQ> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec((-4i64..5, 1i64..4), r * c).prop_map(move |v| {
                let rows = v
                    .chunks(c)
                    .map(|ch| ch.iter().map(|&(p, q)| rat(p, q)).collect())
                    .collect();
                MatrixQ::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in small_matrix()) {
            let k = nullspace(&a);
            prop_assert_eq!(a.rank() + k.len(), a.cols());
            for v in &k {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
            let km = MatrixQ::from_columns(a.cols(), &k).unwrap();
            prop_assert_eq!(km.rank(), k.len());
        }

        #[test]
        fn affine_residual_is_exactly_zero(a in small_matrix(), seed in prop::collection::vec(-5i64..6, 6)) {
            // b in the column space, so the system is consistent
            let x0: Vec<Rational> = (0..a.cols()).map(|i| int(seed[i % seed.len()])).collect();
            let b = a.mul_vec(&x0).unwrap();
            let s = solve_affine(&a, &b).unwrap();
            let x = s.particular.expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
        }

        #[test]
        fn field_laws(p in prop::collection::vec((-50i64..50, 1i64..30), 3)) {
            let [a, b, c] = [rat(p[0].0, p[0].1), rat(p[1].0, p[1].1), rat(p[2].0, p[2].1)];
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            let s = &a * &b - &c;
            prop_assert!(s.denom() > &num_bigint::BigInt::from(0));
            prop_assert!(num_integer::Integer::gcd(s.numer(), s.denom()).is_one() || s.is_zero());
        }
    }
}
