//! Dense exact matrices.
//!
//! Determinant and rank run on integer rows (each row scaled by the lcm of its
//! denominators) with Bareiss fraction-free elimination, so intermediate
//! entries stay integral. Nullspaces come from a rational reduced row echelon
//! form and are returned as primitive integer vectors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::DensePolynomial;
use super::rational::{primitive_integer_vector, rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<Rational>,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j)?);
            }
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds from row vectors; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Self::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in addition".into()));
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) * c)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (i, x)| acc + x * self.get(i, j))
            })
            .collect())
    }

    /// Non-negative integer power of a square matrix.
    pub fn pow(&self, mut exp: u32) -> Result<Self> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Rows cleared of denominators, plus the product of the row multipliers.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let ints = row.iter().map(|x| (x * &l).to_integer()).collect();
                scale *= l;
                ints
            })
            .collect();
        (rows, scale)
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let (mut a, scale) = self.integer_rows();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        negate = !negate;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    debug_assert!((&t % &prev).is_zero());
                    a[i][j] = t / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = Rational::new(a[n - 1][n - 1].clone(), scale);
        Ok(if negate { -d } else { d })
    }

    /// Rank by fraction-free echelon reduction.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            for i in r + 1..m {
                for j in c + 1..n {
                    let t = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                    debug_assert!((&t % &prev).is_zero());
                    a[i][j] = t / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, r);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= &f * y;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let entries = a.into_iter().flatten().collect();
        (Self { rows: m, cols: n, entries }, pivots)
    }

    /// Basis of `{v : M v = 0}`. One vector per free column `f`; its last
    /// nonzero entry sits at index `f`, and vectors are ordered by `f`.
    pub fn right_nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let n = self.cols;
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); n];
                v[free] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, free).clone();
                }
                primitive_integer_vector(&v)
            })
            .collect()
    }

    /// Basis of `{τ : τ M = 0}` with the same ordering and normalization as
    /// [`RationalMatrix::right_nullspace`].
    pub fn left_nullspace(&self) -> Vec<Vec<Rational>> {
        self.transpose().right_nullspace()
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Monic `det(xI − M)` by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Result<DensePolynomial> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut acc = Self::zeros(n, n);
        for k in 1..=n {
            // acc <- M·acc + c_{n-k+1}·I
            let mut next = self.mul(&acc)?;
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            let am = self.mul(&next)?;
            let trace = (0..n).fold(Rational::zero(), |t, i| t + am.get(i, i));
            coeffs[n - k] = -trace / rat(k as i64);
            acc = next;
        }
        Ok(DensePolynomial::new(coeffs))
    }

    /// `Σ c_i M^i` for a polynomial given in ascending coefficients.
    pub fn eval_poly(&self, f: &DensePolynomial) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc.entries[i * n + i] += c;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_int_rows(rows).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(m(&[&[1, 1], &[2, 1]]).det().unwrap(), rat(-1));
        assert_eq!(RationalMatrix::identity(5).det().unwrap(), rat(1));
        assert_eq!(RationalMatrix::zeros(0, 0).det().unwrap(), rat(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), rat(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), rat(0));
        assert!(matches!(
            RationalMatrix::zeros(2, 3).det(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn determinant_with_fractions() {
        let a = RationalMatrix::from_rows(vec![
            vec![Rational::new(1.into(), 2.into()), rat(1)],
            vec![rat(3), Rational::new(2.into(), 3.into())],
        ])
        .unwrap();
        // 1/2·2/3 − 3 = −8/3
        assert_eq!(a.det().unwrap(), Rational::new((-8).into(), 3.into()));
    }

    #[test]
    fn nullspace_of_column() {
        let basis = m(&[&[1], &[2]]).left_nullspace();
        assert_eq!(basis, vec![vec![rat(2), rat(-1)]]);
        assert!(RationalMatrix::identity(3).left_nullspace().is_empty());
    }

    #[test]
    fn nullspace_vectors_end_at_free_columns() {
        let a = m(&[&[1, 2, 0, 3], &[0, 0, 1, 4]]);
        let basis = a.right_nullspace();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], vec![rat(2), rat(-1), rat(0), rat(0)]);
        assert_eq!(basis[1], vec![rat(3), rat(0), rat(4), rat(-1)]);
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            m(&[&[1, 1], &[1, 0]]).char_poly().unwrap(),
            DensePolynomial::from_ints(&[-1, -1, 1])
        );
        assert_eq!(
            RationalMatrix::zeros(2, 2).char_poly().unwrap(),
            DensePolynomial::from_ints(&[0, 0, 1])
        );
        // Q_3 at p = 1, q = −1: columns are (x + y)^2, (x + y), 1
        let q3 = m(&[&[1, 1, 1], &[2, 1, 0], &[1, 0, 0]]);
        assert_eq!(q3.char_poly().unwrap(), DensePolynomial::from_ints(&[1, -2, -2, 1]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(3));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
        prop::collection::vec(-6i64..7, n * n)
            .prop_map(move |v| RationalMatrix::new(n, n, v.into_iter().map(rat).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn det_is_multiplicative_3(a in small_matrix(3), b in small_matrix(3)) {
            prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn det_is_multiplicative_4(a in small_matrix(4), b in small_matrix(4)) {
            prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn cayley_hamilton(a in prop_oneof![small_matrix(2), small_matrix(3)]) {
            let f = a.char_poly().unwrap();
            prop_assert!(f.is_monic());
            prop_assert!(a.eval_poly(&f).unwrap().is_zero());
        }

        #[test]
        fn left_nullspace_annihilates(rows in 1usize..6, cols in 1usize..5, seed in prop::collection::vec(-3i64..4, 30)) {
            let a = RationalMatrix::from_fn(rows, cols, |i, j| rat(seed[i * cols + j]));
            let basis = a.left_nullspace();
            prop_assert_eq!(basis.len(), rows - a.rank());
            for v in &basis {
                prop_assert!(a.left_apply(v).unwrap().iter().all(Zero::is_zero));
                prop_assert_eq!(primitive_integer_vector(v), v.clone());
            }
        }

        #[test]
        fn rank_agrees_with_rref(rows in 1usize..6, cols in 1usize..6, seed in prop::collection::vec(-2i64..3, 36)) {
            let a = RationalMatrix::from_fn(rows, cols, |i, j| rat(seed[i * cols + j]));
            prop_assert_eq!(a.rank(), a.rref().1.len());
        }
    }
}
