//! Matrices of polynomials with exact arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{GaussRat, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} against {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("determinant `{0}` is not a unit of the polynomial ring")]
    NonUnitDeterminant(String),
    #[error("determinant is limited to size {max}, got {size}")]
    TooLarge { size: usize, max: usize },
}

/// Largest size `determinant` accepts. Minor expansion is memoized over
/// column subsets, so this bounds the table at `2^n` entries.
pub const MAX_DET_SIZE: usize = 12;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Poly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Parse a row-major table of polynomial literals, embedding every entry
    /// in the declared variable list.
    pub fn parse_rows(rows: &[&[&str]], vars: &[String]) -> Self {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|s| Poly::parse_in(s, vars).unwrap_or_else(|e| panic!("bad entry `{s}`: {e}")))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        PolyMatrix::scalar(n, &Poly::one())
    }

    /// `p·I_n`.
    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = p.clone();
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r * self.cols + c] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Poly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn substitute(&self, bindings: &BTreeMap<String, Poly>) -> PolyMatrix {
        self.map(|p| p.substitute(bindings))
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        self.map(|e| e * p)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> Poly {
        (0..self.rows.min(self.cols)).fold(Poly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Submatrix on the given (0-based) row and column index lists, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let entries = rows.iter().flat_map(|&r| cols.iter().map(move |&c| self.get(r, c).clone())).collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn matmul(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &PolyMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<PolyMatrix, MatrixError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(MatrixError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Determinant by Laplace expansion along rows, memoized on the set of
    /// columns still available. Division-free, so valid over the polynomial ring.
    pub fn determinant(&self) -> Result<Poly, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n > MAX_DET_SIZE {
            return Err(MatrixError::TooLarge { size: n, max: MAX_DET_SIZE });
        }
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut memo: HashMap<u32, Poly> = HashMap::new();
        Ok(self.det_rec(0, (1u32 << n) - 1, &mut memo))
    }

    fn det_rec(&self, row: usize, mask: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if row == self.rows {
            return Poly::one();
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let mut acc = Poly::zero();
        let mut sign_positive = true;
        for c in 0..self.cols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let a = self.get(row, c);
            if !a.is_zero() {
                let minor = self.det_rec(row + 1, mask & !(1 << c), memo);
                let t = a * &minor;
                acc = if sign_positive { &acc + &t } else { &acc - &t };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Classical adjugate: `adj(A)[i][j] = (-1)^(i+j) det(A with row j, column i removed)`.
    pub fn adjugate(&self) -> Result<PolyMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut out = PolyMatrix::zeros(n, n);
        if n == 1 {
            out.set(0, 0, Poly::one());
            return Ok(out);
        }
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.submatrix(&rows, &cols).determinant()?;
                out.set(i, j, if (i + j) % 2 == 0 { minor } else { -minor });
            }
        }
        Ok(out)
    }

    /// Inverse of a unimodular matrix, `adj(A)/det(A)`. The determinant must be
    /// a nonzero constant, otherwise the inverse leaves the polynomial ring.
    pub fn adjugate_inverse(&self) -> Result<PolyMatrix, MatrixError> {
        let det = self.determinant()?;
        let unit = det
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| MatrixError::NonUnitDeterminant(det.to_string()))?;
        let inv = Poly::constant(unit.inv().expect("nonzero"));
        Ok(self.adjugate()?.scale(&inv))
    }

    /// `B·M·B⁻¹`.
    pub fn conjugate(b: &PolyMatrix, m: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        PolyMatrix::conjugate2(b, m, b)
    }

    /// Two-sided base change `L·M·R⁻¹`.
    pub fn conjugate2(left: &PolyMatrix, m: &PolyMatrix, right: &PolyMatrix) -> Result<PolyMatrix, MatrixError> {
        let rinv = right.adjugate_inverse()?;
        left.matmul(m)?.matmul(&rinv)
    }

    /// First entry `(row, col)` lying outside the diagonal blocks of `partition`
    /// that is not identically zero. Indices not covered by any block count as
    /// their own singleton block.
    pub fn block_violation(&self, partition: &[Vec<usize>]) -> Option<(usize, usize)> {
        let n = self.rows.max(self.cols);
        let mut block_of: Vec<usize> = (0..n).map(|i| partition.len() + i).collect();
        for (b, idx) in partition.iter().enumerate() {
            for &i in idx {
                block_of[i] = b;
            }
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if block_of[r] != block_of[c] && !self.get(r, c).is_zero() {
                    return Some((r, c));
                }
            }
        }
        None
    }

    /// True iff every entry outside the diagonal blocks of `partition` is zero.
    pub fn block_pattern(&self, partition: &[Vec<usize>]) -> bool {
        self.block_violation(partition).is_none()
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diag(blocks: &[PolyMatrix]) -> PolyMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = PolyMatrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(off + r, off + c, b.get(r, c).clone());
                }
            }
            off += b.rows;
        }
        out
    }

    /// Re-embed every entry in a declared variable list (for stable output).
    pub fn with_vars(&self, vars: &[String]) -> Result<PolyMatrix, crate::poly::PolyError> {
        let entries = self.entries.iter().map(|p| p.with_vars(vars)).collect::<Result<_, _>>()?;
        Ok(PolyMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// Multiply every entry by a scalar from ℚ(i).
    pub fn scale_const(&self, c: &GaussRat) -> PolyMatrix {
        self.map(|p| p.scale(c))
    }

    /// The entries that differ from `other`, as `(row, col, self - other)`.
    pub fn differences(&self, other: &PolyMatrix) -> Vec<(usize, usize, Poly)> {
        let mut out = Vec::new();
        for r in 0..self.rows.min(other.rows) {
            for c in 0..self.cols.min(other.cols) {
                let d = self.get(r, c) - other.get(r, c);
                if !d.is_zero() {
                    out.push((r, c, d));
                }
            }
        }
        out
    }

    pub fn is_constant_diagonal_of(&self, p: &Poly) -> bool {
        self.is_square() && *self == PolyMatrix::scalar(self.rows, p)
    }
}

/// Canonical text: one bracketed row per line, entries separated by `, `.
impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

impl<'a> Mul<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    /// Panics on dimension mismatch; use [`PolyMatrix::matmul`] to handle it.
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.matmul(rhs).expect("matrix dimensions")
    }
}

impl<'a> Add<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_add(rhs).expect("matrix dimensions")
    }
}

impl<'a> Sub<&'a PolyMatrix> for &'a PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_sub(rhs).expect("matrix dimensions")
    }
}

impl Neg for &PolyMatrix {
    type Output = PolyMatrix;
    fn neg(self) -> PolyMatrix {
        self.map(|p| -p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::p;

    fn m(rows: &[&[&str]]) -> PolyMatrix {
        PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| p(s)).collect()).collect())
    }

    #[test]
    fn a1_factorization_product() {
        let phi = m(&[&["x", "z"], &["z", "y"]]);
        let psi = m(&[&["y", "-z"], &["-z", "x"]]);
        assert_eq!(&phi * &psi, PolyMatrix::scalar(2, &p("x*y - z^2")));
        assert_eq!(&phi * &PolyMatrix::identity(2), phi);
    }

    #[test]
    fn dimension_mismatch() {
        let a = PolyMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(MatrixError::DimensionMismatch { .. })));
        assert!(matches!(a.determinant(), Err(MatrixError::NotSquare(2, 3))));
    }

    #[test]
    fn quadric_discriminant() {
        let q = m(&[
            &["1", "0", "0", "0"],
            &["0", "u", "v", "0"],
            &["0", "v", "w", "0"],
            &["0", "0", "0", "u*w - v^2"],
        ]);
        assert_eq!(q.determinant().unwrap(), p("(u*w - v^2)^2"));
        assert_eq!(PolyMatrix::identity(5).determinant().unwrap(), Poly::one());
    }

    #[test]
    fn unimodular_inverse() {
        let b = m(&[&["1", "0", "0", "-1/2"], &["0", "1", "-1/2*Z", "0"], &["0", "0", "1", "0"], &["0", "0", "0", "-1"]]);
        assert_eq!(b.determinant().unwrap(), Poly::int(-1));
        let inv = b.adjugate_inverse().unwrap();
        assert_eq!(&b * &inv, PolyMatrix::identity(4));
        assert_eq!(&inv * &b, PolyMatrix::identity(4));
        assert_eq!(PolyMatrix::identity(3).adjugate_inverse().unwrap(), PolyMatrix::identity(3));
    }

    #[test]
    fn non_unit_determinant_is_rejected() {
        let a = m(&[&["x", "0"], &["0", "1"]]);
        assert!(matches!(a.adjugate_inverse(), Err(MatrixError::NonUnitDeterminant(_))));
        let z = m(&[&["1", "1"], &["1", "1"]]);
        assert!(matches!(z.adjugate_inverse(), Err(MatrixError::NonUnitDeterminant(_))));
    }

    #[test]
    fn blocks() {
        let a = m(&[&["x", "0", "0"], &["0", "y", "1"], &["0", "z", "2"]]);
        assert!(a.block_pattern(&[vec![0], vec![1, 2]]));
        assert_eq!(a.block_violation(&[vec![0], vec![1], vec![2]]), Some((1, 2)));
        let dense = m(&[&["x", "y"], &["z", "x"]]);
        assert!(!dense.block_pattern(&[vec![0], vec![1]]));
        assert_eq!(PolyMatrix::block_diag(&[m(&[&["x"]]), m(&[&["y", "1"], &["z", "2"]])]), a);
    }

    #[test]
    fn conjugation_by_identity() {
        let a = m(&[&["x", "y"], &["z", "x^2"]]);
        assert_eq!(PolyMatrix::conjugate(&PolyMatrix::identity(2), &a).unwrap(), a);
    }

    #[test]
    fn text_rendering() {
        let a = m(&[&["x", "-1/2"], &["0", "x*y"]]);
        assert_eq!(a.to_string(), "[x, -1/2]\n[0, x*y]\n");
    }
}
