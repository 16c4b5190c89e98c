//! Dense matrices over the rationals with exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-2/5"` and similar.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim());
            let d = BigInt::from_str(d.trim());
            match (n, d) {
                (Ok(n), Ok(d)) if !d.is_zero() => Some(Q::new(n, d)),
                _ => None,
            }
        }
        None => BigInt::from_str(s).ok().map(Q::from_integer),
    };
    parsed.ok_or_else(|| Error::Format(format!("not a rational number: {s:?}")))
}

/// A `rows × cols` rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<Q>>) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::SizeMismatch(format!("expected a {rows}x{cols} matrix")));
        }
        Ok(QMatrix { rows, cols, data: entries.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        QMatrix { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn try_mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows {
            return Err(Error::SizeMismatch("hstack needs equal row counts".into()));
        }
        let mut out = QMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.cols {
            return Err(Error::SizeMismatch("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(QMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Columns `start..start + len`.
    pub fn column_block(&self, start: usize, len: usize) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows, len);
        for i in 0..self.rows {
            for j in 0..len {
                out.set(i, j, self.get(i, start + j).clone());
            }
        }
        out
    }

    /// Rows `start..start + len`.
    pub fn row_block(&self, start: usize, len: usize) -> QMatrix {
        QMatrix {
            rows: len,
            cols: self.cols,
            data: self.data[start * self.cols..(start + len) * self.cols].to_vec(),
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - &factor * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the null space, as the columns of a `cols × nullity` matrix.
    pub fn kernel(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = QMatrix::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, Q::one());
            for (prow, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, -r.get(prow, f).clone());
            }
        }
        k
    }

    /// Some `X` with `self · X = rhs`, if one exists.
    pub fn solve(&self, rhs: &QMatrix) -> Result<Option<QMatrix>> {
        if rhs.rows != self.rows {
            return Err(Error::SizeMismatch("right-hand side has the wrong height".into()));
        }
        let (r, pivots) = self.hstack(rhs)?.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = QMatrix::zeros(self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.get(prow, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Entries rendered as `"p"` or `"p/q"`, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect()
    }

    pub fn from_strings(rows: usize, cols: usize, entries: &[Vec<String>]) -> Result<Self> {
        let parsed = entries
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        QMatrix::from_rows(rows, cols, parsed)
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.try_mul(rhs).expect("matrix dimensions agree")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;

    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self + &(-rhs)
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;

    fn neg(self) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QMatrixRepr { rows: self.rows, cols: self.cols, entries: self.to_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QMatrixRepr::deserialize(d)?;
        QMatrix::from_strings(repr.rows, repr.cols, &repr.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, e: &[i64]) -> QMatrix {
        QMatrix::from_i64(rows, cols, e)
    }

    #[test]
    fn rank_and_kernel_examples() {
        let a = m(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(a.rank(), 1);
        let k = a.kernel();
        assert_eq!((k.rows(), k.cols()), (3, 2));
        assert!((&a * &k).is_zero());
        assert_eq!(k.rank(), 2);

        assert_eq!(QMatrix::identity(4).rank(), 4);
        assert_eq!(QMatrix::identity(4).kernel().cols(), 0);
        assert_eq!(QMatrix::zeros(0, 3).kernel().cols(), 3);
        assert_eq!(QMatrix::zeros(2, 0).rank(), 0);
    }

    #[test]
    fn difference_map_kernel() {
        // the fiber product of two identities on Q
        let diff = m(1, 2, &[1, -1]);
        let k = diff.kernel();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![q(1), q(1)]);
    }

    #[test]
    fn solve_examples() {
        let a = m(2, 2, &[2, 1, 1, 1]);
        let b = m(2, 1, &[3, 2]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(&a * &x, b);
        let singular = m(2, 2, &[1, 1, 1, 1]);
        assert!(singular.solve(&m(2, 1, &[1, 0])).unwrap().is_none());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_q("-2/4").unwrap(), Q::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(parse_q(" 7 ").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        let a = QMatrix::from_rows(1, 2, vec![vec![q(1), Q::new(1.into(), 3.into())]]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"rows":1,"cols":2,"entries":[["1","1/3"]]}"#);
        assert_eq!(serde_json::from_str::<QMatrix>(&json).unwrap(), a);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in 0usize..5, cols in 0usize..5, seed in proptest::collection::vec(-3i64..=3, 25)) {
            let a = m(rows, cols, &seed[..rows * cols]);
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.cols(), cols);
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn solve_recovers_consistent_systems(seed in proptest::collection::vec(-3i64..=3, 12)) {
            let a = m(3, 3, &seed[..9]);
            let x0 = m(3, 1, &seed[9..]);
            let b = &a * &x0;
            let x = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(&a * &x, b);
        }
    }
}
