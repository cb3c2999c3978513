use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Builds a matrix with the given shape from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols,
            other.rows,
            "shape mismatch in product: {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        IntMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        IntMatrix::from_vec(self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|a| a * c).collect())
    }

    /// Reduces every entry into `[0, p)`.
    pub fn reduce_mod(&self, p: &BigInt) -> IntMatrix {
        IntMatrix::from_vec(self.rows, self.cols, self.data.iter().map(|a| modulo(a, p)).collect())
    }

    /// Rows `rows` and columns `cols` (half-open ranges) as a new matrix.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (oi, i) in rows.enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out[(oi, oj)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix::from_vec(self.rows + other.rows, self.cols, data)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += c * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[source * self.cols + j] * c;
            self.data[target * self.cols + j] += v;
        }
    }

    /// col[target] += c * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + source] * c;
            self.data[i * self.cols + target] += v;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Rank over the rationals, by fraction-free row reduction.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(pivot) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(pivot, rank);
            for i in rank + 1..a.rows {
                for j in col + 1..a.cols {
                    let v = (&a[(i, j)] * &a[(rank, col)] - &a[(i, col)] * &a[(rank, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, col)] = BigInt::zero();
            }
            prev = a[(rank, col)].clone();
            rank += 1;
        }
        rank
    }

    /// Rank over the prime field `F_p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        let p = p as u128;
        let pb = BigInt::from(p);
        let mut a: Vec<Vec<u128>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| {
                        let r = modulo(x, &pb);
                        u128::try_from(r).expect("residue fits in u128")
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(pivot, rank);
            let inv = pow_mod(a[rank][col], p - 2, p);
            let pivot_row = a[rank].clone();
            for row in a.iter_mut().skip(rank + 1) {
                let f = row[col] * inv % p;
                if f == 0 {
                    continue;
                }
                for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact inverse over the rationals, or `None` when singular.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = self.row(i).iter().cloned().map(BigRational::from_integer).collect();
                row.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
            a.swap(pivot, col);
            let inv = a[col][col].recip();
            for x in a[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x -= y * &f;
                    }
                }
            }
        }
        Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    /// Inverse over the integers; `None` unless the matrix is unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let inv = self.inverse_rational()?;
        let n = self.rows;
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if !inv[i][j].is_integer() {
                    return None;
                }
                out[(i, j)] = inv[i][j].to_integer();
            }
        }
        Some(out)
    }

    /// Inverse over `F_p` with entries in `[0, p)`.
    pub fn inverse_mod(&self, p: u64) -> Option<IntMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let pm = p as u128;
        let pb = BigInt::from(p);
        let mut a: Vec<Vec<u128>> = (0..n)
            .map(|i| {
                let mut row: Vec<u128> = self
                    .row(i)
                    .iter()
                    .map(|x| u128::try_from(modulo(x, &pb)).expect("residue fits"))
                    .collect();
                row.extend((0..n).map(|j| u128::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&i| a[i][col] != 0)?;
            a.swap(pivot, col);
            let inv = pow_mod(a[col][col], pm - 2, pm);
            for x in a[col].iter_mut() {
                *x = *x * inv % pm;
            }
            let pivot_row = a[col].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i != col && row[col] != 0 {
                    let f = row[col];
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = (*x + pm - f * y % pm) % pm;
                    }
                }
            }
        }
        let data = a
            .into_iter()
            .flat_map(|row| row[n..].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
            .collect();
        Some(IntMatrix::from_vec(n, n, data))
    }

    /// Block-diagonal sum of the given matrices.
    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(IntMatrix::rows).sum();
        let cols = blocks.iter().map(IntMatrix::cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Non-negative residue of `a` modulo `p`.
pub fn modulo(a: &BigInt, p: &BigInt) -> BigInt {
    let r = a % p;
    if r.is_negative() {
        r + p
    } else {
        r
    }
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, p: u128) -> u128 {
    let mut acc = 1u128;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    #[test]
    fn determinant_small() {
        assert_eq!(m(&[vec![2, 4], vec![6, 8]]).determinant(), BigInt::from(-8));
        assert_eq!(
            m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]).determinant(),
            BigInt::from(-3)
        );
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn rank_over_q_and_fp() {
        let a = m(&[vec![2, 4], vec![1, 2]]);
        assert_eq!(a.rank(), 1);
        let b = m(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(b.rank(), 2);
        assert_eq!(b.rank_mod(2), 1);
        assert_eq!(b.rank_mod(3), 1);
        assert_eq!(b.rank_mod(5), 2);
    }

    #[test]
    fn inverses() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse_unimodular().unwrap();
        assert_eq!(a.mul(&inv), IntMatrix::identity(2));
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_none());
        let inv2 = m(&[vec![2, 0], vec![0, 1]]).inverse_mod(5).unwrap();
        assert_eq!(inv2, m(&[vec![3, 0], vec![0, 1]]));
    }
}
