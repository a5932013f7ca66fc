use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Square integer matrix, stored row-major. Vectors act on the left
/// (`v · M`), so row `i` is the image of the `i`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = BigInt::one();
        }
        IntMatrix { n, data }
    }

    /// Builds a matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, entries: Vec<BigInt>) -> Option<Self> {
        (entries.len() == n * n).then_some(IntMatrix { n, data: entries })
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[&[T]]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            data.extend(row.iter().map(|&x| x.into()));
        }
        IntMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.data[row * self.n + col]
    }

    pub fn get_mut(&mut self, row: usize, col: usize) -> &mut BigInt {
        &mut self.data[row * self.n + col]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    /// `self · other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        IntMatrix { n, data }
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![BigInt::zero(); self.n];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self.get(i, j);
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.data[i * n..(i + 1) * n].to_vec())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Rank over the rationals of a list of integer vectors.
pub fn rank(vectors: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank].clone();
        for row in &mut rows[rank + 1..] {
            let f = row[col].clone();
            if f.is_zero() {
                continue;
            }
            for (x, pc) in row.iter_mut().zip(&p) {
                *x = &*x * &p[col] - &f * pc;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_rows(&[&[0, 1], &[-1, 0]]);
        assert_eq!(m.determinant(), BigInt::from(1));
        let m = IntMatrix::from_rows(&[&[2]]);
        assert_eq!(m.determinant(), BigInt::from(2));
        let m = IntMatrix::from_rows(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        // expand along the second row
        assert_eq!(m.determinant(), BigInt::from(-7));
    }

    #[test]
    fn row_vector_convention() {
        let m = IntMatrix::from_rows(&[&[0, 1], &[-1, 0]]);
        let v = m.apply(&[BigInt::from(1), BigInt::from(0)]);
        assert_eq!(v, vec![BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn rank_of_vectors() {
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        assert_eq!(rank(&[v(1, 0), v(2, 0)]), 1);
        assert_eq!(rank(&[v(1, 1), v(2, 0)]), 2);
        assert_eq!(rank(&[v(0, 0)]), 0);
        assert_eq!(rank(&[]), 0);
    }
}
