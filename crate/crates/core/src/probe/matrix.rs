use std::fmt;

use rand::Rng;

use super::field::PrimeField;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over F_{}",
            self.rows,
            self.cols,
            self.field.p()
        )?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, field.reduce(x));
            }
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn leading_columns(&self, k: usize) -> Matrix {
        self.select_columns(&(0..k).collect::<Vec<_>>())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut out = Self::zeros(self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            out.data[ii * self.cols..(ii + 1) * self.cols].copy_from_slice(self.row(i));
        }
        out
    }

    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<u64>]) -> Matrix {
        let mut out = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| m.get(i, col) != 0) else {
                continue;
            };
            m.swap_rows(row, piv);
            let inv = f.inv(m.get(row, col));
            for j in col..m.cols {
                let v = f.mul(m.get(row, j), inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                let factor = m.get(i, col);
                if i == row || factor == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Columns form a basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Matrix {
        let f = self.field;
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(matrix.get(r, fc)));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = self.hcat(&Self::identity(self.field, n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[..n].iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(matrix.select_columns(&cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// The unique `x` with `self * x = rhs`, for `self` of full column rank and
    /// `rhs` in its column space.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let k = self.cols;
        let Rref { matrix, pivots } = self.hcat(rhs).rref();
        if pivots.len() != k || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        // rows below k must vanish on the right block for consistency
        for i in k..matrix.rows {
            if (k..matrix.cols).any(|j| matrix.get(i, j) != 0) {
                return None;
            }
        }
        let rows: Vec<usize> = (0..k).collect();
        let cols: Vec<usize> = (k..matrix.cols).collect();
        Some(matrix.select_rows(&rows).select_columns(&cols))
    }

    pub fn scale_add(&mut self, other: &Matrix, c: u64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(f7(), &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.cols(), 1);
        assert!(m.mul(&ns).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PrimeField::default();
        for _ in 0..20 {
            let m = Matrix::random(f, 5, 5, &mut rng);
            if let Some(inv) = m.inverse() {
                assert_eq!(m.mul(&inv), Matrix::identity(f, 5));
            } else {
                assert!(m.rank() < 5);
            }
        }
        let singular = Matrix::from_rows(f7(), &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = Matrix::from_rows(f7(), &[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let x = Matrix::from_rows(f7(), &[vec![3], vec![5]]);
        let b = a.mul(&x);
        assert_eq!(a.solve(&b), Some(x));
        let off = Matrix::from_rows(f7(), &[vec![1], vec![0], vec![0]]);
        assert!(a.solve(&off).is_none());
    }

    #[test]
    fn empty_shapes() {
        let f = f7();
        let m = Matrix::zeros(f, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.nullspace().cols(), 3);
        assert_eq!(Matrix::identity(f, 0).inverse().unwrap().rows(), 0);
    }
}
