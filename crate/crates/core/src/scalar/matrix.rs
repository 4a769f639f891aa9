//! Dense matrices over a [`Field`].

use std::fmt;

use super::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Field> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, K::one());
        }
        m
    }

    /// Panics if the rows have differing lengths.
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(entries: Vec<K>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &K> {
        self.data.iter()
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<L: Field, E>(&self, f: impl Fn(&K) -> Result<L, E>) -> Result<Matrix<L>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix<K>) -> Matrix<K> {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(K::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(K::is_zero)
    }

    /// Fraction-free (Bareiss) elimination to row echelon form, pivoting on
    /// the first nonzero entry in each column. Returns the rank and the last
    /// pivot, which for a square matrix of full rank is the determinant up
    /// to the sign of the row swaps.
    fn bareiss(&self) -> (usize, K, bool) {
        let mut m = self.clone();
        let mut prev = K::one();
        let mut rank = 0;
        let mut odd_swaps = false;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if piv != rank {
                m.swap_rows(piv, rank);
                odd_swaps = !odd_swaps;
            }
            let p = m.get(rank, col).clone();
            for i in rank + 1..m.rows {
                let f = m.get(i, col).clone();
                for j in col + 1..m.cols {
                    let v =
                        p.mul(m.get(i, j)).sub(&f.mul(m.get(rank, j))).div(&prev).expect("Bareiss pivot is nonzero");
                    m.set(i, j, v);
                }
                m.set(i, col, K::zero());
            }
            prev = p;
            rank += 1;
        }
        (rank, prev, odd_swaps)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.bareiss().0
    }

    pub fn determinant(&self) -> K {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return K::one();
        }
        let (rank, last, odd) = self.bareiss();
        if rank < self.rows {
            return K::zero();
        }
        if odd {
            last.neg()
        } else {
            last
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix<K>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(piv, r);
            let inv = m.get(r, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the null space, one vector per free column, with the free
    /// variable set to 1 and the other free variables 0.
    pub fn kernel(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![K::zero(); self.cols];
            v[free] = K::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = r.get(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self · x = b` with all free variables zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(b.len(), self.rows);
        let aug =
            Self::from_fn(
                self.rows,
                self.cols + 1,
                |i, j| {
                    if j < self.cols {
                        self.get(i, j).clone()
                    } else {
                        b[i].clone()
                    }
                },
            );
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// `solve` for several right-hand sides with a single elimination.
    pub fn solve_many(&self, bs: &[Vec<K>]) -> Option<Vec<Vec<K>>> {
        let (n, k) = (self.cols, bs.len());
        let aug =
            Self::from_fn(self.rows, n + k, |i, j| if j < n { self.get(i, j).clone() } else { bs[j - n][i].clone() });
        let (r, pivots) = aug.rref();
        let mut xs = vec![vec![K::zero(); n]; k];
        for (row, &pc) in pivots.iter().enumerate() {
            if pc >= n {
                // A pivot in an augmented column: some system is inconsistent.
                return None;
            }
            for (s, x) in xs.iter_mut().enumerate() {
                x[pc] = r.get(row, n + s).clone();
            }
        }
        Some(xs)
    }

    pub fn inverse(&self) -> Option<Matrix<K>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                K::one()
            } else {
                K::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }
}

impl<K: Field> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", row.join("\t"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn m(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(a.determinant(), q(-2));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let x = a.solve(&[q(6), q(12)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(6), q(12)]);
        assert!(a.solve(&[q(1), q(1)]).is_none());
        let bs = vec![vec![q(6), q(12)], vec![q(-1), q(-2)]];
        let xs = a.solve_many(&bs).unwrap();
        assert_eq!(xs[0], x);
        assert_eq!(a.solve(&bs[1]).unwrap(), xs[1]);
        assert!(a.solve_many(&[vec![q(1), q(2)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn empty_shapes_have_rank_zero() {
        assert_eq!(Matrix::<BigRational>::zeros(0, 4).rank(), 0);
        assert_eq!(Matrix::<BigRational>::zeros(4, 0).rank(), 0);
    }
}
