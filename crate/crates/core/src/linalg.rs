//! Dense matrices over a generic [`Scalar`].
//!
//! Everything in the crate is desk scale (dimensions in the hundreds at
//! most), so plain Gaussian elimination with pivot selection is enough.

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<S> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Largest residual norm over all entries.
    pub fn max_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.residual_norm())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
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

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        acc = acc.add(&self.get(i, j).mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Commutator `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).sub(&rhs.matmul(self))
    }

    /// Anticommutator `self * rhs + rhs * self`.
    pub fn anticommutator(&self, rhs: &Self) -> Self {
        self.matmul(rhs).add(&rhs.matmul(self))
    }

    /// Stacks matrices vertically (shared column count).
    pub fn vstack(blocks: &[&Mat<S>]) -> Self {
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            data.extend_from_slice(&b.data);
        }
        Mat { rows, cols, data }
    }

    /// In-place row echelon reduction; returns the rank and pivot columns.
    pub fn row_echelon(&mut self) -> (usize, Vec<usize>) {
        let mut rank = 0;
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            // Best pivot in this column at or below `rank`.
            let mut best: Option<(usize, f64)> = None;
            for r in rank..self.rows {
                let w = self.get(r, col).pivot_weight();
                if w > 0.0 && best.map_or(true, |(_, bw)| w > bw) {
                    best = Some((r, w));
                }
            }
            let Some((prow, _)) = best else { continue };
            self.swap_rows(rank, prow);
            let inv = self
                .get(rank, col)
                .inverse()
                .expect("pivot must be invertible");
            for j in col..self.cols {
                let v = self.get(rank, j).mul(&inv);
                self.set(rank, j, v);
            }
            for r in 0..self.rows {
                if r != rank && !self.get(r, col).is_zero() {
                    let f = self.get(r, col).clone();
                    for j in col..self.cols {
                        let v = self.get(r, j).sub(&f.mul(self.get(rank, j)));
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, pivots)
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
        let mut m = self.clone();
        m.row_echelon().0
    }

    /// Basis of the kernel as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let (_, pivots) = m.row_echelon();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                // Row r reads: x_pc + sum_{j free} m[r][j] x_j = 0.
                v[pc] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(self.rows, b.len());
        let n = self.rows;
        let mut aug = Mat::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n, b[i].clone());
        }
        let (rank, pivots) = aug.row_echelon();
        if rank != n || pivots != (0..n).collect::<Vec<_>>() {
            return None;
        }
        Some((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    /// Dimension of the span of the given vectors.
    pub fn span_dim(vectors: &[Vec<S>]) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        Mat::from_rows(vectors.to_vec()).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::CRat;

    fn m(rows: Vec<Vec<i64>>) -> Mat<CRat> {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(CRat::from_int).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_exact() {
        let a = m(vec![vec![2, 1], vec![1, 3]]);
        let b = vec![CRat::from_int(5), CRat::from_int(10)];
        let x = a.solve(&b).unwrap();
        assert_eq!(a.apply(&x), b);
        let singular = m(vec![vec![1, 2], vec![2, 4]]);
        assert!(singular.solve(&b).is_none());
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let z: Mat<CRat> = Mat::zeros(2, 3);
        assert_eq!(z.kernel_basis().len(), 3);
    }
}
