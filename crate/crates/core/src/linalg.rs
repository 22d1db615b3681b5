//! Dense matrices over a prime field: echelon forms, rank and kernels.

use crate::ffpoly::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
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

    /// Entries are reduced into `[0, p)`; all rows must have length `cols`.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = field.reduce(v);
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        let p = self.field.modulus();
        self.data.extend(row.iter().map(|&v| v % p));
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.field.modulus() as u64;
        (0..self.rows)
            .map(|i| {
                let s = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p);
                s as u32
            })
            .collect()
    }

    /// `self - c * row(src)` applied to row `dst`.
    fn axpy_row(&mut self, dst: usize, src: usize, c: u32) {
        let p = self.field.modulus();
        let neg = p - c;
        let cols = self.cols;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..(dst + 1) * cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..(src + 1) * cols])
        };
        for (x, &y) in a.iter_mut().zip(b) {
            if y != 0 {
                *x = ((*x as u64 + neg as u64 * y as u64) % p as u64) as u32;
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: u32) {
        let f = self.field;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, c);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    ///
    /// Zero rows end up at the bottom, so the first `pivots.len()` rows are a
    /// canonical basis of the row space.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self.field.inv(self.get(r, c)).expect("nonzero pivot");
            self.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let v = self.get(i, c);
                    if v != 0 {
                        self.axpy_row(i, r, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the row space in reduced echelon form.
    pub fn row_space(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let k = m.rref().len();
        (0..k).map(|i| m.row(i).to_vec()).collect()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, each with a 1
    /// in its free column.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let f = self.field;
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, free));
                }
                v
            })
            .collect()
    }
}

/// Reduced echelon basis of the intersection of two subspaces of `F_p^n`,
/// each given by spanning vectors.
pub fn intersect_spans(field: PrimeField, n: usize, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let a = Matrix::from_rows(field, n, &to_i64(a)).row_space();
    let b = Matrix::from_rows(field, n, &to_i64(b)).row_space();
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // columns: coefficients (lambda, mu) with sum lambda_i a_i = sum mu_j b_j
    let k = a.len() + b.len();
    let mut sys = Matrix::zeros(field, n, k);
    for (i, v) in a.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            sys.set(r, i, x);
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            sys.set(r, a.len() + j, field.neg(x));
        }
    }
    let vectors: Vec<Vec<i64>> = sys
        .kernel()
        .into_iter()
        .map(|coeffs| {
            let mut v = vec![0u32; n];
            for (i, ai) in a.iter().enumerate() {
                for (x, &y) in v.iter_mut().zip(ai) {
                    *x = field.add(*x, field.mul(coeffs[i], y));
                }
            }
            v.into_iter().map(i64::from).collect()
        })
        .collect();
    Matrix::from_rows(field, n, &vectors).row_space()
}

fn to_i64(rows: &[Vec<u32>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| x as i64).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> PrimeField {
        PrimeField::f7()
    }

    #[test]
    fn rank_of_small_matrices() {
        let m = Matrix::from_rows(f7(), 3, &[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let id = Matrix::from_rows(f7(), 2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(id.rank(), 2);
        assert_eq!(Matrix::zeros(f7(), 3, 4).rank(), 0);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // determinant 7
        let rows = [vec![3, 1], vec![1, 5]];
        assert_eq!(Matrix::from_rows(f7(), 2, &rows).rank(), 1);
        assert_eq!(Matrix::from_rows(PrimeField::new(5).unwrap(), 2, &rows).rank(), 2);
    }

    #[test]
    fn span_intersection_of_coordinate_planes() {
        let a = vec![vec![1, 0, 0], vec![0, 1, 0]];
        let b = vec![vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(intersect_spans(f7(), 3, &a, &b), vec![vec![0, 1, 0]]);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(0i64..7, 5), 1..6)) {
            let m = Matrix::from_rows(f7(), 5, &rows);
            let ker = m.kernel();
            prop_assert_eq!(ker.len() + m.rank(), 5);
            for v in &ker {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(0i64..7, 4), 1..7)) {
            let m = Matrix::from_rows(f7(), 4, &rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
