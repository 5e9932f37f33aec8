use num_traits::{One, Zero};

use super::field::{Field, NFElem};
use super::Rational;

/// Dense matrix over a number field, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<NFElem>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field: field.clone(), data: vec![NFElem::zero(field); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, NFElem::one(field));
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<NFElem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, field: field.clone(), data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &NFElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: NFElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[NFElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[NFElem]) -> Vec<NFElem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = NFElem::zero(&self.field);
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let src = m.get(r, j);
                    if src.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * src);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
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
        self.rref().1.len()
    }

    /// Basis of the right kernel. Each vector has a 1 in one free column and 0 in the others.
    pub fn kernel_basis(&self) -> Vec<Vec<NFElem>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![NFElem::zero(&self.field); self.cols];
                v[f] = NFElem::one(&self.field);
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f);
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[NFElem]) -> Option<Vec<NFElem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![NFElem::zero(&self.field); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, NFElem::one(&self.field));
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> NFElem {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = NFElem::one(&self.field);
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return NFElem::zero(&self.field);
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) * &inv;
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }
}

/// Solves a square rational system; `None` when singular.
pub(crate) fn solve_rational(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let inv = m[c][c].recip();
        for j in c..n {
            m[c][j] = &m[c][j] * &inv;
        }
        rhs[c] = &rhs[c] * &inv;
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..n {
                    let d = &f * &m[c][j];
                    m[i][j] -= d;
                }
                let d = &f * &rhs[c];
                rhs[i] -= d;
            }
        }
    }
    debug_assert!(m.iter().enumerate().all(|(i, r)| r[i].is_one()));
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{q, z8};
    use proptest::prelude::*;

    fn qm(rows: &[&[i64]]) -> Matrix {
        let f = q();
        Matrix::from_rows(&f, rows.iter().map(|r| r.iter().map(|&x| NFElem::from_int(&f, x)).collect()).collect())
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(Matrix::identity(&q(), 2).kernel_basis().is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let k = Matrix::zeros(&q(), 2, 2).kernel_basis();
        let f = q();
        assert_eq!(k, vec![
            vec![NFElem::one(&f), NFElem::zero(&f)],
            vec![NFElem::zero(&f), NFElem::one(&f)]
        ]);
    }

    #[test]
    fn kernel_of_small_matrix() {
        let k = qm(&[&[1, 1, 0], &[0, 0, 1]]).kernel_basis();
        let f = q();
        assert_eq!(k, vec![vec![NFElem::from_int(&f, -1), NFElem::one(&f), NFElem::zero(&f)]]);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = qm(&[&[2, 3], &[1, 2]]);
        assert_eq!(m.det(), NFElem::one(&q()));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&q(), 2));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_over_z8() {
        let f = crate::exact::field::qz8();
        let m = Matrix::from_rows(&f, vec![vec![z8::i(), z8::one()], vec![z8::sqrt2(), z8::zero()]]);
        let b = vec![z8::int(3), z8::int(1)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    proptest! {
        #[test]
        fn kernel_vectors_annihilate(entries in proptest::collection::vec(-3i64..4, 12), r in 1usize..4) {
            let cols = 12 / r.max(1);
            let rows = 12 / cols;
            let f = q();
            let m = Matrix::from_rows(&f, (0..rows).map(|i| (0..cols).map(|j| NFElem::from_int(&f, entries[i * cols + j])).collect()).collect());
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), cols - m.rank());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(NFElem::is_zero));
            }
        }
    }
}
