//! Dense matrices over one layer of a tower, with exact Gaussian
//! elimination: rank, kernels, and linear solves.

use super::{FieldElement, FieldTower};
use crate::error::Result;

/// Row-major dense matrix; entries all live at the same tower layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<FieldElement>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    /// Columns given as coefficient vectors of length `rows`; short columns
    /// are padded with `zero()`.
    pub fn from_columns<F: Fn() -> FieldElement>(
        rows: usize,
        columns: &[Vec<FieldElement>],
        zero: F,
    ) -> Self {
        let cols = columns.len();
        let mut data = vec![zero(); rows * cols];
        for (j, col) in columns.iter().enumerate() {
            assert!(col.len() <= rows);
            for (i, v) in col.iter().enumerate() {
                data[i * cols + j] = v.clone();
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zero_matrix(tw: &FieldTower, layer: usize, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![tw.zero_at(layer); rows * cols],
        }
    }

    pub fn identity(tw: &FieldTower, layer: usize, n: usize) -> Self {
        let mut m = Self::zero_matrix(tw, layer, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = tw.one_at(layer);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }

    pub fn matmul(&self, tw: &FieldTower, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let layer = self.data[0].layer();
        let mut out = Mat::zero_matrix(tw, layer, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.at(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let t = tw.mul(a, b);
                    *out.at_mut(i, j) = tw.add(out.at(i, j), &t);
                }
            }
        }
        out
    }

    /// Matrix * column vector.
    pub fn matvec(&self, tw: &FieldTower, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len());
        let layer = self.data[0].layer();
        let mut out = vec![tw.zero_at(layer); self.rows];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                let t = tw.mul(a, vj);
                out[i] = tw.add(&out[i], &t);
            }
        }
        out
    }

    /// Reduce in place to reduced row echelon form; returns the pivot
    /// columns in order. Pivot choice is deterministic: first row with a
    /// nonzero entry in the scanned column.
    pub fn rref(&mut self, tw: &FieldTower) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    let a = self.at(p, j).clone();
                    let b = std::mem::replace(self.at_mut(r, j), a);
                    *self.at_mut(p, j) = b;
                }
            }
            let inv = tw.inv(self.at(r, c))?;
            for j in c..self.cols {
                if self.at(r, j).is_zero() {
                    continue;
                }
                *self.at_mut(r, j) = tw.mul(self.at(r, j), &inv);
            }
            for i in 0..self.rows {
                if i == r || self.at(i, c).is_zero() {
                    continue;
                }
                let f = self.at(i, c).clone();
                for j in c..self.cols {
                    if self.at(r, j).is_zero() {
                        continue;
                    }
                    let t = tw.mul(&f, self.at(r, j));
                    *self.at_mut(i, j) = tw.sub(self.at(i, j), &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    pub fn rank(&self, tw: &FieldTower) -> Result<usize> {
        let mut m = self.clone();
        Ok(m.rref(tw)?.len())
    }

    /// Dimension of the right kernel.
    pub fn kernel_dim(&self, tw: &FieldTower) -> Result<usize> {
        Ok(self.cols - self.rank(tw)?)
    }

    /// One deterministic nonzero kernel vector: the first free column of
    /// the reduced echelon form is set to one, the other free columns to
    /// zero. Returns `None` when the kernel is trivial.
    pub fn kernel_vector(&self, tw: &FieldTower) -> Result<Option<Vec<FieldElement>>> {
        Ok(self.kernel_basis_inner(tw, true)?.pop())
    }

    /// A basis of the right kernel (one vector per free column).
    pub fn kernel_basis(&self, tw: &FieldTower) -> Result<Vec<Vec<FieldElement>>> {
        self.kernel_basis_inner(tw, false)
    }

    fn kernel_basis_inner(
        &self,
        tw: &FieldTower,
        first_only: bool,
    ) -> Result<Vec<Vec<FieldElement>>> {
        let layer = self.data[0].layer();
        let mut m = self.clone();
        let pivots = m.rref(tw)?;
        let mut out = Vec::new();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![tw.zero_at(layer); self.cols];
            v[free] = tw.one_at(layer);
            for (r, &pc) in pivots.iter().enumerate() {
                // row r reads: x_pc + sum over free m[r][j] x_j = 0
                v[pc] = tw.neg(m.at(r, free));
            }
            out.push(v);
            if first_only {
                break;
            }
        }
        Ok(out)
    }

    /// Solve `self * X = rhs` for a square invertible `self`.
    /// Returns `None` when `self` is singular.
    pub fn solve(&self, tw: &FieldTower, rhs: &Mat) -> Result<Option<Mat>> {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat {
            rows: n,
            cols: n + rhs.cols,
            data: {
                let mut d = Vec::with_capacity(n * (n + rhs.cols));
                for i in 0..n {
                    d.extend_from_slice(self.row(i));
                    d.extend_from_slice(rhs.row(i));
                }
                d
            },
        };
        let pivots = aug.rref(tw)?;
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Ok(None);
        }
        let mut out = Mat::zero_matrix(tw, self.data[0].layer(), n, rhs.cols);
        for i in 0..n {
            for j in 0..rhs.cols {
                *out.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Ok(Some(out))
    }
}

/// Incremental echelon tracker: answers "is this coordinate vector in the
/// span of what was inserted so far".
pub struct SpanTracker {
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl Default for SpanTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl SpanTracker {
    pub fn new() -> Self {
        SpanTracker { rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, tw: &FieldTower, v: &mut Vec<FieldElement>) {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (j, rj) in row.iter().enumerate() {
                if rj.is_zero() {
                    continue;
                }
                let t = tw.mul(&f, rj);
                v[j] = tw.sub(&v[j], &t);
            }
        }
    }

    pub fn contains(&self, tw: &FieldTower, coords: &[FieldElement]) -> bool {
        let mut v = coords.to_vec();
        self.reduce(tw, &mut v);
        v.iter().all(|c| c.is_zero())
    }

    /// Insert a vector; returns false when it was already in the span.
    pub fn insert(&mut self, tw: &FieldTower, coords: &[FieldElement]) -> Result<bool> {
        let mut v = coords.to_vec();
        self.reduce(tw, &mut v);
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return Ok(false);
        };
        let inv = tw.inv(&v[p])?;
        for c in v.iter_mut() {
            if !c.is_zero() {
                *c = tw.mul(c, &inv);
            }
        }
        self.rows.push((p, v));
        Ok(true)
    }
}
