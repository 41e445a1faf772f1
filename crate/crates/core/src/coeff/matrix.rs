use std::fmt;

use super::ring::{Elem, Ring};

/// Dense row-major matrix of ring elements. Arithmetic takes the ring as an
/// explicit argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(ring: &Ring, entries: &[Elem]) -> Self {
        let mut m = Self::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(ring: &Ring, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| ring.from_i64(x))).collect();
        Matrix::from_vec(r, c, data)
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

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self, ring: &Ring) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if ring.is_zero(b) {
                        continue;
                    }
                    let t = ring.mul(a, b);
                    let cur = &mut out.data[i * other.cols + j];
                    *cur = ring.add(cur, &t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ring: &Ring, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(ring.zero(), |acc, (a, b)| {
                    if ring.is_zero(a) || ring.is_zero(b) {
                        acc
                    } else {
                        ring.add(&acc, &ring.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, ring: &Ring, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ring: &Ring, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape());
        let data = self.data.iter().zip(&other.data).map(|(a, b)| ring.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self, ring: &Ring) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.neg(a)).collect() }
    }

    pub fn scale(&self, ring: &Ring, c: &Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| ring.mul(a, c)).collect() }
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols, data }
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack cols");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack_all(ring: &Ring, rows: usize, parts: &[&Matrix]) -> Matrix {
        parts.iter().fold(Matrix::zeros(ring, rows, 0), |acc, m| acc.hstack(m))
    }

    pub fn block_diagonal(ring: &Ring, blocks: &[&Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.row(i)[c0..c0 + cols]);
        }
        Matrix { rows, cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    /// Kronecker product with row index `i * b.rows + k` and column index
    /// `j * b.cols + l`.
    pub fn kronecker(&self, ring: &Ring, b: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(ring, self.rows * b.rows, self.cols * b.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        out[(i * b.rows + k, j * b.cols + l)] = ring.mul(a, &b[(k, l)]);
                    }
                }
            }
        }
        out
    }

    // elementary operations used by the normal form

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub(crate) fn add_row_multiple(&mut self, ring: &Ring, dst: usize, src: usize, c: &Elem) {
        if ring.is_zero(c) {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if ring.is_zero(s) {
                continue;
            }
            let t = ring.mul(c, s);
            let d = &mut self.data[dst * self.cols + j];
            *d = ring.add(d, &t);
        }
    }

    /// `col[dst] += c * col[src]`.
    pub(crate) fn add_col_multiple(&mut self, ring: &Ring, dst: usize, src: usize, c: &Elem) {
        if ring.is_zero(c) {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if ring.is_zero(s) {
                continue;
            }
            let t = ring.mul(c, s);
            let d = &mut self.data[i * self.cols + dst];
            *d = ring.add(d, &t);
        }
    }

    pub(crate) fn scale_row(&mut self, ring: &Ring, r: usize, c: &Elem) {
        for j in 0..self.cols {
            let d = &mut self.data[r * self.cols + j];
            *d = ring.mul(d, c);
        }
    }

    pub(crate) fn scale_col(&mut self, ring: &Ring, col: usize, c: &Elem) {
        for i in 0..self.rows {
            let d = &mut self.data[i * self.cols + col];
            *d = ring.mul(d, c);
        }
    }

    pub fn display<'a>(&'a self, ring: &'a Ring) -> MatrixDisplay<'a> {
        MatrixDisplay { m: self, ring }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Elem;

    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

pub struct MatrixDisplay<'a> {
    m: &'a Matrix,
    ring: &'a Ring,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.m.row(i).iter().map(|x| self.ring.format_elem(x)).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
