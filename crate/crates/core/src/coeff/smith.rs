//! Diagonal normal form `P * A * Q = D` over the supported rings.
//!
//! Pivots are chosen deterministically: smallest pivot key (absolute value
//! over `Z`, valuation over chain rings), then lowest row, then lowest
//! column. Over chain rings and fields a pivot of least valuation divides
//! every remaining entry, so each stage clears its row and column in one
//! pass; over `Z` the stage repeats with the remainders until it does.

use super::matrix::Matrix;
use super::ring::{Elem, Ring};

/// Which transforms to accumulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Track {
    pub left: bool,
    pub right: bool,
}

impl Track {
    pub const BOTH: Track = Track { left: true, right: true };
    pub const NONE: Track = Track { left: false, right: false };
    pub const LEFT: Track = Track { left: true, right: false };
    pub const RIGHT: Track = Track { left: false, right: true };
}

/// Output of [`normal_form`]. `p * a * q = d`, with `p_inv`, `q_inv` the
/// inverses. Untracked transforms are `None`.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub d: Matrix,
    pub p: Option<Matrix>,
    pub p_inv: Option<Matrix>,
    pub q: Option<Matrix>,
    pub q_inv: Option<Matrix>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl NormalForm {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Elem> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Left factor `L = P^{-1}` with `A = L * D * R`.
    pub fn left(&self) -> Option<&Matrix> {
        self.p_inv.as_ref()
    }

    /// Right factor `R = Q^{-1}` with `A = L * D * R`.
    pub fn right(&self) -> Option<&Matrix> {
        self.q_inv.as_ref()
    }
}

struct State<'a> {
    ring: &'a Ring,
    d: Matrix,
    p: Option<Matrix>,
    p_inv: Option<Matrix>,
    q: Option<Matrix>,
    q_inv: Option<Matrix>,
}

impl State<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap_rows(a, b);
        if let Some(p) = &mut self.p {
            p.swap_rows(a, b);
        }
        if let Some(pi) = &mut self.p_inv {
            pi.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap_cols(a, b);
        if let Some(q) = &mut self.q {
            q.swap_cols(a, b);
        }
        if let Some(qi) = &mut self.q_inv {
            qi.swap_rows(a, b);
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &Elem) {
        let ring = self.ring;
        self.d.add_row_multiple(ring, dst, src, c);
        if let Some(p) = &mut self.p {
            p.add_row_multiple(ring, dst, src, c);
        }
        if let Some(pi) = &mut self.p_inv {
            pi.add_col_multiple(ring, src, dst, &ring.neg(c));
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &Elem) {
        let ring = self.ring;
        self.d.add_col_multiple(ring, dst, src, c);
        if let Some(q) = &mut self.q {
            q.add_col_multiple(ring, dst, src, c);
        }
        if let Some(qi) = &mut self.q_inv {
            qi.add_row_multiple(ring, src, dst, &ring.neg(c));
        }
    }

    fn scale_row(&mut self, r: usize, u: &Elem) {
        let ring = self.ring;
        let inv = ring.inverse(u).expect("scaling by a unit");
        self.d.scale_row(ring, r, u);
        if let Some(p) = &mut self.p {
            p.scale_row(ring, r, u);
        }
        if let Some(pi) = &mut self.p_inv {
            pi.scale_col(ring, r, &inv);
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(num_bigint::BigInt, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                if let Some(k) = self.ring.pivot_key(&self.d[(i, j)]) {
                    if best.as_ref().map_or(true, |(bk, _, _)| &k < bk) {
                        best = Some((k, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Diagonal normal form with successive divisibility. Diagonal entries are
/// canonical associates (`|d|` over `Z`, `pi^v` over chain rings, `1` over
/// fields). Deterministic for a fixed input.
pub fn normal_form(ring: &Ring, a: &Matrix, track: Track) -> NormalForm {
    let (rows, cols) = a.shape();
    let mut st = State {
        ring,
        d: a.clone(),
        p: track.left.then(|| Matrix::identity(ring, rows)),
        p_inv: track.left.then(|| Matrix::identity(ring, rows)),
        q: track.right.then(|| Matrix::identity(ring, cols)),
        q_inv: track.right.then(|| Matrix::identity(ring, cols)),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = st.find_pivot(t) else {
                return finish(st, rank);
            };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);
            let pivot = st.d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let x = st.d[(i, t)].clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let (q, r) = ring.div_rem(&x, &pivot);
                st.add_row(i, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let x = st.d[(t, j)].clone();
                if ring.is_zero(&x) {
                    continue;
                }
                let (q, r) = ring.div_rem(&x, &pivot);
                st.add_col(j, t, &ring.neg(&q));
                if !ring.is_zero(&r) {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // successive divisibility (only ever triggers over Z)
            let offending = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !ring.divides(&pivot, &st.d[(i, j)]))
            });
            if let Some(i) = offending {
                st.add_row(t, i, &ring.one());
                continue;
            }
            break;
        }
        let u = ring.normalizing_unit(&st.d[(t, t)]);
        if !ring.is_one(&u) {
            st.scale_row(t, &u);
        }
        rank += 1;
    }
    finish(st, rank)
}

fn finish(st: State<'_>, rank: usize) -> NormalForm {
    NormalForm { d: st.d, p: st.p, p_inv: st.p_inv, q: st.q, q_inv: st.q_inv, rank }
}
