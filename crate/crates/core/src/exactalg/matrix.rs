use std::fmt;

use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense matrix over the working field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    /// Lower shift: e_i ↦ e_{i+1}, the action of t on ℂ[t]/t^n in the basis 1, t, ….
    pub fn shift(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m.set(i, i - 1, Scalar::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] += &(a * b);
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))).collect()
    }

    pub fn pow(&self, mut k: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn commutes(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Reduced row echelon form and the pivot columns. Pivots are chosen as
    /// the first nonzero entry, which is exact and deterministic.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
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
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column, with a 1 in
    /// that column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(blocks: &[&ExactMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Smallest k ≥ 1 with A^k = 0, or `None` when A^n ≠ 0 for n = size.
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert!(self.is_square());
        if self.rows == 0 {
            return Some(0);
        }
        let mut p = self.clone();
        for k in 1..=self.rows {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    /// Entries flattened in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Evaluate `p(A_1, …, A_m)` for pairwise commuting square matrices.
pub fn eval_poly_at_matrices(p: &Poly, mats: &[ExactMatrix]) -> Result<ExactMatrix> {
    if mats.len() != p.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables evaluated at {} matrices",
            p.nvars(),
            mats.len()
        )));
    }
    let n = mats.first().map_or(0, |m| m.rows());
    if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(Error::DimensionMismatch("action matrices must be square of equal size".into()));
    }
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            if !mats[i].commutes(&mats[j]) {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let mut powers: Vec<Vec<ExactMatrix>> = mats.iter().map(|m| vec![ExactMatrix::identity(n), m.clone()]).collect();
    let mut acc = ExactMatrix::zeros(n, n);
    for (e, c) in p.terms() {
        let mut term = ExactMatrix::identity(n).scale(c);
        for (k, &d) in e.iter().enumerate() {
            while powers[k].len() <= d as usize {
                let next = powers[k].last().unwrap().mul(&mats[k]);
                powers[k].push(next);
            }
            if d > 0 {
                term = term.mul(&powers[k][d as usize]);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}
