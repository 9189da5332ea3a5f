//! Binary linear algebra over GF(2).
//!
//! Backs the linear encoders (the matrices `A`, `A^-1`, `R`) and the
//! stabilizer reductions. Matrices are dense and row-major with 64-bit word
//! packing; everything here is small enough that Gaussian elimination with a
//! deterministic pivot rule is the right tool.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("inverse check failed: A * Ainv != I")]
    InconsistentInverse,
}

/// Dense bit matrix, row-major, 64-bit words per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Strictly lower-triangular matrix of ones (zero diagonal).
    pub fn build_r(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..i {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &bit) in row.iter().enumerate() {
                m.set(i, j, bit);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = r * self.words_per_row + c / 64;
        let b = c % 64;
        if bit {
            self.data[w] |= 1 << b;
        } else {
            self.data[w] &= !(1 << b);
        }
    }


    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (src * self.words_per_row, dst * self.words_per_row);
        for w in 0..self.words_per_row {
            let v = self.data[a + w];
            self.data[b + w] ^= v;
        }
    }

    /// Column indices of the set bits in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Row indices of the set bits in column `c`, ascending. Implemented via
    /// the transpose so callers that need many columns pay the cost once.
    pub fn col_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product mod 2.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != rhs.rows {
            return Err(Gf2Error::DimensionMismatch(self.cols, rhs.rows));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let (a, b) = (k * rhs.words_per_row, i * out.words_per_row);
                    for w in 0..rhs.words_per_row {
                        out.data[b + w] ^= rhs.data[a + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product mod 2; `v` as bit slice of length `cols`.
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| v[c])
                    .fold(false, |acc, c| acc ^ self.get(r, c))
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c)))
    }

    /// GF(2) inverse by Gauss-Jordan elimination. Pivots are chosen as the
    /// lowest row index so results are reproducible.
    pub fn invert(&self) -> Result<BitMatrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| work.get(r, col))
                .ok_or(Gf2Error::Singular)?;
            if pivot != col {
                work.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            for r in 0..n {
                if r != col && work.get(r, col) {
                    work.xor_row_into(col, r);
                    inv.xor_row_into(col, r);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words_per_row {
            self.data
                .swap(a * self.words_per_row + w, b * self.words_per_row + w);
        }
    }

    /// Rank over GF(2); leaves `self` untouched.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            if let Some(pivot) = (rank..self.rows).find(|&r| work.get(r, col)) {
                work.swap_rows(pivot, rank);
                for r in 0..self.rows {
                    if r != rank && work.get(r, col) {
                        work.xor_row_into(rank, r);
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

/// Update, flip and parity sets per mode, 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSets {
    pub update: Vec<Vec<usize>>,
    pub flip: Vec<Vec<usize>>,
    pub parity: Vec<Vec<usize>>,
}

/// Derives the flip, parity and update sets from an encoder matrix pair:
/// flip from the rows of `A`, parity from the rows of `R A`, update from the
/// columns of `A^-1`.
pub fn derive_sets(a: &BitMatrix, ainv: &BitMatrix) -> Result<IndexSets, Gf2Error> {
    if a.rows() != a.cols() {
        return Err(Gf2Error::NotSquare(a.rows(), a.cols()));
    }
    if !a.mul(ainv)?.is_identity() {
        return Err(Gf2Error::InconsistentInverse);
    }
    let n = a.rows();
    let r = BitMatrix::build_r(n);
    let ra = r.mul(a)?;
    let ainv_t = ainv.transpose();
    let sets = IndexSets {
        flip: (0..n).map(|j| a.row_support(j)).collect(),
        parity: (0..n).map(|j| ra.row_support(j)).collect(),
        update: (0..n).map(|j| ainv_t.row_support(j)).collect(),
    };
    Ok(sets)
}
