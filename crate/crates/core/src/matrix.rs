//! Dense matrices over `F_q` and per-block rank tables.

use thiserror::Error;

use crate::field::{Field, FiniteField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration of {needed} items exceeds the cap of {cap}")]
pub struct CapExceeded {
    pub needed: u128,
    pub cap: u64,
}

/// Default cap on enumerated vectors or block matrices.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Row-major matrix of field element codes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// `rows x cols` matrix with ones on the first `rank` diagonal entries.
    pub fn diagonal(rows: usize, cols: usize, rank: usize) -> Self {
        assert!(rank <= rows.min(cols));
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rank {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Decodes a block index: column `j` is the base-`q` digit string
    /// `(index / q^(rows*j)) mod q^rows`, digit `r` holding row `r`.
    pub fn from_block_index(mut index: u64, rows: usize, cols: usize, q: u64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m.set(r, c, (index % q) as u32);
                index /= q;
            }
        }
        m
    }

    pub fn to_block_index(&self, q: u64) -> u64 {
        let mut index = 0u64;
        for c in (0..self.cols).rev() {
            for r in (0..self.rows).rev() {
                index = index * q + self.get(r, c) as u64;
            }
        }
        index
    }
}

/// Rank over the base field by Gaussian elimination.
pub fn rank_over_base(field: &FiniteField, matrix: &Matrix) -> usize {
    let mut m = matrix.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m.get(r, col) != 0) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                let tmp = m.get(pivot, c);
                m.set(pivot, c, m.get(rank, c));
                m.set(rank, c, tmp);
            }
        }
        let inv = field.inv(m.get(rank, col));
        for r in rank + 1..rows {
            let lead = m.get(r, col);
            if lead == 0 {
                continue;
            }
            let factor = field.mul(lead, inv);
            for c in col..cols {
                let v = field.sub(m.get(r, c), field.mul(factor, m.get(rank, c)));
                m.set(r, c, v);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of every `rows x cols` matrix over `F_q`, indexed by block index.
#[derive(Debug, Clone)]
pub struct BlockRankTable {
    q: u64,
    rows: usize,
    cols: usize,
    ranks: Vec<u8>,
}

impl BlockRankTable {
    pub fn new(
        field: &FiniteField,
        rows: usize,
        cols: usize,
        cap: u64,
    ) -> Result<Self, CapExceeded> {
        let q = field.order();
        let size = (q as u128).pow((rows * cols) as u32);
        if size > cap as u128 {
            return Err(CapExceeded { needed: size, cap });
        }
        let ranks = (0..size as u64)
            .map(|idx| {
                let m = Matrix::from_block_index(idx, rows, cols, q);
                rank_over_base(field, &m) as u8
            })
            .collect();
        Ok(BlockRankTable {
            q,
            rows,
            cols,
            ranks,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of block matrices, `q^(rows*cols)`.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    #[inline]
    pub fn rank(&self, index: u64) -> u8 {
        self.ranks[index as usize]
    }
}
