//! The space `F_{q^m}^n` in matrix representation.
//!
//! A vector is an `m x n` matrix over `F_q`: column `j` holds the coordinates
//! of the `j`-th entry over `F_q`. Block `i` is the `m x eta` slice of columns
//! `i*eta .. (i+1)*eta`. Enumerated vectors are addressed by an index whose
//! base-`q^m` digits are the column codes, so every block structure on the
//! same `(q, m, n)` shares one indexing and reshaping is free.

use std::sync::Arc;

use thiserror::Error;

use crate::field::{ExtensionField, Field, FieldError, FiniteField};
use crate::matrix::{rank_over_base, BlockRankTable, CapExceeded, Matrix};
use crate::params::CodeParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A vector of `F_{q^m}^n` as `ell` blocks of `m x eta` matrices over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    params: CodeParams,
    blocks: Vec<Matrix>,
}

impl BlockVector {
    pub fn zero(params: CodeParams) -> Self {
        let blocks = (0..params.ell())
            .map(|_| Matrix::zeros(params.m() as usize, params.eta() as usize))
            .collect();
        BlockVector { params, blocks }
    }

    /// Panics unless there are `ell` blocks of shape `m x eta`.
    pub fn from_blocks(params: CodeParams, blocks: Vec<Matrix>) -> Self {
        assert_eq!(blocks.len(), params.ell() as usize, "block count");
        for b in &blocks {
            assert_eq!(
                (b.rows(), b.cols()),
                (params.m() as usize, params.eta() as usize),
                "block shape"
            );
        }
        BlockVector { params, blocks }
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &Matrix {
        &self.blocks[i]
    }

    /// Entry in row `r` of overall column `col`.
    pub fn entry(&self, r: usize, col: usize) -> u32 {
        let eta = self.params.eta() as usize;
        self.blocks[col / eta].get(r, col % eta)
    }

    /// Same vector with its columns regrouped under `target`'s block structure.
    pub fn regrouped(&self, target: CodeParams) -> BlockVector {
        assert_eq!(
            (target.q(), target.m(), target.n()),
            (self.params.q(), self.params.m(), self.params.n()),
            "regrouping must keep q, m and n"
        );
        let m = target.m() as usize;
        let eta = target.eta() as usize;
        let blocks = (0..target.ell() as usize)
            .map(|i| {
                let mut b = Matrix::zeros(m, eta);
                for c in 0..eta {
                    for r in 0..m {
                        b.set(r, c, self.entry(r, i * eta + c));
                    }
                }
                b
            })
            .collect();
        BlockVector {
            params: target,
            blocks,
        }
    }

    /// Sum-rank weight: the sum of the block ranks over `F_q`.
    pub fn sum_rank_weight(&self, field: &FiniteField) -> u32 {
        self.blocks
            .iter()
            .map(|b| rank_over_base(field, b) as u32)
            .sum()
    }
}

/// Decodes an index of the common indexing without building a [`Space`].
pub fn decode_index(params: CodeParams, mut index: u64) -> BlockVector {
    let (m, eta) = (params.m() as usize, params.eta() as usize);
    let block_order = params.q().pow((m * eta) as u32);
    let blocks = (0..params.ell())
        .map(|_| {
            let b = Matrix::from_block_index(index % block_order, m, eta, params.q());
            index /= block_order;
            b
        })
        .collect();
    BlockVector::from_blocks(params, blocks)
}

/// Sum-rank weight of a block vector.
pub fn sum_rank_weight(field: &FiniteField, v: &BlockVector) -> u32 {
    v.sum_rank_weight(field)
}

/// Digit-wise difference of two positional codes with `digits` base-`q` digits.
pub(crate) fn sub_codes(field: &FiniteField, a: u64, b: u64, digits: u32) -> u64 {
    if field.characteristic() == 2 {
        return a ^ b;
    }
    let q = field.order();
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..digits {
        let d = field.sub((a % q) as u32, (b % q) as u32) as u64;
        out += d * place;
        place *= q;
        a /= q;
        b /= q;
    }
    out
}

pub(crate) fn add_codes(field: &FiniteField, a: u64, b: u64, digits: u32) -> u64 {
    if field.characteristic() == 2 {
        return a ^ b;
    }
    let q = field.order();
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..digits {
        let d = field.add((a % q) as u32, (b % q) as u32) as u64;
        out += d * place;
        place *= q;
        a /= q;
        b /= q;
    }
    out
}

/// Enumerable space with a cached block-rank table.
#[derive(Debug, Clone)]
pub struct Space {
    params: CodeParams,
    field: Arc<FiniteField>,
    ranks: Arc<BlockRankTable>,
    block_order: u64,
    size: u64,
}

impl Space {
    /// Fails when `q^(mn)` exceeds `cap`.
    pub fn new(params: CodeParams, cap: u64) -> Result<Space, SpaceError> {
        let field = Arc::new(FiniteField::with_order(params.q())?);
        Self::with_field(params, field, cap)
    }

    pub fn with_field(
        params: CodeParams,
        field: Arc<FiniteField>,
        cap: u64,
    ) -> Result<Space, SpaceError> {
        let digits = params.m() * params.n();
        let size = (params.q() as u128)
            .checked_pow(digits)
            .unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(CapExceeded { needed: size, cap }.into());
        }
        let ranks = Arc::new(BlockRankTable::new(
            &field,
            params.m() as usize,
            params.eta() as usize,
            cap,
        )?);
        let block_order = ranks.len() as u64;
        Ok(Space {
            params,
            field,
            ranks,
            block_order,
            size: size as u64,
        })
    }

    /// The same vectors under the block structure with `ell'` blocks.
    pub fn regrouped(&self, new_ell: u32) -> Option<Result<Space, SpaceError>> {
        let target = self.params.reshaped(new_ell)?;
        Some(Space::with_field(
            target,
            self.field.clone(),
            self.size.max(1),
        ))
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<FiniteField> {
        self.field.clone()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    fn digits(&self) -> u32 {
        self.params.m() * self.params.n()
    }

    #[inline]
    pub fn weight(&self, mut index: u64) -> u32 {
        let mut w = 0;
        for _ in 0..self.params.ell() {
            w += self.ranks.rank(index % self.block_order) as u32;
            index /= self.block_order;
        }
        w
    }

    /// Per-block ranks of a vector.
    pub fn block_ranks(&self, mut index: u64) -> Vec<u32> {
        (0..self.params.ell())
            .map(|_| {
                let r = self.ranks.rank(index % self.block_order) as u32;
                index /= self.block_order;
                r
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_codes(&self.field, a, b, self.digits())
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_codes(&self.field, a, b, self.digits())
    }

    #[inline]
    pub fn distance(&self, a: u64, b: u64) -> u32 {
        self.weight(self.sub(a, b))
    }

    pub fn vector(&self, index: u64) -> BlockVector {
        decode_index(self.params, index)
    }

    /// All vectors of weight one: a rank-one matrix in a single block.
    /// Distance is the length of a shortest path using these steps.
    pub fn unit_steps(&self) -> Vec<u64> {
        let mut steps = Vec::new();
        let mut place = 1u64;
        for _ in 0..self.params.ell() {
            for b in 0..self.block_order {
                if self.ranks.rank(b) == 1 {
                    steps.push(b * place);
                }
            }
            place = place.saturating_mul(self.block_order);
        }
        steps
    }

    pub fn index_of(&self, v: &BlockVector) -> u64 {
        assert_eq!(
            (v.params().q(), v.params().m(), v.params().n()),
            (self.params.q(), self.params.m(), self.params.n())
        );
        let v = if v.params() == self.params {
            v.clone()
        } else {
            v.regrouped(self.params)
        };
        v.blocks().iter().rev().fold(0, |acc, b| {
            acc * self.block_order + b.to_block_index(self.params.q())
        })
    }

    /// Column `j` of a vector as an element code of `F_{q^m}`.
    pub fn coordinate(&self, index: u64, j: u32) -> u32 {
        let qm = self.params.ext_order();
        ((index / qm.pow(j)) % qm) as u32
    }

    pub fn from_coordinates(&self, coords: &[u32]) -> u64 {
        let qm = self.params.ext_order();
        coords.iter().rev().fold(0, |acc, &c| acc * qm + c as u64)
    }

    /// Multiplies every coordinate by `alpha` in `F_{q^m}`.
    pub fn scale(&self, ext: &ExtensionField, alpha: u32, index: u64) -> u64 {
        let coords: Vec<u32> = (0..self.params.n())
            .map(|j| ext.mul(alpha, self.coordinate(index, j)))
            .collect();
        self.from_coordinates(&coords)
    }

    /// Extension field `F_{q^m}` compatible with this space's coordinates.
    pub fn extension_field(&self) -> Result<ExtensionField, FieldError> {
        ExtensionField::new((*self.field).clone(), self.params.m())
    }
}
