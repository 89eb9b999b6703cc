//! Sphere, ball and ball-intersection volumes in the sum-rank metric.
//!
//! Sum-rank weight `t` splits across the blocks as an ordered tuple of block
//! ranks, each at most `mu`. The sphere volume is the sum over these
//! bounded compositions of the product of per-block rank counts, evaluated
//! here as an `ell`-fold convolution of the per-block count vector.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{binomial, num_matrices_of_rank, ExactInt};
use crate::field::{FieldError, FiniteField};
use crate::matrix::{BlockRankTable, CapExceeded, Matrix, DEFAULT_ENUMERATION_CAP};
use crate::params::CodeParams;
use crate::space::{sub_codes, BlockVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("weight distribution {parts:?} does not fit {ell} blocks of rank at most {mu}")]
    InvalidDistribution { parts: Vec<u32>, ell: u32, mu: u32 },
}

/// Ordered tuple of bounded parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    parts: Vec<u32>,
    total: u32,
}

/// Per-block ranks of a ball center.
pub type WeightDistribution = Composition;

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        let total = parts.iter().sum();
        Composition { parts, total }
    }

    pub fn zero(ell: u32) -> Self {
        Composition::new(vec![0; ell as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn fits(&self, params: &CodeParams) -> bool {
        self.parts.len() == params.ell() as usize && self.parts.iter().all(|&p| p <= params.mu())
    }

    fn check(&self, params: &CodeParams) -> Result<(), GeometryError> {
        if self.fits(params) {
            Ok(())
        } else {
            Err(GeometryError::InvalidDistribution {
                parts: self.parts.clone(),
                ell: params.ell(),
                mu: params.mu(),
            })
        }
    }
}

/// Number of `ell`-tuples with entries in `[0, mu]` summing to `t`, by
/// inclusion-exclusion over the parts that exceed `mu`:
/// `sum_i (-1)^i C(ell, i) C(t - (mu+1) i + ell - 1, ell - 1)`.
pub fn count_bounded_compositions(t: u32, ell: u32, mu: u32) -> ExactInt {
    assert!(ell >= 1, "at least one part");
    let mut acc = BigInt::zero();
    for i in 0..=ell as i64 {
        let top = t as i64 - (mu as i64 + 1) * i + ell as i64 - 1;
        if top < 0 {
            break;
        }
        let term = BigInt::from(binomial(ell as u64, i) * binomial(top as u64, ell as i64 - 1));
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    assert!(!acc.is_negative());
    acc.to_biguint().expect("nonnegative")
}

/// Iterator over bounded compositions in decreasing lexicographic order.
#[derive(Debug, Clone)]
pub struct BoundedCompositions {
    mu: u32,
    current: Option<Vec<u32>>,
}

/// Fills `parts[from..]` greedily (largest first) with `remaining`; false if
/// it does not fit.
fn fill_greedy(parts: &mut [u32], from: usize, mut remaining: u32, mu: u32) -> bool {
    for p in parts[from..].iter_mut() {
        *p = remaining.min(mu);
        remaining -= *p;
    }
    remaining == 0
}

pub fn enumerate_bounded_compositions(t: u32, ell: u32, mu: u32) -> BoundedCompositions {
    let mut parts = vec![0; ell as usize];
    let current = fill_greedy(&mut parts, 0, t, mu).then_some(parts);
    BoundedCompositions { mu, current }
}

impl Iterator for BoundedCompositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let parts = self.current.take()?;
        let out = Composition::new(parts.clone());
        // Successor: rightmost position i (not last) with parts[i] > 0 whose
        // suffix can absorb one more unit; decrement it and refill greedily.
        let mut next = parts;
        let len = next.len();
        let mut suffix_sum: u32 = next.last().copied().unwrap_or(0);
        for i in (0..len.saturating_sub(1)).rev() {
            let capacity = (len - 1 - i) as u32 * self.mu;
            if next[i] > 0 && suffix_sum < capacity {
                next[i] -= 1;
                let ok = fill_greedy(&mut next, i + 1, suffix_sum + 1, self.mu);
                debug_assert!(ok);
                self.current = Some(next);
                break;
            }
            suffix_sum += next[i];
        }
        Some(out)
    }
}

/// `[NM_q(eta, m, j)]` for `j = 0..=mu`: rank counts of one block.
pub fn block_rank_counts(params: &CodeParams) -> Vec<ExactInt> {
    (0..=params.mu())
        .map(|j| num_matrices_of_rank(params.m() as u64, params.eta() as u64, j as i64, params.q()))
        .collect()
}

/// All sphere volumes `Vol_S(0..=mu*ell)` by repeated convolution.
pub fn sphere_volumes(params: &CodeParams) -> Vec<ExactInt> {
    let block = block_rank_counts(params);
    let mut acc = vec![BigUint::from(1u32)];
    for _ in 0..params.ell() {
        let mut next = vec![BigUint::zero(); acc.len() + block.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in block.iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

/// Number of vectors of sum-rank weight exactly `t`.
pub fn sphere_volume(params: &CodeParams, t: u32) -> ExactInt {
    sphere_volumes(params)
        .into_iter()
        .nth(t as usize)
        .unwrap_or_default()
}

/// Sphere volume as a sum over bounded compositions of block-count products.
pub fn sphere_volume_by_compositions(params: &CodeParams, t: u32) -> ExactInt {
    let block = block_rank_counts(params);
    enumerate_bounded_compositions(t, params.ell(), params.mu())
        .map(|c| {
            c.parts()
                .iter()
                .map(|&p| block[p as usize].clone())
                .product::<BigUint>()
        })
        .sum()
}

/// Number of vectors of sum-rank weight at most `t`.
pub fn ball_volume(params: &CodeParams, t: u32) -> ExactInt {
    sphere_volumes(params)
        .into_iter()
        .take(t as usize + 1)
        .sum()
}

/// Vector whose block `i` carries `dist.parts[i]` ones on its diagonal.
pub fn canonical_center(
    params: &CodeParams,
    dist: &WeightDistribution,
) -> Result<BlockVector, GeometryError> {
    dist.check(params)?;
    let (m, eta) = (params.m() as usize, params.eta() as usize);
    let blocks = dist
        .parts()
        .iter()
        .map(|&r| Matrix::diagonal(m, eta, r as usize))
        .collect();
    Ok(BlockVector::from_blocks(*params, blocks))
}

/// Ball-intersection volumes for one parameter set.
///
/// For a center with block ranks `(r_1, .., r_ell)`, every block contributes
/// independently: block `i` of `y` has some rank `a` and `y_i - x_i` some rank
/// `b`. The joint `(a, b)` counts of a single block are obtained by
/// enumerating the `q^(m eta)` block matrices once per block shape, and the
/// blocks are then combined by a two-dimensional convolution truncated at the
/// radius. Only the block space is enumerated, never the whole vector space.
#[derive(Debug)]
pub struct IntersectionVolumes {
    params: CodeParams,
    joint: Option<Arc<JointTable>>,
}

/// `table[r][a][b]`: block matrices `y` with `rank(y) = a` and
/// `rank(y - c) = b` for the diagonal center `c` of rank `r`.
type JointTable = Vec<Vec<Vec<u64>>>;

/// Joint tables are shared across parameter sets with the same block shape,
/// so reports for many radii or block counts enumerate the block space once.
type JointCache = Mutex<HashMap<(u64, u32, u32), Arc<JointTable>>>;

fn joint_cache() -> &'static JointCache {
    static CACHE: OnceLock<JointCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn build_joint(params: &CodeParams, cap: u64) -> Result<JointTable, GeometryError> {
    let field = FiniteField::with_order(params.q())?;
    let (m, eta) = (params.m() as usize, params.eta() as usize);
    let ranks = BlockRankTable::new(&field, m, eta, cap)?;
    let mu = params.mu() as usize;
    let digits = (m * eta) as u32;
    let centers: Vec<u64> = (0..=mu)
        .map(|r| Matrix::diagonal(m, eta, r).to_block_index(params.q()))
        .collect();
    let mut table = vec![vec![vec![0u64; mu + 1]; mu + 1]; mu + 1];
    for y in 0..ranks.len() as u64 {
        let a = ranks.rank(y) as usize;
        for (r, &c) in centers.iter().enumerate() {
            let b = ranks.rank(sub_codes(&field, y, c, digits)) as usize;
            table[r][a][b] += 1;
        }
    }
    Ok(table)
}

impl IntersectionVolumes {
    /// Fails when the block space `q^(m eta)` exceeds `cap`.
    pub fn new(params: CodeParams, cap: u64) -> Result<Self, GeometryError> {
        let size = (params.q() as u128).pow(params.m() * params.eta());
        if size > cap as u128 {
            return Err(CapExceeded { needed: size, cap }.into());
        }
        Ok(IntersectionVolumes {
            params,
            joint: None,
        })
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    fn joint_counts(&mut self, center_rank: u32) -> Result<&Vec<Vec<u64>>, GeometryError> {
        if self.joint.is_none() {
            let p = self.params;
            let key = (p.q(), p.m(), p.eta());
            let cached = joint_cache()
                .lock()
                .expect("joint cache poisoned")
                .get(&key)
                .cloned();
            let table = match cached {
                Some(t) => t,
                None => {
                    // built outside the lock; a racing duplicate is harmless
                    let t = Arc::new(build_joint(&p, u64::MAX)?);
                    joint_cache()
                        .lock()
                        .expect("joint cache poisoned")
                        .insert(key, t.clone());
                    t
                }
            };
            self.joint = Some(table);
        }
        Ok(&self.joint.as_ref().expect("joint table set above")[center_rank as usize])
    }

    /// Number of `y` with `wt(y) <= tau` and `d(y, x) <= tau`, where `x` is the
    /// canonical center of `dist`.
    pub fn volume(
        &mut self,
        tau: u32,
        dist: &WeightDistribution,
    ) -> Result<ExactInt, GeometryError> {
        dist.check(&self.params)?;
        if dist.total() > 2 * tau {
            return Ok(BigUint::zero());
        }
        let cut = tau as usize + 1;
        let mut acc = vec![vec![BigUint::zero(); cut]; cut];
        acc[0][0] = BigUint::from(1u32);
        for &r in dist.parts() {
            let block = self.joint_counts(r)?.clone();
            let mut next = vec![vec![BigUint::zero(); cut]; cut];
            for (a0, row) in acc.iter().enumerate() {
                for (b0, v) in row.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for (a1, brow) in block.iter().enumerate() {
                        if a0 + a1 >= cut {
                            break;
                        }
                        for (b1, &c) in brow.iter().enumerate() {
                            if b0 + b1 >= cut {
                                break;
                            }
                            if c != 0 {
                                next[a0 + a1][b0 + b1] += v * c;
                            }
                        }
                    }
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().flatten().sum())
    }

    /// Smallest intersection volume over all centers at distance exactly `delta`.
    ///
    /// Block permutations and the row/column actions of `GL_m x GL_eta` on
    /// each block fix the origin and preserve sum-rank distances, so the
    /// intersection depends only on the multiset of block ranks; one
    /// nonincreasing representative per multiset is enough.
    pub fn min_over_distributions(
        &mut self,
        tau: u32,
        delta: u32,
    ) -> Result<Option<ExactInt>, GeometryError> {
        let mut best: Option<ExactInt> = None;
        for dist in partitions_of(delta, self.params.ell(), self.params.mu()) {
            let v = self.volume(tau, &dist)?;
            best = Some(match best {
                Some(b) if b <= v => b,
                _ => v,
            });
        }
        Ok(best)
    }

    /// Largest intersection volume over all centers at distance exactly `delta`.
    pub fn max_over_distributions(
        &mut self,
        tau: u32,
        delta: u32,
    ) -> Result<Option<ExactInt>, GeometryError> {
        let mut best: Option<ExactInt> = None;
        for dist in partitions_of(delta, self.params.ell(), self.params.mu()) {
            let v = self.volume(tau, &dist)?;
            best = Some(match best {
                Some(b) if b >= v => b,
                _ => v,
            });
        }
        Ok(best)
    }
}

/// One-shot intersection volume with the default enumeration cap.
pub fn intersection_volume(
    params: &CodeParams,
    tau: u32,
    dist: &WeightDistribution,
) -> Result<ExactInt, GeometryError> {
    dist.check(params)?;
    if dist.total() > 2 * tau {
        return Ok(BigUint::zero());
    }
    IntersectionVolumes::new(*params, DEFAULT_ENUMERATION_CAP)?.volume(tau, dist)
}

/// Bounded compositions with nonincreasing parts (partitions of `t` into at
/// most `ell` parts of size at most `mu`, zero-padded to length `ell`).
pub fn partitions_of(t: u32, ell: u32, mu: u32) -> Vec<Composition> {
    fn rec(
        remaining: u32,
        slots: u32,
        cap: u32,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Composition>,
    ) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Composition::new(prefix.clone()));
            }
            return;
        }
        if remaining > slots * cap {
            return;
        }
        for p in (0..=cap.min(remaining)).rev() {
            prefix.push(p);
            rec(remaining - p, slots - 1, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, ell, mu, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::power;

    fn params(q: u64, m: u32, eta: u32, ell: u32) -> CodeParams {
        CodeParams::new(q, m, eta, ell).unwrap()
    }

    fn big(v: u64) -> ExactInt {
        BigUint::from(v)
    }

    #[test]
    fn composition_count_examples() {
        assert_eq!(count_bounded_compositions(0, 3, 2), big(1));
        assert_eq!(count_bounded_compositions(1, 2, 1), big(2));
        assert_eq!(count_bounded_compositions(2, 2, 1), big(1));
        assert_eq!(count_bounded_compositions(3, 1, 2), big(0));
        assert_eq!(count_bounded_compositions(5, 3, 0), big(0));
        assert_eq!(count_bounded_compositions(0, 3, 0), big(1));
    }

    #[test]
    fn enumeration_examples() {
        let got: Vec<Vec<u32>> = enumerate_bounded_compositions(1, 2, 1)
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(got, vec![vec![1, 0], vec![0, 1]]);
        let got: Vec<Vec<u32>> = enumerate_bounded_compositions(0, 2, 3)
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(got, vec![vec![0, 0]]);
        assert_eq!(enumerate_bounded_compositions(3, 1, 2).count(), 0);
    }

    #[test]
    fn enumeration_is_strictly_decreasing_and_complete() {
        for ell in 1..=4 {
            for mu in 0..=3 {
                for t in 0..=ell * mu + 1 {
                    let all: Vec<Composition> =
                        enumerate_bounded_compositions(t, ell, mu).collect();
                    for w in all.windows(2) {
                        assert!(w[0].parts() > w[1].parts());
                    }
                    for c in &all {
                        assert_eq!(c.total(), t);
                        assert!(c.parts().iter().all(|&p| p <= mu));
                    }
                    // brute force over the box [0, mu]^ell
                    let mut brute = 0u64;
                    for code in 0..(mu as u64 + 1).pow(ell) {
                        let mut c = code;
                        let mut s = 0;
                        for _ in 0..ell {
                            s += c % (mu as u64 + 1);
                            c /= mu as u64 + 1;
                        }
                        if s == t as u64 {
                            brute += 1;
                        }
                    }
                    assert_eq!(all.len() as u64, brute, "t={t} ell={ell} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn sphere_volume_examples() {
        let p = params(2, 2, 2, 2);
        assert_eq!(sphere_volume(&p, 0), big(1));
        assert_eq!(sphere_volume(&p, 1), big(18));
        assert_eq!(sphere_volume(&p, 5), big(0));
        let h = params(2, 1, 1, 7);
        assert_eq!(sphere_volume(&h, 3), big(35));
    }

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(&params(2, 2, 2, 2), 0), big(1));
        assert_eq!(ball_volume(&params(2, 1, 1, 7), 1), big(8));
        assert_eq!(ball_volume(&params(2, 2, 2, 2), 4), big(256));
        assert_eq!(ball_volume(&params(2, 2, 2, 2), 9), big(256));
    }

    #[test]
    fn collapses() {
        for q in [2u64, 3, 4] {
            for m in 1..=3 {
                for eta in 1..=3 {
                    let p = params(q, m, eta, 1);
                    for t in 0..=p.mu() {
                        assert_eq!(
                            sphere_volume(&p, t),
                            num_matrices_of_rank(m as u64, eta as u64, t as i64, q)
                        );
                    }
                }
            }
            for n in 1..=6u32 {
                let p = params(q, 1, 1, n);
                for t in 0..=n {
                    assert_eq!(
                        sphere_volume(&p, t),
                        binomial(n as u64, t as i64) * power(q - 1, t as u64)
                    );
                }
            }
        }
    }

    #[test]
    fn dp_matches_composition_sum_and_totals() {
        for q in [2u64, 3, 5] {
            for m in 1..=3 {
                for eta in 1..=3 {
                    for ell in 1..=4 {
                        let p = params(q, m, eta, ell);
                        let vols = sphere_volumes(&p);
                        assert_eq!(vols.len() as u32, p.max_weight() + 1);
                        for t in 0..=p.max_weight() {
                            assert_eq!(vols[t as usize], sphere_volume_by_compositions(&p, t));
                        }
                        assert_eq!(vols.iter().sum::<BigUint>(), p.space_size());
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_centers() {
        let p = params(2, 2, 2, 2);
        let f = FiniteField::with_order(2).unwrap();
        let zero = canonical_center(&p, &Composition::zero(2)).unwrap();
        assert_eq!(zero, BlockVector::zero(p));
        let c = canonical_center(&p, &Composition::new(vec![2, 0])).unwrap();
        assert_eq!(c.block(0), &Matrix::diagonal(2, 2, 2));
        assert!(c.block(1).is_zero());
        assert_eq!(c.sum_rank_weight(&f), 2);
        let c = canonical_center(&p, &Composition::new(vec![1, 1])).unwrap();
        assert_eq!(c.sum_rank_weight(&f), 2);
        assert!(canonical_center(&p, &Composition::new(vec![3, 0])).is_err());
        assert!(canonical_center(&p, &Composition::new(vec![1])).is_err());
    }

    #[test]
    fn intersection_trivial_cases() {
        let p = params(2, 2, 2, 2);
        assert_eq!(
            intersection_volume(&p, 1, &Composition::new(vec![2, 1])).unwrap(),
            big(0)
        );
        for tau in 0..=4 {
            assert_eq!(
                intersection_volume(&p, tau, &Composition::zero(2)).unwrap(),
                ball_volume(&p, tau)
            );
        }
    }

    #[test]
    fn partitions_are_sorted_representatives() {
        let parts: Vec<Vec<u32>> = partitions_of(3, 3, 2)
            .iter()
            .map(|c| c.parts().to_vec())
            .collect();
        assert_eq!(parts, vec![vec![2, 1, 0], vec![1, 1, 1]]);
        assert!(partitions_of(7, 3, 2).is_empty());
    }
}
