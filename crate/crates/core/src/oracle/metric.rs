use num_bigint::BigUint;

use crate::bounds::singleton_max_distance;
use crate::exact::ExactInt;
use crate::params::CodeParams;
use crate::space::{BlockVector, Space};

use super::{ExplicitCode, OracleError, SearchBudget};

const UNSEEN: u8 = u8::MAX;

/// Breadth-first distances from a set of sources, stopping after `depth`
/// layers. Sum-rank distance is the path length over weight-one steps.
fn layered_distances(space: &Space, sources: &[u64], depth: u32) -> Vec<u8> {
    let steps = space.unit_steps();
    let mut dist = vec![UNSEEN; space.size() as usize];
    let mut frontier = Vec::new();
    for &s in sources {
        if dist[s as usize] == UNSEEN {
            dist[s as usize] = 0;
            frontier.push(s);
        }
    }
    let mut level = 0u32;
    while !frontier.is_empty() && level < depth {
        level += 1;
        let mut next = Vec::new();
        for &v in &frontier {
            for &s in &steps {
                let w = space.add(v, s);
                if dist[w as usize] == UNSEEN {
                    dist[w as usize] = level as u8;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Every vector of weight at most `rho`.
pub fn ball_offsets(space: &Space, rho: u32) -> Vec<u64> {
    let dist = layered_distances(space, &[0], rho);
    (0..space.size())
        .filter(|&v| dist[v as usize] != UNSEEN)
        .collect()
}

/// `Vol_S(t)` for every `t`, by counting weights over the whole space.
pub fn brute_sphere_volumes(params: &CodeParams, cap: u64) -> Result<Vec<ExactInt>, OracleError> {
    let space = Space::new(*params, cap)?;
    let mut hist = vec![0u64; params.max_weight() as usize + 1];
    for v in 0..space.size() {
        hist[space.weight(v) as usize] += 1;
    }
    Ok(hist.into_iter().map(BigUint::from).collect())
}

pub fn brute_sphere_volume(params: &CodeParams, t: u32, cap: u64) -> Result<ExactInt, OracleError> {
    let vols = brute_sphere_volumes(params, cap)?;
    Ok(vols.get(t as usize).cloned().unwrap_or_default())
}

/// `|B(0, tau) ∩ B(center, tau)|` by enumeration.
pub fn brute_intersection_volume(
    params: &CodeParams,
    tau: u32,
    center: &BlockVector,
    cap: u64,
) -> Result<ExactInt, OracleError> {
    let space = Space::new(*params, cap)?;
    let x = space.index_of(center);
    let count = (0..space.size())
        .filter(|&y| space.weight(y) <= tau && space.distance(y, x) <= tau)
        .count();
    Ok(BigUint::from(count))
}

/// Minimum weight of a nonzero codeword for linear codes, minimum pairwise
/// distance otherwise; `None` for a single word.
pub fn min_distance(space: &Space, code: &ExplicitCode) -> Option<u32> {
    let words = code.words();
    if code.is_linear() {
        words
            .iter()
            .filter(|&&w| w != 0)
            .map(|&w| space.weight(w))
            .min()
    } else {
        let mut best = None;
        for (i, &a) in words.iter().enumerate() {
            for &b in &words[i + 1..] {
                let d = space.distance(a, b);
                best = Some(best.map_or(d, |x: u32| x.min(d)));
            }
        }
        best
    }
}

/// Covering radius with the words read under `ell_prime` blocks.
pub fn covering_radius(
    code: &ExplicitCode,
    ell_prime: u32,
    budget: &SearchBudget,
) -> Result<u32, OracleError> {
    let params = code.params().reshaped(ell_prime).ok_or_else(|| {
        OracleError::Parse(format!(
            "{ell_prime} blocks do not divide n = {}",
            code.params().n()
        ))
    })?;
    let space = Space::new(params, budget.max_space_size)?;
    let dist = layered_distances(&space, code.words(), params.max_weight());
    Ok(dist.iter().copied().max().unwrap_or(0) as u32)
}

/// Whether radius-`rho` balls around `words` cover the space.
pub fn covers_within(space: &Space, words: &[u64], rho: u32) -> bool {
    layered_distances(space, words, rho)
        .iter()
        .all(|&d| d != UNSEEN)
}

/// Whether a linear code meets the Singleton-type bound with equality.
pub fn is_msrd(space: &Space, code: &ExplicitCode) -> Result<bool, OracleError> {
    let k = code.dimension().ok_or(OracleError::NotLinear)?;
    let d = match min_distance(space, code) {
        Some(d) => d as i64,
        // the zero code: no nonzero word
        None => return Ok(false),
    };
    Ok(d == singleton_max_distance(&space.params(), k))
}

/// Greedy code with minimum distance at least `d`, scanning vectors in index
/// order. Maximal: every vector lies within distance `d - 1` of a word.
pub fn maximal_code(space: &Space, d: u32) -> ExplicitCode {
    assert!(d >= 1);
    let mut near = vec![false; space.size() as usize];
    let mut words = Vec::new();
    for v in 0..space.size() {
        if near[v as usize] {
            continue;
        }
        words.push(v);
        for (w, &dist) in layered_distances(space, &[v], d - 1).iter().enumerate() {
            if dist != UNSEEN {
                near[w] = true;
            }
        }
    }
    ExplicitCode::new(space.params(), words).expect("space is nonempty")
}
