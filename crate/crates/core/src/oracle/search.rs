use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::field::Field;
use crate::params::CodeParams;
use crate::space::Space;

use super::metric::{ball_offsets, covers_within};
use super::{ExplicitCode, OracleError, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringOutcome {
    pub size: u64,
    pub witness: ExplicitCode,
    /// Search nodes expanded (zero for closed-form cases).
    pub nodes: u64,
}

/// Above this many table entries balls are recomputed on demand.
const BALL_TABLE_LIMIT: u64 = 1 << 23;

struct Balls<'a> {
    space: &'a Space,
    offsets: Vec<u64>,
    table: Option<Vec<u32>>,
}

impl<'a> Balls<'a> {
    fn new(space: &'a Space, rho: u32) -> Self {
        let offsets = ball_offsets(space, rho);
        let v = offsets.len() as u64;
        let table = (space.size() * v <= BALL_TABLE_LIMIT).then(|| {
            (0..space.size())
                .flat_map(|c| offsets.iter().map(move |&o| space.add(c, o) as u32))
                .collect()
        });
        Balls {
            space,
            offsets,
            table,
        }
    }

    fn volume(&self) -> usize {
        self.offsets.len()
    }

    #[inline]
    fn member(&self, c: u32, i: usize) -> u32 {
        match &self.table {
            Some(t) => t[c as usize * self.offsets.len() + i],
            None => self.space.add(c as u64, self.offsets[i]) as u32,
        }
    }
}

fn trivial(space: &Space, rho: u32) -> Option<Result<CoveringOutcome, OracleError>> {
    let params = space.params();
    let words: Vec<u64> = if rho == 0 {
        (0..space.size()).collect()
    } else if rho >= params.max_weight() {
        vec![0]
    } else {
        return None;
    };
    Some(
        ExplicitCode::new(params, words).map(|witness| CoveringOutcome {
            size: witness.len() as u64,
            witness,
            nodes: 0,
        }),
    )
}

/// Lazy greedy set cover; ties go to the smallest index.
fn greedy(space: &Space, balls: &Balls) -> Vec<u64> {
    let n = space.size() as usize;
    let v = balls.volume();
    let mut covered = vec![false; n];
    let mut uncovered = n;
    let mut heap: BinaryHeap<(usize, Reverse<u32>)> =
        (0..n as u32).map(|c| (v, Reverse(c))).collect();
    let mut chosen = Vec::new();
    while uncovered > 0 {
        let (stale, Reverse(c)) = heap.pop().expect("uncovered vectors remain coverable");
        let gain = (0..v)
            .filter(|&i| !covered[balls.member(c, i) as usize])
            .count();
        if gain == stale {
            chosen.push(c as u64);
            for i in 0..v {
                let u = balls.member(c, i) as usize;
                if !covered[u] {
                    covered[u] = true;
                    uncovered -= 1;
                }
            }
        } else if gain > 0 {
            heap.push((gain, Reverse(c)));
        }
    }
    chosen
}

/// Greedy covering code of radius `rho`; an upper estimate of `K`.
pub fn greedy_min_covering(
    params: &CodeParams,
    rho: u32,
    budget: &SearchBudget,
) -> Result<CoveringOutcome, OracleError> {
    let space = Space::new(*params, budget.max_space_size)?;
    if let Some(done) = trivial(&space, rho) {
        return done;
    }
    let balls = Balls::new(&space, rho);
    let witness = ExplicitCode::new(*params, greedy(&space, &balls))?;
    Ok(CoveringOutcome {
        size: witness.len() as u64,
        witness,
        nodes: 0,
    })
}

struct Budgeted;

/// Dominance tests cost `O(|B|^2)` distance evaluations per candidate; past
/// this ball size they are skipped.
const DOMINANCE_LIMIT: usize = 128;

struct Cover<'a> {
    balls: &'a Balls<'a>,
    rho: u32,
    count: Vec<u32>,
    uncovered: usize,
    forbidden: Vec<bool>,
    chosen: Vec<u32>,
    nodes: u64,
    started: Instant,
    budget: SearchBudget,
}

impl<'a> Cover<'a> {
    fn new(balls: &'a Balls<'a>, rho: u32, budget: SearchBudget, started: Instant) -> Self {
        let n = balls.space.size() as usize;
        Cover {
            balls,
            rho,
            count: vec![0; n],
            uncovered: n,
            forbidden: vec![false; n],
            chosen: Vec::new(),
            nodes: 0,
            started,
            budget,
        }
    }

    fn place(&mut self, c: u32) {
        for i in 0..self.balls.volume() {
            let u = self.balls.member(c, i) as usize;
            if self.count[u] == 0 {
                self.uncovered -= 1;
            }
            self.count[u] += 1;
        }
        self.chosen.push(c);
    }

    fn unplace(&mut self, c: u32) {
        for i in 0..self.balls.volume() {
            let u = self.balls.member(c, i) as usize;
            self.count[u] -= 1;
            if self.count[u] == 0 {
                self.uncovered += 1;
            }
        }
        self.chosen.pop();
    }

    fn gain(&self, c: u32) -> usize {
        (0..self.balls.volume())
            .filter(|&i| self.count[self.balls.member(c, i) as usize] == 0)
            .count()
    }

    /// Every still-uncovered vector of `ball(a)` lies in `ball(b)`.
    fn dominated(&self, a: u32, b: u32) -> bool {
        let space = self.balls.space;
        (0..self.balls.volume()).all(|i| {
            let u = self.balls.member(a, i);
            self.count[u as usize] != 0 || space.distance(u as u64, b as u64) <= self.rho
        })
    }

    /// Tries to cover what is left with `r` more centers. `from` is a lower
    /// bound on the first uncovered index.
    fn extend(&mut self, r: usize, from: usize) -> Result<bool, Budgeted> {
        if self.uncovered == 0 {
            return Ok(true);
        }
        let v = self.balls.volume();
        if r == 0 || self.uncovered > r * v {
            return Ok(false);
        }
        self.nodes += 1;
        if let Some(cap) = self.budget.time_cap {
            if self.started.elapsed() > cap {
                return Err(Budgeted);
            }
        }
        let e = (from..self.count.len())
            .find(|&u| self.count[u] == 0)
            .expect("uncovered count is positive");
        let mut candidates: Vec<(usize, u32)> = (0..v)
            .map(|i| self.balls.member(e as u32, i))
            .filter(|&c| !self.forbidden[c as usize])
            .map(|c| (self.gain(c), c))
            .collect();
        candidates.sort_unstable_by_key(|&(g, c)| (Reverse(g), c));
        let Some(&(best, _)) = candidates.first() else {
            return Ok(false);
        };
        if best + (r - 1) * v < self.uncovered {
            return Ok(false);
        }
        let mut kept: Vec<u32> = Vec::new();
        let mut found = false;
        for &(_, c) in &candidates {
            if v <= DOMINANCE_LIMIT && kept.iter().any(|&k| self.dominated(c, k)) {
                continue;
            }
            self.place(c);
            let res = self.extend(r - 1, e);
            if matches!(res, Ok(true)) {
                found = true;
                break;
            }
            self.unplace(c);
            if let Err(b) = res {
                for &k in &kept {
                    self.forbidden[k as usize] = false;
                }
                return Err(b);
            }
            self.forbidden[c as usize] = true;
            kept.push(c);
        }
        for &k in &kept {
            self.forbidden[k as usize] = false;
        }
        Ok(found)
    }
}

/// Exact `K`: the smallest code (linear or not) whose radius-`rho` balls
/// cover the space, with a witness.
///
/// Sizes are tried upward from the counting bound `ceil(q^(mn) / |B|)`; the
/// greedy cover caps the range. Each size is decided by depth-first set
/// cover: the zero vector is fixed as a codeword (translations preserve
/// coverings), branching is on the first uncovered vector, siblings already
/// explored are excluded, candidates whose new coverage is contained in an
/// earlier sibling's are skipped, and a branch is cut once the uncovered
/// count exceeds what the remaining balls can reach.
pub fn exhaustive_min_covering(
    params: &CodeParams,
    rho: u32,
    budget: &SearchBudget,
) -> Result<CoveringOutcome, OracleError> {
    let started = Instant::now();
    let space = Space::new(*params, budget.max_space_size)?;
    if let Some(done) = trivial(&space, rho) {
        return done;
    }
    let balls = Balls::new(&space, rho);
    let n = space.size() as usize;
    let v = balls.volume();
    let upper = greedy(&space, &balls);
    let lower = n.div_ceil(v);
    let mut nodes = 0;
    for k in lower..upper.len() {
        let mut cover = Cover::new(&balls, rho, *budget, started);
        cover.place(0);
        let res = cover.extend(k - 1, 0);
        nodes += cover.nodes;
        match res {
            Ok(true) => {
                let words = cover.chosen.iter().map(|&c| c as u64).collect();
                return Ok(CoveringOutcome {
                    size: k as u64,
                    witness: ExplicitCode::new(*params, words)?,
                    nodes,
                });
            }
            Ok(false) => {}
            Err(Budgeted) => {
                return Err(OracleError::Budget {
                    what: format!(
                        "time cap of {:?} reached while deciding size {k}",
                        budget.time_cap.unwrap_or_default()
                    ),
                    lower: Some(k as u64),
                    upper: Some(upper.len() as u64),
                })
            }
        }
    }
    Ok(CoveringOutcome {
        size: upper.len() as u64,
        witness: ExplicitCode::new(*params, upper)?,
        nodes,
    })
}

/// Smallest linear covering code: dimensions are tried upward and every
/// subspace is visited once through its reduced row echelon generator.
pub fn linear_min_covering(
    params: &CodeParams,
    rho: u32,
    budget: &SearchBudget,
) -> Result<CoveringOutcome, OracleError> {
    let started = Instant::now();
    let space = Space::new(*params, budget.max_space_size)?;
    let ext = space.extension_field()?;
    let qm = ext.order() as u32;
    let n = params.n() as usize;
    let v = ball_offsets(&space, rho).len() as u128;
    let mut nodes = 0u64;
    for k in 0..=n {
        if (qm as u128).pow(k as u32) * v < space.size() as u128 {
            continue;
        }
        for pivots in combinations(n, k) {
            // free positions: (row, column) right of the row's pivot, off pivots
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|row| {
                    let pivots = &pivots;
                    (pivots[row] + 1..n)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (row, c))
                })
                .collect();
            let total = (qm as u64).pow(free.len() as u32);
            for assignment in 0..total {
                nodes += 1;
                if let Some(cap) = budget.time_cap {
                    if nodes.is_multiple_of(256) && started.elapsed() > cap {
                        return Err(OracleError::Budget {
                            what: format!("linear search time cap reached at dimension {k}"),
                            lower: None,
                            upper: None,
                        });
                    }
                }
                let mut rows = vec![vec![0u32; n]; k];
                for (row, &p) in pivots.iter().enumerate() {
                    rows[row][p] = 1;
                }
                let mut a = assignment;
                for &(row, col) in &free {
                    rows[row][col] = (a % qm as u64) as u32;
                    a /= qm as u64;
                }
                let generator: Vec<u64> = rows.iter().map(|r| space.from_coordinates(r)).collect();
                let code = ExplicitCode::linear_span(&space, &ext, generator)?;
                if covers_within(&space, code.words(), rho) {
                    return Ok(CoveringOutcome {
                        size: code.len() as u64,
                        witness: code,
                        nodes,
                    });
                }
            }
        }
    }
    unreachable!("the full space covers at any radius")
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
