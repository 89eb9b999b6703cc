//! Formula-against-oracle checks for one parameter set.

use std::io::Write;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use sumrank_core::geometry::{
    canonical_center, count_bounded_compositions, enumerate_bounded_compositions, partitions_of,
    sphere_volumes, IntersectionVolumes,
};
use sumrank_core::oracle::{
    brute_sphere_volumes, covering_radius, exhaustive_min_covering, greedy_min_covering,
    CoveringOutcome, OracleError,
};
use sumrank_core::{compile_report, CodeParams, ExactInt, Space};

use crate::{CliError, Format, RunConfig};

/// The closed forms that `verify` holds against enumeration.
#[derive(Debug, Clone, Copy)]
pub struct Formulas {
    /// `(t, ell, mu)` to the number of bounded compositions.
    pub compositions: fn(u32, u32, u32) -> ExactInt,
    pub sphere_volumes: fn(&CodeParams) -> Vec<ExactInt>,
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            compositions: count_bounded_compositions,
            sphere_volumes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The check could not run within the space budget.
    Budget,
    /// A search ran out of time; nothing to compare.
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Budget => "budget",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

fn check(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub params: CodeParams,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn failures(&self) -> Vec<&str> {
        self.names_with(Status::Fail)
    }

    fn names_with(&self, status: Status) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == status)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn into_result(self) -> Result<(), CliError> {
        let failed = self.failures();
        if !failed.is_empty() {
            return Err(CliError::Verify(failed.join(", ")));
        }
        let budget = self.names_with(Status::Budget);
        if !budget.is_empty() {
            return Err(CliError::Budget(budget.join(", ")));
        }
        Ok(())
    }
}

/// Searches that hit the clock are `Ok(None)`; a space over budget is an error.
type Search = Result<Option<CoveringOutcome>, OracleError>;

fn search(params: &CodeParams, rho: u32, config: &RunConfig) -> Search {
    match exhaustive_min_covering(params, rho, &config.budget) {
        Ok(o) => Ok(Some(o)),
        Err(OracleError::Budget { lower: Some(_), .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn compositions(params: &CodeParams, formulas: &Formulas) -> Check {
    let (ell, mu) = (params.ell(), params.mu());
    for t in 0..=params.max_weight() {
        let listed = BigUint::from(enumerate_bounded_compositions(t, ell, mu).count());
        let formula = (formulas.compositions)(t, ell, mu);
        if formula != listed {
            return check(
                "compositions",
                Status::Fail,
                format!("t={t}: formula {formula}, enumeration {listed}"),
            );
        }
    }
    check(
        "compositions",
        Status::Pass,
        format!("t=0..={}", params.max_weight()),
    )
}

fn sphere_check(params: &CodeParams, config: &RunConfig, formulas: &Formulas) -> Check {
    let brute = match brute_sphere_volumes(params, config.budget.max_space_size) {
        Ok(b) => b,
        Err(e) => return check("sphere_volumes", Status::Budget, e.to_string()),
    };
    let formula = (formulas.sphere_volumes)(params);
    match (0..brute.len()).find(|&t| formula.get(t) != Some(&brute[t])) {
        Some(t) => check(
            "sphere_volumes",
            Status::Fail,
            format!(
                "t={t}: formula {}, enumeration {}",
                formula.get(t).map_or("-".into(), |v| v.to_string()),
                brute[t]
            ),
        ),
        None => check(
            "sphere_volumes",
            Status::Pass,
            format!("{} radii", brute.len()),
        ),
    }
}

/// Every canonical center against one pass over the space, counting each
/// `y` at radius `max(wt(y), d(y, x))`.
fn intersection_check(params: &CodeParams, space: &Space) -> Check {
    let name = "intersection_volumes";
    let mut vols = match IntersectionVolumes::new(*params, u64::MAX) {
        Ok(v) => v,
        Err(e) => return check(name, Status::Budget, e.to_string()),
    };
    let top = params.max_weight();
    let mut centers = 0;
    for delta in 0..=top {
        for dist in partitions_of(delta, params.ell(), params.mu()) {
            let x = space.index_of(&canonical_center(params, &dist).expect("partition fits"));
            let mut hist = vec![0u64; top as usize + 1];
            for y in 0..space.size() {
                hist[space.weight(y).max(space.distance(y, x)) as usize] += 1;
            }
            let mut acc = 0u64;
            for tau in 0..=top {
                acc += hist[tau as usize];
                let formula = vols.volume(tau, &dist).expect("partition fits");
                if formula != BigUint::from(acc) {
                    return check(
                        name,
                        Status::Fail,
                        format!(
                            "tau={tau} center {:?}: formula {formula}, enumeration {acc}",
                            dist.parts()
                        ),
                    );
                }
            }
            centers += 1;
        }
    }
    check(name, Status::Pass, format!("{centers} centers"))
}

fn metric_axioms(space: &Space, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = space.params().max_weight();
    for _ in 0..2000 {
        let (x, y, z) = (
            rng.gen_range(0..space.size()),
            rng.gen_range(0..space.size()),
            rng.gen_range(0..space.size()),
        );
        let (dxy, dyx, dxz, dyz) = (
            space.distance(x, y),
            space.distance(y, x),
            space.distance(x, z),
            space.distance(y, z),
        );
        if dxy != dyx || (dxy == 0) != (x == y) || dxz > dxy + dyz || dxy > top {
            return check(
                "metric_axioms",
                Status::Fail,
                format!("vectors {x}, {y}, {z}"),
            );
        }
    }
    check("metric_axioms", Status::Pass, "2000 random triples")
}

fn weight_chain(space: &Space, seed: u64) -> Check {
    let p = space.params();
    let views = (space.regrouped(1), space.regrouped(p.n()));
    let (Some(Ok(rank)), Some(Ok(hamming))) = views else {
        return check(
            "weight_chain",
            Status::Budget,
            "regrouped space over budget",
        );
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..2000 {
        let x = rng.gen_range(0..space.size());
        let (r, s, h) = (rank.weight(x), space.weight(x), hamming.weight(x));
        if !(r <= s && s <= h) {
            return check(
                "weight_chain",
                Status::Fail,
                format!("vector {x}: {r}, {s}, {h}"),
            );
        }
    }
    check("weight_chain", Status::Pass, "2000 random vectors")
}

fn bracket(params: &CodeParams, rho: u32, exact: &Search, config: &RunConfig) -> Check {
    let name = format!("bracket rho={rho}");
    let report = match compile_report(params, rho) {
        Ok(r) => r,
        Err(e) => return check(name, Status::Fail, e.to_string()),
    };
    let (lo, hi) = (&report.best_lower, &report.best_upper);
    let ell = params.ell();
    match exact {
        Err(e) => check(name, Status::Budget, e.to_string()),
        Ok(Some(o)) => {
            let k = BigUint::from(o.size);
            let radius = covering_radius(&o.witness, ell, &config.budget);
            if !(lo <= &k && &k <= hi) {
                check(name, Status::Fail, format!("K = {k} outside [{lo}, {hi}]"))
            } else if !matches!(radius, Ok(r) if r <= rho) {
                check(
                    name,
                    Status::Fail,
                    format!("witness of size {k} has radius {radius:?}"),
                )
            } else {
                check(name, Status::Pass, format!("{lo} <= K = {k} <= {hi}"))
            }
        }
        Ok(None) => match greedy_min_covering(params, rho, &config.budget) {
            Ok(g) => {
                let size = BigUint::from(g.size);
                let radius = covering_radius(&g.witness, ell, &config.budget);
                if lo > &size || !matches!(radius, Ok(r) if r <= rho) {
                    check(
                        name,
                        Status::Fail,
                        format!("greedy cover of size {size} against lower {lo}"),
                    )
                } else {
                    check(
                        name,
                        Status::Pass,
                        format!("{lo} <= greedy {size}; exact search incomplete"),
                    )
                }
            }
            Err(e) => check(name, Status::Budget, e.to_string()),
        },
    }
}

fn metric_relation(params: &CodeParams, rho: u32, exact: &Search, config: &RunConfig) -> Check {
    let name = format!("metric_relation rho={rho}");
    let native = match exact {
        Ok(Some(o)) => o.size,
        Ok(None) => return check(name, Status::Skip, "exact search incomplete"),
        Err(e) => return check(name, Status::Budget, e.to_string()),
    };
    let mut sizes = Vec::new();
    for view in [params.rank_view(), params.hamming_view()] {
        match search(&view, rho.min(view.max_weight()), config) {
            Ok(Some(o)) => sizes.push(o.size),
            Ok(None) => return check(name, Status::Skip, format!("search on {view} incomplete")),
            Err(e) => return check(name, Status::Budget, e.to_string()),
        }
    }
    let (rank, hamming) = (sizes[0], sizes[1]);
    let status = if rank <= native && native <= hamming {
        Status::Pass
    } else {
        Status::Fail
    };
    check(
        name,
        status,
        format!("rank {rank}, sum-rank {native}, Hamming {hamming}"),
    )
}

pub fn verify(
    params: &CodeParams,
    radii: &[u32],
    config: &RunConfig,
    formulas: &Formulas,
) -> Outcome {
    let mut checks = vec![
        compositions(params, formulas),
        sphere_check(params, config, formulas),
    ];
    match Space::new(*params, config.budget.max_space_size) {
        Ok(space) => {
            checks.push(intersection_check(params, &space));
            checks.push(metric_axioms(&space, config.seed));
            checks.push(weight_chain(&space, config.seed));
        }
        Err(e) => checks.push(check("space", Status::Budget, e.to_string())),
    }
    for &rho in radii {
        let exact = search(params, rho, config);
        checks.push(bracket(params, rho, &exact, config));
        checks.push(metric_relation(params, rho, &exact, config));
    }
    Outcome {
        params: *params,
        seed: config.seed,
        checks,
    }
}

pub fn render(outcome: &Outcome, config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let count = |s: Status| outcome.checks.iter().filter(|c| c.status == s).count();
    match config.format {
        Format::Json => {
            let checks: Vec<_> = outcome
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "status": c.status.label(), "detail": c.detail}))
                .collect();
            let v = json!({
                "params": {
                    "q": outcome.params.q(),
                    "m": outcome.params.m(),
                    "eta": outcome.params.eta(),
                    "ell": outcome.params.ell(),
                },
                "seed": outcome.seed,
                "checks": checks,
                "failures": outcome.failures(),
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            let err = |e: csv::Error| CliError::Compute(e.to_string());
            w.write_record(["name", "status", "detail"]).map_err(err)?;
            for c in &outcome.checks {
                w.write_record([c.name.as_str(), c.status.label(), c.detail.as_str()])
                    .map_err(err)?;
            }
            w.flush()?;
        }
        Format::Plain => {
            writeln!(out, "verify {} seed={}", outcome.params, outcome.seed)?;
            for c in &outcome.checks {
                writeln!(
                    out,
                    "  {:<6} {:<24} {}",
                    c.status.label().to_uppercase(),
                    c.name,
                    c.detail
                )?;
            }
            writeln!(
                out,
                "passed {}, failed {}, over budget {}, skipped {}",
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Budget),
                count(Status::Skip)
            )?;
        }
    }
    Ok(())
}
