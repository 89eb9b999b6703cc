//! Bound reports and volume tables as csv, json and plain text. Exact
//! integers are always written as decimal strings.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{json, Value};

use sumrank_core::bounds::{compile_report_with, ReportOptions};
use sumrank_core::geometry::sphere_volumes;
use sumrank_core::oracle::{
    exhaustive_min_covering, greedy_min_covering, OracleError, SearchBudget,
};
use sumrank_core::{BoundError, BoundKind, BoundReport, BoundValue, CodeParams};

use crate::{CliError, Format, RunConfig};

/// Column order of bound tables. Every report entry has one of these names.
pub const BOUND_COLUMNS: [&str; 11] = [
    "trivial_extreme",
    "sphere_covering",
    "simplified_sphere_covering",
    "minimum_three",
    "iterative",
    "rank_sphere_covering",
    "systematic",
    "msrd_extension",
    "product_partition",
    "hamming_msrd_extension",
    "product_partition_block_consistent",
];

pub const ORACLE_COLUMNS: [&str; 2] = ["exhaustive_search", "greedy_search"];

fn bound_error(e: BoundError) -> CliError {
    match e {
        BoundError::Range { .. } => CliError::Usage(e.to_string()),
        BoundError::BracketViolation { .. } => CliError::Verify(e.to_string()),
        other => CliError::Compute(other.to_string()),
    }
}

/// Exhaustive and greedy searches as report entries. Budget exhaustion is
/// recorded as an inapplicable entry with a fixed note so that output does
/// not depend on where the clock stopped.
fn oracle_entries(
    params: &CodeParams,
    rho: u32,
    budget: &SearchBudget,
) -> Result<Vec<BoundValue>, CliError> {
    let entry = |name: &str, kind: BoundKind, r: Result<u64, OracleError>| match r {
        Ok(size) => Ok(BoundValue::new(name, kind, Ok(BigUint::from(size)))),
        Err(e) if e.is_budget() => Ok(BoundValue::new(
            name,
            kind,
            Err(BoundError::Inapplicable("search budget exhausted".into())),
        )),
        Err(e) => Err(CliError::Compute(e.to_string())),
    };
    Ok(vec![
        entry(
            "exhaustive_search",
            BoundKind::Exact,
            exhaustive_min_covering(params, rho, budget).map(|o| o.size),
        )?,
        entry(
            "greedy_search",
            BoundKind::Upper,
            greedy_min_covering(params, rho, budget).map(|o| o.size),
        )?,
    ])
}

pub fn reports(config: &RunConfig) -> Result<Vec<BoundReport>, CliError> {
    let options = ReportOptions::default();
    let mut out = Vec::new();
    for (params, radii) in &config.points {
        for &rho in radii {
            let extra = if config.oracle {
                oracle_entries(params, rho, &config.budget)?
            } else {
                Vec::new()
            };
            out.push(compile_report_with(params, rho, &options, extra).map_err(bound_error)?);
        }
    }
    Ok(out)
}

pub fn gap_ratio(report: &BoundReport) -> String {
    let r = BigRational::new(
        BigInt::from(report.best_upper.clone()),
        BigInt::from(report.best_lower.clone()),
    );
    format!("{}/{}", r.numer(), r.denom())
}

fn params_json(p: &CodeParams) -> Value {
    json!({
        "q": p.q(),
        "m": p.m(),
        "eta": p.eta(),
        "ell": p.ell(),
        "n": p.n(),
        "mu": p.mu(),
    })
}

pub fn report_json(report: &BoundReport) -> Value {
    let bounds: Vec<Value> = report
        .bounds
        .iter()
        .map(|b| {
            json!({
                "name": b.name,
                "kind": b.kind.to_string(),
                "value": b.value.as_ref().map(|v| v.to_string()),
                "informational": b.informational,
                "assumptions": b.assumptions,
            })
        })
        .collect();
    json!({
        "params": params_json(&report.params),
        "rho": report.rho,
        "bounds": bounds,
        "best_lower": report.best_lower.to_string(),
        "best_upper": report.best_upper.to_string(),
        "gap_ratio": gap_ratio(report),
        "lower_winners": report.lower_winners(),
        "upper_winners": report.upper_winners(),
    })
}

/// One JSON object per report, one per line.
pub fn reports_json(reports: &[BoundReport], out: &mut dyn Write) -> Result<(), CliError> {
    for r in reports {
        writeln!(out, "{}", report_json(r))?;
    }
    Ok(())
}

pub fn csv_header(oracle: bool) -> Vec<&'static str> {
    let mut h = vec!["q", "m", "eta", "ell", "rho"];
    h.extend(BOUND_COLUMNS);
    if oracle {
        h.extend(ORACLE_COLUMNS);
    }
    h.extend(["best_lower", "best_upper", "gap_ratio", "informational"]);
    h
}

/// Empty cells are bounds that do not apply; the last column lists the
/// entries that are reported but do not feed the bracket.
pub fn reports_csv(
    reports: &[BoundReport],
    oracle: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let header = csv_header(oracle);
    w.write_record(&header).map_err(csv_error)?;
    let names = &header[5..header.len() - 4];
    for r in reports {
        let p = r.params;
        let mut row = vec![
            p.q().to_string(),
            p.m().to_string(),
            p.eta().to_string(),
            p.ell().to_string(),
            r.rho.to_string(),
        ];
        for name in names {
            row.push(
                r.get(name)
                    .and_then(|b| b.value.as_ref())
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
            );
        }
        row.push(r.best_lower.to_string());
        row.push(r.best_upper.to_string());
        row.push(gap_ratio(r));
        let info: Vec<&str> = r
            .bounds
            .iter()
            .filter(|b| b.informational && b.applicable())
            .map(|b| b.name.as_str())
            .collect();
        row.push(info.join(";"));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn reports_plain(reports: &[BoundReport], out: &mut dyn Write) -> Result<(), CliError> {
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(
            out,
            "{} n={} mu={} rho={}",
            r.params,
            r.params.n(),
            r.params.mu(),
            r.rho
        )?;
        for b in &r.bounds {
            let value = b.value.as_ref().map_or("-".to_string(), |v| v.to_string());
            let mut notes = b.assumptions.join("; ");
            if b.informational {
                notes = format!("informational: {notes}");
            }
            let line = format!("  {:<36} {:<5} {:>12}  {}", b.name, b.kind, value, notes);
            writeln!(out, "{}", line.trim_end())?;
        }
        writeln!(
            out,
            "  bracket {} <= K <= {}  gap {}  lower by {}  upper by {}",
            r.best_lower,
            r.best_upper,
            gap_ratio(r),
            r.lower_winners().join(","),
            r.upper_winners().join(",")
        )?;
    }
    Ok(())
}

pub fn volumes(params: &CodeParams, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let mut ball = BigUint::from(0u32);
    let rows: Vec<(u32, BigUint, BigUint)> = sphere_volumes(params)
        .into_iter()
        .enumerate()
        .map(|(t, s)| {
            ball += &s;
            (t as u32, s, ball.clone())
        })
        .collect();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(out);
            w.write_record(["t", "sphere", "ball"]).map_err(csv_error)?;
            for (t, s, b) in &rows {
                w.write_record([t.to_string(), s.to_string(), b.to_string()])
                    .map_err(csv_error)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(t, s, b)| json!({"t": t, "sphere": s.to_string(), "ball": b.to_string()}))
                .collect();
            writeln!(
                out,
                "{}",
                json!({"params": params_json(params), "volumes": rows})
            )?;
        }
        Format::Plain => {
            writeln!(out, "{} n={} mu={}", params, params.n(), params.mu())?;
            writeln!(out, "{:>4} {:>24} {:>24}", "t", "sphere", "ball")?;
            for (t, s, b) in &rows {
                writeln!(out, "{t:>4} {s:>24} {b:>24}")?;
            }
        }
    }
    Ok(())
}
