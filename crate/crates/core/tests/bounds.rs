use num_bigint::BigUint;
use proptest::prelude::*;

use sumrank_core::bounds::{
    compile_report, iterative_lower, iterative_rhs, msrd_extension_supported, msrd_extension_upper,
    product_partition_gain, product_partition_upper, product_partition_upper_with, relation_bounds,
    simplified_sphere_covering_lower, sphere_covering_lower, systematic_upper, BoundKind,
    PartitionMode,
};
use sumrank_core::exact::floor_log;
use sumrank_core::geometry::{canonical_center, IntersectionVolumes};
use sumrank_core::matrix::DEFAULT_ENUMERATION_CAP;
use sumrank_core::oracle::brute_intersection_volume;
use sumrank_core::CodeParams;

fn params(q: u64, m: u32, eta: u32, ell: u32) -> CodeParams {
    CodeParams::new(q, m, eta, ell).unwrap()
}

fn grid() -> Vec<CodeParams> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4] {
        for m in 1..=4 {
            for eta in 1..=3 {
                for ell in 1..=4 {
                    out.push(params(q, m, eta, ell));
                }
            }
        }
    }
    out
}

#[test]
fn iterative_regression() {
    let p = params(2, 2, 2, 2);
    let mut vols = IntersectionVolumes::new(p, DEFAULT_ENUMERATION_CAP).unwrap();
    let value = iterative_lower(&p, 1, &mut vols).unwrap();
    assert!(value >= sphere_covering_lower(&p, 1).unwrap());
    assert_eq!(value, BigUint::from(14u32));
}

/// Intersection volumes behind the iterative bound agree with enumeration.
#[test]
fn iterative_inputs_match_enumeration() {
    let p = params(2, 2, 2, 2);
    let mut vols = IntersectionVolumes::new(p, DEFAULT_ENUMERATION_CAP).unwrap();
    for delta in 1..=p.max_weight() {
        let min = vols.min_over_distributions(1, delta).unwrap().unwrap();
        let brute_min = sumrank_core::geometry::partitions_of(delta, 2, 2)
            .iter()
            .map(|d| {
                let c = canonical_center(&p, d).unwrap();
                brute_intersection_volume(&p, 1, &c, 1 << 10).unwrap()
            })
            .min()
            .unwrap();
        assert_eq!(min, brute_min);
    }
}

/// The right-hand side of the iterative bound is not monotone in `k`.
#[test]
fn iterative_rhs_not_monotone_in_k() {
    let p = params(2, 1, 1, 4);
    let mut vols = IntersectionVolumes::new(p, DEFAULT_ENUMERATION_CAP).unwrap();
    let values: Vec<BigUint> = (0..=2)
        .map(|k| iterative_rhs(&p, 1, k, &mut vols).unwrap())
        .collect();
    assert_eq!(values, [4u32, 4, 3].map(BigUint::from));
    // every admissible k is still a valid bound, so the maximum is reported
    assert_eq!(
        iterative_lower(&p, 1, &mut vols).unwrap(),
        BigUint::from(4u32)
    );
}

/// Each admissible `k` gives a value no larger than the reported bound.
#[test]
fn iterative_is_max_over_k() {
    for p in grid() {
        if p.eta() > p.m() || p.max_weight() < 2 {
            continue;
        }
        let mut vols = IntersectionVolumes::new(p, DEFAULT_ENUMERATION_CAP).unwrap();
        for rho in 1..p.max_weight() {
            let best = iterative_lower(&p, rho, &mut vols).unwrap();
            let k_max =
                floor_log(&best, &BigUint::from(p.ext_order())).min((p.n() - rho) as u64) as u32;
            for k in 0..=k_max {
                assert!(
                    iterative_rhs(&p, rho, k, &mut vols).unwrap() <= best,
                    "{p} rho={rho} k={k}"
                );
            }
        }
    }
}

#[test]
fn relational_properties_on_grid() {
    let mut points = 0;
    for p in grid() {
        for rho in 1..p.max_weight() {
            points += 1;
            let sphere = sphere_covering_lower(&p, rho).unwrap();
            if let Ok(s) = simplified_sphere_covering_lower(&p, rho) {
                assert!(s <= sphere, "{p} rho={rho}");
            }
            let systematic = systematic_upper(&p, rho).unwrap();
            if let Ok(msrd) = msrd_extension_upper(&p, rho) {
                assert!(msrd <= systematic);
                if p.n() + rho <= p.m() {
                    assert_eq!(product_partition_upper(&p, rho).unwrap(), msrd);
                }
            }
            let aligned =
                product_partition_upper_with(&p, rho, PartitionMode::BlockConsistent).unwrap();
            assert!(aligned <= systematic);
            let (rank, _) = relation_bounds(&p, rho).unwrap();
            assert!(rank.value.unwrap() <= sphere);

            let report = compile_report(&p, rho).unwrap();
            if let Some(it) = report.get("iterative").and_then(|b| b.value.clone()) {
                assert!(it >= sphere);
            }
            let lowers: Vec<&BigUint> = report
                .bounds
                .iter()
                .filter(|b| b.kind == BoundKind::Lower && !b.informational)
                .filter_map(|b| b.value.as_ref())
                .collect();
            let uppers: Vec<&BigUint> = report
                .bounds
                .iter()
                .filter(|b| b.kind == BoundKind::Upper && !b.informational)
                .filter_map(|b| b.value.as_ref())
                .collect();
            for l in &lowers {
                for u in &uppers {
                    assert!(l <= u, "{p} rho={rho}");
                }
            }
        }
    }
    assert!(points >= 100);
}

#[test]
fn best_bounds_nonincreasing_in_rho() {
    for p in grid() {
        let reports: Vec<_> = (0..=p.max_weight())
            .map(|r| compile_report(&p, r).unwrap())
            .collect();
        for w in reports.windows(2) {
            assert!(w[1].best_lower <= w[0].best_lower, "{p} rho={}", w[1].rho);
            assert!(w[1].best_upper <= w[0].best_upper, "{p} rho={}", w[1].rho);
        }
    }
}

#[test]
fn unsupported_extension_is_excluded() {
    // nu = m - floor(rho/ell) = 1 is below the block length 2
    let p = params(2, 2, 2, 1);
    assert!(msrd_extension_supported(&p, 1).is_err());
    let report = compile_report(&p, 1).unwrap();
    let msrd = report.get("msrd_extension").unwrap();
    assert_eq!(msrd.value, Some(BigUint::from(2u32)));
    assert!(msrd.informational);
    assert_eq!(report.best_lower, BigUint::from(3u32));
    // linearized Reed-Solomon territory: ell <= q - 1 and nu >= eta
    assert!(msrd_extension_supported(&params(4, 4, 2, 3), 3).is_ok());
    assert!(msrd_extension_supported(&params(2, 3, 2, 1), 1).is_ok());
    assert!(msrd_extension_supported(&params(2, 4, 2, 2), 2).is_err());
}

/// Exhaustive search over segment sequences; an independent twin of the
/// dynamic program.
fn exhaustive_gain(n: u32, rho: u32, m: u32, ell: u32) -> Option<u64> {
    if n == 0 {
        return (rho == 0).then_some(0);
    }
    (1..=n)
        .flat_map(|sn| (0..=sn.min(rho)).map(move |sr| (sn, sr)))
        .filter(|&(sn, sr)| sn + sr <= m)
        .filter_map(|(sn, sr)| {
            exhaustive_gain(n - sn, rho - sr, m, ell)
                .map(|g| g + (sr / ell) as u64 * (sn - sr) as u64)
        })
        .max()
}

#[test]
fn product_partition_eight_by_eight() {
    let p = params(2, 8, 1, 8);
    let g = product_partition_gain(&p, 4, PartitionMode::AsPrinted);
    assert_eq!(g, exhaustive_gain(8, 4, 8, 8));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn partition_dp_matches_exhaustive(m in 1u32..12, eta in 1u32..6, ell in 1u32..6, rho_frac in 0.0f64..1.0) {
        let p = params(2, m, eta, ell);
        prop_assume!(p.n() <= 10);
        let rho = (rho_frac * (p.n() + 1) as f64) as u32;
        prop_assert_eq!(
            product_partition_gain(&p, rho, PartitionMode::AsPrinted),
            exhaustive_gain(p.n(), rho, m, ell)
        );
    }

    #[test]
    fn report_bracket_is_ordered(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), m in 1u32..6, eta in 1u32..5, ell in 1u32..5, rho_frac in 0.0f64..1.0) {
        let p = params(q, m, eta, ell);
        let rho = (rho_frac * (p.max_weight() + 1) as f64) as u32;
        let report = compile_report(&p, rho).unwrap();
        prop_assert!(report.best_lower <= report.best_upper);
        prop_assert!(report.best_upper <= p.space_size());
    }
}
