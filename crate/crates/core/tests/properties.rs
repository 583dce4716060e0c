//! Property-based invariants of the system model, the SINR distributions
//! and the rate expressions.

use crs_core::caching::{IicAt, Mode};
use crs_core::distributions::{closed_form_outage, outage_region, DistSpec};
use crs_core::model::{
    instantaneous_sinr, prelog_set, private_threshold, stream_powers, theta_set, PowerSplit, ReceiverClass, SinrKind,
    SystemParams,
};
use crs_core::quadrature::Quadrature;
use crs_core::rates::{BranchConstants, RateBranch, RateEngine, StreamKinds};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = ReceiverClass> {
    prop_oneof![Just(ReceiverClass::Center), Just(ReceiverClass::Edge)]
}

fn kind() -> impl Strategy<Value = SinrKind> {
    proptest::sample::select(SinrKind::ALL.to_vec())
}

fn split() -> impl Strategy<Value = PowerSplit> {
    (0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(b, r)| PowerSplit::new(b, r).unwrap())
}

fn interior_split() -> impl Strategy<Value = PowerSplit> {
    (0.01..0.99f64, 0.01..0.99f64).prop_map(|(b, r)| PowerSplit::new(b, r).unwrap())
}

/// Valid coded-caching triples (K, M, N) with an integral replication.
fn cc_triple() -> impl Strategy<Value = (u32, u32, u32)> {
    (2u32..=8, 2u32..=60)
        .prop_flat_map(|(k, n)| {
            let valid: Vec<u32> = (1..n).filter(|m| (m * k) % n == 0).collect();
            let valid = if valid.is_empty() { vec![0] } else { valid };
            (Just(k), proptest::sample::select(valid), Just(n))
        })
        .prop_filter("integral replication", |(_, m, _)| *m > 0)
}

fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn stream_powers_sum_to_total(power in 1e-6..1e9f64, split in split()) {
        let p = stream_powers(power, split);
        prop_assert!(p.p0 >= 0.0 && p.pc >= 0.0 && p.pe >= 0.0);
        prop_assert!(relative_close(p.total(), power, 1e-14));
    }

    #[test]
    fn sinr_is_bounded_and_monotone_in_gain(
        kind in kind(), class in class(), split in split(),
        power in 1e-3..1e6f64, g in 1e-12..1e3f64, factor in 1.0..1e3f64,
    ) {
        let powers = stream_powers(power, split);
        let bound = kind.bound(class, &powers);
        let lo = instantaneous_sinr(kind, class, &powers, g, 1e-5);
        let hi = instantaneous_sinr(kind, class, &powers, g * factor, 1e-5);
        prop_assert!(lo >= 0.0);
        prop_assert!(lo <= hi);
        prop_assert!(hi <= bound * (1.0 + 1e-12) || bound.is_infinite());
    }

    #[test]
    fn thresholds_follow_prelog_order((k, m, n) in cc_triple(), xi in 1e-3..100.0f64, dxi in 0.0..10.0f64) {
        let w = prelog_set(k, m, n).unwrap();
        prop_assert!(1.0 == w.omega1 && w.omega1 <= w.omega2 && w.omega2 <= w.omega3);
        let t: Vec<f64> = [w.omega1, w.omega2, w.omega3].iter().map(|&o| private_threshold(o, xi)).collect();
        prop_assert!(t[0] >= t[1] && t[1] >= t[2] && t[2] > 0.0);
        prop_assert!(relative_close(t[0], xi, 1e-14));
        prop_assert!(private_threshold(w.omega2, xi + dxi) >= t[1]);
    }

    #[test]
    fn outage_region_matches_support(
        kind in kind(), class in class(), split in split(), t in 1e-4..50.0f64, power in 1e-3..1e6f64,
    ) {
        let params = SystemParams { power, ..SystemParams::default() };
        let spec = DistSpec::new(kind, class, &params, &stream_powers(power, split));
        let outage = outage_region(kind, class, t, split);
        prop_assert_eq!(outage, !spec.in_support(t));
        prop_assert_eq!(outage, t.partial_cmp(&spec.theta()) != Some(std::cmp::Ordering::Less));
        if outage {
            prop_assert_eq!(spec.coverage(t), 0.0);
        }
    }

    #[test]
    fn closed_form_outage_inequalities_agree_with_bounds(
        kind in kind(), class in class(), split in split(), t in 1e-4..50.0f64,
    ) {
        if let Some(closed) = closed_form_outage(kind, class, t, split) {
            prop_assert_eq!(closed, outage_region(kind, class, t, split));
        }
    }

    #[test]
    fn coverage_is_a_ccdf(
        kind in kind(), class in class(), split in interior_split(),
        power in 1e-2..1e4f64, t in 1e-3..20.0f64, dt in 0.0..5.0f64,
    ) {
        let params = SystemParams { power, ..SystemParams::default() };
        let spec = DistSpec::new(kind, class, &params, &stream_powers(power, split));
        let (a, b) = (spec.coverage(t), spec.coverage(t + dt));
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a);
    }

    #[test]
    fn coverage_grows_with_power(
        kind in kind(), class in class(), split in interior_split(),
        power in 1e-2..1e4f64, factor in 1.0..100.0f64, frac in 0.01..0.99f64,
    ) {
        let base = SystemParams::default();
        let spec = |p: f64| DistSpec::new(kind, class, &SystemParams { power: p, ..base.clone() }, &stream_powers(p, split));
        let theta = spec(power).theta();
        let t = if theta.is_finite() { frac * theta } else { frac * 10.0 };
        prop_assert!(spec(power * factor).coverage(t) >= spec(power).coverage(t) - 1e-15);
    }
}

proptest! {
    // The branch constants are checked against the SINRs at the gain where
    // the common stream is decoded with equality; 10^4 random configurations.
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn branch_flags_match_per_draw_decoding(
        class in class(), split in split(), iic in any::<bool>(),
        power in 1e-2..1e6f64, zeta in 1e-3..5.0f64, xi in 1e-3..5.0f64,
    ) {
        let noise = 1e-5;
        let powers = stream_powers(power, split);
        let kinds = StreamKinds::new(iic);
        let bc = BranchConstants::new(&theta_set(class, &powers), zeta, xi, iic);
        let branch = bc.branch(xi);

        // exactly the two bounds decide between the no-common branches
        let common_bound = kinds.common.bound(class, &powers);
        prop_assert_eq!(bc.decodable, zeta < common_bound);
        let interfered_bound = kinds.interfered.bound(class, &powers);
        prop_assert_eq!(bc.interfered_bound, interfered_bound);
        if !bc.decodable {
            let expected = if xi < interfered_bound { RateBranch::InterferedPrivate } else { RateBranch::Outage };
            prop_assert_eq!(branch, expected);
            return Ok(());
        }

        // gain at which the common SINR equals zeta
        let (signal, interference) = kinds.common.linear_form(class, &powers);
        let g0 = noise / (signal / zeta - interference);
        prop_assert!(g0 > 0.0);
        let private = instantaneous_sinr(kinds.private, class, &powers, g0, noise);
        let interfered = instantaneous_sinr(kinds.interfered, class, &powers, g0, noise);
        prop_assert!(relative_close(private, bc.theta0, 1e-9) || (private > 1e12 && bc.theta0 > 1e12),
            "theta0 {} vs {}", bc.theta0, private);
        prop_assert!(relative_close(interfered, bc.theta_i, 1e-9), "theta_i {} vs {}", bc.theta_i, interfered);

        // away from ties the flags are the decoding implications
        let margin = 1e-9;
        if (interfered - xi).abs() > margin * xi {
            prop_assert_eq!(bc.common_dominates, interfered <= xi);
        }
        if (private - xi).abs() > margin * xi {
            prop_assert_eq!(bc.private_always, private > xi);
        }
        let expected = match (bc.common_dominates, bc.private_always) {
            (false, _) => RateBranch::Mixed,
            (true, true) => RateBranch::CommonAndPrivate,
            (true, false) => RateBranch::CommonPartialPrivate,
        };
        prop_assert_eq!(branch, expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_subcase_evaluates_to_a_rate(
        split in split(), power in 1e-1..1e5f64, zeta in 0.05..3.0f64, xi in 0.05..3.0f64,
        u in 0.0..=1.0f64, alpha in 2.5..4.5f64, mode in proptest::sample::select(Mode::ALL.to_vec()),
    ) {
        let params = SystemParams { power, zeta, xi, u, path_loss: alpha, ..SystemParams::default() };
        let engine = RateEngine::new(&params, split).unwrap();
        for subcase in mode.subcases(params.receivers) {
            let r = engine.report(&subcase).unwrap().rates;
            for (name, v) in crs_core::rates::RateQuantities::NAMES.iter().zip(r.values()) {
                prop_assert!(v.is_finite() && v >= 0.0, "{} {} = {}", subcase, name, v);
            }
            prop_assert!(r.q_center <= 1.0 && r.q_edge <= 1.0);
            for (class, q, rate) in [
                (ReceiverClass::Center, r.q_center, r.r_center),
                (ReceiverClass::Edge, r.q_edge, r.r_edge),
            ] {
                let iic = subcase.iic_at.applies_to(class);
                if engine.branch(class, subcase.load(class), iic).unwrap() == RateBranch::Outage {
                    prop_assert_eq!(q, 0.0);
                    prop_assert_eq!(rate, 0.0);
                }
            }
        }
    }

    #[test]
    fn rates_are_stable_under_looser_quadrature(split in interior_split(), mode in proptest::sample::select(Mode::ALL.to_vec())) {
        let params = SystemParams::default();
        let tight = RateEngine::new(&params, split).unwrap();
        let loose = RateEngine::new(&params, split).unwrap().with_tolerance_scale(1e3);
        for subcase in mode.subcases(params.receivers) {
            let a = tight.report(&subcase).unwrap().rates.values();
            let b = loose.report(&subcase).unwrap().rates.values();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-5 * x.abs().max(1e-3), "{}: {} vs {}", subcase, x, y);
            }
        }
    }
}

/// `E[R(min(η_c, η_e)); min > ζ]` via `P[min > t] = π_c(t) π_e(t)` and
/// integration by parts: a single integral, refined geometrically towards
/// ζ where a far receiver's mass concentrates.
fn joint_common_oracle(params: &SystemParams, split: PowerSplit, iic_at: IicAt) -> Option<f64> {
    let powers = stream_powers(params.power, split);
    let dist =
        |class: ReceiverClass| DistSpec::new(StreamKinds::new(iic_at.applies_to(class)).common, class, params, &powers);
    let (dc, de) = (dist(ReceiverClass::Center), dist(ReceiverClass::Edge));
    let zeta = params.zeta;
    let norm = dc.coverage(zeta) * de.coverage(zeta);
    if norm <= 0.0 {
        return None;
    }
    let hi = dc.theta().min(de.theta()).min(zeta + 1e4);
    let mut breaks: Vec<f64> = (1..=40).rev().map(|k| zeta + (hi - zeta) * 2f64.powi(-k)).collect();
    breaks.insert(0, zeta);
    breaks.extend((1..=400).map(|i| zeta + (hi - zeta) * i as f64 / 400.0));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let body = Quadrature::with_rel_tol(1e-12)
        .integrate_pieces(|t| dc.coverage(t) * de.coverage(t) / ((1.0 + t) * std::f64::consts::LN_2), &breaks)
        .unwrap();
    Some(((1.0 + zeta).log2() * norm + body) / norm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn joint_common_rate_matches_single_integral(
        split in interior_split(), alpha in 3.0..4.5f64, zeta in 0.1..2.0f64,
        iic_at in proptest::sample::select(vec![IicAt::None, IicAt::Center, IicAt::Edge]),
    ) {
        let params = SystemParams { path_loss: alpha, zeta, ..SystemParams::default() };
        let engine = RateEngine::new(&params, split).unwrap();
        let got = engine.common_rate_both(iic_at).unwrap();
        match joint_common_oracle(&params, split, iic_at) {
            None => prop_assert!(got.empty),
            Some(want) => prop_assert!(relative_close(got.value, want, 1e-7), "{} vs oracle {}", got.value, want),
        }
    }
}

#[test]
fn degenerate_power_splits_are_total() {
    let params = SystemParams::default();
    for (beta, rho) in [(0.0, 0.0), (0.0, 0.5), (0.0, 1.0), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0), (1.0, 0.0), (1.0, 1.0)]
    {
        let engine = RateEngine::new(&params, PowerSplit::new(beta, rho).unwrap()).unwrap();
        for mode in Mode::ALL {
            for subcase in mode.subcases(params.receivers) {
                let r = engine.report(&subcase).unwrap().rates;
                assert!(
                    r.values().iter().all(|v| v.is_finite() && *v >= 0.0),
                    "beta={beta} rho={rho} {subcase}: {r:?}"
                );
            }
        }
    }
}

#[test]
fn high_power_coverage_approaches_one_below_the_bound() {
    let split = PowerSplit::new(0.6, 0.5).unwrap();
    for kind in SinrKind::ALL {
        for class in ReceiverClass::ALL {
            let power = 1e12;
            let params = SystemParams { power, ..SystemParams::default() };
            let spec = DistSpec::new(kind, class, &params, &stream_powers(power, split));
            let theta = spec.theta();
            let t = if theta.is_finite() { 0.9 * theta } else { 10.0 };
            assert!(spec.coverage(t) > 0.999, "{kind}/{class}: {}", spec.coverage(t));
        }
    }
}
