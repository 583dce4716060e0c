//! The jointly decoded common rate against an independent single-integral
//! form: for independent X, Y above ζ,
//! `E[R(min(X, Y)); X > ζ, Y > ζ] = R(ζ) π_X(ζ) π_Y(ζ) + ∫_ζ R'(t) π_X(t) π_Y(t) dt`.

use approx::assert_relative_eq;
use crs_core::caching::IicAt;
use crs_core::model::{PowerSplit, ReceiverClass, SinrKind, SystemParams};
use crs_core::quadrature::Quadrature;
use crs_core::rates::RateEngine;

fn single_integral_oracle(engine: &RateEngine, iic_at: IicAt) -> f64 {
    let zeta = engine.params().zeta;
    let kind = |class| if iic_at.applies_to(class) { SinrKind::CommonIic } else { SinrKind::Common };
    let dc = engine.dist(kind(ReceiverClass::Center), ReceiverClass::Center);
    let de = engine.dist(kind(ReceiverClass::Edge), ReceiverClass::Edge);
    let norm = dc.coverage(zeta) * de.coverage(zeta);
    if norm == 0.0 {
        return 0.0;
    }
    let top = dc.theta().min(de.theta());
    // R(1, t) = log2(1 + t), R'(t) = 1 / ((1 + t) ln 2); substitute t = top - (top - ζ) e^{-v}
    let f = |v: f64| {
        let w = (-v).exp();
        let t = top - (top - zeta) * w;
        let jac = (top - zeta) * w;
        dc.coverage(t) * de.coverage(t) / ((1.0 + t) * std::f64::consts::LN_2) * jac
    };
    let tail = Quadrature::with_rel_tol(1e-11).integrate_pieces(f, &[0.0, 1.0, 3.0, 8.0, 20.0, 40.0]).unwrap();
    ((1.0 + zeta).log2() * norm + tail) / norm
}

#[test]
fn common_rate_both_matches_single_integral_form() {
    let params = SystemParams::default();
    for beta in [0.4, 0.6, 0.8, 0.95] {
        let engine = RateEngine::new(&params, PowerSplit::new(beta, 0.5).unwrap()).unwrap();
        for iic_at in [IicAt::None, IicAt::Center, IicAt::Edge] {
            let start = std::time::Instant::now();
            let v = engine.common_rate_both(iic_at).unwrap();
            let oracle = single_integral_oracle(&engine, iic_at);
            eprintln!("beta={beta} {iic_at:?}: {} vs {oracle} ({:?})", v.value, start.elapsed());
            assert_relative_eq!(v.value, oracle, max_relative = 1e-7);
        }
    }
}
