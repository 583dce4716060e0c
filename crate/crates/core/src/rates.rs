//! Conditional achieved rates.
//!
//! Every rate is a conditional expectation `E[R | ε] = E[1{ε} R] / P[ε]`
//! over the position and fading of a typical receiver, taking the value 0
//! (flagged as an empty event) when `P[ε] = 0`.
//!
//! For one receiver all SINRs are increasing functions of the same channel
//! gain `L`, so each decoding event is `L > s` for a kind-specific `s`.
//! The branch conditions of the rate expressions compare these thresholds; they are
//! evaluated in cross-multiplied form, which agrees with the ratio form
//! whenever its denominator is positive and stays meaningful otherwise.

use std::cell::RefCell;
use std::fmt;
use std::sync::OnceLock;

use crate::caching::{IicAt, Mode, Subcase};
use crate::distributions::DistSpec;
use crate::error::{invalid, CrsError, Result};
use crate::model::{
    rate, stream_powers, theta_set, PowerSplit, PrelogIndex, ReceiverClass, SinrKind, StreamPowers, SystemParams,
    ThetaSet,
};
use crate::quadrature::Quadrature;

/// A conditional rate together with whether its conditioning event was empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateValue {
    pub value: f64,
    pub empty: bool,
}

impl RateValue {
    pub const EMPTY: RateValue = RateValue { value: 0.0, empty: true };

    fn conditional(integral: f64, probability: f64) -> RateValue {
        if probability > 0.0 {
            RateValue { value: integral / probability, empty: false }
        } else {
            RateValue::EMPTY
        }
    }
}

/// Which expression of the achieved rate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateBranch {
    /// Common stream decoded; the private stream only on part of that event.
    CommonPartialPrivate,
    /// Common stream decoded, and then the private stream always as well.
    CommonAndPrivate,
    /// Either the common stream (then the private one), or only the private
    /// stream under interference from the common one.
    Mixed,
    /// The common stream is never decodable; only the private stream under
    /// interference.
    InterferedPrivate,
    Outage,
}

impl RateBranch {
    pub fn name(self) -> &'static str {
        match self {
            RateBranch::CommonPartialPrivate => "common+partial-private",
            RateBranch::CommonAndPrivate => "common+private",
            RateBranch::Mixed => "mixed",
            RateBranch::InterferedPrivate => "interfered-private",
            RateBranch::Outage => "outage",
        }
    }
}

impl fmt::Display for RateBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The three SINR kinds a receiver decodes with, with or without IIC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKinds {
    pub common: SinrKind,
    pub private: SinrKind,
    pub interfered: SinrKind,
}

impl StreamKinds {
    pub fn new(iic: bool) -> Self {
        if iic {
            StreamKinds {
                common: SinrKind::CommonIic,
                private: SinrKind::PrivateIic,
                interfered: SinrKind::PrivateWithInterferenceIic,
            }
        } else {
            StreamKinds {
                common: SinrKind::Common,
                private: SinrKind::Private,
                interfered: SinrKind::PrivateWithInterference,
            }
        }
    }
}

/// Branch quantities for one receiver and one private threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchConstants {
    /// The common stream has positive decoding probability.
    pub decodable: bool,
    /// Whenever the common stream fails, so does the interfered private stream.
    pub common_dominates: bool,
    /// Whenever the common stream is decoded, so is the private stream.
    pub private_always: bool,
    /// `λ` without IIC, `ϑ4/ζ - 1` with IIC.
    pub lambda: f64,
    /// Private SINR at the edge of the common-decoding event.
    pub theta0: f64,
    /// Interfered private SINR at the edge of the common-decoding event.
    pub theta_i: f64,
    /// Bound of the interfered private SINR.
    pub interfered_bound: f64,
}

impl BranchConstants {
    // negated comparisons keep NaN (a 0/0 bound) on the "not decoded" side
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(theta: &ThetaSet, zeta: f64, xi: f64, iic: bool) -> Self {
        if iic {
            let decodable = zeta < theta.theta4;
            let kappa = theta.theta4 / zeta - 1.0;
            BranchConstants {
                decodable,
                common_dominates: kappa >= 1.0 / xi - theta.theta4,
                private_always: !(xi * kappa >= 1.0),
                lambda: kappa,
                theta0: 1.0 / kappa,
                theta_i: 1.0 / (kappa + theta.theta4),
                interfered_bound: 1.0 / theta.theta4,
            }
        } else {
            let decodable = zeta < theta.theta1;
            let lambda = theta.theta4 * (1.0 / zeta - 1.0 / theta.theta1);
            BranchConstants {
                decodable,
                common_dominates: lambda >= 1.0 / xi - 1.0 / theta.theta3,
                private_always: !(lambda >= 1.0 / xi - 1.0 / theta.theta2),
                lambda,
                theta0: 1.0 / (lambda + 1.0 / theta.theta2),
                theta_i: 1.0 / (lambda + 1.0 / theta.theta3),
                interfered_bound: theta.theta3,
            }
        }
    }

    pub fn branch(&self, xi: f64) -> RateBranch {
        if self.decodable {
            if !self.common_dominates {
                RateBranch::Mixed
            } else if self.private_always {
                RateBranch::CommonAndPrivate
            } else {
                RateBranch::CommonPartialPrivate
            }
        } else if xi < self.interfered_bound {
            RateBranch::InterferedPrivate
        } else {
            RateBranch::Outage
        }
    }
}

/// Per-receiver rate, sum rate and non-outage probabilities for one subcase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRate {
    pub r_center: f64,
    pub r_edge: f64,
    pub r_sum: f64,
    pub q_center: f64,
    pub q_edge: f64,
    /// Both receivers are always in outage.
    pub empty: bool,
}

/// How a report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    MonteCarlo,
    /// Infinite-transmit-power limit.
    Asymptotic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::MonteCarlo => "mc",
            Method::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All rate quantities of one subcase.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateQuantities {
    pub r0_both: f64,
    pub r0_center_only: f64,
    pub r0_edge_only: f64,
    pub rs0_center: f64,
    pub rs0_edge: f64,
    pub rp_center: f64,
    pub rp_edge: f64,
    pub rpi_center: f64,
    pub rpi_edge: f64,
    pub r_center: f64,
    pub r_edge: f64,
    pub r_sum: f64,
    pub q_center: f64,
    pub q_edge: f64,
}

impl RateQuantities {
    pub const NAMES: [&'static str; 14] = [
        "R0_both",
        "R0_center_only",
        "R0_edge_only",
        "Rs0_center",
        "Rs0_edge",
        "Rp_center",
        "Rp_edge",
        "RpI_center",
        "RpI_edge",
        "R_center",
        "R_edge",
        "R_sum",
        "q_center",
        "q_edge",
    ];

    pub fn values(&self) -> [f64; 14] {
        [
            self.r0_both,
            self.r0_center_only,
            self.r0_edge_only,
            self.rs0_center,
            self.rs0_edge,
            self.rp_center,
            self.rp_edge,
            self.rpi_center,
            self.rpi_edge,
            self.r_center,
            self.r_edge,
            self.r_sum,
            self.q_center,
            self.q_edge,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub subcase: Subcase,
    pub method: Method,
    pub rates: RateQuantities,
    /// Standard errors of the Monte-Carlo estimates (NaN where the
    /// conditioning event was never observed).
    pub stderr: Option<RateQuantities>,
}

fn iic_index(iic_at: IicAt) -> usize {
    match iic_at {
        IicAt::None => 0,
        IicAt::Center => 1,
        IicAt::Edge => 2,
    }
}

fn class_index(class: ReceiverClass, iic: bool) -> usize {
    (class as usize) * 2 + iic as usize
}

/// Share of the jointly decoded common rate that goes to `class`.
pub fn common_share(class: ReceiverClass, u: f64) -> f64 {
    match class {
        ReceiverClass::Center => u,
        ReceiverClass::Edge => 1.0 - u,
    }
}

/// Analytic evaluator for one parameter point.
#[derive(Debug)]
pub struct RateEngine {
    params: SystemParams,
    powers: StreamPowers,
    quad: Quadrature,
    outer: Quadrature,
    both: [OnceLock<RateValue>; 3],
    single: [OnceLock<RateValue>; 4],
}

impl RateEngine {
    pub fn new(params: &SystemParams, split: PowerSplit) -> Result<Self> {
        params.validate()?;
        Ok(Self::with_powers(params, stream_powers(params.power, split)))
    }

    pub fn with_powers(params: &SystemParams, powers: StreamPowers) -> Self {
        RateEngine {
            params: params.clone(),
            powers,
            quad: Quadrature::default(),
            outer: Quadrature::with_rel_tol(1e-8),
            both: Default::default(),
            single: Default::default(),
        }
    }

    /// Scales both integration tolerances by `factor`.
    pub fn with_tolerance_scale(mut self, factor: f64) -> Self {
        self.quad.rel_tol *= factor;
        self.outer.rel_tol *= factor;
        self.both = Default::default();
        self.single = Default::default();
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn powers(&self) -> &StreamPowers {
        &self.powers
    }

    pub fn dist(&self, kind: SinrKind, class: ReceiverClass) -> DistSpec {
        DistSpec::new(kind, class, &self.params, &self.powers)
    }

    pub fn coverage(&self, kind: SinrKind, class: ReceiverClass, t: f64) -> f64 {
        self.dist(kind, class).coverage(t)
    }

    pub fn theta(&self, class: ReceiverClass) -> ThetaSet {
        theta_set(class, &self.powers)
    }

    /// `(ω, Ξ(ω))` for a request type.
    pub fn threshold(&self, omega_index: PrelogIndex) -> Result<(f64, f64)> {
        let omega = self.params.prelog(omega_index)?;
        Ok((omega, self.params.private_threshold_for(omega_index)?))
    }

    pub fn branch_constants(
        &self,
        class: ReceiverClass,
        omega_index: PrelogIndex,
        iic: bool,
    ) -> Result<BranchConstants> {
        let (_, xi) = self.threshold(omega_index)?;
        Ok(BranchConstants::new(&self.theta(class), self.params.zeta, xi, iic))
    }

    pub fn branch(&self, class: ReceiverClass, omega_index: PrelogIndex, iic: bool) -> Result<RateBranch> {
        let (_, xi) = self.threshold(omega_index)?;
        Ok(BranchConstants::new(&self.theta(class), self.params.zeta, xi, iic).branch(xi))
    }

    /// `∫_lo^hi R(ω, t) g(t) dt` for one distribution.
    fn rate_integral(&self, d: &DistSpec, omega: f64, lo: f64, hi: f64, quad: &Quadrature) -> Result<f64> {
        d.integrate(|t| rate(omega, t), lo, hi, quad)
    }

    fn common_kind(class: ReceiverClass, iic_at: IicAt) -> SinrKind {
        StreamKinds::new(iic_at.applies_to(class)).common
    }

    /// Common rate when both receivers decode the common stream, averaged
    /// over the smaller of the two SINRs.
    pub fn common_rate_both(&self, iic_at: IicAt) -> Result<RateValue> {
        let cell = &self.both[iic_index(iic_at)];
        if let Some(v) = cell.get() {
            return Ok(*v);
        }
        let v = self.compute_common_both(iic_at)?;
        let _ = cell.set(v);
        Ok(v)
    }

    fn compute_common_both(&self, iic_at: IicAt) -> Result<RateValue> {
        let zeta = self.params.zeta;
        let dc = self.dist(Self::common_kind(ReceiverClass::Center, iic_at), ReceiverClass::Center);
        let de = self.dist(Self::common_kind(ReceiverClass::Edge, iic_at), ReceiverClass::Edge);
        let norm = dc.coverage(zeta) * de.coverage(zeta);
        if norm <= 0.0 {
            return Ok(RateValue::EMPTY);
        }
        // region where the center SINR is the smaller one, then the other
        let first = self.min_integral(&de, &dc)?;
        let second = self.min_integral(&dc, &de)?;
        Ok(RateValue::conditional(first + second, norm))
    }

    /// `∫_ζ g_outer(y) ∫_ζ^{min(y, θ_inner)} R(1, x) g_inner(x) dx dy`.
    fn min_integral(&self, outer: &DistSpec, inner: &DistSpec) -> Result<f64> {
        let zeta = self.params.zeta;
        let theta_in = inner.theta();
        let failure = RefCell::new(None);
        // the inner upper limit stops moving at y = θ_inner, and the inner
        // integral saturates once y passes the bulk of the inner mass
        let mut kinks = inner.decay_points(zeta);
        kinks.push(theta_in);
        let value = outer.integrate_with_breaks(
            |y| {
                let upper = y.min(theta_in);
                if upper <= zeta {
                    return 0.0;
                }
                match self.rate_integral(inner, 1.0, zeta, upper, &self.quad) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            },
            zeta,
            outer.theta(),
            &kinks,
            &self.outer,
        )?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }

    /// Common rate of `class` when it alone decodes the common stream.
    pub fn common_rate_single(&self, class: ReceiverClass, iic: bool) -> Result<RateValue> {
        let cell = &self.single[class_index(class, iic)];
        if let Some(v) = cell.get() {
            return Ok(*v);
        }
        let d = self.dist(StreamKinds::new(iic).common, class);
        let zeta = self.params.zeta;
        let v = RateValue::conditional(self.rate_integral(&d, 1.0, zeta, d.theta(), &self.quad)?, d.coverage(zeta));
        let _ = cell.set(v);
        Ok(v)
    }

    /// Rate from the common stream at `class`, given it is decoded there.
    pub fn common_stream_rate(&self, class: ReceiverClass, omega_index: PrelogIndex, iic_at: IicAt) -> Result<f64> {
        let omega = self.params.prelog(omega_index)?;
        let other = class.other();
        let p_other = self.coverage(Self::common_kind(other, iic_at), other, self.params.zeta);
        let both = self.common_rate_both(iic_at)?.value;
        let single = self.common_rate_single(class, iic_at.applies_to(class))?.value;
        let share = common_share(class, self.params.u);
        Ok(p_other * omega * share * both + (1.0 - p_other) * omega * single)
    }

    /// Rate of the private stream decoded after the common stream.
    pub fn private_rate_after_common(
        &self,
        class: ReceiverClass,
        omega_index: PrelogIndex,
        iic: bool,
    ) -> Result<RateValue> {
        let (omega, xi) = self.threshold(omega_index)?;
        let theta = self.theta(class);
        let bc = BranchConstants::new(&theta, self.params.zeta, xi, iic);
        let kinds = StreamKinds::new(iic);
        let dp = self.dist(kinds.private, class);
        let feasible = if iic { bc.decodable } else { bc.decodable && xi < theta.theta2 };
        if !feasible {
            return Ok(RateValue::EMPTY);
        }
        if bc.private_always {
            let d0 = self.dist(kinds.common, class);
            let integral = self.rate_integral(&dp, omega, bc.theta0, dp.theta(), &self.quad)?;
            Ok(RateValue::conditional(integral, d0.coverage(self.params.zeta)))
        } else {
            let integral = self.rate_integral(&dp, omega, xi, dp.theta(), &self.quad)?;
            Ok(RateValue::conditional(integral, dp.coverage(xi)))
        }
    }

    /// Rate of the private stream decoded while the common stream interferes.
    pub fn private_rate_with_interference(
        &self,
        class: ReceiverClass,
        omega_index: PrelogIndex,
        iic: bool,
    ) -> Result<RateValue> {
        let (omega, xi) = self.threshold(omega_index)?;
        let bc = self.branch_constants(class, omega_index, iic)?;
        let kinds = StreamKinds::new(iic);
        let dpi = self.dist(kinds.interfered, class);
        if !bc.decodable {
            if xi < bc.interfered_bound {
                let integral = self.rate_integral(&dpi, omega, xi, dpi.theta(), &self.quad)?;
                return Ok(RateValue::conditional(integral, dpi.coverage(xi)));
            }
            return Ok(RateValue::EMPTY);
        }
        if !bc.common_dominates && xi < bc.theta_i {
            let d0 = self.dist(kinds.common, class);
            let integral = self.rate_integral(&dpi, omega, xi, bc.theta_i, &self.quad)?;
            let p = dpi.coverage(xi) - d0.coverage(self.params.zeta);
            return Ok(RateValue::conditional(integral, p));
        }
        Ok(RateValue::EMPTY)
    }

    /// Achieved rate of `class`, conditioned on the receiver decoding at
    /// least one stream.
    pub fn achieved_rate(&self, class: ReceiverClass, omega_index: PrelogIndex, iic_at: IicAt) -> Result<f64> {
        let (_, xi) = self.threshold(omega_index)?;
        let iic = iic_at.applies_to(class);
        let bc = self.branch_constants(class, omega_index, iic)?;
        let kinds = StreamKinds::new(iic);
        let zeta = self.params.zeta;
        let p0 = self.coverage(kinds.common, class, zeta);
        let rate = match bc.branch(xi) {
            RateBranch::Outage => 0.0,
            RateBranch::InterferedPrivate => self.private_rate_with_interference(class, omega_index, iic)?.value,
            _ if p0 <= 0.0 => 0.0,
            RateBranch::CommonPartialPrivate => {
                let pp = self.coverage(kinds.private, class, xi);
                self.common_stream_rate(class, omega_index, iic_at)?
                    + pp / p0 * self.private_rate_after_common(class, omega_index, iic)?.value
            }
            RateBranch::CommonAndPrivate => {
                self.common_stream_rate(class, omega_index, iic_at)?
                    + self.private_rate_after_common(class, omega_index, iic)?.value
            }
            RateBranch::Mixed => {
                let ppi = self.coverage(kinds.interfered, class, xi);
                let w = p0 / ppi;
                w * (self.common_stream_rate(class, omega_index, iic_at)?
                    + self.private_rate_after_common(class, omega_index, iic)?.value)
                    + (1.0 - w) * self.private_rate_with_interference(class, omega_index, iic)?.value
            }
        };
        Ok(rate)
    }

    /// Probability that `class` decodes at least one stream.
    pub fn nonzero_probability(&self, class: ReceiverClass, omega_index: PrelogIndex, iic: bool) -> Result<f64> {
        let (_, xi) = self.threshold(omega_index)?;
        let bc = self.branch_constants(class, omega_index, iic)?;
        let kinds = StreamKinds::new(iic);
        Ok(if bc.decodable && bc.common_dominates {
            self.coverage(kinds.common, class, self.params.zeta)
        } else {
            self.coverage(kinds.interfered, class, xi)
        })
    }

    /// Per-receiver and sum rate for the request types `(center, edge)`.
    pub fn sum_rate(&self, center: PrelogIndex, edge: PrelogIndex, iic_at: IicAt) -> Result<SumRate> {
        let r_center = self.achieved_rate(ReceiverClass::Center, center, iic_at)?;
        let r_edge = self.achieved_rate(ReceiverClass::Edge, edge, iic_at)?;
        let q_center =
            self.nonzero_probability(ReceiverClass::Center, center, iic_at.applies_to(ReceiverClass::Center))?;
        let q_edge = self.nonzero_probability(ReceiverClass::Edge, edge, iic_at.applies_to(ReceiverClass::Edge))?;
        let either = q_center + q_edge - q_center * q_edge;
        let (r_sum, empty) =
            if either > 0.0 { ((q_center * r_center + q_edge * r_edge) / either, false) } else { (0.0, true) };
        Ok(SumRate { r_center, r_edge, r_sum, q_center, q_edge, empty })
    }

    /// Every rate quantity of a subcase.
    pub fn report(&self, subcase: &Subcase) -> Result<RateReport> {
        subcase.check()?;
        let iic_at = subcase.iic_at;
        let c = ReceiverClass::Center;
        let e = ReceiverClass::Edge;
        let ic = iic_at.applies_to(c);
        let ie = iic_at.applies_to(e);
        let sum = self.sum_rate(subcase.center, subcase.edge, iic_at)?;
        let rates = RateQuantities {
            r0_both: self.common_rate_both(iic_at)?.value,
            r0_center_only: self.common_rate_single(c, ic)?.value,
            r0_edge_only: self.common_rate_single(e, ie)?.value,
            rs0_center: self.common_stream_rate(c, subcase.center, iic_at)?,
            rs0_edge: self.common_stream_rate(e, subcase.edge, iic_at)?,
            rp_center: self.private_rate_after_common(c, subcase.center, ic)?.value,
            rp_edge: self.private_rate_after_common(e, subcase.edge, ie)?.value,
            rpi_center: self.private_rate_with_interference(c, subcase.center, ic)?.value,
            rpi_edge: self.private_rate_with_interference(e, subcase.edge, ie)?.value,
            r_center: sum.r_center,
            r_edge: sum.r_edge,
            r_sum: sum.r_sum,
            q_center: sum.q_center,
            q_edge: sum.q_edge,
        };
        Ok(RateReport { subcase: *subcase, method: Method::Analytic, rates, stderr: None })
    }
}

/// Evaluates a subcase of `mode`, rejecting subcases of other modes.
pub fn mode_evaluate(mode: Mode, subcase: &Subcase, engine: &RateEngine) -> Result<RateReport> {
    if subcase.mode != mode {
        return Err(CrsError::InconsistentSubcase { mode: mode.to_string(), subcase: subcase.label() });
    }
    engine.report(subcase)
}

/// Convenience wrapper building a one-off engine.
pub fn sum_rate(subcase: &Subcase, params: &SystemParams, split: PowerSplit) -> Result<SumRate> {
    subcase.check()?;
    RateEngine::new(params, split)?.sum_rate(subcase.center, subcase.edge, subcase.iic_at)
}

/// Rate of `class` in the limit of infinite transmit power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymptoticRate {
    Bounded(f64),
    Unbounded,
}

impl AsymptoticRate {
    pub fn value(self) -> Option<f64> {
        match self {
            AsymptoticRate::Bounded(v) => Some(v),
            AsymptoticRate::Unbounded => None,
        }
    }

    pub fn plus(self, other: AsymptoticRate) -> AsymptoticRate {
        match (self, other) {
            (AsymptoticRate::Bounded(a), AsymptoticRate::Bounded(b)) => AsymptoticRate::Bounded(a + b),
            _ => AsymptoticRate::Unbounded,
        }
    }
}

impl fmt::Display for AsymptoticRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticRate::Bounded(v) => write!(f, "{v}"),
            AsymptoticRate::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// High-power limit of the achieved rate of `class`. With IIC at `class`
/// the rate grows without bound whenever the common stream is decodable.
pub fn asymptotic_rate(
    class: ReceiverClass,
    omega_index: PrelogIndex,
    params: &SystemParams,
    split: PowerSplit,
    iic: bool,
) -> Result<AsymptoticRate> {
    let (b, r) = (split.beta(), split.rho());
    if !(b > 0.0 && b < 1.0 && r > 0.0 && r < 1.0) {
        return Err(invalid("beta/rho", "the high-power limits need beta and rho strictly inside (0, 1)"));
    }
    let powers = stream_powers(1.0, split);
    let theta = theta_set(class, &powers);
    let omega = params.prelog(omega_index)?;
    let xi = params.private_threshold_for(omega_index)?;
    let zeta = params.zeta;
    if iic {
        if zeta < theta.theta4 {
            return Ok(AsymptoticRate::Unbounded);
        }
        let bound = 1.0 / theta.theta4;
        return Ok(AsymptoticRate::Bounded(if bound > xi { rate(omega, bound) } else { 0.0 }));
    }
    let mut total = 0.0;
    if theta.theta1 > zeta {
        total += common_share(class, params.u) * rate(omega, theta.theta1);
        if theta.theta2 > xi {
            total += rate(omega, theta.theta2);
        }
    }
    if theta.theta1 < zeta && theta.theta3 > xi {
        total += rate(omega, theta.theta3);
    }
    Ok(AsymptoticRate::Bounded(total))
}

/// High-power limit of the sum rate.
pub fn asymptotic_sum_rate(
    center: PrelogIndex,
    edge: PrelogIndex,
    params: &SystemParams,
    split: PowerSplit,
    iic_at: IicAt,
) -> Result<AsymptoticRate> {
    let c = asymptotic_rate(ReceiverClass::Center, center, params, split, iic_at.applies_to(ReceiverClass::Center))?;
    let e = asymptotic_rate(ReceiverClass::Edge, edge, params, split, iic_at.applies_to(ReceiverClass::Edge))?;
    Ok(c.plus(e))
}
