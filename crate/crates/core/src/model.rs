//! System model: topology and power constants, the rate-splitting power
//! allocation, pre-log factors, private-stream thresholds and the six
//! instantaneous SINR expressions together with their interference-limited
//! upper bounds.

use std::fmt;

use crate::error::{invalid, CrsError, Result};

/// The two receiver classes of the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReceiverClass {
    Center,
    Edge,
}

impl ReceiverClass {
    pub const ALL: [ReceiverClass; 2] = [ReceiverClass::Center, ReceiverClass::Edge];

    pub fn other(self) -> ReceiverClass {
        match self {
            ReceiverClass::Center => ReceiverClass::Edge,
            ReceiverClass::Edge => ReceiverClass::Center,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReceiverClass::Center => "center",
            ReceiverClass::Edge => "edge",
        }
    }
}

impl fmt::Display for ReceiverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ReceiverClass {
    type Err = CrsError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "center" | "c" => Ok(ReceiverClass::Center),
            "edge" | "e" => Ok(ReceiverClass::Edge),
            other => Err(CrsError::Parse(format!("unknown receiver class `{other}`"))),
        }
    }
}

/// Which SINR expression a receiver sees.
///
/// The `*Iic` variants apply when the receiver removes the other class's
/// private stream using whole files from its own cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SinrKind {
    /// Common stream, both private streams interfere.
    Common,
    /// Own private stream after the common stream was cancelled.
    Private,
    /// Own private stream with the common stream still interfering.
    PrivateWithInterference,
    CommonIic,
    PrivateIic,
    PrivateWithInterferenceIic,
}

impl SinrKind {
    pub const ALL: [SinrKind; 6] = [
        SinrKind::Common,
        SinrKind::Private,
        SinrKind::PrivateWithInterference,
        SinrKind::CommonIic,
        SinrKind::PrivateIic,
        SinrKind::PrivateWithInterferenceIic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SinrKind::Common => "common",
            SinrKind::Private => "private",
            SinrKind::PrivateWithInterference => "private-interf",
            SinrKind::CommonIic => "common-iic",
            SinrKind::PrivateIic => "private-iic",
            SinrKind::PrivateWithInterferenceIic => "private-interf-iic",
        }
    }

    pub fn is_iic(self) -> bool {
        matches!(self, SinrKind::CommonIic | SinrKind::PrivateIic | SinrKind::PrivateWithInterferenceIic)
    }

    /// Writes the SINR as `signal / (interference + noise / gain)` and
    /// returns `(signal, interference)` powers.
    pub fn linear_form(self, class: ReceiverClass, powers: &StreamPowers) -> (f64, f64) {
        let own = powers.private(class);
        let other = powers.private(class.other());
        match self {
            SinrKind::Common => (powers.p0, powers.pc + powers.pe),
            SinrKind::Private => (own, other),
            SinrKind::PrivateWithInterference => (own, powers.p0 + other),
            SinrKind::CommonIic => (powers.p0, own),
            SinrKind::PrivateIic => (own, 0.0),
            SinrKind::PrivateWithInterferenceIic => (own, powers.p0),
        }
    }

    /// Interference-limited upper bound of this SINR (`+inf` when unbounded).
    pub fn bound(self, class: ReceiverClass, powers: &StreamPowers) -> f64 {
        let theta = ThetaSet::new(class, powers);
        match self {
            SinrKind::Common => theta.theta1,
            SinrKind::Private => theta.theta2,
            SinrKind::PrivateWithInterference => theta.theta3,
            SinrKind::CommonIic => theta.theta4,
            SinrKind::PrivateIic => f64::INFINITY,
            SinrKind::PrivateWithInterferenceIic => 1.0 / theta.theta4,
        }
    }
}

impl fmt::Display for SinrKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SinrKind {
    type Err = CrsError;

    fn from_str(s: &str) -> Result<Self> {
        SinrKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CrsError::Parse(format!("unknown SINR kind `{s}`")))
    }
}

/// Physical and topology constants plus decoding thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Transmit power P (W).
    pub power: f64,
    /// Noise variance sigma^2 (W).
    pub noise: f64,
    /// Path-loss exponent alpha.
    pub path_loss: f64,
    /// Radius of the center disk r_c (m).
    pub r_center: f64,
    /// Inner radius of the edge annulus r_e (m).
    pub r_edge: f64,
    /// Cell radius r_0 (m).
    pub r_outer: f64,
    /// Receivers per class K.
    pub receivers: u32,
    /// Cache size M (files).
    pub cache_size: u32,
    /// Number of files cached in partitions under coded caching, N.
    pub cc_depth: u32,
    /// Library size F.
    pub library: u32,
    /// Common-stream SINR threshold zeta.
    pub zeta: f64,
    /// Base private-stream threshold xi.
    pub xi: f64,
    /// Fraction of the jointly decoded common rate given to the center receiver.
    pub u: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            power: 10.0,
            noise: 1e-5,
            path_loss: 4.0,
            r_center: 50.0,
            r_edge: 60.0,
            r_outer: 70.0,
            receivers: 5,
            cache_size: 30,
            cc_depth: 50,
            library: 100,
            zeta: 0.5,
            xi: 1.0,
            u: 0.5,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be positive and finite, got {v}")))
            }
        };
        positive("P", self.power)?;
        positive("sigma2", self.noise)?;
        positive("r_c", self.r_center)?;
        positive("zeta", self.zeta)?;
        positive("xi", self.xi)?;
        if !(self.path_loss > 2.0 && self.path_loss.is_finite()) {
            return Err(invalid("alpha", format!("must exceed 2, got {}", self.path_loss)));
        }
        if !(self.r_center < self.r_edge && self.r_edge < self.r_outer && self.r_outer.is_finite()) {
            return Err(invalid(
                "radii",
                format!("need r_c < r_e < r_0, got {} / {} / {}", self.r_center, self.r_edge, self.r_outer),
            ));
        }
        if self.receivers == 0 {
            return Err(invalid("K", "at least one receiver per class"));
        }
        if self.cache_size == 0 || self.cc_depth <= self.cache_size {
            return Err(invalid("M/N", format!("need N > M >= 1, got M={} N={}", self.cache_size, self.cc_depth)));
        }
        if self.library < self.cc_depth {
            return Err(invalid("F", format!("need F >= N, got F={} N={}", self.library, self.cc_depth)));
        }
        if !(0.0..=1.0).contains(&self.u) {
            return Err(invalid("u", format!("must lie in [0, 1], got {}", self.u)));
        }
        Ok(())
    }

    /// Pre-log factor for a request type. Only the XOR factor needs an
    /// integral coded-caching replication parameter.
    pub fn prelog(&self, index: PrelogIndex) -> Result<f64> {
        match index {
            PrelogIndex::Efr => Ok(1.0),
            PrelogIndex::Pfr => {
                if self.cc_depth <= self.cache_size {
                    return Err(invalid("M/N", "need N > M"));
                }
                Ok(1.0 / (1.0 - self.cache_size as f64 / self.cc_depth as f64))
            }
            PrelogIndex::Xor => Ok(prelog_set(self.receivers, self.cache_size, self.cc_depth)?.omega3),
        }
    }

    /// Private-stream threshold for a request type.
    pub fn private_threshold_for(&self, index: PrelogIndex) -> Result<f64> {
        Ok(private_threshold(self.prelog(index)?, self.xi))
    }
}

/// Power allocation factors: `beta` for the common stream, `rho` for the
/// center share of the private power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    beta: f64,
    rho: f64,
}

impl PowerSplit {
    pub fn new(beta: f64, rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(invalid("beta", format!("must lie in [0, 1], got {beta}")));
        }
        if !(0.0..=1.0).contains(&rho) {
            return Err(invalid("rho", format!("must lie in [0, 1], got {rho}")));
        }
        Ok(PowerSplit { beta, rho })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Powers of the common stream and the two private streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamPowers {
    pub p0: f64,
    pub pc: f64,
    pub pe: f64,
}

impl StreamPowers {
    pub fn private(&self, class: ReceiverClass) -> f64 {
        match class {
            ReceiverClass::Center => self.pc,
            ReceiverClass::Edge => self.pe,
        }
    }

    pub fn total(&self) -> f64 {
        self.p0 + self.pc + self.pe
    }
}

pub fn stream_powers(power: f64, split: PowerSplit) -> StreamPowers {
    let private = (1.0 - split.beta) * power;
    StreamPowers { p0: split.beta * power, pc: private * split.rho, pe: private * (1.0 - split.rho) }
}

/// Ratio with the convention that a zero denominator yields `+inf`
/// (including `0/0`).
pub fn bound_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Interference-limited SINR bounds seen by one receiver class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaSet {
    /// p0 / (pn + pk); identical for both classes.
    pub theta1: f64,
    /// pn / pk
    pub theta2: f64,
    /// pn / (p0 + pk)
    pub theta3: f64,
    /// p0 / pn
    pub theta4: f64,
}

impl ThetaSet {
    pub fn new(class: ReceiverClass, powers: &StreamPowers) -> Self {
        let own = powers.private(class);
        let other = powers.private(class.other());
        let set = ThetaSet {
            theta1: bound_ratio(powers.p0, own + other),
            theta2: bound_ratio(own, other),
            theta3: bound_ratio(own, powers.p0 + other),
            theta4: bound_ratio(powers.p0, own),
        };
        if own == 0.0 && other == 0.0 {
            log::warn!("degenerate power split: both private streams carry zero power");
        }
        set
    }
}

pub fn theta_set(class: ReceiverClass, powers: &StreamPowers) -> ThetaSet {
    ThetaSet::new(class, powers)
}

/// Request type served to a receiver: entire file, partial file, or XOR multicast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrelogIndex {
    Efr = 1,
    Pfr = 2,
    Xor = 3,
}

impl PrelogIndex {
    pub const ALL: [PrelogIndex; 3] = [PrelogIndex::Efr, PrelogIndex::Pfr, PrelogIndex::Xor];

    pub fn label(self) -> &'static str {
        match self {
            PrelogIndex::Efr => "EFR",
            PrelogIndex::Pfr => "PFR",
            PrelogIndex::Xor => "XOR",
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

/// The three pre-log factors (inverse transmitted loads).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrelogSet {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
}

impl PrelogSet {
    pub fn get(&self, index: PrelogIndex) -> f64 {
        match index {
            PrelogIndex::Efr => self.omega1,
            PrelogIndex::Pfr => self.omega2,
            PrelogIndex::Xor => self.omega3,
        }
    }
}

/// Replication parameter t = MK/N, when it is a valid coded-caching value.
pub fn replication(k: u32, m: u32, n: u32) -> Result<u32> {
    let prod = m as u64 * k as u64;
    if n == 0 || m >= n || !prod.is_multiple_of(n as u64) {
        return Err(CrsError::CodedCachingConfig { k, m, n });
    }
    let t = (prod / n as u64) as u32;
    if t == 0 || t >= k {
        return Err(CrsError::CodedCachingConfig { k, m, n });
    }
    Ok(t)
}

pub fn prelog_set(k: u32, m: u32, n: u32) -> Result<PrelogSet> {
    let t = replication(k, m, n)?;
    let miss = 1.0 - m as f64 / n as f64;
    Ok(PrelogSet { omega1: 1.0, omega2: 1.0 / miss, omega3: (1.0 + t as f64) / miss })
}

/// SINR threshold of a private stream carrying a file of relative size `1/omega`.
pub fn private_threshold(omega: f64, xi: f64) -> f64 {
    // (1+xi)^(1/omega) - 1 without cancellation for large omega
    (xi.ln_1p() / omega).exp_m1()
}

/// Achievable rate `omega * log2(1 + sinr)`.
pub fn rate(omega: f64, sinr: f64) -> f64 {
    omega * sinr.ln_1p() / std::f64::consts::LN_2
}

/// Instantaneous SINR for channel gain `gain` (fading times path loss).
pub fn instantaneous_sinr(kind: SinrKind, class: ReceiverClass, powers: &StreamPowers, gain: f64, noise: f64) -> f64 {
    let (signal, interference) = kind.linear_form(class, powers);
    signal / (interference + noise / gain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn powers(p0: f64, pc: f64, pe: f64) -> StreamPowers {
        StreamPowers { p0, pc, pe }
    }

    #[test]
    fn stream_powers_examples() {
        let p = stream_powers(10.0, PowerSplit::new(0.5, 0.5).unwrap());
        assert_eq!(p, powers(5.0, 2.5, 2.5));
        let p = stream_powers(10.0, PowerSplit::new(1.0, 0.3).unwrap());
        assert_eq!(p, powers(10.0, 0.0, 0.0));
        let p = stream_powers(10.0, PowerSplit::new(0.0, 1.0).unwrap());
        assert_eq!(p, powers(0.0, 10.0, 0.0));
    }

    #[test]
    fn power_split_rejects_out_of_range() {
        assert!(PowerSplit::new(1.1, 0.5).is_err());
        assert!(PowerSplit::new(0.5, -0.1).is_err());
    }

    #[test]
    fn prelog_examples() {
        let w = prelog_set(5, 30, 50).unwrap();
        assert_relative_eq!(w.omega1, 1.0);
        assert_relative_eq!(w.omega2, 2.5, max_relative = 1e-14);
        assert_relative_eq!(w.omega3, 10.0, max_relative = 1e-14);
        let w = prelog_set(2, 5, 10).unwrap();
        assert_relative_eq!(w.omega2, 2.0, max_relative = 1e-14);
        assert_relative_eq!(w.omega3, 4.0, max_relative = 1e-14);
        let w = prelog_set(5, 6, 10).unwrap();
        assert_relative_eq!(w.omega2, 2.5, max_relative = 1e-14);
        assert_relative_eq!(w.omega3, 10.0, max_relative = 1e-14);
    }

    #[test]
    fn prelog_rejects_fractional_replication() {
        assert!(matches!(prelog_set(5, 7, 10), Err(CrsError::CodedCachingConfig { .. })));
        // t = K is outside 1..K-1
        assert!(prelog_set(2, 10, 10).is_err());
    }

    #[test]
    fn private_threshold_examples() {
        assert_eq!(private_threshold(1.0, 1.0), 1.0);
        assert_relative_eq!(private_threshold(2.5, 1.0), 2f64.powf(0.4) - 1.0, max_relative = 1e-14);
        assert!((private_threshold(2.5, 1.0) - 0.31951).abs() < 1e-5);
        assert!((private_threshold(10.0, 1.0) - 0.07177).abs() < 1e-5);
    }

    #[test]
    fn theta_examples() {
        let t = theta_set(ReceiverClass::Center, &powers(5.0, 2.5, 2.5));
        assert_eq!((t.theta1, t.theta2, t.theta4), (1.0, 1.0, 2.0));
        assert_relative_eq!(t.theta3, 1.0 / 3.0);
        let t = theta_set(ReceiverClass::Center, &powers(2.0, 4.0, 4.0));
        assert_eq!((t.theta1, t.theta2, t.theta4), (0.25, 1.0, 0.5));
        assert_relative_eq!(t.theta3, 2.0 / 3.0);
        let t = theta_set(ReceiverClass::Edge, &powers(10.0, 0.0, 0.0));
        assert_eq!(t.theta1, f64::INFINITY);
        assert_eq!(t.theta2, f64::INFINITY);
        assert_eq!(t.theta3, 0.0);
        assert_eq!(t.theta4, f64::INFINITY);
    }

    #[test]
    fn sinr_examples() {
        let p = powers(5.0, 2.5, 2.5);
        let c = ReceiverClass::Center;
        // noise/gain = 2.5
        let s = instantaneous_sinr(SinrKind::Private, c, &p, 1.0, 2.5);
        assert_relative_eq!(s, 0.5);
        let s = instantaneous_sinr(SinrKind::PrivateWithInterference, c, &p, 1.0, 2.5);
        assert_relative_eq!(s, 0.25);
        let s = instantaneous_sinr(SinrKind::Common, c, &p, f64::INFINITY, 1e-5);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn default_params_are_valid() {
        SystemParams::default().validate().unwrap();
        let p = SystemParams { r_edge: 40.0, ..SystemParams::default() };
        assert!(p.validate().is_err());
    }
}
