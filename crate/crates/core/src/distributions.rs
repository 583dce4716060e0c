//! Coverage probabilities and densities of the six SINR kinds for receivers
//! placed uniformly in the center disk or the edge annulus under Rayleigh
//! fading, and the power-allocation outage conditions.
//!
//! Every SINR has the form `signal / (interference + noise / L)` with
//! `L = h / (1 + d^alpha)`, so `η > t` is the event `L > s(t)` where
//! `s(t) = noise t / (signal - interference t)`. Averaging `P[h > s (1 + d^alpha)]`
//! over the position gives the closed forms in terms of lower incomplete
//! gamma functions. Densities are evaluated in the `s` domain, where they
//! are free of cancellation, and mapped back with `ds/dt`.

use crate::error::{CrsError, Result};
use crate::model::{stream_powers, PowerSplit, ReceiverClass, SinrKind, StreamPowers, SystemParams};
use crate::quadrature::Quadrature;
use crate::special::{scaled_lower_gamma, scaled_lower_gamma_diff};

/// Beyond this `s`, `e^(-s)` underflows and the coverage is exactly 0 in
/// double precision.
pub const S_CUTOFF: f64 = 745.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    /// Uniform in a disk; `x = r^alpha`, `r2 = r^2`.
    Disk { r2: f64, x: f64 },
    /// Uniform in an annulus; `lo = r_e^alpha`, `hi = r_0^alpha`, `area = r_0^2 - r_e^2`.
    Annulus { area: f64, lo: f64, hi: f64 },
}

/// Distribution of one SINR kind at one receiver class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistSpec {
    pub kind: SinrKind,
    pub class: ReceiverClass,
    signal: f64,
    interference: f64,
    noise: f64,
    alpha: f64,
    region: Region,
}

impl DistSpec {
    pub fn new(kind: SinrKind, class: ReceiverClass, params: &SystemParams, powers: &StreamPowers) -> Self {
        let (signal, interference) = kind.linear_form(class, powers);
        let alpha = params.path_loss;
        let region = match class {
            ReceiverClass::Center => {
                Region::Disk { r2: params.r_center * params.r_center, x: params.r_center.powf(alpha) }
            }
            ReceiverClass::Edge => Region::Annulus {
                area: params.r_outer * params.r_outer - params.r_edge * params.r_edge,
                lo: params.r_edge.powf(alpha),
                hi: params.r_outer.powf(alpha),
            },
        };
        DistSpec { kind, class, signal, interference, noise: params.noise, alpha, region }
    }

    /// Supremum of the SINR. A stream without power has an empty support,
    /// reported as bound 0.
    pub fn theta(&self) -> f64 {
        if self.signal <= 0.0 {
            0.0
        } else if self.interference == 0.0 {
            f64::INFINITY
        } else {
            self.signal / self.interference
        }
    }

    /// Whether `P[η > t]` can be positive.
    pub fn in_support(&self, t: f64) -> bool {
        t > 0.0 && self.signal > 0.0 && self.signal - self.interference * t > 0.0
    }

    /// `s(t)`, or `+inf` outside the support.
    pub fn s_or_inf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if self.in_support(t) {
            self.noise * t / (self.signal - self.interference * t)
        } else {
            f64::INFINITY
        }
    }

    pub fn s_value(&self, t: f64) -> Result<f64> {
        if self.in_support(t) {
            Ok(self.s_or_inf(t))
        } else {
            Err(CrsError::OutOfSupport { t, theta: self.theta() })
        }
    }

    /// Inverse of `s(t)`.
    pub fn t_of_s(&self, s: f64) -> f64 {
        if s == f64::INFINITY {
            return self.theta();
        }
        self.signal * s / (self.noise + self.interference * s)
    }

    /// `E[d^(k alpha) e^(-s d^alpha)]` over the receiver's position.
    fn position_moment(&self, k: u32, s: f64) -> f64 {
        let a = 2.0 / self.alpha;
        let ak = a + k as f64;
        match self.region {
            Region::Disk { r2, x } => 2.0 / (self.alpha * r2) * scaled_lower_gamma(ak, s, x),
            Region::Annulus { area, lo, hi } => 2.0 / (self.alpha * area) * scaled_lower_gamma_diff(ak, s, lo, hi),
        }
    }

    /// `P[L > s]`.
    pub fn coverage_at_s(&self, s: f64) -> f64 {
        if s >= S_CUTOFF {
            return 0.0;
        }
        ((-s).exp() * self.position_moment(0, s)).clamp(0.0, 1.0)
    }

    /// Density of `L` at `s`: `-d/ds P[L > s]`.
    pub fn density_at_s(&self, s: f64) -> f64 {
        if s >= S_CUTOFF {
            return 0.0;
        }
        (-s).exp() * (self.position_moment(0, s) + self.position_moment(1, s))
    }

    /// Coverage probability `P[η > t]`.
    pub fn coverage(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return if self.signal > 0.0 { 1.0 } else { 0.0 };
        }
        if !self.in_support(t) {
            return 0.0;
        }
        self.coverage_at_s(self.s_or_inf(t))
    }

    /// Probability density of η at `t`; 0 outside the support.
    pub fn pdf(&self, t: f64) -> f64 {
        if !self.in_support(t) {
            return 0.0;
        }
        let s = self.s_or_inf(t);
        // ds/dt written in terms of s to stay accurate next to the bound
        let q = self.noise + self.interference * s;
        let ds_dt = q * q / (self.signal * self.noise);
        self.density_at_s(s) * ds_dt
    }

    /// Points above `s_lo` spanning the decay of the density, which goes
    /// like `e^(-s d_min^alpha)`; at a far receiver all of the mass can sit
    /// in a sliver of the integration range.
    fn decay_points_s(&self, s_lo: f64) -> [f64; 4] {
        let scale = match self.region {
            Region::Disk { .. } => 1.0,
            Region::Annulus { lo, .. } => 1.0 / (1.0 + lo),
        };
        [1.0, 4.0, 16.0, 64.0].map(|c| s_lo + c * scale)
    }

    /// SINR values above `t` spanning the decay of the density (see
    /// [`DistSpec::integrate_with_breaks`]).
    pub fn decay_points(&self, t: f64) -> Vec<f64> {
        let s_lo = self.s_or_inf(t);
        if !s_lo.is_finite() {
            return Vec::new();
        }
        self.decay_points_s(s_lo).iter().filter(|&&s| s < S_CUTOFF).map(|&s| self.t_of_s(s)).collect()
    }

    /// `∫_lo^hi f(t) g(t) dt`, with `hi` clipped to the support. The
    /// integral runs over `w = ln s`, where the integrand is smooth even
    /// when the density piles up next to the bound.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64, quad: &Quadrature) -> Result<f64> {
        self.integrate_with_breaks(f, lo, hi, &[], quad)
    }

    /// [`DistSpec::integrate`] with extra breakpoints (SINR values) where
    /// `f` is not smooth.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
        kinks: &[f64],
        quad: &Quadrature,
    ) -> Result<f64> {
        let s_lo = self.s_or_inf(lo).max(1e-60);
        let s_hi = self.s_or_inf(hi).min(S_CUTOFF);
        if !(s_hi > s_lo) {
            return Ok(0.0);
        }
        let (w_lo, w_hi) = (s_lo.ln(), s_hi.ln());
        let mut breaks = vec![w_lo];
        let mut marks = vec![0.0];
        match self.region {
            Region::Disk { x, .. } => marks.push(-x.ln()),
            Region::Annulus { lo, hi, .. } => marks.extend([-lo.ln(), -hi.ln()]),
        }
        marks.extend(self.decay_points_s(s_lo).map(f64::ln));
        marks.extend(kinks.iter().map(|&t| self.s_or_inf(t)).filter(|s| s.is_finite() && *s > 0.0).map(f64::ln));
        marks.sort_by(f64::total_cmp);
        breaks.extend(marks.into_iter().filter(|&m| m > w_lo && m < w_hi));
        breaks.push(w_hi);
        quad.integrate_pieces(
            |w| {
                let s = w.exp();
                let g = self.density_at_s(s);
                if g == 0.0 {
                    0.0
                } else {
                    f(self.t_of_s(s)) * g * s
                }
            },
            &breaks,
        )
    }
}

pub fn s_value(spec: &DistSpec, t: f64) -> Result<f64> {
    spec.s_value(t)
}

pub fn coverage(spec: &DistSpec, t: f64) -> f64 {
    spec.coverage(t)
}

pub fn pdf(spec: &DistSpec, t: f64) -> f64 {
    spec.pdf(t)
}

/// The outage conditions on `(β, ρ)` exactly as the closed-form
/// inequalities state them; `None` for the private stream after IIC, which
/// is never power-limited.
pub fn closed_form_outage(kind: SinrKind, class: ReceiverClass, t: f64, split: PowerSplit) -> Option<bool> {
    let (b, r) = (split.beta(), split.rho());
    let common = b <= t / (1.0 + t);
    Some(match (class, kind) {
        (_, SinrKind::Common) => common,
        (_, SinrKind::PrivateIic) => return None,
        (ReceiverClass::Center, SinrKind::Private) => r <= t / (1.0 + t),
        (ReceiverClass::Center, SinrKind::PrivateWithInterference) => {
            (b <= 1.0 / (1.0 + t) && r <= -t / (b * t + b - t - 1.0)) || b > 1.0 / (1.0 + t)
        }
        (ReceiverClass::Center, SinrKind::CommonIic) => b <= r * t / (1.0 + r * t),
        (ReceiverClass::Center, SinrKind::PrivateWithInterferenceIic) => {
            (r == 0.0 && b > 0.0) || (r > 0.0 && b >= r / (r + t))
        }
        (ReceiverClass::Edge, SinrKind::Private) => r >= 1.0 / (1.0 + t),
        (ReceiverClass::Edge, SinrKind::PrivateWithInterference) => {
            (b <= 1.0 / (1.0 + t) && r > (b * t + b - 1.0) / (b * t + b - t - 1.0)) || b > 1.0 / (1.0 + t)
        }
        (ReceiverClass::Edge, SinrKind::CommonIic) => b <= (r * t - t) / (r * t - t - 1.0),
        (ReceiverClass::Edge, SinrKind::PrivateWithInterferenceIic) => {
            (r == 1.0 && b > 0.0) || (r < 1.0 && b >= (r - 1.0) / (r - t - 1.0))
        }
    })
}

/// Whether the coverage of `kind` at `class` is identically zero at
/// threshold `t` for the given power split, whatever the transmit power.
///
/// The closed-form inequalities are evaluated and cross-checked against the
/// structural condition `t >= θ` (or a stream without power); on
/// disagreement the structural answer is returned and the discrepancy logged.
pub fn outage_region(kind: SinrKind, class: ReceiverClass, t: f64, split: PowerSplit) -> bool {
    let powers = stream_powers(1.0, split);
    let (signal, interference) = kind.linear_form(class, &powers);
    let structural = !(signal > 0.0 && signal - interference * t > 0.0);
    if let Some(closed) = closed_form_outage(kind, class, t, split) {
        if closed != structural {
            log::warn!(
                "outage inequality for {kind}/{class} at t={t}, beta={}, rho={} says {closed}, \
                 bound comparison says {structural}; using the latter",
                split.beta(),
                split.rho()
            );
        }
    }
    structural
}
