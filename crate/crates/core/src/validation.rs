//! Statistical agreement tests between closed-form values and
//! Monte-Carlo estimates.

use crate::montecarlo::MonteCarloReport;
use crate::rates::RateReport;

/// Fewest conditioning events for which a mean estimate is tested with
/// its own standard error. Sparser estimates are checked through the
/// frequency of the conditioning event instead.
pub const MIN_EVENTS: u64 = 30;

/// Agreement threshold in standard errors.
pub const Z_LIMIT: f64 = 3.0;

/// z-score of a sample mean against the expected value.
pub fn mean_z(expected: f64, estimate: f64, stderr: f64) -> f64 {
    let diff = estimate - expected;
    if diff == 0.0 {
        0.0
    } else if stderr > 0.0 {
        diff / stderr
    } else {
        f64::INFINITY
    }
}

/// Score-test z of `hits` successes in `trials` Bernoulli trials with
/// success probability `p`. Impossible and certain events only agree
/// with an exactly matching count.
pub fn score_z(p: f64, hits: u64, trials: u64) -> f64 {
    let n = trials as f64;
    let diff = hits as f64 - p * n;
    if diff == 0.0 {
        return 0.0;
    }
    let var = p * (1.0 - p) * n;
    if var > 0.0 {
        diff / var.sqrt()
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Probabilities of the conditioning events of `R_c`, `R_e` and `R_sum`.
fn activity_probabilities(q_c: f64, q_e: f64) -> [f64; 3] {
    [q_c, q_e, q_c + q_e - q_c * q_e]
}

/// z-scores of every field of `analytic` against the Monte-Carlo report.
///
/// Fields backed by at least [`MIN_EVENTS`] events use the mean z-score.
/// Sparser achieved-rate fields are tested through the frequency of their
/// activity event; sparser conditional stream rates yield `None`. The two
/// probabilities are always score-tested at the analytic value.
pub fn rate_z_scores(analytic: &RateReport, mc: &MonteCarloReport) -> [Option<f64>; 14] {
    let a = analytic.rates.values();
    let m = mc.report.rates.values();
    let se = mc.report.stderr.map(|s| s.values()).unwrap_or([f64::NAN; 14]);
    let active = activity_probabilities(a[12], a[13]);
    std::array::from_fn(|i| match i {
        12 | 13 => Some(score_z(a[i], (m[i] * mc.samples as f64).round() as u64, mc.samples)),
        _ if mc.events[i] >= MIN_EVENTS => Some(mean_z(a[i], m[i], se[i])),
        9..=11 => Some(score_z(active[i - 9], mc.events[i], mc.samples)),
        _ => None,
    })
}

/// Largest |z| over the fields that could be tested.
pub fn worst_z(scores: &[Option<f64>]) -> f64 {
    scores.iter().flatten().fold(0.0, |w: f64, z| w.max(z.abs()))
}
