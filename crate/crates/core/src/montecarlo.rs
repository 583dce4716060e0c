//! Monte-Carlo oracle: draws positions and Rayleigh fading for one center
//! and one edge receiver per sample, applies the decoding rules literally,
//! and estimates coverages and conditional rates by event counting.
//!
//! Samples are split into fixed-size chunks; chunk `c` uses its own ChaCha20
//! stream `c` under the run seed, and per-chunk accumulators are merged in
//! chunk order, so results do not depend on the number of worker threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::caching::Subcase;
use crate::error::{invalid, Result};
use crate::model::{instantaneous_sinr, rate, ReceiverClass, SinrKind, StreamPowers, SystemParams};
use crate::rates::{common_share, Method, RateQuantities, RateReport, StreamKinds};

/// Sampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { samples: 100_000, seed: 42, chunk_size: 4096, workers: None }
    }
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SimConfig { samples, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("samples", "need at least one sample"));
        }
        if self.chunk_size == 0 {
            return Err(invalid("chunk_size", "must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("workers", "must be positive"));
        }
        Ok(())
    }

    fn chunks(&self) -> u64 {
        self.samples.div_ceil(self.chunk_size)
    }

    fn chunk_len(&self, chunk: u64) -> u64 {
        (self.samples - chunk * self.chunk_size).min(self.chunk_size)
    }
}

/// One realization of both receivers' positions and fading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub d_c: f64,
    pub d_e: f64,
    pub h_c: f64,
    pub h_e: f64,
}

impl ChannelDraw {
    pub fn sample<R: Rng>(rng: &mut R, params: &SystemParams) -> Self {
        let (rc, re, r0) = (params.r_center, params.r_edge, params.r_outer);
        let d_c = rc * rng.random::<f64>().sqrt();
        let d_e = (re * re + rng.random::<f64>() * (r0 * r0 - re * re)).sqrt();
        let h_c: f64 = Exp1.sample(rng);
        let h_e: f64 = Exp1.sample(rng);
        ChannelDraw { d_c, d_e, h_c, h_e }
    }

    /// `L = h / (1 + d^alpha)`.
    pub fn gain(&self, class: ReceiverClass, alpha: f64) -> f64 {
        match class {
            ReceiverClass::Center => self.h_c / (1.0 + self.d_c.powf(alpha)),
            ReceiverClass::Edge => self.h_e / (1.0 + self.d_e.powf(alpha)),
        }
    }
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Running count, mean and squared deviation, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if other.n == 0 {
            return *self;
        }
        if self.n == 0 {
            return *other;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Moments { n, mean: self.mean + delta * w, m2: self.m2 + other.m2 + delta * delta * self.n as f64 * w }
    }

    /// Mean, or 0 for an empty event.
    pub fn value(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.mean
        }
    }

    /// Standard error of the mean; NaN with fewer than two observations.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            f64::NAN
        } else {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        }
    }
}

/// Probability estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub events: u64,
    pub samples: u64,
}

impl Estimate {
    fn from_counts(events: u64, samples: u64) -> Self {
        let p = events as f64 / samples as f64;
        Estimate { value: p, stderr: (p * (1.0 - p) / samples as f64).sqrt(), events, samples }
    }
}

/// Runs `visit` over every draw and merges the per-chunk accumulators in
/// chunk order.
fn run_chunks<A, M, V, R>(params: &SystemParams, sim: &SimConfig, make: M, visit: V, merge: R) -> Result<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    V: Fn(&mut A, &ChannelDraw) + Sync,
    R: Fn(A, A) -> A + Sync,
{
    sim.validate()?;
    let work = || {
        let parts: Vec<A> = (0..sim.chunks())
            .into_par_iter()
            .map(|chunk| {
                let mut rng = chunk_rng(sim.seed, chunk);
                let mut acc = make();
                for _ in 0..sim.chunk_len(chunk) {
                    let draw = ChannelDraw::sample(&mut rng, params);
                    visit(&mut acc, &draw);
                }
                acc
            })
            .collect();
        pairwise(parts, &merge)
    };
    let out = match sim.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| invalid("workers", e.to_string()))?
            .install(work),
        None => work(),
    };
    Ok(out.expect("at least one chunk"))
}

fn pairwise<A, R: Fn(A, A) -> A>(mut parts: Vec<A>, merge: &R) -> Option<A> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

/// All draws of a run, in order.
pub fn draws(params: &SystemParams, sim: &SimConfig) -> Result<Vec<ChannelDraw>> {
    sim.validate()?;
    let mut out = Vec::with_capacity(sim.samples as usize);
    for chunk in 0..sim.chunks() {
        let mut rng = chunk_rng(sim.seed, chunk);
        for _ in 0..sim.chunk_len(chunk) {
            out.push(ChannelDraw::sample(&mut rng, params));
        }
    }
    Ok(out)
}

/// Center and edge distances of `count` draws.
pub fn sample_positions(params: &SystemParams, seed: u64, count: u64) -> Result<Vec<(f64, f64)>> {
    Ok(draws(params, &SimConfig::new(count, seed))?.into_iter().map(|d| (d.d_c, d.d_e)).collect())
}

/// A coverage query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    pub kind: SinrKind,
    pub class: ReceiverClass,
    pub t: f64,
}

/// Estimates several coverages from the same draws.
pub fn estimate_coverages(
    queries: &[CoverageQuery],
    params: &SystemParams,
    powers: &StreamPowers,
    sim: &SimConfig,
) -> Result<Vec<Estimate>> {
    let counts = run_chunks(
        params,
        sim,
        || vec![0u64; queries.len()],
        |acc, draw| {
            for (count, q) in acc.iter_mut().zip(queries) {
                let l = draw.gain(q.class, params.path_loss);
                if instantaneous_sinr(q.kind, q.class, powers, l, params.noise) > q.t {
                    *count += 1;
                }
            }
        },
        |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
    )?;
    Ok(counts.into_iter().map(|c| Estimate::from_counts(c, sim.samples)).collect())
}

pub fn estimate_coverage(
    kind: SinrKind,
    class: ReceiverClass,
    t: f64,
    params: &SystemParams,
    powers: &StreamPowers,
    sim: &SimConfig,
) -> Result<Estimate> {
    Ok(estimate_coverages(&[CoverageQuery { kind, class, t }], params, powers, sim)?[0])
}

/// What one receiver decoded in one draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverOutcome {
    pub sinr_common: f64,
    pub sinr_private: f64,
    pub sinr_interfered: f64,
    pub common_decoded: bool,
    /// Private stream decoded after removing the common stream.
    pub private_decoded: bool,
    /// Private stream decoded with the common stream still present.
    pub interfered_decoded: bool,
    pub common_rate: f64,
    pub rate: f64,
}

impl ReceiverOutcome {
    /// At least one stream decoded.
    pub fn active(&self) -> bool {
        self.common_decoded || self.interfered_decoded
    }

    pub fn branch(&self) -> &'static str {
        match (self.common_decoded, self.private_decoded, self.interfered_decoded) {
            (true, true, _) => "common+private",
            (true, false, _) => "common",
            (false, _, true) => "interfered-private",
            _ => "outage",
        }
    }
}

/// Decoding thresholds of one subcase, resolved once.
#[derive(Debug, Clone, Copy)]
pub struct DecodingRule {
    pub subcase: Subcase,
    omega: [f64; 2],
    xi: [f64; 2],
    kinds: [StreamKinds; 2],
    zeta: f64,
    u: f64,
}

impl DecodingRule {
    pub fn new(subcase: &Subcase, params: &SystemParams) -> Result<Self> {
        subcase.check()?;
        let per_class = |class: ReceiverClass| -> Result<(f64, f64, StreamKinds)> {
            let index = subcase.load(class);
            Ok((
                params.prelog(index)?,
                params.private_threshold_for(index)?,
                StreamKinds::new(subcase.iic_at.applies_to(class)),
            ))
        };
        let (wc, xc, kc) = per_class(ReceiverClass::Center)?;
        let (we, xe, ke) = per_class(ReceiverClass::Edge)?;
        Ok(DecodingRule {
            subcase: *subcase,
            omega: [wc, we],
            xi: [xc, xe],
            kinds: [kc, ke],
            zeta: params.zeta,
            u: params.u,
        })
    }

    pub fn omega(&self, class: ReceiverClass) -> f64 {
        self.omega[class as usize]
    }

    /// Applies the decoding order to both receivers of one draw.
    pub fn apply(&self, draw: &ChannelDraw, params: &SystemParams, powers: &StreamPowers) -> [ReceiverOutcome; 2] {
        let sinrs = ReceiverClass::ALL.map(|class| {
            let l = draw.gain(class, params.path_loss);
            let k = self.kinds[class as usize];
            let sinr = |kind| instantaneous_sinr(kind, class, powers, l, params.noise);
            (sinr(k.common), sinr(k.private), sinr(k.interfered))
        });
        let decoded = sinrs.map(|(c, _, _)| c > self.zeta);
        let both_min = rate(1.0, sinrs[0].0).min(rate(1.0, sinrs[1].0));
        ReceiverClass::ALL.map(|class| {
            let n = class as usize;
            let (s0, sp, spi) = sinrs[n];
            let (omega, xi) = (self.omega[n], self.xi[n]);
            let common_decoded = decoded[n];
            let private_decoded = common_decoded && sp > xi;
            let interfered_decoded = !common_decoded && spi > xi;
            let common_rate = if !common_decoded {
                0.0
            } else if decoded[1 - n] {
                omega * common_share(class, self.u) * both_min
            } else {
                omega * rate(1.0, s0)
            };
            let mut total = common_rate;
            if private_decoded {
                total += rate(omega, sp);
            }
            if interfered_decoded {
                total += rate(omega, spi);
            }
            debug_assert!(!(private_decoded && !common_decoded));
            ReceiverOutcome {
                sinr_common: s0,
                sinr_private: sp,
                sinr_interfered: spi,
                common_decoded,
                private_decoded,
                interfered_decoded,
                common_rate,
                rate: total,
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct RateAccumulator {
    fields: [Moments; 12],
    active: [u64; 2],
    samples: u64,
}

impl RateAccumulator {
    fn visit(&mut self, out: &[ReceiverOutcome; 2], omega: [f64; 2]) {
        let [c, e] = out;
        self.samples += 1;
        let f = &mut self.fields;
        let r1 = |x: f64| rate(1.0, x);
        if c.common_decoded && e.common_decoded {
            f[0].push(r1(c.sinr_common).min(r1(e.sinr_common)));
        }
        if c.common_decoded && !e.common_decoded {
            f[1].push(r1(c.sinr_common));
        }
        if e.common_decoded && !c.common_decoded {
            f[2].push(r1(e.sinr_common));
        }
        for (n, o) in out.iter().enumerate() {
            if o.common_decoded {
                f[3 + n].push(o.common_rate);
            }
            if o.private_decoded {
                f[5 + n].push(rate(omega[n], o.sinr_private));
            }
            if o.interfered_decoded {
                f[7 + n].push(rate(omega[n], o.sinr_interfered));
            }
            if o.active() {
                f[9 + n].push(o.rate);
                self.active[n] += 1;
            }
        }
        if c.active() || e.active() {
            f[11].push(c.rate + e.rate);
        }
    }

    fn merge(&self, other: &Self) -> Self {
        let mut fields = self.fields;
        for (a, b) in fields.iter_mut().zip(&other.fields) {
            *a = a.merge(b);
        }
        RateAccumulator {
            fields,
            active: [self.active[0] + other.active[0], self.active[1] + other.active[1]],
            samples: self.samples + other.samples,
        }
    }

    fn finish(&self, subcase: Subcase) -> MonteCarloReport {
        let f = &self.fields;
        let q = [0, 1].map(|n| Estimate::from_counts(self.active[n], self.samples));
        let build = |get: &dyn Fn(&Moments) -> f64, qv: [f64; 2]| RateQuantities {
            r0_both: get(&f[0]),
            r0_center_only: get(&f[1]),
            r0_edge_only: get(&f[2]),
            rs0_center: get(&f[3]),
            rs0_edge: get(&f[4]),
            rp_center: get(&f[5]),
            rp_edge: get(&f[6]),
            rpi_center: get(&f[7]),
            rpi_edge: get(&f[8]),
            r_center: get(&f[9]),
            r_edge: get(&f[10]),
            r_sum: get(&f[11]),
            q_center: qv[0],
            q_edge: qv[1],
        };
        let rates = build(&Moments::value, [q[0].value, q[1].value]);
        let stderr = build(&Moments::stderr, [q[0].stderr, q[1].stderr]);
        let mut events = [0u64; 14];
        for (slot, m) in events.iter_mut().zip(f) {
            *slot = m.n;
        }
        events[12] = self.samples;
        events[13] = self.samples;
        MonteCarloReport {
            report: RateReport { subcase, method: Method::MonteCarlo, rates, stderr: Some(stderr) },
            events,
            samples: self.samples,
        }
    }
}

/// Monte-Carlo rate report plus the number of draws behind each field.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub report: RateReport,
    /// Conditioning-event counts in the order of `RateQuantities::NAMES`
    /// (the sample count for the two probabilities).
    pub events: [u64; 14],
    pub samples: u64,
}

/// Estimates every rate quantity of several subcases from the same draws.
pub fn estimate_rates_many(
    subcases: &[Subcase],
    params: &SystemParams,
    powers: &StreamPowers,
    sim: &SimConfig,
) -> Result<Vec<MonteCarloReport>> {
    let rules = subcases.iter().map(|s| DecodingRule::new(s, params)).collect::<Result<Vec<_>>>()?;
    let accs = run_chunks(
        params,
        sim,
        || vec![RateAccumulator::default(); rules.len()],
        |accs, draw| {
            for (acc, rule) in accs.iter_mut().zip(&rules) {
                acc.visit(&rule.apply(draw, params, powers), rule.omega);
            }
        },
        |a, b| a.iter().zip(&b).map(|(x, y)| x.merge(y)).collect(),
    )?;
    Ok(accs.iter().zip(&rules).map(|(acc, rule)| acc.finish(rule.subcase)).collect())
}

pub fn estimate_rates(
    subcase: &Subcase,
    params: &SystemParams,
    powers: &StreamPowers,
    sim: &SimConfig,
) -> Result<MonteCarloReport> {
    Ok(estimate_rates_many(std::slice::from_ref(subcase), params, powers, sim)?.remove(0))
}

pub const TRACE_HEADER: &str =
    "draw,d_c,d_e,h_c,h_e,sinr_c0,sinr_e0,sinr_cp,sinr_ep,sinr_cpI,sinr_epI,rate_c,rate_e,branch_c,branch_e";

/// Writes one CSV row per draw (up to `limit`) with the SINRs and the
/// decoding branch taken by each receiver.
pub fn write_trace<W: Write>(
    subcase: &Subcase,
    params: &SystemParams,
    powers: &StreamPowers,
    sim: &SimConfig,
    limit: u64,
    out: &mut W,
) -> std::io::Result<()> {
    let rule = DecodingRule::new(subcase, params).map_err(std::io::Error::other)?;
    let run = SimConfig { samples: sim.samples.min(limit).max(1), ..*sim };
    let draws = draws(params, &run).map_err(std::io::Error::other)?;
    writeln!(out, "{TRACE_HEADER}")?;
    for (i, d) in draws.iter().enumerate() {
        let [c, e] = rule.apply(d, params, powers);
        writeln!(
            out,
            "{i},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            d.d_c,
            d.d_e,
            d.h_c,
            d.h_e,
            c.sinr_common,
            e.sinr_common,
            c.sinr_private,
            e.sinr_private,
            c.sinr_interfered,
            e.sinr_interfered,
            c.rate,
            e.rate,
            c.branch(),
            e.branch()
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn chacha20_reference_block() {
        // all-zero key and nonce, block counter 0
        let mut rng = ChaCha20Rng::from_seed([0u8; 32]);
        let words: Vec<u32> = (0..4).map(|_| rng.next_u32()).collect();
        assert_eq!(words, vec![0xade0_b876, 0x903d_f1a0, 0xe56a_5d40, 0x28bd_8653]);
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let (mut a, mut b) = (Moments::default(), Moments::default());
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let m = a.merge(&b);
        assert_eq!(m.n, all.n);
        assert!((m.mean - all.mean).abs() < 1e-15);
        assert!((m.stderr() - all.stderr()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_annulus_pins_distance() {
        let mut p = SystemParams::default();
        p.r_outer = p.r_edge;
        let pos = sample_positions(&p, 1, 100).unwrap();
        assert!(pos.iter().all(|&(dc, de)| de == p.r_edge && dc <= p.r_center));
    }

    #[test]
    fn coverage_above_bound_is_zero() {
        let p = SystemParams::default();
        let powers = StreamPowers { p0: 5.0, pc: 2.5, pe: 2.5 };
        let est =
            estimate_coverage(SinrKind::Common, ReceiverClass::Center, 1.0, &p, &powers, &SimConfig::new(10_000, 3))
                .unwrap();
        assert_eq!(est.value, 0.0);
    }
}
