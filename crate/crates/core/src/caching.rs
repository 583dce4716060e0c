//! Coded-caching placement and XOR delivery, whole-file (most popular
//! content) caching, and the mapping from a request pattern to the served
//! load of each receiver class.
//!
//! Subfiles are symbolic: a subfile is identified by its file rank and the
//! subset of receivers that cache it. Receivers are numbered from 1.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Zipf};

use crate::error::{invalid, CrsError, Result};
use crate::model::{replication, PrelogIndex, ReceiverClass, SystemParams};

/// Coded-caching configuration for one class of `k` receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CcConfig {
    k: u32,
    m: u32,
    n: u32,
    t: u32,
}

impl CcConfig {
    pub fn new(k: u32, m: u32, n: u32) -> Result<Self> {
        let t = replication(k, m, n)?;
        Ok(CcConfig { k, m, n, t })
    }

    pub fn receivers(&self) -> u32 {
        self.k
    }

    pub fn cache_size(&self) -> u32 {
        self.m
    }

    pub fn depth(&self) -> u32 {
        self.n
    }

    /// Replication parameter t = MK/N.
    pub fn replication(&self) -> u32 {
        self.t
    }

    /// |Λ_f| = C(K, t).
    pub fn subfiles_per_file(&self) -> u64 {
        binomial(self.k as u64, self.t as u64)
    }

    /// Per-receiver normalized delivery load of the XOR scheme,
    /// (1 - M/N) / (1 + KM/N).
    pub fn xor_load(&self) -> Ratio<u64> {
        let (m, n, k) = (self.m as u64, self.n as u64, self.k as u64);
        Ratio::new(n - m, n + k * m)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Receiver subsets of size `size` drawn from `1..=k`, in lexicographic order.
pub fn subsets(k: u32, size: u32) -> Vec<Vec<u32>> {
    (1..=k).combinations(size as usize).collect()
}

/// Subfile `S_{f,W}`: part of file `f` cached by exactly the receivers in `W`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubfileId {
    pub file: u32,
    pub subset: Vec<u32>,
}

impl SubfileId {
    pub fn new(file: u32, mut subset: Vec<u32>) -> Self {
        subset.sort_unstable();
        SubfileId { file, subset }
    }
}

fn fmt_set(items: &[u32]) -> String {
    format!("{{{}}}", items.iter().join(","))
}

impl fmt::Display for SubfileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.file, fmt_set(&self.subset))
    }
}

/// All subfiles Λ_f of file `f`.
pub fn subfiles_of_file(cfg: &CcConfig, file: u32) -> Vec<SubfileId> {
    subsets(cfg.k, cfg.t).into_iter().map(|w| SubfileId { file, subset: w }).collect()
}

/// Cache contents of every receiver in a class.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementMap {
    cfg: CcConfig,
    /// `stored[i - 1]` holds receiver `i`'s subfiles, sorted.
    stored: Vec<Vec<SubfileId>>,
}

impl PlacementMap {
    pub fn config(&self) -> &CcConfig {
        &self.cfg
    }

    /// T_{f,i}: the subfiles of file `file` stored by `receiver`.
    pub fn stored(&self, file: u32, receiver: u32) -> Vec<SubfileId> {
        self.cache(receiver).iter().filter(|s| s.file == file).cloned().collect()
    }

    /// Everything receiver `receiver` caches, across all files.
    pub fn cache(&self, receiver: u32) -> &[SubfileId] {
        &self.stored[(receiver - 1) as usize]
    }

    /// Receivers whose cache contains `id`.
    pub fn holders(&self, id: &SubfileId) -> Vec<u32> {
        (1..=self.cfg.k).filter(|&i| self.cache(i).binary_search(id).is_ok()).collect()
    }

    /// Fraction of the library (in files) stored by `receiver`.
    pub fn stored_files(&self, receiver: u32) -> Ratio<u64> {
        Ratio::new(self.cache(receiver).len() as u64, self.cfg.subfiles_per_file())
    }

    /// Line-oriented dump: `f {W} -> holders`, one subfile per line, in
    /// canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for file in 1..=self.cfg.n {
            for id in subfiles_of_file(&self.cfg, file) {
                let holders = self.holders(&id);
                out.push_str(&format!("{} {} -> {}\n", file, fmt_set(&id.subset), holders.iter().join(" ")));
            }
        }
        out
    }
}

/// Canonical placement: receiver `i` stores every `S_{f,W}` with `i ∈ W`, for `f <= N`.
pub fn cc_place(cfg: &CcConfig) -> PlacementMap {
    let all = subsets(cfg.k, cfg.t);
    let stored = (1..=cfg.k)
        .map(|i| {
            (1..=cfg.n)
                .flat_map(|file| {
                    all.iter().filter(move |w| w.contains(&i)).map(move |w| SubfileId { file, subset: w.clone() })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    PlacementMap { cfg: *cfg, stored }
}

/// A file request placed by one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Request {
    pub receiver: u32,
    pub rank: u32,
}

/// One coded multicast: the XOR of `parts`, where part `(k, S)` is the
/// subfile intended for receiver `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorTransmission {
    pub serves: Vec<u32>,
    pub parts: Vec<(u32, SubfileId)>,
}

impl fmt::Display for XorTransmission {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.parts.iter().map(|(_, s)| s.to_string()).join(" + ");
        write!(f, "XOR {}: {}", fmt_set(&self.serves), body)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeliverySchedule {
    pub transmissions: Vec<XorTransmission>,
    /// Size of one subfile as a fraction of a file.
    pub subfile_size: Ratio<u64>,
    receivers: u32,
}

impl DeliverySchedule {
    /// Total transmitted load in files.
    pub fn total_load(&self) -> Ratio<u64> {
        self.subfile_size * self.transmissions.len() as u64
    }

    pub fn per_receiver_load(&self) -> Ratio<u64> {
        self.total_load() / self.receivers as u64
    }
}

/// XOR delivery: for every receiver subset `S` with `|S| = t + 1`, send
/// the XOR over `k ∈ S` of `S_{d_k, S \ {k}}`.
pub fn cc_delivery_schedule(cfg: &CcConfig, demands: &[Request]) -> Result<DeliverySchedule> {
    if demands.len() != cfg.k as usize {
        return Err(invalid("demands", format!("expected {} requests, got {}", cfg.k, demands.len())));
    }
    let mut demand_of = vec![0u32; cfg.k as usize];
    for r in demands {
        if r.receiver == 0 || r.receiver > cfg.k {
            return Err(invalid("demands", format!("receiver index {} outside 1..={}", r.receiver, cfg.k)));
        }
        if r.rank == 0 {
            return Err(invalid("demands", "file ranks start at 1"));
        }
        if r.rank > cfg.n {
            return Err(CrsError::DemandOutsideCatalog { rank: r.rank, n: cfg.n });
        }
        demand_of[(r.receiver - 1) as usize] = r.rank;
    }
    if demand_of.contains(&0) {
        return Err(invalid("demands", "every receiver needs exactly one request"));
    }
    let transmissions = subsets(cfg.k, cfg.t + 1)
        .into_iter()
        .map(|s| {
            let parts = s
                .iter()
                .map(|&k| {
                    let rest: Vec<u32> = s.iter().copied().filter(|&j| j != k).collect();
                    (k, SubfileId { file: demand_of[(k - 1) as usize], subset: rest })
                })
                .collect();
            XorTransmission { serves: s, parts }
        })
        .collect();
    Ok(DeliverySchedule { transmissions, subfile_size: Ratio::new(1, cfg.subfiles_per_file()), receivers: cfg.k })
}

/// Subfiles `receiver` holds after peeling the schedule against its cache.
pub fn reconstruct(placement: &PlacementMap, schedule: &DeliverySchedule, receiver: u32) -> BTreeSet<SubfileId> {
    let mut known: BTreeSet<SubfileId> = placement.cache(receiver).iter().cloned().collect();
    loop {
        let mut progress = false;
        for tx in &schedule.transmissions {
            let unknown: Vec<&SubfileId> = tx.parts.iter().map(|(_, s)| s).filter(|s| !known.contains(*s)).collect();
            if unknown.len() == 1 {
                known.insert(unknown[0].clone());
                progress = true;
            }
        }
        if !progress {
            return known;
        }
    }
}

/// Caching policy combination (center/edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    AllMpc,
    CcMpc,
    MpcCc,
    AllCc,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::AllMpc, Mode::CcMpc, Mode::MpcCc, Mode::AllCc];

    pub fn name(self) -> &'static str {
        match self {
            Mode::AllMpc => "all-mpc",
            Mode::CcMpc => "cc-mpc",
            Mode::MpcCc => "mpc-cc",
            Mode::AllCc => "all-cc",
        }
    }

    /// Whether `class` uses coded caching in this mode.
    pub fn coded(self, class: ReceiverClass) -> bool {
        matches!(
            (self, class),
            (Mode::AllCc, _) | (Mode::CcMpc, ReceiverClass::Center) | (Mode::MpcCc, ReceiverClass::Edge)
        )
    }

    /// (center load, edge load, IIC receiver) for every subcase of the mode.
    pub fn rows(self) -> Vec<(PrelogIndex, PrelogIndex, IicAt)> {
        use IicAt::*;
        use PrelogIndex::*;
        match self {
            Mode::AllMpc => vec![(Efr, Efr, None)],
            Mode::CcMpc => {
                vec![(Xor, Efr, Edge), (Xor, Efr, None), (Pfr, Efr, Edge), (Pfr, Efr, None), (Efr, Efr, None)]
            }
            Mode::MpcCc => {
                vec![(Efr, Xor, Center), (Efr, Pfr, Center), (Efr, Xor, None), (Efr, Pfr, None), (Efr, Efr, None)]
            }
            Mode::AllCc => {
                let loads = [Xor, Pfr, Efr];
                loads.iter().flat_map(|&c| loads.iter().map(move |&e| (c, e, None))).collect()
            }
        }
    }

    pub fn subcases(self, k: u32) -> Vec<Subcase> {
        self.rows().into_iter().map(|(c, e, iic)| Subcase::new(self, c, e, iic, k).expect("rows are valid")).collect()
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = CrsError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CrsError::Parse(format!("unknown mode `{s}` (all-mpc, cc-mpc, mpc-cc, all-cc)")))
    }
}

/// Receiver applying information-based interference cancellation, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IicAt {
    None,
    Center,
    Edge,
}

impl IicAt {
    pub fn class(self) -> Option<ReceiverClass> {
        match self {
            IicAt::None => None,
            IicAt::Center => Some(ReceiverClass::Center),
            IicAt::Edge => Some(ReceiverClass::Edge),
        }
    }

    pub fn from_class(class: ReceiverClass) -> Self {
        match class {
            ReceiverClass::Center => IicAt::Center,
            ReceiverClass::Edge => IicAt::Edge,
        }
    }

    pub fn applies_to(self, class: ReceiverClass) -> bool {
        self.class() == Some(class)
    }

    pub fn name(self) -> &'static str {
        match self {
            IicAt::None => "none",
            IicAt::Center => "center",
            IicAt::Edge => "edge",
        }
    }
}

impl std::str::FromStr for IicAt {
    type Err = CrsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(IicAt::None),
            "center" => Ok(IicAt::Center),
            "edge" => Ok(IicAt::Edge),
            _ => Err(CrsError::Parse(format!("unknown IIC location `{s}`"))),
        }
    }
}

/// One row of the subcase table: served loads, IIC, and how many
/// receivers of each class are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subcase {
    pub mode: Mode,
    pub center: PrelogIndex,
    pub edge: PrelogIndex,
    pub iic_at: IicAt,
    pub scheduled_center: u32,
    pub scheduled_edge: u32,
}

impl Subcase {
    pub fn new(mode: Mode, center: PrelogIndex, edge: PrelogIndex, iic_at: IicAt, k: u32) -> Result<Self> {
        let sub = Subcase {
            mode,
            center,
            edge,
            iic_at,
            scheduled_center: if center == PrelogIndex::Xor { k } else { 1 },
            scheduled_edge: if edge == PrelogIndex::Xor { k } else { 1 },
        };
        sub.check()?;
        Ok(sub)
    }

    /// Verifies the subcase is a row of its mode.
    pub fn check(&self) -> Result<()> {
        if self.mode.rows().contains(&(self.center, self.edge, self.iic_at)) {
            Ok(())
        } else {
            Err(CrsError::InconsistentSubcase { mode: self.mode.to_string(), subcase: self.label() })
        }
    }

    pub fn load(&self, class: ReceiverClass) -> PrelogIndex {
        match class {
            ReceiverClass::Center => self.center,
            ReceiverClass::Edge => self.edge,
        }
    }

    /// Compact label, e.g. `XOR/EFR+IIC_e`.
    pub fn label(&self) -> String {
        let iic = match self.iic_at {
            IicAt::None => "",
            IicAt::Center => "+IIC_c",
            IicAt::Edge => "+IIC_e",
        };
        format!("{}/{}{}", self.center.label(), self.edge.label(), iic)
    }
}

impl fmt::Display for Subcase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.mode, self.label())
    }
}

/// Result of mapping a request pattern to a subcase.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub subcase: Subcase,
    pub scheduled_center: Vec<u32>,
    pub scheduled_edge: Vec<u32>,
}

fn check_requests(name: &'static str, requests: &[Request], params: &SystemParams) -> Result<()> {
    if requests.len() != params.receivers as usize {
        return Err(invalid(name, format!("expected {} requests, got {}", params.receivers, requests.len())));
    }
    if let Some(r) = requests.iter().find(|r| r.rank == 0 || r.rank > params.library) {
        return Err(invalid(name, format!("file rank {} outside 1..={}", r.rank, params.library)));
    }
    Ok(())
}

/// Which load a coded-caching class is served with, and who is scheduled.
fn serve_coded<R: Rng>(requests: &[Request], params: &SystemParams, rng: &mut R) -> (PrelogIndex, Vec<Request>) {
    if requests.iter().all(|r| r.rank <= params.cc_depth) {
        return (PrelogIndex::Xor, requests.to_vec());
    }
    let pick = requests[rng.random_range(0..requests.len())];
    let load = if pick.rank <= params.cc_depth { PrelogIndex::Pfr } else { PrelogIndex::Efr };
    (load, vec![pick])
}

/// Schedules one receiver of a whole-file caching class. Only requests
/// missing from the cache are forwarded; if every request is a hit, the
/// worst case (one forwarded entire file) is still assumed.
fn serve_mpc<R: Rng>(requests: &[Request], params: &SystemParams, rng: &mut R) -> Vec<Request> {
    let misses: Vec<Request> = requests.iter().copied().filter(|r| r.rank > params.cache_size).collect();
    let pool = if misses.is_empty() { requests.to_vec() } else { misses };
    vec![pool[rng.random_range(0..pool.len())]]
}

pub fn classify_subcase<R: Rng>(
    mode: Mode,
    center_requests: &[Request],
    edge_requests: &[Request],
    params: &SystemParams,
    rng: &mut R,
) -> Result<Classification> {
    check_requests("center_requests", center_requests, params)?;
    check_requests("edge_requests", edge_requests, params)?;
    let serve = |class: ReceiverClass, reqs: &[Request], rng: &mut R| {
        if mode.coded(class) {
            serve_coded(reqs, params, rng)
        } else {
            (PrelogIndex::Efr, serve_mpc(reqs, params, rng))
        }
    };
    let (center, served_c) = serve(ReceiverClass::Center, center_requests, rng);
    let (edge, served_e) = serve(ReceiverClass::Edge, edge_requests, rng);
    let all_hits = |served: &[Request]| served.iter().all(|r| r.rank <= params.cache_size);
    let iic_at = match mode {
        Mode::CcMpc if all_hits(&served_c) => IicAt::Edge,
        Mode::MpcCc if all_hits(&served_e) => IicAt::Center,
        _ => IicAt::None,
    };
    let subcase = Subcase::new(mode, center, edge, iic_at, params.receivers)?;
    Ok(Classification {
        subcase,
        scheduled_center: served_c.iter().map(|r| r.receiver).collect(),
        scheduled_edge: served_e.iter().map(|r| r.receiver).collect(),
    })
}

/// I.i.d. file ranks from a Zipf law with exponent `gamma` truncated to
/// `1..=library`.
pub fn sample_requests(library: u32, gamma: f64, count: usize, seed: u64) -> Result<Vec<u32>> {
    if library == 0 {
        return Err(invalid("F", "library must hold at least one file"));
    }
    let zipf = Zipf::new(library as f64, gamma).map_err(|e| invalid("gamma", e.to_string()))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| zipf.sample(&mut rng) as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reqs(ranks: &[u32]) -> Vec<Request> {
        ranks.iter().enumerate().map(|(i, &rank)| Request { receiver: i as u32 + 1, rank }).collect()
    }

    #[test]
    fn worked_example_k5() {
        let cfg = CcConfig::new(5, 6, 10).unwrap();
        assert_eq!(cfg.replication(), 3);
        assert_eq!(cfg.subfiles_per_file(), 10);
        let lambda: Vec<String> = subfiles_of_file(&cfg, 1).iter().map(|s| s.to_string()).collect();
        assert_eq!(
            lambda.join(", "),
            "S_{1,{1,2,3}}, S_{1,{1,2,4}}, S_{1,{1,2,5}}, S_{1,{1,3,4}}, S_{1,{1,3,5}}, \
             S_{1,{1,4,5}}, S_{1,{2,3,4}}, S_{1,{2,3,5}}, S_{1,{2,4,5}}, S_{1,{3,4,5}}"
        );
        let map = cc_place(&cfg);
        let t11: Vec<String> = map.stored(1, 1).iter().map(|s| s.to_string()).collect();
        assert_eq!(
            t11.join(", "),
            "S_{1,{1,2,3}}, S_{1,{1,2,4}}, S_{1,{1,2,5}}, S_{1,{1,3,4}}, S_{1,{1,3,5}}, S_{1,{1,4,5}}"
        );
        for f in 1..=10 {
            assert_eq!(map.stored(f, 1).len(), 6);
        }
    }

    #[test]
    fn smallest_instance() {
        let cfg = CcConfig::new(2, 1, 2).unwrap();
        let map = cc_place(&cfg);
        assert_eq!(map.stored(1, 1), vec![SubfileId::new(1, vec![1])]);
        assert_eq!(map.stored(2, 2), vec![SubfileId::new(2, vec![2])]);
        let sched = cc_delivery_schedule(&cfg, &reqs(&[1, 2])).unwrap();
        assert_eq!(sched.transmissions.len(), 1);
        assert_eq!(sched.subfile_size, Ratio::new(1, 2));
        assert_eq!(sched.total_load(), Ratio::new(1, 2));
        assert_eq!(sched.per_receiver_load(), Ratio::new(1, 4));
        assert_eq!(sched.per_receiver_load(), cfg.xor_load());
    }

    #[test]
    fn default_load_is_one_tenth() {
        let cfg = CcConfig::new(5, 30, 50).unwrap();
        assert_eq!(cfg.xor_load(), Ratio::new(1, 10));
        let sched = cc_delivery_schedule(&cfg, &reqs(&[1, 2, 3, 4, 5])).unwrap();
        assert_eq!(sched.per_receiver_load(), Ratio::new(1, 10));
    }

    #[test]
    fn k4_schedule_decodes() {
        let cfg = CcConfig::new(4, 2, 4).unwrap();
        let map = cc_place(&cfg);
        let sched = cc_delivery_schedule(&cfg, &reqs(&[1, 2, 3, 4])).unwrap();
        assert_eq!(sched.transmissions.len(), 4);
        for i in 1..=4 {
            let known = reconstruct(&map, &sched, i);
            for s in subfiles_of_file(&cfg, i) {
                assert!(known.contains(&s), "receiver {i} misses {s}");
            }
        }
    }

    #[test]
    fn demand_beyond_depth_is_rejected() {
        let cfg = CcConfig::new(2, 1, 2).unwrap();
        let err = cc_delivery_schedule(&cfg, &reqs(&[1, 3])).unwrap_err();
        assert_eq!(err, CrsError::DemandOutsideCatalog { rank: 3, n: 2 });
    }

    #[test]
    fn text_format() {
        let map = cc_place(&CcConfig::new(2, 1, 2).unwrap());
        assert_eq!(map.to_text(), "1 {1} -> 1\n1 {2} -> 2\n2 {1} -> 1\n2 {2} -> 2\n");
    }

    fn params() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn classify_table_rows() {
        let p = params();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let c =
            classify_subcase(Mode::CcMpc, &reqs(&[1, 2, 3, 4, 5]), &reqs(&[40, 41, 42, 43, 44]), &p, &mut rng).unwrap();
        assert_eq!(
            (c.subcase.center, c.subcase.edge, c.subcase.iic_at),
            (PrelogIndex::Xor, PrelogIndex::Efr, IicAt::Edge)
        );
        assert_eq!(c.subcase.scheduled_center, 5);
        assert_eq!(c.scheduled_center.len(), 5);

        // one center rank > N, scheduled receiver's rank decides PFR/EFR
        let c = classify_subcase(Mode::AllCc, &reqs(&[10, 10, 10, 10, 60]), &reqs(&[70, 70, 70, 70, 70]), &p, &mut rng)
            .unwrap();
        assert_eq!(c.subcase.edge, PrelogIndex::Efr);
        let sched = c.scheduled_center[0];
        let expect = if sched == 5 { PrelogIndex::Efr } else { PrelogIndex::Pfr };
        assert_eq!(c.subcase.center, expect);
        assert_eq!(c.subcase.iic_at, IicAt::None);

        let c = classify_subcase(Mode::AllMpc, &reqs(&[31; 5]), &reqs(&[90; 5]), &p, &mut rng).unwrap();
        assert_eq!(
            (c.subcase.center, c.subcase.edge, c.subcase.iic_at),
            (PrelogIndex::Efr, PrelogIndex::Efr, IicAt::None)
        );
    }

    #[test]
    fn inconsistent_subcase_rejected() {
        assert!(Subcase::new(Mode::AllMpc, PrelogIndex::Xor, PrelogIndex::Efr, IicAt::None, 5).is_err());
        assert!(Subcase::new(Mode::AllCc, PrelogIndex::Xor, PrelogIndex::Efr, IicAt::Edge, 5).is_err());
    }

    #[test]
    fn sampler_contracts() {
        let a = sample_requests(100, 0.8, 50, 3).unwrap();
        assert_eq!(a, sample_requests(100, 0.8, 50, 3).unwrap());
        assert!(a.iter().all(|&r| (1..=100).contains(&r)));
        assert!(sample_requests(1, 0.8, 20, 1).unwrap().iter().all(|&r| r == 1));
    }
}
