//! Parameter sweeps over one variable, emitted as CSV, and the comparison
//! of the analytic rows of such a table against its Monte-Carlo rows.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::caching::{Mode, Subcase};
use crate::config::Settings;
use crate::error::{invalid, CrsError, Result};
use crate::model::{stream_powers, ReceiverClass};
use crate::montecarlo::estimate_rates_many;
use crate::rates::{asymptotic_rate, AsymptoticRate, Method, RateEngine};
use crate::validation::{mean_z, MIN_EVENTS, Z_LIMIT};

/// Column names of the sweep table.
pub const CSV_HEADER: [&str; 16] = [
    "var",
    "value",
    "mode",
    "subcase",
    "omega_c",
    "omega_e",
    "iic",
    "method",
    "R_c",
    "R_e",
    "R_sum",
    "q_c",
    "q_e",
    "stderr_Rc",
    "stderr_Re",
    "stderr_Rsum",
];

/// Formats `x` with nine significant digits in the style of C's `%.9g`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{:.*}", (8 - exp) as usize, x))
    }
}

/// The swept quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVar {
    Beta,
    Rho,
    U,
    Power,
}

impl SweepVar {
    pub const ALL: [SweepVar; 4] = [SweepVar::Beta, SweepVar::Rho, SweepVar::U, SweepVar::Power];

    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Beta => "beta",
            SweepVar::Rho => "rho",
            SweepVar::U => "u",
            SweepVar::Power => "P",
        }
    }

    /// Transmit power is swept on a logarithmic grid, the fractions linearly.
    pub fn log_spaced(self) -> bool {
        self == SweepVar::Power
    }

    fn check(self, v: f64) -> Result<()> {
        let ok = match self {
            SweepVar::Power => v.is_finite() && v > 0.0,
            _ => (0.0..=1.0).contains(&v),
        };
        if ok {
            Ok(())
        } else {
            let domain = if self == SweepVar::Power { "(0, inf)" } else { "[0, 1]" };
            Err(invalid("grid", format!("{} = {v} lies outside {domain}", self.name())))
        }
    }

    /// Writes `v` into the settings.
    pub fn set(self, settings: &mut Settings, v: f64) {
        match self {
            SweepVar::Beta => settings.beta = v,
            SweepVar::Rho => settings.rho = v,
            SweepVar::U => settings.params.u = v,
            SweepVar::Power => settings.params.power = v,
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = CrsError;
    fn from_str(s: &str) -> Result<Self> {
        SweepVar::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| CrsError::Parse(format!("unknown sweep variable `{s}` (beta, rho, u, P)")))
    }
}

/// Grid endpoints (inclusive) and number of points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, points: usize) -> Self {
        Grid { start, stop, points }
    }

    /// Grid values; endpoints are reproduced exactly.
    pub fn values(&self, log: bool) -> Vec<f64> {
        let n = self.points;
        let (a, b) = if log { (self.start.log10(), self.stop.log10()) } else { (self.start, self.stop) };
        (0..n)
            .map(|i| match i {
                0 => self.start,
                _ if i == n - 1 => self.stop,
                _ => {
                    let x = a + (b - a) * i as f64 / (n - 1) as f64;
                    if log {
                        10f64.powf(x)
                    } else {
                        x
                    }
                }
            })
            .collect()
    }
}

/// Which evaluation methods produce rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Methods {
    pub analytic: bool,
    pub mc: bool,
    pub asymptotic: bool,
}

impl Methods {
    pub const ANALYTIC: Methods = Methods { analytic: true, mc: false, asymptotic: false };
    pub const BOTH: Methods = Methods { analytic: true, mc: true, asymptotic: false };

    pub fn list(self) -> Vec<Method> {
        let mut out = Vec::new();
        if self.analytic {
            out.push(Method::Analytic);
        }
        if self.mc {
            out.push(Method::MonteCarlo);
        }
        if self.asymptotic {
            out.push(Method::Asymptotic);
        }
        out
    }
}

impl FromStr for Methods {
    type Err = CrsError;
    /// Comma-separated list of `analytic`, `mc`, `asymptotic`; `both`
    /// stands for `analytic,mc`.
    fn from_str(s: &str) -> Result<Self> {
        let mut m = Methods::default();
        for token in s.split(',').map(str::trim) {
            match token {
                "analytic" => m.analytic = true,
                "mc" => m.mc = true,
                "both" => {
                    m.analytic = true;
                    m.mc = true;
                }
                "asymptotic" => m.asymptotic = true,
                _ => return Err(CrsError::Parse(format!("unknown method `{token}` (analytic, mc, both, asymptotic)"))),
            }
        }
        Ok(m)
    }
}

/// One caching mode or all four.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSelector {
    All,
    One(Mode),
}

impl ModeSelector {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModeSelector::All => Mode::ALL.to_vec(),
            ModeSelector::One(m) => vec![m],
        }
    }
}

impl FromStr for ModeSelector {
    type Err = CrsError;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            Ok(ModeSelector::All)
        } else {
            s.parse().map(ModeSelector::One)
        }
    }
}

/// A one-dimensional sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub grid: Grid,
    /// Values of everything that is not swept.
    pub settings: Settings,
    pub modes: ModeSelector,
    /// Subcase labels such as `XOR/EFR+IIC_e`; empty selects every row of
    /// the selected modes.
    pub subcases: Vec<String>,
    pub methods: Methods,
}

impl SweepSpec {
    pub fn new(var: SweepVar, grid: Grid, settings: Settings) -> Self {
        SweepSpec { var, grid, settings, modes: ModeSelector::All, subcases: Vec::new(), methods: Methods::ANALYTIC }
    }

    pub fn values(&self) -> Vec<f64> {
        self.grid.values(self.var.log_spaced())
    }

    /// Settings at one grid value.
    pub fn settings_at(&self, value: f64) -> Settings {
        let mut s = self.settings.clone();
        self.var.set(&mut s, value);
        s
    }

    /// Selected subcases, in mode order and then table order.
    pub fn selected_subcases(&self) -> Result<Vec<Subcase>> {
        let all: Vec<Subcase> =
            self.modes.modes().into_iter().flat_map(|m| m.subcases(self.settings.params.receivers)).collect();
        if self.subcases.is_empty() {
            return Ok(all);
        }
        for label in &self.subcases {
            if !all.iter().any(|s| &s.label() == label) {
                return Err(invalid("subcase", format!("`{label}` is not a subcase of the selected modes")));
            }
        }
        Ok(all.into_iter().filter(|s| self.subcases.contains(&s.label())).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.points < 2 {
            return Err(invalid("points", "a sweep needs at least two points"));
        }
        self.var.check(self.grid.start)?;
        self.var.check(self.grid.stop)?;
        if self.methods.list().is_empty() {
            return Err(invalid("methods", "select at least one method"));
        }
        for v in [self.grid.start, self.grid.stop] {
            self.settings_at(v).validate()?;
        }
        self.selected_subcases()?;
        Ok(())
    }
}

/// One line of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub var: SweepVar,
    pub value: f64,
    pub subcase: Subcase,
    pub method: Method,
    pub omega_c: f64,
    pub omega_e: f64,
    pub r_c: f64,
    pub r_e: f64,
    pub r_sum: f64,
    pub q_c: f64,
    pub q_e: f64,
    /// Standard errors of `R_c`, `R_e`, `R_sum`; NaN unless the row is a
    /// Monte-Carlo estimate backed by at least [`MIN_EVENTS`] events.
    pub stderr: [f64; 3],
}

impl SweepRow {
    pub fn record(&self) -> [String; 16] {
        let f = format_sig;
        [
            self.var.name().to_string(),
            f(self.value),
            self.subcase.mode.name().to_string(),
            self.subcase.label(),
            f(self.omega_c),
            f(self.omega_e),
            self.subcase.iic_at.name().to_string(),
            self.method.name().to_string(),
            f(self.r_c),
            f(self.r_e),
            f(self.r_sum),
            f(self.q_c),
            f(self.q_e),
            f(self.stderr[0]),
            f(self.stderr[1]),
            f(self.stderr[2]),
        ]
    }
}

fn asymptotic_value(a: AsymptoticRate) -> f64 {
    a.value().unwrap_or(f64::INFINITY)
}

/// Evaluates the sweep. Rows are ordered by grid point, then subcase, then
/// method (analytic, mc, asymptotic).
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let subcases = spec.selected_subcases()?;
    let methods = spec.methods.list();
    let mut rows = Vec::new();
    for value in spec.values() {
        let settings = spec.settings_at(value);
        settings.validate()?;
        let params = &settings.params;
        let split = settings.split()?;
        let engine = RateEngine::new(params, split)?;
        let mc = if spec.methods.mc {
            let powers = stream_powers(params.power, split);
            Some(estimate_rates_many(&subcases, params, &powers, &settings.sim)?)
        } else {
            None
        };
        for (i, subcase) in subcases.iter().enumerate() {
            let omega_c = params.prelog(subcase.center)?;
            let omega_e = params.prelog(subcase.edge)?;
            for &method in &methods {
                let base = SweepRow {
                    var: spec.var,
                    value,
                    subcase: *subcase,
                    method,
                    omega_c,
                    omega_e,
                    r_c: f64::NAN,
                    r_e: f64::NAN,
                    r_sum: f64::NAN,
                    q_c: f64::NAN,
                    q_e: f64::NAN,
                    stderr: [f64::NAN; 3],
                };
                let row = match method {
                    Method::Analytic => {
                        let r = engine.report(subcase)?.rates;
                        SweepRow {
                            r_c: r.r_center,
                            r_e: r.r_edge,
                            r_sum: r.r_sum,
                            q_c: r.q_center,
                            q_e: r.q_edge,
                            ..base
                        }
                    }
                    Method::MonteCarlo => {
                        let m = &mc.as_ref().expect("mc requested")[i];
                        let r = m.report.rates;
                        let se = m.report.stderr.expect("mc stderr");
                        let masked = |v: f64, events: u64| if events >= MIN_EVENTS { v } else { f64::NAN };
                        SweepRow {
                            r_c: r.r_center,
                            r_e: r.r_edge,
                            r_sum: r.r_sum,
                            q_c: r.q_center,
                            q_e: r.q_edge,
                            stderr: [
                                masked(se.r_center, m.events[9]),
                                masked(se.r_edge, m.events[10]),
                                masked(se.r_sum, m.events[11]),
                            ],
                            ..base
                        }
                    }
                    Method::Asymptotic => {
                        let rate = |class: ReceiverClass| {
                            asymptotic_rate(class, subcase.load(class), params, split, subcase.iic_at.applies_to(class))
                        };
                        let (c, e) = (rate(ReceiverClass::Center)?, rate(ReceiverClass::Edge)?);
                        SweepRow {
                            r_c: asymptotic_value(c),
                            r_e: asymptotic_value(e),
                            r_sum: asymptotic_value(c.plus(e)),
                            ..base
                        }
                    }
                };
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Writes the header and rows as CSV with LF line endings.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| CrsError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| CrsError::Io(e.to_string()))
}

/// Rate quantities checked by [`compare_csv`].
pub const COMPARED: [&str; 3] = ["R_c", "R_e", "R_sum"];

/// Largest |z| of one quantity and the row where it occurs.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstZ {
    pub quantity: &'static str,
    pub z: f64,
    pub row: String,
}

/// Outcome of comparing the analytic and Monte-Carlo rows of a table.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareSummary {
    /// Matched (analytic, mc) row pairs.
    pub pairs: usize,
    /// Quantities tested with a z-score.
    pub tested: usize,
    /// Quantities whose Monte-Carlo estimate had too few events to test.
    pub untested: usize,
    pub worst: Vec<WorstZ>,
    /// Worst |z| per `mode subcase`.
    pub per_subcase: BTreeMap<String, f64>,
}

impl CompareSummary {
    pub fn passed(&self) -> bool {
        self.worst.iter().all(|w| w.z <= Z_LIMIT)
    }
}

impl fmt::Display for CompareSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "pairs: {}  tested: {}  untested (fewer than {MIN_EVENTS} events): {}",
            self.pairs, self.tested, self.untested
        )?;
        for w in &self.worst {
            writeln!(f, "worst |z| {:<6} {:>8.3}  at {}", w.quantity, w.z, w.row)?;
        }
        writeln!(f, "per-subcase worst |z|:")?;
        for (k, z) in &self.per_subcase {
            writeln!(f, "  {k:<24} {z:>8.3}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

struct ParsedRow {
    key: String,
    subcase: String,
    values: [f64; 5],
    stderr: [f64; 3],
}

fn parse_fields<const N: usize>(record: &csv::StringRecord, first: usize, line: u64) -> Result<[f64; N]> {
    let mut out = [0.0; N];
    for (j, v) in out.iter_mut().enumerate() {
        let raw = &record[first + j];
        *v = raw.parse().map_err(|_| {
            CrsError::Parse(format!("line {line}: column {} is not a number: `{raw}`", CSV_HEADER[first + j]))
        })?;
    }
    Ok(out)
}

/// Pairs every analytic row with the Monte-Carlo row at the same grid
/// point and subcase, and z-scores `R_c`, `R_e` and `R_sum`.
///
/// Monte-Carlo rows without a standard error (too few events) are only
/// checked structurally: an activity probability of zero analytically
/// requires a zero estimate.
pub fn compare_csv<R: Read>(input: R) -> Result<CompareSummary> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let parse_err = |e: csv::Error| CrsError::Parse(format!("malformed CSV: {e}"));
    let header = reader.headers().map_err(parse_err)?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(CrsError::Parse(format!("unexpected header; expected {}", CSV_HEADER.join(","))));
    }
    let mut analytic: HashMap<String, ParsedRow> = HashMap::new();
    let mut mc: Vec<ParsedRow> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(parse_err)?;
        let line = i as u64 + 2;
        let key = format!("{}={} {} {}", &record[0], &record[1], &record[2], &record[3]);
        let row = ParsedRow {
            key: key.clone(),
            subcase: format!("{} {}", &record[2], &record[3]),
            values: parse_fields(&record, 8, line)?,
            stderr: parse_fields(&record, 13, line)?,
        };
        match &record[7] {
            "analytic" => {
                if analytic.insert(key.clone(), row).is_some() {
                    return Err(CrsError::Parse(format!("line {line}: duplicate analytic row for {key}")));
                }
            }
            "mc" => mc.push(row),
            "asymptotic" => {}
            other => return Err(CrsError::Parse(format!("line {line}: unknown method `{other}`"))),
        }
    }
    let mut summary = CompareSummary {
        pairs: 0,
        tested: 0,
        untested: 0,
        worst: COMPARED.iter().map(|&q| WorstZ { quantity: q, z: 0.0, row: String::new() }).collect(),
        per_subcase: BTreeMap::new(),
    };
    for m in &mc {
        let Some(a) = analytic.get(&m.key) else {
            return Err(CrsError::Parse(format!("mc row {} has no analytic counterpart", m.key)));
        };
        summary.pairs += 1;
        let (q_c, q_e) = (a.values[3], a.values[4]);
        let active = [q_c, q_e, q_c + q_e - q_c * q_e];
        for j in 0..3 {
            let (av, mv, se) = (a.values[j], m.values[j], m.stderr[j]);
            let z = if av.is_nan() || mv.is_nan() {
                f64::INFINITY
            } else if !se.is_nan() {
                mean_z(av, mv, se).abs()
            } else if active[j] == 0.0 {
                mean_z(0.0, mv, 0.0).abs()
            } else {
                summary.untested += 1;
                continue;
            };
            summary.tested += 1;
            let w = &mut summary.worst[j];
            if z > w.z || w.row.is_empty() {
                *w = WorstZ { quantity: COMPARED[j], z, row: m.key.clone() };
            }
            let entry = summary.per_subcase.entry(m.subcase.clone()).or_insert(0.0);
            *entry = entry.max(z);
        }
    }
    if summary.pairs == 0 {
        return Err(CrsError::Parse("no analytic/mc row pairs; run the sweep with --methods both".into()));
    }
    Ok(summary)
}

/// Names of the pre-canned figure sweeps.
pub const FIGURES: [&str; 7] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"];

/// One curve family of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub name: String,
    pub spec: SweepSpec,
}

fn beta_sweep(base: &Settings, modes: ModeSelector) -> SweepSpec {
    SweepSpec { modes, ..SweepSpec::new(SweepVar::Beta, Grid::new(0.02, 0.98, 49), base.clone()) }
}

/// Sweeps behind each figure. `base` supplies every value the figure does
/// not fix (path loss, sampling settings, ...).
///
/// * `fig3`, `fig4`: center and edge rates of every subcase against beta.
/// * `fig5`–`fig7`: sum rates against beta in CC/MPC, MPC/CC and CC/CC mode.
/// * `fig8`: XOR/XOR rates against rho for K in {2, 4} and u in {0.2, 0.5}
///   with N=60, beta=0.7, zeta=0.5, xi=2.
/// * `fig9`: sum rates and their high-power limits against P with N=60,
///   K=2, rho=0.5, zeta=1, for (beta, xi) = (0.6, 2) and (0.3, 1).
pub fn figure(name: &str, base: &Settings) -> Result<Vec<FigureSeries>> {
    let single = |spec: SweepSpec| vec![FigureSeries { name: name.to_string(), spec }];
    Ok(match name {
        "fig3" | "fig4" => single(beta_sweep(base, ModeSelector::All)),
        "fig5" => single(beta_sweep(base, ModeSelector::One(Mode::CcMpc))),
        "fig6" => single(beta_sweep(base, ModeSelector::One(Mode::MpcCc))),
        "fig7" => single(beta_sweep(base, ModeSelector::One(Mode::AllCc))),
        "fig8" => {
            let mut out = Vec::new();
            for k in [2, 4] {
                for u in [0.2, 0.5] {
                    let mut s = base.clone();
                    s.params.cc_depth = 60;
                    s.params.receivers = k;
                    s.params.u = u;
                    s.params.zeta = 0.5;
                    s.params.xi = 2.0;
                    s.beta = 0.7;
                    let spec = SweepSpec {
                        modes: ModeSelector::One(Mode::AllCc),
                        subcases: vec!["XOR/XOR".into()],
                        ..SweepSpec::new(SweepVar::Rho, Grid::new(0.02, 0.98, 49), s)
                    };
                    out.push(FigureSeries { name: format!("fig8_K{k}_u{u}"), spec });
                }
            }
            out
        }
        "fig9" => [("i", 0.6, 2.0), ("ii", 0.3, 1.0)]
            .into_iter()
            .map(|(tag, beta, xi)| {
                let mut s = base.clone();
                s.params.cc_depth = 60;
                s.params.receivers = 2;
                s.params.zeta = 1.0;
                s.params.xi = xi;
                s.beta = beta;
                s.rho = 0.5;
                let spec = SweepSpec {
                    modes: ModeSelector::All,
                    methods: Methods { asymptotic: true, ..Methods::ANALYTIC },
                    ..SweepSpec::new(SweepVar::Power, Grid::new(1e-2, 1e8, 41), s)
                };
                FigureSeries { name: format!("fig9_{tag}"), spec }
            })
            .collect(),
        _ => return Err(CrsError::Parse(format!("unknown figure `{name}` (one of {})", FIGURES.join(", ")))),
    })
}
