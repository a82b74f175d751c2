//! Batch runner: named checks over a configured `(α, p0)` instantiation, collected
//! into a report that serializes to JSON or CSV, plus plot-ready curves.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{anchors, CheckResult, Quantity, Verdict};
use crate::counterexample::{self as cx, CounterexampleParams, DisjointSystem};
use crate::error::{Error, Result};
use crate::mc;
use crate::norms;
use crate::quad::{self, SeriesVerdict};
use crate::space::{self, f_half, indicator, MeasureDomain};
use crate::special::gamma;
use crate::young::{self, DominanceVerdict, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    DistanceAxioms,
    YoungValidity,
    Dominance,
    Delta2,
    LuxemburgIndicator,
    LorentzReduction,
    GammaMoments,
    ExactTail,
    BlockNorms,
    Eq13,
    Eq19,
    Eq20,
    Eq21,
    Eq22,
    Eq23,
    BorelCantelli,
    Continuity,
    Disjointness,
    McTail,
    McSymmetrization,
    McMoments,
}

impl CheckId {
    pub const ALL: [CheckId; 21] = [
        CheckId::DistanceAxioms,
        CheckId::YoungValidity,
        CheckId::Dominance,
        CheckId::Delta2,
        CheckId::LuxemburgIndicator,
        CheckId::LorentzReduction,
        CheckId::GammaMoments,
        CheckId::ExactTail,
        CheckId::BlockNorms,
        CheckId::Eq13,
        CheckId::Eq19,
        CheckId::Eq20,
        CheckId::Eq21,
        CheckId::Eq22,
        CheckId::Eq23,
        CheckId::BorelCantelli,
        CheckId::Continuity,
        CheckId::Disjointness,
        CheckId::McTail,
        CheckId::McSymmetrization,
        CheckId::McMoments,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::DistanceAxioms => "distance_axioms",
            CheckId::YoungValidity => "young_validity",
            CheckId::Dominance => "dominance",
            CheckId::Delta2 => "delta2",
            CheckId::LuxemburgIndicator => "luxemburg_indicator",
            CheckId::LorentzReduction => "lorentz_reduction",
            CheckId::GammaMoments => "gamma_moments",
            CheckId::ExactTail => "exact_tail",
            CheckId::BlockNorms => "block_norms",
            CheckId::Eq13 => "eq13",
            CheckId::Eq19 => "eq19",
            CheckId::Eq20 => "eq20",
            CheckId::Eq21 => "eq21",
            CheckId::Eq22 => "eq22",
            CheckId::Eq23 => "eq23",
            CheckId::BorelCantelli => "borel_cantelli",
            CheckId::Continuity => "continuity",
            CheckId::Disjointness => "disjointness",
            CheckId::McTail => "mc_tail",
            CheckId::McSymmetrization => "mc_symmetrization",
            CheckId::McMoments => "mc_moments",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            CheckId::DistanceAxioms => anchors::METRIC,
            CheckId::YoungValidity => anchors::YOUNG,
            CheckId::Dominance => anchors::DOMINATION,
            CheckId::Delta2 => anchors::DELTA2,
            CheckId::LuxemburgIndicator => anchors::LUXEMBURG,
            CheckId::LorentzReduction => anchors::LORENTZ,
            CheckId::GammaMoments => anchors::F_HALF_MOMENTS,
            CheckId::ExactTail => anchors::F_HALF_TAIL,
            CheckId::BlockNorms => anchors::BLOCK_NORMS,
            CheckId::Eq13 => anchors::EQ13,
            CheckId::Eq19 => anchors::EQ19,
            CheckId::Eq20 => anchors::EQ20,
            CheckId::Eq21 => anchors::EQ21,
            CheckId::Eq22 => anchors::EQ22,
            CheckId::Eq23 => anchors::EQ23,
            CheckId::BorelCantelli => anchors::BOREL_CANTELLI,
            CheckId::Continuity => anchors::CONTINUITY,
            CheckId::Disjointness => anchors::SUP_EQUALS_SUM,
            CheckId::McTail => anchors::EQ21,
            CheckId::McSymmetrization => anchors::SYMMETRIZATION,
            CheckId::McMoments => anchors::EQ19,
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown check id `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Tolerances exposed to configuration. The rest are fixed by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative deviation of partial-sum checkpoint ratios from the growth model.
    pub eq13_ratio: f64,
    /// Relative deviation of the blow-up slope from `-1/p0`.
    pub eq19_slope: f64,
    /// Relative deviation of the tail slope from `-p0`.
    pub eq21_slope: f64,
    /// Standard-error multiple for the Monte Carlo bands.
    pub mc_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eq13_ratio: cx::GROWTH_RATIO_TOL,
            eq19_slope: cx::EQ19_SLOPE_TOL,
            eq21_slope: cx::EQ21_SLOPE_TOL,
            mc_band: mc::MC_BAND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub alpha: f64,
    pub p0: f64,
    pub seed: u64,
    /// Last partial-sum checkpoint of the divergence checks; checkpoints are the
    /// decades from 10³ up to it.
    pub n_max: u64,
    /// Accuracy requested from quadrature-based norms.
    pub tol: f64,
    /// Checks to run; empty means all.
    pub checks: Vec<CheckId>,
    /// `p` values approaching `p0` (blow-up and exactness checks).
    pub p_schedule: Option<Vec<f64>>,
    /// `z` values for the tail fit.
    pub z_schedule: Option<Vec<f64>>,
    /// `ε` values for the modular divergence.
    pub eps_schedule: Option<Vec<f64>>,
    /// Abscissae of the `sup_tail` curve.
    pub curve_z: Option<Vec<f64>>,
    /// Abscissae of the `sup_lp` curve.
    pub curve_p: Option<Vec<f64>>,
    pub mc_samples: usize,
    pub tolerances: Tolerances,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            alpha: cx::DEFAULT_ALPHA,
            p0: cx::DEFAULT_P0,
            seed: DEFAULT_SEED,
            n_max: 1_000_000,
            tol: 1e-10,
            checks: Vec::new(),
            p_schedule: None,
            z_schedule: None,
            eps_schedule: None,
            curve_z: None,
            curve_p: None,
            mc_samples: 1_000_000,
            tolerances: Tolerances::default(),
            format: Format::Json,
            out: None,
        }
    }
}

impl SuiteConfig {
    /// Reads a JSON config. Unknown fields and check ids are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fills every optional schedule with its default and checks the result.
    pub fn resolved(&self) -> Result<Self> {
        let mut c = self.clone();
        if c.checks.is_empty() {
            c.checks = CheckId::ALL.to_vec();
        }
        c.checks.sort();
        c.checks.dedup();
        c.p_schedule.get_or_insert_with(|| cx::default_p_schedule(self.p0, 16));
        c.z_schedule.get_or_insert_with(|| quad::log_space(1e2, 1e4, 21));
        c.eps_schedule.get_or_insert_with(cx::default_eps_schedule);
        c.curve_z.get_or_insert_with(|| quad::log_space(1e1, 1e4, 31));
        c.curve_p.get_or_insert_with(|| cx::default_p_schedule(self.p0, 8));
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        CounterexampleParams::probability(self.alpha, self.p0)
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.n_max < 10_000 || self.n_max > quad::DEFAULT_SERIES_BUDGET {
            return bad(format!("n_max must lie in [1e4, 1e8], got {}", self.n_max));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-6) {
            return bad(format!("tol must lie in (0, 1e-6], got {}", self.tol));
        }
        if self.mc_samples < 10_000 {
            return bad(format!("mc_samples must be at least 1e4, got {}", self.mc_samples));
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("eq13_ratio", t.eq13_ratio),
            ("eq19_slope", t.eq19_slope),
            ("eq21_slope", t.eq21_slope),
            ("mc_band", t.mc_band),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        let ascending = |s: &[f64]| s.windows(2).all(|w| w[1] > w[0]);
        let p = self.p_schedule.as_deref().unwrap_or_default();
        if p.len() < 8 || !ascending(p) || p[0] < 1.0 || p[p.len() - 1] >= self.p0 {
            return bad(format!("p_schedule needs ≥ 8 ascending values in [1, p0), got {p:?}"));
        }
        let z = self.z_schedule.as_deref().unwrap_or_default();
        if z.len() < 8 || !ascending(z) || z[0] <= 0.0 {
            return bad(format!("z_schedule needs ≥ 8 ascending positive values, got {z:?}"));
        }
        let e = self.eps_schedule.as_deref().unwrap_or_default();
        if e.len() < 3 || e.windows(2).any(|w| w[1] >= w[0]) || e[0] >= 0.5 || e[e.len() - 1] <= 0.0 {
            return bad(format!("eps_schedule needs ≥ 3 descending values in (0, 1/2), got {e:?}"));
        }
        let cz = self.curve_z.as_deref().unwrap_or_default();
        if cz.is_empty() || !ascending(cz) || cz[0] <= 0.0 {
            return bad(format!("curve_z needs ascending positive values, got {cz:?}"));
        }
        let cp = self.curve_p.as_deref().unwrap_or_default();
        if cp.is_empty() || !ascending(cp) || cp[0] < 1.0 || cp[cp.len() - 1] >= self.p0 {
            return bad(format!("curve_p needs ascending values in [1, p0), got {cp:?}"));
        }
        Ok(())
    }

    fn probability_system(&self) -> Result<DisjointSystem> {
        cx::build_system(CounterexampleParams::probability(self.alpha, self.p0))
    }

    fn checkpoints(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut n = 1000u64;
        while n <= self.n_max {
            out.push(n);
            n *= 10;
        }
        if *out.last().unwrap() != self.n_max {
            out.push(self.n_max);
        }
        out
    }
}

/// One report row: the six reported fields of a [`CheckResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub check_id: String,
    pub paper_ref: String,
    pub computed: Quantity,
    pub oracle: Quantity,
    pub tolerance: Quantity,
    pub verdict: Verdict,
}

impl From<&CheckResult> for Entry {
    fn from(r: &CheckResult) -> Self {
        Entry {
            check_id: r.check_id.clone(),
            paper_ref: r.paper_ref.clone(),
            computed: r.computed.clone(),
            oracle: r.oracle.clone(),
            tolerance: r.tolerance.clone(),
            verdict: r.verdict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, entries: Vec<Entry>) -> Self {
        let passed = entries.iter().filter(|e| e.verdict.passed()).count();
        let summary = Summary {
            passed,
            failed: entries.len() - passed,
            total: entries.len(),
        };
        Report { config, entries, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

/// Runs every configured check in parallel and returns the full results, ordered by
/// check id. A check that errors becomes a failing entry carrying the error text.
pub fn run_checks(config: &SuiteConfig) -> Result<(SuiteConfig, Vec<CheckResult>)> {
    let config = config.resolved()?;
    let mut results: Vec<CheckResult> = config
        .checks
        .par_iter()
        .map(|&id| {
            run_one(id, &config).unwrap_or_else(|e| {
                CheckResult::new(id.name(), id.anchor(), "error", "no error", "", false)
                    .with_detail(e.to_string())
            })
        })
        .collect();
    results.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok((config, results))
}

/// [`run_checks`] projected onto report entries.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let (config, results) = run_checks(config)?;
    Ok(Report::new(config, results.iter().map(Entry::from).collect()))
}

fn run_one(id: CheckId, c: &SuiteConfig) -> Result<CheckResult> {
    let r = match id {
        CheckId::DistanceAxioms => cx::verify_metric_axioms(50),
        CheckId::YoungValidity => young_validity(c)?,
        CheckId::Dominance => dominance(c)?,
        CheckId::Delta2 => delta2(c)?,
        CheckId::LuxemburgIndicator => luxemburg_indicator(c)?,
        CheckId::LorentzReduction => lorentz_reduction()?,
        CheckId::GammaMoments => gamma_moments(c)?,
        CheckId::ExactTail => exact_tail()?,
        CheckId::BlockNorms => block_norms(c)?,
        CheckId::Eq13 => eq13(c)?,
        CheckId::Eq19 => {
            let sys = c.probability_system()?;
            cx::verify_eq19_with(&sys, c.p_schedule.as_deref().unwrap(), c.tolerances.eq19_slope)?
        }
        CheckId::Eq20 => eq20(c)?,
        CheckId::Eq21 => {
            let sys = c.probability_system()?;
            cx::verify_eq21(&sys, c.z_schedule.as_deref().unwrap(), c.tolerances.eq21_slope)?
        }
        CheckId::Eq22 => eq22(c)?,
        CheckId::Eq23 => cx::verify_eq23(&c.probability_system()?)?,
        CheckId::BorelCantelli => borel_cantelli()?,
        CheckId::Continuity => both_cases(id, c, cx::verify_continuity)?,
        CheckId::Disjointness => both_cases(id, c, |s| cx::verify_disjointness(s, 2000))?,
        CheckId::McTail => mc_tail(c)?,
        CheckId::McSymmetrization => mc::symmetrization_check(&c.probability_system()?, 1, c.seed, 100_000)?,
        CheckId::McMoments => mc_moments(c)?,
    };
    Ok(r.with_id(id.name()))
}

fn combine(id: CheckId, parts: Vec<CheckResult>) -> CheckResult {
    CheckResult::all_of(id.name(), id.anchor(), parts)
}

/// A sub-check that passes when `inner` fails.
fn expect_fail(label: &str, inner: CheckResult) -> CheckResult {
    let ok = !inner.passed();
    CheckResult::new(label, &inner.paper_ref, inner.computed, inner.oracle, inner.tolerance, ok)
}

fn both_cases(
    id: CheckId,
    c: &SuiteConfig,
    f: impl Fn(&DisjointSystem) -> Result<CheckResult>,
) -> Result<CheckResult> {
    let inf = cx::build_system(CounterexampleParams::infinite_measure())?;
    Ok(combine(id, vec![f(&c.probability_system()?)?, f(&inf)?]))
}

fn young_validity(c: &SuiteConfig) -> Result<CheckResult> {
    let mut grid = vec![0.0];
    grid.extend(quad::log_space(1e-3, 1e6, 200));
    let mut parts = Vec::new();
    for y in [
        YoungFunction::power(c.p0)?,
        YoungFunction::exp_square(),
        YoungFunction::log_tempered_power(c.p0)?,
    ] {
        let label = y.label().to_string();
        parts.push(young::check_young_validity(&y, &grid)?.with_id(label));
    }
    Ok(combine(CheckId::YoungValidity, parts))
}

fn dominance(c: &SuiteConfig) -> Result<CheckResult> {
    let u = quad::log_space(1e2, 1e12, 6);
    let lambdas = [1.0, 10.0, 100.0];
    let lt = YoungFunction::log_tempered_power(c.p0)?;
    let pw = YoungFunction::power(c.p0)?;
    let mut parts = Vec::new();
    for (psi, phi, want) in [
        (&lt, &pw, DominanceVerdict::Dominated),
        (&pw, &pw, DominanceVerdict::NotDominated),
    ] {
        let prof = young::dominance_profile(psi, phi, &lambdas, &u)?;
        parts.push(CheckResult::new(
            format!("{} vs {}", psi.label(), phi.label()),
            anchors::DOMINATION,
            format!("{:?}", prof.verdict).to_lowercase(),
            format!("{want:?}").to_lowercase(),
            "",
            prof.verdict == want,
        ));
    }
    Ok(combine(CheckId::Dominance, parts))
}

fn delta2(c: &SuiteConfig) -> Result<CheckResult> {
    let lt = YoungFunction::log_tempered_power(c.p0)?;
    let bound = 2f64.powf(c.p0);
    let d = young::delta2_profile(&lt, &quad::log_space(1.0, 1e8, 9))?;
    let tempered = CheckResult::new(
        lt.label(),
        anchors::DELTA2,
        d.sup_ratio,
        bound,
        0.0,
        d.bounded && d.sup_ratio <= bound,
    );
    let es = young::delta2_profile(&YoungFunction::exp_square(), &quad::log_space(0.5, 10.0, 20))?;
    let square = CheckResult::new(
        "exp_square",
        anchors::DELTA2,
        es.sup_ratio,
        "unbounded",
        "",
        !es.bounded,
    );
    Ok(combine(CheckId::Delta2, vec![tempered, square]))
}

fn luxemburg_indicator(c: &SuiteConfig) -> Result<CheckResult> {
    let phis = [
        YoungFunction::power(2.0)?,
        YoungFunction::power(4.0)?,
        YoungFunction::exp_square(),
    ];
    let mut parts = Vec::new();
    for phi in &phis {
        for a in [0.01, 0.25, 0.5] {
            let f = indicator(0.0, a, MeasureDomain::unit())?;
            let want = 1.0 / young::inverse_young(phi, 1.0 / a, 1e-15)?;
            let got = norms::luxemburg_norm(&f, phi, c.tol)?.value;
            let ok = (got - want).abs() <= 1e-10;
            parts.push(CheckResult::new(format!("1_[0,{a}] under {}", phi.label()), anchors::LUXEMBURG, got, want, 1e-10, ok));
        }
    }
    let battery = [indicator(0.0, 0.25, MeasureDomain::unit())?, f_half()];
    for phi in &phis {
        for f in &battery {
            let base = norms::luxemburg_norm(f, phi, c.tol)?.value;
            for k in [3.0, -0.5] {
                let got = norms::luxemburg_norm(&f.scaled(k), phi, c.tol)?.value;
                parts.push(CheckResult::relative(
                    format!("N({k}·{}) under {}", f.label(), phi.label()),
                    anchors::LUXEMBURG,
                    got,
                    k.abs() * base,
                    1e-8,
                ));
            }
        }
    }
    Ok(combine(CheckId::LuxemburgIndicator, parts))
}

fn lorentz_reduction() -> Result<CheckResult> {
    let v = |s: f64| s.sqrt();
    let s_grid: Vec<f64> = (1..=1000).map(|j| j as f64 / 1000.0).collect();
    let mut parts = Vec::new();
    for f in [indicator(0.0, 0.25, MeasureDomain::unit())?, f_half()] {
        let got = norms::lorentz_norm(&f, &v, &s_grid)?.value;
        let want = norms::lorentz_cells_oracle(&f, &v, 1000)?.value;
        let ok = (got - want).abs() <= 1e-3;
        parts.push(CheckResult::new(f.label(), anchors::LORENTZ, got, want, 1e-3, ok));
    }
    Ok(combine(CheckId::LorentzReduction, parts))
}

fn gamma_moments(c: &SuiteConfig) -> Result<CheckResult> {
    let f = f_half().without_closed_forms();
    let mut parts = Vec::new();
    for k in 1..=20 {
        let p = k as f64;
        let got = norms::lp_norm(&f, p, c.tol)?.value;
        let want = gamma(p / 2.0 + 1.0).powf(1.0 / p);
        parts.push(CheckResult::relative(format!("p={p}"), anchors::F_HALF_MOMENTS, got, want, 1e-8));
    }
    Ok(combine(CheckId::GammaMoments, parts))
}

fn exact_tail() -> Result<CheckResult> {
    let f = f_half().without_closed_forms();
    let mut parts = Vec::new();
    for u in [0.5f64, 1.0, 2.0, 3.0] {
        let got = space::tail(&f, u, 1e-15)?;
        let want = (-u * u).exp();
        let ok = (got - want).abs() <= 1e-12;
        parts.push(CheckResult::new(format!("u={u}"), anchors::F_HALF_TAIL, got, want, 1e-12, ok));
    }
    Ok(combine(CheckId::ExactTail, parts))
}

fn block_norms(c: &SuiteConfig) -> Result<CheckResult> {
    let systems = [
        c.probability_system()?,
        cx::build_system(CounterexampleParams::infinite_measure())?,
    ];
    let mut parts = Vec::new();
    for sys in &systems {
        for n in [1u64, 10, 100] {
            let b = sys.block(n)?.without_closed_forms();
            for p in [1.0, 2.0, 4.0] {
                let got = norms::lp_norm(&b, p, c.tol)?.value;
                let want = cx::block_lp_exact(sys, n, p)?;
                parts.push(CheckResult::relative(
                    format!("{:?} n={n} p={p}", sys.case()).to_lowercase(),
                    anchors::BLOCK_NORMS,
                    got,
                    want,
                    1e-8,
                ));
            }
        }
    }
    Ok(combine(CheckId::BlockNorms, parts))
}

fn eq13(c: &SuiteConfig) -> Result<CheckResult> {
    let checkpoints = c.checkpoints();
    let mut parts = Vec::new();
    for p in [1.0, 2.0] {
        let gam = gamma(0.5 * p + 1.0);
        let term = move |x: f64| gam * (x + 3.0).ln().powf(-3.0 * p);
        parts.push(cx::verify_growth(
            &format!("eq13[p={p}]"),
            anchors::EQ13,
            &term,
            &|n| cx::eq13_model(p, n),
            &checkpoints,
            c.tolerances.eq13_ratio,
        )?);
        // a summable series must fail the same test
        let control = move |x: f64| gam * (x + 3.0).powf(-1.5);
        let r = cx::verify_growth(
            &format!("control[p={p}]"),
            anchors::EQ13,
            &control,
            &|n| cx::eq13_model(p, n),
            &checkpoints,
            c.tolerances.eq13_ratio,
        )?;
        parts.push(expect_fail(&format!("control[p={p}] fails"), r));
    }
    Ok(combine(CheckId::Eq13, parts))
}

fn eq20(c: &SuiteConfig) -> Result<CheckResult> {
    let sys = c.probability_system()?;
    let sched = c.p_schedule.as_deref().unwrap();
    let exact = cx::verify_eq20(&sys, sched, None)?;
    let heavy = cx::verify_eq20(&sys, sched, Some(2.0 / c.p0))?;
    let light = cx::verify_eq20(&sys, sched, Some(0.5 / c.p0))?;
    Ok(combine(
        CheckId::Eq20,
        vec![
            exact,
            expect_fail(&format!("beta={} fails", 2.0 / c.p0), heavy),
            expect_fail(&format!("beta={} fails", 0.5 / c.p0), light),
        ],
    ))
}

fn eq22(c: &SuiteConfig) -> Result<CheckResult> {
    let eps = c.eps_schedule.as_deref().unwrap();
    let main = cx::verify_eq22(c.p0, eps)?;
    // ∫_ε^{1/2} x^{-1/2} dx saturates at √2
    let eta = space::power_tail(2.0, 1.0)?;
    let control = cx::verify_log_divergence(
        "control",
        &|e| Ok(quad::integrate(&eta, (e, 0.5), 1e-12)?.value),
        eps,
        None,
    )?;
    Ok(combine(CheckId::Eq22, vec![main, expect_fail("saturating control fails", control)]))
}

fn borel_cantelli() -> Result<CheckResult> {
    let inf = cx::build_system(CounterexampleParams::infinite_measure())?;
    let r = cx::borel_cantelli_sum(&inf, 1.0)?;
    let want = 8.24e-4;
    let ok = r.verdict == SeriesVerdict::Convergent
        && r.tail_bound < 1e-10
        && (r.partial_sum - want).abs() <= 5e-3 * want;
    Ok(CheckResult::new(CheckId::BorelCantelli.name(), anchors::BOREL_CANTELLI, r.partial_sum, want, 5e-3, ok)
        .with_detail(format!("{:?} after {} terms, tail bound {:e}", r.verdict, r.n_terms, r.tail_bound)))
}

fn mc_tail(c: &SuiteConfig) -> Result<CheckResult> {
    let sys = c.probability_system()?;
    let batch = mc::sample_sup(&sys, c.seed, c.mc_samples)?;
    let band = c.tolerances.mc_band;
    let z = 10.0;
    let (frac, se) = mc::empirical_tail(&batch.values, z)?;
    let want = cx::sup_tail(&sys, z, cx::SUP_TAIL_TOL)?;
    let tail = CheckResult::new(format!("tail z={z}"), anchors::EQ21, frac, want, band * se, (frac - want).abs() <= band * se);
    let (mean, mse) = mc::empirical_moment(&batch.values, 1.0)?;
    let l1 = cx::sup_lp(&sys, 1.0, cx::SUP_LP_TOL)?;
    let first = CheckResult::new("mean", anchors::EQ19, mean, l1, band * mse, (mean - l1).abs() <= band * mse);
    Ok(combine(CheckId::McTail, vec![tail, first]))
}

fn mc_moments(c: &SuiteConfig) -> Result<CheckResult> {
    let sys = c.probability_system()?;
    let batch = mc::sample_sup(&sys, c.seed, c.mc_samples)?;
    let n = c.mc_samples;
    let cps = [n / 100, n / 10, n];
    let heavy = mc::running_moments(&batch.values, c.p0, &cps)?;
    let rising = heavy.windows(2).all(|w| w[1] > w[0]);
    let last_step = heavy[2] / heavy[1] - 1.0;
    let no_plateau = CheckResult::new(
        format!("p={} no plateau", c.p0),
        anchors::EQ19,
        last_step,
        "> 0.01 and increasing",
        0.01,
        rising && last_step > 0.01,
    )
    .with_detail(format!("running moments at {cps:?}: {heavy:?}"));
    let light = mc::running_moments(&batch.values, 1.0, &cps)?;
    let drift = (light[2] / light[1] - 1.0).abs();
    let stable = CheckResult::new("p=1 stable", anchors::EQ19, drift, 0.01, 0.01, drift <= 0.01)
        .with_detail(format!("running moments at {cps:?}: {light:?}"));
    Ok(combine(CheckId::McMoments, vec![no_plateau, stable]))
}

/// Serializes a report. JSON mirrors [`Report`]; CSV has one row per entry under the
/// header `check_id,paper_ref,computed,oracle,tolerance,verdict`, numbers with 17
/// significant digits.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check_id", "paper_ref", "computed", "oracle", "tolerance", "verdict"])?;
            for e in &report.entries {
                w.write_record([
                    e.check_id.clone(),
                    e.paper_ref.clone(),
                    e.computed.to_string(),
                    e.oracle.to_string(),
                    e.tolerance.to_string(),
                    e.verdict.to_string(),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

/// Writes [`render`] output to `path`, or to stdout when `path` is `None`.
pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<()> {
    write_out(&render(report, format)?, path)
}

fn write_out(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    SupTail,
    SupLp,
    Eq22Integral,
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sup_tail" => Ok(Curve::SupTail),
            "sup_lp" => Ok(Curve::SupLp),
            "eq22_integral" => Ok(Curve::Eq22Integral),
            other => Err(Error::Config(format!("unknown curve `{other}`"))),
        }
    }
}

/// `(abscissa, value)` pairs: `G_g(z)` over `curve_z`, `|g|_p` over `curve_p`, or
/// `I(ε)` over `eps_schedule`.
pub fn curve(name: Curve, config: &SuiteConfig) -> Result<Vec<(f64, f64)>> {
    let c = config.resolved()?;
    match name {
        Curve::SupTail => {
            let sys = c.probability_system()?;
            c.curve_z
                .as_deref()
                .unwrap()
                .par_iter()
                .map(|&z| Ok((z, cx::sup_tail(&sys, z, cx::SUP_TAIL_TOL)?)))
                .collect()
        }
        Curve::SupLp => {
            let sys = c.probability_system()?;
            c.curve_p
                .as_deref()
                .unwrap()
                .par_iter()
                .map(|&p| Ok((p, cx::sup_lp(&sys, p, cx::SUP_LP_TOL)?)))
                .collect()
        }
        Curve::Eq22Integral => c
            .eps_schedule
            .as_deref()
            .unwrap()
            .par_iter()
            .map(|&e| Ok((e, cx::eq22_integral(c.p0, e)?)))
            .collect(),
    }
}

pub fn render_curve(points: &[(f64, f64)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["abscissa", "value"])?;
    for &(x, y) in points {
        w.write_record([Quantity::from(x).to_string(), Quantity::from(y).to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Computes [`curve`] and writes it as CSV to `path`, or stdout when `None`.
pub fn emit_curve(name: Curve, config: &SuiteConfig, path: Option<&Path>) -> Result<()> {
    write_out(&render_curve(&curve(name, config)?)?, path)
}
