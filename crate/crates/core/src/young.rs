//! Young functions `Φ`, Grand Lebesgue generators `ψ`, and the two asymptotic
//! profiles used on them: strict domination `Ψ ≪ Φ` and the Δ₂ ratio `Y(2u)/Y(u)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::check::{anchors, CheckResult};
use crate::{Error, Result};

type Fx = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An even function `u ↦ Y(|u|)`; validity is checked on grids, not assumed.
#[derive(Clone)]
pub struct YoungFunction {
    label: String,
    eval: Fx,
    derivative: Option<Fx>,
    growth_hint: Option<f64>,
    delta2: bool,
}

impl fmt::Debug for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("YoungFunction")
            .field("label", &self.label)
            .field("growth_hint", &self.growth_hint)
            .finish()
    }
}

impl YoungFunction {
    /// User-supplied `Y` on `[0, ∞)`; evaluated at `|u|`.
    pub fn custom(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        YoungFunction {
            label: label.into(),
            eval: Arc::new(eval),
            derivative: None,
            growth_hint: None,
            delta2: false,
        }
    }

    /// `|u|^p0`. Exponent 1 is accepted (the domination contrast uses it) even though
    /// it is not strictly convex.
    pub fn power(p0: f64) -> Result<Self> {
        if !(p0 >= 1.0) || !p0.is_finite() {
            return Err(Error::BadParameter(format!("power needs p0 ≥ 1, got {p0}")));
        }
        let int = p0.fract() == 0.0 && p0 <= 64.0;
        let eval: Fx = if int {
            let k = p0 as i32;
            Arc::new(move |u: f64| u.abs().powi(k))
        } else {
            Arc::new(move |u: f64| u.abs().powf(p0))
        };
        Ok(YoungFunction {
            label: format!("power({p0})"),
            eval,
            derivative: Some(Arc::new(move |u: f64| p0 * u.abs().powf(p0 - 1.0))),
            growth_hint: Some(p0),
            delta2: true,
        })
    }

    /// `exp(u²/2) - 1`.
    pub fn exp_square() -> Self {
        YoungFunction {
            label: "exp_square".into(),
            eval: Arc::new(|u: f64| (0.5 * u * u).exp_m1()),
            derivative: Some(Arc::new(|u: f64| u.abs() * (0.5 * u * u).exp())),
            growth_hint: None,
            delta2: false,
        }
    }

    /// `|u|^p0 · ln(e + |u|)^{-1/2}`.
    pub fn log_tempered_power(p0: f64) -> Result<Self> {
        if !(p0 > 1.0) || !p0.is_finite() {
            return Err(Error::BadParameter(format!(
                "log_tempered_power needs p0 > 1, got {p0}"
            )));
        }
        let e = std::f64::consts::E;
        Ok(YoungFunction {
            label: format!("log_tempered_power({p0})"),
            eval: Arc::new(move |u: f64| {
                let a = u.abs();
                a.powf(p0) / (e + a).ln().sqrt()
            }),
            derivative: Some(Arc::new(move |u: f64| {
                let a = u.abs();
                let l = (e + a).ln();
                p0 * a.powf(p0 - 1.0) / l.sqrt() - 0.5 * a.powf(p0) / (l * l.sqrt() * (e + a))
            })),
            growth_hint: Some(p0),
            delta2: true,
        })
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.eval)(u.abs())
    }

    /// `Y'(|u|)` when an analytic derivative is registered.
    pub fn derivative(&self, u: f64) -> Option<f64> {
        self.derivative.as_ref().map(|d| d(u.abs()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn growth_hint(&self) -> Option<f64> {
        self.growth_hint
    }

    /// Whether `Y` is known to satisfy Δ₂ (set for the power-type builtins).
    pub fn is_delta2(&self) -> bool {
        self.delta2
    }
}

/// A Grand Lebesgue generator `ψ(p)` on `[1, b)`.
#[derive(Clone)]
pub struct PsiGenerator {
    label: String,
    eval: Fx,
    b: f64,
}

impl fmt::Debug for PsiGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiGenerator")
            .field("label", &self.label)
            .field("b", &self.b)
            .finish()
    }
}

impl PsiGenerator {
    pub fn custom(
        label: impl Into<String>,
        b: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(b > 1.0) {
            return Err(Error::BadParameter(format!("generator needs b > 1, got {b}")));
        }
        Ok(PsiGenerator {
            label: label.into(),
            eval: Arc::new(eval),
            b,
        })
    }

    /// `ψ(p) = √p` on `[1, ∞)`.
    pub fn sqrt() -> Self {
        PsiGenerator {
            label: "psi_sqrt".into(),
            eval: Arc::new(f64::sqrt),
            b: f64::INFINITY,
        }
    }

    /// `ψ(p) = (b - p)^{-β}` on `[1, b)`.
    pub fn beta_b(beta: f64, b: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::BadParameter(format!("psi_beta_b needs β > 0, got {beta}")));
        }
        if !(b > 1.0) || !b.is_finite() {
            return Err(Error::BadParameter(format!("psi_beta_b needs finite b > 1, got {b}")));
        }
        Ok(PsiGenerator {
            label: format!("psi_beta_b({beta},{b})"),
            eval: Arc::new(move |p: f64| (b - p).powf(-beta)),
            b,
        })
    }

    pub fn eval(&self, p: f64) -> f64 {
        (self.eval)(p)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= 1.0 && p < self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Power(f64),
    ExpSquare,
    LogTemperedPower(f64),
    PsiSqrt,
    PsiBetaB { beta: f64, b: f64 },
}

#[derive(Debug, Clone)]
pub enum Generator {
    Young(YoungFunction),
    Psi(PsiGenerator),
}

impl Generator {
    pub fn young(self) -> Option<YoungFunction> {
        match self {
            Generator::Young(y) => Some(y),
            Generator::Psi(_) => None,
        }
    }

    pub fn psi(self) -> Option<PsiGenerator> {
        match self {
            Generator::Psi(p) => Some(p),
            Generator::Young(_) => None,
        }
    }
}

pub fn make_builtin(kind: Builtin) -> Result<Generator> {
    Ok(match kind {
        Builtin::Power(p0) => Generator::Young(YoungFunction::power(p0)?),
        Builtin::ExpSquare => Generator::Young(YoungFunction::exp_square()),
        Builtin::LogTemperedPower(p0) => Generator::Young(YoungFunction::log_tempered_power(p0)?),
        Builtin::PsiSqrt => Generator::Psi(PsiGenerator::sqrt()),
        Builtin::PsiBetaB { beta, b } => Generator::Psi(PsiGenerator::beta_b(beta, b)?),
    })
}

/// `u ≥ 0` with `|Y(u) - y| ≤ tol·max(1, y)`, by doubling then bisection.
pub fn inverse_young(y_fn: &YoungFunction, y: f64, tol: f64) -> Result<f64> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::BadParameter(format!("inverse_young needs finite y ≥ 0, got {y}")));
    }
    let target_tol = tol * y.max(1.0);
    if y == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut lo = 0.0;
    let mut steps = 0;
    while y_fn.eval(hi) < y {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > 2100 {
            return Err(Error::NonConvergence {
                tol,
                achieved: f64::INFINITY,
                evaluations: steps,
            });
        }
    }
    let mut evaluations = steps;
    loop {
        let mid = 0.5 * (lo + hi);
        let v = y_fn.eval(mid);
        evaluations += 1;
        if (v - y).abs() <= target_tol {
            return Ok(mid);
        }
        if v < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if mid <= lo && mid >= hi || hi - lo <= f64::EPSILON * hi {
            let best = if (y_fn.eval(lo) - y).abs() < (y_fn.eval(hi) - y).abs() { lo } else { hi };
            let achieved = (y_fn.eval(best) - y).abs() / y.max(1.0);
            if achieved <= tol {
                return Ok(best);
            }
            return Err(Error::NonConvergence {
                tol,
                achieved,
                evaluations,
            });
        }
    }
}

const CONVEXITY_TOL: f64 = 1e-10;

/// Checks `Y(0) = 0`, evenness, strict increase past the first nonzero point, and
/// convexity through non-decreasing secant slopes (relative tolerance 1e-10). Points
/// where `Y` overflows to `+∞` end the scan; growth to infinity is consistent with
/// a Young function.
pub fn check_young_validity(y_fn: &YoungFunction, grid: &[f64]) -> Result<CheckResult> {
    if grid.len() < 8 {
        return Err(Error::TooFewPoints(grid.len()));
    }
    if grid.iter().any(|&u| !(u >= 0.0)) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadParameter(
            "validity grid must be ascending and non-negative".into(),
        ));
    }
    let id = format!("young_validity[{}]", y_fn.label());
    let mut violation: Option<String> = None;
    if y_fn.eval(0.0) != 0.0 {
        violation = Some(format!("Y(0) = {}", y_fn.eval(0.0)));
    }
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    for &u in grid {
        let v = y_fn.eval(u);
        if violation.is_none() && y_fn.eval(-u) != v {
            violation = Some(format!("Y(-{u}) ≠ Y({u})"));
        }
        if v == f64::INFINITY {
            break;
        }
        if !v.is_finite() && violation.is_none() {
            violation = Some(format!("Y({u}) = {v}"));
        }
        pts.push((u, v));
    }
    if violation.is_none() {
        let mut seen_positive = false;
        for w in pts.windows(2) {
            let ((u0, v0), (u1, v1)) = (w[0], w[1]);
            if v0 > 0.0 {
                seen_positive = true;
            }
            if seen_positive && v1 <= v0 {
                violation = Some(format!("not strictly increasing between u = {u0} and u = {u1}"));
                break;
            }
            if v1 < v0 {
                violation = Some(format!("decreasing between u = {u0} and u = {u1}"));
                break;
            }
        }
    }
    if violation.is_none() {
        let slopes: Vec<(f64, f64)> = pts
            .windows(2)
            .map(|w| (w[0].0, (w[1].1 - w[0].1) / (w[1].0 - w[0].0)))
            .collect();
        for w in slopes.windows(2) {
            let scale = w[0].1.abs().max(w[1].1.abs());
            if w[1].1 - w[0].1 < -CONVEXITY_TOL * scale {
                violation = Some(format!(
                    "convexity fails near u = {}: secant slope drops from {} to {}",
                    w[1].0, w[0].1, w[1].1
                ));
                break;
            }
        }
    }
    let pass = violation.is_none();
    let detail = violation.unwrap_or_else(|| format!("{} grid points checked", pts.len()));
    Ok(CheckResult::new(
        id,
        anchors::YOUNG,
        if pass { "valid" } else { "invalid" },
        "Y(0)=0, even, strictly increasing, convex",
        CONVEXITY_TOL,
        pass,
    )
    .with_detail(detail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    Dominated,
    NotDominated,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceProfile {
    pub lambda_values: Vec<f64>,
    pub u_schedule: Vec<f64>,
    /// `ratios[i][j] = Ψ(λ_i u_j) / Φ(u_j)`.
    pub ratios: Vec<Vec<f64>>,
    /// Per-λ slope of `ln ratio` against `ln ln(e + u)` over the last half.
    pub decay_rates: Vec<f64>,
    pub verdict: DominanceVerdict,
}

/// Decay rate (in `ln ln u`) at or below which a monotone ratio row counts as
/// vanishing even when its total drop over the schedule is less than tenfold.
pub const DOMINANCE_DECAY_RATE: f64 = -0.25;
const DOMINANCE_DROP: f64 = 0.1;

/// Samples `Ψ(λu)/Φ(u)` and classifies the limit in `u → ∞`.
///
/// A row is vanishing when it is non-increasing over the last half of the schedule
/// and either falls below a tenth of its first value or decays at rate at most
/// [`DOMINANCE_DECAY_RATE`] in `ln ln u`. Rows that are non-decreasing over the
/// last half witness non-domination.
pub fn dominance_profile(
    psi: &YoungFunction,
    phi: &YoungFunction,
    lambdas: &[f64],
    u_schedule: &[f64],
) -> Result<DominanceProfile> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::BadParameter("λ values must be positive and finite".into()));
    }
    if u_schedule.len() < 6 {
        return Err(Error::TooFewPoints(u_schedule.len()));
    }
    if u_schedule.windows(2).any(|w| w[1] <= w[0]) || u_schedule[0] <= 0.0 {
        return Err(Error::BadParameter("u schedule must be positive and ascending".into()));
    }
    if u_schedule[u_schedule.len() - 1] / u_schedule[0] < 1e4 * (1.0 - 1e-12) {
        return Err(Error::BadParameter("u schedule must span at least four decades".into()));
    }
    let e = std::f64::consts::E;
    let mut ratios = Vec::with_capacity(lambdas.len());
    let mut rates = Vec::with_capacity(lambdas.len());
    let mut all_vanishing = true;
    let mut any_persistent = false;
    let half = u_schedule.len() / 2;
    for &l in lambdas {
        let row: Vec<f64> = u_schedule.iter().map(|&u| psi.eval(l * u) / phi.eval(u)).collect();
        let tail = &row[half..];
        let decreasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        let non_decreasing = tail.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        let rate = {
            let xs: Vec<f64> = u_schedule[half..].iter().map(|&u| (e + u).ln().ln()).collect();
            let ys: Vec<f64> = tail.iter().map(|&r| r.ln()).collect();
            if ys.iter().all(|y| y.is_finite()) && xs.len() >= 2 {
                crate::quad::linear_fit(&xs, &ys).map(|f| f.slope).unwrap_or(f64::NAN)
            } else if tail.last().is_some_and(|&r| r == 0.0) {
                f64::NEG_INFINITY
            } else {
                f64::NAN
            }
        };
        let first = row[0];
        let last = row[row.len() - 1];
        let strict_drop = last < first;
        let vanishing = decreasing
            && strict_drop
            && (last < DOMINANCE_DROP * first || rate <= DOMINANCE_DECAY_RATE);
        if !vanishing {
            all_vanishing = false;
        }
        if non_decreasing {
            any_persistent = true;
        }
        ratios.push(row);
        rates.push(rate);
    }
    let verdict = if all_vanishing {
        DominanceVerdict::Dominated
    } else if any_persistent {
        DominanceVerdict::NotDominated
    } else {
        DominanceVerdict::Inconclusive
    };
    Ok(DominanceProfile {
        lambda_values: lambdas.to_vec(),
        u_schedule: u_schedule.to_vec(),
        ratios,
        decay_rates: rates,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Delta2Profile {
    pub sup_ratio: f64,
    pub bounded: bool,
    pub ratios: Vec<f64>,
}

/// `sup Y(2u)/Y(u)` over the schedule. The ratio sequence counts as bounded when it
/// is finite and, over the last half of the schedule, either non-increasing or
/// approaching a limit: increments non-increasing and the last relative increment
/// below 1e-2.
pub fn delta2_profile(y_fn: &YoungFunction, u_schedule: &[f64]) -> Result<Delta2Profile> {
    if u_schedule.is_empty() {
        return Err(Error::TooFewPoints(0));
    }
    if u_schedule.iter().any(|&u| !(u > 0.0)) || u_schedule.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadParameter("Δ₂ schedule must be positive and ascending".into()));
    }
    let mut ratios = Vec::with_capacity(u_schedule.len());
    for &u in u_schedule {
        let d = y_fn.eval(u);
        if d == 0.0 {
            return Err(Error::DivisionByZero(u));
        }
        ratios.push(y_fn.eval(2.0 * u) / d);
    }
    let sup_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let finite = ratios.iter().all(|r| r.is_finite());
    let half = ratios.len() / 2;
    let tail = &ratios[half..];
    // rounding noise of a constant ratio must not read as growth
    let non_increasing = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let settling = {
        let inc: Vec<f64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
        let shrinking = inc.windows(2).all(|w| w[1] <= w[0]);
        let last_rel = match (inc.last(), tail.last()) {
            (Some(&d), Some(&r)) => d.abs() / r.abs(),
            _ => 0.0,
        };
        shrinking && last_rel < 1e-2
    };
    Ok(Delta2Profile {
        sup_ratio,
        bounded: finite && (non_increasing || settling),
        ratios,
    })
}
