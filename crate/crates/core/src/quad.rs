//! Deterministic numerical engine: adaptive quadrature, positive-series summation with
//! integral-test brackets, growth profiles and least-squares power-law fits.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::space::{RealFunction, Support};
use crate::{Error, Result};

/// Default function-evaluation budget for one quadrature call.
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;
/// Default term budget for series summation.
pub const DEFAULT_SERIES_BUDGET: u64 = 100_000_000;

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule
// (QUADPACK qk15). The Gauss nodes are the odd-indexed Kronrod nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub max_evaluations: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

/// Neumaier-compensated accumulator. Sums are stable to reordering at the 1e-15 level.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // NaN errors sort as largest so they are refined first
        let ea = if self.error.is_nan() { f64::INFINITY } else { self.error };
        let eb = if other.error.is_nan() { f64::INFINITY } else { other.error };
        ea.total_cmp(&eb)
    }
}

fn gauss_kronrod<G: Fn(f64) -> f64>(g: &G, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = g(center - dx);
        let f2 = g(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

fn splittable(seg: &Segment) -> bool {
    let mid = 0.5 * (seg.a + seg.b);
    let scale = seg.a.abs().max(seg.b.abs()).max(f64::MIN_POSITIVE);
    (seg.b - seg.a) > 8.0 * f64::EPSILON * scale && mid > seg.a && mid < seg.b
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of `g` over the union of
/// `breaks` intervals (consecutive break points define the initial partition).
pub fn adaptive_gk<G: Fn(f64) -> f64>(
    g: &G,
    breaks: &[f64],
    tol: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if breaks.len() < 2 {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut done: Vec<Segment> = Vec::new();
    let mut evaluations = 0usize;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let seg = gauss_kronrod(g, w[0], w[1]);
            evaluations += 15;
            total_err += seg.error;
            heap.push(seg);
        }
    }
    loop {
        if total_err <= tol {
            break;
        }
        if evaluations + 30 > opts.max_evaluations {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if !splittable(&worst) {
            done.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(g, worst.a, mid);
        let right = gauss_kronrod(g, mid, worst.b);
        evaluations += 30;
        total_err += left.error + right.error - worst.error;
        if !total_err.is_finite() {
            // recompute from scratch when an infinite error leaves the pool
            total_err = heap
                .iter()
                .chain(done.iter())
                .map(|s| s.error)
                .sum::<f64>()
                + left.error
                + right.error;
        }
        heap.push(left);
        heap.push(right);
    }
    let all = heap.iter().chain(done.iter());
    let value: CompensatedSum = all.clone().map(|s| s.value).collect();
    let err: f64 = all.map(|s| s.error).sum();
    let value = value.value();
    if err <= tol && value.is_finite() {
        Ok(QuadResult {
            value,
            abs_error_estimate: err,
            evaluations,
        })
    } else {
        Err(Error::NonConvergence {
            tol,
            achieved: if value.is_finite() { err } else { f64::INFINITY },
            evaluations,
        })
    }
}

/// Quadrature of a plain closure over `(lo, hi)`; `hi` may be `+∞`, in which case
/// the map `x = lo + s/(1-s)` is applied.
pub fn integrate_fn<G: Fn(f64) -> f64>(
    g: G,
    lo: f64,
    hi: f64,
    tol: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(lo < hi) || lo.is_nan() {
        return Err(Error::BadParameter(format!(
            "integration interval ({lo}, {hi}) is empty"
        )));
    }
    if hi.is_infinite() {
        let h = |s: f64| {
            let one_minus = 1.0 - s;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = lo + s / one_minus;
            let v = g(x);
            if v == 0.0 {
                0.0
            } else {
                v / (one_minus * one_minus)
            }
        };
        adaptive_gk(&h, &[0.0, 1.0], tol, opts)
    } else {
        adaptive_gk(&g, &[lo, hi], tol, opts)
    }
}

/// Integrates `f` over `interval` to absolute tolerance `tol`.
///
/// Functions annotated with a left-endpoint singularity are integrated after the
/// substitution `x = a + w·exp(-t²)` where `(a, a + w)` is the support, evaluated in
/// support-relative coordinates so that no cancellation occurs near `a`.
pub fn integrate(f: &RealFunction, interval: (f64, f64), tol: f64) -> Result<QuadResult> {
    integrate_with(f, interval, tol, &QuadOptions::default())
}

pub fn integrate_with(
    f: &RealFunction,
    interval: (f64, f64),
    tol: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let (lo, hi) = interval;
    if !(lo < hi) {
        return Err(Error::BadParameter(format!(
            "integration interval ({lo}, {hi}) is empty"
        )));
    }
    if !f.domain().contains_interval(lo, hi) {
        return Err(Error::DomainMismatch { lo, hi });
    }
    let (a, b) = match f.support() {
        Support::Empty => {
            return Ok(QuadResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                evaluations: 0,
            })
        }
        Support::Interval(a, b) => (a, b),
        Support::Blocks { .. } => {
            return Err(Error::Unsupported(format!(
                "{} has countably many pieces; integrate it through its tail",
                f.label()
            )))
        }
    };
    let l = lo.max(a);
    let h = hi.min(b);
    if !(l < h) {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    if f.is_left_singular() && b.is_finite() {
        let w = b - a;
        let u_lo = ((l - a) / w).max(0.0);
        let u_hi = ((h - a) / w).min(1.0);
        let t_lo = if u_hi >= 1.0 { 0.0 } else { (-u_hi.ln()).sqrt() };
        let t_hi = if u_lo <= 0.0 {
            f64::INFINITY
        } else {
            (-u_lo.ln()).sqrt()
        };
        if !(t_lo < t_hi) {
            return Ok(QuadResult {
                value: 0.0,
                abs_error_estimate: 0.0,
                evaluations: 0,
            });
        }
        let g = |t: f64| {
            let u = (-t * t).exp();
            let weight = 2.0 * t * u * w;
            if weight == 0.0 {
                return 0.0;
            }
            let v = f.eval_relative(u);
            if v == 0.0 {
                0.0
            } else {
                v * weight
            }
        };
        return integrate_fn(g, t_lo, t_hi, tol, opts);
    }
    if let Some(knots) = f.knots() {
        let mut breaks = Vec::with_capacity(knots.len() + 2);
        breaks.push(l);
        breaks.extend(knots.iter().copied().filter(|&k| k > l && k < h));
        breaks.push(h);
        let g = |x: f64| f.evaluate(x);
        return adaptive_gk(&g, &breaks, tol, opts);
    }
    integrate_fn(|x| f.evaluate(x), l, h, tol, opts)
}

// ---------------------------------------------------------------------------
// Series

/// A positive series `Σ_{n≥1} term(n)` whose term is also defined for real
/// arguments, so the integral test applies. An optional closed form for
/// `∫_x^∞ term(t) dt` replaces numeric tail quadrature.
pub struct Series<'a> {
    term: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    tail_integral: Option<Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>>,
}

impl<'a> Series<'a> {
    pub fn new(term: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Series {
            term: Box::new(term),
            tail_integral: None,
        }
    }

    /// Closed form of `x ↦ ∫_x^∞ term(t) dt`; may return `+∞` for divergent tails.
    pub fn with_tail_integral(mut self, tail: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.tail_integral = Some(Box::new(tail));
        self
    }

    #[inline]
    pub fn term(&self, n: f64) -> f64 {
        (self.term)(n)
    }

    fn tail_from(&self, x: f64, tol: f64) -> Option<(f64, f64)> {
        if let Some(t) = &self.tail_integral {
            let v = t(x);
            return if v.is_nan() { None } else { Some((v, 0.0)) };
        }
        // x = A / s maps (A, ∞) onto (0, 1]
        let g = |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let v = self.term(x / s);
            if v == 0.0 {
                0.0
            } else {
                v * x / (s * s)
            }
        };
        let opts = QuadOptions {
            max_evaluations: 200_000,
        };
        match adaptive_gk(&g, &[0.0, 1.0], tol, &opts) {
            Ok(r) => Some((r.value, r.abs_error_estimate)),
            Err(_) => Some((f64::INFINITY, 0.0)),
        }
    }

    fn integral_between(&self, lo: f64, hi: f64, tol: f64) -> Option<(f64, f64)> {
        if let Some(t) = &self.tail_integral {
            let a = t(lo);
            let b = t(hi);
            if a.is_finite() && b.is_finite() {
                return Some((a - b, 0.0));
            }
        }
        // log substitution x = e^s keeps long ranges cheap
        let g = |s: f64| {
            let x = s.exp();
            self.term(x) * x
        };
        integrate_fn(g, lo.ln(), hi.ln(), tol, &QuadOptions::default())
            .ok()
            .map(|r| (r.value, r.abs_error_estimate))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Convergent,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    /// Certified lower bound for the sum: the compensated partial sum over
    /// `1..=n_terms` plus the integral-test lower tail `∫_{N+1}^∞ term`.
    pub partial_sum: f64,
    /// Width of the bracket: the true sum lies in `[partial_sum, partial_sum + tail_bound]`.
    pub tail_bound: f64,
    pub n_terms: u64,
    pub verdict: SeriesVerdict,
    /// For divergent verdicts: lower bound on the partial sum at `divergence_index`,
    /// obtained from the raw partial sum plus integral-test increments.
    pub divergence_witness: Option<f64>,
    pub divergence_index: Option<f64>,
}

const MONOTONE_SAMPLE: u64 = 16;
const WITNESS_DOUBLINGS: usize = 40;

/// Sums a nonnegative, eventually decreasing series.
///
/// Terms are accumulated with compensated summation. At doubling checkpoints past
/// `monotone_from` the integral test brackets the remainder:
/// `∫_{N+1}^∞ a ≤ Σ_{n>N} a(n) ≤ ∫_N^∞ a`, and the verdict is convergent once the
/// bracket width drops below `tol`. When the remainder integral is infinite or the
/// budget runs out, a divergence witness is attempted: the integral of the term over
/// 40 successive doublings of the index range must show non-decaying increments.
pub fn sum_series(series: &Series, monotone_from: u64, tol: f64, budget: u64) -> Result<SeriesResult> {
    let start = monotone_from.max(1);
    let mut prev = series.term(start as f64);
    for n in start..start + MONOTONE_SAMPLE {
        let next = series.term((n + 1) as f64);
        if prev < 0.0 || next > prev * (1.0 + 1e-12) + f64::MIN_POSITIVE {
            return Err(Error::MonotonicityViolation { at: n, next: n + 1 });
        }
        prev = next;
    }

    let mut sum = CompensatedSum::new();
    let mut n: u64 = 0;
    let mut checkpoint = (start + MONOTONE_SAMPLE).max(16).min(budget.max(1));
    loop {
        while n < checkpoint {
            n += 1;
            sum.add(series.term(n as f64));
        }
        let s = sum.value();
        let rounding = 4.0 * f64::EPSILON * s.abs() * (n as f64).sqrt();
        let nf = n as f64;
        // cheap necessary condition: bracket width is at least term(N+1)
        if series.term(nf + 1.0) < tol {
            if let Some((upper, e_up)) = series.tail_from(nf, tol * 1e-2) {
                if upper.is_infinite() {
                    return divergence(series, s, nf, tol);
                }
                if let Some((lower, e_low)) = series.tail_from(nf + 1.0, tol * 1e-2) {
                    let width = (upper - lower).max(0.0) + e_up + e_low + rounding;
                    if width < tol && lower.is_finite() {
                        return Ok(SeriesResult {
                            partial_sum: s + lower - e_low,
                            tail_bound: width,
                            n_terms: n,
                            verdict: SeriesVerdict::Convergent,
                            divergence_witness: None,
                            divergence_index: None,
                        });
                    }
                }
            }
        }
        if n >= budget {
            let out = divergence(series, s, nf, tol)?;
            return Ok(out);
        }
        checkpoint = checkpoint.saturating_mul(2).min(budget);
    }
}

fn divergence(series: &Series, partial: f64, n: f64, tol: f64) -> Result<SeriesResult> {
    let mut increments = Vec::with_capacity(WITNESS_DOUBLINGS);
    let mut lower = CompensatedSum::new();
    lower.add(partial);
    let mut a = n + 1.0;
    let mut ok = true;
    for _ in 0..WITNESS_DOUBLINGS {
        let b = 2.0 * a;
        // the witness needs the size of each increment, not tol-level accuracy
        let scale = series.term(a) * (b - a);
        match series.integral_between(a, b, tol.max(1e-9 * scale).max(1e-300)) {
            Some((v, _)) if v.is_finite() => {
                increments.push(v);
                lower.add(v);
            }
            _ => {
                ok = false;
                break;
            }
        }
        a = b;
    }
    let half = increments.len() / 2;
    let non_decaying = ok
        && increments.len() == WITNESS_DOUBLINGS
        && increments[half] > 0.0
        && increments[WITNESS_DOUBLINGS - 1] >= increments[half] * (1.0 - 1e-9);
    let (verdict, witness, index) = if non_decaying {
        (SeriesVerdict::Divergent, Some(lower.value()), Some(a))
    } else {
        (SeriesVerdict::Inconclusive, None, None)
    };
    Ok(SeriesResult {
        partial_sum: partial,
        tail_bound: f64::INFINITY,
        n_terms: n as u64,
        verdict,
        divergence_witness: witness,
        divergence_index: index,
    })
}

// ---------------------------------------------------------------------------
// Growth profiles and fits

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub checkpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl GrowthProfile {
    pub fn new(checkpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if checkpoints.len() != values.len() {
            return Err(Error::BadParameter(
                "growth profile: checkpoints and values differ in length".into(),
            ));
        }
        if checkpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::BadParameter(
                "growth profile: checkpoints must be strictly increasing".into(),
            ));
        }
        Ok(GrowthProfile { checkpoints, values })
    }

    /// Ratios `values[i] / values[i-1]`.
    pub fn ratios(&self) -> Vec<f64> {
        self.values.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] > w[0])
    }
}

/// Partial sums `Σ_{n ≤ N} term(n)` at each checkpoint `N`, in one pass.
pub fn partial_sums<F: Fn(u64) -> f64>(term: F, checkpoints: &[u64]) -> Result<GrowthProfile> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadParameter(
            "checkpoints must be strictly increasing".into(),
        ));
    }
    let mut sum = CompensatedSum::new();
    let mut values = Vec::with_capacity(checkpoints.len());
    let mut n = 0u64;
    for &cp in checkpoints {
        while n < cp {
            n += 1;
            sum.add(term(n));
        }
        values.push(sum.value());
    }
    GrowthProfile::new(checkpoints.iter().map(|&c| c as f64).collect(), values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept` on centered data.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(Error::BadParameter("fit: x and y lengths differ".into()));
    }
    if xs.len() < 3 {
        return Err(Error::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::BadParameter("fit: all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
    })
}

/// Least-squares line through `(ln x, ln y)`; `slope` is the power-law exponent and
/// `exp(intercept)` the prefactor.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::NonPositiveCoordinate { x, y });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    linear_fit(&xs, &ys)
}

/// `count` points log-spaced over `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (count - 1) as f64).exp()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{f_half, DomainKind, MeasureDomain};
    use std::f64::consts::PI;

    fn plain(label: &str, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFunction {
        RealFunction::new(
            label,
            MeasureDomain::new(DomainKind::UnitInterval),
            Support::Interval(0.0, 1.0),
            g,
        )
    }

    #[test]
    fn integrates_identity() {
        let r = integrate(&plain("x", |x| x), (0.0, 1.0), 1e-10).unwrap();
        assert!((r.value - 0.5).abs() < 1e-14);
        assert!(r.abs_error_estimate <= 1e-10);
    }

    #[test]
    fn log_singular_integrands_hit_gamma_values() {
        let f = f_half();
        let r = integrate(&f, (0.0, 1.0), 1e-10).unwrap();
        let oracle = 0.886_226_925_452_758_0; // Γ(3/2) = √π/2
        assert!((r.value - oracle).abs() < 1e-12, "{}", r.value);
        assert!((r.value - oracle).abs() <= r.abs_error_estimate);

        let neg_log = f.map("-log x", |v| v * v);
        let r = integrate(&neg_log, (0.0, 1.0), 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_cross_check_of_transformed_integrand() {
        // independent route: trapezoid on the t-integrand 2 t² e^{-t²} over [0, 40]
        let h = 1e-3;
        let n = 40_000;
        let s: f64 = (0..=n)
            .map(|i| {
                let t = i as f64 * h;
                let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                w * 2.0 * t * t * (-t * t).exp()
            })
            .sum::<f64>()
            * h;
        let r = integrate(&f_half(), (0.0, 1.0), 1e-12).unwrap();
        assert!((s - r.value).abs() < 1e-10);
        assert!((s - PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_closure() {
        let r = integrate_fn(|x| (-x).exp(), 0.0, f64::INFINITY, 1e-12, &QuadOptions::default())
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_integral_reports_non_convergence() {
        let opts = QuadOptions {
            max_evaluations: 50_000,
        };
        let r = integrate_fn(|x| 1.0 / x, 0.0, 1.0, 1e-8, &opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let r = integrate(&plain("x", |x| x), (0.5, 2.0), 1e-8);
        assert!(matches!(r, Err(Error::DomainMismatch { .. })));
    }

    #[test]
    fn geometric_series() {
        let s = Series::new(|n: f64| 0.5f64.powf(n));
        let r = sum_series(&s, 1, 1e-12, 1_000_000).unwrap();
        assert_eq!(r.verdict, SeriesVerdict::Convergent);
        assert!(r.partial_sum <= 1.0 + 1e-15 && 1.0 <= r.partial_sum + r.tail_bound + 1e-15);
        assert!((r.partial_sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn basel_series_brackets_pi_squared_over_six() {
        let s = Series::new(|n: f64| 1.0 / (n * n));
        let r = sum_series(&s, 1, 1e-8, 100_000_000).unwrap();
        let oracle = PI * PI / 6.0;
        assert_eq!(r.verdict, SeriesVerdict::Convergent);
        assert!(r.tail_bound < 1e-8);
        assert!(r.partial_sum <= oracle + 1e-13, "{} > {}", r.partial_sum, oracle);
        assert!(oracle <= r.partial_sum + r.tail_bound + 1e-13);
    }

    #[test]
    fn harmonic_series_is_divergent_with_witness() {
        let s = Series::new(|n: f64| 1.0 / n);
        let r = sum_series(&s, 1, 1e-8, 10_000).unwrap();
        assert_eq!(r.verdict, SeriesVerdict::Divergent);
        let w = r.divergence_witness.unwrap();
        assert!(w > r.partial_sum + 20.0);
    }

    #[test]
    fn increasing_terms_are_rejected() {
        let s = Series::new(|n: f64| n);
        assert!(matches!(
            sum_series(&s, 1, 1e-8, 100),
            Err(Error::MonotonicityViolation { .. })
        ));
    }

    #[test]
    fn partial_sums_count_ones() {
        let p = partial_sums(|_| 1.0, &[10, 100]).unwrap();
        assert_eq!(p.values, vec![10.0, 100.0]);
        assert!(partial_sums(|_| 1.0, &[10, 10]).is_err());
    }

    #[test]
    fn partial_sums_of_convergent_contrast_saturate() {
        let p = partial_sums(|n| 1.0 / (n as f64).powi(2), &[100, 10_000]).unwrap();
        assert!((p.values[1] - p.values[0]).abs() < 0.01);
    }

    #[test]
    fn exact_power_law_fits() {
        let pts: Vec<_> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, x.powi(-2))).collect();
        let f = loglog_fit(&pts).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        let pts: Vec<_> = [1.0, 10.0, 100.0].iter().map(|&x| (x, 3.0 * x)).collect();
        let f = loglog_fit(&pts).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(matches!(
            loglog_fit(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(Error::TooFewPoints(2))
        ));
        assert!(matches!(
            loglog_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
            Err(Error::NonPositiveCoordinate { .. })
        ));
    }

    #[test]
    fn compensated_sum_is_order_stable() {
        let terms: Vec<f64> = (1..100_000).map(|n| 1.0 / (n as f64).powf(1.5)).collect();
        let fwd: CompensatedSum = terms.iter().copied().collect();
        let bwd: CompensatedSum = terms.iter().rev().copied().collect();
        assert!((fwd.value() - bwd.value()).abs() <= 1e-12 * fwd.value());
    }
}
