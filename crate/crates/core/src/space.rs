//! Measurable functions on `(0, 1)` and `(0, ∞)` with Lebesgue measure.
//!
//! A [`RealFunction`] carries its support, optional closed-form tail and Lp norm, a
//! monotonicity annotation and, for singular integrands, a left-endpoint singularity
//! flag that makes [`crate::quad::integrate`] use the `x = a + w·exp(-t²)` substitution.

use std::fmt;
use std::sync::Arc;

use crate::quad::{self, QuadOptions};
use crate::special::gamma;
use crate::{Error, Result};

type Fx = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    UnitInterval,
    PositiveHalfline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureDomain {
    kind: DomainKind,
}

impl MeasureDomain {
    pub fn new(kind: DomainKind) -> Self {
        MeasureDomain { kind }
    }

    pub fn unit() -> Self {
        Self::new(DomainKind::UnitInterval)
    }

    pub fn halfline() -> Self {
        Self::new(DomainKind::PositiveHalfline)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn total_mass(&self) -> f64 {
        match self.kind {
            DomainKind::UnitInterval => 1.0,
            DomainKind::PositiveHalfline => f64::INFINITY,
        }
    }

    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        lo >= 0.0 && hi <= self.total_mass() && lo < hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Empty,
    Interval(f64, f64),
    /// Countably many pieces accumulating inside `(lo, hi)`; total measure `measure`.
    Blocks { lo: f64, hi: f64, measure: f64 },
}

impl Support {
    pub fn measure(&self) -> f64 {
        match *self {
            Support::Empty => 0.0,
            Support::Interval(a, b) => b - a,
            Support::Blocks { measure, .. } => measure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    /// Non-increasing on the support.
    Decreasing,
    /// Non-decreasing on the support.
    Increasing,
    None,
}

#[derive(Clone)]
pub struct RealFunction {
    label: String,
    domain: MeasureDomain,
    support: Support,
    eval: Fx,
    relative: Option<Fx>,
    left_singular: bool,
    monotonicity: Monotonicity,
    tail: Option<Fx>,
    moment: Option<Fx>,
    knots: Option<Arc<[f64]>>,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("monotonicity", &self.monotonicity)
            .field("left_singular", &self.left_singular)
            .field("closed_form_tail", &self.tail.is_some())
            .field("closed_form_moment", &self.moment.is_some())
            .finish()
    }
}

impl RealFunction {
    /// A function given by `eval` on `support`; values outside the support read as 0.
    pub fn new(
        label: impl Into<String>,
        domain: MeasureDomain,
        support: Support,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        RealFunction {
            label: label.into(),
            domain,
            support,
            eval: Arc::new(eval),
            relative: None,
            left_singular: false,
            monotonicity: Monotonicity::None,
            tail: None,
            moment: None,
            knots: None,
        }
    }

    pub fn zero(domain: MeasureDomain) -> Self {
        RealFunction::new("0", domain, Support::Empty, |_| 0.0)
            .with_tail(|_| 0.0)
            .with_moment(|_| 0.0)
            .with_monotonicity(Monotonicity::Decreasing)
    }

    pub fn with_tail(mut self, tail: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.tail = Some(Arc::new(tail));
        self
    }

    /// Closed form of `p ↦ |f|_p`.
    pub fn with_moment(mut self, moment: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.moment = Some(Arc::new(moment));
        self
    }

    /// Evaluation in support-relative coordinates `u ∈ (0, 1)`, i.e. at `a + u·(b - a)`.
    pub fn with_relative(mut self, rel: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.relative = Some(Arc::new(rel));
        self
    }

    pub fn with_left_singularity(mut self) -> Self {
        self.left_singular = true;
        self
    }

    pub fn with_monotonicity(mut self, m: Monotonicity) -> Self {
        self.monotonicity = m;
        self
    }

    pub fn with_knots(mut self, knots: Vec<f64>) -> Self {
        self.knots = Some(knots.into());
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same function with the closed-form tail and moment removed.
    pub fn without_closed_forms(mut self) -> Self {
        self.tail = None;
        self.moment = None;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> MeasureDomain {
        self.domain
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn monotonicity(&self) -> Monotonicity {
        self.monotonicity
    }

    pub fn is_left_singular(&self) -> bool {
        self.left_singular
    }

    pub fn knots(&self) -> Option<&[f64]> {
        self.knots.as_deref()
    }

    pub fn has_closed_form_tail(&self) -> bool {
        self.tail.is_some()
    }

    pub fn has_closed_form_moment(&self) -> bool {
        self.moment.is_some()
    }

    pub fn closed_form_tail(&self, z: f64) -> Option<f64> {
        self.tail.as_ref().map(|t| t(z))
    }

    pub fn closed_form_moment(&self, p: f64) -> Option<f64> {
        self.moment.as_ref().map(|m| m(p))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.support, Support::Empty)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        match self.support {
            Support::Empty => 0.0,
            Support::Interval(a, b) if !(x > a && x < b) => 0.0,
            Support::Blocks { lo, hi, .. } if !(x > lo && x < hi) => 0.0,
            _ => (self.eval)(x),
        }
    }

    /// Value at relative position `u` of a finite interval support.
    pub fn eval_relative(&self, u: f64) -> f64 {
        match (&self.relative, self.support) {
            (_, Support::Empty) => 0.0,
            (Some(r), _) => {
                if u > 0.0 && u < 1.0 {
                    r(u)
                } else {
                    0.0
                }
            }
            (None, Support::Interval(a, b)) => self.evaluate(a + u * (b - a)),
            (None, _) => f64::NAN,
        }
    }

    /// Pointwise composition `x ↦ g(f(x))` with `g(0) = 0`, keeping support and
    /// quadrature annotations; closed forms are dropped.
    pub fn map(&self, label: &str, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFunction {
        let g: Fx = Arc::new(g);
        let inner = self.eval.clone();
        let g1 = g.clone();
        let mut out = RealFunction {
            label: format!("{label}∘{}", self.label),
            domain: self.domain,
            support: self.support,
            eval: Arc::new(move |x| g1(inner(x))),
            relative: None,
            left_singular: self.left_singular,
            monotonicity: Monotonicity::None,
            tail: None,
            moment: None,
            knots: self.knots.clone(),
        };
        if let Some(r) = &self.relative {
            let r = r.clone();
            out.relative = Some(Arc::new(move |u| g(r(u))));
        }
        out
    }

    /// `x ↦ c·f(x)` with closed forms transported.
    pub fn scaled(&self, c: f64) -> RealFunction {
        if c == 0.0 {
            return RealFunction::zero(self.domain);
        }
        let mut out = self.map(&format!("{c}·"), move |v| c * v);
        out.label = format!("{c}·{}", self.label);
        out.monotonicity = match (self.monotonicity, c > 0.0) {
            (m, true) => m,
            (Monotonicity::Decreasing, false) => Monotonicity::Increasing,
            (Monotonicity::Increasing, false) => Monotonicity::Decreasing,
            (Monotonicity::None, false) => Monotonicity::None,
        };
        let ac = c.abs();
        if let Some(t) = &self.tail {
            let t = t.clone();
            out.tail = Some(Arc::new(move |z| t(z / ac)));
        }
        if let Some(m) = &self.moment {
            let m = m.clone();
            out.moment = Some(Arc::new(move |p| ac * m(p)));
        }
        out
    }

    /// Checks the closed-form moment against quadrature at `p ∈ {1, 2, 4, 8}` (where
    /// finite) to 1e-8 relative, and the closed-form tail for monotonicity.
    pub fn verify_closed_forms(&self) -> Result<()> {
        if let Some(m) = &self.moment {
            if let Support::Interval(a, b) = self.support {
                for p in [1.0, 2.0, 4.0, 8.0] {
                    let exact = m(p);
                    if !exact.is_finite() {
                        continue;
                    }
                    let integrand = self.map("|·|^p", move |v| v.abs().powf(p));
                    let target = exact.powf(p);
                    let q = quad::integrate_with(
                        &integrand,
                        (a, b),
                        1e-12 * target.max(1e-300),
                        &QuadOptions::default(),
                    )?;
                    let numeric = q.value.powf(1.0 / p);
                    if (numeric - exact).abs() > 1e-8 * exact.abs().max(1e-300) {
                        return Err(Error::ClosedFormMismatch(format!(
                            "{}: |f|_{p} closed form {exact} vs quadrature {numeric}",
                            self.label
                        )));
                    }
                }
            }
        }
        if let Some(t) = &self.tail {
            let zs = quad::log_space(1e-3, 1e3, 64);
            let mut prev = f64::INFINITY;
            for z in zs {
                let v = t(z);
                if v > prev * (1.0 + 1e-12) || v < 0.0 || v > self.support.measure() * (1.0 + 1e-12) {
                    return Err(Error::ClosedFormMismatch(format!(
                        "{}: tail not non-increasing within [0, measure] at z = {z}",
                        self.label
                    )));
                }
                prev = v;
            }
        }
        Ok(())
    }
}

/// `f(x) = √(-ln x)` on `(0, 1)`, with `|f|_p = Γ(p/2 + 1)^{1/p}` and tail `exp(-u²)`.
pub fn f_half() -> RealFunction {
    let sqrt_neg_log = |x: f64| if x > 0.0 && x < 1.0 { (-x.ln()).sqrt() } else { 0.0 };
    RealFunction::new("f_half", MeasureDomain::unit(), Support::Interval(0.0, 1.0), sqrt_neg_log)
        .with_relative(sqrt_neg_log)
        .with_left_singularity()
        .with_monotonicity(Monotonicity::Decreasing)
        .with_tail(|u| if u <= 0.0 { 1.0 } else { (-u * u).exp() })
        .with_moment(|p| gamma(p / 2.0 + 1.0).powf(1.0 / p))
}

/// Indicator of the open interval `(lo, hi)` inside `domain`.
pub fn indicator(lo: f64, hi: f64, domain: MeasureDomain) -> Result<RealFunction> {
    if !(lo < hi) || !domain.contains_interval(lo, hi) {
        return Err(Error::DomainMismatch { lo, hi });
    }
    let len = hi - lo;
    Ok(RealFunction::new(
        format!("I({lo},{hi})"),
        domain,
        Support::Interval(lo, hi),
        |_| 1.0,
    )
    .with_relative(|_| 1.0)
    .with_monotonicity(Monotonicity::Decreasing)
    .with_tail(move |z| if z < 1.0 { len } else { 0.0 })
    .with_moment(move |p| len.powf(1.0 / p)))
}

/// `η(x) = scale·x^{-1/p0}` on `(0, 1)`; tail `min(1, (scale/z)^{p0})`.
pub fn power_tail(p0: f64, scale: f64) -> Result<RealFunction> {
    if !(p0 > 1.0) || !p0.is_finite() {
        return Err(Error::BadParameter(format!("power_tail needs p0 > 1, got {p0}")));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::BadParameter(format!("power_tail needs scale > 0, got {scale}")));
    }
    let e = -1.0 / p0;
    let eval = move |x: f64| if x > 0.0 && x < 1.0 { scale * x.powf(e) } else { 0.0 };
    Ok(RealFunction::new(
        format!("{scale}·x^(-1/{p0})"),
        MeasureDomain::unit(),
        Support::Interval(0.0, 1.0),
        eval,
    )
    .with_relative(eval)
    .with_left_singularity()
    .with_monotonicity(Monotonicity::Decreasing)
    .with_tail(move |z| if z <= 0.0 { 1.0 } else { (scale / z).powf(p0).min(1.0) })
    .with_moment(move |p| {
        if p < p0 {
            scale * (1.0 / (1.0 - p / p0)).powf(1.0 / p)
        } else {
            f64::INFINITY
        }
    }))
}

/// `x ↦ c·f((x - a)/Δ)` supported on `(a, a + Δ)`, for `f` supported on `(0, 1)`.
///
/// The domain is the unit interval when `(a, a + Δ) ⊂ (0, 1)`, else the half-line.
pub fn scale_translate(f: &RealFunction, c: f64, a: f64, width: f64) -> Result<RealFunction> {
    if !(width > 0.0) || !width.is_finite() || !a.is_finite() || !c.is_finite() {
        return Err(Error::BadParameter(format!(
            "scale_translate needs finite c, a and Δ > 0 (got c={c}, a={a}, Δ={width})"
        )));
    }
    if a < 0.0 {
        return Err(Error::BadParameter(format!("block start {a} is negative")));
    }
    match f.support {
        Support::Interval(lo, hi) if lo == 0.0 && hi == 1.0 => {}
        Support::Empty => {}
        _ => {
            return Err(Error::BadParameter(format!(
                "scale_translate expects a function supported on (0, 1), got {}",
                f.label
            )))
        }
    }
    let domain = if a + width <= 1.0 {
        MeasureDomain::unit()
    } else {
        MeasureDomain::halfline()
    };
    if c == 0.0 || f.is_zero() {
        return Ok(RealFunction::zero(domain));
    }
    let inner = f.clone();
    let inner_rel = f.clone();
    let mut out = RealFunction::new(
        format!("{c}·{}((x-{a})/{width})", f.label),
        domain,
        Support::Interval(a, a + width),
        move |x| c * inner.evaluate((x - a) / width),
    )
    .with_relative(move |u| c * inner_rel.eval_relative(u));
    out.left_singular = f.left_singular;
    out.monotonicity = match (f.monotonicity, c > 0.0) {
        (m, true) => m,
        (Monotonicity::Decreasing, false) => Monotonicity::Increasing,
        (Monotonicity::Increasing, false) => Monotonicity::Decreasing,
        (Monotonicity::None, false) => Monotonicity::None,
    };
    let ac = c.abs();
    if let Some(t) = &f.tail {
        let t = t.clone();
        out.tail = Some(Arc::new(move |z| width * t(z / ac)));
    }
    if let Some(m) = &f.moment {
        let m = m.clone();
        out.moment = Some(Arc::new(move |p| ac * width.powf(1.0 / p) * m(p)));
    }
    Ok(out)
}

/// Measure of `{|f| > z}`. Closed form when available, else bisection on a
/// monotone `f` to absolute accuracy `tol` in the measure.
pub fn tail(f: &RealFunction, z: f64, tol: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::BadParameter(format!("tail needs z > 0, got {z}")));
    }
    if let Some(t) = &f.tail {
        return Ok(t(z));
    }
    let (a, b) = match f.support {
        Support::Empty => return Ok(0.0),
        Support::Interval(a, b) => (a, b),
        Support::Blocks { .. } => {
            return Err(Error::Unsupported(format!(
                "{} has no closed-form tail",
                f.label
            )))
        }
    };
    // |f| of a sign-changing monotone function is not monotone
    let probe = |x: f64| f.evaluate(x);
    let (sample_lo, sample_hi) = (probe(a + (b - a) * 1e-12), probe(b - (b - a) * 1e-12));
    let decreasing_abs = match f.monotonicity {
        Monotonicity::Decreasing if sample_hi >= 0.0 => true,
        Monotonicity::Increasing if sample_lo >= 0.0 => false,
        Monotonicity::Increasing if sample_hi <= 0.0 => true,
        Monotonicity::Decreasing if sample_lo <= 0.0 => false,
        _ => {
            return Err(Error::Unsupported(format!(
                "{} is neither monotone with constant sign nor has a closed-form tail",
                f.label
            )))
        }
    };
    // find the crossing point t* with |f(t*)| = z
    let above = |x: f64| probe(x).abs() > z;
    let (mut lo, mut hi) = (a, b);
    if decreasing_abs {
        // {|f| > z} = (a, t*)
        while hi - lo > tol.max(f64::EPSILON * hi.abs().max(1.0)) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if above(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi) - a)
    } else {
        while hi - lo > tol.max(f64::EPSILON * hi.abs().max(1.0)) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if above(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(b - 0.5 * (lo + hi))
    }
}

/// Decreasing rearrangement tabulated on a grid, with exact cumulative integrals of
/// the piecewise-linear interpolant.
#[derive(Debug, Clone)]
pub struct Rearrangement {
    grid: Arc<[f64]>,
    values: Arc<[f64]>,
    cumulative: Vec<f64>,
    measure: f64,
    function: RealFunction,
}

/// Default number of grid points for [`rearrangement`].
pub const DEFAULT_REARRANGEMENT_GRID: usize = 1 << 14;
const SMALLEST_RELATIVE_LEVEL: f64 = 1e-100;
const LOG_GRID_TOP: f64 = 0.05;

impl Rearrangement {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn function(&self) -> &RealFunction {
        &self.function
    }

    /// `∫_0^s f*(t) dt`.
    pub fn integral_to(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.measure);
        let g = &self.grid;
        let i = g.partition_point(|&t| t <= s);
        if i == 0 {
            return 0.0;
        }
        if i >= g.len() {
            return *self.cumulative.last().unwrap();
        }
        let (t0, t1) = (g[i - 1], g[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        let vs = if t1 > t0 { v0 + (v1 - v0) * (s - t0) / (t1 - t0) } else { v0 };
        self.cumulative[i - 1] + 0.5 * (v0 + vs) * (s - t0)
    }
}

fn interpolate(grid: &[f64], values: &[f64], t: f64) -> f64 {
    let i = grid.partition_point(|&g| g <= t);
    if i == 0 {
        return values[0];
    }
    if i >= grid.len() {
        return *values.last().unwrap();
    }
    let (t0, t1) = (grid[i - 1], grid[i]);
    if t1 <= t0 {
        return values[i];
    }
    let (v0, v1) = (values[i - 1], values[i]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

/// Decreasing rearrangement `f*(t) = inf{z : |{|f| > z}| ≤ t}` on `(0, m)` where `m`
/// is the support measure, tabulated on `grid` points: half uniform on `[m/20, m]`, half
/// log-spaced down to `1e-100·m`. Jumps of `f*` are located by bisection and inserted
/// as knot pairs.
pub fn rearrangement(f: &RealFunction, grid: usize) -> Result<Rearrangement> {
    if grid < 2 {
        return Err(Error::BadParameter("rearrangement grid needs ≥ 2 points".into()));
    }
    let m = f.support.measure();
    if !m.is_finite() {
        return Err(Error::Unsupported(format!(
            "{} has infinite support measure",
            f.label
        )));
    }
    let level: Box<dyn Fn(f64) -> Result<f64> + '_> = if f.tail.is_some() {
        Box::new(move |t: f64| invert_tail(f, t))
    } else {
        match (f.monotonicity, f.support) {
            (Monotonicity::Decreasing, Support::Interval(a, _)) => {
                Box::new(move |t: f64| Ok(f.evaluate(a + t).abs()))
            }
            (Monotonicity::Increasing, Support::Interval(_, b)) => {
                Box::new(move |t: f64| Ok(f.evaluate(b - t).abs()))
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} has neither a closed-form tail nor monotone structure",
                    f.label
                )))
            }
        }
    };
    if m == 0.0 {
        let zero = RealFunction::zero(f.domain);
        return Ok(Rearrangement {
            grid: vec![0.0, 0.0].into(),
            values: vec![0.0, 0.0].into(),
            cumulative: vec![0.0, 0.0],
            measure: 0.0,
            function: zero,
        });
    }
    let n_uniform = (grid / 2).max(1);
    let n_log = grid - n_uniform;
    let mut ts: Vec<f64> = Vec::with_capacity(grid + 8);
    let split = m * LOG_GRID_TOP;
    if n_log > 0 {
        let lo = m * SMALLEST_RELATIVE_LEVEL;
        let (la, lb) = (lo.ln(), split.ln());
        for i in 0..n_log {
            ts.push((la + (lb - la) * i as f64 / n_log as f64).exp());
        }
    }
    for i in 0..n_uniform {
        ts.push(if i + 1 == n_uniform {
            m
        } else {
            split + (m - split) * i as f64 / (n_uniform - 1).max(1) as f64
        });
    }
    let mut vs: Vec<f64> = ts.iter().map(|&t| level(t)).collect::<Result<_>>()?;

    // locate jumps in the uniform part
    let start = n_log;
    let mut inserts: Vec<(usize, f64, f64, f64, f64)> = Vec::new();
    for i in start..ts.len().saturating_sub(1) {
        let jump = vs[i] - vs[i + 1];
        let left = if i > 0 { vs[i - 1] - vs[i] } else { 0.0 };
        let right = if i + 2 < vs.len() { vs[i + 1] - vs[i + 2] } else { 0.0 };
        if jump > 1e-9 * vs[i].abs().max(1e-300) && jump > 10.0 * left.max(right) {
            let (mut lo, mut hi) = (ts[i], ts[i + 1]);
            let (v_lo, v_hi) = (vs[i], vs[i + 1]);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let v = level(mid)?;
                if v - v_hi > 0.5 * (v_lo - v_hi) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (a, b) = (level(lo)?, level(hi)?);
            inserts.push((i + 1, lo, a, hi, b));
        }
    }
    for (pos, lo, a, hi, b) in inserts.into_iter().rev() {
        let mut k = pos;
        for (t, v) in [(lo, a), (hi, b)] {
            if t > ts[k - 1] && t < ts[k] {
                ts.insert(k, t);
                vs.insert(k, v);
                k += 1;
            }
        }
    }
    // flat extension to t = 0
    ts.insert(0, 0.0);
    vs.insert(0, vs[0]);

    let mut cumulative = Vec::with_capacity(ts.len());
    cumulative.push(0.0);
    let mut acc = quad::CompensatedSum::new();
    for i in 1..ts.len() {
        acc.add(0.5 * (vs[i - 1] + vs[i]) * (ts[i] - ts[i - 1]));
        cumulative.push(acc.value());
    }
    let grid_arc: Arc<[f64]> = ts.into();
    let values_arc: Arc<[f64]> = vs.into();
    let (g2, v2) = (grid_arc.clone(), values_arc.clone());
    let (g3, v3) = (grid_arc.clone(), values_arc.clone());
    let domain = if m <= 1.0 {
        MeasureDomain::unit()
    } else {
        MeasureDomain::halfline()
    };
    let function = RealFunction::new(
        format!("({})*", f.label),
        domain,
        Support::Interval(0.0, m),
        move |t| interpolate(&g2, &v2, t),
    )
    .with_relative(move |u| interpolate(&g3, &v3, u * m))
    .with_monotonicity(Monotonicity::Decreasing)
    .with_knots(grid_arc.to_vec());
    Ok(Rearrangement {
        grid: grid_arc,
        values: values_arc,
        cumulative,
        measure: m,
        function,
    })
}

fn invert_tail(f: &RealFunction, t: f64) -> Result<f64> {
    // smallest z with tail(z) ≤ t
    let tail_at = |z: f64| -> Result<f64> {
        if z <= 0.0 {
            Ok(f.support.measure())
        } else {
            tail(f, z, 1e-15)
        }
    };
    if tail_at(0.0)? <= t {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut guard = 0;
    while tail_at(hi)? > t {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = 0.0;
    for _ in 0..300 {
        let mid = if lo > 0.0 && hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if tail_at(mid)? > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    #[test]
    fn f_half_values() {
        let f = f_half();
        assert!((f.evaluate((-4.0f64).exp()) - 2.0).abs() < 1e-15);
        assert!((f.closed_form_tail(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert!((f.closed_form_moment(2.0).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(f.evaluate(0.0), 0.0);
        f.verify_closed_forms().unwrap();
    }

    #[test]
    fn indicator_values() {
        let i = indicator(0.0, 0.25, MeasureDomain::unit()).unwrap();
        assert_eq!(i.evaluate(0.1), 1.0);
        assert_eq!(i.evaluate(0.3), 0.0);
        assert_eq!(i.closed_form_tail(0.5), Some(0.25));
        assert_eq!(i.closed_form_tail(2.0), Some(0.0));
        i.verify_closed_forms().unwrap();
        assert!(matches!(
            indicator(0.5, 1.5, MeasureDomain::unit()),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn power_tail_values() {
        let p = power_tail(2.0, 1.0).unwrap();
        assert!((p.evaluate(0.25) - 2.0).abs() < 1e-15);
        assert!((p.closed_form_tail(10.0).unwrap() - 0.01).abs() < 1e-17);
        assert_eq!(p.closed_form_tail(0.5), Some(1.0));
        p.verify_closed_forms().unwrap();
        assert!(power_tail(1.0, 1.0).is_err());
        // independent: the superlevel set {x^{-1/2} > 10} is (0, 1e-2)
        let numeric = tail(&p.clone().without_closed_forms(), 10.0, 1e-14).unwrap();
        assert!((numeric - 0.01).abs() < 1e-12);
    }

    #[test]
    fn scale_translate_identity_and_closed_forms() {
        let f = f_half();
        let same = scale_translate(&f, 1.0, 0.0, 1.0).unwrap();
        for &x in &[1e-9, 0.1, 0.5, 0.9] {
            assert_eq!(same.evaluate(x), f.evaluate(x));
        }
        let g = scale_translate(&f, 2.0, 0.5, 0.25).unwrap();
        let expected = 0.25 * (-1.0f64).exp();
        assert!((g.closed_form_tail(2.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.091_970).abs() < 1e-6);
        let h = scale_translate(&f, 1.0, 0.5, 0.5).unwrap();
        assert!((h.closed_form_moment(2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        h.verify_closed_forms().unwrap();
        g.verify_closed_forms().unwrap();
    }

    #[test]
    fn tail_routes() {
        assert!((tail(&f_half(), 2.0, 1e-12).unwrap() - (-4.0f64).exp()).abs() < 1e-16);
        let i = indicator(0.0, 0.3, MeasureDomain::unit()).unwrap();
        assert!((tail(&i, 0.5, 1e-12).unwrap() - 0.3).abs() < 1e-15);
        let p = power_tail(2.0, 1.0).unwrap().without_closed_forms();
        assert!((tail(&p, 4.0, 1e-14).unwrap() - 0.0625).abs() < 1e-12);
        let bumpy = RealFunction::new("sin", MeasureDomain::unit(), Support::Interval(0.0, 1.0), |x| {
            (10.0 * x).sin()
        });
        assert!(matches!(tail(&bumpy, 0.5, 1e-8), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rearrangement_of_translated_indicator() {
        let i = indicator(0.3, 0.6, MeasureDomain::unit()).unwrap();
        let r = rearrangement(&i, 1024).unwrap();
        let target = indicator(0.0, 0.3, MeasureDomain::unit()).unwrap();
        for &t in &[0.01, 0.1, 0.2999, 0.29999999] {
            assert_eq!(r.function().evaluate(t), target.evaluate(t), "t={t}");
        }
        assert!((r.integral_to(1.0) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn rearrangement_fixes_decreasing_functions() {
        let f = f_half();
        let r = rearrangement(&f, 4096).unwrap();
        for &t in &[1e-50, 1e-6, 0.01, 0.3, 0.77] {
            let got = r.function().evaluate(t);
            let want = f.evaluate(t);
            assert!((got - want).abs() < 2e-3 * want.max(1e-3), "t={t}: {got} vs {want}");
        }
        // linear interpolation of t^{-1/2} on the default log grid is good to ~1e-4
        let p = power_tail(2.0, 1.0).unwrap();
        let r = rearrangement(&p, DEFAULT_REARRANGEMENT_GRID).unwrap();
        for &t in &[1e-20, 1e-3, 0.5] {
            let got = r.function().evaluate(t);
            let want = p.evaluate(t);
            assert!((got - want).abs() < 2e-4 * want, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn disjoint_family_adds_pth_powers() {
        let f = f_half();
        let blocks: Vec<_> = [(0.0, 0.2, 1.5), (0.2, 0.3, 0.7), (0.5, 0.25, 2.0)]
            .iter()
            .map(|&(a, w, c)| scale_translate(&f, c, a, w).unwrap())
            .collect();
        for p in [1.0, 2.0, 3.0] {
            let separate: f64 = blocks
                .iter()
                .map(|b| {
                    let g = b.map("|·|^p", move |v| v.abs().powf(p));
                    let Support::Interval(lo, hi) = b.support() else { unreachable!() };
                    integrate(&g, (lo, hi), 1e-13).unwrap().value
                })
                .sum();
            let closed: f64 = blocks.iter().map(|b| b.closed_form_moment(p).unwrap().powf(p)).sum();
            assert!((separate - closed).abs() < 1e-8 * closed);
        }
        // sup = sum pointwise
        for k in 1..1000 {
            let x = k as f64 / 1000.0 + 1e-7;
            let vals: Vec<f64> = blocks.iter().map(|b| b.evaluate(x).abs()).collect();
            let sup = vals.iter().cloned().fold(0.0, f64::max);
            let sum: f64 = vals.iter().sum();
            assert_eq!(sup, sum);
        }
    }
}
