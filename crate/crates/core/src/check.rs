//! Structured verdicts: a computed value, the oracle it was compared against, the
//! tolerance, and the resulting pass/fail.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::quad::{FitResult, GrowthProfile};

/// Reference strings attached to every check. Each entry pairs an equation label
/// with a short verbatim anchor from the source text.
pub mod anchors {
    pub const LUXEMBURG: &str = "§1: Recall that the Luxemburg norm";
    pub const DOMINATION: &str = "(2): which denotes by definition";
    pub const LORENTZ: &str = "§1: generalized Lorentz (more exactly, Lorentz -Zygmund) norm";
    pub const YOUNG: &str = "§1: even convex continuous strictly increasing on the non-negative right-hand semi-axis";
    pub const GRAND_LEBESGUE: &str = "(4): The so-called Grand Lebesgue Space";
    pub const F_HALF_MOMENTS: &str = "§1.B: using Stirling's formula for the Gamma function";
    pub const F_HALF_TAIL: &str = "§1.B: P(f_{1/2} > u) = exp(-u^2)";
    pub const DISJOINT: &str = "(7): is said to be disjoint, or more exactly pairwise disjoint";
    pub const METRIC: &str = "(9): The distance d is defined as follows";
    pub const BLOCK_NORMS: &str = "(12),(18): We calculate using the relations";
    pub const EQ13: &str = "(13): we can choose in the capacity";
    pub const BOREL_CANTELLI: &str = "§2.2: lemma of Borel- Cantelli";
    pub const SYMMETRIZATION: &str = "§2.2: Rademacher's symmetrization";
    pub const SUP_EQUALS_SUM: &str = "(17): is again non-negative and disjoint";
    pub const EQ19: &str = "(19): (p_0 -p)^{ -1/p_0 }";
    pub const EQ20: &str = "(20): the relation (20) is exact";
    pub const EQ21: &str = "(21): obeys the following asymptotical";
    pub const EQ22: &str = "(22): int_0^{1/2} x^{-1} |log x|^{-1/2} dx = infinity";
    pub const EQ23: &str = "(23): It remains to use the known";
    pub const DELTA2: &str = "§2.3: satisfies the Delta_2 condition";
    pub const CONTINUITY: &str = "§2.3: therefore |g_n - g_infinity|_{p_0} -> 0";
    pub const REARRANGEMENT: &str = "§2.3: the Orlicz spaces are rearrangement invariant";
    pub const QUASINORM: &str = "Remark 3: with quasinorm";

    /// Every anchor, for membership checks.
    pub const ALL: &[&str] = &[
        LUXEMBURG,
        DOMINATION,
        LORENTZ,
        YOUNG,
        GRAND_LEBESGUE,
        F_HALF_MOMENTS,
        F_HALF_TAIL,
        DISJOINT,
        METRIC,
        BLOCK_NORMS,
        EQ13,
        BOREL_CANTELLI,
        SYMMETRIZATION,
        SUP_EQUALS_SUM,
        EQ19,
        EQ20,
        EQ21,
        EQ22,
        EQ23,
        DELTA2,
        CONTINUITY,
        REARRANGEMENT,
        QUASINORM,
    ];
}

/// A reported number, or a descriptor when the value is not a finite real
/// (infinite norms, model descriptions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Quantity::Number(v)
        } else if v.is_nan() {
            Quantity::Text("nan".into())
        } else if v > 0.0 {
            Quantity::Text("inf".into())
        } else {
            Quantity::Text("-inf".into())
        }
    }
}

impl From<&str> for Quantity {
    fn from(s: &str) -> Self {
        Quantity::Text(s.to_string())
    }
}

impl From<String> for Quantity {
    fn from(s: String) -> Self {
        Quantity::Text(s)
    }
}

impl Quantity {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Quantity::Number(v) => Some(*v),
            Quantity::Text(_) => None,
        }
    }
}

impl fmt::Display for Quantity {
    /// Numbers use 17 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Number(v) => write!(f, "{}", format_17(*v)),
            Quantity::Text(s) => f.write_str(s),
        }
    }
}

/// Formats with 17 significant digits, switching to exponent form outside
/// `[1e-5, 1e17)`.
pub fn format_17(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-5..1e17).contains(&a) {
        let digits_before = a.log10().floor() as i32 + 1;
        let decimals = (17 - digits_before).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub paper_ref: String,
    pub computed: Quantity,
    pub oracle: Quantity,
    pub tolerance: Quantity,
    pub verdict: Verdict,
    /// Free-form explanation: first violation, sub-check outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<GrowthProfile>,
}

impl CheckResult {
    pub fn new(
        check_id: impl Into<String>,
        paper_ref: &str,
        computed: impl Into<Quantity>,
        oracle: impl Into<Quantity>,
        tolerance: impl Into<Quantity>,
        pass: bool,
    ) -> Self {
        CheckResult {
            check_id: check_id.into(),
            paper_ref: paper_ref.to_string(),
            computed: computed.into(),
            oracle: oracle.into(),
            tolerance: tolerance.into(),
            verdict: Verdict::from_bool(pass),
            detail: None,
            fit: None,
            profile: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_fit(mut self, fit: FitResult) -> Self {
        self.fit = Some(fit);
        self
    }

    pub fn with_profile(mut self, profile: GrowthProfile) -> Self {
        self.profile = Some(profile);
        self
    }

    /// Renames the check, keeping everything else.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.check_id = id.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// `|computed - oracle| ≤ tol·|oracle|`.
    pub fn relative(
        check_id: impl Into<String>,
        paper_ref: &str,
        computed: f64,
        oracle: f64,
        rel_tol: f64,
    ) -> Self {
        let ok = (computed - oracle).abs() <= rel_tol * oracle.abs();
        CheckResult::new(check_id, paper_ref, computed, oracle, rel_tol, ok)
    }

    /// Combines sub-checks into one entry that passes only if all of them pass.
    pub fn all_of(
        check_id: impl Into<String>,
        paper_ref: &str,
        parts: Vec<CheckResult>,
    ) -> Self {
        let pass = parts.iter().all(CheckResult::passed);
        let failed: Vec<&str> = parts
            .iter()
            .filter(|p| !p.passed())
            .map(|p| p.check_id.as_str())
            .collect();
        let detail = parts
            .iter()
            .map(|p| {
                format!(
                    "{}: {} (computed {}, oracle {}, tol {})",
                    p.check_id, p.verdict, p.computed, p.oracle, p.tolerance
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        let computed = format!("{}/{} sub-checks pass", parts.len() - failed.len(), parts.len());
        CheckResult::new(
            check_id,
            paper_ref,
            computed,
            format!("{} sub-checks pass", parts.len()),
            "all",
            pass,
        )
        .with_detail(detail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_numbers_become_text() {
        assert_eq!(Quantity::from(f64::INFINITY), Quantity::Text("inf".into()));
        assert_eq!(Quantity::from(1.5), Quantity::Number(1.5));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 8.24e-4, 1e-300, 123456.789, -2.5e20, 0.5] {
            let s = format_17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
        assert_eq!(format_17(0.5), "0.5");
        assert_eq!(format_17(2.0), "2");
    }

    #[test]
    fn json_round_trip() {
        let c = CheckResult::new("x", anchors::EQ21, 0.25, f64::INFINITY, 1e-3, true);
        let s = serde_json::to_string(&c).unwrap();
        let back: CheckResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
