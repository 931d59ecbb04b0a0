//! Report types for congruence checks and verification suites, plus the
//! helpers that turn coefficient scans into verdicts.

use serde::Serialize;

use crate::coeff::Valuation;
use crate::error::CoreError;
use crate::qseries::{Deficit, QSeries};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}

/// Evidence attached to a verdict: either the worst p-valuation deficit
/// (for `fails`) or the precision shortfall (for `inconclusive`).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    ValuationDeficit {
        eps_exp: u32,
        lam_exp: i64,
        needed_vp: i64,
        actual_vp: String,
        deficit: i64,
    },
    Window { detail: String },
}

impl Witness {
    pub fn from_deficit(d: &Deficit) -> Self {
        Witness::ValuationDeficit {
            eps_exp: d.eps_exp,
            lam_exp: d.lam_exp,
            needed_vp: d.needed,
            actual_vp: match d.actual {
                Valuation::Finite(v) => v.to_string(),
                Valuation::Infinite => "+inf".into(),
            },
            deficit: d.shortfall(),
        }
    }
}

/// Outcome of a single congruence claim.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub claim: String,
    pub params: Vec<(String, String)>,
    pub modulus: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CongruenceReport {
    pub fn holds(claim: impl Into<String>, params: Vec<(String, String)>, modulus: impl Into<String>) -> Self {
        CongruenceReport {
            claim: claim.into(),
            params,
            modulus: modulus.into(),
            verdict: Verdict::Holds,
            witness: None,
        }
    }

    pub fn from_scan(
        claim: impl Into<String>,
        params: Vec<(String, String)>,
        modulus: impl Into<String>,
        scan: Option<Deficit>,
    ) -> Self {
        let (verdict, witness) = match scan {
            None => (Verdict::Holds, None),
            Some(d) => (Verdict::Fails, Some(Witness::from_deficit(&d))),
        };
        CongruenceReport {
            claim: claim.into(),
            params,
            modulus: modulus.into(),
            verdict,
            witness,
        }
    }

    pub fn inconclusive(
        claim: impl Into<String>,
        params: Vec<(String, String)>,
        modulus: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        CongruenceReport {
            claim: claim.into(),
            params,
            modulus: modulus.into(),
            verdict: Verdict::Inconclusive,
            witness: Some(Witness::Window {
                detail: detail.into(),
            }),
        }
    }

    /// Converts an error from a checker into a verdict: window problems
    /// become `inconclusive`, anything else propagates.
    pub fn from_error(
        claim: impl Into<String>,
        params: Vec<(String, String)>,
        modulus: impl Into<String>,
        err: CoreError,
    ) -> crate::error::Result<Self> {
        match err {
            CoreError::Inconclusive(d) | CoreError::DivisionWindow(d) => {
                Ok(Self::inconclusive(claim, params, modulus, d))
            }
            other => Err(other),
        }
    }

    pub fn holds_bool(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Additive congruence `f = 0 mod g R`, decided per lambda-coefficient
/// by exact division and p-integrality of the quotient.
pub fn additive_congruence(
    claim: impl Into<String>,
    params: Vec<(String, String)>,
    modulus_desc: impl Into<String>,
    f: &QSeries,
    modulus: &QSeries,
) -> crate::error::Result<CongruenceReport> {
    let claim = claim.into();
    let modulus_desc = modulus_desc.into();
    match f.divisible_by_scan(modulus) {
        Ok(scan) => Ok(CongruenceReport::from_scan(claim, params, modulus_desc, scan)),
        Err(e) => CongruenceReport::from_error(claim, params, modulus_desc, e),
    }
}

/// Multiplicative congruence `lhs = rhs mod (1 + g R)`, decided as
/// `lhs/rhs - 1 = 0 mod g R`.
pub fn multiplicative_congruence(
    claim: impl Into<String>,
    params: Vec<(String, String)>,
    modulus_desc: impl Into<String>,
    lhs: &QSeries,
    rhs: &QSeries,
    modulus: &QSeries,
) -> crate::error::Result<CongruenceReport> {
    let claim = claim.into();
    let modulus_desc = modulus_desc.into();
    let ratio = match lhs.div_exact(rhs) {
        Ok(r) => r,
        Err(e) => return CongruenceReport::from_error(claim, params, modulus_desc, e),
    };
    let diff = ratio.sub(&QSeries::one(ratio.prec()));
    match diff.divisible_by_scan(modulus) {
        Ok(scan) => Ok(CongruenceReport::from_scan(claim, params, modulus_desc, scan)),
        Err(e) => CongruenceReport::from_error(claim, params, modulus_desc, e),
    }
}

/// Ideal-power congruence `f = 0 mod (p, eps)^n` within the window.
pub fn ideal_congruence(
    claim: impl Into<String>,
    params: Vec<(String, String)>,
    f: &QSeries,
    n: u32,
) -> crate::error::Result<CongruenceReport> {
    let claim = claim.into();
    let modulus_desc = format!("(p, q-1)^{n}");
    match f.in_ideal_pow_scan(n) {
        Ok(scan) => Ok(CongruenceReport::from_scan(claim, params, modulus_desc, scan)),
        Err(e) => CongruenceReport::from_error(claim, params, modulus_desc, e),
    }
}

/// Result of one suite case, including the expected verdict so negative
/// controls (deliberately over-strong moduli) can be part of a passing
/// run.
#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub expect: Verdict,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CaseResult {
    /// A case passes when the verdict matches the expectation;
    /// inconclusive cases pass only when explicitly allowed.
    pub fn passes(&self, allow_inconclusive: bool) -> bool {
        match self.verdict {
            Verdict::Inconclusive => allow_inconclusive,
            v => v == self.expect,
        }
    }
}

/// Result of one suite. Wall time is kept for logs but excluded from
/// serialized reports so byte-identical output only depends on the
/// configuration.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub id: String,
    pub cases: Vec<CaseResult>,
    pub verdict: Verdict,
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

impl SuiteResult {
    pub fn compute_verdict(cases: &[CaseResult], allow_inconclusive: bool) -> Verdict {
        if cases.is_empty() {
            // nothing fit the window; holding vacuously would be misleading
            return Verdict::Inconclusive;
        }
        if cases
            .iter()
            .any(|c| c.verdict != Verdict::Inconclusive && c.verdict != c.expect)
        {
            return Verdict::Fails;
        }
        if cases.iter().any(|c| c.verdict == Verdict::Inconclusive) {
            if allow_inconclusive {
                Verdict::Inconclusive
            } else {
                Verdict::Fails
            }
        } else {
            Verdict::Holds
        }
    }
}
