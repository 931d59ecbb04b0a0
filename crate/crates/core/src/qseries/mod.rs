//! The truncated series ring: elements of `Q[[eps]]((lambda))` with
//! `eps = q - 1`, together with ring operations, exact division,
//! ideal-membership and q-integer-divisibility tests.
//!
//! Every [`QSeries`] carries an *effective window* `(meps_eff, klam_eff)`
//! in addition to the ambient precision [`Prec`]: stored coefficients are
//! exact for `eps`-exponents `i < meps_eff` and `lambda`-exponents
//! `j < klam_eff`, and unknown beyond. Operations combine windows
//! conservatively, so a claim like "this series is zero" always comes
//! with the window on which it was actually established. Congruence
//! checkers refuse (error, never `false`) when a claim exceeds the
//! window.

mod json;
mod log;

pub use json::{logseries_from_json, logseries_to_json, qseries_from_json, qseries_to_json};
pub use log::LogSeries;

use std::collections::BTreeMap;

use crate::coeff::{gen_binom, vp, Rat, Valuation};
use crate::error::{CoreError, Result};

/// Precision context: odd prime `p`, p-adic depth `n_p` (assertions are
/// made modulo `p^n_p`), `eps`-adic truncation order `m_eps`,
/// `lambda`-adic truncation order `k_lam`, lowest allowed Laurent
/// exponent `lam_low`, and the maximum degree in the formal symbol
/// `log_q lambda`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Prec {
    pub p: u32,
    pub n_p: u32,
    pub m_eps: u32,
    pub k_lam: i64,
    pub lam_low: i64,
    pub log_cap: usize,
}

pub(crate) fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Prec {
    /// Default Laurent floor (-2) and log cap (2); enough for poles of
    /// order two at `lambda = 0` and intermediate log-degree-2 products.
    pub fn new(p: u32, n_p: u32, m_eps: u32, k_lam: i64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(CoreError::InvalidParameter(format!(
                "p must be an odd prime, got {p}"
            )));
        }
        if n_p < 1 || m_eps < 1 || k_lam < 1 {
            return Err(CoreError::InvalidParameter(
                "precision depths must be >= 1".into(),
            ));
        }
        Ok(Prec {
            p,
            n_p,
            m_eps,
            k_lam,
            lam_low: -2,
            log_cap: 2,
        })
    }

    pub fn with_lam_low(mut self, lam_low: i64) -> Self {
        assert!(lam_low <= 0);
        self.lam_low = lam_low;
        self
    }

    pub fn with_log_cap(mut self, log_cap: usize) -> Self {
        self.log_cap = log_cap;
        self
    }
}

/// Truncated element of `Q[[eps]]((lambda))`, sparse map keyed by
/// `(eps-exponent, lambda-exponent)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    prec: Prec,
    meps_eff: u32,
    klam_eff: i64,
    coeffs: BTreeMap<(u32, i64), Rat>,
}

/// Worst p-integrality failure found by a coefficient scan.
#[derive(Clone, Debug)]
pub struct Deficit {
    pub eps_exp: u32,
    pub lam_exp: i64,
    pub needed: i64,
    pub actual: Valuation,
}

impl Deficit {
    pub fn shortfall(&self) -> i64 {
        match self.actual {
            Valuation::Finite(v) => self.needed - v,
            Valuation::Infinite => 0,
        }
    }
}

impl QSeries {
    fn empty(prec: Prec) -> Self {
        QSeries {
            prec,
            meps_eff: prec.m_eps,
            klam_eff: prec.k_lam,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero(prec: Prec) -> Self {
        Self::empty(prec)
    }

    pub fn rational(prec: Prec, r: Rat) -> Self {
        let mut s = Self::empty(prec);
        s.set(0, 0, r);
        s
    }

    pub fn one(prec: Prec) -> Self {
        Self::rational(prec, Rat::one())
    }

    pub fn int(prec: Prec, n: i64) -> Self {
        Self::rational(prec, Rat::from_int(n))
    }

    /// Single term `r * eps^i * lambda^j`.
    pub fn monomial(prec: Prec, r: Rat, i: u32, j: i64) -> Result<Self> {
        if j < prec.lam_low {
            return Err(CoreError::LaurentUnderflow {
                exp: j,
                floor: prec.lam_low,
            });
        }
        if i >= prec.m_eps || j >= prec.k_lam {
            return Err(CoreError::InvalidParameter(format!(
                "monomial exponent ({i}, {j}) outside precision window"
            )));
        }
        let mut s = Self::empty(prec);
        s.set(i, j, r);
        Ok(s)
    }

    pub fn lambda(prec: Prec) -> Self {
        Self::monomial(prec, Rat::one(), 0, 1).expect("k_lam >= 2 required for lambda")
    }

    pub fn eps(prec: Prec) -> Self {
        Self::monomial(prec, Rat::one(), 1, 0).expect("m_eps >= 2 required for eps")
    }

    /// `q = 1 + eps`.
    pub fn q(prec: Prec) -> Self {
        let mut s = Self::one(prec);
        s.set(1, 0, Rat::one());
        s
    }

    /// `1 - lambda`.
    pub fn one_minus_lambda(prec: Prec) -> Self {
        let mut s = Self::one(prec);
        s.set(0, 1, Rat::from_int(-1));
        s
    }

    fn set(&mut self, i: u32, j: i64, r: Rat) {
        if r.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), r);
        }
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Effective `eps` window: coefficients are exact for exponents `< meps_eff`.
    pub fn eps_window(&self) -> u32 {
        self.meps_eff
    }

    /// Effective `lambda` window: coefficients are exact for exponents `< klam_eff`.
    pub fn lam_window(&self) -> i64 {
        self.klam_eff
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: u32, j: i64) -> Rat {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i64, &Rat)> {
        self.coeffs.iter().map(|(&(i, j), r)| (i, j, r))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest stored lambda exponent; `None` if no term is stored.
    pub fn lam_val(&self) -> Option<i64> {
        self.coeffs.keys().map(|&(_, j)| j).min()
    }

    pub fn lam_deg(&self) -> Option<i64> {
        self.coeffs.keys().map(|&(_, j)| j).max()
    }

    /// Lowest stored eps exponent; `None` if no term is stored.
    pub fn eps_val(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, _)| i).min()
    }

    fn assert_same_prec(&self, other: &Self) {
        assert_eq!(
            self.prec, other.prec,
            "precision contexts differ between operands"
        );
    }

    /// True when the series is a polynomial in lambda (no Laurent part).
    pub fn is_lambda_poly(&self) -> bool {
        self.lam_val().map_or(true, |v| v >= 0)
    }

    pub fn is_lambda_free(&self) -> bool {
        self.coeffs.keys().all(|&(_, j)| j == 0)
    }

    // ----- additive structure -----

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_prec(other);
        let mut out = self.clone();
        out.meps_eff = self.meps_eff.min(other.meps_eff);
        out.klam_eff = self.klam_eff.min(other.klam_eff);
        for (&(i, j), r) in &other.coeffs {
            let cur = out.coeff(i, j);
            out.set(i, j, &cur + r);
        }
        out.truncate_to_window();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for r in out.coeffs.values_mut() {
            *r = -&*r;
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = self.clone();
        if r.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for c in out.coeffs.values_mut() {
            *c = &*c * r;
        }
        out
    }

    fn truncate_to_window(&mut self) {
        let m = self.meps_eff;
        let k = self.klam_eff;
        self.coeffs.retain(|&(i, j), _| i < m && j < k);
    }

    // ----- multiplicative structure -----

    /// Cauchy product truncated to the combined effective window.
    /// Lambda exponents that land below `lam_low` with a nonzero total
    /// coefficient are an error, not silently dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.assert_same_prec(other);
        let prec = self.prec;
        let vf = self.lam_val().unwrap_or(self.klam_eff);
        let vg = other.lam_val().unwrap_or(other.klam_eff);
        let wf = self.eps_val().unwrap_or(self.meps_eff) as i64;
        let wg = other.eps_val().unwrap_or(other.meps_eff) as i64;

        let m_res_i = (prec.m_eps as i64)
            .min(self.meps_eff as i64 + wg)
            .min(other.meps_eff as i64 + wf);
        let m_res = m_res_i.max(0) as u32;
        let mut k_res = prec
            .k_lam
            .min(self.klam_eff.saturating_add(vg))
            .min(other.klam_eff.saturating_add(vf));
        // Unknown eps-tail of one factor times unknown lambda-tail of the
        // other can reach rows claimed by the window; shrink when needed.
        if m_res as i64 > self.meps_eff as i64 {
            k_res = k_res.min(prec.lam_low + other.klam_eff);
        }
        if m_res as i64 > other.meps_eff as i64 {
            k_res = k_res.min(prec.lam_low + self.klam_eff);
        }

        // dense accumulation over the reachable exponent box
        let lo = prec.lam_low * 2;
        let span = (k_res - lo).max(0) as usize;
        let mut acc: Vec<Rat> = vec![Rat::zero(); (m_res as usize) * span.max(1)];
        for (&(i1, j1), c1) in &self.coeffs {
            for (&(i2, j2), c2) in &other.coeffs {
                let i = i1 + i2;
                if i >= m_res {
                    continue;
                }
                let j = j1 + j2;
                if j >= k_res || span == 0 {
                    continue;
                }
                let idx = (i as usize) * span + (j - lo) as usize;
                acc[idx] += &(c1 * c2);
            }
        }

        let mut out = QSeries {
            prec,
            meps_eff: m_res,
            klam_eff: k_res,
            coeffs: BTreeMap::new(),
        };
        for i in 0..m_res {
            for off in 0..span {
                let r = &acc[(i as usize) * span + off];
                if r.is_zero() {
                    continue;
                }
                let j = lo + off as i64;
                if j < prec.lam_low {
                    return Err(CoreError::LaurentUnderflow {
                        exp: j,
                        floor: prec.lam_low,
                    });
                }
                out.coeffs.insert((i, j), r.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut out = Self::one(self.prec);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiply by `lambda^s` (`s` may be negative).
    pub fn shift_lambda(&self, s: i64) -> Result<Self> {
        let prec = self.prec;
        let mut out = QSeries {
            prec,
            meps_eff: self.meps_eff,
            klam_eff: (self.klam_eff.saturating_add(s)).min(prec.k_lam),
            coeffs: BTreeMap::new(),
        };
        for (&(i, j), r) in &self.coeffs {
            let nj = j + s;
            if nj < prec.lam_low {
                return Err(CoreError::LaurentUnderflow {
                    exp: nj,
                    floor: prec.lam_low,
                });
            }
            if nj < out.klam_eff {
                out.coeffs.insert((i, nj), r.clone());
            }
        }
        Ok(out)
    }

    /// Divide by `eps^k`; errors if any stored coefficient below `eps^k`
    /// is nonzero (the quotient would leave the ring).
    pub fn shift_eps_down(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.meps_eff < k {
            return Err(CoreError::DivisionWindow(format!(
                "eps window {} too small to divide by eps^{k}",
                self.meps_eff
            )));
        }
        let mut out = QSeries {
            prec: self.prec,
            meps_eff: self.meps_eff - k,
            klam_eff: self.klam_eff,
            coeffs: BTreeMap::new(),
        };
        for (&(i, j), r) in &self.coeffs {
            if i < k {
                return Err(CoreError::DivisionWindow(format!(
                    "coefficient at eps^{i} lambda^{j} is not divisible by eps^{k}"
                )));
            }
            out.coeffs.insert((i - k, j), r.clone());
        }
        Ok(out)
    }

    fn column(&self, j: i64, len: u32) -> Vec<Rat> {
        (0..len).map(|i| self.coeff(i, j)).collect()
    }

    /// Inverse of a series with an invertible corner: lowest lambda
    /// exponent 0 and nonzero rational constant term. Laurent units must
    /// have their monomial `lambda^v` factor shifted out by the caller.
    pub fn invert(&self) -> Result<Self> {
        let prec = self.prec;
        match self.lam_val() {
            None => {
                return Err(CoreError::NonUnit("cannot invert zero series".into()));
            }
            Some(v) if v != 0 => {
                return Err(CoreError::NonUnit(format!(
                    "lowest lambda exponent is {v}, expected 0 (shift the monomial factor out first)"
                )));
            }
            Some(_) => {}
        }
        if self.coeff(0, 0).is_zero() {
            return Err(CoreError::NonUnit(
                "corner coefficient (eps^0, lambda^0) is zero".into(),
            ));
        }
        let m = self.meps_eff;
        let kw = self.klam_eff;
        let f0 = self.column(0, m);
        let g0 = eps_invert(&f0);

        // columns of f by lambda degree, sparse
        let mut fcols: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
        for (&(i, j), r) in &self.coeffs {
            if j == 0 {
                continue;
            }
            let col = fcols.entry(j).or_insert_with(|| vec![Rat::zero(); m as usize]);
            col[i as usize] = r.clone();
        }

        let mut rcols: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
        rcols.insert(0, g0.clone());
        for n in 1..kw.max(0) {
            // r_n = -g0 * sum_{k=1..=n} f_k r_{n-k}
            let mut acc = vec![Rat::zero(); m as usize];
            let mut any = false;
            for (&k, fk) in fcols.range(1..=n) {
                if let Some(rk) = rcols.get(&(n - k)) {
                    eps_mul_acc(&mut acc, fk, rk);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            let rn = eps_mul_neg(&g0, &acc);
            if rn.iter().any(|c| !c.is_zero()) {
                rcols.insert(n, rn);
            }
        }

        let mut out = QSeries {
            prec,
            meps_eff: m,
            klam_eff: kw,
            coeffs: BTreeMap::new(),
        };
        for (j, col) in rcols {
            for (i, r) in col.into_iter().enumerate() {
                if !r.is_zero() {
                    out.coeffs.insert((i as u32, j), r);
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a Laurent unit `lambda^v * (unit)`: shifts the monomial
    /// factor out, inverts, and shifts back by `-v`.
    pub fn invert_laurent(&self) -> Result<Self> {
        let v = self
            .lam_val()
            .ok_or_else(|| CoreError::NonUnit("cannot invert zero series".into()))?;
        if v == 0 {
            return self.invert();
        }
        self.shift_lambda(-v)?.invert()?.shift_lambda(-v)
    }

    /// Exact division `f / g` over `Q` to the window. After shifting out
    /// the monomial `lambda^v eps^k` factor, `g` must have an invertible
    /// corner at its lowest lambda degree.
    pub fn div_exact(&self, g: &Self) -> Result<Self> {
        self.assert_same_prec(g);
        if g.is_zero() {
            return Err(CoreError::NonUnit("division by zero series".into()));
        }
        let v = g.lam_val().unwrap();
        let mut g0 = if v == 0 { g.clone() } else { g.shift_lambda(-v)? };
        let mut f = if v == 0 {
            self.clone()
        } else {
            self.shift_lambda(-v)?
        };
        let k = g0
            .lam_coeff_series(0)
            .eps_val()
            .expect("column 0 is nonzero after the shift");
        if k > 0 {
            g0 = g0.shift_eps_down(k)?;
            f = f.shift_eps_down(k)?;
        }
        f.mul(&g0.invert()?)
    }

    // ----- membership and divisibility -----

    /// Membership in the ideal `(p, eps)^n` within the window: every
    /// stored coefficient `c_(i,j)` with `i < n` must satisfy
    /// `vp(c) >= n - i`. Errors (never `false`) when `n` exceeds the
    /// usable precision.
    pub fn in_ideal_pow(&self, n: u32) -> Result<bool> {
        Ok(self.in_ideal_pow_scan(n)?.is_none())
    }

    /// Like [`in_ideal_pow`](Self::in_ideal_pow) but reports the worst
    /// offending coefficient.
    pub fn in_ideal_pow_scan(&self, n: u32) -> Result<Option<Deficit>> {
        let limit = self.prec.n_p.min(self.prec.m_eps);
        if n > limit {
            return Err(CoreError::Inconclusive(format!(
                "(p, eps)^{n} membership exceeds precision bound {limit}"
            )));
        }
        if n > self.meps_eff {
            return Err(CoreError::Inconclusive(format!(
                "(p, eps)^{n} membership needs eps window >= {n}, have {}",
                self.meps_eff
            )));
        }
        let p = self.prec.p;
        let mut worst: Option<Deficit> = None;
        for (&(i, j), c) in &self.coeffs {
            if i >= n {
                continue;
            }
            let needed = (n - i) as i64;
            let actual = vp(c, p);
            if !actual.is_at_least(needed) {
                let d = Deficit {
                    eps_exp: i,
                    lam_exp: j,
                    needed,
                    actual,
                };
                if worst.as_ref().map_or(true, |w| d.shortfall() > w.shortfall()) {
                    worst = Some(d);
                }
            }
        }
        Ok(worst)
    }

    /// Worst p-integrality violation among stored coefficients, if any.
    pub fn integrality_scan(&self) -> Option<Deficit> {
        let p = self.prec.p;
        let mut worst: Option<Deficit> = None;
        for (&(i, j), c) in &self.coeffs {
            let actual = vp(c, p);
            if !actual.is_at_least(0) {
                let d = Deficit {
                    eps_exp: i,
                    lam_exp: j,
                    needed: 0,
                    actual,
                };
                if worst.as_ref().map_or(true, |w| d.shortfall() > w.shortfall()) {
                    worst = Some(d);
                }
            }
        }
        worst
    }

    pub fn is_p_integral(&self) -> bool {
        self.integrality_scan().is_none()
    }

    /// True iff every coefficient of `f / g` is p-integral within the
    /// window, i.e. `f = 0 mod g R`.
    pub fn divisible_by(&self, g: &Self) -> Result<bool> {
        Ok(self.divisible_by_scan(g)?.is_none())
    }

    pub fn divisible_by_scan(&self, g: &Self) -> Result<Option<Deficit>> {
        let q = self.div_exact(g)?;
        Ok(q.integrality_scan())
    }

    /// The `eps^0` slice: reduction modulo `q - 1` to a classical
    /// lambda-series (higher eps coefficients of the result are exactly
    /// zero).
    pub fn reduce_mod_eps(&self) -> Self {
        assert!(self.meps_eff >= 1, "eps window is empty");
        self.eps_slice(0)
    }

    /// The coefficient of `eps^i` as a classical lambda-series.
    pub fn eps_slice(&self, i: u32) -> Self {
        assert!(
            i < self.meps_eff,
            "eps slice {i} outside window {}",
            self.meps_eff
        );
        let mut out = QSeries {
            prec: self.prec,
            meps_eff: self.prec.m_eps,
            klam_eff: self.klam_eff,
            coeffs: BTreeMap::new(),
        };
        for (&(ii, j), r) in &self.coeffs {
            if ii == i {
                out.coeffs.insert((0, j), r.clone());
            }
        }
        out
    }

    /// The coefficient of `lambda^j` as a lambda-free series.
    pub fn lam_coeff_series(&self, j: i64) -> Self {
        assert!(j < self.klam_eff, "lambda slice {j} outside window");
        let mut out = QSeries {
            prec: self.prec,
            meps_eff: self.meps_eff,
            klam_eff: self.prec.k_lam,
            coeffs: BTreeMap::new(),
        };
        for (&(i, jj), r) in &self.coeffs {
            if jj == j {
                out.coeffs.insert((i, 0), r.clone());
            }
        }
        out
    }

    /// Assemble a series from lambda-free columns:
    /// `sum_j cols_j * lambda^j`. Columns not supplied are exactly zero;
    /// the eps window is the minimum over the columns.
    pub(crate) fn from_lambda_columns(
        prec: Prec,
        cols: impl Iterator<Item = (i64, QSeries)>,
    ) -> Result<Self> {
        let mut out = QSeries::zero(prec);
        for (j, col) in cols {
            debug_assert!(col.is_lambda_free(), "column at lambda^{j} is not lambda-free");
            if j < prec.lam_low {
                return Err(CoreError::LaurentUnderflow {
                    exp: j,
                    floor: prec.lam_low,
                });
            }
            if j >= prec.k_lam {
                continue;
            }
            out.meps_eff = out.meps_eff.min(col.meps_eff);
            for (&(i, _), r) in &col.coeffs {
                out.coeffs.insert((i, j), r.clone());
            }
        }
        out.truncate_to_window();
        Ok(out)
    }

    /// Finite-precision proxy for membership in the completed
    /// localization `R< lambda, 1/g1 >`: looks for `e <= dmax` such that
    /// `f * g1^e` agrees modulo `(p, eps)^n` with a lambda-polynomial of
    /// degree below the window minus a guard band. A pass is evidence; a
    /// fail at sufficient precision is a refutation.
    pub fn localized_membership(&self, g1: &Self, n: u32, dmax: u32) -> Result<bool> {
        self.assert_same_prec(g1);
        if !g1.is_lambda_poly() || g1.lam_val().is_none() {
            return Err(CoreError::InvalidParameter(
                "localizer must be a nonzero lambda-polynomial".into(),
            ));
        }
        let d1 = g1.lam_deg().unwrap().max(1);
        let corner = g1.coeff(0, 0);
        if !vp(&corner, self.prec.p).is_at_least(0) || vp(&corner, self.prec.p).is_at_least(1) {
            return Err(CoreError::InvalidParameter(
                "localizer constant term must be a unit mod (p, eps)".into(),
            ));
        }
        let limit = self.prec.n_p.min(self.prec.m_eps);
        if n > limit || n > self.meps_eff {
            return Err(CoreError::Inconclusive(format!(
                "(p, eps)^{n} membership exceeds the eps window"
            )));
        }
        let guard = d1;
        let p = self.prec.p;
        for e in 0..=dmax {
            let h = self.mul(&g1.pow(e)?)?;
            let bound = h.lam_window() - (e as i64) * d1 - guard;
            if bound <= d1 {
                return Err(CoreError::Inconclusive(format!(
                    "k_lam too small for localized membership with dmax = {dmax}"
                )));
            }
            let mut ok = true;
            for (&(i, j), c) in &h.coeffs {
                if j < bound || i >= n {
                    continue;
                }
                if !vp(c, p).is_at_least((n - i) as i64) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }

    // ----- substitutions -----

    /// Frobenius substitution `eps -> (1+eps)^p - 1`, `lambda -> lambda^p`;
    /// fixes rationals. Errors when a Laurent exponent would leave the
    /// window (`p * j < lam_low`).
    pub fn frob(&self) -> Result<Self> {
        let prec = self.prec;
        let p = prec.p as i64;
        let k_res = prec
            .k_lam
            .min(self.klam_eff.saturating_mul(p).max(self.klam_eff));
        let mut out = QSeries {
            prec,
            meps_eff: self.meps_eff,
            klam_eff: k_res,
            coeffs: BTreeMap::new(),
        };
        // powers of (1+eps)^p - 1 (eps-valuation 1)
        let powers = eps_sub_powers(&frob_eps_image(prec), prec.m_eps);
        for (&(i, j), r) in &self.coeffs {
            let nj = j * p;
            if nj < prec.lam_low {
                return Err(CoreError::LaurentUnderflow {
                    exp: nj,
                    floor: prec.lam_low,
                });
            }
            if nj >= k_res {
                continue;
            }
            let img = &powers[i as usize];
            for (ii, c) in img.iter().enumerate() {
                if c.is_zero() || ii as u32 >= out.meps_eff {
                    continue;
                }
                let key = (ii as u32, nj);
                let cur = out.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero);
                let v = &cur + &(r * c);
                if v.is_zero() {
                    out.coeffs.remove(&key);
                } else {
                    out.coeffs.insert(key, v);
                }
            }
        }
        Ok(out)
    }

    pub fn frob_iter(&self, times: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 0..times {
            out = out.frob()?;
        }
        Ok(out)
    }

    /// Geometric action `gamma^m: lambda -> q^m lambda`, fixing
    /// coefficients; `m` may be negative.
    pub fn gamma_pow(&self, m: i64) -> Self {
        if m == 0 {
            return self.clone();
        }
        let prec = self.prec;
        let mut out = QSeries {
            prec,
            meps_eff: self.meps_eff,
            klam_eff: self.klam_eff,
            coeffs: BTreeMap::new(),
        };
        // cache (1+eps)^(m j) per lambda exponent
        let mut cache: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
        for (&(i, j), r) in &self.coeffs {
            let img = cache.entry(j).or_insert_with(|| {
                eps_binomial_column(&Rat::from_int(m * j), prec.m_eps)
            });
            for (ii, c) in img.iter().enumerate() {
                let ni = i + ii as u32;
                if ni >= out.meps_eff || c.is_zero() {
                    continue;
                }
                let key = (ni, j);
                let cur = out.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero);
                let v = &cur + &(r * c);
                if v.is_zero() {
                    out.coeffs.remove(&key);
                } else {
                    out.coeffs.insert(key, v);
                }
            }
        }
        out
    }

    pub fn gamma(&self) -> Self {
        self.gamma_pow(1)
    }

    /// Arithmetic action `sigma_l: eps -> (1+eps)^l - 1`, fixing lambda
    /// and rationals. Requires `vp(l) = 0`.
    pub fn sigma(&self, l: &Rat) -> Result<Self> {
        if !matches!(vp(l, self.prec.p), Valuation::Finite(0)) {
            return Err(CoreError::InvalidParameter(format!(
                "sigma exponent must be a p-adic unit, got {l}"
            )));
        }
        let prec = self.prec;
        let image = {
            // (1+eps)^l - 1
            let mut col = eps_binomial_column(l, prec.m_eps);
            col[0] = Rat::zero();
            col
        };
        let powers = eps_sub_powers(&image, prec.m_eps);
        let mut out = QSeries {
            prec,
            meps_eff: self.meps_eff,
            klam_eff: self.klam_eff,
            coeffs: BTreeMap::new(),
        };
        for (&(i, j), r) in &self.coeffs {
            let img = &powers[i as usize];
            for (ii, c) in img.iter().enumerate() {
                if c.is_zero() || ii as u32 >= out.meps_eff {
                    continue;
                }
                let key = (ii as u32, j);
                let cur = out.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero);
                let v = &cur + &(r * c);
                if v.is_zero() {
                    out.coeffs.remove(&key);
                } else {
                    out.coeffs.insert(key, v);
                }
            }
        }
        Ok(out)
    }

    /// q-derivation, monomial-wise: `c lambda^n -> c [n]_q lambda^(n-1)`.
    /// R-linear, so eps-coefficients ride along untouched.
    pub fn dq(&self) -> Result<Self> {
        let prec = self.prec;
        let mut out = QSeries {
            prec,
            meps_eff: self.meps_eff,
            klam_eff: (self.klam_eff - 1).min(prec.k_lam),
            coeffs: BTreeMap::new(),
        };
        let mut qnum_cache: BTreeMap<i64, Vec<Rat>> = BTreeMap::new();
        for (&(i, j), r) in &self.coeffs {
            if j == 0 {
                continue; // [0]_q = 0
            }
            let nj = j - 1;
            if nj < prec.lam_low {
                return Err(CoreError::LaurentUnderflow {
                    exp: nj,
                    floor: prec.lam_low,
                });
            }
            if nj >= out.klam_eff {
                continue;
            }
            let qn = qnum_cache
                .entry(j)
                .or_insert_with(|| qnum_int_column(j, prec.m_eps));
            for (ii, c) in qn.iter().enumerate() {
                let ni = i + ii as u32;
                if ni >= out.meps_eff || c.is_zero() {
                    continue;
                }
                let key = (ni, nj);
                let cur = out.coeffs.get(&key).cloned().unwrap_or_else(Rat::zero);
                let v = &cur + &(r * c);
                if v.is_zero() {
                    out.coeffs.remove(&key);
                } else {
                    out.coeffs.insert(key, v);
                }
            }
        }
        Ok(out)
    }

    // ----- comparisons -----

    /// Coefficientwise equality on the common effective window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// First coefficient where the two sides differ, for diagnostics.
    pub fn first_mismatch(&self, other: &Self) -> Option<(u32, i64, Rat)> {
        let d = self.sub(other);
        d.coeffs
            .iter()
            .next()
            .map(|(&(i, j), r)| (i, j, r.clone()))
    }
}

// ----- eps-column (lambda-free dense) arithmetic helpers -----

/// `sum_i gen_binom(a, i) eps^i`, i.e. `(1+eps)^a`, as a dense column.
pub(crate) fn eps_binomial_column(a: &Rat, len: u32) -> Vec<Rat> {
    (0..len as u64).map(|i| gen_binom(a, i)).collect()
}

/// `(1+eps)^a` as a lambda-free series with full window.
pub fn eps_binomial_series(prec: Prec, a: &Rat) -> QSeries {
    let mut out = QSeries::zero(prec);
    for (i, c) in eps_binomial_column(a, prec.m_eps).into_iter().enumerate() {
        out.set(i as u32, 0, c);
    }
    out
}

/// `[n]_q` for an integer `n` as a dense eps-column.
/// `sum_{i>=1} binom(n, i) eps^(i-1)`; equals `1 + q + ... + q^(n-1)`
/// for positive `n`.
fn qnum_int_column(n: i64, len: u32) -> Vec<Rat> {
    let a = Rat::from_int(n);
    (0..len as u64).map(|i| gen_binom(&a, i + 1)).collect()
}

fn frob_eps_image(prec: Prec) -> Vec<Rat> {
    // (1+eps)^p - 1
    let mut col = eps_binomial_column(&Rat::from_int(prec.p as i64), prec.m_eps);
    col[0] = Rat::zero();
    col
}

/// Powers `image^i` for `i < len` of an eps-valuation-1 column, truncated.
fn eps_sub_powers(image: &[Rat], len: u32) -> Vec<Vec<Rat>> {
    let m = len as usize;
    let mut powers = Vec::with_capacity(m);
    let mut one = vec![Rat::zero(); m];
    one[0] = Rat::one();
    powers.push(one);
    for i in 1..m {
        let prev = &powers[i - 1];
        let mut next = vec![Rat::zero(); m];
        eps_mul_acc(&mut next, prev, image);
        powers.push(next);
    }
    powers
}

fn eps_mul_acc(acc: &mut [Rat], a: &[Rat], b: &[Rat]) {
    let m = acc.len();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j >= m {
                break;
            }
            if bj.is_zero() {
                continue;
            }
            acc[i + j] += &(ai * bj);
        }
    }
}

fn eps_mul_neg(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len()];
    eps_mul_acc(&mut out, a, b);
    for c in &mut out {
        *c = -&*c;
    }
    out
}

/// Inverse of an eps-column with nonzero constant term.
fn eps_invert(f: &[Rat]) -> Vec<Rat> {
    assert!(!f[0].is_zero(), "eps_invert: constant term is zero");
    let m = f.len();
    let c0 = f[0].recip();
    let mut out = vec![Rat::zero(); m];
    out[0] = c0.clone();
    for i in 1..m {
        let mut s = Rat::zero();
        for k in 1..=i {
            if !f[k].is_zero() && !out[i - k].is_zero() {
                s += &(&f[k] * &out[i - k]);
            }
        }
        out[i] = -&(&s * &c0);
    }
    out
}

#[cfg(test)]
pub(crate) mod tests;
