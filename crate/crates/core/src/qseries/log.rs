//! Polynomials in the formal symbol `l = log_q lambda` with [`QSeries`]
//! coefficients. The symbol transforms by `gamma(l) = (q-1) + l`,
//! `phi(l) = [p]_q l`, `d_q l = 1/lambda`.

use crate::coeff::{gen_binom, Rat};
use crate::error::{CoreError, Result};

use super::{Prec, QSeries};

/// `sum_d parts[d] * l^d` with `l = log_q lambda`. The degree is capped
/// by `prec.log_cap` and never silently truncated: overflow is an error.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogSeries {
    prec: Prec,
    parts: Vec<QSeries>,
}

impl LogSeries {
    pub fn from_series(s: QSeries) -> Self {
        LogSeries {
            prec: s.prec(),
            parts: vec![s],
        }
    }

    pub fn zero(prec: Prec) -> Self {
        LogSeries {
            prec,
            parts: vec![QSeries::zero(prec)],
        }
    }

    /// The symbol `l` itself.
    pub fn ell(prec: Prec) -> Result<Self> {
        Self::from_parts(prec, vec![QSeries::zero(prec), QSeries::one(prec)])
    }

    pub fn from_parts(prec: Prec, mut parts: Vec<QSeries>) -> Result<Self> {
        while parts.len() > 1 && parts.last().is_some_and(|p| p.is_zero()) {
            parts.pop();
        }
        if parts.is_empty() {
            parts.push(QSeries::zero(prec));
        }
        if parts.len() > prec.log_cap + 1 {
            return Err(CoreError::LogDegreeOverflow {
                degree: parts.len() - 1,
                cap: prec.log_cap,
            });
        }
        for p in &parts {
            assert_eq!(p.prec(), prec, "precision contexts differ among parts");
        }
        Ok(LogSeries { prec, parts })
    }

    pub fn prec(&self) -> Prec {
        self.prec
    }

    /// Degree in `l` after trimming zero parts.
    pub fn ell_degree(&self) -> usize {
        let mut d = self.parts.len() - 1;
        while d > 0 && self.parts[d].is_zero() {
            d -= 1;
        }
        d
    }

    pub fn part(&self, d: usize) -> QSeries {
        self.parts
            .get(d)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.prec))
    }

    pub fn parts(&self) -> &[QSeries] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    /// Smallest effective eps window over the parts.
    pub fn eps_window(&self) -> u32 {
        self.parts.iter().map(|p| p.eps_window()).min().unwrap()
    }

    /// Smallest effective lambda window over the parts.
    pub fn lam_window(&self) -> i64 {
        self.parts.iter().map(|p| p.lam_window()).min().unwrap()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prec, other.prec);
        let n = self.parts.len().max(other.parts.len());
        let parts = (0..n)
            .map(|d| self.part(d).add(&other.part(d)))
            .collect();
        Self::from_parts(self.prec, parts).expect("degree cannot grow under addition")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LogSeries {
            prec: self.prec,
            parts: self.parts.iter().map(|p| p.neg()).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        LogSeries {
            prec: self.prec,
            parts: self.parts.iter().map(|p| p.scale(r)).collect(),
        }
    }

    /// Polynomial multiplication in `l`; the degree overflow check only
    /// fires when the overflowing coefficient is actually nonzero.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.prec, other.prec);
        let d1 = self.ell_degree();
        let d2 = other.ell_degree();
        let mut parts = vec![QSeries::zero(self.prec); d1 + d2 + 1];
        for a in 0..=d1 {
            if self.parts[a].is_zero() {
                continue;
            }
            for b in 0..=d2 {
                if other.parts[b].is_zero() {
                    continue;
                }
                let term = self.parts[a].mul(&other.parts[b])?;
                parts[a + b] = parts[a + b].add(&term);
            }
        }
        Self::from_parts(self.prec, parts)
    }

    pub fn mul_series(&self, s: &QSeries) -> Result<Self> {
        let parts = self
            .parts
            .iter()
            .map(|p| p.mul(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(self.prec, parts)
    }

    /// `gamma^m`, using `gamma^m(l) = m(q-1) + l`.
    pub fn gamma_pow(&self, m: i64) -> Self {
        let prec = self.prec;
        let deg = self.ell_degree();
        let mut parts = vec![QSeries::zero(prec); deg + 1];
        for (d, f) in self.parts.iter().enumerate().take(deg + 1) {
            if f.is_zero() {
                continue;
            }
            let gf = f.gamma_pow(m);
            // gf * (m eps + l)^d
            for k in 0..=d {
                let binom = gen_binom(&Rat::from_int(d as i64), (d - k) as u64);
                let meps_pow = eps_monomial_scaled(prec, m, (d - k) as u32, &binom);
                if let Some(ms) = meps_pow {
                    parts[k] = parts[k].add(&gf.mul(&ms).expect("lambda-free factor"));
                }
            }
        }
        Self::from_parts(prec, parts).expect("degree preserved by gamma")
    }

    pub fn gamma(&self) -> Self {
        self.gamma_pow(1)
    }

    /// Frobenius, using `phi(l) = [p]_q l`.
    pub fn frob(&self) -> Result<Self> {
        let prec = self.prec;
        let qp = qnum_int_series(prec, prec.p as i64);
        let mut parts = Vec::with_capacity(self.parts.len());
        let mut qp_pow = QSeries::one(prec);
        for (d, f) in self.parts.iter().enumerate() {
            parts.push(f.frob()?.mul(&qp_pow)?);
            if d + 1 < self.parts.len() {
                qp_pow = qp_pow.mul(&qp)?;
            }
        }
        Self::from_parts(prec, parts)
    }

    /// q-derivation on `f l^d` via the q-Leibniz rule and
    /// `d_q(l^d) = lambda^{-1} sum_{k<d} binom(d,k) eps^{d-1-k} l^k`.
    pub fn dq(&self) -> Result<Self> {
        let prec = self.prec;
        let deg = self.ell_degree();
        let mut parts = vec![QSeries::zero(prec); deg + 1];
        for (d, f) in self.parts.iter().enumerate().take(deg + 1) {
            if f.is_zero() {
                continue;
            }
            parts[d] = parts[d].add(&f.dq()?);
            if d == 0 {
                continue;
            }
            let gf_over_lambda = f.gamma().shift_lambda(-1)?;
            for k in 0..d {
                let binom = gen_binom(&Rat::from_int(d as i64), (d - k) as u64);
                let e = (d - 1 - k) as u32;
                if e >= prec.m_eps {
                    continue;
                }
                let factor = QSeries::monomial(prec, binom, e, 0)?;
                parts[k] = parts[k].add(&gf_over_lambda.mul(&factor)?);
            }
        }
        Self::from_parts(prec, parts)
    }

    pub fn frob_iter(&self, times: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 0..times {
            out = out.frob()?;
        }
        Ok(out)
    }

    pub fn reduce_mod_eps(&self) -> Self {
        LogSeries {
            prec: self.prec,
            parts: self.parts.iter().map(|p| p.reduce_mod_eps()).collect(),
        }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// `binom * (m eps)^e` as a lambda-free monomial; `None` when the eps
/// exponent leaves the window (the contribution is beyond precision).
fn eps_monomial_scaled(prec: Prec, m: i64, e: u32, binom: &Rat) -> Option<QSeries> {
    if e >= prec.m_eps {
        return None;
    }
    let c = binom * &Rat::from_int(m).pow(e as i32);
    QSeries::monomial(prec, c, e, 0).ok()
}

/// `[n]_q` for an integer `n` as a series (helper mirrored from qcalc to
/// keep this module self-contained).
fn qnum_int_series(prec: Prec, n: i64) -> QSeries {
    let a = Rat::from_int(n);
    let mut out = QSeries::zero(prec);
    for i in 0..prec.m_eps as u64 {
        let c = gen_binom(&a, i + 1);
        if !c.is_zero() {
            out = out.add(&QSeries::monomial(prec, c, i as u32, 0).unwrap());
        }
    }
    out
}

impl From<QSeries> for LogSeries {
    fn from(s: QSeries) -> Self {
        LogSeries::from_series(s)
    }
}
