//! The q-hypergeometric operator `L`, its explicit solutions `F` and
//! `H`, the q-Wronskian, and the connection matrices of the associated
//! rank-2 module.
//!
//! `L[f] = q lambda (1 - q lambda) d_q^2 f + (1 - alpha lambda) d_q f
//!        - [1/2]_q^2 f` with `alpha = 1 + [2]_q - 2 [1/2]_q`.

mod conn;
mod mat;

pub use conn::{
    basis_change_mprime, connection_matrices, horizontality_check, identity_1f_check,
    Fil1, ModulePresentation,
};
pub(crate) use conn::identity_1f_with;
pub use mat::Mat2;

use crate::coeff::{Dyadic, Rat};
use crate::error::{CoreError, Result};
use crate::qcalc::{a_coeffs, qnum, qnum_int, qpow};
use crate::qseries::{LogSeries, Prec, QSeries};

/// `alpha = 1 + [2]_q - 2 [1/2]_q`; reduces to 2 at `eps = 0`.
pub fn alpha(prec: Prec) -> QSeries {
    let two = qnum_int(prec, 2);
    let half = qnum(prec, &Dyadic::half())
        .expect("[1/2]_q is p-integral")
        .series;
    QSeries::one(prec)
        .add(&two)
        .sub(&half.scale(&Rat::from_int(2)))
}

fn qhalf_squared(prec: Prec) -> QSeries {
    let half = qnum(prec, &Dyadic::half()).expect("[1/2]_q").series;
    half.mul(&half.clone()).expect("lambda-free product")
}

/// The solution `F = sum a_n lambda^n` with `a_n = A_(1/2)(n)^2`.
/// Construction checks `a_0 = 1` and the defining recurrence
/// `[n+1]_q^2 a_(n+1) = [n+1/2]_q^2 a_n` exactly at truncation.
#[derive(Clone, Debug)]
pub struct HGSolutionF {
    pub series: QSeries,
    coeffs: Vec<QSeries>,
}

impl HGSolutionF {
    pub fn coeff(&self, n: usize) -> &QSeries {
        &self.coeffs[n]
    }

    pub fn as_log(&self) -> LogSeries {
        LogSeries::from_series(self.series.clone())
    }
}

pub fn solution_f(prec: Prec) -> Result<HGSolutionF> {
    let n_max = (prec.k_lam - 1) as u64;
    let coeffs = a_coeffs(prec, n_max)?;
    assert!(coeffs[0].agrees_with(&QSeries::one(prec)), "a_0 = 1");
    let half = Dyadic::half();
    for n in 0..n_max as usize {
        let lhs = qnum_int(prec, n as i64 + 1)
            .pow(2)?
            .mul(&coeffs[n + 1])?;
        let rhs = qnum(prec, &half.add_int(n as i64))?
            .series
            .pow(2)?
            .mul(&coeffs[n])?;
        if !lhs.agrees_with(&rhs) {
            return Err(CoreError::InvalidParameter(format!(
                "coefficient recurrence fails at n = {n}"
            )));
        }
    }
    let series = QSeries::from_lambda_columns(
        prec,
        coeffs.iter().enumerate().map(|(n, c)| (n as i64, c.clone())),
    )?;
    Ok(HGSolutionF { series, coeffs })
}

/// The tail `F_(>= r) = sum_(n >= r) a_n lambda^n`.
pub fn f_tail(f: &HGSolutionF, r: usize) -> Result<QSeries> {
    let prec = f.series.prec();
    QSeries::from_lambda_columns(
        prec,
        f.coeffs
            .iter()
            .enumerate()
            .skip(r)
            .map(|(n, c)| (n as i64, c.clone())),
    )
}

/// `log_q(1 - lambda) = -sum_(n>=1) lambda^n / [n]_q`. Lives in
/// `Q((lambda))`: coefficients with `p | n` are not p-integral.
pub fn log_one_minus(prec: Prec) -> Result<QSeries> {
    let cols = (1..prec.k_lam).map(|n| {
        let inv = qnum_int(prec, n).invert().expect("[n]_q has unit constant term");
        (n, inv.neg())
    });
    QSeries::from_lambda_columns(prec, cols)
}

/// The logarithmic solution and the alternative form of it.
///
/// `log`: `F log_q lambda - F log_q(1-lambda)
///         - sum a_n lambda^n sum_(i<=n) (2/[i]_q + q - 1)`.
/// `alt`: `F log_q lambda + sum a_n lambda^n sum_(i<=n)
///         (2/[i-1/2]_q - 2/[i]_q)`.
#[derive(Clone, Debug)]
pub struct HGSolutionH {
    pub log: LogSeries,
    pub alt: LogSeries,
}

pub fn solution_h(prec: Prec, f: &HGSolutionF) -> Result<HGSolutionH> {
    assert!(prec.log_cap >= 1, "log_cap >= 1 required for H");
    let ell = LogSeries::ell(prec)?;
    let f_ell = LogSeries::from_series(f.series.clone()).mul(&ell)?;

    let f_log1m = f.series.mul(&log_one_minus(prec)?)?;

    // running sums s_n = sum_{i<=n} (2/[i]_q + (q-1)) and
    // t_n = sum_{i<=n} (2/[i-1/2]_q - 2/[i]_q)
    let two = Rat::from_int(2);
    let mut s = QSeries::zero(prec);
    let mut t = QSeries::zero(prec);
    let mut s_cols = Vec::new();
    let mut t_cols = Vec::new();
    let half = Dyadic::half();
    for i in 1..prec.k_lam {
        let inv_i = qnum_int(prec, i).invert()?.scale(&two);
        s = s.add(&inv_i).add(&QSeries::eps(prec));
        let im_half = half.add_int(i - 1); // i - 1/2
        let qn = crate::qcalc::qnum(prec, &im_half)?.series;
        t = t.add(&qn.invert()?.scale(&two)).sub(&inv_i);
        s_cols.push((i, s.mul(&f.coeff(i as usize).clone())?));
        t_cols.push((i, t.mul(&f.coeff(i as usize).clone())?));
    }
    let s_series = QSeries::from_lambda_columns(prec, s_cols.into_iter())?;
    let t_series = QSeries::from_lambda_columns(prec, t_cols.into_iter())?;

    let log = f_ell
        .sub(&LogSeries::from_series(f_log1m))
        .sub(&LogSeries::from_series(s_series));
    let alt = f_ell.add(&LogSeries::from_series(t_series));

    assert_eq!(log.ell_degree(), 1, "H has log-degree exactly 1");
    assert!(
        log.part(1).agrees_with(&f.series),
        "log coefficient of H equals F"
    );
    Ok(HGSolutionH { log, alt })
}

/// Apply the hypergeometric operator `L`. The lambda window of the
/// result shrinks by two orders (two q-derivatives) and is reported on
/// the returned series.
pub fn apply_l(f: &LogSeries) -> Result<LogSeries> {
    let prec = f.prec();
    let q = QSeries::q(prec);
    let lam = QSeries::lambda(prec);
    let qlam = q.mul(&lam)?;
    let front = qlam.mul(&QSeries::one(prec).sub(&qlam))?; // q lambda (1 - q lambda)
    let mid = QSeries::one(prec).sub(&alpha(prec).mul(&lam)?); // 1 - alpha lambda

    let d1 = f.dq()?;
    let d2 = d1.dq()?;
    let t1 = d2.mul_series(&front)?;
    let t2 = d1.mul_series(&mid)?;
    let t3 = f.mul_series(&qhalf_squared(prec))?;
    Ok(t1.add(&t2).sub(&t3))
}

/// Verifies the summation identity behind the log solution:
/// `sum_(m<=n) (2(q - q^(1/2))[m]_q - (2[1/2]_q - 1)) a_m q^(n-m)
///  = (q-1) [n+1]_q^2 a_(n+1)` exactly at the eps truncation.
pub fn aglem_check(prec: Prec, n: usize) -> Result<bool> {
    let coeffs = a_coeffs(prec, n as u64 + 1)?;
    let q = QSeries::q(prec);
    let qhalf = qpow(prec, &Dyadic::half());
    let factor = q.sub(&qhalf).scale(&Rat::from_int(2)); // 2(q - q^(1/2))
    let shift = qnum(prec, &Dyadic::half())?
        .series
        .scale(&Rat::from_int(2))
        .sub(&QSeries::one(prec)); // 2[1/2]_q - 1

    let mut lhs = QSeries::zero(prec);
    for (m, a_m) in coeffs.iter().enumerate().take(n + 1) {
        let coef = factor
            .mul(&qnum_int(prec, m as i64))?
            .sub(&shift)
            .mul(a_m)?;
        lhs = lhs.add(&coef.mul(&qpow_int_series(prec, (n - m) as i64))?);
    }
    let rhs = QSeries::eps(prec)
        .mul(&qnum_int(prec, n as i64 + 1).pow(2)?)?
        .mul(&coeffs[n + 1])?;
    Ok(lhs.agrees_with(&rhs))
}

fn qpow_int_series(prec: Prec, n: i64) -> QSeries {
    crate::qcalc::qpow_int(prec, n)
}

/// q-Wronskian `F d_q H - H d_q F`. The log parts cancel exactly; a
/// nonzero log part is a bug signal. The result satisfies
/// `W * lambda (1 - lambda) = 1`.
pub fn wronskian(f: &HGSolutionF, h: &HGSolutionH) -> Result<QSeries> {
    let f_log = f.as_log();
    let term1 = f_log.mul(&h.log.dq()?)?;
    let term2 = h.log.mul(&f_log.dq()?)?;
    let w = term1.sub(&term2);
    if w.ell_degree() != 0 {
        return Err(CoreError::InvalidParameter(
            "wronskian log parts failed to cancel".into(),
        ));
    }
    Ok(w.part(0))
}

#[cfg(test)]
mod tests;
