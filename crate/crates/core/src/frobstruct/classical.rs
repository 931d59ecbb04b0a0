//! Plain rational lambda-series arithmetic at `q = 1`: the independent
//! oracle for every classical reduction. Series are carried as
//! [`QSeries`] values whose only populated eps-slice is `eps^0`, so the
//! truncated ring operations can be reused while the *construction*
//! stays independent of the q-machinery.

use crate::coeff::Rat;
use crate::error::Result;
use crate::hyper::Mat2;
use crate::qseries::{Prec, QSeries};

/// `f = F(1/2, 1/2; 1; lambda)`: coefficients `prod ((i+1/2)/(i+1))^2`
/// built by plain rational recursion.
pub fn classical_f(prec: Prec) -> QSeries {
    let mut out = QSeries::zero(prec);
    let mut c = Rat::one();
    for n in 0..prec.k_lam {
        out = out.add(&QSeries::monomial(prec, c.clone(), 0, n).unwrap());
        let i = Rat::from_int(n);
        let ratio = (&i + &Rat::new(1, 2)) / (&i + &Rat::one());
        c = c * ratio.pow(2);
    }
    out
}

/// `log(1 - lambda) = -sum lambda^n / n`.
pub fn classical_log1m(prec: Prec) -> QSeries {
    let mut out = QSeries::zero(prec);
    for n in 1..prec.k_lam {
        out = out.add(&QSeries::monomial(prec, Rat::new(-1, 1) / Rat::from_int(n), 0, n).unwrap());
    }
    out
}

/// Classical derivative `d/d lambda` on an `eps^0`-embedded series.
pub fn d_lambda(s: &QSeries) -> QSeries {
    let prec = s.prec();
    let mut out = QSeries::zero(prec);
    for (i, j, c) in s.iter() {
        assert_eq!(i, 0, "classical series must live in the eps^0 slice");
        if j == 0 {
            continue;
        }
        let nj = j - 1;
        if nj >= prec.lam_low && nj < prec.k_lam {
            out = out.add(
                &QSeries::monomial(prec, c * &Rat::from_int(j), 0, nj).unwrap(),
            );
        }
    }
    out.restrict_window(prec.m_eps, s.lam_window() - 1);
    out
}

/// Degree-one polynomial in the formal symbol `L = log lambda`.
#[derive(Clone, Debug)]
pub struct ClassicalLog {
    pub part0: QSeries,
    pub part1: QSeries,
}

impl ClassicalLog {
    pub fn mul_series(&self, s: &QSeries) -> Result<Self> {
        Ok(ClassicalLog {
            part0: self.part0.mul(s)?,
            part1: self.part1.mul(s)?,
        })
    }

    /// Frobenius at `q = 1`: `lambda -> lambda^p`, `L -> p L`.
    pub fn frob(&self) -> Result<Self> {
        let p = Rat::from_int(self.part0.prec().p as i64);
        Ok(ClassicalLog {
            part0: self.part0.frob()?,
            part1: self.part1.frob()?.scale(&p),
        })
    }
}

/// `H_cl = f L - f log(1-lambda) - sum a'_n lambda^n * 2 H_n` with
/// `H_n` the harmonic numbers: the `q = 1` limit of the log solution.
pub fn classical_h(prec: Prec) -> Result<ClassicalLog> {
    let f = classical_f(prec);
    let mut tail = QSeries::zero(prec);
    let mut harmonic2 = Rat::zero();
    for n in 1..prec.k_lam {
        harmonic2 = &harmonic2 + &(Rat::from_int(2) / Rat::from_int(n));
        let a_n = f.coeff(0, n);
        tail = tail.add(&QSeries::monomial(prec, &a_n * &harmonic2, 0, n).unwrap());
    }
    let part0 = f.mul(&classical_log1m(prec))?.neg().sub(&tail);
    Ok(ClassicalLog { part0, part1: f })
}

/// `b = phi(f) H_cl - (1/p) f phi(H_cl) + c0 f phi(f)`: the classical
/// lower-left Frobenius entry. The `L`-part cancels exactly (checked).
pub fn classical_b(prec: Prec, c0: &Rat) -> Result<QSeries> {
    let f = classical_f(prec);
    let h = classical_h(prec)?;
    let phi_f = f.frob()?;
    let phi_h = h.frob()?;
    let inv_p = Rat::one() / Rat::from_int(prec.p as i64);

    let ell_part = phi_f
        .mul(&h.part1)?
        .sub(&f.mul(&phi_h.part1)?.scale(&inv_p));
    assert!(ell_part.is_zero(), "classical L-part must cancel");

    let b = phi_f
        .mul(&h.part0)?
        .sub(&f.mul(&phi_h.part0)?.scale(&inv_p))
        .add(&f.mul(&phi_f)?.scale(c0));
    Ok(b)
}

/// `f / phi(f)`, the classical unit-root factor without the sign.
pub fn classical_phi_ratio(prec: Prec) -> Result<QSeries> {
    let f = classical_f(prec);
    f.mul(&f.frob()?.invert()?)
}

/// `f'/f`, the classical logarithmic derivative.
pub fn classical_eta(prec: Prec) -> Result<QSeries> {
    let f = classical_f(prec);
    d_lambda(&f).mul(&f.invert()?)
}

/// The classical connection matrix
/// `(1/(lambda(1-lambda))) [[1-2 lambda, -1/4], [-lambda(1-lambda), 0]]`.
pub fn classical_gm_matrix(prec: Prec) -> Result<Mat2> {
    let lam = QSeries::lambda(prec);
    let lam_fac = lam.mul(&QSeries::one_minus_lambda(prec))?;
    let inv = lam_fac.invert_laurent()?.reduce_mod_eps();
    Mat2::new(
        QSeries::one(prec).sub(&lam.scale(&Rat::from_int(2))),
        QSeries::rational(prec, Rat::new(-1, 4)),
        lam_fac.neg(),
        QSeries::zero(prec),
    )
    .scale_series(&inv)
}
