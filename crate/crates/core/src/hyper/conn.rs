//! Connection matrices of the rank-2 q-difference module, the
//! horizontality criterion, and the `(e1', e2)` presentation with its
//! filtration.

use crate::coeff::Dyadic;
use crate::error::Result;
use crate::qcalc::{qnum, qnum_int};
use crate::qseries::{LogSeries, Prec, QSeries};

use super::mat::Mat2;
use super::{alpha, solution_f, solution_h, HGSolutionF};

/// Connection matrices `(P, P')`:
///
/// `P  = 1/(lambda(1-lambda)) [[1 - [2]_q lambda, -[1/2]_q^2],
///                             [-q lambda (1 - q lambda), [1/2]_q^2 (q-1) lambda]]`
/// `P' = 1/(q lambda (1 - q lambda)) [[-1 + alpha lambda, [1/2]_q^2],
///                                    [q lambda (1 - q lambda), 0]]`
///
/// satisfying `(1 + (q-1) lambda P)(1 + (q-1) lambda P') = 1` at
/// truncation (checked here).
pub fn connection_matrices(prec: Prec) -> Result<(Mat2, Mat2)> {
    let lam = QSeries::lambda(prec);
    let q = QSeries::q(prec);
    let one = QSeries::one(prec);
    let qlam = q.mul(&lam)?;
    let qlam_fac = qlam.mul(&one.sub(&qlam))?; // q lambda (1 - q lambda)
    let lam_fac = lam.mul(&QSeries::one_minus_lambda(prec))?; // lambda (1 - lambda)
    let half_sq = qnum(prec, &Dyadic::half())?.series.pow(2)?;
    let al = alpha(prec);

    let inv_lam_fac = lam_fac.invert_laurent()?;
    let p_mat = Mat2::new(
        one.sub(&qnum_int(prec, 2).mul(&lam)?),
        half_sq.neg(),
        qlam_fac.neg(),
        half_sq.mul(&QSeries::eps(prec))?.mul(&lam)?,
    )
    .scale_series(&inv_lam_fac)?;

    let inv_qlam_fac = qlam_fac.invert_laurent()?;
    let p_prime = Mat2::new(
        al.mul(&lam)?.sub(&one),
        half_sq.clone(),
        qlam_fac.clone(),
        QSeries::zero(prec),
    )
    .scale_series(&inv_qlam_fac)?;

    let lhs = holonomy(&p_mat)?.mul(&holonomy(&p_prime)?)?;
    assert!(
        lhs.agrees_with(&Mat2::identity(prec)),
        "defining relation (1+(q-1)lambda P)(1+(q-1)lambda P') = 1 failed"
    );
    Ok((p_mat, p_prime))
}

/// `1 + (q-1) lambda M`.
fn holonomy(m: &Mat2) -> Result<Mat2> {
    let prec = m.prec();
    let elam = QSeries::eps(prec).mul(&QSeries::lambda(prec))?;
    Ok(Mat2::identity(prec).add(&m.scale_series(&elam)?))
}

fn apply_log(m: &Mat2, v: (&LogSeries, &LogSeries)) -> Result<(LogSeries, LogSeries)> {
    let a = v.0.mul_series(m.at(1, 1))?.add(&v.1.mul_series(m.at(1, 2))?);
    let b = v.0.mul_series(m.at(2, 1))?.add(&v.1.mul_series(m.at(2, 2))?);
    Ok((a, b))
}

/// Horizontality of `e_1 f_1 + e_2 f_2` for `(f_1, f_2) = (d_q f_2, f_2)`:
/// equivalent to `(1 + (q-1) lambda P) (gamma f_1, gamma f_2)^T = (f_1, f_2)^T`.
/// Holds exactly for `f_2 in {F, H}` and fails for `f_2 = lambda`.
pub fn horizontality_check(f2: &LogSeries) -> Result<bool> {
    let prec = f2.prec();
    let (p_mat, _) = connection_matrices(prec)?;
    let f1 = f2.dq()?;
    let hol = holonomy(&p_mat)?;
    let (g1, g2) = apply_log(&hol, (&f1.gamma(), &f2.gamma()))?;
    Ok(g1.agrees_with(&f1) && g2.agrees_with(f2))
}

/// Filtration data: `Fil^1 = (q-1)^(m_1) R' e_1 + (q-1)^(m_2) R' e_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fil1 {
    pub eps_multipliers: [u32; 2],
}

/// The `(e_1', e_2)` presentation of the rank-2 module: basis labels,
/// the matrix of the q-connection, the associated semilinear
/// `gamma`-action matrix `1 + (q-1) D_q^log`, and the filtration step.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub basis: [String; 2],
    pub nabla: Mat2,
    pub gamma_matrix: Mat2,
    pub fil1: Fil1,
}

/// Change of basis `e_1' = e_1 / (lambda (1 - lambda))`: conjugating `P`
/// by `diag(1/(lambda(1-lambda)), 1)` reproduces the displayed matrix
///
/// `[[0, -[1/2]_q^2], [-1/(lambda(1-lambda)), [1/2]_q^2 (q-1)/(1-lambda)]]`
///
/// (checked), with `Fil^1 = R' e_1' + (q-1) R' e_2`.
pub fn basis_change_mprime(prec: Prec) -> Result<ModulePresentation> {
    let (p_mat, _) = connection_matrices(prec)?;
    let lam_fac = QSeries::lambda(prec).mul(&QSeries::one_minus_lambda(prec))?;
    let u = lam_fac.invert_laurent()?;

    // P_new = D^-1 (d_q D + P gamma(D)) for D = diag(u, 1)
    let e11 = lam_fac.mul(&u.dq()?.add(&p_mat.at(1, 1).mul(&u.gamma())?))?;
    let e12 = lam_fac.mul(p_mat.at(1, 2))?;
    let e21 = p_mat.at(2, 1).mul(&u.gamma())?;
    let e22 = p_mat.at(2, 2).clone();
    let nabla = Mat2::new(e11, e12, e21, e22);

    // displayed form
    let half_sq = qnum(prec, &Dyadic::half())?.series.pow(2)?;
    let inv_one_minus = QSeries::one_minus_lambda(prec).invert()?;
    let displayed = Mat2::new(
        QSeries::zero(prec),
        half_sq.neg(),
        u.neg(),
        half_sq.mul(&QSeries::eps(prec))?.mul(&inv_one_minus)?,
    );
    assert!(
        nabla.agrees_with(&displayed),
        "basis change disagrees with the displayed nabla matrix"
    );

    let gamma_matrix = holonomy(&nabla)?;
    Ok(ModulePresentation {
        basis: ["e1'".into(), "e2".into()],
        nabla,
        gamma_matrix,
        fil1: Fil1 {
            eps_multipliers: [0, 1],
        },
    })
}

/// Verifies `lambda (1 - lambda) (F d_q H - H d_q F) / F = 1/F`, the
/// re-expression used to build the rank-2 Frobenius. Returns `false`
/// for a degenerate second solution (e.g. `H` replaced by `F`).
pub fn identity_1f_check(prec: Prec) -> Result<bool> {
    let f = solution_f(prec)?;
    let h = solution_h(prec, &f)?;
    identity_1f_with(&f, &h.log)
}

pub(crate) fn identity_1f_with(f: &HGSolutionF, second: &LogSeries) -> Result<bool> {
    let prec = f.series.prec();
    let f_log = f.as_log();
    let w = f_log.mul(&second.dq()?)?.sub(&second.mul(&f_log.dq()?)?);
    if w.ell_degree() != 0 {
        return Ok(false);
    }
    let lam_fac = QSeries::lambda(prec).mul(&QSeries::one_minus_lambda(prec))?;
    let inv_f = f.series.invert()?;
    let lhs = lam_fac.mul(&w.part(0))?.mul(&inv_f)?;
    Ok(lhs.agrees_with(&inv_f) && !lhs.is_zero())
}
