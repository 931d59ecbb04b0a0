use super::*;
use crate::coeff::{Dyadic, Rat};
use crate::qcalc::{qnum, qnum_int};
use crate::qseries::{LogSeries, Prec, QSeries};

fn prec() -> Prec {
    Prec::new(3, 6, 5, 14).unwrap()
}

#[test]
fn alpha_examples() {
    let p = prec();
    let a = alpha(p);
    assert_eq!(a.coeff(0, 0), Rat::from_int(2));
    assert_eq!(a.coeff(1, 0), Rat::new(5, 4));
    // direct route: 1 + (1 + q) - 2 [1/2]_q
    let direct = QSeries::one(p)
        .add(&QSeries::one(p))
        .add(&QSeries::q(p))
        .sub(&qnum(p, &Dyadic::half()).unwrap().series.scale(&Rat::from_int(2)));
    assert!(a.agrees_with(&direct));
}

#[test]
fn solution_f_coefficients() {
    let p = prec();
    let f = solution_f(p).unwrap();
    assert_eq!(f.series.coeff(0, 0), Rat::one());
    let half_sq = qnum(p, &Dyadic::half()).unwrap().series.pow(2).unwrap();
    assert!(f.coeff(1).agrees_with(&half_sq));
    // classical lambda^2 coefficient: ((1/2)(3/2) / (1*2))^2 = 9/64
    assert_eq!(f.series.reduce_mod_eps().coeff(0, 2), Rat::new(9, 64));
}

#[test]
fn log_one_minus_examples() {
    let p = prec();
    let l = log_one_minus(p).unwrap();
    assert_eq!(l.coeff(0, 1), Rat::from_int(-1));
    // lambda^2 coefficient is -1/[2]_q
    let inv2 = qnum_int(p, 2).invert().unwrap().neg();
    assert!(l.lam_coeff_series(2).agrees_with(&inv2));
    // d_q log_q(1-lambda) = 1/(lambda - 1)
    let d = l.dq().unwrap();
    let target = QSeries::one_minus_lambda(p).invert().unwrap().neg();
    assert!(d.agrees_with(&target));
}

#[test]
fn l_annihilates_f() {
    let p = prec();
    let f = solution_f(p).unwrap();
    let lf = apply_l(&f.as_log()).unwrap();
    assert!(lf.is_zero(), "L[F] = 0");
    assert!(lf.lam_window() >= p.k_lam - 2);
}

#[test]
fn l_on_tail() {
    // L[F_(>= r)] = [r]_q^2 a_r lambda^(r-1)
    let p = prec();
    let f = solution_f(p).unwrap();
    for r in 1..6usize {
        let tail = f_tail(&f, r).unwrap();
        let lt = apply_l(&LogSeries::from_series(tail)).unwrap();
        let expect = qnum_int(p, r as i64)
            .pow(2)
            .unwrap()
            .mul(f.coeff(r))
            .unwrap()
            .mul(&QSeries::monomial(p, Rat::one(), 0, r as i64 - 1).unwrap())
            .unwrap();
        assert_eq!(lt.ell_degree(), 0);
        assert!(lt.part(0).agrees_with(&expect), "r = {r}");
    }
}

#[test]
fn l_annihilates_h_and_alternative() {
    let p = prec();
    let f = solution_f(p).unwrap();
    let h = solution_h(p, &f).unwrap();
    assert!(apply_l(&h.log).unwrap().is_zero(), "L[H] = 0");
    assert!(apply_l(&h.alt).unwrap().is_zero(), "L[H_alt] = 0");
    let diff = h.log.sub(&h.alt);
    assert!(apply_l(&diff).unwrap().is_zero(), "L[H - H_alt] = 0");
}

#[test]
fn aglem_small_n() {
    let p = prec();
    // n = 0: -(2[1/2]_q - 1) = (q-1)[1/2]_q^2
    let half = qnum(p, &Dyadic::half()).unwrap().series;
    let lhs = half.scale(&Rat::from_int(2)).sub(&QSeries::one(p)).neg();
    let rhs = QSeries::eps(p).mul(&half.pow(2).unwrap()).unwrap();
    assert!(lhs.agrees_with(&rhs));
    for n in 0..8 {
        assert!(aglem_check(p, n).unwrap(), "aglem at n = {n}");
    }
}

#[test]
fn wronskian_identity() {
    let p = prec();
    let f = solution_f(p).unwrap();
    let h = solution_h(p, &f).unwrap();
    let w = wronskian(&f, &h).unwrap();
    let lam_fac = QSeries::lambda(p).mul(&QSeries::one_minus_lambda(p)).unwrap();
    let prod = w.mul(&lam_fac).unwrap();
    assert!(prod.agrees_with(&QSeries::one(p)), "W * lambda(1-lambda) = 1");
    // classical limit: same identity at eps = 0
    let prod_cl = prod.reduce_mod_eps();
    assert!(prod_cl.agrees_with(&QSeries::one(p)));
}

#[test]
fn connection_matrix_classical_reduction() {
    let p = prec();
    let (p_mat, p_prime) = connection_matrices(p).unwrap();
    // P mod eps = (1/(lambda(1-lambda))) [[1-2 lambda, -1/4], [-lambda(1-lambda), 0]]
    let lam = QSeries::lambda(p);
    let lam_fac = lam.mul(&QSeries::one_minus_lambda(p)).unwrap();
    let inv = lam_fac.invert_laurent().unwrap().reduce_mod_eps();
    let classical = Mat2::new(
        QSeries::one(p).sub(&lam.scale(&Rat::from_int(2))),
        QSeries::rational(p, Rat::new(-1, 4)),
        lam_fac.neg(),
        QSeries::zero(p),
    )
    .scale_series(&inv)
    .unwrap();
    assert!(p_mat.reduce_mod_eps().agrees_with(&classical));

    // d_q (d_qF, F)^T = P' (d_qF, F)^T
    let f = solution_f(p).unwrap();
    let v = (f.series.dq().unwrap(), f.series.clone());
    let (r1, r2) = p_prime.apply((&v.0, &v.1)).unwrap();
    assert!(v.0.dq().unwrap().agrees_with(&r1));
    assert!(v.1.dq().unwrap().agrees_with(&r2));
}

#[test]
fn horizontality() {
    let p = prec();
    let f = solution_f(p).unwrap();
    let h = solution_h(p, &f).unwrap();
    assert!(horizontality_check(&f.as_log()).unwrap());
    assert!(horizontality_check(&h.log).unwrap());
    let lam = LogSeries::from_series(QSeries::lambda(p));
    assert!(!horizontality_check(&lam).unwrap(), "lambda is not a solution");
}

#[test]
fn basis_change_presentation() {
    let p = prec();
    let m = basis_change_mprime(p).unwrap();
    assert!(m.nabla.at(1, 1).is_zero());
    let lam_fac = QSeries::lambda(p).mul(&QSeries::one_minus_lambda(p)).unwrap();
    let expect21 = lam_fac.invert_laurent().unwrap().neg();
    assert!(m.nabla.at(2, 1).agrees_with(&expect21));
    assert_eq!(m.fil1.eps_multipliers, [0, 1]);
    // gamma_M = 1 mod eps
    assert!(m
        .gamma_matrix
        .reduce_mod_eps()
        .agrees_with(&Mat2::identity(p)));
}

#[test]
fn identity_1f() {
    let p = prec();
    assert!(identity_1f_check(p).unwrap());
    // degenerate variant: second solution = F itself
    let f = solution_f(p).unwrap();
    assert!(!identity_1f_with(&f, &f.as_log()).unwrap());
}
