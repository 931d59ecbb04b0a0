use super::classical::*;
use super::*;
use crate::coeff::Rat;
use crate::hyper::{solution_f, Mat2};
use crate::qcalc::eps_sign;
use crate::qseries::Prec;
use crate::report::{CongruenceReport, Verdict};

fn prec() -> Prec {
    Prec::new(3, 6, 5, 14).unwrap()
}

fn all_hold(reports: &[CongruenceReport]) {
    for r in reports {
        assert_eq!(
            r.verdict,
            Verdict::Holds,
            "failed: {} {:?} ({:?})",
            r.claim,
            r.params,
            r.witness
        );
    }
}

#[test]
fn unit_root_structure() {
    let p = prec();
    all_hold(&unit_root_reports(p).unwrap());
    let data = build_unit_root(p).unwrap();
    assert_eq!(data.eps_sign, Rat::from_int(-1));
    // classical reduction of the phi ratio
    let cl = classical_phi_ratio(p).unwrap().scale(&data.eps_sign);
    assert!(data.phi_ratio.reduce_mod_eps().agrees_with(&cl));
}

#[test]
fn a_data_and_determine_c() {
    let p = prec();
    let c = determine_c(p).unwrap();
    // c - c0 is an eps-multiple
    assert!(c.is_zero() || c.eps_val().unwrap() >= 1);
    let data = compute_a(p, &c).unwrap();
    let b0 = data.a.coeff(0, 0);
    let b1 = data.a.coeff(1, 0);
    assert_eq!(b1, &(&Rat::from_int(3) * &b0) / &Rat::from_int(2));
    assert!(data.a.is_p_integral());

    // F phi(F) at lambda = 0 is 1 + eps-multiples
    let f = solution_f(p).unwrap();
    let fpf = f.series.mul(&f.series.frob().unwrap()).unwrap();
    let at0 = fpf.lam_coeff_series(0);
    assert_eq!(at0.coeff(0, 0), Rat::one());
}

#[test]
fn a_classical_oracle() {
    let p = prec();
    let c = determine_c(p).unwrap();
    let data = compute_a(p, &c).unwrap();
    let b = classical_b(p, &c.reduce_mod_eps().coeff(0, 0)).unwrap();
    assert!(
        data.a.reduce_mod_eps().agrees_with(&b),
        "a mod eps must match the classical oracle"
    );
}

#[test]
fn g1_tail_divisibilities() {
    let p = prec();
    let f = solution_f(p).unwrap();
    for i_prime in 1..=4u64 {
        let r = g1_tail_divisibility(p, &f, i_prime).unwrap();
        assert_eq!(r.verdict, Verdict::Holds, "i' = {i_prime}");
    }
}

#[test]
fn phi_mprime_structure() {
    let p = prec();
    let c = determine_c(p).unwrap();
    let fm = build_phi_mprime(p, &c).unwrap();
    all_hold(&phi_mprime_reports(p, &fm).unwrap());
    all_hold(&commutation_reports(p, &fm).unwrap());
    // gamma matrix reduces to the identity
    assert!(fm
        .gamma_matrix
        .reduce_mod_eps()
        .agrees_with(&Mat2::identity(p)));
    // phi matrix mod eps with [p]_q -> p matches the classical shape
    let phi0 = fm.phi_matrix.eps_slice(0);
    let sign = eps_sign(p.p);
    let cl_ratio = classical_phi_ratio(p).unwrap();
    let expect11 = cl_ratio
        .invert()
        .unwrap()
        .scale(&(&sign * &Rat::from_int(3)));
    assert!(phi0.at(1, 1).agrees_with(&expect11));
    let expect22 = cl_ratio.scale(&sign);
    assert!(phi0.at(2, 2).agrees_with(&expect22));
}

#[test]
fn b1_solve_works() {
    let p = prec();
    let c = determine_c(p).unwrap();
    let fm = build_phi_mprime(p, &c).unwrap();
    all_hold(&b1_reports(p, &fm).unwrap());
    let solve = solve_b1(p, &fm).unwrap();
    assert!(solve.residual.is_zero());
    assert_eq!(solve.c_const[0][0], Rat::new(1, 2));
    assert_eq!(solve.det_a0.coeff(0, 0), Rat::from_int(3));
}

#[test]
fn arithmetic_action() {
    let p = Prec::new(3, 6, 6, 30).unwrap();
    for l in [Rat::from_int(2), Rat::from_int(4)] {
        let reports = arithmetic_action_reports(p, &l, 1).unwrap();
        all_hold(&reports);
    }
    // l = 1 is the identity action
    let trivial = arithmetic_action_reports(p, &Rat::one(), 1).unwrap();
    all_hold(&trivial);
}

#[test]
fn classical_gm_matches_connection() {
    let p = prec();
    let (p_mat, _) = crate::hyper::connection_matrices(p).unwrap();
    let cl = classical_gm_matrix(p).unwrap();
    assert!(p_mat.reduce_mod_eps().agrees_with(&cl));
}

#[test]
fn classical_eta_matches_reduction() {
    let p = prec();
    let data = build_unit_root(p).unwrap();
    let cl = classical_eta(p).unwrap();
    assert!(data.eta.reduce_mod_eps().agrees_with(&cl));
}
