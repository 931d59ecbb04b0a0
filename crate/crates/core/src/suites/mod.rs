//! Named verification suites and the order-stable parallel runner.
//!
//! Suite ids are addressable from the command line; default parameter
//! grids live in [`manifest`] so a full run is reproducible for a given
//! configuration.

pub mod manifest;

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::coeff::{Dyadic, Rat};
use crate::dwork;
use crate::error::{CoreError, Result};
use crate::frobstruct::{self, FrobMprime};
use crate::hyper;
use crate::qcalc;
use crate::qseries::{LogSeries, Prec, QSeries};
use crate::report::{CaseResult, CongruenceReport, SuiteResult, Verdict};

/// Runner configuration. `jobs` only affects scheduling and is excluded
/// from serialized reports, which are byte-identical for a given
/// mathematical configuration.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: u32,
    pub n_p: u32,
    pub m_eps: u32,
    pub k_lam: i64,
    pub suites: Vec<String>,
    #[serde(skip)]
    pub jobs: Option<usize>,
    pub allow_inconclusive: bool,
    pub manifest_version: &'static str,
}

impl RunConfig {
    pub fn new(p: u32, n_p: u32, m_eps: u32, k_lam: i64) -> Self {
        RunConfig {
            p,
            n_p,
            m_eps,
            k_lam,
            suites: vec!["all".into()],
            jobs: None,
            allow_inconclusive: false,
            manifest_version: manifest::MANIFEST_VERSION,
        }
    }

    pub fn prec(&self) -> Result<Prec> {
        Prec::new(self.p, self.n_p, self.m_eps, self.k_lam)
    }
}

pub const SUITE_IDS: &[&str] = &[
    "qcalc.props",
    "hyper.LF",
    "hyper.aglem",
    "hyper.wronskian",
    "hyper.connection",
    "hyper.classical",
    "dwork.lemma11",
    "dwork.lemma12",
    "dwork.cor_i",
    "dwork.cor_ii",
    "dwork.thm2",
    "dwork.thm3",
    "dwork.dwcor",
    "frob.unit_root",
    "frob.a_integrality",
    "frob.commutation",
    "frob.determine_c",
    "frob.b1_solve",
    "frob.sigma",
];

type LazyReports = Arc<OnceLock<std::result::Result<Vec<CongruenceReport>, CoreError>>>;
type Generator = Arc<dyn Fn() -> Result<Vec<CongruenceReport>> + Send + Sync>;

struct Case {
    id: String,
    params: serde_json::Map<String, serde_json::Value>,
    expect: Verdict,
    run: Box<dyn Fn() -> Result<CongruenceReport> + Send + Sync>,
}

fn pmap(pairs: &[(&str, String)]) -> serde_json::Map<String, serde_json::Value> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
        .collect()
}

fn case_id(stem: &str, pairs: &[(&str, String)]) -> String {
    if pairs.is_empty() {
        return stem.to_string();
    }
    let joined: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{stem}[{}]", joined.join(","))
}

/// A batch of cases backed by one shared computation: the generator
/// runs once (whichever case executes first) and each case picks its
/// report by index.
fn indexed_cases(
    gen: Generator,
    meta: Vec<(String, serde_json::Map<String, serde_json::Value>, Verdict)>,
) -> Vec<Case> {
    let cell: LazyReports = Arc::new(OnceLock::new());
    meta.into_iter()
        .enumerate()
        .map(|(idx, (id, params, expect))| {
            let cell = Arc::clone(&cell);
            let gen = Arc::clone(&gen);
            Case {
                id,
                params,
                expect,
                run: Box::new(move || {
                    let res = cell.get_or_init(|| gen());
                    match res {
                        Ok(reports) => reports.get(idx).cloned().ok_or_else(|| {
                            CoreError::InvalidParameter(format!(
                                "generator produced too few reports (wanted index {idx})"
                            ))
                        }),
                        Err(e) => Err(e.clone()),
                    }
                }),
            }
        })
        .collect()
}

fn bool_report(claim: &str, ok: bool) -> CongruenceReport {
    CongruenceReport {
        claim: claim.into(),
        params: Vec::new(),
        modulus: "exact".into(),
        verdict: if ok { Verdict::Holds } else { Verdict::Fails },
        witness: None,
    }
}

// ----- shared heavy objects -----

struct Ctx {
    prec: Prec,
    fm: Arc<OnceLock<std::result::Result<(QSeries, FrobMprime), CoreError>>>,
}

impl Ctx {
    fn new(prec: Prec) -> Self {
        Ctx {
            prec,
            fm: Arc::new(OnceLock::new()),
        }
    }
}

// ----- suite builders -----

fn build_suite(id: &str, ctx: &Ctx) -> Result<Vec<Case>> {
    let prec = ctx.prec;
    match id {
        "qcalc.props" => Ok(qcalc_props_cases(prec)),
        "hyper.LF" => Ok(hyper_lf_cases(prec)),
        "hyper.aglem" => Ok(hyper_aglem_cases(prec)),
        "hyper.wronskian" => Ok(hyper_wronskian_cases(prec)),
        "hyper.connection" => Ok(hyper_connection_cases(prec)),
        "hyper.classical" => Ok(hyper_classical_cases(prec)),
        "dwork.lemma11" => Ok(dwork_lemma11_cases(prec)),
        "dwork.lemma12" => Ok(dwork_lemma12_cases(prec)),
        "dwork.cor_i" => Ok(dwork_cor_i_cases(prec)),
        "dwork.cor_ii" => Ok(dwork_cor_ii_cases(prec)),
        "dwork.thm2" => Ok(dwork_thm2_cases(prec)),
        "dwork.thm3" => Ok(dwork_thm3_cases(prec)),
        "dwork.dwcor" => Ok(dwork_dwcor_cases(prec)),
        "frob.unit_root" => Ok(frob_unit_root_cases(prec)),
        "frob.a_integrality" => Ok(frob_a_integrality_cases(ctx)),
        "frob.commutation" => Ok(frob_commutation_cases(ctx)),
        "frob.determine_c" => Ok(frob_determine_c_cases(prec)),
        "frob.b1_solve" => Ok(frob_b1_cases(ctx)),
        "frob.sigma" => Ok(frob_sigma_cases(prec)),
        other => Err(CoreError::InvalidParameter(format!(
            "unknown suite id: {other}"
        ))),
    }
}

fn qcalc_props_cases(prec: Prec) -> Vec<Case> {
    let checks = manifest::QCALC_CHECKS;
    let gen: Generator = Arc::new(move || qcalc_props_reports(prec));
    let meta = checks
        .iter()
        .map(|name| {
            let pairs = [("check", name.to_string())];
            (case_id("qcalc.props", &pairs), pmap(&pairs), Verdict::Holds)
        })
        .collect();
    indexed_cases(gen, meta)
}

fn qcalc_props_reports(prec: Prec) -> Result<Vec<CongruenceReport>> {
    use rand::SeedableRng;
    let mut out = Vec::new();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(manifest::PROP_SEED);

    // addition law [a+b]_q = [a]_q + q^a [b]_q
    let mut ok = true;
    for _ in 0..manifest::PROP_SAMPLES {
        let a = manifest::random_dyadic(&mut rng);
        let b = manifest::random_dyadic(&mut rng);
        let ab = Dyadic::new(a.value() + b.value()).unwrap();
        let lhs = qcalc::qnum(prec, &ab)?.series;
        let rhs = qcalc::qnum(prec, &a)?
            .series
            .add(&qcalc::qpow(prec, &a).mul(&qcalc::qnum(prec, &b)?.series)?);
        ok &= lhs.agrees_with(&rhs);
    }
    out.push(bool_report("qcalc.props", ok));

    // [ap]_q = [p]_q phi([a]_q)
    let mut ok = true;
    let qp = qcalc::qnum_int(prec, prec.p as i64);
    for _ in 0..manifest::PROP_SAMPLES {
        let a = manifest::random_dyadic(&mut rng);
        let ap = Dyadic::new(&Rat::from_int(prec.p as i64) * a.value()).unwrap();
        let lhs = qcalc::qnum(prec, &ap)?.series;
        let rhs = qp.mul(&qcalc::qnum(prec, &a)?.series.frob()?)?;
        ok &= lhs.agrees_with(&rhs);
    }
    out.push(bool_report("qcalc.props", ok));

    // [p^n]_q in (p, eps)^n
    let mut ok = true;
    for n in 1..=3u32.min(prec.n_p).min(prec.m_eps) {
        ok &= qcalc::qnum_int(prec, (prec.p as i64).pow(n)).in_ideal_pow(n)?;
    }
    out.push(bool_report("qcalc.props", ok));

    // gamma phi = phi gamma
    let mut ok = true;
    for _ in 0..manifest::PROP_SAMPLES {
        let f = manifest::random_series(prec, &mut rng);
        ok &= f.gamma().frob()?.agrees_with(&f.frob()?.gamma());
    }
    let ell = LogSeries::ell(prec)?;
    ok &= ell.gamma().frob()?.agrees_with(&ell.frob()?.gamma());
    out.push(bool_report("qcalc.props", ok));

    // d_q phi = [p]_q lambda^(p-1) phi d_q
    let mut ok = true;
    let twist = qp.mul(&QSeries::monomial(prec, Rat::one(), 0, prec.p as i64 - 1)?)?;
    for _ in 0..manifest::PROP_SAMPLES {
        let f = manifest::random_series(prec, &mut rng);
        let lhs = f.frob()?.dq()?;
        let rhs = twist.mul(&f.dq()?.frob()?)?;
        ok &= lhs.agrees_with(&rhs);
    }
    out.push(bool_report("qcalc.props", ok));

    // q-Leibniz rule
    let mut ok = true;
    for _ in 0..manifest::PROP_SAMPLES {
        let x = manifest::random_series(prec, &mut rng);
        let y = manifest::random_series(prec, &mut rng);
        let lhs = x.mul(&y)?.dq()?;
        let rhs = x.dq()?.mul(&y.gamma())?.add(&x.mul(&y.dq()?)?);
        ok &= lhs.agrees_with(&rhs);
    }
    out.push(bool_report("qcalc.props", ok));

    // gamma/d_q operator identities on log series
    let mut ok = true;
    let q = QSeries::q(prec);
    let lam = QSeries::lambda(prec);
    let eps = QSeries::eps(prec);
    for _ in 0..20 {
        let f = LogSeries::from_parts(
            prec,
            vec![
                manifest::random_series(prec, &mut rng),
                manifest::random_series(prec, &mut rng),
            ],
        )?;
        let dg = f.gamma().dq()?;
        let gd = f.dq()?.gamma();
        ok &= dg.agrees_with(&gd.mul_series(&q)?);
        let inner = f.dq()?.add(&f.dq()?.dq()?.mul_series(&eps.mul(&lam)?)?);
        ok &= dg.add(&gd).agrees_with(&inner.mul_series(&QSeries::one(prec).add(&q))?);
        let t1 = f.dq()?.mul_series(&q.mul(&q)?.sub(&QSeries::one(prec)).mul(&lam)?)?;
        let t2 = f
            .dq()?
            .dq()?
            .mul_series(&q.mul(&eps.mul(&eps)?)?.mul(&lam.mul(&lam)?)?)?;
        ok &= f.gamma().gamma().agrees_with(&f.add(&t1).add(&t2));
    }
    out.push(bool_report("qcalc.props", ok));

    // sigma_l phi = phi sigma_l
    let mut ok = true;
    for l in [Rat::from_int(2), Rat::new(1, 2)] {
        let f = manifest::random_series(prec, &mut rng);
        ok &= f.sigma(&l)?.frob()?.agrees_with(&f.frob()?.sigma(&l)?);
    }
    out.push(bool_report("qcalc.props", ok));

    // sigma_l gamma^m = gamma^(ml) sigma_l on lambda
    let mut ok = true;
    for l in [2i64, 4] {
        for m in [1i64, 2, -1] {
            let lhs = lam.gamma_pow(m).sigma(&Rat::from_int(l))?;
            let rhs = lam.sigma(&Rat::from_int(l))?.gamma_pow(m * l);
            ok &= lhs.agrees_with(&rhs);
        }
    }
    out.push(bool_report("qcalc.props", ok));

    Ok(out)
}

fn hyper_lf_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        let f = hyper::solution_f(prec)?;
        let h = hyper::solution_h(prec, &f)?;
        let mut out = Vec::new();
        out.push(bool_report("hyper.LF", hyper::apply_l(&f.as_log())?.is_zero()));
        out.push(bool_report("hyper.LF", hyper::apply_l(&h.log)?.is_zero()));
        out.push(bool_report("hyper.LF", hyper::apply_l(&h.alt)?.is_zero()));
        out.push(bool_report(
            "hyper.LF",
            hyper::apply_l(&h.log.sub(&h.alt))?.is_zero(),
        ));
        for r in 1..manifest::LF_TAIL_MAX {
            let tail = hyper::f_tail(&f, r)?;
            let lt = hyper::apply_l(&LogSeries::from_series(tail))?;
            let expect = qcalc::qnum_int(prec, r as i64)
                .pow(2)?
                .mul(f.coeff(r))?
                .mul(&QSeries::monomial(prec, Rat::one(), 0, r as i64 - 1)?)?;
            out.push(bool_report(
                "hyper.LF",
                lt.ell_degree() == 0 && lt.part(0).agrees_with(&expect),
            ));
        }
        Ok(out)
    });
    let mut meta = Vec::new();
    for name in ["L[F] = 0", "L[H] = 0", "L[H_alt] = 0", "L[H - H_alt] = 0"] {
        let pairs = [("check", name.to_string())];
        meta.push((case_id("hyper.LF", &pairs), pmap(&pairs), Verdict::Holds));
    }
    for r in 1..manifest::LF_TAIL_MAX {
        let pairs = [("check", "tail formula".to_string()), ("r", r.to_string())];
        meta.push((case_id("hyper.LF", &pairs), pmap(&pairs), Verdict::Holds));
    }
    indexed_cases(gen, meta)
}

fn hyper_aglem_cases(prec: Prec) -> Vec<Case> {
    let n_max = manifest::AGLEM_MAX;
    let gen: Generator = Arc::new(move || {
        (0..n_max)
            .map(|n| Ok(bool_report("hyper.aglem", hyper::aglem_check(prec, n)?)))
            .collect()
    });
    let meta = (0..n_max)
        .map(|n| {
            let pairs = [("n", n.to_string())];
            (case_id("hyper.aglem", &pairs), pmap(&pairs), Verdict::Holds)
        })
        .collect();
    indexed_cases(gen, meta)
}

fn hyper_wronskian_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        let f = hyper::solution_f(prec)?;
        let h = hyper::solution_h(prec, &f)?;
        let w = hyper::wronskian(&f, &h)?; // errors if log parts fail to cancel
        let lam_fac = QSeries::lambda(prec).mul(&QSeries::one_minus_lambda(prec))?;
        Ok(vec![
            bool_report("hyper.wronskian", true),
            bool_report(
                "hyper.wronskian",
                w.mul(&lam_fac)?.agrees_with(&QSeries::one(prec)),
            ),
        ])
    });
    let meta = ["log parts cancel", "W lambda(1-lambda) = 1"]
        .iter()
        .map(|name| {
            let pairs = [("check", name.to_string())];
            (case_id("hyper.wronskian", &pairs), pmap(&pairs), Verdict::Holds)
        })
        .collect();
    indexed_cases(gen, meta)
}

fn hyper_connection_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        let (p_mat, p_prime) = hyper::connection_matrices(prec)?;
        let f = hyper::solution_f(prec)?;
        let h = hyper::solution_h(prec, &f)?;
        let mut out = Vec::new();

        let elam = QSeries::eps(prec).mul(&QSeries::lambda(prec))?;
        let hol = |m: &hyper::Mat2| -> Result<hyper::Mat2> {
            Ok(hyper::Mat2::identity(prec).add(&m.scale_series(&elam)?))
        };
        let prod = hol(&p_mat)?.mul(&hol(&p_prime)?)?;
        out.push(bool_report(
            "hyper.connection",
            prod.agrees_with(&hyper::Mat2::identity(prec)),
        ));

        let classical = frobstruct::classical::classical_gm_matrix(prec)?;
        out.push(bool_report(
            "hyper.connection",
            p_mat.reduce_mod_eps().agrees_with(&classical),
        ));

        let v = (f.series.dq()?, f.series.clone());
        let (r1, r2) = p_prime.apply((&v.0, &v.1))?;
        out.push(bool_report(
            "hyper.connection",
            v.0.dq()?.agrees_with(&r1) && v.1.dq()?.agrees_with(&r2),
        ));

        out.push(bool_report(
            "hyper.connection",
            hyper::horizontality_check(&f.as_log())?,
        ));
        out.push(bool_report(
            "hyper.connection",
            hyper::horizontality_check(&h.log)?,
        ));
        out.push(bool_report(
            "hyper.connection",
            hyper::horizontality_check(&LogSeries::from_series(QSeries::lambda(prec)))?,
        ));

        let pres = hyper::basis_change_mprime(prec)?;
        out.push(bool_report(
            "hyper.connection",
            pres.gamma_matrix
                .reduce_mod_eps()
                .agrees_with(&hyper::Mat2::identity(prec)),
        ));
        out.push(bool_report("hyper.connection", hyper::identity_1f_check(prec)?));
        Ok(out)
    });
    let checks: &[(&str, Verdict)] = &[
        ("holonomy product is identity", Verdict::Holds),
        ("P mod eps is the classical matrix", Verdict::Holds),
        ("d_q (d_qF, F) = P' (d_qF, F)", Verdict::Holds),
        ("horizontality of F", Verdict::Holds),
        ("horizontality of H", Verdict::Holds),
        ("horizontality of lambda (negative control)", Verdict::Fails),
        ("gamma_M reduces to identity", Verdict::Holds),
        ("wronskian re-expression 1/F", Verdict::Holds),
    ];
    let meta = checks
        .iter()
        .map(|(name, expect)| {
            let pairs = [("check", name.to_string())];
            (case_id("hyper.connection", &pairs), pmap(&pairs), *expect)
        })
        .collect();
    indexed_cases(gen, meta)
}

fn hyper_classical_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        use frobstruct::classical::*;
        let f = hyper::solution_f(prec)?;
        let mut out = Vec::new();
        out.push(bool_report(
            "hyper.classical",
            f.series.reduce_mod_eps().agrees_with(&classical_f(prec)),
        ));
        let (p_mat, _) = hyper::connection_matrices(prec)?;
        out.push(bool_report(
            "hyper.classical",
            p_mat.reduce_mod_eps().agrees_with(&classical_gm_matrix(prec)?),
        ));
        let unit = frobstruct::build_unit_root(prec)?;
        let cl_ratio = classical_phi_ratio(prec)?.scale(&unit.eps_sign);
        out.push(bool_report(
            "hyper.classical",
            unit.phi_ratio.reduce_mod_eps().agrees_with(&cl_ratio),
        ));
        out.push(bool_report(
            "hyper.classical",
            unit.eta.reduce_mod_eps().agrees_with(&classical_eta(prec)?),
        ));
        Ok(out)
    });
    let meta = [
        "F mod eps",
        "P mod eps",
        "unit-root ratio mod eps",
        "eta mod eps",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("hyper.classical", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn dwork_lemma11_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for (theta, a, mu, m, s, mod_exp, expect) in manifest::lemma11_grid(prec) {
        let pairs = [
            ("theta", theta.to_string()),
            ("a", a.to_string()),
            ("mu", mu.to_string()),
            ("m", m.to_string()),
            ("s", s.to_string()),
            ("mod_exp", mod_exp.to_string()),
        ];
        cases.push(Case {
            id: case_id("dwork.lemma11", &pairs),
            params: pmap(&pairs),
            expect,
            run: Box::new(move || dwork::check_lemma11_at(prec, &theta, a, mu, m, s, mod_exp)),
        });
    }
    cases
}

fn dwork_lemma12_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for (theta, m, s) in manifest::lemma12_grid() {
        let pairs = [
            ("theta", theta.to_string()),
            ("m", m.to_string()),
            ("s", s.to_string()),
        ];
        cases.push(Case {
            id: case_id("dwork.lemma12", &pairs),
            params: pmap(&pairs),
            expect: Verdict::Holds,
            run: Box::new(move || dwork::check_lemma12(prec, &theta, m, s)),
        });
    }
    cases
}

fn dwork_cor_i_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for (a, mu, inflate, expect) in manifest::cor_i_grid(prec) {
        let pairs = [
            ("a", a.to_string()),
            ("mu", mu.to_string()),
            ("inflate", inflate.to_string()),
        ];
        cases.push(Case {
            id: case_id("dwork.cor_i", &pairs),
            params: pmap(&pairs),
            expect,
            run: Box::new(move || dwork::check_cor_i_at(prec, a, mu, inflate)),
        });
    }
    cases
}

fn dwork_cor_ii_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for (n, m, s) in manifest::cor_ii_grid(prec) {
        let pairs = [("n", n.to_string()), ("m", m.to_string()), ("s", s.to_string())];
        cases.push(Case {
            id: case_id("dwork.cor_ii", &pairs),
            params: pmap(&pairs),
            expect: Verdict::Holds,
            run: Box::new(move || dwork::check_cor_ii(prec, n, m, s)),
        });
    }
    cases
}

fn dwork_thm2_cases(prec: Prec) -> Vec<Case> {
    let family: Arc<OnceLock<std::result::Result<dwork::BFamily, CoreError>>> =
        Arc::new(OnceLock::new());
    let mut cases = Vec::new();
    for (m, s) in manifest::thm2_grid(prec) {
        let pairs = [("m", m.to_string()), ("s", s.to_string())];
        let family = Arc::clone(&family);
        cases.push(Case {
            id: case_id("dwork.thm2", &pairs),
            params: pmap(&pairs),
            expect: Verdict::Holds,
            run: Box::new(move || {
                let fam = family
                    .get_or_init(|| {
                        Ok(dwork::BFamily::constant(dwork::BSeq::a_family(
                            prec,
                            (prec.k_lam - 1) as u64,
                        )?))
                    })
                    .clone()?;
                dwork::check_thm2(prec, &fam, m, s)
            }),
        });
    }
    cases
}

fn dwork_thm3_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for (s, ideal_pow, expect) in manifest::thm3_grid(prec) {
        let pairs = [("s", s.to_string()), ("n", ideal_pow.to_string())];
        cases.push(Case {
            id: case_id("dwork.thm3", &pairs),
            params: pmap(&pairs),
            expect,
            run: Box::new(move || dwork::unit_limit_check_at(prec, s, ideal_pow)),
        });
    }
    cases
}

fn dwork_dwcor_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        let mut out = Vec::new();
        out.push(dwork::eta_and_recursion_check(prec)?);
        let eta = dwork::eta_series(prec)?;
        let h = dwork::hasse_polynomial(prec);
        let member = match eta.localized_membership(&h, 1, 2) {
            Ok(b) => bool_report("dwork.dwcor", b),
            Err(CoreError::Inconclusive(d)) => CongruenceReport::inconclusive(
                "dwork.dwcor",
                Vec::new(),
                "localized membership",
                d,
            ),
            Err(e) => return Err(e),
        };
        out.push(member);
        Ok(out)
    });
    let meta = [
        "logarithmic derivative recursion",
        "eta in R<lambda, 1/h> (evidence)",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("dwork.dwcor", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn frob_unit_root_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || frobstruct::unit_root_reports(prec));
    let meta = [
        "nabla(F e2') = 0",
        "phi-gamma cocycle on e2'",
        "eta' read off P",
        "eta' = eta F/gamma(F)",
        "phi ratio constant term is a unit",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("frob.unit_root", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn frob_a_integrality_cases(ctx: &Ctx) -> Vec<Case> {
    let prec = ctx.prec;
    let fm_cell = Arc::clone(&ctx.fm);
    let gen: Generator = Arc::new(move || {
        let (c, fm) = get_fm(&fm_cell, prec)?;
        let mut out = Vec::new();
        // compute_a re-derives and checks integrality of a and its parts
        let data = match frobstruct::compute_a(prec, &c) {
            Ok(d) => d,
            Err(CoreError::NotIntegral(detail)) => {
                let mut r = bool_report("frob.a_integrality", false);
                r.witness = Some(crate::report::Witness::Window { detail });
                for _ in 0..3 {
                    out.push(r.clone());
                }
                return Ok(out);
            }
            Err(e) => return Err(e),
        };
        out.push(bool_report("frob.a_integrality", data.a.is_p_integral()));
        out.push(bool_report(
            "frob.a_integrality",
            data.part_log1m.is_p_integral()
                && data.part_g1.is_p_integral()
                && data.part_g2.is_p_integral(),
        ));
        let b_cl = frobstruct::classical::classical_b(
            prec,
            &c.reduce_mod_eps().coeff(0, 0),
        )?;
        out.push(bool_report(
            "frob.a_integrality",
            fm.a.reduce_mod_eps().agrees_with(&b_cl),
        ));
        let f = hyper::solution_f(prec)?;
        for i_prime in manifest::g1_tail_grid(prec) {
            out.push(frobstruct::g1_tail_divisibility(prec, &f, i_prime)?);
        }
        Ok(out)
    });
    let mut meta: Vec<(String, serde_json::Map<String, serde_json::Value>, Verdict)> = [
        "a is p-integral",
        "decomposition parts are p-integral",
        "a mod eps matches the classical oracle",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (
            case_id("frob.a_integrality", &pairs),
            pmap(&pairs),
            Verdict::Holds,
        )
    })
    .collect();
    for i_prime in manifest::g1_tail_grid(prec) {
        let pairs = [("check", "G1 tail divisibility".to_string()), ("i'", i_prime.to_string())];
        meta.push((
            case_id("frob.a_integrality", &pairs),
            pmap(&pairs),
            Verdict::Holds,
        ));
    }
    indexed_cases(gen, meta)
}

fn get_fm(
    cell: &Arc<OnceLock<std::result::Result<(QSeries, FrobMprime), CoreError>>>,
    prec: Prec,
) -> Result<(QSeries, FrobMprime)> {
    cell.get_or_init(|| {
        let c = frobstruct::determine_c(prec)?;
        let fm = frobstruct::build_phi_mprime(prec, &c)?;
        Ok((c, fm))
    })
    .clone()
}

fn frob_commutation_cases(ctx: &Ctx) -> Vec<Case> {
    let prec = ctx.prec;
    let fm_cell = Arc::clone(&ctx.fm);
    let gen: Generator = Arc::new(move || {
        let (_, fm) = get_fm(&fm_cell, prec)?;
        let mut out = frobstruct::phi_mprime_reports(prec, &fm)?;
        out.extend(frobstruct::commutation_reports(prec, &fm)?);
        Ok(out)
    });
    let meta = [
        "det(phi matrix) = [p]_q",
        "gamma preserves Fil^1",
        "gamma matrix matches 1 + (q-1) D_q^log",
        "phi(Fil^1) in [p]_q M'",
        "full 2x2 commutator",
        "e2' line",
        "lambda d_q identity via Wronskian",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("frob.commutation", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn frob_determine_c_cases(prec: Prec) -> Vec<Case> {
    let gen: Generator = Arc::new(move || {
        let c = frobstruct::determine_c(prec)?;
        let data = frobstruct::compute_a(prec, &c)?;
        let b0 = data.a.coeff(0, 0);
        let b1 = data.a.coeff(1, 0);
        let target = &(&Rat::from_int(prec.p as i64) * &b0) / &Rat::from_int(2);
        let mut out = Vec::new();
        out.push(bool_report("frob.determine_c", b1 == target));
        out.push(bool_report(
            "frob.determine_c",
            c.is_zero() || c.eps_val().map_or(false, |v| v >= 1),
        ));
        let f = hyper::solution_f(prec)?;
        let fpf = f.series.mul(&f.series.frob()?)?;
        let at0 = fpf.lam_coeff_series(0);
        out.push(bool_report(
            "frob.determine_c",
            at0.coeff(0, 0) == Rat::one(),
        ));
        Ok(out)
    });
    let meta = [
        "b1 = (p/2) b0",
        "c - c0 is an eps multiple",
        "F phi(F) = 1 + eps R at lambda = 0",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("frob.determine_c", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn frob_b1_cases(ctx: &Ctx) -> Vec<Case> {
    let prec = ctx.prec;
    let fm_cell = Arc::clone(&ctx.fm);
    let gen: Generator = Arc::new(move || {
        let (_, fm) = get_fm(&fm_cell, prec)?;
        frobstruct::b1_reports(prec, &fm)
    });
    let meta = [
        "A_1 A_0^-1 p-integral",
        "A_0(0) = [[p, 0], [p b0, 1]]",
        "A_1(0) boundary values",
        "Neumann residual",
        "stable under doubled iteration count",
        "B_1 p-integral",
    ]
    .iter()
    .map(|name| {
        let pairs = [("check", name.to_string())];
        (case_id("frob.b1_solve", &pairs), pmap(&pairs), Verdict::Holds)
    })
    .collect();
    indexed_cases(gen, meta)
}

fn frob_sigma_cases(prec: Prec) -> Vec<Case> {
    let mut cases = Vec::new();
    for l in manifest::sigma_grid(prec) {
        let r_max = manifest::sigma_r_max(prec);
        let gen: Generator = {
            let l = l.clone();
            Arc::new(move || frobstruct::arithmetic_action_reports(prec, &l, r_max))
        };
        let mut meta = Vec::new();
        for r in 0..=r_max {
            let pairs = [("l", l.to_string()), ("r", r.to_string())];
            meta.push((case_id("frob.sigma", &pairs), pmap(&pairs), Verdict::Holds));
        }
        let pairs = [("l", l.to_string()), ("check", "commutes with phi".to_string())];
        meta.push((case_id("frob.sigma", &pairs), pmap(&pairs), Verdict::Holds));
        if l.is_integer() {
            let pairs = [("l", l.to_string()), ("check", "conjugation law".to_string())];
            meta.push((case_id("frob.sigma", &pairs), pmap(&pairs), Verdict::Holds));
        }
        cases.extend(indexed_cases(gen, meta));
    }
    cases
}

// ----- the runner -----

/// Resolve suite selection, run every selected suite, and return the
/// results in registry order. Case execution may be parallel; output
/// order is fixed.
pub fn run(config: &RunConfig) -> Result<Vec<SuiteResult>> {
    let prec = config.prec()?;
    let selected: Vec<&'static str> = if config.suites.iter().any(|s| s == "all") {
        SUITE_IDS.to_vec()
    } else {
        let mut picked = Vec::new();
        for want in &config.suites {
            match SUITE_IDS.iter().find(|id| *id == want) {
                Some(id) => {
                    if !picked.contains(id) {
                        picked.push(*id);
                    }
                }
                None => {
                    return Err(CoreError::InvalidParameter(format!(
                        "unknown suite {want:?}; known suites: {}",
                        SUITE_IDS.join(", ")
                    )))
                }
            }
        }
        picked
    };

    let ctx = Ctx::new(prec);
    let mut suites = Vec::new();
    for id in &selected {
        suites.push((id.to_string(), build_suite(id, &ctx)?));
    }

    let execute = || -> Result<Vec<SuiteResult>> {
        let results: Vec<(usize, Result<(CaseResult, std::time::Duration)>)> = suites
            .iter()
            .enumerate()
            .flat_map(|(si, (_, cases))| cases.iter().map(move |c| (si, c)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|(si, case)| {
                let started = Instant::now();
                let outcome = (case.run)().map(|report| {
                    (
                        CaseResult {
                            id: case.id.clone(),
                            params: case.params.clone(),
                            expect: case.expect,
                            verdict: report.verdict,
                            witness: report.witness,
                        },
                        started.elapsed(),
                    )
                });
                (*si, outcome)
            })
            .collect();

        let mut out: Vec<SuiteResult> = suites
            .iter()
            .map(|(id, _)| SuiteResult {
                id: id.clone(),
                cases: Vec::new(),
                verdict: Verdict::Holds,
                wall_time: std::time::Duration::ZERO,
            })
            .collect();
        for (si, res) in results {
            let (case_result, elapsed) = res?;
            out[si].cases.push(case_result);
            out[si].wall_time += elapsed;
        }
        for suite in &mut out {
            suite.verdict = SuiteResult::compute_verdict(&suite.cases, config.allow_inconclusive);
        }
        Ok(out)
    };

    match config.jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| CoreError::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(execute)
        }
        None => execute(),
    }
}

/// True when every suite holds (inconclusive allowed only when
/// configured).
pub fn all_hold(results: &[SuiteResult], allow_inconclusive: bool) -> bool {
    results.iter().all(|s| match s.verdict {
        Verdict::Holds => true,
        Verdict::Inconclusive => allow_inconclusive,
        Verdict::Fails => false,
    })
}

/// The serialized report: `{"config": ..., "suites": [...]}`.
pub fn report_json(config: &RunConfig, results: &[SuiteResult]) -> serde_json::Value {
    serde_json::json!({
        "config": config,
        "suites": results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        let mut config = RunConfig::new(3, 4, 4, 12);
        config.suites = vec!["nosuch".into()];
        assert!(matches!(
            run(&config),
            Err(CoreError::InvalidParameter(_))
        ));
    }

    #[test]
    fn small_run_is_deterministic_and_parallel_invariant() {
        let mut config = RunConfig::new(3, 4, 4, 12);
        config.suites = vec!["hyper.LF".into(), "hyper.wronskian".into(), "dwork.lemma12".into()];
        config.jobs = Some(1);
        let r1 = run(&config).unwrap();
        config.jobs = Some(4);
        let r2 = run(&config).unwrap();
        let j1 = serde_json::to_string(&report_json(&config, &r1)).unwrap();
        let j2 = serde_json::to_string(&report_json(&config, &r2)).unwrap();
        assert_eq!(j1, j2, "reports must not depend on parallelism");
        assert!(all_hold(&r1, false));
    }

    #[test]
    fn negative_controls_fail_as_expected() {
        let mut config = RunConfig::new(3, 6, 6, 12);
        config.suites = vec!["dwork.lemma11".into()];
        let results = run(&config).unwrap();
        let suite = &results[0];
        assert_eq!(suite.verdict, Verdict::Holds);
        let controls: Vec<_> = suite
            .cases
            .iter()
            .filter(|c| c.expect == Verdict::Fails)
            .collect();
        assert!(!controls.is_empty());
        for c in controls {
            assert_eq!(c.verdict, Verdict::Fails, "control {} must fail", c.id);
        }
    }
}
