//! Versioned default parameter grids: one place fixing exactly which
//! cases a full run covers for a given configuration, so reports are
//! reproducible.

use rand::Rng;

use crate::coeff::{Dyadic, Rat};
use crate::qseries::{Prec, QSeries};
use crate::report::Verdict;

pub const MANIFEST_VERSION: &str = "1";

/// Seed and batch size for the randomized operator-law checks.
pub const PROP_SEED: u64 = 0x7_1C0F_FEE;
pub const PROP_SAMPLES: usize = 50;

/// Tail orders checked for the `L[F_(>=r)]` formula.
pub const LF_TAIL_MAX: usize = 10;

/// Summation-identity depth.
pub const AGLEM_MAX: usize = 20;

pub const QCALC_CHECKS: &[&str] = &[
    "addition law",
    "frobenius law",
    "p-power ideal membership",
    "gamma-phi commutation",
    "dq-phi twist",
    "q-leibniz",
    "gamma-dq operator identities",
    "sigma-phi commutation",
    "sigma-gamma conjugation",
];

pub fn random_dyadic(rng: &mut impl Rng) -> Dyadic {
    let n = rng.gen_range(-16i64..=16);
    let k = rng.gen_range(0u32..3);
    Dyadic::new(Rat::new(n, 1 << k)).expect("power-of-two denominator")
}

pub fn random_series(prec: Prec, rng: &mut impl Rng) -> QSeries {
    let mut out = QSeries::zero(prec);
    let hi = 6.min(prec.k_lam - 1);
    for _ in 0..8 {
        let i = rng.gen_range(0..prec.m_eps.min(4));
        let j = rng.gen_range(0..=hi);
        let num = rng.gen_range(-9i64..=9);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1i64..=9);
        out = out.add(&QSeries::monomial(prec, Rat::new(num, den), i, j).unwrap());
    }
    out
}

/// `(theta, a, mu, m, s, modulus exponent, expected verdict)`; the last
/// row is the negative control at an inflated modulus.
pub fn lemma11_grid(prec: Prec) -> Vec<(Dyadic, u64, u64, u64, u32, u32, Verdict)> {
    let p = prec.p as u64;
    let mut grid = Vec::new();
    for theta in [Dyadic::half(), Dyadic::from_int(1)] {
        for a in [0, (p + 1) / 2, p - 1] {
            for mu in [1u64, 2] {
                for m in [1u64, 2] {
                    for s in [1u32, 2] {
                        grid.push((theta.clone(), a, mu, m, s, s + 1, Verdict::Holds));
                    }
                }
            }
        }
    }
    grid.push((Dyadic::half(), (p + 1) / 2, 1, 1, 1, 3, Verdict::Fails));
    grid
}

pub fn lemma12_grid() -> Vec<(Dyadic, u64, u32)> {
    let mut grid = Vec::new();
    for theta in [Dyadic::half(), Dyadic::from_int(1)] {
        for m in [1u64, 2] {
            for s in [1u32, 2] {
                grid.push((theta.clone(), m, s));
            }
        }
    }
    grid
}

/// `(a, mu, modulus inflation, expected verdict)`.
pub fn cor_i_grid(prec: Prec) -> Vec<(u64, u64, u32, Verdict)> {
    let p = prec.p as u64;
    let mut grid = Vec::new();
    for a in (p - 1) / 2 + 1..p {
        for mu in 0..10u64 {
            grid.push((a, mu, 0, Verdict::Holds));
        }
    }
    grid.push(((p + 1) / 2, 1, 1, Verdict::Fails));
    grid
}

pub fn cor_ii_grid(prec: Prec) -> Vec<(u64, u64, u32)> {
    let p = prec.p as u64;
    let n_max = (3 * p * p).min(60);
    let mut grid = Vec::new();
    for n in 0..n_max {
        for m in 0..=2u64 {
            for s in 0..=2u32 {
                grid.push((n, m, s));
            }
        }
    }
    grid
}

/// Pairs `(m, s)` that fit the lambda window.
pub fn thm2_grid(prec: Prec) -> Vec<(u64, u32)> {
    let p = prec.p as i64;
    let mut grid = Vec::new();
    for m in [0i64, 1] {
        for s in [0u32, 1] {
            if (m + 1) * p.pow(s + 1) <= prec.k_lam {
                grid.push((m as u64, s));
            }
        }
    }
    grid
}

/// `(s, ideal power, expected verdict)`; includes one inflated-power
/// negative control when the window allows it.
pub fn thm3_grid(prec: Prec) -> Vec<(u32, u32, Verdict)> {
    let p = prec.p as i64;
    let mut grid = Vec::new();
    for s in 0..=2u32 {
        if p.pow(s + 2) <= prec.k_lam && s + 1 <= prec.n_p.min(prec.m_eps) {
            grid.push((s, s + 1, Verdict::Holds));
        }
    }
    if p.pow(2) <= prec.k_lam && 2 <= prec.n_p.min(prec.m_eps) {
        grid.push((0, 2, Verdict::Fails));
    }
    grid
}

pub fn g1_tail_grid(prec: Prec) -> Vec<u64> {
    let hi = ((prec.k_lam / prec.p as i64) as u64).min(10);
    (1..=hi).collect()
}

pub fn sigma_grid(prec: Prec) -> Vec<Rat> {
    vec![
        Rat::one(),
        Rat::from_int(2),
        Rat::from_int(1 + prec.p as i64),
    ]
}

pub fn sigma_r_max(prec: Prec) -> u32 {
    2.min(prec.n_p.saturating_sub(1)).min(prec.m_eps.saturating_sub(1))
}
