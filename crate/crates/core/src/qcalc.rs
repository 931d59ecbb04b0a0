//! q-numbers, q-powers, and the combinatorial q-products used by the
//! congruence suite: `C_theta`, `A_theta`, cyclotomic quotients
//! `Phi_{p^m}`, the carry count `r(N, m)`, and the exponent shift
//! `theta -> theta'`.
//!
//! The operators phi, gamma, sigma_l and d_q live as methods on
//! [`QSeries`] / [`LogSeries`](crate::qseries::LogSeries); their algebra
//! (commutation laws, Leibniz rule) is exercised by the tests here.

use crate::coeff::{gen_binom, vp, Dyadic, Rat};
use crate::error::{CoreError, Result};
use crate::qseries::{eps_binomial_series, Prec, QSeries};

/// A q-number `[a]_q = (q^a - 1)/(q - 1)` together with its exponent.
#[derive(Clone, Debug)]
pub struct QNumber {
    pub exponent: Dyadic,
    pub series: QSeries,
}

/// `[a]_q = sum_{i>=1} binom(a, i) eps^(i-1)` truncated; coefficients
/// are p-integral for dyadic `a` and odd `p` (checked).
pub fn qnum(prec: Prec, a: &Dyadic) -> Result<QNumber> {
    let series = qnum_rat(prec, a.value());
    for (_, _, c) in series.iter() {
        if !vp(c, prec.p).is_at_least(0) {
            return Err(CoreError::NotIntegral(format!(
                "[{a}]_q has a non-p-integral coefficient {c}"
            )));
        }
    }
    Ok(QNumber {
        exponent: a.clone(),
        series,
    })
}

/// `[n]_q` for a plain integer exponent.
pub fn qnum_int(prec: Prec, n: i64) -> QSeries {
    qnum_rat(prec, &Rat::from_int(n))
}

fn qnum_rat(prec: Prec, a: &Rat) -> QSeries {
    let mut out = QSeries::zero(prec);
    for i in 0..prec.m_eps as u64 {
        let c = gen_binom(a, i + 1);
        if !c.is_zero() {
            out = out.add(&QSeries::monomial(prec, c, i as u32, 0).unwrap());
        }
    }
    out
}

/// `q^a = (1+eps)^a` truncated.
pub fn qpow(prec: Prec, a: &Dyadic) -> QSeries {
    eps_binomial_series(prec, a.value())
}

pub fn qpow_int(prec: Prec, n: i64) -> QSeries {
    eps_binomial_series(prec, &Rat::from_int(n))
}

/// The step function rho: 0 for `x <= 0`, 1 for `x > 0`.
pub fn rho(x: &Rat) -> u32 {
    if x.is_negative() || x.is_zero() {
        0
    } else {
        1
    }
}

/// `(-1)^((p-1)/2)`, the sign in the classical unit-root Frobenius.
pub fn eps_sign(p: u32) -> Rat {
    if ((p - 1) / 2) % 2 == 0 {
        Rat::one()
    } else {
        Rat::from_int(-1)
    }
}

/// `C_theta(n) = prod_{nu < n} [theta + nu]_q`. Errors on a zero factor.
pub fn c_theta(prec: Prec, theta: &Dyadic, n: u64) -> Result<QSeries> {
    let mut acc = QSeries::one(prec);
    for nu in 0..n {
        let t = theta.add_int(nu as i64);
        if t.is_zero() {
            return Err(CoreError::ZeroFactor(format!(
                "[{theta} + {nu}]_q vanishes"
            )));
        }
        acc = acc.mul(&qnum_rat(prec, t.value()))?;
    }
    Ok(acc)
}

/// `A_(1/2)(n) = C_(1/2)(n) / C_1(n)`, computed over `Q`. All
/// coefficients must come out p-integral; a violation signals a bug.
pub fn a_theta_half(prec: Prec, n: u64) -> Result<QSeries> {
    Ok(a_half_prefix(prec, n)?.pop().unwrap())
}

/// The prefix `A_(1/2)(0), ..., A_(1/2)(n_max)` as a running product.
pub fn a_half_prefix(prec: Prec, n_max: u64) -> Result<Vec<QSeries>> {
    let half = Dyadic::half();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = QSeries::one(prec);
    out.push(acc.clone());
    for i in 0..n_max {
        let num = qnum_rat(prec, half.add_int(i as i64).value());
        let den = qnum_int(prec, i as i64 + 1);
        acc = acc.mul(&num)?.mul(&den.invert()?)?;
        if let Some(d) = acc.integrality_scan() {
            return Err(CoreError::NotIntegral(format!(
                "A_(1/2)({}) coefficient at eps^{} has vp = {}",
                i + 1,
                d.eps_exp,
                d.actual
            )));
        }
        out.push(acc.clone());
    }
    Ok(out)
}

/// Hypergeometric coefficients `a_n = A_(1/2)(n)^2` for `n <= n_max`.
pub fn a_coeffs(prec: Prec, n_max: u64) -> Result<Vec<QSeries>> {
    a_half_prefix(prec, n_max)?
        .into_iter()
        .map(|s| s.mul(&s.clone()))
        .collect()
}

/// `Phi_{p^m}(q) = (q^{p^m} - 1) / (q^{p^(m-1)} - 1)` by exact division.
pub fn cyclotomic_q(prec: Prec, m: u32) -> Result<QSeries> {
    if m < 1 {
        return Err(CoreError::InvalidParameter("cyclotomic_q needs m >= 1".into()));
    }
    let p = prec.p as i64;
    let num = qpow_int(prec, p.pow(m)).sub(&QSeries::one(prec));
    let den = qpow_int(prec, p.pow(m - 1)).sub(&QSeries::one(prec));
    num.div_exact(&den)
}

/// Closed form of the carry count `r(N, m)`: write `N = b + p^m c` with
/// `0 <= b < p^m`; the count is 1 iff `b >= (p^m + 1)/2`.
pub fn r_count(p: u32, n: u64, m: u32) -> u8 {
    assert!(m >= 1);
    let pm = (p as u64).pow(m);
    let b = n % pm;
    u8::from(b >= (pm + 1) / 2)
}

/// Counting definition of `r(N, m)`, used as a brute-force oracle:
/// `#{i < N : v_p(1/2 + i) >= m} - #{1 <= i <= N : v_p(i) >= m}`.
/// The integer set runs over the factors `i + 1` of `C_1(N)`, matching
/// the product it measures.
pub fn r_count_enumeration(p: u32, n: u64, m: u32) -> i64 {
    let pm = (p as u64).pow(m);
    let mut halves = 0i64;
    let mut ints = 0i64;
    for i in 0..n {
        // v_p(1/2 + i) = v_p(2i + 1) for odd p
        if (2 * i + 1) % pm == 0 {
            halves += 1;
        }
        if (i + 1) % pm == 0 {
            ints += 1;
        }
    }
    halves - ints
}

/// The unique dyadic `theta'` with `p theta' - theta` an ordinary
/// integer in `[0, p-1]`.
pub fn theta_prime(p: u32, theta: &Dyadic) -> Result<Dyadic> {
    if theta.is_nonpositive_integer() {
        return Err(CoreError::InvalidParameter(format!(
            "theta = {theta} must not be zero or a negative integer"
        )));
    }
    let pr = Rat::from_int(p as i64);
    for c in 0..p as i64 {
        let cand = (theta.value() + &Rat::from_int(c)) / pr.clone();
        if let Ok(d) = Dyadic::new(cand) {
            return Ok(d);
        }
    }
    Err(CoreError::NoThetaPrime {
        theta: theta.to_string(),
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::LogSeries;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn prec() -> Prec {
        Prec::new(3, 6, 6, 24).unwrap()
    }

    fn rand_dyadic(rng: &mut impl Rng) -> Dyadic {
        let n = rng.gen_range(-16i64..=16);
        let k = rng.gen_range(0u32..3);
        Dyadic::new(Rat::new(n, 1 << k)).unwrap()
    }

    #[test]
    fn qnum_examples() {
        let p = prec();
        assert!(qnum(p, &Dyadic::from_int(0)).unwrap().series.is_zero());
        let q2 = qnum(p, &Dyadic::from_int(2)).unwrap().series;
        assert_eq!(q2.coeff(0, 0), Rat::from_int(2));
        assert_eq!(q2.coeff(1, 0), Rat::one());
        assert_eq!(q2.num_terms(), 2);

        // [1/2]_q = 1/2 - eps/8 + eps^2/16 - ...
        let qh = qnum(p, &Dyadic::half()).unwrap().series;
        assert_eq!(qh.coeff(0, 0), Rat::new(1, 2));
        assert_eq!(qh.coeff(1, 0), Rat::new(-1, 8));
        assert_eq!(qh.coeff(2, 0), Rat::new(1, 16));

        // positive integer: equals 1 + q + ... + q^(a-1)
        let a = 5i64;
        let mut direct = QSeries::zero(p);
        for k in 0..a {
            direct = direct.add(&qpow_int(p, k));
        }
        assert!(qnum_int(p, a).agrees_with(&direct));
    }

    #[test]
    fn qpow_examples() {
        let p = prec();
        assert!(qpow_int(p, 0).agrees_with(&QSeries::one(p)));
        assert!(qpow_int(p, 1).agrees_with(&QSeries::q(p)));
        let half = qpow(p, &Dyadic::half());
        assert!(half.mul(&half).unwrap().agrees_with(&QSeries::q(p)));
    }

    #[test]
    fn qnum_addition_law() {
        // [a+b]_q = [a]_q + q^a [b]_q
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        for _ in 0..50 {
            let a = rand_dyadic(&mut rng);
            let b = rand_dyadic(&mut rng);
            let ab = Dyadic::new(a.value() + b.value()).unwrap();
            let lhs = qnum_rat(p, ab.value());
            let rhs = qnum_rat(p, a.value())
                .add(&qpow(p, &a).mul(&qnum_rat(p, b.value())).unwrap());
            assert!(lhs.agrees_with(&rhs), "a = {a}, b = {b}");
        }
    }

    #[test]
    fn qnum_frobenius_law() {
        // [ap]_q = [p]_q phi([a]_q)
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        for _ in 0..20 {
            let a = rand_dyadic(&mut rng);
            let ap = Rat::from_int(p.p as i64) * a.value().clone();
            let lhs = qnum_rat(p, &ap);
            let rhs = qnum_int(p, p.p as i64)
                .mul(&qnum_rat(p, a.value()).frob().unwrap())
                .unwrap();
            assert!(lhs.agrees_with(&rhs), "a = {a}");
        }
    }

    #[test]
    fn qnum_p_power_ideal() {
        let p = prec();
        for n in 1..=3u32 {
            let q = qnum_int(p, (p.p as i64).pow(n));
            assert!(q.in_ideal_pow(n).unwrap(), "[p^{n}]_q in (p, eps)^{n}");
        }
    }

    #[test]
    fn gamma_phi_commute() {
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        for _ in 0..20 {
            let f = crate::qseries::tests::random_series(p, &mut rng, false);
            let gf = f.gamma().frob().unwrap();
            let fg = f.frob().unwrap().gamma();
            assert!(gf.agrees_with(&fg));
        }
        // and on the log symbol
        let ell = LogSeries::ell(p).unwrap();
        assert!(ell.gamma().frob().unwrap().agrees_with(&ell.frob().unwrap().gamma()));
    }

    #[test]
    fn dq_phi_twist() {
        // d_q phi = [p]_q lambda^(p-1) phi d_q
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(53);
        let twist = qnum_int(p, p.p as i64)
            .mul(&QSeries::monomial(p, Rat::one(), 0, (p.p - 1) as i64).unwrap())
            .unwrap();
        for _ in 0..20 {
            let f = crate::qseries::tests::random_series(p, &mut rng, false);
            let lhs = f.frob().unwrap().dq().unwrap();
            let rhs = twist.mul(&f.dq().unwrap().frob().unwrap()).unwrap();
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn q_leibniz() {
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(59);
        for _ in 0..20 {
            let x = crate::qseries::tests::random_series(p, &mut rng, false);
            let y = crate::qseries::tests::random_series(p, &mut rng, false);
            let lhs = x.mul(&y).unwrap().dq().unwrap();
            let rhs = x
                .dq()
                .unwrap()
                .mul(&y.gamma())
                .unwrap()
                .add(&x.mul(&y.dq().unwrap()).unwrap());
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn gamma_dq_operator_identities() {
        // (i) d_q gamma = q gamma d_q
        // (ii) d_q gamma + gamma d_q = (1+q)(d_q + (q-1) lambda d_q^2)
        // (iii) gamma^2 = 1 + (q^2-1) lambda d_q + q (q-1)^2 lambda^2 d_q^2
        let p = prec();
        let q = QSeries::q(p);
        let lam = QSeries::lambda(p);
        let eps = QSeries::eps(p);
        let mut rng = ChaCha12Rng::seed_from_u64(61);
        for _ in 0..20 {
            let f0 = crate::qseries::tests::random_series(p, &mut rng, false);
            let f = LogSeries::from_parts(p, vec![f0.clone(), crate::qseries::tests::random_series(p, &mut rng, false)]).unwrap();

            let dg = f.gamma().dq().unwrap();
            let gd = f.dq().unwrap().gamma();
            assert!(dg.agrees_with(&gd.mul_series(&q).unwrap()), "(i)");

            let lhs2 = dg.add(&gd);
            let inner = f
                .dq()
                .unwrap()
                .add(&f.dq().unwrap().dq().unwrap().mul_series(&eps.mul(&lam).unwrap()).unwrap());
            let rhs2 = inner.mul_series(&QSeries::one(p).add(&q)).unwrap();
            assert!(lhs2.agrees_with(&rhs2), "(ii)");

            let lhs3 = f.gamma().gamma();
            let t1 = f
                .dq()
                .unwrap()
                .mul_series(&q.mul(&q).unwrap().sub(&QSeries::one(p)).mul(&lam).unwrap())
                .unwrap();
            let lam2 = lam.mul(&lam).unwrap();
            let t2 = f
                .dq()
                .unwrap()
                .dq()
                .unwrap()
                .mul_series(&q.mul(&eps.mul(&eps).unwrap()).unwrap().mul(&lam2).unwrap())
                .unwrap();
            let rhs3 = f.add(&t1).add(&t2);
            assert!(lhs3.agrees_with(&rhs3), "(iii)");
        }
    }

    #[test]
    fn sigma_examples() {
        let p = prec();
        let q = QSeries::q(p);
        let two = Rat::from_int(2);
        assert!(q.sigma(&two).unwrap().agrees_with(&q.mul(&q).unwrap()));
        let lam = QSeries::lambda(p);
        assert!(lam.sigma(&two).unwrap().agrees_with(&lam));
        // composite exponent law within the eps window
        let mut rng = ChaCha12Rng::seed_from_u64(67);
        let f = crate::qseries::tests::random_series(p, &mut rng, false);
        let back = f.sigma(&two).unwrap().sigma(&Rat::new(1, 2)).unwrap();
        assert!(back.agrees_with(&f));
        // vp(l) != 0 rejected
        assert!(f.sigma(&Rat::from_int(3)).is_err());
    }

    #[test]
    fn sigma_phi_commute() {
        let p = prec();
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        for l in [Rat::from_int(2), Rat::new(1, 2), Rat::from_int(4)] {
            let f = crate::qseries::tests::random_series(p, &mut rng, false);
            let lhs = f.sigma(&l).unwrap().frob().unwrap();
            let rhs = f.frob().unwrap().sigma(&l).unwrap();
            assert!(lhs.agrees_with(&rhs));
        }
    }

    #[test]
    fn sigma_gamma_conjugation() {
        // sigma_l gamma^m = gamma^(m l) sigma_l on lambda for integers l, m
        let p = prec();
        let lam = QSeries::lambda(p);
        for l in [2i64, 4] {
            for m in [1i64, 2, -1] {
                let lhs = lam.gamma_pow(m).sigma(&Rat::from_int(l)).unwrap();
                let rhs = lam.sigma(&Rat::from_int(l)).unwrap().gamma_pow(m * l);
                assert!(lhs.agrees_with(&rhs), "l = {l}, m = {m}");
            }
        }
    }

    #[test]
    fn c_theta_examples() {
        let p = prec();
        let half = Dyadic::half();
        assert!(c_theta(p, &half, 0).unwrap().agrees_with(&QSeries::one(p)));
        assert!(c_theta(p, &half, 1)
            .unwrap()
            .agrees_with(&qnum(p, &half).unwrap().series));
        // C_1(n) mod eps = n!
        let c = c_theta(p, &Dyadic::from_int(1), 5).unwrap();
        assert_eq!(c.coeff(0, 0), Rat::from_int(120));
        // zero factor
        assert!(c_theta(p, &Dyadic::from_int(-2), 4).is_err());
    }

    #[test]
    fn a_half_examples() {
        let p = prec();
        assert!(a_theta_half(p, 0).unwrap().agrees_with(&QSeries::one(p)));
        assert!(a_theta_half(p, 1)
            .unwrap()
            .agrees_with(&qnum(p, &Dyadic::half()).unwrap().series));
        // a_n = A(n)^2 reduces to the classical coefficients
        let coeffs = a_coeffs(p, 4).unwrap();
        let mut classical = Rat::one();
        for n in 0..=4u64 {
            assert_eq!(coeffs[n as usize].coeff(0, 0), classical, "n = {n}");
            let i = Rat::from_int(n as i64);
            let num = &i + &Rat::new(1, 2);
            let den = &i + &Rat::one();
            classical = classical * (&num / &den).pow(2);
        }
    }

    #[test]
    fn cyclotomic_examples() {
        let p = prec();
        let phi1 = cyclotomic_q(p, 1).unwrap();
        assert!(phi1.agrees_with(&qnum_int(p, 3)));
        let phi2 = cyclotomic_q(p, 2).unwrap();
        assert!(phi1.mul(&phi2).unwrap().agrees_with(&qnum_int(p, 9)));
        assert_eq!(phi2.coeff(0, 0), Rat::from_int(3));
        let phi3 = cyclotomic_q(p, 3).unwrap();
        assert_eq!(phi3.coeff(0, 0), Rat::from_int(3));
    }

    #[test]
    fn r_count_examples_and_oracle() {
        assert_eq!(r_count(3, 0, 1), 0);
        assert_eq!(r_count(3, 3, 1), 0);
        assert_eq!(r_count(3, 2, 1), 1); // (p+1)/2 = 2
        for p in [3u32, 5] {
            for m in 1..=3u32 {
                for n in 0..(p as u64).pow(3) {
                    assert_eq!(
                        r_count(p, n, m) as i64,
                        r_count_enumeration(p, n, m),
                        "p = {p}, n = {n}, m = {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn theta_prime_examples() {
        let one = Dyadic::from_int(1);
        let half = Dyadic::half();
        for p in [3u32, 5, 7] {
            assert_eq!(theta_prime(p, &one).unwrap(), one);
            assert_eq!(theta_prime(p, &half).unwrap(), half);
        }
        // p = 5, theta = 2: brute scan over dyadics gives theta' = 1
        assert_eq!(theta_prime(5, &Dyadic::from_int(2)).unwrap(), Dyadic::from_int(1));
        assert!(theta_prime(5, &Dyadic::from_int(0)).is_err());
    }

    #[test]
    fn rho_and_sign() {
        assert_eq!(rho(&Rat::from_int(-1)), 0);
        assert_eq!(rho(&Rat::zero()), 0);
        assert_eq!(rho(&Rat::new(1, 2)), 1);
        assert_eq!(eps_sign(3), Rat::from_int(-1));
        assert_eq!(eps_sign(5), Rat::one());
        assert_eq!(eps_sign(7), Rat::from_int(-1));
    }
}
