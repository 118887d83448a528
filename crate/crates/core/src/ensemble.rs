//! Closed-form finite-length statistics of the Bernoulli ensemble
//! `B(m, n, k)`: every entry of an `m x n` parity-check matrix is 1 with
//! probability `p = k / n`, independently. `k = n / 2` is the uniform
//! (random) ensemble.
//!
//! All quantities are nonnegative and are evaluated as [`LogReal`]s, since
//! factors like `((1 + z^w) / 2)^m` leave double range for moderate `m`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::channel::Bsc;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::logreal::LogReal;
use crate::math::{self, LnBinomialTable, LN_2};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BernoulliEnsemble {
    m: u32,
    n: u32,
    k: f64,
    random: bool,
    /// `ln z` with `z = 1 - 2k/n`; unused when `random`.
    ln_z: f64,
}

impl BernoulliEnsemble {
    pub fn new(m: u32, n: u32, k: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::EmptyMatrix { rows: m as usize, cols: n as usize });
        }
        let half = f64::from(n) / 2.0;
        if !(k > 0.0 && k <= half) {
            return Err(Error::InvalidRowWeight { k, n });
        }
        let random = k == half;
        let p = k / f64::from(n);
        let ln_z = if random { f64::NEG_INFINITY } else { math::ln_1p(-2.0 * p) };
        Ok(BernoulliEnsemble { m, n, k, random, ln_z })
    }

    /// The uniform ensemble `R(m, n) = B(m, n, n/2)`.
    pub fn random(m: u32, n: u32) -> Result<Self> {
        Self::new(m, n, f64::from(n) / 2.0)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.k / f64::from(self.n)
    }

    pub fn z(&self) -> f64 {
        if self.random {
            0.0
        } else {
            math::exp(self.ln_z)
        }
    }

    pub fn is_random(&self) -> bool {
        self.random
    }

    fn check_weight(&self, w: u32) -> Result<()> {
        if w > self.n {
            Err(Error::WeightOutOfRange { weight: w, n: self.n })
        } else {
            Ok(())
        }
    }

    fn kernel(&self) -> Kernel {
        Kernel::new(self)
    }

    /// `E[A_w] = ((1 + z^w) / 2)^m C(n, w)`.
    pub fn avg_weight(&self, w: u32) -> Result<LogReal> {
        self.check_weight(w)?;
        Ok(self.kernel().avg_weight(w))
    }

    /// `E[P_U] = sum_{w >= 1} E[A_w] eps^w (1 - eps)^(n - w)`.
    pub fn avg_pu(&self, ch: &Bsc) -> LogReal {
        let kern = self.kernel();
        let terms: Vec<LogReal> = (1..=self.n)
            .map(|w| kern.avg_weight(w) * LogReal::from_ln(ch.ln_pattern_prob(self.n, w)))
            .collect();
        let sum = LogReal::sum_slice(&terms);
        if self.random {
            let closed = avg_pu_random_closed_form(self.m, self.n, ch);
            debug_assert!(
                sum.relative_difference(closed) <= 1e-12,
                "summation {sum:?} disagrees with closed form {closed:?}"
            );
        }
        sum
    }

    /// `Pr[H x^t = 0, H y^t = 0]` for weights `w1`, `w2` with support overlap `v`.
    pub fn joint_pass_prob(&self, w1: u32, w2: u32, v: u32) -> Result<LogReal> {
        self.check_weight(w1)?;
        self.check_weight(w2)?;
        let (lo, hi) = overlap_range(self.n, w1, w2);
        if v < lo || v > hi {
            return Err(Error::OverlapOutOfRange { w1, w2, v, lo, hi });
        }
        Ok(self.kernel().joint_pass(w1, w2, v))
    }

    /// `E[A_{w1} A_{w2}]`.
    pub fn second_moment_weight(&self, w1: u32, w2: u32) -> Result<LogReal> {
        self.check_weight(w1)?;
        self.check_weight(w2)?;
        Ok(self.kernel().second_moment(w1, w2))
    }

    /// `Cov(A_{w1}, A_{w2})`. Zero whenever either weight is 0, since `A_0 = 1`.
    pub fn cov_weight(&self, w1: u32, w2: u32) -> Result<LogReal> {
        self.check_weight(w1)?;
        self.check_weight(w2)?;
        Ok(self.kernel().cov(w1, w2))
    }

    /// Covariance by the overlap sum even for the uniform ensemble, where the
    /// sum runs with `z = 0` instead of dispatching to the diagonal form.
    pub fn cov_weight_overlap_sum(&self, w1: u32, w2: u32) -> Result<LogReal> {
        self.check_weight(w1)?;
        self.check_weight(w2)?;
        Ok(self.kernel().cov_overlap_sum(w1, w2))
    }

    /// `Var[P_U]`, the double sum of covariances against pattern probabilities.
    pub fn var_pu(&self, ch: &Bsc) -> LogReal {
        let kern = self.kernel();
        let rows: Vec<LogReal> = (1..=self.n).map(|w1| kern.var_pu_row(ch, w1)).collect();
        let sum = LogReal::sum_slice(&rows);
        if self.random {
            let closed = var_pu_random_closed_form(self.m, self.n, ch);
            debug_assert!(
                sum.relative_difference(closed) <= 1e-12,
                "double sum {sum:?} disagrees with closed form {closed:?}"
            );
        }
        sum
    }

    /// Row `w1` of the variance double sum, folded over `w2 >= w1` with the
    /// off-diagonal terms doubled. Rows may be computed independently and
    /// merged with [`LogReal::sum_slice`].
    pub fn var_pu_row(&self, ch: &Bsc, w1: u32) -> Result<LogReal> {
        if w1 == 0 {
            return Ok(LogReal::ZERO);
        }
        self.check_weight(w1)?;
        Ok(self.kernel().var_pu_row(ch, w1))
    }

    /// Variance of `X = sum_w alpha(w) A_w`.
    pub fn var_linear_statistic(&self, stat: &LinearStatistic) -> Result<f64> {
        if stat.alpha.len() != self.n as usize + 1 {
            return Err(Error::DimensionMismatch { expected: self.n as usize + 1, actual: stat.alpha.len() });
        }
        let kern = self.kernel();
        let mut acc = math::CompensatedSum::default();
        for w1 in 1..=self.n {
            let a1 = stat.alpha[w1 as usize];
            if a1 == 0.0 {
                continue;
            }
            for w2 in 1..=self.n {
                let a2 = stat.alpha[w2 as usize];
                if a2 != 0.0 {
                    acc.add(kern.cov(w1, w2).to_f64() * a1 * a2);
                }
            }
        }
        Ok(acc.value())
    }

    /// `(1/n) log2 E[P_U]`. The uniform ensemble uses the closed form, whose
    /// logarithm `-m + log2(1 - (1 - eps)^n)` is free of the rounding of a
    /// log-domain sum.
    pub fn finite_n_exponent(&self, ch: &Bsc) -> f64 {
        let log2 = if self.random {
            avg_pu_random_closed_form(self.m, self.n, ch).log2()
        } else {
            self.avg_pu(ch).log2()
        };
        log2 / f64::from(self.n)
    }
}

/// Coefficients `alpha(0..=n)` of a linear statistic of the weight distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearStatistic {
    alpha: Vec<f64>,
}

impl LinearStatistic {
    pub fn new(alpha: Vec<f64>) -> Self {
        LinearStatistic { alpha }
    }

    pub fn from_fn(n: u32, f: impl FnMut(u32) -> f64) -> Self {
        LinearStatistic { alpha: (0..=n).map(f).collect() }
    }

    /// The statistic whose value is `P_U`.
    pub fn undetected_error_prob(n: u32, ch: &Bsc) -> Self {
        Self::from_fn(n, |w| if w == 0 { 0.0 } else { math::exp(ch.ln_pattern_prob(n, w)) })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }
}

/// Feasible overlaps `[max(0, w1 + w2 - n), min(w1, w2)]`.
pub fn overlap_range(n: u32, w1: u32, w2: u32) -> (u32, u32) {
    ((w1 + w2).saturating_sub(n), w1.min(w2))
}

/// `E[P_U] = 2^-m (1 - (1 - eps)^n)` for the uniform ensemble.
pub fn avg_pu_random_closed_form(m: u32, n: u32, ch: &Bsc) -> LogReal {
    let tail = -math::exp_m1(f64::from(n) * math::ln_1p(-ch.eps()));
    LogReal::from_log2(-f64::from(m) + math::log2(tail))
}

/// `Var[P_U] = (1 - 2^-m) 2^-m ((eps^2 + (1-eps)^2)^n - (1-eps)^(2n))` for
/// the uniform ensemble.
pub fn var_pu_random_closed_form(m: u32, n: u32, ch: &Bsc) -> LogReal {
    let e = ch.eps();
    let n = f64::from(n);
    // (1-e)^(2n) * expm1(n ln(1 + e^2/(1-e)^2))
    let ratio = (e / (1.0 - e)) * (e / (1.0 - e));
    let ln_diff = 2.0 * n * math::ln_1p(-e) + math::ln(math::exp_m1(n * math::ln_1p(ratio)));
    let ln_pref = -f64::from(m) * LN_2 + math::ln_1p(-math::exp2(-f64::from(m)));
    LogReal::from_ln(ln_pref + ln_diff)
}

/// Exact `((1 + z^w1 + z^w2 + z^(w1+w2-2v)) / 4)^m` for rational `k`.
pub fn joint_pass_prob_exact(m: u32, n: u32, k: &Rational, w1: u32, w2: u32, v: u32) -> Result<Rational> {
    let (lo, hi) = overlap_range(n, w1, w2);
    if w1 > n || w2 > n {
        return Err(Error::WeightOutOfRange { weight: w1.max(w2), n });
    }
    if v < lo || v > hi {
        return Err(Error::OverlapOutOfRange { w1, w2, v, lo, hi });
    }
    let one = BigRational::one();
    let z = &one - BigRational::from_integer(BigInt::from(2)) * k / BigRational::from_integer(BigInt::from(n));
    let zp = |e: u32| num_traits::pow(z.clone(), e as usize);
    let base = (&one + zp(w1) + zp(w2) + zp(w1 + w2 - 2 * v)) / BigRational::from_integer(BigInt::from(4));
    Ok(num_traits::pow(base, m as usize))
}

/// Exact `((1 + z^w) / 2)^m C(n, w)` for rational `k`.
pub fn avg_weight_exact(m: u32, n: u32, k: &Rational, w: u32) -> Rational {
    if w > n {
        return Rational::zero();
    }
    let one = BigRational::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let z = &one - &two * k / BigRational::from_integer(BigInt::from(n));
    let even = (&one + num_traits::pow(z, w as usize)) / two;
    num_traits::pow(even, m as usize) * BigRational::from_integer(crate::exact::binomial(u64::from(n), u64::from(w)).into())
}

/// Per-call precomputation: log binomials and powers of `z`.
struct Kernel {
    m: f64,
    n: u32,
    random: bool,
    ln_z: f64,
    lnc: LnBinomialTable,
    /// `ln(1 + z^e)` for `e` in `0..=n`
    ln_1p_z: Vec<f64>,
}

impl Kernel {
    fn new(ens: &BernoulliEnsemble) -> Self {
        let mut k = Kernel {
            m: f64::from(ens.m),
            n: ens.n,
            random: ens.random,
            ln_z: ens.ln_z,
            lnc: LnBinomialTable::new(ens.n),
            ln_1p_z: Vec::new(),
        };
        k.ln_1p_z = (0..=ens.n).map(|e| math::ln_1p(k.z_pow(e))).collect();
        k
    }

    #[inline]
    fn z_pow(&self, e: u32) -> f64 {
        if self.random {
            if e == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            math::exp(f64::from(e) * self.ln_z)
        }
    }

    #[inline]
    fn ln_count(&self, w1: u32, w2: u32, v: u32) -> f64 {
        self.lnc.get(self.n, w1) + self.lnc.get(w1, v) + self.lnc.get(self.n - w1, w2 - v)
    }

    fn avg_weight(&self, w: u32) -> LogReal {
        LogReal::from_ln(self.m * (self.ln_1p_z[w as usize] - LN_2) + self.lnc.get(self.n, w))
    }

    fn joint_pass(&self, w1: u32, w2: u32, v: u32) -> LogReal {
        let s = 1.0 + self.z_pow(w1) + self.z_pow(w2) + self.z_pow(w1 + w2 - 2 * v);
        LogReal::from_ln(self.m * (math::ln(s) - 2.0 * LN_2))
    }

    fn second_moment(&self, w1: u32, w2: u32) -> LogReal {
        let (w1, w2) = (w1.min(w2), w1.max(w2));
        let (lo, hi) = overlap_range(self.n, w1, w2);
        let terms: Vec<LogReal> = (lo..=hi)
            .map(|v| LogReal::from_ln(self.ln_count(w1, w2, v)) * self.joint_pass(w1, w2, v))
            .collect();
        LogReal::sum_slice(&terms)
    }

    fn cov(&self, w1: u32, w2: u32) -> LogReal {
        if w1 == 0 || w2 == 0 {
            return LogReal::ZERO;
        }
        if self.random {
            return self.cov_random(w1, w2);
        }
        self.cov_overlap_sum(w1, w2)
    }

    /// Diagonal form for the uniform ensemble: `2^-2m C(n, w) (2^m - 1)` on
    /// the diagonal and exactly zero off it.
    fn cov_random(&self, w1: u32, w2: u32) -> LogReal {
        if w1 != w2 {
            return LogReal::ZERO;
        }
        let ln = self.lnc.get(self.n, w1) - self.m * LN_2 + math::ln_1p(-math::exp(-self.m * LN_2));
        LogReal::from_ln(ln)
    }

    /// `ln y` with `y = (z^(w1+w2-2v) - z^(w1+w2)) / ((1 + z^w1)(1 + z^w2))`.
    fn ln_excess(&self, w1: u32, w2: u32, v: u32) -> f64 {
        if v == 0 {
            return f64::NEG_INFINITY;
        }
        let denom = self.ln_1p_z[w1 as usize] + self.ln_1p_z[w2 as usize];
        let a = w1 + w2 - 2 * v;
        if self.random {
            // z^a - z^(w1+w2) with z = 0 is 1 iff a = 0 (w1 + w2 > 0 here)
            return if a == 0 { -denom } else { f64::NEG_INFINITY };
        }
        // z^a (1 - z^(2v)), each factor in (0, 1]
        let ln_num = f64::from(a) * self.ln_z + math::ln(-math::exp_m1(f64::from(2 * v) * self.ln_z));
        ln_num - denom
    }

    fn cov_overlap_sum(&self, w1: u32, w2: u32) -> LogReal {
        if w1 == 0 || w2 == 0 {
            return LogReal::ZERO;
        }
        let (w1, w2) = (w1.min(w2), w1.max(w2));
        let (lo, hi) = overlap_range(self.n, w1, w2);
        let terms: Vec<LogReal> = (lo..=hi)
            .map(|v| {
                let ln_y = self.ln_excess(w1, w2, v);
                debug_assert!(!ln_y.is_nan(), "negative covariance term at v = {v}");
                LogReal::from_ln(self.ln_count(w1, w2, v) + math::ln_pow_minus_one(self.m, ln_y))
            })
            .collect();
        let prefactor = self.m * (self.ln_1p_z[w1 as usize] + self.ln_1p_z[w2 as usize] - 2.0 * LN_2);
        LogReal::from_ln(prefactor) * LogReal::sum_slice(&terms)
    }

    fn var_pu_row(&self, ch: &Bsc, w1: u32) -> LogReal {
        let n = self.n;
        let terms: Vec<LogReal> = (w1..=n)
            .map(|w2| {
                let mut ln = ch.ln_pattern_prob(n, w1) + ch.ln_pattern_prob(n, w2);
                if w2 != w1 {
                    ln += LN_2;
                }
                self.cov(w1, w2) * LogReal::from_ln(ln)
            })
            .collect();
        LogReal::sum_slice(&terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use crate::math::relative_difference;

    fn b122() -> BernoulliEnsemble {
        BernoulliEnsemble::new(1, 2, 0.5).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        relative_difference(a, b) <= tol
    }

    #[test]
    fn constructor_validates() {
        assert!(BernoulliEnsemble::new(0, 2, 0.5).is_err());
        assert!(BernoulliEnsemble::new(1, 2, 1.5).is_err());
        assert!(BernoulliEnsemble::new(1, 2, 0.0).is_err());
        assert!(BernoulliEnsemble::new(1, 2, f64::NAN).is_err());
        assert!(BernoulliEnsemble::new(1, 2, 1.0).unwrap().is_random());
        assert!(!b122().is_random());
        assert_eq!(b122().z(), 0.5);
    }

    #[test]
    fn avg_weight_examples() {
        let e = BernoulliEnsemble::new(7, 9, 2.0).unwrap();
        assert_eq!(e.avg_weight(0).unwrap().to_f64(), 1.0);
        // exhaustive sum: 9/16 * 2 + 3/16 + 3/16 = 3/2
        assert!(close(b122().avg_weight(1).unwrap().to_f64(), 1.5, 1e-15));
        let r = BernoulliEnsemble::random(3, 4).unwrap();
        assert!(close(r.avg_weight(2).unwrap().to_f64(), 0.75, 1e-15));
        assert!(e.avg_weight(10).is_err());
    }

    #[test]
    fn avg_pu_examples() {
        let ch = Bsc::new(0.1).unwrap();
        let r = BernoulliEnsemble::random(20, 40).unwrap();
        let want = libm::ldexp(1.0 - 0.9f64.powi(40), -20);
        assert!(close(r.avg_pu(&ch).to_f64(), want, 1e-13));
        assert!(close(want, 9.396e-7, 1e-3));
        let one = BernoulliEnsemble::new(1, 1, 0.5).unwrap();
        assert!(close(one.avg_pu(&ch).to_f64(), 0.05, 1e-15));
        for eps in [0.01, 0.1, 0.3] {
            let ch = Bsc::new(eps).unwrap();
            assert!(close(b122().avg_pu(&ch).to_f64(), 1.5 * eps - 0.875 * eps * eps, 1e-14));
        }
    }

    #[test]
    fn joint_pass_examples() {
        let e = BernoulliEnsemble::new(3, 10, 2.5).unwrap();
        for w in 0..=10 {
            let same = e.joint_pass_prob(w, w, w).unwrap();
            let single = LogReal::from_ln(3.0 * (math::ln_1p(e.z().powi(w as i32)) - LN_2));
            assert!(same.relative_difference(single) < 1e-14);
        }
        let disjoint = e.joint_pass_prob(3, 4, 0).unwrap().to_f64();
        let z = e.z();
        let want = ((1.0 + z.powi(3)) * (1.0 + z.powi(4)) / 4.0).powi(3);
        assert!(close(disjoint, want, 1e-14));
        assert!(close(b122().joint_pass_prob(1, 2, 1).unwrap().to_f64(), 0.5625, 1e-15));
        assert!(matches!(e.joint_pass_prob(8, 8, 5), Err(Error::OverlapOutOfRange { lo: 6, hi: 8, .. })));
        assert!(e.joint_pass_prob(3, 4, 4).is_err());
    }

    #[test]
    fn joint_pass_exact_matches_float() {
        let e = BernoulliEnsemble::new(3, 8, 2.0).unwrap();
        for (w1, w2, v) in [(1, 1, 1), (2, 5, 1), (4, 6, 2), (8, 8, 8)] {
            let exact = joint_pass_prob_exact(3, 8, &rational(2, 1), w1, w2, v).unwrap();
            let f = e.joint_pass_prob(w1, w2, v).unwrap().to_f64();
            assert!(close(crate::exact::to_f64(&exact), f, 1e-14));
        }
        assert_eq!(joint_pass_prob_exact(1, 2, &rational(1, 2), 1, 2, 1).unwrap(), rational(9, 16));
    }

    #[test]
    fn second_moment_examples() {
        assert!(close(b122().second_moment_weight(1, 1).unwrap().to_f64(), 21.0 / 8.0, 1e-14));
        assert!(close(b122().second_moment_weight(1, 2).unwrap().to_f64(), 9.0 / 8.0, 1e-14));
        assert!(close(b122().second_moment_weight(2, 1).unwrap().to_f64(), 9.0 / 8.0, 1e-14));
        let r = BernoulliEnsemble::random(3, 7).unwrap();
        for w1 in 1..=7 {
            for w2 in 1..=7 {
                if w1 == w2 {
                    continue;
                }
                let prod = r.avg_weight(w1).unwrap() * r.avg_weight(w2).unwrap();
                assert!(r.second_moment_weight(w1, w2).unwrap().relative_difference(prod) < 1e-13);
            }
        }
    }

    #[test]
    fn covariance_examples() {
        let e = b122();
        assert!(close(e.cov_weight(1, 1).unwrap().to_f64(), 3.0 / 8.0, 1e-14));
        assert!(close(e.cov_weight(1, 2).unwrap().to_f64(), 3.0 / 16.0, 1e-14));
        assert!(close(e.cov_weight(2, 1).unwrap().to_f64(), 3.0 / 16.0, 1e-14));
        assert!(close(e.cov_weight(2, 2).unwrap().to_f64(), 15.0 / 64.0, 1e-14));
        let r = BernoulliEnsemble::random(2, 3).unwrap();
        assert!(r.cov_weight(1, 2).unwrap().is_zero());
        assert!(close(r.cov_weight(2, 2).unwrap().to_f64(), 9.0 / 16.0, 1e-14));
        assert!(e.cov_weight(0, 2).unwrap().is_zero());
    }

    #[test]
    fn covariance_is_symmetric_and_dominated() {
        let e = BernoulliEnsemble::new(5, 17, 3.3).unwrap();
        for w1 in 1..=17 {
            for w2 in 1..=17 {
                assert_eq!(e.cov_weight(w1, w2).unwrap(), e.cov_weight(w2, w1).unwrap());
            }
            let second = e.second_moment_weight(w1, w1).unwrap();
            let mean = e.avg_weight(w1).unwrap();
            assert!(second.log2() >= (mean * mean).log2() - 1e-12);
        }
    }

    #[test]
    fn covariance_agrees_with_moment_difference() {
        let e = BernoulliEnsemble::new(3, 9, 1.7).unwrap();
        for w1 in 1..=9 {
            for w2 in 1..=9 {
                let diff = e.second_moment_weight(w1, w2).unwrap().to_f64()
                    - (e.avg_weight(w1).unwrap() * e.avg_weight(w2).unwrap()).to_f64();
                let cov = e.cov_weight(w1, w2).unwrap().to_f64();
                assert!((diff - cov).abs() <= 1e-11 * e.second_moment_weight(w1, w2).unwrap().to_f64());
            }
        }
    }

    #[test]
    fn random_overlap_sum_matches_diagonal_form() {
        for n in 1..=20u32 {
            for m in [1u32, 3, 10] {
                let r = BernoulliEnsemble::random(m, n).unwrap();
                for w1 in 1..=n {
                    for w2 in 1..=n {
                        let a = r.cov_weight(w1, w2).unwrap();
                        let b = r.cov_weight_overlap_sum(w1, w2).unwrap();
                        if w1 != w2 {
                            assert!(a.is_zero() && b.is_zero());
                        } else {
                            assert!(a.relative_difference(b) < 1e-13, "m={m} n={n} w={w1}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn var_pu_examples() {
        for eps in [0.01, 0.1, 0.3, 0.45] {
            let ch = Bsc::new(eps).unwrap();
            let want = 0.375 * eps.powi(2) - 0.375 * eps.powi(3) + 15.0 / 64.0 * eps.powi(4);
            assert!(close(b122().var_pu(&ch).to_f64(), want, 1e-14));
        }
        let ch = Bsc::new(0.1).unwrap();
        assert!(close(b122().var_pu(&ch).to_f64(), 0.0033984375, 1e-14));
        let r = BernoulliEnsemble::random(20, 40).unwrap();
        let v = r.var_pu(&ch).to_f64();
        assert!(close(v, var_pu_random_closed_form(20, 40, &ch).to_f64(), 1e-12));
        assert!(close(v, 1.32e-10, 1e-2), "{v}");
    }

    #[test]
    fn linear_statistic_specializations() {
        let e = BernoulliEnsemble::new(2, 6, 1.5).unwrap();
        let ch = Bsc::new(0.2).unwrap();
        let pu_stat = LinearStatistic::undetected_error_prob(6, &ch);
        assert!(close(e.var_linear_statistic(&pu_stat).unwrap(), e.var_pu(&ch).to_f64(), 1e-13));
        let zero = LinearStatistic::from_fn(6, |_| 0.0);
        assert_eq!(e.var_linear_statistic(&zero).unwrap(), 0.0);
        let single = LinearStatistic::from_fn(6, |w| if w == 3 { 1.0 } else { 0.0 });
        assert!(close(e.var_linear_statistic(&single).unwrap(), e.cov_weight(3, 3).unwrap().to_f64(), 1e-15));
        assert!(e.var_linear_statistic(&LinearStatistic::new(alloc::vec![1.0; 3])).is_err());
    }

    #[test]
    fn finite_n_exponent_examples() {
        let ch = Bsc::new(0.1).unwrap();
        let r = BernoulliEnsemble::random(50, 100).unwrap();
        let want = -0.5 + math::log2(1.0 - 0.9f64.powi(100)) / 100.0;
        assert!((r.finite_n_exponent(&ch) - want).abs() < 1e-14);
        assert!((want + 0.500_000_383).abs() < 1e-9);
        let b = BernoulliEnsemble::new(50, 100, 4.0).unwrap();
        let t = b.finite_n_exponent(&Bsc::new(0.3).unwrap());
        assert!(t.is_finite() && t <= 0.0);
    }

    #[test]
    fn large_m_stays_finite() {
        let e = BernoulliEnsemble::new(3000, 6000, 10.0).unwrap();
        let r = BernoulliEnsemble::random(3000, 6000).unwrap();
        let a = r.avg_weight(1).unwrap();
        assert!((a.log2() - (-3000.0 + math::log2(6000.0))).abs() < 1e-9);
        assert_eq!(a.to_f64(), 0.0);
        let ch = Bsc::new(0.05).unwrap();
        let pu = e.avg_pu(&ch);
        assert!(pu.log2().is_finite() && pu.log2() < 0.0);
    }

    #[test]
    fn avg_pu_bounded_by_nonzero_error_prob() {
        for (m, n, k) in [(1, 3, 0.4), (5, 12, 1.0), (10, 30, 15.0), (40, 80, 2.0)] {
            let e = BernoulliEnsemble::new(m, n, k).unwrap();
            for eps in [0.001, 0.05, 0.25, 0.49] {
                let ch = Bsc::new(eps).unwrap();
                let bound = -math::exp_m1(f64::from(n) * math::ln_1p(-eps));
                assert!(e.avg_pu(&ch).to_f64() <= bound * (1.0 + 1e-14));
                assert!(e.var_pu(&ch).to_f64() >= 0.0);
            }
        }
    }
}
