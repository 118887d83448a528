//! Asymptotic growth rates and error exponents for ensembles of
//! `(1 - R) n x n` parity-check matrices as `n -> infinity`.
//!
//! All logarithms are base 2.

use crate::error::{Error, Result};
use crate::math::{self, LN_2};
use crate::optimize::{self, Extremum, OptimizerConfig};

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { name, value: x, domain: "[0, 1]" })
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { name: "rate", value: rate, domain: "(0, 1)" })
    }
}

fn check_k(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { name: "k", value: k, domain: "(0, inf)" })
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 0.5 {
        Ok(())
    } else {
        Err(Error::InvalidCrossover(eps))
    }
}

/// `-x log2 x` with the continuous extension at 0.
#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * math::log2(x)
    }
}

#[inline]
fn entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    -xlog2x(x) - xlog2x(1.0 - x)
}

/// `total * h(part / total)`, zero when `total = 0`.
#[inline]
fn scaled_entropy(total: f64, part: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let part = part.clamp(0.0, total);
    xlog2x(total) - xlog2x(part) - xlog2x(total - part)
}

/// Binary entropy `h(x) = -x log2 x - (1 - x) log2 (1 - x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok(entropy(x))
}

/// Binary relative entropy `D(l || eps)` in bits.
pub fn kl_binary(l: f64, eps: f64) -> Result<f64> {
    check_unit("l", l)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain { name: "eps", value: eps, domain: "(0, 1)" });
    }
    let d = xlog2x(l) - l * math::log2(eps) + xlog2x(1.0 - l) - (1.0 - l) * math::log2(1.0 - eps);
    Ok(d.max(0.0))
}

/// A function on `(0, 1]` together with its right limit at 0.
pub trait GrowthRate {
    fn eval(&self, l: f64) -> f64;
    fn limit_at_zero(&self) -> f64;
}

impl<G: GrowthRate + ?Sized> GrowthRate for &G {
    fn eval(&self, l: f64) -> f64 {
        (**self).eval(l)
    }
    fn limit_at_zero(&self) -> f64 {
        (**self).limit_at_zero()
    }
}

/// `f(l) = h(l) - (1 - R)` of the uniform ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGrowth {
    rate: f64,
}

impl GrowthRate for RandomGrowth {
    fn eval(&self, l: f64) -> f64 {
        entropy(l) - (1.0 - self.rate)
    }
    fn limit_at_zero(&self) -> f64 {
        -(1.0 - self.rate)
    }
}

/// `f(l) = h(l) + (1 - R) log2((1 + e^(-2kl)) / 2)` of the Bernoulli
/// ensemble with constant `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliGrowth {
    rate: f64,
    k: f64,
}

impl GrowthRate for BernoulliGrowth {
    fn eval(&self, l: f64) -> f64 {
        let parity = (math::ln_1p(math::exp(-2.0 * self.k * l)) - LN_2) / LN_2;
        entropy(l) + (1.0 - self.rate) * parity
    }
    fn limit_at_zero(&self) -> f64 {
        0.0
    }
}

pub fn growth_rate_random(rate: f64) -> Result<RandomGrowth> {
    check_rate(rate)?;
    Ok(RandomGrowth { rate })
}

pub fn growth_rate_bernoulli(rate: f64, k: f64) -> Result<BernoulliGrowth> {
    check_rate(rate)?;
    check_k(k)?;
    Ok(BernoulliGrowth { rate, k })
}

/// `g(l) = f(l) + l log2 eps + (1 - l) log2 (1 - eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentObjective<G> {
    growth: G,
    eps: f64,
}

impl<G: GrowthRate> GrowthRate for ExponentObjective<G> {
    fn eval(&self, l: f64) -> f64 {
        self.growth.eval(l) + l * math::log2(self.eps) + (1.0 - l) * math::log2(1.0 - self.eps)
    }
    fn limit_at_zero(&self) -> f64 {
        self.growth.limit_at_zero() + math::log2(1.0 - self.eps)
    }
}

pub fn exponent_objective<G: GrowthRate>(growth: G, eps: f64) -> Result<ExponentObjective<G>> {
    check_eps(eps)?;
    Ok(ExponentObjective { growth, eps })
}

/// Supremum over `l` in `(0, 1]` of the exponent objective. The limit at
/// `l -> 0+` competes as a candidate; when it wins, `argmax` is 0.
pub fn error_exponent<G: GrowthRate>(growth: G, eps: f64, cfg: &OptimizerConfig) -> Result<Extremum> {
    let g = exponent_objective(growth, eps)?;
    let interior = optimize::maximize(|l| g.eval(l), 0.0, 1.0, true, cfg);
    let boundary = g.limit_at_zero();
    Ok(if boundary > interior.value { Extremum { value: boundary, argmax: 0.0 } } else { interior })
}

/// Design rate with an optional Bernoulli parameter; `k = None` is the
/// uniform ensemble.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RatePoint {
    rate: f64,
    k: Option<f64>,
}

impl RatePoint {
    pub fn random(rate: f64) -> Result<Self> {
        check_rate(rate)?;
        Ok(RatePoint { rate, k: None })
    }

    pub fn bernoulli(rate: f64, k: f64) -> Result<Self> {
        check_rate(rate)?;
        check_k(k)?;
        Ok(RatePoint { rate, k: Some(k) })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }
}

/// How the binomial exponents in the covariance growth rate are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyScaling {
    /// `l1 h(nu / l1)`, `(1 - l1) h((l2 - nu) / (1 - l1))`, `(1 - R) h(mu / (1 - R))`:
    /// the exponents of the binomial coefficients they stand for.
    #[default]
    Scaled,
    /// The same entropies without their prefactors, kept for comparison only.
    Unscaled,
}

/// Fixed parameters of the covariance exponent for one `(l1, l2)` pair with
/// `l1 <= l2`.
#[derive(Debug, Clone, Copy)]
struct CovExponent {
    r1: f64,
    k: f64,
    l1: f64,
    l2: f64,
    scaling: EntropyScaling,
}

impl CovExponent {
    fn nu_range(&self) -> (f64, f64) {
        ((self.l1 + self.l2 - 1.0).max(0.0), self.l1)
    }

    /// `(a, b)` with `a = e^(-2k(l1+l2-2nu)) - e^(-2k(l1+l2))`,
    /// `b = (1 + e^(-2k l1)) (1 + e^(-2k l2))`.
    fn ab(&self, nu: f64) -> (f64, f64) {
        let k = self.k;
        let a = math::exp(-2.0 * k * (self.l1 + self.l2 - 2.0 * nu)) * -math::exp_m1(-4.0 * k * nu);
        let b = (1.0 + math::exp(-2.0 * k * self.l1)) * (1.0 + math::exp(-2.0 * k * self.l2));
        (a, b)
    }

    fn alpha(&self, mu: f64, nu: f64) -> f64 {
        let (a, b) = self.ab(nu);
        let ent = match self.scaling {
            EntropyScaling::Scaled => scaled_entropy(self.r1, mu),
            EntropyScaling::Unscaled => entropy(mu / self.r1),
        };
        let la = if mu > 0.0 { mu * math::log2(a) } else { 0.0 };
        ent + la + (self.r1 - mu) * math::log2(b)
    }

    fn inner_sup(&self, nu: f64, cfg: &OptimizerConfig) -> f64 {
        let (a, b) = self.ab(nu);
        match self.scaling {
            // max-term exponent of sum_i C(m, i) a^i b^(m-i) = (a + b)^m
            EntropyScaling::Scaled => self.r1 * math::log2(a + b),
            EntropyScaling::Unscaled => {
                if a <= 0.0 {
                    self.r1 * math::log2(b)
                } else {
                    optimize::maximize(|mu| self.alpha(mu, nu), 0.0, self.r1, true, cfg).value
                }
            }
        }
    }

    fn q(&self, nu: f64, cfg: &OptimizerConfig) -> f64 {
        let (l1, l2) = (self.l1, self.l2);
        let counting = match self.scaling {
            EntropyScaling::Scaled => entropy(l1) + scaled_entropy(l1, nu) + scaled_entropy(1.0 - l1, l2 - nu),
            EntropyScaling::Unscaled => {
                let second = if l1 > 0.0 { entropy(nu / l1) } else { 0.0 };
                let third = if l1 < 1.0 { entropy((l2 - nu) / (1.0 - l1)) } else { 0.0 };
                entropy(l1) + second + third
            }
        };
        -2.0 * self.r1 + counting + self.inner_sup(nu, cfg)
    }

    fn sup(&self, cfg: &OptimizerConfig) -> f64 {
        let (lo, hi) = self.nu_range();
        optimize::maximize(|nu| self.q(nu, cfg), lo, hi, false, cfg).value
    }
}

fn cov_exponent(rp: &RatePoint, l1: f64, l2: f64, scaling: EntropyScaling) -> Result<Option<CovExponent>> {
    for (name, l) in [("l1", l1), ("l2", l2)] {
        if !(l > 0.0 && l <= 1.0) {
            return Err(Error::Domain { name, value: l, domain: "(0, 1]" });
        }
    }
    let (l1, l2) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
    Ok(rp.k.map(|k| CovExponent { r1: 1.0 - rp.rate, k, l1, l2, scaling }))
}

/// `alpha(mu, nu)`: exponent of the `i = mu n` term of the binomial
/// expansion of the covariance kernel at overlap `nu`.
pub fn cov_alpha(rp: &RatePoint, l1: f64, l2: f64, mu: f64, nu: f64) -> Result<f64> {
    let ce = cov_exponent(rp, l1, l2, EntropyScaling::Scaled)?
        .ok_or(Error::Domain { name: "k", value: f64::INFINITY, domain: "(0, inf)" })?;
    let (lo, hi) = ce.nu_range();
    if nu < lo || nu > hi {
        return Err(Error::Domain { name: "nu", value: nu, domain: "[max(0, l1 + l2 - 1), min(l1, l2)]" });
    }
    if !(mu > 0.0 && mu <= ce.r1) {
        return Err(Error::Domain { name: "mu", value: mu, domain: "(0, 1 - R]" });
    }
    Ok(ce.alpha(mu, nu))
}

/// Closed form of `sup_mu alpha(mu, nu)`, namely `(1 - R) log2(a + b)`.
pub fn cov_alpha_sup(rp: &RatePoint, l1: f64, l2: f64, nu: f64) -> Result<f64> {
    let ce = cov_exponent(rp, l1, l2, EntropyScaling::Scaled)?
        .ok_or(Error::Domain { name: "k", value: f64::INFINITY, domain: "(0, inf)" })?;
    Ok(ce.inner_sup(nu, &OptimizerConfig::default()))
}

/// Growth rate `T(l1, l2)` of `Cov(A_{l1 n}, A_{l2 n})`.
pub fn cov_growth_rate(rp: &RatePoint, l1: f64, l2: f64, cfg: &OptimizerConfig) -> Result<f64> {
    cov_growth_rate_with(rp, l1, l2, cfg, EntropyScaling::Scaled)
}

pub fn cov_growth_rate_with(
    rp: &RatePoint,
    l1: f64,
    l2: f64,
    cfg: &OptimizerConfig,
    scaling: EntropyScaling,
) -> Result<f64> {
    match cov_exponent(rp, l1, l2, scaling)? {
        Some(ce) => Ok(ce.sup(cfg)),
        // uniform ensemble: only the diagonal 2^-2m C(n, w) (2^m - 1) survives
        None if l1 == l2 => Ok(entropy(l1) - (1.0 - rp.rate)),
        None => Ok(f64::NEG_INFINITY),
    }
}

/// Location and value of the variance growth rate supremum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct VarianceExponent {
    pub value: f64,
    pub l1: f64,
    pub l2: f64,
}

/// Growth rate of `Var[P_U]`: the supremum over `(0, 1]^2` of
/// `S(l1, l2) = (l1 + l2) log2 eps + (2 - l1 - l2) log2 (1 - eps) + T(l1, l2)`.
pub fn var_pu_growth_rate(rp: &RatePoint, eps: f64, cfg: &OptimizerConfig) -> Result<VarianceExponent> {
    check_eps(eps)?;
    let (le, l1e) = (math::log2(eps), math::log2(1.0 - eps));
    let pattern = |l1: f64, l2: f64| (l1 + l2) * le + (2.0 - l1 - l2) * l1e;

    let Some(k) = rp.k else {
        // diagonal only: sup_l 2 l log eps + 2 (1 - l) log (1 - eps) + h(l) - (1 - R)
        let e = optimize::maximize(|l| pattern(l, l) + entropy(l) - (1.0 - rp.rate), 0.0, 1.0, true, cfg);
        return Ok(VarianceExponent { value: e.value, l1: e.argmax, l2: e.argmax });
    };

    let r1 = 1.0 - rp.rate;
    // Continuous extension to the closed square: l -> 0+ limits are taken
    // by evaluating the scaled-entropy form at 0.
    let s = |l1: f64, l2: f64, inner: &OptimizerConfig| {
        let (a, b) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let ce = CovExponent { r1, k, l1: a, l2: b, scaling: EntropyScaling::Scaled };
        pattern(l1, l2) + ce.sup(inner)
    };

    let coarse_inner = cfg.with_grid_points(256);
    let g = 64usize;
    let step = 1.0 / g as f64;
    let mut cands: alloc::vec::Vec<(f64, f64, f64)> = alloc::vec::Vec::new();
    for i in 0..=g {
        for j in i..=g {
            let (l1, l2) = (i as f64 * step, j as f64 * step);
            cands.push((s(l1, l2, &coarse_inner), l1, l2));
        }
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0));
    cands.truncate(4);

    let fine_inner = cfg.with_grid_points(cfg.grid_points().min(2048));
    let mut best = VarianceExponent { value: f64::NEG_INFINITY, l1: 1.0, l2: 1.0 };
    for &(_, mut c1, mut c2) in &cands {
        let mut half = step;
        let mut val = s(c1, c2, &fine_inner);
        // shrinking 9x9 window search on [0, 1]^2
        while half > cfg.refine_tol().max(1e-9) {
            let (mut b1, mut b2) = (c1, c2);
            for di in -4i32..=4 {
                for dj in -4i32..=4 {
                    let x = (c1 + f64::from(di) * half / 4.0).clamp(0.0, 1.0);
                    let y = (c2 + f64::from(dj) * half / 4.0).clamp(0.0, 1.0);
                    let v = s(x, y, &fine_inner);
                    if v > val {
                        val = v;
                        b1 = x;
                        b2 = y;
                    }
                }
            }
            if (b1, b2) == (c1, c2) {
                half /= 3.0;
            }
            c1 = b1;
            c2 = b2;
        }
        let v = s(c1, c2, cfg);
        if v > best.value {
            best = VarianceExponent { value: v, l1: c1, l2: c2 };
        }
    }
    Ok(best)
}
