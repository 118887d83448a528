//! Floating-point helpers shared by the numeric modules.
//!
//! Transcendental functions come from `libm` so the crate stays `no_std`.

use alloc::vec::Vec;

pub const LN_2: f64 = core::f64::consts::LN_2;

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn exp2(x: f64) -> f64 {
    libm::exp2(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Largest `n` for which binomials are taken from exact integers.
pub const EXACT_BINOMIAL_LIMIT: u32 = 64;

/// Exact `C(n, k)`, or `None` if an intermediate product overflows `u128`.
pub fn binomial_u128(n: u32, k: u32) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Natural log of `C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        // C(64, 32) < 2^63, exact in u128 and within one rounding in f64
        return ln(binomial_u128(n, k).unwrap_or(0) as f64);
    }
    ln_gamma(f64::from(n) + 1.0) - ln_gamma(f64::from(k) + 1.0) - ln_gamma(f64::from(n - k) + 1.0)
}

/// Table of `ln C(a, b)` for all `0 <= b <= a <= n`, built from exact
/// integers up to [`EXACT_BINOMIAL_LIMIT`] and log-gamma above it.
#[derive(Debug, Clone)]
pub struct LnBinomialTable {
    ln_fact: Vec<f64>,
    exact: Vec<Vec<f64>>,
}

impl LnBinomialTable {
    pub fn new(n: u32) -> Self {
        let ln_fact = (0..=n).map(|i| ln_gamma(f64::from(i) + 1.0)).collect();
        let top = n.min(EXACT_BINOMIAL_LIMIT);
        let exact = (0..=top)
            .map(|a| (0..=a).map(|b| ln(binomial_u128(a, b).unwrap_or(0) as f64)).collect())
            .collect();
        LnBinomialTable { ln_fact, exact }
    }

    #[inline]
    pub fn get(&self, a: u32, b: u32) -> f64 {
        if b > a {
            return f64::NEG_INFINITY;
        }
        if let Some(row) = self.exact.get(a as usize) {
            return row[b as usize];
        }
        self.ln_fact[a as usize] - self.ln_fact[b as usize] - self.ln_fact[(a - b) as usize]
    }
}

/// `ln((1 + y)^m - 1)` for `y >= 0` given as `ln y`, stable for tiny and
/// huge `m * y`.
pub fn ln_pow_minus_one(m: f64, ln_y: f64) -> f64 {
    if ln_y == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if ln_y < -600.0 {
        // (1 + y)^m - 1 = m y (1 + O(m y))
        return ln(m) + ln_y;
    }
    let t = m * ln_1p(exp(ln_y));
    if t < 40.0 {
        ln(exp_m1(t))
    } else {
        t + ln_1p(-exp(-t))
    }
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
