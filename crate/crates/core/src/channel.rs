use crate::error::{Error, Result};
use crate::math;

/// Binary symmetric channel with crossover probability `0 < eps < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Bsc {
    eps: f64,
}

impl Bsc {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 0.5 {
            Ok(Bsc { eps })
        } else {
            Err(Error::InvalidCrossover(eps))
        }
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `ln(eps^w (1 - eps)^(n - w))`, the log-probability of one specific
    /// error pattern of weight `w`.
    #[inline]
    pub fn ln_pattern_prob(&self, n: u32, w: u32) -> f64 {
        f64::from(w) * math::ln(self.eps) + f64::from(n - w) * math::ln_1p(-self.eps)
    }
}
