use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The taming function `g_N`: zero up to the threshold `N`, the identity
/// shifted by `N` beyond `N + 1`, joined on `(N, N+1)` by the unique quintic
/// with matching value, first and second derivative at both ends. The blend
/// in the shifted variable `s = r - N` is `s^3 (6 - 8 s + 3 s^2)`, so the
/// whole function is C^2 with derivative in `[0, 189/125]`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TamingSpec {
    threshold: f64,
}

/// Cubic/quartic/quintic coefficients of the blend polynomial.
pub const BLEND_COEFFICIENTS: [f64; 3] = [6.0, -8.0, 3.0];

impl TamingSpec {
    pub fn new(threshold: f64) -> Result<Self> {
        if !threshold.is_finite() || threshold < 0.0 {
            return Err(Error::InvalidTamingThreshold(threshold));
        }
        Ok(TamingSpec { threshold })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Upper bound on `g_N'`, attained inside the blend at `s = 3/5`.
    pub fn derivative_cap(&self) -> f64 {
        945.0 / 625.0
    }

    /// `g_N(r)` for `r >= 0`; negative arguments are a domain error.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::NegativeTamingArgument(r));
        }
        Ok(self.eval(r))
    }

    /// `g_N'(r)` (analytic), same domain as [`TamingSpec::value`].
    pub fn derivative(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::NegativeTamingArgument(r));
        }
        Ok(self.eval_derivative(r))
    }

    #[inline]
    pub(crate) fn eval(&self, r: f64) -> f64 {
        let s = r - self.threshold;
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            s
        } else {
            let [a, b, c] = BLEND_COEFFICIENTS;
            s * s * s * (a + s * (b + s * c))
        }
    }

    #[inline]
    pub(crate) fn eval_derivative(&self, r: f64) -> f64 {
        let s = r - self.threshold;
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else {
            let [a, b, c] = BLEND_COEFFICIENTS;
            s * s * (3.0 * a + s * (4.0 * b + s * 5.0 * c))
        }
    }
}

/// Free-function form of the piecewise evaluation.
pub fn taming_value(r: f64, spec: &TamingSpec) -> Result<f64> {
    spec.value(r)
}
