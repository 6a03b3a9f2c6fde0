//! The univariate exponentiated generalized linear exponential family.
//!
//! `F(x) = (1 - exp(-eta(x)^alpha))^theta` for `x >= 0`, where
//! `eta(x) = a x + (b / 2) x^2`. Special cases: exponential (`alpha = theta = 1`,
//! `b = 0`), generalized exponential (`alpha = 1`, `b = 0`) and generalized
//! linear failure rate (`alpha = 1`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quad::{quad_finite, quad_semi_infinite_scaled, QuadConfig};
use crate::numerics::rng::RandomStream;

/// `ln(1 - exp(-s))` for `s >= 0`, accurate at both ends.
pub(crate) fn ln_one_minus_exp_neg(s: f64) -> f64 {
    if s > std::f64::consts::LN_2 {
        (-(-s).exp()).ln_1p()
    } else {
        (-(-s).exp_m1()).ln()
    }
}

/// `1 - exp(v)` for `v <= 0`.
pub(crate) fn one_minus_exp(v: f64) -> f64 {
    -v.exp_m1()
}

/// The shared `(alpha, a, b)` part of the family: everything except the
/// exponent `theta`.
///
/// `Psi(x) = 1 - exp(-eta(x)^alpha)` is the `theta = 1` distribution function;
/// every member of the family (and every factor of the bivariate model) is a
/// power of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    alpha: f64,
    a: f64,
    b: f64,
}

impl Baseline {
    pub fn new(alpha: f64, a: f64, b: f64) -> Result<Self> {
        if !(alpha.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite baseline (alpha={alpha}, a={a}, b={b})")));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParams(format!("alpha must be > 0, got {alpha}")));
        }
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::InvalidParams(format!("a and b must be >= 0 (a={a}, b={b})")));
        }
        if !(a + b > 0.0) {
            return Err(Error::InvalidParams("a + b must be > 0".into()));
        }
        Ok(Baseline { alpha, a, b })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `eta(x) = a x + (b/2) x^2`.
    pub fn eta(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("eta needs x >= 0, got {x}")));
        }
        Ok(self.eta_raw(x))
    }

    #[inline]
    pub(crate) fn eta_raw(&self, x: f64) -> f64 {
        x * (self.a + 0.5 * self.b * x)
    }

    /// `eta(x)^alpha`, zero for `x <= 0`.
    #[inline]
    pub fn eta_pow(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let eta = self.eta_raw(x);
        if eta == 0.0 {
            0.0
        } else {
            (self.alpha * eta.ln()).exp()
        }
    }

    /// `ln Psi(x)`; `-inf` for `x <= 0`.
    #[inline]
    pub fn ln_psi(&self, x: f64) -> f64 {
        ln_one_minus_exp_neg(self.eta_pow(x))
    }

    pub fn psi(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            one_minus_exp(-self.eta_pow(x))
        }
    }

    /// `ln Psi'(x) = ln(alpha (a + b x) eta^(alpha-1) e^(-eta^alpha))` for `x > 0`.
    #[inline]
    pub fn ln_dpsi(&self, x: f64) -> f64 {
        let eta = self.eta_raw(x);
        let ln_eta = eta.ln();
        let s = (self.alpha * ln_eta).exp();
        self.alpha.ln() + (self.a + self.b * x).ln() + (self.alpha - 1.0) * ln_eta - s
    }

    /// Attach an exponent to get a member of the family.
    pub fn with_theta(&self, theta: f64) -> Result<EgledParams> {
        EgledParams::from_baseline(*self, theta)
    }

    /// Solves `eta(x) = level` for `x >= 0`.
    pub(crate) fn eta_inverse(&self, level: f64) -> f64 {
        if self.b == 0.0 {
            level / self.a
        } else {
            // Rationalized root of (b/2) x^2 + a x - level = 0; no cancellation for small b.
            2.0 * level / (self.a + (self.a * self.a + 2.0 * self.b * level).sqrt())
        }
    }
}

/// Parameters `(alpha, a, b, theta)` of one EGLE distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgledParams {
    base: Baseline,
    theta: f64,
}

impl EgledParams {
    pub fn new(alpha: f64, a: f64, b: f64, theta: f64) -> Result<Self> {
        Self::from_baseline(Baseline::new(alpha, a, b)?, theta)
    }

    pub fn from_baseline(base: Baseline, theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParams(format!("theta must be a finite value > 0, got {theta}")));
        }
        Ok(EgledParams { base, theta })
    }

    pub fn baseline(&self) -> &Baseline {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.base.alpha
    }

    pub fn a(&self) -> f64 {
        self.base.a
    }

    pub fn b(&self) -> f64 {
        self.base.b
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eta(&self, x: f64) -> Result<f64> {
        self.base.eta(x)
    }

    /// `ln F(x)`; `-inf` for `x <= 0`.
    pub fn ln_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.theta * self.base.ln_psi(x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.ln_cdf(x).exp()
    }

    /// `1 - F(x)` without cancellation near `F = 0`.
    pub fn sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        one_minus_exp(self.ln_cdf(x))
    }

    /// `ln(1 - F(x))`, finite far past the point where `sf` underflows.
    pub fn ln_sf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let s = self.base.eta_pow(x);
        // ln(-ln Psi); for large s, -ln Psi = e^-s (1 + O(e^-s)).
        let ln_u = if s > 40.0 { -s } else { (-self.base.ln_psi(x)).ln() };
        let ln_t = self.theta.ln() + ln_u;
        if ln_t < -40.0 {
            ln_t
        } else {
            (-(-ln_t.exp()).exp_m1()).ln()
        }
    }

    /// `ln f(x)` for `x > 0`; `-inf` once the density underflows.
    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("density needs x > 0, got {x}")));
        }
        let mut v = self.theta.ln() + self.base.ln_dpsi(x);
        if self.theta != 1.0 {
            v += (self.theta - 1.0) * self.base.ln_psi(x);
        }
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(self.ln_pdf(x)?.exp())
    }

    /// Unique `x` with `F(x) = prob`.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::Domain(format!("quantile needs 0 < prob < 1, got {prob}")));
        }
        // L = (-ln(1 - prob^(1/theta)))^(1/alpha), then eta(x) = L.
        let one_minus = one_minus_exp(prob.ln() / self.theta);
        let level = (-one_minus.ln()).powf(1.0 / self.base.alpha);
        Ok(self.base.eta_inverse(level))
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is inside (0, 1)")
    }

    /// Inverse-CDF draw from a single uniform.
    pub fn draw(&self, rng: &mut RandomStream) -> f64 {
        self.quantile(rng.uniform()).expect("uniform draws lie in (0, 1)")
    }

    pub fn sample(&self, n: usize, rng: &mut RandomStream) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }

    /// `f(x) / (1 - F(x))`.
    pub fn hazard(&self, x: f64) -> Result<f64> {
        let ln_pdf = self.ln_pdf(x)?;
        let ln_sf = self.ln_sf(x);
        if !ln_sf.is_finite() {
            return Err(Error::SaturatedSurvival { at: format!("x = {x}") });
        }
        Ok((ln_pdf - ln_sf).exp())
    }

    /// `f(x) / F(x)`.
    pub fn reversed_hazard(&self, x: f64) -> Result<f64> {
        let ln_pdf = self.ln_pdf(x)?;
        let ln_cdf = self.ln_cdf(x);
        if ln_cdf == f64::NEG_INFINITY {
            return Err(Error::DegenerateWindow { at: format!("x = {x}") });
        }
        Ok((ln_pdf - ln_cdf).exp())
    }

    /// `E[X^r]` by adaptive quadrature.
    pub fn moment(&self, r: u32) -> Result<f64> {
        self.moment_with(r, &QuadConfig::default())
    }

    pub fn moment_with(&self, r: u32, config: &QuadConfig) -> Result<f64> {
        if r == 0 {
            return Err(Error::Domain("moment order must be >= 1".into()));
        }
        let scale = self.median();
        let est = quad_semi_infinite_scaled(
            |x| {
                let d = self.pdf(x).unwrap_or(0.0);
                if d == 0.0 {
                    0.0
                } else {
                    x.powi(r as i32) * d
                }
            },
            0.0,
            scale,
            config,
        )?;
        Ok(est.value)
    }

    /// Mean waiting time `(1 / F(t)) * ∫_0^t F(x) dx`.
    pub fn mean_waiting_time(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("waiting time needs t > 0, got {t}")));
        }
        let ft = self.cdf(t);
        if ft <= 0.0 {
            return Err(Error::DegenerateWindow { at: format!("t = {t}") });
        }
        let est = quad_finite(|x| self.cdf(x), 0.0, t, &QuadConfig::default())?;
        Ok(est.value / ft)
    }
}
