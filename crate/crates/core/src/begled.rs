//! The bivariate model `X_k = max(U_k, U_3)`, `k = 1, 2`, with independent
//! `U_i ~ EGLE(alpha, a, b, theta_i)`.
//!
//! The joint law has an absolutely continuous part on each side of the
//! diagonal and a singular part on `x1 = x2` carrying mass
//! `theta3 / (theta1 + theta2 + theta3)`.

use serde::{Deserialize, Serialize};

use crate::egled::{Baseline, EgledParams};
use crate::error::{Error, Result};
use crate::numerics::rng::RandomStream;

/// `Phi = (alpha, a, b, theta1, theta2, theta3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BegledParams {
    base: Baseline,
    theta: [f64; 3],
}

impl BegledParams {
    pub fn new(alpha: f64, a: f64, b: f64, theta1: f64, theta2: f64, theta3: f64) -> Result<Self> {
        Self::from_baseline(Baseline::new(alpha, a, b)?, [theta1, theta2, theta3])
    }

    pub fn from_baseline(base: Baseline, theta: [f64; 3]) -> Result<Self> {
        if let Some(t) = theta.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::InvalidParams(format!("thetas must be finite and > 0, got {t}")));
        }
        Ok(BegledParams { base, theta })
    }

    /// Canonical order `(alpha, a, b, theta1, theta2, theta3)`.
    pub fn from_array(v: [f64; 6]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3], v[4], v[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.base.alpha(),
            self.base.a(),
            self.base.b(),
            self.theta[0],
            self.theta[1],
            self.theta[2],
        ]
    }

    pub fn baseline(&self) -> &Baseline {
        &self.base
    }

    pub fn alpha(&self) -> f64 {
        self.base.alpha()
    }

    pub fn a(&self) -> f64 {
        self.base.a()
    }

    pub fn b(&self) -> f64 {
        self.base.b()
    }

    pub fn theta1(&self) -> f64 {
        self.theta[0]
    }

    pub fn theta2(&self) -> f64 {
        self.theta[1]
    }

    pub fn theta3(&self) -> f64 {
        self.theta[2]
    }

    pub fn theta_sum(&self) -> f64 {
        self.theta.iter().sum()
    }

    /// Same model with the roles of the two coordinates exchanged.
    pub fn swapped(&self) -> BegledParams {
        BegledParams {
            base: self.base,
            theta: [self.theta[1], self.theta[0], self.theta[2]],
        }
    }

    fn check_coordinate(k: usize) -> Result<()> {
        if k == 1 || k == 2 {
            Ok(())
        } else {
            Err(Error::Domain(format!("coordinate index must be 1 or 2, got {k}")))
        }
    }

    /// Law of `X_k`: EGLE with exponent `theta_k + theta3`.
    pub fn marginal(&self, k: usize) -> Result<EgledParams> {
        Self::check_coordinate(k)?;
        self.base.with_theta(self.theta[k - 1] + self.theta[2])
    }

    /// Law of one latent shock `U_k`, `k = 1, 2, 3`.
    pub fn shock(&self, k: usize) -> Result<EgledParams> {
        if !(1..=3).contains(&k) {
            return Err(Error::Domain(format!("shock index must be 1, 2 or 3, got {k}")));
        }
        self.base.with_theta(self.theta[k - 1])
    }

    /// Law of `max(X1, X2)`: EGLE with exponent `theta1 + theta2 + theta3`.
    pub fn max_law(&self) -> EgledParams {
        self.base
            .with_theta(self.theta_sum())
            .expect("sum of positive thetas is positive")
    }

    pub fn joint_cdf(&self, pt: BivariatePoint) -> f64 {
        if pt.x1 <= 0.0 || pt.x2 <= 0.0 {
            return 0.0;
        }
        let z = pt.x1.min(pt.x2);
        let [t1, t2, t3] = self.theta;
        (t1 * self.base.ln_psi(pt.x1) + t2 * self.base.ln_psi(pt.x2) + t3 * self.base.ln_psi(z)).exp()
    }

    /// Log of the branch density selected by `region`.
    ///
    /// `Below` and `Above` are densities with respect to area, `Diagonal` with
    /// respect to length along the diagonal (evaluated at the mean of the two
    /// coordinates, which coincide for exact ties).
    pub fn ln_joint_pdf(&self, pt: BivariatePoint, region: Region) -> Result<f64> {
        let [t1, t2, t3] = self.theta;
        let base = &self.base;
        let v = match region {
            Region::Below => {
                if !(pt.x1 > 0.0 && pt.x1 < pt.x2) {
                    return Err(region.mismatch(pt));
                }
                (t2 * (t1 + t3)).ln()
                    + base.ln_dpsi(pt.x1)
                    + base.ln_dpsi(pt.x2)
                    + pow_ln(t1 + t3 - 1.0, base.ln_psi(pt.x1))
                    + pow_ln(t2 - 1.0, base.ln_psi(pt.x2))
            }
            Region::Above => {
                if !(pt.x2 > 0.0 && pt.x1 > pt.x2) {
                    return Err(region.mismatch(pt));
                }
                (t1 * (t2 + t3)).ln()
                    + base.ln_dpsi(pt.x1)
                    + base.ln_dpsi(pt.x2)
                    + pow_ln(t1 - 1.0, base.ln_psi(pt.x1))
                    + pow_ln(t2 + t3 - 1.0, base.ln_psi(pt.x2))
            }
            Region::Diagonal => {
                let x = 0.5 * (pt.x1 + pt.x2);
                if !(x > 0.0) {
                    return Err(region.mismatch(pt));
                }
                t3.ln() + base.ln_dpsi(x) + pow_ln(t1 + t2 + t3 - 1.0, base.ln_psi(x))
            }
        };
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }

    pub fn joint_pdf(&self, pt: BivariatePoint, region: Region) -> Result<f64> {
        Ok(self.ln_joint_pdf(pt, region)?.exp())
    }

    pub fn marginal_cdf(&self, k: usize, x: f64) -> Result<f64> {
        Ok(self.marginal(k)?.cdf(x))
    }

    pub fn marginal_pdf(&self, k: usize, x: f64) -> Result<f64> {
        self.marginal(k)?.pdf(x)
    }

    /// Conditional density of `X_i` at `xi` given `X_j = xj`.
    ///
    /// For `xi = xj` this returns the conditional point mass on the diagonal,
    /// also available from [`BegledParams::conditional_atom`].
    pub fn conditional_pdf(&self, i: usize, xi: f64, xj: f64) -> Result<f64> {
        Self::check_coordinate(i)?;
        if !(xi > 0.0 && xj > 0.0) {
            return Err(Error::Domain(format!("conditional density needs xi, xj > 0 (xi={xi}, xj={xj})")));
        }
        let j = 3 - i;
        let (ti, tj, t3) = (self.theta[i - 1], self.theta[j - 1], self.theta[2]);
        let base = &self.base;
        if xi > xj {
            Ok((ti.ln() + base.ln_dpsi(xi) + pow_ln(ti - 1.0, base.ln_psi(xi))).exp())
        } else if xi < xj {
            let v = (tj * (ti + t3) / (tj + t3)).ln() + base.ln_dpsi(xi) + pow_ln(ti + t3 - 1.0, base.ln_psi(xi))
                - t3 * base.ln_psi(xj);
            Ok(v.exp())
        } else {
            self.conditional_atom(i, xj)
        }
    }

    /// `P(X_i = xj | X_j = xj)`.
    pub fn conditional_atom(&self, i: usize, xj: f64) -> Result<f64> {
        Self::check_coordinate(i)?;
        if !(xj > 0.0) {
            return Err(Error::Domain(format!("conditional atom needs xj > 0, got {xj}")));
        }
        let j = 3 - i;
        let (ti, tj, t3) = (self.theta[i - 1], self.theta[j - 1], self.theta[2]);
        Ok(t3 / (tj + t3) * (ti * self.base.ln_psi(xj)).exp())
    }

    /// `P(max(X1, X2) <= t)`.
    pub fn max_cdf(&self, t: f64) -> f64 {
        self.max_law().cdf(t)
    }

    /// `P(min(X1, X2) <= t) = F_1(t) + F_2(t) - F_T(t)`.
    pub fn min_cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let (m1, m2) = self.marginals();
        m1.cdf(t) + m2.cdf(t) - self.max_cdf(t)
    }

    /// `P(min(X1, X2) > t)`, formed from survival terms to avoid cancellation near zero.
    pub fn min_sf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        let (m1, m2) = self.marginals();
        (m1.sf(t) + m2.sf(t) - self.max_law().sf(t)).max(0.0)
    }

    /// Density of `min(X1, X2)`: the signed sum of three EGLE densities.
    pub fn min_pdf(&self, t: f64) -> Result<f64> {
        let (m1, m2) = self.marginals();
        Ok((m1.pdf(t)? + m2.pdf(t)? - self.max_law().pdf(t)?).max(0.0))
    }

    fn marginals(&self) -> (EgledParams, EgledParams) {
        (
            self.marginal(1).expect("index 1 is valid"),
            self.marginal(2).expect("index 2 is valid"),
        )
    }

    /// `4 F(M1, M2) - 1` at the marginal medians.
    pub fn median_correlation(&self) -> f64 {
        let (m1, m2) = self.marginals();
        4.0 * self.joint_cdf(BivariatePoint::new_unchecked(m1.median(), m2.median())) - 1.0
    }

    /// Mass of the singular diagonal component.
    pub fn tie_probability(&self) -> f64 {
        self.theta[2] / self.theta_sum()
    }

    /// Draws one pair through the latent-shock construction.
    pub fn draw(&self, rng: &mut RandomStream) -> BivariatePoint {
        let [u1, u2, u3] = [0, 1, 2].map(|k| {
            self.base
                .with_theta(self.theta[k])
                .expect("validated theta")
                .draw(rng)
        });
        BivariatePoint::new_unchecked(u1.max(u3), u2.max(u3))
    }

    pub fn sample(&self, n: usize, rng: &mut RandomStream) -> Vec<BivariatePoint> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// `exponent * ln_value`, taking `0 * (-inf)` as zero.
#[inline]
pub(crate) fn pow_ln(exponent: f64, ln_value: f64) -> f64 {
    if exponent == 0.0 {
        0.0
    } else {
        exponent * ln_value
    }
}

/// A pair of non-negative lifetimes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BivariatePoint {
    pub x1: f64,
    pub x2: f64,
}

impl BivariatePoint {
    pub fn new(x1: f64, x2: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite() && x1 >= 0.0 && x2 >= 0.0) {
            return Err(Error::Domain(format!("coordinates must be finite and >= 0, got ({x1}, {x2})")));
        }
        Ok(BivariatePoint { x1, x2 })
    }

    pub(crate) fn new_unchecked(x1: f64, x2: f64) -> Self {
        BivariatePoint { x1, x2 }
    }

    pub fn min(&self) -> f64 {
        self.x1.min(self.x2)
    }

    pub fn max(&self) -> f64 {
        self.x1.max(self.x2)
    }
}

/// Which branch of the joint density a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `x1 < x2`
    Below,
    /// `x1 > x2`
    Above,
    /// `x1 = x2`
    Diagonal,
}

impl Region {
    /// Exact classification.
    pub fn of(pt: BivariatePoint) -> Region {
        Region::classify(pt, 0.0)
    }

    /// Ties are pairs with `|x1 - x2| <= tol`.
    pub fn classify(pt: BivariatePoint, tol: f64) -> Region {
        if pt.x1 < pt.x2 - tol {
            Region::Below
        } else if pt.x1 > pt.x2 + tol {
            Region::Above
        } else {
            Region::Diagonal
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Region::Below => "below",
            Region::Above => "above",
            Region::Diagonal => "diagonal",
        }
    }

    fn mismatch(&self, pt: BivariatePoint) -> Error {
        Error::RegionMismatch {
            region: self.name(),
            x1: pt.x1,
            x2: pt.x2,
        }
    }
}
