//! Reliability quantities of the bivariate model: stress-strength, joint
//! survival, joint (reversed) hazards, joint mean waiting time and the
//! parallel-system vectors (hazard, availability, mean residual life).

use serde::{Deserialize, Serialize};

use crate::begled::{pow_ln, BegledParams, BivariatePoint, Region};
use crate::egled::one_minus_exp;
use crate::error::{Error, Result};
use crate::numerics::quad::{quad_2d_region, quad_finite, quad_semi_infinite_scaled, QuadConfig, Region2d};

/// Closed form `(theta2 + theta3) / (theta1 + theta2 + 2 theta3)`.
///
/// This is the value `P[V1 < V2]` for independent `V_k` distributed as the
/// marginals. It does not equal the strict below-diagonal mass unless
/// `theta1 = theta2`; see [`strict_below_probability`].
pub fn stress_strength(p: &BegledParams) -> f64 {
    (p.theta2() + p.theta3()) / (p.theta1() + p.theta2() + 2.0 * p.theta3())
}

/// `P[X1 < X2]` with ties excluded: the mass of the below-diagonal region.
pub fn strict_below_probability(p: &BegledParams) -> f64 {
    p.theta2() / p.theta_sum()
}

/// `P(X1 > x1, X2 > x2) = 1 - F1(x1) - F2(x2) + F(x1, x2)`.
pub fn joint_reliability(p: &BegledParams, pt: BivariatePoint) -> f64 {
    let f1 = p.marginal_cdf(1, pt.x1).expect("valid coordinate index");
    let f2 = p.marginal_cdf(2, pt.x2).expect("valid coordinate index");
    1.0 - f1 - f2 + p.joint_cdf(pt)
}

/// Basu hazard `f(x1, x2) / R(x1, x2)` on the given branch.
pub fn joint_hazard(p: &BegledParams, pt: BivariatePoint, region: Region) -> Result<f64> {
    let f = p.joint_pdf(pt, region)?;
    let r = joint_reliability(p, pt);
    if !(r > 0.0) {
        return Err(Error::SaturatedSurvival { at: format!("({}, {})", pt.x1, pt.x2) });
    }
    Ok(f / r)
}

/// `f(x1, x2) / F(x1, x2)` on the given branch.
pub fn joint_reversed_hazard(p: &BegledParams, pt: BivariatePoint, region: Region) -> Result<f64> {
    let ln_f = p.ln_joint_pdf(pt, region)?;
    let cdf = p.joint_cdf(pt);
    if !(cdf > 0.0) {
        return Err(Error::DegenerateWindow { at: format!("({}, {})", pt.x1, pt.x2) });
    }
    Ok((ln_f - cdf.ln()).exp())
}

/// `(1 / F(t1, t2)) * ∫_0^t1 ∫_0^t2 F(x1, x2) dx2 dx1`.
pub fn joint_mean_waiting_time(p: &BegledParams, t1: f64, t2: f64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
        return Err(Error::Domain(format!("waiting time needs t1, t2 > 0 (t1={t1}, t2={t2})")));
    }
    let corner = p.joint_cdf(BivariatePoint::new(t1, t2)?);
    if !(corner > 0.0) {
        return Err(Error::DegenerateWindow { at: format!("({t1}, {t2})") });
    }
    let cfg = QuadConfig::new(1e-6, 1e-14, 2000)?;
    let f = |x1: f64, x2: f64| p.joint_cdf(BivariatePoint { x1, x2 });
    let est = quad_2d_region(
        f,
        Region2d::Rectangle {
            lo1: 0.0,
            hi1: t1,
            lo2: 0.0,
            hi2: t2,
        },
        &cfg,
    )?;
    Ok(est.value / corner)
}

/// Whether the parallel-system hazards use the definitional route or the
/// printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HazardForm {
    #[default]
    Definitional,
    /// Closed forms kept verbatim for comparison. `h_min` in this form turns
    /// negative once the theta sum exceeds one.
    PaperForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorHazard {
    /// Hazard of `min(X1, X2)` at `x`.
    pub h_min: f64,
    /// Hazard of component 1 at `age` given component 2 failed at `failed_at`.
    pub h12: f64,
    pub h21: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorAvailability {
    pub v_min: f64,
    pub v12: f64,
    pub v21: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorMrl {
    pub m_min: f64,
    pub m12: f64,
    pub m21: f64,
}

/// Ages at which the parallel-system vectors are evaluated.
///
/// `x` is the common age for the minimum. The conditional entries (`12` and
/// `21`) describe a surviving component at age `age` whose partner failed at
/// `failed_at < age`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemAges {
    pub x: f64,
    pub age: f64,
    pub failed_at: f64,
}

impl SystemAges {
    fn check(&self) -> Result<()> {
        let all = [self.x, self.age, self.failed_at];
        if all.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("ages must be finite and > 0, got {all:?}")));
        }
        if !(self.age > self.failed_at) {
            return Err(Error::Domain(format!(
                "survivor age {} must exceed the failure time {}",
                self.age, self.failed_at
            )));
        }
        Ok(())
    }
}

/// Hazard of `min(X1, X2)`: `f_S / (1 - F_S)`.
pub fn min_hazard(p: &BegledParams, x: f64) -> Result<f64> {
    let f = p.min_pdf(x)?;
    let s = p.min_sf(x);
    if !(s > 0.0) {
        return Err(Error::SaturatedSurvival { at: format!("x = {x}") });
    }
    Ok(f / s)
}

/// Hazard of component `i` at age `xi` after the other failed at `xj < xi`:
/// the hazard of the latent shock `U_i`.
pub fn conditional_hazard(p: &BegledParams, i: usize, xi: f64, xj: f64) -> Result<f64> {
    if !(xi > xj && xj > 0.0) {
        return Err(Error::Domain(format!("conditional hazard needs xi > xj > 0 (xi={xi}, xj={xj})")));
    }
    p.shock(i)?.hazard(xi)
}

/// Printed closed form of the minimum's hazard, verbatim.
pub fn min_hazard_paper_form(p: &BegledParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("hazard needs x > 0, got {x}")));
    }
    let base = p.baseline();
    let sum = p.theta_sum();
    let ln_psi = base.ln_psi(x);
    let numerator = (sum.ln() + base.ln_dpsi(x) - ln_psi).exp();
    let denominator = (pow_ln(sum - 1.0, ln_psi)).exp() - 1.0;
    if denominator == 0.0 {
        return Err(Error::SaturatedSurvival { at: format!("x = {x}") });
    }
    Ok(numerator / denominator)
}

/// Printed closed form of `h12` (or `h21` for `i = 2`), verbatim, reading
/// `f_{X_i}` as the marginal density of `X_i`.
pub fn conditional_hazard_paper_form(p: &BegledParams, i: usize, xi: f64) -> Result<f64> {
    let shock = p.shock(i)?;
    let marginal = p.marginal(i)?;
    let ln_psi = p.baseline().ln_psi(xi);
    let survival = one_minus_exp(pow_ln(shock.theta(), ln_psi));
    if !(survival > 0.0) {
        return Err(Error::SaturatedSurvival { at: format!("x = {xi}") });
    }
    Ok((marginal.ln_pdf(xi)? + pow_ln(p.theta3(), ln_psi)).exp() / survival)
}

pub fn vector_hazard(p: &BegledParams, ages: SystemAges, form: HazardForm) -> Result<VectorHazard> {
    ages.check()?;
    match form {
        HazardForm::Definitional => Ok(VectorHazard {
            h_min: min_hazard(p, ages.x)?,
            h12: conditional_hazard(p, 1, ages.age, ages.failed_at)?,
            h21: conditional_hazard(p, 2, ages.age, ages.failed_at)?,
        }),
        HazardForm::PaperForm => Ok(VectorHazard {
            h_min: min_hazard_paper_form(p, ages.x)?,
            h12: conditional_hazard_paper_form(p, 1, ages.age)?,
            h21: conditional_hazard_paper_form(p, 2, ages.age)?,
        }),
    }
}

fn availability_config() -> QuadConfig {
    QuadConfig {
        rel_tol: 1e-6,
        abs_tol: 1e-300,
        max_subdivisions: 2000,
    }
}

/// Residual mean `∫_x^∞ (y - x) w(y) dy / ∫_x^∞ w(y) dy` for a weight `w`.
fn residual_mean<W: Fn(f64) -> f64>(w: W, x: f64, scale: f64, mass: Option<f64>) -> Result<f64> {
    let cfg = availability_config();
    let mass = match mass {
        Some(m) => m,
        None => quad_semi_infinite_scaled(&w, x, scale, &cfg)?.value,
    };
    if !(mass > 0.0) {
        return Err(Error::SaturatedSurvival { at: format!("x = {x}") });
    }
    let first = quad_semi_infinite_scaled(|y| (y - x) * w(y), x, scale, &cfg)?.value;
    Ok((first / mass).max(0.0))
}

/// Mean residual life of `min(X1, X2)` at age `x`.
pub fn min_residual_life(p: &BegledParams, x: f64) -> Result<f64> {
    let scale = p.max_law().median().max(x * 0.1);
    let tail = p.min_sf(x);
    residual_mean(|y| p.min_pdf(y).unwrap_or(0.0), x, scale, Some(tail))
}

/// Mean residual life of component `i` at age `xi` given the other failed at
/// `xj < xi`, from the joint density on the corresponding branch.
pub fn conditional_residual_life(p: &BegledParams, i: usize, xi: f64, xj: f64) -> Result<f64> {
    if !(xi > xj && xj > 0.0) {
        return Err(Error::Domain(format!("conditional residual life needs xi > xj > 0 (xi={xi}, xj={xj})")));
    }
    let density = |y: f64| {
        let (pt, region) = if i == 1 {
            (BivariatePoint { x1: y, x2: xj }, Region::Above)
        } else {
            (BivariatePoint { x1: xj, x2: y }, Region::Below)
        };
        p.joint_pdf(pt, region).unwrap_or(0.0)
    };
    let scale = p.shock(i)?.median().max(xi * 0.1);
    residual_mean(density, xi, scale, None)
}

/// Mean residual lives, taken as availability minus age so that the two
/// vectors agree exactly.
pub fn vector_mrl(p: &BegledParams, ages: SystemAges) -> Result<VectorMrl> {
    let v = vector_availability(p, ages)?;
    Ok(VectorMrl {
        m_min: v.v_min - ages.x,
        m12: v.v12 - ages.age,
        m21: v.v21 - ages.age,
    })
}

/// Vitality vector: each entry is the age plus the matching mean residual life.
pub fn vector_availability(p: &BegledParams, ages: SystemAges) -> Result<VectorAvailability> {
    ages.check()?;
    Ok(VectorAvailability {
        v_min: ages.x + min_residual_life(p, ages.x)?,
        v12: ages.age + conditional_residual_life(p, 1, ages.age, ages.failed_at)?,
        v21: ages.age + conditional_residual_life(p, 2, ages.age, ages.failed_at)?,
    })
}

/// `E[min(X1, X2)]`.
pub fn min_mean(p: &BegledParams) -> Result<f64> {
    let cfg = availability_config();
    let scale = p.max_law().median();
    Ok(quad_semi_infinite_scaled(|y| p.min_sf(y), 0.0, scale, &cfg)?.value)
}

/// `∫_0^t F(x) dx / F(t)` for a single coordinate; used as an independence oracle.
pub fn marginal_waiting_integral(p: &BegledParams, k: usize, t: f64) -> Result<f64> {
    let m = p.marginal(k)?;
    Ok(quad_finite(|x| m.cdf(x), 0.0, t, &QuadConfig::default())?.value)
}
