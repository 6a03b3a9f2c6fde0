//! Point evaluation of the distribution and reliability functions.

use std::str::FromStr;

use serde_json::{json, Value};

use crate::begled::{BegledParams, BivariatePoint, Region};
use crate::egled::EgledParams;
use crate::error::{Error, Result};
use crate::reliability::{
    joint_hazard, joint_mean_waiting_time, joint_reliability, joint_reversed_hazard, stress_strength,
    vector_availability, vector_hazard, vector_mrl, HazardForm, SystemAges,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalFunction {
    Cdf,
    Pdf,
    JointCdf,
    JointPdf,
    Hazard,
    ReversedHazard,
    Reliability,
    StressStrength,
    Mwt,
    VectorHazard,
    VectorAvailability,
    VectorMrl,
    MedianCorrelation,
    TieProb,
    MaxCdf,
    MinCdf,
    Moment,
    Quantile,
}

impl EvalFunction {
    pub const ALL: [EvalFunction; 18] = [
        EvalFunction::Cdf,
        EvalFunction::Pdf,
        EvalFunction::JointCdf,
        EvalFunction::JointPdf,
        EvalFunction::Hazard,
        EvalFunction::ReversedHazard,
        EvalFunction::Reliability,
        EvalFunction::StressStrength,
        EvalFunction::Mwt,
        EvalFunction::VectorHazard,
        EvalFunction::VectorAvailability,
        EvalFunction::VectorMrl,
        EvalFunction::MedianCorrelation,
        EvalFunction::TieProb,
        EvalFunction::MaxCdf,
        EvalFunction::MinCdf,
        EvalFunction::Moment,
        EvalFunction::Quantile,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EvalFunction::Cdf => "cdf",
            EvalFunction::Pdf => "pdf",
            EvalFunction::JointCdf => "joint-cdf",
            EvalFunction::JointPdf => "joint-pdf",
            EvalFunction::Hazard => "hazard",
            EvalFunction::ReversedHazard => "reversed-hazard",
            EvalFunction::Reliability => "reliability",
            EvalFunction::StressStrength => "stress-strength",
            EvalFunction::Mwt => "mwt",
            EvalFunction::VectorHazard => "vector-hazard",
            EvalFunction::VectorAvailability => "vector-availability",
            EvalFunction::VectorMrl => "vector-mrl",
            EvalFunction::MedianCorrelation => "median-correlation",
            EvalFunction::TieProb => "tie-prob",
            EvalFunction::MaxCdf => "max-cdf",
            EvalFunction::MinCdf => "min-cdf",
            EvalFunction::Moment => "moment",
            EvalFunction::Quantile => "quantile",
        }
    }
}

impl FromStr for EvalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EvalFunction::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown function '{s}'")))
    }
}

/// Inputs for [`cmd_eval`]. Unused fields are ignored by each function.
///
/// With one theta, `hazard`, `reversed-hazard` and `mwt` use the univariate
/// law; with three they use the bivariate one.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub theta: Vec<f64>,
    /// Evaluation points for univariate functions and ages for the minimum.
    pub x: Vec<f64>,
    pub x1: Option<f64>,
    pub x2: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub order: u32,
    pub prob: Vec<f64>,
    pub paper_form: bool,
}

impl Default for EvalRequest {
    fn default() -> Self {
        EvalRequest {
            alpha: 1.0,
            a: 1.0,
            b: 0.0,
            theta: vec![1.0],
            x: Vec::new(),
            x1: None,
            x2: None,
            t1: None,
            t2: None,
            order: 1,
            prob: Vec::new(),
            paper_form: false,
        }
    }
}

impl EvalRequest {
    fn univariate(&self) -> Result<EgledParams> {
        match self.theta.as_slice() {
            [t] => EgledParams::new(self.alpha, self.a, self.b, *t),
            _ => Err(Error::Argument(format!(
                "this function needs exactly one theta, got {}",
                self.theta.len()
            ))),
        }
    }

    fn bivariate(&self) -> Result<BegledParams> {
        match self.theta.as_slice() {
            [t1, t2, t3] => BegledParams::new(self.alpha, self.a, self.b, *t1, *t2, *t3),
            _ => Err(Error::Argument(format!(
                "this function needs three thetas, got {}",
                self.theta.len()
            ))),
        }
    }

    fn xs(&self) -> Result<&[f64]> {
        if self.x.is_empty() {
            return Err(Error::Argument("missing --x".into()));
        }
        Ok(&self.x)
    }

    fn point(&self) -> Result<BivariatePoint> {
        match (self.x1, self.x2) {
            (Some(a), Some(b)) => BivariatePoint::new(a, b),
            _ => Err(Error::Argument("missing --x1/--x2".into())),
        }
    }

    fn ages(&self) -> Result<SystemAges> {
        let x = *self.xs()?.first().expect("xs is non-empty");
        match (self.x1, self.x2) {
            (Some(age), Some(failed_at)) => Ok(SystemAges { x, age, failed_at }),
            _ => Err(Error::Argument("missing --x1 (survivor age) / --x2 (failure time)".into())),
        }
    }
}

fn map_xs<F: Fn(f64) -> Result<f64>>(xs: &[f64], f: F) -> Result<Value> {
    let values = xs.iter().map(|&x| f(x)).collect::<Result<Vec<f64>>>()?;
    Ok(if values.len() == 1 { json!(values[0]) } else { json!(values) })
}

/// Evaluates one function and returns `{"fn": name, "value": ...}`.
pub fn cmd_eval(function: EvalFunction, req: &EvalRequest) -> Result<Value> {
    let value = match function {
        EvalFunction::Cdf => {
            let p = req.univariate()?;
            map_xs(req.xs()?, |x| Ok(p.cdf(x)))?
        }
        EvalFunction::Pdf => {
            let p = req.univariate()?;
            map_xs(req.xs()?, |x| p.pdf(x))?
        }
        EvalFunction::Quantile => {
            let p = req.univariate()?;
            if req.prob.is_empty() {
                return Err(Error::Argument("missing --prob".into()));
            }
            map_xs(&req.prob, |q| p.quantile(q))?
        }
        EvalFunction::Moment => json!(req.univariate()?.moment(req.order)?),
        EvalFunction::Hazard | EvalFunction::ReversedHazard if req.theta.len() == 1 => {
            let p = req.univariate()?;
            if function == EvalFunction::Hazard {
                map_xs(req.xs()?, |x| p.hazard(x))?
            } else {
                map_xs(req.xs()?, |x| p.reversed_hazard(x))?
            }
        }
        EvalFunction::Hazard => {
            let pt = req.point()?;
            json!(joint_hazard(&req.bivariate()?, pt, Region::of(pt))?)
        }
        EvalFunction::ReversedHazard => {
            let pt = req.point()?;
            json!(joint_reversed_hazard(&req.bivariate()?, pt, Region::of(pt))?)
        }
        EvalFunction::Mwt if req.theta.len() == 1 => {
            let p = req.univariate()?;
            map_xs(req.xs()?, |t| p.mean_waiting_time(t))?
        }
        EvalFunction::Mwt => {
            let (t1, t2) = match (req.t1, req.t2) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Argument("missing --t1/--t2".into())),
            };
            json!(joint_mean_waiting_time(&req.bivariate()?, t1, t2)?)
        }
        EvalFunction::JointCdf => json!(req.bivariate()?.joint_cdf(req.point()?)),
        EvalFunction::JointPdf => {
            let pt = req.point()?;
            json!(req.bivariate()?.joint_pdf(pt, Region::of(pt))?)
        }
        EvalFunction::Reliability => json!(joint_reliability(&req.bivariate()?, req.point()?)),
        EvalFunction::StressStrength => json!(stress_strength(&req.bivariate()?)),
        EvalFunction::MedianCorrelation => json!(req.bivariate()?.median_correlation()),
        EvalFunction::TieProb => json!(req.bivariate()?.tie_probability()),
        EvalFunction::MaxCdf => {
            let p = req.bivariate()?;
            map_xs(req.xs()?, |t| Ok(p.max_cdf(t)))?
        }
        EvalFunction::MinCdf => {
            let p = req.bivariate()?;
            map_xs(req.xs()?, |t| Ok(p.min_cdf(t)))?
        }
        EvalFunction::VectorHazard => {
            let form = if req.paper_form {
                HazardForm::PaperForm
            } else {
                HazardForm::Definitional
            };
            serde_json::to_value(vector_hazard(&req.bivariate()?, req.ages()?, form)?).expect("plain struct")
        }
        EvalFunction::VectorAvailability => {
            serde_json::to_value(vector_availability(&req.bivariate()?, req.ages()?)?).expect("plain struct")
        }
        EvalFunction::VectorMrl => {
            serde_json::to_value(vector_mrl(&req.bivariate()?, req.ages()?)?).expect("plain struct")
        }
    };
    Ok(json!({ "fn": function.name(), "value": value }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three(t: [f64; 3]) -> EvalRequest {
        EvalRequest {
            theta: t.to_vec(),
            ..EvalRequest::default()
        }
    }

    #[test]
    fn closed_form_examples() {
        let v = cmd_eval(EvalFunction::StressStrength, &three([1.0, 2.0, 3.0])).unwrap();
        assert!((v["value"].as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-12);
        let v = cmd_eval(EvalFunction::TieProb, &three([1.0, 1.0, 1.0])).unwrap();
        assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn every_name_parses() {
        for f in EvalFunction::ALL {
            assert_eq!(f.name().parse::<EvalFunction>().unwrap(), f);
        }
        assert!("nope".parse::<EvalFunction>().is_err());
    }

    #[test]
    fn every_function_evaluates() {
        let base = EvalRequest {
            alpha: 1.5,
            a: 0.5,
            b: 0.7,
            x: vec![0.5],
            x1: Some(1.0),
            x2: Some(0.4),
            t1: Some(1.0),
            t2: Some(2.0),
            prob: vec![0.5],
            ..EvalRequest::default()
        };
        for f in EvalFunction::ALL {
            let univariate = matches!(
                f,
                EvalFunction::Cdf | EvalFunction::Pdf | EvalFunction::Moment | EvalFunction::Quantile
            );
            let req = EvalRequest {
                theta: if univariate { vec![2.1] } else { vec![0.8, 1.2, 1.3] },
                ..base.clone()
            };
            let v = cmd_eval(f, &req).unwrap_or_else(|e| panic!("{}: {e}", f.name()));
            assert!(!v["value"].is_null(), "{}", f.name());
        }
    }

    #[test]
    fn joint_cdf_on_diagonal_matches_max_law() {
        let req = EvalRequest {
            alpha: 1.5,
            a: 0.5,
            b: 0.7,
            theta: vec![0.8, 1.2, 1.3],
            x1: Some(0.9),
            x2: Some(0.9),
            ..EvalRequest::default()
        };
        let v = cmd_eval(EvalFunction::JointCdf, &req).unwrap()["value"].as_f64().unwrap();
        let expected = EgledParams::new(1.5, 0.5, 0.7, 3.3).unwrap().cdf(0.9);
        assert!((v - expected).abs() < 1e-15);
    }
}
