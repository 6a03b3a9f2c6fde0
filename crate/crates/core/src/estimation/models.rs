use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::begled::BegledParams;
use crate::egled::EgledParams;
use crate::error::{Error, Result};

/// The bivariate model and its nested special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BivariateModel {
    /// All six parameters free.
    Begled,
    /// `alpha = 1`.
    Bglfr,
    /// `alpha = 1`, `b = 0`.
    Bvge,
}

impl BivariateModel {
    pub const ALL: [BivariateModel; 3] = [BivariateModel::Begled, BivariateModel::Bglfr, BivariateModel::Bvge];

    pub fn k(&self) -> usize {
        match self {
            BivariateModel::Begled => 6,
            BivariateModel::Bglfr => 5,
            BivariateModel::Bvge => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BivariateModel::Begled => "BEGLED",
            BivariateModel::Bglfr => "BGLFR",
            BivariateModel::Bvge => "BVGE",
        }
    }

    /// Names of the free parameters, in the order used by [`BivariateModel::expand`].
    pub fn free_names(&self) -> &'static [&'static str] {
        match self {
            BivariateModel::Begled => &["alpha", "a", "b", "theta1", "theta2", "theta3"],
            BivariateModel::Bglfr => &["a", "b", "theta1", "theta2", "theta3"],
            BivariateModel::Bvge => &["a", "theta1", "theta2", "theta3"],
        }
    }

    /// Full parameter vector from the free values.
    pub fn expand(&self, free: &[f64]) -> Result<BegledParams> {
        if free.len() != self.k() {
            return Err(Error::Argument(format!(
                "{} has {} free parameters, got {}",
                self.name(),
                self.k(),
                free.len()
            )));
        }
        match self {
            BivariateModel::Begled => BegledParams::new(free[0], free[1], free[2], free[3], free[4], free[5]),
            BivariateModel::Bglfr => BegledParams::new(1.0, free[0], free[1], free[2], free[3], free[4]),
            BivariateModel::Bvge => BegledParams::new(1.0, free[0], 0.0, free[1], free[2], free[3]),
        }
    }

    pub fn free_values(&self, p: &BegledParams) -> Vec<f64> {
        let v = p.to_array();
        match self {
            BivariateModel::Begled => v.to_vec(),
            BivariateModel::Bglfr => v[1..].to_vec(),
            BivariateModel::Bvge => vec![v[1], v[3], v[4], v[5]],
        }
    }

    /// Whether `self` is a special case of `other`.
    pub fn nested_in(&self, other: BivariateModel) -> bool {
        self.k() < other.k()
    }

    /// The univariate family of each margin under this model.
    pub fn marginal_model(&self) -> MarginalModel {
        match self {
            BivariateModel::Begled => MarginalModel::Egle,
            BivariateModel::Bglfr => MarginalModel::Glfr,
            BivariateModel::Bvge => MarginalModel::GenExponential,
        }
    }
}

impl fmt::Display for BivariateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BivariateModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "begled" | "begle" => Ok(BivariateModel::Begled),
            "bglfr" => Ok(BivariateModel::Bglfr),
            "bvge" => Ok(BivariateModel::Bvge),
            _ => Err(Error::Argument(format!("unknown bivariate model '{s}'"))),
        }
    }
}

/// Univariate members of the family used for the margins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MarginalModel {
    /// `alpha = theta = 1`, `b = 0`.
    Exponential,
    /// `alpha = 1`, `b = 0`.
    GenExponential,
    /// `alpha = 1`.
    Glfr,
    Egle,
}

impl MarginalModel {
    pub const ALL: [MarginalModel; 4] = [
        MarginalModel::Exponential,
        MarginalModel::GenExponential,
        MarginalModel::Glfr,
        MarginalModel::Egle,
    ];

    pub fn k(&self) -> usize {
        match self {
            MarginalModel::Exponential => 1,
            MarginalModel::GenExponential => 2,
            MarginalModel::Glfr => 3,
            MarginalModel::Egle => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MarginalModel::Exponential => "E",
            MarginalModel::GenExponential => "GE",
            MarginalModel::Glfr => "GLFR",
            MarginalModel::Egle => "EGLE",
        }
    }

    pub fn free_names(&self) -> &'static [&'static str] {
        match self {
            MarginalModel::Exponential => &["a"],
            MarginalModel::GenExponential => &["a", "theta"],
            MarginalModel::Glfr => &["a", "b", "theta"],
            MarginalModel::Egle => &["alpha", "a", "b", "theta"],
        }
    }

    pub fn expand(&self, free: &[f64]) -> Result<EgledParams> {
        if free.len() != self.k() {
            return Err(Error::Argument(format!(
                "{} has {} free parameters, got {}",
                self.name(),
                self.k(),
                free.len()
            )));
        }
        match self {
            MarginalModel::Exponential => EgledParams::new(1.0, free[0], 0.0, 1.0),
            MarginalModel::GenExponential => EgledParams::new(1.0, free[0], 0.0, free[1]),
            MarginalModel::Glfr => EgledParams::new(1.0, free[0], free[1], free[2]),
            MarginalModel::Egle => EgledParams::new(free[0], free[1], free[2], free[3]),
        }
    }

    pub fn free_values(&self, p: &EgledParams) -> Vec<f64> {
        match self {
            MarginalModel::Exponential => vec![p.a()],
            MarginalModel::GenExponential => vec![p.a(), p.theta()],
            MarginalModel::Glfr => vec![p.a(), p.b(), p.theta()],
            MarginalModel::Egle => vec![p.alpha(), p.a(), p.b(), p.theta()],
        }
    }

    pub fn nested_in(&self, other: MarginalModel) -> bool {
        self.k() < other.k()
    }
}

impl fmt::Display for MarginalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MarginalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "e" | "exp" | "exponential" => Ok(MarginalModel::Exponential),
            "ge" => Ok(MarginalModel::GenExponential),
            "glfr" => Ok(MarginalModel::Glfr),
            "egle" | "egled" => Ok(MarginalModel::Egle),
            _ => Err(Error::Argument(format!("unknown marginal model '{s}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_round_trip() {
        for m in BivariateModel::ALL {
            let free: Vec<f64> = (0..m.k()).map(|i| 0.5 + i as f64).collect();
            let p = m.expand(&free).unwrap();
            assert_eq!(m.free_values(&p), free);
            assert_eq!(m.free_names().len(), m.k());
        }
        for m in MarginalModel::ALL {
            let free: Vec<f64> = (0..m.k()).map(|i| 0.5 + i as f64).collect();
            assert_eq!(m.free_values(&m.expand(&free).unwrap()), free);
        }
        assert!(BivariateModel::Begled.expand(&[1.0]).is_err());
    }

    #[test]
    fn nesting_and_parsing() {
        assert!(BivariateModel::Bvge.nested_in(BivariateModel::Begled));
        assert!(!BivariateModel::Begled.nested_in(BivariateModel::Bvge));
        assert_eq!("BVGE".parse::<BivariateModel>().unwrap(), BivariateModel::Bvge);
        assert!("mobe".parse::<BivariateModel>().is_err());
        assert_eq!("egle".parse::<MarginalModel>().unwrap(), MarginalModel::Egle);
    }
}
