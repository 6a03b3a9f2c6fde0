use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::Result;
use crate::estimation::{fit_mle, information_criteria, partition_sample, BivariateModel, FitConfig, FitResult, IcSet};

use super::data::Dataset;

/// Ordered `name -> value` pairs serialized as a JSON object.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedValues(pub Vec<(String, f64)>);

impl Serialize for NamedValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// JSON shape of a bivariate fit.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub model: String,
    pub params: NamedValues,
    pub neg_log_lik: f64,
    pub ic: IcSet,
    pub converged: bool,
    pub n: usize,
    pub partition: [usize; 3],
}

impl FitReport {
    pub fn new(fit: &FitResult, ic: IcSet) -> FitReport {
        FitReport {
            model: fit.model.name().to_string(),
            params: NamedValues(fit.free_params().into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
            neg_log_lik: fit.neg_log_lik,
            ic,
            converged: fit.converged,
            n: fit.n,
            partition: fit.partition,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model      {}", self.model);
        let _ = writeln!(
            out,
            "n          {}  (below {}, above {}, tied {})",
            self.n, self.partition[0], self.partition[1], self.partition[2]
        );
        for (k, v) in &self.params.0 {
            let _ = writeln!(out, "{k:<10} {v:>14.6}");
        }
        let _ = writeln!(out, "{:<10} {:>14.4}", "-L", self.neg_log_lik);
        let _ = writeln!(out, "{:<10} {:>14.4}", "AIC", self.ic.aic);
        let _ = writeln!(out, "{:<10} {:>14.4}", "CAIC", self.ic.caic);
        let _ = writeln!(out, "{:<10} {:>14.4}", "HQIC", self.ic.hqic);
        let _ = writeln!(out, "converged  {}", self.converged);
        out
    }
}

pub fn cmd_fit(data: &Dataset, model: BivariateModel, tie_tol: f64, config: &FitConfig) -> Result<(FitResult, FitReport)> {
    let s = partition_sample(&data.pairs, tie_tol)?;
    let fit = fit_mle(&s, model, None, config)?;
    let ic = information_criteria(&fit, s.len())?;
    let report = FitReport::new(&fit, ic);
    Ok((fit, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_key_order_is_stable() {
        let v = NamedValues(vec![("b".into(), 1.0), ("a".into(), 2.0)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"b":1.0,"a":2.0}"#);
    }
}
