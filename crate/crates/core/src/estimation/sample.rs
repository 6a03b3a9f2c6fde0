use crate::begled::{BivariatePoint, Region};
use crate::error::{Error, Result};

/// Bivariate observations split into below-diagonal, above-diagonal and tied
/// index sets.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedSample {
    pairs: Vec<BivariatePoint>,
    below: Vec<usize>,
    above: Vec<usize>,
    diagonal: Vec<usize>,
    tol: f64,
}

/// Classifies each pair with [`Region::classify`] at tie tolerance `tol`.
pub fn partition_sample(pairs: &[BivariatePoint], tol: f64) -> Result<PartitionedSample> {
    if pairs.is_empty() {
        return Err(Error::Argument("cannot partition an empty sample".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::Argument(format!("tie tolerance must be >= 0, got {tol}")));
    }
    if let Some((i, p)) = pairs
        .iter()
        .enumerate()
        .find(|(_, p)| !(p.x1 >= 0.0 && p.x2 >= 0.0 && p.x1.is_finite() && p.x2.is_finite()))
    {
        return Err(Error::Argument(format!("pair {i} has invalid coordinates ({}, {})", p.x1, p.x2)));
    }
    let mut s = PartitionedSample {
        pairs: pairs.to_vec(),
        below: Vec::new(),
        above: Vec::new(),
        diagonal: Vec::new(),
        tol,
    };
    for (i, p) in pairs.iter().enumerate() {
        match Region::classify(*p, tol) {
            Region::Below => s.below.push(i),
            Region::Above => s.above.push(i),
            Region::Diagonal => s.diagonal.push(i),
        }
    }
    Ok(s)
}

impl PartitionedSample {
    pub fn pairs(&self) -> &[BivariatePoint] {
        &self.pairs
    }

    pub fn below(&self) -> &[usize] {
        &self.below
    }

    pub fn above(&self) -> &[usize] {
        &self.above
    }

    pub fn diagonal(&self) -> &[usize] {
        &self.diagonal
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `[n1, n2, n3]`.
    pub fn counts(&self) -> [usize; 3] {
        [self.below.len(), self.above.len(), self.diagonal.len()]
    }

    /// Points paired with their likelihood branch, in sample order.
    pub fn classified(&self) -> impl Iterator<Item = (BivariatePoint, Region)> + '_ {
        self.pairs.iter().map(move |p| (*p, Region::classify(*p, self.tol)))
    }

    pub fn column(&self, k: usize) -> Vec<f64> {
        self.pairs.iter().map(|p| if k == 1 { p.x1 } else { p.x2 }).collect()
    }
}
