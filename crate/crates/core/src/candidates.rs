//! Symmetric point-adding rules for any number of points.
//!
//! Each rule here depends only on the unordered set of input points, so it
//! is a natural candidate for adding a point to unordered configurations.
//! None of them is a section once `n ≥ 3` in the plane; the obstruction
//! module exhibits how each one fails.

use crate::geom::{Configuration, Point};
use crate::sections::{Section, SectionError};

/// `p_0` = centroid of the input points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Centroid;

impl Section for Centroid {
    fn name(&self) -> String {
        "centroid".into()
    }

    fn check_arity(&self, _n: usize) -> Result<(), SectionError> {
        Ok(())
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        Ok(c.centroid())
    }

    fn claims_equivariance(&self) -> bool {
        true
    }
}

/// `p_0 = factor · centroid`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledCentroid {
    factor: f64,
}

impl ScaledCentroid {
    pub fn new(factor: f64) -> Self {
        Self { factor }
    }
}

impl Section for ScaledCentroid {
    fn name(&self) -> String {
        if self.factor == 0.5 {
            "half-centroid".into()
        } else {
            format!("scaled-centroid:{}", self.factor)
        }
    }

    fn check_arity(&self, _n: usize) -> Result<(), SectionError> {
        Ok(())
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        Ok(self.factor * &c.centroid())
    }

    fn claims_equivariance(&self) -> bool {
        true
    }
}

/// `p_0 = factor · centroid + shift`. The shift breaks rotational symmetry,
/// so this rule avoids the collisions forced on the centred symmetric
/// probes and fails through its winding coefficients instead.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedCentroid {
    factor: f64,
    /// Leading coordinates of the shift; missing coordinates are zero.
    shift: Vec<f64>,
}

impl ShiftedCentroid {
    pub fn new(factor: f64, shift: Vec<f64>) -> Self {
        Self { factor, shift }
    }
}

impl Default for ShiftedCentroid {
    fn default() -> Self {
        Self::new(0.5, vec![0.1, 0.07])
    }
}

impl Section for ShiftedCentroid {
    fn name(&self) -> String {
        "shifted-centroid".into()
    }

    fn check_arity(&self, _n: usize) -> Result<(), SectionError> {
        Ok(())
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        let g = c.centroid();
        Ok(Point::new(
            g.coords()
                .iter()
                .enumerate()
                .map(|(k, x)| self.factor * x + self.shift.get(k).copied().unwrap_or(0.0))
                .collect(),
        ))
    }

    fn claims_equivariance(&self) -> bool {
        true
    }
}
