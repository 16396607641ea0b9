//! Points, ordered configurations and the symmetric-group action on them.
//!
//! The ambient space is always the closed unit ball centred at the origin.
//! A [`Configuration`] is an ordered tuple of pairwise distinct points in
//! that ball; construction validates both conditions, so every value of the
//! type is a point of the ordered configuration space.
//!
//! Labels: the points of an `n`-configuration are labelled `1..=n`. The
//! output of a section is an `(n+1)`-configuration whose slot 0 holds the
//! added point, so positions and labels coincide there.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tolerance::EPS_BALL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("configuration has no points")]
    Empty,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("points[{index}] has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("points[{index}] has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("points[{index}] has norm {norm}, outside the closed unit ball")]
    OutsideBall { index: usize, norm: f64 },
    #[error("points[{first}] and points[{second}] coincide")]
    Coincident { first: usize, second: usize },
    #[error("label {label} out of range for {n} points")]
    BadLabel { label: usize, n: usize },
    #[error("operation needs at least two points, got {n}")]
    TooFewPoints { n: usize },
    #[error("malformed permutation: {0}")]
    BadPermutation(String),
    #[error("shape mismatch: ({n_a} points, dim {m_a}) vs ({n_b} points, dim {m_b})")]
    ShapeMismatch {
        n_a: usize,
        m_a: usize,
        n_b: usize,
        m_b: usize,
    },
}

/// A point of `R^m`. Containment in the ball is a property of
/// configurations, not of individual points, because intermediate images
/// (for instance under the chord scaling) may leave the ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `(1 - w) * self + w * other`, evaluated in that form so that
    /// `w = 0` and `w = 1` reproduce the endpoints exactly.
    pub fn lerp(&self, other: &Point, w: f64) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| (1.0 - w) * a + w * b)
                .collect(),
        )
    }

    /// Lexicographic order on coordinates, total on finite values.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.coords.len().cmp(&other.coords.len())
    }

    pub fn bits_eq(&self, other: &Point) -> bool {
        self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point::new(coords.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Mul<&Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: &Point) -> Point {
        Point::new(rhs.coords.iter().map(|a| self * a).collect())
    }
}

/// An ordered configuration of pairwise distinct points in the closed unit
/// ball of `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration")]
pub struct Configuration {
    dim: usize,
    points: Vec<Point>,
}

/// Unvalidated wire form `{ "dim": m, "points": [[...], ...] }`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfiguration {
    dim: usize,
    points: Vec<Point>,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = GeomError;
    fn try_from(raw: RawConfiguration) -> Result<Self, GeomError> {
        Configuration::new(raw.dim, raw.points)
    }
}

impl Configuration {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self, GeomError> {
        if dim == 0 {
            return Err(GeomError::ZeroDimension);
        }
        if points.is_empty() {
            return Err(GeomError::Empty);
        }
        for (index, p) in points.iter().enumerate() {
            if p.dim() != dim {
                return Err(GeomError::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.dim(),
                });
            }
            if p.coords().iter().any(|c| !c.is_finite()) {
                return Err(GeomError::NonFinite { index });
            }
            let norm = p.norm();
            if norm > 1.0 + EPS_BALL {
                return Err(GeomError::OutsideBall { index, norm });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].distance(&points[j]) <= 0.0 {
                    return Err(GeomError::Coincident {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(Self { dim, points })
    }

    /// Convenience constructor from coordinate rows; the dimension is taken
    /// from the first row.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, GeomError> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let points = rows
            .iter()
            .map(|r| Point::new(r.as_ref().to_vec()))
            .collect();
        Self::new(dim, points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points in positional order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// The point carrying 1-based label `label`.
    pub fn labelled(&self, label: usize) -> Result<&Point, GeomError> {
        self.slot_of(label).map(|k| &self.points[k])
    }

    fn slot_of(&self, label: usize) -> Result<usize, GeomError> {
        if label == 0 || label > self.points.len() {
            Err(GeomError::BadLabel {
                label,
                n: self.points.len(),
            })
        } else {
            Ok(label - 1)
        }
    }

    /// Bit-level equality of every coordinate.
    pub fn bits_eq(&self, other: &Configuration) -> bool {
        self.dim == other.dim
            && self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| a.bits_eq(b))
    }

    /// Points sorted lexicographically: a canonical representative of the
    /// unordered configuration.
    pub fn canonical_form(&self) -> Vec<Point> {
        let mut sorted = self.points.clone();
        sorted.sort_by(|a, b| a.lex_cmp(b));
        sorted
    }

    /// Equality as unordered configurations, up to `tol` per point in the
    /// canonical order.
    pub fn unordered_eq(&self, other: &Configuration, tol: f64) -> bool {
        if self.dim != other.dim || self.len() != other.len() {
            return false;
        }
        self.canonical_form()
            .iter()
            .zip(other.canonical_form().iter())
            .all(|(a, b)| a.distance(b) <= tol)
    }

    pub fn centroid(&self) -> Point {
        let mut acc = vec![0.0; self.dim];
        for p in &self.points {
            for (a, c) in acc.iter_mut().zip(p.coords()) {
                *a += c;
            }
        }
        let n = self.points.len() as f64;
        Point::new(acc.into_iter().map(|a| a / n).collect())
    }
}

/// Smallest distance between two points of `c`; `+inf` for a single point.
pub fn min_pairwise_gap(c: &Configuration) -> f64 {
    let pts = c.points();
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            best = best.min(pts[i].distance(&pts[j]));
        }
    }
    best
}

/// `d_i`: distance from the point labelled `label` to its nearest neighbour.
pub fn nearest_neighbor_distance(c: &Configuration, label: usize) -> Result<f64, GeomError> {
    if c.len() < 2 {
        return Err(GeomError::TooFewPoints { n: c.len() });
    }
    let own = c.slot_of(label)?;
    let p = &c.points()[own];
    Ok(c.points()
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != own)
        .map(|(_, q)| p.distance(q))
        .fold(f64::INFINITY, f64::min))
}

/// Sup metric on `(ball)^n`: the largest displacement of a single slot.
pub fn config_distance(a: &Configuration, b: &Configuration) -> Result<f64, GeomError> {
    if a.len() != b.len() || a.dim() != b.dim() {
        return Err(GeomError::ShapeMismatch {
            n_a: a.len(),
            m_a: a.dim(),
            n_b: b.len(),
            m_b: b.dim(),
        });
    }
    Ok(a.points()
        .iter()
        .zip(b.points())
        .map(|(p, q)| p.distance(q))
        .fold(0.0, f64::max))
}

/// A permutation of `n` letters, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// Builds `σ` from its 0-based image list: `σ(i) = images[i]`.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GeomError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &k in &images {
            if k >= n {
                return Err(GeomError::BadPermutation(format!(
                    "image {k} out of range for {n} letters"
                )));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(GeomError::BadPermutation(format!("image {k} repeated")));
            }
        }
        Ok(Self { images })
    }

    /// Builds `σ` from 1-based images, as in cycle-free notation `[σ(1), …, σ(n)]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self, GeomError> {
        if images.contains(&0) {
            return Err(GeomError::BadPermutation(
                "1-based images must be positive".into(),
            ));
        }
        Self::from_images(images.iter().map(|k| k - 1).collect())
    }

    /// The transposition of 1-based labels `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self, GeomError> {
        if a == 0 || b == 0 || a > n || b > n {
            return Err(GeomError::BadPermutation(format!(
                "transposition ({a} {b}) out of range for {n} letters"
            )));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a - 1, b - 1);
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &k)| i == k)
    }

    /// 0-based image of 0-based `i`.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`, i.e. `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, GeomError> {
        if self.len() != other.len() {
            return Err(GeomError::BadPermutation(format!(
                "cannot compose permutations of {} and {} letters",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&k| self.images[k]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &k) in self.images.iter().enumerate() {
            images[k] = i;
        }
        Permutation { images }
    }

    /// The permutation of `n + 1` letters fixing slot 0 and acting as
    /// `self` on slots `1..=n`.
    pub fn fixing_slot_zero(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.len() + 1);
        images.push(0);
        images.extend(self.images.iter().map(|k| k + 1));
        Permutation { images }
    }
}

/// `σ · c`: the point in slot `i` moves to slot `σ(i)`.
pub fn apply_permutation(c: &Configuration, sigma: &Permutation) -> Result<Configuration, GeomError> {
    if sigma.len() != c.len() {
        return Err(GeomError::BadPermutation(format!(
            "permutation of {} letters applied to {} points",
            sigma.len(),
            c.len()
        )));
    }
    let mut slots: Vec<Option<Point>> = vec![None; c.len()];
    for (i, p) in c.points().iter().enumerate() {
        slots[sigma.image(i)] = Some(p.clone());
    }
    // A bijection fills every slot, and permuting preserves validity.
    Ok(Configuration {
        dim: c.dim(),
        points: slots.into_iter().map(|p| p.expect("bijection")).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(rows: &[[f64; 2]]) -> Configuration {
        Configuration::from_rows(rows).unwrap()
    }

    #[test]
    fn gap_of_two_points_at_unit_distance() {
        assert_eq!(min_pairwise_gap(&cfg(&[[0.0, 0.0], [1.0, 0.0]])), 1.0);
    }

    #[test]
    fn gap_picks_direct_minimum() {
        let c = cfg(&[[0.0, 0.0], [0.2, 0.0], [1.0, 0.0]]);
        assert_eq!(min_pairwise_gap(&c), 0.2);
    }

    #[test]
    fn gap_of_single_point_is_infinite() {
        assert!(min_pairwise_gap(&cfg(&[[0.1, 0.0]])).is_infinite());
    }

    #[test]
    fn nearest_neighbor_examples() {
        let c = cfg(&[[0.0, 0.0], [0.2, 0.0], [1.0, 0.0]]);
        assert_eq!(nearest_neighbor_distance(&c, 1).unwrap(), 0.2);
        assert_eq!(nearest_neighbor_distance(&c, 3).unwrap(), 0.8);
    }

    #[test]
    fn nearest_neighbor_needs_two_points() {
        let c = cfg(&[[0.0, 0.0]]);
        assert_eq!(
            nearest_neighbor_distance(&c, 1),
            Err(GeomError::TooFewPoints { n: 1 })
        );
        let c = cfg(&[[0.0, 0.0], [0.5, 0.0]]);
        assert!(matches!(
            nearest_neighbor_distance(&c, 3),
            Err(GeomError::BadLabel { label: 3, n: 2 })
        ));
        assert!(nearest_neighbor_distance(&c, 0).is_err());
    }

    #[test]
    fn swap_two_points() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0]]);
        let swapped = apply_permutation(&c, &Permutation::transposition(2, 1, 2).unwrap()).unwrap();
        assert_eq!(swapped, cfg(&[[1.0, 0.0], [0.0, 0.0]]));
    }

    #[test]
    fn identity_permutation_is_bit_exact() {
        let c = cfg(&[[0.1, -0.3], [0.7, 0.2], [-0.4, 0.4]]);
        let out = apply_permutation(&c, &Permutation::identity(3)).unwrap();
        assert!(out.bits_eq(&c));
    }

    #[test]
    fn permutation_slot_semantics() {
        // σ = [2, 3, 1]: slot 1 → slot 2, slot 2 → slot 3, slot 3 → slot 1.
        let c = cfg(&[[0.1, 0.0], [0.2, 0.0], [0.3, 0.0]]);
        let sigma = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let out = apply_permutation(&c, &sigma).unwrap();
        assert_eq!(out, cfg(&[[0.3, 0.0], [0.1, 0.0], [0.2, 0.0]]));
    }

    #[test]
    fn malformed_permutations_rejected() {
        assert!(Permutation::from_one_based(&[1, 1]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        let c = cfg(&[[0.0, 0.0], [0.5, 0.0]]);
        assert!(apply_permutation(&c, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn config_distance_examples() {
        let a = cfg(&[[0.0, 0.0], [0.5, 0.0]]);
        assert_eq!(config_distance(&a, &a).unwrap(), 0.0);
        let b = cfg(&[[0.1, 0.0], [0.5, 0.0]]);
        assert_eq!(config_distance(&a, &b).unwrap(), 0.1);
        let c = cfg(&[[0.0, 0.0]]);
        assert!(matches!(
            config_distance(&a, &c),
            Err(GeomError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn construction_rejects_invalid_input() {
        assert_eq!(
            Configuration::from_rows(&[[0.0, 0.0], [0.0, 0.0]]),
            Err(GeomError::Coincident {
                first: 0,
                second: 1
            })
        );
        assert!(matches!(
            Configuration::from_rows(&[[0.9, 0.9]]),
            Err(GeomError::OutsideBall { index: 0, .. })
        ));
        assert_eq!(
            Configuration::new(2, vec![Point::from([0.0, 0.0]), Point::from([0.1])]),
            Err(GeomError::DimensionMismatch {
                index: 1,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(Configuration::new(2, vec![]), Err(GeomError::Empty));
        assert!(Configuration::from_rows(&[[f64::NAN, 0.0]]).is_err());
        // Slack on the boundary absorbs roundoff.
        assert!(Configuration::from_rows(&[[1.0 + 1e-13, 0.0]]).is_ok());
    }

    #[test]
    fn json_wire_format() {
        let c: Configuration =
            serde_json::from_str(r#"{"dim":2,"points":[[0.5,0.0],[0.0,-0.25]]}"#).unwrap();
        assert_eq!(c, cfg(&[[0.5, 0.0], [0.0, -0.25]]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"dim":2,"points":[[0.5,0.0],[0.0,-0.25]]}"#
        );
        let bad = serde_json::from_str::<Configuration>(r#"{"dim":2,"points":[[0.5,0.0],[0.5,0.0]]}"#);
        assert!(bad.unwrap_err().to_string().contains("coincide"));
    }

    #[test]
    fn canonical_form_forgets_order() {
        let a = cfg(&[[0.3, 0.0], [-0.2, 0.1], [0.0, 0.5]]);
        let b = apply_permutation(&a, &Permutation::from_one_based(&[3, 1, 2]).unwrap()).unwrap();
        assert!(config_distance(&a, &b).unwrap() > 0.0);
        assert!(a.unordered_eq(&b, 0.0));
        assert_eq!(a.canonical_form(), b.canonical_form());
    }
}
