//! Sections of the forgetful map and the harness that checks them.
//!
//! A section takes an ordered configuration `(p_1, …, p_n)` and returns
//! `(p_0, p_1, …, p_n)` with a new point `p_0` distinct from the others.
//! Implementations of [`Section`] only compute `p_0`; [`extend`] copies the
//! input points into slots `1..=n` untouched, which makes
//! `forget_point(extend(s, c)) == c` hold bit for bit.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::candidates::{Centroid, ScaledCentroid, ShiftedCentroid};
use crate::geom::{apply_permutation, nearest_neighbor_distance, Configuration, GeomError, Point};
use crate::sample::{random_configuration, random_nontrivial_permutation, seeded_rng};
use crate::tolerance::{EPS_BALL, EPS_GAP};

/// Tolerance on the added point when comparing `s(σ·c)` with `σ̂·s(c)`.
pub const EPS_EQUIVARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectionError {
    #[error("section `{section}` is not defined for {n} points")]
    NotApplicable { section: String, n: usize },
    #[error("invalid section descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("no section registered under `{0}`")]
    Unknown(String),
    #[error("section `{section}` produced an invalid configuration: {source}")]
    InvalidOutput {
        section: String,
        #[source]
        source: GeomError,
    },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A rule adding a point to configurations of a given size.
pub trait Section: Send + Sync {
    fn name(&self) -> String;

    /// Errors unless the rule is defined for `n` input points.
    fn check_arity(&self, n: usize) -> Result<(), SectionError>;

    /// The new point `p_0` for the configuration `c`.
    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError>;

    /// Whether the rule is offered as a candidate for unordered
    /// configurations, so the harness should test `Σ_n`-equivariance.
    fn claims_equivariance(&self) -> bool {
        false
    }
}

/// Drops slot 0 of an `(n+1)`-configuration.
pub fn forget_point(c: &Configuration) -> Result<Configuration, GeomError> {
    if c.len() < 2 {
        return Err(GeomError::TooFewPoints { n: c.len() });
    }
    Configuration::new(c.dim(), c.points()[1..].to_vec())
}

/// `s(c)`: the `(n+1)`-configuration `(p_0, p_1, …, p_n)`.
pub fn extend(s: &dyn Section, c: &Configuration) -> Result<Configuration, SectionError> {
    s.check_arity(c.len())?;
    let p0 = s.added_point(c)?;
    let mut points = Vec::with_capacity(c.len() + 1);
    points.push(p0);
    points.extend(c.points().iter().cloned());
    Configuration::new(c.dim(), points).map_err(|source| SectionError::InvalidOutput {
        section: s.name(),
        source,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Midpoint;

impl Section for Midpoint {
    fn name(&self) -> String {
        "midpoint".into()
    }

    fn check_arity(&self, n: usize) -> Result<(), SectionError> {
        require_two(self, n)
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        self.check_arity(c.len())?;
        let (p1, p2) = (&c.points()[0], &c.points()[1]);
        Ok(midpoint(p1, p2))
    }

    fn claims_equivariance(&self) -> bool {
        true
    }
}

/// `(a + b) / 2`, symmetric in its arguments bit for bit.
pub fn midpoint(a: &Point, b: &Point) -> Point {
    Point::new(
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| 0.5 * (x + y))
            .collect(),
    )
}

/// Adds a point at distance `d_i / 2` from `p_i` towards `p_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AddNear {
    i: usize,
    j: usize,
}

impl AddNear {
    /// `i` and `j` are distinct 1-based labels.
    pub fn new(i: usize, j: usize) -> Result<Self, SectionError> {
        if i == 0 || j == 0 {
            return Err(SectionError::InvalidDescriptor(
                "add-near labels are 1-based".into(),
            ));
        }
        if i == j {
            return Err(SectionError::InvalidDescriptor(format!(
                "add-near needs distinct labels, got ({i}, {j})"
            )));
        }
        Ok(Self { i, j })
    }

    pub fn labels(&self) -> (usize, usize) {
        (self.i, self.j)
    }
}

impl Default for AddNear {
    fn default() -> Self {
        Self { i: 1, j: 2 }
    }
}

impl Section for AddNear {
    fn name(&self) -> String {
        format!("add-near:{},{}", self.i, self.j)
    }

    fn check_arity(&self, n: usize) -> Result<(), SectionError> {
        if n >= 2 && self.i <= n && self.j <= n {
            Ok(())
        } else {
            Err(SectionError::NotApplicable {
                section: self.name(),
                n,
            })
        }
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        self.check_arity(c.len())?;
        let p_i = c.labelled(self.i)?;
        let p_j = c.labelled(self.j)?;
        let d_i = nearest_neighbor_distance(c, self.i)?;
        let v = p_j - p_i;
        let step = d_i / (2.0 * v.norm());
        Ok(p_i + &(step * &v))
    }
}

/// `p_0 = (1 - α) p_1 + α p_2`. A valid section for every `α ∈ (0, 1)`,
/// equivariant only for `α = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasedInterpolation {
    alpha: f64,
}

impl BiasedInterpolation {
    pub fn new(alpha: f64) -> Result<Self, SectionError> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self { alpha })
        } else {
            Err(SectionError::InvalidDescriptor(format!(
                "biased interpolation needs 0 < α < 1, got {alpha}"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Section for BiasedInterpolation {
    fn name(&self) -> String {
        format!("biased:{}", self.alpha)
    }

    fn check_arity(&self, n: usize) -> Result<(), SectionError> {
        require_two(self, n)
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        self.check_arity(c.len())?;
        Ok(c.points()[0].lerp(&c.points()[1], self.alpha))
    }

    // Offered as a two-point candidate so the harness exercises the
    // equivariance check on a rule that fails it.
    fn claims_equivariance(&self) -> bool {
        true
    }
}

fn require_two(s: &dyn Section, n: usize) -> Result<(), SectionError> {
    if n == 2 {
        Ok(())
    } else {
        Err(SectionError::NotApplicable {
            section: s.name(),
            n,
        })
    }
}

type PointFn = dyn Fn(&Configuration) -> Point + Send + Sync;

/// A section backed by a closure, for registering user rules.
#[derive(Clone)]
pub struct FnSection {
    name: String,
    arity: Option<usize>,
    equivariant: bool,
    rule: Arc<PointFn>,
}

impl FnSection {
    /// `arity = None` accepts any number of points.
    pub fn new<F>(name: impl Into<String>, arity: Option<usize>, equivariant: bool, rule: F) -> Self
    where
        F: Fn(&Configuration) -> Point + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            arity,
            equivariant,
            rule: Arc::new(rule),
        }
    }
}

impl fmt::Debug for FnSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSection")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("equivariant", &self.equivariant)
            .finish_non_exhaustive()
    }
}

impl Section for FnSection {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn check_arity(&self, n: usize) -> Result<(), SectionError> {
        match self.arity {
            Some(k) if k != n => Err(SectionError::NotApplicable {
                section: self.name.clone(),
                n,
            }),
            _ => Ok(()),
        }
    }

    fn added_point(&self, c: &Configuration) -> Result<Point, SectionError> {
        self.check_arity(c.len())?;
        let p = (self.rule)(c);
        if p.dim() != c.dim() {
            return Err(SectionError::InvalidOutput {
                section: self.name.clone(),
                source: GeomError::DimensionMismatch {
                    index: 0,
                    expected: c.dim(),
                    found: p.dim(),
                },
            });
        }
        Ok(p)
    }

    fn claims_equivariance(&self) -> bool {
        self.equivariant
    }
}

/// Names a section: a builtin with its parameters, or a registry entry.
///
/// Text form: `midpoint`, `add-near:i,j`, `biased:α`, or any other name,
/// which refers to a registered section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SectionDescriptor {
    Midpoint,
    AddNear { i: usize, j: usize },
    BiasedInterpolation { alpha: f64 },
    Registered(String),
}

impl FromStr for SectionDescriptor {
    type Err = SectionError;

    fn from_str(s: &str) -> Result<Self, SectionError> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, args) {
            ("midpoint", None) => Ok(Self::Midpoint),
            ("add-near", None) => Ok(Self::AddNear { i: 1, j: 2 }),
            ("add-near", Some(args)) => {
                let labels: Vec<usize> = args
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| SectionError::InvalidDescriptor(format!("add-near:{args}: {e}")))?;
                match labels[..] {
                    [i, j] => {
                        AddNear::new(i, j)?;
                        Ok(Self::AddNear { i, j })
                    }
                    _ => Err(SectionError::InvalidDescriptor(format!(
                        "add-near expects two labels, got `{args}`"
                    ))),
                }
            }
            ("biased", Some(arg)) => {
                let alpha: f64 = arg
                    .trim()
                    .parse()
                    .map_err(|e| SectionError::InvalidDescriptor(format!("biased:{arg}: {e}")))?;
                BiasedInterpolation::new(alpha)?;
                Ok(Self::BiasedInterpolation { alpha })
            }
            ("midpoint" | "biased", _) => Err(SectionError::InvalidDescriptor(s.to_string())),
            _ if s.is_empty() => Err(SectionError::InvalidDescriptor("empty name".into())),
            _ => Ok(Self::Registered(s.to_string())),
        }
    }
}

impl fmt::Display for SectionDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Midpoint => write!(f, "midpoint"),
            Self::AddNear { i, j } => write!(f, "add-near:{i},{j}"),
            Self::BiasedInterpolation { alpha } => write!(f, "biased:{alpha}"),
            Self::Registered(name) => write!(f, "{name}"),
        }
    }
}

impl TryFrom<String> for SectionDescriptor {
    type Error = SectionError;
    fn try_from(s: String) -> Result<Self, SectionError> {
        s.parse()
    }
}

impl From<SectionDescriptor> for String {
    fn from(d: SectionDescriptor) -> String {
        d.to_string()
    }
}

/// Named sections available to descriptors of the form `Registered(name)`.
#[derive(Clone, Default)]
pub struct SectionRegistry {
    entries: BTreeMap<String, Arc<dyn Section>>,
}

impl SectionRegistry {
    /// A registry with no entries.
    pub fn empty() -> Self {
        Self::default()
    }

    /// A registry holding the shipped symmetric candidates `centroid`,
    /// `half-centroid` and `shifted-centroid`.
    pub fn with_candidates() -> Self {
        let mut reg = Self::empty();
        reg.register("centroid", Arc::new(Centroid));
        reg.register("half-centroid", Arc::new(ScaledCentroid::new(0.5)));
        reg.register("shifted-centroid", Arc::new(ShiftedCentroid::default()));
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, section: Arc<dyn Section>) {
        self.entries.insert(name.into(), section);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn Section>> {
        self.entries.get(name).cloned()
    }

    pub fn resolve(&self, d: &SectionDescriptor) -> Result<Arc<dyn Section>, SectionError> {
        Ok(match d {
            SectionDescriptor::Midpoint => Arc::new(Midpoint),
            SectionDescriptor::AddNear { i, j } => Arc::new(AddNear::new(*i, *j)?),
            SectionDescriptor::BiasedInterpolation { alpha } => {
                Arc::new(BiasedInterpolation::new(*alpha)?)
            }
            SectionDescriptor::Registered(name) => self
                .get(name)
                .ok_or_else(|| SectionError::Unknown(name.clone()))?,
        })
    }
}

impl fmt::Debug for SectionRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

/// A configuration on which a check failed, with a short explanation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub input: Configuration,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Witnesses {
    pub section_property: Option<Witness>,
    pub gap: Option<Witness>,
    pub containment: Option<Witness>,
    pub equivariance: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionCheckReport {
    pub section: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub samples_run: usize,
    /// Smallest distance from the added point to an existing point.
    pub worst_gap: f64,
    /// Largest `‖p_0‖ - 1` observed; negative when every added point is interior.
    pub worst_containment_excess: f64,
    /// Evaluation failures and `forget ∘ s ≠ id`.
    pub forget_violations: usize,
    pub gap_violations: usize,
    pub containment_violations: usize,
    /// Sum of the three counts above.
    pub section_property_violations: usize,
    pub equivariance_checked: bool,
    pub equivariance_violations: usize,
    pub witnesses: Witnesses,
    pub passed: bool,
}

/// Samples `sample_count` random `n`-configurations in the `m`-ball and
/// checks the section contract on each: the tail of `s(c)` is `c` bit for
/// bit, the added point is farther than [`EPS_GAP`] from every point, and it
/// lies in the ball up to [`EPS_BALL`]. Sections claiming equivariance are
/// also checked against a random non-identity permutation per sample.
pub fn verify_section(
    s: &dyn Section,
    n: usize,
    m: usize,
    sample_count: usize,
    seed: u64,
) -> Result<SectionCheckReport, SectionError> {
    s.check_arity(n)?;
    if m == 0 {
        return Err(GeomError::ZeroDimension.into());
    }
    let mut rng = seeded_rng(seed);
    let check_equivariance = s.claims_equivariance() && n >= 2;
    let mut report = SectionCheckReport {
        section: s.name(),
        n,
        m,
        seed,
        samples_run: 0,
        worst_gap: f64::INFINITY,
        worst_containment_excess: f64::NEG_INFINITY,
        forget_violations: 0,
        gap_violations: 0,
        containment_violations: 0,
        section_property_violations: 0,
        equivariance_checked: check_equivariance,
        equivariance_violations: 0,
        witnesses: Witnesses::default(),
        passed: false,
    };

    for _ in 0..sample_count {
        let c = random_configuration(&mut rng, n, m);
        // Drawn up front so the random stream does not depend on outcomes.
        let sigma = check_equivariance.then(|| random_nontrivial_permutation(&mut rng, n));
        report.samples_run += 1;

        let p0 = match s.added_point(&c) {
            Ok(p) => p,
            Err(e) => {
                report.forget_violations += 1;
                record(&mut report.witnesses.section_property, &c, e.to_string());
                continue;
            }
        };
        let mut augmented = Vec::with_capacity(n + 1);
        augmented.push(p0.clone());
        augmented.extend(c.points().iter().cloned());
        let tail_matches = augmented[1..]
            .iter()
            .zip(c.points())
            .all(|(a, b)| a.bits_eq(b));
        if !tail_matches {
            report.forget_violations += 1;
            record(
                &mut report.witnesses.section_property,
                &c,
                "forgetting the added point does not recover the input".into(),
            );
        }

        let gap = c
            .points()
            .iter()
            .map(|p| p.distance(&p0))
            .fold(f64::INFINITY, f64::min);
        report.worst_gap = report.worst_gap.min(gap);
        if !(gap > EPS_GAP) {
            report.gap_violations += 1;
            record(
                &mut report.witnesses.gap,
                &c,
                format!("added point {p0} lies within {gap:e} of an existing point"),
            );
        }

        let excess = p0.norm() - 1.0;
        report.worst_containment_excess = report.worst_containment_excess.max(excess);
        if !(excess <= EPS_BALL) {
            report.containment_violations += 1;
            record(
                &mut report.witnesses.containment,
                &c,
                format!("added point {p0} has norm {}", p0.norm()),
            );
        }

        if let Some(sigma) = sigma {
            let permuted = apply_permutation(&c, &sigma)?;
            let ok = match s.added_point(&permuted) {
                Ok(q0) => {
                    // s(σ·c) against σ̂·s(c), where σ̂ fixes slot 0.
                    let lhs: Vec<Point> =
                        std::iter::once(q0).chain(permuted.points().iter().cloned()).collect();
                    let hat = sigma.fixing_slot_zero();
                    let mut rhs = vec![Point::origin(m); n + 1];
                    for (k, p) in augmented.iter().enumerate() {
                        rhs[hat.image(k)] = p.clone();
                    }
                    lhs[0].distance(&rhs[0]) <= EPS_EQUIVARIANCE
                        && canonical(&lhs[1..]) == canonical(&rhs[1..])
                }
                Err(_) => false,
            };
            if !ok {
                report.equivariance_violations += 1;
                record(
                    &mut report.witnesses.equivariance,
                    &c,
                    format!("s(σ·c) ≠ σ̂·s(c) for σ = {:?} (0-based images)", sigma.images()),
                );
            }
        }
    }

    report.section_property_violations =
        report.forget_violations + report.gap_violations + report.containment_violations;
    report.passed = report.section_property_violations == 0
        && (report.samples_run == 0 || report.worst_gap > EPS_GAP)
        && (!check_equivariance || report.equivariance_violations == 0);
    Ok(report)
}

fn canonical(points: &[Point]) -> Vec<Point> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}

fn record(slot: &mut Option<Witness>, c: &Configuration, detail: String) {
    if slot.is_none() {
        *slot = Some(Witness {
            input: c.clone(),
            detail,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Permutation;

    fn cfg(rows: &[[f64; 2]]) -> Configuration {
        Configuration::from_rows(rows).unwrap()
    }

    #[test]
    fn forget_drops_slot_zero() {
        let c = cfg(&[[0.5, 0.0], [0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(forget_point(&c).unwrap(), cfg(&[[0.0, 0.0], [1.0, 0.0]]));
        assert!(forget_point(&cfg(&[[0.5, 0.0]])).is_err());
    }

    #[test]
    fn midpoint_examples() {
        let out = extend(&Midpoint, &cfg(&[[-0.5, 0.0], [0.5, 0.0]])).unwrap();
        assert_eq!(out.points()[0], Point::from([0.0, 0.0]));
        let out = extend(&Midpoint, &cfg(&[[0.0, 0.0], [0.0, 0.8]])).unwrap();
        assert_eq!(out.points()[0], Point::from([0.0, 0.4]));
    }

    #[test]
    fn midpoint_is_swap_symmetric_bitwise() {
        let c = cfg(&[[0.1234567, -0.3], [0.7, 0.291]]);
        let swapped = apply_permutation(&c, &Permutation::transposition(2, 1, 2).unwrap()).unwrap();
        let a = Midpoint.added_point(&c).unwrap();
        let b = Midpoint.added_point(&swapped).unwrap();
        assert!(a.bits_eq(&b));
    }

    #[test]
    fn midpoint_requires_two_points() {
        let c = cfg(&[[0.0, 0.0], [0.2, 0.0], [0.4, 0.0]]);
        assert!(matches!(
            extend(&Midpoint, &c),
            Err(SectionError::NotApplicable { n: 3, .. })
        ));
    }

    #[test]
    fn add_near_two_points() {
        let out = extend(&AddNear::new(1, 2).unwrap(), &cfg(&[[0.0, 0.0], [1.0, 0.0]])).unwrap();
        assert_eq!(out.points()[0], Point::from([0.5, 0.0]));
    }

    #[test]
    fn add_near_uses_nearest_neighbor_distance() {
        // d_1 = 0.2 whichever direction is used.
        let c = cfg(&[[0.0, 0.0], [0.2, 0.0], [1.0, 0.0]]);
        for j in [2, 3] {
            let p0 = AddNear::new(1, j).unwrap().added_point(&c).unwrap();
            assert!(p0.distance(&Point::from([0.1, 0.0])) < 1e-15, "j = {j}: {p0}");
        }
    }

    #[test]
    fn add_near_rejects_bad_labels() {
        assert!(AddNear::new(1, 1).is_err());
        assert!(AddNear::new(0, 1).is_err());
        let c = cfg(&[[0.0, 0.0], [0.2, 0.0]]);
        assert!(extend(&AddNear::new(1, 3).unwrap(), &c).is_err());
    }

    #[test]
    fn biased_examples() {
        let c = cfg(&[[0.0, 0.0], [1.0, 0.0]]);
        let b = BiasedInterpolation::new(0.25).unwrap();
        assert_eq!(b.added_point(&c).unwrap(), Point::from([0.25, 0.0]));
        let swapped = cfg(&[[1.0, 0.0], [0.0, 0.0]]);
        assert_eq!(b.added_point(&swapped).unwrap(), Point::from([0.75, 0.0]));
        let half = BiasedInterpolation::new(0.5).unwrap();
        let c = cfg(&[[0.3, -0.1], [-0.2, 0.6]]);
        assert_eq!(
            half.added_point(&c).unwrap(),
            Midpoint.added_point(&c).unwrap()
        );
        assert!(BiasedInterpolation::new(0.0).is_err());
        assert!(BiasedInterpolation::new(1.0).is_err());
        assert!(BiasedInterpolation::new(f64::NAN).is_err());
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!("midpoint".parse(), Ok(SectionDescriptor::Midpoint));
        assert_eq!(
            "add-near:2,3".parse(),
            Ok(SectionDescriptor::AddNear { i: 2, j: 3 })
        );
        assert_eq!(
            "biased:0.25".parse(),
            Ok(SectionDescriptor::BiasedInterpolation { alpha: 0.25 })
        );
        assert_eq!(
            "centroid".parse(),
            Ok(SectionDescriptor::Registered("centroid".into()))
        );
        assert!("add-near:1,1".parse::<SectionDescriptor>().is_err());
        assert!("add-near:1".parse::<SectionDescriptor>().is_err());
        assert!("biased:1.5".parse::<SectionDescriptor>().is_err());
        assert!("biased".parse::<SectionDescriptor>().is_err());
        for text in ["midpoint", "add-near:3,1", "biased:0.25", "centroid"] {
            let d: SectionDescriptor = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
        }
    }

    #[test]
    fn registry_resolution() {
        let reg = SectionRegistry::with_candidates();
        assert!(reg.resolve(&SectionDescriptor::Registered("centroid".into())).is_ok());
        assert_eq!(
            reg.resolve(&SectionDescriptor::Registered("nope".into()))
                .err(),
            Some(SectionError::Unknown("nope".into()))
        );
        let names: Vec<_> = reg.names().collect();
        assert_eq!(names, ["centroid", "half-centroid", "shifted-centroid"]);
    }

    #[test]
    fn user_registered_section_goes_through_the_harness() {
        let mut reg = SectionRegistry::empty();
        reg.register(
            "third-of-the-way",
            Arc::new(FnSection::new("third-of-the-way", Some(2), false, |c| {
                c.points()[0].lerp(&c.points()[1], 1.0 / 3.0)
            })),
        );
        let s = reg
            .resolve(&"third-of-the-way".parse().unwrap())
            .unwrap();
        let report = verify_section(s.as_ref(), 2, 2, 200, 1).unwrap();
        assert!(report.passed);
        assert!(!report.equivariance_checked);
    }

    #[test]
    fn harness_catches_a_broken_rule() {
        // Returns p_1 itself: a collision on every sample.
        let s = FnSection::new("copy-first", None, false, |c| c.points()[0].clone());
        let report = verify_section(&s, 3, 2, 50, 0).unwrap();
        assert!(!report.passed);
        assert_eq!(report.gap_violations, 50);
        assert_eq!(report.worst_gap, 0.0);
        assert!(report.witnesses.gap.is_some());

        let s = FnSection::new("escape", None, false, |c| {
            Point::new(vec![2.0; c.dim()])
        });
        let report = verify_section(&s, 2, 3, 10, 0).unwrap();
        assert_eq!(report.containment_violations, 10);
        assert!(report.witnesses.containment.is_some());
    }

    #[test]
    fn midpoint_harness_passes() {
        let report = verify_section(&Midpoint, 2, 3, 2000, 5).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.equivariance_checked);
        assert_eq!(report.equivariance_violations, 0);
    }

    #[test]
    fn biased_fails_equivariance_only() {
        let report = verify_section(&BiasedInterpolation::new(0.25).unwrap(), 2, 2, 500, 5).unwrap();
        assert_eq!(report.section_property_violations, 0);
        assert_eq!(report.equivariance_violations, 500);
        assert!(!report.passed);
    }

    #[test]
    fn harness_is_deterministic() {
        let a = verify_section(&AddNear::new(2, 1).unwrap(), 4, 2, 300, 77).unwrap();
        let b = verify_section(&AddNear::new(2, 1).unwrap(), 4, 2, 300, 77).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn verify_rejects_inapplicable_arity() {
        assert!(verify_section(&Midpoint, 3, 2, 10, 0).is_err());
    }
}
