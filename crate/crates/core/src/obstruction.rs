//! Planar winding numbers and the coefficients of a pulled-back class.
//!
//! For `m = 2` the class `G_ab` is the degree of the Gauss map
//! `c ↦ (p_b - p_a) / ‖p_b - p_a‖` on a loop of configurations. The
//! generator loop in which `p_b` orbits `p_a` once counterclockwise pairs to
//! 1 with `G_ab` and to 0 with every other generator; this fixes the sign
//! convention used throughout.
//!
//! Given a candidate section `s` for `n` points, the coefficient of `G_1a`
//! (resp. `G_ab`) in `s^*(G_01)` is read off as the winding of `p_1 - p_0`
//! along the image under `s` of the generator loop for `(1, a)` (resp.
//! `(a, b)`). A genuine equivariant section would need all `δ_ab = 0` and
//! `λ (n - 1) = 1`, which no integer `λ` satisfies once `n ≥ 3`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Configuration, GeomError, Permutation, Point};
use crate::sample::seeded_rng;
use crate::sections::{Section, SectionError};
use crate::tolerance::{EPS_BALL, EPS_WIND};

/// Default number of steps around a generator loop.
pub const DEFAULT_LOOP_STEPS: usize = 256;

/// Largest admissible distance of the accumulated turning from an integer.
pub const MAX_WINDING_RESIDUAL: f64 = 0.01;

const BASE_RADIUS: f64 = 0.6;
const BASE_JITTER: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WindingError {
    #[error("vector {index} has norm {norm:e}: the tracked points (nearly) collide")]
    NearZeroVector { index: usize, norm: f64 },
    #[error("turn of {angle} rad between vectors {index} and {next} is not below π/2", next = index + 1)]
    Undersampled { index: usize, angle: f64 },
    #[error("total turning {turns} is not within {MAX_WINDING_RESIDUAL} of an integer")]
    NonIntegral { turns: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Winding(#[from] WindingError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error("winding numbers need planar configurations, got dimension {0}")]
    NotPlanar(usize),
    #[error("malformed loop: {0}")]
    BadLoop(String),
    #[error("orbit infeasible: {0}")]
    Infeasible(String),
    #[error("generator loop for ({a}, {b}) pairs to {found} with ({c}, {d})")]
    DualityFailed {
        a: usize,
        b: usize,
        c: usize,
        d: usize,
        found: i64,
    },
}

/// Total signed turning of a cyclic sequence of planar vectors, in whole
/// turns. The step from the last vector back to the first is included, so a
/// sequence that repeats its first vector at the end gives the same answer.
pub fn winding_number(vs: &[[f64; 2]]) -> Result<i64, WindingError> {
    for (index, v) in vs.iter().enumerate() {
        let norm = v[0].hypot(v[1]);
        if !(norm > EPS_WIND) {
            return Err(WindingError::NearZeroVector { index, norm });
        }
    }
    let mut total = 0.0;
    for index in 0..vs.len() {
        let a = vs[index];
        let b = vs[(index + 1) % vs.len()];
        let cross = a[0] * b[1] - a[1] * b[0];
        let dot = a[0] * b[0] + a[1] * b[1];
        let angle = cross.atan2(dot);
        if !(angle.abs() < PI / 2.0) {
            return Err(WindingError::Undersampled { index, angle });
        }
        total += angle;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= MAX_WINDING_RESIDUAL {
        return Err(WindingError::NonIntegral { turns });
    }
    Ok(rounded as i64)
}

/// A closed, sampled path of planar configurations.
///
/// `first_label` is the label of position 0: 1 for loops of input
/// configurations, 0 for images under a section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopSample {
    frames: Vec<Configuration>,
    first_label: usize,
}

impl LoopSample {
    pub fn new(frames: Vec<Configuration>, first_label: usize) -> Result<Self, ObstructionError> {
        let (first, last) = match (frames.first(), frames.last()) {
            (Some(f), Some(l)) if frames.len() >= 2 => (f, l),
            _ => return Err(ObstructionError::BadLoop("need at least two frames".into())),
        };
        if first.dim() != 2 {
            return Err(ObstructionError::NotPlanar(first.dim()));
        }
        if let Some(k) = frames
            .iter()
            .position(|f| f.dim() != 2 || f.len() != first.len())
        {
            return Err(ObstructionError::BadLoop(format!(
                "frame {k} has a different shape from frame 0"
            )));
        }
        if !first.bits_eq(last) {
            return Err(ObstructionError::BadLoop(
                "first and last frames differ".into(),
            ));
        }
        Ok(Self {
            frames,
            first_label,
        })
    }

    pub fn frames(&self) -> &[Configuration] {
        &self.frames
    }

    pub fn first_label(&self) -> usize {
        self.first_label
    }

    /// Number of points per frame.
    pub fn points_per_frame(&self) -> usize {
        self.frames[0].len()
    }

    /// The same loop traversed backwards.
    pub fn reversed(&self) -> LoopSample {
        let mut frames = self.frames.clone();
        frames.reverse();
        LoopSample {
            frames,
            first_label: self.first_label,
        }
    }

    /// `σ` applied to every frame.
    pub fn permuted(&self, sigma: &Permutation) -> Result<LoopSample, ObstructionError> {
        let frames = self
            .frames
            .iter()
            .map(|f| crate::geom::apply_permutation(f, sigma))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LoopSample {
            frames,
            first_label: self.first_label,
        })
    }

    fn position(&self, label: usize) -> Result<usize, ObstructionError> {
        let n = self.points_per_frame();
        label
            .checked_sub(self.first_label)
            .filter(|k| *k < n)
            .ok_or(ObstructionError::Geom(GeomError::BadLabel { label, n }))
    }
}

/// Degree of the Gauss map `c ↦ p_b - p_a` along `lp`.
pub fn gauss_winding(lp: &LoopSample, a: usize, b: usize) -> Result<i64, ObstructionError> {
    if a == b {
        return Err(ObstructionError::BadLoop(format!(
            "Gauss map needs distinct labels, got ({a}, {b})"
        )));
    }
    let (ka, kb) = (lp.position(a)?, lp.position(b)?);
    let vs: Vec<[f64; 2]> = lp
        .frames()
        .iter()
        .map(|f| {
            let (pa, pb) = (f.points()[ka].coords(), f.points()[kb].coords());
            [pb[0] - pa[0], pb[1] - pa[1]]
        })
        .collect();
    Ok(winding_number(&vs)?)
}

/// Loop in which `p_b` orbits `p_a` once counterclockwise at distance
/// `radius`, sampled at `steps` equal angles, all other points fixed at their
/// positions in `base`. Frame `steps` repeats frame 0.
///
/// Requires the orbit to stay in the ball and every other point to keep a
/// distance greater than `2 · radius` from the orbit circle.
pub fn generator_loop(
    n: usize,
    a: usize,
    b: usize,
    base: &Configuration,
    radius: f64,
    steps: usize,
) -> Result<LoopSample, ObstructionError> {
    if base.dim() != 2 {
        return Err(ObstructionError::NotPlanar(base.dim()));
    }
    if base.len() != n {
        return Err(ObstructionError::BadLoop(format!(
            "base has {} points, expected {n}",
            base.len()
        )));
    }
    if a == b {
        return Err(ObstructionError::BadLoop("orbit needs distinct labels".into()));
    }
    if !(radius > 0.0) || steps < 4 {
        return Err(ObstructionError::Infeasible(format!(
            "radius {radius} and {steps} steps"
        )));
    }
    let centre = base.labelled(a)?.clone();
    base.labelled(b)?;
    if centre.norm() + radius > 1.0 + EPS_BALL {
        return Err(ObstructionError::Infeasible(format!(
            "orbit of radius {radius} about {centre} leaves the ball"
        )));
    }
    for (k, p) in base.points().iter().enumerate() {
        let label = k + 1;
        if label == a || label == b {
            continue;
        }
        let clearance = (p.distance(&centre) - radius).abs();
        if !(clearance > 2.0 * radius) {
            return Err(ObstructionError::Infeasible(format!(
                "point {label} is {clearance} from the orbit circle (need > {})",
                2.0 * radius
            )));
        }
    }

    let (cx, cy) = (centre.coords()[0], centre.coords()[1]);
    let mut frames = Vec::with_capacity(steps + 1);
    for i in 0..steps {
        let theta = TAU * i as f64 / steps as f64;
        let mut pts = base.points().to_vec();
        pts[b - 1] = Point::from([cx + radius * theta.cos(), cy + radius * theta.sin()]);
        frames.push(Configuration::new(2, pts)?);
    }
    frames.push(frames[0].clone());
    let lp = LoopSample::new(frames, 1)?;

    for c in 1..=n {
        for d in (c + 1)..=n {
            let expected = i64::from((c, d) == (a.min(b), a.max(b)));
            let found = gauss_winding(&lp, c, d)?;
            if found != expected {
                return Err(ObstructionError::DualityFailed { a, b, c, d, found });
            }
        }
    }
    Ok(lp)
}

/// `n` points equally spaced on the circle of radius 0.6, each moved by a
/// seeded offset of length at most 0.01.
pub fn default_base(n: usize, seed: u64) -> Configuration {
    let mut rng = seeded_rng(seed);
    let points = (0..n)
        .map(|k| {
            let theta = TAU * k as f64 / n as f64;
            let jitter_angle = TAU * rng.random::<f64>();
            let jitter_len = BASE_JITTER * rng.random::<f64>().sqrt();
            Point::from([
                BASE_RADIUS * theta.cos() + jitter_len * jitter_angle.cos(),
                BASE_RADIUS * theta.sin() + jitter_len * jitter_angle.sin(),
            ])
        })
        .collect();
    Configuration::new(2, points).expect("points on a circle of radius 0.6 are distinct")
}

/// Configurations invariant under a reflection or rotation, with one point
/// at the centre of symmetry when `n` allows it. A candidate commuting with
/// the symmetry is forced to put its new point at the centre.
pub fn symmetric_probes(n: usize) -> Vec<(String, Configuration)> {
    let mut probes = Vec::new();
    let mut line = Vec::with_capacity(n);
    let pairs = n / 2;
    for k in 0..pairs {
        let x = 0.5 * (pairs - k) as f64 / pairs as f64;
        line.push(Point::from([-x, 0.0]));
        line.push(Point::from([x, 0.0]));
    }
    if n % 2 == 1 {
        line.push(Point::from([0.0, 0.0]));
    }
    if let Ok(c) = Configuration::new(2, line) {
        probes.push(("probe:collinear".to_string(), c));
    }
    if n >= 4 {
        let mut ring: Vec<Point> = (0..n - 1)
            .map(|k| {
                let theta = TAU * k as f64 / (n - 1) as f64;
                Point::from([0.5 * theta.cos(), 0.5 * theta.sin()])
            })
            .collect();
        ring.push(Point::from([0.0, 0.0]));
        if let Ok(c) = Configuration::new(2, ring) {
            probes.push(("probe:polygon-with-centre".to_string(), c));
        }
    }
    probes
}

/// A frame on which a candidate's added point (nearly) hits an existing point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionWitness {
    pub loop_id: String,
    pub frame: usize,
    /// Colliding slots of the augmented configuration; slot 0 is the added point.
    pub slots: (usize, usize),
    pub input: Configuration,
    pub added_point: Point,
}

/// A loop whose image could not be evaluated for a reason other than a
/// collision: an evaluation error, an added point outside the ball, or an
/// image too irregular for the winding engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopFailure {
    pub loop_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub section: String,
    pub n: usize,
    pub radius: f64,
    pub steps: usize,
    /// `λ_a` keyed by `a`.
    pub lambda_values: BTreeMap<usize, i64>,
    /// `δ_ab` keyed by `"a,b"`.
    pub delta_values: BTreeMap<String, i64>,
    /// The common value of the `λ_a`, when they agree.
    pub lambda: Option<i64>,
    pub lambda_consistent: bool,
    /// `λ (n - 1) = 1` and every `δ_ab = 0`, with every coefficient measured.
    pub identity_holds: bool,
    pub collision_witness: Option<CollisionWitness>,
    pub loop_failures: Vec<LoopFailure>,
}

enum ImageOutcome {
    Winding(i64),
    Collision(CollisionWitness),
    Failure(String),
}

/// Measures the coefficients of `s^*(G_01)` against the generator loops built
/// on `base`, then evaluates `s` on [`symmetric_probes`].
pub fn measure_coefficients(
    s: &dyn Section,
    n: usize,
    base: &Configuration,
    radius: f64,
    steps: usize,
) -> Result<ObstructionReport, ObstructionError> {
    if base.dim() != 2 {
        return Err(ObstructionError::NotPlanar(base.dim()));
    }
    s.check_arity(n)?;

    // Build every loop first so geometric infeasibility is an error rather
    // than a partial report.
    let mut loops = Vec::new();
    for a in 2..=n {
        loops.push((format!("lambda:1,{a}"), (1, a), generator_loop(n, 1, a, base, radius, steps)?));
    }
    for a in 2..=n {
        for b in (a + 1)..=n {
            loops.push((format!("delta:{a},{b}"), (a, b), generator_loop(n, a, b, base, radius, steps)?));
        }
    }

    let mut report = ObstructionReport {
        section: s.name(),
        n,
        radius,
        steps,
        lambda_values: BTreeMap::new(),
        delta_values: BTreeMap::new(),
        lambda: None,
        lambda_consistent: false,
        identity_holds: false,
        collision_witness: None,
        loop_failures: Vec::new(),
    };

    for (loop_id, (a, b), lp) in &loops {
        match image_winding(s, loop_id, lp) {
            ImageOutcome::Winding(w) => {
                if *a == 1 {
                    report.lambda_values.insert(*b, w);
                } else {
                    report.delta_values.insert(format!("{a},{b}"), w);
                }
            }
            ImageOutcome::Collision(w) => {
                report.collision_witness.get_or_insert(w);
            }
            ImageOutcome::Failure(reason) => report.loop_failures.push(LoopFailure {
                loop_id: loop_id.clone(),
                reason,
            }),
        }
    }
    for (probe_id, c) in symmetric_probes(n) {
        match evaluate_frame(s, &probe_id, 0, &c) {
            Ok(_) => {}
            Err(ImageOutcome::Collision(w)) => {
                report.collision_witness.get_or_insert(w);
            }
            Err(ImageOutcome::Failure(reason)) => report.loop_failures.push(LoopFailure {
                loop_id: probe_id,
                reason,
            }),
            Err(ImageOutcome::Winding(_)) => unreachable!(),
        }
    }

    let mut lambdas = report.lambda_values.values();
    let first = lambdas.next().copied();
    report.lambda_consistent = lambdas.all(|v| Some(*v) == first);
    report.lambda = first.filter(|_| report.lambda_consistent);
    let complete = report.lambda_values.len() == n.saturating_sub(1)
        && report.delta_values.len() == n.saturating_sub(1) * n.saturating_sub(2) / 2;
    report.identity_holds = report.collision_witness.is_none()
        && report.loop_failures.is_empty()
        && complete
        && report.lambda.is_some_and(|l| l * (n as i64 - 1) == 1)
        && report.delta_values.values().all(|d| *d == 0);
    Ok(report)
}

fn image_winding(s: &dyn Section, loop_id: &str, lp: &LoopSample) -> ImageOutcome {
    let mut frames = Vec::with_capacity(lp.frames().len());
    for (i, f) in lp.frames().iter().enumerate() {
        match evaluate_frame(s, loop_id, i, f) {
            Ok(image) => frames.push(image),
            Err(outcome) => return outcome,
        }
    }
    let image = match LoopSample::new(frames, 0) {
        Ok(l) => l,
        Err(e) => return ImageOutcome::Failure(e.to_string()),
    };
    match gauss_winding(&image, 0, 1) {
        Ok(w) => ImageOutcome::Winding(w),
        Err(e) => ImageOutcome::Failure(e.to_string()),
    }
}

fn evaluate_frame(
    s: &dyn Section,
    loop_id: &str,
    frame: usize,
    c: &Configuration,
) -> Result<Configuration, ImageOutcome> {
    let p0 = s
        .added_point(c)
        .map_err(|e| ImageOutcome::Failure(format!("frame {frame}: {e}")))?;
    let (k, gap) = c
        .points()
        .iter()
        .enumerate()
        .map(|(k, p)| (k, p.distance(&p0)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    if !(gap > EPS_WIND) {
        return Err(ImageOutcome::Collision(CollisionWitness {
            loop_id: loop_id.to_string(),
            frame,
            slots: (0, k + 1),
            input: c.clone(),
            added_point: p0,
        }));
    }
    let mut points = Vec::with_capacity(c.len() + 1);
    points.push(p0);
    points.extend(c.points().iter().cloned());
    Configuration::new(2, points)
        .map_err(|e| ImageOutcome::Failure(format!("frame {frame}: {e}")))
}
