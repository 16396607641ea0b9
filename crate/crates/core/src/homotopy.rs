//! Homotopies through sections for two points, and the boundary push-off flow.
//!
//! For a two-point configuration `c = (p_1, p_2)` the line through the points
//! meets the unit sphere in `q_1, q_2` (with `q_i` on the side of `p_i`). The
//! scaling `h_t(v) = ((1 - t) + r t)(v - x) + x` about the equal-ratio centre
//! `x` moves `p_i` to `q_i` at `t = 1`. Conjugating a section by this scaling
//! gives a homotopy through sections ending at a section whose added point
//! lies between `p_1` and `p_2` or off their line; from there the straight
//! line to the midpoint stays inside the sections.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Configuration, GeomError, Point};
use crate::sections::{midpoint, Section, SectionError};
use crate::tolerance::{EPS_BALL, EPS_COL, EPS_GAP};

/// Ratios within this of 1 are treated as the degenerate chord.
const DEGENERATE_RATIO: f64 = 1e-12;

/// Default number of frames per phase of [`uniqueness_homotopy`].
pub const DEFAULT_FRAMES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error("section failed on the scaled configuration at t = {t}: {detail}")]
    SectionFailure {
        t: f64,
        scaled: Configuration,
        detail: String,
    },
    #[error("added point {p0} is on the line through the pair but outside the segment")]
    NotBetweenOrOffline { p0: Point, input: Configuration },
    #[error("frame {frame} (τ = {tau}) is not a valid section output: {detail}")]
    FrameInvalid {
        frame: usize,
        tau: f64,
        detail: String,
    },
    #[error("chord geometry needs exactly two points, got {0}")]
    NotAPair(usize),
    #[error("need at least 2 frames per phase, got {0}")]
    TooFewFrames(usize),
    #[error("anchor point has norm {norm}, not on the unit sphere")]
    AnchorNotOnSphere { norm: f64 },
    #[error("flow time must be finite and nonnegative, got {0}")]
    BadTime(f64),
}

/// Chord of the unit ball through a two-point configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChordData {
    pub q1: Point,
    pub q2: Point,
    /// Centre `x` of the scaling.
    pub center: Point,
    /// `r = ‖q_2 - q_1‖ / ‖p_2 - p_1‖ ≥ 1`.
    pub ratio: f64,
    /// `p_1`, the origin of the line coordinate used for evaluation.
    anchor: Point,
    /// `q_1 - p_1`.
    shift: Point,
}

impl ChordData {
    /// True when both points already sit on the sphere and the scaling is
    /// the identity.
    pub fn is_degenerate(&self) -> bool {
        self.ratio == 1.0
    }

    /// Scale factor `(1 - t) + r t` of `h_t`.
    pub fn factor(&self, t: f64) -> f64 {
        (1.0 - t) + self.ratio * t
    }
}

/// Computes `q_1, q_2`, the ratio `r` and the centre `x` for `c = (p_1, p_2)`.
///
/// In the line coordinate `u ↦ p_1 + u (p_2 - p_1)` the points sit at
/// `a = 0, b = 1` and the sphere at the roots `A < 0 < 1 < B` of
/// `‖p_1 + u d‖² = 1`. Solving `q_i - x = r (p_i - x)` gives
/// `r = (B - A) / (b - a)` and `x = (A - r a) / (1 - r)`.
pub fn chord_data(c: &Configuration) -> Result<ChordData, HomotopyError> {
    if c.len() != 2 {
        return Err(HomotopyError::NotAPair(c.len()));
    }
    let p1 = &c.points()[0];
    let p2 = &c.points()[1];
    let d = p2 - p1;
    let qa = d.norm_sq();
    let qb = 2.0 * p1.dot(&d);
    let qc = (p1.norm_sq() - 1.0).min(0.0);
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    // Cancellation-free roots.
    let q = -0.5 * (qb + qb.signum() * disc.sqrt());
    let (u_lo, u_hi) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        let r1 = q / qa;
        let r2 = qc / q;
        (r1.min(r2), r1.max(r2))
    };
    let q1 = p1 + &(u_lo * &d);
    let q2 = p1 + &(u_hi * &d);
    let ratio = u_hi - u_lo;
    if ratio <= 1.0 + DEGENERATE_RATIO {
        return Ok(ChordData {
            q1,
            q2,
            center: midpoint(p1, p2),
            ratio: 1.0,
            anchor: p1.clone(),
            shift: Point::origin(c.dim()),
        });
    }
    let x = u_lo / (1.0 - ratio);
    Ok(ChordData {
        shift: &q1 - p1,
        q1,
        q2,
        center: p1 + &(x * &d),
        ratio,
        anchor: p1.clone(),
    })
}

/// `h_t(v) = ((1 - t) + r t)(v - x) + x`.
///
/// Evaluated as `v + t ((r - 1)(v - p_1) + (q_1 - p_1))`, which is the same
/// affine map but stays well conditioned when `r → 1` and `x` runs off to
/// infinity along the line.
pub fn scale_map(cd: &ChordData, t: f64, v: &Point) -> Point {
    if t == 0.0 || cd.is_degenerate() {
        return v.clone();
    }
    let rel = v - &cd.anchor;
    Point::new(
        v.coords()
            .iter()
            .zip(rel.coords())
            .zip(cd.shift.coords())
            .map(|((vk, rk), sk)| vk + t * ((cd.ratio - 1.0) * rk + sk))
            .collect(),
    )
}

/// Exact algebraic inverse of [`scale_map`]: `(w - x) / ((1 - t) + r t) + x`.
pub fn scale_map_inverse(cd: &ChordData, t: f64, w: &Point) -> Point {
    if t == 0.0 || cd.is_degenerate() {
        return w.clone();
    }
    let s = cd.factor(t);
    Point::new(
        w.coords()
            .iter()
            .zip(cd.anchor.coords())
            .zip(cd.shift.coords())
            .map(|((wk, ak), sk)| ak + (wk - ak - t * sk) / s)
            .collect(),
    )
}

/// `s_t(c) = (H_t)^{-1} ∘ s ∘ H_t (c)`.
///
/// Only the added point is conjugated; `p_1, p_2` are copied from `c`
/// unchanged, so the result is a section output for every `t`.
pub fn conjugated_section(
    s: &dyn Section,
    c: &Configuration,
    t: f64,
) -> Result<Configuration, HomotopyError> {
    let cd = chord_data(c)?;
    conjugated_section_with(s, c, &cd, t)
}

fn conjugated_section_with(
    s: &dyn Section,
    c: &Configuration,
    cd: &ChordData,
    t: f64,
) -> Result<Configuration, HomotopyError> {
    s.check_arity(2)?;
    let scaled_points: Vec<Point> = c.points().iter().map(|p| scale_map(cd, t, p)).collect();
    let scaled = Configuration::new(c.dim(), scaled_points)?;
    let fail = |detail: String| HomotopyError::SectionFailure {
        t,
        scaled: scaled.clone(),
        detail,
    };
    let moved = s.added_point(&scaled).map_err(|e| fail(e.to_string()))?;
    let gap = scaled
        .points()
        .iter()
        .map(|p| p.distance(&moved))
        .fold(f64::INFINITY, f64::min);
    if !(gap > EPS_GAP) {
        return Err(fail(format!("added point {moved} within {gap:e} of the pair")));
    }
    if !(moved.norm() <= 1.0 + EPS_BALL) {
        return Err(fail(format!("added point {moved} outside the ball")));
    }
    let p0 = scale_map_inverse(cd, t, &moved);
    let mut points = Vec::with_capacity(3);
    points.push(p0);
    points.extend(c.points().iter().cloned());
    Ok(Configuration::new(c.dim(), points)?)
}

/// Whether `p0` lies strictly between `p1` and `p2`, or off their line.
pub fn between_or_offline(p0: &Point, p1: &Point, p2: &Point, eps_col: f64) -> bool {
    let d = p2 - p1;
    let rel = p0 - p1;
    let u = rel.dot(&d) / d.norm_sq();
    let orth = (&rel - &(u * &d)).norm();
    orth > eps_col || (u > eps_col && u < 1.0 - eps_col)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Conjugation by the chord scaling, `t` from 0 to 1.
    Scaling,
    /// Straight line from the conjugated section to the midpoint.
    Line,
}

/// Sampled homotopy from a section to the midpoint section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomotopyTrace {
    /// Strictly increasing times in `[0, 1]`; the scaling phase occupies
    /// `[0, 1/2]` and the straight line `(1/2, 1]`.
    pub grid: Vec<f64>,
    pub frames: Vec<Configuration>,
    pub phase: Vec<Phase>,
}

impl HomotopyTrace {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn first(&self) -> Option<&Configuration> {
        self.frames.first()
    }

    pub fn last(&self) -> Option<&Configuration> {
        self.frames.last()
    }
}

/// Homotopy through sections from `s` to the midpoint, sampled with
/// `frames_per_phase` frames in each phase.
pub fn uniqueness_homotopy(
    s: &dyn Section,
    c: &Configuration,
    frames_per_phase: usize,
) -> Result<HomotopyTrace, HomotopyError> {
    if frames_per_phase < 2 {
        return Err(HomotopyError::TooFewFrames(frames_per_phase));
    }
    s.check_arity(c.len())?;
    let cd = chord_data(c)?;
    let (p1, p2) = (&c.points()[0], &c.points()[1]);
    let steps = frames_per_phase - 1;

    let mut trace = HomotopyTrace {
        grid: Vec::with_capacity(2 * frames_per_phase),
        frames: Vec::with_capacity(2 * frames_per_phase),
        phase: Vec::with_capacity(2 * frames_per_phase),
    };
    for k in 0..frames_per_phase {
        let t = k as f64 / steps as f64;
        let frame = conjugated_section_with(s, c, &cd, t)?;
        push_frame(&mut trace, 0.5 * t, frame, Phase::Scaling)?;
    }

    let end = trace.frames.last().expect("nonempty").points()[0].clone();
    if !between_or_offline(&end, p1, p2, EPS_COL) {
        return Err(HomotopyError::NotBetweenOrOffline {
            p0: end,
            input: c.clone(),
        });
    }
    let target = midpoint(p1, p2);
    for k in 1..=frames_per_phase {
        let u = k as f64 / frames_per_phase as f64;
        let p0 = end.lerp(&target, u);
        let frame = Configuration::new(c.dim(), vec![p0, p1.clone(), p2.clone()])?;
        push_frame(&mut trace, 0.5 + 0.5 * u, frame, Phase::Line)?;
    }
    Ok(trace)
}

fn push_frame(
    trace: &mut HomotopyTrace,
    tau: f64,
    frame: Configuration,
    phase: Phase,
) -> Result<(), HomotopyError> {
    let pts = frame.points();
    let gap = pts[1..]
        .iter()
        .map(|p| p.distance(&pts[0]))
        .fold(f64::INFINITY, f64::min);
    if !(gap > EPS_GAP) {
        return Err(HomotopyError::FrameInvalid {
            frame: trace.frames.len(),
            tau,
            detail: format!("added point within {gap:e} of the pair"),
        });
    }
    trace.grid.push(tau);
    trace.frames.push(frame);
    trace.phase.push(phase);
    Ok(())
}

/// Flow of the vector field `-(p - p_1)` for time `t`, with `p_1` on the
/// unit sphere: `p_k ↦ p_1 + e^{-t} (p_k - p_1)`. For `t > 0` every other
/// point is pushed into the open ball.
pub fn boundary_pushoff(c: &Configuration, t: f64) -> Result<Configuration, HomotopyError> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(HomotopyError::BadTime(t));
    }
    let anchor = &c.points()[0];
    let norm = anchor.norm();
    if (norm - 1.0).abs() > EPS_BALL {
        return Err(HomotopyError::AnchorNotOnSphere { norm });
    }
    if t == 0.0 {
        return Ok(c.clone());
    }
    let factor = (-t).exp();
    let mut points = Vec::with_capacity(c.len());
    points.push(anchor.clone());
    points.extend(
        c.points()[1..]
            .iter()
            .map(|p| anchor + &(factor * &(p - anchor))),
    );
    Ok(Configuration::new(c.dim(), points)?)
}
