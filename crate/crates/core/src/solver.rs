//! Search for fixed configurations of symmetric maps.
//!
//! A map `f` from configurations to the ball has a fixed configuration `S`
//! when `f(S)` is one of the points of `S`. For `n ≠ 2` points in dimension
//! at least 2 every continuous symmetric `f` has one; for `n = 2` the
//! midpoint map has none. The search minimises the residual
//! `min_i ‖f(c) - p_i‖` with a multistart Nelder-Mead over the `n·m`
//! coordinates, projecting every trial point radially into the ball and
//! rejecting trial configurations whose points come closer than a
//! separation floor.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{apply_permutation, min_pairwise_gap, Configuration, GeomError, Point};
use crate::sample::{random_configuration_with_gap, random_nontrivial_permutation, seeded_rng};
use crate::tolerance::{EPS_BALL, SAMPLER_MIN_GAP};

/// Threshold on `‖f(σ·c) - f(c)‖` counted as a symmetry violation.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid map descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("no map registered under `{0}`")]
    Unknown(String),
    #[error("map `{map}` returned {value}, outside the closed unit ball")]
    OutsideBall { map: String, value: Point },
    #[error("map `{map}` returned a point of dimension {found}, expected {expected}")]
    WrongDimension {
        map: String,
        expected: usize,
        found: usize,
    },
    #[error("search needs n ≥ 1, m ≥ 1, tol > 0 and at least one restart")]
    BadOptions,
}

/// A map from configurations to a single point of the ball.
pub trait PointMap: Send + Sync {
    fn name(&self) -> String;
    fn eval(&self, c: &Configuration) -> Point;
    fn declared_symmetric(&self) -> bool;
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantMap {
    target: Point,
}

impl ConstantMap {
    pub fn new(target: Point) -> Result<Self, SolverError> {
        check_in_ball("constant", &target)?;
        Ok(Self { target })
    }
}

impl PointMap for ConstantMap {
    fn name(&self) -> String {
        format!("constant:{}", join(self.target.coords()))
    }

    fn eval(&self, _c: &Configuration) -> Point {
        self.target.clone()
    }

    fn declared_symmetric(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CentroidMap;

impl PointMap for CentroidMap {
    fn name(&self) -> String {
        "centroid".into()
    }

    fn eval(&self, c: &Configuration) -> Point {
        c.centroid()
    }

    fn declared_symmetric(&self) -> bool {
        true
    }
}

/// `c ↦ α · centroid(c) + (1 - α) · q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionMap {
    alpha: f64,
    target: Point,
}

impl ContractionMap {
    pub fn new(alpha: f64, target: Point) -> Result<Self, SolverError> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(SolverError::InvalidDescriptor(format!(
                "contraction needs 0 ≤ α < 1, got {alpha}"
            )));
        }
        check_in_ball("contraction", &target)?;
        Ok(Self { alpha, target })
    }
}

impl PointMap for ContractionMap {
    fn name(&self) -> String {
        format!("contraction:{},{}", self.alpha, join(self.target.coords()))
    }

    fn eval(&self, c: &Configuration) -> Point {
        let g = c.centroid();
        Point::new(
            g.coords()
                .iter()
                .zip(self.target.coords())
                .map(|(x, q)| self.alpha * x + (1.0 - self.alpha) * q)
                .collect(),
        )
    }

    fn declared_symmetric(&self) -> bool {
        true
    }
}

type MapFn = dyn Fn(&Configuration) -> Point + Send + Sync;

/// A map backed by a closure.
#[derive(Clone)]
pub struct FnMap {
    name: String,
    symmetric: bool,
    rule: Arc<MapFn>,
}

impl FnMap {
    pub fn new<F>(name: impl Into<String>, symmetric: bool, rule: F) -> Self
    where
        F: Fn(&Configuration) -> Point + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            symmetric,
            rule: Arc::new(rule),
        }
    }

    /// `c ↦ p_1`: not symmetric, kept as a negative control.
    pub fn first_point() -> Self {
        Self::new("first-point", false, |c| c.points()[0].clone())
    }
}

impl fmt::Debug for FnMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnMap")
            .field("name", &self.name)
            .field("symmetric", &self.symmetric)
            .finish_non_exhaustive()
    }
}

impl PointMap for FnMap {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval(&self, c: &Configuration) -> Point {
        (self.rule)(c)
    }

    fn declared_symmetric(&self) -> bool {
        self.symmetric
    }
}

/// Text form: `constant:x,y,…`, `centroid`, `contraction:α,x,y,…`, or a
/// registered name.
#[derive(Debug, Clone, PartialEq)]
pub enum PointMapDescriptor {
    Constant(Point),
    Centroid,
    Contraction { alpha: f64, target: Point },
    Registered(String),
}

impl FromStr for PointMapDescriptor {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, SolverError> {
        let s = s.trim();
        let numbers = |args: &str| -> Result<Vec<f64>, SolverError> {
            args.split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| SolverError::InvalidDescriptor(format!("{s}: {e}")))
        };
        match s.split_once(':') {
            None if s == "centroid" => Ok(Self::Centroid),
            None if s.is_empty() => Err(SolverError::InvalidDescriptor("empty name".into())),
            None if s == "constant" || s == "contraction" => {
                Err(SolverError::InvalidDescriptor(format!("{s} needs parameters")))
            }
            None => Ok(Self::Registered(s.to_string())),
            Some(("constant", args)) => {
                let target = Point::new(numbers(args)?);
                ConstantMap::new(target.clone())?;
                Ok(Self::Constant(target))
            }
            Some(("contraction", args)) => {
                let v = numbers(args)?;
                if v.len() < 2 {
                    return Err(SolverError::InvalidDescriptor(format!(
                        "{s}: expected α followed by target coordinates"
                    )));
                }
                let target = Point::new(v[1..].to_vec());
                ContractionMap::new(v[0], target.clone())?;
                Ok(Self::Contraction {
                    alpha: v[0],
                    target,
                })
            }
            Some(_) => Err(SolverError::InvalidDescriptor(s.to_string())),
        }
    }
}

impl fmt::Display for PointMapDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(q) => write!(f, "constant:{}", join(q.coords())),
            Self::Centroid => write!(f, "centroid"),
            Self::Contraction { alpha, target } => {
                write!(f, "contraction:{alpha},{}", join(target.coords()))
            }
            Self::Registered(name) => write!(f, "{name}"),
        }
    }
}

/// Named maps for `PointMapDescriptor::Registered`.
#[derive(Clone, Default)]
pub struct MapRegistry {
    entries: BTreeMap<String, Arc<dyn PointMap>>,
}

impl MapRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Holds the asymmetric control `first-point`.
    pub fn with_fixtures() -> Self {
        let mut reg = Self::empty();
        reg.register("first-point", Arc::new(FnMap::first_point()));
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, map: Arc<dyn PointMap>) {
        self.entries.insert(name.into(), map);
    }

    pub fn resolve(&self, d: &PointMapDescriptor) -> Result<Arc<dyn PointMap>, SolverError> {
        Ok(match d {
            PointMapDescriptor::Constant(q) => Arc::new(ConstantMap::new(q.clone())?),
            PointMapDescriptor::Centroid => Arc::new(CentroidMap),
            PointMapDescriptor::Contraction { alpha, target } => {
                Arc::new(ContractionMap::new(*alpha, target.clone())?)
            }
            PointMapDescriptor::Registered(name) => self
                .entries
                .get(name)
                .cloned()
                .ok_or_else(|| SolverError::Unknown(name.clone()))?,
        })
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn check_in_ball(map: &str, p: &Point) -> Result<(), SolverError> {
    if p.coords().iter().all(|x| x.is_finite()) && p.norm() <= 1.0 + EPS_BALL {
        Ok(())
    } else {
        Err(SolverError::OutsideBall {
            map: map.to_string(),
            value: p.clone(),
        })
    }
}

/// Distance from `f(c)` to the nearest point of `c`, with the smallest
/// 1-based label attaining it.
pub fn residual_with_index(f: &dyn PointMap, c: &Configuration) -> Result<(f64, usize), SolverError> {
    let q = f.eval(c);
    if q.dim() != c.dim() {
        return Err(SolverError::WrongDimension {
            map: f.name(),
            expected: c.dim(),
            found: q.dim(),
        });
    }
    check_in_ball(&f.name(), &q)?;
    let mut best = (f64::INFINITY, 0);
    for (k, p) in c.points().iter().enumerate() {
        let d = q.distance(p);
        if d < best.0 {
            best = (d, k + 1);
        }
    }
    Ok(best)
}

/// `min_i ‖f(c) - p_i‖`.
pub fn residual(f: &dyn PointMap, c: &Configuration) -> Result<f64, SolverError> {
    residual_with_index(f, c).map(|(r, _)| r)
}

/// Counts samples with `‖f(σ·c) - f(c)‖ > SYMMETRY_TOL` for random `c` and
/// random non-identity `σ`.
pub fn symmetry_check(
    f: &dyn PointMap,
    n: usize,
    m: usize,
    samples: usize,
    seed: u64,
) -> Result<usize, SolverError> {
    let mut rng = seeded_rng(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let c = random_configuration_with_gap(&mut rng, n, m, SAMPLER_MIN_GAP);
        let sigma = random_nontrivial_permutation(&mut rng, n);
        let permuted = apply_permutation(&c, &sigma)?;
        if f.eval(&c).distance(&f.eval(&permuted)) > SYMMETRY_TOL {
            violations += 1;
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Converged when the best residual is below this.
    pub tol: f64,
    pub restarts: usize,
    /// Total objective evaluations across all restarts.
    pub budget: usize,
    /// Trial configurations with a smaller pairwise gap score `+inf`.
    pub min_separation: f64,
    /// Side of the initial simplex, per coordinate.
    pub initial_step: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            restarts: 32,
            budget: 100_000,
            min_separation: SAMPLER_MIN_GAP,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedSearchResult {
    pub best_config: Configuration,
    pub residual: f64,
    /// 1-based label of the point nearest to `f(best_config)`.
    pub nearest_label: usize,
    pub evaluations: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

/// Multistart projected Nelder-Mead on the residual. Restarts run in order
/// and stop at the first one reaching `tol`; the result is a pure function
/// of the arguments.
pub fn find_fixed_configuration(
    f: &dyn PointMap,
    n: usize,
    m: usize,
    opts: &SearchOptions,
    seed: u64,
) -> Result<FixedSearchResult, SolverError> {
    if n == 0 || m == 0 || !(opts.tol > 0.0) || opts.restarts == 0 {
        return Err(SolverError::BadOptions);
    }
    let mut rng = seeded_rng(seed);
    let per_restart = (opts.budget / opts.restarts).max(1);
    let start_gap = opts.min_separation.max(SAMPLER_MIN_GAP);

    let mut evaluations = 0;
    let mut best: Option<(Configuration, f64)> = None;
    let mut restarts_used = 0;

    for _ in 0..opts.restarts {
        if evaluations >= opts.budget && best.is_some() {
            break;
        }
        restarts_used += 1;
        let start = random_configuration_with_gap(&mut rng, n, m, start_gap);
        let cap = per_restart.min(opts.budget.saturating_sub(evaluations)).max(1);
        let mut objective = Objective {
            f,
            n,
            m,
            min_separation: opts.min_separation,
            best: None,
        };
        let x0: Vec<f64> = start.points().iter().flat_map(|p| p.coords().to_vec()).collect();
        let used = local_search(&mut objective, x0, opts.initial_step, cap, opts.tol)?;
        evaluations += used;
        if let Some((c, r)) = objective.best {
            if best.as_ref().is_none_or(|(_, b)| r < *b) {
                best = Some((c, r));
            }
        }
        if best.as_ref().is_some_and(|(_, r)| *r < opts.tol) {
            break;
        }
    }

    let (best_config, _) = best.expect("every restart evaluates its feasible start");
    let (residual, nearest_label) = residual_with_index(f, &best_config)?;
    Ok(FixedSearchResult {
        best_config,
        residual,
        nearest_label,
        evaluations,
        restarts_used,
        converged: residual < opts.tol,
    })
}

struct Objective<'a> {
    f: &'a dyn PointMap,
    n: usize,
    m: usize,
    min_separation: f64,
    best: Option<(Configuration, f64)>,
}

impl Objective<'_> {
    /// Projects `x` into the ball in place and scores it.
    fn eval(&mut self, x: &mut [f64]) -> Result<f64, SolverError> {
        for chunk in x.chunks_mut(self.m) {
            let norm = chunk.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1.0 {
                chunk.iter_mut().for_each(|v| *v /= norm);
            }
        }
        let points = x.chunks(self.m).map(|c| Point::new(c.to_vec())).collect();
        let c = match Configuration::new(self.m, points) {
            Ok(c) => c,
            Err(_) => return Ok(f64::INFINITY),
        };
        debug_assert_eq!(c.len(), self.n);
        if min_pairwise_gap(&c) < self.min_separation {
            return Ok(f64::INFINITY);
        }
        let r = residual(self.f, &c)?;
        if self.best.as_ref().is_none_or(|(_, b)| r < *b) {
            self.best = Some((c, r));
        }
        Ok(r)
    }
}

/// Nelder-Mead from `x0`, re-started around its own best point while that
/// keeps helping. Returns the number of evaluations used.
fn local_search(
    obj: &mut Objective<'_>,
    x0: Vec<f64>,
    step: f64,
    cap: usize,
    tol: f64,
) -> Result<usize, SolverError> {
    let mut used = 0;
    let mut x = x0;
    let mut step = step;
    let mut last = f64::INFINITY;
    for _ in 0..8 {
        if used >= cap {
            break;
        }
        let (xb, fb, k) = nelder_mead(obj, x, step, cap - used, tol)?;
        used += k;
        if fb == 0.0 || !(fb < last) || (last - fb) <= 1e-12 * last.abs() {
            break;
        }
        last = fb;
        x = xb;
        step *= 0.25;
    }
    Ok(used)
}

/// One Nelder-Mead run with dimension-adaptive coefficients. Terminates on
/// an exact zero, on budget, or once the simplex has collapsed in both
/// value and extent.
fn nelder_mead(
    obj: &mut Objective<'_>,
    x0: Vec<f64>,
    step: f64,
    cap: usize,
    tol: f64,
) -> Result<(Vec<f64>, f64, usize), SolverError> {
    let dim = x0.len();
    let d = dim as f64;
    let (alpha, gamma, rho, sigma) = if dim > 1 {
        (1.0, 1.0 + 2.0 / d, 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let f_tol = tol * 1e-6;
    let x_tol = 1e-12;

    let mut evals = 0;
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);

    let mut v0 = x0;
    let f0 = obj.eval(&mut v0)?;
    evals += 1;
    simplex.push(v0);
    values.push(f0);
    if f0 == 0.0 || evals >= cap {
        return Ok((simplex.swap_remove(0), f0, evals));
    }
    for k in 0..dim {
        let mut v = simplex[0].clone();
        // Step away from the boundary so the projection keeps the simplex
        // nondegenerate.
        v[k] += if v[k] > 0.0 { -step } else { step };
        let fv = obj.eval(&mut v)?;
        evals += 1;
        simplex.push(v);
        values.push(fv);
        if evals >= cap {
            break;
        }
    }

    let mut order: Vec<usize> = (0..simplex.len()).collect();
    while evals < cap && simplex.len() == dim + 1 {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (ib, iw, isw) = (order[0], order[dim], order[dim - 1]);
        if values[ib] == 0.0 {
            break;
        }
        let spread = values[iw] - values[ib];
        let extent = simplex
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[ib])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.is_finite() && spread <= f_tol && extent <= x_tol {
            break;
        }
        if extent == 0.0 {
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in &order[..dim] {
            for (c, v) in centroid.iter_mut().zip(&simplex[i]) {
                *c += v / d;
            }
        }
        let along = |coef: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let mut xr = along(alpha, &simplex[iw]);
        let fr = obj.eval(&mut xr)?;
        evals += 1;
        if fr < values[ib] {
            let mut xe = along(alpha * gamma, &simplex[iw]);
            let fe = obj.eval(&mut xe)?;
            evals += 1;
            if fe < fr {
                simplex[iw] = xe;
                values[iw] = fe;
            } else {
                simplex[iw] = xr;
                values[iw] = fr;
            }
            continue;
        }
        if fr < values[isw] {
            simplex[iw] = xr;
            values[iw] = fr;
            continue;
        }
        let (mut xc, outside) = if fr < values[iw] {
            (along(alpha * rho, &simplex[iw]), true)
        } else {
            (along(-rho, &simplex[iw]), false)
        };
        let fc = obj.eval(&mut xc)?;
        evals += 1;
        let accept = if outside { fc <= fr } else { fc < values[iw] };
        if accept {
            simplex[iw] = xc;
            values[iw] = fc;
            continue;
        }
        let best = simplex[ib].clone();
        for &i in &order[1..] {
            if evals >= cap {
                break;
            }
            let mut v: Vec<f64> = best
                .iter()
                .zip(&simplex[i])
                .map(|(b, w)| b + sigma * (w - b))
                .collect();
            values[i] = obj.eval(&mut v)?;
            simplex[i] = v;
            evals += 1;
        }
    }

    let ib = (0..simplex.len())
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("nonempty simplex");
    Ok((simplex.swap_remove(ib), values[ib], evals))
}
