//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::{LN_2, TAU};
use std::hash::Hasher;
use std::process::ExitCode;
use std::time::Instant;

use diskconf::geom::{config_distance, min_pairwise_gap};
use diskconf::homotopy::{boundary_pushoff, chord_data, scale_map, uniqueness_homotopy, DEFAULT_FRAMES};
use diskconf::obstruction::{
    default_base, gauss_winding, generator_loop, measure_coefficients, winding_number,
    DEFAULT_LOOP_STEPS,
};
use diskconf::sample::{random_anchored_configuration, random_configuration, seeded_rng};
use diskconf::sections::{verify_section, AddNear, BiasedInterpolation, Midpoint, SectionRegistry};
use diskconf::solver::{find_fixed_configuration, CentroidMap, ContractionMap, SearchOptions};
use diskconf::{extend, Configuration, Point, Section};
use rand::Rng;

const SECTION_SAMPLES: usize = 10_000;
const EQUIVARIANCE_SAMPLES: usize = 10_000;
const HOMOTOPY_CONFIGS: usize = 1_000;
const CHORD_SAMPLES: usize = 10_000;
const PUSHOFF_SAMPLES: usize = 1_000;
const GENERATOR_LOOPS: usize = 100;

const TOL_HOMOTOPY_START: f64 = 1e-12;
const TOL_HOMOTOPY_END: f64 = 1e-10;
const TOL_MIDPOINT_TRACK: f64 = 1e-10;
const TOL_CHORD: f64 = 1e-10;
const TOL_PUSHOFF_GAP: f64 = 1e-12;
const EPS_GAP: f64 = 1e-9;
const EPS_BALL: f64 = 1e-12;
const SOLVER_TOL: f64 = 1e-6;
const SOLVER_MAX_EVALS: usize = 10_000;
const SOLVER_NONEXISTENCE_FLOOR: f64 = 1e-4;

struct Outcome {
    pass: bool,
    detail: String,
    fingerprint: u64,
}

#[derive(Default)]
struct Fp(DefaultHasher);

impl Fp {
    fn f(&mut self, x: f64) {
        self.0.write_u64(x.to_bits());
    }

    fn u(&mut self, x: usize) {
        self.0.write_usize(x);
    }

    fn config(&mut self, c: &Configuration) {
        for p in c.points() {
            p.coords().iter().for_each(|&x| self.f(x));
        }
    }

    fn done(self) -> u64 {
        self.0.finish()
    }
}

fn section_suite() -> Outcome {
    let mut fp = Fp::default();
    let mut runs = 0;
    let mut failures = Vec::new();
    for m in [1, 2, 3, 5] {
        for n in [2, 3, 4, 6] {
            let mut sections: Vec<Box<dyn Section>> = Vec::new();
            if n == 2 {
                sections.push(Box::new(Midpoint));
            }
            let mut pairs = vec![(1, 2), (2, 1), (n, 1)];
            pairs.sort();
            pairs.dedup();
            for (i, j) in pairs {
                sections.push(Box::new(AddNear::new(i, j).unwrap()));
            }
            for (k, s) in sections.iter().enumerate() {
                let seed = (1000 * m + 10 * n + k) as u64;
                let r = verify_section(s.as_ref(), n, m, SECTION_SAMPLES, seed).unwrap();
                runs += 1;
                fp.f(r.worst_gap);
                fp.f(r.worst_containment_excess);
                fp.u(r.section_property_violations);
                if r.section_property_violations > 0 || r.samples_run != SECTION_SAMPLES {
                    failures.push(format!("{} m={m} n={n}", r.section));
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{runs} runs x {SECTION_SAMPLES} samples, 0 violations")
        } else {
            format!("violations in {}", failures.join(", "))
        },
        fingerprint: fp.done(),
    }
}

fn equivariance() -> Outcome {
    let mut fp = Fp::default();
    let mid = verify_section(&Midpoint, 2, 2, EQUIVARIANCE_SAMPLES, 21).unwrap();
    let biased =
        verify_section(&BiasedInterpolation::new(0.25).unwrap(), 2, 2, EQUIVARIANCE_SAMPLES, 21).unwrap();
    fp.u(mid.equivariance_violations);
    fp.u(biased.equivariance_violations);
    Outcome {
        pass: mid.equivariance_checked
            && mid.equivariance_violations == 0
            && biased.equivariance_violations > 0,
        detail: format!(
            "midpoint {} violations, biased:0.25 {} violations",
            mid.equivariance_violations, biased.equivariance_violations
        ),
        fingerprint: fp.done(),
    }
}

fn homotopy_suite() -> Outcome {
    let mut fp = Fp::default();
    let sections: [Box<dyn Section>; 3] = [
        Box::new(Midpoint),
        Box::new(BiasedInterpolation::new(0.25).unwrap()),
        Box::new(AddNear::new(1, 2).unwrap()),
    ];
    let (mut worst_start, mut worst_end, mut worst_track) = (0.0f64, 0.0f64, 0.0f64);
    let mut invalid_frames = 0;
    let mut errors = 0;
    let mut traces = 0;
    for m in 1..=3 {
        let mut rng = seeded_rng(300 + m as u64);
        for _ in 0..HOMOTOPY_CONFIGS {
            let c = random_configuration(&mut rng, 2, m);
            let target = extend(&Midpoint, &c).unwrap();
            for (k, s) in sections.iter().enumerate() {
                let trace = match uniqueness_homotopy(s.as_ref(), &c, DEFAULT_FRAMES) {
                    Ok(t) => t,
                    Err(_) => {
                        errors += 1;
                        continue;
                    }
                };
                traces += 1;
                let start = extend(s.as_ref(), &c).unwrap();
                worst_start = worst_start.max(config_distance(&trace.frames[0], &start).unwrap());
                let last = trace.last().unwrap();
                worst_end = worst_end.max(config_distance(last, &target).unwrap());
                let p0_start = &trace.frames[0].points()[0];
                for frame in &trace.frames {
                    let p0 = &frame.points()[0];
                    let tail_ok = frame.points()[1..]
                        .iter()
                        .zip(c.points())
                        .all(|(a, b)| a.bits_eq(b));
                    let gap = c.points().iter().map(|p| p.distance(p0)).fold(f64::INFINITY, f64::min);
                    if !tail_ok || gap <= EPS_GAP || p0.norm() > 1.0 + EPS_BALL {
                        invalid_frames += 1;
                    }
                    if k == 0 {
                        worst_track = worst_track.max(p0.distance(p0_start));
                    }
                    fp.config(frame);
                }
            }
        }
    }
    Outcome {
        pass: errors == 0
            && invalid_frames == 0
            && worst_start <= TOL_HOMOTOPY_START
            && worst_end <= TOL_HOMOTOPY_END
            && worst_track <= TOL_MIDPOINT_TRACK,
        detail: format!(
            "{traces} traces, {errors} errors, {invalid_frames} invalid frames, start err {worst_start:.1e}, \
             end err {worst_end:.1e}, midpoint drift {worst_track:.1e}"
        ),
        fingerprint: fp.done(),
    }
}

fn chord_oracle() -> Outcome {
    let mut fp = Fp::default();
    let mut rng = seeded_rng(400);
    let (mut worst_rel, mut worst_sphere, mut min_ratio) = (0.0f64, 0.0f64, f64::INFINITY);
    for k in 0..CHORD_SAMPLES {
        let c = random_configuration(&mut rng, 2, 1 + k % 3);
        let cd = chord_data(&c).unwrap();
        min_ratio = min_ratio.min(cd.ratio);
        for (p, q) in [(&c.points()[0], &cd.q1), (&c.points()[1], &cd.q2)] {
            let lhs = q - &cd.center;
            let rhs = cd.ratio * &(p - &cd.center);
            let err = lhs.coords().iter().zip(rhs.coords()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst_rel = worst_rel.max(err);
            worst_sphere = worst_sphere.max((scale_map(&cd, 1.0, p).norm() - 1.0).abs());
        }
        fp.f(cd.ratio);
        fp.config(&Configuration::new(c.dim(), vec![cd.center.clone()]).unwrap());
    }
    let example = Configuration::from_rows(&[[-0.5, 0.0], [0.5, 0.0]]).unwrap();
    let cd = chord_data(&example).unwrap();
    let exact = cd.ratio == 2.0 && cd.center.coords() == [0.0, 0.0];
    Outcome {
        pass: worst_rel <= TOL_CHORD && worst_sphere <= TOL_CHORD && min_ratio >= 1.0 && exact,
        detail: format!(
            "similarity err {worst_rel:.1e}, sphere err {worst_sphere:.1e}, min r {min_ratio:.4}, \
             worked example exact: {exact}"
        ),
        fingerprint: fp.done(),
    }
}

fn pushoff() -> Outcome {
    let mut fp = Fp::default();
    let mut rng = seeded_rng(500);
    let (mut worst_gap, mut escaped, mut moved_anchor) = (0.0f64, 0, 0);
    for _ in 0..PUSHOFF_SAMPLES {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=3);
        let c = random_anchored_configuration(&mut rng, n, m);
        let pushed = boundary_pushoff(&c, LN_2).unwrap();
        if !pushed.points()[0].bits_eq(&c.points()[0]) {
            moved_anchor += 1;
        }
        escaped += pushed.points()[1..].iter().filter(|p| p.norm() >= 1.0).count();
        worst_gap = worst_gap.max((min_pairwise_gap(&pushed) - 0.5 * min_pairwise_gap(&c)).abs());
        fp.config(&pushed);
    }
    Outcome {
        pass: escaped == 0 && moved_anchor == 0 && worst_gap <= TOL_PUSHOFF_GAP,
        detail: format!(
            "{PUSHOFF_SAMPLES} samples, {escaped} points on the sphere, {moved_anchor} anchors moved, \
             gap err {worst_gap:.1e}"
        ),
        fingerprint: fp.done(),
    }
}

fn circle(k: usize, turns: f64, reverse: bool) -> Vec<[f64; 2]> {
    let mut vs: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let a = TAU * turns * i as f64 / k as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    if reverse {
        vs.reverse();
    }
    vs
}

fn winding_engine() -> Outcome {
    let mut fp = Fp::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for k in [64, 256] {
        let got = [
            winding_number(&circle(k, 1.0, false)),
            winding_number(&circle(k, 1.0, true)),
            winding_number(&circle(k, 2.0, false)),
            winding_number(&circle(2 * k, 1.0, false)),
        ];
        let got: Vec<i64> = got.into_iter().map(|w| w.unwrap_or(i64::MIN)).collect();
        ok &= got == [1, -1, 2, 1];
        notes.push(format!("K={k}: {got:?}"));
        got.iter().for_each(|&w| fp.u(w as usize));
    }
    let mut rng = seeded_rng(600);
    let mut symmetric = 0;
    for i in 0..GENERATOR_LOOPS {
        let n = rng.random_range(2..=6);
        let a = rng.random_range(1..=n);
        let b = loop {
            let b = rng.random_range(1..=n);
            if b != a {
                break b;
            }
        };
        let base = default_base(n, i as u64);
        let lp = generator_loop(n, a, b, &base, 0.1, DEFAULT_LOOP_STEPS).unwrap();
        let (ab, ba) = (gauss_winding(&lp, a, b).unwrap(), gauss_winding(&lp, b, a).unwrap());
        if ab == ba {
            symmetric += 1;
        }
        fp.u(ab as usize);
    }
    ok &= symmetric == GENERATOR_LOOPS;
    notes.push(format!("{symmetric}/{GENERATOR_LOOPS} generator loops symmetric"));
    Outcome {
        pass: ok,
        detail: notes.join("; "),
        fingerprint: fp.done(),
    }
}

fn obstruction_positive() -> Outcome {
    let mut fp = Fp::default();
    let mut good = 0;
    let mut total = 0;
    for seed in 0..10 {
        for radius in [0.05, 0.1, 0.2] {
            total += 1;
            let base = default_base(2, seed);
            let r = measure_coefficients(&Midpoint, 2, &base, radius, DEFAULT_LOOP_STEPS).unwrap();
            if r.lambda == Some(1) && r.identity_holds {
                good += 1;
            }
            fp.u(r.lambda.unwrap_or(-99) as usize);
        }
    }
    Outcome {
        pass: good == total,
        detail: format!("lambda = 1 and identity holds on {good}/{total} runs"),
        fingerprint: fp.done(),
    }
}

fn obstruction_negative() -> Outcome {
    let mut fp = Fp::default();
    let registry = SectionRegistry::with_candidates();
    let base = default_base(3, 0);
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["centroid", "half-centroid", "shifted-centroid"] {
        let s = registry.get(name).unwrap();
        let r = measure_coefficients(s.as_ref(), 3, &base, 0.1, DEFAULT_LOOP_STEPS).unwrap();
        let fails = r.collision_witness.is_some() || !r.identity_holds;
        ok &= fails;
        if name == "centroid" {
            let collinear = r
                .collision_witness
                .as_ref()
                .is_some_and(|w| w.loop_id == "probe:collinear");
            ok &= collinear;
        }
        if let Some(w) = &r.collision_witness {
            fp.config(&w.input);
        }
        notes.push(format!(
            "{name}: witness {}, identity {}",
            r.collision_witness.as_ref().map_or("none".into(), |w| w.loop_id.clone()),
            r.identity_holds
        ));
    }
    Outcome {
        pass: ok,
        detail: notes.join("; "),
        fingerprint: fp.done(),
    }
}

fn solver() -> Outcome {
    let mut fp = Fp::default();
    let opts = SearchOptions::default();
    let contraction = ContractionMap::new(0.5, Point::from([0.6, 0.0])).unwrap();
    let one = find_fixed_configuration(&contraction, 1, 2, &opts, 0).unwrap();
    let err = one.best_config.points()[0].distance(&Point::from([0.6, 0.0]));
    let three = find_fixed_configuration(&CentroidMap, 3, 2, &opts, 0).unwrap();
    let two = find_fixed_configuration(&CentroidMap, 2, 2, &opts, 0).unwrap();
    for r in [&one, &three, &two] {
        fp.f(r.residual);
        fp.u(r.evaluations);
        fp.config(&r.best_config);
    }
    let pass = one.converged
        && err <= SOLVER_TOL
        && one.evaluations < SOLVER_MAX_EVALS
        && three.converged
        && three.residual < SOLVER_TOL
        && !two.converged
        && two.residual > SOLVER_NONEXISTENCE_FLOOR;
    Outcome {
        pass,
        detail: format!(
            "n=1 err {err:.1e} in {} evals; n=3 residual {:.1e}; n=2 converged {} residual {:.1e}",
            one.evaluations, three.residual, two.converged, two.residual
        ),
        fingerprint: fp.done(),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("section suite", section_suite),
        ("equivariance", equivariance),
        ("homotopy suite", homotopy_suite),
        ("chord geometry", chord_oracle),
        ("boundary push-off", pushoff),
        ("winding engine", winding_engine),
        ("obstruction, positive case", obstruction_positive),
        ("obstruction, negative cases", obstruction_negative),
        ("solver", solver),
    ];
    let mut all_pass = true;
    let mut first = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let out = run();
        all_pass &= out.pass;
        println!(
            "criterion {:>2} {:<28} {}  {} ({:.1}s)",
            k + 1,
            name,
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            started.elapsed().as_secs_f64()
        );
        first.push(out.fingerprint);
    }
    let started = Instant::now();
    let differing: Vec<String> = criteria
        .iter()
        .zip(&first)
        .enumerate()
        .filter(|(_, ((_, run), fp))| run().fingerprint != **fp)
        .map(|(k, _)| (k + 1).to_string())
        .collect();
    let deterministic = differing.is_empty();
    all_pass &= deterministic;
    println!(
        "criterion 10 {:<28} {}  {} ({:.1}s)",
        "determinism",
        if deterministic { "PASS" } else { "FAIL" },
        if deterministic {
            "criteria 1-9 bit-identical on rerun".to_string()
        } else {
            format!("criteria {} differ on rerun", differing.join(", "))
        },
        started.elapsed().as_secs_f64()
    );
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
