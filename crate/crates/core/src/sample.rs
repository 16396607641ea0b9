//! Seeded random configurations.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geom::{min_pairwise_gap, Configuration, Permutation, Point};
use crate::tolerance::SAMPLER_MIN_GAP;

/// The generator used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed unit ball of `R^dim`.
pub fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    let dir = unit_vector(rng, dim);
    let radius = rng.random::<f64>().powf(1.0 / dim as f64);
    radius * &dir
}

/// Uniform point on the unit sphere of `R^dim` (`{-1, 1}` when `dim = 1`).
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Point {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let p = Point::new(v);
        let norm = p.norm();
        if norm > 1e-12 {
            return (1.0 / norm) * &p;
        }
    }
}

/// Rejection sampler: `n` uniform points in the ball, redrawn until the
/// minimum pairwise gap is at least `min_gap`.
pub fn random_configuration_with_gap<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dim: usize,
    min_gap: f64,
) -> Configuration {
    loop {
        let points: Vec<Point> = (0..n).map(|_| uniform_in_ball(rng, dim)).collect();
        if let Ok(c) = Configuration::new(dim, points) {
            if min_pairwise_gap(&c) >= min_gap {
                return c;
            }
        }
    }
}

/// The default sampler used by the verification harnesses.
pub fn random_configuration<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> Configuration {
    random_configuration_with_gap(rng, n, dim, SAMPLER_MIN_GAP)
}

/// Random configuration whose first point lies on the unit sphere.
pub fn random_anchored_configuration<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    dim: usize,
) -> Configuration {
    loop {
        let mut points = vec![unit_vector(rng, dim)];
        points.extend((1..n).map(|_| uniform_in_ball(rng, dim)));
        if let Ok(c) = Configuration::new(dim, points) {
            if min_pairwise_gap(&c) >= SAMPLER_MIN_GAP {
                return c;
            }
        }
    }
}

/// Uniform random permutation (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffle of 0..n")
}

/// Uniform random permutation other than the identity; the identity is
/// returned only when `n < 2`.
pub fn random_nontrivial_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    if n < 2 {
        return Permutation::identity(n);
    }
    loop {
        let p = random_permutation(rng, n);
        if !p.is_identity() {
            return p;
        }
    }
}
