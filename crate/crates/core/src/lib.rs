//! Adding a point to configurations in the closed unit ball.
//!
//! An ordered configuration is a list of distinct points in the closed unit
//! `m`-ball. A *section* adds a new point `p_0`, distinct from the others,
//! and depends continuously on the input. This crate provides:
//!
//! * [`geom`]: points, configurations, permutations and the `Σ_n` action.
//! * [`sections`]: the section trait, the builtin sections `midpoint`,
//!   `add-near:i,j` and `biased:α`, and a randomized verifier.
//! * [`candidates`]: symmetric point-adding rules that fail to be sections.
//! * [`homotopy`]: the chord rescaling that deforms any section on two points
//!   into the midpoint section, and the boundary push-off.
//! * [`obstruction`]: winding numbers along generator loops, used to show
//!   that no symmetric section exists on three or more points in the plane.
//! * [`solver`]: a numerical search for fixed configurations of symmetric
//!   maps.
//! * [`cli`]: the `diskconf` command line.
//!
//! Runnable examples live in `examples/`: `add_point`, `verify_sections`,
//! `uniqueness_homotopy`, `boundary_pushoff`, `obstruction` and
//! `fixed_configuration`.

// Negated float comparisons are used on purpose so that NaN fails validity checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod candidates;
pub mod cli;
pub mod geom;
pub mod homotopy;
pub mod obstruction;
pub mod sample;
pub mod sections;
pub mod solver;
pub mod tolerance;

pub use geom::{apply_permutation, Configuration, GeomError, Permutation, Point};
pub use sections::{extend, forget_point, Section, SectionDescriptor, SectionRegistry};
