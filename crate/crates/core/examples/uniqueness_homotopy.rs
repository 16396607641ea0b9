//! Deform a section on two points into the midpoint section and print the
//! track of the added point.
//!
//! cargo run --example uniqueness_homotopy

use diskconf::homotopy::{chord_data, uniqueness_homotopy};
use diskconf::sections::{midpoint, BiasedInterpolation};
use diskconf::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = Configuration::from_rows(&[[0.0, 0.0], [0.5, 0.0]])?;
    let cd = chord_data(&c)?;
    println!("chord: q1 = {}, q2 = {}, centre = {}, ratio = {}", cd.q1, cd.q2, cd.center, cd.ratio);

    let s = BiasedInterpolation::new(0.25)?;
    let trace = uniqueness_homotopy(&s, &c, 6)?;
    for ((tau, frame), phase) in trace.grid.iter().zip(&trace.frames).zip(&trace.phase) {
        println!("{tau:>6.3} {phase:?}\t p0 = {}", frame.points()[0]);
    }
    let end = &trace.last().expect("nonempty trace").points()[0];
    let mid = midpoint(&c.points()[0], &c.points()[1]);
    println!("ends at the midpoint: {}", end.distance(&mid) < 1e-10);
    Ok(())
}
