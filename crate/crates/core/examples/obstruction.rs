//! Winding coefficients of point-adding rules in the plane. The midpoint on
//! two points satisfies the consistency identity; every symmetric candidate
//! on three points fails it.
//!
//! cargo run --release --example obstruction

use diskconf::obstruction::{default_base, measure_coefficients, DEFAULT_LOOP_STEPS};
use diskconf::sections::{Midpoint, SectionRegistry};
use diskconf::Section;

fn show(s: &dyn Section, n: usize) -> Result<(), Box<dyn std::error::Error>> {
    let base = default_base(n, 0);
    let r = measure_coefficients(s, n, &base, 0.1, DEFAULT_LOOP_STEPS)?;
    println!("{} on {n} points", r.section);
    println!("  lambda: {:?}", r.lambda_values);
    println!("  delta:  {:?}", r.delta_values);
    println!("  identity holds: {}", r.identity_holds);
    if let Some(w) = &r.collision_witness {
        println!(
            "  collision on {} frame {}: slots {:?} meet at {}",
            w.loop_id, w.frame, w.slots, w.added_point
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show(&Midpoint, 2)?;
    let registry = SectionRegistry::with_candidates();
    for name in ["centroid", "half-centroid", "shifted-centroid"] {
        show(registry.get(name).expect("registered").as_ref(), 3)?;
    }
    Ok(())
}
