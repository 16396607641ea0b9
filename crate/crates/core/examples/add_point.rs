//! Add a point to a configuration with each builtin section, then forget it
//! again.
//!
//! cargo run --example add_point

use diskconf::sections::{AddNear, BiasedInterpolation, Midpoint};
use diskconf::{extend, forget_point, Configuration, Section};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pair = Configuration::from_rows(&[[-0.5, 0.0], [0.5, 0.0]])?;
    let triple = Configuration::from_rows(&[[0.9, 0.0], [0.0, 0.0], [0.1, 0.0]])?;

    let sections: Vec<(Box<dyn Section>, &Configuration)> = vec![
        (Box::new(Midpoint), &pair),
        (Box::new(BiasedInterpolation::new(0.25)?), &pair),
        (Box::new(AddNear::new(1, 2)?), &triple),
        (Box::new(AddNear::new(3, 1)?), &triple),
    ];

    for (s, c) in &sections {
        let extended = extend(s.as_ref(), c)?;
        let back = forget_point(&extended)?;
        println!(
            "{:<14} p0 = {:<28} forget round-trips: {}",
            s.name(),
            extended.points()[0].to_string(),
            back.bits_eq(c)
        );
    }

    println!("\n{}", serde_json::to_string(&extend(&Midpoint, &pair)?)?);
    Ok(())
}
