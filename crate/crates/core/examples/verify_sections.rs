//! Randomized check of the section contract. The centroid passes random
//! sampling even on three points; its failure only shows on symmetric inputs.
//!
//! cargo run --release --example verify_sections

use diskconf::sections::{verify_section, SectionDescriptor, SectionRegistry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let registry = SectionRegistry::with_candidates();
    let runs = [
        ("midpoint", 2, 2),
        ("biased:0.25", 2, 2),
        ("add-near:1,2", 4, 3),
        ("add-near:3,1", 3, 1),
        ("centroid", 2, 2),
        ("centroid", 3, 1),
    ];
    println!("{:<14} {:>2} {:>2} {:>10} {:>8} {:>6}", "section", "n", "m", "worst gap", "equiv", "pass");
    for (desc, n, m) in runs {
        let s = registry.resolve(&desc.parse::<SectionDescriptor>()?)?;
        let r = verify_section(s.as_ref(), n, m, 5_000, 1)?;
        let equiv = if r.equivariance_checked {
            r.equivariance_violations.to_string()
        } else {
            "-".into()
        };
        println!(
            "{:<14} {:>2} {:>2} {:>10.2e} {:>8} {:>6}",
            desc, n, m, r.worst_gap, equiv, r.passed
        );
        if let Some(w) = &r.witnesses.section_property {
            println!("    witness: {}", w.detail);
        }
    }
    Ok(())
}
