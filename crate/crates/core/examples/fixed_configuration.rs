//! Search for configurations S with f(S) in S.
//!
//! cargo run --release --example fixed_configuration

use diskconf::solver::{
    find_fixed_configuration, symmetry_check, CentroidMap, ContractionMap, PointMap, SearchOptions,
};
use diskconf::Point;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SearchOptions::default();
    let contraction = ContractionMap::new(0.5, Point::from([0.6, 0.0]))?;
    let cases: [(&dyn PointMap, usize); 4] = [
        (&contraction, 1),
        (&CentroidMap, 3),
        (&CentroidMap, 4),
        (&CentroidMap, 2),
    ];
    for (f, n) in cases {
        let asym = symmetry_check(f, n, 2, 200, 0)?;
        let r = find_fixed_configuration(f, n, 2, &opts, 7)?;
        println!(
            "{:<24} n={n} converged={:<5} residual={:.3e} evaluations={} restarts={} asymmetric samples={asym}",
            f.name(),
            r.converged,
            r.residual,
            r.evaluations,
            r.restarts_used
        );
    }
    Ok(())
}
