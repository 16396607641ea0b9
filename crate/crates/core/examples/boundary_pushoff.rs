//! Push every point except the first into the interior of the ball.
//!
//! cargo run --example boundary_pushoff

use diskconf::geom::min_pairwise_gap;
use diskconf::homotopy::boundary_pushoff;
use diskconf::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = Configuration::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.2, -0.3]])?;
    for t in [0.0, 0.5, std::f64::consts::LN_2, 2.0] {
        let pushed = boundary_pushoff(&c, t)?;
        let norms: Vec<String> = pushed.points().iter().map(|p| format!("{:.4}", p.norm())).collect();
        println!(
            "t = {t:.4}  norms [{}]  min gap {:.4}",
            norms.join(", "),
            min_pairwise_gap(&pushed)
        );
    }
    Ok(())
}
