//! Integrates a random walk by repeated binding and reports decode error
//! and the home vector.

use gc_vsa::experiments::{run_path_integration, PathIntegrationParams};
use gc_vsa::GridConfig;

fn main() -> gc_vsa::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let config = GridConfig::default().shared()?;
    let params = PathIntegrationParams::default();
    let res = run_path_integration(&config, &params, seed)?;

    for t in (0..=params.steps).step_by(20) {
        let (p, d) = (res.trajectory.positions[t], res.decoded[t]);
        println!(
            "t={t:3}  true ({:5.2}, {:5.2})  decoded ({:4.1}, {:4.1})",
            p.x, p.y, d.x, d.y
        );
    }
    println!("mse {:.4} px^2, max error {:.3} px", res.mse, res.max_error);
    println!(
        "home vector ({:.1}, {:.1}), true ({:.2}, {:.2})",
        res.home_vector.x, res.home_vector.y, res.true_home_vector.x, res.true_home_vector.y
    );
    Ok(())
}
