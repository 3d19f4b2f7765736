//! Forward-backward-forward iteration on the relay system at a step that
//! respects `gamma L < 1` and at one that does not.

use lure_eq::cli::repro::{relay_system, relay_x0};
use lure_eq::lure::equilibrium;
use lure_eq::SolverConfig;

fn main() -> lure_eq::Result<()> {
    let system = relay_system();
    for gamma in [0.1, 0.5] {
        let cfg = SolverConfig::default()
            .with_gamma(gamma)
            .with_max_iter(2000);
        let r = equilibrium(&system, &relay_x0(), &cfg)?;
        println!(
            "gamma = {gamma}: {} after {} iterations, x = {:?}",
            r.status,
            r.iterations,
            r.solution.as_slice()
        );
    }
    Ok(())
}
