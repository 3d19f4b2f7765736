//! The three time-stepping schemes on the relay system.

use lure_eq::cli::repro::{relay_system, relay_x0};
use lure_eq::lure::simulate;
use lure_eq::Scheme;

fn main() -> lure_eq::Result<()> {
    let system = relay_system();
    let h = 0.04;
    for (scheme, t_end) in [
        (Scheme::Explicit, 40.0),
        (Scheme::SemiImplicit, 10.0),
        (Scheme::FullyImplicit, 10.0),
    ] {
        let traj = simulate(&system, scheme, &relay_x0(), h, t_end)?;
        let last = traj.last_state().expect("nonempty");
        println!(
            "{:>15}: {} steps, |x(T)| = {:.3e}, min |x_n| = {:.3e}",
            scheme.to_string(),
            traj.len() - 1,
            last.norm(),
            traj.min_state_norm()
        );
    }
    Ok(())
}
