//! Proximal point on `H = g + G`, the route for systems that only satisfy
//! the passivity inequality.

use lure_eq::cli::repro::{relay_system, relay_x0};
use lure_eq::lure::{equilibrium_with, Route};
use lure_eq::SolverConfig;

fn main() -> lure_eq::Result<()> {
    let cfg = SolverConfig::default().with_gamma(0.05);
    let r = equilibrium_with(&relay_system(), &relay_x0(), &cfg, Route::ProximalPoint)?;
    println!("{} after {} iterations", r.status, r.iterations);
    println!("x* = {:?}", r.solution.as_slice());
    println!(
        "worst inner fixed-point residual {:.1e}",
        r.max_inner_residual.unwrap_or(f64::NAN)
    );
    Ok(())
}
