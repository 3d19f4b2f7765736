//! Structural checks: the relay system, a variant with `D = -I`, and one
//! with `PB != C^T`.

use lure_eq::cli::repro::relay_system;
use lure_eq::linalg::{diag, matrix};
use lure_eq::lure::validate;
use lure_eq::{LureSystem, RealMat};

fn main() -> lure_eq::Result<()> {
    let relay = relay_system();
    let negative_d = LureSystem::new(
        relay.f().clone(),
        relay.b().clone(),
        relay.c().clone(),
        -diag(&[1.0, 1.0]),
        relay.op().clone(),
    )?;
    let skewed = LureSystem::new(
        relay.f().clone(),
        matrix(2, 2, &[1.0, 0.5, 0.0, 1.0]),
        relay.c().clone(),
        relay.d().clone(),
        relay.op().clone(),
    )?
    .with_certificate(RealMat::identity(2, 2))?;
    for (name, system) in [
        ("relay", &relay),
        ("D = -I", &negative_d),
        ("PB != C^T", &skewed),
    ] {
        let r = validate(system);
        println!(
            "{name}: {:?}, |PB - C^T| = {:.3}",
            r.mode, r.pb_minus_ct_norm
        );
        if let Some(eig) = &r.block_eigenvalues {
            println!("  block eigenvalues {eig:.6?}");
        }
        for w in &r.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
