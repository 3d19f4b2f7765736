//! The two-dimensional relay example: `f(x) = Ax` with `A = [[9, -1], [1, 8]]`,
//! `B = C = I`, `D = diag(0, 1)`, `F = Sign` componentwise, `x0 = (1, 2)`.

use std::fmt::Write as _;
use std::path::Path;

use crate::linalg::{self, diag, matrix, vector, RealMat, RealVec};
use crate::lure::{equilibrium, simulate, LureSystem, Scheme};
use crate::ops::{LipschitzMap, MonotoneOperator};
use crate::splitting::{SolverConfig, SolverReport};

use super::output::{fmt_g17, fmt_vec, residual_csv, trajectory_csv, write_file};
use super::CliError;

pub const H: f64 = 0.04;
pub const EXPLICIT_T: f64 = 40.0;
pub const SEMI_IMPLICIT_T: f64 = 10.0;
pub const REFERENCE_GAMMA: f64 = 0.5;
pub const COMPLIANT_GAMMA: f64 = 0.1;

pub fn relay_system() -> LureSystem {
    LureSystem::new(
        LipschitzMap::linear(matrix(2, 2, &[9.0, -1.0, 1.0, 8.0])).expect("finite matrix"),
        RealMat::identity(2, 2),
        RealMat::identity(2, 2),
        diag(&[0.0, 1.0]),
        MonotoneOperator::sign(2).expect("positive dimension"),
    )
    .expect("consistent dimensions")
    .with_certificate(RealMat::identity(2, 2))
    .expect("identity is positive definite")
}

pub fn relay_x0() -> RealVec {
    vector(&[1.0, 2.0])
}

pub struct ReproOutcome {
    pub explicit_min_norm: f64,
    pub semi_implicit_final_norm: f64,
    pub reference: SolverReport,
    pub compliant: SolverReport,
    pub summary: String,
}

/// Writes `fig1.csv`, `fig2_gamma0.5.csv`, `fig2_gamma0.1.csv` and
/// `summary.txt` into `dir`.
pub fn run(dir: &Path) -> Result<ReproOutcome, CliError> {
    let system = relay_system();
    let x0 = relay_x0();
    let explicit = simulate(&system, Scheme::Explicit, &x0, H, EXPLICIT_T)?;
    let semi = simulate(&system, Scheme::SemiImplicit, &x0, H, SEMI_IMPLICIT_T)?;
    let cfg = SolverConfig::default().with_max_iter(2000);
    let reference = equilibrium(&system, &x0, &cfg.with_gamma(REFERENCE_GAMMA))?;
    let compliant = equilibrium(&system, &x0, &cfg.with_gamma(COMPLIANT_GAMMA))?;

    let lf = linalg::spectral_norm(system.f().as_affine().expect("linear").0);
    let explicit_min_norm = explicit.min_state_norm();
    let semi_implicit_final_norm = semi.last_state().map_or(f64::NAN, |x| x.norm());

    let mut s = String::new();
    let _ = writeln!(
        s,
        "relay example: f(x) = [[9, -1], [1, 8]] x, B = C = I, D = diag(0, 1), F = Sign"
    );
    let _ = writeln!(s, "x0 = (1, 2), h = {}", fmt_g17(H));
    let _ = writeln!(s, "L_f = {}", fmt_g17(lf));
    let _ = writeln!(s, "step bound 1/L_f = {}", fmt_g17(1.0 / lf));
    let _ = writeln!(s);
    let _ = writeln!(s, "explicit scheme, T = {}:", fmt_g17(EXPLICIT_T));
    let _ = writeln!(s, "  min_n |x_n| = {}", fmt_g17(explicit_min_norm));
    let _ = writeln!(
        s,
        "  final state = {}",
        fmt_vec(explicit.last_state().expect("nonempty"))
    );
    let _ = writeln!(s, "semi-implicit scheme, T = {}:", fmt_g17(SEMI_IMPLICIT_T));
    let _ = writeln!(s, "  |x(T)| = {}", fmt_g17(semi_implicit_final_norm));
    let _ = writeln!(s);
    for (label, r) in [("reference", &reference), ("compliant", &compliant)] {
        let _ = writeln!(
            s,
            "forward-backward-forward, {label} step gamma = {}: {} after {} iterations, last residual {}",
            fmt_g17(r.gamma),
            r.status,
            r.iterations,
            fmt_g17(r.certified_residual)
        );
        let _ = writeln!(s, "  last iterate = {}", fmt_vec(&r.solution));
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "note: gamma = {} violates gamma * L_f < 1 (gamma * L_f = {}); the iteration is not expected to converge at that step.",
        fmt_g17(REFERENCE_GAMMA),
        fmt_g17(REFERENCE_GAMMA * lf)
    );
    let _ = writeln!(
        s,
        "gamma = {} satisfies the bound (gamma * L_f = {}).",
        fmt_g17(COMPLIANT_GAMMA),
        fmt_g17(COMPLIANT_GAMMA * lf)
    );

    write_file(&dir.join("fig1.csv"), &trajectory_csv(&explicit))?;
    write_file(&dir.join("fig2_gamma0.5.csv"), &residual_csv(&reference, 2))?;
    write_file(&dir.join("fig2_gamma0.1.csv"), &residual_csv(&compliant, 2))?;
    write_file(&dir.join("summary.txt"), &s)?;

    Ok(ReproOutcome {
        explicit_min_norm,
        semi_implicit_final_norm,
        reference,
        compliant,
        summary: s,
    })
}
