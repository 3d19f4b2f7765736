use rand::{Rng, SeedableRng};

use crate::composite::SemiCoercivityData;
use crate::linalg::{self, RealMat, RealVec};

use super::LureSystem;

/// Tolerance on `||PB - C^T||` for the strict structure.
pub const PB_CT_TOL: f64 = 1e-10;
/// Eigenvalue floor for the PSD tests.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `PB = C^T`, `Pf` and `D` monotone: forward-backward-forward applies.
    Strict,
    /// `P`-passive with semi-coercive `D`: proximal point on `H` applies.
    Passive,
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub pb_minus_ct_norm: f64,
    pub pb_equals_ct: bool,
    pub passivity_psd: bool,
    /// Ascending eigenvalues of the passivity block matrix (affine `f` only).
    pub block_eigenvalues: Option<Vec<f64>>,
    pub d_monotone: bool,
    pub pf_monotone: bool,
    pub d_semicoercive: Option<f64>,
    pub mode: Mode,
    pub warnings: Vec<String>,
}

const SAMPLES: usize = 256;
const SEED: u64 = 0x5eed_1a7e;

/// Checks the structural assumptions and assigns a solver mode.
///
/// For affine `f(x) = Ax + b` passivity is the PSD test of
/// `[[PA + A^T P, PB - C^T], [B^T P - C, D + D^T]]`; for other maps the
/// defining inequality is sampled on seeded random pairs.
pub fn validate(system: &LureSystem) -> ValidationReport {
    let mut warnings = Vec::new();
    if system.p().is_none() {
        warnings.push("no certificate P supplied; using the identity".to_string());
    }
    let p = system.certificate();
    let gap = system.pb_minus_ct();
    let pb_minus_ct_norm = linalg::spectral_norm(&gap);
    let pb_equals_ct = pb_minus_ct_norm <= PB_CT_TOL;

    let d = system.d();
    let d_sym = d + d.transpose();
    let d_monotone = linalg::sym_eigenvalues(&d_sym)
        .first()
        .is_none_or(|l| *l >= -PSD_TOL);
    let d_semicoercive = SemiCoercivityData::from_matrix(d).map(|s| s.c);

    let (pf_monotone, passivity_psd, block_eigenvalues) = match system.f().as_affine() {
        Some((a, _)) => {
            let pa = &p * a;
            let top_left = &pa + pa.transpose();
            let pf_monotone = linalg::sym_eigenvalues(&top_left)
                .first()
                .is_none_or(|l| *l >= -PSD_TOL);
            let block = block_matrix(&top_left, &gap, &d_sym);
            let eig = linalg::sym_eigenvalues(&block);
            let psd = eig.first().is_none_or(|l| *l >= -PSD_TOL);
            (pf_monotone, psd, Some(eig))
        }
        None => {
            warnings.push("f is not affine; monotonicity and passivity are sampled".to_string());
            let (pf, pass) = sampled_passivity(system, &p, &gap);
            (pf, pass, None)
        }
    };

    let mode = if pb_equals_ct && d_monotone && pf_monotone {
        Mode::Strict
    } else if passivity_psd && d_monotone && d_semicoercive.is_some() {
        Mode::Passive
    } else {
        Mode::Invalid
    };
    if !system.f().sample_check(64, SEED).lipschitz_ok {
        warnings.push("sampled pairs violate the declared Lipschitz bound of f".to_string());
    }

    ValidationReport {
        pb_minus_ct_norm,
        pb_equals_ct,
        passivity_psd,
        block_eigenvalues,
        d_monotone,
        pf_monotone,
        d_semicoercive,
        mode,
        warnings,
    }
}

fn block_matrix(top_left: &RealMat, gap: &RealMat, d_sym: &RealMat) -> RealMat {
    let n = top_left.nrows();
    let m = d_sym.nrows();
    let mut block = RealMat::zeros(n + m, n + m);
    block.view_mut((0, 0), (n, n)).copy_from(top_left);
    block.view_mut((0, n), (n, m)).copy_from(gap);
    block.view_mut((n, 0), (m, n)).copy_from(&gap.transpose());
    block.view_mut((n, n), (m, m)).copy_from(d_sym);
    block
}

fn sampled_passivity(system: &LureSystem, p: &RealMat, gap: &RealMat) -> (bool, bool) {
    let mut rng = rand::rngs::StdRng::seed_from_u64(SEED);
    let n = system.state_dim();
    let m = system.feedback_dim();
    let mut pf_ok = true;
    let mut pass_ok = true;
    for k in 0..SAMPLES {
        let scale = 10f64.powi((k % 5) as i32 - 2);
        let x1 = RealVec::from_fn(n, |_, _| rng.gen_range(-1.0..1.0) * scale);
        let x2 = RealVec::from_fn(n, |_, _| rng.gen_range(-1.0..1.0) * scale);
        let dy = RealVec::from_fn(m, |_, _| rng.gen_range(-1.0..1.0) * scale);
        let dx = &x1 - &x2;
        let df = system.f().eval(&x1) - system.f().eval(&x2);
        let slack = 1e-10 * (1.0 + dx.norm_squared() + dy.norm_squared());
        let pf_term = (p * &df).dot(&dx);
        if pf_term < -slack {
            pf_ok = false;
        }
        let supply = pf_term + (gap * &dy).dot(&dx) + (system.d() * &dy).dot(&dy);
        if supply < -slack {
            pass_ok = false;
        }
    }
    (pf_ok, pass_ok)
}
