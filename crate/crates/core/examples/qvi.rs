//! A one-dimensional quasi-variational inequality with moving set
//! `[-1, 1] - 0.5 f(x)`, solved through the inclusion and through the dual.

use lure_eq::linalg::{diag, matrix, vector};
use lure_eq::qvi::{moving_set_check, qvi_residual, solve_qvi, solve_qvi_dual, QviProblem};
use lure_eq::{LipschitzMap, MonotoneOperator, SolverConfig};

fn main() -> lure_eq::Result<()> {
    let p = QviProblem::new(
        LipschitzMap::affine(matrix(1, 1, &[1.0]), vector(&[-2.0]))?,
        diag(&[0.5]),
        MonotoneOperator::normal_cone_box(vec![-1.0], vec![1.0])?,
    )?;
    let cfg = SolverConfig::default().with_tol(1e-10);

    let primal = solve_qvi(&p, &vector(&[0.0]), &cfg)?;
    println!("primal: x = {:.12} ({})", primal.solution[0], primal.status);
    println!("  qvi residual {:.1e}", qvi_residual(&p, &primal.solution)?);
    let check = moving_set_check(&p, &primal.solution)?;
    println!(
        "  moving set {:?}, contains x: {}",
        check.set, check.contains
    );

    let dual = solve_qvi_dual(&p, None, &cfg)?;
    println!("dual: y = {:.12}, x = {:.12}", dual.y[0], dual.x[0]);
    println!(
        "  observed contraction {:.4} against bound {:.4}",
        dual.observed_contraction,
        dual.constants.contraction_bound()
    );
    Ok(())
}
