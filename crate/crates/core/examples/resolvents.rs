//! Resolvents of the operator catalog and the Moreau identity
//! `x = J_{gF}(x) + g J_{F^{-1}/g}(x/g)`.

use lure_eq::linalg::vector;
use lure_eq::MonotoneOperator;

fn main() -> lure_eq::Result<()> {
    let x = vector(&[1.5, -0.2, 0.7]);
    let gamma = 0.5;
    let catalog = [
        ("sign", MonotoneOperator::sign(3)?),
        ("l1 (weight 2)", MonotoneOperator::l1(3, 2.0)?),
        (
            "box [-1, 1]^3",
            MonotoneOperator::normal_cone_box(vec![-1.0; 3], vec![1.0; 3])?,
        ),
        (
            "unit ball",
            MonotoneOperator::normal_cone_ball(vector(&[0.0; 3]), 1.0)?,
        ),
        (
            "nonnegative orthant",
            MonotoneOperator::normal_cone_nonneg_orthant(3)?,
        ),
        ("identity", MonotoneOperator::identity(3)?),
    ];
    println!("x = {:?}", x.as_slice());
    for (name, op) in &catalog {
        let y = op.resolvent(gamma, &x)?;
        let dual = op.inverse_resolvent(1.0 / gamma, &(&x / gamma))?;
        let moreau = (&y + gamma * dual - &x).norm();
        println!(
            "{name:>20}: J(x) = {:?}, Moreau defect {moreau:.1e}",
            y.as_slice()
        );
    }
    Ok(())
}
