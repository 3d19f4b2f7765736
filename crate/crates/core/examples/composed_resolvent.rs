//! Resolvents of `B = (F^{-1} + D)^{-1}` and of `G = C^T B C`.

use lure_eq::composite::{ComposedOperatorB, ComposedOperatorG};
use lure_eq::linalg::{diag, matrix, vector};
use lure_eq::{InnerBudget, MonotoneOperator};

fn main() -> lure_eq::Result<()> {
    let budget = InnerBudget::default();
    let b = ComposedOperatorB::new(MonotoneOperator::sign(2)?, diag(&[0.0, 1.0]))?;
    let x = vector(&[3.0, 0.4]);
    let gamma = 0.5;
    let r = b.resolvent_parts(gamma, &x, budget)?;
    println!("J_gB(x) = {:?}", r.point.as_slice());
    println!("multiplier (x - y)/g = {:?}", r.multiplier.as_slice());
    println!(
        "graph point y + D (y - x)/g = {:?}",
        r.graph_point.as_slice()
    );
    println!(
        "membership residual {:.1e}",
        b.op().natural_residual(&r.graph_point, &r.multiplier)?
    );

    let c = matrix(2, 3, &[1.0, 0.0, 1.0, 0.0, 2.0, -1.0]);
    let g = ComposedOperatorG::new(b, c)?;
    let w = vector(&[1.0, -0.5, 2.0]);
    let s = g.resolvent(gamma, &w, budget)?;
    println!(
        "J_gG(w) = {:?} after {} dual iterations",
        s.point.as_slice(),
        s.iterations
    );
    println!(
        "resolvent residual {:.1e}",
        g.resolvent_residual(gamma, &w, &s.point, &s.multiplier)?
    );
    Ok(())
}
