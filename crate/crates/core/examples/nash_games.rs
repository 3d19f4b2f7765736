//! Two-player games with shared constraints: one with linear costs and a
//! moving strategy set, one with a nonsmooth prox term.

use lure_eq::linalg::{matrix, vector};
use lure_eq::nash::{
    certify_equilibrium, LinearCostGame, LinearPlayer, ProxCostGame, ProxPlayer, ProxTerm,
    StrategySet,
};
use lure_eq::{LipschitzMap, SolverConfig};

fn scalar(a: f64, b: f64) -> lure_eq::Result<LipschitzMap> {
    LipschitzMap::affine(matrix(1, 1, &[a]), vector(&[b]))
}

fn main() -> lure_eq::Result<()> {
    let cfg = SolverConfig::default().with_tol(1e-10);
    let interval = StrategySet::Box {
        lo: vec![0.0],
        hi: vec![2.0],
    };

    let linear = LinearCostGame::new(vec![
        LinearPlayer {
            g1: scalar(1.0, -1.0)?,
            set: interval.clone(),
            c: 1.0,
        },
        LinearPlayer {
            g1: scalar(-1.0, 1.0)?,
            set: interval,
            c: 0.0,
        },
    ])?;
    let r = linear.solve(&vector(&[0.0, 0.0]), &cfg)?;
    println!(
        "linear game: x = {:?} ({})",
        r.solution.as_slice(),
        r.status
    );
    for c in certify_equilibrium(&linear, &r.solution, 1e-8)? {
        println!("  player {}: residual {:.1e}", c.player + 1, c.residual);
    }

    let prox = ProxCostGame::new(vec![
        ProxPlayer {
            dim: 1,
            f1: scalar(1.0, 1.0)?,
            d: 0.0,
            h: ProxTerm::Abs { weight: 1.0 },
        },
        ProxPlayer {
            dim: 1,
            f1: scalar(-1.0, 1.0)?,
            d: 0.0,
            h: ProxTerm::Abs { weight: 1.0 },
        },
    ])?;
    let r = prox.solve(&vector(&[1.0, -1.0]), &cfg)?;
    println!("prox game: x = {:?} ({})", r.solution.as_slice(), r.status);
    for c in certify_equilibrium(&prox, &r.solution, 1e-8)? {
        println!("  player {}: residual {:.1e}", c.player + 1, c.residual);
    }
    Ok(())
}
