#![allow(dead_code)]

use lure_eq::linalg::{diag, matrix, vector};
use lure_eq::ops::OperatorKind;
use lure_eq::{LipschitzMap, LureSystem, MonotoneOperator, RealMat, RealVec};
use rand::rngs::StdRng;
use rand::Rng;

/// Boundary slack for the membership oracle below.
pub const SLACK: f64 = 1e-9;

/// Distance from `v` to `F(x)`, computed from the graph description of each
/// operator rather than from its resolvent. Points within `SLACK` of a kink
/// or a boundary are treated as lying on it.
pub fn graph_distance(op: &MonotoneOperator, x: &RealVec, v: &RealVec) -> f64 {
    match op.kind() {
        OperatorKind::Sign => abs_graph(x, v, &vec![1.0; x.len()]),
        OperatorKind::L1 { weights } => abs_graph(x, v, weights),
        OperatorKind::NormalConeBox { lo, hi } => {
            let mut acc = 0.0;
            for i in 0..x.len() {
                let below = x[i] < lo[i] - SLACK;
                let above = x[i] > hi[i] + SLACK;
                if below || above {
                    return f64::INFINITY;
                }
                let at_lo = x[i] <= lo[i] + SLACK;
                let at_hi = x[i] >= hi[i] - SLACK;
                let d = match (at_lo, at_hi) {
                    (true, true) => 0.0,
                    (true, false) => v[i].max(0.0),
                    (false, true) => (-v[i]).max(0.0),
                    (false, false) => v[i].abs(),
                };
                acc += d * d;
            }
            acc.sqrt()
        }
        OperatorKind::NormalConeNonnegOrthant => {
            let mut acc = 0.0;
            for i in 0..x.len() {
                if x[i] < -SLACK {
                    return f64::INFINITY;
                }
                let d = if x[i] <= SLACK {
                    v[i].max(0.0)
                } else {
                    v[i].abs()
                };
                acc += d * d;
            }
            acc.sqrt()
        }
        OperatorKind::NormalConeBall { center, radius } => {
            let offset = x - center;
            let r = offset.norm();
            if r > radius + SLACK {
                f64::INFINITY
            } else if r < radius - SLACK {
                v.norm()
            } else {
                let u = offset / r;
                let t = v.dot(&u).max(0.0);
                (v - u * t).norm()
            }
        }
        OperatorKind::Zero => v.norm(),
        OperatorKind::Identity => (v - x).norm(),
        OperatorKind::LinearMonotone { matrix } => (v - matrix * x).norm(),
        OperatorKind::Product(blocks) => {
            let mut off = 0;
            let mut acc = 0.0;
            for b in blocks {
                let n = b.dim();
                let d = graph_distance(
                    b,
                    &x.rows(off, n).into_owned(),
                    &v.rows(off, n).into_owned(),
                );
                acc += d * d;
                off += n;
            }
            acc.sqrt()
        }
    }
}

fn abs_graph(x: &RealVec, v: &RealVec, w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        let d = if x[i] > SLACK {
            (v[i] - w[i]).abs()
        } else if x[i] < -SLACK {
            (v[i] + w[i]).abs()
        } else {
            (v[i].abs() - w[i]).max(0.0)
        };
        acc += d * d;
    }
    acc.sqrt()
}

pub fn random_vec(rng: &mut StdRng, n: usize, scale: f64) -> RealVec {
    RealVec::from_fn(n, |_, _| rng.gen_range(-scale..scale))
}

pub fn random_mat(rng: &mut StdRng, rows: usize, cols: usize, scale: f64) -> RealMat {
    RealMat::from_fn(rows, cols, |_, _| rng.gen_range(-scale..scale))
}

/// `S^T S / n + K + eps I` with `K` skew: monotone, strongly so when `eps > 0`.
pub fn random_monotone_matrix(rng: &mut StdRng, n: usize, eps: f64) -> RealMat {
    let s = random_mat(rng, n, n, 1.0);
    let k = random_mat(rng, n, n, 1.0);
    s.transpose() * &s / n as f64 + (&k - k.transpose()) * 0.5 + RealMat::identity(n, n) * eps
}

pub fn random_monotone_diag(rng: &mut StdRng, n: usize, zero_fraction: f64) -> RealMat {
    let entries: Vec<f64> = (0..n)
        .map(|_| {
            if rng.gen_bool(zero_fraction) {
                0.0
            } else {
                rng.gen_range(0.0..2.0)
            }
        })
        .collect();
    diag(&entries)
}

/// A random member of the operator catalog.
pub fn random_operator(rng: &mut StdRng, n: usize) -> MonotoneOperator {
    match rng.gen_range(0..8) {
        0 => MonotoneOperator::sign(n).unwrap(),
        1 => MonotoneOperator::l1_weighted((0..n).map(|_| rng.gen_range(0.1..3.0)).collect())
            .unwrap(),
        2 => {
            let lo: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        f64::NEG_INFINITY
                    } else {
                        rng.gen_range(-2.0..0.0)
                    }
                })
                .collect();
            let hi: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        f64::INFINITY
                    } else {
                        rng.gen_range(0.0..2.0)
                    }
                })
                .collect();
            MonotoneOperator::normal_cone_box(lo, hi).unwrap()
        }
        3 => MonotoneOperator::normal_cone_ball(random_vec(rng, n, 0.5), rng.gen_range(0.5..2.0))
            .unwrap(),
        4 => MonotoneOperator::normal_cone_nonneg_orthant(n).unwrap(),
        5 => MonotoneOperator::identity(n).unwrap(),
        6 => MonotoneOperator::zero(n).unwrap(),
        _ => MonotoneOperator::linear_monotone(random_monotone_matrix(rng, n, 0.0)).unwrap(),
    }
}

/// The two-dimensional relay system used throughout the tests.
pub fn relay() -> LureSystem {
    LureSystem::new(
        LipschitzMap::linear(matrix(2, 2, &[9.0, -1.0, 1.0, 8.0])).unwrap(),
        RealMat::identity(2, 2),
        RealMat::identity(2, 2),
        diag(&[0.0, 1.0]),
        MonotoneOperator::sign(2).unwrap(),
    )
    .unwrap()
    .with_certificate(RealMat::identity(2, 2))
    .unwrap()
}

pub fn relay_x0() -> RealVec {
    vector(&[1.0, 2.0])
}
