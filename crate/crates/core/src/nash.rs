//! Nash quasi-equilibria of games whose costs are linear in the player's own
//! strategy, assembled into the inclusion `0 ∈ f(x) + F(x + D f(x))`.
//!
//! Player `i` controls `x^i ∈ R^{n_i}`; `x^{-i}` is the concatenation of the
//! other players' strategies in player order.

use log::warn;

use crate::error::{ensure_dim, LureError, Result};
use crate::linalg::{RealMat, RealVec};
use crate::lure::{equilibrium_with, LureSystem, Route};
use crate::ops::{LipschitzMap, MonotoneOperator, StackBlock};
use crate::qvi::{solve_qvi, QviProblem};
use crate::splitting::{SolverConfig, SolverReport};

const MONOTONE_SAMPLES: usize = 256;
const MONOTONE_SEED: u64 = 0x6a3e;

#[derive(Debug, Clone, PartialEq)]
pub enum StrategySet {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: RealVec, radius: f64 },
}

impl StrategySet {
    fn dim(&self) -> usize {
        match self {
            StrategySet::Box { lo, .. } => lo.len(),
            StrategySet::Ball { center, .. } => center.len(),
        }
    }

    fn normal_cone(&self) -> Result<MonotoneOperator> {
        match self {
            StrategySet::Box { lo, hi } => {
                MonotoneOperator::normal_cone_box(lo.clone(), hi.clone())
            }
            StrategySet::Ball { center, radius } => {
                MonotoneOperator::normal_cone_ball(center.clone(), *radius)
            }
        }
    }
}

/// Player with cost `<g1(x^{-i}), x^i> + g2(x^{-i})` over
/// `K - c g1(x^{-i})`.
#[derive(Debug, Clone)]
pub struct LinearPlayer {
    pub g1: LipschitzMap,
    pub set: StrategySet,
    pub c: f64,
}

#[derive(Debug, Clone)]
pub struct LinearCostGame {
    players: Vec<LinearPlayer>,
}

/// Convex part of a prox-cost player.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxTerm {
    /// `weight * ||.||_1`.
    Abs { weight: f64 },
    /// Indicator of a box.
    BoxIndicator { lo: Vec<f64>, hi: Vec<f64> },
}

/// Player with cost `f_i(x^i, x^{-i}) + h(x^i + d f1(x^{-i}))` where
/// `f1 = ∇_{x^i} f_i` depends on the others only.
#[derive(Debug, Clone)]
pub struct ProxPlayer {
    pub dim: usize,
    pub f1: LipschitzMap,
    pub d: f64,
    pub h: ProxTerm,
}

#[derive(Debug, Clone)]
pub struct ProxCostGame {
    players: Vec<ProxPlayer>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayerCertificate {
    pub player: usize,
    pub residual: f64,
    pub passed: bool,
}

/// Block layout shared by both game kinds.
struct Layout {
    offsets: Vec<usize>,
    dims: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(LureError::InvalidParameter(
                "a game needs at least one player".into(),
            ));
        }
        if dims.contains(&0) {
            return Err(LureError::InvalidParameter(
                "strategy dimensions must be positive".into(),
            ));
        }
        let mut offsets = Vec::with_capacity(dims.len());
        let mut total = 0;
        for d in &dims {
            offsets.push(total);
            total += d;
        }
        Ok(Layout {
            offsets,
            dims,
            total,
        })
    }

    fn others(&self, i: usize) -> Vec<usize> {
        let own = self.offsets[i]..self.offsets[i] + self.dims[i];
        (0..self.total).filter(|k| !own.contains(k)).collect()
    }

    fn own(&self, x: &RealVec, i: usize) -> RealVec {
        x.rows(self.offsets[i], self.dims[i]).into_owned()
    }

    fn gather(&self, x: &RealVec, i: usize) -> RealVec {
        let idx = self.others(i);
        RealVec::from_iterator(idx.len(), idx.iter().map(|k| x[*k]))
    }

    fn check_map(&self, i: usize, map: &LipschitzMap) -> Result<()> {
        ensure_dim("player map input", self.total - self.dims[i], map.dim_in())?;
        ensure_dim("player map output", self.dims[i], map.dim_out())
    }

    /// `x -> (m_1(x^{-1}), ..., m_N(x^{-N}))`.
    fn stack(&self, maps: Vec<LipschitzMap>) -> Result<LipschitzMap> {
        if self.dims.len() == 1 {
            // The lone player sees an empty opponent profile.
            let m = &maps[0];
            let value = m.eval(&RealVec::zeros(0));
            return LipschitzMap::constant(self.total, value);
        }
        let blocks = maps
            .into_iter()
            .enumerate()
            .map(|(i, map)| StackBlock {
                inputs: self.others(i),
                map,
            })
            .collect();
        LipschitzMap::stacked(self.total, blocks)
    }

    fn block_diag(&self, weights: &[f64]) -> RealMat {
        let mut d = RealMat::zeros(self.total, self.total);
        for (i, w) in weights.iter().enumerate() {
            for k in 0..self.dims[i] {
                let j = self.offsets[i] + k;
                d[(j, j)] = *w;
            }
        }
        d
    }
}

fn warn_if_not_monotone(f: &LipschitzMap) {
    if !f.sample_check(MONOTONE_SAMPLES, MONOTONE_SEED).monotone_ok {
        warn!("the stacked pseudo-gradient is not monotone on sampled pairs; solutions are accepted only when certified");
    }
}

impl LinearCostGame {
    pub fn new(players: Vec<LinearPlayer>) -> Result<Self> {
        let game = LinearCostGame { players };
        let layout = game.layout()?;
        for (i, p) in game.players.iter().enumerate() {
            if !(p.c >= 0.0 && p.c.is_finite()) {
                return Err(LureError::InvalidParameter(format!(
                    "player {i}: c must be nonnegative"
                )));
            }
            layout.check_map(i, &p.g1)?;
            ensure_dim("strategy set", layout.dims[i], p.set.dim())?;
            p.set.normal_cone()?;
        }
        Ok(game)
    }

    pub fn players(&self) -> &[LinearPlayer] {
        &self.players
    }

    fn layout(&self) -> Result<Layout> {
        Layout::new(self.players.iter().map(|p| p.set.dim()).collect())
    }

    pub fn dim(&self) -> usize {
        self.players.iter().map(|p| p.set.dim()).sum()
    }

    /// `0 ∈ f(x) + N_Omega(x + D f(x))` with `f` the stacked `g1`,
    /// `D = diag(c_i I_{n_i})` and `Omega = K_1 x ... x K_N`.
    pub fn assemble(&self) -> Result<QviProblem> {
        let layout = self.layout()?;
        let f = layout.stack(self.players.iter().map(|p| p.g1.clone()).collect())?;
        warn_if_not_monotone(&f);
        let d = layout.block_diag(&self.players.iter().map(|p| p.c).collect::<Vec<_>>());
        let omega = MonotoneOperator::product(
            self.players
                .iter()
                .map(|p| p.set.normal_cone())
                .collect::<Result<Vec<_>>>()?,
        )?;
        QviProblem::new(f, d, omega)
    }

    pub fn solve(&self, x0: &RealVec, cfg: &SolverConfig) -> Result<SolverReport> {
        solve_qvi(&self.assemble()?, x0, cfg)
    }
}

impl ProxTerm {
    fn operator(&self, dim: usize) -> Result<MonotoneOperator> {
        match self {
            ProxTerm::Abs { weight } => MonotoneOperator::l1(dim, *weight),
            ProxTerm::BoxIndicator { lo, hi } => {
                ensure_dim("indicator box", dim, lo.len())?;
                MonotoneOperator::normal_cone_box(lo.clone(), hi.clone())
            }
        }
    }
}

impl ProxCostGame {
    pub fn new(players: Vec<ProxPlayer>) -> Result<Self> {
        let game = ProxCostGame { players };
        let layout = game.layout()?;
        for (i, p) in game.players.iter().enumerate() {
            if !(p.d >= 0.0 && p.d.is_finite()) {
                return Err(LureError::InvalidParameter(format!(
                    "player {i}: d must be nonnegative"
                )));
            }
            layout.check_map(i, &p.f1)?;
            p.h.operator(p.dim)?;
        }
        Ok(game)
    }

    pub fn players(&self) -> &[ProxPlayer] {
        &self.players
    }

    fn layout(&self) -> Result<Layout> {
        Layout::new(self.players.iter().map(|p| p.dim).collect())
    }

    pub fn dim(&self) -> usize {
        self.players.iter().map(|p| p.dim).sum()
    }

    /// The Lur'e system `(f, I, I, diag(d_i I), ∂h_1 x ... x ∂h_N)` with `P = I`.
    pub fn assemble(&self) -> Result<LureSystem> {
        let layout = self.layout()?;
        let f = layout.stack(self.players.iter().map(|p| p.f1.clone()).collect())?;
        warn_if_not_monotone(&f);
        let d = layout.block_diag(&self.players.iter().map(|p| p.d).collect::<Vec<_>>());
        let op = MonotoneOperator::product(
            self.players
                .iter()
                .map(|p| p.h.operator(p.dim))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let n = layout.total;
        LureSystem::new(f, RealMat::identity(n, n), RealMat::identity(n, n), d, op)?
            .with_certificate(RealMat::identity(n, n))
    }

    pub fn solve(&self, x0: &RealVec, cfg: &SolverConfig) -> Result<SolverReport> {
        equilibrium_with(&self.assemble()?, x0, cfg, Route::Forward)
    }
}

/// Player-by-player optimality check.
pub trait NashGame {
    fn dim(&self) -> usize;
    fn certify(&self, x: &RealVec, tol: f64) -> Result<Vec<PlayerCertificate>>;
}

impl NashGame for LinearCostGame {
    fn dim(&self) -> usize {
        LinearCostGame::dim(self)
    }

    /// `-g1(x^{-i}) ∈ N_{K_i}(x^i + c_i g1(x^{-i}))`.
    fn certify(&self, x: &RealVec, tol: f64) -> Result<Vec<PlayerCertificate>> {
        let layout = self.layout()?;
        ensure_dim("strategy profile", layout.total, x.len())?;
        self.players
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let g = p.g1.try_eval(&layout.gather(x, i))?;
                let shifted = layout.own(x, i) + &g * p.c;
                let residual = p.set.normal_cone()?.natural_residual(&shifted, &(-g))?;
                Ok(PlayerCertificate {
                    player: i,
                    residual,
                    passed: residual <= tol,
                })
            })
            .collect()
    }
}

impl NashGame for ProxCostGame {
    fn dim(&self) -> usize {
        ProxCostGame::dim(self)
    }

    /// `-f1(x^{-i}) ∈ ∂h(x^i + d_i f1(x^{-i}))`.
    fn certify(&self, x: &RealVec, tol: f64) -> Result<Vec<PlayerCertificate>> {
        let layout = self.layout()?;
        ensure_dim("strategy profile", layout.total, x.len())?;
        self.players
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let g = p.f1.try_eval(&layout.gather(x, i))?;
                let shifted = layout.own(x, i) + &g * p.d;
                let residual = p.h.operator(p.dim)?.natural_residual(&shifted, &(-g))?;
                Ok(PlayerCertificate {
                    player: i,
                    residual,
                    passed: residual <= tol,
                })
            })
            .collect()
    }
}

pub fn assemble_linear_game(game: &LinearCostGame) -> Result<QviProblem> {
    game.assemble()
}

pub fn assemble_prox_game(game: &ProxCostGame) -> Result<LureSystem> {
    game.assemble()
}

pub fn certify_equilibrium<G: NashGame + ?Sized>(
    game: &G,
    x: &RealVec,
    tol: f64,
) -> Result<Vec<PlayerCertificate>> {
    game.certify(x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix, vector};
    use crate::qvi::moving_set_check;

    fn scalar_affine(a: f64, b: f64) -> LipschitzMap {
        LipschitzMap::affine(matrix(1, 1, &[a]), vector(&[b])).unwrap()
    }

    fn unit_box(lo: f64, hi: f64) -> StrategySet {
        StrategySet::Box {
            lo: vec![lo],
            hi: vec![hi],
        }
    }

    fn linear_game() -> LinearCostGame {
        LinearCostGame::new(vec![
            LinearPlayer {
                g1: scalar_affine(1.0, -1.0),
                set: unit_box(0.0, 2.0),
                c: 1.0,
            },
            LinearPlayer {
                g1: scalar_affine(-1.0, 1.0),
                set: unit_box(0.0, 2.0),
                c: 0.0,
            },
        ])
        .unwrap()
    }

    fn prox_game() -> ProxCostGame {
        ProxCostGame::new(vec![
            ProxPlayer {
                dim: 1,
                f1: scalar_affine(1.0, 1.0),
                d: 0.0,
                h: ProxTerm::Abs { weight: 1.0 },
            },
            ProxPlayer {
                dim: 1,
                f1: scalar_affine(-1.0, 1.0),
                d: 0.0,
                h: ProxTerm::Abs { weight: 1.0 },
            },
        ])
        .unwrap()
    }

    #[test]
    fn linear_game_assembly() {
        let p = linear_game().assemble().unwrap();
        let (a, b) = p.f().as_affine().unwrap();
        assert_eq!(a, &matrix(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert_eq!(b, &vector(&[-1.0, 1.0]));
        assert_eq!(p.d(), &crate::linalg::diag(&[1.0, 0.0]));
    }

    #[test]
    fn linear_game_certificates() {
        let g = linear_game();
        let ok = certify_equilibrium(&g, &vector(&[1.0, 1.0]), 1e-12).unwrap();
        assert!(ok.iter().all(|c| c.passed));
        let off = certify_equilibrium(&g, &vector(&[1.1, 1.0]), 1e-8).unwrap();
        assert!(off[0].passed);
        assert!(!off[1].passed);
        assert!((off[1].residual - 0.1).abs() < 1e-12);
    }

    #[test]
    fn linear_game_solution_certifies() {
        let g = linear_game();
        let r = g
            .solve(&vector(&[0.0, 0.0]), &SolverConfig::default())
            .unwrap();
        assert!(r.converged(), "{r:?}");
        assert!(certify_equilibrium(&g, &r.solution, 1e-7)
            .unwrap()
            .iter()
            .all(|c| c.passed));
    }

    #[test]
    fn prox_game_lands_on_segment() {
        let g = prox_game();
        let r = g
            .solve(&vector(&[1.0, 1.0]), &SolverConfig::default())
            .unwrap();
        assert!(r.converged(), "{r:?}");
        let x = &r.solution;
        assert!(
            x[0].abs() < 1e-7 && x[1] >= -2.0 - 1e-7 && x[1] <= 1e-7,
            "{x}"
        );
        assert!(certify_equilibrium(&g, &vector(&[0.0, -1.0]), 1e-12)
            .unwrap()
            .iter()
            .all(|c| c.passed));
        assert!(!certify_equilibrium(&g, &vector(&[0.0, 1.0]), 1e-8).unwrap()[1].passed);
    }

    #[test]
    fn indicator_game_matches_linear_game() {
        let prox = ProxCostGame::new(vec![
            ProxPlayer {
                dim: 1,
                f1: scalar_affine(1.0, -1.0),
                d: 1.0,
                h: ProxTerm::BoxIndicator {
                    lo: vec![0.0],
                    hi: vec![2.0],
                },
            },
            ProxPlayer {
                dim: 1,
                f1: scalar_affine(-1.0, 1.0),
                d: 0.0,
                h: ProxTerm::BoxIndicator {
                    lo: vec![0.0],
                    hi: vec![2.0],
                },
            },
        ])
        .unwrap();
        let lin = linear_game();
        let r = prox
            .solve(&vector(&[0.5, 0.5]), &SolverConfig::default())
            .unwrap();
        assert!(certify_equilibrium(&lin, &r.solution, 1e-7)
            .unwrap()
            .iter()
            .all(|c| c.passed));
        let r = lin
            .solve(&vector(&[0.5, 0.5]), &SolverConfig::default())
            .unwrap();
        assert!(certify_equilibrium(&prox, &r.solution, 1e-7)
            .unwrap()
            .iter()
            .all(|c| c.passed));
    }

    #[test]
    fn single_player_constant_cost() {
        let g = LinearCostGame::new(vec![LinearPlayer {
            g1: LipschitzMap::constant(0, vector(&[0.5, -2.0])).unwrap(),
            set: StrategySet::Box {
                lo: vec![-1.0, -1.0],
                hi: vec![1.0, 1.0],
            },
            c: 0.0,
        }])
        .unwrap();
        let r = g
            .solve(&vector(&[0.0, 0.0]), &SolverConfig::default())
            .unwrap();
        assert!((&r.solution - vector(&[-1.0, 1.0])).norm() < 1e-7);
        assert!(certify_equilibrium(&g, &r.solution, 1e-7).unwrap()[0].passed);
    }

    #[test]
    fn single_player_abs_cost() {
        for (a, w, want) in [(0.5, 1.0, Some(0.0)), (-2.0, 1.0, None)] {
            let g = ProxCostGame::new(vec![ProxPlayer {
                dim: 1,
                f1: LipschitzMap::constant(0, vector(&[a])).unwrap(),
                d: 0.0,
                h: ProxTerm::Abs { weight: w },
            }])
            .unwrap();
            let zero = certify_equilibrium(&g, &vector(&[0.0]), 1e-12).unwrap()[0].passed;
            assert_eq!(zero, want.is_some());
        }
    }

    #[test]
    fn zero_shift_keeps_moving_set_constant() {
        let mut players = linear_game().players().to_vec();
        players[0].c = 0.0;
        let p = LinearCostGame::new(players).unwrap().assemble().unwrap();
        for x in [vector(&[0.3, 1.9]), vector(&[5.0, -4.0])] {
            let c = moving_set_check(&p, &x).unwrap();
            assert_eq!(
                c.set,
                crate::qvi::MovingSet::Box {
                    lo: vec![0.0, 0.0],
                    hi: vec![2.0, 2.0]
                }
            );
        }
    }

    #[test]
    fn rejects_negative_shift() {
        let mut players = linear_game().players().to_vec();
        players[1].c = -1.0;
        assert!(LinearCostGame::new(players).is_err());
    }
}
