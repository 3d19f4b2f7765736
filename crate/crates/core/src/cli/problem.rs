//! JSON problem files.
//!
//! Matrices are arrays of rows. Box bounds accept `null` for an infinite
//! bound. Unknown fields are rejected.

use std::path::Path;

use serde::Deserialize;

use crate::error::LureError;
use crate::linalg::{RealMat, RealVec};
use crate::lure::{LureSystem, Scheme};
use crate::nash::{LinearCostGame, LinearPlayer, ProxCostGame, ProxPlayer, ProxTerm, StrategySet};
use crate::ops::{LipschitzMap, MonotoneOperator, ScalarNonlinearity};
use crate::qvi::{qvi_to_inclusion, QviProblem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Lure,
    Qvi,
    NashLinear,
    NashProx,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dims {
    pub n: usize,
    #[serde(default)]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapSpec {
    Affine {
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        #[serde(default)]
        b: Option<Vec<f64>>,
    },
    /// `scale * func(x)` applied per coordinate, plus an optional linear part.
    Componentwise {
        func: Nonlinearity,
        scale: f64,
        #[serde(default, rename = "A")]
        a: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        strong_modulus: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonlinearity {
    Tanh,
    Arctan,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorSpec {
    Sign {},
    L1 {
        weights: Vec<f64>,
    },
    Box {
        lo: Vec<Option<f64>>,
        hi: Vec<Option<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    NonnegOrthant {},
    Zero {},
    Identity {},
    Linear {
        #[serde(rename = "M")]
        m: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub gamma: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub scheme: Option<String>,
    pub x0: Option<Vec<f64>>,
    pub h: Option<f64>,
    #[serde(rename = "T")]
    pub t_end: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Box {
        lo: Vec<Option<f64>>,
        hi: Vec<Option<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProxSpec {
    Abs {
        weight: f64,
    },
    BoxIndicator {
        lo: Vec<Option<f64>>,
        hi: Vec<Option<f64>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub dim: usize,
    /// Linear part of the cost as a map of the other players' strategies.
    pub g1: MapSpec,
    #[serde(default)]
    pub set: Option<SetSpec>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub d: Option<f64>,
    #[serde(default)]
    pub h: Option<ProxSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub kind: ProblemKind,
    #[serde(default)]
    pub dims: Option<Dims>,
    #[serde(default)]
    pub f: Option<MapSpec>,
    #[serde(default, rename = "B")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "C")]
    pub c: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "D")]
    pub d: Option<Vec<Vec<f64>>>,
    #[serde(default, rename = "F")]
    pub op: Option<OperatorSpec>,
    #[serde(default, rename = "Omega")]
    pub omega: Option<OperatorSpec>,
    #[serde(default, rename = "P")]
    pub p: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub players: Option<Vec<PlayerSpec>>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub simulate: Option<SimulateSection>,
}

/// A parsed and validated problem.
#[derive(Debug, Clone)]
pub enum Problem {
    Lure(LureSystem),
    Qvi(QviProblem),
    NashLinear(LinearCostGame),
    NashProx(ProxCostGame),
}

impl Problem {
    pub fn dim(&self) -> usize {
        match self {
            Problem::Lure(s) => s.state_dim(),
            Problem::Qvi(p) => p.dim(),
            Problem::NashLinear(g) => g.dim(),
            Problem::NashProx(g) => g.dim(),
        }
    }

    /// The Lur'e system every problem kind lowers to.
    pub fn system(&self) -> crate::Result<LureSystem> {
        match self {
            Problem::Lure(s) => Ok(s.clone()),
            Problem::Qvi(p) => qvi_to_inclusion(p),
            Problem::NashLinear(g) => qvi_to_inclusion(&g.assemble()?),
            Problem::NashProx(g) => g.assemble(),
        }
    }
}

#[derive(Debug)]
pub enum LoadError {
    /// Unreadable or malformed file, or inconsistent data.
    Parse(String),
    /// Well-formed data describing a system that violates the structural
    /// assumptions (e.g. non-monotone `D`).
    Invalid(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(m) => write!(f, "parse error: {m}"),
            LoadError::Invalid(m) => write!(f, "invalid system: {m}"),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> LoadError {
    LoadError::Parse(msg.into())
}

impl From<LureError> for LoadError {
    fn from(e: LureError) -> Self {
        match e {
            LureError::NotMonotone(_) | LureError::InvalidSystem(_) => {
                LoadError::Invalid(e.to_string())
            }
            other => LoadError::Parse(other.to_string()),
        }
    }
}

pub struct Loaded {
    pub problem: Problem,
    pub solver: SolverSection,
    pub simulate: Option<SimulateSection>,
}

pub fn load(path: &Path) -> Result<Loaded, LoadError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Loaded, LoadError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    build(file)
}

fn build(file: ProblemFile) -> Result<Loaded, LoadError> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(parse_err(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let problem = match file.kind {
        ProblemKind::Lure => Problem::Lure(build_lure(&file)?),
        ProblemKind::Qvi => Problem::Qvi(build_qvi(&file)?),
        ProblemKind::NashLinear => Problem::NashLinear(build_linear_game(&file)?),
        ProblemKind::NashProx => Problem::NashProx(build_prox_game(&file)?),
    };
    let n = problem.dim();
    if let Some(x0) = &file.solver.x0 {
        check_len("solver.x0", n, x0.len())?;
    }
    if let Some(sim) = &file.simulate {
        if let Some(x0) = &sim.x0 {
            check_len("simulate.x0", n, x0.len())?;
        }
        if let Some(s) = &sim.scheme {
            s.parse::<Scheme>().map_err(|e| parse_err(e.to_string()))?;
        }
    }
    Ok(Loaded {
        problem,
        solver: file.solver,
        simulate: file.simulate,
    })
}

fn check_len(what: &str, expected: usize, found: usize) -> Result<(), LoadError> {
    if expected == found {
        Ok(())
    } else {
        Err(parse_err(format!(
            "{what}: expected length {expected}, found {found}"
        )))
    }
}

fn required<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, LoadError> {
    field
        .as_ref()
        .ok_or_else(|| parse_err(format!("missing field `{name}`")))
}

fn forbid<T>(field: &Option<T>, name: &str, kind: &str) -> Result<(), LoadError> {
    if field.is_some() {
        Err(parse_err(format!(
            "field `{name}` is not used by kind `{kind}`"
        )))
    } else {
        Ok(())
    }
}

fn mat(rows: &[Vec<f64>], name: &str) -> Result<RealMat, LoadError> {
    let r = rows.len();
    let c = rows.first().map_or(0, |row| row.len());
    if r == 0 || c == 0 {
        return Err(parse_err(format!("matrix `{name}` is empty")));
    }
    if rows.iter().any(|row| row.len() != c) {
        return Err(parse_err(format!(
            "matrix `{name}` has rows of unequal length"
        )));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(parse_err(format!("matrix `{name}` has non-finite entries")));
    }
    Ok(RealMat::from_fn(r, c, |i, j| rows[i][j]))
}

fn vecf(v: &[f64]) -> RealVec {
    RealVec::from_column_slice(v)
}

fn bounds(lo: &[Option<f64>], hi: &[Option<f64>]) -> (Vec<f64>, Vec<f64>) {
    (
        lo.iter().map(|v| v.unwrap_or(f64::NEG_INFINITY)).collect(),
        hi.iter().map(|v| v.unwrap_or(f64::INFINITY)).collect(),
    )
}

fn build_map(spec: &MapSpec, name: &str) -> Result<LipschitzMap, LoadError> {
    match spec {
        MapSpec::Affine { a, b } => {
            let a = mat(a, name)?;
            let b = match b {
                Some(b) => {
                    check_len(name, a.nrows(), b.len())?;
                    vecf(b)
                }
                None => RealVec::zeros(a.nrows()),
            };
            Ok(LipschitzMap::affine(a, b)?)
        }
        MapSpec::Componentwise {
            func,
            scale,
            a,
            strong_modulus,
        } => {
            let func = match func {
                Nonlinearity::Tanh => ScalarNonlinearity::Tanh,
                Nonlinearity::Arctan => ScalarNonlinearity::Arctan,
            };
            let a = a.as_ref().map(|a| mat(a, name)).transpose()?;
            let n = a.as_ref().map_or_else(
                || {
                    Err(parse_err(format!(
                        "`{name}`: a componentwise map needs `A` to fix its dimension"
                    )))
                },
                |a| Ok(a.nrows()),
            )?;
            let a = a.expect("checked");
            if !a.is_square() {
                return Err(parse_err(format!("`{name}`: `A` must be square")));
            }
            let map = LipschitzMap::sum(vec![
                LipschitzMap::linear(a)?,
                LipschitzMap::componentwise(n, func, *scale)?,
            ])?;
            Ok(match strong_modulus {
                Some(mu) => map.with_strong_modulus(*mu),
                None => map,
            })
        }
    }
}

fn build_operator(
    spec: &OperatorSpec,
    dim: usize,
    name: &str,
) -> Result<MonotoneOperator, LoadError> {
    let op = match spec {
        OperatorSpec::Sign {} => MonotoneOperator::sign(dim)?,
        OperatorSpec::L1 { weights } => {
            check_len(name, dim, weights.len())?;
            MonotoneOperator::l1_weighted(weights.clone())?
        }
        OperatorSpec::Box { lo, hi } => {
            check_len(name, dim, lo.len())?;
            check_len(name, dim, hi.len())?;
            let (lo, hi) = bounds(lo, hi);
            MonotoneOperator::normal_cone_box(lo, hi)?
        }
        OperatorSpec::Ball { center, radius } => {
            check_len(name, dim, center.len())?;
            MonotoneOperator::normal_cone_ball(vecf(center), *radius)?
        }
        OperatorSpec::NonnegOrthant {} => MonotoneOperator::normal_cone_nonneg_orthant(dim)?,
        OperatorSpec::Zero {} => MonotoneOperator::zero(dim)?,
        OperatorSpec::Identity {} => MonotoneOperator::identity(dim)?,
        OperatorSpec::Linear { m } => {
            let m = mat(m, name)?;
            check_len(name, dim, m.nrows())?;
            MonotoneOperator::linear_monotone(m)?
        }
    };
    Ok(op)
}

fn build_lure(file: &ProblemFile) -> Result<LureSystem, LoadError> {
    forbid(&file.omega, "Omega", "lure")?;
    forbid(&file.players, "players", "lure")?;
    let dims = required(&file.dims, "dims")?;
    let m = dims
        .m
        .ok_or_else(|| parse_err("kind `lure` needs dims.m"))?;
    let f = build_map(required(&file.f, "f")?, "f")?;
    check_len("f", dims.n, f.dim_in())?;
    let b = mat(required(&file.b, "B")?, "B")?;
    let c = mat(required(&file.c, "C")?, "C")?;
    let d = mat(required(&file.d, "D")?, "D")?;
    let op = build_operator(required(&file.op, "F")?, m, "F")?;
    let system = LureSystem::new(f, b, c, d, op)?;
    match &file.p {
        Some(p) => Ok(system.with_certificate(mat(p, "P")?)?),
        None => Ok(system),
    }
}

fn build_qvi(file: &ProblemFile) -> Result<QviProblem, LoadError> {
    for (field, name) in [(&file.b, "B"), (&file.c, "C"), (&file.p, "P")] {
        forbid(field, name, "qvi")?;
    }
    forbid(&file.op, "F", "qvi")?;
    forbid(&file.players, "players", "qvi")?;
    let dims = required(&file.dims, "dims")?;
    let f = build_map(required(&file.f, "f")?, "f")?;
    check_len("f", dims.n, f.dim_in())?;
    let d = mat(required(&file.d, "D")?, "D")?;
    let omega = build_operator(required(&file.omega, "Omega")?, dims.n, "Omega")?;
    if !omega.is_normal_cone() {
        return Err(parse_err("`Omega` must be box, ball or nonneg_orthant"));
    }
    Ok(QviProblem::new(f, d, omega)?)
}

fn players<'a>(file: &'a ProblemFile, kind: &str) -> Result<&'a [PlayerSpec], LoadError> {
    for (field, name) in [
        (&file.b, "B"),
        (&file.c, "C"),
        (&file.d, "D"),
        (&file.p, "P"),
    ] {
        forbid(field, name, kind)?;
    }
    forbid(&file.f, "f", kind)?;
    forbid(&file.op, "F", kind)?;
    forbid(&file.omega, "Omega", kind)?;
    let players = required(&file.players, "players")?;
    if let Some(dims) = &file.dims {
        check_len("dims.n", dims.n, players.iter().map(|p| p.dim).sum())?;
    }
    Ok(players)
}

fn build_linear_game(file: &ProblemFile) -> Result<LinearCostGame, LoadError> {
    let specs = players(file, "nash_linear")?;
    let mut out = Vec::with_capacity(specs.len());
    for (i, p) in specs.iter().enumerate() {
        if p.d.is_some() || p.h.is_some() {
            return Err(parse_err(format!(
                "player {i}: `d` and `h` belong to nash_prox games"
            )));
        }
        let set = match required(&p.set, "players[].set")? {
            SetSpec::Box { lo, hi } => {
                let (lo, hi) = bounds(lo, hi);
                StrategySet::Box { lo, hi }
            }
            SetSpec::Ball { center, radius } => StrategySet::Ball {
                center: vecf(center),
                radius: *radius,
            },
        };
        out.push(LinearPlayer {
            g1: build_map(&p.g1, "players[].g1")?,
            set,
            c: p.c.unwrap_or(0.0),
        });
    }
    Ok(LinearCostGame::new(out)?)
}

fn build_prox_game(file: &ProblemFile) -> Result<ProxCostGame, LoadError> {
    let specs = players(file, "nash_prox")?;
    let mut out = Vec::with_capacity(specs.len());
    for (i, p) in specs.iter().enumerate() {
        if p.c.is_some() || p.set.is_some() {
            return Err(parse_err(format!(
                "player {i}: `c` and `set` belong to nash_linear games"
            )));
        }
        let h = match required(&p.h, "players[].h")? {
            ProxSpec::Abs { weight } => ProxTerm::Abs { weight: *weight },
            ProxSpec::BoxIndicator { lo, hi } => {
                let (lo, hi) = bounds(lo, hi);
                ProxTerm::BoxIndicator { lo, hi }
            }
        };
        out.push(ProxPlayer {
            dim: p.dim,
            f1: build_map(&p.g1, "players[].g1")?,
            d: p.d.unwrap_or(0.0),
            h,
        });
    }
    Ok(ProxCostGame::new(out)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LURE: &str = r#"{
        "schema_version": 1, "kind": "lure", "dims": {"n": 2, "m": 2},
        "f": {"type": "affine", "A": [[9, -1], [1, 8]]},
        "B": [[1, 0], [0, 1]], "C": [[1, 0], [0, 1]], "D": [[0, 0], [0, 1]],
        "F": {"type": "sign"}, "P": [[1, 0], [0, 1]],
        "solver": {"gamma": 0.1, "x0": [1, 2]}
    }"#;

    #[test]
    fn parses_lure_file() {
        let l = parse(LURE).unwrap();
        assert!(matches!(l.problem, Problem::Lure(_)));
        assert_eq!(l.solver.gamma, Some(0.1));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = LURE.replace("\"solver\"", "\"solvr\"");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
        let text = LURE.replace("\"type\": \"sign\"", "\"type\": \"sign\", \"weight\": 2");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
    }

    #[test]
    fn rejects_bad_dimensions_and_certificates() {
        let text = LURE.replace("\"D\": [[0, 0], [0, 1]]", "\"D\": [[0, 0, 0], [0, 1, 0]]");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
        let text = LURE.replace("\"P\": [[1, 0], [0, 1]]", "\"P\": [[1, 0], [0, -1]]");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
        let text = LURE.replace("\"x0\": [1, 2]", "\"x0\": [1]");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
    }

    #[test]
    fn null_bounds_are_infinite() {
        let text = r#"{
            "schema_version": 1, "kind": "qvi", "dims": {"n": 2},
            "f": {"type": "affine", "A": [[1, 0], [0, 1]], "b": [-2, 3]},
            "D": [[0, 0], [0, 0]],
            "Omega": {"type": "box", "lo": [null, 0], "hi": [1, null]}
        }"#;
        let l = parse(text).unwrap();
        let Problem::Qvi(p) = l.problem else { panic!() };
        let proj = p
            .omega()
            .project_domain(&RealVec::from_column_slice(&[-5.0, 7.0]));
        assert_eq!(proj, RealVec::from_column_slice(&[-5.0, 7.0]));
    }

    #[test]
    fn non_monotone_qvi_is_invalid() {
        let text = r#"{
            "schema_version": 1, "kind": "qvi", "dims": {"n": 1},
            "f": {"type": "affine", "A": [[1]]}, "D": [[-1]],
            "Omega": {"type": "box", "lo": [-1], "hi": [1]}
        }"#;
        assert!(matches!(parse(text), Err(LoadError::Invalid(_))));
    }

    #[test]
    fn parses_games() {
        let text = r#"{
            "schema_version": 1, "kind": "nash_prox",
            "players": [
                {"dim": 1, "g1": {"type": "affine", "A": [[1]], "b": [1]}, "h": {"type": "abs", "weight": 1}},
                {"dim": 1, "g1": {"type": "affine", "A": [[-1]], "b": [1]}, "h": {"type": "abs", "weight": 1}}
            ]
        }"#;
        assert!(matches!(parse(text).unwrap().problem, Problem::NashProx(_)));
        let bad = text.replace(
            "\"h\": {\"type\": \"abs\", \"weight\": 1}}\n",
            "\"c\": 1}\n",
        );
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn rejects_wrong_schema_version() {
        let text = LURE.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(matches!(parse(&text), Err(LoadError::Parse(_))));
    }
}
