//! Single-valued Lipschitz maps with declared constants.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};

use crate::error::{ensure_dim, LureError, Result};
use crate::linalg::{self, RealMat, RealVec};

/// Componentwise monotone nonlinearities with unit Lipschitz constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarNonlinearity {
    Tanh,
    Arctan,
}

impl ScalarNonlinearity {
    fn apply(self, x: f64) -> f64 {
        match self {
            ScalarNonlinearity::Tanh => x.tanh(),
            ScalarNonlinearity::Arctan => x.atan(),
        }
    }
}

type EvalFn = Arc<dyn Fn(&RealVec) -> RealVec + Send + Sync>;

/// One output block of a stacked map: reads `inputs` (coordinates of the
/// full argument) and produces `map.dim_out()` outputs.
#[derive(Clone, Debug)]
pub struct StackBlock {
    pub inputs: Vec<usize>,
    pub map: LipschitzMap,
}

#[derive(Clone)]
pub enum MapKind {
    Affine {
        a: RealMat,
        b: RealVec,
    },
    /// `x -> scale * phi(x_i)` applied coordinatewise.
    Componentwise {
        func: ScalarNonlinearity,
        scale: f64,
    },
    Sum(Vec<LipschitzMap>),
    /// `x -> outer * inner(x)`.
    Transformed {
        outer: RealMat,
        inner: Box<LipschitzMap>,
    },
    Stacked(Vec<StackBlock>),
    Custom(EvalFn),
}

impl fmt::Debug for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Affine { a, b } => f
                .debug_struct("Affine")
                .field("a", a)
                .field("b", b)
                .finish(),
            MapKind::Componentwise { func, scale } => f
                .debug_struct("Componentwise")
                .field("func", func)
                .field("scale", scale)
                .finish(),
            MapKind::Sum(parts) => f.debug_tuple("Sum").field(parts).finish(),
            MapKind::Transformed { outer, inner } => f
                .debug_struct("Transformed")
                .field("outer", outer)
                .field("inner", inner)
                .finish(),
            MapKind::Stacked(blocks) => f.debug_tuple("Stacked").field(blocks).finish(),
            MapKind::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A single-valued map `R^dim_in -> R^dim_out` with a Lipschitz bound and an
/// optional strong-monotonicity modulus (0 when merely monotone or unknown).
#[derive(Clone, Debug)]
pub struct LipschitzMap {
    dim_in: usize,
    dim_out: usize,
    lipschitz: f64,
    strong_modulus: f64,
    kind: MapKind,
}

/// Outcome of randomized checks of the declared constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleCheck {
    pub lipschitz_ok: bool,
    pub monotone_ok: bool,
    pub strong_monotone_ok: bool,
}

impl LipschitzMap {
    pub fn affine(a: RealMat, b: RealVec) -> Result<Self> {
        ensure_dim("affine offset", a.nrows(), b.len())?;
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(LureError::NonFinite("affine map"));
        }
        let lipschitz = linalg::spectral_norm(&a);
        let strong_modulus = if a.is_square() {
            linalg::min_sym_eigenvalue(&a).max(0.0)
        } else {
            0.0
        };
        Ok(LipschitzMap {
            dim_in: a.ncols(),
            dim_out: a.nrows(),
            lipschitz,
            strong_modulus,
            kind: MapKind::Affine { a, b },
        })
    }

    pub fn linear(a: RealMat) -> Result<Self> {
        let b = RealVec::zeros(a.nrows());
        Self::affine(a, b)
    }

    pub fn zero(dim: usize) -> Self {
        Self::linear(RealMat::zeros(dim, dim)).expect("zero matrix is valid")
    }

    pub fn identity(dim: usize) -> Self {
        Self::linear(RealMat::identity(dim, dim)).expect("identity is valid")
    }

    pub fn constant(dim_in: usize, value: RealVec) -> Result<Self> {
        Self::affine(RealMat::zeros(value.len(), dim_in), value)
    }

    pub fn componentwise(dim: usize, func: ScalarNonlinearity, scale: f64) -> Result<Self> {
        if !scale.is_finite() {
            return Err(LureError::NonFinite("nonlinearity scale"));
        }
        Ok(LipschitzMap {
            dim_in: dim,
            dim_out: dim,
            lipschitz: scale.abs(),
            strong_modulus: 0.0,
            kind: MapKind::Componentwise { func, scale },
        })
    }

    /// User-supplied evaluation with declared constants. The constants are
    /// trusted; [`LipschitzMap::sample_check`] can spot-check them.
    pub fn custom<F>(
        dim_in: usize,
        dim_out: usize,
        lipschitz: f64,
        strong_modulus: f64,
        eval: F,
    ) -> Self
    where
        F: Fn(&RealVec) -> RealVec + Send + Sync + 'static,
    {
        LipschitzMap {
            dim_in,
            dim_out,
            lipschitz,
            strong_modulus,
            kind: MapKind::Custom(Arc::new(eval)),
        }
    }

    /// Pointwise sum; affine summands are folded together.
    pub fn sum(parts: Vec<LipschitzMap>) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| LureError::InvalidParameter("empty map sum".into()))?;
        let (dim_in, dim_out) = (first.dim_in, first.dim_out);
        for p in &parts {
            ensure_dim("map sum input", dim_in, p.dim_in)?;
            ensure_dim("map sum output", dim_out, p.dim_out)?;
        }
        if parts.iter().all(|p| p.as_affine().is_some()) {
            let mut a = RealMat::zeros(dim_out, dim_in);
            let mut b = RealVec::zeros(dim_out);
            for p in &parts {
                let (pa, pb) = p.as_affine().expect("checked");
                a += pa;
                b += pb;
            }
            return Self::affine(a, b);
        }
        Ok(LipschitzMap {
            dim_in,
            dim_out,
            lipschitz: parts.iter().map(|p| p.lipschitz).sum(),
            strong_modulus: parts.iter().map(|p| p.strong_modulus).sum(),
            kind: MapKind::Sum(parts),
        })
    }

    /// `x -> outer * self(x)`.
    pub fn premultiply(&self, outer: &RealMat) -> Result<Self> {
        ensure_dim("premultiplied map", outer.ncols(), self.dim_out)?;
        if let Some((a, b)) = self.as_affine() {
            return Self::affine(outer * a, outer * b);
        }
        if linalg::is_identity(outer) {
            return Ok(self.clone());
        }
        let strong_modulus = match linalg::scalar_multiple_of_identity(outer) {
            Some(s) if s > 0.0 => s * self.strong_modulus,
            _ => 0.0,
        };
        Ok(LipschitzMap {
            dim_in: self.dim_in,
            dim_out: outer.nrows(),
            lipschitz: linalg::spectral_norm(outer) * self.lipschitz,
            strong_modulus,
            kind: MapKind::Transformed {
                outer: outer.clone(),
                inner: Box::new(self.clone()),
            },
        })
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        let n = self.dim_out;
        self.premultiply(&(RealMat::identity(n, n) * s))
    }

    /// Concatenates block outputs. Every block reads a subset of the
    /// `dim_in` coordinates, so the stacked Lipschitz bound is the root sum
    /// of squares of the block bounds. All-affine stacks fold to one affine map.
    pub fn stacked(dim_in: usize, blocks: Vec<StackBlock>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(LureError::InvalidParameter("empty stacked map".into()));
        }
        for blk in &blocks {
            ensure_dim("stacked block inputs", blk.map.dim_in, blk.inputs.len())?;
            if let Some(bad) = blk.inputs.iter().find(|i| **i >= dim_in) {
                return Err(LureError::InvalidParameter(format!(
                    "stacked block reads coordinate {bad} of a {dim_in}-dimensional argument"
                )));
            }
        }
        let dim_out = blocks.iter().map(|b| b.map.dim_out).sum();
        if blocks.iter().all(|b| b.map.as_affine().is_some()) {
            let mut a = RealMat::zeros(dim_out, dim_in);
            let mut b = RealVec::zeros(dim_out);
            let mut row = 0;
            for blk in &blocks {
                let (ba, bb) = blk.map.as_affine().expect("checked");
                for (k, &col) in blk.inputs.iter().enumerate() {
                    for r in 0..ba.nrows() {
                        a[(row + r, col)] += ba[(r, k)];
                    }
                }
                b.rows_mut(row, bb.len()).copy_from(bb);
                row += bb.len();
            }
            return Self::affine(a, b);
        }
        let lipschitz = blocks
            .iter()
            .map(|b| b.map.lipschitz.powi(2))
            .sum::<f64>()
            .sqrt();
        Ok(LipschitzMap {
            dim_in,
            dim_out,
            lipschitz,
            strong_modulus: 0.0,
            kind: MapKind::Stacked(blocks),
        })
    }

    /// Declares a strong-monotonicity modulus (e.g. known analytically).
    pub fn with_strong_modulus(mut self, mu: f64) -> Self {
        self.strong_modulus = mu.max(0.0);
        self
    }

    pub fn with_lipschitz(mut self, lipschitz: f64) -> Self {
        self.lipschitz = lipschitz;
        self
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn strong_modulus(&self) -> f64 {
        self.strong_modulus
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn as_affine(&self) -> Option<(&RealMat, &RealVec)> {
        match &self.kind {
            MapKind::Affine { a, b } => Some((a, b)),
            _ => None,
        }
    }

    pub fn eval(&self, x: &RealVec) -> RealVec {
        debug_assert_eq!(x.len(), self.dim_in);
        match &self.kind {
            MapKind::Affine { a, b } => a * x + b,
            MapKind::Componentwise { func, scale } => x.map(|v| scale * func.apply(v)),
            MapKind::Sum(parts) => {
                let mut acc = RealVec::zeros(self.dim_out);
                for p in parts {
                    acc += p.eval(x);
                }
                acc
            }
            MapKind::Transformed { outer, inner } => outer * inner.eval(x),
            MapKind::Stacked(blocks) => {
                let mut out = RealVec::zeros(self.dim_out);
                let mut row = 0;
                for blk in blocks {
                    let sub =
                        RealVec::from_iterator(blk.inputs.len(), blk.inputs.iter().map(|i| x[*i]));
                    let y = blk.map.eval(&sub);
                    out.rows_mut(row, y.len()).copy_from(&y);
                    row += y.len();
                }
                out
            }
            MapKind::Custom(f) => f(x),
        }
    }

    pub fn try_eval(&self, x: &RealVec) -> Result<RealVec> {
        ensure_dim("map argument", self.dim_in, x.len())?;
        let y = self.eval(x);
        ensure_dim("map output", self.dim_out, y.len())?;
        if !linalg::all_finite(&y) {
            return Err(LureError::NonFinite("map value"));
        }
        Ok(y)
    }

    /// Solves `f(x) = u` for invertible affine maps.
    pub fn inverse_eval(&self, u: &RealVec) -> Option<RealVec> {
        let (a, b) = self.as_affine()?;
        if !a.is_square() || u.len() != b.len() {
            return None;
        }
        linalg::solve(a, &(u - b))
    }

    /// Spot-checks the declared constants on random pairs from a seeded
    /// generator (deterministic for a given seed).
    pub fn sample_check(&self, samples: usize, seed: u64) -> SampleCheck {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut check = SampleCheck {
            lipschitz_ok: true,
            monotone_ok: self.dim_in == self.dim_out,
            strong_monotone_ok: self.dim_in == self.dim_out,
        };
        for k in 0..samples {
            let scale = 10f64.powi((k % 5) as i32 - 2);
            let x = RealVec::from_fn(self.dim_in, |_, _| rng.gen_range(-1.0..1.0) * scale);
            let y = RealVec::from_fn(self.dim_in, |_, _| rng.gen_range(-1.0..1.0) * scale);
            let (fx, fy) = (self.eval(&x), self.eval(&y));
            let dx = &x - &y;
            let df = &fx - &fy;
            let slack = 1e-10 * (1.0 + dx.norm_squared());
            if df.norm() > self.lipschitz * dx.norm() * (1.0 + 1e-9) + 1e-12 {
                check.lipschitz_ok = false;
            }
            if self.dim_in == self.dim_out {
                let inner = df.dot(&dx);
                if inner < -slack {
                    check.monotone_ok = false;
                }
                if inner < self.strong_modulus * dx.norm_squared() - slack {
                    check.strong_monotone_ok = false;
                }
            }
        }
        check
    }
}
