//! Spectral p-norms, p-spectral radii and the spectral radius of nonnegative
//! tensors, computed by monotone multi-start ascent.

mod curve;
mod lambda;
mod norm;
mod options;
mod rho;

pub use curve::{eta_p_curve, norm_p_curve};
pub use lambda::{eigen_residual, eta_p, eta_p_with_starts, lambda_min_p, lambda_p, lambda_p_with_starts};
pub use norm::{spectral_p_norm, spectral_p_norm_with_starts};
pub use options::SolverOptions;
pub use rho::{collatz_wielandt_upper, combine_components, rho_nonnegative};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::VectorTuple;
use crate::random::normal_vector;
use crate::tensor::Tensor;

/// Unit vectors attaining (or approximating) `‖A‖_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenKit {
    pub vectors: VectorTuple,
    /// `|L_A(x^(1), ..., x^(r))|`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Kit(EigenKit),
    Vector(Vec<f64>),
}

impl Witness {
    pub fn vectors(&self) -> Vec<&[f64]> {
        match self {
            Witness::Kit(k) => k.vectors.iter().map(Vec::as_slice).collect(),
            Witness::Vector(v) => vec![v.as_slice()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub value: f64,
    pub witness: Witness,
    pub p: f64,
    pub iterations: usize,
    pub starts: usize,
    pub converged: bool,
    pub best_start: usize,
    /// Collatz–Wielandt bracket `(lower, upper)` for the spectral radius.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
}

impl SpectralResult {
    /// The single witness vector of an `eta`/`lambda`/`rho` result.
    pub fn vector(&self) -> Option<&[f64]> {
        match &self.witness {
            Witness::Vector(v) => Some(v),
            Witness::Kit(_) => None,
        }
    }

    pub fn kit(&self) -> Option<&EigenKit> {
        match &self.witness {
            Witness::Kit(k) => Some(k),
            Witness::Vector(_) => None,
        }
    }
}

/// Flattened nonzero entries, the working form inside the solvers.
pub(crate) struct Coo {
    r: usize,
    idx: Vec<usize>,
    vals: Vec<f64>,
}

impl Coo {
    pub(crate) fn new(a: &Tensor) -> Self {
        let mut idx = Vec::new();
        let mut vals = Vec::new();
        a.for_each_nonzero(|i, v| {
            idx.extend_from_slice(i);
            vals.push(v);
        });
        Self { r: a.order(), idx, vals }
    }

    fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.idx.chunks_exact(self.r).zip(self.vals.iter().copied())
    }

    pub(crate) fn linear_form(&self, xs: &[Vec<f64>]) -> f64 {
        self.entries().map(|(i, v)| xs.iter().zip(i).fold(v, |p, (x, &i)| p * x[i])).sum()
    }

    /// Gradient of the linear form in block `k`, written into `g`.
    pub(crate) fn block_gradient(&self, xs: &[Vec<f64>], k: usize, g: &mut [f64]) {
        g.iter_mut().for_each(|v| *v = 0.0);
        for (i, v) in self.entries() {
            let mut p = v;
            for (j, (x, &ij)) in xs.iter().zip(i).enumerate() {
                if j != k {
                    p *= x[ij];
                }
            }
            g[i[k]] += p;
        }
    }

    /// `A x^{r-1}`, written into `t`.
    pub(crate) fn apply_tail(&self, x: &[f64], t: &mut [f64]) {
        t.iter_mut().for_each(|v| *v = 0.0);
        for (i, v) in self.entries() {
            t[i[0]] += i[1..].iter().fold(v, |p, &j| p * x[j]);
        }
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// Exponents the iterative solvers refuse: the dual exponent blows up just above 1.
pub(crate) fn check_iterative_exponent(p: f64) -> Result<()> {
    check_exponent(p)?;
    if p > 1.0 && p < 1.0 + 1e-3 {
        return Err(Error::BadExponent(p));
    }
    Ok(())
}

pub(crate) fn lp_norm(x: &[f64], p: f64) -> f64 {
    crate::tensor::lq_norm(x.iter().copied(), p).unwrap_or(f64::NAN)
}

/// `x / |x|_p`, or `None` for the zero vector.
pub(crate) fn normalize_lp(x: &[f64], p: f64) -> Option<Vec<f64>> {
    let s = lp_norm(x, p);
    (s > 0.0 && s.is_finite()).then(|| x.iter().map(|v| v / s).collect())
}

/// The unit-l^p vector maximizing `<g, y>`: `sign(g)|g|^{1/(p-1)}`, normalized.
pub(crate) fn dual_scale(g: &[f64], p: f64) -> Option<Vec<f64>> {
    let m = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return None;
    }
    let e = 1.0 / (p - 1.0);
    let y: Vec<f64> = g.iter().map(|&v| v.signum() * (v.abs() / m).powf(e) * (v != 0.0) as u8 as f64).collect();
    normalize_lp(&y, p)
}

pub(crate) fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub(crate) fn constant_unit(n: usize, p: f64) -> Vec<f64> {
    vec![(n as f64).powf(-1.0 / p); n]
}

pub(crate) fn basis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// Seeded random unit-l^p vector.
pub(crate) fn random_unit(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    normalize_lp(&normal_vector(n, rng), p).unwrap_or_else(|| constant_unit(n, p))
}

pub(crate) fn start_rng(seed: u64, start: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(start as u64))
}

/// Index of the best value; ties go to the lowest index.
pub(crate) fn argmax_first(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}
