//! Brute-force reference values on tiny instances and a catalogue of
//! closed-form values.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{require_symmetric, VectorTuple};
use crate::hypergraph::{gen_beta_star, gen_star};
use crate::spectral::{
    check_exponent, eta_p_with_starts, lp_norm, spectral_p_norm_with_starts, Coo, SolverOptions, Witness,
};
use crate::tensor::{lq_norm, Tensor};

pub const DEFAULT_RESOLUTION: usize = 64;
const MAX_NORM_VARS: usize = 8;
const MAX_ETA_DIM: usize = 4;
const CHUNKS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Grid,
    GridPolish,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub value: f64,
    pub method: OracleMethod,
    pub resolution: usize,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Grid over the nonnegative orthant of the l^p sphere by hyperspherical
/// angles, with the sign of every coordinate but the first enumerated.
struct SphereGrid {
    n: usize,
    res: usize,
    p: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl SphereGrid {
    fn new(n: usize, res: usize, p: f64) -> Self {
        let angles: Vec<f64> =
            (0..res).map(|j| if res == 1 { 0.0 } else { FRAC_PI_2 * j as f64 / (res - 1) as f64 }).collect();
        Self { n, res, p, cos: angles.iter().map(|a| a.cos()).collect(), sin: angles.iter().map(|a| a.sin()).collect() }
    }

    fn len(&self) -> usize {
        (self.res * 2).pow(self.n as u32 - 1)
    }

    /// Writes point `t` (`t < len()`) into `y`.
    fn point(&self, mut t: usize, y: &mut [f64]) {
        let mut tail = 1.0;
        for yi in y.iter_mut().take(self.n - 1) {
            let a = t % self.res;
            t /= self.res;
            *yi = tail * self.cos[a];
            tail *= self.sin[a];
        }
        y[self.n - 1] = tail;
        for (i, v) in y.iter_mut().enumerate() {
            let neg = i > 0 && {
                let bit = t & 1 == 1;
                t >>= 1;
                bit
            };
            let m = v.abs().powf(2.0 / self.p);
            *v = if neg { -m } else { m };
        }
    }
}

/// Mixed-radix walk over the product of several sphere grids, split into
/// chunks reduced in parallel; ties go to the lowest point index.
fn grid_search<F>(sizes: &[usize], parallel: bool, eval: F) -> (f64, usize, usize)
where
    F: Fn(&[usize]) -> f64 + Sync + Send,
{
    let total: usize = sizes.iter().product();
    let chunk = total.div_ceil(CHUNKS).max(1);
    let chunks = total.div_ceil(chunk);
    let best = crate::exec::map_indexed(chunks, parallel, |c| {
        let mut digits = vec![0; sizes.len()];
        let mut best = (f64::NEG_INFINITY, usize::MAX);
        for t in c * chunk..((c + 1) * chunk).min(total) {
            let mut rest = t;
            for (d, &s) in digits.iter_mut().zip(sizes) {
                *d = rest % s;
                rest /= s;
            }
            let v = eval(&digits);
            if v > best.0 {
                best = (v, t);
            }
        }
        best
    });
    let (value, index) = best.into_iter().fold((f64::NEG_INFINITY, usize::MAX), |b, c| if c.0 > b.0 { c } else { b });
    (value, index, total)
}

fn decode(sizes: &[usize], mut t: usize) -> Vec<usize> {
    sizes
        .iter()
        .map(|&s| {
            let d = t % s;
            t /= s;
            d
        })
        .collect()
}

/// Maximum of `|L_A|` over a product of sphere grids; the largest block is
/// optimized exactly. Polished by block ascent from the best grid point.
pub fn grid_max_norm(a: &Tensor, p: f64, resolution: usize, opts: &SolverOptions) -> Result<OracleResult> {
    check_exponent(p)?;
    let vars: usize = a.dims().iter().sum();
    if vars > MAX_NORM_VARS {
        return Err(Error::TooLarge(format!("{vars} variables, at most {MAX_NORM_VARS}")));
    }
    if resolution < 2 {
        return Err(Error::BadParameter("resolution must be at least 2".into()));
    }
    let dims = a.dims().to_vec();
    let free = (0..dims.len()).max_by_key(|&k| (dims[k], std::cmp::Reverse(k))).expect("order >= 2");
    let grids: Vec<SphereGrid> = dims.iter().map(|&n| SphereGrid::new(n, resolution, p)).collect();
    let blocks: Vec<usize> = (0..dims.len()).filter(|&k| k != free).collect();
    let sizes: Vec<usize> = blocks.iter().map(|&k| grids[k].len()).collect();
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    let coo = Coo::new(a);
    let fill = |digits: &[usize], xs: &mut VectorTuple| {
        for (&k, &d) in blocks.iter().zip(digits) {
            grids[k].point(d, &mut xs[k]);
        }
    };
    let (value, index, samples) = grid_search(&sizes, opts.parallel, |digits| {
        let mut xs: VectorTuple = dims.iter().map(|&n| vec![0.0; n]).collect();
        fill(digits, &mut xs);
        let mut g = vec![0.0; dims[free]];
        coo.block_gradient(&xs, free, &mut g);
        lq_norm(g.iter().copied(), q).unwrap_or(0.0)
    });
    let mut xs: VectorTuple = dims.iter().map(|&n| vec![0.0; n]).collect();
    fill(&decode(&sizes, index), &mut xs);
    let mut g = vec![0.0; dims[free]];
    coo.block_gradient(&xs, free, &mut g);
    xs[free] = if p == 1.0 {
        let i = crate::spectral::argmax_first(g.iter().map(|v| v.abs())).expect("nonempty block");
        let mut e = crate::spectral::basis(dims[free], i);
        e[i] = if g[i] < 0.0 { -1.0 } else { 1.0 };
        e
    } else {
        crate::spectral::dual_scale(&g, p).unwrap_or_else(|| crate::spectral::basis(dims[free], 0))
    };
    if p == 1.0 {
        return Ok(OracleResult {
            value,
            method: OracleMethod::Grid,
            resolution,
            samples,
            witness: Some(kit(xs, value)),
        });
    }
    match spectral_p_norm_with_starts(a, p, &opts.clone().with_starts(0), std::slice::from_ref(&xs)) {
        Ok(res) if res.value > value => Ok(OracleResult {
            value: res.value,
            method: OracleMethod::GridPolish,
            resolution,
            samples,
            witness: Some(res.witness),
        }),
        Ok(_) | Err(Error::BadExponent(_)) => {
            Ok(OracleResult { value, method: OracleMethod::Grid, resolution, samples, witness: Some(kit(xs, value)) })
        }
        Err(e) => Err(e),
    }
}

fn kit(vectors: VectorTuple, value: f64) -> Witness {
    Witness::Kit(crate::spectral::EigenKit { vectors, value })
}

/// Maximum of `|P_A|` over a grid on the l^p sphere, polished by the shifted iteration.
pub fn grid_max_eta(a: &Tensor, p: f64, resolution: usize, opts: &SolverOptions) -> Result<OracleResult> {
    let n = require_symmetric(a)?;
    check_exponent(p)?;
    if n > MAX_ETA_DIM {
        return Err(Error::TooLarge(format!("dimension {n}, at most {MAX_ETA_DIM}")));
    }
    if resolution < 2 {
        return Err(Error::BadParameter("resolution must be at least 2".into()));
    }
    let grid = SphereGrid::new(n, resolution, p);
    let coo = Coo::new(a);
    let eval = |x: &[f64]| {
        let mut t = vec![0.0; n];
        coo.apply_tail(x, &mut t);
        t.iter().zip(x).map(|(t, x)| t * x).sum::<f64>().abs()
    };
    let (value, index, samples) = grid_search(&[grid.len()], opts.parallel, |d| {
        let mut y = vec![0.0; n];
        grid.point(d[0], &mut y);
        eval(&y)
    });
    let mut x = vec![0.0; n];
    grid.point(index, &mut x);
    let grid_result = |x: Vec<f64>| OracleResult {
        value,
        method: OracleMethod::Grid,
        resolution,
        samples,
        witness: Some(Witness::Vector(x)),
    };
    match eta_p_with_starts(a, p, &opts.clone().with_starts(0), std::slice::from_ref(&x)) {
        Ok(res) if res.value > value => Ok(OracleResult {
            value: res.value,
            method: OracleMethod::GridPolish,
            resolution,
            samples,
            witness: Some(res.witness),
        }),
        Ok(_) | Err(Error::BadExponent(_)) => Ok(grid_result(x)),
        Err(e) => Err(e),
    }
}

/// Instances with known spectral values.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    /// `K_{1,n}`; `‖A‖_2 = √n`.
    Star(usize),
    /// All-ones cubical tensor; `‖A‖_p = n^{r - r/p}`, also `η^(p)` for `p >= r`.
    AllOnes { r: usize, n: usize },
    /// 3-uniform β-star with `k` edges; `ρ = η^(3) = ‖A‖_3 = 2k^{1/3}`.
    BetaStar { r: usize, k: usize },
    /// `2 x len` matrix whose only nonzero row is `v`; `‖A‖_p = |v|_{p/(p-1)}`.
    SingleFiber(Vec<f64>),
    /// `x^(1) ⊗ ... ⊗ x^(r)`; `‖A‖_p = ∏ |x^(k)|_{p/(p-1)}`.
    RankOne(Vec<Vec<f64>>),
}

impl Instance {
    pub fn tensor(&self) -> Result<Tensor> {
        match self {
            Instance::Star(n) => Ok(gen_star(*n)?.adjacency_tensor()),
            Instance::AllOnes { r, n } => Tensor::from_fn(vec![*n; *r], |_| 1.0),
            Instance::BetaStar { r, k } => Ok(gen_beta_star(*r, *k)?.adjacency_tensor()),
            Instance::SingleFiber(v) => {
                let mut data = v.clone();
                data.extend(std::iter::repeat_n(0.0, v.len()));
                Tensor::new(vec![2, v.len()], data)
            }
            Instance::RankOne(xs) => Tensor::rank_one(xs),
        }
    }

    /// Whether the value is also `η^(p)` of a symmetric tensor.
    pub fn is_eta(&self, p: f64) -> bool {
        match self {
            Instance::Star(_) => true,
            Instance::AllOnes { r, .. } => p >= *r as f64,
            Instance::BetaStar { .. } => true,
            _ => false,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Instance::Star(n) => write!(f, "star({n})"),
            Instance::AllOnes { r, n } => write!(f, "all_ones({r},{n})"),
            Instance::BetaStar { r, k } => write!(f, "beta_star({r},{k})"),
            Instance::SingleFiber(v) => write!(f, "single_fiber({})", list(v)),
            Instance::RankOne(xs) => {
                write!(f, "rank_one(")?;
                for (i, x) in xs.iter().enumerate() {
                    write!(f, "{}[{}]", if i > 0 { "," } else { "" }, list(x))?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Instance {
    type Err = Error;

    /// Parses `star(9)`, `all_ones(3,2)`, `beta_star(3,8)`, `single_fiber(1,2,2)`
    /// or `rank_one([1,2],[3,4])`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownInstance(s.to_string());
        let s = s.trim();
        let (name, rest) = s.split_once('(').ok_or_else(unknown)?;
        let args = rest.strip_suffix(')').ok_or_else(unknown)?;
        let ints =
            || -> Result<Vec<usize>> { args.split(',').map(|a| a.trim().parse().map_err(|_| unknown())).collect() };
        let floats = |a: &str| -> Result<Vec<f64>> {
            a.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(|_| unknown())).collect()
        };
        match (name.trim(), ints()) {
            ("star", Ok(v)) if v.len() == 1 => Ok(Instance::Star(v[0])),
            ("all_ones", Ok(v)) if v.len() == 2 => Ok(Instance::AllOnes { r: v[0], n: v[1] }),
            ("beta_star", Ok(v)) if v.len() == 2 => Ok(Instance::BetaStar { r: v[0], k: v[1] }),
            ("single_fiber", _) => Ok(Instance::SingleFiber(floats(args)?)),
            ("rank_one", _) => {
                let inner = args.trim().strip_prefix('[').and_then(|a| a.strip_suffix(']')).ok_or_else(unknown)?;
                let xs =
                    inner.split("],").map(|part| floats(part.trim().trim_start_matches('['))).collect::<Result<_>>()?;
                Ok(Instance::RankOne(xs))
            }
            _ => Err(unknown()),
        }
    }
}

/// Closed-form spectral value of a catalogued instance at `p`.
pub fn closed_form(instance: &Instance, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let q = if p == 1.0 { f64::INFINITY } else { p / (p - 1.0) };
    match instance {
        Instance::Star(n) if p == 2.0 => Ok((*n as f64).sqrt()),
        Instance::Star(_) => Err(Error::BadExponent(p)),
        Instance::AllOnes { r, n } => Ok((*n as f64).powf(*r as f64 * (1.0 - 1.0 / p))),
        Instance::BetaStar { r: 3, k } if p == 3.0 => Ok(2.0 * (*k as f64).cbrt()),
        Instance::BetaStar { .. } => Err(Error::UnknownInstance(format!("{instance} at p = {p}"))),
        Instance::SingleFiber(v) => lq_norm(v.iter().copied(), q),
        Instance::RankOne(xs) => xs.iter().map(|x| lq_norm(x.iter().copied(), q)).product(),
    }
}

/// Parses `name` and evaluates [`closed_form`].
pub fn closed_form_by_name(name: &str, p: f64) -> Result<f64> {
    closed_form(&name.parse()?, p)
}

/// The tiny `(instance, p)` pairs used for oracle cross-checks.
pub fn catalogue() -> Vec<(Instance, f64)> {
    vec![
        (Instance::Star(1), 2.0),
        (Instance::Star(2), 2.0),
        (Instance::Star(3), 2.0),
        (Instance::AllOnes { r: 2, n: 2 }, 3.0),
        (Instance::AllOnes { r: 3, n: 2 }, 3.0),
        (Instance::AllOnes { r: 3, n: 2 }, 4.0),
        (Instance::BetaStar { r: 3, k: 1 }, 3.0),
        (Instance::SingleFiber(vec![1.0, 2.0, 2.0]), 2.0),
        (Instance::SingleFiber(vec![1.0, -2.0, 0.5]), 3.0),
        (Instance::RankOne(vec![vec![1.0, -2.0], vec![3.0, 4.0]]), 2.5),
        (Instance::RankOne(vec![vec![1.0, 2.0], vec![1.0, 1.0], vec![0.5, -1.0]]), 1.5),
    ]
}

/// Unit-l^p check used by callers that report oracle witnesses.
pub fn is_unit(x: &[f64], p: f64, tol: f64) -> bool {
    (lp_norm(x, p) - 1.0).abs() <= tol
}
