//! Closed-form upper and lower bounds on `‖A‖_p` and the bound sandwich report.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{require_symmetric, symmetry_tol};
use crate::spectral::{spectral_p_norm, SolverOptions};
use crate::tensor::{for_each_multi_index, lq_norm, Tensor};

/// Relative tolerance for regularity checks.
pub const REGULAR_TOL: f64 = 1e-12;

fn dual_exponent(p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::BadExponent(p));
    }
    Ok(p / (p - 1.0))
}

fn check_axis(a: &Tensor, k: usize) -> Result<()> {
    if k >= a.order() {
        return Err(Error::IndexOutOfRange { index: vec![k], dims: a.dims().to_vec() });
    }
    Ok(())
}

/// `|A_s^(k)|_1` for every axis `k` and position `s`.
fn slice_norms(a: &Tensor) -> Vec<Vec<f64>> {
    (0..a.order()).map(|k| a.slice_abs_sums(k)).collect()
}

/// `(S^(1) ... S^(r))^{1/r}` with `S^(k)` the largest slice l^1 norm along axis `k`.
pub fn upper_hlp(a: &Tensor) -> f64 {
    let r = a.order() as f64;
    slice_norms(a).iter().map(|s| s.iter().fold(0.0_f64, |m, &v| m.max(v))).product::<f64>().powf(1.0 / r)
}

/// `(max over nonzero entries of ∏_k |A_{i_k}^(k)|_1)^{1/r}`.
pub fn upper_main(a: &Tensor) -> f64 {
    let norms = slice_norms(a);
    let mut best = 0.0_f64;
    a.for_each_nonzero(|idx, _| {
        best = best.max(idx.iter().enumerate().map(|(k, &i)| norms[k][i]).product());
    });
    best.powf(1.0 / a.order() as f64)
}

/// Schur's bound `(max row sum · max column sum)^{1/2}` for matrices.
pub fn upper_schur(a: &Tensor) -> Result<f64> {
    if a.order() != 2 {
        return Err(Error::NotOrder2(a.order()));
    }
    let max = |v: Vec<f64>| v.into_iter().fold(0.0_f64, f64::max);
    Ok((max(a.slice_abs_sums(0)) * max(a.slice_abs_sums(1))).sqrt())
}

/// `(min_k max_s Σ_{i_k = s} |a_i| ∏_{j≠k} |A_{i_j}^(j)|_1)^{1/r}`.
pub fn upper_th3(a: &Tensor) -> f64 {
    let norms = slice_norms(a);
    let r = a.order();
    let mut sums: Vec<Vec<f64>> = a.dims().iter().map(|&n| vec![0.0; n]).collect();
    a.for_each_nonzero(|idx, v| {
        let all: f64 = idx.iter().enumerate().map(|(j, &i)| norms[j][i]).product();
        for k in 0..r {
            let others = if norms[k][idx[k]] > 0.0 {
                all / norms[k][idx[k]]
            } else {
                idx.iter().enumerate().filter(|&(j, _)| j != k).map(|(j, &i)| norms[j][i]).product()
            };
            sums[k][idx[k]] += v.abs() * others;
        }
    });
    let best = sums.iter().map(|s| s.iter().fold(0.0_f64, |m, &v| m.max(v))).fold(f64::INFINITY, f64::min);
    best.powf(1.0 / r as f64)
}

/// `|A|_{p/(p-1)}`; equal to `‖A‖_p` exactly for rank-one `A`.
pub fn upper_entry_norm(a: &Tensor, p: f64) -> Result<f64> {
    a.entrywise_norm(dual_exponent(p)?)
}

/// True iff every single-mode unfolding of `A` has rank at most one, up to
/// `tol` relative to `|A|_max`.
pub fn is_rank_one(a: &Tensor, tol: f64) -> bool {
    let scale = a.max_abs();
    if scale == 0.0 {
        return true;
    }
    let data = a.data();
    let total = data.len();
    (0..a.order()).all(|k| {
        let n = a.dims()[k];
        let stride = a.strides()[k];
        // unfolding entry (i, c): row i along axis k, column c over the other axes
        let cols = total / n;
        let offset = |i: usize, c: usize| (c / stride) * stride * n + i * stride + c % stride;
        let (mut pi, mut pc, mut pv) = (0, 0, 0.0_f64);
        for i in 0..n {
            for c in 0..cols {
                let v = data[offset(i, c)];
                if v.abs() > pv.abs() {
                    (pi, pc, pv) = (i, c, v);
                }
            }
        }
        (0..n).all(|i| {
            (0..cols).all(|c| {
                let predicted = data[offset(i, pc)] * data[offset(pi, c)] / pv;
                (data[offset(i, c)] - predicted).abs() <= tol * scale
            })
        })
    })
}

/// `(n_1 ... n_r)^{-1/p} Σ_j |ΣA_j^(k)|`.
pub fn lower_slice_sum(a: &Tensor, p: f64, k: usize) -> Result<f64> {
    crate::spectral::check_exponent(p)?;
    check_axis(a, k)?;
    let total = a.len() as f64;
    Ok(total.powf(-1.0 / p) * a.slice_sums(k).iter().map(|s| s.abs()).sum::<f64>())
}

/// Largest `|F|_{p/(p-1)}` over all fibers `F` of `A`.
pub fn lower_fiber(a: &Tensor, p: f64) -> Result<f64> {
    let q = dual_exponent(p)?;
    let mut best = 0.0_f64;
    for k in 0..a.order() {
        let mut outer = a.dims().to_vec();
        outer[k] = 1;
        let mut err = None;
        for_each_multi_index(&outer, |idx| match a.fiber(k, idx).and_then(|f| f.entrywise_norm(q)) {
            Ok(v) => best = best.max(v),
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(best)
}

/// `(n_k / (n_1 ... n_r))^{1/p} |(ΣA_1^(k), ..., ΣA_{n_k}^(k))|_{p/(p-1)}`.
pub fn lower_th5(a: &Tensor, p: f64, k: usize) -> Result<f64> {
    let q = dual_exponent(p)?;
    check_axis(a, k)?;
    let ratio = a.dims()[k] as f64 / a.len() as f64;
    Ok(ratio.powf(1.0 / p) * lq_norm(a.slice_sums(k).into_iter(), q)?)
}

/// Exact `η^(p)(A) = n^{-r/p} ΣA` of a regular nonnegative symmetric tensor, `p >= r`.
pub fn regular_value(a: &Tensor, p: f64) -> Result<f64> {
    let n = require_symmetric(a)?;
    if !a.is_nonnegative() {
        return Err(Error::NegativeEntries);
    }
    if !a.is_regular(REGULAR_TOL) {
        return Err(Error::NotRegular);
    }
    let r = a.order() as f64;
    if !(p.is_finite() && p >= r) {
        return Err(Error::BadExponent(p));
    }
    Ok((n as f64).powf(-r / p) * a.sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: String,
    pub value: f64,
}

/// Every applicable bound for one `(A, p)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub p: f64,
    pub lower: Vec<NamedBound>,
    pub upper: Vec<NamedBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    /// Failed sandwich comparisons; empty when consistent.
    pub violations: Vec<String>,
}

impl BoundsReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.lower.iter().chain(&self.upper).find(|b| b.name == name).map(|b| b.value)
    }

    pub fn best_lower(&self) -> f64 {
        self.lower.iter().fold(0.0, |m, b| m.max(b.value))
    }

    pub fn best_upper(&self) -> f64 {
        self.upper.iter().fold(f64::INFINITY, |m, b| m.min(b.value))
    }

    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

fn named(name: impl Into<String>, value: f64) -> NamedBound {
    NamedBound { name: name.into(), value }
}

/// Evaluates all bounds that apply at `p`; the r-norm bounds only when `p = r`.
pub fn bounds_report(a: &Tensor, p: f64, opts: &SolverOptions, with_estimate: bool) -> Result<BoundsReport> {
    crate::spectral::check_exponent(p)?;
    let r = a.order();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for k in 0..r {
        lower.push(named(format!("slice_sum_{k}"), lower_slice_sum(a, p, k)?));
    }
    if p > 1.0 {
        lower.push(named("fiber", lower_fiber(a, p)?));
        for k in 0..r {
            lower.push(named(format!("th5_{k}"), lower_th5(a, p, k)?));
        }
    }
    if a.is_cubical()
        && a.is_nonnegative()
        && p >= r as f64
        && a.is_symmetric(symmetry_tol(a))?
        && a.is_regular(REGULAR_TOL)
    {
        lower.push(named("regular_value", regular_value(a, p)?));
    }
    if p == 1.0 {
        upper.push(named("entry_max", a.max_abs()));
    } else {
        upper.push(named("entry_norm", upper_entry_norm(a, p)?));
    }
    if p == r as f64 {
        if r == 2 {
            upper.push(named("schur", upper_schur(a)?));
        }
        upper.push(named("hlp", upper_hlp(a)));
        upper.push(named("main", upper_main(a)));
        upper.push(named("th3", upper_th3(a)));
    }
    let estimate = if with_estimate { Some(spectral_p_norm(a, p, opts)?.value) } else { None };
    let mut violations = Vec::new();
    for lo in &lower {
        for up in &upper {
            if lo.value > up.value + 1e-9 * up.value.max(1.0) {
                violations.push(format!("{} = {} exceeds {} = {}", lo.name, lo.value, up.name, up.value));
            }
        }
        if let Some(est) = estimate {
            if lo.value > est + 1e-8 * est.max(1.0) {
                violations.push(format!("{} = {} exceeds estimate {}", lo.name, lo.value, est));
            }
        }
    }
    if let Some(est) = estimate {
        for up in &upper {
            if est > up.value + 1e-12 * up.value.max(1.0) {
                violations.push(format!("estimate {} exceeds {} = {}", est, up.name, up.value));
            }
        }
    }
    Ok(BoundsReport { p, lower, upper, estimate, violations })
}
