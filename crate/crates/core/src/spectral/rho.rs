use super::{constant_unit, normalize_lp, Coo, SolverOptions, SpectralResult, Witness};
use crate::error::{Error, Result};
use crate::forms::{apply_tail_unchecked, symmetry_tol};
use crate::structure::components;
use crate::tensor::Tensor;

fn require_nonnegative_cubical(a: &Tensor) -> Result<usize> {
    let n = a.cubical_size()?;
    if !a.is_nonnegative() {
        return Err(Error::NegativeEntries);
    }
    Ok(n)
}

/// `max_k (A x^{r-1})_k / x_k^{r-1}`, an upper bound for `ρ(A)` at any positive `x`.
pub fn collatz_wielandt_upper(a: &Tensor, x: &[f64]) -> Result<f64> {
    let n = require_nonnegative_cubical(a)?;
    if x.len() != n {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    if !x.iter().all(|&v| v > 0.0) {
        return Err(Error::NonPositiveVector);
    }
    let e = (a.order() - 1) as i32;
    let t = apply_tail_unchecked(a, x);
    Ok(t.iter().zip(x).fold(f64::NEG_INFINITY, |m, (t, x)| m.max(t / x.powi(e))))
}

/// Spectral radius of a nonnegative cubical tensor by the shifted power
/// iteration `x <- ((A + σI) x^{r-1})^{1/(r-1)}`, stopped on the Collatz–Wielandt bracket.
pub fn rho_nonnegative(a: &Tensor, opts: &SolverOptions) -> Result<SpectralResult> {
    let n = require_nonnegative_cubical(a)?;
    opts.validate()?;
    let r = a.order();
    let p = r as f64;
    if a.is_zero() {
        return Ok(SpectralResult {
            value: 0.0,
            witness: Witness::Vector(constant_unit(n, p)),
            p,
            iterations: 0,
            starts: 1,
            converged: true,
            best_start: 0,
            bracket: Some((0.0, 0.0)),
        });
    }
    if a.is_symmetric(symmetry_tol(a))? {
        let comps = components(a)?;
        if comps.len() > 1 {
            let mut best: Option<(Vec<usize>, SpectralResult)> = None;
            for c in comps.into_iter().filter(|c| !c.tensor.is_zero()) {
                let res = power(&c.tensor, opts);
                if best.as_ref().is_none_or(|(_, b)| res.value > b.value) {
                    best = Some((c.indices, res));
                }
            }
            let (indices, mut res) = best.expect("nonzero tensor has a nonzero component");
            let mut x = vec![0.0; n];
            for (&i, &v) in indices.iter().zip(res.vector().expect("vector witness")) {
                x[i] = v;
            }
            res.witness = Witness::Vector(x);
            return Ok(res);
        }
    }
    Ok(power(a, opts))
}

fn power(a: &Tensor, opts: &SolverOptions) -> SpectralResult {
    let n = a.dims()[0];
    let r = a.order();
    let p = r as f64;
    let e = (r - 1) as i32;
    let root = 1.0 / (r - 1) as f64;
    let sigma = a.max_abs();
    let coo = Coo::new(a);
    let mut x = constant_unit(n, p);
    let mut t = vec![0.0; n];
    let mut last_upper = f64::INFINITY;
    let mut calm = 0;
    let mut bracket = (0.0, f64::INFINITY);
    let mut converged = false;
    let mut iterations = opts.max_iter;
    for it in 1..=opts.max_iter {
        coo.apply_tail(&x, &mut t);
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for (&tk, &xk) in t.iter().zip(&x) {
            let d = xk.powi(e);
            if d > 0.0 {
                let ratio = tk / d;
                lo = lo.min(ratio);
                hi = hi.max(ratio);
            } else if tk > 0.0 {
                hi = f64::INFINITY;
            } else {
                lo = 0.0;
            }
        }
        bracket = (lo.max(0.0), hi);
        if hi - lo <= opts.tol * hi {
            converged = true;
            iterations = it;
            break;
        }
        // upper end settled (reducible input)
        if (hi - last_upper).abs() <= opts.tol * hi {
            calm += 1;
            if calm >= opts.window * 4 {
                converged = true;
                iterations = it;
                break;
            }
        } else {
            calm = 0;
        }
        last_upper = hi;
        let y: Vec<f64> = t.iter().zip(&x).map(|(tk, xk)| (tk + sigma * xk.powi(e)).powf(root)).collect();
        x = normalize_lp(&y, p).expect("shifted iterate stays positive");
    }
    let (lo, hi) = bracket;
    let value = if hi - lo <= opts.tol * hi { 0.5 * (lo + hi) } else { hi };
    SpectralResult {
        value,
        witness: Witness::Vector(x),
        p,
        iterations,
        starts: 1,
        converged,
        best_start: 0,
        bracket: Some(bracket),
    }
}

/// `(Σ v_i^{p/(p-r)})^{(p-r)/p}`, the p-spectral radius of a block-diagonal
/// tensor from those of its nonzero components.
pub fn combine_components(values: &[f64], p: f64, r: usize) -> Result<f64> {
    let rf = r as f64;
    if !(p.is_finite() && p > rf) {
        return Err(Error::BadExponent(p));
    }
    if !values.iter().all(|&v| v >= 0.0 && v.is_finite()) {
        return Err(Error::BadParameter("component values must be finite and nonnegative".into()));
    }
    let s = p / (p - rf);
    crate::tensor::lq_norm(values.iter().copied(), s)
}
