use itertools::Itertools;

use super::{
    argmax_first, basis, check_iterative_exponent, constant_unit, dual_scale, max_diff, normalize_lp, random_unit,
    start_rng, Coo, SolverOptions, SpectralResult, Witness,
};
use crate::error::{Error, Result};
use crate::forms::{apply_tail_unchecked, require_symmetric};
use crate::tensor::Tensor;

struct Run {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Lower estimate of `λ^(p)(A) = max P_A(x)` over the unit l^p sphere.
pub fn lambda_p(a: &Tensor, p: f64, opts: &SolverOptions) -> Result<SpectralResult> {
    lambda_p_with_starts(a, p, opts, &[])
}

/// `λ_min^(p)(A) = -λ^(p)(-A)`.
pub fn lambda_min_p(a: &Tensor, p: f64, opts: &SolverOptions) -> Result<SpectralResult> {
    let mut res = lambda_p(&a.neg(), p, opts)?;
    res.value = -res.value;
    Ok(res)
}

/// `η^(p)(A) = max |P_A(x)|` over the unit l^p sphere.
pub fn eta_p(a: &Tensor, p: f64, opts: &SolverOptions) -> Result<SpectralResult> {
    eta_p_with_starts(a, p, opts, &[])
}

/// As [`eta_p`], seeding both signed problems with the given vectors.
pub fn eta_p_with_starts(a: &Tensor, p: f64, opts: &SolverOptions, warm: &[Vec<f64>]) -> Result<SpectralResult> {
    let hi = lambda_p_with_starts(a, p, opts, warm)?;
    let lo = lambda_p_with_starts(&a.neg(), p, opts, warm)?;
    let mut best = if lo.value > hi.value { lo } else { hi };
    best.value = best.value.abs();
    Ok(best)
}

/// As [`lambda_p`], with extra starting vectors run after the built-in starts.
///
/// At `p = 1` no iteration is run: the result is the best of `P_A` over basis
/// vectors, scaled entry supports and the warm starts, with `converged = false`.
pub fn lambda_p_with_starts(a: &Tensor, p: f64, opts: &SolverOptions, warm: &[Vec<f64>]) -> Result<SpectralResult> {
    let n = require_symmetric(a)?;
    check_iterative_exponent(p)?;
    opts.validate()?;
    if let Some(x) = warm.iter().find(|x| x.len() != n) {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    let coo = Coo::new(a);
    if p == 1.0 {
        return Ok(lambda_one(a, &coo, warm));
    }
    if a.is_zero() {
        return Ok(vector_result(basis(n, 0), 0.0, p, 0, 1, true, 0));
    }
    let total = opts.starts + warm.len();
    if total == 0 {
        return Err(Error::BadParameter("at least one start is required".into()));
    }
    let alpha = a.abs_sum();
    let runs = crate::exec::map_indexed(total, opts.parallel, |i| {
        let x0 = if i < opts.starts {
            builtin_start(a, p, opts.seed, i)
        } else {
            normalize_lp(&warm[i - opts.starts], p).unwrap_or_else(|| constant_unit(n, p))
        };
        shifted_ascent(&coo, p, x0, alpha, opts)
    });
    let best = argmax_first(runs.iter().map(|r| r.value)).expect("total > 0");
    let run = &runs[best];
    Ok(vector_result(run.x.clone(), run.value, p, run.iterations, total, run.converged, best))
}

fn vector_result(
    x: Vec<f64>,
    value: f64,
    p: f64,
    iterations: usize,
    starts: usize,
    converged: bool,
    best_start: usize,
) -> SpectralResult {
    SpectralResult { value, witness: Witness::Vector(x), p, iterations, starts, converged, best_start, bracket: None }
}

fn builtin_start(a: &Tensor, p: f64, seed: u64, i: usize) -> Vec<f64> {
    let n = a.dims()[0];
    match i {
        0 => constant_unit(n, p),
        1 => dual_scale(&a.slice_sums(0), p)
            .or_else(|| dual_scale(&a.slice_abs_sums(0), p))
            .unwrap_or_else(|| constant_unit(n, p)),
        _ => random_unit(n, p, &mut start_rng(seed, i)),
    }
}

fn poly(coo: &Coo, x: &[f64], t: &mut [f64]) -> f64 {
    coo.apply_tail(x, t);
    t.iter().zip(x).map(|(t, x)| t * x).sum()
}

/// Safeguarded shifted fixed point `x <- dual_scale(∇P_A(x) + α p x|x|^{p-2})`.
///
/// Each iteration tries the shifts `α/2, α, 2α` and moves to the trial with the
/// largest `P_A` if it strictly increases; otherwise `α` is quadrupled.
fn shifted_ascent(coo: &Coo, p: f64, mut x: Vec<f64>, alpha0: f64, opts: &SolverOptions) -> Run {
    let n = x.len();
    let r = coo.r as f64;
    let mut t = vec![0.0; n];
    let mut t_trial = vec![0.0; n];
    let mut t_best = vec![0.0; n];
    let mut value = poly(coo, &x, &mut t);
    let (alpha_min, alpha_max) = (alpha0 * 1e-12, alpha0 * 1e12);
    let mut alpha = alpha0;
    let mut calm = 0;
    let mut pull = vec![0.0; n];
    for it in 1..=opts.max_iter {
        for (pk, &xi) in pull.iter_mut().zip(&x) {
            *pk = p * xi.signum() * xi.abs().powf(p - 1.0);
        }
        let mut best: Option<(f64, Vec<f64>, f64)> = None;
        let mut step = f64::INFINITY;
        for shift in [0.5 * alpha, alpha, 2.0 * alpha] {
            let g: Vec<f64> = t.iter().zip(&pull).map(|(t, pk)| r * t + shift * pk).collect();
            let y = dual_scale(&g, p).unwrap_or_else(|| x.clone());
            let v = poly(coo, &y, &mut t_trial);
            step = step.min(max_diff(&y, &x));
            if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                best = Some((v, y, shift));
                std::mem::swap(&mut t_best, &mut t_trial);
            }
        }
        let (v, y, shift) = best.expect("three trials");
        let change = (v - value).abs();
        if v > value {
            step = max_diff(&y, &x);
            x = y;
            value = v;
            std::mem::swap(&mut t, &mut t_best);
            alpha = shift.clamp(alpha_min, alpha_max);
        } else {
            alpha = (alpha * 4.0).min(alpha_max);
        }
        if change <= opts.tol * value.abs() && step <= opts.step_tol {
            calm += 1;
            if calm >= opts.window {
                return Run { x, value, iterations: it, converged: true };
            }
        } else {
            calm = 0;
        }
    }
    Run { x, value, iterations: opts.max_iter, converged: false }
}

/// Candidate evaluation on the l^1 sphere: `±e_i`, and for every nonzero entry
/// the vector with weights `m_j / r` on its index multiset, over all sign patterns.
fn lambda_one(a: &Tensor, coo: &Coo, warm: &[Vec<f64>]) -> SpectralResult {
    let n = a.dims()[0];
    let r = a.order();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        candidates.push(basis(n, i));
        let mut e = basis(n, i);
        e[i] = -1.0;
        candidates.push(e);
    }
    let mut supports: Vec<Vec<(usize, usize)>> = Vec::new();
    a.for_each_nonzero(|idx, _| {
        if idx.windows(2).all(|w| w[0] <= w[1]) {
            supports.push(idx.iter().copied().dedup_with_count().map(|(m, j)| (j, m)).collect());
        }
    });
    for support in supports {
        for signs in 0..(1u32 << support.len()) {
            let mut x = vec![0.0; n];
            for (b, &(j, m)) in support.iter().enumerate() {
                let s = if signs >> b & 1 == 1 { -1.0 } else { 1.0 };
                x[j] = s * m as f64 / r as f64;
            }
            candidates.push(x);
        }
    }
    candidates.extend(warm.iter().filter_map(|x| normalize_lp(x, 1.0)));
    let mut t = vec![0.0; n];
    let values: Vec<f64> = candidates.iter().map(|x| poly(coo, x, &mut t)).collect();
    let best = argmax_first(values.iter().copied()).expect("basis candidates exist");
    vector_result(candidates[best].clone(), values[best], 1.0, 0, candidates.len(), false, best)
}

/// `max_k |λ x_k|x_k|^{p-2} - (1/r) ∂P_A/∂x_k|`.
pub fn eigen_residual(a: &Tensor, lambda: f64, x: &[f64], p: f64) -> Result<f64> {
    let n = require_symmetric(a)?;
    super::check_exponent(p)?;
    if x.len() != n {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    let t = apply_tail_unchecked(a, x);
    Ok(x.iter().zip(&t).fold(0.0, |m, (&xk, tk)| m.max((lambda * xk.signum() * xk.abs().powf(p - 1.0) - tk).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::poly_form;
    use crate::random::{random_symmetric, Sign};
    use crate::spectral::lp_norm;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k2() -> Tensor {
        Tensor::new(vec![2, 2], vec![0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn k2_values() {
        let opts = SolverOptions::default();
        let res = lambda_p(&k2(), 4.0, &opts).unwrap();
        assert!((res.value - 2f64.sqrt()).abs() < 1e-10, "{}", res.value);
        let res = lambda_min_p(&k2(), 2.0, &opts).unwrap();
        assert!((res.value + 1.0).abs() < 1e-10);
        assert!((eta_p(&k2(), 2.0, &opts).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn all_ones_regular_value() {
        let a = Tensor::from_fn(vec![2, 2, 2], |_| 1.0).unwrap();
        let res = lambda_p(&a, 4.0, &SolverOptions::default()).unwrap();
        assert!((res.value - 2f64.powf(2.25)).abs() < 1e-9);
        assert!(res.converged);
        assert!(res.vector().unwrap().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn witness_is_unit_and_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [1.5, 2.0, 3.0, 6.0] {
            let a = random_symmetric(3, 4, Sign::Mixed, &mut rng);
            let res = eta_p(&a, p, &SolverOptions::default()).unwrap();
            let x = res.vector().unwrap();
            assert!((lp_norm(x, p) - 1.0).abs() < 1e-12);
            let pv = poly_form(&a, x).unwrap().abs();
            assert!((pv - res.value).abs() <= 1e-10 * res.value.max(1e-300));
            assert!(res.value <= a.abs_sum() + 1e-12);
        }
    }

    #[test]
    fn p_one_lower_report() {
        let a = Tensor::from_coo(3, vec![3; 3], &{
            let mut coo = Vec::new();
            for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                coo.push((perm.to_vec(), 1.0));
            }
            coo
        })
        .unwrap();
        let res = eta_p(&a, 1.0, &SolverOptions::default()).unwrap();
        assert!(!res.converged);
        assert!(res.value >= 6.0 / 27.0 - 1e-12);
    }

    #[test]
    fn refuses_non_symmetric() {
        let upper = Tensor::new(vec![2, 2], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(lambda_p(&upper, 2.0, &SolverOptions::default()), Err(Error::NotSymmetric));
    }

    #[test]
    fn residual_examples() {
        let h = 2f64.sqrt().recip();
        assert!(eigen_residual(&k2(), 1.0, &[h, h], 2.0).unwrap() < 1e-15);
        let c = 2f64.powf(-0.25);
        assert!(eigen_residual(&k2(), 2f64.sqrt(), &[c, c], 4.0).unwrap() < 1e-15);
        assert_eq!(eigen_residual(&k2(), 1.0, &[1.0, 0.0], 2.0).unwrap(), 1.0);
    }

    #[test]
    fn converged_maximizer_is_critical() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = random_symmetric(3, 4, Sign::Nonnegative, &mut rng);
        let res = lambda_p(&a, 3.0, &SolverOptions::default()).unwrap();
        assert!(res.converged);
        let res_val = eigen_residual(&a, res.value, res.vector().unwrap(), 3.0).unwrap();
        assert!(res_val < 1e-7, "{res_val}");
    }
}
