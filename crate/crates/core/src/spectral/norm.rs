use super::{
    argmax_first, basis, check_iterative_exponent, constant_unit, dual_scale, lp_norm, max_diff, normalize_lp,
    random_unit, start_rng, Coo, EigenKit, SolverOptions, SpectralResult, Witness,
};
use crate::error::{Error, Result};
use crate::forms::VectorTuple;
use crate::tensor::Tensor;

struct Run {
    xs: VectorTuple,
    iterations: usize,
    converged: bool,
}

/// Lower estimate of `‖A‖_p` by multi-start block-coordinate ascent; exact at `p = 1`.
pub fn spectral_p_norm(a: &Tensor, p: f64, opts: &SolverOptions) -> Result<SpectralResult> {
    spectral_p_norm_with_starts(a, p, opts, &[])
}

/// As [`spectral_p_norm`], with extra starting tuples run after the built-in starts.
pub fn spectral_p_norm_with_starts(
    a: &Tensor,
    p: f64,
    opts: &SolverOptions,
    warm: &[VectorTuple],
) -> Result<SpectralResult> {
    check_iterative_exponent(p)?;
    opts.validate()?;
    for xs in warm {
        if xs.len() != a.order() {
            return Err(Error::DimMismatch { expected: a.order(), got: xs.len() });
        }
        for (x, &n) in xs.iter().zip(a.dims()) {
            if x.len() != n {
                return Err(Error::DimMismatch { expected: n, got: x.len() });
            }
        }
    }
    if a.is_zero() {
        let vectors = a.dims().iter().map(|&n| basis(n, 0)).collect();
        return Ok(kit_result(vectors, 0.0, p, 0, 1, true, 0));
    }
    if p == 1.0 {
        return Ok(norm_one(a));
    }
    let total = opts.starts + warm.len();
    if total == 0 {
        return Err(Error::BadParameter("at least one start is required".into()));
    }
    let coo = Coo::new(a);
    let runs = crate::exec::map_indexed(total, opts.parallel, |i| {
        let x0 =
            if i < opts.starts { builtin_start(a, p, opts.seed, i) } else { warm_start(&warm[i - opts.starts], p) };
        ascend(&coo, a.dims(), p, x0, opts)
    });
    let values: Vec<f64> = runs.iter().map(|r| coo.linear_form(&r.xs).abs()).collect();
    let best = argmax_first(values.iter().copied()).expect("total > 0");
    let run = &runs[best];
    let mut vectors = run.xs.clone();
    if coo.linear_form(&vectors) < 0.0 {
        vectors[0].iter_mut().for_each(|v| *v = -*v);
    }
    Ok(kit_result(vectors, values[best], p, run.iterations, total, run.converged, best))
}

fn kit_result(
    vectors: VectorTuple,
    value: f64,
    p: f64,
    iterations: usize,
    starts: usize,
    converged: bool,
    best_start: usize,
) -> SpectralResult {
    SpectralResult {
        value,
        witness: Witness::Kit(EigenKit { vectors, value }),
        p,
        iterations,
        starts,
        converged,
        best_start,
        bracket: None,
    }
}

/// `‖A‖_1 = |A|_max`, attained at basis vectors through a largest entry.
fn norm_one(a: &Tensor) -> SpectralResult {
    let mut best: Option<(Vec<usize>, f64)> = None;
    a.for_each_entry(|idx, v| {
        if best.as_ref().is_none_or(|(_, b)| v.abs() > b.abs()) {
            best = Some((idx.to_vec(), v));
        }
    });
    let (idx, v) = best.expect("tensor has entries");
    let mut vectors: VectorTuple = idx.iter().zip(a.dims()).map(|(&i, &n)| basis(n, i)).collect();
    if v < 0.0 {
        vectors[0][idx[0]] = -1.0;
    }
    kit_result(vectors, v.abs(), 1.0, 0, 1, true, 0)
}

fn builtin_start(a: &Tensor, p: f64, seed: u64, i: usize) -> VectorTuple {
    match i {
        0 => a.dims().iter().map(|&n| constant_unit(n, p)).collect(),
        1 => (0..a.order())
            .map(|k| {
                let n = a.dims()[k];
                dual_scale(&a.slice_sums(k), p)
                    .or_else(|| dual_scale(&a.slice_abs_sums(k), p))
                    .unwrap_or_else(|| constant_unit(n, p))
            })
            .collect(),
        _ => {
            let mut rng = start_rng(seed, i);
            a.dims().iter().map(|&n| random_unit(n, p, &mut rng)).collect()
        }
    }
}

fn warm_start(xs: &VectorTuple, p: f64) -> VectorTuple {
    xs.iter().map(|x| normalize_lp(x, p).unwrap_or_else(|| constant_unit(x.len(), p))).collect()
}

/// Alternating exact block maximization; `|L_A|` never decreases.
fn ascend(coo: &Coo, dims: &[usize], p: f64, mut xs: VectorTuple, opts: &SolverOptions) -> Run {
    let q = p / (p - 1.0);
    let r = dims.len();
    let mut grads: Vec<Vec<f64>> = dims.iter().map(|&n| vec![0.0; n]).collect();
    let mut value = coo.linear_form(&xs).abs();
    let mut calm = 0;
    for it in 1..=opts.max_iter {
        let mut step = 0.0_f64;
        let mut v = value;
        for k in 0..r {
            coo.block_gradient(&xs, k, &mut grads[k]);
            match dual_scale(&grads[k], p) {
                Some(y) => {
                    step = step.max(max_diff(&y, &xs[k]));
                    v = lp_norm(&grads[k], q);
                    xs[k] = y;
                }
                None => v = 0.0,
            }
        }
        let change = (v - value).abs();
        value = v;
        if change <= opts.tol * value && step <= opts.step_tol {
            calm += 1;
            if calm >= opts.window {
                return Run { xs, iterations: it, converged: true };
            }
        } else {
            calm = 0;
        }
    }
    Run { xs, iterations: opts.max_iter, converged: false }
}
