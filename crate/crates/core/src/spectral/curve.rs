use super::{
    lambda_p_with_starts, spectral_p_norm, spectral_p_norm_with_starts, SolverOptions, SpectralResult, Witness,
};
use crate::error::Result;
use crate::forms::require_symmetric;
use crate::tensor::Tensor;

const MAX_SWEEPS: usize = 5;

/// `spectral_p_norm` at each `p`, with neighbouring witnesses re-used as extra
/// starts until no value improves.
pub fn norm_p_curve(a: &Tensor, ps: &[f64], opts: &SolverOptions) -> Result<Vec<SpectralResult>> {
    let initial = ps.iter().map(|&p| spectral_p_norm(a, p, opts)).collect::<Result<Vec<_>>>()?;
    refine(ps, initial, |p, warm| {
        let tuples: Vec<_> = warm
            .iter()
            .filter_map(|w| match w {
                Witness::Kit(k) => Some(k.vectors.clone()),
                Witness::Vector(_) => None,
            })
            .collect();
        // p = 1 is exact
        if p == 1.0 {
            return Ok(None);
        }
        spectral_p_norm_with_starts(a, p, &opts.clone().with_starts(0), &tuples).map(Some)
    })
}

/// `eta_p` at each `p`, refined as in [`norm_p_curve`] separately for the
/// largest and the smallest value of the polynomial form.
pub fn eta_p_curve(a: &Tensor, ps: &[f64], opts: &SolverOptions) -> Result<Vec<SpectralResult>> {
    require_symmetric(a)?;
    let neg = a.neg();
    let hi = lambda_curve(a, ps, opts)?;
    let lo = lambda_curve(&neg, ps, opts)?;
    Ok(hi
        .into_iter()
        .zip(lo)
        .map(|(h, l)| {
            let mut best = if l.value > h.value { l } else { h };
            best.value = best.value.abs();
            best
        })
        .collect())
}

fn lambda_curve(a: &Tensor, ps: &[f64], opts: &SolverOptions) -> Result<Vec<SpectralResult>> {
    let initial = ps.iter().map(|&p| lambda_p_with_starts(a, p, opts, &[])).collect::<Result<Vec<_>>>()?;
    refine(ps, initial, |p, warm| {
        let vectors: Vec<Vec<f64>> = warm
            .iter()
            .filter_map(|w| match w {
                Witness::Vector(v) => Some(v.clone()),
                Witness::Kit(_) => None,
            })
            .collect();
        lambda_p_with_starts(a, p, &opts.clone().with_starts(0), &vectors).map(Some)
    })
}

/// Sweeps up and down the sorted exponents, re-solving each point from its
/// neighbours' witnesses and keeping strict improvements.
fn refine(
    ps: &[f64],
    mut results: Vec<SpectralResult>,
    solve: impl Fn(f64, &[Witness]) -> Result<Option<SpectralResult>>,
) -> Result<Vec<SpectralResult>> {
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_by(|&i, &j| ps[i].total_cmp(&ps[j]));
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        let forward = 0..order.len();
        for pos in forward.clone().chain(forward.rev()) {
            let i = order[pos];
            let warm: Vec<Witness> = [pos.checked_sub(1), Some(pos + 1)]
                .into_iter()
                .flatten()
                .filter_map(|q| order.get(q))
                .map(|&j| results[j].witness.clone())
                .collect();
            if let Some(res) = solve(ps[i], &warm)? {
                if res.value > results[i].value {
                    let keep_meta = (results[i].starts, results[i].converged || res.converged);
                    results[i] = SpectralResult { starts: keep_meta.0 + res.starts, converged: keep_meta.1, ..res };
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(results)
}
