//! Linear and polynomial forms of an r-matrix and the gradient identities of
//! the polynomial form.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// One vector per axis, `x^(1), ..., x^(r)`.
pub type VectorTuple = Vec<Vec<f64>>;

/// Absolute symmetry tolerance used by operations that require a symmetric tensor.
pub fn symmetry_tol(a: &Tensor) -> f64 {
    1e-12 * a.max_abs().max(1.0)
}

pub(crate) fn require_symmetric(a: &Tensor) -> Result<usize> {
    let n = a.cubical_size()?;
    if !a.is_symmetric(symmetry_tol(a))? {
        return Err(Error::NotSymmetric);
    }
    Ok(n)
}

fn check_tuple(a: &Tensor, xs: &[Vec<f64>]) -> Result<()> {
    if xs.len() != a.order() {
        return Err(Error::DimMismatch { expected: a.order(), got: xs.len() });
    }
    for (x, &n) in xs.iter().zip(a.dims()) {
        if x.len() != n {
            return Err(Error::DimMismatch { expected: n, got: x.len() });
        }
    }
    Ok(())
}

/// `L_A(x^(1), ..., x^(r)) = Σ a_{i_1..i_r} x^(1)_{i_1} ... x^(r)_{i_r}`.
pub fn linear_form(a: &Tensor, xs: &[Vec<f64>]) -> Result<f64> {
    check_tuple(a, xs)?;
    Ok(linear_form_unchecked(a, xs))
}

pub(crate) fn linear_form_unchecked(a: &Tensor, xs: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    a.for_each_nonzero(|idx, v| {
        let mut p = v;
        for (x, &i) in xs.iter().zip(idx) {
            p *= x[i];
        }
        total += p;
    });
    total
}

/// Gradient of `L_A` with respect to block `k`:
/// `g_s = Σ_{i_k = s} a_{i_1..i_r} ∏_{j≠k} x^(j)_{i_j}`.
pub fn block_gradient(a: &Tensor, xs: &[Vec<f64>], k: usize) -> Result<Vec<f64>> {
    check_tuple(a, xs)?;
    if k >= a.order() {
        return Err(Error::IndexOutOfRange { index: vec![k], dims: a.dims().to_vec() });
    }
    Ok(block_gradient_unchecked(a, xs, k))
}

pub(crate) fn block_gradient_unchecked(a: &Tensor, xs: &[Vec<f64>], k: usize) -> Vec<f64> {
    let mut g = vec![0.0; a.dims()[k]];
    a.for_each_nonzero(|idx, v| {
        let mut p = v;
        for (j, (x, &i)) in xs.iter().zip(idx).enumerate() {
            if j != k {
                p *= x[i];
            }
        }
        g[idx[k]] += p;
    });
    g
}

/// `P_A(x) = L_A(x, ..., x)` for cubical `A`.
pub fn poly_form(a: &Tensor, x: &[f64]) -> Result<f64> {
    let n = a.cubical_size()?;
    if x.len() != n {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    Ok(poly_form_unchecked(a, x))
}

pub(crate) fn poly_form_unchecked(a: &Tensor, x: &[f64]) -> f64 {
    let mut total = 0.0;
    a.for_each_nonzero(|idx, v| {
        total += idx.iter().fold(v, |p, &i| p * x[i]);
    });
    total
}

/// `(A x^{r-1})_k = Σ a_{k,i_2..i_r} x_{i_2} ... x_{i_r}` for cubical `A`.
pub fn apply_tail(a: &Tensor, x: &[f64]) -> Result<Vec<f64>> {
    let n = a.cubical_size()?;
    if x.len() != n {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    Ok(apply_tail_unchecked(a, x))
}

pub(crate) fn apply_tail_unchecked(a: &Tensor, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.dims()[0]];
    a.for_each_nonzero(|idx, v| {
        y[idx[0]] += idx[1..].iter().fold(v, |p, &i| p * x[i]);
    });
    y
}

/// Gradient of the polynomial form of a symmetric tensor:
/// `∂P_A/∂x_k = r Σ a_{k,i_2..i_r} x_{i_2} ... x_{i_r}`.
pub fn poly_gradient(a: &Tensor, x: &[f64]) -> Result<Vec<f64>> {
    let n = require_symmetric(a)?;
    if x.len() != n {
        return Err(Error::DimMismatch { expected: n, got: x.len() });
    }
    Ok(poly_gradient_unchecked(a, x))
}

pub(crate) fn poly_gradient_unchecked(a: &Tensor, x: &[f64]) -> Vec<f64> {
    let r = a.order() as f64;
    let mut g = apply_tail_unchecked(a, x);
    g.iter_mut().for_each(|v| *v *= r);
    g
}

/// `|<∇P_A(x), x> - r P_A(x)|`, zero up to rounding by Euler's identity.
pub fn euler_residual(a: &Tensor, x: &[f64]) -> Result<f64> {
    let g = poly_gradient(a, x)?;
    let lhs: f64 = g.iter().zip(x).map(|(g, x)| g * x).sum();
    Ok((lhs - a.order() as f64 * poly_form_unchecked(a, x)).abs())
}
