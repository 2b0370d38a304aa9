//! Seeded random instance generators used by the solvers' random starts, the
//! verification suites and the tests.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::tensor::Tensor;

/// Sign pattern of generated entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// Entries uniform in `[0, 1)`.
    Nonnegative,
    /// Entries uniform in `[-1, 1)`.
    Mixed,
}

fn draw<R: Rng + ?Sized>(sign: Sign, rng: &mut R) -> f64 {
    match sign {
        Sign::Nonnegative => rng.random::<f64>(),
        Sign::Mixed => rng.random_range(-1.0..1.0),
    }
}

/// Dense random tensor with the given dims.
pub fn random_tensor<R: Rng + ?Sized>(dims: &[usize], sign: Sign, rng: &mut R) -> Tensor {
    Tensor::from_fn(dims.to_vec(), |_| draw(sign, rng)).expect("dims validated by caller")
}

/// Random tensor where each entry is nonzero with probability `density`.
pub fn random_sparse_tensor<R: Rng + ?Sized>(dims: &[usize], density: f64, sign: Sign, rng: &mut R) -> Tensor {
    Tensor::from_fn(dims.to_vec(), |_| if rng.random::<f64>() < density { draw(sign, rng) } else { 0.0 })
        .expect("dims validated by caller")
}

/// Dense random symmetric cubical tensor of order `n`.
pub fn random_symmetric<R: Rng + ?Sized>(r: usize, n: usize, sign: Sign, rng: &mut R) -> Tensor {
    random_sparse_symmetric(r, n, 1.0, sign, rng)
}

/// Random symmetric tensor; each orbit of index tuples is nonzero with probability `density`.
pub fn random_sparse_symmetric<R: Rng + ?Sized>(r: usize, n: usize, density: f64, sign: Sign, rng: &mut R) -> Tensor {
    let mut orbit: HashMap<Vec<usize>, f64> = HashMap::new();
    Tensor::from_fn(vec![n; r], |idx| {
        let mut key = idx.to_vec();
        key.sort_unstable();
        *orbit.entry(key).or_insert_with(|| if rng.random::<f64>() < density { draw(sign, rng) } else { 0.0 })
    })
    .expect("dims validated by caller")
}

/// Standard normal vector of length `n`.
pub fn normal_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}
