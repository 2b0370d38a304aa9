//! Dense real r-matrices (hypermatrices).
//!
//! Storage is row-major with the last axis varying fastest. All indices are
//! 0-based. A [`Tensor`] is immutable after construction; slices and fibers
//! are borrowed read-only views.

use std::collections::HashSet;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Dense r-matrix of order `n_1 x ... x n_r` with real entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    dims: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<f64>,
}

fn row_major_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    strides
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.len() < 2 {
        return Err(Error::BadOrder(dims.len()));
    }
    if dims.contains(&0) {
        return Err(Error::BadParameter(format!("dims must be positive, got {dims:?}")));
    }
    Ok(())
}

/// Calls `f` on every multi-index of the box `dims`, in row-major order.
pub(crate) fn for_each_multi_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.contains(&0) {
        return;
    }
    let r = dims.len();
    let mut idx = vec![0usize; r];
    loop {
        f(&idx);
        let mut ax = r;
        loop {
            if ax == 0 {
                return;
            }
            ax -= 1;
            idx[ax] += 1;
            if idx[ax] < dims[ax] {
                break;
            }
            idx[ax] = 0;
        }
    }
}

/// Iterator over the offsets of a sub-box of a row-major array.
#[derive(Debug, Clone)]
struct StridedOffsets {
    base: usize,
    dims: Vec<usize>,
    strides: Vec<usize>,
    idx: Vec<usize>,
    done: bool,
}

impl StridedOffsets {
    fn new(base: usize, dims: Vec<usize>, strides: Vec<usize>) -> Self {
        let done = dims.contains(&0);
        let idx = vec![0; dims.len()];
        Self { base, dims, strides, idx, done }
    }
}

impl Iterator for StridedOffsets {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.done {
            return None;
        }
        let off = self.base + self.idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum::<usize>();
        let mut ax = self.dims.len();
        loop {
            if ax == 0 {
                self.done = true;
                break;
            }
            ax -= 1;
            self.idx[ax] += 1;
            if self.idx[ax] < self.dims[ax] {
                break;
            }
            self.idx[ax] = 0;
        }
        Some(off)
    }
}

impl Tensor {
    /// Builds a tensor from row-major data.
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        check_dims(&dims)?;
        let expected: usize = dims.iter().product();
        if data.len() != expected {
            return Err(Error::DimMismatch { expected, got: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let strides = row_major_strides(&dims);
        Ok(Self { dims, strides, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![0.0; len])
    }

    /// Builds a tensor whose entry at `idx` is `f(idx)`.
    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        check_dims(&dims)?;
        let mut data = Vec::with_capacity(dims.iter().product());
        for_each_multi_index(&dims, |idx| data.push(f(idx)));
        Self::new(dims, data)
    }

    /// Dense tensor from coordinate triples; unlisted entries are zero.
    pub fn from_coo(order: usize, dims: Vec<usize>, coo: &[(Vec<usize>, f64)]) -> Result<Self> {
        if order < 2 {
            return Err(Error::BadOrder(order));
        }
        if dims.len() != order {
            return Err(Error::DimMismatch { expected: order, got: dims.len() });
        }
        let mut t = Self::zeros(dims)?;
        let mut seen = HashSet::with_capacity(coo.len());
        for (idx, val) in coo {
            let off = t.offset(idx)?;
            if !seen.insert(off) {
                return Err(Error::DuplicateIndex(idx.clone()));
            }
            if !val.is_finite() {
                return Err(Error::NonFinite);
            }
            t.data[off] = *val;
        }
        Ok(t)
    }

    /// The rank-one tensor `x^(1) ⊗ ... ⊗ x^(r)`.
    pub fn rank_one(vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::BadOrder(vectors.len()));
        }
        let dims: Vec<usize> = vectors.iter().map(Vec::len).collect();
        Self::from_fn(dims, |idx| idx.iter().zip(vectors).map(|(&i, v)| v[i]).product())
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_cubical(&self) -> bool {
        self.dims.iter().all_equal()
    }

    /// Common dimension `n` of a cubical tensor.
    pub fn cubical_size(&self) -> Result<usize> {
        if self.is_cubical() {
            Ok(self.dims[0])
        } else {
            Err(Error::NotCubical(self.dims.clone()))
        }
    }

    pub fn offset(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dims.len() || idx.iter().zip(&self.dims).any(|(i, n)| i >= n) {
            return Err(Error::IndexOutOfRange { index: idx.to_vec(), dims: self.dims.clone() });
        }
        Ok(self.offset_unchecked(idx))
    }

    #[inline]
    pub(crate) fn offset_unchecked(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.data[self.offset(idx)?])
    }

    /// Visits `(index, value)` for every entry in storage order.
    pub fn for_each_entry(&self, mut f: impl FnMut(&[usize], f64)) {
        let mut k = 0;
        for_each_multi_index(&self.dims, |idx| {
            f(idx, self.data[k]);
            k += 1;
        });
    }

    /// Visits only the entries that are not exactly zero.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(&[usize], f64)) {
        self.for_each_entry(|idx, v| {
            if v != 0.0 {
                f(idx, v)
            }
        });
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.dims.clone(), self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { dims: self.dims.clone(), strides: self.strides.clone(), data: self.data.iter().map(|v| -v).collect() }
    }

    pub fn abs(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            strides: self.strides.clone(),
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&v| v >= 0.0)
    }

    /// `|A|_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `ΣA`, the plain sum of entries.
    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// `|A|_1`.
    pub fn abs_sum(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    /// Entrywise `l^q` norm; `q = f64::INFINITY` gives `|A|_max`.
    pub fn entrywise_norm(&self, q: f64) -> Result<f64> {
        lq_norm(self.data.iter().copied(), q)
    }

    /// Transpose by an axis permutation: `b[i_{perm[0]}, ..., i_{perm[r-1]}] = a[i_0, ..., i_{r-1}]`.
    pub fn transpose(&self, perm: &[usize]) -> Result<Self> {
        let r = self.order();
        if perm.len() != r || !perm.iter().copied().sorted().eq(0..r) {
            return Err(Error::BadPermutation(perm.to_vec()));
        }
        let dims: Vec<usize> = perm.iter().map(|&k| self.dims[k]).collect();
        let strides = row_major_strides(&dims);
        let mut data = vec![0.0; self.data.len()];
        let mut k = 0;
        for_each_multi_index(&self.dims, |idx| {
            let off: usize = perm.iter().zip(&strides).map(|(&p, s)| idx[p] * s).sum();
            data[off] = self.data[k];
            k += 1;
        });
        Ok(Self { dims, strides, data })
    }

    /// True iff every transpose agrees with `self` entrywise within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> Result<bool> {
        self.cubical_size()?;
        let r = self.order();
        let mut permuted = vec![0usize; r];
        for perm in (0..r).permutations(r).skip(1) {
            let mut ok = true;
            let mut k = 0;
            for_each_multi_index(&self.dims, |idx| {
                if ok {
                    for (t, &p) in perm.iter().enumerate() {
                        permuted[t] = idx[p];
                    }
                    if (self.data[k] - self.data[self.offset_unchecked(&permuted)]).abs() > tol {
                        ok = false;
                    }
                }
                k += 1;
            });
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The slice `A_s^(k)` obtained by fixing axis `k` to `s`.
    pub fn slice(&self, axis: usize, pos: usize) -> Result<SliceRef<'_>> {
        self.check_axis_pos(axis, pos)?;
        Ok(SliceRef { tensor: self, axis, pos })
    }

    /// The fiber along `axis` through `index` (the value of `index[axis]` is ignored).
    pub fn fiber(&self, axis: usize, index: &[usize]) -> Result<FiberRef<'_>> {
        if axis >= self.order() {
            return Err(Error::IndexOutOfRange { index: vec![axis], dims: self.dims.clone() });
        }
        let mut base = index.to_vec();
        if base.len() != self.order() {
            return Err(Error::IndexOutOfRange { index: index.to_vec(), dims: self.dims.clone() });
        }
        base[axis] = 0;
        self.offset(&base)?;
        Ok(FiberRef { tensor: self, axis, base })
    }

    /// `|A_s^(k)|_1`.
    pub fn slice_abs_sum(&self, axis: usize, pos: usize) -> Result<f64> {
        Ok(self.slice(axis, pos)?.abs_sum())
    }

    /// `ΣA_s^(k)`.
    pub fn slice_sum(&self, axis: usize, pos: usize) -> Result<f64> {
        Ok(self.slice(axis, pos)?.sum())
    }

    /// All slice sums along `axis` in one pass.
    pub fn slice_sums(&self, axis: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[axis]];
        self.for_each_entry(|idx, v| out[idx[axis]] += v);
        out
    }

    /// All slice absolute sums along `axis` in one pass.
    pub fn slice_abs_sums(&self, axis: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[axis]];
        self.for_each_entry(|idx, v| out[idx[axis]] += v.abs());
        out
    }

    /// True iff along every axis all slice sums agree within `tol` (relative to
    /// `max(1, max |slice sum|)`).
    pub fn is_regular(&self, tol: f64) -> bool {
        (0..self.order()).all(|k| {
            let sums = self.slice_sums(k);
            let (lo, hi) = sums.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)));
            let scale = sums.iter().fold(1.0_f64, |m, s| m.max(s.abs()));
            hi - lo <= tol * scale
        })
    }

    /// Principal submatrix `A[X]` of a cubical tensor.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Result<Self> {
        let n = self.cubical_size()?;
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: vec![bad], dims: self.dims.clone() });
        }
        let r = self.order();
        let mut full = vec![0usize; r];
        Self::from_fn(vec![indices.len(); r], |idx| {
            for (f, &i) in full.iter_mut().zip(idx) {
                *f = indices[i];
            }
            self.data[self.offset_unchecked(&full)]
        })
    }

    fn check_axis_pos(&self, axis: usize, pos: usize) -> Result<()> {
        if axis >= self.order() || pos >= self.dims[axis] {
            return Err(Error::IndexOutOfRange { index: vec![axis, pos], dims: self.dims.clone() });
        }
        Ok(())
    }
}

pub(crate) fn lq_norm(values: impl Iterator<Item = f64> + Clone, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::BadExponent(q));
    }
    let m = values.clone().fold(0.0_f64, |m, v| m.max(v.abs()));
    if q == f64::INFINITY || m == 0.0 {
        return Ok(m);
    }
    if q == 1.0 {
        return Ok(values.map(f64::abs).sum());
    }
    let s: f64 = values.map(|v| (v.abs() / m).powf(q)).sum();
    Ok(m * s.powf(1.0 / q))
}

/// Read-only view of the slice `A_s^(k)`.
#[derive(Debug, Clone, Copy)]
pub struct SliceRef<'a> {
    tensor: &'a Tensor,
    axis: usize,
    pos: usize,
}

impl<'a> SliceRef<'a> {
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    /// Number of entries, `∏_{j≠k} n_j`.
    pub fn len(&self) -> usize {
        self.tensor.len() / self.tensor.dims[self.axis]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + Clone + 'a {
        let t = self.tensor;
        let (dims, strides): (Vec<usize>, Vec<usize>) = t
            .dims
            .iter()
            .zip(&t.strides)
            .enumerate()
            .filter(|&(j, _)| j != self.axis)
            .map(|(_, (&d, &s))| (d, s))
            .unzip();
        StridedOffsets::new(self.pos * t.strides[self.axis], dims, strides).map(move |o| t.data[o])
    }

    pub fn sum(&self) -> f64 {
        self.values().sum()
    }

    pub fn abs_sum(&self) -> f64 {
        self.values().map(f64::abs).sum()
    }

    pub fn entrywise_norm(&self, q: f64) -> Result<f64> {
        lq_norm(self.values(), q)
    }
}

/// Read-only view of a fiber: all indices fixed except `axis`.
#[derive(Debug, Clone)]
pub struct FiberRef<'a> {
    tensor: &'a Tensor,
    axis: usize,
    base: Vec<usize>,
}

impl<'a> FiberRef<'a> {
    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.tensor.dims[self.axis]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + Clone + 'a {
        let t = self.tensor;
        let base = t.offset_unchecked(&self.base);
        let stride = t.strides[self.axis];
        (0..t.dims[self.axis]).map(move |i| t.data[base + i * stride])
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.values().collect()
    }

    pub fn entrywise_norm(&self, q: f64) -> Result<f64> {
        lq_norm(self.values(), q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn k2() -> Tensor {
        Tensor::from_coo(2, vec![2, 2], &[(vec![0, 1], 1.0), (vec![1, 0], 1.0)]).unwrap()
    }

    fn star(n: usize) -> Tensor {
        let mut coo = Vec::new();
        for leaf in 1..=n {
            coo.push((vec![0, leaf], 1.0));
            coo.push((vec![leaf, 0], 1.0));
        }
        Tensor::from_coo(2, vec![n + 1, n + 1], &coo).unwrap()
    }

    fn ones(r: usize, n: usize) -> Tensor {
        Tensor::from_fn(vec![n; r], |_| 1.0).unwrap()
    }

    #[test]
    fn from_coo_builds_dense() {
        let a = k2();
        assert_eq!(a.data(), &[0.0, 1.0, 1.0, 0.0]);
        let all: Vec<_> = (0..8).map(|k| (vec![k >> 2 & 1, k >> 1 & 1, k & 1], 1.0)).collect();
        assert_eq!(Tensor::from_coo(3, vec![2, 2, 2], &all).unwrap(), ones(3, 2));
    }

    #[test]
    fn from_coo_errors() {
        let dup = [(vec![0, 0], 1.0), (vec![0, 0], 1.0)];
        assert_eq!(Tensor::from_coo(2, vec![2, 2], &dup), Err(Error::DuplicateIndex(vec![0, 0])));
        assert!(matches!(Tensor::from_coo(2, vec![2, 2], &[(vec![2, 0], 1.0)]), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(Tensor::from_coo(1, vec![2], &[]), Err(Error::BadOrder(1)));
    }

    #[test]
    fn transpose_examples() {
        let a = Tensor::new(vec![2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(a.transpose(&[1, 0]).unwrap().data(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(a.transpose(&[0, 1]).unwrap(), a);
        let j = ones(3, 2);
        assert_eq!(j.transpose(&[2, 0, 1]).unwrap(), j);
        assert_eq!(a.transpose(&[0, 0]), Err(Error::BadPermutation(vec![0, 0])));
    }

    #[test]
    fn transpose_moves_dims() {
        let a = Tensor::from_fn(vec![2, 3, 4], |i| (i[0] * 100 + i[1] * 10 + i[2]) as f64).unwrap();
        let b = a.transpose(&[2, 0, 1]).unwrap();
        assert_eq!(b.dims(), &[4, 2, 3]);
        assert_eq!(b.get(&[3, 1, 2]).unwrap(), a.get(&[1, 2, 3]).unwrap());
    }

    #[test]
    fn symmetry_checks() {
        assert!(k2().is_symmetric(0.0).unwrap());
        let upper = Tensor::new(vec![2, 2], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!upper.is_symmetric(0.0).unwrap());
        assert!(ones(3, 3).is_symmetric(0.0).unwrap());
        let rect = Tensor::zeros(vec![2, 3]).unwrap();
        assert!(matches!(rect.is_symmetric(0.0), Err(Error::NotCubical(_))));
    }

    #[test]
    fn slice_sums() {
        let s = star(4);
        assert_eq!(s.slice_abs_sum(0, 0).unwrap(), 4.0);
        assert_eq!(s.slice_sum(0, 1).unwrap(), 1.0);
        assert_eq!(Tensor::zeros(vec![3, 3, 3]).unwrap().slice_abs_sum(2, 1).unwrap(), 0.0);
        assert_eq!(ones(3, 2).slice_sum(1, 0).unwrap(), 4.0);
        let m = Tensor::new(vec![2, 2], vec![1.0, -1.0, 0.0, 0.0]).unwrap();
        assert_eq!(m.slice_sum(0, 0).unwrap(), 0.0);
        assert_eq!(m.slice_abs_sum(0, 0).unwrap(), 2.0);
        assert!(matches!(s.slice_sum(2, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(s.slice_sum(0, 5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn slice_view_visits_all_entries() {
        let a = Tensor::from_fn(vec![2, 3, 4], |i| (i[0] + 2 * i[1] + 7 * i[2]) as f64).unwrap();
        let s = a.slice(1, 2).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.values().count(), 8);
        let direct: f64 = (0..2).flat_map(|i| (0..4).map(move |k| (i + 4 + 7 * k) as f64)).sum();
        assert_eq!(s.sum(), direct);
    }

    #[test]
    fn fiber_view() {
        let a = Tensor::from_fn(vec![2, 3], |i| (i[0] * 3 + i[1]) as f64).unwrap();
        assert_eq!(a.fiber(1, &[1, 0]).unwrap().to_vec(), vec![3.0, 4.0, 5.0]);
        assert_eq!(a.fiber(0, &[0, 2]).unwrap().to_vec(), vec![2.0, 5.0]);
    }

    #[test]
    fn entrywise_norms() {
        assert_relative_eq!(ones(3, 2).entrywise_norm(1.5).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(star(4).entrywise_norm(2.0).unwrap(), 8f64.sqrt(), max_relative = 1e-14);
        let m = Tensor::new(vec![2, 2], vec![1.0, -7.0, 3.0, 0.5]).unwrap();
        assert_eq!(m.entrywise_norm(f64::INFINITY).unwrap(), 7.0);
        assert_eq!(m.entrywise_norm(0.5), Err(Error::BadExponent(0.5)));
    }

    #[test]
    fn regularity() {
        assert!(ones(3, 4).is_regular(1e-12));
        assert!(Tensor::from_fn(vec![2, 5], |_| 1.0).unwrap().is_regular(1e-12));
        assert!(!star(4).is_regular(1e-12));
        let mut coo = Vec::new();
        for i in 0..4 {
            coo.push((vec![i, (i + 1) % 4], 1.0));
            coo.push((vec![(i + 1) % 4, i], 1.0));
        }
        assert!(Tensor::from_coo(2, vec![4, 4], &coo).unwrap().is_regular(1e-12));
    }

    #[test]
    fn rank_one_examples() {
        assert_eq!(Tensor::rank_one(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap(), ones(2, 2));
        let e = Tensor::rank_one(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(e.data(), &[0.0, 1.0, 0.0, 0.0]);
        let t = Tensor::rank_one(&[vec![1.0, 2.0], vec![1.0, 1.0], vec![3.0]]).unwrap();
        assert_eq!(t.dims(), &[2, 2, 1]);
        assert_eq!(t.data(), &[3.0, 3.0, 6.0, 6.0]);
        assert_eq!(Tensor::rank_one(&[vec![1.0]]), Err(Error::BadOrder(1)));
    }

    fn arb_tensor() -> impl Strategy<Value = Tensor> {
        (2usize..=4)
            .prop_flat_map(|r| prop::collection::vec(1usize..=3, r))
            .prop_flat_map(|dims| {
                let len: usize = dims.iter().product();
                (Just(dims), prop::collection::vec(-5.0f64..5.0, len))
            })
            .prop_map(|(dims, data)| Tensor::new(dims, data).unwrap())
    }

    proptest! {
        #[test]
        fn transpose_roundtrip(a in arb_tensor(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..a.order()).collect();
            perm.shuffle(&mut rng);
            let mut inv = vec![0; perm.len()];
            for (t, &p) in perm.iter().enumerate() {
                inv[p] = t;
            }
            prop_assert_eq!(a.transpose(&perm).unwrap().transpose(&inv).unwrap(), a);
        }

        #[test]
        fn slice_abs_sum_is_slice_l1(a in arb_tensor()) {
            for k in 0..a.order() {
                for s in 0..a.dims()[k] {
                    let view = a.slice(k, s).unwrap().entrywise_norm(1.0).unwrap();
                    prop_assert!((a.slice_abs_sum(k, s).unwrap() - view).abs() <= 1e-12 * (1.0 + view));
                }
            }
        }

        #[test]
        fn entrywise_norm_decreases_in_q(a in arb_tensor(), q1 in 1.0f64..6.0, dq in 0.0f64..6.0) {
            let lo = a.entrywise_norm(q1 + dq).unwrap();
            let hi = a.entrywise_norm(q1).unwrap();
            prop_assert!(lo <= hi * (1.0 + 1e-12));
            prop_assert!(a.entrywise_norm(f64::INFINITY).unwrap() <= lo * (1.0 + 1e-12));
        }
    }
}
