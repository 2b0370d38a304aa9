//! Index partitions (selector/locator), r-partite tensors, the symmetrant
//! embedding, the digraph `D(A)`, weak irreducibility and components.

use std::collections::VecDeque;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::forms::require_symmetric;
use crate::tensor::Tensor;

/// A partition of `[n]` into `r` blocks with its selector and locator maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    selector: Vec<usize>,
    locator: Vec<usize>,
}

impl Partition {
    /// Partition from explicit blocks; blocks must be disjoint and cover `[n]`.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::BadOrder(blocks.len()));
        }
        let mut selector = vec![usize::MAX; n];
        let mut locator = vec![0; n];
        let mut sorted_blocks = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.into_iter().enumerate() {
            let block: Vec<usize> = block.into_iter().sorted().collect();
            for (pos, &x) in block.iter().enumerate() {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: vec![x], dims: vec![n] });
                }
                if selector[x] != usize::MAX {
                    return Err(Error::DuplicateIndex(vec![x]));
                }
                selector[x] = b;
                locator[x] = pos;
            }
            sorted_blocks.push(block);
        }
        if let Some(missing) = selector.iter().position(|&s| s == usize::MAX) {
            return Err(Error::BadParameter(format!("index {missing} not covered by the partition")));
        }
        Ok(Self { n, blocks: sorted_blocks, selector, locator })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block containing `x`.
    pub fn selector(&self, x: usize) -> usize {
        self.selector[x]
    }

    /// Position of `x` within its block.
    pub fn locator(&self, x: usize) -> usize {
        self.locator[x]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// `x|_{N_i}`: restriction of `x` to block `i`, in index order.
    pub fn restrict(&self, x: &[f64], block: usize) -> Vec<f64> {
        self.blocks[block].iter().map(|&i| x[i]).collect()
    }
}

/// Partition of `[n_1 + ... + n_r]` into consecutive intervals of sizes `dims`.
pub fn interval_partition(dims: &[usize]) -> Result<Partition> {
    if dims.len() < 2 {
        return Err(Error::BadOrder(dims.len()));
    }
    let mut start = 0;
    let blocks = dims
        .iter()
        .map(|&d| {
            let b: Vec<usize> = (start..start + d).collect();
            start += d;
            b
        })
        .collect();
    Partition::from_blocks(start, blocks)
}

/// True iff every entry with `|a| > tol` has pairwise distinct selectors.
pub fn is_r_partite(a: &Tensor, partition: &Partition, tol: f64) -> Result<bool> {
    let n = a.cubical_size()?;
    if n != partition.n() {
        return Err(Error::DimMismatch { expected: partition.n(), got: n });
    }
    let mut ok = true;
    let mut seen = vec![false; partition.r()];
    a.for_each_entry(|idx, v| {
        if !ok || v.abs() <= tol {
            return;
        }
        seen.iter_mut().for_each(|s| *s = false);
        for &i in idx {
            let b = partition.selector(i);
            if seen[b] {
                ok = false;
                return;
            }
            seen[b] = true;
        }
    });
    Ok(ok)
}

/// The symmetrant `sym(A)`: a symmetric r-partite cubical tensor of order
/// `n_1 + ... + n_r` whose nonzero blocks are the `r!` transposes of `A`.
pub fn symmetrant(a: &Tensor) -> (Tensor, Partition) {
    let partition = interval_partition(a.dims()).expect("tensor order is at least 2");
    let r = a.order();
    let n = partition.n();
    let offsets: Vec<usize> = partition.blocks().iter().map(|b| b[0]).collect();
    let mut data = vec![0.0; n.pow(r as u32)];
    let strides: Vec<usize> = (0..r).map(|k| n.pow((r - 1 - k) as u32)).collect();
    let perms: Vec<Vec<usize>> = (0..r).permutations(r).collect();
    a.for_each_nonzero(|idx, v| {
        // position s of the symmetrant index holds a member of block perm[s]
        for perm in &perms {
            let off: usize = perm.iter().zip(&strides).map(|(&blk, st)| (offsets[blk] + idx[blk]) * st).sum();
            data[off] = v;
        }
    });
    let b = Tensor::new(vec![n; r], data).expect("entries copied from a valid tensor");
    (b, partition)
}

/// Block-diagonal assembly of cubical tensors of a common order `r`.
pub fn block_diagonal(blocks: &[Tensor]) -> Result<Tensor> {
    let first = blocks.first().ok_or_else(|| Error::BadParameter("no blocks".into()))?;
    let r = first.order();
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut n = 0;
    for b in blocks {
        if b.order() != r {
            return Err(Error::DimMismatch { expected: r, got: b.order() });
        }
        offsets.push(n);
        n += b.cubical_size()?;
    }
    let mut coo = Vec::new();
    for (b, &off) in blocks.iter().zip(&offsets) {
        b.for_each_nonzero(|idx, v| coo.push((idx.iter().map(|i| i + off).collect(), v)));
    }
    Tensor::from_coo(r, vec![n; r], &coo)
}

/// Directed graph on `[n]`, stored as sorted out-neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out[from].binary_search(&to).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(k, js)| js.iter().map(move |&j| (k, j)))
    }

    fn reachable_from(&self, start: usize, reverse: bool) -> Vec<bool> {
        let adj: Vec<Vec<usize>> = if reverse {
            let mut rev = vec![Vec::new(); self.n()];
            for (k, j) in self.edges() {
                rev[j].push(k);
            }
            rev
        } else {
            self.out.clone()
        };
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Every vertex reaches every other vertex.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        self.reachable_from(0, false).iter().all(|&s| s) && self.reachable_from(0, true).iter().all(|&s| s)
    }
}

/// `D(A)`: edge `k -> j` whenever some nonzero `a_{k,i_2..i_r}` has `j` among `i_2..i_r`.
pub fn digraph(a: &Tensor) -> Result<Digraph> {
    let n = a.cubical_size()?;
    let mut out = vec![Vec::new(); n];
    a.for_each_nonzero(|idx, _| {
        for &j in &idx[1..] {
            out[idx[0]].push(j);
        }
    });
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
    }
    Ok(Digraph { out })
}

pub fn is_weakly_irreducible(a: &Tensor) -> Result<bool> {
    Ok(digraph(a)?.is_strongly_connected())
}

/// A connected component of a symmetric tensor with its principal submatrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub indices: Vec<usize>,
    pub tensor: Tensor,
    /// No nonzero entry touches these indices.
    pub is_zero: bool,
}

/// Components of a symmetric tensor, ordered by smallest index.
pub fn components(a: &Tensor) -> Result<Vec<Component>> {
    let n = require_symmetric(a)?;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut touched = vec![false; n];
    a.for_each_nonzero(|idx, _| {
        let root = find(&mut parent, idx[0]);
        touched[idx[0]] = true;
        for &j in &idx[1..] {
            touched[j] = true;
            let rj = find(&mut parent, j);
            if rj != root {
                parent[rj] = root;
            }
        }
    });
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(i),
            None => groups.push((root, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, indices)| {
            let tensor = a.principal_submatrix(&indices)?;
            let is_zero = !indices.iter().any(|&i| touched[i]);
            Ok(Component { indices, tensor, is_zero })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{linear_form, poly_form};
    use crate::random::{random_tensor, Sign};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn k2() -> Tensor {
        Tensor::new(vec![2, 2], vec![0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn two_k2() -> Tensor {
        block_diagonal(&[k2(), k2()]).unwrap()
    }

    #[test]
    fn interval_partitions() {
        let p = interval_partition(&[1, 2]).unwrap();
        assert_eq!(p.blocks(), &[vec![0], vec![1, 2]]);
        assert_eq!(p.selector(2), 1);
        assert_eq!(p.locator(2), 1);
        let p = interval_partition(&[2, 2, 2]).unwrap();
        assert_eq!(p.block_sizes(), vec![2, 2, 2]);
        assert_eq!(p.blocks()[2], vec![4, 5]);
        assert_eq!(interval_partition(&[3]), Err(Error::BadOrder(1)));
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(Partition::from_blocks(3, vec![vec![0], vec![0, 1, 2]]), Err(Error::DuplicateIndex(_))));
        assert!(matches!(Partition::from_blocks(3, vec![vec![0], vec![1]]), Err(Error::BadParameter(_))));
        let p = Partition::from_blocks(4, vec![vec![3, 0], vec![2, 1]]).unwrap();
        assert_eq!(p.locator(3), 1);
        assert_eq!(p.selector(1), 1);
    }

    #[test]
    fn r_partite_examples() {
        let p = Partition::from_blocks(2, vec![vec![0], vec![1]]).unwrap();
        let eye = Tensor::new(vec![2, 2], vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(!is_r_partite(&eye, &p, 0.0).unwrap());
        assert!(is_r_partite(&Tensor::zeros(vec![2, 2]).unwrap(), &p, 0.0).unwrap());
        assert!(is_r_partite(&k2(), &p, 0.0).unwrap());
    }

    #[test]
    fn symmetrant_of_row_vector() {
        let a = Tensor::new(vec![1, 2], vec![2.0, 3.0]).unwrap();
        let (b, p) = symmetrant(&a);
        assert_eq!(b.data(), &[0.0, 2.0, 3.0, 2.0, 0.0, 0.0, 3.0, 0.0, 0.0]);
        assert_eq!(p.block_sizes(), vec![1, 2]);
        let (b, _) = symmetrant(&Tensor::new(vec![1, 1], vec![1.0]).unwrap());
        assert_eq!(b.data(), &[0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn symmetrant_of_scalar_3_tensor() {
        let c = 2.5;
        let (b, _) = symmetrant(&Tensor::new(vec![1, 1, 1], vec![c]).unwrap());
        assert_eq!(b.dims(), &[3, 3, 3]);
        b.for_each_entry(|idx, v| {
            let is_perm = idx.iter().copied().sorted().eq(0..3);
            assert_eq!(v, if is_perm { c } else { 0.0 }, "at {idx:?}");
        });
    }

    #[test]
    fn symmetrant_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let r = 2 + trial % 2;
            let dims: Vec<usize> = (0..r).map(|_| rng.random_range(1..=4)).collect();
            let a = random_tensor(&dims, Sign::Mixed, &mut rng);
            let (b, p) = symmetrant(&a);
            assert!(b.is_symmetric(0.0).unwrap());
            assert!(is_r_partite(&b, &p, 0.0).unwrap());
            let fact: f64 = (1..=r).product::<usize>() as f64;
            assert!((b.abs_sum() - fact * a.abs_sum()).abs() <= 1e-12 * b.abs_sum());
            let x: Vec<f64> = (0..p.n()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let blocks: Vec<Vec<f64>> = (0..r).map(|i| p.restrict(&x, i)).collect();
            let lhs = poly_form(&b, &x).unwrap();
            let rhs = fact * linear_form(&a, &blocks).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn symmetric_tensors_have_axis_independent_slices() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = crate::random::random_symmetric(3, 4, Sign::Mixed, &mut rng);
        for s in 0..4 {
            let s0 = a.slice_abs_sum(0, s).unwrap();
            for k in 1..3 {
                assert!((a.slice_abs_sum(k, s).unwrap() - s0).abs() <= 1e-12 * (1.0 + s0));
            }
        }
    }

    #[test]
    fn digraph_examples() {
        let d = digraph(&k2()).unwrap();
        assert_eq!(d.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let upper = Tensor::new(vec![2, 2], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(digraph(&upper).unwrap().edges().collect::<Vec<_>>(), vec![(0, 1)]);
        let d = digraph(&two_k2()).unwrap();
        assert_eq!(d.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert!(!upper.is_cubical() || !d.has_edge(1, 2));
    }

    #[test]
    fn irreducibility() {
        assert!(is_weakly_irreducible(&k2()).unwrap());
        assert!(!is_weakly_irreducible(&two_k2()).unwrap());
        assert!(is_weakly_irreducible(&Tensor::from_fn(vec![3; 3], |_| 1.0).unwrap()).unwrap());
        let upper = Tensor::new(vec![2, 2], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(!is_weakly_irreducible(&upper).unwrap());
        assert!(matches!(is_weakly_irreducible(&Tensor::zeros(vec![2, 3]).unwrap()), Err(Error::NotCubical(_))));
    }

    #[test]
    fn component_examples() {
        let comps = components(&two_k2()).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].indices, vec![2, 3]);
        assert_eq!(comps[1].tensor, k2());
        assert_eq!(components(&k2()).unwrap().len(), 1);

        let a = Tensor::from_coo(2, vec![3, 3], &[(vec![0, 1], 1.0), (vec![1, 0], 1.0)]).unwrap();
        let comps = components(&a).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].indices, vec![0, 1]);
        assert!(!comps[0].is_zero);
        assert_eq!(comps[1].indices, vec![2]);
        assert!(comps[1].is_zero);

        let upper = Tensor::new(vec![2, 2], vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(components(&upper), Err(Error::NotSymmetric));
    }

    #[test]
    fn components_reassemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let blocks: Vec<Tensor> =
            (0..3).map(|i| crate::random::random_symmetric(3, 2 + i, Sign::Nonnegative, &mut rng)).collect();
        let a = block_diagonal(&blocks).unwrap();
        let comps = components(&a).unwrap();
        assert_eq!(comps.len(), 3);
        let covered: Vec<usize> = comps.iter().flat_map(|c| c.indices.clone()).sorted().collect();
        assert_eq!(covered, (0..a.dims()[0]).collect::<Vec<_>>());
        let rebuilt = block_diagonal(&comps.iter().map(|c| c.tensor.clone()).collect::<Vec<_>>()).unwrap();
        assert_eq!(rebuilt, a);
    }
}
