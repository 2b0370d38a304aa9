//! Weighted uniform hypergraphs, their adjacency tensors, generators and
//! degree-based spectral bounds.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{eta_p, lp_norm, SolverOptions};
use crate::structure::Partition;
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    /// Strictly increasing vertex indices.
    pub verts: Vec<usize>,
    pub weight: f64,
}

/// An r-uniform hypergraph on `[n]` with positive edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRGraph {
    r: usize,
    n: usize,
    edges: Vec<Edge>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl WeightedRGraph {
    /// Validates and normalizes (sorts) the edges; edge order is kept.
    pub fn new(r: usize, n: usize, edges: Vec<Edge>) -> Result<Self> {
        if r < 2 {
            return Err(Error::BadOrder(r));
        }
        if n == 0 {
            return Err(Error::BadParameter("a graph needs at least one vertex".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.verts.sort_unstable();
            if e.verts.len() != r {
                return Err(Error::BadParameter(format!("edge {:?} does not have {r} vertices", e.verts)));
            }
            if let Some(&v) = e.verts.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if e.verts.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadParameter(format!("edge {:?} repeats a vertex", e.verts)));
            }
            if !(e.weight.is_finite() && e.weight > 0.0) {
                return Err(Error::BadParameter(format!("edge {:?} has weight {}", e.verts, e.weight)));
            }
            if !seen.insert(e.verts.clone()) {
                return Err(Error::DuplicateIndex(e.verts));
            }
            out.push(e);
        }
        Ok(Self { r, n, edges: out })
    }

    /// Unit-weight graph from vertex lists.
    pub fn unweighted(r: usize, n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        Self::new(r, n, edges.into_iter().map(|verts| Edge { verts, weight: 1.0 }).collect())
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sum of the weights of edges containing `v`.
    pub fn degree(&self, v: usize) -> Result<f64> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.edges.iter().filter(|e| e.verts.contains(&v)).map(|e| e.weight).sum())
    }

    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            for &v in &e.verts {
                d[v] += e.weight;
            }
        }
        d
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Symmetric tensor with `a_{i_1..i_r} = G({i_1, ..., i_r})` on every ordering of every edge.
    pub fn adjacency_tensor(&self) -> Tensor {
        let mut coo = Vec::with_capacity(self.edges.len() * factorial(self.r) as usize);
        for e in &self.edges {
            for perm in e.verts.iter().copied().permutations(self.r) {
                coo.push((perm, e.weight));
            }
        }
        Tensor::from_coo(self.r, vec![self.n; self.r], &coo).expect("validated edges")
    }

    fn require_partite(&self, partition: &Partition) -> Result<()> {
        if partition.n() != self.n {
            return Err(Error::DimMismatch { expected: self.n, got: partition.n() });
        }
        if partition.r() != self.r {
            return Err(Error::NotPartite);
        }
        for e in &self.edges {
            let blocks: Vec<usize> = e.verts.iter().map(|&v| partition.selector(v)).sorted().collect();
            if blocks.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NotPartite);
            }
        }
        Ok(())
    }
}

/// The star `K_{1,n}` with center 0.
pub fn gen_star(n: usize) -> Result<WeightedRGraph> {
    if n == 0 {
        return Err(Error::BadParameter("star needs at least one leaf".into()));
    }
    WeightedRGraph::unweighted(2, n + 1, (1..=n).map(|j| vec![0, j]))
}

/// The β-star with `k` edges of size `r` sharing only vertex 0.
pub fn gen_beta_star(r: usize, k: usize) -> Result<WeightedRGraph> {
    if r < 2 {
        return Err(Error::BadOrder(r));
    }
    if k == 0 {
        return Err(Error::BadParameter("beta-star needs at least one edge".into()));
    }
    let n = 1 + k * (r - 1);
    WeightedRGraph::unweighted(
        r,
        n,
        (0..k).map(|e| std::iter::once(0).chain(1 + e * (r - 1)..1 + (e + 1) * (r - 1)).collect()),
    )
}

/// The all-ones cubical tensor of order `n` (not a graph: it has diagonal entries).
pub fn gen_all_ones(r: usize, n: usize) -> Result<Tensor> {
    Tensor::from_fn(vec![n; r], |_| 1.0)
}

/// The cycle `C_n`.
pub fn gen_cycle(n: usize) -> Result<WeightedRGraph> {
    if n < 3 {
        return Err(Error::BadParameter(format!("cycle needs at least 3 vertices, got {n}")));
    }
    WeightedRGraph::unweighted(2, n, (0..n).map(|i| vec![i, (i + 1) % n]))
}

/// Each r-subset of `[n]` is an edge with probability `density`; weights are
/// uniform in `(0, 1]` when `weighted`, else 1.
pub fn gen_random(r: usize, n: usize, density: f64, seed: u64, weighted: bool) -> Result<WeightedRGraph> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::BadParameter(format!("density must be in [0, 1], got {density}")));
    }
    if r < 2 {
        return Err(Error::BadOrder(r));
    }
    if n < r {
        return Err(Error::BadParameter(format!("need at least {r} vertices, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for verts in (0..n).combinations(r) {
        if rng.random::<f64>() < density {
            let weight = if weighted { 1.0 - rng.random::<f64>() } else { 1.0 };
            edges.push(Edge { verts, weight });
        }
    }
    WeightedRGraph::new(r, n, edges)
}

/// `((r-1)!^r max_{e} ∏_{v∈e} d_v)^{1/r}`, an upper bound for `ρ(G)`.
pub fn bound_degree_product(g: &WeightedRGraph) -> f64 {
    let d = g.degrees();
    let best = g.edges.iter().map(|e| e.verts.iter().map(|&v| d[v]).product::<f64>()).fold(0.0, f64::max);
    (factorial(g.r - 1).powi(g.r as i32) * best).powf(1.0 / g.r as f64)
}

/// `((r-1)!^r max_k Σ_{e∋k} G(e) ∏_{v∈e, v≠k} d_v)^{1/r}`, an upper bound for `ρ(G)`.
pub fn bound_neighbor_degree(g: &WeightedRGraph) -> f64 {
    let d = g.degrees();
    let mut sums = vec![0.0; g.n];
    for e in &g.edges {
        for &k in &e.verts {
            sums[k] += e.weight * e.verts.iter().filter(|&&v| v != k).map(|&v| d[v]).product::<f64>();
        }
    }
    let best = sums.into_iter().fold(0.0, f64::max);
    (factorial(g.r - 1).powi(g.r as i32) * best).powf(1.0 / g.r as f64)
}

/// `(r-1)! (n^{-(r-1)/(p-1)} Σ d_i^{p/(p-1)})^{(p-1)/p}`, a lower bound for `η^(p)(G)`, `p >= r`.
pub fn lower_hofmeister(g: &WeightedRGraph, p: f64) -> Result<f64> {
    let r = g.r as f64;
    if !(p.is_finite() && p >= r) {
        return Err(Error::BadExponent(p));
    }
    let q = p / (p - 1.0);
    let n = g.n as f64;
    let s = n.powf(-(r - 1.0) / (p - 1.0)) * g.degrees().iter().map(|d| d.powf(q)).sum::<f64>();
    Ok(factorial(g.r - 1) * s.powf(1.0 / q))
}

/// `(r!/r^{r/p}) (n_1 ... n_r)^{-1/p} Σ_e G(e)` for an r-partite `G`.
pub fn partite_lower(g: &WeightedRGraph, partition: &Partition, p: f64) -> Result<f64> {
    crate::spectral::check_exponent(p)?;
    g.require_partite(partition)?;
    let r = g.r as f64;
    let sizes: f64 = partition.block_sizes().iter().map(|&s| s as f64).product();
    Ok(factorial(g.r) / r.powf(r / p) * sizes.powf(-1.0 / p) * g.total_weight())
}

/// `max_i | |x|_{N_i}|_p - r^{-1/p} |` at the computed `η^(p)` maximizer `x`.
pub fn partite_balance_check(g: &WeightedRGraph, partition: &Partition, p: f64, opts: &SolverOptions) -> Result<f64> {
    g.require_partite(partition)?;
    let res = eta_p(&g.adjacency_tensor(), p, opts)?;
    let x = res.vector().expect("eta returns a vector witness");
    let target = (g.r as f64).powf(-1.0 / p);
    Ok((0..g.r).map(|i| (lp_norm(&partition.restrict(x, i), p) - target).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{upper_main, upper_th3};
    use crate::spectral::rho_nonnegative;
    use approx::assert_relative_eq;

    #[test]
    fn construction_errors() {
        assert!(matches!(WeightedRGraph::unweighted(2, 3, [vec![0, 0]]), Err(Error::BadParameter(_))));
        assert_eq!(WeightedRGraph::unweighted(2, 3, [vec![0, 3]]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
        assert!(matches!(WeightedRGraph::unweighted(2, 3, [vec![0, 1], vec![1, 0]]), Err(Error::DuplicateIndex(_))));
        assert!(WeightedRGraph::new(2, 3, vec![Edge { verts: vec![0, 1], weight: 0.0 }]).is_err());
        assert!(matches!(WeightedRGraph::unweighted(3, 3, [vec![0, 1]]), Err(Error::BadParameter(_))));
    }

    #[test]
    fn adjacency_examples() {
        let k2 = WeightedRGraph::unweighted(2, 2, [vec![0, 1]]).unwrap();
        assert_eq!(k2.adjacency_tensor().data(), &[0.0, 1.0, 1.0, 0.0]);
        let e3 = WeightedRGraph::unweighted(3, 3, [vec![0, 1, 2]]).unwrap().adjacency_tensor();
        assert_eq!(e3.abs_sum(), 6.0);
        assert!(e3.is_symmetric(0.0).unwrap());
        let s = gen_star(4).unwrap().adjacency_tensor();
        assert_eq!(s.slice_sums(0), vec![4.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(gen_beta_star(3, 3).unwrap().adjacency_tensor().is_symmetric(0.0).unwrap());
    }

    #[test]
    fn degrees_and_generators() {
        let s = gen_star(4).unwrap();
        assert_eq!((s.n(), s.edges().len()), (5, 4));
        assert_eq!(s.degree(0).unwrap(), 4.0);
        assert_eq!(s.degree(3).unwrap(), 1.0);
        assert!(s.degree(5).is_err());
        let b = gen_beta_star(3, 2).unwrap();
        assert_eq!(b.n(), 5);
        assert_eq!(b.edges().iter().map(|e| e.verts.clone()).collect::<Vec<_>>(), vec![vec![0, 1, 2], vec![0, 3, 4]]);
        assert_eq!(b.degree(0).unwrap(), 2.0);
        assert_eq!(b.degree(4).unwrap(), 1.0);
        let iso = WeightedRGraph::unweighted(2, 3, [vec![0, 1]]).unwrap();
        assert_eq!(iso.degree(2).unwrap(), 0.0);
        assert_eq!(gen_random(2, 4, 1.0, 9, false).unwrap().edges().len(), 6);
        assert_eq!(gen_random(3, 5, 0.5, 4, true).unwrap(), gen_random(3, 5, 0.5, 4, true).unwrap());
        assert!(gen_cycle(2).is_err());
        assert!(gen_random(2, 4, 1.5, 0, false).is_err());
    }

    #[test]
    fn slice_identity() {
        for g in [
            gen_beta_star(3, 3).unwrap(),
            gen_random(3, 6, 0.4, 2, true).unwrap(),
            gen_random(4, 6, 0.3, 5, false).unwrap(),
        ] {
            let a = g.adjacency_tensor();
            let f = factorial(g.r() - 1);
            for k in 0..g.r() {
                for (v, s) in a.slice_abs_sums(k).into_iter().enumerate() {
                    assert_relative_eq!(s, f * g.degree(v).unwrap(), max_relative = 1e-14);
                }
            }
        }
    }

    #[test]
    fn graph_bounds_match_tensor_bounds() {
        for g in [
            gen_star(4).unwrap(),
            gen_beta_star(3, 4).unwrap(),
            gen_random(3, 6, 0.5, 3, true).unwrap(),
            gen_cycle(5).unwrap(),
        ] {
            let a = g.adjacency_tensor();
            assert_relative_eq!(bound_degree_product(&g), upper_main(&a), max_relative = 1e-12);
            assert_relative_eq!(bound_neighbor_degree(&g), upper_th3(&a), max_relative = 1e-12);
        }
    }

    #[test]
    fn bound_examples() {
        let s = gen_star(4).unwrap();
        assert_relative_eq!(bound_degree_product(&s), 2.0, max_relative = 1e-14);
        assert_relative_eq!(bound_neighbor_degree(&s), 2.0, max_relative = 1e-14);
        assert_relative_eq!(lower_hofmeister(&s, 2.0).unwrap(), 2.0, max_relative = 1e-14);
        for k in 1..=5 {
            let b = gen_beta_star(3, k).unwrap();
            assert_relative_eq!(bound_degree_product(&b), 2.0 * (k as f64).cbrt(), max_relative = 1e-14);
        }
        let c4 = gen_cycle(4).unwrap();
        assert_relative_eq!(bound_degree_product(&c4), 2.0, max_relative = 1e-14);
        assert_relative_eq!(bound_neighbor_degree(&c4), 2.0, max_relative = 1e-14);
        assert_relative_eq!(lower_hofmeister(&c4, 2.0).unwrap(), 2.0, max_relative = 1e-14);
        let k2 = WeightedRGraph::unweighted(2, 2, [vec![0, 1]]).unwrap();
        assert_relative_eq!(lower_hofmeister(&k2, 2.0).unwrap(), 1.0, max_relative = 1e-14);
        for r in 2..=4 {
            let e = WeightedRGraph::unweighted(r, r, [(0..r).collect()]).unwrap();
            assert_relative_eq!(bound_neighbor_degree(&e), factorial(r - 1), max_relative = 1e-14);
        }
        assert!(lower_hofmeister(&gen_beta_star(3, 2).unwrap(), 2.0).is_err());
    }

    #[test]
    fn hofmeister_is_a_lower_bound_beyond_r() {
        let c4 = gen_cycle(4).unwrap();
        let eta = eta_p(&c4.adjacency_tensor(), 4.0, &SolverOptions::default()).unwrap().value;
        assert!(lower_hofmeister(&c4, 4.0).unwrap() <= eta + 1e-9);
    }

    #[test]
    fn partite_examples() {
        for n in [2, 4, 9] {
            let s = gen_star(n).unwrap();
            let part = Partition::from_blocks(n + 1, vec![vec![0], (1..=n).collect()]).unwrap();
            assert_relative_eq!(partite_lower(&s, &part, 2.0).unwrap(), (n as f64).sqrt(), max_relative = 1e-14);
        }
        for r in 2..=4 {
            let e = WeightedRGraph::unweighted(r, r, [(0..r).collect()]).unwrap();
            let part = Partition::from_blocks(r, (0..r).map(|i| vec![i]).collect()).unwrap();
            assert_relative_eq!(partite_lower(&e, &part, r as f64).unwrap(), factorial(r - 1), max_relative = 1e-14);
        }
        let c4 = gen_cycle(4).unwrap();
        let part = Partition::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert_relative_eq!(partite_lower(&c4, &part, 2.0).unwrap(), 2.0, max_relative = 1e-14);
        let bad = Partition::from_blocks(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(partite_lower(&c4, &bad, 2.0), Err(Error::NotPartite));
    }

    #[test]
    fn balance_examples() {
        let opts = SolverOptions::default();
        let k2 = WeightedRGraph::unweighted(2, 2, [vec![0, 1]]).unwrap();
        let part = Partition::from_blocks(2, vec![vec![0], vec![1]]).unwrap();
        assert!(partite_balance_check(&k2, &part, 2.0, &opts).unwrap() < 1e-12);
        let s = gen_star(4).unwrap();
        let part = Partition::from_blocks(5, vec![vec![0], (1..5).collect()]).unwrap();
        assert!(partite_balance_check(&s, &part, 2.0, &opts).unwrap() <= 1e-6);
        let c4 = gen_cycle(4).unwrap();
        let part = Partition::from_blocks(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(partite_balance_check(&c4, &part, 3.0, &opts).unwrap() <= 1e-6);
    }

    #[test]
    fn beta_star_radius() {
        for k in 1..=5 {
            let b = gen_beta_star(3, k).unwrap().adjacency_tensor();
            let rho = rho_nonnegative(&b, &SolverOptions::default()).unwrap().value;
            assert_relative_eq!(rho, 2.0 * (k as f64).cbrt(), max_relative = 1e-6);
        }
    }
}
