//! Randomized invariant suites. Each suite draws its instances from
//! `seed + trial` and returns one [`Record`] per checked quantity.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{bounds_report, lower_slice_sum, regular_value, upper_hlp, upper_main};
use crate::error::{Error, Result};
use crate::forms::{euler_residual, poly_form, poly_gradient};
use crate::hypergraph::{gen_all_ones, gen_cycle, gen_star, lower_hofmeister};
use crate::io::format_f64;
use crate::oracle::{catalogue, closed_form, grid_max_eta, grid_max_norm, DEFAULT_RESOLUTION};
use crate::random::{random_sparse_symmetric, random_symmetric, random_tensor, Sign};
use crate::spectral::{
    collatz_wielandt_upper, combine_components, eigen_residual, eta_p, eta_p_curve, lambda_min_p, lambda_p,
    norm_p_curve, rho_nonnegative, spectral_p_norm, SolverOptions,
};
use crate::structure::{block_diagonal, is_weakly_irreducible, symmetrant};
use crate::tensor::Tensor;

/// Available suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Th2,
    Mth1,
    Pf1,
    Pf0,
    Monotone,
    Gradient,
    Sandwich,
    Oracle,
    Balance,
    Regular,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Th2,
        Suite::Mth1,
        Suite::Pf1,
        Suite::Pf0,
        Suite::Monotone,
        Suite::Gradient,
        Suite::Sandwich,
        Suite::Oracle,
        Suite::Balance,
        Suite::Regular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Th2 => "th2",
            Suite::Mth1 => "mth1",
            Suite::Pf1 => "pf1",
            Suite::Pf0 => "pf0",
            Suite::Monotone => "monotone",
            Suite::Gradient => "gradient",
            Suite::Sandwich => "sandwich",
            Suite::Oracle => "oracle",
            Suite::Balance => "balance",
            Suite::Regular => "regular",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown suite {s:?}")))
    }
}

/// One checked quantity. `gap` is the amount by which the check misses
/// (relative for equalities, signed excess for inequalities).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub trial: usize,
    pub seed: u64,
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn worst_gap(&self, prefix: &str) -> f64 {
        self.records.iter().filter(|r| r.quantity.starts_with(prefix)).fold(f64::NEG_INFINITY, |m, r| m.max(r.gap))
    }

    /// CSV with header `trial,seed,quantity,lhs,rhs,gap,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,quantity,lhs,rhs,gap,pass\n");
        for r in &self.records {
            let (lhs, rhs, gap) = (format_f64(r.lhs), format_f64(r.rhs), format_f64(r.gap));
            let quantity = if r.quantity.contains([',', '"']) {
                format!("\"{}\"", r.quantity.replace('"', "\"\""))
            } else {
                r.quantity.clone()
            };
            out.push_str(&format!("{},{},{quantity},{lhs},{rhs},{gap},{}\n", r.trial, r.seed, r.pass));
        }
        out
    }
}

struct Log {
    records: Vec<Record>,
    trial: usize,
    seed: u64,
}

impl Log {
    fn new() -> Self {
        Log { records: Vec::new(), trial: 0, seed: 0 }
    }

    fn at(&mut self, trial: usize, seed: u64) {
        self.trial = trial;
        self.seed = seed;
    }

    fn push(&mut self, quantity: String, lhs: f64, rhs: f64, gap: f64, pass: bool) {
        self.records.push(Record { trial: self.trial, seed: self.seed, quantity, lhs, rhs, gap, pass });
    }

    /// `|lhs - rhs| <= tol * |rhs|`.
    fn close(&mut self, quantity: String, lhs: f64, rhs: f64, tol: f64) {
        let gap = rel_gap(lhs, rhs);
        self.push(quantity, lhs, rhs, gap, gap <= tol);
    }

    /// `lhs <= rhs + slack`.
    fn at_most(&mut self, quantity: String, lhs: f64, rhs: f64, slack: f64) {
        let gap = lhs - rhs;
        self.push(quantity, lhs, rhs, gap, gap <= slack);
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn factorial(r: usize) -> f64 {
    (1..=r).map(|k| k as f64).product()
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Runs `suite` with `trials` random instances seeded from `seed`.
pub fn run_suite(suite: Suite, trials: usize, seed: u64, opts: &SolverOptions) -> Result<SuiteReport> {
    opts.validate()?;
    let mut log = Log::new();
    match suite {
        Suite::Th2 => th2(&mut log, trials, seed, opts)?,
        Suite::Mth1 => mth1(&mut log, trials, seed, opts)?,
        Suite::Pf1 => pf1(&mut log, trials, seed, opts)?,
        Suite::Pf0 => pf0(&mut log, trials, seed, opts)?,
        Suite::Monotone => monotone(&mut log, trials, seed, opts)?,
        Suite::Gradient => gradient(&mut log, trials, seed)?,
        Suite::Sandwich => sandwich(&mut log, trials, seed, opts)?,
        Suite::Oracle => oracle(&mut log, trials, seed, opts)?,
        Suite::Balance => balance(&mut log, trials, seed, opts)?,
        Suite::Regular => regular(&mut log, trials, seed, opts)?,
    }
    Ok(SuiteReport { suite, records: log.records })
}

fn random_dims(rng: &mut ChaCha8Rng, r: usize, max: usize) -> Vec<usize> {
    (0..r).map(|_| rng.random_range(1..=max)).collect()
}

fn th2(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        for (sign, tag) in [(Sign::Nonnegative, "th2b"), (Sign::Mixed, "th2a")] {
            let dims = random_dims(&mut rng, r, 4);
            let a = random_tensor(&dims, sign, &mut rng);
            let (sym, _) = symmetrant(&a);
            for p in [2.0, 2.5, 3.0, 4.0] {
                let eta = eta_p(&sym, p, &o)?.value;
                let want = factorial(r) / (r as f64).powf(r as f64 / p) * spectral_p_norm(&a, p, &o)?.value;
                match sign {
                    Sign::Nonnegative => log.close(format!("{tag}_p{p}"), eta, want, 1e-6),
                    Sign::Mixed => log.at_most(format!("{tag}_p{p}"), eta, want, 1e-6),
                }
            }
        }
    }
    Ok(())
}

fn mth1(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    let (mut runs, mut converged) = (0usize, 0usize);
    for r in [2usize, 3] {
        for n in [3usize, 4, 5] {
            for p in [r as f64, r as f64 + 1.0, 2.0 * r as f64] {
                for t in 0..trials {
                    let s = trial_seed(seed, t);
                    log.at(t, s);
                    let mut rng = ChaCha8Rng::seed_from_u64(s);
                    let a = random_symmetric(r, n, Sign::Nonnegative, &mut rng);
                    let o = opts.clone().with_seed(s);
                    let norm = spectral_p_norm(&a, p, &o)?;
                    let eta = eta_p(&a, p, &o)?;
                    let ok = norm.converged && eta.converged;
                    runs += 1;
                    converged += ok as usize;
                    let gap = rel_gap(eta.value, norm.value);
                    log.push(format!("mth1_r{r}_n{n}_p{p}"), eta.value, norm.value, gap, !ok || gap <= 1e-6);
                }
            }
        }
    }
    if runs > 0 {
        log.at(trials, seed);
        let frac = converged as f64 / runs as f64;
        log.push("mth1_converged_fraction".into(), frac, 0.95, 0.95 - frac, frac >= 0.95);
    }
    Ok(())
}

fn pf1(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let count = 2 + (t / 2) % 2;
        let parts: Vec<Tensor> = (0..count)
            .map(|_| {
                let n = rng.random_range(1..=3);
                random_symmetric(r, n, Sign::Nonnegative, &mut rng)
            })
            .collect();
        let whole = block_diagonal(&parts)?;
        for p in [r as f64 + 0.5, r as f64 + 1.0, 2.0 * r as f64] {
            let values = parts.iter().map(|c| eta_p(c, p, &o).map(|res| res.value)).collect::<Result<Vec<_>>>()?;
            let combined = combine_components(&values, p, r)?;
            log.close(format!("pf1_p{p}"), eta_p(&whole, p, &o)?.value, combined, 1e-6);
        }
    }
    Ok(())
}

fn irreducible_instance(rng: &mut ChaCha8Rng, r: usize, n: usize) -> Result<Tensor> {
    loop {
        let a = random_sparse_symmetric(r, n, 0.4, Sign::Nonnegative, rng);
        if is_weakly_irreducible(&a)? {
            return Ok(a);
        }
    }
}

fn no_zero_slice_instance(rng: &mut ChaCha8Rng, r: usize, n: usize) -> Tensor {
    loop {
        let a = random_sparse_symmetric(r, n, 0.3, Sign::Nonnegative, rng);
        if a.slice_sums(0).iter().all(|&v| v > 0.0) {
            return a;
        }
    }
}

fn pf0(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let n = rng.random_range(2..=5);
        let rf = r as f64;

        let a = irreducible_instance(&mut rng, r, n)?;
        for p in [rf - 0.5, rf, rf + 1.0, 2.0 * rf] {
            min_component(log, format!("pf0_min_p{p}"), &a, p, &o)?;
        }
        let b = no_zero_slice_instance(&mut rng, r, n);
        for p in [rf + 1.0, 2.0 * rf] {
            min_component(log, format!("cor_min_p{p}"), &b, p, &o)?;
        }

        let rho = rho_nonnegative(&a, &SolverOptions { tol: 1e-14, ..o.clone() })?;
        for _ in 0..4 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            log.at_most("cw_upper".into(), rho.value, collatz_wielandt_upper(&a, &x)?, 1e-8);
        }

        // the power iteration gives an eigenpair independently of lambda_p
        let x = rho.vector().expect("vector witness").to_vec();
        let residual = eigen_residual(&a, rho.value, &x, rf)?;
        let positive = x.iter().all(|&v| v > 0.0);
        if residual <= 1e-10 && positive {
            log.close("pf2_lambda".into(), rho.value, lambda_p(&a, rf, &o)?.value, 1e-6);
        }

        let eta = eta_p(&a, rf, &o)?.value;
        let low = lambda_min_p(&a, rf, &o)?;
        let low_x = low.vector().expect("vector witness").to_vec();
        for (lambda, x) in [(rho.value, &x), (low.value, &low_x)] {
            if eigen_residual(&a, lambda, x, rf)? <= 1e-10 {
                log.at_most("pro_eigenvalue".into(), lambda.abs(), eta, 1e-6);
            }
        }
    }
    Ok(())
}

fn min_component(log: &mut Log, quantity: String, a: &Tensor, p: f64, opts: &SolverOptions) -> Result<()> {
    let res = lambda_p(a, p, opts)?;
    if res.converged {
        let x = res.vector().expect("vector witness");
        let min = x.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        log.push(quantity, min, 1e-8, 1e-8 - min, min >= 1e-8);
    }
    Ok(())
}

const P_GRID: [f64; 13] = [1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0];

/// Checks monotonicity, the scaling inequality and the Lipschitz envelope
/// over every pair of grid points. `size` is the entry count the scaling uses.
fn curve_checks(log: &mut Log, tag: &str, values: &[f64], size: f64, abs_sum: f64) {
    let mut worst = [f64::NEG_INFINITY; 4];
    for (i, &q) in P_GRID.iter().enumerate() {
        let vq = values[i];
        worst[2] = worst[2].max(vq - abs_sum);
        for (j, &p) in P_GRID.iter().enumerate().skip(i + 1) {
            let vp = values[j];
            worst[0] = worst[0].max(vq - vp);
            worst[1] = worst[1].max(size.powf(1.0 / p) * vp - size.powf(1.0 / q) * vq);
            worst[3] = worst[3].max((vp - vq) - (p - q) * abs_sum * size * size.ln());
        }
    }
    let slack = [1e-8, 1e-6, 1e-12, 1e-8];
    for (k, name) in ["monotone", "scaling", "entry_sum", "lipschitz"].iter().enumerate() {
        log.push(format!("{tag}_{name}"), worst[k], 0.0, worst[k], worst[k] <= slack[k]);
    }
}

fn monotone(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let sign = if t % 4 < 2 { Sign::Nonnegative } else { Sign::Mixed };

        let dims = random_dims(&mut rng, r, 3);
        let a = random_tensor(&dims, sign, &mut rng);
        let size = dims.iter().product::<usize>() as f64;
        let norms: Vec<f64> = norm_p_curve(&a, &P_GRID, &o)?.iter().map(|res| res.value).collect();
        curve_checks(log, "norm", &norms, size, a.abs_sum());
        log.close("norm_p1".into(), norms[0], a.max_abs(), 1e-12);

        let n = rng.random_range(2..=3);
        let b = random_symmetric(r, n, sign, &mut rng);
        let etas: Vec<f64> = eta_p_curve(&b, &P_GRID, &o)?.iter().map(|res| res.value).collect();
        curve_checks(log, "eta", &etas, (n as f64).powi(r as i32), b.abs_sum());
        let floor = b.max_abs() * factorial(r) / (r as f64).powi(r as i32);
        log.at_most("eta_p1_floor".into(), floor, etas[0], 1e-9);
    }
    Ok(())
}

fn gradient(log: &mut Log, trials: usize, seed: u64) -> Result<()> {
    let h = 1e-6;
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let r = 2 + t % 2;
        let n = rng.random_range(1..=5);
        let a = random_symmetric(r, n, Sign::Mixed, &mut rng);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = poly_gradient(&a, &x)?;
        let scale = g.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0_f64;
        for k in 0..n {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let fd = (poly_form(&a, &xp)? - poly_form(&a, &xm)?) / (2.0 * h);
            worst = worst.max((fd - g[k]).abs() / scale);
        }
        log.push("finite_difference".into(), worst, 1e-5, worst, worst <= 1e-5);
        let euler = euler_residual(&a, &x)?;
        let bound = 1e-12 * (1.0 + poly_form(&a, &x)?.abs());
        log.at_most("euler".into(), euler, bound, 0.0);
    }
    Ok(())
}

fn sandwich(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let sign = if t % 2 == 0 { Sign::Nonnegative } else { Sign::Mixed };
        let dims = random_dims(&mut rng, r, 4);
        let a = random_tensor(&dims, sign, &mut rng);
        let report = bounds_report(&a, r as f64, &o, true)?;
        let bad = report.violations.len() as f64;
        log.push("sandwich_violations".into(), bad, 0.0, bad, report.is_consistent());
        let (main, hlp) = (upper_main(&a), upper_hlp(&a));
        log.at_most("main_le_hlp".into(), main, hlp, 1e-12 * hlp.max(1.0));
    }
    Ok(())
}

fn oracle(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    log.at(0, seed);
    let o = opts.clone().with_seed(seed);
    for (instance, p) in catalogue() {
        let a = instance.tensor()?;
        let exact = closed_form(&instance, p)?;
        let (grid, optimum) = if instance.is_eta(p) {
            (grid_max_eta(&a, p, DEFAULT_RESOLUTION, &o)?.value, eta_p(&a, p, &o)?.value)
        } else {
            (grid_max_norm(&a, p, DEFAULT_RESOLUTION, &o)?.value, spectral_p_norm(&a, p, &o)?.value)
        };
        log.close(format!("closed_form {instance} p{p}"), optimum, exact, 1e-6);
        let gap = (grid - optimum).abs();
        log.push(format!("grid {instance} p{p}"), grid, optimum, gap, gap <= 1e-3);
        log.at_most(format!("grid_feasible {instance} p{p}"), grid, exact, 1e-9 * exact.max(1.0));
    }
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let dims = random_dims(&mut rng, r, if r == 2 { 3 } else { 2 });
        let a = random_tensor(&dims, Sign::Mixed, &mut rng);
        let p = [1.5, 2.0, 3.0][t % 3];
        let grid = grid_max_norm(&a, p, DEFAULT_RESOLUTION, &o)?.value;
        let optimum = spectral_p_norm(&a, p, &o)?.value;
        let gap = (grid - optimum).abs();
        log.push(format!("grid_random p{p}"), grid, optimum, gap, gap <= 1e-3);
    }
    Ok(())
}

fn balance(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    for t in 0..trials {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let o = opts.clone().with_seed(s);
        let r = 2 + t % 2;
        let dims = random_dims(&mut rng, r, 4);
        let a = random_tensor(&dims, Sign::Nonnegative, &mut rng);
        let (sym, partition) = symmetrant(&a);
        for p in [2.0, 3.0] {
            let res = eta_p(&sym, p, &o)?;
            let x = res.vector().expect("vector witness");
            let target = (r as f64).powf(-1.0 / p);
            let worst = (0..r).map(|b| (lp_norm(&partition.restrict(x, b), p) - target).abs()).fold(0.0_f64, f64::max);
            log.push(format!("block_norm_p{p}"), worst, 1e-6, worst, worst <= 1e-6);
        }
    }
    Ok(())
}

fn regular(log: &mut Log, trials: usize, seed: u64, opts: &SolverOptions) -> Result<()> {
    log.at(0, seed);
    let o = opts.clone().with_seed(seed);
    let mut instances: Vec<(String, Tensor)> = Vec::new();
    for r in [2usize, 3] {
        for n in [2usize, 3, 4] {
            instances.push((format!("all_ones({r},{n})"), gen_all_ones(r, n)?));
        }
    }
    for n in 3..=7 {
        instances.push((format!("cycle({n})"), gen_cycle(n)?.adjacency_tensor()));
    }
    for (name, a) in &instances {
        let (r, n) = (a.order(), a.dims()[0]);
        for p in [r as f64, r as f64 + 1.0, 2.0 * r as f64] {
            let formula = (n as f64).powf(-(r as f64) / p) * a.sum();
            let eta = eta_p(a, p, &o)?.value;
            log.close(format!("{name} eta p{p}"), eta, formula, 1e-6);
            log.close(format!("{name} regular_value p{p}"), regular_value(a, p)?, eta, 1e-6);
            let norm = spectral_p_norm(a, p, &o)?.value;
            for k in 0..r {
                log.close(format!("{name} slice_sum_{k} p{p}"), lower_slice_sum(a, p, k)?, norm, 1e-6);
            }
        }
    }
    log.close("all_ones(3,2) eta p4 exact".into(), eta_p(&gen_all_ones(3, 2)?, 4.0, &o)?.value, 2f64.powf(2.25), 1e-6);
    for n in 3..=7 {
        let g = gen_cycle(n)?;
        let eta = eta_p(&g.adjacency_tensor(), 2.0, &o)?.value;
        log.close(format!("cycle({n}) hofmeister"), lower_hofmeister(&g, 2.0)?, eta, 1e-6);
    }

    // non-regular stars: the regular formula must miss for some p
    for t in 0..trials.max(1) {
        let s = trial_seed(seed, t);
        log.at(t, s);
        let n = 2 + t % 7;
        let a = gen_star(n)?.adjacency_tensor();
        let o = opts.clone().with_seed(s);
        let mut miss = 0.0_f64;
        for p in [2.0, 3.0, 4.0] {
            let formula = ((n + 1) as f64).powf(-2.0 / p) * a.sum();
            miss = miss.max((eta_p(&a, p, &o)?.value - formula).abs());
        }
        log.push(format!("star({n}) irregular"), miss, 1e-6, 1e-6 - miss, miss > 1e-6);
    }
    Ok(())
}
