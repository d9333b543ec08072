//! Block Krylov (block size 2) eigensolver with full reorthogonalization
//! and Rayleigh-Ritz extraction of the two lowest eigenpairs.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hamiltonian::SparseSymmetricMatrix;

const START_SEED: u64 = 0x0051_7E5E_ED00;
const BREAKDOWN: f64 = 1e-10;

#[derive(Debug, Clone)]
pub(crate) struct KrylovSettings {
    pub basis_limit: usize,
    pub max_restarts: usize,
    pub res_tol: f64,
}

#[derive(Debug)]
pub(crate) struct KrylovOutcome {
    /// Ascending Ritz pairs, at most two.
    pub pairs: Vec<(f64, Vec<f64>)>,
    pub matvecs: usize,
    /// Largest relative residual among the returned pairs.
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Orthogonalize `v` against `basis` (two classical Gram-Schmidt passes)
/// and normalize. Returns `None` if nothing new survives.
fn orthonormalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let scale = norm(&v);
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|q| dot(q, &v)).collect();
        for (q, c) in basis.iter().zip(coeffs) {
            axpy(-c, q, &mut v);
        }
    }
    let n = norm(&v);
    if n <= BREAKDOWN * scale {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= n);
    Some(v)
}

/// Deterministic start block: the normalized all-ones vector and a
/// fixed-seed pseudo-random vector.
fn start_block(dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let ones = vec![1.0; dim];
    let random: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    vec![ones, random]
}

struct Krylov<'a> {
    h: &'a SparseSymmetricMatrix,
    q: Vec<Vec<f64>>,
    hq: Vec<Vec<f64>>,
    /// Projected matrix `Q^T H Q`, grown column by column.
    t: Vec<Vec<f64>>,
    matvecs: usize,
}

impl<'a> Krylov<'a> {
    fn new(h: &'a SparseSymmetricMatrix) -> Self {
        Krylov { h, q: Vec::new(), hq: Vec::new(), t: Vec::new(), matvecs: 0 }
    }

    fn push(&mut self, v: Vec<f64>) {
        let mut w = vec![0.0; v.len()];
        self.h.matvec(&v, &mut w);
        self.matvecs += 1;
        let j = self.q.len();
        self.q.push(v);
        let col: Vec<f64> = self.q.iter().map(|qi| dot(qi, &w)).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            row.push(col[i]);
        }
        self.t.push(col.clone());
        // keep T exactly symmetric
        for i in 0..j {
            let s = 0.5 * (self.t[i][j] + self.t[j][i]);
            self.t[i][j] = s;
            self.t[j][i] = s;
        }
        self.hq.push(w);
    }

    /// Lowest `count` Ritz pairs and their relative residuals.
    fn ritz(&self, count: usize) -> Vec<(f64, Vec<f64>, f64)> {
        let m = self.q.len();
        let t = DMatrix::from_fn(m, m, |i, j| self.t[i][j]);
        let eig = t.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
        let dim = self.h.dim();
        order
            .into_iter()
            .take(count)
            .map(|c| {
                let theta = eig.eigenvalues[c];
                let y = eig.eigenvectors.column(c);
                let mut x = vec![0.0; dim];
                let mut hx = vec![0.0; dim];
                for i in 0..m {
                    axpy(y[i], &self.q[i], &mut x);
                    axpy(y[i], &self.hq[i], &mut hx);
                }
                let n = norm(&x);
                x.iter_mut().for_each(|v| *v /= n);
                hx.iter_mut().for_each(|v| *v /= n);
                axpy(-theta, &x, &mut hx);
                let rel = norm(&hx) / theta.abs().max(1.0);
                (theta, x, rel)
            })
            .collect()
    }
}

pub(crate) fn lowest_two(h: &SparseSymmetricMatrix, settings: &KrylovSettings) -> KrylovOutcome {
    let dim = h.dim();
    let count = dim.min(2);
    let limit = settings.basis_limit.max(4).min(dim);
    let mut block = start_block(dim);
    let mut matvecs = 0;
    let mut best: Option<(Vec<(f64, Vec<f64>, f64)>, f64)> = None;

    for _restart in 0..=settings.max_restarts {
        let mut k = Krylov::new(h);
        let mut frontier = Vec::new();
        for v in block.drain(..) {
            if k.q.len() >= limit {
                break;
            }
            if let Some(u) = orthonormalize(v, &k.q) {
                frontier.push(k.q.len());
                k.push(u);
            }
        }
        loop {
            let exhausted = frontier.is_empty() || k.q.len() >= limit;
            if k.q.len() >= count {
                let pairs = k.ritz(count);
                let worst = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
                if worst < settings.res_tol {
                    return KrylovOutcome {
                        pairs: pairs.into_iter().map(|(e, v, _)| (e, v)).collect(),
                        matvecs: matvecs + k.matvecs,
                        residual: worst,
                        converged: true,
                    };
                }
                if exhausted {
                    if best.as_ref().is_none_or(|b| worst < b.1) {
                        best = Some((pairs.clone(), worst));
                    }
                    block = pairs.into_iter().map(|p| p.1).collect();
                    break;
                }
            } else if exhausted {
                // Krylov space smaller than the number of wanted pairs
                break;
            }
            let candidates: Vec<Vec<f64>> = frontier.iter().map(|&i| k.hq[i].clone()).collect();
            frontier.clear();
            for w in candidates {
                if k.q.len() >= limit {
                    break;
                }
                if let Some(u) = orthonormalize(w, &k.q) {
                    frontier.push(k.q.len());
                    k.push(u);
                }
            }
        }
        matvecs += k.matvecs;
        if block.is_empty() {
            break;
        }
    }

    match best {
        Some((pairs, residual)) => KrylovOutcome {
            pairs: pairs.into_iter().map(|(e, v, _)| (e, v)).collect(),
            matvecs,
            residual,
            converged: false,
        },
        None => KrylovOutcome { pairs: Vec::new(), matvecs, residual: f64::INFINITY, converged: false },
    }
}
