//! Adjacency spectra of graphs, the Ramanujan test and the expander mixing
//! inequality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, MAX_DENSE_VERTICES};

/// Off-diagonal Frobenius norm at which Jacobi sweeps stop.
pub const JACOBI_TOLERANCE: f64 = 1e-9;

/// Above this size the tridiagonal path is used: cyclic Jacobi costs
/// roughly `2 n^3` flops per sweep.
pub const JACOBI_MAX_N: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    Jacobi,
    Tridiagonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `max |lambda_i|` over `i >= 2`.
    pub lambda: f64,
    /// `max |lambda_i|` over eigenvalues with `|lambda_i| < d - 1e-6`;
    /// differs from `lambda` only for disconnected or bipartite graphs.
    pub nontrivial_lambda: Option<f64>,
    pub degree: Option<usize>,
    pub method: EigenMethod,
}

/// Row-major dense symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> SymMatrix {
        SymMatrix { n, a: vec![0.0; n * n] }
    }

    pub fn adjacency(g: &Graph) -> SymMatrix {
        let mut m = SymMatrix::zeros(g.n());
        for &(u, v) in g.edges() {
            m.set(u, v, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.a[i * self.n + j] = x;
        self.a[j * self.n + i] = x;
    }

    fn off_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += self.a[i * n + j].powi(2);
            }
        }
        (2.0 * s).sqrt()
    }
}

/// Cyclic Jacobi rotations; eigenvalues in descending order.
pub fn jacobi_eigenvalues(mut m: SymMatrix) -> Result<Vec<f64>> {
    let n = m.n;
    const MAX_SWEEPS: usize = 100;
    let mut sweeps = 0;
    while m.off_norm() > JACOBI_TOLERANCE {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::BudgetExhausted(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m.a[p * n + p];
                let aqq = m.a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m.a[p * n + k];
                    let akq = m.a[q * n + k];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    m.a[p * n + k] = np;
                    m.a[k * n + p] = np;
                    m.a[q * n + k] = nq;
                    m.a[k * n + q] = nq;
                }
                m.a[p * n + p] = app - t * apq;
                m.a[q * n + q] = aqq + t * apq;
                m.a[p * n + q] = 0.0;
                m.a[q * n + p] = 0.0;
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m.a[i * n + i]).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Householder reduction to tridiagonal form followed by implicit QL;
/// eigenvalues in descending order.
pub fn tridiagonal_eigenvalues(mut m: SymMatrix) -> Result<Vec<f64>> {
    let n = m.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // reflect x = A[k+1.., k] onto a multiple of e_1
        let len = n - k - 1;
        let x = |i: usize| m.a[(k + 1 + i) * n + k];
        let norm = (0..len).map(|i| x(i).powi(2)).sum::<f64>().sqrt();
        diag[k] = m.a[k * n + k];
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = if x(0) > 0.0 { -norm } else { norm };
        for i in 0..len {
            v[i] = x(i);
        }
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|t| t * t).sum::<f64>().sqrt();
        for t in &mut v[..len] {
            *t /= vnorm;
        }
        off[k] = alpha;
        // trailing block B: p = B v, w = p - (v.p) v, B -= 2 (v w^T + w v^T)
        let base = k + 1;
        for i in 0..len {
            let row = &m.a[(base + i) * n + base..(base + i) * n + n];
            p[i] = row.iter().zip(&v[..len]).map(|(a, b)| a * b).sum();
        }
        let kk: f64 = v[..len].iter().zip(&p[..len]).map(|(a, b)| a * b).sum();
        for i in 0..len {
            p[i] -= kk * v[i];
        }
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut m.a[(base + i) * n + base..(base + i) * n + n];
            for ((a, &vj), &wj) in row.iter_mut().zip(&v[..len]).zip(&p[..len]) {
                *a -= 2.0 * (vi * wj + wi * vj);
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = m.a[(n - 2) * n + n - 2];
        off[n - 2] = m.a[(n - 1) * n + n - 2];
    }
    diag[n - 1] = m.a[(n - 1) * n + n - 1];
    off[n - 1] = 0.0;
    tql(&mut diag, &mut off)?;
    diag.sort_by(|a, b| b.total_cmp(a));
    Ok(diag)
}

/// Implicit QL on a symmetric tridiagonal matrix; `e[i]` couples `d[i]` and
/// `d[i + 1]`.
fn tql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    // deflating below eps * |T| keeps absolute accuracy at the same level
    let scale = (0..n).map(|i| d[i].abs() + e[i].abs()).fold(0.0, f64::max);
    let floor = f64::EPSILON * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(Error::BudgetExhausted("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

pub fn spectrum(g: &Graph) -> Result<SpectralReport> {
    let method = if g.n() <= JACOBI_MAX_N { EigenMethod::Jacobi } else { EigenMethod::Tridiagonal };
    spectrum_with(g, method)
}

pub fn spectrum_with(g: &Graph, method: EigenMethod) -> Result<SpectralReport> {
    if g.n() > MAX_DENSE_VERTICES {
        return Err(Error::TooLarge {
            n: g.n(),
            cap: MAX_DENSE_VERTICES,
        });
    }
    let m = SymMatrix::adjacency(g);
    let eigenvalues = match method {
        EigenMethod::Jacobi => jacobi_eigenvalues(m)?,
        EigenMethod::Tridiagonal => tridiagonal_eigenvalues(m)?,
    };
    let lambda = eigenvalues.iter().skip(1).map(|x| x.abs()).fold(0.0, f64::max);
    let degree = g.regular_degree();
    let nontrivial_lambda = degree.map(|d| nontrivial(&eigenvalues, d as f64));
    Ok(SpectralReport {
        eigenvalues,
        lambda,
        nontrivial_lambda,
        degree,
        method,
    })
}

fn nontrivial(eigenvalues: &[f64], d: f64) -> f64 {
    eigenvalues
        .iter()
        .map(|x| x.abs())
        .filter(|&x| x < d - 1e-6)
        .fold(0.0, f64::max)
}

/// `max{|lambda_i| : |lambda_i| < d} <= 2 sqrt(d - 1)`.
pub fn is_ramanujan(report: &SpectralReport) -> Result<bool> {
    let d = report.degree.ok_or(Error::NotRegular)? as f64;
    let bound = 2.0 * (d - 1.0).max(0.0).sqrt();
    Ok(nontrivial(&report.eigenvalues, d) <= bound + 1e-9)
}

/// Expander mixing inequality for the pair `(S, T)` with the report's
/// `lambda`.
pub fn mixing_check(g: &Graph, report: &SpectralReport, s: &[usize], t: &[usize]) -> Result<bool> {
    let d = report.degree.ok_or(Error::NotRegular)? as f64;
    let n = g.n() as f64;
    let (a, b) = (s.len() as f64, t.len() as f64);
    let e = g.e_between(s, t) as f64;
    let lhs = (e - d * a * b / n).abs();
    let rhs = report.lambda * (a * b * (1.0 - a / n) * (1.0 - b / n)).max(0.0).sqrt();
    Ok(lhs <= rhs + 1e-6)
}
