//! Real symmetric eigensolvers.
//!
//! The tridiagonal kernel is the implicit-shift QL iteration; dense symmetric
//! matrices are first reduced by Householder reflections. Eigenvectors are
//! only accumulated on request. For very long tridiagonal matrices where only
//! a few eigenvalues are needed (finite-difference grids) a Sturm-sequence
//! bisection and an inverse-iteration eigenvector routine are provided.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// QL sweeps allowed per eigenvalue before giving up.
const MAX_SWEEPS: usize = 50;

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// subdiagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymTridiag {
    diag: Vec<f64>,
    sub: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, sub: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Contract("tridiagonal matrix must have n >= 1".into()));
        }
        if sub.len() + 1 != diag.len() {
            return Err(Error::Contract(format!(
                "subdiagonal length {} does not match diagonal length {}",
                sub.len(),
                diag.len()
            )));
        }
        Ok(Self { diag, sub })
    }

    pub fn from_diagonal(diag: Vec<f64>) -> Result<Self> {
        let sub = vec![0.0; diag.len().saturating_sub(1)];
        Self::new(diag, sub)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    /// Leading `k x k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::Contract(format!("leading minor of size {k} out of range")));
        }
        Self::new(self.diag[..k].to_vec(), self.sub[..k - 1].to_vec())
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, &s) in self.sub.iter().enumerate() {
            m[(i + 1, i)] = s;
            m[(i, i + 1)] = s;
        }
        m
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.sub[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.sub[i].abs() } else { 0.0 };
                left + self.diag[i].abs() + right
            })
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += self.sub[i] * v[i + 1];
            }
            out[i] = acc;
        }
        out
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.sub[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.sub[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Eigenvalues in ascending order, with the matching orthonormal eigenvectors
/// stored column-wise when they were requested.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub values: Vec<f64>,
    pub vectors: Option<DMatrix<f64>>,
}

impl EigenResult {
    pub fn vector(&self, k: usize) -> Option<Vec<f64>> {
        self.vectors
            .as_ref()
            .map(|v| v.column(k).iter().copied().collect())
    }
}

/// Full eigen-decomposition of a symmetric tridiagonal matrix.
pub fn eigh_tridiag(t: &SymTridiag, want_vectors: bool) -> Result<EigenResult> {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&t.sub);
    let mut z = want_vectors.then(|| DMatrix::<f64>::identity(n, n));
    tql2(&mut d, &mut e, z.as_mut())?;
    Ok(sorted(d, z))
}

/// Full eigen-decomposition of a dense symmetric matrix: Householder
/// reduction to tridiagonal form followed by the QL kernel.
pub fn eigh_dense(m: &DMatrix<f64>, want_vectors: bool) -> Result<EigenResult> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::Contract(format!(
            "expected a non-empty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.amax();
    let asym = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
        .fold(0.0, f64::max);
    if asym > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract(format!(
            "matrix is not symmetric (max |m_ij - m_ji| = {asym:e})"
        )));
    }
    let (mut d, mut e, q) = householder(m);
    let mut z = want_vectors.then_some(q);
    tql2(&mut d, &mut e, z.as_mut())?;
    Ok(sorted(d, z))
}

/// Householder reduction of a symmetric matrix, `m = Q T Q^T`.
pub fn tridiagonalize(m: &DMatrix<f64>) -> (SymTridiag, DMatrix<f64>) {
    let (d, e, q) = householder(m);
    let n = d.len();
    let t = SymTridiag {
        diag: d,
        sub: e[..n - 1].to_vec(),
    };
    (t, q)
}

fn sorted(d: Vec<f64>, z: Option<DMatrix<f64>>) -> EigenResult {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = z.map(|z| DMatrix::from_fn(z.nrows(), z.ncols(), |r, c| z[(r, order[c])]));
    EigenResult { values, vectors }
}

/// Householder tridiagonalization with accumulation of the transformation.
/// Returns the diagonal, the subdiagonal (`e[i]` couples `i` and `i + 1`,
/// `e[n - 1] = 0`) and the orthogonal matrix.
fn householder(m: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let mut v = m.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[(j, i)] = f;
                g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n.saturating_sub(1) {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;

    // shift so that e[i] couples i and i + 1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    (d, e, v)
}

/// Implicit-shift QL on (d, e) with `e[i]` coupling `i` and `i + 1`.
/// Rotations are applied to the columns of `z` when present.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut DMatrix<f64>>) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence { index: l });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in &mut d[l + 2..] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s: f64 = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zh = z[(k, i + 1)];
                            z[(k, i + 1)] = s * z[(k, i)] + c * zh;
                            z[(k, i)] = c * z[(k, i)] - s * zh;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn sturm_count(t: &SymTridiag, x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt() * t.norm().max(1.0);
    let mut count = 0;
    let mut q = t.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.len() {
        if q == 0.0 {
            q = tiny;
        }
        q = t.diag[i] - x - t.sub[i - 1] * t.sub[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues strictly below `upper`, ascending, by bisection on the
/// Sturm count. Suited to long matrices where only the bottom of the
/// spectrum is wanted.
pub fn eigvals_below(t: &SymTridiag, upper: f64) -> Vec<f64> {
    let (glo, ghi) = t.gershgorin();
    let upper = upper.min(ghi + 1.0);
    let k = sturm_count(t, upper);
    let mut out = Vec::with_capacity(k);
    let mut lo_bound = glo - 1.0;
    for j in 0..k {
        let mut lo = lo_bound;
        let mut hi = upper;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(t, mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        let value = 0.5 * (lo + hi);
        out.push(value);
        lo_bound = lo;
    }
    out
}

/// Eigenvector for an (accurately known) eigenvalue by inverse iteration
/// with a pivoted tridiagonal LU. The result has unit Euclidean norm.
pub fn inverse_iteration(t: &SymTridiag, eigenvalue: f64) -> Result<Vec<f64>> {
    let n = t.len();
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let norm = t.norm().max(f64::MIN_POSITIVE);
    let shift = eigenvalue + 4.0 * f64::EPSILON * norm;
    let lu = TridiagLu::factor(t, shift, norm);
    // deterministic start vector with no symmetry
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i % 7) as f64)).collect();
    for _ in 0..4 {
        lu.solve(&mut x);
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(Error::NoConvergence { index: 0 });
        }
        for v in &mut x {
            *v /= nrm;
        }
    }
    Ok(x)
}

/// LU factorization of `T - shift I` with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiag, shift: f64, norm: f64) -> Self {
        let n = t.len();
        let mut dl = t.sub.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du = t.sub.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = f64::EPSILON * norm;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = f64::EPSILON * norm;
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
