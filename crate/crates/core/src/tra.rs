//! Tridiagonal representation in the Jacobi basis.
//!
//! With `y = (2/q) e^{lx} + 1` the basis functions are
//! `phi_n = A_n (y-1)^{mu/2} (y+1)^{(nu+1)/2} P_n^{(mu,nu)}(y)` with
//! `mu = 2 sqrt(-2E) / l`. They are orthonormal with respect to
//! `l (y-1)/(y+1) dx`, and in that basis `-(2/l^2)(H - E)` is the symmetric
//! tridiagonal matrix with diagonal `a_n + F Q_n` and off-diagonal `-F S_n`,
//! where `a_n = n(n + mu + nu + 1) + (mu+1)(nu+1)/2 - D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SymTridiag;
use crate::polys::{jacobi_norm, jacobi_q, jacobi_s, jacobi_sequence, JacobiParams};
use crate::potential::{to_uparams, PotentialParams, UParams};
use crate::spectrum::{Method, Spectrum};

const BOUND_GUARD: f64 = 1e-9;

/// Fills in the energy-dependent `mu` and `ell`.
pub fn complete_uparams(u: &UParams, energy: f64, lambda: f64) -> Result<UParams> {
    if !(energy < 0.0) {
        return Err(Error::Domain(format!("energy {energy} must be negative")));
    }
    let mu = 2.0 * (-2.0 * energy).sqrt() / lambda;
    let half = 0.5 * (mu + u.nu + 1.0);
    let ell = 0.5 * (mu + 1.0) * (u.nu + 1.0) - half * half - u.d;
    Ok(UParams {
        mu: Some(mu),
        ell: Some(ell),
        ..*u
    })
}

fn completed_mu(u: &UParams) -> Result<f64> {
    u.mu.ok_or_else(|| Error::Contract("UParams must be completed with an energy first".into()))
}

/// The finite basis available at one energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraBasisState {
    pub uparams: UParams,
    /// Highest `n` with `phi_n` square integrable, `N < -(mu + nu + 1)/2`.
    pub n_max_effective: Option<usize>,
    /// Highest `n` for which `<n|y|n>` is also finite, `N < -(mu + nu + 2)/2`.
    /// Matrices of the wave operator are built on this smaller basis.
    pub n_max_operator: Option<usize>,
}

impl TraBasisState {
    pub fn new(u: &UParams) -> Result<Self> {
        let mu = completed_mu(u)?;
        let bound = |shift: f64| {
            let n = (-(mu + u.nu + shift) / 2.0 - BOUND_GUARD).floor();
            (n >= 0.0).then_some(n as usize)
        };
        Ok(Self {
            uparams: *u,
            n_max_effective: bound(1.0),
            n_max_operator: bound(2.0),
        })
    }

    /// Size of the wave-operator matrix, zero when the basis is empty.
    pub fn operator_size(&self) -> usize {
        self.n_max_operator.map_or(0, |n| n + 1)
    }
}

/// `phi_n(y)`.
pub fn basis_eval(u: &UParams, n: usize, y: f64) -> Result<f64> {
    let mu = completed_mu(u)?;
    let state = TraBasisState::new(u)?;
    match state.n_max_effective {
        Some(nm) if n <= nm => {}
        _ => {
            return Err(Error::Domain(format!(
                "basis function {n} is not square integrable (n_max = {:?})",
                state.n_max_effective
            )))
        }
    }
    if !(y >= 1.0) {
        return Err(Error::Domain(format!("y = {y} must be >= 1")));
    }
    let jp = JacobiParams::new(mu, u.nu, n)?;
    let p = *jacobi_sequence(mu, u.nu, n, y)?.last().expect("non-empty");
    let w = (0.5 * mu * (y - 1.0).ln() + 0.5 * (u.nu + 1.0) * (y + 1.0).ln()).exp();
    Ok(jacobi_norm(&jp, n)? * w * p)
}

/// `a_n = n(n + mu + nu + 1) + (mu+1)(nu+1)/2 - D`.
pub fn a_n_coeff(u: &UParams, n: usize) -> Result<f64> {
    let mu = completed_mu(u)?;
    let nf = n as f64;
    Ok(nf * (nf + mu + u.nu + 1.0) + 0.5 * (mu + 1.0) * (u.nu + 1.0) - u.d)
}

/// The wave-operator matrix with `D` moved to the right-hand side: diagonal
/// `a_n + D + F Q_n`, off-diagonal `-F S_n`. `D` is one of its eigenvalues
/// exactly when `E` is an eigenenergy.
pub fn wave_operator(u: &UParams, size: usize) -> Result<SymTridiag> {
    let mu = completed_mu(u)?;
    if size == 0 {
        return Err(Error::Contract("wave operator needs size >= 1".into()));
    }
    let nu = u.nu;
    let diag = (0..size)
        .map(|n| Ok(a_n_coeff(u, n)? + u.d + u.f * jacobi_q(mu, nu, n)?))
        .collect::<Result<Vec<_>>>()?;
    let sub = (0..size - 1)
        .map(|n| Ok(-u.f * jacobi_s(mu, nu, n)?))
        .collect::<Result<Vec<_>>>()?;
    SymTridiag::new(diag, sub)
}

/// Closed-form spectrum for `C = 0`, where the wave operator is diagonal.
///
/// With `k = n + (nu+1)/2` level `n` has `mu_n = (D + (nu^2-1)/4)/k - k` and
/// `E_n = -l^2 mu_n^2 / 8`. A level exists when `mu_n > 0` (regular at
/// `x -> -inf`) and `mu_n + 2n + nu + 1 < 0` (normalizable at `x -> +inf`).
pub fn diag_spectrum(p: &PotentialParams) -> Result<Spectrum> {
    p.validate()?;
    if p.c != 0.0 {
        return Err(Error::WrongBranch(format!(
            "the closed-form spectrum needs C = 0, got C = {}",
            p.c
        )));
    }
    let u = to_uparams(p)?;
    let shift = u.d + 0.25 * (u.nu * u.nu - 1.0);
    let mut raw = Vec::new();
    let mut n = 0usize;
    loop {
        let k = n as f64 + 0.5 * (u.nu + 1.0);
        if k >= 0.0 {
            break;
        }
        let mu = shift / k - k;
        if mu > 0.0 && mu + 2.0 * n as f64 + u.nu + 1.0 < 0.0 {
            raw.push((-p.lambda * p.lambda * mu * mu / 8.0, Vec::new()));
        }
        n += 1;
    }
    Ok(Spectrum::from_levels(Method::Diag, *p, raw))
}

/// Expansion coefficients `f_n` of one eigenstate in the Jacobi basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraCoeffs {
    pub f: Vec<f64>,
    pub energy: f64,
    /// The recursion grew beyond `1e12 |f_0|` before normalization.
    pub unstable: bool,
}

/// `sum_k f_k phi_k(y(x))` on `xs`, normalized and sign-fixed.
pub fn assemble_wavefunction(u: &UParams, coeffs: &TraCoeffs, p: &PotentialParams, xs: &[f64]) -> Result<Vec<f64>> {
    let mu = completed_mu(u)?;
    let state = TraBasisState::new(u)?;
    let available = state.n_max_effective.map_or(0, |n| n + 1);
    if coeffs.f.is_empty() || coeffs.f.len() > available {
        return Err(Error::Contract(format!(
            "{} coefficients for a basis of {available} functions",
            coeffs.f.len()
        )));
    }
    let n = coeffs.f.len() - 1;
    let jp = JacobiParams::new(mu, u.nu, n)?;
    let weights = (0..=n)
        .map(|k| Ok(coeffs.f[k] * jacobi_norm(&jp, k)?))
        .collect::<Result<Vec<_>>>()?;
    let ln_2q = (2.0 / p.q).ln();
    let mut psi = Vec::with_capacity(xs.len());
    for &x in xs {
        let lx = p.lambda * x;
        let y = (2.0 / p.q) * lx.exp() + 1.0;
        // ln(y - 1) and ln(y + 1) without cancellation far to the left
        let ln_ym1 = ln_2q + lx;
        let ln_yp1 = std::f64::consts::LN_2 + (lx.exp() / p.q).ln_1p();
        let w = (0.5 * mu * ln_ym1 + 0.5 * (u.nu + 1.0) * ln_yp1).exp();
        let value = if w == 0.0 {
            0.0
        } else {
            let ps = jacobi_sequence(mu, u.nu, n, y)?;
            w * ps.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>()
        };
        psi.push(value);
    }
    normalize_wavefunction(xs, &mut psi)?;
    Ok(psi)
}

/// Trapezoidal integral of samples `ys` on the grid `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Scales `psi` to unit trapezoidal norm on `xs` and makes its first
/// significant extremum positive.
pub fn normalize_wavefunction(xs: &[f64], psi: &mut [f64]) -> Result<()> {
    if xs.len() != psi.len() || xs.len() < 2 {
        return Err(Error::Contract("wavefunction grid needs at least two matching samples".into()));
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Contract("wavefunction grid must be strictly increasing".into()));
    }
    let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let norm = trapezoid(xs, &sq).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Contract("wavefunction vanishes on the grid".into()));
    }
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let n = psi.len();
    let first = (0..n)
        .find(|&i| {
            let v = psi[i].abs();
            let left = if i > 0 { psi[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { psi[i + 1].abs() } else { 0.0 };
            v > 1e-3 * peak && v >= left && v >= right
        })
        .unwrap_or(0);
    let sign = if psi[first] < 0.0 { -1.0 } else { 1.0 };
    for v in psi.iter_mut() {
        *v *= sign / norm;
    }
    Ok(())
}

/// Sign changes among samples whose magnitude exceeds `rel * max |psi|`,
/// which ignores round-off wiggles in the exponentially small tails.
pub fn count_nodes(psi: &[f64], rel: f64) -> usize {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last: Option<bool> = None;
    let mut nodes = 0;
    for v in psi.iter().filter(|v| v.abs() > rel * peak) {
        let positive = *v > 0.0;
        if let Some(prev) = last {
            if prev != positive {
                nodes += 1;
            }
        }
        last = Some(positive);
    }
    nodes
}
