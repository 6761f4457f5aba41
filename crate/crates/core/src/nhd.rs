//! Hamiltonian diagonalization in a Laguerre basis.
//!
//! With `y = rho e^{lx/2}`, `rho = 4 sqrt(2C) / l`, the functions
//! `y^{(gamma+1)/2} e^{-y/2} L_n^gamma(y)` make `-1/2 d^2/dx^2 + C e^{lx}`
//! tridiagonal. The short-range remainder `U(x) = V(x) - C e^{lx}` is
//! represented by Gauss quadrature: `U = Lambda diag(U(x_i)) Lambda^T`, where
//! `Lambda` and the nodes come from diagonalizing the matrix of `y`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::{eigh_dense, eigh_tridiag, EigenResult, SymTridiag};
use crate::polys::laguerre_y_matrix;
use crate::potential::PotentialParams;
use crate::spectrum::{Diagnostic, Method, Spectrum};
use crate::tra::normalize_wavefunction;

/// Eigenvalues above this are not bound.
const BOUND_THRESHOLD: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NhdConfig {
    pub basis_size: usize,
    pub gamma: f64,
}

impl NhdConfig {
    pub fn new(basis_size: usize, gamma: f64) -> Self {
        Self { basis_size, gamma }
    }

    pub fn validate(&self) -> Result<()> {
        if self.basis_size < 2 {
            return Err(Error::InvalidParameter("basis_size must be at least 2".into()));
        }
        if !(self.gamma > -1.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma = {} must exceed -1", self.gamma)));
        }
        Ok(())
    }
}

/// `rho = 4 sqrt(2C) / l`.
pub fn rho(p: &PotentialParams) -> Result<f64> {
    if !(p.c > 0.0) {
        return Err(Error::Domain(format!("the Laguerre basis needs C > 0, got C = {}", p.c)));
    }
    Ok(4.0 * (2.0 * p.c).sqrt() / p.lambda)
}

/// `H0 = (l^2/16) tridiag(alpha_n, -beta_n)` with
/// `alpha_n = (2n+gamma+1)^2 - (gamma^2-1)/2` and
/// `beta_n = (2n+gamma) sqrt(n(n+gamma))`.
pub fn h0_matrix(cfg: &NhdConfig, lambda: f64) -> Result<SymTridiag> {
    cfg.validate()?;
    let g = cfg.gamma;
    let s = lambda * lambda / 16.0;
    let diag = (0..cfg.basis_size)
        .map(|n| {
            let k = 2.0 * n as f64 + g + 1.0;
            s * (k * k - 0.5 * (g * g - 1.0))
        })
        .collect();
    let sub = (1..cfg.basis_size)
        .map(|n| {
            let nf = n as f64;
            -s * (2.0 * nf + g) * (nf * (nf + g)).sqrt()
        })
        .collect();
    SymTridiag::new(diag, sub)
}

/// Gauss nodes `e_i` (ascending) and the orthogonal matrix `Lambda` whose
/// columns are the eigenvectors of the `y` matrix.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub transform: DMatrix<f64>,
}

pub fn quadrature_rule(cfg: &NhdConfig) -> Result<QuadratureRule> {
    if cfg.basis_size == 0 {
        return Err(Error::InvalidParameter("basis_size must be positive".into()));
    }
    let y = laguerre_y_matrix(cfg.gamma, cfg.basis_size - 1)?;
    let EigenResult { values, vectors } = eigh_tridiag(&y, true)?;
    Ok(QuadratureRule {
        nodes: values,
        transform: vectors.expect("requested"),
    })
}

/// `U(x) = V(x) - C e^{lx}` at `e^{lx} = t`.
fn short_range(p: &PotentialParams, t: f64) -> f64 {
    let q = p.q;
    let z = 1.0 / (t + q);
    -t * (p.a * (z + q * z * z) / (q * q) + p.b * z / q)
}

pub fn uq_matrix(p: &PotentialParams, cfg: &NhdConfig) -> Result<DMatrix<f64>> {
    p.validate()?;
    let r = rho(p)?;
    let rule = quadrature_rule(cfg)?;
    let n = rule.nodes.len();
    let d: Vec<f64> = rule
        .nodes
        .iter()
        .map(|&e| {
            let t = (e / r) * (e / r);
            short_range(p, t)
        })
        .collect();
    let lam = &rule.transform;
    let mut scaled = lam.clone();
    for j in 0..n {
        scaled.column_mut(j).scale_mut(d[j]);
    }
    let mut u = &scaled * lam.transpose();
    // exact symmetry
    for i in 0..n {
        for j in 0..i {
            let m = 0.5 * (u[(i, j)] + u[(j, i)]);
            u[(i, j)] = m;
            u[(j, i)] = m;
        }
    }
    Ok(u)
}

fn hamiltonian(p: &PotentialParams, cfg: &NhdConfig) -> Result<DMatrix<f64>> {
    let h0 = h0_matrix(cfg, p.lambda)?;
    Ok(h0.to_dense() + uq_matrix(p, cfg)?)
}

/// `sqrt(-2E) < (gamma+1) l / 4`: the state decays at `x -> -inf` more
/// slowly than every basis function.
pub fn is_near_threshold(energy: f64, gamma: f64, lambda: f64) -> bool {
    (-2.0 * energy).sqrt() < (gamma + 1.0) * lambda / 4.0
}

fn spectrum_from(p: &PotentialParams, cfg: &NhdConfig, values: &[f64]) -> Spectrum {
    let raw = values
        .iter()
        .copied()
        .filter(|&e| e < BOUND_THRESHOLD)
        .map(|e| {
            let mut diag = vec![Diagnostic::Gamma { value: cfg.gamma }];
            if is_near_threshold(e, cfg.gamma, p.lambda) {
                diag.push(Diagnostic::NearThreshold);
            }
            (e, diag)
        })
        .collect();
    Spectrum::from_levels(Method::Nhd, *p, raw)
}

pub fn nhd_spectrum(p: &PotentialParams, cfg: &NhdConfig) -> Result<Spectrum> {
    let h = hamiltonian(p, cfg)?;
    let r = eigh_dense(&h, false)?;
    Ok(spectrum_from(p, cfg, &r.values))
}

/// Bound states with their expansion coefficients (columns, same order as
/// the levels).
pub fn nhd_states(p: &PotentialParams, cfg: &NhdConfig) -> Result<(Spectrum, DMatrix<f64>)> {
    let h = hamiltonian(p, cfg)?;
    let r = eigh_dense(&h, true)?;
    let spectrum = spectrum_from(p, cfg, &r.values);
    let vectors = r.vectors.expect("requested");
    let coeffs = vectors.columns(0, spectrum.len()).into_owned();
    Ok((spectrum, coeffs))
}

/// `sum_n c_n phi_n(x)` on `xs`, normalized and sign-fixed. The basis is
/// orthonormal in `dx`; the normalized Laguerre recursion is rescaled on the
/// fly so that large `y` does not overflow.
pub fn nhd_wavefunction(p: &PotentialParams, cfg: &NhdConfig, coeffs: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    cfg.validate()?;
    if coeffs.len() != cfg.basis_size {
        return Err(Error::Contract(format!(
            "{} coefficients for a basis of {}",
            coeffs.len(),
            cfg.basis_size
        )));
    }
    let r = rho(p)?;
    let g = cfg.gamma;
    let mut psi = Vec::with_capacity(xs.len());
    for &x in xs {
        let ln_y = r.ln() + 0.5 * p.lambda * x;
        let y = ln_y.exp();
        let mut ln_scale = 0.5 * (g + 1.0) * ln_y - 0.5 * y - 0.5 * ln_gamma(g + 1.0) + 0.5 * (0.5 * p.lambda).ln();
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut sum = coeffs[0];
        for n in 0..coeffs.len() - 1 {
            let nf = n as f64;
            let c = 2.0 * nf + g + 1.0;
            let d_n = (nf * (nf + g)).sqrt();
            let d_next = ((nf + 1.0) * (nf + 1.0 + g)).sqrt();
            let next = ((c - y) * cur - d_n * prev) / d_next;
            prev = cur;
            cur = next;
            sum += coeffs[n + 1] * cur;
            if cur.abs() > 1e100 {
                prev *= 1e-100;
                cur *= 1e-100;
                sum *= 1e-100;
                ln_scale += 100.0 * std::f64::consts::LN_10;
            }
        }
        psi.push(sum * ln_scale.exp());
    }
    normalize_wavefunction(xs, &mut psi)?;
    Ok(psi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauRow {
    pub gamma: f64,
    pub spectrum: Spectrum,
    /// `max_n |E_n(gamma_next) - E_n(gamma_prev)|`; infinite at the ends of
    /// the scan or where the level count changes.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauScan {
    pub rows: Vec<PlateauRow>,
    pub recommended: Option<f64>,
}

impl PlateauScan {
    /// Recommended gamma, falling back to the one with the most levels.
    pub fn best_gamma(&self) -> f64 {
        self.recommended.unwrap_or_else(|| {
            self.rows
                .iter()
                .max_by_key(|r| r.spectrum.len())
                .map(|r| r.gamma)
                .unwrap_or(1.0)
        })
    }
}

/// `gamma in {-0.75, -0.5, ..., 4.0}`.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=19).map(|i| -0.75 + 0.25 * i as f64).collect()
}

pub fn plateau_scan(p: &PotentialParams, size: usize, gammas: &[f64]) -> Result<PlateauScan> {
    if gammas.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "a plateau scan needs at least 3 gamma values, got {}",
            gammas.len()
        )));
    }
    let spectra = gammas
        .par_iter()
        .map(|&g| nhd_spectrum(p, &NhdConfig::new(size, g)))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<PlateauRow> = gammas
        .iter()
        .zip(spectra)
        .map(|(&gamma, spectrum)| PlateauRow {
            gamma,
            spectrum,
            score: f64::INFINITY,
        })
        .collect();
    for i in 1..rows.len() - 1 {
        let (a, b, c) = (&rows[i - 1].spectrum, &rows[i].spectrum, &rows[i + 1].spectrum);
        if a.len() != b.len() || b.len() != c.len() || b.is_empty() {
            continue;
        }
        let score = a
            .levels
            .iter()
            .zip(&c.levels)
            .map(|(x, y)| (x.energy - y.energy).abs())
            .fold(0.0, f64::max);
        rows[i].score = score;
    }
    // Truncated-basis eigenvalues sit above the exact ones, so a gamma that
    // shows more bound levels resolves the spectrum better. Only rows with the
    // largest scored level count compete.
    let most = rows
        .iter()
        .filter(|r| r.score.is_finite())
        .map(|r| r.spectrum.len())
        .max();
    let recommended = rows
        .iter()
        .filter(|r| r.score.is_finite() && Some(r.spectrum.len()) == most)
        .min_by(|a, b| a.score.total_cmp(&b.score))
        .map(|r| r.gamma);
    Ok(PlateauScan { rows, recommended })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h0_entries() {
        let cfg = NhdConfig::new(10, 1.0);
        let h = h0_matrix(&cfg, 1.0).unwrap();
        assert!((h.diag()[0] - 0.25).abs() < 1e-15);
        let min = eigh_tridiag(&h0_matrix(&NhdConfig::new(200, 1.0), 1.0).unwrap(), false)
            .unwrap()
            .values[0];
        assert!(min > 0.0);
    }

    #[test]
    fn single_node() {
        let r = quadrature_rule(&NhdConfig::new(1, 1.0)).unwrap();
        assert_eq!(r.nodes, vec![2.0]);
    }

    #[test]
    fn uq_vanishes_without_short_range_terms() {
        let p = PotentialParams::new(0.0, 0.0, 1.0, 0.3);
        let u = uq_matrix(&p, &NhdConfig::new(20, 1.0)).unwrap();
        assert!(u.amax() == 0.0);
    }

    #[test]
    fn short_range_vanishes_at_left() {
        let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
        assert_eq!(short_range(&p, 0.0), 0.0);
        assert!(short_range(&p, 1e-20).abs() < 1e-15);
    }

    #[test]
    fn reference_ground_state() {
        let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
        let s = nhd_spectrum(&p, &NhdConfig::new(200, 2.0)).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s.energies()[0] + 6.725966329).abs() < 1e-8);
    }

    #[test]
    fn needs_confinement() {
        let p = PotentialParams::new(2.0, -12.0, 0.0, 0.2);
        assert!(nhd_spectrum(&p, &NhdConfig::new(50, 1.0)).is_err());
    }

    #[test]
    fn plateau_needs_three() {
        let p = PotentialParams::new(2.0, -12.0, 1.0, 0.2);
        assert!(matches!(
            plateau_scan(&p, 50, &[1.0, 2.0]),
            Err(Error::InsufficientData(_))
        ));
    }
}
