//! Potential parameter spectrum.
//!
//! `B` enters the wave operator only through `D`, on the diagonal, so at a
//! trial energy `E` the eigenvalues of the matrix `T(E)` from
//! [`crate::tra::wave_operator`] are exactly the values of `D`, hence of `B`,
//! for which `E` is an eigenenergy. Scanning `E` and inverting the curves
//! `B_n(E)` at the physical `B` yields the spectrum.
//!
//! Within a row the values are sorted ascending in `B`, so rank `n` tracks
//! level `n`: the ground state needs the deepest well.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh_tridiag, SymTridiag};
use crate::polys::{hbar_eval, jacobi_norm, HbarParams, JacobiParams};
use crate::potential::{potential_minimum, pps_gamma_from_d, to_uparams, PotentialParams};
use crate::spectrum::{Diagnostic, Method, Spectrum};
use crate::tra::{assemble_wavefunction, complete_uparams, wave_operator, TraBasisState, TraCoeffs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// Fritsch-Carlson monotone piecewise cubic.
    MonotoneCubic,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PpsConfig {
    pub e_min: f64,
    pub e_max: f64,
    pub m_points: usize,
    /// Cap on the matrix size; the per-energy basis bound usually binds first.
    pub n_requested: usize,
    pub fit_kind: FitKind,
    /// Polish each fitted energy by root finding on the exact `B_n(E)`,
    /// bracketed by the neighbouring scan rows.
    pub refine: bool,
}

impl PpsConfig {
    pub fn new(e_min: f64, e_max: f64) -> Self {
        Self {
            e_min,
            e_max,
            m_points: 200,
            n_requested: 1000,
            fit_kind: FitKind::MonotoneCubic,
            refine: true,
        }
    }

    /// `[V_min + 1e-6, -1e-6]`, or `None` when the potential has no well
    /// below its asymptotes.
    pub fn default_window(p: &PotentialParams) -> Result<Option<(f64, f64)>> {
        let top = p.v_plus_infinity().min(0.0) - 1e-6;
        Ok(match potential_minimum(p)? {
            Some(vmin) if vmin + 1e-6 < top => Some((vmin + 1e-6, top)),
            _ => None,
        })
    }

    fn validate(&self) -> Result<()> {
        if !(self.e_min < self.e_max && self.e_max < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scan window [{}, {}] must satisfy e_min < e_max < 0",
                self.e_min, self.e_max
            )));
        }
        if self.m_points < 2 {
            return Err(Error::InvalidParameter("a scan needs at least two energies".into()));
        }
        if self.n_requested == 0 {
            return Err(Error::InvalidParameter("n_requested must be positive".into()));
        }
        Ok(())
    }
}

/// `B` values at one trial energy, ascending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PpsRow {
    pub energy: f64,
    pub b_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PpsTable {
    pub params: PotentialParams,
    pub n_requested: usize,
    pub fit_kind: FitKind,
    /// Ascending in energy.
    pub rows: Vec<PpsRow>,
}

/// `T(E)` on the largest basis allowed at `E`, capped at `n`.
pub fn build_t(p: &PotentialParams, energy: f64, n: usize) -> Result<SymTridiag> {
    let u = complete_uparams(&to_uparams(p)?, energy, p.lambda)?;
    let size = TraBasisState::new(&u)?.operator_size().min(n);
    if size == 0 {
        return Err(Error::BasisExhausted { energy });
    }
    wave_operator(&u, size)
}

/// Ascending `B` values that make `energy` exact.
pub fn b_values_at(p: &PotentialParams, energy: f64, n_requested: usize) -> Result<Vec<f64>> {
    let t = build_t(p, energy, n_requested)?;
    let mut b: Vec<f64> = eigh_tridiag(&t, false)?
        .values
        .iter()
        .map(|&d| pps_gamma_from_d(d, p))
        .collect();
    b.sort_by(f64::total_cmp);
    Ok(b)
}

pub fn pps_scan(p: &PotentialParams, cfg: &PpsConfig) -> Result<PpsTable> {
    cfg.validate()?;
    to_uparams(p)?;
    let step = (cfg.e_max - cfg.e_min) / (cfg.m_points - 1) as f64;
    let rows = (0..cfg.m_points)
        .into_par_iter()
        .map(|k| {
            let energy = if k + 1 == cfg.m_points {
                cfg.e_max
            } else {
                cfg.e_min + step * k as f64
            };
            match b_values_at(p, energy, cfg.n_requested) {
                Ok(b_values) => Ok(Some(PpsRow { energy, b_values })),
                Err(Error::BasisExhausted { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<PpsRow> = rows.into_iter().flatten().collect();
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(PpsTable {
        params: *p,
        n_requested: cfg.n_requested,
        fit_kind: cfg.fit_kind,
        rows,
    })
}

/// Maximal runs of consecutive rows carrying rank `n` along which `B` is
/// strictly monotone. Each run is returned as `(B, E)` pairs ascending in `B`.
fn segments(table: &PpsTable, n: usize) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut cur: Vec<(f64, f64)> = Vec::new();
    let mut dir = 0.0f64;
    let flush = |cur: &mut Vec<(f64, f64)>, out: &mut Vec<Vec<(f64, f64)>>| {
        if !cur.is_empty() {
            let mut seg = std::mem::take(cur);
            seg.sort_by(|a, b| a.0.total_cmp(&b.0));
            out.push(seg);
        }
    };
    for row in &table.rows {
        let Some(&b) = row.b_values.get(n) else {
            flush(&mut cur, &mut out);
            dir = 0.0;
            continue;
        };
        if let Some(&(prev_b, prev_e)) = cur.last() {
            let d = (b - prev_b).signum();
            if d == 0.0 || (dir != 0.0 && d != dir) {
                flush(&mut cur, &mut out);
                cur.push((prev_b, prev_e));
                dir = 0.0;
                if d == 0.0 {
                    cur.clear();
                }
            } else {
                dir = d;
            }
        }
        cur.push((b, row.energy));
    }
    flush(&mut cur, &mut out);
    out
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    if n == 2 {
        m[0] = delta[0];
        m[1] = delta[0];
        return m;
    }
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    m[0] = end(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    m
}

fn interpolate(seg: &[(f64, f64)], kind: FitKind, target: f64) -> f64 {
    let x: Vec<f64> = seg.iter().map(|s| s.0).collect();
    let y: Vec<f64> = seg.iter().map(|s| s.1).collect();
    let i = match x.partition_point(|&v| v <= target) {
        0 => 0,
        k if k >= x.len() => x.len() - 2,
        k => k - 1,
    };
    if x[i] == target {
        return y[i];
    }
    let h = x[i + 1] - x[i];
    let t = (target - x[i]) / h;
    match kind {
        FitKind::Linear => y[i] + t * (y[i + 1] - y[i]),
        FitKind::MonotoneCubic => {
            let m = pchip_slopes(&x, &y);
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * y[i]
                + (t3 - 2.0 * t2 + t) * h * m[i]
                + (-2.0 * t3 + 3.0 * t2) * y[i + 1]
                + (t3 - t2) * h * m[i + 1]
        }
    }
}

/// Result of fitting one level: the energy, its support and the scan rows
/// bracketing it.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Fit {
    energy: f64,
    support: usize,
    bracket: (f64, f64),
}

fn fit(table: &PpsTable, n: usize, b_target: f64) -> Result<Fit> {
    let segs = segments(table, n);
    let support: usize = segs.iter().map(Vec::len).sum();
    if support < 4 {
        return Err(Error::InsufficientData(format!(
            "level {n} appears in {support} scan rows, at least 4 are needed"
        )));
    }
    let seg = segs
        .iter()
        .filter(|s| s.len() >= 2)
        .find(|s| s[0].0 <= b_target && b_target <= s[s.len() - 1].0)
        .ok_or(Error::NotFound { level: n, target: b_target })?;
    let energy = interpolate(seg, table.fit_kind, b_target);
    let i = seg.partition_point(|s| s.0 <= b_target).clamp(1, seg.len() - 1);
    let (e0, e1) = (seg[i - 1].1, seg[i].1);
    Ok(Fit {
        energy,
        support: seg.len(),
        bracket: (e0.min(e1), e0.max(e1)),
    })
}

/// Energy of level `n` at `B = b_target` by interpolating the table.
pub fn pps_fit_level(table: &PpsTable, n: usize, b_target: f64) -> Result<f64> {
    Ok(fit(table, n, b_target)?.energy)
}

fn rank_b(p: &PotentialParams, energy: f64, n: usize, cap: usize) -> Option<f64> {
    b_values_at(p, energy, cap).ok()?.get(n).copied()
}

/// Illinois-modified regula falsi on `B_n(E) - b_target` inside the bracket.
/// Returns `None` if the rank disappears inside the bracket.
fn refine(table: &PpsTable, n: usize, b_target: f64, bracket: (f64, f64)) -> Option<f64> {
    let p = &table.params;
    let g = |e: f64| rank_b(p, e, n, table.n_requested).map(|b| b - b_target);
    let (mut a, mut b) = bracket;
    let (mut fa, mut fb) = (g(a)?, g(b)?);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c > a.min(b) && c < a.max(b) { c } else { 0.5 * (a + b) };
        let fc = g(c)?;
        if fc == 0.0 || (b - a).abs() < 1e-14 * c.abs().max(1e-3) {
            return Some(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (a + b))
}

/// Bound-state energies at the physical `B` of `p`.
pub fn pps_spectrum(p: &PotentialParams, cfg: &PpsConfig) -> Result<Spectrum> {
    let table = match pps_scan(p, cfg) {
        Ok(t) => t,
        Err(Error::EmptyTable) => return Ok(Spectrum::from_levels(Method::Pps, *p, Vec::new())),
        Err(e) => return Err(e),
    };
    let max_rank = table.rows.iter().map(|r| r.b_values.len()).max().unwrap_or(0);
    let mut raw = Vec::new();
    for n in 0..max_rank {
        let f = match fit(&table, n, p.b) {
            Ok(f) => f,
            Err(Error::NotFound { .. }) | Err(Error::InsufficientData(_)) => continue,
            Err(e) => return Err(e),
        };
        let energy = if cfg.refine {
            refine(&table, n, p.b, f.bracket).unwrap_or(f.energy)
        } else {
            f.energy
        };
        if !(energy < 0.0) {
            continue;
        }
        let residual = rank_b(p, energy, n, cfg.n_requested).map_or(f64::NAN, |b| (b - p.b).abs());
        raw.push((
            energy,
            vec![Diagnostic::Fit {
                support: f.support,
                residual,
            }],
        ));
    }
    Ok(Spectrum::from_levels(Method::Pps, *p, raw))
}

/// Expansion coefficients at an eigenenergy from the three-term recursion,
/// normalized to unit sum of squares.
pub fn pps_wavefunction_coeffs(p: &PotentialParams, energy: f64) -> Result<TraCoeffs> {
    let u = complete_uparams(&to_uparams(p)?, energy, p.lambda)?;
    let size = TraBasisState::new(&u)?.operator_size();
    if size == 0 {
        return Err(Error::BasisExhausted { energy });
    }
    let mu = u.mu.expect("completed");
    let mut f = if u.f == 0.0 {
        // diagonal wave operator: the state is the basis function with a_n = 0
        let k = (0..size)
            .min_by(|&i, &j| {
                let ai = crate::tra::a_n_coeff(&u, i).unwrap_or(f64::INFINITY).abs();
                let aj = crate::tra::a_n_coeff(&u, j).unwrap_or(f64::INFINITY).abs();
                ai.total_cmp(&aj)
            })
            .unwrap_or(0);
        let mut v = vec![0.0; size];
        v[k] = 1.0;
        v
    } else {
        let h = HbarParams::new(mu, u.nu, u.ell.expect("completed"), u.f);
        let xi = hbar_eval(&h, size - 1)?;
        let jp = JacobiParams::new(mu, u.nu, size - 1)?;
        (0..size)
            .map(|k| Ok(jacobi_norm(&jp, k)? * xi[k]))
            .collect::<Result<Vec<_>>>()?
    };
    let f0 = f[0].abs();
    let peak = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let unstable = !peak.is_finite() || (f0 > 0.0 && peak > 1e12 * f0);
    let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 && norm.is_finite() {
        for v in &mut f {
            *v /= norm;
        }
    }
    Ok(TraCoeffs { f, energy, unstable })
}

/// Eigenfunction at `energy` sampled on `xs`, normalized and sign-fixed.
pub fn pps_wavefunction(p: &PotentialParams, energy: f64, xs: &[f64]) -> Result<Vec<f64>> {
    let coeffs = pps_wavefunction_coeffs(p, energy)?;
    let u = complete_uparams(&to_uparams(p)?, energy, p.lambda)?;
    assemble_wavefunction(&u, &coeffs, p, xs)
}
