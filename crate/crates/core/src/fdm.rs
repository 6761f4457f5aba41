//! Finite-difference oracle.
//!
//! Second-order central differences on a uniform interior grid with Dirichlet
//! ends turn `-1/2 psi'' + V psi = E psi` into a symmetric tridiagonal
//! eigenproblem. Only the bottom of the spectrum is wanted, so eigenvalues
//! come from Sturm bisection and eigenvectors from inverse iteration.
//!
//! Auto-widening keeps the step fixed and moves the ends until the potential
//! has reached its asymptotes and the shallowest computed level has decayed by
//! many e-folds before each wall.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigvals_below, inverse_iteration, SymTridiag};
use crate::potential::{eval_potential, potential_minimum, PotentialParams};
use crate::spectrum::{Diagnostic, Method, Spectrum};
use crate::tra::normalize_wavefunction;

const LEFT_GUARD: f64 = 1e-8;
const RIGHT_FACTOR: f64 = 50.0;
/// Required `kappa * distance` between the classical turning point and a
/// wall for the shallowest level.
const TAIL_EFOLDS: f64 = 15.0;
const MAX_WIDENINGS: usize = 40;
/// Largest box, in units of `1/lambda`, the trial widening will try.
const MAX_EXTENT: f64 = 2000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdmConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub auto_widen: bool,
    pub richardson: bool,
    /// Scale of the deepest expected level for the right-hand guard; defaults
    /// to the depth of the well.
    pub e_expected: Option<f64>,
}

impl FdmConfig {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Self {
        Self {
            x_min,
            x_max,
            n_points,
            auto_widen: true,
            richardson: false,
            e_expected: None,
        }
    }

    pub fn with_richardson(self) -> Self {
        Self { richardson: true, ..self }
    }

    pub fn fixed(self) -> Self {
        Self {
            auto_widen: false,
            ..self
        }
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval [{}, {}] is empty",
                self.x_min, self.x_max
            )));
        }
        if self.n_points < 100 {
            return Err(Error::InvalidParameter(format!(
                "n_points = {} must be at least 100",
                self.n_points
            )));
        }
        Ok(())
    }

    /// Same step, new ends.
    fn resized(&self, x_min: f64, x_max: f64) -> Self {
        let h = self.step();
        let n = ((x_max - x_min) / h).round() as usize - 1;
        Self {
            x_min,
            x_max: x_min + h * (n + 1) as f64,
            n_points: n,
            ..*self
        }
    }
}

/// Interior grid points.
pub fn grid(cfg: &FdmConfig) -> Vec<f64> {
    let h = cfg.step();
    (1..=cfg.n_points).map(|i| cfg.x_min + h * i as f64).collect()
}

pub fn fdm_matrix(p: &PotentialParams, cfg: &FdmConfig) -> Result<SymTridiag> {
    let h = cfg.step();
    let k = 1.0 / (h * h);
    let diag = grid(cfg).iter().map(|&x| k + eval_potential(p, x)).collect();
    SymTridiag::new(diag, vec![-0.5 * k; cfg.n_points - 1])
}

/// All eigenvalues of the discretized problem below `e_cap` on a fixed grid.
pub fn fdm_eigenvalues_below(p: &PotentialParams, cfg: &FdmConfig, e_cap: f64) -> Result<Vec<f64>> {
    cfg.validate()?;
    Ok(eigvals_below(&fdm_matrix(p, cfg)?, e_cap))
}

/// Energies below which states are bound: `min(0, V(+inf))`.
fn threshold(p: &PotentialParams) -> f64 {
    p.v_plus_infinity().min(0.0)
}

fn widen_for_potential(p: &PotentialParams, cfg: FdmConfig) -> Result<FdmConfig> {
    let (mut lo, mut hi) = (cfg.x_min, cfg.x_max);
    let mut tries = 0;
    while eval_potential(p, lo).abs() >= LEFT_GUARD {
        lo -= lo.abs().max(5.0);
        tries += 1;
        if tries > MAX_WIDENINGS {
            return Err(Error::Domain("the potential does not vanish to the left".into()));
        }
    }
    tries = 0;
    if p.c > 0.0 {
        let depth = match cfg.e_expected {
            Some(e) => e.abs(),
            None => potential_minimum(p)?.map_or(1.0, |v| v.abs().max(1.0)),
        };
        while eval_potential(p, hi) <= RIGHT_FACTOR * depth {
            hi += 1.0 / p.lambda;
            tries += 1;
            if tries > 100 * MAX_WIDENINGS {
                return Err(Error::Domain("the potential never exceeds the right-hand guard".into()));
            }
        }
    } else {
        let v_inf = p.v_plus_infinity();
        while (eval_potential(p, hi) - v_inf).abs() >= LEFT_GUARD {
            hi += hi.abs().max(5.0);
            tries += 1;
            if tries > MAX_WIDENINGS {
                return Err(Error::Domain("the potential does not settle to the right".into()));
            }
        }
    }
    Ok(if lo != cfg.x_min || hi != cfg.x_max {
        cfg.resized(lo, hi)
    } else {
        cfg
    })
}

/// Walls needed for the shallowest level `e`, or `None` if the current ones
/// suffice.
fn widen_for_tail(p: &PotentialParams, cfg: &FdmConfig, e: f64) -> Option<FdmConfig> {
    let xs = grid(cfg);
    let allowed: Vec<usize> = (0..xs.len()).filter(|&i| eval_potential(p, xs[i]) < e).collect();
    let (&first, &last) = (allowed.first()?, allowed.last()?);
    let kappa_left = (-2.0 * e).sqrt();
    let need_left = xs[first] - TAIL_EFOLDS / kappa_left;
    let mut lo = cfg.x_min;
    let mut hi = cfg.x_max;
    if need_left < lo {
        lo = need_left - 1.0;
    }
    if p.c == 0.0 {
        let kappa_right = (2.0 * (p.v_plus_infinity() - e)).sqrt();
        let need_right = xs[last] + TAIL_EFOLDS / kappa_right;
        if need_right > hi {
            hi = need_right + 1.0;
        }
    }
    (lo != cfg.x_min || hi != cfg.x_max).then(|| cfg.resized(lo, hi))
}

/// Walls settled for every level already visible on `cfg`.
fn settle_tails(p: &PotentialParams, mut cur: FdmConfig, cap: f64) -> Result<(FdmConfig, usize)> {
    for _ in 0..MAX_WIDENINGS {
        let values = eigvals_below(&fdm_matrix(p, &cur)?, cap);
        let Some(&shallow) = values.last() else {
            return Ok((cur, 0));
        };
        match widen_for_tail(p, &cur, shallow) {
            Some(next) => cur = next,
            None => return Ok((cur, values.len())),
        }
    }
    Err(Error::Domain("auto-widening did not settle".into()))
}

/// Grid actually used after auto-widening (the input unchanged otherwise).
///
/// A level close to threshold may not show up at all in a box narrower than
/// its tail, so after the tails settle the box is doubled on the open sides
/// for as long as that uncovers new levels.
pub fn resolve_grid(p: &PotentialParams, cfg: &FdmConfig) -> Result<FdmConfig> {
    p.validate()?;
    cfg.validate()?;
    if !cfg.auto_widen {
        return Ok(*cfg);
    }
    let cap = threshold(p);
    let (mut cur, mut count) = settle_tails(p, widen_for_potential(p, *cfg)?, cap)?;
    loop {
        let w = cur.x_max - cur.x_min;
        if 2.0 * w * p.lambda > MAX_EXTENT {
            return Ok(cur);
        }
        let trial = if p.c == 0.0 {
            cur.resized(cur.x_min - 0.5 * w, cur.x_max + 0.5 * w)
        } else {
            cur.resized(cur.x_min - w, cur.x_max)
        };
        if eigvals_below(&fdm_matrix(p, &trial)?, cap).len() <= count {
            return Ok(cur);
        }
        (cur, count) = settle_tails(p, trial, cap)?;
    }
}

pub fn fdm_spectrum(p: &PotentialParams, cfg: &FdmConfig) -> Result<Spectrum> {
    let grid_cfg = resolve_grid(p, cfg)?;
    let cap = threshold(p);
    let coarse = eigvals_below(&fdm_matrix(p, &grid_cfg)?, cap);
    let h = grid_cfg.step();
    let (values, mut notes) = if grid_cfg.richardson {
        let fine_cfg = FdmConfig {
            n_points: 2 * grid_cfg.n_points + 1,
            ..grid_cfg
        };
        let fine = eigvals_below(&fdm_matrix(p, &fine_cfg)?, cap);
        let m = coarse.len().min(fine.len());
        let v: Vec<f64> = (0..m).map(|i| (4.0 * fine[i] - coarse[i]) / 3.0).collect();
        (v, vec![Diagnostic::Richardson])
    } else {
        (coarse, Vec::new())
    };
    notes.insert(0, Diagnostic::GridStep { h });
    let raw = values
        .into_iter()
        .filter(|&e| e < cap)
        .map(|e| (e, notes.clone()))
        .collect();
    Ok(Spectrum::from_levels(Method::Fdm, *p, raw))
}

/// Level `level` sampled on the grid returned alongside it. The ends are
/// included with `psi = 0`.
pub fn fdm_wavefunction(p: &PotentialParams, cfg: &FdmConfig, level: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let grid_cfg = resolve_grid(p, cfg)?;
    let t = fdm_matrix(p, &grid_cfg)?;
    let values = eigvals_below(&t, threshold(p));
    let e = *values.get(level).ok_or_else(|| {
        Error::Domain(format!("level {level} requested but only {} bound levels exist", values.len()))
    })?;
    let v = inverse_iteration(&t, e)?;
    let mut xs = vec![grid_cfg.x_min];
    xs.extend(grid(&grid_cfg));
    xs.push(grid_cfg.x_max);
    let mut psi = vec![0.0];
    psi.extend(v);
    psi.push(0.0);
    normalize_wavefunction(&xs, &mut psi)?;
    Ok((xs, psi))
}
