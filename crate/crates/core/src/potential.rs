//! The potential, its parameter maps and its geometry.
//!
//! With `u = e^{lx}` and `z = 1/(u + q)` the force is
//! `dV/dx = -l u h(z)` where `h(z) = 2A z^3 + B z^2 - C`, and `x` runs over the
//! whole real line as `z` runs over `(0, 1/q)`. Extrema are the roots of `h`
//! in that interval; a root is a minimum when `h'(z) > 0`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Physical parameters. `q > 0`, `lambda > 0`, `c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q: f64,
    pub lambda: f64,
}

impl PotentialParams {
    /// Parameters with `lambda = 1`.
    pub fn new(a: f64, b: f64, c: f64, q: f64) -> Self {
        Self { a, b, c, q, lambda: 1.0 }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.c, self.q, self.lambda];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.q <= 0.0 {
            return Err(Error::InvalidParameter(format!("q = {} must be positive", self.q)));
        }
        if self.lambda <= 0.0 {
            return Err(Error::InvalidParameter(format!("lambda = {} must be positive", self.lambda)));
        }
        if self.c < 0.0 {
            return Err(Error::InvalidParameter(format!("C = {} must be non-negative", self.c)));
        }
        Ok(())
    }

    /// Limit of `V` as `x -> +inf` (infinite when `C > 0`).
    pub fn v_plus_infinity(&self) -> f64 {
        if self.c > 0.0 {
            f64::INFINITY
        } else {
            -(self.a + self.q * self.b) / (self.q * self.q)
        }
    }
}

/// `V(x)`, written so that it does not cancel catastrophically as
/// `x -> -inf`.
pub fn eval_potential(p: &PotentialParams, x: f64) -> f64 {
    let u = (p.lambda * x).exp();
    if u.is_infinite() {
        return p.v_plus_infinity();
    }
    let q = p.q;
    let z = 1.0 / (u + q);
    u * (p.c - p.a * (z + q * z * z) / (q * q) - p.b * z / q)
}

/// Parameters on the tridiagonal side. `mu` and `ell` depend on the energy
/// and are filled in by [`crate::tra::complete_uparams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UParams {
    pub mu: Option<f64>,
    pub nu: f64,
    pub d: f64,
    pub f: f64,
    pub ell: Option<f64>,
}

/// Lowest `A` for which the Jacobi basis exists, `-lambda^2 q^2 / 8`.
pub fn tra_limit(q: f64, lambda: f64) -> f64 {
    -lambda * lambda * q * q / 8.0
}

pub fn to_uparams(p: &PotentialParams) -> Result<UParams> {
    p.validate()?;
    let (q, l2) = (p.q, p.lambda * p.lambda);
    let limit = tra_limit(q, p.lambda);
    if p.a < limit {
        return Err(Error::TraInadmissible { a: p.a, limit });
    }
    let nu = -(8.0 * p.a / (l2 * q * q) + 1.0).max(0.0).sqrt();
    let d = q * p.c / l2 - 2.0 * p.b / (q * l2) - 4.0 * p.a / (q * q * l2);
    let f = q * p.c / l2;
    Ok(UParams {
        mu: None,
        nu,
        d,
        f,
        ell: None,
    })
}

/// Inverse of [`to_uparams`] at fixed `q` and `lambda`.
pub fn from_uparams(u: &UParams, q: f64, lambda: f64) -> PotentialParams {
    let l2 = lambda * lambda;
    let a = l2 * q * q * (u.nu * u.nu - 1.0) / 8.0;
    let c = l2 * u.f / q;
    let partial = PotentialParams { a, b: 0.0, c, q, lambda };
    PotentialParams {
        b: pps_gamma_from_d(u.d, &partial),
        ..partial
    }
}

/// The value of `B` that maps to `d`, all other parameters fixed.
pub fn pps_gamma_from_d(d: f64, p: &PotentialParams) -> f64 {
    let q = p.q;
    q * q * p.c / 2.0 - 2.0 * p.a / q - q * p.lambda * p.lambda * d / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub x0: f64,
    pub z0: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Extrema plus flags for roots discarded as degenerate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremaReport {
    pub extrema: Vec<Extremum>,
    /// A root sat within tolerance of `z = 0` or `z = 1/q`.
    pub boundary_degenerate: bool,
    /// Two roots merged into an inflection point.
    pub merged_root: bool,
}

const ENDPOINT_TOL: f64 = 1e-10;
const MERGE_TOL: f64 = 1e-12;

fn cubic(p: &PotentialParams, z: f64) -> f64 {
    ((2.0 * p.a * z + p.b) * z) * z - p.c
}

fn cubic_slope(p: &PotentialParams, z: f64) -> f64 {
    (6.0 * p.a * z + 2.0 * p.b) * z
}

fn bisect_root(p: &PotentialParams, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = cubic(p, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = cubic(p, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    // one Newton polish, kept only if it improves the residual
    let slope = cubic_slope(p, z);
    if slope != 0.0 {
        let zn = z - cubic(p, z) / slope;
        if zn > lo && zn < hi && cubic(p, zn).abs() < cubic(p, z).abs() {
            return zn;
        }
    }
    z
}

/// Extrema sorted by position together with degeneracy flags.
///
/// `h` is monotone on either side of its interior critical point
/// `z_c = -B/(3A)`, so every root is bracketed by a sign change on one of at
/// most two pieces of `(0, 1/q)`.
pub fn find_extrema_report(p: &PotentialParams) -> Result<ExtremaReport> {
    p.validate()?;
    let mut report = ExtremaReport {
        extrema: Vec::new(),
        boundary_degenerate: false,
        merged_root: false,
    };
    if p.a == 0.0 && p.b == 0.0 {
        return Ok(report);
    }
    let z_max = 1.0 / p.q;
    let mut breaks = vec![0.0];
    if p.a != 0.0 {
        let zc = -p.b / (3.0 * p.a);
        if zc > 0.0 && zc < z_max {
            let scale = (2.0 * p.a * zc.powi(3)).abs().max((p.b * zc * zc).abs()).max(p.c.abs());
            if cubic(p, zc).abs() <= MERGE_TOL * scale {
                report.merged_root = true;
                // an inflection point: the pair of extrema has not formed yet
                return Ok(report);
            }
            breaks.push(zc);
        }
    }
    breaks.push(z_max);

    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (f_lo, f_hi) = (cubic(p, lo), cubic(p, hi));
        let crosses = f_lo != 0.0 && f_hi != 0.0 && (f_lo > 0.0) != (f_hi > 0.0);
        if crosses {
            roots.push(bisect_root(p, lo, hi));
        } else if f_hi == 0.0 && hi == z_max {
            report.boundary_degenerate = true;
        }
    }

    let end_tol = ENDPOINT_TOL * z_max.max(1.0);
    for z in roots {
        if z < end_tol || z > z_max - end_tol {
            report.boundary_degenerate = true;
            continue;
        }
        let x0 = (1.0 / z - p.q).ln() / p.lambda;
        let kind = if cubic_slope(p, z) > 0.0 {
            ExtremumKind::Minimum
        } else {
            ExtremumKind::Maximum
        };
        report.extrema.push(Extremum {
            x0,
            z0: z,
            value: eval_potential(p, x0),
            kind,
        });
    }
    report.extrema.sort_by(|a, b| a.x0.total_cmp(&b.x0));
    Ok(report)
}

pub fn find_extrema(p: &PotentialParams) -> Result<Vec<Extremum>> {
    Ok(find_extrema_report(p)?.extrema)
}

/// Deepest minimum value, if `V` has an interior minimum.
pub fn potential_minimum(p: &PotentialParams) -> Result<Option<f64>> {
    Ok(find_extrema(p)?
        .iter()
        .filter(|e| e.kind == ExtremumKind::Minimum)
        .map(|e| e.value)
        .reduce(f64::min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SpectralClass {
    BoundOnly,
    ResonanceOnly,
    Mixed,
    NoStates,
}

impl SpectralClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SpectralClass::BoundOnly => "BoundOnly",
            SpectralClass::ResonanceOnly => "ResonanceOnly",
            SpectralClass::Mixed => "Mixed",
            SpectralClass::NoStates => "NoStates",
        }
    }
}

impl fmt::Display for SpectralClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Class of a confining (`C > 0`) configuration from the shape of its well.
pub fn classify(p: &PotentialParams) -> Result<SpectralClass> {
    p.validate()?;
    if p.c == 0.0 {
        return Err(Error::WrongBranch(
            "C = 0 is not confining; use classify_morse_branch".into(),
        ));
    }
    let ext = find_extrema(p)?;
    let min = ext.iter().find(|e| e.kind == ExtremumKind::Minimum).map(|e| e.value);
    let max = ext.iter().find(|e| e.kind == ExtremumKind::Maximum).map(|e| e.value);
    Ok(match (min, max) {
        (None, _) => SpectralClass::NoStates,
        (Some(vmin), None) => {
            if vmin < 0.0 {
                SpectralClass::BoundOnly
            } else {
                SpectralClass::NoStates
            }
        }
        (Some(vmin), Some(vmax)) => {
            if vmin < 0.0 {
                if vmax > 0.0 {
                    SpectralClass::Mixed
                } else {
                    SpectralClass::BoundOnly
                }
            } else {
                // two bracketed roots always have vmax > vmin; the degenerate
                // pair is the merged root, which find_extrema already reports
                // as no extrema
                SpectralClass::ResonanceOnly
            }
        }
    })
}

/// Class of a `C = 0` configuration: bound states exist when a minimum lies
/// below both asymptotes.
pub fn classify_morse_branch(p: &PotentialParams) -> Result<SpectralClass> {
    p.validate()?;
    if p.c != 0.0 {
        return Err(Error::WrongBranch("classify_morse_branch needs C = 0".into()));
    }
    let threshold = p.v_plus_infinity().min(0.0);
    let bound = find_extrema(p)?
        .iter()
        .any(|e| e.kind == ExtremumKind::Minimum && e.value < threshold);
    Ok(if bound {
        SpectralClass::BoundOnly
    } else {
        SpectralClass::NoStates
    })
}

/// Boundary of the bound-only region, where a root of the cubic reaches
/// `z = 1/q`: `2A = q^3 C - q B`.
pub fn boundary_blue_green(b: f64, c: f64, q: f64) -> f64 {
    (q * q * q * c - q * b) / 2.0
}

/// Where the two extrema merge, `B^3 = 27 A^2 C`. Independent of `q`.
pub fn boundary_red_grey(a: f64, c: f64) -> f64 {
    (27.0 * a * a * c).cbrt()
}

/// Where the minimum touches zero, `A = q^2 sqrt(BC) - q(B + q^2 C)`.
pub fn boundary_green_red(b: f64, c: f64, q: f64) -> Result<f64> {
    if b < 0.0 || c < 0.0 {
        return Err(Error::Domain(format!("needs B >= 0 and C >= 0, got B = {b}, C = {c}")));
    }
    Ok(q * q * (b * c).sqrt() - q * (b + q * q * c))
}

/// Where the classifier's minimum actually reaches zero at fixed `B >= 0`:
/// `A = 2q^2 sqrt(q^2 C^2 + BC) - qB - 2q^3 C`.
///
/// Solving `V(z0) = 0` together with the stationarity cubic gives
/// `B z0^2 = C (2 q z0 + 1)` and `A = -qB / (2 q z0 + 1)`. This is the curve
/// the `ResonanceOnly`/`Mixed` transition of [`classify`] follows, and it
/// differs from [`boundary_green_red`] away from `q -> 0`.
pub fn boundary_min_zero(b: f64, c: f64, q: f64) -> Result<f64> {
    if b < 0.0 || c < 0.0 {
        return Err(Error::Domain(format!("needs B >= 0 and C >= 0, got B = {b}, C = {c}")));
    }
    Ok(2.0 * q * q * (q * q * c * c + b * c).sqrt() - q * b - 2.0 * q * q * q * c)
}

/// Classes on a grid of `(A/C, B/C)`. `classes[i * b_over_c.len() + j]`
/// belongs to `(a_over_c[i], b_over_c[j])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub q: f64,
    pub c: f64,
    pub lambda: f64,
    pub a_over_c: Vec<f64>,
    pub b_over_c: Vec<f64>,
    pub classes: Vec<SpectralClass>,
}

impl PhaseGrid {
    pub fn get(&self, i_a: usize, i_b: usize) -> SpectralClass {
        self.classes[i_a * self.b_over_c.len() + i_b]
    }
}

/// Evenly spaced samples; a single sample sits at the start of the range.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| start + step * i as f64).collect()
        }
    }
}

pub fn phase_diagram_grid(
    a_range: (f64, f64),
    b_range: (f64, f64),
    n_a: usize,
    n_b: usize,
    c: f64,
    q: f64,
    lambda: f64,
) -> Result<PhaseGrid> {
    if n_a == 0 || n_b == 0 {
        return Err(Error::InvalidParameter("grid sizes must be positive".into()));
    }
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("phase diagrams need C > 0, got {c}")));
    }
    PotentialParams::new(0.0, 0.0, c, q).with_lambda(lambda).validate()?;
    let a_over_c = linspace(a_range.0, a_range.1, n_a);
    let b_over_c = linspace(b_range.0, b_range.1, n_b);
    let classes = (0..n_a * n_b)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n_b, k % n_b);
            let p = PotentialParams::new(a_over_c[i] * c, b_over_c[j] * c, c, q).with_lambda(lambda);
            classify(&p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseGrid {
        q,
        c,
        lambda,
        a_over_c,
        b_over_c,
        classes,
    })
}
