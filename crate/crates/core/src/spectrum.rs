use std::fmt;

use serde::Serialize;

use crate::potential::PotentialParams;

/// Solver that produced a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pps,
    Nhd,
    Fdm,
    Diag,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pps => "pps",
            Method::Nhd => "nhd",
            Method::Fdm => "fdm",
            Method::Diag => "diag",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-level notes attached by a solver.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Diagnostic {
    /// Laguerre basis parameter used.
    Gamma { value: f64 },
    /// The level decays more slowly than the basis tail; truncation affects
    /// it most.
    NearThreshold,
    /// Interpolation support and the mismatch `|B(E) - B|` at the result.
    Fit { support: usize, residual: f64 },
    /// Finite-difference step.
    GridStep { h: f64 },
    Richardson,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Gamma { value } => write!(f, "gamma={value}"),
            Diagnostic::NearThreshold => f.write_str("near_threshold"),
            Diagnostic::Fit { support, residual } => write!(f, "support={support};residual={residual:.3e}"),
            Diagnostic::GridStep { h } => write!(f, "h={h:.6e}"),
            Diagnostic::Richardson => f.write_str("richardson"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub index: usize,
    pub energy: f64,
    pub diagnostics: Vec<Diagnostic>,
}

impl Level {
    pub fn is_near_threshold(&self) -> bool {
        self.diagnostics.contains(&Diagnostic::NearThreshold)
    }

    /// Diagnostics joined with `;`.
    pub fn diagnostics_string(&self) -> String {
        self.diagnostics
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Bound-state energies in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub method: Method,
    pub params: PotentialParams,
    pub levels: Vec<Level>,
}

impl Spectrum {
    /// Builds a spectrum from unordered `(energy, diagnostics)` pairs.
    pub fn from_levels(method: Method, params: PotentialParams, mut raw: Vec<(f64, Vec<Diagnostic>)>) -> Self {
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let levels = raw
            .into_iter()
            .enumerate()
            .map(|(index, (energy, diagnostics))| Level {
                index,
                energy,
                diagnostics,
            })
            .collect();
        Self { method, params, levels }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}
