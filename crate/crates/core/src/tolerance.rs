//! Numerical tolerances shared by the whole pipeline.

use serde::{Deserialize, Serialize};

/// Environment variable holding a multiplier applied to every tolerance.
pub const TOL_SCALE_ENV: &str = "TWISTDECOMP_TOL_SCALE";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `‖U†U − I‖` bound for unitary matrices and `|z| − 1` for unit scalars.
    pub unitary: f64,
    /// Normalization and cocycle identity for numeric cocycles.
    pub cocycle: f64,
    /// Distance to a lattice point below which a numeric cocycle entry is snapped.
    pub snap: f64,
    /// Defining relation of a projective representation over an exact cocycle.
    pub rep: f64,
    /// Defining relation over a numeric cocycle, which carries its own error.
    pub rep_numeric: f64,
    /// Character comparisons, inner products and multiplicities.
    pub character: f64,
    /// Deviation from a scalar matrix when extracting induced cocycle values.
    pub scalar: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitary: 1e-9,
            cocycle: 1e-8,
            snap: 1e-6,
            rep: 1e-8,
            rep_numeric: 1e-6,
            character: 1e-6,
            scalar: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerances {
            unitary: self.unitary * factor,
            cocycle: self.cocycle * factor,
            snap: self.snap * factor,
            rep: self.rep * factor,
            rep_numeric: self.rep_numeric * factor,
            character: self.character * factor,
            scalar: self.scalar * factor,
        }
    }

    /// Defaults widened for single precision.
    pub fn single_precision() -> Self {
        Tolerances::default().scaled(1e4)
    }

    /// Defaults for `f64`, widened defaults for anything less precise.
    pub fn for_scalar<T: crate::scalar::Real>() -> Self {
        if T::epsilon().to_f64().unwrap_or(1.0) > 1e-10 {
            Tolerances::single_precision()
        } else {
            Tolerances::default()
        }
    }

    /// Defaults scaled by `TWISTDECOMP_TOL_SCALE` when it holds a positive float.
    pub fn from_env() -> Self {
        match std::env::var(TOL_SCALE_ENV).ok().and_then(|s| s.trim().parse::<f64>().ok()) {
            Some(f) if f > 0.0 && f.is_finite() => Tolerances::default().scaled(f),
            _ => Tolerances::default(),
        }
    }

    pub fn all_positive(&self) -> bool {
        [
            self.unitary,
            self.cocycle,
            self.snap,
            self.rep,
            self.rep_numeric,
            self.character,
            self.scalar,
        ]
        .iter()
        .all(|t| *t > 0.0 && t.is_finite())
    }
}
