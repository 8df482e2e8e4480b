use serde::{Deserialize, Serialize};

use crate::numkit::C64;

/// Verdict for one instance of an identity `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    /// `abs_err / (1 + |lhs| + |rhs|)`.
    pub rel_err: f64,
    /// Relative gap between the coefficient-sum and operator-algebra
    /// evaluations of the two sides.
    pub path_err: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(lhs: C64, rhs: C64, tol: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rel_err = abs_err / (1.0 + lhs.norm() + rhs.norm());
        IdentityReport { lhs, rhs, abs_err, rel_err, path_err: 0.0, pass: rel_err <= tol }
    }

    pub fn real(lhs: f64, rhs: f64, tol: f64) -> Self {
        Self::new(C64::new(lhs, 0.0), C64::new(rhs, 0.0), tol)
    }

    /// Records how far a second evaluation route lands from the first.
    pub fn with_path(mut self, lhs_alt: C64, rhs_alt: C64) -> Self {
        let denom = 1.0 + self.lhs.norm() + self.rhs.norm();
        self.path_err = (self.lhs - lhs_alt).norm().max((self.rhs - rhs_alt).norm()) / denom;
        self
    }
}

/// Verdict for `lhs ≤ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    /// `1 + |lhs| + |rhs|`.
    pub scale: f64,
    pub pass: bool,
}

impl InequalityReport {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        let scale = 1.0 + lhs.abs() + rhs.abs();
        InequalityReport { lhs, rhs, margin, scale, pass: margin >= -tol * scale }
    }

    pub fn relative_margin(&self) -> f64 {
        self.margin / self.scale
    }
}
