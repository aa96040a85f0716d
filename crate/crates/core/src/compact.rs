//! Finite-rank models of compact operators on sequence space.
//!
//! Two closed-form families are supported: diagonal operators (rich point
//! spectrum) and weighted shifts (quasinilpotent). Coefficients decay
//! geometrically or polynomially; this decay is exactly the compactness of
//! the modeled operator, and the declared tail bound gives an operator-norm
//! bound on the truncation error of every finite section.

use crate::error::{Error, Result};
use crate::linalg::Operator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// a_i on the diagonal: spectrum is the coefficient sequence itself.
    Diagonal,
    /// a_i on the subdiagonal ((i+1, i) entries): every truncation is
    /// nilpotent, modeling a quasinilpotent compact operator.
    WeightedShift,
}

/// Closed-form coefficient sequences with coefficients tending to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientFamily {
    /// a_i = c * q^i with |q| < 1.
    Geometric { c: f64, q: f64 },
    /// a_i = c * i^(-p) with p > 0.
    Power { c: f64, p: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactModel {
    pub kind: ModelKind,
    pub family: CoefficientFamily,
}

/// A leading principal finite section of a compact model.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncation {
    pub rank: usize,
    pub matrix: Operator,
    /// Upper bound on the operator norm of what was dropped; equals the
    /// tail bound at the first discarded coefficient.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub rank: usize,
    pub rho_s: f64,
    pub error_bound: f64,
}

impl CompactModel {
    pub fn new(kind: ModelKind, family: CoefficientFamily) -> Result<Self> {
        match family {
            CoefficientFamily::Geometric { c, q } => {
                if !c.is_finite() || !q.is_finite() {
                    return Err(Error::InvalidInput(
                        "geometric family parameters must be finite".into(),
                    ));
                }
                if q.abs() >= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "geometric ratio must satisfy |q| < 1 (compactness), got q = {q}"
                    )));
                }
            }
            CoefficientFamily::Power { c, p } => {
                if !c.is_finite() || !p.is_finite() {
                    return Err(Error::InvalidInput(
                        "power family parameters must be finite".into(),
                    ));
                }
                if p <= 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "power exponent must satisfy p > 0 (compactness), got p = {p}"
                    )));
                }
            }
        }
        Ok(Self { kind, family })
    }

    /// The i-th coefficient, 1-indexed.
    pub fn coefficient(&self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        match self.family {
            CoefficientFamily::Geometric { c, q } => c * q.powi(i as i32),
            CoefficientFamily::Power { c, p } => c * (i as f64).powf(-p),
        }
    }

    /// sup_{j >= i} |a_j|; both families have non-increasing |a_i|, so this
    /// is |a_i| in closed form.
    pub fn tail_bound(&self, i: usize) -> f64 {
        self.coefficient(i).abs()
    }

    /// Leading principal m x m section together with its tail error bound.
    pub fn truncate(&self, m: usize) -> Result<Truncation> {
        if m == 0 {
            return Err(Error::Domain("truncation rank must be >= 1".into()));
        }
        let matrix = match self.kind {
            ModelKind::Diagonal => {
                let coeffs: Vec<f64> = (1..=m).map(|i| self.coefficient(i)).collect();
                Operator::diagonal(&coeffs)?
            }
            ModelKind::WeightedShift => {
                let mut mat = nalgebra::DMatrix::zeros(m, m);
                for i in 1..m {
                    mat[(i, i - 1)] = self.coefficient(i);
                }
                Operator::from_matrix(mat)?
            }
        };
        // A diagonal section drops coefficients from a_{m+1} on; a shift
        // section already lacks the a_m link out of the m-th basis vector.
        let error = match self.kind {
            ModelKind::Diagonal => self.tail_bound(m + 1),
            ModelKind::WeightedShift => self.tail_bound(m),
        };
        Ok(Truncation {
            rank: m,
            matrix,
            error,
        })
    }

    /// rho_s of increasingly fine sections, with error bounds.
    pub fn spectral_convergence(&self, s: f64, ranks: &[usize]) -> Result<Vec<ConvergenceRow>> {
        if ranks.is_empty() {
            return Err(Error::Domain("rank list must be non-empty".into()));
        }
        if ranks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("ranks must be strictly increasing".into()));
        }
        ranks
            .iter()
            .map(|&m| {
                let truncation = self.truncate(m)?;
                Ok(ConvergenceRow {
                    rank: m,
                    rho_s: truncation.matrix.rho_s(s)?,
                    error_bound: truncation.error,
                })
            })
            .collect()
    }
}

impl Truncation {
    /// Zero-pads the section into a larger ambient dimension, so sections
    /// of different ranks can be compared in operator norm.
    pub fn embedded(&self, dim: usize) -> Result<Operator> {
        if dim < self.rank {
            return Err(Error::Domain(format!(
                "embedding dimension {dim} is smaller than the rank {}",
                self.rank
            )));
        }
        let mut mat = nalgebra::DMatrix::zeros(dim, dim);
        mat.view_mut((0, 0), (self.rank, self.rank))
            .copy_from(self.matrix.matrix());
        Operator::from_matrix(mat)
    }
}
