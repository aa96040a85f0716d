//! Certified two-sided brackets for the s-joint spectral radius of linear
//! cocycles over subshifts of finite type.
//!
//! The crate is organized around four layers:
//!
//! * [`linalg`] — per-operator spectral primitives: singular values,
//!   eigenvalue moduli, volume growth `V_s`, the singular value functions
//!   `phi^s`, and the per-operator radius `rho_s` with its logarithm `r_s`.
//! * [`compact`] — finite-rank truncation models of compact operators on
//!   sequence space, with closed-form tail error bounds.
//! * [`dynamics`] — subshifts of finite type, admissible-word and
//!   periodic-orbit enumeration, locally constant (window) cocycles and
//!   their products, the Hölder norm, and Markov trajectory sampling.
//! * [`radii`] — the headline quantities: certified upper bounds from
//!   subadditive word suprema, certified lower bounds from periodic
//!   orbits, two-sided brackets, Lyapunov-sum identities, subadditive
//!   (Kingman) averages along trajectories, continuity probes, and
//!   level-set root finding in `s`.
//!
//! All operations are pure functions of their inputs; sampled operations
//! take explicit seeds and are reproducible bit-for-bit.

pub mod compact;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod radii;

pub use compact::{CoefficientFamily, CompactModel, ConvergenceRow, ModelKind, Truncation};
pub use dynamics::{
    admissible_words, format_symbols, parse_symbols, periodic_orbits, sample_trajectory,
    PeriodicOrbit, Subshift, WindowCocycle, Word,
};
pub use error::{Error, Result};
pub use linalg::{subspace_oracle, EigenModuli, Operator, SingularSpectrum, SubspaceEstimates};
pub use radii::{
    bracket, continuity_probe, corollary_estimate, find_s_for_level, kingman_estimate,
    lower_estimate, lyapunov_sum_periodic, upper_estimate, upper_estimate_table, upper_from_depths,
    ContinuityReport, ContinuityRow, DepthEntry, KingmanPoint, LevelSetResult, LowerEstimate,
    RadiusBracket, UpperEstimate,
};
