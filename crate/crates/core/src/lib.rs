//! Semigroup evolution of Gamow vectors, antilinear time reversal and the
//! extended spacetime-symmetry co-representations that relate the
//! preparation/registration and excitation/de-excitation time arrows.
//!
//! - [`resonance`]: poles, Gamow states and their labels
//! - [`semigroup`]: half-domain evolution branches and the unitary group
//! - [`antilinear`], [`symmetry`]: `Σ`, `R`, `T` for any spin and their checks
//! - [`transform`]: `R` acting on states, derived tables, cross-identification
//! - [`scenario`]: time/energy grids and tabular output
//! - [`cli`]: the `time-arrows` command
//!
//! ```
//! use time_arrows::{apply_r, canonical_state, evolve, make_pole, ArrowConvention, Kind, Regime};
//!
//! let pole = make_pole(1.0, 0.2)?;
//! let s = canonical_state(ArrowConvention::PREPARATION_REGISTRATION, Kind::Decaying, Regime::Zero, pole);
//! let f = evolve(&s, 10.0)?;
//! assert!((f.modulus().powi(2) - (-2.0f64).exp()).abs() < 1e-12);
//! assert!(evolve(&s, -1.0).is_err());
//! let reversed = apply_r(&s);
//! assert_eq!(reversed.bracket(), "<phi,r=1|Z_R*,r=1>");
//! # Ok::<(), time_arrows::Error>(())
//! ```

pub mod antilinear;
pub mod cli;
pub mod error;
pub mod resonance;
pub mod scenario;
pub mod semigroup;
pub mod symmetry;
pub mod transform;

pub use error::{Error, Result};
pub use resonance::{
    canonical_state, make_pole, ArrowConvention, ArrowKind, GamowState, HalfPlane, Kind, Regime,
    ResonancePole, Role, TimeDomain,
};
pub use semigroup::{
    branch_for, evolve, group_evolve, survival_probability, BranchId, EvolutionBranch,
    EvolutionFactor, UnitaryGroup,
};
pub use symmetry::{
    build_representation, c_matrix, check_conjugation_identities, spin_matrices,
    verify_group_relations, RepresentationTriple, SpinJ,
};
pub use transform::{apply_r, apply_r_twice, cross_identify, derive_table};
