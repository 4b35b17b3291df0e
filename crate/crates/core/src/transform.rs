//! Time reversal acting on Gamow states.
//!
//! `R` maps the `r = 0` spaces onto the `r = 1` spaces of the opposite
//! half-plane, exchanges `|Z_R>` and `|Z_R*>`, swaps the role of the test
//! vector and conjugates the amplitude. The growth label (which table row
//! the state sits in) is unchanged, and the governing branch of the image
//! lives on the reflected half-domain.

use std::fmt::Write as _;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{
    canonical_state, ArrowConvention, ArrowKind, GamowState, HalfPlane, Ket, Kind, Regime,
    ResonancePole, Role, TimeDomain,
};
use crate::semigroup::{branch_for, BranchId, EvolutionBranch};
use crate::symmetry::RepresentationTriple;

fn swapped_role(role: Role) -> Role {
    match role {
        Role::State => Role::Observable,
        Role::Observable => Role::State,
        Role::Excitation => Role::Deexcitation,
        Role::Deexcitation => Role::Excitation,
    }
}

pub fn apply_r(state: &GamowState) -> GamowState {
    state.relabelled(
        state.kind(),
        state.half_plane().flipped(),
        state.regime().flipped(),
        swapped_role(state.role()),
        state.amplitude().conj(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwiceReversed {
    pub state: GamowState,
    /// Scalar picked up from `R²`; equals the representation's `ε_R`.
    pub factor: i64,
}

/// Applies `R` twice, reading the overall scalar off the representation's
/// `R` matrix acting on the state's `r` block.
pub fn apply_r_twice(state: &GamowState, rep: &RepresentationTriple) -> Result<TwiceReversed> {
    if !rep.doubled() {
        return Err(Error::NotDoubled);
    }
    let block = rep.j().dim();
    let idx = state.regime().index() * block;
    let mut unit = DVector::<i64>::zeros(rep.dim());
    unit[idx] = 1;
    let r = rep.r_op();
    let image = r.apply(&r.apply(&unit));
    let factor = image[idx];
    if image.iter().enumerate().any(|(k, &x)| k != idx && x != 0) || factor.abs() != 1 {
        return Err(Error::Inconsistent(format!(
            "R² does not act as a scalar on block r={}",
            state.regime().index()
        )));
    }
    Ok(TwiceReversed {
        state: apply_r(&apply_r(state)),
        factor,
    })
}

/// Labels of a state without its amplitude or pole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDescriptor {
    pub arrow: ArrowKind,
    pub kind: Kind,
    pub ket: Ket,
    pub half_plane: HalfPlane,
    pub regime: Regime,
    pub role: Role,
    pub bracket: String,
}

impl From<&GamowState> for StateDescriptor {
    fn from(s: &GamowState) -> Self {
        Self {
            arrow: s.arrow().kind(),
            kind: s.kind(),
            ket: s.ket(),
            half_plane: s.half_plane(),
            regime: s.regime(),
            role: s.role(),
            bracket: s.bracket(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub input: StateDescriptor,
    pub output: StateDescriptor,
    pub input_domain: TimeDomain,
    pub output_domain: TimeDomain,
    pub branch_in: EvolutionBranch,
    pub branch_out: EvolutionBranch,
}

pub fn transform_record(state: &GamowState) -> TransformRecord {
    let out = apply_r(state);
    let branch_in = branch_for(state);
    let branch_out = branch_for(&out);
    TransformRecord {
        input: state.into(),
        output: (&out).into(),
        input_domain: branch_in.domain(),
        output_domain: branch_out.domain(),
        branch_in,
        branch_out,
    }
}

/// One cell of a growing/decaying table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: Kind,
    pub regime: Regime,
    pub bracket: String,
    pub half_domain: String,
    pub orientation: String,
    pub branch: BranchId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedTable {
    pub arrow: ArrowKind,
    pub cells: Vec<TableCell>,
}

fn cell(state: &GamowState) -> TableCell {
    let branch = branch_for(state);
    TableCell {
        row: state.kind(),
        regime: state.regime(),
        bracket: state.bracket(),
        half_domain: branch.domain().half().as_str().to_string(),
        orientation: branch.domain().orientation().as_str().to_string(),
        branch: branch.id(),
    }
}

/// Builds the four cells by reversing the `r = 0` growing and decaying states.
/// Cell order: growing r=0, growing r=1, decaying r=0, decaying r=1.
pub fn derive_table(arrow: ArrowConvention) -> DerivedTable {
    // Labels do not depend on the pole.
    let pole = ResonancePole::new(1.0, 1.0).expect("valid pole");
    let mut cells = Vec::with_capacity(4);
    for kind in [Kind::Growing, Kind::Decaying] {
        let s = canonical_state(arrow, kind, Regime::Zero, pole);
        cells.push(cell(&s));
        cells.push(cell(&apply_r(&s)));
    }
    DerivedTable {
        arrow: arrow.kind(),
        cells,
    }
}

impl DerivedTable {
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Two-column text layout: r=0 on the left, its image under R on the right.
    pub fn to_text(&self) -> String {
        let width = self
            .cells
            .iter()
            .flat_map(|c| {
                [
                    c.bracket.len(),
                    c.half_domain.len() + c.orientation.len() + 5,
                ]
            })
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for pair in self.cells.chunks(2) {
            let label = match pair[0].row {
                Kind::Growing => "growing",
                Kind::Decaying => "decaying",
            };
            let _ = write!(out, "{label:<9}");
            for c in pair {
                let _ = write!(out, " | {:<width$}", c.bracket);
            }
            out.push('\n');
            let _ = write!(out, "{:<9}", "");
            for c in pair {
                let dom = format!("{}, t: {}", c.half_domain, c.orientation);
                let _ = write!(out, " | {dom:<width$}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossIdentification {
    pub branch: BranchId,
    pub regime: Regime,
    /// Preparation/registration branch the identification is compared with.
    pub compared_with: Option<BranchId>,
    pub sign_pattern_equal: Option<bool>,
    /// Preparation/registration branches with the same sign pattern.
    pub matching_preparation_branches: Vec<BranchId>,
    pub provenance: String,
}

/// Identifies the excitation/de-excitation decay branches with a doubling
/// regime, treating preparation/registration as a special case.
pub fn cross_identify(branch: BranchId) -> Result<CrossIdentification> {
    let (regime, compared_with, provenance) = match branch {
        BranchId::DecayIntoPast => (
            Regime::One,
            None,
            "decay into the past is the time-reversed (r=1) regime",
        ),
        BranchId::DecayIntoFuture => (
            Regime::Zero,
            Some(BranchId::RegisteredDecay),
            "decay into the future is the laboratory (r=0) regime; same factor as the registered decaying observable",
        ),
        other => return Err(Error::InvalidBranch(other.label().to_string())),
    };
    let pattern = branch.branch().sign_pattern();
    let matching_preparation_branches = [
        BranchId::PreparedGrowth,
        BranchId::RegisteredDecay,
        BranchId::ReversedPreparedGrowth,
        BranchId::ReversedRegisteredDecay,
    ]
    .into_iter()
    .filter(|b| b.branch().sign_pattern() == pattern)
    .collect();
    Ok(CrossIdentification {
        branch,
        regime,
        compared_with,
        sign_pattern_equal: compared_with.map(|b| b.branch().sign_pattern() == pattern),
        matching_preparation_branches,
        provenance: provenance.to_string(),
    })
}

/// How the printed factor of a reversed state relates to the original one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorConsistency {
    pub arrow: ArrowKind,
    pub kind: Kind,
    pub regime: Regime,
    pub branch_in: BranchId,
    pub branch_out: BranchId,
    /// `max ||f_out(-t)| - |f_in(t)||`
    pub modulus_residual: f64,
    /// `max |f_out(-t) - conj(f_in(t))|`
    pub conjugation_residual: f64,
    /// `max |f_out(-t) - f_in(t)|`
    pub reflection_residual: f64,
    pub modulus_identity_holds: bool,
    pub conjugation_identity_holds: bool,
    pub reflection_identity_holds: bool,
}

pub const FACTOR_TOL: f64 = 1e-12;

/// Compares `f_in(t)` with `f_out(-t)` for every canonical state at the given
/// times (magnitudes, reflected to each input's half-domain). A conjugation
/// mismatch is reported, not corrected.
pub fn factor_consistency(pole: &ResonancePole, times: &[f64]) -> Vec<FactorConsistency> {
    crate::resonance::all_canonical_states(*pole)
        .iter()
        .map(|s| {
            let out = apply_r(s);
            let b_in = branch_for(s);
            let b_out = branch_for(&out);
            let (mut m, mut c, mut r) = (0.0f64, 0.0f64, 0.0f64);
            for &t in times {
                let t = match b_in.domain().half() {
                    crate::resonance::Half::Nonneg => t.abs(),
                    crate::resonance::Half::Nonpos => -t.abs(),
                };
                let f_in: Complex64 = b_in.factor(pole, t).expect("t reflected into domain");
                let f_out = b_out.factor(pole, -t).expect("reflected domain");
                m = m.max((f_out.norm() - f_in.norm()).abs());
                c = c.max((f_out - f_in.conj()).norm());
                r = r.max((f_out - f_in).norm());
            }
            FactorConsistency {
                arrow: s.arrow().kind(),
                kind: s.kind(),
                regime: s.regime(),
                branch_in: b_in.id(),
                branch_out: b_out.id(),
                modulus_residual: m,
                conjugation_residual: c,
                reflection_residual: r,
                modulus_identity_holds: m < FACTOR_TOL,
                conjugation_identity_holds: c < FACTOR_TOL,
                reflection_identity_holds: r < FACTOR_TOL,
            }
        })
        .collect()
}
