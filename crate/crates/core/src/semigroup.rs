//! Half-domain semigroup evolution of Gamow brackets, and the unitary group
//! it is contrasted with.
//!
//! Every branch multiplies the bracket by
//! `exp(i·phase_sign·E_R·t) · exp(growth_sign·(Γ/2)·t)` and is only defined on
//! one temporal half-line. Asking for a time on the other side is an error:
//! the semigroup has no inverse there.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{
    ArrowKind, GamowState, Half, Kind, Orientation, Regime, ResonancePole, TimeDomain,
};

/// The eight evolution branches, labelled by their customary equation tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchId {
    /// `4a`: prepared growing state, `r = 0`.
    PreparedGrowth,
    /// `4b`: registered decaying observable, `r = 0`.
    RegisteredDecay,
    /// `5a`: excitation/de-excitation decay into the past.
    DecayIntoPast,
    /// `5b`: excitation/de-excitation decay into the future.
    DecayIntoFuture,
    /// `10`: time-reversed image of the prepared growing state.
    ReversedPreparedGrowth,
    /// `11`: time-reversed image of the registered decaying observable.
    ReversedRegisteredDecay,
    /// `12`: excitation paired with `5b`.
    Excitation,
    /// `13`: excitation paired with `5a`.
    ReversedExcitation,
}

impl BranchId {
    pub const ALL: [BranchId; 8] = [
        BranchId::PreparedGrowth,
        BranchId::RegisteredDecay,
        BranchId::DecayIntoPast,
        BranchId::DecayIntoFuture,
        BranchId::ReversedPreparedGrowth,
        BranchId::ReversedRegisteredDecay,
        BranchId::Excitation,
        BranchId::ReversedExcitation,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BranchId::PreparedGrowth => "4a",
            BranchId::RegisteredDecay => "4b",
            BranchId::DecayIntoPast => "5a",
            BranchId::DecayIntoFuture => "5b",
            BranchId::ReversedPreparedGrowth => "10",
            BranchId::ReversedRegisteredDecay => "11",
            BranchId::Excitation => "12",
            BranchId::ReversedExcitation => "13",
        }
    }

    pub fn branch(self) -> EvolutionBranch {
        use Half::*;
        use Orientation::*;
        let (phase_sign, growth_sign, half, orientation) = match self {
            BranchId::PreparedGrowth => (-1, 1, Nonpos, TowardZeroFromMinusInf),
            BranchId::RegisteredDecay => (-1, -1, Nonneg, TowardPlusInf),
            BranchId::DecayIntoPast => (1, 1, Nonpos, TowardMinusInf),
            BranchId::DecayIntoFuture => (-1, -1, Nonneg, TowardPlusInf),
            BranchId::ReversedPreparedGrowth => (1, -1, Nonneg, TowardZeroFromPlusInf),
            BranchId::ReversedRegisteredDecay => (1, 1, Nonpos, TowardMinusInf),
            BranchId::Excitation => (1, 1, Nonpos, TowardZeroFromMinusInf),
            BranchId::ReversedExcitation => (-1, -1, Nonneg, TowardZeroFromPlusInf),
        };
        EvolutionBranch {
            id: self,
            phase_sign,
            growth_sign,
            domain: TimeDomain::new_unchecked(half, orientation),
        }
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BranchId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BranchId::ALL
            .into_iter()
            .find(|b| b.label() == s.trim())
            .ok_or_else(|| Error::UnknownBranch(s.to_string()))
    }
}

impl Serialize for BranchId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for BranchId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvolutionBranch {
    id: BranchId,
    phase_sign: i8,
    growth_sign: i8,
    domain: TimeDomain,
}

impl EvolutionBranch {
    pub fn id(&self) -> BranchId {
        self.id
    }

    pub fn phase_sign(&self) -> i8 {
        self.phase_sign
    }

    pub fn growth_sign(&self) -> i8 {
        self.growth_sign
    }

    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    /// `(phase_sign, growth_sign, half)`.
    pub fn sign_pattern(&self) -> (i8, i8, Half) {
        (self.phase_sign, self.growth_sign, self.domain.half())
    }

    /// Multiplicative factor at time `t`, checked against the half-domain.
    pub fn factor(&self, pole: &ResonancePole, t: f64) -> Result<Complex64> {
        if !self.domain.contains(t) {
            return Err(Error::DomainViolation {
                t,
                domain: self.domain.half().as_str(),
                branch: self.id.label(),
            });
        }
        let phase = f64::from(self.phase_sign) * pole.energy() * t;
        let growth = f64::from(self.growth_sign) * 0.5 * pole.width() * t;
        Ok(Complex64::from_polar(growth.exp(), phase))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionFactor {
    pub value: Complex64,
}

impl EvolutionFactor {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

pub fn branch_for(state: &GamowState) -> EvolutionBranch {
    use ArrowKind::*;
    use Kind::*;
    use Regime::*;
    let id = match (state.arrow().kind(), state.kind(), state.regime()) {
        (PreparationRegistration, Growing, Zero) => BranchId::PreparedGrowth,
        (PreparationRegistration, Decaying, Zero) => BranchId::RegisteredDecay,
        (PreparationRegistration, Growing, One) => BranchId::ReversedPreparedGrowth,
        (PreparationRegistration, Decaying, One) => BranchId::ReversedRegisteredDecay,
        (ExcitationDeexcitation, Growing, Zero) => BranchId::Excitation,
        (ExcitationDeexcitation, Decaying, Zero) => BranchId::DecayIntoFuture,
        (ExcitationDeexcitation, Growing, One) => BranchId::ReversedExcitation,
        (ExcitationDeexcitation, Decaying, One) => BranchId::DecayIntoPast,
    };
    id.branch()
}

/// Evolves the state's bracket by `t`. `t = 0` is the identity on every branch.
pub fn evolve(state: &GamowState, t: f64) -> Result<EvolutionFactor> {
    let factor = branch_for(state).factor(&state.pole(), t)?;
    Ok(EvolutionFactor {
        value: factor * state.amplitude(),
    })
}

/// `|evolve(state, t)|² / |amplitude|²`, i.e. `exp(growth_sign·Γ·t)`.
pub fn survival_probability(state: &GamowState, t: f64) -> Result<f64> {
    if state.kind() != Kind::Decaying {
        return Err(Error::NotDecaying);
    }
    Ok(relative_intensity(state, t)?)
}

/// Squared modulus of the branch factor, for either kind.
pub fn relative_intensity(state: &GamowState, t: f64) -> Result<f64> {
    let branch = branch_for(state);
    let f = branch.factor(&state.pole(), t)?;
    Ok(f.norm_sqr())
}

/// Default cap on the Hamiltonian dimension accepted by [`UnitaryGroup`].
pub const DEFAULT_MAX_DIM: usize = 64;

/// Largest tolerated `|H - H^dagger|` entry.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// `U(t) = exp(-iHt)` for a Hermitian `H`, from its eigendecomposition.
/// Defined for every real `t`.
#[derive(Debug, Clone)]
pub struct UnitaryGroup {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl UnitaryGroup {
    pub fn new(hamiltonian: &DMatrix<Complex64>) -> Result<Self> {
        Self::with_max_dim(hamiltonian, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(hamiltonian: &DMatrix<Complex64>, max_dim: usize) -> Result<Self> {
        let (rows, cols) = hamiltonian.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows > max_dim {
            return Err(Error::DimensionTooLarge {
                dim: rows,
                cap: max_dim,
            });
        }
        let adjoint = hamiltonian.adjoint();
        let deviation = (hamiltonian - &adjoint)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(deviation <= HERMITICITY_TOL) {
            return Err(Error::NonHermitian(deviation));
        }
        let symmetric = (hamiltonian + adjoint).scale(0.5);
        let eig = symmetric.symmetric_eigen();
        Ok(Self {
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn propagator(&self, t: f64) -> DMatrix<Complex64> {
        let phases = self
            .eigenvalues
            .map(|e| Complex64::from_polar(1.0, -e * t));
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.eigenvectors[(i, j)] * phases[j]
        });
        scaled * self.eigenvectors.adjoint()
    }

    pub fn evolve(&self, t: f64, vector: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if vector.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: vector.len(),
            });
        }
        // V diag(e^{-iλt}) V^† v without forming the full propagator
        let mut coeffs = self.eigenvectors.ad_mul(vector);
        for (c, e) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -e * t);
        }
        Ok(&self.eigenvectors * coeffs)
    }
}

pub fn group_evolve(
    hamiltonian: &DMatrix<Complex64>,
    t: f64,
    vector: &DVector<Complex64>,
) -> Result<DVector<Complex64>> {
    UnitaryGroup::new(hamiltonian)?.evolve(t, vector)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::resonance::{canonical_state, make_pole, ArrowConvention};

    const PREP: ArrowConvention = ArrowConvention::PREPARATION_REGISTRATION;
    const EXC: ArrowConvention = ArrowConvention::EXCITATION_DEEXCITATION;

    fn state(arrow: ArrowConvention, kind: Kind, r: i64) -> GamowState {
        canonical_state(arrow, kind, Regime::new(r).unwrap(), make_pole(1.0, 0.2).unwrap())
    }

    #[test]
    fn branch_assignment_examples() {
        assert_eq!(
            branch_for(&state(PREP, Kind::Growing, 0)).id(),
            BranchId::PreparedGrowth
        );
        let b = branch_for(&state(PREP, Kind::Decaying, 1));
        assert_eq!(b.id().label(), "11");
        assert_eq!(b.sign_pattern(), (1, 1, Half::Nonpos));
        assert_eq!(branch_for(&state(EXC, Kind::Growing, 0)).id().label(), "12");
        assert_eq!(branch_for(&state(EXC, Kind::Decaying, 0)).id().label(), "5b");
        assert_eq!(branch_for(&state(EXC, Kind::Growing, 1)).id().label(), "13");
        assert_eq!(branch_for(&state(EXC, Kind::Decaying, 1)).id().label(), "5a");
    }

    #[test]
    fn labels_round_trip() {
        for b in BranchId::ALL {
            assert_eq!(b.label().parse::<BranchId>().unwrap(), b);
        }
        assert!("4c".parse::<BranchId>().is_err());
    }

    #[test]
    fn identity_at_zero() {
        let s = state(PREP, Kind::Decaying, 0);
        assert_eq!(evolve(&s, 0.0).unwrap().value, Complex64::new(1.0, 0.0));
        // negative zero counts as zero
        assert_eq!(evolve(&s, -0.0).unwrap().value, Complex64::new(1.0, 0.0));
        // also on the strict-inequality branches
        let s = state(EXC, Kind::Decaying, 1);
        assert_eq!(evolve(&s, 0.0).unwrap().value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn registered_decay_modulus() {
        let s = state(PREP, Kind::Decaying, 0);
        let f = evolve(&s, 5.0).unwrap();
        assert!((f.modulus() - 0.606_530_659_712_633_4).abs() < 1e-12);
    }

    #[test]
    fn prepared_growth_modulus_backward() {
        let s = state(PREP, Kind::Growing, 0);
        let f = evolve(&s, -5.0).unwrap();
        assert!((f.modulus() - 0.606_530_659_712_633_4).abs() < 1e-12);
    }

    #[test]
    fn domain_violation() {
        let s = state(PREP, Kind::Decaying, 0);
        assert!(matches!(
            evolve(&s, -1.0),
            Err(Error::DomainViolation { t, .. }) if t == -1.0
        ));
        assert!(evolve(&s, f64::NAN).is_err());
        assert!(evolve(&s, f64::INFINITY).is_err());
    }

    #[test]
    fn survival_values() {
        let s = state(PREP, Kind::Decaying, 0);
        assert_eq!(survival_probability(&s, 0.0).unwrap(), 1.0);
        let p = survival_probability(&s, 10.0).unwrap();
        assert!((p - 0.135_335_283_236_612_7).abs() < 1e-12);
        assert!(survival_probability(&s, -1.0).is_err());
        assert_eq!(
            survival_probability(&state(PREP, Kind::Growing, 0), -1.0),
            Err(Error::NotDecaying)
        );
    }

    #[test]
    fn amplitude_scales_factor() {
        let s = state(EXC, Kind::Decaying, 0).with_amplitude(Complex64::new(0.0, 2.0));
        let f = evolve(&s, 1.0).unwrap().value;
        let expected = Complex64::new(0.0, 2.0)
            * Complex64::from_polar((-0.1f64).exp(), -1.0);
        assert!((f - expected).norm() < 1e-15);
        // survival is normalized by the amplitude
        assert!((survival_probability(&s, 1.0).unwrap() - (-0.2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn group_zero_hamiltonian_is_identity() {
        let h = DMatrix::<Complex64>::zeros(3, 3);
        let v = DVector::from_vec(vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 3.0),
        ]);
        let out = group_evolve(&h, 7.3, &v).unwrap();
        assert!((out - v).norm() < 1e-15);
    }

    #[test]
    fn group_diagonal_at_pi() {
        let h = DMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]));
        let v = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let out = group_evolve(&h, PI, &v).unwrap();
        assert!((out[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!(out[1].norm() < 1e-12);
    }

    #[test]
    fn group_rejects_bad_input() {
        let mut h = DMatrix::<Complex64>::zeros(2, 2);
        h[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(UnitaryGroup::new(&h), Err(Error::NonHermitian(_))));

        let h = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(UnitaryGroup::new(&h), Err(Error::NotSquare { .. })));

        let h = DMatrix::<Complex64>::zeros(5, 5);
        assert!(matches!(
            UnitaryGroup::with_max_dim(&h, 4),
            Err(Error::DimensionTooLarge { dim: 5, cap: 4 })
        ));

        let g = UnitaryGroup::new(&DMatrix::zeros(2, 2)).unwrap();
        assert!(g.evolve(1.0, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn tiny_antihermitian_noise_is_tolerated() {
        let mut h = DMatrix::<Complex64>::identity(2, 2);
        h[(0, 1)] = Complex64::new(0.0, 1e-12);
        assert!(UnitaryGroup::new(&h).is_ok());
    }
}
