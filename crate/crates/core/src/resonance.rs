//! Resonance poles, Gamow states and the labels that place them in a
//! rigged-space triplet.
//!
//! The test-space / dual-space structure is carried purely as labels: a
//! half-plane sign, a doubling regime `r` and a role. No function-space
//! machinery lives here.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A resonance pole `z_R = E_R - iΓ/2` in natural units (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPole")]
pub struct ResonancePole {
    energy: f64,
    width: f64,
}

impl ResonancePole {
    pub fn new(energy: f64, width: f64) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::NonFiniteEnergy(energy));
        }
        // also rejects NaN
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::NonPositiveWidth(width));
        }
        Ok(Self { energy, width })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Lower half-plane pole `E_R - iΓ/2` carried by the decaying ket.
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.energy, -0.5 * self.width)
    }

    /// Upper half-plane pole `E_R + iΓ/2` carried by the growing ket.
    pub fn z_conj(&self) -> Complex64 {
        Complex64::new(self.energy, 0.5 * self.width)
    }

    /// Mean lifetime `1/Γ`.
    pub fn lifetime(&self) -> f64 {
        1.0 / self.width
    }
}

#[derive(Deserialize)]
struct RawPole {
    energy: f64,
    width: f64,
}

impl TryFrom<RawPole> for ResonancePole {
    type Error = Error;

    fn try_from(raw: RawPole) -> Result<Self> {
        Self::new(raw.energy, raw.width)
    }
}

pub fn make_pole(energy: f64, width: f64) -> Result<ResonancePole> {
    ResonancePole::new(energy, width)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    Plus,
    Minus,
}

impl HalfPlane {
    pub fn flipped(self) -> Self {
        match self {
            HalfPlane::Plus => HalfPlane::Minus,
            HalfPlane::Minus => HalfPlane::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowKind {
    PreparationRegistration,
    ExcitationDeexcitation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Picture {
    /// States in the Schrödinger picture, observables in the Heisenberg picture.
    SchroedingerHeisenbergMixed,
    SchroedingerOnly,
}

/// A time-arrow convention. The picture is fixed by the kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArrowConvention {
    kind: ArrowKind,
    picture: Picture,
}

impl ArrowConvention {
    pub const PREPARATION_REGISTRATION: Self = Self {
        kind: ArrowKind::PreparationRegistration,
        picture: Picture::SchroedingerHeisenbergMixed,
    };
    pub const EXCITATION_DEEXCITATION: Self = Self {
        kind: ArrowKind::ExcitationDeexcitation,
        picture: Picture::SchroedingerOnly,
    };

    pub fn new(kind: ArrowKind, picture: Picture) -> Result<Self> {
        let conv = Self::from_kind(kind);
        if conv.picture != picture {
            return Err(Error::Inconsistent(format!(
                "arrow convention: {kind:?} requires picture {:?}, got {picture:?}",
                conv.picture
            )));
        }
        Ok(conv)
    }

    pub fn from_kind(kind: ArrowKind) -> Self {
        match kind {
            ArrowKind::PreparationRegistration => Self::PREPARATION_REGISTRATION,
            ArrowKind::ExcitationDeexcitation => Self::EXCITATION_DEEXCITATION,
        }
    }

    pub fn kind(&self) -> ArrowKind {
        self.kind
    }

    pub fn picture(&self) -> Picture {
        self.picture
    }

    pub fn all() -> [Self; 2] {
        [Self::PREPARATION_REGISTRATION, Self::EXCITATION_DEEXCITATION]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    /// `t >= 0`
    Nonneg,
    /// `t <= 0`
    Nonpos,
}

impl Half {
    pub fn contains(self, t: f64) -> bool {
        if !t.is_finite() {
            return false;
        }
        match self {
            Half::Nonneg => t >= 0.0,
            Half::Nonpos => t <= 0.0,
        }
    }

    pub fn reflected(self) -> Self {
        match self {
            Half::Nonneg => Half::Nonpos,
            Half::Nonpos => Half::Nonneg,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Half::Nonneg => "t>=0",
            Half::Nonpos => "t<=0",
        }
    }
}

/// Direction in which time is traversed on a half-domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `0 -> +inf`
    TowardPlusInf,
    /// `-inf -> 0`
    TowardZeroFromMinusInf,
    /// `0 <- +inf`
    TowardZeroFromPlusInf,
    /// `-inf <- 0`
    TowardMinusInf,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::TowardPlusInf => "0 -> +inf",
            Orientation::TowardZeroFromMinusInf => "-inf -> 0",
            Orientation::TowardZeroFromPlusInf => "0 <- +inf",
            Orientation::TowardMinusInf => "-inf <- 0",
        }
    }

    /// The orientation obtained by `t -> -t`.
    pub fn reflected(self) -> Self {
        match self {
            Orientation::TowardZeroFromMinusInf => Orientation::TowardZeroFromPlusInf,
            Orientation::TowardZeroFromPlusInf => Orientation::TowardZeroFromMinusInf,
            Orientation::TowardPlusInf => Orientation::TowardMinusInf,
            Orientation::TowardMinusInf => Orientation::TowardPlusInf,
        }
    }

    /// Whether traversal moves toward larger `t`.
    pub fn is_forward(self) -> bool {
        matches!(
            self,
            Orientation::TowardPlusInf | Orientation::TowardZeroFromMinusInf
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TimeDomain {
    half: Half,
    orientation: Orientation,
}

impl TimeDomain {
    pub fn new(half: Half, orientation: Orientation) -> Result<Self> {
        let ok = match half {
            Half::Nonneg => matches!(
                orientation,
                Orientation::TowardPlusInf | Orientation::TowardZeroFromPlusInf
            ),
            Half::Nonpos => matches!(
                orientation,
                Orientation::TowardZeroFromMinusInf | Orientation::TowardMinusInf
            ),
        };
        if !ok {
            return Err(Error::Inconsistent(format!(
                "time domain: orientation {:?} does not live on {}",
                orientation,
                half.as_str()
            )));
        }
        Ok(Self { half, orientation })
    }

    pub(crate) const fn new_unchecked(half: Half, orientation: Orientation) -> Self {
        Self { half, orientation }
    }

    pub fn half(&self) -> Half {
        self.half
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn contains(&self, t: f64) -> bool {
        self.half.contains(t)
    }

    pub fn reflected(&self) -> Self {
        Self {
            half: self.half.reflected(),
            orientation: self.orientation.reflected(),
        }
    }
}

impl fmt::Display for TimeDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, t: {}", self.half.as_str(), self.orientation.as_str())
    }
}

/// Growth behaviour of a Gamow vector along its own time orientation.
///
/// For `r = 0` a growing state carries `|Z_R*>` and a decaying one `|Z_R>`.
/// Time reversal keeps this label and exchanges the ket, so for `r = 1`
/// the pairing is the other way around (see [`GamowState::ket`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Growing,
    Decaying,
}

/// The pole eigenvector a state is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ket {
    /// `|Z_R>`, eigenvalue `E_R - iΓ/2`
    Pole,
    /// `|Z_R*>`, eigenvalue `E_R + iΓ/2`
    ConjugatePole,
}

impl Ket {
    pub fn flipped(self) -> Self {
        match self {
            Ket::Pole => Ket::ConjugatePole,
            Ket::ConjugatePole => Ket::Pole,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Ket::Pole => "Z_R",
            Ket::ConjugatePole => "Z_R*",
        }
    }
}

/// Doubling index `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Zero,
    One,
}

impl Regime {
    pub fn new(r: i64) -> Result<Self> {
        match r {
            0 => Ok(Regime::Zero),
            1 => Ok(Regime::One),
            _ => Err(Error::InvalidRegime(r)),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Regime::Zero => 0,
            Regime::One => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Regime::Zero => Regime::One,
            Regime::One => Regime::Zero,
        }
    }

    pub fn all() -> [Self; 2] {
        [Regime::Zero, Regime::One]
    }
}

impl Serialize for Regime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index() as u8)
    }
}

impl<'de> Deserialize<'de> for Regime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = i64::deserialize(d)?;
        Regime::new(r).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    State,
    Observable,
    Excitation,
    Deexcitation,
}

impl Role {
    fn for_half_plane(arrow: ArrowKind, half_plane: HalfPlane) -> Self {
        match (arrow, half_plane) {
            (ArrowKind::PreparationRegistration, HalfPlane::Minus) => Role::State,
            (ArrowKind::PreparationRegistration, HalfPlane::Plus) => Role::Observable,
            (ArrowKind::ExcitationDeexcitation, HalfPlane::Plus) => Role::Excitation,
            (ArrowKind::ExcitationDeexcitation, HalfPlane::Minus) => Role::Deexcitation,
        }
    }

    /// Test-vector symbol used in bracket descriptors.
    pub fn symbol(self) -> &'static str {
        match self {
            Role::State => "phi",
            Role::Observable => "psi",
            Role::Excitation => "phi+",
            Role::Deexcitation => "phi-",
        }
    }
}

/// A one-dimensional generalized eigenvector together with its triplet labels
/// and a complex amplitude (the bracket value at `t = 0`).
///
/// Only the eight canonical label combinations can be constructed; use
/// [`canonical_state`] and then [`GamowState::with_amplitude`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GamowState {
    pole: ResonancePole,
    kind: Kind,
    half_plane: HalfPlane,
    regime: Regime,
    arrow: ArrowConvention,
    amplitude: Complex64,
    role: Role,
}

impl GamowState {
    pub fn pole(&self) -> ResonancePole {
        self.pole
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn half_plane(&self) -> HalfPlane {
        self.half_plane
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn arrow(&self) -> ArrowConvention {
        self.arrow
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn ket(&self) -> Ket {
        ket_for(self.kind, self.regime)
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// The state's time half-domain and orientation.
    pub fn domain(&self) -> TimeDomain {
        crate::semigroup::branch_for(self).domain()
    }

    /// Bracket descriptor such as `<phi,r=0|Z_R*,r=0>`.
    pub fn bracket(&self) -> String {
        let r = self.regime.index();
        format!(
            "<{},r={r}|{},r={r}>",
            self.role.symbol(),
            self.ket().as_str()
        )
    }

    /// Checks every label invariant; all constructible states pass.
    pub fn validate(&self) -> Result<()> {
        let expected = canonical_state(self.arrow, self.kind, self.regime, self.pole);
        if expected.half_plane != self.half_plane || expected.role != self.role {
            return Err(Error::Inconsistent(format!(
                "gamow state labels {:?}/{:?} for {:?} {:?} r={}",
                self.half_plane,
                self.role,
                self.arrow.kind(),
                self.kind,
                self.regime.index()
            )));
        }
        Ok(())
    }

    pub(crate) fn relabelled(
        self,
        kind: Kind,
        half_plane: HalfPlane,
        regime: Regime,
        role: Role,
        amplitude: Complex64,
    ) -> Self {
        Self {
            kind,
            half_plane,
            regime,
            role,
            amplitude,
            ..self
        }
    }
}

fn ket_for(kind: Kind, regime: Regime) -> Ket {
    match (kind, regime) {
        (Kind::Growing, Regime::Zero) | (Kind::Decaying, Regime::One) => Ket::ConjugatePole,
        (Kind::Decaying, Regime::Zero) | (Kind::Growing, Regime::One) => Ket::Pole,
    }
}

/// The state occupying one cell of the growing/decaying tables, with unit
/// amplitude.
pub fn canonical_state(
    arrow: ArrowConvention,
    kind: Kind,
    regime: Regime,
    pole: ResonancePole,
) -> GamowState {
    // Under preparation/registration |Z_R*> lives in the lower half-plane
    // space and |Z_R> in the upper one; excitation/de-excitation swaps them.
    let half_plane = match (arrow.kind(), ket_for(kind, regime)) {
        (ArrowKind::PreparationRegistration, Ket::ConjugatePole) => HalfPlane::Minus,
        (ArrowKind::PreparationRegistration, Ket::Pole) => HalfPlane::Plus,
        (ArrowKind::ExcitationDeexcitation, Ket::ConjugatePole) => HalfPlane::Plus,
        (ArrowKind::ExcitationDeexcitation, Ket::Pole) => HalfPlane::Minus,
    };
    GamowState {
        pole,
        kind,
        half_plane,
        regime,
        arrow,
        amplitude: Complex64::new(1.0, 0.0),
        role: Role::for_half_plane(arrow.kind(), half_plane),
    }
}

/// All eight canonical states for a pole, in (arrow, kind, regime) order.
pub fn all_canonical_states(pole: ResonancePole) -> Vec<GamowState> {
    let mut out = Vec::with_capacity(8);
    for arrow in ArrowConvention::all() {
        for kind in [Kind::Growing, Kind::Decaying] {
            for regime in Regime::all() {
                out.push(canonical_state(arrow, kind, regime, pole));
            }
        }
    }
    out
}
