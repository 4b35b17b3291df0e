//! Parity, time reversal and total inversion in the four extended
//! co-representations of the spacetime symmetry group, for any spin `j`.
//!
//! All of `C`, `Σ`, `R` and `T` have integer entries, so the group relations
//! are checked with exact `i64` arithmetic. The conjugation identities of `R`
//! against angular momentum, momentum, kinetic energy and a single-pole
//! S-matrix are floating-point checks with fixed tolerances.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antilinear::{block_2x2, block_diagonal, AntilinearOperator};
use crate::error::{Error, Result};
use crate::resonance::ResonancePole;

pub const SPIN_TOL: f64 = 1e-12;
pub const MOMENTUM_TOL: f64 = 1e-10;
pub const S_MATRIX_TOL: f64 = 1e-12;

/// Spin `j = twice_j / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinJ {
    twice_j: u32,
}

impl SpinJ {
    pub fn from_twice(twice_j: u32) -> Self {
        Self { twice_j }
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    /// `2j + 1`
    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// `(-1)^{2j}`
    pub fn parity_sign(&self) -> i64 {
        if self.twice_j % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Magnetic quantum numbers `-j, -j+1, ..., j`.
    pub fn m_values(&self) -> impl Iterator<Item = f64> {
        let j = self.j();
        (0..self.dim()).map(move |k| -j + k as f64)
    }
}

impl fmt::Display for SpinJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j % 2 == 0 {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Which Kronecker delta the `C` matrix entries carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CReading {
    /// `c_{μν} = (-1)^{j+μ} δ_{μ,-ν}`; gives `C·conj(C) = (-1)^{2j} I`.
    #[default]
    AntiDiagonal,
    /// `c_{μν} = (-1)^{j+μ} δ_{μ,ν}`; squares to `+I` for every `j`.
    Diagonal,
}

pub fn c_matrix(j: SpinJ) -> DMatrix<i64> {
    c_matrix_with(j, CReading::AntiDiagonal)
}

/// Rows and columns are indexed by `μ, ν = -j..=j` ascending. With
/// `μ = -j + k`, `j + μ = k`, so the entry sign is `(-1)^k`.
pub fn c_matrix_with(j: SpinJ, reading: CReading) -> DMatrix<i64> {
    let d = j.dim();
    let mut c = DMatrix::zeros(d, d);
    for k in 0..d {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let col = match reading {
            CReading::AntiDiagonal => d - 1 - k,
            CReading::Diagonal => k,
        };
        c[(k, col)] = sign;
    }
    c
}

/// `(ε_R, ε_T)` for a co-representation row.
pub fn expected_signs(row: u8, j: SpinJ) -> Result<(i64, i64)> {
    let s = j.parity_sign();
    match row {
        1 => Ok((s, s)),
        2 => Ok((-s, s)),
        3 => Ok((s, -s)),
        4 => Ok((-s, -s)),
        _ => Err(Error::InvalidRow(i64::from(row))),
    }
}

/// `(Σ, R, T)` for one co-representation row. Rows 2–4 act on the doubled
/// space with the `r = 0` block first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationTriple {
    row: u8,
    j: SpinJ,
    sigma: AntilinearOperator<i64>,
    r_op: AntilinearOperator<i64>,
    t_op: AntilinearOperator<i64>,
    eps_r: i64,
    eps_t: i64,
    doubled: bool,
    reading: CReading,
}

impl RepresentationTriple {
    pub fn row(&self) -> u8 {
        self.row
    }

    pub fn j(&self) -> SpinJ {
        self.j
    }

    pub fn sigma(&self) -> &AntilinearOperator<i64> {
        &self.sigma
    }

    pub fn r_op(&self) -> &AntilinearOperator<i64> {
        &self.r_op
    }

    pub fn t_op(&self) -> &AntilinearOperator<i64> {
        &self.t_op
    }

    pub fn eps_r(&self) -> i64 {
        self.eps_r
    }

    pub fn eps_t(&self) -> i64 {
        self.eps_t
    }

    pub fn doubled(&self) -> bool {
        self.doubled
    }

    pub fn reading(&self) -> CReading {
        self.reading
    }

    /// Dimension of the space the operators act on.
    pub fn dim(&self) -> usize {
        self.sigma.dim()
    }
}

pub fn build_representation(row: i64, j: SpinJ) -> Result<RepresentationTriple> {
    build_representation_with(row, j, CReading::AntiDiagonal)
}

pub fn build_representation_with(
    row: i64,
    j: SpinJ,
    reading: CReading,
) -> Result<RepresentationTriple> {
    let row = u8::try_from(row)
        .ok()
        .filter(|r| (1..=4).contains(r))
        .ok_or(Error::InvalidRow(row))?;
    let (eps_r, eps_t) = expected_signs(row, j)?;
    let c = c_matrix_with(j, reading);
    let d = j.dim();
    let id = DMatrix::<i64>::identity(d, d);
    let zero = DMatrix::<i64>::zeros(d, d);
    let neg = |m: &DMatrix<i64>| m.map(|x| -x);

    let (sigma, r, t) = match row {
        1 => (id, c.clone(), c),
        2 => (
            block_2x2(&id, &zero, &zero, &neg(&id)),
            block_2x2(&zero, &c, &neg(&c), &zero),
            block_2x2(&zero, &c, &c, &zero),
        ),
        3 => (
            block_2x2(&id, &zero, &zero, &neg(&id)),
            block_2x2(&zero, &c, &c, &zero),
            block_2x2(&zero, &c, &neg(&c), &zero),
        ),
        _ => (
            block_diagonal(&id, 2),
            block_2x2(&zero, &c, &neg(&c), &zero),
            block_2x2(&zero, &c, &neg(&c), &zero),
        ),
    };
    Ok(RepresentationTriple {
        row,
        j,
        sigma: AntilinearOperator::linear(sigma),
        r_op: AntilinearOperator::antilinear(r),
        t_op: AntilinearOperator::antilinear(t),
        eps_r,
        eps_t,
        doubled: row != 1,
        reading,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupRelationReport {
    pub row: u8,
    pub twice_j: u32,
    pub dim: usize,
    pub eps_r: i64,
    pub eps_t: i64,
    pub checks: Vec<RelationCheck>,
    /// `s` with `R∘Σ = s·(Σ∘R)`, or `None` if they are not proportional.
    pub sigma_r_commutation_sign: Option<i64>,
    pub all_hold: bool,
}

impl GroupRelationReport {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

/// Exact integer verification of `Σ² = I`, `R² = ε_R I`, `T² = ε_T I`,
/// `T = Σ∘R`, plus linearity/unitarity of each operator.
pub fn verify_group_relations(rep: &RepresentationTriple) -> GroupRelationReport {
    let n = rep.dim();
    let id = AntilinearOperator::<i64>::identity(n);
    let sigma = &rep.sigma;
    let r = &rep.r_op;
    let t = &rep.t_op;
    let sigma_r = sigma.compose(r);
    let r_sigma = r.compose(sigma);

    let (formula_r, formula_t) =
        expected_signs(rep.row, rep.j).expect("row validated at construction");

    let mut checks = Vec::new();
    let mut push = |name: &str, holds: bool| {
        checks.push(RelationCheck {
            name: name.to_string(),
            holds,
        })
    };
    push("sigma_linear", !sigma.conjugates());
    push("r_antilinear", r.conjugates());
    push("t_antilinear", t.conjugates());
    push("sigma_unitary", sigma.has_unitary_matrix_exact());
    push("r_antiunitary", r.has_unitary_matrix_exact());
    push("t_antiunitary", t.has_unitary_matrix_exact());
    push("sigma_squared_is_identity", sigma.compose(sigma) == id);
    push("r_squared_is_eps_r", r.compose(r) == id.scaled(rep.eps_r));
    push("t_squared_is_eps_t", t.compose(t) == id.scaled(rep.eps_t));
    push("t_equals_sigma_r", *t == sigma_r);
    push("eps_r_matches_sign_formula", rep.eps_r == formula_r);
    push("eps_t_matches_sign_formula", rep.eps_t == formula_t);

    let sigma_r_commutation_sign = if r_sigma == sigma_r {
        Some(1)
    } else if r_sigma == sigma_r.negated() {
        Some(-1)
    } else {
        None
    };

    let all_hold = checks.iter().all(|c| c.holds);
    GroupRelationReport {
        row: rep.row,
        twice_j: rep.j.twice_j(),
        dim: n,
        eps_r: rep.eps_r,
        eps_t: rep.eps_t,
        checks,
        sigma_r_commutation_sign,
        all_hold,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices {
    pub x: DMatrix<Complex64>,
    pub y: DMatrix<Complex64>,
    pub z: DMatrix<Complex64>,
}

impl SpinMatrices {
    pub fn components(&self) -> [(&'static str, &DMatrix<Complex64>); 3] {
        [("x", &self.x), ("y", &self.y), ("z", &self.z)]
    }
}

/// Angular momentum matrices in the `m = -j..=j` ascending basis.
pub fn spin_matrices(j: SpinJ) -> SpinMatrices {
    let d = j.dim();
    let jj = j.j();
    let ms: Vec<f64> = j.m_values().collect();
    let z = DMatrix::from_fn(d, d, |a, b| {
        if a == b {
            Complex64::new(ms[a], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
    let mut raise = DMatrix::<Complex64>::zeros(d, d);
    for k in 0..d.saturating_sub(1) {
        let m = ms[k];
        raise[(k + 1, k)] = Complex64::new((jj * (jj + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let x = (&raise + &lower).scale(0.5);
    let y = (&raise - &lower) * Complex64::new(0.0, -0.5);
    SpinMatrices { x, y, z }
}

/// Grid and wavepacket used for the momentum / kinetic-energy check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumCheckConfig {
    /// Grid spans `[-p_max, p_max]`.
    pub p_max: f64,
    /// Odd number of grid points.
    pub points: usize,
    pub center: f64,
    pub spread: f64,
    /// Position offset giving the packet a `exp(-i p x0)` phase.
    pub x0: f64,
    pub mass: f64,
}

impl Default for MomentumCheckConfig {
    fn default() -> Self {
        Self {
            p_max: 10.0,
            points: 201,
            center: 2.0,
            spread: 1.0,
            x0: 0.7,
            mass: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SMatrixCheckConfig {
    pub pole: ResonancePole,
    pub e_min: f64,
    pub e_max: f64,
    pub points: usize,
}

impl Default for SMatrixCheckConfig {
    fn default() -> Self {
        let pole = ResonancePole::new(1.0, 0.2).expect("valid pole");
        Self {
            pole,
            e_min: pole.energy() - 50.0 * pole.width(),
            e_max: pole.energy() + 50.0 * pole.width(),
            points: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConjugationCheckConfig {
    pub momentum: MomentumCheckConfig,
    pub s_matrix: SMatrixCheckConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinConjugationCheck {
    pub component: String,
    /// `max |R J R⁻¹ + J|`
    pub max_residual: f64,
    pub result_is_linear: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumCheck {
    pub points: usize,
    pub momentum_before: f64,
    pub momentum_after: f64,
    /// `|<P>_before + <P>_after|`
    pub momentum_flip_residual: f64,
    pub kinetic_before: f64,
    pub kinetic_after: f64,
    pub kinetic_residual: f64,
    /// `max |R P R⁻¹ + P|` on the grid
    pub momentum_operator_residual: f64,
    /// `max |R H R⁻¹ - H|` on the grid
    pub kinetic_operator_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SMatrixCheck {
    pub points: usize,
    /// `max ||S(E)| - 1|`
    pub max_unitarity_residual: f64,
    /// `max |conj(S(E)) - 1/S(E)|`
    pub max_inverse_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub row: u8,
    pub twice_j: u32,
    pub spin: Vec<SpinConjugationCheck>,
    pub momentum: MomentumCheck,
    pub s_matrix: SMatrixCheck,
    pub all_pass: bool,
}

pub fn check_conjugation_identities(rep: &RepresentationTriple) -> ConjugationReport {
    check_conjugation_identities_with(rep, &ConjugationCheckConfig::default())
}

pub fn check_conjugation_identities_with(
    rep: &RepresentationTriple,
    config: &ConjugationCheckConfig,
) -> ConjugationReport {
    let spin = spin_conjugation(rep);
    let momentum = momentum_check(&config.momentum);
    let s_matrix = s_matrix_check(&config.s_matrix);
    let all_pass = spin.iter().all(|c| c.passed) && momentum.passed && s_matrix.passed;
    ConjugationReport {
        row: rep.row,
        twice_j: rep.j.twice_j(),
        spin,
        momentum,
        s_matrix,
        all_pass,
    }
}

fn spin_conjugation(rep: &RepresentationTriple) -> Vec<SpinConjugationCheck> {
    let r = rep.r_op.to_complex();
    let r_inv = r.inverse().expect("co-representation operators are unitary");
    let copies = if rep.doubled { 2 } else { 1 };
    let spins = spin_matrices(rep.j);
    spins
        .components()
        .into_iter()
        .map(|(name, m)| {
            let j_op = AntilinearOperator::linear(block_diagonal(m, copies));
            let conj = r.compose(&j_op).compose(&r_inv);
            let max_residual = (conj.matrix() + j_op.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            let result_is_linear = !conj.conjugates();
            SpinConjugationCheck {
                component: name.to_string(),
                max_residual,
                result_is_linear,
                passed: result_is_linear && max_residual < SPIN_TOL,
            }
        })
        .collect()
}

/// Symmetric grid `[-p_max, p_max]`; an odd count puts `p = 0` on a node so
/// `p -> -p` is the index reversal.
pub fn momentum_grid(p_max: f64, points: usize) -> Result<Vec<f64>> {
    if points < 3 || points % 2 == 0 {
        return Err(Error::InvalidGrid(format!(
            "momentum grid needs an odd point count >= 3, got {points}"
        )));
    }
    if !(p_max > 0.0) || !p_max.is_finite() {
        return Err(Error::InvalidGrid(format!("p_max must be positive, got {p_max}")));
    }
    let half = (points - 1) / 2;
    let dp = p_max / half as f64;
    Ok((0..points)
        .map(|k| (k as f64 - half as f64) * dp)
        .collect())
}

/// Time reversal on a momentum-space wavefunction: `ψ(p) -> conj(ψ(-p))`.
pub fn reverse_wavefunction(psi: &[Complex64]) -> Vec<Complex64> {
    psi.iter().rev().map(|z| z.conj()).collect()
}

fn expectation(grid: &[f64], psi: &[Complex64], f: impl Fn(f64) -> f64) -> f64 {
    // Riemann sums; the common dp cancels in the ratio.
    let (num, norm) = grid
        .iter()
        .zip(psi)
        .fold((0.0, 0.0), |(n, d), (&p, z)| {
            (n + f(p) * z.norm_sqr(), d + z.norm_sqr())
        });
    num / norm
}

fn momentum_check(cfg: &MomentumCheckConfig) -> MomentumCheck {
    let grid = momentum_grid(cfg.p_max, cfg.points).expect("valid momentum grid config");
    let n = grid.len();
    let psi: Vec<Complex64> = grid
        .iter()
        .map(|&p| {
            let env = (-(p - cfg.center).powi(2) / (4.0 * cfg.spread * cfg.spread)).exp();
            Complex64::from_polar(env, -p * cfg.x0)
        })
        .collect();
    let reversed = reverse_wavefunction(&psi);
    let kinetic = |p: f64| p * p / (2.0 * cfg.mass);

    let momentum_before = expectation(&grid, &psi, |p| p);
    let momentum_after = expectation(&grid, &reversed, |p| p);
    let kinetic_before = expectation(&grid, &psi, kinetic);
    let kinetic_after = expectation(&grid, &reversed, kinetic);

    // Operator form: R = Π·K with Π the index reversal.
    let parity = DMatrix::from_fn(n, n, |a, b| {
        if a + b == n - 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // Π·K is an involution, so it is its own inverse.
    let r = AntilinearOperator::antilinear(parity);
    let r_inv = r.clone();
    let diag = |f: &dyn Fn(f64) -> f64| {
        AntilinearOperator::linear(DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            grid.iter().map(|&p| Complex64::new(f(p), 0.0)),
        )))
    };
    let p_op = diag(&|p| p);
    let h_op = diag(&kinetic);
    let p_conj = r.compose(&p_op).compose(&r_inv);
    let h_conj = r.compose(&h_op).compose(&r_inv);
    let momentum_operator_residual = p_conj.distance(&p_op.negated());
    let kinetic_operator_residual = h_conj.distance(&h_op);

    let momentum_flip_residual = (momentum_before + momentum_after).abs();
    let kinetic_residual = (kinetic_before - kinetic_after).abs();
    let passed = momentum_flip_residual < MOMENTUM_TOL
        && kinetic_residual < MOMENTUM_TOL
        && momentum_operator_residual < MOMENTUM_TOL
        && kinetic_operator_residual < MOMENTUM_TOL;
    MomentumCheck {
        points: n,
        momentum_before,
        momentum_after,
        momentum_flip_residual,
        kinetic_before,
        kinetic_after,
        kinetic_residual,
        momentum_operator_residual,
        kinetic_operator_residual,
        passed,
    }
}

/// Single-pole S-matrix `S(E) = (E - z_R*) / (E - z_R)`.
pub fn s_matrix(pole: &ResonancePole, energy: f64) -> Complex64 {
    let e = Complex64::new(energy, 0.0);
    (e - pole.z_conj()) / (e - pole.z())
}

fn s_matrix_check(cfg: &SMatrixCheckConfig) -> SMatrixCheck {
    let n = cfg.points.max(2);
    let step = (cfg.e_max - cfg.e_min) / (n - 1) as f64;
    let (mut unit, mut inv) = (0.0f64, 0.0f64);
    for k in 0..n {
        let s = s_matrix(&cfg.pole, cfg.e_min + k as f64 * step);
        unit = unit.max((s.norm() - 1.0).abs());
        inv = inv.max((s.conj() - s.inv()).norm());
    }
    SMatrixCheck {
        points: n,
        max_unitarity_residual: unit,
        max_inverse_residual: inv,
        passed: unit < S_MATRIX_TOL && inv < S_MATRIX_TOL,
    }
}
