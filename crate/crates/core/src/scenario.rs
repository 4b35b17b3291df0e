//! Time-grid scenarios, the Lorentzian lineshape and the tabular output they
//! produce.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resonance::{canonical_state, ArrowConvention, GamowState, Kind, Regime, ResonancePole};
use crate::semigroup::{branch_for, evolve, relative_intensity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Survival,
    FactorReal,
    FactorImag,
}

impl Output {
    pub const ALL: [Output; 3] = [Output::Survival, Output::FactorReal, Output::FactorImag];

    pub fn column(self) -> &'static str {
        match self {
            Output::Survival => "survival",
            Output::FactorReal => "factor_real",
            Output::FactorImag => "factor_imag",
        }
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.column() == s.trim())
            .ok_or_else(|| Error::InvalidGrid(format!("unknown output column {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    /// Number of grid points, endpoints included.
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::TooFewSteps(steps));
        }
        if !t_min.is_finite() || !t_max.is_finite() || !(t_min < t_max) {
            return Err(Error::InvalidGrid(format!(
                "need finite t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        Ok(Self {
            t_min,
            t_max,
            steps,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.steps)
    }
}

/// `n` evenly spaced points with both endpoints hit exactly.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        end
                    } else {
                        start + k as f64 * step
                    }
                })
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub pole: ResonancePole,
    pub arrow: ArrowConvention,
    pub kind: Kind,
    pub regime: Regime,
    pub grid: TimeGrid,
    pub outputs: Vec<Output>,
}

impl Scenario {
    pub fn new(
        pole: ResonancePole,
        arrow: ArrowConvention,
        kind: Kind,
        regime: Regime,
        grid: TimeGrid,
    ) -> Self {
        Self {
            pole,
            arrow,
            kind,
            regime,
            grid,
            outputs: Output::ALL.to_vec(),
        }
    }

    pub fn state(&self) -> GamowState {
        canonical_state(self.arrow, self.kind, self.regime, self.pole)
    }

    /// Ok when every grid point is inside the branch's half-domain.
    pub fn validate(&self) -> Result<()> {
        let branch = branch_for(&self.state());
        // the grid is monotone so the endpoints decide
        for t in [self.grid.t_min, self.grid.t_max] {
            if !branch.domain().contains(t) {
                return Err(Error::GridOutsideDomain {
                    t,
                    domain: branch.domain().half().as_str(),
                    branch: branch.id().label(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayPoint {
    pub t: f64,
    pub survival: f64,
    pub factor_real: f64,
    pub factor_imag: f64,
}

impl DecayPoint {
    fn get(&self, o: Output) -> f64 {
        match o {
            Output::Survival => self.survival,
            Output::FactorReal => self.factor_real,
            Output::FactorImag => self.factor_imag,
        }
    }
}

/// Evaluates the scenario's branch on every grid point. The survival column
/// is `|factor|²` relative to the amplitude, for growing states too.
pub fn run_decay(scenario: &Scenario) -> Result<Vec<DecayPoint>> {
    scenario.validate()?;
    let state = scenario.state();
    scenario
        .grid
        .points()
        .into_iter()
        .map(|t| {
            let f = evolve(&state, t)?.value;
            Ok(DecayPoint {
                t,
                survival: relative_intensity(&state, t)?,
                factor_real: f.re,
                factor_imag: f.im,
            })
        })
        .collect()
}

pub fn decay_table(scenario: &Scenario, points: &[DecayPoint]) -> Table {
    let mut columns = vec!["t".to_string()];
    columns.extend(scenario.outputs.iter().map(|o| o.column().to_string()));
    let rows = points
        .iter()
        .map(|p| {
            std::iter::once(p.t)
                .chain(scenario.outputs.iter().map(|&o| p.get(o)))
                .collect()
        })
        .collect();
    Table { columns, rows }
}

/// Breit-Wigner density `(Γ/2π) / ((E - E_R)² + Γ²/4)`.
pub fn lorentzian(pole: &ResonancePole, energy: f64) -> f64 {
    let g = pole.width();
    let de = energy - pole.energy();
    (g / (2.0 * PI)) / (de * de + 0.25 * g * g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineshapePoint {
    pub energy: f64,
    pub density: f64,
}

pub fn lineshape(pole: &ResonancePole, energies: &[f64]) -> Result<Vec<LineshapePoint>> {
    if energies.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(energies
        .iter()
        .map(|&energy| LineshapePoint {
            energy,
            density: lorentzian(pole, energy),
        })
        .collect())
}

pub fn lineshape_table(points: &[LineshapePoint]) -> Table {
    Table {
        columns: vec!["energy".into(), "density".into()],
        rows: points.iter().map(|p| vec![p.energy, p.density]).collect(),
    }
}

/// Numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    /// Header row then one line per row; floats use shortest round-trip form.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::MalformedTable(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string())).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::MalformedTable(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::MalformedTable(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::MalformedTable(e.to_string());
        let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(bad)?;
            let row = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| Error::MalformedTable(format!("{f:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != columns.len() {
                return Err(Error::MalformedTable(format!(
                    "row has {} fields, header has {}",
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Table =
            serde_json::from_str(text).map_err(|e| Error::MalformedTable(e.to_string()))?;
        if t.rows.iter().any(|r| r.len() != t.columns.len()) {
            return Err(Error::MalformedTable("ragged rows".into()));
        }
        Ok(t)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}
