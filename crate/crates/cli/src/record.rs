//! Line-delimited JSON records. Doubles are written in shortest round-trip
//! form, so parsing a record back gives the same bits.

use serde::{Deserialize, Serialize};

use crate::config::SpecParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub family: u8,
    pub m: usize,
    pub lambda: f64,
    pub d: u32,
    pub l: u32,
    pub a: f64,
    pub b: Vec<f64>,
    pub n: usize,
}

impl From<&SpecParams> for Params {
    fn from(s: &SpecParams) -> Self {
        Self {
            family: s.family,
            m: s.b.len(),
            lambda: s.lambda,
            d: s.d,
            l: s.l,
            a: s.a,
            b: s.b.clone(),
            n: s.n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    /// Measured value; `None` when the check could not be carried out.
    pub value: Option<f64>,
    pub limit: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub grid_points: usize,
    /// Nearest finite-difference eigenvalue after Richardson extrapolation.
    pub fd_energy: Option<f64>,
    /// Continuum edge when the spectrum has one.
    pub threshold: Option<f64>,
    pub gates: Vec<Gate>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    #[serde(flatten)]
    pub params: Params,
    pub big_a: f64,
    pub big_b: Vec<f64>,
    pub epsilon: f64,
    pub roots: Vec<f64>,
    pub energy: f64,
    pub normalizable: bool,
    pub normalizability: String,
    pub nodes: usize,
    /// Scaled ODE residual on the grid; absent when not finite.
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexRecord {
    #[serde(flatten)]
    pub params: Params,
    /// `[re, im]` pairs.
    pub roots: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    #[serde(flatten)]
    pub params: Params,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Record {
    State(StateRecord),
    ComplexConfiguration(ComplexRecord),
    Failure(FailureRecord),
}

impl Record {
    pub fn params(&self) -> &Params {
        match self {
            Record::State(r) => &r.params,
            Record::ComplexConfiguration(r) => &r.params,
            Record::Failure(r) => &r.params,
        }
    }

    /// False only for states whose verification gates failed.
    pub fn passed(&self) -> bool {
        match self {
            Record::State(r) => r.verification.as_ref().is_none_or(Verification::passed),
            _ => true,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_line(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line)
    }
}
