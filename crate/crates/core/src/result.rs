use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::discrepancy::Assignment;
use crate::error::{Error, Result};
use crate::qsim::Histogram;
use crate::vqa::Ansatz;

/// How an assignment was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Random,
    Gsw,
    Vqe,
    Qaoa,
    Exhaustive,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Random,
        Method::Gsw,
        Method::Vqe,
        Method::Qaoa,
        Method::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::Gsw => "gsw",
            Method::Vqe => "vqe",
            Method::Qaoa => "qaoa",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Output of any assignment method; serialized as the run JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub method: Method,
    pub omega: Assignment,
    /// `i_X(omega)`, always recomputed from `omega`.
    pub imbalance: f64,
    /// `<H_B>` of the final variational state, or the eigenvalue of `|omega>`
    /// for classical methods.
    pub expectation: f64,
    pub phi: f64,
    pub seed: u64,
    /// Measurement shots for the final sampling step; 0 when nothing was sampled.
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<Ansatz>,
    /// Objective evaluations (circuit runs, draws, or scanned points).
    pub evaluations: usize,
    #[serde(skip)]
    pub histogram: Option<Histogram>,
}

impl RunResult {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
