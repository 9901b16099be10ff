//! Machine-readable run summary (`summary.json`).

use serde::{Deserialize, Serialize};

use super::config::ScenarioId;

/// JSON numbers for finite values; `"inf"`, `"-inf"` or `"nan"` otherwise.
pub mod extended_f64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: ScenarioId,
    pub lattice: LatticeSummary,
    pub well: WellSummary,
    pub boost: BoostSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spectrum: Option<SpectrumSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dynamics: Option<DynamicsSummary>,
    pub thresholds: Thresholds,
    /// False when the boundary contamination guard fired.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub sites: usize,
    pub boundary: String,
    /// Lattice the initial modes were computed on, if different.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode_sites: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WellSummary {
    PoschlTeller {
        nu: f64,
        /// a/l.
        ratio: f64,
        center0: f64,
    },
    Harmonic {
        /// Ωa².
        omega_a2: f64,
        center0: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostSummary {
    pub velocity: f64,
    pub qa: f64,
    pub sin_qa: f64,
    pub gamma: f64,
    #[serde(with = "extended_f64")]
    pub mass_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nu_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub predicted_bound_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    /// Depth of the diagonalized well.
    pub nu: f64,
    pub bound_count: usize,
    pub sturm_count: usize,
    pub bound_threshold: f64,
    pub min_eigenvalue: f64,
    pub min_participation: f64,
    pub bound_states: Vec<BoundStateSummary>,
    /// Levels where R < 0.1·sites disagrees with the energy criterion.
    pub participation_disagreements: Vec<usize>,
    pub analytic_levels: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateSummary {
    pub index: usize,
    pub energy: f64,
    pub participation: f64,
    pub localized_by_participation: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub parity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsSummary {
    pub initial_state: String,
    pub dt: f64,
    pub step_mode: String,
    pub t_max: f64,
    pub record_stride: usize,
    pub steps: usize,
    pub half_window: f64,
    pub final_well_center: f64,
    pub final_localized_fraction: f64,
    pub localized: bool,
    pub spread: bool,
    pub final_tail_norm: f64,
    #[serde(with = "extended_f64")]
    pub final_overlap: f64,
    pub max_norm_drift: f64,
    pub max_edge_norm: f64,
    pub boundary_contaminated: bool,
    pub fit_window: [f64; 2],
    pub lifetime: LifetimeSummary,
    pub overlap_lifetime: LifetimeSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifetimeSummary {
    pub observable: String,
    #[serde(with = "extended_f64")]
    pub tau: f64,
    #[serde(with = "extended_f64")]
    pub r_squared: f64,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl LifetimeSummary {
    pub fn is_finite(&self) -> bool {
        self.error.is_none() && self.tau.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub localized_min_fraction: f64,
    pub spread_max_fraction: f64,
    pub band_tolerance: f64,
    pub edge_sites: usize,
    pub edge_norm_limit: f64,
    pub norm_drift_limit: f64,
    pub tau_cap: f64,
}
