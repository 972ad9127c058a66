//! JSON encodings.
//!
//! A state is `{"slots":[{"site":"1","cycle":0,"dim":2},...],"matrix":M}`
//! where `M` is a row-major list of rows and each entry is `[re, im]`.
//! Reports embed states in that form.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::analytics::von_neumann_entropy;
use crate::dynamics::MeasurementBasis;
use crate::error::{Error, Result};
use crate::registers::{DensityOperator, PureState, QuantumState, Register, SlotId, C64};
use crate::scenarios::{CircuitReport, NoSignalReport, ProprietyReport, ReverseReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotJson {
    pub site: String,
    pub cycle: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub slots: Vec<SlotJson>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityOperator> for StateJson {
    fn from(rho: &DensityOperator) -> Self {
        let reg = rho.register();
        let slots = reg
            .slots()
            .iter()
            .zip(reg.dims())
            .map(|(s, &dim)| SlotJson {
                site: s.site.clone(),
                cycle: s.cycle,
                dim,
            })
            .collect();
        let m = rho.matrix();
        let matrix = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect();
        StateJson { slots, matrix }
    }
}

impl From<DensityOperator> for StateJson {
    fn from(rho: DensityOperator) -> Self {
        StateJson::from(&rho)
    }
}

impl TryFrom<StateJson> for DensityOperator {
    type Error = Error;

    fn try_from(json: StateJson) -> Result<Self> {
        let (slots, dims): (Vec<SlotId>, Vec<usize>) = json
            .slots
            .into_iter()
            .map(|s| (SlotId::new(s.site, s.cycle), s.dim))
            .unzip();
        let register = Register::new(slots, dims)?;
        let n = register.size();
        if json.matrix.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: json.matrix.len(),
            });
        }
        let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        for (r, row) in json.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (c, [re, im]) in row.iter().enumerate() {
                m[(r, c)] = C64::new(*re, *im);
            }
        }
        DensityOperator::new(register, m)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let json = StateJson::deserialize(deserializer)?;
        DensityOperator::try_from(json).map_err(serde::de::Error::custom)
    }
}

/// One prepared input slot and its amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreparedJson {
    pub site: String,
    pub cycle: i64,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for PreparedJson {
    fn from(psi: &PureState) -> Self {
        let slot = &psi.register().slots()[0];
        PreparedJson {
            site: slot.site.clone(),
            cycle: slot.cycle,
            amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputJson {
    pub prepared: Vec<PreparedJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropiesJson {
    pub rho_s: Option<f64>,
    pub rho_d: Option<f64>,
    pub rho_out: f64,
}

/// `{"input":..,"rho_s":M,"rho_d":M,"rho_out":M,"entropies":{..}}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitJson {
    pub input: InputJson,
    pub rho_s: Option<DensityOperator>,
    pub rho_d: Option<DensityOperator>,
    pub rho_out: DensityOperator,
    pub entropies: EntropiesJson,
}

impl CircuitJson {
    pub fn from_report(input: InputJson, report: &CircuitReport) -> Self {
        CircuitJson {
            input,
            rho_s: Some(report.rho_s.clone()),
            rho_d: Some(report.rho_d.clone()),
            rho_out: report.rho_out.clone(),
            entropies: EntropiesJson {
                rho_s: Some(report.entropy_s),
                rho_d: Some(report.entropy_d),
                rho_out: report.entropy_out,
            },
        }
    }

    pub fn from_states(
        input: InputJson,
        rho_s: Option<DensityOperator>,
        rho_d: Option<DensityOperator>,
        rho_out: DensityOperator,
    ) -> Result<Self> {
        let entropies = EntropiesJson {
            rho_s: rho_s.as_ref().map(von_neumann_entropy).transpose()?,
            rho_d: rho_d.as_ref().map(von_neumann_entropy).transpose()?,
            rho_out: von_neumann_entropy(&rho_out)?,
        };
        Ok(CircuitJson {
            input,
            rho_s,
            rho_d,
            rho_out,
            entropies,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeJson {
    pub label: String,
    pub probability: f64,
    pub rho_out: DensityOperator,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoSignalJson {
    pub basis: &'static str,
    pub tau: i64,
    pub outcomes: Vec<OutcomeJson>,
    pub averaged: DensityOperator,
    pub reduced_substitution: DensityOperator,
    pub max_pairwise_distance: f64,
}

impl NoSignalJson {
    pub fn from_report(report: &NoSignalReport) -> Result<Self> {
        Ok(NoSignalJson {
            basis: basis_name(report.basis),
            tau: report.tau,
            outcomes: report
                .outcomes
                .iter()
                .map(|o| OutcomeJson {
                    label: o.label.clone(),
                    probability: o.probability,
                    rho_out: o.rho_out.clone(),
                })
                .collect(),
            averaged: report.averaged.clone(),
            reduced_substitution: report.reduced_substitution.clone(),
            max_pairwise_distance: report.max_pairwise_distance()?,
        })
    }
}

fn basis_name(basis: MeasurementBasis) -> &'static str {
    basis.name()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReverseJson {
    pub tau: i64,
    pub input: PreparedJson,
    pub recovered: DensityOperator,
    pub recovered_amplitudes: Vec<[f64; 2]>,
    pub fidelity: f64,
    pub purities: Vec<f64>,
}

impl ReverseJson {
    pub fn from_report(input: &PureState, report: &ReverseReport) -> Self {
        ReverseJson {
            tau: report.tau,
            input: PreparedJson::from(input),
            recovered: report.recovered.clone(),
            recovered_amplitudes: report
                .recovered_state
                .amplitudes()
                .iter()
                .map(|a| [a.re, a.im])
                .collect(),
            fidelity: report.fidelity,
            purities: report.purities.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProprietyJson {
    pub ensemble: Vec<(f64, PreparedJson)>,
    pub proper: DensityOperator,
    pub improper: DensityOperator,
    pub distance: f64,
}

impl ProprietyJson {
    pub fn from_report(ensemble: &[(f64, PureState)], report: &ProprietyReport) -> Self {
        ProprietyJson {
            ensemble: ensemble
                .iter()
                .map(|(p, psi)| (*p, PreparedJson::from(psi)))
                .collect(),
            proper: report.proper.clone(),
            improper: report.improper.clone(),
            distance: report.distance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointJson {
    pub outcome: String,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecohereJson {
    pub tau: i64,
    pub rho: DensityOperator,
    pub joint: Vec<JointJson>,
}
