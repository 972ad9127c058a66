//! Entropies, trace distances and the distinguishability curves.
//!
//! Entropies are in bits. Trace distance is `Tr|A - B|` without the 1/2
//! prefactor, so orthogonal pure states sit at distance 2.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::registers::{
    hermitian_eigenvalues, DensityOperator, PureState, QuantumState, SlotId, C64, EIGEN_TOL,
};
use crate::scenarios::run_fig1_pure;

/// One abscissa of a figure with its named ordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub beta_sq: f64,
    pub values: Vec<(&'static str, f64)>,
}

impl CurvePoint {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }
}

/// Input distance taken as `2 b2`.
pub const D_IN_CLOSED_FORM: &str = "D_in_paper";
/// Input distance as the trace norm of the two input projectors, `2 sqrt(b2)`.
pub const D_IN_TRACENORM: &str = "D_in_tracenorm";
pub const D_OUT: &str = "D_out";
pub const S_IN: &str = "S_in";
pub const S_RHO_D: &str = "S_rho_d";
pub const S_OUT: &str = "S_out";

/// Shannon entropy in bits of a spectrum, with the positivity clamp applied.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in eigenvalues {
        if v < -EIGEN_TOL {
            return Err(Error::NegativeEigenvalue(v));
        }
        if v > 0.0 {
            s -= v * v.log2();
        }
    }
    Ok(s.max(0.0))
}

pub fn binary_entropy(p: f64) -> f64 {
    spectrum_entropy(&[p, 1.0 - p]).unwrap_or(0.0)
}

pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues())
}

/// Sum of absolute eigenvalues of a hermitian matrix.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}

pub fn trace_norm_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.register().dims() != b.register().dims() {
        return Err(Error::DimensionMismatch {
            expected: a.register().size(),
            found: b.register().size(),
        });
    }
    Ok(trace_norm(&(a.matrix() - b.matrix())))
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.matrix().iter().map(|v| v.norm_sqr()).sum()
}

/// `S(Tr_2 rho) + S(Tr_1 rho) - S(rho)` for a two-slot operator.
pub fn subadditivity_margin(rho: &DensityOperator) -> Result<f64> {
    let slots = rho.register().slots();
    if slots.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "subadditivity needs two slots, got {}",
            slots.len()
        )));
    }
    let first = rho.partial_trace(&slots[..1])?;
    let second = rho.partial_trace(&slots[1..])?;
    Ok(von_neumann_entropy(&first)? + von_neumann_entropy(&second)? - von_neumann_entropy(rho)?)
}

/// `steps` evenly spaced points covering `[0, 1]` inclusive.
pub fn beta_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least two points, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| i as f64 / last).collect())
}

fn check_beta_sq(beta_sq: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta_sq) {
        return Err(Error::InvalidParameter(format!(
            "beta^2 = {beta_sq} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Distinguishability of `|0>` and `sqrt(1-b2)|0> + sqrt(b2)|1>` before and
/// after the displaced circuit. Both input conventions are reported: the
/// closed-form `2 b2` and the trace norm of the two input projectors.
pub fn fig2_curves(grid: &[f64]) -> Result<Vec<CurvePoint>> {
    let slot = SlotId::new("1", 0);
    let zero = PureState::real_superposition(slot.clone(), 0.0)?;
    let zero_out = run_fig1_pure(&zero, 1)?.rho_out;
    grid.iter()
        .map(|&b2| {
            check_beta_sq(b2)?;
            let psi = PureState::real_superposition(slot.clone(), b2)?;
            let out = run_fig1_pure(&psi, 1)?.rho_out;
            Ok(CurvePoint {
                beta_sq: b2,
                values: vec![
                    (D_IN_CLOSED_FORM, 2.0 * b2),
                    (
                        D_IN_TRACENORM,
                        trace_norm_distance(&zero.to_density(), &psi.to_density())?,
                    ),
                    (D_OUT, trace_norm_distance(&zero_out, &out)?),
                ],
            })
        })
        .collect()
}

/// `D_out - D_in` under the named input convention; positive means the
/// circuit increased distinguishability.
pub fn amplification(point: &CurvePoint, input_column: &str) -> Option<f64> {
    Some(point.get(D_OUT)? - point.get(input_column)?)
}
