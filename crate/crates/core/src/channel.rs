//! Closed-form maps for the displaced two-CNOT circuit.
//!
//! These are the analytic counterparts of the full simulations in
//! [`crate::scenarios`]; tests pin each formula against brute force.

use nalgebra::DMatrix;

use crate::analytics::trace_norm;
use crate::error::{Error, Result};
use crate::registers::{DensityOperator, Register, SlotId, C64};

const TOL: f64 = 1e-12;

/// Single-qubit density matrix `[[g00, g01], [conj(g01), g11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    g00: f64,
    g11: f64,
    g01: C64,
}

impl QubitDensity {
    pub fn new(g00: f64, g11: f64, g01: C64) -> Result<Self> {
        if !(g00.is_finite() && g11.is_finite() && g01.re.is_finite() && g01.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite qubit density".into()));
        }
        if g00 < -TOL || g11 < -TOL {
            return Err(Error::NegativeEigenvalue(g00.min(g11)));
        }
        if (g00 + g11 - 1.0).abs() > TOL {
            return Err(Error::TraceNotOne(g00 + g11));
        }
        if g01.norm_sqr() > g00 * g11 + TOL {
            return Err(Error::InvalidParameter(format!(
                "coherence |{g01}|^2 exceeds g00*g11"
            )));
        }
        Ok(QubitDensity { g00, g11, g01 })
    }

    pub fn diagonal(g00: f64) -> Result<Self> {
        QubitDensity::new(g00, 1.0 - g00, C64::new(0.0, 0.0))
    }

    /// `|psi><psi|` for `psi = alpha|0> + beta|1>` (renormalized).
    pub fn from_pure(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm.sqrt()));
        }
        QubitDensity::new(
            alpha.norm_sqr() / norm,
            beta.norm_sqr() / norm,
            alpha * beta.conj() / norm,
        )
    }

    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        if rho.register().dims() != [2] {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: rho.register().size(),
            });
        }
        let m = rho.matrix();
        QubitDensity::new(m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)])
    }

    pub fn g00(&self) -> f64 {
        self.g00
    }

    pub fn g11(&self) -> f64 {
        self.g11
    }

    pub fn g01(&self) -> C64 {
        self.g01
    }

    pub fn populations(&self) -> [f64; 2] {
        [self.g00, self.g11]
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(self.g00, 0.0),
                self.g01,
                self.g01.conj(),
                C64::new(self.g11, 0.0),
            ],
        )
    }

    pub fn to_density(&self, slot: SlotId) -> Result<DensityOperator> {
        DensityOperator::new(Register::single(slot, 2)?, self.matrix())
    }

    /// `lambda * a + (1 - lambda) * b`.
    pub fn mix(lambda: f64, a: &QubitDensity, b: &QubitDensity) -> Result<Self> {
        let mu = 1.0 - lambda;
        QubitDensity::new(
            lambda * a.g00 + mu * b.g00,
            lambda * a.g11 + mu * b.g11,
            a.g01 * lambda + b.g01 * mu,
        )
    }
}

/// Populations of the control copy (`p`) and the target copy (`q`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationPair {
    pub p: [f64; 2],
    pub q: [f64; 2],
}

impl PopulationPair {
    pub fn new(p: [f64; 2], q: [f64; 2]) -> Result<Self> {
        for pair in [p, q] {
            if pair.iter().any(|&v| v < -TOL || !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("populations {pair:?}")));
            }
            if (pair[0] + pair[1] - 1.0).abs() > TOL {
                return Err(Error::TraceNotOne(pair[0] + pair[1]));
            }
        }
        Ok(PopulationPair { p, q })
    }

    pub fn symmetric(rho: &QubitDensity) -> Self {
        PopulationPair {
            p: rho.populations(),
            q: rho.populations(),
        }
    }
}

/// `rho -> diag(g00^2 + g11^2, 2 g00 g11)`. Coherences never reach the output.
pub fn nonlinear_map(rho: &QubitDensity) -> QubitDensity {
    generalized_map(&PopulationPair::symmetric(rho))
}

/// Output populations are the XOR convolution of control and target
/// populations: `diag(p0 q0 + p1 q1, p0 q1 + p1 q0)`.
pub fn generalized_map(pq: &PopulationPair) -> QubitDensity {
    let [p0, p1] = pq.p;
    let [q0, q1] = pq.q;
    QubitDensity {
        g00: p0 * q0 + p1 * q1,
        g11: p0 * q1 + p1 * q0,
        g01: C64::new(0.0, 0.0),
    }
}

/// Measurement-cycle state of a displaced Bell pair: `(I/2) ⊗ (I/2)` on
/// sites `1` and `2` at cycle 1 (source at cycle 0, one-cycle displacement).
pub fn displaced_bell_channel() -> DensityOperator {
    let register = Register::qubits(vec![SlotId::new("1", 1), SlotId::new("2", 1)])
        .expect("distinct slots");
    DensityOperator::maximally_mixed(register)
}

/// Trace-norm gap between the map applied to a mixture and the mixture of
/// the mapped states. Zero for any map that is linear on density matrices.
pub fn nonlinearity_witness(a: &QubitDensity, b: &QubitDensity, lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "mixing weight {lambda} outside [0, 1]"
        )));
    }
    let of_mixture = nonlinear_map(&QubitDensity::mix(lambda, a, b)?);
    let mixture_of = QubitDensity::mix(lambda, &nonlinear_map(a), &nonlinear_map(b))?;
    Ok(trace_norm(&(of_mixture.matrix() - mixture_of.matrix())))
}
