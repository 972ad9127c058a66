//! Multi-cycle construction and evolution.
//!
//! Gates only ever couple slots that share a clock cycle. Time dilation is a
//! cycle relabeling; its observable effect comes from the two-copy expansion
//! followed by a cycle-filtering trace.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::registers::{
    max_abs, BasisLevel, DensityOperator, PureState, QuantumState, Register, SlotId, C64, ONE,
    ZERO,
};

const UNITARY_TOL: f64 = 1e-12;
const ZERO_PROBABILITY: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    Cnot,
    X,
    Z,
    H,
    Phase(f64),
    Custom(String),
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::Cnot => write!(f, "cnot"),
            GateKind::X => write!(f, "x"),
            GateKind::Z => write!(f, "z"),
            GateKind::H => write!(f, "h"),
            GateKind::Phase(theta) => write!(f, "phase({theta})"),
            GateKind::Custom(name) => write!(f, "{name}"),
        }
    }
}

/// A unitary on `arity` logical qubits. On dimension-3 slots the gate only
/// sees the logical levels and leaves any component with a vacuum target
/// untouched.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    arity: usize,
    matrix: DMatrix<C64>,
}

impl Gate {
    /// Control first, target second.
    pub fn cnot() -> Self {
        let mut m = DMatrix::from_element(4, 4, ZERO);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        Gate {
            kind: GateKind::Cnot,
            arity: 2,
            matrix: m,
        }
    }

    pub fn x() -> Self {
        Gate {
            kind: GateKind::X,
            arity: 1,
            matrix: DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        }
    }

    pub fn z() -> Self {
        Gate {
            kind: GateKind::Z,
            arity: 1,
            matrix: DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    pub fn h() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate {
            kind: GateKind::H,
            arity: 1,
            matrix: DMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
        }
    }

    /// `diag(1, e^{i theta})`.
    pub fn phase(theta: f64) -> Self {
        Gate {
            kind: GateKind::Phase(theta),
            arity: 1,
            matrix: DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, theta)]),
        }
    }

    pub fn custom(name: impl Into<String>, arity: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let name = name.into();
        let n = 1usize << arity;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows(),
            });
        }
        let defect = max_abs(&(matrix.adjoint() * &matrix - DMatrix::identity(n, n)));
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(name));
        }
        Ok(Gate {
            kind: GateKind::Custom(name),
            arity,
            matrix,
        })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Lifts the gate to the full register, acting on `positions`.
    fn embed(&self, register: &Register, positions: &[usize]) -> DMatrix<C64> {
        let n = register.size();
        let dims = register.dims();
        let mut full = DMatrix::from_element(n, n, ZERO);
        for col in 0..n {
            let digits = register.digits(col);
            let logical: Option<Vec<usize>> = positions
                .iter()
                .map(|&p| {
                    let offset = dims[p] - 2;
                    digits[p].checked_sub(offset)
                })
                .collect();
            let Some(bits) = logical else {
                // a participating slot holds vacuum
                full[(col, col)] = ONE;
                continue;
            };
            let sub_col = bits.iter().fold(0, |acc, &b| acc * 2 + b);
            for sub_row in 0..(1 << self.arity) {
                let amp = self.matrix[(sub_row, sub_col)];
                if amp == ZERO {
                    continue;
                }
                let mut out = digits.clone();
                for (k, &p) in positions.iter().enumerate() {
                    let bit = (sub_row >> (self.arity - 1 - k)) & 1;
                    out[p] = bit + dims[p] - 2;
                }
                full[(register.index_of_digits(&out), col)] += amp;
            }
        }
        full
    }
}

/// Applies `gate` to `targets`, which must all sit at the same cycle.
pub fn apply_gate<S: QuantumState>(state: &S, gate: &Gate, targets: &[SlotId]) -> Result<S> {
    if targets.len() != gate.arity {
        return Err(Error::ArityMismatch {
            gate: gate.kind.to_string(),
            expected: gate.arity,
            found: targets.len(),
        });
    }
    let register = state.register();
    let positions: Vec<usize> = targets
        .iter()
        .map(|t| register.require(t))
        .collect::<Result<_>>()?;
    for (k, p) in positions.iter().enumerate() {
        if positions[..k].contains(p) {
            return Err(Error::RepeatedTarget);
        }
    }
    let mut cycles: Vec<i64> = targets.iter().map(|t| t.cycle).collect();
    cycles.dedup();
    if cycles.len() > 1 {
        return Err(Error::CycleMisalignment(targets.iter().map(|t| t.cycle).collect()));
    }
    Ok(state.evolve(&gate.embed(register, &positions)))
}

/// How copies of a mixed input are materialized over several cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correlation {
    /// Each pure branch is copied identically to every cycle, then the
    /// branches are mixed: a locally prepared (proper) mixture.
    CoherentHistory,
    /// An independent copy of the averaged operator per cycle: the reduced
    /// state of a larger entangled system (improper mixture).
    UncorrelatedCopies,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionPolicy {
    cycles: Vec<i64>,
    correlation: Correlation,
}

impl ExpansionPolicy {
    pub fn new(cycles: Vec<i64>, correlation: Correlation) -> Result<Self> {
        check_cycles(&cycles)?;
        Ok(ExpansionPolicy {
            cycles,
            correlation,
        })
    }

    pub fn cycles(&self) -> &[i64] {
        &self.cycles
    }

    pub fn correlation(&self) -> Correlation {
        self.correlation
    }
}

fn check_cycles(cycles: &[i64]) -> Result<()> {
    if cycles.is_empty() || cycles.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadCycleList(cycles.to_vec()));
    }
    Ok(())
}

/// Classical ensemble of pure branches over one register.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    branches: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn new(branches: Vec<(f64, PureState)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return Err(Error::EmptyEnsemble);
        };
        let register = first.register();
        if branches.iter().any(|(_, psi)| psi.register() != register) {
            return Err(Error::MixedRegisters);
        }
        if let Some((p, _)) = branches.iter().find(|(p, _)| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("branch probability {p}")));
        }
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadProbabilities(total));
        }
        Ok(Ensemble { branches })
    }

    pub fn pure(psi: PureState) -> Self {
        Ensemble {
            branches: vec![(1.0, psi)],
        }
    }

    /// Spectral decomposition of `rho`. Only meaningful as a proper mixture
    /// when the spectrum is non-degenerate.
    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        let eigen = crate::registers::hermitize(rho.matrix().clone()).symmetric_eigen();
        let mut branches = Vec::new();
        for (k, &weight) in eigen.eigenvalues.iter().enumerate() {
            if weight <= 1e-14 {
                continue;
            }
            let v: DVector<C64> = eigen.eigenvectors.column(k).into_owned();
            branches.push((weight, PureState::normalized(rho.register().clone(), v)?));
        }
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        for (p, _) in &mut branches {
            *p /= total;
        }
        Ensemble::new(branches)
    }

    pub fn branches(&self) -> &[(f64, PureState)] {
        &self.branches
    }

    pub fn register(&self) -> &Register {
        self.branches[0].1.register()
    }

    pub fn is_pure(&self) -> bool {
        self.branches.len() == 1
    }

    pub fn to_density(&self) -> DensityOperator {
        let n = self.register().size();
        let mut m = DMatrix::from_element(n, n, ZERO);
        for (p, psi) in &self.branches {
            m += psi.to_density().matrix().map(|v| v * *p);
        }
        DensityOperator::from_raw(self.register().clone(), m)
    }

    /// Applies the same pure-state map to every branch.
    pub fn map<F>(&self, f: F) -> Result<Ensemble>
    where
        F: Fn(&PureState) -> Result<PureState>,
    {
        let branches = self
            .branches
            .iter()
            .map(|(p, psi)| Ok((*p, f(psi)?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(branches)
    }
}

fn single_cycle(register: &Register) -> Result<i64> {
    match register.cycles().as_slice() {
        [c] => Ok(*c),
        other => Err(Error::NotSingleCycle(other.to_vec())),
    }
}

/// Copies a single-cycle state onto each requested cycle, preserving sites.
pub fn free_expansion_pure(psi: &PureState, cycles: &[i64]) -> Result<PureState> {
    check_cycles(cycles)?;
    let base = single_cycle(psi.register())?;
    let mut acc: Option<PureState> = None;
    for &c in cycles {
        let copy = psi.shift_cycles(c - base)?;
        acc = Some(match acc {
            None => copy,
            Some(a) => a.tensor(&copy)?,
        });
    }
    Ok(acc.expect("at least one cycle"))
}

/// Multi-cycle expansion of a (possibly mixed) single-cycle source.
pub fn free_expansion(source: &Ensemble, policy: &ExpansionPolicy) -> Result<DensityOperator> {
    match policy.correlation {
        Correlation::CoherentHistory => {
            let parts = source
                .branches()
                .iter()
                .map(|(p, psi)| Ok((*p, free_expansion_pure(psi, &policy.cycles)?.to_density())))
                .collect::<Result<Vec<_>>>()?;
            mix_unchecked(&parts)
        }
        Correlation::UncorrelatedCopies => {
            let rho = source.to_density();
            let base = single_cycle(rho.register())?;
            let mut acc: Option<DensityOperator> = None;
            for &c in &policy.cycles {
                let copy = rho.shift_cycles(c - base)?;
                acc = Some(match acc {
                    None => copy,
                    Some(a) => a.tensor(&copy)?,
                });
            }
            Ok(acc.expect("at least one cycle"))
        }
    }
}

fn mix_unchecked(parts: &[(f64, DensityOperator)]) -> Result<DensityOperator> {
    let (_, first) = parts.first().ok_or(Error::EmptyEnsemble)?;
    let n = first.register().size();
    let mut m = DMatrix::from_element(n, n, ZERO);
    for (p, rho) in parts {
        if rho.register() != first.register() {
            return Err(Error::MixedRegisters);
        }
        m += rho.matrix().map(|v| v * *p);
    }
    Ok(DensityOperator::from_raw(first.register().clone(), m))
}

/// Measurement cycle of a displaced expansion built from a source at `cycle`.
pub fn displaced_measurement_cycle(cycle: i64, tau: i64) -> i64 {
    cycle + tau
}

fn check_displacement(register: &Register, tau: i64, dilated_site: &str) -> Result<i64> {
    if tau < 1 {
        return Err(Error::InvalidParameter(format!(
            "displacement must be at least one cycle, got {tau}"
        )));
    }
    if !register.has_site(dilated_site) {
        return Err(Error::UnknownSite(dilated_site.to_string()));
    }
    single_cycle(register)
}

/// Two-copy expansion of a single-cycle state whose `dilated_site` is shifted
/// `tau` cycles into the future.
///
/// For a source at cycle `c` and measurement cycle `t = c + tau`, copy A holds
/// `(dilated @ t, others @ t - tau)` and copy B holds
/// `(dilated @ t + tau, others @ t)`. Slot order is copy A then copy B.
pub fn displaced_expansion_pure(psi: &PureState, tau: i64, dilated_site: &str) -> Result<PureState> {
    let c = check_displacement(psi.register(), tau, dilated_site)?;
    free_expansion_pure(psi, &[c, c + tau])?.relabel_cycles(dilated_site, tau)
}

/// Mixed-source version of [`displaced_expansion_pure`].
pub fn displaced_expansion(
    source: &Ensemble,
    tau: i64,
    dilated_site: &str,
    correlation: Correlation,
) -> Result<DensityOperator> {
    let c = check_displacement(source.register(), tau, dilated_site)?;
    let policy = ExpansionPolicy::new(vec![c, c + tau], correlation)?;
    free_expansion(source, &policy)?.relabel_cycles(dilated_site, tau)
}

/// Cycle-filtering trace: keeps exactly the slots at `cycle`.
pub fn measure_at_cycle<S: QuantumState>(state: &S, cycle: i64) -> Result<DensityOperator> {
    let keep = state.register().slots_at_cycle(cycle);
    if keep.is_empty() {
        return Err(Error::EmptyCycle(cycle));
    }
    state.to_density().partial_trace(&keep)
}

/// Rank-one projector onto a single-slot outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    Level(BasisLevel),
    /// Qubit vector over the logical levels `(|0>, |1>)`.
    Vector { label: String, amplitudes: [C64; 2] },
}

impl Projector {
    pub fn label(&self) -> String {
        match self {
            Projector::Level(level) => level.symbol().to_string(),
            Projector::Vector { label, .. } => label.clone(),
        }
    }

    /// Outcome vector in the slot's full local basis.
    fn vector(&self, dim: usize) -> Result<DVector<C64>> {
        let mut v = DVector::from_element(dim, ZERO);
        match self {
            Projector::Level(level) => {
                let k = level.index(dim).ok_or_else(|| {
                    Error::InvalidParameter(format!("level {level:?} on dimension {dim}"))
                })?;
                v[k] = ONE;
            }
            Projector::Vector { amplitudes, .. } => {
                let norm = (amplitudes[0].norm_sqr() + amplitudes[1].norm_sqr()).sqrt();
                if (norm - 1.0).abs() > 1e-12 {
                    return Err(Error::NotNormalized(norm));
                }
                v[dim - 2] = amplitudes[0];
                v[dim - 1] = amplitudes[1];
            }
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementBasis {
    Computational,
    Diagonal,
}

impl MeasurementBasis {
    /// The two outcomes of the basis.
    pub fn projectors(self) -> [Projector; 2] {
        match self {
            MeasurementBasis::Computational => [
                Projector::Level(BasisLevel::Zero),
                Projector::Level(BasisLevel::One),
            ],
            MeasurementBasis::Diagonal => {
                let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [
                    Projector::Vector {
                        label: "+".into(),
                        amplitudes: [h, h],
                    },
                    Projector::Vector {
                        label: "-".into(),
                        amplitudes: [h, -h],
                    },
                ]
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MeasurementBasis::Computational => "computational",
            MeasurementBasis::Diagonal => "diagonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome<S> {
    pub label: String,
    pub probability: f64,
    /// Renormalized state with the measured slot removed.
    pub post_state: S,
}

fn remaining_register(register: &Register, pos: usize) -> Result<Register> {
    let mut slots = register.slots().to_vec();
    let mut dims = register.dims().to_vec();
    slots.remove(pos);
    dims.remove(pos);
    Register::new(slots, dims)
}

/// Splits basis index `i` into (remaining-register index, measured digit).
fn split_index(register: &Register, rest: &Register, pos: usize, i: usize) -> (usize, usize) {
    let mut digits = register.digits(i);
    let d = digits.remove(pos);
    (rest.index_of_digits(&digits), d)
}

/// Projective measurement of one slot of a pure state.
pub fn project_pure(
    psi: &PureState,
    slot: &SlotId,
    projector: &Projector,
) -> Result<MeasurementOutcome<PureState>> {
    let register = psi.register();
    let pos = register.require(slot)?;
    let phi = projector.vector(register.dims()[pos])?;
    let rest = remaining_register(register, pos)?;
    let mut amps = DVector::from_element(rest.size(), ZERO);
    for i in 0..register.size() {
        let (r, d) = split_index(register, &rest, pos, i);
        amps[r] += phi[d].conj() * psi.amplitudes()[i];
    }
    let probability = amps.norm_squared();
    if probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(projector.label()));
    }
    let post_state = PureState::normalized(rest, amps)?;
    Ok(MeasurementOutcome {
        label: projector.label(),
        probability,
        post_state,
    })
}

/// Projective measurement of one slot of a density operator.
pub fn project(
    rho: &DensityOperator,
    slot: &SlotId,
    projector: &Projector,
) -> Result<MeasurementOutcome<DensityOperator>> {
    let register = rho.register();
    let pos = register.require(slot)?;
    let phi = projector.vector(register.dims()[pos])?;
    let rest = remaining_register(register, pos)?;
    let n = rest.size();
    let mut m = DMatrix::from_element(n, n, ZERO);
    for i in 0..register.size() {
        let (ri, di) = split_index(register, &rest, pos, i);
        if phi[di] == ZERO {
            continue;
        }
        for j in 0..register.size() {
            let (rj, dj) = split_index(register, &rest, pos, j);
            m[(ri, rj)] += phi[di].conj() * rho.matrix()[(i, j)] * phi[dj];
        }
    }
    let probability = m.trace().re;
    if probability < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(projector.label()));
    }
    let post_state = DensityOperator::from_raw(rest, m.map(|v| v / probability));
    Ok(MeasurementOutcome {
        label: projector.label(),
        probability,
        post_state,
    })
}

/// Computational-basis readout probabilities over a set of slots.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    pub slots: Vec<SlotId>,
    pub entries: Vec<(Vec<BasisLevel>, f64)>,
}

impl OutcomeTable {
    pub fn probability(&self, levels: &[BasisLevel]) -> Option<f64> {
        self.entries
            .iter()
            .find(|(l, _)| l.as_slice() == levels)
            .map(|(_, p)| *p)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

pub fn outcome_label(levels: &[BasisLevel]) -> String {
    levels.iter().map(|l| l.symbol()).collect()
}

/// Probabilities are read off the reduced operator, in the order of `slots`.
pub fn joint_outcome_distribution<S: QuantumState>(
    state: &S,
    slots: &[SlotId],
) -> Result<OutcomeTable> {
    let reduced = state.to_density().partial_trace(slots)?;
    if reduced.register().len() != slots.len() {
        return Err(Error::RepeatedTarget);
    }
    // partial_trace keeps register order; reorder to the caller's order.
    let order: Vec<usize> = slots
        .iter()
        .map(|s| reduced.register().require(s))
        .collect::<Result<_>>()?;
    let reduced = reduced.permute_slots(&order)?;
    let entries = reduced
        .populations()
        .into_iter()
        .enumerate()
        .map(|(i, p)| (reduced.register().levels(i), p))
        .collect();
    Ok(OutcomeTable {
        slots: slots.to_vec(),
        entries,
    })
}
