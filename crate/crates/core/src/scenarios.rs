//! End-to-end experiments built from full simulation.
//!
//! The displaced two-CNOT circuit: an input qubit on site `1` is copied onto
//! an ancilla on site `2` by a CNOT, site `1` is displaced `tau` cycles into
//! the future, a second CNOT couples the two slots that now share the
//! measurement cycle, and everything except the ancilla at that cycle is
//! traced out.

use nalgebra::DVector;

use crate::analytics::{purity, spectrum_entropy, von_neumann_entropy, CurvePoint, S_IN, S_OUT, S_RHO_D};
use crate::dynamics::{
    apply_gate, displaced_expansion, displaced_expansion_pure, free_expansion_pure,
    joint_outcome_distribution, measure_at_cycle, project_pure, Correlation, Ensemble, Gate,
    MeasurementBasis, OutcomeTable,
};
use crate::error::{Error, Result};
use crate::registers::{
    BasisLevel, DensityOperator, PureState, QuantumState, Register, SlotId, C64, ZERO,
};

pub const INPUT_SITE: &str = "1";
pub const ANCILLA_SITE: &str = "2";
/// Cycle at which the input is entangled with the ancilla.
pub const PREPARATION_CYCLE: i64 = 0;

/// Intermediate and final states of one run of the displaced circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitReport {
    pub tau: i64,
    /// Two-site state after the first CNOT, at the preparation cycle.
    pub rho_s: DensityOperator,
    /// Two-site state at the measurement cycle after displacement.
    pub rho_d: DensityOperator,
    /// Ancilla at the measurement cycle.
    pub rho_out: DensityOperator,
    pub entropy_s: f64,
    pub entropy_d: f64,
    pub entropy_out: f64,
    /// Four-slot state after the second CNOT, for pure inputs.
    pub full_state: Option<PureState>,
    pub full_purity: f64,
}

fn check_tau(tau: i64) -> Result<()> {
    if tau < 1 {
        return Err(Error::InvalidParameter(format!(
            "displacement must be at least one cycle, got {tau}"
        )));
    }
    Ok(())
}

fn input_slot() -> SlotId {
    SlotId::new(INPUT_SITE, PREPARATION_CYCLE)
}

fn ancilla_slot(cycle: i64) -> SlotId {
    SlotId::new(ANCILLA_SITE, cycle)
}

/// Moves a single-slot input onto the circuit's input slot and entangles it
/// with a fresh ancilla.
fn entangle_with_ancilla(psi: &PureState) -> Result<PureState> {
    let register = psi.register();
    if register.len() != 1 {
        return Err(Error::InvalidParameter(format!(
            "circuit input must be a single slot, got {register}"
        )));
    }
    let input = psi.with_register(Register::single(input_slot(), register.dims()[0])?)?;
    let ancilla = PureState::basis(
        Register::single(ancilla_slot(PREPARATION_CYCLE), 2)?,
        &[BasisLevel::Zero],
    )?;
    apply_gate(
        &input.tensor(&ancilla)?,
        &Gate::cnot(),
        &[input_slot(), ancilla_slot(PREPARATION_CYCLE)],
    )
}

/// Runs the displaced circuit on a single-slot source.
///
/// `correlation` decides how a mixed source is copied into the two cycles;
/// it has no effect on pure sources.
pub fn run_fig1(input: &Ensemble, correlation: Correlation, tau: i64) -> Result<CircuitReport> {
    check_tau(tau)?;
    let prepared = input.map(entangle_with_ancilla)?;
    let rho_s = prepared.to_density();
    let t = PREPARATION_CYCLE + tau;
    let second_cnot = [SlotId::new(INPUT_SITE, t), ancilla_slot(t)];

    let (displaced, full_state) = if let [(_, psi)] = prepared.branches() {
        let displaced = displaced_expansion_pure(psi, tau, INPUT_SITE)?;
        let after = apply_gate(&displaced, &Gate::cnot(), &second_cnot)?;
        (displaced.to_density(), Some(after))
    } else {
        (displaced_expansion(&prepared, tau, INPUT_SITE, correlation)?, None)
    };
    let after = match &full_state {
        Some(psi) => psi.to_density(),
        None => apply_gate(&displaced, &Gate::cnot(), &second_cnot)?,
    };

    let rho_d = measure_at_cycle(&displaced, t)?;
    let rho_out = after.partial_trace(&[ancilla_slot(t)])?;
    Ok(CircuitReport {
        tau,
        entropy_s: von_neumann_entropy(&rho_s)?,
        entropy_d: von_neumann_entropy(&rho_d)?,
        entropy_out: von_neumann_entropy(&rho_out)?,
        full_purity: purity(&after),
        rho_s,
        rho_d,
        rho_out,
        full_state,
    })
}

pub fn run_fig1_pure(input: &PureState, tau: i64) -> Result<CircuitReport> {
    run_fig1(&Ensemble::pure(input.clone()), Correlation::UncorrelatedCopies, tau)
}

/// A qubit density routed as an improper mixture (independent copies).
pub fn run_fig1_density(input: &crate::channel::QubitDensity, tau: i64) -> Result<CircuitReport> {
    let rho = input.to_density(input_slot())?;
    run_fig1(
        &Ensemble::from_density(&rho)?,
        Correlation::UncorrelatedCopies,
        tau,
    )
}

/// Output of the displaced back end applied to an explicit two-cycle input.
///
/// `state` must hold `site` at `cycle` (the copy that ends up as control) and
/// at `cycle + tau` (the copy that feeds the target). Each cycle gets its own
/// ancilla and CNOT, `site` is displaced by `tau`, and the aligned slots at
/// `cycle + tau` are coupled by a second CNOT. Returns the ancilla there.
pub fn two_copy_backend(
    state: &DensityOperator,
    site: &str,
    ancilla: &str,
    cycle: i64,
    tau: i64,
) -> Result<DensityOperator> {
    check_tau(tau)?;
    let t = cycle + tau;
    let zero = |c: i64| -> Result<DensityOperator> {
        Ok(PureState::basis(Register::single(SlotId::new(ancilla, c), 2)?, &[BasisLevel::Zero])?
            .to_density())
    };
    let mut rho = state.tensor(&zero(cycle)?)?.tensor(&zero(t)?)?;
    for c in [cycle, t] {
        rho = apply_gate(
            &rho,
            &Gate::cnot(),
            &[SlotId::new(site, c), SlotId::new(ancilla, c)],
        )?;
    }
    rho = rho.relabel_cycles(site, tau)?;
    rho = apply_gate(
        &rho,
        &Gate::cnot(),
        &[SlotId::new(site, t), SlotId::new(ancilla, t)],
    )?;
    rho.partial_trace(&[SlotId::new(ancilla, t)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReverseReport {
    pub tau: i64,
    /// Reduced state of the slot that carries the recovered qubit.
    pub recovered: DensityOperator,
    /// Recovered qubit as a pure vector, phase-aligned with the input.
    pub recovered_state: PureState,
    pub fidelity: f64,
    /// Purity of the full state before and after each reversal step.
    pub purities: Vec<f64>,
}

/// Undoes the circuit from its four-slot pure state: displace the ancilla
/// site by `tau`, then CNOT (control site `1`) at each aligned cycle.
pub fn run_reverse(input: &PureState, tau: i64) -> Result<ReverseReport> {
    let report = run_fig1_pure(input, tau)?;
    let mut state = report.full_state.expect("pure input keeps the full state");
    let mut purities = vec![purity(&state.to_density())];

    let t = PREPARATION_CYCLE + tau;
    state = state.relabel_cycles(ANCILLA_SITE, tau)?;
    purities.push(purity(&state.to_density()));
    for c in [t, t + tau] {
        state = apply_gate(
            &state,
            &Gate::cnot(),
            &[SlotId::new(INPUT_SITE, c), ancilla_slot(c)],
        )?;
        purities.push(purity(&state.to_density()));
    }

    let carrier = SlotId::new(INPUT_SITE, t + tau);
    let recovered = state.to_density().partial_trace(std::slice::from_ref(&carrier))?;
    let target = input.with_register(recovered.register().clone())?;
    let fidelity = target
        .amplitudes()
        .dotc(&(recovered.matrix() * target.amplitudes()))
        .re;
    let recovered_state = dominant_vector(&recovered, &target)?;
    Ok(ReverseReport {
        tau,
        recovered,
        recovered_state,
        fidelity,
        purities,
    })
}

/// Leading eigenvector of `rho`, with global phase chosen so its overlap
/// with `reference` is real and non-negative.
fn dominant_vector(rho: &DensityOperator, reference: &PureState) -> Result<PureState> {
    let eigen = crate::registers::hermitize(rho.matrix().clone()).symmetric_eigen();
    let k = eigen
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty spectrum");
    let v: DVector<C64> = eigen.eigenvectors.column(k).into_owned();
    let overlap = v.dotc(reference.amplitudes());
    let v = if overlap.norm() > 0.0 {
        v * (overlap / overlap.norm())
    } else {
        v
    };
    PureState::normalized(rho.register().clone(), v)
}

pub const ALICE_SITE: &str = "a";
pub const BOB_SITE: &str = "b";
pub const BOB_ANCILLA_SITE: &str = "anc";

#[derive(Debug, Clone, PartialEq)]
pub struct BobOutcome {
    pub label: String,
    pub probability: f64,
    pub rho_out: DensityOperator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoSignalReport {
    pub basis: MeasurementBasis,
    pub tau: i64,
    pub outcomes: Vec<BobOutcome>,
    /// Outcome-weighted average of Bob's outputs.
    pub averaged: DensityOperator,
    /// Output when Bob's input is replaced by the product of his reduced
    /// operators at the two cycles.
    pub reduced_substitution: DensityOperator,
}

impl NoSignalReport {
    /// Largest trace distance between any two per-outcome outputs.
    pub fn max_pairwise_distance(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, a) in self.outcomes.iter().enumerate() {
            for b in &self.outcomes[i + 1..] {
                worst = worst.max(crate::analytics::trace_norm_distance(&a.rho_out, &b.rho_out)?);
            }
        }
        Ok(worst)
    }
}

/// Alice and Bob share a Bell pair at cycles `0` and `tau`. Alice measures
/// her cycle-`tau` slot in `basis`; Bob sends his qubit through the
/// displaced back end, his cycle-0 component acting as the control copy.
pub fn run_no_signaling(basis: MeasurementBasis, tau: i64) -> Result<NoSignalReport> {
    check_tau(tau)?;
    let (early, late) = (PREPARATION_CYCLE, PREPARATION_CYCLE + tau);
    let pair = PureState::bell_phi_plus(SlotId::new(ALICE_SITE, early), SlotId::new(BOB_SITE, early))?;
    let shared = free_expansion_pure(&pair, &[early, late])?;

    let mut outcomes = Vec::new();
    for projector in basis.projectors() {
        let m = project_pure(&shared, &SlotId::new(ALICE_SITE, late), &projector)?;
        let rho_out = two_copy_backend(
            &m.post_state.to_density(),
            BOB_SITE,
            BOB_ANCILLA_SITE,
            early,
            tau,
        )?;
        outcomes.push(BobOutcome {
            label: m.label,
            probability: m.probability,
            rho_out,
        });
    }
    let averaged = DensityOperator::mixture(
        &outcomes
            .iter()
            .map(|o| (o.probability, o.rho_out.clone()))
            .collect::<Vec<_>>(),
    )?;

    let reduced = pair.to_density().partial_trace(&[SlotId::new(BOB_SITE, early)])?;
    let bob_input = reduced.tensor(&reduced.shift_cycles(tau)?)?;
    let reduced_substitution = two_copy_backend(&bob_input, BOB_SITE, BOB_ANCILLA_SITE, early, tau)?;

    Ok(NoSignalReport {
        basis,
        tau,
        outcomes,
        averaged,
        reduced_substitution,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProprietyReport {
    /// Locally prepared mixture: branches copied coherently across cycles.
    pub proper: DensityOperator,
    /// Reduced-state reading: independent copies of the averaged operator.
    pub improper: DensityOperator,
    pub distance: f64,
}

/// Compares the circuit output for a classical ensemble with the output for
/// an improper mixture having the same density operator.
pub fn run_proper_vs_improper(ensemble: &[(f64, PureState)], tau: i64) -> Result<ProprietyReport> {
    let ensemble = Ensemble::new(ensemble.to_vec())?;
    let proper = run_fig1(&ensemble, Correlation::CoherentHistory, tau)?.rho_out;
    let averaged = Ensemble::from_density(&ensemble.to_density())?;
    let improper = run_fig1(&averaged, Correlation::UncorrelatedCopies, tau)?.rho_out;
    let distance = crate::analytics::trace_norm_distance(&proper, &improper)?;
    Ok(ProprietyReport {
        proper,
        improper,
        distance,
    })
}

/// Displaced Bell pair filtered to its measurement cycle, with the joint
/// computational-basis distribution there.
pub fn run_decoherence(tau: i64) -> Result<(DensityOperator, OutcomeTable)> {
    check_tau(tau)?;
    let pair = PureState::bell_phi_plus(input_slot(), ancilla_slot(PREPARATION_CYCLE))?;
    let displaced = displaced_expansion_pure(&pair, tau, INPUT_SITE)?;
    let t = PREPARATION_CYCLE + tau;
    let rho = measure_at_cycle(&displaced, t)?;
    let table = joint_outcome_distribution(&rho, &[SlotId::new(INPUT_SITE, t), ancilla_slot(t)])?;
    Ok((rho, table))
}

/// Entropy bookkeeping for a classical mixture of vacuum and a real
/// superposition on a dual-rail (dimension-3) input slot.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyStudy {
    pub p_vac: f64,
    pub tau: i64,
    pub points: Vec<CurvePoint>,
}

impl EntropyStudy {
    /// Whether `S_in <= S_rho_d + tol` at every grid point.
    pub fn entropy_never_decreases(&self, tol: f64) -> bool {
        self.points
            .iter()
            .all(|p| p.get(S_IN).unwrap() <= p.get(S_RHO_D).unwrap() + tol)
    }

    /// Grid points at which the final qubit has less entropy than `rho_d`.
    pub fn output_decrease_points(&self, tol: f64) -> Vec<f64> {
        self.points
            .iter()
            .filter(|p| p.get(S_OUT).unwrap() < p.get(S_RHO_D).unwrap() - tol)
            .map(|p| p.beta_sq)
            .collect()
    }
}

/// Input `p_vac |vac><vac| + (1 - p_vac) |psi><psi|` as a proper mixture.
pub fn vacuum_mixture(p_vac: f64, beta_sq: f64) -> Result<Ensemble> {
    if !(0.0..=1.0).contains(&p_vac) {
        return Err(Error::InvalidParameter(format!(
            "vacuum probability {p_vac} outside [0, 1]"
        )));
    }
    if !(0.0..=1.0).contains(&beta_sq) {
        return Err(Error::InvalidParameter(format!(
            "beta^2 = {beta_sq} outside [0, 1]"
        )));
    }
    let register = Register::single(input_slot(), 3)?;
    let vac = PureState::basis(register.clone(), &[BasisLevel::Vac])?;
    let psi = PureState::new(
        register,
        DVector::from_vec(vec![
            ZERO,
            C64::new((1.0 - beta_sq).sqrt(), 0.0),
            C64::new(beta_sq.sqrt(), 0.0),
        ]),
    )?;
    let branches: Vec<(f64, PureState)> = [(p_vac, vac), (1.0 - p_vac, psi)]
        .into_iter()
        .filter(|(p, _)| *p > 0.0)
        .collect();
    Ensemble::new(branches)
}

pub fn run_entropy_study(p_vac: f64, grid: &[f64], tau: i64) -> Result<EntropyStudy> {
    let points = grid
        .iter()
        .map(|&b2| {
            let input = vacuum_mixture(p_vac, b2)?;
            let s_in = spectrum_entropy(&input.to_density().eigenvalues())?;
            let report = run_fig1(&input, Correlation::CoherentHistory, tau)?;
            Ok(CurvePoint {
                beta_sq: b2,
                values: vec![
                    (S_IN, s_in),
                    (S_RHO_D, report.entropy_d),
                    (S_OUT, report.entropy_out),
                ],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyStudy { p_vac, tau, points })
}

/// Proper-time lag accumulated by a traveller moving at `speed_fraction` of
/// light speed for `coordinate_duration` seconds of lab time.
pub fn dilation_from_round_trip(coordinate_duration: f64, speed_fraction: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&speed_fraction) {
        return Err(Error::InvalidParameter(format!(
            "speed fraction {speed_fraction} outside [0, 1)"
        )));
    }
    if coordinate_duration < 0.0 || !coordinate_duration.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "duration {coordinate_duration} must be finite and non-negative"
        )));
    }
    Ok(coordinate_duration * (1.0 - (1.0 - speed_fraction * speed_fraction).sqrt()))
}
