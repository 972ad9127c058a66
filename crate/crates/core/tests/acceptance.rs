//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p tdesim-core --test acceptance`.

use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use tdesim_core::analytics::{
    beta_grid, fig2_curves, purity, subadditivity_margin, D_IN_CLOSED_FORM, D_IN_TRACENORM, D_OUT,
};
use tdesim_core::channel::{nonlinear_map, nonlinearity_witness, QubitDensity};
use tdesim_core::circuit::{execute, fig1_program, parse_circuit, ExecConfig};
use tdesim_core::dynamics::{Correlation, MeasurementBasis};
use tdesim_core::scenarios::{
    run_decoherence, run_entropy_study, run_fig1, run_fig1_density, run_fig1_pure,
    run_no_signaling, run_proper_vs_improper, run_reverse, vacuum_mixture, INPUT_SITE,
    PREPARATION_CYCLE,
};
use tdesim_core::{BasisLevel, DensityOperator, PureState, QuantumState, Register, SlotId, C64};

const TOL: f64 = 1e-12;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn input_slot() -> SlotId {
    SlotId::new(INPUT_SITE, PREPARATION_CYCLE)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn random_bloch_density(rng: &mut ChaCha8Rng) -> QubitDensity {
    let (x, y, z): (f64, f64, f64) = (
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    );
    let norm = (x * x + y * y + z * z).sqrt();
    let r = rng.random::<f64>().cbrt() / norm;
    let (x, y, z) = (x * r, y * r, z * r);
    QubitDensity::new((1.0 + z) / 2.0, (1.0 - z) / 2.0, C64::new(x / 2.0, -y / 2.0))
        .expect("point inside the Bloch ball")
}

/// `G G^dag / Tr` for a complex Gaussian `G` of random rank.
fn random_two_qubit_density(rng: &mut ChaCha8Rng) -> DensityOperator {
    let rank = rng.random_range(1..=4);
    let g = DMatrix::from_fn(4, rank, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let register = Register::qubits(vec![SlotId::new("1", 0), SlotId::new("2", 0)]).unwrap();
    DensityOperator::new(register, m.unscale(tr)).expect("valid random state")
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for b2 in beta_grid(101).map_err(e)? {
        let psi = PureState::real_superposition(input_slot(), b2).map_err(e)?;
        let out = run_fig1_pure(&psi, 1).map_err(e)?.rho_out;
        let a2 = 1.0 - b2;
        let oracle = nonlinear_map(&QubitDensity::diagonal(a2).map_err(e)?);
        worst = worst.max(max_abs(&(out.matrix() - oracle.matrix())));
        worst = worst.max((out.populations()[0] - (a2 * a2 + b2 * b2)).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..100 {
        let rho = random_bloch_density(&mut rng);
        let out = run_fig1_density(&rho, 1).map_err(e)?.rho_out;
        worst = worst.max(max_abs(&(out.matrix() - nonlinear_map(&rho).matrix())));
    }
    ensure(
        worst <= TOL,
        format!("101 pure + 100 random mixed inputs, max deviation {worst:.2e}"),
    )
}

fn criterion_2() -> Outcome {
    let points = fig2_curves(&beta_grid(101).map_err(e)?).map_err(e)?;
    let mut worst: f64 = 0.0;
    let mut misclassified = Vec::new();
    for p in &points {
        let b2 = p.beta_sq;
        let d_out = p.get(D_OUT).ok_or("missing D_out")?;
        let d_in = p.get(D_IN_CLOSED_FORM).ok_or("missing D_in_paper")?;
        p.get(D_IN_TRACENORM).ok_or("missing strict trace-norm column")?;
        worst = worst.max((d_out - 4.0 * (b2 - b2 * b2)).abs());
        let gap = d_out - d_in;
        let expected = if b2 == 0.0 || b2 == 0.5 {
            gap.abs() <= TOL
        } else if b2 < 0.5 {
            gap > TOL
        } else {
            gap < -TOL
        };
        if !expected {
            misclassified.push(b2);
        }
    }
    ensure(
        worst <= TOL && misclassified.is_empty(),
        format!(
            "D_out vs 4(b2-b2^2) max deviation {worst:.2e}; amplification sign wrong at {misclassified:?}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for tau in [1, 2, 5] {
        let (rho, table) = run_decoherence(tau).map_err(e)?;
        let quarter = DMatrix::<C64>::identity(4, 4).scale(0.25);
        worst = worst.max(max_abs(&(rho.matrix() - quarter)));
        if table.entries.len() != 4 {
            return Err(format!("expected 4 joint outcomes, got {}", table.entries.len()));
        }
        for (_, p) in &table.entries {
            worst = worst.max((p - 0.25).abs());
        }
    }
    ensure(
        worst <= TOL,
        format!("tau in {{1,2,5}}: max deviation from I/4 and 0.25 is {worst:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let half = DMatrix::<C64>::identity(2, 2).scale(0.5);
    let mut worst_out: f64 = 0.0;
    let mut worst_pair: f64 = 0.0;
    let mut worst_sub: f64 = 0.0;
    for basis in [MeasurementBasis::Computational, MeasurementBasis::Diagonal] {
        for tau in [1, 3] {
            let report = run_no_signaling(basis, tau).map_err(e)?;
            for o in &report.outcomes {
                worst_out = worst_out.max(max_abs(&(o.rho_out.matrix() - &half)));
                worst_sub = worst_sub.max(
                    max_abs(&(o.rho_out.matrix() - report.reduced_substitution.matrix())),
                );
            }
            worst_pair = worst_pair.max(report.max_pairwise_distance().map_err(e)?);
            worst_sub = worst_sub.max(max_abs(
                &(report.averaged.matrix() - report.reduced_substitution.matrix()),
            ));
        }
    }
    ensure(
        worst_out <= TOL && worst_pair <= TOL && worst_sub <= TOL,
        format!(
            "both bases: |out - I/2| {worst_out:.2e}, pairwise trace distance {worst_pair:.2e}, reduced substitution {worst_sub:.2e}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut worst_purity: f64 = 0.0;
    let mut worst_margin = f64::INFINITY;
    for b2 in beta_grid(101).map_err(e)? {
        let psi = PureState::real_superposition(input_slot(), b2).map_err(e)?;
        let report = run_fig1_pure(&psi, 1).map_err(e)?;
        let full = report.full_state.ok_or("pure run lost its state vector")?;
        worst_purity = worst_purity.max((purity(&full.to_density()) - 1.0).abs());
        worst_margin = worst_margin.min(subadditivity_margin(&report.rho_s).map_err(e)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..1000 {
        let rho = random_two_qubit_density(&mut rng);
        worst_margin = worst_margin.min(subadditivity_margin(&rho).map_err(e)?);
    }

    let grid = beta_grid(101).map_err(e)?;
    let mut ledger = Vec::new();
    let mut any_decrease = false;
    let mut ordered = true;
    for p_vac in [0.25, 0.5, 0.75] {
        let study = run_entropy_study(p_vac, &grid, 1).map_err(e)?;
        ordered &= study.entropy_never_decreases(TOL);
        for p in &study.points {
            let input = vacuum_mixture(p_vac, p.beta_sq).map_err(e)?;
            let report = run_fig1(&input, Correlation::CoherentHistory, 1).map_err(e)?;
            worst_margin = worst_margin.min(subadditivity_margin(&report.rho_s).map_err(e)?);
        }
        let decreases = study.output_decrease_points(TOL).len();
        any_decrease |= decreases > 0;
        ledger.push(format!("p_vac={p_vac}: {decreases} points with S_out < S_rho_d"));
    }
    ensure(
        worst_purity <= TOL && worst_margin >= -1e-9 && ordered && any_decrease,
        format!(
            "purity deviation {worst_purity:.2e}; min subadditivity margin {worst_margin:.3e}; S_in <= S_rho_d everywhere: {ordered}; {}",
            ledger.join(", ")
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for tau in [1, 2] {
        for b2 in beta_grid(101).map_err(e)? {
            let psi = PureState::real_superposition(input_slot(), b2).map_err(e)?;
            worst = worst.max((run_reverse(&psi, tau).map_err(e)?.fidelity - 1.0).abs());
        }
    }
    ensure(
        worst <= TOL,
        format!("101 inputs, tau in {{1,2}}: max |fidelity - 1| {worst:.2e}"),
    )
}

fn criterion_7() -> Outcome {
    let slot = input_slot();
    let reg = Register::single(slot.clone(), 2).map_err(e)?;
    let zero = PureState::basis(reg.clone(), &[BasisLevel::Zero]).map_err(e)?;
    let one = PureState::basis(reg, &[BasisLevel::One]).map_err(e)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::qubit(slot.clone(), C64::new(h, 0.0), C64::new(h, 0.0)).map_err(e)?;
    let minus = PureState::qubit(slot, C64::new(h, 0.0), C64::new(-h, 0.0)).map_err(e)?;
    let d_comp = run_proper_vs_improper(&[(0.5, zero), (0.5, one)], 1).map_err(e)?.distance;
    let d_diag = run_proper_vs_improper(&[(0.5, plus), (0.5, minus)], 1).map_err(e)?.distance;
    ensure(
        (d_comp - 1.0).abs() <= TOL && d_diag.abs() <= TOL,
        format!("{{|0>,|1>}} distance {d_comp:.15}; {{|+>,|->}} distance {d_diag:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let zero = QubitDensity::diagonal(1.0).map_err(e)?;
    let one = QubitDensity::diagonal(0.0).map_err(e)?;
    let w = nonlinearity_witness(&zero, &one, 0.5).map_err(e)?;
    ensure((w - 1.0).abs() <= TOL, format!("witness(|0><0|, |1><1|, 1/2) = {w:.15}"))
}

fn corpus(kind: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(kind);
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .expect("corpus directory")
        .map(|entry| entry.unwrap().path())
        .collect();
    files.sort();
    files
}

/// Deletes, duplicates or swaps characters of a valid program.
fn mutate(text: &str, rng: &mut ChaCha8Rng) -> String {
    let mut chars: Vec<char> = text.chars().collect();
    for _ in 0..rng.random_range(1..=4) {
        if chars.is_empty() {
            break;
        }
        let i = rng.random_range(0..chars.len());
        match rng.random_range(0..4) {
            0 => {
                chars.remove(i);
            }
            1 => chars.insert(i, chars[i]),
            2 => {
                let j = rng.random_range(0..chars.len());
                chars.swap(i, j);
            }
            _ => chars[i] = ['@', '+', '|', '>', '(', 'j', '-', '9', ' ', '\n', '#', 'é'][rng.random_range(0..12)],
        }
    }
    chars.into_iter().collect()
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for tau in [1, 2] {
        let program = fig1_program(tau);
        for b2 in beta_grid(101).map_err(e)? {
            let psi = PureState::real_superposition(input_slot(), b2).map_err(e)?;
            let expected = run_fig1_pure(&psi, tau).map_err(e)?.rho_out;
            let got = execute(&program, &ExecConfig::real_superposition(b2).map_err(e)?)
                .map_err(e)?
                .rho_out;
            worst = worst.max(max_abs(&(got.matrix() - expected.matrix())));
        }
    }
    let fig1_file = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/valid/fig1.circ");
    let from_file = parse_circuit(&fs::read_to_string(fig1_file).map_err(e)?).map_err(e)?;
    if from_file != fig1_program(1) {
        return Err("fig1.circ differs from the built-in program".into());
    }

    let valid = corpus("valid");
    let mut round_trips = 0;
    for path in &valid {
        let text = fs::read_to_string(path).map_err(e)?;
        let program = parse_circuit(&text).map_err(|err| format!("{}: {err}", path.display()))?;
        let printed = program.to_string();
        let reparsed = parse_circuit(&printed).map_err(|err| format!("{}: {err}", path.display()))?;
        if reparsed != program || reparsed.to_string() != printed {
            return Err(format!("{}: print/parse round trip differs", path.display()));
        }
        execute(&program, &ExecConfig::real_superposition(0.3).map_err(e)?)
            .map_err(|err| format!("{}: {err}", path.display()))?;
        round_trips += 1;
    }

    let mut diagnosed = 0;
    for path in corpus("malformed") {
        let text = String::from_utf8_lossy(&fs::read(&path).map_err(e)?).into_owned();
        match panic::catch_unwind(|| parse_circuit(&text)) {
            Ok(Err(err)) if !err.message.is_empty() => diagnosed += 1,
            Ok(Err(_)) => return Err(format!("{}: empty diagnostic", path.display())),
            Ok(Ok(_)) => return Err(format!("{}: accepted malformed program", path.display())),
            Err(_) => return Err(format!("{}: parser panicked", path.display())),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let sources: Vec<String> = valid.iter().map(|p| fs::read_to_string(p).unwrap()).collect();
    let config = ExecConfig::real_superposition(0.3).map_err(e)?;
    let mut fuzzed = 0;
    for k in 0..3000 {
        let text = mutate(&sources[k % sources.len()], &mut rng);
        let survived = panic::catch_unwind(|| match parse_circuit(&text) {
            Ok(program) => execute(&program, &config).map(|_| ()).map_err(|err| err.to_string()),
            Err(err) => Err(err.to_string()),
        });
        if survived.is_err() {
            return Err(format!("panic on mutated input {text:?}"));
        }
        fuzzed += 1;
    }

    ensure(
        worst <= TOL && round_trips >= 10,
        format!(
            "circuit vs scenario max deviation {worst:.2e}; {round_trips} round trips; {diagnosed} malformed diagnosed; {fuzzed} mutated inputs without panic"
        ),
    )
}

fn main() -> ExitCode {
    panic::set_hook(Box::new(|_| {}));
    let criteria: [(&str, Check); 9] = [
        ("closed-form oracle equivalence", criterion_1),
        ("distinguishability curves", criterion_2),
        ("decoherence of a displaced pair", criterion_3),
        ("no-signaling", criterion_4),
        ("entropy ledger", criterion_5),
        ("reversal", criterion_6),
        ("proper vs improper mixtures", criterion_7),
        ("nonlinearity witness", criterion_8),
        ("parser and interpreter", criterion_9),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {} ({name}): {detail}", k + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
