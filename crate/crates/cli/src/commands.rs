use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use tdesim_core::analytics::{
    beta_grid, fig2_curves, von_neumann_entropy, CurvePoint, D_IN_CLOSED_FORM, D_IN_TRACENORM, D_OUT,
    S_IN, S_OUT, S_RHO_D,
};
use tdesim_core::circuit::{execute, fig1_program, parse_circuit, CircuitProgram, ExecConfig};
use tdesim_core::dynamics::{outcome_label, MeasurementBasis};
use tdesim_core::report::{
    CircuitJson, DecohereJson, InputJson, JointJson, NoSignalJson, PreparedJson, ProprietyJson,
    ReverseJson,
};
use tdesim_core::scenarios::{
    run_decoherence, run_entropy_study, run_no_signaling, run_proper_vs_improper, run_reverse,
    INPUT_SITE, PREPARATION_CYCLE,
};
use tdesim_core::{DensityOperator, PureState, SlotId, C64};

use crate::output::{json, Cell, Csv};
use crate::{Basis, Format, InputArgs};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        bail!("{name} must lie in [0, 1], got {x}");
    }
    Ok(())
}

fn input_beta_sq(input: &InputArgs, default: f64) -> Result<f64> {
    let b2 = input.beta_sq(default);
    check_unit("beta^2", b2)?;
    Ok(b2)
}

fn curve_output(points: &[CurvePoint], columns: &[&'static str], fmt: Format) -> Result<String> {
    match fmt {
        Format::Csv => {
            let mut header = vec!["beta2"];
            header.extend_from_slice(columns);
            let mut csv = Csv::new(&header);
            for p in points {
                let mut row = vec![Cell::from(p.beta_sq)];
                for c in columns {
                    row.push(Cell::from(p.get(c).expect("column present")));
                }
                csv.row(row);
            }
            Ok(csv.finish())
        }
        Format::Json => {
            let rows: Vec<serde_json::Map<String, serde_json::Value>> = points
                .iter()
                .map(|p| {
                    let mut row = serde_json::Map::new();
                    row.insert("beta2".into(), p.beta_sq.into());
                    for c in columns {
                        row.insert((*c).into(), p.get(c).expect("column present").into());
                    }
                    row
                })
                .collect();
            json(&rows)
        }
    }
}

pub fn fig2(steps: usize, fmt: Format) -> Result<String> {
    let points = fig2_curves(&beta_grid(steps)?)?;
    curve_output(&points, &[D_IN_CLOSED_FORM, D_IN_TRACENORM, D_OUT], fmt)
}

pub fn fig3(steps: usize, p_vac: f64, tau: i64, tolerance: f64, fmt: Format) -> Result<String> {
    check_unit("--pvac", p_vac)?;
    let study = run_entropy_study(p_vac, &beta_grid(steps)?, tau)?;
    let decreases = study.output_decrease_points(tolerance);
    eprintln!(
        "S_in <= S_rho_d at every point: {}; S_out < S_rho_d at {} of {} points",
        study.entropy_never_decreases(tolerance),
        decreases.len(),
        study.points.len()
    );
    curve_output(&study.points, &[S_IN, S_RHO_D, S_OUT], fmt)
}

fn load_program(path: &Path) -> Result<CircuitProgram> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_circuit(&text).with_context(|| format!("parsing {}", path.display()))
}

fn matrix_csv(rho: &DensityOperator) -> String {
    let mut csv = Csv::new(&["row", "col", "re", "im"]);
    let m = rho.matrix();
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            csv.row([
                Cell::from(r.to_string()),
                Cell::from(c.to_string()),
                Cell::from(m[(r, c)].re),
                Cell::from(m[(r, c)].im),
            ]);
        }
    }
    csv.finish()
}

pub fn circuit(path: &Path, input: &InputArgs, fmt: Format) -> Result<String> {
    let program = load_program(path)?;
    let config = if input.beta_sq.is_some() || input.alpha_sq.is_some() {
        ExecConfig::real_superposition(input_beta_sq(input, 0.0)?)?
    } else {
        ExecConfig::default()
    };
    let run = execute(&program, &config)?;
    match fmt {
        Format::Csv => Ok(matrix_csv(&run.rho_out)),
        Format::Json => {
            let prepared = InputJson {
                prepared: run.prepared.iter().map(PreparedJson::from).collect(),
            };
            json(&CircuitJson::from_states(
                prepared,
                run.rho_s,
                run.rho_d,
                run.rho_out,
            )?)
        }
    }
}

fn qubit_cells(rho: &DensityOperator) -> [Cell; 4] {
    let m = rho.matrix();
    [
        Cell::from(m[(0, 0)].re),
        Cell::from(m[(1, 1)].re),
        Cell::from(m[(0, 1)].re),
        Cell::from(m[(0, 1)].im),
    ]
}

const QUBIT_COLUMNS: [&str; 4] = ["rho00", "rho11", "rho01_re", "rho01_im"];

fn measurement_basis(basis: Basis) -> MeasurementBasis {
    match basis {
        Basis::Computational => MeasurementBasis::Computational,
        Basis::Diagonal => MeasurementBasis::Diagonal,
    }
}

pub fn nosignal(basis: Basis, tau: i64, tolerance: f64, fmt: Format) -> Result<String> {
    let report = run_no_signaling(measurement_basis(basis), tau)?;
    let spread = report.max_pairwise_distance()?;
    eprintln!(
        "max pairwise trace distance {spread:e} (within tolerance: {})",
        spread <= tolerance
    );
    match fmt {
        Format::Csv => {
            let mut header = vec!["outcome", "probability"];
            header.extend(QUBIT_COLUMNS);
            let mut csv = Csv::new(&header);
            let rows = report
                .outcomes
                .iter()
                .map(|o| (o.label.as_str(), o.probability, &o.rho_out))
                .chain([
                    ("averaged", 1.0, &report.averaged),
                    ("reduced_substitution", 1.0, &report.reduced_substitution),
                ]);
            for (label, p, rho) in rows {
                let mut row = vec![Cell::from(label), Cell::from(p)];
                row.extend(qubit_cells(rho));
                csv.row(row);
            }
            Ok(csv.finish())
        }
        Format::Json => json(&NoSignalJson::from_report(&report)?),
    }
}

pub fn decohere(tau: i64, fmt: Format) -> Result<String> {
    let (rho, table) = run_decoherence(tau)?;
    let joint: Vec<JointJson> = table
        .entries
        .iter()
        .map(|(levels, p)| JointJson {
            outcome: outcome_label(levels),
            probability: *p,
        })
        .collect();
    match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&["kind", "label", "re", "im"]);
            let m = rho.matrix();
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    csv.row([
                        Cell::from("rho"),
                        Cell::from(format!("{r}{c}")),
                        Cell::from(m[(r, c)].re),
                        Cell::from(m[(r, c)].im),
                    ]);
                }
            }
            for j in &joint {
                csv.row([
                    Cell::from("joint"),
                    Cell::from(j.outcome.clone()),
                    Cell::from(j.probability),
                    Cell::from(0.0),
                ]);
            }
            Ok(csv.finish())
        }
        Format::Json => json(&DecohereJson { tau, rho, joint }),
    }
}

fn input_slot() -> SlotId {
    SlotId::new(INPUT_SITE, PREPARATION_CYCLE)
}

pub fn reverse(input: &InputArgs, tau: i64, fmt: Format) -> Result<String> {
    let b2 = input_beta_sq(input, 0.25)?;
    let psi = PureState::real_superposition(input_slot(), b2)?;
    let report = run_reverse(&psi, tau)?;
    match fmt {
        Format::Csv => {
            let mut header = vec!["beta2", "fidelity"];
            header.extend(QUBIT_COLUMNS);
            let mut csv = Csv::new(&header);
            let mut row = vec![Cell::from(b2), Cell::from(report.fidelity)];
            row.extend(qubit_cells(&report.recovered));
            csv.row(row);
            Ok(csv.finish())
        }
        Format::Json => json(&ReverseJson::from_report(&psi, &report)),
    }
}

fn equal_ensemble(basis: Basis) -> Result<Vec<(f64, PureState)>> {
    let (one, h) = (C64::new(1.0, 0.0), C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let zero = C64::new(0.0, 0.0);
    let pairs = match basis {
        Basis::Computational => [(one, zero), (zero, one)],
        Basis::Diagonal => [(h, h), (h, -h)],
    };
    pairs
        .into_iter()
        .map(|(a, b)| Ok((0.5, PureState::qubit(input_slot(), a, b)?)))
        .collect()
}

pub fn propriety(basis: Basis, tau: i64, fmt: Format) -> Result<String> {
    let ensemble = equal_ensemble(basis)?;
    let report = run_proper_vs_improper(&ensemble, tau)?;
    match fmt {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "basis",
                "distance",
                "proper_p0",
                "proper_p1",
                "improper_p0",
                "improper_p1",
            ]);
            let (p, q) = (report.proper.populations(), report.improper.populations());
            csv.row([
                Cell::from(measurement_basis(basis).name()),
                Cell::from(report.distance),
                Cell::from(p[0]),
                Cell::from(p[1]),
                Cell::from(q[0]),
                Cell::from(q[1]),
            ]);
            Ok(csv.finish())
        }
        Format::Json => json(&ProprietyJson::from_report(&ensemble, &report)),
    }
}

#[derive(Serialize)]
struct SweepRow {
    beta2: f64,
    populations: Vec<f64>,
    #[serde(rename = "S_out")]
    s_out: f64,
}

pub fn sweep(program: Option<&Path>, steps: usize, tau: i64, fmt: Format) -> Result<String> {
    let program = match program {
        Some(path) => load_program(path)?,
        None => {
            if tau < 1 {
                bail!("--tau must be at least 1, got {tau}");
            }
            fig1_program(tau)
        }
    };
    let rows = beta_grid(steps)?
        .into_iter()
        .map(|b2| {
            let run = execute(&program, &ExecConfig::real_superposition(b2)?)?;
            Ok(SweepRow {
                beta2: b2,
                populations: run.rho_out.populations(),
                s_out: von_neumann_entropy(&run.rho_out)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    match fmt {
        Format::Csv => {
            let labels: Vec<String> = match rows.first().map(|r| r.populations.len()) {
                Some(3) => vec!["p_vac".into(), "p0".into(), "p1".into()],
                _ => vec!["p0".into(), "p1".into()],
            };
            let mut header = vec!["beta2"];
            header.extend(labels.iter().map(String::as_str));
            header.push("S_out");
            let mut csv = Csv::new(&header);
            for r in &rows {
                let mut row = vec![Cell::from(r.beta2)];
                row.extend(r.populations.iter().map(|&p| Cell::from(p)));
                row.push(Cell::from(r.s_out));
                csv.row(row);
            }
            Ok(csv.finish())
        }
        Format::Json => json(&rows),
    }
}
