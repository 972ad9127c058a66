//! Line-oriented circuit language.
//!
//! ```text
//! program   = { line }
//! line      = [ directive ] [ "#" comment ]
//! directive = "prepare" site "@"cycle [ state ]
//!           | "cnot" control target "@"cycle
//!           | "gate" name site { site } "@"cycle
//!           | "dilate" site "+"n
//!           | "discard" site
//!           | "output" site "@"cycle
//! state     = "|0>" | "|1>" | "|vac>" | [coef] "|0>" ("+"|"-") [coef] "|1>"
//! coef      = real | "(" re ("+"|"-") im "j" ")" | re ("+"|"-") im "j"
//! name      = "x" | "z" | "h" | "phase(" real ")"
//! ```
//!
//! A `prepare` without a state takes the run's input qubit. Superposition
//! coefficients are normalized when the program runs.
//!
//! `dilate` displaces every slot of a site by `n` cycles. When the register
//! spans a single cycle at that point, the time-evolved copy of the register
//! is materialized first (the two-copy expansion); afterwards a dilation is a
//! plain relabeling. Gates only name one cycle, so a gate can never couple
//! slots at different cycles; referring to a site at a cycle where it has no
//! slot is rejected when the program is parsed.
//!
//! Example, the displaced two-CNOT circuit:
//!
//! ```text
//! prepare q1 @0
//! prepare q2 @0 |0>
//! cnot q1 q2 @0
//! dilate q1 +1
//! cnot q1 q2 @1
//! output q2 @1
//! ```

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DVector;

use crate::dynamics::{apply_gate, measure_at_cycle, Gate};
use crate::error::Error;
use crate::registers::{BasisLevel, DensityOperator, PureState, QuantumState, Register, SlotId, C64};

/// Largest state-vector length a program may build.
pub const MAX_REGISTER_SIZE: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Zero,
    One,
    Vac,
    Superposition(C64, C64),
    /// Supplied by the run configuration.
    Input,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateName {
    X,
    Z,
    H,
    Phase(f64),
}

impl GateName {
    fn gate(self) -> Gate {
        match self {
            GateName::X => Gate::x(),
            GateName::Z => Gate::z(),
            GateName::H => Gate::h(),
            GateName::Phase(theta) => Gate::phase(theta),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Prepare {
        site: String,
        cycle: i64,
        state: StateSpec,
    },
    Cnot {
        control: String,
        target: String,
        cycle: i64,
    },
    Gate {
        name: GateName,
        sites: Vec<String>,
        cycle: i64,
    },
    Dilate {
        site: String,
        cycles: i64,
    },
    Discard {
        site: String,
    },
    Output {
        site: String,
        cycle: i64,
    },
}

/// A validated program. Equality ignores source line numbers.
#[derive(Debug, Clone)]
pub struct CircuitProgram {
    directives: Vec<Directive>,
    lines: Vec<usize>,
}

impl PartialEq for CircuitProgram {
    fn eq(&self, other: &Self) -> bool {
        self.directives == other.directives
    }
}

impl CircuitProgram {
    /// Validates directives built in code; line numbers are their indices.
    pub fn new(directives: Vec<Directive>) -> Result<Self, ParseError> {
        let lines = (1..=directives.len()).collect();
        let program = CircuitProgram { directives, lines };
        program.validate()?;
        Ok(program)
    }

    pub fn directives(&self) -> &[Directive] {
        &self.directives
    }

    pub fn output(&self) -> SlotId {
        match self.directives.last() {
            Some(Directive::Output { site, cycle }) => SlotId::new(site.clone(), *cycle),
            _ => unreachable!("validated program ends with output"),
        }
    }

    fn validate(&self) -> Result<(), ParseError> {
        let mut tracker = SlotTracker::default();
        let mut seen_output = false;
        for (directive, &line) in self.directives.iter().zip(&self.lines) {
            if seen_output {
                return Err(ParseError::at(line, "directive after output"));
            }
            tracker
                .step(directive)
                .map_err(|msg| ParseError::at(line, msg))?;
            if matches!(directive, Directive::Output { .. }) {
                seen_output = true;
            }
        }
        if !seen_output {
            return Err(ParseError::whole("missing output directive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: Option<usize>,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line: Some(line),
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> Self {
        ParseError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ParseError {}

/// Live slot set, tracked without building any state.
#[derive(Debug, Default)]
struct SlotTracker {
    slots: BTreeSet<SlotId>,
    size: usize,
}

impl SlotTracker {
    fn require_site(&self, site: &str) -> Result<(), String> {
        if self.slots.iter().any(|s| s.site == site) {
            Ok(())
        } else {
            Err(format!("undeclared site {site}"))
        }
    }

    fn require_slot(&self, site: &str, cycle: i64) -> Result<(), String> {
        self.require_site(site)?;
        if self.slots.contains(&SlotId::new(site, cycle)) {
            return Ok(());
        }
        let live: Vec<String> = self
            .slots
            .iter()
            .filter(|s| s.site == site)
            .map(|s| s.cycle.to_string())
            .collect();
        Err(format!(
            "cycle misalignment: site {site} has no slot at cycle {cycle} (live cycles: {})",
            live.join(", ")
        ))
    }

    fn grow(&mut self, factor: usize) -> Result<(), String> {
        self.size = self.size.max(1).saturating_mul(factor);
        if self.size > MAX_REGISTER_SIZE {
            return Err(format!(
                "register would exceed {MAX_REGISTER_SIZE} basis states"
            ));
        }
        Ok(())
    }

    fn step(&mut self, directive: &Directive) -> Result<(), String> {
        match directive {
            Directive::Prepare { site, cycle, state } => {
                check_site_name(site)?;
                let slot = SlotId::new(site.clone(), *cycle);
                if self.slots.contains(&slot) {
                    return Err(format!("slot {slot} is already prepared"));
                }
                self.grow(if *state == StateSpec::Vac { 3 } else { 2 })?;
                self.slots.insert(slot);
            }
            Directive::Cnot {
                control,
                target,
                cycle,
            } => {
                if control == target {
                    return Err("cnot control and target must differ".into());
                }
                self.require_slot(control, *cycle)?;
                self.require_slot(target, *cycle)?;
            }
            Directive::Gate { name, sites, cycle } => {
                if sites.len() != 1 {
                    return Err(format!("gate {} takes one site", print_gate(*name)));
                }
                self.require_slot(&sites[0], *cycle)?;
            }
            Directive::Dilate { site, cycles } => {
                self.require_site(site)?;
                if *cycles < 1 {
                    return Err("dilation must be at least +1".into());
                }
                let distinct: BTreeSet<i64> = self.slots.iter().map(|s| s.cycle).collect();
                if distinct.len() == 1 {
                    let copy: Vec<SlotId> = self
                        .slots
                        .iter()
                        .map(|s| shift(s, *cycles))
                        .collect::<Result<_, _>>()?;
                    let size = self.size;
                    self.grow(size)?;
                    self.slots.extend(copy);
                }
                self.slots = self
                    .slots
                    .iter()
                    .map(|s| if s.site == *site { shift(s, *cycles) } else { Ok(s.clone()) })
                    .collect::<Result<_, _>>()?;
            }
            Directive::Discard { site } => {
                self.require_site(site)?;
                self.slots.retain(|s| s.site != *site);
            }
            Directive::Output { site, cycle } => self.require_slot(site, *cycle)?,
        }
        Ok(())
    }
}

fn shift(slot: &SlotId, delta: i64) -> Result<SlotId, String> {
    slot.cycle
        .checked_add(delta)
        .map(|c| SlotId::new(slot.site.clone(), c))
        .ok_or_else(|| format!("cycle overflow on site {}", slot.site))
}

fn check_site_name(site: &str) -> Result<(), String> {
    let ok = !site.is_empty()
        && site
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !is_keyword(site);
    if ok {
        Ok(())
    } else {
        Err(format!("invalid site name {site:?}"))
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(
        word,
        "prepare" | "cnot" | "gate" | "dilate" | "discard" | "output"
    )
}

pub fn parse_circuit(text: &str) -> Result<CircuitProgram, ParseError> {
    let mut directives = Vec::new();
    let mut lines = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let directive = parse_line(body).map_err(|msg| ParseError::at(line, msg))?;
        directives.push(directive);
        lines.push(line);
    }
    let program = CircuitProgram { directives, lines };
    program.validate()?;
    Ok(program)
}

fn parse_line(body: &str) -> Result<Directive, String> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let (keyword, args) = tokens.split_first().expect("non-empty line");
    match *keyword {
        "prepare" => {
            let [site, cycle, state @ ..] = args else {
                return Err("usage: prepare <site> @<cycle> [<state>]".into());
            };
            let state = if state.is_empty() {
                StateSpec::Input
            } else {
                parse_state(&state.concat())?
            };
            Ok(Directive::Prepare {
                site: site_name(site)?,
                cycle: parse_cycle(cycle)?,
                state,
            })
        }
        "cnot" => {
            let [control, target, cycle] = args else {
                return Err("usage: cnot <control> <target> @<cycle>".into());
            };
            Ok(Directive::Cnot {
                control: site_name(control)?,
                target: site_name(target)?,
                cycle: parse_cycle(cycle)?,
            })
        }
        "gate" => {
            let [name, rest @ ..] = args else {
                return Err("usage: gate <name> <site>... @<cycle>".into());
            };
            let [sites @ .., cycle] = rest else {
                return Err("usage: gate <name> <site>... @<cycle>".into());
            };
            if sites.is_empty() {
                return Err("gate needs at least one site".into());
            }
            Ok(Directive::Gate {
                name: parse_gate(name)?,
                sites: sites.iter().map(|s| site_name(s)).collect::<Result<_, _>>()?,
                cycle: parse_cycle(cycle)?,
            })
        }
        "dilate" => {
            let [site, amount] = args else {
                return Err("usage: dilate <site> +<n>".into());
            };
            let n = amount
                .strip_prefix('+')
                .and_then(|n| n.parse::<i64>().ok())
                .filter(|n| *n >= 1)
                .ok_or_else(|| format!("expected +<n> with n >= 1, found {amount:?}"))?;
            Ok(Directive::Dilate {
                site: site_name(site)?,
                cycles: n,
            })
        }
        "discard" => {
            let [site] = args else {
                return Err("usage: discard <site>".into());
            };
            Ok(Directive::Discard {
                site: site_name(site)?,
            })
        }
        "output" => {
            let [site, cycle] = args else {
                return Err("usage: output <site> @<cycle>".into());
            };
            Ok(Directive::Output {
                site: site_name(site)?,
                cycle: parse_cycle(cycle)?,
            })
        }
        other => Err(format!("unknown directive {other:?}")),
    }
}

fn site_name(token: &str) -> Result<String, String> {
    check_site_name(token)?;
    Ok(token.to_string())
}

fn parse_cycle(token: &str) -> Result<i64, String> {
    token
        .strip_prefix('@')
        .and_then(|c| c.parse::<i64>().ok())
        .ok_or_else(|| format!("expected @<cycle>, found {token:?}"))
}

fn parse_gate(token: &str) -> Result<GateName, String> {
    match token.to_ascii_lowercase().as_str() {
        "x" => Ok(GateName::X),
        "z" => Ok(GateName::Z),
        "h" => Ok(GateName::H),
        "cnot" => Err("use the cnot directive for controlled-NOT".into()),
        lower => {
            let theta = lower
                .strip_prefix("phase(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| format!("unknown gate {token:?}"))?;
            let theta = parse_real(theta)?;
            Ok(GateName::Phase(theta))
        }
    }
}

fn parse_real(text: &str) -> Result<f64, String> {
    let value: f64 = text
        .parse()
        .map_err(|_| format!("invalid number {text:?}"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("number must be finite: {text:?}"))
    }
}

/// `re`, `imj`, `re+imj` or `re-imj`, optionally in parentheses.
fn parse_complex(text: &str) -> Result<C64, String> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(text);
    if inner.is_empty() {
        return Ok(C64::new(1.0, 0.0));
    }
    let Some(body) = inner.strip_suffix('j') else {
        return Ok(C64::new(parse_real(inner)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(C64::new(parse_real(&body[..k])?, parse_imag(&body[k..])?)),
        None => Ok(C64::new(0.0, parse_imag(body)?)),
    }
}

fn parse_imag(text: &str) -> Result<f64, String> {
    match text {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        t => parse_real(t.strip_prefix('+').unwrap_or(t)),
    }
}

fn parse_state(text: &str) -> Result<StateSpec, String> {
    match text {
        "|0>" => return Ok(StateSpec::Zero),
        "|1>" => return Ok(StateSpec::One),
        "|vac>" => return Ok(StateSpec::Vac),
        _ => {}
    }
    let bad = || format!("invalid state {text:?}");
    let (a, rest) = text.split_once("|0>").ok_or_else(bad)?;
    let b = rest.strip_suffix("|1>").ok_or_else(bad)?;
    let (negate, b) = if let Some(b) = b.strip_prefix('+') {
        (false, b)
    } else if let Some(b) = b.strip_prefix('-') {
        (true, b)
    } else {
        return Err(bad());
    };
    let a = parse_complex(a)?;
    let b = parse_complex(b)?;
    let b = if negate { -b } else { b };
    // drop negative zeros so printing is canonical
    let (a, b) = (a + C64::new(0.0, 0.0), b + C64::new(0.0, 0.0));
    if a.norm_sqr() + b.norm_sqr() == 0.0 {
        return Err(format!("state {text:?} has zero norm"));
    }
    Ok(StateSpec::Superposition(a, b))
}

fn print_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("({}{}{}j)", z.re, sign, z.im.abs())
    }
}

fn print_state(state: &StateSpec) -> Option<String> {
    Some(match state {
        StateSpec::Zero => "|0>".into(),
        StateSpec::One => "|1>".into(),
        StateSpec::Vac => "|vac>".into(),
        StateSpec::Input => return None,
        StateSpec::Superposition(a, b) => {
            let (sign, b) = if b.im == 0.0 && b.re < 0.0 {
                ('-', C64::new(-b.re, 0.0))
            } else {
                ('+', *b)
            };
            format!("{}|0>{}{}|1>", print_complex(*a), sign, print_complex(b))
        }
    })
}

fn print_gate(name: GateName) -> String {
    match name {
        GateName::X => "x".into(),
        GateName::Z => "z".into(),
        GateName::H => "h".into(),
        GateName::Phase(theta) => format!("phase({theta})"),
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Prepare { site, cycle, state } => {
                write!(f, "prepare {site} @{cycle}")?;
                if let Some(s) = print_state(state) {
                    write!(f, " {s}")?;
                }
                Ok(())
            }
            Directive::Cnot {
                control,
                target,
                cycle,
            } => write!(f, "cnot {control} {target} @{cycle}"),
            Directive::Gate { name, sites, cycle } => {
                write!(f, "gate {} {} @{cycle}", print_gate(*name), sites.join(" "))
            }
            Directive::Dilate { site, cycles } => write!(f, "dilate {site} +{cycles}"),
            Directive::Discard { site } => write!(f, "discard {site}"),
            Directive::Output { site, cycle } => write!(f, "output {site} @{cycle}"),
        }
    }
}

impl fmt::Display for CircuitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Run-time parameters of [`execute`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExecConfig {
    /// Amplitudes `(alpha, beta)` for `prepare` lines without a state.
    pub input: Option<(C64, C64)>,
}

impl ExecConfig {
    pub fn real_superposition(beta_sq: f64) -> Result<Self, Error> {
        if !(0.0..=1.0).contains(&beta_sq) {
            return Err(Error::InvalidParameter(format!(
                "beta^2 = {beta_sq} outside [0, 1]"
            )));
        }
        Ok(ExecConfig {
            input: Some((
                C64::new((1.0 - beta_sq).sqrt(), 0.0),
                C64::new(beta_sq.sqrt(), 0.0),
            )),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecError {
    pub line: usize,
    pub directive: String,
    pub source: Error,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} (`{}`): {}", self.line, self.directive, self.source)
    }
}

impl std::error::Error for ExecError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub prepared: Vec<PureState>,
    /// Register just before the first expanding dilation.
    pub rho_s: Option<DensityOperator>,
    /// Cycle-filtered state right after the first expanding dilation.
    pub rho_d: Option<DensityOperator>,
    pub rho_out: DensityOperator,
}

fn prepared_state(slot: SlotId, spec: StateSpec, config: &ExecConfig) -> Result<PureState, Error> {
    let (dim, amps) = match spec {
        StateSpec::Zero => return PureState::basis(Register::single(slot, 2)?, &[BasisLevel::Zero]),
        StateSpec::One => return PureState::basis(Register::single(slot, 2)?, &[BasisLevel::One]),
        StateSpec::Vac => return PureState::basis(Register::single(slot, 3)?, &[BasisLevel::Vac]),
        StateSpec::Superposition(a, b) => (2, vec![a, b]),
        StateSpec::Input => {
            let (a, b) = config.input.ok_or_else(|| {
                Error::InvalidParameter(format!("no input state supplied for {slot}"))
            })?;
            (2, vec![a, b])
        }
    };
    PureState::normalized(Register::single(slot, dim)?, DVector::from_vec(amps))
}

/// Runs a program. Deterministic: equal inputs give equal outputs.
pub fn execute(program: &CircuitProgram, config: &ExecConfig) -> Result<Execution, ExecError> {
    let mut rho = DensityOperator::maximally_mixed(Register::empty());
    let mut prepared = Vec::new();
    let mut rho_s = None;
    let mut rho_d = None;

    for (directive, &line) in program.directives.iter().zip(&program.lines) {
        let wrap = |source: Error| ExecError {
            line,
            directive: directive.to_string(),
            source,
        };
        match directive {
            Directive::Prepare { site, cycle, state } => {
                let psi = prepared_state(SlotId::new(site.clone(), *cycle), *state, config)
                    .map_err(wrap)?;
                rho = rho.tensor(&psi.to_density()).map_err(wrap)?;
                prepared.push(psi);
            }
            Directive::Cnot {
                control,
                target,
                cycle,
            } => {
                let targets = [
                    SlotId::new(control.clone(), *cycle),
                    SlotId::new(target.clone(), *cycle),
                ];
                rho = apply_gate(&rho, &Gate::cnot(), &targets).map_err(wrap)?;
            }
            Directive::Gate { name, sites, cycle } => {
                let targets: Vec<SlotId> =
                    sites.iter().map(|s| SlotId::new(s.clone(), *cycle)).collect();
                rho = apply_gate(&rho, &name.gate(), &targets).map_err(wrap)?;
            }
            Directive::Dilate { site, cycles } => {
                if let [c] = rho.register().cycles().as_slice() {
                    let c = *c;
                    let copy = rho.shift_cycles(*cycles).map_err(wrap)?;
                    let expanded = rho.tensor(&copy).map_err(wrap)?;
                    let displaced = expanded.relabel_cycles(site, *cycles).map_err(wrap)?;
                    if rho_s.is_none() {
                        rho_s = Some(rho.clone());
                        rho_d = Some(measure_at_cycle(&displaced, c + cycles).map_err(wrap)?);
                    }
                    rho = displaced;
                } else {
                    rho = rho.relabel_cycles(site, *cycles).map_err(wrap)?;
                }
            }
            Directive::Discard { site } => {
                rho = rho.discard_site(site).map_err(wrap)?;
            }
            Directive::Output { site, cycle } => {
                let rho_out = rho
                    .partial_trace(&[SlotId::new(site.clone(), *cycle)])
                    .map_err(wrap)?;
                return Ok(Execution {
                    prepared,
                    rho_s,
                    rho_d,
                    rho_out,
                });
            }
        }
    }
    unreachable!("validated program ends with output")
}

/// The displaced two-CNOT circuit with displacement `tau`.
pub fn fig1_program(tau: i64) -> CircuitProgram {
    let text = format!(
        "prepare q1 @0\nprepare q2 @0 |0>\ncnot q1 q2 @0\ndilate q1 +{tau}\ncnot q1 q2 @{tau}\noutput q2 @{tau}\n"
    );
    parse_circuit(&text).expect("well-formed built-in program")
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "\
# displaced two-CNOT circuit
prepare q1 @0
prepare q2 @0 |0>
cnot q1 q2 @0
dilate q1 +1     # round trip
cnot q1 q2 @1
output q2 @1
";

    #[test]
    fn parses_fig1() {
        let p = parse_circuit(FIG1).unwrap();
        assert_eq!(p.directives().len(), 6);
        assert_eq!(p, fig1_program(1));
        assert_eq!(p.output(), SlotId::new("q2", 1));
        assert_eq!(p.lines, vec![2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn empty_program() {
        let e = parse_circuit("").unwrap_err();
        assert_eq!(e.message, "missing output directive");
        assert_eq!(e.line, None);
        assert_eq!(e.to_string(), "missing output directive");
        assert!(parse_circuit("# nothing\n\n").is_err());
    }

    #[test]
    fn undeclared_site() {
        let e = parse_circuit("prepare q1 @0\nprepare q2 @0 |0>\ncnot q1 q3 @0\noutput q2 @0")
            .unwrap_err();
        assert_eq!(e.line, Some(3));
        assert!(e.message.contains("q3"), "{e}");
        assert_eq!(e.to_string(), "line 3: undeclared site q3");
    }

    #[test]
    fn misaligned_gate_rejected_at_parse_time() {
        let e = parse_circuit("prepare q1 @0\nprepare q2 @0 |0>\ndilate q1 +1\ncnot q1 q2 @0\noutput q2 @0")
            .unwrap_err();
        assert_eq!(e.line, Some(4));
        assert!(e.message.starts_with("cycle misalignment"), "{e}");
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("frobnicate q1\noutput q1 @0", 1, "unknown directive"),
            ("prepare q1 0\noutput q1 @0", 1, "expected @<cycle>"),
            ("prepare q1 @0 |2>\noutput q1 @0", 1, "invalid state"),
            ("prepare q1 @0\ndilate q1 +0\noutput q1 @0", 2, "expected +<n>"),
            ("prepare q1 @0\ndilate q1 1\noutput q1 @0", 2, "expected +<n>"),
            ("prepare q1 @0\nprepare q1 @0\noutput q1 @0", 2, "already prepared"),
            ("prepare q1 @0\ncnot q1 q1 @0\noutput q1 @0", 2, "must differ"),
            ("prepare q1 @0\noutput q1 @0\ndiscard q1", 3, "after output"),
            ("prepare q1 @0\ndiscard q1\noutput q1 @0", 3, "undeclared site"),
            ("prepare q1 @0\ngate y q1 @0\noutput q1 @0", 2, "unknown gate"),
            ("prepare q1 @0 nan|0>+1|1>\noutput q1 @0", 1, "finite"),
            ("prepare q1 @0 0|0>+0|1>\noutput q1 @0", 1, "zero norm"),
            ("prepare q1 @0\noutput q1 @5", 2, "cycle misalignment"),
        ];
        for (text, line, needle) in cases {
            let e = parse_circuit(text).unwrap_err();
            assert_eq!(e.line, Some(line), "{text}: {e}");
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn register_size_is_bounded() {
        let mut text = String::new();
        for k in 0..9 {
            text.push_str(&format!("prepare s{k} @0 |0>\n"));
        }
        text.push_str("dilate s0 +1\noutput s0 @1\n");
        let e = parse_circuit(&text).unwrap_err();
        assert!(e.message.contains("exceed"), "{e}");
    }

    #[test]
    fn state_specs() {
        assert_eq!(parse_state("|0>"), Ok(StateSpec::Zero));
        assert_eq!(parse_state("|vac>"), Ok(StateSpec::Vac));
        assert_eq!(
            parse_state("0.6|0>+0.8|1>"),
            Ok(StateSpec::Superposition(C64::new(0.6, 0.0), C64::new(0.8, 0.0)))
        );
        assert_eq!(
            parse_state("0.6|0>-0.8|1>"),
            Ok(StateSpec::Superposition(C64::new(0.6, 0.0), C64::new(-0.8, 0.0)))
        );
        assert_eq!(
            parse_state("0.6+0.1j|0>+(1e-3-2j)|1>"),
            Ok(StateSpec::Superposition(C64::new(0.6, 0.1), C64::new(1e-3, -2.0)))
        );
        assert_eq!(
            parse_state("|0>+|1>"),
            Ok(StateSpec::Superposition(C64::new(1.0, 0.0), C64::new(1.0, 0.0)))
        );
        assert_eq!(
            parse_state("0.5j|0>+1|1>"),
            Ok(StateSpec::Superposition(C64::new(0.0, 0.5), C64::new(1.0, 0.0)))
        );
    }

    #[test]
    fn print_parse_round_trip() {
        let text = "prepare a @-2 (0.25-0.5j)|0>-1.5|1>\nprepare b @-2 |vac>\ngate phase(0.125) a @-2\ncnot a b @-2\noutput b @-2\n";
        let p = parse_circuit(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(parse_circuit(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn fig1_execution_matches_closed_form() {
        let out = execute(&fig1_program(1), &ExecConfig::real_superposition(0.25).unwrap()).unwrap();
        let p = out.rho_out.populations();
        assert!((p[0] - 0.625).abs() < 1e-12 && (p[1] - 0.375).abs() < 1e-12);
        assert_eq!(out.prepared.len(), 2);
        assert_eq!(out.rho_d.unwrap().register().cycles(), vec![1]);
    }

    #[test]
    fn missing_input_reported_with_line() {
        let e = execute(&fig1_program(1), &ExecConfig::default()).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.to_string().contains("prepare q1 @0"));
    }

    #[test]
    fn without_dilation_cnots_cancel() {
        let p = parse_circuit("prepare q1 @0\nprepare q2 @0 |0>\ncnot q1 q2 @0\ncnot q1 q2 @0\noutput q2 @0")
            .unwrap();
        let out = execute(&p, &ExecConfig::real_superposition(0.25).unwrap()).unwrap();
        assert!((out.rho_out.populations()[0] - 1.0).abs() < 1e-15);
        assert!(out.rho_s.is_none() && out.rho_d.is_none());
    }

    #[test]
    fn deterministic() {
        let cfg = ExecConfig::real_superposition(0.3).unwrap();
        let a = execute(&fig1_program(2), &cfg).unwrap();
        let b = execute(&fig1_program(2), &cfg).unwrap();
        assert_eq!(a, b);
    }
}
