//! Circuit description format.
//!
//! ```json
//! {"d": 2, "k": 6,
//!  "steps": [{"gate": "cnot", "positions": [2, 5]},
//!            {"gate": {"matrix": {"rows": 2, "cols": 2, "entries": [[0,0],[1,0],[1,0],[0,0]]}, "arity": 1},
//!             "positions": [3]}],
//!  "targets": [2, 5]}
//! ```
//!
//! Steps are listed in the order they are applied, so the circuit operator is
//! `U_T · … · U_2 · U_1`.

use std::fmt::{self, Write as _};

use serde_json::{Map, Value};

use crate::embed::{embed, GatePlacement};
use crate::error::{Error, Result};
use crate::gates::{standard_gate, GateSpec, QuditDim, CUSTOM_GATE};
use crate::linalg::{matmul, unitarity_deviation, ComplexMatrix, MatrixJson, EPSILON};
use crate::qcl::{StateVector, TargetMask};

/// A `k`-wire circuit over qudits of dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    pub d: QuditDim,
    pub k: usize,
    pub steps: Vec<GatePlacement>,
    pub targets: Option<TargetMask>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column in the source text.
    Text { line: usize, column: usize },
    /// Path to the offending JSON value, e.g. `steps[1].positions[0]`.
    Path(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Text { line, column } => write!(f, "line {line}, column {column}"),
            Location::Path(p) if p.is_empty() => f.write_str("document root"),
            Location::Path(p) => f.write_str(p),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseDiagnostic {
    pub location: Location,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.location, self.message)
    }
}

/// Diagnostics for a rejected circuit; holds at least one error.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics(pub Vec<ParseDiagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

/// Outcome of parsing: the circuit if no errors were found, plus every diagnostic.
#[derive(Debug, Clone)]
pub struct ParseReport {
    pub circuit: Option<CircuitSpec>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

pub fn parse_circuit(text: &str) -> std::result::Result<CircuitSpec, Diagnostics> {
    let report = parse_circuit_report(text);
    match report.circuit {
        Some(c) => Ok(c),
        None => Err(Diagnostics(report.diagnostics)),
    }
}

pub fn parse_circuit_report(text: &str) -> ParseReport {
    let mut p = Parser { diagnostics: Vec::new() };
    let circuit = match serde_json::from_str::<Value>(text) {
        Ok(v) => p.circuit(&v),
        Err(e) => {
            p.diagnostics.push(ParseDiagnostic {
                location: Location::Text { line: e.line(), column: e.column() },
                severity: Severity::Error,
                message: format!("malformed JSON: {e}"),
            });
            None
        }
    };
    let failed = p.diagnostics.iter().any(|d| d.severity == Severity::Error);
    ParseReport { circuit: if failed { None } else { circuit }, diagnostics: p.diagnostics }
}

struct Parser {
    diagnostics: Vec<ParseDiagnostic>,
}

impl Parser {
    fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.push(path, Severity::Error, message);
    }

    fn warn(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.push(path, Severity::Warning, message);
    }

    fn push(&mut self, path: impl Into<String>, severity: Severity, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic {
            location: Location::Path(path.into()),
            severity,
            message: message.into(),
        });
    }

    fn uint(&mut self, obj: &Map<String, Value>, key: &str) -> Option<usize> {
        match obj.get(key) {
            None => {
                self.error("", format!("missing field `{key}`"));
                None
            }
            Some(v) => self.uint_value(v, key),
        }
    }

    fn uint_value(&mut self, v: &Value, path: &str) -> Option<usize> {
        match v.as_u64().and_then(|x| usize::try_from(x).ok()) {
            Some(x) => Some(x),
            None => {
                self.error(path, format!("expected a non-negative integer, got {v}"));
                None
            }
        }
    }

    fn circuit(&mut self, root: &Value) -> Option<CircuitSpec> {
        let Some(obj) = root.as_object() else {
            self.error("", "circuit must be a JSON object");
            return None;
        };
        for key in obj.keys() {
            if !matches!(key.as_str(), "d" | "k" | "steps" | "targets") {
                self.warn(key.clone(), format!("unknown field `{key}` ignored"));
            }
        }
        let d = self.uint(obj, "d").and_then(|d| match QuditDim::new(d) {
            Ok(d) => Some(d),
            Err(e) => {
                self.error("d", e.to_string());
                None
            }
        });
        let k = self.uint(obj, "k").and_then(|k| {
            if k == 0 {
                self.error("k", "circuit needs at least one wire");
                return None;
            }
            Some(k)
        });
        if let (Some(d), Some(k)) = (d, k) {
            if let Err(e) = d.space(k) {
                self.error("k", e.to_string());
            }
        }

        let mut steps = Vec::new();
        match obj.get("steps") {
            None => self.error("", "missing field `steps`"),
            Some(Value::Array(items)) => {
                for (i, item) in items.iter().enumerate() {
                    if let Some(step) = self.step(item, i, d, k) {
                        steps.push(step);
                    }
                }
            }
            Some(other) => self.error("steps", format!("expected an array, got {other}")),
        }

        let targets = match obj.get("targets") {
            None | Some(Value::Null) => None,
            Some(v) => self.targets(v, k),
        };
        Some(CircuitSpec { d: d?, k: k?, steps, targets })
    }

    fn step(&mut self, item: &Value, i: usize, d: Option<QuditDim>, k: Option<usize>) -> Option<GatePlacement> {
        let here = format!("steps[{i}]");
        let Some(obj) = item.as_object() else {
            self.error(here, "step must be an object with `gate` and `positions`");
            return None;
        };
        for key in obj.keys() {
            if key != "gate" && key != "positions" {
                self.warn(format!("{here}.{key}"), format!("unknown field `{key}` ignored"));
            }
        }
        let gate = match obj.get("gate") {
            None => {
                self.error(here.clone(), "missing field `gate`");
                None
            }
            Some(g) => d.and_then(|d| self.gate(g, &format!("{here}.gate"), d)),
        };
        let positions = match obj.get("positions") {
            None => {
                self.error(here.clone(), "missing field `positions`");
                None
            }
            Some(p) => self.positions(p, &format!("{here}.positions"), k),
        };
        let (gate, positions, k) = (gate?, positions?, k?);
        if gate.arity() != positions.len() {
            self.error(
                format!("{here}.positions"),
                format!(
                    "gate `{}` acts on {} wire(s) but {} position(s) were given",
                    gate.name(),
                    gate.arity(),
                    positions.len()
                ),
            );
            return None;
        }
        match GatePlacement::new(gate, k, positions) {
            Ok(p) => Some(p),
            Err(e) => {
                self.error(here, e.to_string());
                None
            }
        }
    }

    fn gate(&mut self, g: &Value, path: &str, d: QuditDim) -> Option<GateSpec> {
        match g {
            Value::String(name) => match standard_gate(name, d) {
                Ok(gate) => Some(gate),
                Err(Error::UnknownGate { .. }) => {
                    self.error(path, format!("unknown gate `{name}` for d = {d}"));
                    None
                }
                Err(e) => {
                    self.error(path, e.to_string());
                    None
                }
            },
            Value::Object(obj) => {
                let arity = match obj.get("arity") {
                    None => {
                        self.error(path, "inline gate needs an `arity`");
                        None
                    }
                    Some(a) => self.uint_value(a, &format!("{path}.arity")),
                };
                let matrix_path = format!("{path}.matrix");
                let matrix = match obj.get("matrix") {
                    None => {
                        self.error(path, "inline gate needs a `matrix`");
                        None
                    }
                    Some(m) => match serde_json::from_value::<MatrixJson>(m.clone())
                        .map_err(|e| e.to_string())
                        .and_then(|m| m.into_matrix().map_err(|e| e.to_string()))
                    {
                        Ok(m) => Some(m),
                        Err(e) => {
                            self.error(matrix_path.clone(), format!("invalid matrix: {e}"));
                            None
                        }
                    },
                };
                let (arity, matrix) = (arity?, matrix?);
                if arity == 0 {
                    self.error(format!("{path}.arity"), "arity must be at least 1");
                    return None;
                }
                let side = match d.space(arity) {
                    Ok(s) => s,
                    Err(e) => {
                        self.error(format!("{path}.arity"), e.to_string());
                        return None;
                    }
                };
                if matrix.rows() != side || matrix.cols() != side {
                    self.error(
                        matrix_path,
                        format!(
                            "a {arity}-wire gate with d = {d} needs a {side}x{side} matrix, got {}x{}",
                            matrix.rows(),
                            matrix.cols()
                        ),
                    );
                    return None;
                }
                let deviation = unitarity_deviation(&matrix).unwrap_or(f64::INFINITY);
                if deviation > EPSILON {
                    self.error(
                        matrix_path,
                        format!("inline matrix is not unitary (max deviation {deviation:.3e})"),
                    );
                    return None;
                }
                match GateSpec::new(CUSTOM_GATE, d, arity, matrix) {
                    Ok(g) => Some(g),
                    Err(e) => {
                        self.error(path, e.to_string());
                        None
                    }
                }
            }
            other => {
                self.error(path, format!("gate must be a name or an inline matrix, got {other}"));
                None
            }
        }
    }

    fn wire_list(&mut self, v: &Value, path: &str, k: Option<usize>) -> Option<Vec<usize>> {
        let Some(items) = v.as_array() else {
            self.error(path, format!("expected an array of wire indices, got {v}"));
            return None;
        };
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            let here = format!("{path}[{i}]");
            match self.uint_value(item, &here) {
                Some(w) if w == 0 || k.is_some_and(|k| w > k) => {
                    let range = k.map_or_else(|| "1..".to_string(), |k| format!("1..={k}"));
                    self.error(here, format!("wire position {w} out of range {range}"));
                    ok = false;
                }
                Some(w) => out.push(w),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn positions(&mut self, v: &Value, path: &str, k: Option<usize>) -> Option<Vec<usize>> {
        let list = self.wire_list(v, path, k)?;
        if list.is_empty() {
            self.error(path, "at least one wire position is required");
            return None;
        }
        for (i, w) in list.iter().enumerate() {
            if list[..i].contains(w) {
                self.error(format!("{path}[{i}]"), format!("duplicate wire position {w}"));
                return None;
            }
        }
        Some(list)
    }

    fn targets(&mut self, v: &Value, k: Option<usize>) -> Option<TargetMask> {
        let list = self.wire_list(v, "targets", k)?;
        for (i, w) in list.iter().enumerate() {
            if list[..i].contains(w) {
                self.warn(format!("targets[{i}]"), format!("duplicate target {w} ignored"));
            }
        }
        match TargetMask::new(k?, list) {
            Ok(m) => Some(m),
            Err(e) => {
                self.error("targets", e.to_string());
                None
            }
        }
    }
}

impl CircuitSpec {
    /// Circuit JSON; catalog gates by name, others as inline matrices.
    pub fn to_json(&self) -> String {
        let mut out = format!("{{\"d\":{},\"k\":{},\"steps\":[", self.d, self.k);
        for (i, step) in self.steps.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let gate = step.gate();
            let by_name = gate.name() != CUSTOM_GATE
                && standard_gate(gate.name(), gate.d()).is_ok_and(|g| g.matrix() == gate.matrix());
            out.push_str("{\"gate\":");
            if by_name {
                write!(out, "\"{}\"", gate.name()).unwrap();
            } else {
                write!(out, "{{\"matrix\":{},\"arity\":{}}}", gate.matrix().to_json(), gate.arity()).unwrap();
            }
            write!(out, ",\"positions\":{}}}", join(step.positions())).unwrap();
        }
        out.push(']');
        if let Some(t) = &self.targets {
            write!(out, ",\"targets\":{}", join(&t.targets().collect::<Vec<_>>())).unwrap();
        }
        out.push('}');
        out
    }
}

fn join(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

/// `U_T · … · U_1`, every step embedded through the block path.
pub fn build_circuit_operator(spec: &CircuitSpec) -> Result<ComplexMatrix> {
    let side = spec.d.space(spec.k)?;
    let mut acc: Option<ComplexMatrix> = None;
    for step in &spec.steps {
        let op = embed(step)?;
        acc = Some(match acc {
            None => op,
            Some(a) => matmul(&op, &a)?,
        });
    }
    Ok(acc.unwrap_or_else(|| ComplexMatrix::identity(side)))
}

/// Parses `|0110>` (qubits) or `|0,2,1>d3` (any dimension).
pub fn parse_ket(text: &str) -> Result<StateVector> {
    let bad = |msg: &str| Error::InvalidState(format!("ket `{text}`: {msg}"));
    let s = text.trim();
    let body = s.strip_prefix('|').ok_or_else(|| bad("must start with `|`"))?;
    let (inner, suffix) = body.split_once('>').ok_or_else(|| bad("missing closing `>`"))?;
    let d = match suffix.trim() {
        "" => QuditDim::QUBIT,
        sfx => {
            let digits = sfx.strip_prefix('d').ok_or_else(|| bad("suffix must look like `d3`"))?;
            let d: usize = digits.parse().map_err(|_| bad("suffix must look like `d3`"))?;
            QuditDim::new(d)?
        }
    };
    let digits: Vec<usize> = if inner.contains(',') || !suffix.trim().is_empty() {
        inner
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("digits must be integers")))
            .collect::<Result<_>>()?
    } else {
        inner
            .chars()
            .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| bad("digits must be 0 or 1")))
            .collect::<Result<_>>()?
    };
    if digits.is_empty() || (digits.len() == 1 && inner.trim().is_empty()) {
        return Err(bad("no wires"));
    }
    if let Some(&x) = digits.iter().find(|&&x| x >= d.get()) {
        return Err(bad(&format!("digit {x} is not below d = {d}")));
    }
    StateVector::basis(d, &digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn errors(text: &str) -> Vec<ParseDiagnostic> {
        parse_circuit(text).unwrap_err().0
    }

    #[test]
    fn parses_single_cnot() {
        let c = parse_circuit(r#"{"d":2,"k":6,"steps":[{"gate":"cnot","positions":[2,5]}]}"#).unwrap();
        assert_eq!(c.steps.len(), 1);
        assert_eq!(c.steps[0].positions(), &[2, 5]);
        assert_eq!(c.steps[0].gate().name(), "cnot");
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = parse_circuit(r#"{"d":2,"k":2,"steps":[]}"#).unwrap();
        assert!(c.steps.is_empty());
        assert_eq!(build_circuit_operator(&c).unwrap(), ComplexMatrix::identity(4));
    }

    #[test]
    fn duplicate_positions_are_located() {
        let diags = errors(r#"{"d":2,"k":3,"steps":[{"gate":"swap","positions":[2,2]}]}"#);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].location, Location::Path("steps[0].positions[1]".into()));
        assert!(diags[0].message.contains("duplicate wire position"));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let diags = errors("{\"d\": 2,\n \"k\": }");
        assert!(matches!(diags[0].location, Location::Text { line: 2, .. }));
    }

    #[test]
    fn semantic_errors_are_all_reported() {
        let text = r#"{"d":2,"k":3,"steps":[
            {"gate":"hadamard","positions":[1]},
            {"gate":"cnot","positions":[1,4]},
            {"gate":{"matrix":{"rows":2,"cols":2,"entries":[[1,0],[1,0],[0,0],[1,0]]},"arity":1},"positions":[2]}
        ]}"#;
        let diags = errors(text);
        let paths: Vec<String> = diags.iter().map(|d| d.location.to_string()).collect();
        assert_eq!(paths, ["steps[0].gate", "steps[1].positions[1]", "steps[2].gate.matrix"]);
        assert!(diags[2].message.contains("max deviation"));
    }

    #[test]
    fn dimension_mismatch_and_arity() {
        let diags = errors(r#"{"d":3,"k":3,"steps":[{"gate":"cnot","positions":[1,2]}]}"#);
        assert!(diags[0].message.contains("unknown gate"));
        let diags = errors(r#"{"d":2,"k":3,"steps":[{"gate":"cnot","positions":[1]}]}"#);
        assert!(diags[0].message.contains("1 position"));
    }

    #[test]
    fn missing_fields() {
        let diags = errors(r#"{"k":3}"#);
        assert_eq!(diags.len(), 2);
        assert!(errors("[1,2]")[0].message.contains("object"));
    }

    #[test]
    fn size_guard_rejects_huge_registers() {
        let diags = errors(r#"{"d":2,"k":30,"steps":[]}"#);
        assert_eq!(diags[0].location, Location::Path("k".into()));
    }

    #[test]
    fn warnings_do_not_reject() {
        let report = parse_circuit_report(r#"{"d":2,"k":2,"steps":[],"targets":[2,2],"name":"x"}"#);
        assert!(report.circuit.is_some());
        assert_eq!(report.diagnostics.len(), 2);
        assert!(report.diagnostics.iter().all(|d| d.severity == Severity::Warning));
    }

    #[test]
    fn gate_names_are_case_insensitive() {
        let c = parse_circuit(r#"{"d":2,"k":2,"steps":[{"gate":"SQRT_SWAP","positions":[2,1]}]}"#).unwrap();
        assert_eq!(c.steps[0].gate().name(), "sqrt_swap");
    }

    #[test]
    fn kets() {
        let s = parse_ket("|10>").unwrap();
        assert_eq!((s.k(), s.d()), (2, QuditDim::QUBIT));
        assert_eq!(s.amplitudes()[2], ONE);
        let q = parse_ket("|0,2,1>d3").unwrap();
        assert_eq!((q.k(), q.d()), (3, QuditDim::QUTRIT));
        assert_eq!(q.amplitudes()[2 * 3 + 1], ONE);
        for bad in ["10>", "|10", "|12>", "|0,3>d3", "|>", "|0,1>x2", "|ab>"] {
            assert!(parse_ket(bad).is_err(), "{bad}");
        }
    }
}
