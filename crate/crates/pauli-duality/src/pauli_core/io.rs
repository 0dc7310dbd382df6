//! Text formats for Hamiltonians (`PAULI-HAM v1`) and circuits (`CLIFF v1`).

use super::{CliffordCircuit, Gate, PauliError, PauliTerm, SignedTableau};
use std::fmt::Write as _;

pub const HAM_HEADER: &str = "PAULI-HAM v1";
pub const CLIFF_HEADER: &str = "CLIFF v1";

fn parse_err(line: usize, msg: impl Into<String>) -> PauliError {
    PauliError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with comments stripped, tagged with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_preamble<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    header: &str,
) -> Result<usize, PauliError> {
    match lines.next() {
        Some((_, h)) if h == header => {}
        Some((ln, h)) => return Err(parse_err(ln, format!("expected {header:?}, found {h:?}"))),
        None => return Err(parse_err(1, "empty input")),
    }
    match lines.next() {
        Some((ln, l)) => {
            let mut it = l.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some("n"), Some(v), None) => v
                    .parse()
                    .map_err(|_| parse_err(ln, format!("bad qubit count {v:?}"))),
                _ => Err(parse_err(ln, "expected `n <qubits>`")),
            }
        }
        None => Err(parse_err(2, "missing `n <qubits>` line")),
    }
}

/// Parse `PAULI-HAM v1` into terms. Commutation is not checked here.
pub fn parse_terms(text: &str) -> Result<Vec<PauliTerm>, PauliError> {
    let mut lines = content_lines(text);
    let n = parse_preamble(&mut lines, HAM_HEADER)?;
    let mut terms = Vec::new();
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let (c, s) = match (it.next(), it.next(), it.next()) {
            (Some(c), Some(s), None) => (c, s),
            _ => return Err(parse_err(ln, "expected `<coeff> <pauli string>`")),
        };
        let value: f64 = c
            .parse()
            .map_err(|_| parse_err(ln, format!("bad coefficient {c:?}")))?;
        if !value.is_finite() {
            return Err(parse_err(ln, format!("non-finite coefficient {c:?}")));
        }
        if s.chars().count() != n {
            return Err(parse_err(
                ln,
                format!("string has length {}, expected {n}", s.chars().count()),
            ));
        }
        let term = PauliTerm::from_letters(s, value).map_err(|e| parse_err(ln, e.to_string()))?;
        terms.push(term);
    }
    Ok(terms)
}

pub fn parse_hamiltonian(text: &str) -> Result<SignedTableau, PauliError> {
    SignedTableau::from_terms(&parse_terms(text)?)
}

fn fmt_value(sign: bool, coeff: f64) -> String {
    format!("{}{}", if sign { '-' } else { '+' }, coeff)
}

pub fn write_hamiltonian(t: &SignedTableau) -> String {
    let mut out = format!("{HAM_HEADER}\nn {}\n", t.n());
    for i in 0..t.m() {
        let r = t.row(i);
        let _ = writeln!(out, "{} {}", fmt_value(r.sign, r.coeff), r.letters());
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<CliffordCircuit, PauliError> {
    let mut lines = content_lines(text);
    let n = parse_preamble(&mut lines, CLIFF_HEADER)?;
    let mut c = CliffordCircuit::new(n);
    for (ln, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let q = |i: usize| -> Result<usize, PauliError> {
            parts
                .get(i)
                .ok_or_else(|| parse_err(ln, "missing operand"))?
                .parse()
                .map_err(|_| parse_err(ln, format!("bad operand {:?}", parts[i])))
        };
        let (g, arity) = match parts[0] {
            "H" => (Gate::H(q(1)?), 1),
            "S" => (Gate::S(q(1)?), 1),
            "SDG" => (Gate::Sdg(q(1)?), 1),
            "CX" => (Gate::CX(q(1)?, q(2)?), 2),
            "CZ" => (Gate::CZ(q(1)?, q(2)?), 2),
            other => return Err(parse_err(ln, format!("unknown gate {other:?}"))),
        };
        if parts.len() != arity + 1 {
            return Err(parse_err(ln, "trailing tokens"));
        }
        g.check(n).map_err(|e| parse_err(ln, e.to_string()))?;
        c.gates.push(g);
    }
    Ok(c)
}

pub fn write_circuit(c: &CliffordCircuit) -> String {
    let mut out = format!("{CLIFF_HEADER}\nn {}\n", c.n);
    for g in &c.gates {
        let _ = writeln!(out, "{g}");
    }
    out
}
