//! Text form of circuits.
//!
//! ```text
//! symips circuit v1
//! field Q
//! vars x[1] x[2]
//! 0 in x[1]
//! 1 in x[2]
//! 2 const -1/1
//! 3 add 0 1 2
//! outputs 3
//! witness 0 0:1 1:0
//! ```
//!
//! Witness lines list only the gates a witness moves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{Circuit, Gate, GateLabel};
use crate::algebra::{parse_variable, FieldTag, Variable};
use crate::error::{Error, Result};
use crate::textfile::{expect_header, header, keyword};

pub const CIRCUIT_VERSION: u32 = crate::textfile::FORMAT_VERSION;

/// Appends the body lines (everything after the header) of `c`.
pub fn write_circuit_body(c: &Circuit, out: &mut String) {
    let _ = writeln!(out, "field {}", c.field);
    let vars: Vec<String> = c
        .input_variables()
        .iter()
        .map(Variable::to_string)
        .collect();
    let _ = writeln!(out, "vars {}", vars.join(" "));
    for (id, g) in c.gates.iter().enumerate() {
        let _ = match &g.label {
            GateLabel::Input(v) => writeln!(out, "{id} in {v}"),
            GateLabel::Const(s) => writeln!(out, "{id} const {}", c.field.format(s)),
            GateLabel::Add | GateLabel::Mul => {
                let op = if matches!(g.label, GateLabel::Add) {
                    "add"
                } else {
                    "mul"
                };
                let ch: Vec<String> = g.children.iter().map(usize::to_string).collect();
                writeln!(out, "{id} {op} {}", ch.join(" "))
            }
        };
    }
    let outs: Vec<String> = c.outputs.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "outputs {}", outs.join(" "));
    for (gen, w) in &c.witnesses {
        let moved: Vec<String> = w
            .iter()
            .enumerate()
            .filter(|(a, b)| a != *b)
            .map(|(a, b)| format!("{a}:{b}"))
            .collect();
        let _ = writeln!(out, "witness {gen} {}", moved.join(" "));
    }
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut out = header("circuit");
    out.push('\n');
    write_circuit_body(c, &mut out);
    out
}

type RawWitness = (usize, usize, Vec<(usize, usize)>);

fn parse_usize(line: usize, s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("expected a gate id, found '{s}'")))
}

/// Parses circuit body lines; lines with other keywords are returned untouched.
pub fn parse_circuit_body<'a>(
    lines: &[(usize, &'a str)],
) -> Result<(Circuit, Vec<(usize, &'a str)>)> {
    let mut field: Option<FieldTag> = None;
    let mut declared: Option<BTreeSet<Variable>> = None;
    let mut gates: Vec<Gate> = Vec::new();
    let mut outputs: Option<Vec<usize>> = None;
    // (line, generator index, gate pairs) for each witness line.
    let mut raw_witnesses: Vec<RawWitness> = Vec::new();
    let mut rest = Vec::new();

    for &(ln, line) in lines {
        let (kw, body) = keyword(line);
        if kw.chars().all(|ch| ch.is_ascii_digit()) {
            let f = field.ok_or_else(|| Error::parse(ln, "gate before 'field' line"))?;
            let id = parse_usize(ln, kw)?;
            if id != gates.len() {
                return Err(Error::parse(
                    ln,
                    format!("expected gate id {}, found {id}", gates.len()),
                ));
            }
            let (op, args) = keyword(body);
            let gate = match op {
                "in" => {
                    let v = parse_variable(args).map_err(|e| Error::parse(ln, e.to_string()))?;
                    if let Some(d) = &declared {
                        if !d.contains(&v) {
                            return Err(Error::parse(ln, format!("variable {v} is not declared")));
                        }
                    }
                    Gate::leaf(GateLabel::Input(v))
                }
                "const" => {
                    let s = f.parse(args).map_err(|e| Error::parse(ln, e.to_string()))?;
                    Gate::leaf(GateLabel::Const(s))
                }
                "add" | "mul" => {
                    let mut ch = Vec::new();
                    for a in args.split_whitespace() {
                        ch.push(parse_usize(ln, a)?);
                    }
                    let label = if op == "add" {
                        GateLabel::Add
                    } else {
                        GateLabel::Mul
                    };
                    Gate::op(label, ch)
                }
                _ => return Err(Error::parse(ln, format!("unknown gate kind '{op}'"))),
            };
            gates.push(gate);
            continue;
        }
        match kw {
            "field" => {
                field = Some(
                    body.parse()
                        .map_err(|e: Error| Error::parse(ln, e.to_string()))?,
                );
            }
            "vars" => {
                let mut set = BTreeSet::new();
                for v in body.split_whitespace() {
                    set.insert(parse_variable(v).map_err(|e| Error::parse(ln, e.to_string()))?);
                }
                declared = Some(set);
            }
            "outputs" => {
                let mut o = Vec::new();
                for a in body.split_whitespace() {
                    o.push(parse_usize(ln, a)?);
                }
                outputs = Some(o);
            }
            "witness" => {
                let mut it = body.split_whitespace();
                let gen = parse_usize(ln, it.next().unwrap_or(""))?;
                let mut pairs = Vec::new();
                for p in it {
                    let (a, b) = p
                        .split_once(':')
                        .ok_or_else(|| Error::parse(ln, format!("bad witness pair '{p}'")))?;
                    pairs.push((parse_usize(ln, a)?, parse_usize(ln, b)?));
                }
                raw_witnesses.push((ln, gen, pairs));
            }
            _ => rest.push((ln, line)),
        }
    }

    let field = field.ok_or_else(|| Error::parse(0, "missing 'field' line"))?;
    let outputs = outputs.ok_or_else(|| Error::parse(0, "missing 'outputs' line"))?;
    let n = gates.len();
    let mut witnesses = BTreeMap::new();
    for (ln, gen, pairs) in raw_witnesses {
        let mut w: Vec<usize> = (0..n).collect();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::parse(ln, "witness refers to a missing gate"));
            }
            w[a] = b;
        }
        if witnesses.insert(gen, w).is_some() {
            return Err(Error::parse(
                ln,
                format!("duplicate witness for generator {gen}"),
            ));
        }
    }
    let c = Circuit {
        field,
        gates,
        outputs,
        witnesses,
    };
    c.validate()?;
    Ok((c, rest))
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let lines = expect_header(text, "circuit")?;
    let (c, rest) = parse_circuit_body(&lines)?;
    if let Some((ln, l)) = rest.first() {
        return Err(Error::parse(*ln, format!("unexpected line '{l}'")));
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;
    use crate::circuit::CircuitBuilder;

    #[test]
    fn round_trip_is_bit_exact() {
        for field in [FieldTag::Rationals, FieldTag::F2] {
            let mut b = CircuitBuilder::new(field);
            let p = parse_polynomial(field, "3*x[1]^2*y[0] - x[2] + 1").unwrap();
            let g = b.polynomial(&p);
            let mut c = b.finish(vec![g]);
            let mut w: Vec<usize> = (0..c.len()).collect();
            w.swap(0, 0);
            c.witnesses.insert(0, w);
            let text = write_circuit(&c);
            let back = parse_circuit(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(write_circuit(&back), text);
        }
    }

    #[test]
    fn rejects_malformed() {
        let bad = "symips circuit v1\nfield Q\nvars x\n0 in x\n1 add 0 2\noutputs 1\n";
        assert!(parse_circuit(bad).is_err());
        let unreachable = "symips circuit v1\nfield Q\nvars x y\n0 in x\n1 in y\noutputs 1\n";
        assert!(matches!(
            parse_circuit(unreachable),
            Err(Error::MalformedCircuit(_))
        ));
        let undeclared = "symips circuit v1\nfield Q\nvars x\n0 in y\noutputs 0\n";
        assert!(matches!(
            parse_circuit(undeclared),
            Err(Error::Parse { .. })
        ));
    }
}
