//! Text form of (extended) polynomial-calculus proofs.
//!
//! ```text
//! symips pcproof v1
//! field Q
//! ext z[1] class 1 : x[1]*x[2]
//! x[1] - 1 | axiom 0
//! x[1]^2 - x[1] | bool x[1]
//! x[1]^2 - x[1] | mul 0 x[1]
//! 0 | lin 1 2 1 -1
//! z[1] - x[1]*x[2] | ext 0
//! ```
//!
//! Step lines read `poly | rule args` with 0-based references; `ext` lines
//! declare extension axioms `z − def` with their class.

use std::fmt::Write as _;

use super::epc::{EpcProof, ExtensionAxiom, ExtensionAxiomSet};
use super::{Justification, PcProof};
use crate::algebra::{parse_polynomial, parse_variable, FieldTag, Scalar};
use crate::error::{Error, Result};
use crate::textfile::{expect_header, header, keyword};

fn scalar_token(s: &Scalar) -> String {
    match s {
        Scalar::Rat(r) => r.to_string(),
        Scalar::Mod(k) => k.to_string(),
    }
}

pub fn write_pc_proof(field: FieldTag, proof: &EpcProof) -> String {
    let mut out = header("pcproof");
    out.push('\n');
    let _ = writeln!(out, "field {field}");
    for e in &proof.extensions.axioms {
        let _ = writeln!(out, "ext {} class {} : {}", e.var, e.class, e.definition);
    }
    for line in &proof.base.lines {
        let rule = match &line.rule {
            Justification::Axiom(i) => format!("axiom {i}"),
            Justification::Boolean(v) => format!("bool {v}"),
            Justification::Mult(l, v) => format!("mul {l} {v}"),
            Justification::LinComb(a, b, c, d) => {
                format!("lin {a} {b} {} {}", scalar_token(c), scalar_token(d))
            }
            Justification::Extension(j) => format!("ext {j}"),
        };
        let _ = writeln!(out, "{} | {rule}", line.poly);
    }
    out
}

/// Parses a proof file; a plain proof has an empty extension set.
pub fn parse_pc_proof(text: &str) -> Result<(FieldTag, EpcProof)> {
    let lines = expect_header(text, "pcproof")?;
    let mut field: Option<FieldTag> = None;
    let mut exts = Vec::new();
    let mut base = PcProof::default();
    for &(ln, line) in &lines {
        let err = |m: String| Error::parse(ln, m);
        if let Some((poly, rule)) = line.split_once('|') {
            let f = field.ok_or_else(|| err("'field' must come first".into()))?;
            let poly = parse_polynomial(f, poly.trim()).map_err(|e| err(e.to_string()))?;
            let toks: Vec<&str> = rule.split_whitespace().collect();
            let num = |k: usize| -> Result<usize> {
                toks.get(k).and_then(|t| t.parse().ok()).ok_or_else(|| {
                    err(format!(
                        "rule '{}' needs a number at position {k}",
                        rule.trim()
                    ))
                })
            };
            let var = |k: usize| -> Result<crate::algebra::Variable> {
                let t = toks.get(k).ok_or_else(|| err("missing variable".into()))?;
                parse_variable(t).map_err(|e| err(e.to_string()))
            };
            let coef = |k: usize| -> Result<Scalar> {
                let t = toks
                    .get(k)
                    .ok_or_else(|| err("missing coefficient".into()))?;
                f.parse(t).map_err(|e| err(e.to_string()))
            };
            let j = match toks.first().copied() {
                Some("axiom") => Justification::Axiom(num(1)?),
                Some("bool") => Justification::Boolean(var(1)?),
                Some("mul") => Justification::Mult(num(1)?, var(2)?),
                Some("lin") => Justification::LinComb(num(1)?, num(2)?, coef(3)?, coef(4)?),
                Some("ext") => Justification::Extension(num(1)?),
                other => return Err(err(format!("unknown rule '{}'", other.unwrap_or("")))),
            };
            base.push(poly, j);
            continue;
        }
        match keyword(line) {
            ("field", body) => field = Some(body.parse().map_err(|e: Error| err(e.to_string()))?),
            ("ext", body) => {
                let f = field.ok_or_else(|| err("'field' must come first".into()))?;
                let (head, def) = body
                    .split_once(':')
                    .ok_or_else(|| err("expected 'ext <var> class <k> : <poly>'".into()))?;
                let parts: Vec<&str> = head.split_whitespace().collect();
                let [v, "class", k] = parts[..] else {
                    return Err(err("expected 'ext <var> class <k> : <poly>'".into()));
                };
                exts.push(ExtensionAxiom {
                    var: parse_variable(v).map_err(|e| err(e.to_string()))?,
                    class: k.parse().map_err(|_| err(format!("bad class '{k}'")))?,
                    definition: parse_polynomial(f, def.trim()).map_err(|e| err(e.to_string()))?,
                });
            }
            (kw, _) => return Err(err(format!("unknown keyword '{kw}'"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing 'field' line"))?;
    Ok((
        field,
        EpcProof {
            base,
            extensions: ExtensionAxiomSet { axioms: exts },
        },
    ))
}
