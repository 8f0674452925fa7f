//! The certificate type and its file form.
//!
//! ```text
//! symips certificate v1
//! instance php n=1
//! claims linear=true degree=2 group=instance
//! note free-form remark
//! field Q
//! ...circuit body...
//! ```
//!
//! `group=instance` claims symmetry under the instance's declared group, with
//! witnesses keyed by generator index; `group=none` makes no claim.

use std::fmt::Write as _;

use crate::circuit::{parse_circuit_body, write_circuit_body, Circuit};
use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::symmetry::{derive_witness, search_automorphism};
use crate::textfile::{expect_header, header, keyword};

/// Properties a builder asserts about its output; `verify` re-checks them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Claims {
    pub y_linear: Option<bool>,
    pub degree: Option<u32>,
    /// `Some("instance")` when witnesses for the instance group are stored.
    pub group: Option<String>,
}

/// A circuit over `X ⊎ Y` claimed to satisfy `C(x,0) = 0` and `C(x,f) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub circuit: Circuit,
    /// The family line of the instance the certificate refutes.
    pub instance: String,
    pub claims: Claims,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn new(inst: &Instance, circuit: Circuit) -> Self {
        Certificate {
            circuit,
            instance: inst.family.to_string(),
            claims: Claims::default(),
            notes: Vec::new(),
        }
    }

    pub fn with_claims(mut self, y_linear: Option<bool>, degree: Option<u32>) -> Self {
        self.claims.y_linear = y_linear;
        self.claims.degree = degree;
        self
    }

    /// Stores a witness for every generator of the instance group (acting on
    /// `X ⊎ Y`), deriving structurally and falling back to search under `cap`.
    /// Claims the instance group only if every generator has a witness.
    pub fn attach_symmetry(&mut self, inst: &Instance, cap: usize) -> Result<bool> {
        let inputs = self.circuit.input_variables();
        self.circuit.witnesses.clear();
        let mut all = true;
        for (i, g) in inst.induced.generators.iter().enumerate() {
            let g = g.extended(&inputs);
            let w = match derive_witness(&self.circuit, &g) {
                Some(w) => Some(w),
                None if self.circuit.len() <= cap => search_automorphism(&self.circuit, &g, cap)?,
                None => None,
            };
            match w {
                Some(w) => {
                    self.circuit.witnesses.insert(i, w);
                }
                None => all = false,
            }
        }
        self.claims.group = Some(if all { "instance" } else { "none" }.to_string());
        Ok(all)
    }
}

pub fn write_certificate(cert: &Certificate) -> String {
    let mut out = header("certificate");
    out.push('\n');
    let _ = writeln!(out, "instance {}", cert.instance);
    let mut claims = Vec::new();
    if let Some(l) = cert.claims.y_linear {
        claims.push(format!("linear={l}"));
    }
    if let Some(d) = cert.claims.degree {
        claims.push(format!("degree={d}"));
    }
    if let Some(g) = &cert.claims.group {
        claims.push(format!("group={g}"));
    }
    let _ = writeln!(out, "claims {}", claims.join(" "));
    for n in &cert.notes {
        let _ = writeln!(out, "note {n}");
    }
    write_circuit_body(&cert.circuit, &mut out);
    out
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let lines = expect_header(text, "certificate")?;
    let mut instance = String::new();
    let mut claims = Claims::default();
    let mut notes = Vec::new();
    let mut body = Vec::new();
    for &(ln, line) in &lines {
        match keyword(line) {
            ("instance", rest) => instance = rest.to_string(),
            ("note", rest) => notes.push(rest.to_string()),
            ("claims", rest) => {
                for kv in rest.split_whitespace() {
                    let (k, v) = kv.split_once('=').ok_or_else(|| {
                        Error::parse(ln, format!("expected key=value, found '{kv}'"))
                    })?;
                    let bad = || Error::parse(ln, format!("bad value for '{k}'"));
                    match k {
                        "linear" => claims.y_linear = Some(v.parse().map_err(|_| bad())?),
                        "degree" => claims.degree = Some(v.parse().map_err(|_| bad())?),
                        "group" => claims.group = Some(v.to_string()),
                        _ => return Err(Error::parse(ln, format!("unknown claim '{k}'"))),
                    }
                }
            }
            _ => body.push((ln, line)),
        }
    }
    let (circuit, rest) = parse_circuit_body(&body)?;
    if let Some(&(ln, line)) = rest.first() {
        return Err(Error::parse(ln, format!("unexpected line '{line}'")));
    }
    Ok(Certificate {
        circuit,
        instance,
        claims,
        notes,
    })
}
