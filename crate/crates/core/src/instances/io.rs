//! Text form of instances.
//!
//! ```text
//! symips instance v1
//! family php n=1
//! field Q
//! xvars x[1,1] x[2,1]
//! axiom yRow[1] : x[1,1] - 1
//! order 2
//! gen x[1,1] -> x[2,1], x[2,1] -> x[1,1]
//! ```
//!
//! Axioms keep their order; each names its axiom variable before the colon.
//! Group lines use the format of group files with the instance variables as
//! support.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Family, Instance};
use crate::algebra::{parse_polynomial, parse_variable, FieldTag, Variable};
use crate::error::{Error, Result};
use crate::symmetry::{parse_group_lines, write_group_lines};
use crate::textfile::{expect_header, header, keyword};

pub fn write_instance(inst: &Instance) -> String {
    let mut out = header("instance");
    out.push('\n');
    let _ = writeln!(out, "family {}", inst.family);
    let _ = writeln!(out, "field {}", inst.field);
    let xs: Vec<String> = inst.xvars.iter().map(Variable::to_string).collect();
    let _ = writeln!(out, "xvars {}", xs.join(" "));
    for (y, f) in inst.yvars.iter().zip(&inst.axioms) {
        let _ = writeln!(out, "axiom {y} : {f}");
    }
    write_group_lines(&inst.group, &mut out);
    out
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = expect_header(text, "instance")?;
    let mut family = Family::Custom;
    let mut field: Option<FieldTag> = None;
    let mut xvars: Vec<Variable> = Vec::new();
    let mut axioms = Vec::new();
    let mut yvars = Vec::new();
    let mut group_lines = Vec::new();
    for &(ln, line) in &lines {
        let (kw, body) = keyword(line);
        match kw {
            "family" => {
                family = body
                    .parse()
                    .map_err(|e: Error| Error::parse(ln, e.to_string()))?
            }
            "field" => {
                field = Some(
                    body.parse()
                        .map_err(|e: Error| Error::parse(ln, e.to_string()))?,
                )
            }
            "xvars" => {
                for t in body.split_whitespace() {
                    xvars.push(parse_variable(t).map_err(|e| Error::parse(ln, e.to_string()))?);
                }
            }
            "axiom" => {
                let f = field.ok_or_else(|| Error::parse(ln, "'field' must precede axioms"))?;
                let (y, p) = body
                    .split_once(':')
                    .ok_or_else(|| Error::parse(ln, "expected 'axiom <var> : <polynomial>'"))?;
                yvars.push(parse_variable(y.trim()).map_err(|e| Error::parse(ln, e.to_string()))?);
                axioms.push(
                    parse_polynomial(f, p.trim()).map_err(|e| Error::parse(ln, e.to_string()))?,
                );
            }
            "gen" | "order" => group_lines.push((ln, line)),
            _ => return Err(Error::parse(ln, format!("unknown keyword '{kw}'"))),
        }
    }
    let field = field.ok_or_else(|| Error::parse(0, "missing 'field' line"))?;
    let support: BTreeSet<Variable> = xvars.iter().cloned().collect();
    let group = parse_group_lines(&group_lines, &support)?;
    Instance::new(family, field, xvars, axioms, yvars, group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{gen_cfi, gen_counterexample_f2, gen_php, gen_subset_sum, GraphInput};

    #[test]
    fn round_trips() {
        let q = FieldTag::Rationals;
        let all = [
            gen_php(2).unwrap(),
            gen_subset_sum(3, q, &q.ratio(7, 2).unwrap(), true).unwrap(),
            gen_subset_sum(
                2,
                FieldTag::Prime(5),
                &FieldTag::Prime(5).from_i64(4),
                false,
            )
            .unwrap(),
            gen_cfi(&GraphInput::complete(4), None, 1).unwrap(),
            gen_counterexample_f2().unwrap(),
        ];
        for inst in all {
            let text = write_instance(&inst);
            let back = parse_instance(&text).unwrap();
            assert_eq!(back.family, inst.family);
            assert_eq!(back.axioms, inst.axioms);
            assert_eq!(back.yvars, inst.yvars);
            assert_eq!(back.group.generators, inst.group.generators);
        }
    }

    #[test]
    fn rejects_non_invariant_group() {
        let text = "symips instance v1\nfield Q\nxvars x[1] x[2]\naxiom y[1] : x[1]\ngen x[1] -> x[2], x[2] -> x[1]\n";
        assert!(matches!(
            parse_instance(text),
            Err(Error::NotInvariant { .. })
        ));
        let dup = "symips instance v1\nfield Q\nxvars x[1]\naxiom y[1] : x[1]\naxiom y[2] : x[1]\n";
        assert!(matches!(
            parse_instance(dup),
            Err(Error::DuplicateAxiom(0, 1))
        ));
    }
}
