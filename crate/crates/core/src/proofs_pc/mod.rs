//! Polynomial calculus and its extension by hierarchical extension axioms:
//! proof objects, checking, bounded-degree search, and translations into
//! (symmetric, ŷ-linear, skew) ideal-proof certificates.

mod epc;
mod io;
mod search;
mod symsearch;
mod translate;

use std::collections::BTreeSet;

use crate::algebra::{Polynomial, Scalar, Variable};
use crate::error::{Error, Result};
use crate::instances::{boolean_axiom, Instance};

pub use epc::{
    check_sym_epc, epc_to_symipslin, EpcContext, EpcProof, ExtensionAxiom, ExtensionAxiomSet,
};
pub use io::{parse_pc_proof, write_pc_proof};
pub use search::pc_search_bounded_degree;
pub use symsearch::{monomials_up_to, sym_linear_certificate_search, SymLinearOutcome};
pub use translate::{pc_to_ipslin, skewize};

/// Why a proof line is present. Line and axiom references are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// The instance axiom with this index.
    Axiom(usize),
    /// `v² − v`; admissible when the instance carries it as an axiom.
    Boolean(Variable),
    /// `v · p_line`.
    Mult(usize, Variable),
    /// `a · p_l1 + b · p_l2`.
    LinComb(usize, usize, Scalar, Scalar),
    /// The extension axiom `z_j − def_j` (extended proofs only).
    Extension(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcLine {
    pub poly: Polynomial,
    pub rule: Justification,
}

/// A sequence of polynomials ending in the constant 1, each justified by an
/// axiom or derived from earlier lines.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PcProof {
    pub lines: Vec<PcLine>,
}

impl PcProof {
    pub fn push(&mut self, poly: Polynomial, rule: Justification) -> usize {
        self.lines.push(PcLine { poly, rule });
        self.lines.len() - 1
    }

    /// Maximum line degree.
    pub fn degree(&self) -> u32 {
        self.lines
            .iter()
            .filter_map(|l| l.poly.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Facts established by a successful check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PcCheck {
    pub degree: u32,
    pub lines: usize,
}

/// Index of the instance axiom `v² − v`, if present.
pub(crate) fn boolean_axiom_index(inst: &Instance, v: &Variable) -> Option<usize> {
    let b = boolean_axiom(inst.field, v);
    inst.axioms.iter().position(|f| *f == b)
}

/// Resolves an axiom-like justification to an instance axiom index.
/// `ext_base` is the index of the first extension axiom, if any.
pub(crate) fn axiom_of(
    inst: &Instance,
    rule: &Justification,
    ext_base: Option<usize>,
) -> Result<Option<usize>, String> {
    match rule {
        Justification::Axiom(i) => {
            let limit = ext_base.unwrap_or(inst.axioms.len());
            if *i < limit {
                Ok(Some(*i))
            } else {
                Err(format!("axiom {i} does not exist"))
            }
        }
        Justification::Boolean(v) => boolean_axiom_index(inst, v)
            .map(Some)
            .ok_or_else(|| format!("{v}² − {v} is not an axiom of the instance")),
        Justification::Extension(j) => match ext_base {
            Some(b) if b + j < inst.axioms.len() => Ok(Some(b + j)),
            _ => Err(format!("extension axiom {j} does not exist")),
        },
        _ => Ok(None),
    }
}

pub(crate) fn check_lines(
    inst: &Instance,
    proof: &PcProof,
    ext_base: Option<usize>,
) -> Result<PcCheck> {
    let f = inst.field;
    let xset: BTreeSet<&Variable> = inst.xvars.iter().collect();
    let bad = |line: usize, msg: String| Error::InvalidProof { line, msg };
    if proof.lines.is_empty() {
        return Err(bad(0, "empty proof".into()));
    }
    for (n, line) in proof.lines.iter().enumerate() {
        f.check(&line.poly.field())
            .map_err(|e| bad(n, e.to_string()))?;
        let earlier = |l: usize| -> Result<&Polynomial> {
            if l < n {
                Ok(&proof.lines[l].poly)
            } else {
                Err(bad(n, format!("line {l} is not earlier")))
            }
        };
        let expected = match &line.rule {
            Justification::Mult(l, v) => {
                if !xset.contains(v) {
                    return Err(bad(n, format!("{v} is not an instance variable")));
                }
                earlier(*l)?.mul(&Polynomial::var(f, v.clone()))?
            }
            Justification::LinComb(l1, l2, a, b) => {
                if !f.contains(a) || !f.contains(b) {
                    return Err(bad(n, "coefficient outside the field".into()));
                }
                let mut p = earlier(*l1)?.scale(a);
                p.add_scaled(earlier(*l2)?, b)?;
                p
            }
            rule => {
                let i = axiom_of(inst, rule, ext_base)
                    .map_err(|m| bad(n, m))?
                    .expect("axiom-like rule");
                inst.axioms[i].clone()
            }
        };
        if expected != line.poly {
            return Err(bad(
                n,
                format!("stated {} but the rule gives {}", line.poly, expected),
            ));
        }
    }
    let last = proof.lines.len() - 1;
    if !proof.lines[last].poly.is_one() {
        return Err(bad(
            last,
            format!("last line is {}, not 1", proof.lines[last].poly),
        ));
    }
    Ok(PcCheck {
        degree: proof.degree(),
        lines: proof.lines.len(),
    })
}

/// Re-derives every line; an error names the first offending line.
pub fn check_pc_proof(inst: &Instance, proof: &PcProof) -> Result<PcCheck> {
    check_lines(inst, proof, None)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, FieldTag};
    use crate::instances::Family;
    use crate::symmetry::GroupPresentation;

    pub(crate) fn simple(field: FieldTag, axioms: &[&str], xs: &[&str]) -> Instance {
        let xvars: Vec<Variable> = xs
            .iter()
            .map(|s| crate::algebra::parse_variable(s).unwrap())
            .collect();
        let axioms: Vec<Polynomial> = axioms
            .iter()
            .map(|s| parse_polynomial(field, s).unwrap())
            .collect();
        let yvars = (1..=axioms.len() as i64)
            .map(|i| Variable::new("y", &[i]))
            .collect();
        Instance::new(
            Family::Custom,
            field,
            xvars,
            axioms,
            yvars,
            GroupPresentation::trivial(),
        )
        .unwrap()
    }

    pub(crate) fn p(f: FieldTag, s: &str) -> Polynomial {
        parse_polynomial(f, s).unwrap()
    }

    #[test]
    fn trivial_proof() {
        let q = FieldTag::Rationals;
        let inst = simple(q, &["x", "x - 1"], &["x"]);
        let mut proof = PcProof::default();
        proof.push(p(q, "x"), Justification::Axiom(0));
        proof.push(p(q, "x - 1"), Justification::Axiom(1));
        proof.push(
            p(q, "1"),
            Justification::LinComb(0, 1, q.one(), q.from_i64(-1)),
        );
        assert_eq!(
            check_pc_proof(&inst, &proof).unwrap(),
            PcCheck {
                degree: 1,
                lines: 3
            }
        );

        let mut two = proof.clone();
        two.lines[2] = PcLine {
            poly: p(q, "2"),
            rule: Justification::LinComb(0, 1, q.from_i64(2), q.from_i64(-2)),
        };
        assert!(matches!(
            check_pc_proof(&inst, &two),
            Err(Error::InvalidProof { line: 2, .. })
        ));
        let mut wrong = proof.clone();
        wrong.lines[1].rule = Justification::Axiom(0);
        assert!(matches!(
            check_pc_proof(&inst, &wrong),
            Err(Error::InvalidProof { line: 1, .. })
        ));
        let mut forward = proof;
        forward.lines[2].rule = Justification::LinComb(0, 2, q.one(), q.from_i64(-1));
        assert!(check_pc_proof(&inst, &forward).is_err());
    }

    /// The degree-2 hand proof for two pigeons and one hole.
    pub(crate) fn php21_hand_proof(inst: &Instance) -> PcProof {
        let q = inst.field;
        let x11 = Variable::new("x", &[1, 1]);
        let idx = |s: &str| inst.axioms.iter().position(|a| *a == p(q, s)).unwrap();
        let mut pr = PcProof::default();
        let hole = pr.push(
            p(q, "x[1,1]*x[2,1]"),
            Justification::Axiom(idx("x[1,1]*x[2,1]")),
        );
        let row2 = pr.push(p(q, "x[2,1] - 1"), Justification::Axiom(idx("x[2,1] - 1")));
        let m = pr.push(
            p(q, "x[1,1]*x[2,1] - x[1,1]"),
            Justification::Mult(row2, x11),
        );
        let neg = pr.push(
            p(q, "x[1,1]"),
            Justification::LinComb(hole, m, q.one(), q.from_i64(-1)),
        );
        let row1 = pr.push(p(q, "x[1,1] - 1"), Justification::Axiom(idx("x[1,1] - 1")));
        pr.push(
            p(q, "1"),
            Justification::LinComb(neg, row1, q.one(), q.from_i64(-1)),
        );
        pr
    }

    #[test]
    fn php21_hand_proof_checks() {
        let inst = crate::instances::gen_php(1).unwrap();
        let pr = php21_hand_proof(&inst);
        assert_eq!(
            check_pc_proof(&inst, &pr).unwrap(),
            PcCheck {
                degree: 2,
                lines: 6
            }
        );
    }

    #[test]
    fn boolean_rule_needs_instance_axiom() {
        let q = FieldTag::Rationals;
        let inst = crate::instances::gen_php(1).unwrap();
        let v = Variable::new("x", &[1, 1]);
        let mut pr = PcProof::default();
        pr.push(p(q, "x[1,1]^2 - x[1,1]"), Justification::Boolean(v));
        assert!(matches!(
            check_pc_proof(&inst, &pr),
            Err(Error::InvalidProof { line: 0, .. })
        ));
        let bare = simple(q, &["x - 1"], &["x"]);
        let mut pr = PcProof::default();
        pr.push(
            p(q, "x^2 - x"),
            Justification::Boolean(Variable::plain("x")),
        );
        assert!(matches!(
            check_pc_proof(&bare, &pr),
            Err(Error::InvalidProof { line: 0, .. })
        ));
    }
}
