use std::collections::BTreeMap;

use super::{axiom_of, check_lines, Justification, PcProof};
use crate::algebra::{Monomial, Polynomial, Variable};
use crate::circuit::{degree, eval_symbolic, Budget, CircuitBuilder, DegreeMode};
use crate::constructions::Certificate;
use crate::error::{Error, Result};
use crate::instances::Instance;

/// Line-by-line translation: axiom lines become their axiom variables,
/// `v · p` becomes a product with the input `v`, and linear combinations
/// become sums of constant multiples. The result is skew and ŷ-linear.
pub fn pc_to_ipslin(inst: &Instance, proof: &PcProof, budget: &mut Budget) -> Result<Certificate> {
    translate_lines(inst, proof, None, budget)
}

pub(crate) fn translate_lines(
    inst: &Instance,
    proof: &PcProof,
    ext_base: Option<usize>,
    budget: &mut Budget,
) -> Result<Certificate> {
    check_lines(inst, proof, ext_base)?;
    let f = inst.field;
    let mut b = CircuitBuilder::new(f);
    let mut gate = Vec::with_capacity(proof.lines.len());
    for line in &proof.lines {
        let g = match &line.rule {
            Justification::Mult(l, v) => {
                let x = b.input(v.clone());
                b.mul(vec![x, gate[*l]])
            }
            Justification::LinComb(l1, l2, a, c) => {
                let mut parts = Vec::new();
                if l1 == l2 {
                    let s = f.add(a, c);
                    if !f.is_zero(&s) {
                        parts.push(b.scale(&s, gate[*l1]));
                    }
                } else {
                    if !f.is_zero(a) {
                        parts.push(b.scale(a, gate[*l1]));
                    }
                    if !f.is_zero(c) {
                        parts.push(b.scale(c, gate[*l2]));
                    }
                }
                b.add(parts)
            }
            rule => {
                let i = axiom_of(inst, rule, ext_base)
                    .map_err(Error::invalid)?
                    .expect("axiom-like rule");
                b.input(inst.yvars[i].clone())
            }
        };
        gate.push(g);
    }
    let out = *gate.last().expect("checked proof is non-empty");
    let circuit = b.finish(vec![out]);
    let deg = degree(&circuit, DegreeMode::Exact, budget)?.max;
    Ok(Certificate::new(inst, circuit).with_claims(Some(true), deg))
}

/// Rewrites a certificate as `Σ_y y · g_y(x)` and emits it as a skew circuit.
///
/// Each monomial keeps its first axiom variable; the remaining ones are
/// replaced by their axioms. Every term `c · x^α · y` becomes a chain of
/// binary products starting at `y`, each multiplying in one input.
/// Requires the certificate's degree to be at most `k`.
pub fn skewize(
    inst: &Instance,
    cert: &Certificate,
    k: u32,
    budget: &mut Budget,
) -> Result<Certificate> {
    let f = inst.field;
    f.check(&cert.circuit.field)?;
    let p = eval_symbolic(&cert.circuit, cert.circuit.output(), budget)?;
    let d = p.degree().unwrap_or(0);
    if d > k {
        return Err(Error::invalid(format!(
            "certificate has degree {d}, above the stated bound {k}"
        )));
    }
    let yset = inst.yset();
    let axiom: BTreeMap<&Variable, &Polynomial> = inst.yvars.iter().zip(&inst.axioms).collect();
    let mut parts: BTreeMap<Variable, Polynomial> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut xs = Vec::new();
        let mut ys: Vec<(Variable, u32)> = Vec::new();
        for (v, e) in m.factors() {
            if yset.contains(v) {
                ys.push((v.clone(), *e));
            } else {
                xs.push((v.clone(), *e));
            }
        }
        let Some((keep, e0)) = ys.first().cloned() else {
            return Err(Error::invalid(format!(
                "monomial {m} has no axiom variable, so C(x, 0) ≠ 0"
            )));
        };
        let mut g = Polynomial::term(f, Monomial::from_factors(xs), c.clone());
        let rest = std::iter::once((keep.clone(), e0 - 1)).chain(ys.into_iter().skip(1));
        for (y, e) in rest {
            for _ in 0..e {
                let ax = axiom[&y];
                budget.charge(
                    (g.len() as u64).saturating_mul(ax.len() as u64),
                    "skewize expansion",
                )?;
                g = g.mul(ax)?;
            }
        }
        parts
            .entry(keep)
            .or_insert_with(|| Polynomial::zero(f))
            .add_scaled(&g, &f.one())?;
    }
    let mut b = CircuitBuilder::new(f);
    let mut terms = Vec::new();
    let mut top = 0u32;
    for (y, g) in &parts {
        for (m, c) in g.terms() {
            let mut acc = b.input(y.clone());
            for (v, e) in m.factors() {
                for _ in 0..*e {
                    let x = b.input(v.clone());
                    acc = b.mul(vec![x, acc]);
                }
            }
            terms.push(b.scale(c, acc));
            top = top.max(m.degree() + 1);
        }
    }
    let out = b.add(terms);
    let circuit = b.finish(vec![out]);
    Ok(Certificate::new(inst, circuit).with_claims(Some(true), Some(top)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, FieldTag};
    use crate::circuit::{check_skew, check_y_linear, eval_substituted};
    use crate::instances::gen_php;
    use crate::proofs_pc::tests::{php21_hand_proof, simple};
    use crate::proofs_pc::PcProof;

    fn verifies(inst: &Instance, cert: &Certificate) -> bool {
        let c = &cert.circuit;
        let mut bud = Budget::default();
        let zero = eval_substituted(c, c.output(), &inst.zero_substitution(), &mut bud).unwrap();
        let one = eval_substituted(c, c.output(), &inst.axiom_substitution(), &mut bud).unwrap();
        zero.is_zero() && one.is_one()
    }

    #[test]
    fn trivial_translation() {
        let q = FieldTag::Rationals;
        let inst = simple(q, &["x", "x - 1"], &["x"]);
        let mut proof = PcProof::default();
        proof.push(parse_polynomial(q, "x").unwrap(), Justification::Axiom(0));
        proof.push(
            parse_polynomial(q, "x - 1").unwrap(),
            Justification::Axiom(1),
        );
        proof.push(
            parse_polynomial(q, "1").unwrap(),
            Justification::LinComb(0, 1, q.one(), q.from_i64(-1)),
        );
        let cert = pc_to_ipslin(&inst, &proof, &mut Budget::default()).unwrap();
        let poly =
            eval_symbolic(&cert.circuit, cert.circuit.output(), &mut Budget::default()).unwrap();
        assert_eq!(poly, parse_polynomial(q, "y[1] - y[2]").unwrap());
        assert!(verifies(&inst, &cert));
    }

    #[test]
    fn php21_translation_is_linear_and_skew() {
        let inst = gen_php(1).unwrap();
        let cert = pc_to_ipslin(&inst, &php21_hand_proof(&inst), &mut Budget::default()).unwrap();
        assert!(verifies(&inst, &cert));
        let c = &cert.circuit;
        assert!(check_y_linear(c, c.output(), &inst.yset(), &mut Budget::default()).unwrap());
        assert!(check_skew(c));
        assert!(cert.claims.degree.unwrap() <= 2);
    }

    #[test]
    fn skewize_product_of_axiom_variables() {
        let q = FieldTag::Rationals;
        let inst = simple(q, &["x", "x - 1"], &["x"]);
        // y1·y2 − x·y2 vanishes under the axioms but has Y-degree 2.
        let p = parse_polynomial(q, "y[1] - y[2] + y[1]*y[2] - x*y[2]").unwrap();
        let mut b = CircuitBuilder::new(q);
        let g = b.polynomial(&p);
        let cert = Certificate::new(&inst, b.finish(vec![g]));
        assert!(verifies(&inst, &cert));
        let sk = skewize(&inst, &cert, 2, &mut Budget::default()).unwrap();
        assert!(verifies(&inst, &sk));
        assert!(check_skew(&sk.circuit));
        let c = &sk.circuit;
        assert!(check_y_linear(c, c.output(), &inst.yset(), &mut Budget::default()).unwrap());
        assert!(skewize(&inst, &cert, 1, &mut Budget::default()).is_err());
    }
}
