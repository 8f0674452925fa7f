//! ŷ-linear symmetric refutations of subset sum and its lifted form.
//!
//! With `f = −Σ_{k=0}^n k!/Π_{j=0}^k (β−j) · S_{n,k}` and
//! `p_i = −Σ_{k=1}^n k!/Π_{j=0}^k (β−j) · S_{n∖i,k−1}` one has
//! `f · (Σ x_i − β) − Σ_i (x_i² − x_i) · p_i = 1`. The lifted form
//! substitutes `z_i ↦ x_i y_i` and rewrites
//! `x_i² y_i² − x_i y_i = (x_i² − x_i) · y_i + (y_i² − y_i) · x_i²`, which
//! keeps the certificate linear in the axiom variables.

use std::collections::BTreeMap;

use crate::algebra::{elementary_symmetric, FieldTag, Monomial, Polynomial, Scalar, Variable};
use crate::circuit::{eval_symbolic, Budget, CircuitBuilder};
use crate::constructions::Certificate;
use crate::error::{Error, Result};
use crate::instances::{Family, Instance};
use crate::symmetry::DEFAULT_AUTOMORPHISM_CAP;

/// `k! / Π_{j=0}^k (β − j)` for `k = 0..=n`.
pub fn subset_sum_coefficients(field: FieldTag, n: usize, beta: &Scalar) -> Result<Vec<Scalar>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut fact = field.one();
    let mut denom = field.one();
    for k in 0..=n {
        if k > 0 {
            fact = field.mul(&fact, &field.from_i64(k as i64));
        }
        denom = field.mul(&denom, &field.sub(beta, &field.from_i64(k as i64)));
        out.push(
            field
                .div(&fact, &denom)
                .ok_or_else(|| Error::invalid("beta lies in {0..n}"))?,
        );
    }
    Ok(out)
}

/// The coefficient polynomials `f` and `p_1, …, p_n` over `vars`.
pub fn subset_sum_multipliers(
    field: FieldTag,
    beta: &Scalar,
    vars: &[Variable],
) -> Result<(Polynomial, Vec<Polynomial>)> {
    let n = vars.len();
    let c = subset_sum_coefficients(field, n, beta)?;
    let mut f = Polynomial::zero(field);
    for (k, ck) in c.iter().enumerate() {
        f.add_scaled(&elementary_symmetric(field, k, vars)?, &field.neg(ck))?;
    }
    let mut ps = Vec::with_capacity(n);
    for i in 0..n {
        let rest: Vec<Variable> = vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut p = Polynomial::zero(field);
        for (k, ck) in c.iter().enumerate().skip(1) {
            p.add_scaled(&elementary_symmetric(field, k - 1, &rest)?, &field.neg(ck))?;
        }
        ps.push(p);
    }
    Ok((f, ps))
}

fn params(inst: &Instance) -> Result<(usize, Scalar, bool)> {
    match &inst.family {
        Family::SubsetSum { n, beta, lifted } => {
            let digits = beta.split("mod").next().unwrap_or(beta);
            Ok((*n, inst.field.parse(digits)?, *lifted))
        }
        other => Err(Error::invalid(format!(
            "expected a subset-sum instance, got '{other}'"
        ))),
    }
}

/// `y_0 · f − Σ_i y_i · p_i`, or its lifted counterpart. The elementary
/// symmetric polynomials are emitted as expanded monomial sums.
pub fn build_subsetsum(inst: &Instance, budget: &mut Budget) -> Result<Certificate> {
    let (n, beta, lifted) = params(inst)?;
    let field = inst.field;
    let xs: Vec<Variable> = (1..=n as i64).map(|i| Variable::new("x", &[i])).collect();
    let zs: Vec<Variable> = (1..=n as i64).map(|i| Variable::new("z", &[i])).collect();
    let (f, ps) = subset_sum_multipliers(field, &beta, &zs)?;
    let lift: BTreeMap<Variable, Polynomial> = zs
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let m = if lifted {
                Monomial::var(xs[i].clone())
                    .mul(&Monomial::var(Variable::new("y", &[i as i64 + 1])))
            } else {
                Monomial::var(xs[i].clone())
            };
            (z.clone(), Polynomial::monomial(field, m))
        })
        .collect();
    let f = f.substitute(&lift)?;
    let mut b = CircuitBuilder::new(field);
    let mut parts = Vec::new();
    let y0 = b.input(inst.yvars[0].clone());
    let fg = b.polynomial(&f);
    parts.push(b.mul(vec![y0, fg]));
    let minus = field.from_i64(-1);
    for (i, p) in ps.iter().enumerate() {
        let p = p.substitute(&lift)?;
        let pg = b.polynomial(&p);
        let pg = b.scale(&minus, pg);
        if lifted {
            let x = b.input(xs[i].clone());
            let y = b.input(Variable::new("y", &[i as i64 + 1]));
            let bx = b.input(inst.yvars[1 + i].clone());
            let by = b.input(inst.yvars[1 + n + i].clone());
            let t1 = b.mul(vec![bx, y]);
            let t2 = b.mul(vec![by, x, x]);
            let s = b.add(vec![t1, t2]);
            parts.push(b.mul(vec![s, pg]));
        } else {
            let yi = b.input(inst.yvars[1 + i].clone());
            parts.push(b.mul(vec![yi, pg]));
        }
    }
    let out = b.add(parts);
    let circuit = b.finish(vec![out]);
    let deg = eval_symbolic(&circuit, circuit.output(), budget)?.degree();
    let mut cert = Certificate::new(inst, circuit).with_claims(Some(true), deg);
    cert.attach_symmetry(inst, DEFAULT_AUTOMORPHISM_CAP)?;
    cert.notes
        .push("elementary symmetric polynomials expanded as monomial sums".into());
    if lifted {
        cert.notes
            .push("Boolean terms use (x^2 - x) y + (y^2 - y) x^2 = x^2 y^2 - x y".into());
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;
    use crate::circuit::{check_y_linear, eval_substituted};
    use crate::instances::gen_subset_sum;

    fn verifies(inst: &Instance, cert: &Certificate) -> bool {
        let c = &cert.circuit;
        let mut bud = Budget::default();
        let zero = eval_substituted(c, c.output(), &inst.zero_substitution(), &mut bud).unwrap();
        let one = eval_substituted(c, c.output(), &inst.axiom_substitution(), &mut bud).unwrap();
        zero.is_zero() && one.is_one()
    }

    #[test]
    fn multiplier_for_two_variables() {
        let q = FieldTag::Rationals;
        let xs: Vec<Variable> = (1..=2).map(|i| Variable::new("x", &[i])).collect();
        let (f, _) = subset_sum_multipliers(q, &q.from_i64(3), &xs).unwrap();
        let want = parse_polynomial(q, "-1/3 - 1/6*x[1] - 1/6*x[2] - 1/3*x[1]*x[2]").unwrap();
        assert_eq!(f, want);
    }

    #[test]
    fn plain_and_lifted_verify() {
        let q = FieldTag::Rationals;
        for n in 1..=5 {
            for lifted in [false, true] {
                let inst = gen_subset_sum(n, q, &q.from_i64(n as i64 + 1), lifted).unwrap();
                let cert = build_subsetsum(&inst, &mut Budget::default()).unwrap();
                assert!(verifies(&inst, &cert), "n={n} lifted={lifted}");
                let c = &cert.circuit;
                assert!(
                    check_y_linear(c, c.output(), &inst.yset(), &mut Budget::default()).unwrap()
                );
                assert_eq!(cert.claims.group.as_deref(), Some("instance"));
            }
        }
    }

    #[test]
    fn prime_field_and_fractional_beta() {
        let f7 = FieldTag::Prime(7);
        let inst = gen_subset_sum(3, f7, &f7.from_i64(5), false).unwrap();
        assert!(verifies(
            &inst,
            &build_subsetsum(&inst, &mut Budget::default()).unwrap()
        ));
        let q = FieldTag::Rationals;
        let inst = gen_subset_sum(3, q, &q.ratio(1, 2).unwrap(), true).unwrap();
        assert!(verifies(
            &inst,
            &build_subsetsum(&inst, &mut Budget::default()).unwrap()
        ));
    }

    #[test]
    fn degree_is_n_plus_one() {
        let q = FieldTag::Rationals;
        let inst = gen_subset_sum(4, q, &q.from_i64(5), false).unwrap();
        let cert = build_subsetsum(&inst, &mut Budget::default()).unwrap();
        assert_eq!(cert.claims.degree, Some(5));
    }
}
