//! Degree-bounded saturation search for polynomial-calculus refutations.
//!
//! The span of derivable degree-≤k lines is kept in semi-echelon form: every
//! basis polynomial is monic with a distinct leading monomial in graded
//! order. Because the order is graded, a span element of degree `d` only
//! involves basis elements of degree ≤ `d`, so multiplying each basis element
//! of degree < k by each variable closes the span under the multiplication
//! rule. The search ends when the constant 1 becomes a leading monomial or the
//! queue of unexpanded basis elements empties.

use std::collections::{BTreeMap, VecDeque};

use super::{Justification, PcProof};
use crate::algebra::{Monomial, Polynomial, Scalar, Variable};
use crate::circuit::Budget;
use crate::error::{Error, Result};
use crate::instances::Instance;

enum Origin {
    Axiom(usize),
    Mult(usize, Variable),
}

/// `poly = scale · (origin + Σ c_j · basis_j)`, replayed only on success.
struct BasisElem {
    poly: Polynomial,
    origin: Origin,
    steps: Vec<(usize, Scalar)>,
    scale: Scalar,
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

/// Returns a checked-valid proof of degree ≤ `k`, or `None` if 1 is not
/// derivable within degree `k`.
pub fn pc_search_bounded_degree(
    inst: &Instance,
    k: u32,
    budget: &mut Budget,
) -> Result<Option<PcProof>> {
    let f = inst.field;
    let n = inst.xvars.len() as u64;
    let dim = binomial(n + k as u64, k as u64).unwrap_or(u64::MAX);
    if dim > budget.limit.saturating_sub(budget.used) {
        return Err(Error::BudgetExceeded {
            limit: budget.limit,
            context: format!("degree-{k} monomial space has dimension {dim}"),
        });
    }
    let mut basis: Vec<BasisElem> = Vec::new();
    let mut pivots: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    // Reduces `p` by leading terms; returns the new basis index if it survives.
    let insert = |p: Polynomial,
                  origin: Origin,
                  basis: &mut Vec<BasisElem>,
                  pivots: &mut BTreeMap<Monomial, usize>,
                  budget: &mut Budget|
     -> Result<Option<usize>> {
        let mut cur = p;
        let mut steps = Vec::new();
        loop {
            let Some((lm, lc)) = cur.leading() else {
                return Ok(None);
            };
            let Some(&j) = pivots.get(lm) else { break };
            let c = f.neg(lc);
            budget.charge(basis[j].poly.len() as u64, "degree-bounded saturation")?;
            cur.add_scaled(&basis[j].poly, &c)?;
            steps.push((j, c));
        }
        let (lm, lc) = cur.leading().expect("nonzero");
        let lm = lm.clone();
        let scale = f.inv(lc).expect("nonzero leading coefficient");
        let poly = cur.scale(&scale);
        basis.push(BasisElem {
            poly,
            origin,
            steps,
            scale,
        });
        pivots.insert(lm, basis.len() - 1);
        Ok(Some(basis.len() - 1))
    };

    let mut found = None;
    for (i, a) in inst.axioms.iter().enumerate() {
        if a.degree().unwrap_or(0) > k {
            continue;
        }
        if let Some(t) = insert(a.clone(), Origin::Axiom(i), &mut basis, &mut pivots, budget)? {
            if basis[t].poly.is_one() {
                found = Some(t);
                break;
            }
            queue.push_back(t);
        }
    }
    'outer: while found.is_none() {
        let Some(j) = queue.pop_front() else { break };
        if basis[j].poly.degree().unwrap_or(0) >= k {
            continue;
        }
        for v in &inst.xvars {
            let p = basis[j].poly.mul_monomial(&Monomial::var(v.clone()));
            budget.charge(p.len() as u64, "degree-bounded saturation")?;
            if let Some(t) = insert(
                p,
                Origin::Mult(j, v.clone()),
                &mut basis,
                &mut pivots,
                budget,
            )? {
                if basis[t].poly.is_one() {
                    found = Some(t);
                    break 'outer;
                }
                queue.push_back(t);
            }
        }
    }
    Ok(found.map(|t| replay(inst, &basis, t)))
}

/// Emits only the derivations the target depends on, in creation order.
fn replay(inst: &Instance, basis: &[BasisElem], target: usize) -> PcProof {
    let f = inst.field;
    let mut needed = vec![false; basis.len()];
    let mut stack = vec![target];
    while let Some(t) = stack.pop() {
        if std::mem::replace(&mut needed[t], true) {
            continue;
        }
        if let Origin::Mult(j, _) = &basis[t].origin {
            stack.push(*j);
        }
        stack.extend(basis[t].steps.iter().map(|(j, _)| *j));
    }
    let mut proof = PcProof::default();
    let mut line_of = vec![usize::MAX; basis.len()];
    for t in (0..basis.len()).filter(|&t| needed[t]) {
        let e = &basis[t];
        let (mut cur, mut poly) = match &e.origin {
            Origin::Axiom(i) => {
                let p = inst.axioms[*i].clone();
                (proof.push(p.clone(), Justification::Axiom(*i)), p)
            }
            Origin::Mult(j, v) => {
                let p = basis[*j].poly.mul_monomial(&Monomial::var(v.clone()));
                (
                    proof.push(p.clone(), Justification::Mult(line_of[*j], v.clone())),
                    p,
                )
            }
        };
        for (j, c) in &e.steps {
            poly.add_scaled(&basis[*j].poly, c).expect("same field");
            cur = proof.push(
                poly.clone(),
                Justification::LinComb(cur, line_of[*j], f.one(), c.clone()),
            );
        }
        if !f.is_one(&e.scale) {
            poly = poly.scale(&e.scale);
            cur = proof.push(
                poly.clone(),
                Justification::LinComb(cur, cur, e.scale.clone(), f.zero()),
            );
        }
        debug_assert_eq!(poly, e.poly);
        line_of[t] = cur;
    }
    proof
}
