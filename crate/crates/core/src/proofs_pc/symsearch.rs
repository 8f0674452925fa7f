//! Exact search for group-symmetric ŷ-linear certificates of bounded degree.
//!
//! Unknowns are orbits of monomials `y_i · m` (with `m` over `X`, `deg m ≤ d`)
//! under the induced group, so every candidate is symmetric by construction.
//! The identity `Σ_O u_O Σ_{y_i m ∈ O} m · f_i = 1` is imposed coefficient by
//! coefficient and solved exactly.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Monomial, Polynomial, Scalar, Variable};
use crate::circuit::{Budget, CircuitBuilder};
use crate::constructions::Certificate;
use crate::error::Result;
use crate::instances::Instance;
use crate::linalg::{LinearSystem, Solution, SparseRow};
use crate::symmetry::{GroupPresentation, DEFAULT_AUTOMORPHISM_CAP};

#[derive(Clone, Debug)]
pub enum SymLinearOutcome {
    /// A certificate of the lowest X-degree `degree ≤ d` that admits one.
    Found {
        certificate: Certificate,
        degree: u32,
    },
    /// No symmetric ŷ-linear certificate with X-degree ≤ `degree` exists.
    /// `dual` assigns a weight to monomials with `Σ_{y_i m ∈ O} L(m·f_i) = 0`
    /// for every orbit `O` but `L(1) ≠ 0`.
    Infeasible {
        degree: u32,
        unknowns: usize,
        equations: usize,
        dual: Vec<(Monomial, Scalar)>,
    },
}

/// All monomials over `vars` of degree at most `d`.
pub fn monomials_up_to(vars: &[Variable], d: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let m2 = m.mul(&Monomial::var(v.clone()));
                out.push(m2.clone());
                next.push((m2, i));
            }
        }
        frontier = next;
    }
    out
}

struct Setup {
    system: LinearSystem,
    orbits: Vec<Vec<(usize, Monomial)>>,
    rows: Vec<Monomial>,
}

fn setup(
    inst: &Instance,
    induced: &GroupPresentation,
    d: u32,
    budget: &mut Budget,
) -> Result<Setup> {
    let f = inst.field;
    let monos = monomials_up_to(&inst.xvars, d);
    budget.charge(
        (monos.len() * inst.axioms.len()) as u64,
        "symmetric linear search setup",
    )?;
    let ypos: BTreeMap<&Variable, usize> =
        inst.yvars.iter().enumerate().map(|(i, y)| (y, i)).collect();
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut orbits = Vec::new();
    for i in 0..inst.axioms.len() {
        for m in &monos {
            let full = m.mul(&Monomial::var(inst.yvars[i].clone()));
            if seen.contains(&full) {
                continue;
            }
            let orbit = induced.orbit_monomial(&full)?;
            let mut members = Vec::with_capacity(orbit.len());
            for o in orbit {
                let y = o
                    .variables()
                    .find(|v| ypos.contains_key(v))
                    .expect("orbit preserves the axiom variable")
                    .clone();
                let xm =
                    Monomial::from_factors(o.factors().iter().filter(|(v, _)| *v != y).cloned());
                members.push((ypos[&y], xm));
                seen.insert(o);
            }
            orbits.push(members);
        }
    }
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut rows: Vec<Monomial> = vec![Monomial::one()];
    row_of.insert(Monomial::one(), 0);
    let mut entries: Vec<SparseRow> = vec![SparseRow::new()];
    for (col, members) in orbits.iter().enumerate() {
        let mut column = Polynomial::zero(f);
        for (i, m) in members {
            let prod = inst.axioms[*i].mul_monomial(m);
            budget.charge(prod.len() as u64, "symmetric linear search setup")?;
            column.add_scaled(&prod, &f.one())?;
        }
        for (m, c) in column.terms() {
            let r = *row_of.entry(m.clone()).or_insert_with(|| {
                rows.push(m.clone());
                entries.push(SparseRow::new());
                rows.len() - 1
            });
            entries[r].insert(col, c.clone());
        }
    }
    let mut system = LinearSystem::new(f, orbits.len());
    for (r, row) in entries.into_iter().enumerate() {
        let rhs = if r == 0 { f.one() } else { f.zero() };
        system.push_row(row, rhs);
    }
    Ok(Setup {
        system,
        orbits,
        rows,
    })
}

/// Searches for a `group`-symmetric ŷ-linear certificate with X-degree ≤ `d`.
/// On success the lowest feasible degree is used.
pub fn sym_linear_certificate_search(
    inst: &Instance,
    group: &GroupPresentation,
    d: u32,
    budget: &mut Budget,
) -> Result<SymLinearOutcome> {
    let sym = inst.with_group(group.clone())?;
    let top = setup(&sym, &sym.induced, d, budget)?;
    let u_top = match top.system.solve(budget)? {
        Solution::Feasible(u) => u,
        Solution::Infeasible(w) => {
            return Ok(SymLinearOutcome::Infeasible {
                degree: d,
                unknowns: top.orbits.len(),
                equations: top.rows.len(),
                dual: w
                    .into_iter()
                    .map(|(r, c)| (top.rows[r].clone(), c))
                    .collect(),
            })
        }
    };
    for deg in 0..d {
        let low = setup(&sym, &sym.induced, deg, budget)?;
        if let Solution::Feasible(u) = low.system.solve(budget)? {
            return Ok(found(&sym, inst, &low, &u, deg));
        }
    }
    Ok(found(&sym, inst, &top, &u_top, d))
}

fn found(sym: &Instance, inst: &Instance, s: &Setup, u: &[Scalar], deg: u32) -> SymLinearOutcome {
    let f = inst.field;
    let mut poly = Polynomial::zero(f);
    for (col, members) in s.orbits.iter().enumerate() {
        if f.is_zero(&u[col]) {
            continue;
        }
        for (i, m) in members {
            poly.add_term(m.mul(&Monomial::var(sym.yvars[*i].clone())), u[col].clone());
        }
    }
    let mut b = CircuitBuilder::new(f);
    let g = b.polynomial(&poly);
    let mut cert = Certificate::new(inst, b.finish(vec![g])).with_claims(Some(true), poly.degree());
    // Coefficients are constant on orbits, so witnesses derive structurally.
    let _ = cert.attach_symmetry(sym, DEFAULT_AUTOMORPHISM_CAP);
    if sym.group != inst.group {
        cert.claims.group = Some(if cert.claims.group.as_deref() == Some("instance") {
            "searched".into()
        } else {
            "none".into()
        });
        cert.circuit.witnesses.clear();
    }
    SymLinearOutcome::Found {
        certificate: cert,
        degree: deg,
    }
}
