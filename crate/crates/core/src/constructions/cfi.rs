//! Refutations of the twisted CFI system `CFI(G, u, 1)` over 𝔽₂.
//!
//! * [`build_cfi_mu`] — a polynomial-size, non-ŷ-linear certificate that
//!   combines per-vertex parity gadgets `τ(v)`, `τ̃(v)` into running parity
//!   aggregates `μ_i`, `μ̃_i` along the vertex order.
//! * [`build_cfi_linear`] — a ŷ-linear certificate of size `O(2^|E|)` made of
//!   a telescoping sum `B` and one cancelling block `C_i` per vertex.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{FieldTag, Monomial, Polynomial, Variable};
use crate::circuit::{eval_substituted, eval_symbolic, Budget, CircuitBuilder};
use crate::constructions::Certificate;
use crate::error::{Error, Result};
use crate::instances::{Family, GraphInput, Instance};
use crate::linalg::{LinearSystem, Solution, SparseRow};
use crate::proofs_pc::monomials_up_to;
use crate::symmetry::DEFAULT_AUTOMORPHISM_CAP;

const F: FieldTag = FieldTag::F2;

fn xv(e: usize, i: usize) -> Variable {
    Variable::new("x", &[e as i64, i as i64])
}

fn y_vertex(v: usize, t: [usize; 3]) -> Variable {
    Variable::new("yV", &[v as i64, t[0] as i64, t[1] as i64, t[2] as i64])
}

fn y_edge(e: usize) -> Variable {
    Variable::new("yEdge", &[e as i64])
}

fn y_bool(e: usize, i: usize) -> Variable {
    Variable::new("yBool", &[e as i64, i as i64])
}

/// The base graph and special vertex of a twisted CFI instance.
fn cfi_params(inst: &Instance) -> Result<(GraphInput, usize)> {
    match &inst.family {
        Family::Cfi {
            vertices,
            edges,
            u,
            a: 1,
        } => Ok((GraphInput::new(*vertices, edges), *u)),
        Family::Cfi { .. } => Err(Error::invalid(
            "the construction needs the twisted system (a = 1)",
        )),
        other => Err(Error::invalid(format!(
            "expected a CFI instance, got '{other}'"
        ))),
    }
}

/// The four local assignments `(i, j, k)` with `i + j + k ≡ parity`.
fn triples(parity: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                if (i + j + k) % 2 == parity {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

/// `x^e_i x^f_j x^g_k` for the incident edges `[e, f, g]`.
fn local_monomial(inc: &[usize], t: [usize; 3]) -> Monomial {
    Monomial::from_factors((0..3).map(|p| (xv(inc[p], t[p]), 1)))
}

/// The action of flipping the edge set `s` on a CFI variable.
fn flip(g: &GraphInput, s: &BTreeSet<usize>, v: &Variable) -> Variable {
    let idx = v.index();
    match v.namespace() {
        "x" | "yBool" if s.contains(&(idx[0] as usize)) => v.with_index(&[idx[0], 1 - idx[1]]),
        "yV" => {
            let inc = g.incident(idx[0] as usize);
            let mut t = idx.to_vec();
            for p in 0..3 {
                if s.contains(&inc[p]) {
                    t[p + 1] = 1 - t[p + 1];
                }
            }
            v.with_index(&t)
        }
        _ => v.clone(),
    }
}

/// The sum of the distinct images of `m` under flips of an even number of
/// edges at `v`; every group element restricts to one of these flips.
fn local_orbit_sum(g: &GraphInput, v: usize, m: &Monomial) -> Result<Polynomial> {
    let inc = g.incident(v);
    let mut images = BTreeSet::new();
    for pair in [[0, 1], [0, 2], [1, 2]].iter().map(Some).chain([None]) {
        let s: BTreeSet<usize> = pair
            .map(|p| p.iter().map(|&k| inc[k]).collect())
            .unwrap_or_default();
        images.insert(m.rename(&mut |x| Ok(flip(g, &s, x)))?);
    }
    Ok(Polynomial::from_terms(
        F,
        images.into_iter().map(|m| (m, F.one())),
    ))
}

/// One candidate correction: `poly` is a y-polynomial added as is, or
/// `C_{a01} · poly` when `edge` is set.
struct Column {
    edge: Option<usize>,
    poly: Polynomial,
    substituted: Polynomial,
}

struct Gadgets {
    g: GraphInput,
    u: usize,
    axioms: BTreeMap<Variable, Polynomial>,
    e01: BTreeMap<usize, usize>,
}

impl Gadgets {
    fn new(inst: &Instance) -> Result<Self> {
        let (g, u) = cfi_params(inst)?;
        Ok(Gadgets {
            g,
            u,
            axioms: inst.axiom_substitution(),
            e01: BTreeMap::new(),
        })
    }

    fn substitute(&self, p: &Polynomial) -> Result<Polynomial> {
        p.substitute(&self.axioms)
    }

    /// `y^e·x^e_0 x^e_1 + yBool[e,0]·x^e_1 + yBool[e,1]·x^e_0`, which becomes
    /// `x^e_0 x^e_1` under the axioms and is fixed by flipping `e`.
    fn e01_polynomial(e: usize) -> Polynomial {
        let m = |vs: &[Variable]| Monomial::from_factors(vs.iter().map(|v| (v.clone(), 1)));
        Polynomial::from_terms(
            F,
            [
                (m(&[y_edge(e), xv(e, 0), xv(e, 1)]), F.one()),
                (m(&[y_bool(e, 0), xv(e, 1)]), F.one()),
                (m(&[y_bool(e, 1), xv(e, 0)]), F.one()),
            ],
        )
    }

    fn e01_gate(&mut self, b: &mut CircuitBuilder, e: usize) -> usize {
        *self
            .e01
            .entry(e)
            .or_insert_with(|| b.polynomial(&Self::e01_polynomial(e)))
    }

    /// The gadget computing `τ(v)` (`tilde = false`) or `τ̃(v)` under the
    /// axioms and vanishing at `y = 0`.
    ///
    /// It starts from the product of the four vertex axioms of the relevant
    /// parity class and adds symmetric corrections of the kinds the
    /// multilinearisation argument uses: Boolean-axiom multiples, edge-axiom
    /// products `y^a y^b` and `y^a`, and multiples of `C_{a01}`. The
    /// correction coefficients are found by solving over 𝔽₂; the resulting
    /// identity is re-checked by expansion before the gadget is returned.
    fn vertex(&mut self, b: &mut CircuitBuilder, v: usize, tilde: bool) -> Result<usize> {
        let inc = self.g.incident(v);
        let special = v == self.u;
        let parity = usize::from(special == tilde);
        let class = triples(parity);
        let mut target = Polynomial::zero(F);
        for t in &class {
            target.add_term(local_monomial(&inc, *t), F.one());
        }
        if !tilde {
            target.add_term(Monomial::one(), F.one());
        }
        let ys: Vec<Variable> = class.iter().map(|t| y_vertex(v, *t)).collect();
        let prime_poly =
            Polynomial::monomial(F, Monomial::from_factors(ys.iter().map(|y| (y.clone(), 1))));
        let prime_sub = self.substitute(&prime_poly)?;
        let residual = target.sub(&prime_sub)?;

        let columns = self.columns(v, &inc)?;
        let chosen = solve_columns(&columns, &residual)?.ok_or_else(|| {
            Error::Construction(format!("no symmetric correction for vertex {v}"))
        })?;

        let mut plain = Polynomial::zero(F);
        let mut per_edge: BTreeMap<usize, Polynomial> = BTreeMap::new();
        let mut check = prime_sub;
        for &c in &chosen {
            let col = &columns[c];
            check.add_scaled(&col.substituted, &F.one())?;
            match col.edge {
                None => plain.add_scaled(&col.poly, &F.one())?,
                Some(a) => per_edge
                    .entry(a)
                    .or_insert_with(|| Polynomial::zero(F))
                    .add_scaled(&col.poly, &F.one())?,
            }
        }
        // Independent re-expansion of the assembled gadget.
        let mut expanded = self
            .substitute(&prime_poly)?
            .add(&self.substitute(&plain)?)?;
        for (a, q) in &per_edge {
            expanded.add_scaled(
                &self.substitute(&Self::e01_polynomial(*a))?.mul(q)?,
                &F.one(),
            )?;
        }
        if expanded != target || check != target {
            return Err(Error::Construction(format!(
                "gadget for vertex {v} ({}) does not reduce to its target",
                if tilde { "odd" } else { "even" }
            )));
        }

        let mut parts = Vec::new();
        let ins: Vec<usize> = ys.iter().map(|y| b.input(y.clone())).collect();
        parts.push(b.mul(ins));
        if !plain.is_zero() {
            parts.push(b.polynomial(&plain));
        }
        for (a, q) in &per_edge {
            if q.is_zero() {
                continue;
            }
            let c = self.e01_gate(b, *a);
            if q.is_one() {
                parts.push(c);
            } else {
                let qg = b.polynomial(q);
                parts.push(b.mul(vec![c, qg]));
            }
        }
        Ok(b.add(parts))
    }

    fn columns(&self, v: usize, inc: &[usize]) -> Result<Vec<Column>> {
        let local_x: Vec<Variable> = inc.iter().flat_map(|&e| [xv(e, 0), xv(e, 1)]).collect();
        let monos = monomials_up_to(&local_x, 2);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |edge: Option<usize>, poly: Polynomial, substituted: Polynomial| {
            if seen.insert((edge, poly.to_string())) {
                out.push(Column {
                    edge,
                    poly,
                    substituted,
                });
            }
        };
        for &a in inc {
            for i in 0..2 {
                for m in &monos {
                    let t = m.mul(&Monomial::var(y_bool(a, i)));
                    let p = local_orbit_sum(&self.g, v, &t)?;
                    let s = self.substitute(&p)?;
                    push(None, p, s);
                }
            }
        }
        for (p, &a) in inc.iter().enumerate() {
            let ya = Polynomial::var(F, y_edge(a));
            push(None, ya.clone(), self.substitute(&ya)?);
            for &b in &inc[p + 1..] {
                let yab = ya.mul(&Polynomial::var(F, y_edge(b)))?;
                push(None, yab.clone(), self.substitute(&yab)?);
            }
        }
        for &a in inc {
            let e01 =
                Polynomial::monomial(F, Monomial::from_factors([(xv(a, 0), 1), (xv(a, 1), 1)]));
            for m in &monos {
                let q = local_orbit_sum(&self.g, v, m)?;
                let s = e01.mul(&q)?;
                push(Some(a), q, s);
            }
        }
        Ok(out)
    }
}

/// A set of columns whose substituted polynomials sum to `target`.
fn solve_columns(columns: &[Column], target: &Polynomial) -> Result<Option<Vec<usize>>> {
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut rows: Vec<SparseRow> = Vec::new();
    let mut row = |m: &Monomial, rows: &mut Vec<SparseRow>| -> usize {
        *row_of.entry(m.clone()).or_insert_with(|| {
            rows.push(SparseRow::new());
            rows.len() - 1
        })
    };
    for (c, col) in columns.iter().enumerate() {
        for (m, k) in col.substituted.terms() {
            let r = row(m, &mut rows);
            rows[r].insert(c, k.clone());
        }
    }
    let mut rhs = vec![F.zero(); rows.len()];
    for (m, k) in target.terms() {
        let r = row(m, &mut rows);
        rhs.resize(rows.len(), F.zero());
        rhs[r] = k.clone();
    }
    let mut sys = LinearSystem::new(F, columns.len());
    for (r, entries) in rows.into_iter().enumerate() {
        sys.push_row(entries, rhs[r].clone());
    }
    Ok(match sys.solve(&mut Budget::default())? {
        Solution::Feasible(u) => Some((0..columns.len()).filter(|&c| !F.is_zero(&u[c])).collect()),
        Solution::Infeasible(_) => None,
    })
}

/// Builds the gates `μ_1, …, μ_n` along the vertex order.
fn mu_gates(inst: &Instance, b: &mut CircuitBuilder) -> Result<Vec<usize>> {
    let mut gad = Gadgets::new(inst)?;
    let n = gad.g.vertices;
    let mut mu = gad.vertex(b, 0, false)?;
    let mut mu_t = gad.vertex(b, 0, true)?;
    let mut stages = vec![mu];
    for v in 1..n {
        let tau = gad.vertex(b, v, false)?;
        let tau_t = gad.vertex(b, v, true)?;
        let p1 = b.mul(vec![mu, tau]);
        let p2 = b.mul(vec![mu_t, tau_t]);
        let next = b.add(vec![p1, mu, tau, p2]);
        let q1 = b.mul(vec![mu, tau_t]);
        let q2 = b.mul(vec![mu_t, tau]);
        let next_t = b.add(vec![q1, tau_t, q2, mu_t]);
        mu = next;
        mu_t = next_t;
        stages.push(mu);
    }
    Ok(stages)
}

/// The non-ŷ-linear symmetric refutation whose output gate is `μ_n`.
pub fn build_cfi_mu(inst: &Instance) -> Result<Certificate> {
    let mut b = CircuitBuilder::new(F);
    let stages = mu_gates(inst, &mut b)?;
    let out = *stages.last().expect("at least one vertex");
    let mut cert = Certificate::new(inst, b.finish(vec![out])).with_claims(Some(false), None);
    cert.attach_symmetry(inst, DEFAULT_AUTOMORPHISM_CAP)?;
    cert.notes
        .push("parity aggregation along the input vertex order".into());
    Ok(cert)
}

/// `μ_1, …, μ_n` with the axioms substituted, for checking against the
/// assignment-enumeration formula.
pub fn cfi_mu_stages(inst: &Instance, budget: &mut Budget) -> Result<Vec<Polynomial>> {
    let mut b = CircuitBuilder::new(F);
    let stages = mu_gates(inst, &mut b)?;
    let c = b.finish(stages);
    let sigma = inst.axiom_substitution();
    c.outputs
        .iter()
        .map(|&o| eval_substituted(&c, o, &sigma, budget))
        .collect()
}

/// Total edge assignments grouped by the first vertex (in input order)
/// whose parity equation they satisfy; entry `i` lists, per satisfying
/// local assignment at `v_i`, the monomials of the remaining edges.
pub struct AssignmentClasses {
    pub classes: Vec<BTreeMap<[usize; 3], Vec<Monomial>>>,
}

impl AssignmentClasses {
    pub fn sizes(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| c.values().map(Vec::len).sum())
            .collect()
    }
}

/// Whether the total assignment `mask` (bit `e` = value of edge `e`) solves
/// the parity equation at `v` (odd at `u`, even elsewhere).
pub fn solves_parity(g: &GraphInput, u: usize, v: usize, mask: u64) -> bool {
    let s: u64 = g.incident(v).iter().map(|&e| (mask >> e) & 1).sum();
    (s + u64::from(v == u)).is_multiple_of(2)
}

pub fn assignment_classes(inst: &Instance, budget: &mut Budget) -> Result<AssignmentClasses> {
    let (g, u) = cfi_params(inst)?;
    let m = g.edges.len();
    if m >= 40 {
        return Err(Error::budget(
            budget.limit,
            format!("2^{m} edge assignments"),
        ));
    }
    budget.charge((1u64 << m) * m as u64, "edge assignment enumeration")?;
    let mut classes = vec![BTreeMap::new(); g.vertices];
    for mask in 0u64..(1 << m) {
        let Some(i) = (0..g.vertices).find(|&v| solves_parity(&g, u, v, mask)) else {
            return Err(Error::Construction(format!(
                "assignment {mask:b} solves no parity equation"
            )));
        };
        let inc = g.incident(i);
        let t = [0, 1, 2].map(|p| ((mask >> inc[p]) & 1) as usize);
        let rest = Monomial::from_factors(
            (0..m)
                .filter(|e| !inc.contains(e))
                .map(|e| (xv(e, ((mask >> e) & 1) as usize), 1)),
        );
        classes[i].entry(t).or_insert_with(Vec::new).push(rest);
    }
    Ok(AssignmentClasses { classes })
}

/// The ŷ-linear symmetric refutation `B + Σ_i C_i`.
pub fn build_cfi_linear(inst: &Instance, budget: &mut Budget) -> Result<Certificate> {
    let (g, u) = cfi_params(inst)?;
    let classes = assignment_classes(inst, budget)?;
    let m = g.edges.len();
    let mut b = CircuitBuilder::new(F);
    let mut parts = Vec::new();

    // Telescoping part: y^{e_1} + Σ_t y^{e_t} · Π_{s<t} (x^{e_s}_0 + x^{e_s}_1).
    let sums: Vec<usize> = (0..m)
        .map(|e| {
            let a = b.input(xv(e, 0));
            let c = b.input(xv(e, 1));
            b.add(vec![a, c])
        })
        .collect();
    parts.push(b.input(y_edge(0)));
    let mut prefix = None;
    for t in 1..m {
        let p = match prefix {
            None => sums[0],
            Some(p) => b.mul(vec![p, sums[t - 1]]),
        };
        prefix = Some(p);
        let y = b.input(y_edge(t));
        parts.push(b.mul(vec![y, p]));
    }

    // Cancelling blocks, one per vertex class.
    for (i, class) in classes.classes.iter().enumerate() {
        let inc = g.incident(i);
        for t in triples(usize::from(i == u)) {
            let Some(rest) = class.get(&t) else { continue };
            let a_prime = b.polynomial(&Polynomial::from_terms(
                F,
                rest.iter().map(|m| (m.clone(), F.one())),
            ));
            let xs: Vec<usize> = (0..3).map(|p| b.input(xv(inc[p], t[p]))).collect();
            let mut ch = xs.clone();
            ch.push(a_prime);
            let a_full = b.mul(ch);
            let yv = b.input(y_vertex(i, t));
            let main = b.mul(vec![a_full, yv]);
            let mut bools = Vec::new();
            for p in 0..3 {
                let yb = b.input(y_bool(inc[p], t[p]));
                let others: Vec<usize> = (0..3).filter(|&q| q != p).map(|q| xs[q]).collect();
                bools.push(b.mul(vec![yb, others[0], others[1]]));
            }
            let bool_sum = b.add(bools);
            let fix = b.mul(vec![a_prime, bool_sum]);
            parts.push(main);
            parts.push(fix);
        }
    }
    let out = b.add(parts);
    let circuit = b.finish(vec![out]);
    let deg = eval_symbolic(&circuit, circuit.output(), budget)
        .ok()
        .and_then(|p| p.degree());
    let mut cert = Certificate::new(inst, circuit).with_claims(Some(true), deg);
    cert.attach_symmetry(inst, DEFAULT_AUTOMORPHISM_CAP)?;
    cert.notes
        .push("telescoping edge sum plus per-vertex cancellation blocks".into());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::check_y_linear;
    use crate::instances::gen_cfi;
    use crate::symmetry::verify_witness;

    fn verifies(inst: &Instance, cert: &Certificate) -> bool {
        let c = &cert.circuit;
        let mut bud = Budget::default();
        let zero = eval_substituted(c, c.output(), &inst.zero_substitution(), &mut bud).unwrap();
        let one = eval_substituted(c, c.output(), &inst.axiom_substitution(), &mut bud).unwrap();
        zero.is_zero() && one.is_one()
    }

    fn witnesses_hold(inst: &Instance, cert: &Certificate) -> bool {
        let inputs = cert.circuit.input_variables();
        inst.induced.generators.iter().enumerate().all(|(i, g)| {
            cert.circuit
                .witnesses
                .get(&i)
                .is_some_and(|w| verify_witness(&cert.circuit, &g.extended(&inputs), w))
        })
    }

    /// `Σ_{λ ∈ Sol_0(W_i)} Π_e (x^e_{λ(e)})^{κ(e)} + 1` by direct enumeration.
    fn mu_oracle(g: &GraphInput, u: usize, i: usize) -> Polynomial {
        let w: Vec<usize> = (0..i).collect();
        let edges: Vec<usize> = (0..g.edges.len())
            .filter(|&e| w.contains(&g.edges[e].0) || w.contains(&g.edges[e].1))
            .collect();
        let mut p = Polynomial::one(F);
        for bits in 0u64..(1 << edges.len()) {
            let mut mask = 0u64;
            for (k, &e) in edges.iter().enumerate() {
                mask |= ((bits >> k) & 1) << e;
            }
            let sat = w.iter().filter(|&&v| solves_parity(g, u, v, mask)).count();
            if sat % 2 == 0 {
                let m = Monomial::from_factors(edges.iter().map(|&e| {
                    let kappa = w.contains(&g.edges[e].0) as u32 + w.contains(&g.edges[e].1) as u32;
                    (xv(e, ((mask >> e) & 1) as usize), kappa)
                }));
                p.add_term(m, F.one());
            }
        }
        p
    }

    #[test]
    fn e01_gadget() {
        let inst = gen_cfi(&GraphInput::complete(4), None, 1).unwrap();
        let p = Gadgets::e01_polynomial(2)
            .substitute(&inst.axiom_substitution())
            .unwrap();
        let want = Polynomial::monomial(F, Monomial::from_factors([(xv(2, 0), 1), (xv(2, 1), 1)]));
        assert_eq!(p, want);
    }

    #[test]
    fn mu_stages_match_enumeration_on_k4() {
        let g = GraphInput::complete(4);
        let inst = gen_cfi(&g, None, 1).unwrap();
        let stages = cfi_mu_stages(&inst, &mut Budget::default()).unwrap();
        for i in 1..=3 {
            assert_eq!(stages[i - 1], mu_oracle(&g, 0, i), "stage {i}");
        }
        assert!(stages[3].is_one());
    }

    #[test]
    fn mu_certificate_k4_and_prism() {
        for g in [GraphInput::complete(4), GraphInput::prism()] {
            let inst = gen_cfi(&g, None, 1).unwrap();
            let cert = build_cfi_mu(&inst).unwrap();
            assert!(verifies(&inst, &cert));
            assert_eq!(cert.claims.group.as_deref(), Some("instance"));
            assert!(witnesses_hold(&inst, &cert));
        }
        let inst = gen_cfi(&GraphInput::complete(4), None, 1).unwrap();
        let cert = build_cfi_mu(&inst).unwrap();
        let c = &cert.circuit;
        assert!(!check_y_linear(c, c.output(), &inst.yset(), &mut Budget::default()).unwrap());
    }

    #[test]
    fn special_vertex_elsewhere() {
        let inst = gen_cfi(&GraphInput::complete(4), Some(2), 1).unwrap();
        assert!(verifies(&inst, &build_cfi_mu(&inst).unwrap()));
        assert!(build_cfi_mu(&gen_cfi(&GraphInput::complete(4), None, 0).unwrap()).is_err());
    }

    #[test]
    fn linear_certificate_k4() {
        let inst = gen_cfi(&GraphInput::complete(4), None, 1).unwrap();
        let classes = assignment_classes(&inst, &mut Budget::default()).unwrap();
        assert_eq!(classes.sizes().iter().sum::<usize>(), 64);
        let cert = build_cfi_linear(&inst, &mut Budget::default()).unwrap();
        assert!(verifies(&inst, &cert));
        let c = &cert.circuit;
        assert!(check_y_linear(c, c.output(), &inst.yset(), &mut Budget::default()).unwrap());
        assert!(witnesses_hold(&inst, &cert));
    }
}
