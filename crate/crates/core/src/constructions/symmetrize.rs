use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::Certificate;
use crate::algebra::{Monomial, Polynomial, Scalar};
use crate::circuit::{eval_symbolic, Budget, Circuit, CircuitBuilder, Gate, GateLabel};
use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::symmetry::{VariablePermutation, DEFAULT_AUTOMORPHISM_CAP, DEFAULT_GROUP_CAP};

/// The product of all `|Γ|` images `π(C)`, sharing input gates.
///
/// Copies are not hash-consed together, so the stored witness for a
/// generator `g` sends copy `π` gate-for-gate onto copy `g ∘ π`.
pub fn symmetrize_product(
    inst: &Instance,
    cert: &Certificate,
    group_cap: u64,
) -> Result<Certificate> {
    let c = &cert.circuit;
    inst.field.check(&c.field)?;
    let inputs = c.input_variables();
    let group = inst.induced.extended(&inputs);
    let elements = group.elements(group_cap)?;
    let index: HashMap<&VariablePermutation, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();

    let mut b = CircuitBuilder::new(c.field);
    let root = c.output();
    let mut ids: Vec<Vec<usize>> = Vec::with_capacity(elements.len());
    for pi in &elements {
        let mut map = vec![usize::MAX; c.gates.len()];
        for (id, g) in c.gates.iter().enumerate() {
            map[id] = match &g.label {
                GateLabel::Input(v) => b.input(pi.apply(v)?),
                GateLabel::Const(s) => b.constant(s.clone()),
                _ => b.push_raw(Gate::op(
                    g.label.clone(),
                    g.children.iter().map(|&x| map[x]).collect(),
                )),
            };
        }
        ids.push(map);
    }
    let outs: Vec<usize> = ids.iter().map(|m| m[root]).collect();
    let top = b.push_raw(Gate::op(GateLabel::Mul, outs));
    let gates: Vec<Gate> = b.gates().to_vec();
    let mut circuit = Circuit {
        field: c.field,
        gates,
        outputs: vec![top],
        witnesses: BTreeMap::new(),
    };

    let input_gate: HashMap<&crate::algebra::Variable, usize> = circuit
        .gates
        .iter()
        .enumerate()
        .filter_map(|(id, g)| match &g.label {
            GateLabel::Input(v) => Some((v, id)),
            _ => None,
        })
        .collect();
    let mut witnesses = BTreeMap::new();
    for (gi, gen) in group.generators.iter().enumerate() {
        let mut w: Vec<usize> = (0..circuit.gates.len()).collect();
        for (id, g) in circuit.gates.iter().enumerate() {
            if let GateLabel::Input(v) = &g.label {
                w[id] = input_gate[&gen.apply(v)?];
            }
        }
        for (a, pi) in elements.iter().enumerate() {
            let target = index[&gen.compose(pi)];
            for (id, g) in c.gates.iter().enumerate() {
                if !g.label.is_leaf() {
                    w[ids[a][id]] = ids[target][id];
                }
            }
        }
        witnesses.insert(gi, w);
    }
    circuit.witnesses = witnesses;
    circuit.validate()?;

    let mut out = Certificate::new(inst, circuit);
    out.claims.group = Some("instance".into());
    out.claims.y_linear = match cert.claims.y_linear {
        Some(true) if elements.len() > 1 => Some(false),
        other => other,
    };
    out.claims.degree = cert.claims.degree.map(|d| d * elements.len() as u32);
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct AverageOptions {
    pub group_cap: u64,
    pub auto_cap: usize,
}

impl Default for AverageOptions {
    fn default() -> Self {
        AverageOptions {
            group_cap: DEFAULT_GROUP_CAP,
            auto_cap: DEFAULT_AUTOMORPHISM_CAP,
        }
    }
}

/// `|Γ|⁻¹ Σ_π π(C)`, computed orbit by orbit: the summed coefficient of the
/// certificate's monomials in an orbit `O` is spread as `s/|O|` over all of
/// `O`. The result is emitted as a flat sum of monomial products.
pub fn symmetrize_average(
    inst: &Instance,
    cert: &Certificate,
    opts: AverageOptions,
    budget: &mut Budget,
) -> Result<Certificate> {
    let f = inst.field;
    f.check(&cert.circuit.field)?;
    let p = eval_symbolic(&cert.circuit, cert.circuit.output(), budget)?;
    let group = inst.induced.extended(&p.variables());
    let char_p = f.characteristic();
    let mut notes = Vec::new();
    let mut check_orbits = false;
    if char_p != 0 {
        match group.order(opts.group_cap) {
            Ok(order) => {
                if order % char_p == 0 {
                    return Err(Error::Characteristic {
                        characteristic: char_p,
                        quantity: order,
                        what: "group order",
                    });
                }
            }
            Err(Error::CapExceeded { .. }) => {
                check_orbits = true;
                notes.push(format!(
                    "group order not enumerable under cap {}; characteristic checked against orbit sizes only",
                    opts.group_cap
                ));
            }
            Err(e) => return Err(e),
        }
    }
    let mut result = Polynomial::zero(f);
    let mut done: BTreeSet<Monomial> = BTreeSet::new();
    for m in p.terms().keys() {
        if done.contains(m) {
            continue;
        }
        let orbit = group.orbit_monomial(m)?;
        budget.charge(orbit.len() as u64, "orbit averaging")?;
        let size = orbit.len() as u64;
        if check_orbits && size.is_multiple_of(char_p) {
            return Err(Error::Characteristic {
                characteristic: char_p,
                quantity: size,
                what: "orbit size",
            });
        }
        let mut s: Scalar = f.zero();
        for m2 in &orbit {
            if let Some(c) = p.terms().get(m2) {
                s = f.add(&s, c);
            }
        }
        let inv = f
            .inv(&f.from_i64(size as i64))
            .ok_or(Error::Characteristic {
                characteristic: char_p,
                quantity: size,
                what: "orbit size",
            })?;
        let share = f.mul(&s, &inv);
        for m2 in orbit {
            result.add_term(m2.clone(), share.clone());
            done.insert(m2);
        }
    }
    let mut b = CircuitBuilder::new(f);
    let g = b.polynomial(&result);
    let circuit = b.finish(vec![g]);
    let mut out =
        Certificate::new(inst, circuit).with_claims(cert.claims.y_linear, result.degree());
    out.notes = notes;
    out.attach_symmetry(inst, opts.auto_cap)?;
    Ok(out)
}
