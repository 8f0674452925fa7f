//! Extended polynomial calculus with hierarchical, group-closed extension
//! axioms, and its translation into symmetric ŷ-linear certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::translate::translate_lines;
use super::{check_lines, PcCheck, PcProof};
use crate::algebra::{Polynomial, Variable};
use crate::circuit::{degree, inline, Budget, Circuit, CircuitBuilder, DegreeMode};
use crate::constructions::{symmetrize_average, AverageOptions, Certificate};
use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::symmetry::{GroupPresentation, VariablePermutation};

/// `var − definition`, introduced in class `class` (classes start at 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionAxiom {
    pub var: Variable,
    pub definition: Polynomial,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtensionAxiomSet {
    pub axioms: Vec<ExtensionAxiom>,
}

impl ExtensionAxiomSet {
    /// Indices ordered by class, then by extension variable.
    pub fn hierarchical_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.axioms.len()).collect();
        idx.sort_by(|&a, &b| {
            let (ea, eb) = (&self.axioms[a], &self.axioms[b]);
            (ea.class, &ea.var).cmp(&(eb.class, &eb.var))
        });
        idx
    }
}

/// A PC refutation of `F ∪ E`; extension axioms are cited by their index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EpcProof {
    pub base: PcProof,
    pub extensions: ExtensionAxiomSet,
}

/// The instance `F ∪ E` over `X ⊎ Z`, with the group lifted to `Z` and
/// axiom variables `yExt[j]` for the extension axioms.
#[derive(Clone, Debug)]
pub struct EpcContext {
    pub extended: Instance,
    /// Index of the first extension axiom in `extended.axioms`.
    pub ext_base: usize,
    pub check: PcCheck,
}

fn condition(n: u8, detail: impl Into<String>) -> Error {
    Error::EpcCondition {
        condition: n,
        detail: detail.into(),
    }
}

/// Checks the three conditions on the extension axioms (hierarchy, distinct
/// definitions, classes closed under the lifted action) and the base proof.
pub fn check_sym_epc(
    inst: &Instance,
    proof: &EpcProof,
    group: &GroupPresentation,
) -> Result<EpcContext> {
    let f = inst.field;
    let exts = &proof.extensions.axioms;
    let xset = inst.xset();
    let yset = inst.yset();
    let ext_y = |j: usize| Variable::new("yExt", &[j as i64]);
    let mut zclass: BTreeMap<&Variable, usize> = BTreeMap::new();
    for (j, e) in exts.iter().enumerate() {
        f.check(&e.definition.field())?;
        if e.class == 0 {
            return Err(condition(
                1,
                format!("{} has class 0; classes start at 1", e.var),
            ));
        }
        if xset.contains(&e.var)
            || yset.contains(&e.var)
            || zclass.insert(&e.var, e.class).is_some()
        {
            return Err(Error::invalid(format!(
                "extension variable {} is not fresh",
                e.var
            )));
        }
        if yset.contains(&ext_y(j)) {
            return Err(Error::invalid(format!(
                "{} clashes with an instance axiom variable",
                ext_y(j)
            )));
        }
    }
    // Condition 1: definitions only use X and strictly earlier classes.
    for e in exts {
        for v in e.definition.variables() {
            match zclass.get(&v) {
                Some(&c) if c >= e.class => {
                    return Err(condition(
                        1,
                        format!("{} (class {}) uses {v} of class {c}", e.var, e.class),
                    ))
                }
                None if !xset.contains(&v) => {
                    return Err(condition(1, format!("{} uses unknown variable {v}", e.var)));
                }
                _ => {}
            }
        }
    }
    // Condition 2: no two axioms share a definition.
    let mut by_def: HashMap<&Polynomial, usize> = HashMap::new();
    for (j, e) in exts.iter().enumerate() {
        if let Some(i) = by_def.insert(&e.definition, j) {
            return Err(condition(
                2,
                format!(
                    "{} and {} share the definition {}",
                    exts[i].var, e.var, e.definition
                ),
            ));
        }
    }
    // Condition 3: the action lifts class by class and preserves classes.
    let order = proof.extensions.hierarchical_order();
    let group = group.extended(&inst.xvars);
    let mut lifted = Vec::new();
    for (gi, g) in group.generators.iter().enumerate() {
        let mut map = g.mapping().clone();
        for &j in &order {
            let e = &exts[j];
            let image = e.definition.rename(|v| {
                map.get(v)
                    .cloned()
                    .ok_or_else(|| Error::UndefinedVariable(v.to_string()))
            })?;
            let Some(&t) = by_def.get(&image) else {
                return Err(condition(
                    3,
                    format!("generator {gi} maps the definition of {} to {image}, which defines nothing", e.var),
                ));
            };
            if exts[t].class != e.class {
                return Err(condition(
                    3,
                    format!(
                        "generator {gi} moves {} (class {}) to {} (class {})",
                        e.var, e.class, exts[t].var, exts[t].class
                    ),
                ));
            }
            map.insert(e.var.clone(), exts[t].var.clone());
        }
        lifted.push(VariablePermutation::new(map)?);
    }
    let mut lifted = GroupPresentation::new(lifted);
    lifted.order_hint = group.order_hint;

    let ext_base = inst.axioms.len();
    let mut xvars = inst.xvars.clone();
    let mut axioms = inst.axioms.clone();
    let mut yvars = inst.yvars.clone();
    for (j, e) in exts.iter().enumerate() {
        xvars.push(e.var.clone());
        axioms.push(Polynomial::var(f, e.var.clone()).sub(&e.definition)?);
        yvars.push(ext_y(j));
    }
    let extended = Instance::new(inst.family.clone(), f, xvars, axioms, yvars, lifted)?;
    let check = check_lines(&extended, &proof.base, Some(ext_base))?;
    Ok(EpcContext {
        extended,
        ext_base,
        check,
    })
}

/// Translates the base proof over `F ∪ E`, averages it over the lifted group,
/// then inlines `z ↦ θ(z)` (definitions with earlier extension variables
/// already inlined) and `yExt ↦ 0`, in class order.
pub fn epc_to_symipslin(
    inst: &Instance,
    proof: &EpcProof,
    group: &GroupPresentation,
    opts: AverageOptions,
    budget: &mut Budget,
) -> Result<Certificate> {
    let ctx = check_sym_epc(inst, proof, group)?;
    let ext = &ctx.extended;
    let translated = translate_lines(ext, &proof.base, Some(ctx.ext_base), budget)?;
    let averaged = symmetrize_average(ext, &translated, opts, budget)?;

    let f = inst.field;
    let mut theta: BTreeMap<Variable, Polynomial> = BTreeMap::new();
    for j in proof.extensions.hierarchical_order() {
        let e = &proof.extensions.axioms[j];
        let t = e.definition.substitute(&theta)?;
        theta.insert(e.var.clone(), t);
    }
    let mut sigma: BTreeMap<Variable, Circuit> = BTreeMap::new();
    for (z, t) in &theta {
        let mut b = CircuitBuilder::new(f);
        let g = b.polynomial(t);
        sigma.insert(z.clone(), b.finish(vec![g]));
    }
    for y in &ext.yvars[ctx.ext_base..] {
        let mut b = CircuitBuilder::new(f);
        let g = b.constant_i64(0);
        sigma.insert(y.clone(), b.finish(vec![g]));
    }
    let circuit = inline(&averaged.circuit, &sigma)?.circuit;
    let deg = degree(&circuit, DegreeMode::Exact, budget)?.max;
    let sym_inst = inst.with_group(group.clone())?;
    let mut cert = Certificate::new(inst, circuit).with_claims(Some(true), deg);
    cert.notes = averaged.notes;
    cert.attach_symmetry(&sym_inst, opts.auto_cap)?;
    let zvars: BTreeSet<&Variable> = theta.keys().collect();
    debug_assert!(cert
        .circuit
        .input_variables()
        .iter()
        .all(|v| !zvars.contains(v)));
    Ok(cert)
}
