//! Algebraic circuits: labelled DAGs of input, constant, sum and product gates.

mod eval;
mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::algebra::{FieldTag, Monomial, Polynomial, Scalar, Variable};
use crate::error::{Error, Result};

pub use eval::{
    check_skew, check_y_linear, degree, eval_graded, eval_point, eval_substituted, eval_symbolic,
    evaluate, inline, Budget, DegreeMode, DegreeReport, GateAlgebra, Inlined, DEFAULT_BUDGET,
};
pub use io::{
    parse_circuit, parse_circuit_body, write_circuit, write_circuit_body, CIRCUIT_VERSION,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GateLabel {
    Input(Variable),
    Const(Scalar),
    Add,
    Mul,
}

impl GateLabel {
    pub fn is_leaf(&self) -> bool {
        matches!(self, GateLabel::Input(_) | GateLabel::Const(_))
    }
}

/// A gate; `children` is a multiset stored in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub label: GateLabel,
    pub children: Vec<usize>,
}

impl Gate {
    pub fn leaf(label: GateLabel) -> Self {
        Gate {
            label,
            children: Vec::new(),
        }
    }

    pub fn op(label: GateLabel, mut children: Vec<usize>) -> Self {
        children.sort_unstable();
        Gate { label, children }
    }
}

/// A circuit in topological order with designated outputs and optional
/// automorphism witnesses keyed by generator index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub field: FieldTag,
    pub gates: Vec<Gate>,
    pub outputs: Vec<usize>,
    pub witnesses: BTreeMap<usize, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeMetrics {
    pub gates: usize,
    pub wires: usize,
    pub instance_variables: usize,
    /// `max(gates, |X|+|Y|)`: a refutation is never smaller than its instance.
    pub proof_size: usize,
    /// `min(gates, |X|+|Y|)`, the literal alternative convention.
    pub proof_size_min: usize,
}

impl Circuit {
    /// Checks topological order, fan-in shape, output validity, reachability,
    /// and that stored witnesses are permutations of the gate ids.
    pub fn validate(&self) -> Result<()> {
        let n = self.gates.len();
        for (id, g) in self.gates.iter().enumerate() {
            match &g.label {
                GateLabel::Input(_) | GateLabel::Const(_) => {
                    if !g.children.is_empty() {
                        return Err(Error::MalformedCircuit(format!(
                            "leaf gate {id} has children"
                        )));
                    }
                }
                GateLabel::Add | GateLabel::Mul => {
                    if g.children.is_empty() {
                        return Err(Error::MalformedCircuit(format!(
                            "gate {id} has no children"
                        )));
                    }
                }
            }
            if let GateLabel::Const(c) = &g.label {
                if !self.field.contains(c) {
                    return Err(Error::MalformedCircuit(format!(
                        "constant of gate {id} is not in {}",
                        self.field
                    )));
                }
            }
            if let Some(&c) = g.children.iter().find(|&&c| c >= id) {
                return Err(Error::MalformedCircuit(format!(
                    "gate {id} references gate {c}, which is not earlier"
                )));
            }
            if g.children.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::MalformedCircuit(format!(
                    "children of gate {id} are not sorted"
                )));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::MalformedCircuit("no outputs".into()));
        }
        if let Some(&o) = self.outputs.iter().find(|&&o| o >= n) {
            return Err(Error::MalformedCircuit(format!(
                "output {o} does not exist"
            )));
        }
        let reach = self.reachable(&self.outputs);
        if let Some(id) = (0..n).find(|&i| !reach[i]) {
            return Err(Error::MalformedCircuit(format!(
                "gate {id} is not connected to an output"
            )));
        }
        for (gen, w) in &self.witnesses {
            if w.len() != n {
                return Err(Error::MalformedCircuit(format!(
                    "witness {gen} has wrong length"
                )));
            }
            let mut seen = vec![false; n];
            for &t in w {
                if t >= n || std::mem::replace(&mut seen[t], true) {
                    return Err(Error::MalformedCircuit(format!(
                        "witness {gen} is not a permutation"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn output(&self) -> usize {
        self.outputs[0]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn reachable(&self, roots: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.gates.len()];
        let mut stack: Vec<usize> = roots.to_vec();
        while let Some(g) = stack.pop() {
            if !std::mem::replace(&mut seen[g], true) {
                stack.extend(self.gates[g].children.iter().copied());
            }
        }
        seen
    }

    pub fn input_variables(&self) -> BTreeSet<Variable> {
        self.gates
            .iter()
            .filter_map(|g| match &g.label {
                GateLabel::Input(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn wire_count(&self) -> usize {
        self.gates.iter().map(|g| g.children.len()).sum()
    }

    /// Distinct parents of each gate.
    pub fn parents(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            let mut last = None;
            for &c in &g.children {
                if last != Some(c) {
                    out[c].push(id);
                    last = Some(c);
                }
            }
        }
        out
    }

    pub fn size_metrics(&self, instance_variables: usize) -> SizeMetrics {
        let gates = self.gates.len();
        SizeMetrics {
            gates,
            wires: self.wire_count(),
            instance_variables,
            proof_size: gates.max(instance_variables),
            proof_size_min: gates.min(instance_variables),
        }
    }

    /// Keeps only gates reachable from the outputs, renumbering in order.
    /// Witnesses are dropped because gate ids change.
    pub fn pruned(&self) -> Circuit {
        let reach = self.reachable(&self.outputs);
        if reach.iter().all(|&r| r) {
            return self.clone();
        }
        let mut remap = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        for (id, g) in self.gates.iter().enumerate() {
            if reach[id] {
                remap[id] = gates.len();
                gates.push(Gate {
                    label: g.label.clone(),
                    children: g.children.iter().map(|&c| remap[c]).collect(),
                });
            }
        }
        Circuit {
            field: self.field,
            gates,
            outputs: self.outputs.iter().map(|&o| remap[o]).collect(),
            witnesses: BTreeMap::new(),
        }
    }
}

/// Incremental, hash-consed circuit construction.
///
/// Structurally identical gates are shared, so equal sub-expressions are
/// represented once. Empty sums become the constant 0, empty products the
/// constant 1, and single-child sums or products collapse to the child.
#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    field: FieldTag,
    gates: Vec<Gate>,
    index: HashMap<Gate, usize>,
}

impl CircuitBuilder {
    pub fn new(field: FieldTag) -> Self {
        CircuitBuilder {
            field,
            gates: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, id: usize) -> &Gate {
        &self.gates[id]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Returns the id of an existing structurally identical gate, if any.
    pub fn lookup(&self, g: &Gate) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn intern(&mut self, g: Gate) -> usize {
        if let Some(&id) = self.index.get(&g) {
            return id;
        }
        let id = self.gates.len();
        self.gates.push(g.clone());
        self.index.insert(g, id);
        id
    }

    /// Appends a gate without sharing, e.g. to create disjoint copies.
    pub fn push_raw(&mut self, g: Gate) -> usize {
        debug_assert!(g.children.iter().all(|&c| c < self.gates.len()));
        let id = self.gates.len();
        self.index.entry(g.clone()).or_insert(id);
        self.gates.push(g);
        id
    }

    pub fn input(&mut self, v: Variable) -> usize {
        self.intern(Gate::leaf(GateLabel::Input(v)))
    }

    pub fn constant(&mut self, c: Scalar) -> usize {
        self.intern(Gate::leaf(GateLabel::Const(c)))
    }

    pub fn constant_i64(&mut self, c: i64) -> usize {
        let s = self.field.from_i64(c);
        self.constant(s)
    }

    pub fn add(&mut self, children: Vec<usize>) -> usize {
        match children.len() {
            0 => self.constant_i64(0),
            1 => children[0],
            _ => self.intern(Gate::op(GateLabel::Add, children)),
        }
    }

    pub fn mul(&mut self, children: Vec<usize>) -> usize {
        match children.len() {
            0 => self.constant_i64(1),
            1 => children[0],
            _ => self.intern(Gate::op(GateLabel::Mul, children)),
        }
    }

    /// `c · g`, eliding the multiplication when `c = 1`.
    pub fn scale(&mut self, c: &Scalar, g: usize) -> usize {
        if self.field.is_one(c) {
            g
        } else {
            let k = self.constant(c.clone());
            self.mul(vec![k, g])
        }
    }

    pub fn neg(&mut self, g: usize) -> usize {
        let m = self.field.from_i64(-1);
        self.scale(&m, g)
    }

    pub fn sub(&mut self, a: usize, b: usize) -> usize {
        let nb = self.neg(b);
        self.add(vec![a, nb])
    }

    /// A product of input gates (repeated according to exponents).
    pub fn monomial(&mut self, m: &Monomial) -> usize {
        let mut ch = Vec::with_capacity(m.degree() as usize);
        for (v, e) in m.factors() {
            let g = self.input(v.clone());
            ch.extend(std::iter::repeat_n(g, *e as usize));
        }
        self.mul(ch)
    }

    pub fn term(&mut self, m: &Monomial, c: &Scalar) -> usize {
        if m.is_one() {
            return self.constant(c.clone());
        }
        let g = self.monomial(m);
        if self.field.is_one(c) {
            return g;
        }
        let k = self.constant(c.clone());
        let mut ch = self.gates[g].children.clone();
        if matches!(self.gates[g].label, GateLabel::Mul) {
            ch.push(k);
            self.mul(ch)
        } else {
            self.mul(vec![k, g])
        }
    }

    /// A polynomial written as a flat sum of monomial products.
    pub fn polynomial(&mut self, p: &Polynomial) -> usize {
        let terms: Vec<usize> = p.terms().iter().map(|(m, c)| self.term(m, c)).collect();
        self.add(terms)
    }

    /// Copies the subcircuit of `c` rooted at `root`; `leaf` may redirect
    /// leaves (returning `None` keeps them as they are).
    pub fn import(
        &mut self,
        c: &Circuit,
        root: usize,
        leaf: &mut dyn FnMut(&mut CircuitBuilder, &GateLabel) -> Option<usize>,
    ) -> usize {
        let reach = c.reachable(&[root]);
        let mut map = vec![usize::MAX; c.gates.len()];
        for (id, g) in c.gates.iter().enumerate() {
            if !reach[id] {
                continue;
            }
            map[id] = match &g.label {
                GateLabel::Input(_) | GateLabel::Const(_) => match leaf(self, &g.label) {
                    Some(t) => t,
                    None => self.intern(Gate::leaf(g.label.clone())),
                },
                GateLabel::Add => {
                    let ch = g.children.iter().map(|&x| map[x]).collect();
                    self.add(ch)
                }
                GateLabel::Mul => {
                    let ch = g.children.iter().map(|&x| map[x]).collect();
                    self.mul(ch)
                }
            };
        }
        map[root]
    }

    /// Finishes the circuit, dropping gates not reachable from `outputs`.
    pub fn finish(self, outputs: Vec<usize>) -> Circuit {
        let c = Circuit {
            field: self.field,
            gates: self.gates,
            outputs,
            witnesses: BTreeMap::new(),
        };
        c.pruned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: i64) -> Variable {
        Variable::new("x", &[i])
    }

    #[test]
    fn hash_consing_shares_gates() {
        let mut b = CircuitBuilder::new(FieldTag::Rationals);
        let a = b.input(x(1));
        let c = b.input(x(2));
        let s1 = b.add(vec![a, c]);
        let s2 = b.add(vec![c, a]);
        assert_eq!(s1, s2);
        assert_eq!(b.add(vec![]), b.constant_i64(0));
        assert_eq!(b.mul(vec![a]), a);
    }

    #[test]
    fn finish_prunes_and_validates() {
        let mut b = CircuitBuilder::new(FieldTag::Rationals);
        let a = b.input(x(1));
        let _unused = b.input(x(2));
        let m = b.mul(vec![a, a]);
        let c = b.finish(vec![m]);
        assert_eq!(c.len(), 2);
        c.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let f = FieldTag::Rationals;
        let mut c = Circuit {
            field: f,
            gates: vec![
                Gate::leaf(GateLabel::Input(x(1))),
                Gate::leaf(GateLabel::Input(x(2))),
            ],
            outputs: vec![0],
            witnesses: BTreeMap::new(),
        };
        assert!(c.validate().is_err());
        c.gates.push(Gate::op(GateLabel::Add, vec![0, 1]));
        c.outputs = vec![2];
        c.validate().unwrap();
        c.gates[2].children = vec![0, 2];
        assert!(c.validate().is_err());
        c.gates[2].children = vec![];
        assert!(c.validate().is_err());
    }

    #[test]
    fn size_metrics_use_max() {
        let mut b = CircuitBuilder::new(FieldTag::Rationals);
        let a = b.input(x(1));
        let c = b.finish(vec![a]);
        let m = c.size_metrics(5);
        assert_eq!((m.gates, m.proof_size, m.proof_size_min), (1, 5, 1));
    }
}
