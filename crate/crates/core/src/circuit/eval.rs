use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{Circuit, CircuitBuilder, Gate, GateLabel};
use crate::algebra::{FieldTag, Polynomial, Scalar, Variable};
use crate::error::{Error, Result};

/// Default cap on term operations for symbolic expansion.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A running count of term operations against a fixed limit.
#[derive(Clone, Debug)]
pub struct Budget {
    pub limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn charge(&mut self, n: u64, context: &str) -> Result<()> {
        self.used = self.used.saturating_add(n);
        if self.used > self.limit {
            Err(Error::budget(self.limit, context))
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

/// Interpretation of gate labels in some value domain.
pub trait GateAlgebra {
    type Value: Clone;
    fn leaf(&mut self, label: &GateLabel) -> Result<Self::Value>;
    fn add(&mut self, xs: &[&Self::Value]) -> Result<Self::Value>;
    fn mul(&mut self, xs: &[&Self::Value]) -> Result<Self::Value>;
}

/// Evaluates the gates needed for `roots` in topological order, releasing
/// intermediate values after their last use. `on_gate` sees every computed value.
pub fn evaluate<A: GateAlgebra>(
    c: &Circuit,
    roots: &[usize],
    alg: &mut A,
    on_gate: &mut dyn FnMut(usize, &A::Value),
) -> Result<Vec<A::Value>> {
    let n = c.gates.len();
    if let Some(&r) = roots.iter().find(|&&r| r >= n) {
        return Err(Error::MalformedCircuit(format!("gate {r} does not exist")));
    }
    let needed = c.reachable(roots);
    let mut remaining = vec![0usize; n];
    let mut is_root = vec![false; n];
    for &r in roots {
        is_root[r] = true;
    }
    for (id, g) in c.gates.iter().enumerate() {
        if !needed[id] {
            continue;
        }
        let mut last = None;
        for &ch in &g.children {
            if last != Some(ch) {
                remaining[ch] += 1;
                last = Some(ch);
            }
        }
    }
    let mut values: Vec<Option<A::Value>> = vec![None; n];
    for (id, g) in c.gates.iter().enumerate() {
        if !needed[id] {
            continue;
        }
        let v = match &g.label {
            GateLabel::Input(_) | GateLabel::Const(_) => alg.leaf(&g.label)?,
            GateLabel::Add | GateLabel::Mul => {
                let xs: Vec<&A::Value> = g
                    .children
                    .iter()
                    .map(|&ch| values[ch].as_ref().expect("child evaluated"))
                    .collect();
                if matches!(g.label, GateLabel::Add) {
                    alg.add(&xs)?
                } else {
                    alg.mul(&xs)?
                }
            }
        };
        on_gate(id, &v);
        values[id] = Some(v);
        let mut last = None;
        for &ch in &g.children {
            if last != Some(ch) {
                last = Some(ch);
                remaining[ch] -= 1;
                if remaining[ch] == 0 && !is_root[ch] {
                    values[ch] = None;
                }
            }
        }
    }
    Ok(roots
        .iter()
        .map(|&r| values[r].clone().expect("root evaluated"))
        .collect())
}

/// Symbolic evaluation, optionally substituting polynomials for inputs.
struct PolyAlgebra<'a> {
    field: FieldTag,
    sigma: Option<&'a BTreeMap<Variable, Polynomial>>,
    budget: &'a mut Budget,
}

impl GateAlgebra for PolyAlgebra<'_> {
    type Value = Polynomial;

    fn leaf(&mut self, label: &GateLabel) -> Result<Polynomial> {
        Ok(match label {
            GateLabel::Const(c) => Polynomial::constant(self.field, c.clone()),
            GateLabel::Input(v) => match self.sigma.and_then(|s| s.get(v)) {
                Some(p) => {
                    self.field.check(&p.field())?;
                    p.clone()
                }
                None => Polynomial::var(self.field, v.clone()),
            },
            _ => unreachable!("not a leaf"),
        })
    }

    fn add(&mut self, xs: &[&Polynomial]) -> Result<Polynomial> {
        let total: usize = xs.iter().map(|p| p.len()).sum();
        self.budget.charge(total as u64, "sum gate")?;
        let mut acc = xs[0].clone();
        let one = self.field.one();
        for p in &xs[1..] {
            acc.add_scaled(p, &one)?;
        }
        Ok(acc)
    }

    fn mul(&mut self, xs: &[&Polynomial]) -> Result<Polynomial> {
        let mut acc = xs[0].clone();
        for p in &xs[1..] {
            self.budget.charge(
                (acc.len() as u64).saturating_mul(p.len() as u64),
                "product gate",
            )?;
            acc = acc.mul(p)?;
        }
        Ok(acc)
    }
}

fn check_output(c: &Circuit, output: usize) -> Result<()> {
    if c.outputs.contains(&output) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "gate {output} is not a designated output"
        )))
    }
}

/// The polynomial computed at a designated output.
pub fn eval_symbolic(c: &Circuit, output: usize, budget: &mut Budget) -> Result<Polynomial> {
    check_output(c, output)?;
    let mut alg = PolyAlgebra {
        field: c.field,
        sigma: None,
        budget,
    };
    Ok(evaluate(c, &[output], &mut alg, &mut |_, _| {})?.remove(0))
}

/// The polynomial computed at `output` after replacing input gates by the
/// polynomials in `sigma`, evaluated gate by gate (never expanding the
/// unsubstituted circuit first).
pub fn eval_substituted(
    c: &Circuit,
    output: usize,
    sigma: &BTreeMap<Variable, Polynomial>,
    budget: &mut Budget,
) -> Result<Polynomial> {
    check_output(c, output)?;
    let mut alg = PolyAlgebra {
        field: c.field,
        sigma: Some(sigma),
        budget,
    };
    Ok(evaluate(c, &[output], &mut alg, &mut |_, _| {})?.remove(0))
}

struct PointAlgebra<'a> {
    field: FieldTag,
    point: &'a BTreeMap<Variable, Scalar>,
}

impl GateAlgebra for PointAlgebra<'_> {
    type Value = Scalar;

    fn leaf(&mut self, label: &GateLabel) -> Result<Scalar> {
        match label {
            GateLabel::Const(c) => Ok(c.clone()),
            GateLabel::Input(v) => {
                let s = self
                    .point
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                if !self.field.contains(s) {
                    return Err(Error::FieldMismatch(self.field, self.field));
                }
                Ok(s.clone())
            }
            _ => unreachable!("not a leaf"),
        }
    }

    fn add(&mut self, xs: &[&Scalar]) -> Result<Scalar> {
        Ok(xs[1..]
            .iter()
            .fold(xs[0].clone(), |a, b| self.field.add(&a, b)))
    }

    fn mul(&mut self, xs: &[&Scalar]) -> Result<Scalar> {
        Ok(xs[1..]
            .iter()
            .fold(xs[0].clone(), |a, b| self.field.mul(&a, b)))
    }
}

/// Field values of every designated output at a point.
pub fn eval_point(
    c: &Circuit,
    point: &BTreeMap<Variable, Scalar>,
) -> Result<BTreeMap<usize, Scalar>> {
    let mut alg = PointAlgebra {
        field: c.field,
        point,
    };
    let vals = evaluate(c, &c.outputs, &mut alg, &mut |_, _| {})?;
    Ok(c.outputs.iter().copied().zip(vals).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMode {
    Exact,
    Structural,
}

/// Per-gate degrees; `None` marks a gate computing the zero polynomial
/// (exact mode) or a constant-zero subterm (structural mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub mode: DegreeMode,
    pub per_gate: Vec<Option<u32>>,
    pub max: Option<u32>,
}

/// Semantic degree (exact) or the syntactic upper bound (structural).
pub fn degree(c: &Circuit, mode: DegreeMode, budget: &mut Budget) -> Result<DegreeReport> {
    let mut per_gate = vec![None; c.gates.len()];
    match mode {
        DegreeMode::Exact => {
            let mut alg = PolyAlgebra {
                field: c.field,
                sigma: None,
                budget,
            };
            evaluate(c, &c.outputs, &mut alg, &mut |id, p| {
                per_gate[id] = p.degree()
            })?;
        }
        DegreeMode::Structural => {
            for (id, g) in c.gates.iter().enumerate() {
                per_gate[id] = match &g.label {
                    GateLabel::Input(_) => Some(1),
                    GateLabel::Const(s) => (!c.field.is_zero(s)).then_some(0),
                    GateLabel::Add => g.children.iter().filter_map(|&ch| per_gate[ch]).max(),
                    GateLabel::Mul => g
                        .children
                        .iter()
                        .map(|&ch| per_gate[ch])
                        .sum::<Option<u32>>(),
                };
            }
        }
    }
    let max = per_gate.iter().filter_map(|d| *d).max();
    Ok(DegreeReport {
        mode,
        per_gate,
        max,
    })
}

/// Evaluation graded by degree in a distinguished variable set, keeping
/// components of degree `0..=k` and discarding higher ones.
struct GradedAlgebra<'a> {
    field: FieldTag,
    yvars: &'a BTreeSet<Variable>,
    k: usize,
    budget: &'a mut Budget,
}

impl GateAlgebra for GradedAlgebra<'_> {
    type Value = Vec<Polynomial>;

    fn leaf(&mut self, label: &GateLabel) -> Result<Vec<Polynomial>> {
        let mut out = vec![Polynomial::zero(self.field); self.k + 1];
        match label {
            GateLabel::Const(c) => out[0] = Polynomial::constant(self.field, c.clone()),
            GateLabel::Input(v) => {
                let slot = usize::from(self.yvars.contains(v));
                if slot <= self.k {
                    out[slot] = Polynomial::var(self.field, v.clone());
                }
            }
            _ => unreachable!("not a leaf"),
        }
        Ok(out)
    }

    fn add(&mut self, xs: &[&Vec<Polynomial>]) -> Result<Vec<Polynomial>> {
        let mut acc = xs[0].clone();
        let one = self.field.one();
        for x in &xs[1..] {
            for (a, b) in acc.iter_mut().zip(x.iter()) {
                self.budget.charge(b.len() as u64, "graded sum gate")?;
                a.add_scaled(b, &one)?;
            }
        }
        Ok(acc)
    }

    fn mul(&mut self, xs: &[&Vec<Polynomial>]) -> Result<Vec<Polynomial>> {
        let mut acc = xs[0].clone();
        let one = self.field.one();
        for x in &xs[1..] {
            let mut next = vec![Polynomial::zero(self.field); self.k + 1];
            for i in 0..=self.k {
                if acc[i].is_zero() {
                    continue;
                }
                for j in 0..=self.k - i {
                    if x[j].is_zero() {
                        continue;
                    }
                    self.budget.charge(
                        (acc[i].len() as u64).saturating_mul(x[j].len() as u64),
                        "graded product gate",
                    )?;
                    let prod = acc[i].mul(&x[j])?;
                    next[i + j].add_scaled(&prod, &one)?;
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

/// The components of `output` of degree `0..=k` in `yvars`.
pub fn eval_graded(
    c: &Circuit,
    output: usize,
    yvars: &BTreeSet<Variable>,
    k: usize,
    budget: &mut Budget,
) -> Result<Vec<Polynomial>> {
    check_output(c, output)?;
    let mut alg = GradedAlgebra {
        field: c.field,
        yvars,
        k,
        budget,
    };
    Ok(evaluate(c, &[output], &mut alg, &mut |_, _| {})?.remove(0))
}

/// Upper bound on the degree in `yvars` of every gate.
fn structural_y_degree(c: &Circuit, yvars: &BTreeSet<Variable>) -> Vec<usize> {
    let mut d = vec![0usize; c.gates.len()];
    for (id, g) in c.gates.iter().enumerate() {
        d[id] = match &g.label {
            GateLabel::Input(v) => usize::from(yvars.contains(v)),
            GateLabel::Const(_) => 0,
            GateLabel::Add => g.children.iter().map(|&ch| d[ch]).max().unwrap_or(0),
            GateLabel::Mul => g.children.iter().map(|&ch| d[ch]).sum(),
        };
    }
    d
}

/// Whether every monomial of `output` has degree exactly one in `yvars`.
///
/// Uses graded evaluation with a growing truncation degree so a violation in
/// low degree is found without expanding the full polynomial.
pub fn check_y_linear(
    c: &Circuit,
    output: usize,
    yvars: &BTreeSet<Variable>,
    budget: &mut Budget,
) -> Result<bool> {
    check_output(c, output)?;
    let bound = structural_y_degree(c, yvars)[output];
    let mut k = bound.min(2);
    loop {
        let comps = eval_graded(c, output, yvars, k, budget)?;
        if !comps[0].is_zero() {
            return Ok(false);
        }
        if comps.iter().skip(2).any(|p| !p.is_zero()) {
            return Ok(false);
        }
        if k >= bound {
            return Ok(true);
        }
        k = (2 * k).min(bound);
    }
}

/// Every product gate has fan-in at most two with a leaf operand.
pub fn check_skew(c: &Circuit) -> bool {
    c.gates.iter().all(|g| {
        !matches!(g.label, GateLabel::Mul)
            || (g.children.len() <= 2 && g.children.iter().any(|&ch| c.gates[ch].label.is_leaf()))
    })
}

/// Result of [`inline`]; gate ids change, so stored witnesses cannot be kept.
#[derive(Clone, Debug)]
pub struct Inlined {
    pub circuit: Circuit,
    pub witnesses_dropped: bool,
}

/// Replaces each input gate of a mapped variable by a copy of the mapped
/// circuit's first output.
pub fn inline(c: &Circuit, sigma: &BTreeMap<Variable, Circuit>) -> Result<Inlined> {
    for s in sigma.values() {
        c.field.check(&s.field)?;
    }
    let mut b = CircuitBuilder::new(c.field);
    let mut map = vec![usize::MAX; c.gates.len()];
    for (id, g) in c.gates.iter().enumerate() {
        map[id] = match &g.label {
            GateLabel::Input(v) => match sigma.get(v) {
                Some(sub) => b.import(sub, sub.output(), &mut |_, _| None),
                None => b.intern(Gate::leaf(g.label.clone())),
            },
            GateLabel::Const(_) => b.intern(Gate::leaf(g.label.clone())),
            GateLabel::Add => {
                let ch = g.children.iter().map(|&x| map[x]).collect();
                b.add(ch)
            }
            GateLabel::Mul => {
                let ch = g.children.iter().map(|&x| map[x]).collect();
                b.mul(ch)
            }
        };
    }
    let outputs = c.outputs.iter().map(|&o| map[o]).collect();
    Ok(Inlined {
        circuit: b.finish(outputs),
        witnesses_dropped: !c.witnesses.is_empty(),
    })
}
