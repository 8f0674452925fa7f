use std::collections::HashSet;

use super::{Family, GraphInput, Instance};
use crate::algebra::{FieldTag, Monomial, Polynomial, Scalar, Variable};
use crate::error::{Error, Result};
use crate::symmetry::{
    cycle_space_generators, symmetric_group_moves, GroupPresentation, VariablePermutation,
};

/// `v² − v`.
pub fn boolean_axiom(field: FieldTag, v: &Variable) -> Polynomial {
    let mut p = Polynomial::monomial(field, Monomial::power(v.clone(), 2));
    p.add_term(Monomial::var(v.clone()), field.from_i64(-1));
    p
}

fn linear(field: FieldTag, vars: &[Variable], constant: Scalar) -> Polynomial {
    let mut p = Polynomial::constant(field, constant);
    for v in vars {
        p.add_term(Monomial::var(v.clone()), field.one());
    }
    p
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Generators of `Sym(items)` on index position `pos` of namespace `ns`.
fn index_symmetric_group(
    support: &[Variable],
    ns: &[&str],
    pos: usize,
    items: &[i64],
) -> Result<Vec<VariablePermutation>> {
    let mut gens = Vec::new();
    for moves in symmetric_group_moves(items) {
        let map: std::collections::BTreeMap<i64, i64> = moves.into_iter().collect();
        let mut perm = VariablePermutation::identity(support);
        for &name in ns {
            let part = VariablePermutation::index_perm(support, name, pos, &|i| {
                *map.get(&i).unwrap_or(&i)
            })?;
            perm = part.compose(&perm);
        }
        gens.push(perm);
    }
    Ok(gens)
}

/// The parity system of a 3-regular connected graph over GF(2), twisted by
/// `a` at vertex `u` (the lowest vertex by default).
///
/// Axioms come vertex by vertex (eight per vertex, `(i,j,k)` in lexicographic
/// order over the vertex's incident edges sorted by index), then one
/// `x[e,0] + x[e,1] + 1` per edge, then the Boolean axioms. The group is the
/// cycle space acting by edge flips.
pub fn gen_cfi(g: &GraphInput, u: Option<usize>, a: u8) -> Result<Instance> {
    g.validate()?;
    if a > 1 {
        return Err(Error::invalid("twist bit must be 0 or 1"));
    }
    if g.edges.iter().any(|&(x, y)| x == y) {
        return Err(Error::invalid("self-loops are not supported"));
    }
    if !g.is_regular(3) {
        return Err(Error::invalid("graph is not 3-regular"));
    }
    if !g.is_connected() {
        return Err(Error::invalid("graph is not connected"));
    }
    let u = u.unwrap_or(0);
    if u >= g.vertices {
        return Err(Error::invalid(format!("vertex {u} does not exist")));
    }
    let f = FieldTag::F2;
    let x = |e: usize, i: usize| Variable::new("x", &[e as i64, i as i64]);
    let xvars: Vec<Variable> = (0..g.edges.len())
        .flat_map(|e| [x(e, 0), x(e, 1)])
        .collect();
    let mut axioms = Vec::new();
    let mut yvars = Vec::new();
    for v in 0..g.vertices {
        let inc = g.incident(v);
        let twist = usize::from(v == u) * a as usize;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let c = (i + j + k + twist) % 2;
                    let vars = [x(inc[0], i), x(inc[1], j), x(inc[2], k)];
                    axioms.push(linear(f, &vars, f.from_i64(c as i64)));
                    yvars.push(Variable::new(
                        "yV",
                        &[v as i64, i as i64, j as i64, k as i64],
                    ));
                }
            }
        }
    }
    for e in 0..g.edges.len() {
        axioms.push(linear(f, &[x(e, 0), x(e, 1)], f.one()));
        yvars.push(Variable::new("yEdge", &[e as i64]));
    }
    for e in 0..g.edges.len() {
        for i in 0..2 {
            axioms.push(boolean_axiom(f, &x(e, i)));
            yvars.push(Variable::new("yBool", &[e as i64, i as i64]));
        }
    }
    let group = cycle_space_generators(g.vertices, &g.edges)?;
    Instance::new(
        Family::Cfi {
            vertices: g.vertices,
            edges: g.edges.clone(),
            u,
            a,
        },
        f,
        xvars,
        axioms,
        yvars,
        group,
    )
}

/// Subset sum `Σ x_i − β` with Boolean axioms, or the lifted form
/// `Σ x_i y_i − β` with Boolean axioms on both variable families.
///
/// Plain axiom variables: `y[0]` for the sum, `y[i]` for `x_i² − x_i`.
/// Lifted axiom variables: `B[0]`, `Bx[i]`, `By[i]`.
pub fn gen_subset_sum(n: usize, field: FieldTag, beta: &Scalar, lifted: bool) -> Result<Instance> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let p = field.characteristic();
    if p != 0 && p <= n as u64 {
        return Err(Error::invalid(format!(
            "characteristic {p} must exceed n = {n}"
        )));
    }
    if !field.contains(beta) {
        return Err(Error::FieldMismatch(field, field));
    }
    if (0..=n as i64).any(|k| &field.from_i64(k) == beta) {
        return Err(Error::invalid(format!(
            "beta = {} lies in {{0..{n}}}, so the instance is satisfiable",
            field.format(beta)
        )));
    }
    let xs: Vec<Variable> = (1..=n as i64).map(|i| Variable::new("x", &[i])).collect();
    let idx: Vec<i64> = (1..=n as i64).collect();
    let neg_beta = field.neg(beta);
    let family = Family::SubsetSum {
        n,
        beta: field.format(beta).replace(' ', ""),
        lifted,
    };
    if !lifted {
        let mut axioms = vec![linear(field, &xs, neg_beta)];
        let mut yvars = vec![Variable::new("y", &[0])];
        for (i, v) in xs.iter().enumerate() {
            axioms.push(boolean_axiom(field, v));
            yvars.push(Variable::new("y", &[i as i64 + 1]));
        }
        let gens = index_symmetric_group(&xs, &["x"], 0, &idx)?;
        let group = GroupPresentation::new(gens).with_order_hint(factorial(n));
        return Instance::new(family, field, xs, axioms, yvars, group);
    }
    let ys: Vec<Variable> = (1..=n as i64).map(|i| Variable::new("y", &[i])).collect();
    let mut sum = Polynomial::constant(field, neg_beta);
    for (a, b) in xs.iter().zip(&ys) {
        sum.add_term(
            Monomial::var(a.clone()).mul(&Monomial::var(b.clone())),
            field.one(),
        );
    }
    let mut axioms = vec![sum];
    let mut yvars = vec![Variable::new("B", &[0])];
    for (i, v) in xs.iter().enumerate() {
        axioms.push(boolean_axiom(field, v));
        yvars.push(Variable::new("Bx", &[i as i64 + 1]));
    }
    for (i, v) in ys.iter().enumerate() {
        axioms.push(boolean_axiom(field, v));
        yvars.push(Variable::new("By", &[i as i64 + 1]));
    }
    let mut all = xs.clone();
    all.extend(ys);
    let gens = index_symmetric_group(&all, &["x", "y"], 0, &idx)?;
    let group = GroupPresentation::new(gens).with_order_hint(factorial(n));
    Instance::new(family, field, all, axioms, yvars, group)
}

/// The pigeonhole principle with `n + 1` pigeons and `n` holes over the
/// rationals: row sums `yRow[i]`, collisions `yHole[i,i',j]` for `i < i'`,
/// then Boolean axioms `yBool[i,j]`.
pub fn gen_php(n: usize) -> Result<Instance> {
    if n < 1 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let f = FieldTag::Rationals;
    let x = |i: usize, j: usize| Variable::new("x", &[i as i64, j as i64]);
    let pigeons = 1..=n + 1;
    let xvars: Vec<Variable> = pigeons
        .clone()
        .flat_map(|i| (1..=n).map(move |j| x(i, j)))
        .collect();
    let mut axioms = Vec::new();
    let mut yvars = Vec::new();
    for i in pigeons.clone() {
        let row: Vec<Variable> = (1..=n).map(|j| x(i, j)).collect();
        axioms.push(linear(f, &row, f.from_i64(-1)));
        yvars.push(Variable::new("yRow", &[i as i64]));
    }
    for i in pigeons.clone() {
        for i2 in i + 1..=n + 1 {
            for j in 1..=n {
                let m = Monomial::var(x(i, j)).mul(&Monomial::var(x(i2, j)));
                axioms.push(Polynomial::monomial(f, m));
                yvars.push(Variable::new("yHole", &[i as i64, i2 as i64, j as i64]));
            }
        }
    }
    for v in &xvars {
        axioms.push(boolean_axiom(f, v));
        yvars.push(Variable::new("yBool", v.index()));
    }
    let pidx: Vec<i64> = (1..=n as i64 + 1).collect();
    let hidx: Vec<i64> = (1..=n as i64).collect();
    let mut gens = index_symmetric_group(&xvars, &["x"], 0, &pidx)?;
    gens.extend(index_symmetric_group(&xvars, &["x"], 1, &hidx)?);
    let group = GroupPresentation::new(gens).with_order_hint(factorial(n + 1) * factorial(n));
    Instance::new(Family::Php { n }, f, xvars, axioms, yvars, group)
}

/// The isomorphism system of two coloured graphs over the rationals.
///
/// Variables `x[v,w]` for equally coloured `v ∈ G`, `w ∈ H`; axioms: column
/// sums (per `w`), row sums (per `v`), products `x[v,w]·x[v',w']` for pairs
/// that are not local isomorphisms, and Boolean axioms, with identical
/// polynomials kept once. Axiom variables are `y[k]`. The group is generated
/// by the supplied automorphisms of `G` and of `H`.
pub fn gen_piso(g: &GraphInput, h: &GraphInput) -> Result<Instance> {
    g.validate()?;
    h.validate()?;
    let f = FieldTag::Rationals;
    let x = |v: usize, w: usize| Variable::new("x", &[v as i64, w as i64]);
    let pairs: Vec<(usize, usize)> = (0..g.vertices)
        .flat_map(|v| (0..h.vertices).map(move |w| (v, w)))
        .filter(|&(v, w)| g.vertex_colour(v) == h.vertex_colour(w))
        .collect();
    let xvars: Vec<Variable> = pairs.iter().map(|&(v, w)| x(v, w)).collect();
    let mut axioms: Vec<Polynomial> = Vec::new();
    let mut seen: HashSet<Polynomial> = HashSet::new();
    let mut push = |p: Polynomial, axioms: &mut Vec<Polynomial>| {
        if seen.insert(p.clone()) {
            axioms.push(p);
        }
    };
    for w in 0..h.vertices {
        let col: Vec<Variable> = pairs
            .iter()
            .filter(|p| p.1 == w)
            .map(|&(v, w)| x(v, w))
            .collect();
        push(linear(f, &col, f.from_i64(-1)), &mut axioms);
    }
    for v in 0..g.vertices {
        let row: Vec<Variable> = pairs
            .iter()
            .filter(|p| p.0 == v)
            .map(|&(v, w)| x(v, w))
            .collect();
        push(linear(f, &row, f.from_i64(-1)), &mut axioms);
    }
    for (k, &(v, w)) in pairs.iter().enumerate() {
        for &(v2, w2) in &pairs[k + 1..] {
            let local_iso =
                (v == v2) == (w == w2) && g.edge_profile(v, v2) == h.edge_profile(w, w2);
            if !local_iso {
                let m = Monomial::var(x(v, w)).mul(&Monomial::var(x(v2, w2)));
                push(Polynomial::monomial(f, m), &mut axioms);
            }
        }
    }
    for v in &xvars {
        push(boolean_axiom(f, v), &mut axioms);
    }
    let yvars: Vec<Variable> = (0..axioms.len() as i64)
        .map(|k| Variable::new("y", &[k]))
        .collect();
    let mut gens = Vec::new();
    for a in &g.aut {
        let map = pairs.iter().map(|&(v, w)| (x(v, w), x(a[v], w))).collect();
        gens.push(VariablePermutation::new(map)?);
    }
    for a in &h.aut {
        let map = pairs.iter().map(|&(v, w)| (x(v, w), x(v, a[w]))).collect();
        gens.push(VariablePermutation::new(map)?);
    }
    Instance::new(
        Family::Piso,
        f,
        xvars,
        axioms,
        yvars,
        GroupPresentation::new(gens),
    )
}

/// Six GF(2) equations over `x[1], xs[1], x[2], xs[2]` (the `s` marks the
/// starred copy) plus Boolean axioms. The group is generated by swapping the
/// indices 1 ↔ 2 and by swapping starred with unstarred variables; it has four
/// elements and splits the six equations into three orbits of size two.
pub fn gen_counterexample_f2() -> Result<Instance> {
    let f = FieldTag::F2;
    let x1 = Variable::new("x", &[1]);
    let x2 = Variable::new("x", &[2]);
    let s1 = Variable::new("xs", &[1]);
    let s2 = Variable::new("xs", &[2]);
    let xvars = vec![x1.clone(), s1.clone(), x2.clone(), s2.clone()];
    let eqs = [
        [&x1, &x2],
        [&s1, &s2],
        [&s1, &x2],
        [&x1, &s2],
        [&x1, &s1],
        [&x2, &s2],
    ];
    let mut axioms: Vec<Polynomial> = eqs
        .iter()
        .map(|[a, b]| linear(f, &[(*a).clone(), (*b).clone()], f.one()))
        .collect();
    axioms.extend(xvars.iter().map(|v| boolean_axiom(f, v)));
    let yvars = (1..=axioms.len() as i64)
        .map(|i| Variable::new("y", &[i]))
        .collect();
    let pi = VariablePermutation::from_moves(
        &xvars,
        [
            (x1.clone(), x2.clone()),
            (x2.clone(), x1.clone()),
            (s1.clone(), s2.clone()),
            (s2.clone(), s1.clone()),
        ],
    )?;
    let pi_star = VariablePermutation::from_moves(
        &xvars,
        [
            (x1.clone(), s1.clone()),
            (s1.clone(), x1.clone()),
            (x2.clone(), s2.clone()),
            (s2.clone(), x2.clone()),
        ],
    )?;
    let group = GroupPresentation::new(vec![pi, pi_star]).with_order_hint(4);
    Instance::new(Family::Counterexample, f, xvars, axioms, yvars, group)
}
