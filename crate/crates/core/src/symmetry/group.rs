use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::algebra::{Monomial, Polynomial, Variable};
use crate::error::{Error, Result};

/// Default cap on the number of group elements enumerated.
pub const DEFAULT_GROUP_CAP: u64 = 1_000_000;

/// A bijection of variables over a declared support.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariablePermutation {
    map: BTreeMap<Variable, Variable>,
}

impl VariablePermutation {
    /// Fails unless `map` is a bijection of its key set onto itself.
    pub fn new(map: BTreeMap<Variable, Variable>) -> Result<Self> {
        let image: BTreeSet<&Variable> = map.values().collect();
        if image.len() != map.len() {
            return Err(Error::NotBijection("two variables share an image".into()));
        }
        if let Some(v) = image.iter().find(|v| !map.contains_key(**v)) {
            return Err(Error::NotBijection(format!(
                "{v} is an image but not in the support"
            )));
        }
        Ok(VariablePermutation { map })
    }

    pub fn identity<'a>(support: impl IntoIterator<Item = &'a Variable>) -> Self {
        VariablePermutation {
            map: support
                .into_iter()
                .map(|v| (v.clone(), v.clone()))
                .collect(),
        }
    }

    /// A permutation given by its moved pairs, extended by the identity on
    /// the rest of `support`.
    pub fn from_moves<'a>(
        support: impl IntoIterator<Item = &'a Variable>,
        moves: impl IntoIterator<Item = (Variable, Variable)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Variable, Variable> = support
            .into_iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        let mut seen = BTreeSet::new();
        for (a, b) in moves {
            if !map.contains_key(&a) {
                return Err(Error::UndefinedVariable(a.to_string()));
            }
            if !seen.insert(a.clone()) {
                return Err(Error::NotBijection(format!("{a} is mapped twice")));
            }
            map.insert(a, b);
        }
        Self::new(map)
    }

    /// Lifts an index permutation: every support variable in namespace `ns`
    /// has its index at `pos` replaced by `f(index)`.
    pub fn index_perm<'a>(
        support: impl IntoIterator<Item = &'a Variable>,
        ns: &str,
        pos: usize,
        f: &dyn Fn(i64) -> i64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for v in support {
            let w = if v.namespace() == ns && v.index().len() > pos {
                let mut idx = v.index().to_vec();
                idx[pos] = f(idx[pos]);
                v.with_index(&idx)
            } else {
                v.clone()
            };
            map.insert(v.clone(), w);
        }
        Self::new(map)
    }

    pub fn support(&self) -> impl Iterator<Item = &Variable> {
        self.map.keys()
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.map.contains_key(v)
    }

    pub fn mapping(&self) -> &BTreeMap<Variable, Variable> {
        &self.map
    }

    pub fn moved(&self) -> impl Iterator<Item = (&Variable, &Variable)> {
        self.map.iter().filter(|(a, b)| a != b)
    }

    pub fn is_identity(&self) -> bool {
        self.moved().next().is_none()
    }

    pub fn apply(&self, v: &Variable) -> Result<Variable> {
        self.map
            .get(v)
            .cloned()
            .ok_or_else(|| Error::UndefinedVariable(v.to_string()))
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<Monomial> {
        m.rename(&mut |v| self.apply(v))
    }

    /// The polynomial action `p ↦ π(p)`.
    pub fn apply_poly(&self, p: &Polynomial) -> Result<Polynomial> {
        p.rename(|v| self.apply(v))
    }

    pub fn inverse(&self) -> Self {
        VariablePermutation {
            map: self
                .map
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// `self ∘ other`: apply `other` first. Variables outside a support are fixed.
    pub fn compose(&self, other: &Self) -> Self {
        let mut map = BTreeMap::new();
        for v in self.map.keys().chain(other.map.keys()) {
            let a = other.map.get(v).unwrap_or(v);
            let b = self.map.get(a).unwrap_or(a);
            map.insert(v.clone(), b.clone());
        }
        VariablePermutation { map }
    }

    /// The same permutation with its support enlarged by fixed points.
    pub fn extended<'a>(&self, support: impl IntoIterator<Item = &'a Variable>) -> Self {
        let mut map = self.map.clone();
        for v in support {
            map.entry(v.clone()).or_insert_with(|| v.clone());
        }
        VariablePermutation { map }
    }
}

impl fmt::Display for VariablePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moved().map(|(a, b)| format!("{a} -> {b}")).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for VariablePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// A permutation group given by generators acting on a shared support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<VariablePermutation>,
    pub order_hint: Option<u64>,
}

impl GroupPresentation {
    /// Normalises generators to the union of their supports.
    pub fn new(generators: Vec<VariablePermutation>) -> Self {
        let support: BTreeSet<Variable> = generators
            .iter()
            .flat_map(|g| g.support().cloned())
            .collect();
        GroupPresentation {
            generators: generators.iter().map(|g| g.extended(&support)).collect(),
            order_hint: None,
        }
    }

    pub fn trivial() -> Self {
        GroupPresentation {
            generators: Vec::new(),
            order_hint: Some(1),
        }
    }

    pub fn with_order_hint(mut self, order: u64) -> Self {
        self.order_hint = Some(order);
        self
    }

    pub fn support(&self) -> BTreeSet<Variable> {
        self.generators
            .iter()
            .flat_map(|g| g.support().cloned())
            .collect()
    }

    /// Every generator extended by fixed points to `support`.
    pub fn extended<'a>(&self, support: impl IntoIterator<Item = &'a Variable> + Clone) -> Self {
        GroupPresentation {
            generators: self
                .generators
                .iter()
                .map(|g| g.extended(support.clone()))
                .collect(),
            order_hint: self.order_hint,
        }
    }

    /// Generic orbit closure under the generators.
    pub fn orbit_with<T: Ord + Clone>(
        &self,
        item: &T,
        act: impl Fn(&VariablePermutation, &T) -> Result<T>,
    ) -> Result<BTreeSet<T>> {
        let mut seen = BTreeSet::new();
        seen.insert(item.clone());
        let mut queue = VecDeque::from([item.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = act(g, &x)?;
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    pub fn orbit_variable(&self, v: &Variable) -> Result<BTreeSet<Variable>> {
        self.orbit_with(v, |g, x| g.apply(x))
    }

    pub fn orbit_monomial(&self, m: &Monomial) -> Result<BTreeSet<Monomial>> {
        self.orbit_with(m, |g, x| g.apply_monomial(x))
    }

    /// All group elements by closure, or a cap error.
    pub fn elements(&self, cap: u64) -> Result<Vec<VariablePermutation>> {
        let support: Vec<Variable> = self.support().into_iter().collect();
        let pos: HashMap<&Variable, u32> = support
            .iter()
            .enumerate()
            .map(|(i, v)| (v, i as u32))
            .collect();
        let gens: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| support.iter().map(|v| pos[&g.map[v]]).collect())
            .collect();
        let id: Vec<u32> = (0..support.len() as u32).collect();
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &gens {
                let q: Vec<u32> = p.iter().map(|&i| g[i as usize]).collect();
                if seen.insert(q.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::CapExceeded {
                            what: "group enumeration",
                            cap,
                        });
                    }
                    order.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(order
            .into_iter()
            .map(|p| VariablePermutation {
                map: support
                    .iter()
                    .zip(p.iter())
                    .map(|(v, &i)| (v.clone(), support[i as usize].clone()))
                    .collect(),
            })
            .collect())
    }

    pub fn order(&self, cap: u64) -> Result<u64> {
        Ok(self.elements(cap)?.len() as u64)
    }

    /// The group generated by both generator lists.
    pub fn join(&self, other: &GroupPresentation) -> GroupPresentation {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        GroupPresentation::new(gens)
    }
}

/// Generators of the symmetric group on `items` (a transposition and a full cycle).
pub fn symmetric_group_moves<T: Clone>(items: &[T]) -> Vec<Vec<(T, T)>> {
    let n = items.len();
    let mut out = Vec::new();
    if n >= 2 {
        out.push(vec![
            (items[0].clone(), items[1].clone()),
            (items[1].clone(), items[0].clone()),
        ]);
    }
    if n >= 3 {
        out.push(
            (0..n)
                .map(|i| (items[i].clone(), items[(i + 1) % n].clone()))
                .collect(),
        );
    }
    out
}

/// Extends each generator to the axiom variables: `π(y_i) = y_j` where `π(f_i) = f_j`.
pub fn induce_y_action(
    group: &GroupPresentation,
    axioms: &[Polynomial],
    yvars: &[Variable],
) -> Result<GroupPresentation> {
    if axioms.len() != yvars.len() {
        return Err(Error::invalid(format!(
            "{} axioms but {} axiom variables",
            axioms.len(),
            yvars.len()
        )));
    }
    let mut index: HashMap<&Polynomial, usize> = HashMap::new();
    for (i, f) in axioms.iter().enumerate() {
        if let Some(&j) = index.get(f) {
            return Err(Error::DuplicateAxiom(j, i));
        }
        index.insert(f, i);
    }
    let mut gens = Vec::new();
    for (gi, g) in group.generators.iter().enumerate() {
        let mut map = g.map.clone();
        for (i, f) in axioms.iter().enumerate() {
            let image = g.apply_poly(f)?;
            let j = *index.get(&image).ok_or(Error::NotInvariant {
                generator: gi,
                axiom: i,
            })?;
            map.insert(yvars[i].clone(), yvars[j].clone());
        }
        gens.push(VariablePermutation::new(map)?);
    }
    Ok(GroupPresentation {
        generators: gens,
        order_hint: group.order_hint,
    })
}

/// Whether every generator permutes the axiom multiset.
pub fn check_invariance(group: &GroupPresentation, axioms: &[Polynomial]) -> bool {
    let mut base: Vec<&Polynomial> = axioms.iter().collect();
    base.sort_by_cached_key(|p| p.to_string());
    group.generators.iter().all(|g| {
        let Ok(mut imgs) = axioms
            .iter()
            .map(|f| g.apply_poly(f))
            .collect::<Result<Vec<_>>>()
        else {
            return false;
        };
        imgs.sort_by_cached_key(|p| p.to_string());
        imgs.iter().zip(base.iter()).all(|(a, b)| a == *b)
    })
}

/// Fundamental-cycle generators of the cycle space of a connected multigraph,
/// acting on the edge variables `x[e,0], x[e,1]` by swapping both ends of
/// every edge on the cycle.
pub fn cycle_space_generators(
    num_vertices: usize,
    edges: &[(usize, usize)],
) -> Result<GroupPresentation> {
    if num_vertices == 0 {
        return Err(Error::invalid("graph has no vertices"));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_vertices];
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a >= num_vertices || b >= num_vertices {
            return Err(Error::invalid(format!("edge {e} has an unknown endpoint")));
        }
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    // BFS spanning tree from the lowest vertex.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; num_vertices];
    let mut depth = vec![usize::MAX; num_vertices];
    let mut tree_edge = vec![false; edges.len()];
    depth[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                tree_edge[e] = true;
                queue.push_back(w);
            }
        }
    }
    if depth.contains(&usize::MAX) {
        return Err(Error::invalid("graph is not connected"));
    }
    let support: Vec<Variable> = (0..edges.len() as i64)
        .flat_map(|e| [Variable::new("x", &[e, 0]), Variable::new("x", &[e, 1])])
        .collect();
    let mut gens = Vec::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let mut flip = BTreeSet::from([e]);
        let (mut u, mut w) = (a, b);
        while u != w {
            if depth[u] < depth[w] {
                std::mem::swap(&mut u, &mut w);
            }
            let (p, pe) = parent[u].expect("non-root has a parent");
            // Symmetric difference handles repeated tree edges.
            if !flip.insert(pe) {
                flip.remove(&pe);
            }
            u = p;
        }
        let moves = flip.iter().flat_map(|&f| {
            let f = f as i64;
            [
                (Variable::new("x", &[f, 0]), Variable::new("x", &[f, 1])),
                (Variable::new("x", &[f, 1]), Variable::new("x", &[f, 0])),
            ]
        });
        gens.push(VariablePermutation::from_moves(&support, moves)?);
    }
    let order = 1u64.checked_shl(gens.len() as u32);
    let mut g = GroupPresentation::new(gens);
    if g.generators.is_empty() {
        g.order_hint = Some(1);
    } else {
        g.order_hint = order;
    }
    Ok(g)
}
