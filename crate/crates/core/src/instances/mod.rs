//! Instance families: polynomial axiom systems with their symmetry groups and
//! one axiom variable per axiom.

mod generators;
mod graph;
mod io;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::algebra::{FieldTag, Polynomial, Scalar, Variable};
use crate::error::{Error, Result};
use crate::symmetry::{check_invariance, induce_y_action, GroupPresentation};

pub use generators::{
    boolean_axiom, gen_cfi, gen_counterexample_f2, gen_php, gen_piso, gen_subset_sum,
};
pub use graph::{parse_graph, write_graph, GraphInput};
pub use io::{parse_instance, write_instance};

/// Which family an instance belongs to, with the parameters builders need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cfi {
        vertices: usize,
        edges: Vec<(usize, usize)>,
        u: usize,
        a: u8,
    },
    SubsetSum {
        n: usize,
        beta: String,
        lifted: bool,
    },
    Php {
        n: usize,
    },
    Piso,
    Counterexample,
    Custom,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cfi {
                vertices,
                edges,
                u,
                a,
            } => {
                let es: Vec<String> = edges.iter().map(|(x, y)| format!("{x}-{y}")).collect();
                write!(
                    f,
                    "cfi vertices={vertices} u={u} a={a} edges={}",
                    es.join(",")
                )
            }
            Family::SubsetSum { n, beta, lifted } => {
                write!(f, "subsetsum n={n} beta={beta} lifted={lifted}")
            }
            Family::Php { n } => write!(f, "php n={n}"),
            Family::Piso => f.write_str("piso"),
            Family::Counterexample => f.write_str("example42"),
            Family::Custom => f.write_str("custom"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts.next().unwrap_or("");
        let kv: BTreeMap<&str, &str> = parts.filter_map(|p| p.split_once('=')).collect();
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::invalid(format!("family '{name}' lacks '{k}'")))
        };
        let num = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| Error::invalid(format!("bad value for '{k}'")))
        };
        Ok(match name {
            "cfi" => {
                let mut edges = Vec::new();
                for e in get("edges")?.split(',').filter(|e| !e.is_empty()) {
                    let (a, b) = e
                        .split_once('-')
                        .ok_or_else(|| Error::invalid(format!("bad edge '{e}'")))?;
                    let a = a
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad edge '{e}'")))?;
                    let b = b
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad edge '{e}'")))?;
                    edges.push((a, b));
                }
                Family::Cfi {
                    vertices: num("vertices")?,
                    edges,
                    u: num("u")?,
                    a: num("a")? as u8,
                }
            }
            "subsetsum" => Family::SubsetSum {
                n: num("n")?,
                beta: get("beta")?.to_string(),
                lifted: get("lifted")? == "true",
            },
            "php" => Family::Php { n: num("n")? },
            "piso" => Family::Piso,
            "example42" => Family::Counterexample,
            "custom" => Family::Custom,
            _ => return Err(Error::invalid(format!("unknown family '{name}'"))),
        })
    }
}

/// An axiom system `F ⊆ 𝔽[X]` with axiom variables `Y` and a symmetry group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub family: Family,
    pub field: FieldTag,
    pub xvars: Vec<Variable>,
    pub axioms: Vec<Polynomial>,
    pub yvars: Vec<Variable>,
    /// The group acting on `X`.
    pub group: GroupPresentation,
    /// The same generators extended to `X ⊎ Y` by the induced action.
    pub induced: GroupPresentation,
}

impl Instance {
    /// Validates the axioms and derives the induced action on `Y`.
    pub fn new(
        family: Family,
        field: FieldTag,
        xvars: Vec<Variable>,
        axioms: Vec<Polynomial>,
        yvars: Vec<Variable>,
        group: GroupPresentation,
    ) -> Result<Self> {
        let xset: BTreeSet<&Variable> = xvars.iter().collect();
        if xset.len() != xvars.len() {
            return Err(Error::invalid("instance variables repeat"));
        }
        let yset: BTreeSet<&Variable> = yvars.iter().collect();
        if yset.len() != yvars.len() || yset.iter().any(|y| xset.contains(y)) {
            return Err(Error::invalid(
                "axiom variables must be distinct and disjoint from instance variables",
            ));
        }
        for (i, f) in axioms.iter().enumerate() {
            field.check(&f.field())?;
            if let Some(v) = f.variables().into_iter().find(|v| !xset.contains(v)) {
                return Err(Error::invalid(format!(
                    "axiom {i} uses undeclared variable {v}"
                )));
            }
        }
        if let Some(v) = group.support().iter().find(|v| !xset.contains(v)) {
            return Err(Error::invalid(format!(
                "group moves {v}, which is not an instance variable"
            )));
        }
        let group = group.extended(&xvars);
        let induced = induce_y_action(&group, &axioms, &yvars)?;
        debug_assert!(check_invariance(&group, &axioms));
        Ok(Instance {
            family,
            field,
            xvars,
            axioms,
            yvars,
            group,
            induced,
        })
    }

    /// The same system under a different group.
    pub fn with_group(&self, group: GroupPresentation) -> Result<Self> {
        Instance::new(
            self.family.clone(),
            self.field,
            self.xvars.clone(),
            self.axioms.clone(),
            self.yvars.clone(),
            group,
        )
    }

    /// `|F| = m + |X|`.
    pub fn size(&self) -> usize {
        self.axioms.len() + self.xvars.len()
    }

    /// `|X| + |Y|`.
    pub fn num_variables(&self) -> usize {
        self.xvars.len() + self.yvars.len()
    }

    pub fn yset(&self) -> BTreeSet<Variable> {
        self.yvars.iter().cloned().collect()
    }

    pub fn xset(&self) -> BTreeSet<Variable> {
        self.xvars.iter().cloned().collect()
    }

    /// `y_i ↦ f_i`.
    pub fn axiom_substitution(&self) -> BTreeMap<Variable, Polynomial> {
        self.yvars
            .iter()
            .cloned()
            .zip(self.axioms.iter().cloned())
            .collect()
    }

    /// `y_i ↦ 0`.
    pub fn zero_substitution(&self) -> BTreeMap<Variable, Polynomial> {
        self.yvars
            .iter()
            .map(|y| (y.clone(), Polynomial::zero(self.field)))
            .collect()
    }

    pub fn max_axiom_degree(&self) -> u32 {
        self.axioms
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn axiom_index(&self, y: &Variable) -> Option<usize> {
        self.yvars.iter().position(|v| v == y)
    }

    /// A satisfying 0/1 assignment, found by depth-first search that checks
    /// each axiom as soon as all of its variables are assigned.
    pub fn brute_force_solution(
        &self,
        max_vars: usize,
    ) -> Result<Option<BTreeMap<Variable, Scalar>>> {
        let n = self.xvars.len();
        if n > max_vars {
            return Err(Error::CapExceeded {
                what: "brute-force variable",
                cap: max_vars as u64,
            });
        }
        let pos: BTreeMap<&Variable, usize> =
            self.xvars.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (i, f) in self.axioms.iter().enumerate() {
            let last = f.variables().iter().map(|v| pos[v] + 1).max().unwrap_or(0);
            ready[last].push(i);
        }
        let mut point: BTreeMap<Variable, Scalar> = BTreeMap::new();
        if !self.check_ready(&ready[0], &point)? {
            return Ok(None);
        }
        self.dfs(0, &ready, &mut point)
    }

    fn check_ready(&self, axioms: &[usize], point: &BTreeMap<Variable, Scalar>) -> Result<bool> {
        for &i in axioms {
            if !self.field.is_zero(&self.axioms[i].evaluate(point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dfs(
        &self,
        k: usize,
        ready: &[Vec<usize>],
        point: &mut BTreeMap<Variable, Scalar>,
    ) -> Result<Option<BTreeMap<Variable, Scalar>>> {
        if k == self.xvars.len() {
            return Ok(Some(point.clone()));
        }
        for bit in [0, 1] {
            point.insert(self.xvars[k].clone(), self.field.from_i64(bit));
            if self.check_ready(&ready[k + 1], point)? {
                if let Some(sol) = self.dfs(k + 1, ready, point)? {
                    return Ok(Some(sol));
                }
            }
        }
        point.remove(&self.xvars[k]);
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_round_trip() {
        let fams = [
            Family::Cfi {
                vertices: 4,
                edges: vec![(0, 1), (2, 3)],
                u: 0,
                a: 1,
            },
            Family::SubsetSum {
                n: 3,
                beta: "4/1".into(),
                lifted: true,
            },
            Family::Php { n: 2 },
            Family::Piso,
            Family::Counterexample,
            Family::Custom,
        ];
        for f in fams {
            assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        }
    }
}
