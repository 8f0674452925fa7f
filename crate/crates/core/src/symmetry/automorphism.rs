use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use super::group::VariablePermutation;
use crate::circuit::{Circuit, Gate, GateLabel};
use crate::error::{Error, Result};

/// Default cap on circuit size for automorphism search.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 5000;

/// Upper bound on backtracking steps before a search is abandoned.
const SEARCH_STEP_LIMIT: u64 = 50_000_000;

/// Whether `w` is a label- and wire-preserving automorphism of `c` that acts
/// on input gates as `gen` does and permutes the designated outputs.
pub fn verify_witness(c: &Circuit, gen: &VariablePermutation, w: &[usize]) -> bool {
    let n = c.gates.len();
    if w.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &t in w {
        if t >= n || std::mem::replace(&mut seen[t], true) {
            return false;
        }
    }
    for (id, g) in c.gates.iter().enumerate() {
        let target = &c.gates[w[id]];
        let label_ok = match (&g.label, &target.label) {
            (GateLabel::Input(v), GateLabel::Input(u)) => gen.apply(v).is_ok_and(|gv| &gv == u),
            (GateLabel::Const(a), GateLabel::Const(b)) => a == b,
            (GateLabel::Add, GateLabel::Add) | (GateLabel::Mul, GateLabel::Mul) => true,
            _ => false,
        };
        if !label_ok {
            return false;
        }
        let mut mapped: Vec<usize> = g.children.iter().map(|&ch| w[ch]).collect();
        mapped.sort_unstable();
        if mapped != target.children {
            return false;
        }
    }
    let outs: BTreeSet<usize> = c.outputs.iter().copied().collect();
    c.outputs.iter().all(|o| outs.contains(&w[*o]))
}

fn mapped_gate(g: &Gate, gen: &VariablePermutation, w: &[usize]) -> Option<Gate> {
    Some(match &g.label {
        GateLabel::Input(v) => Gate::leaf(GateLabel::Input(gen.apply(v).ok()?)),
        GateLabel::Const(_) => g.clone(),
        _ => Gate::op(
            g.label.clone(),
            g.children.iter().map(|&ch| w[ch]).collect(),
        ),
    })
}

/// Derives the automorphism extending `gen` bottom-up, assuming gates are
/// structurally unique (as in hash-consed circuits). Returns `None` if some
/// image gate is missing or the result is not an automorphism.
pub fn derive_witness(c: &Circuit, gen: &VariablePermutation) -> Option<Vec<usize>> {
    let mut index: HashMap<&Gate, usize> = HashMap::with_capacity(c.gates.len());
    for (id, g) in c.gates.iter().enumerate() {
        if index.insert(g, id).is_some() {
            return None;
        }
    }
    let mut w = vec![0usize; c.gates.len()];
    for (id, g) in c.gates.iter().enumerate() {
        let img = mapped_gate(g, gen, &w)?;
        w[id] = *index.get(&img)?;
    }
    verify_witness(c, gen, &w).then_some(w)
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Colours invariant under any automorphism extending `gen`: input gates are
/// coloured by their cycle under `gen`, then colours are refined downward
/// (children) and upward (parents).
fn refined_colours(c: &Circuit, gen: &VariablePermutation) -> Vec<u64> {
    let n = c.gates.len();
    let mut cycle_rep: HashMap<String, String> = HashMap::new();
    let mut down = vec![0u64; n];
    for (id, g) in c.gates.iter().enumerate() {
        down[id] = match &g.label {
            GateLabel::Input(v) => {
                let key = v.to_string();
                let rep = cycle_rep.entry(key).or_insert_with(|| {
                    let mut best = v.clone();
                    let mut cur = v.clone();
                    while let Ok(next) = gen.apply(&cur) {
                        if &next == v {
                            break;
                        }
                        best = best.min(next.clone());
                        cur = next;
                    }
                    best.to_string()
                });
                hash_of(&("in", rep.as_str()))
            }
            GateLabel::Const(s) => hash_of(&("const", s)),
            GateLabel::Add | GateLabel::Mul => {
                let mut ch: Vec<u64> = g.children.iter().map(|&x| down[x]).collect();
                ch.sort_unstable();
                hash_of(&(matches!(g.label, GateLabel::Add), ch))
            }
        };
    }
    let parents = c.parents();
    let outputs: BTreeSet<usize> = c.outputs.iter().copied().collect();
    let mut colour = down.clone();
    for _ in 0..3 {
        let mut next = vec![0u64; n];
        for id in 0..n {
            let mut ps: Vec<(u64, usize)> = parents[id]
                .iter()
                .map(|&p| {
                    (
                        colour[p],
                        c.gates[p].children.iter().filter(|&&x| x == id).count(),
                    )
                })
                .collect();
            ps.sort_unstable();
            next[id] = hash_of(&(down[id], outputs.contains(&id), ps));
        }
        colour = next;
    }
    colour
}

/// Searches for an automorphism of `c` extending `gen` by backtracking over
/// structurally compatible gate images filtered by refined colours.
pub fn search_automorphism(
    c: &Circuit,
    gen: &VariablePermutation,
    cap: usize,
) -> Result<Option<Vec<usize>>> {
    let n = c.gates.len();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "automorphism search gate",
            cap: cap as u64,
        });
    }
    if let Some(w) = derive_witness(c, gen) {
        return Ok(Some(w));
    }
    let colour = refined_colours(c, gen);
    let mut by_struct: HashMap<&Gate, Vec<usize>> = HashMap::new();
    for (id, g) in c.gates.iter().enumerate() {
        by_struct.entry(g).or_default().push(id);
    }
    let mut w = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut steps = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        id: usize,
        c: &Circuit,
        gen: &VariablePermutation,
        colour: &[u64],
        by_struct: &HashMap<&Gate, Vec<usize>>,
        w: &mut Vec<usize>,
        used: &mut Vec<bool>,
        steps: &mut u64,
    ) -> Result<bool> {
        if id == c.gates.len() {
            return Ok(verify_witness(c, gen, w));
        }
        *steps += 1;
        if *steps > SEARCH_STEP_LIMIT {
            return Err(Error::CapExceeded {
                what: "automorphism search step",
                cap: SEARCH_STEP_LIMIT,
            });
        }
        let Some(img) = mapped_gate(&c.gates[id], gen, w) else {
            return Ok(false);
        };
        let Some(cands) = by_struct.get(&img) else {
            return Ok(false);
        };
        for &t in cands {
            if used[t] || colour[t] != colour[id] {
                continue;
            }
            used[t] = true;
            w[id] = t;
            if rec(id + 1, c, gen, colour, by_struct, w, used, steps)? {
                return Ok(true);
            }
            used[t] = false;
            w[id] = usize::MAX;
        }
        Ok(false)
    }

    let found = rec(
        0, c, gen, &colour, &by_struct, &mut w, &mut used, &mut steps,
    )?;
    Ok(found.then_some(w))
}

/// Rederives witnesses for every generator, returning `false` if some
/// generator has no structurally derivable witness.
pub fn attach_witnesses(c: &mut Circuit, generators: &[VariablePermutation]) -> bool {
    let mut all = true;
    c.witnesses.clear();
    for (i, g) in generators.iter().enumerate() {
        match derive_witness(c, g) {
            Some(w) => {
                c.witnesses.insert(i, w);
            }
            None => all = false,
        }
    }
    all
}
