//! The ŷ-linear symmetric refutation of `PHP(n+1, n)` over ℚ.
//!
//! `B_D` is the sum of the monomials encoding injections from the pigeon set
//! `D` into the holes. All `B_D` (and the hole-deleted `B_D^{∖j}`) are shared
//! gates computed by the inclusion–exclusion recursion
//! `C_D = Σ_k (−1)^{k−1} (k!/|D|) Σ_{|D_k|=k} (Σ_j X_{D_k→j}) · B_{D∖D_k}`.
//! The certificate is `Σ_i yRow_i · q_i + Σ_{i<i',j} yHole_{i,i',j} · q_{i,i',j}`
//! with `q_i = −1/(n+1) − Σ_{D∌i} α(n+1,|D|) B_D` and
//! `q_{i,i',j} = Σ_{D ⊆ [n+1]∖{i,i'}} 2α(n+1,|D|+1) B_D^{∖j}`, where
//! `α(N,k) = 1/(C(N,k)·(N−k))`.

use std::collections::BTreeMap;

use crate::algebra::{FieldTag, Monomial, Polynomial, Scalar, Variable};
use crate::circuit::{eval_symbolic, Budget, CircuitBuilder};
use crate::constructions::Certificate;
use crate::error::{Error, Result};
use crate::instances::{Family, Instance};
use crate::symmetry::DEFAULT_AUTOMORPHISM_CAP;

const Q: FieldTag = FieldTag::Rationals;

fn xv(i: usize, j: usize) -> Variable {
    Variable::new("x", &[i as i64, j as i64])
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |r, i| r * (n - i) / (i + 1))
}

fn factorial(n: u64) -> i64 {
    (1..=n as i64).product()
}

/// `α(N, k) = 1 / (C(N,k) · (N − k))`, defined for `k < N`.
pub fn php_alpha(big_n: usize, k: usize) -> Result<Scalar> {
    if k >= big_n {
        return Err(Error::invalid(format!("alpha({big_n}, {k}) is undefined")));
    }
    let d = binomial(big_n as u64, k as u64) * (big_n - k) as u64;
    Q.ratio(1, d as i64)
}

/// Pigeons of a subset mask (bit `i−1` for pigeon `i`).
fn members(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b as usize + 1)
        .collect()
}

/// Gates for `B_D` (holes `holes`) for every pigeon subset `D` of
/// `[pigeons]` with `|D| ≤ |holes|`, keyed by mask.
fn bd_family(
    b: &mut CircuitBuilder,
    pigeons: usize,
    holes: &[usize],
    budget: &mut Budget,
) -> Result<BTreeMap<u32, usize>> {
    let mut gates: BTreeMap<u32, usize> = BTreeMap::new();
    let mut masks: Vec<u32> = (0..1u32 << pigeons)
        .filter(|m| m.count_ones() as usize <= holes.len())
        .collect();
    masks.sort_by_key(|m| m.count_ones());
    for d in masks {
        let ps = members(d);
        let size = ps.len();
        let g = match size {
            0 => b.constant_i64(1),
            1 => {
                let ins = holes.iter().map(|&j| b.input(xv(ps[0], j))).collect();
                b.add(ins)
            }
            _ => {
                budget.charge(1u64 << size, "pigeon subset recursion")?;
                let mut outer = Vec::new();
                for k in 1..=size {
                    let mut inner = Vec::new();
                    // Submasks of d with k elements.
                    let mut sub = d;
                    loop {
                        if sub.count_ones() as usize == k {
                            let hs: Vec<usize> = holes
                                .iter()
                                .map(|&j| {
                                    let ins = members(sub)
                                        .into_iter()
                                        .map(|i| b.input(xv(i, j)))
                                        .collect();
                                    b.mul(ins)
                                })
                                .collect();
                            let s = b.add(hs);
                            let rest = d & !sub;
                            inner.push(if rest == 0 {
                                s
                            } else {
                                b.mul(vec![s, gates[&rest]])
                            });
                        }
                        if sub == 0 {
                            break;
                        }
                        sub = (sub - 1) & d;
                    }
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    let c = Q.ratio(sign * factorial(k as u64), size as i64)?;
                    let sum = b.add(inner);
                    outer.push(b.scale(&c, sum));
                }
                b.add(outer)
            }
        };
        gates.insert(d, g);
    }
    Ok(gates)
}

fn php_n(inst: &Instance) -> Result<usize> {
    match &inst.family {
        Family::Php { n } => Ok(*n),
        other => Err(Error::invalid(format!(
            "expected a pigeonhole instance, got '{other}'"
        ))),
    }
}

/// The injection sums `B_D` for all pigeon subsets of `[n+1]` into `n` holes,
/// as computed by the shared recursion, keyed by pigeon set.
pub fn php_injection_sums(
    n: usize,
    budget: &mut Budget,
) -> Result<BTreeMap<Vec<usize>, Polynomial>> {
    let mut b = CircuitBuilder::new(Q);
    let holes: Vec<usize> = (1..=n).collect();
    let fam = bd_family(&mut b, n + 1, &holes, budget)?;
    let keys: Vec<u32> = fam.keys().copied().collect();
    let c = b.finish(keys.iter().map(|k| fam[k]).collect());
    let mut out = BTreeMap::new();
    for (k, &o) in keys.iter().zip(&c.outputs) {
        out.insert(members(*k), eval_symbolic(&c, o, budget)?);
    }
    Ok(out)
}

/// The refutation of `PHP(n+1, n)`; gate count `O(n · 3^n)`.
pub fn build_php(inst: &Instance, budget: &mut Budget) -> Result<Certificate> {
    let n = php_n(inst)?;
    let pigeons = n + 1;
    let mut b = CircuitBuilder::new(Q);
    let all_holes: Vec<usize> = (1..=n).collect();
    let full = bd_family(&mut b, pigeons, &all_holes, budget)?;
    let mut deleted = Vec::with_capacity(n);
    for j in 1..=n {
        let holes: Vec<usize> = all_holes.iter().copied().filter(|&h| h != j).collect();
        deleted.push(bd_family(&mut b, pigeons, &holes, budget)?);
    }
    let yrow = |i: usize| Variable::new("yRow", &[i as i64]);
    let yhole =
        |i: usize, i2: usize, j: usize| Variable::new("yHole", &[i as i64, i2 as i64, j as i64]);
    let mut parts = Vec::new();
    for i in 1..=pigeons {
        let mut terms = vec![b.constant(Q.ratio(-1, pigeons as i64)?)];
        for (&d, &g) in &full {
            let size = d.count_ones() as usize;
            if size == 0 || d >> (i - 1) & 1 == 1 {
                continue;
            }
            let c = Q.neg(&php_alpha(pigeons, size)?);
            terms.push(b.scale(&c, g));
        }
        let q = b.add(terms);
        let y = b.input(yrow(i));
        parts.push(b.mul(vec![y, q]));
    }
    for i in 1..=pigeons {
        for i2 in i + 1..=pigeons {
            let pair = (1u32 << (i - 1)) | (1u32 << (i2 - 1));
            for j in 1..=n {
                let mut terms = Vec::new();
                for (&d, &g) in &deleted[j - 1] {
                    if d & pair != 0 {
                        continue;
                    }
                    let c = Q.mul(
                        &Q.from_i64(2),
                        &php_alpha(pigeons, d.count_ones() as usize + 1)?,
                    );
                    terms.push(if d == 0 {
                        b.constant(c)
                    } else {
                        b.scale(&c, g)
                    });
                }
                let q = b.add(terms);
                let y = b.input(yhole(i, i2, j));
                parts.push(b.mul(vec![y, q]));
            }
        }
    }
    let out = b.add(parts);
    let circuit = b.finish(vec![out]);
    let mut cert = Certificate::new(inst, circuit).with_claims(Some(true), Some(n as u32 + 1));
    cert.attach_symmetry(inst, DEFAULT_AUTOMORPHISM_CAP)?;
    cert.notes
        .push("hole-pair multipliers use 2*alpha(n+1, |D|+1)".into());
    Ok(cert)
}

/// `Σ` of the monomials encoding injections `pigeons ↪ [holes]`, by enumeration.
pub fn injection_sum_brute_force(pigeons: &[usize], holes: usize) -> Polynomial {
    fn rec(ps: &[usize], holes: usize, used: &mut Vec<bool>, acc: Monomial, out: &mut Polynomial) {
        let Some((&p, rest)) = ps.split_first() else {
            out.add_term(acc, Q.one());
            return;
        };
        for j in 1..=holes {
            if !used[j] {
                used[j] = true;
                rec(rest, holes, used, acc.mul(&Monomial::var(xv(p, j))), out);
                used[j] = false;
            }
        }
    }
    let mut out = Polynomial::zero(Q);
    rec(
        pigeons,
        holes,
        &mut vec![false; holes + 1],
        Monomial::one(),
        &mut out,
    );
    out
}
