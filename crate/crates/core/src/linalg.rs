//! Exact sparse linear systems over a [`FieldTag`].

use std::collections::BTreeMap;

use crate::algebra::{FieldTag, Scalar};
use crate::circuit::Budget;
use crate::error::Result;

/// A sparse row: column → nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Scalar>;

/// Outcome of [`LinearSystem::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// A solution with every free variable set to zero.
    Feasible(Vec<Scalar>),
    /// Row multipliers `w` with `wᵀA = 0` and `wᵀb ≠ 0`.
    Infeasible(SparseRow),
}

/// `A u = b` given row by row.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub field: FieldTag,
    pub columns: usize,
    pub rows: Vec<(SparseRow, Scalar)>,
}

struct Pivot {
    row: SparseRow,
    rhs: Scalar,
    provenance: SparseRow,
}

fn axpy(field: FieldTag, target: &mut SparseRow, c: &Scalar, src: &SparseRow) -> u64 {
    for (k, v) in src {
        let delta = field.mul(c, v);
        match target.get_mut(k) {
            Some(t) => {
                *t = field.add(t, &delta);
                if field.is_zero(t) {
                    target.remove(k);
                }
            }
            None => {
                if !field.is_zero(&delta) {
                    target.insert(*k, delta);
                }
            }
        }
    }
    src.len() as u64
}

impl LinearSystem {
    pub fn new(field: FieldTag, columns: usize) -> Self {
        LinearSystem {
            field,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: SparseRow, rhs: Scalar) {
        self.rows.push((row, rhs));
    }

    /// Gaussian elimination with the lowest column of each row as pivot.
    /// Each unit of work charged to `budget` is one scalar update.
    pub fn solve(&self, budget: &mut Budget) -> Result<Solution> {
        let f = self.field;
        let mut pivots: BTreeMap<usize, Pivot> = BTreeMap::new();
        for (i, (row, rhs)) in self.rows.iter().enumerate() {
            let mut row: SparseRow = row
                .iter()
                .filter(|(_, v)| !f.is_zero(v))
                .map(|(k, v)| (*k, v.clone()))
                .collect();
            let mut rhs = rhs.clone();
            let mut prov = SparseRow::from([(i, f.one())]);
            while let Some((&col, lead)) = row.iter().next() {
                let Some(p) = pivots.get(&col) else { break };
                let c = f.neg(lead);
                let work = axpy(f, &mut row, &c, &p.row) + axpy(f, &mut prov, &c, &p.provenance);
                budget.charge(work, "linear elimination")?;
                rhs = f.add(&rhs, &f.mul(&c, &p.rhs));
            }
            match row.iter().next() {
                None => {
                    if !f.is_zero(&rhs) {
                        return Ok(Solution::Infeasible(prov));
                    }
                }
                Some((&col, lead)) => {
                    let inv = f.inv(lead).expect("nonzero pivot is invertible");
                    let row = row.iter().map(|(k, v)| (*k, f.mul(&inv, v))).collect();
                    let provenance = prov.iter().map(|(k, v)| (*k, f.mul(&inv, v))).collect();
                    pivots.insert(
                        col,
                        Pivot {
                            row,
                            rhs: f.mul(&inv, &rhs),
                            provenance,
                        },
                    );
                }
            }
        }
        let mut x = vec![f.zero(); self.columns];
        for (&col, p) in pivots.iter().rev() {
            let mut v = p.rhs.clone();
            for (k, c) in p.row.iter().skip(1) {
                v = f.sub(&v, &f.mul(c, &x[*k]));
            }
            x[col] = v;
        }
        Ok(Solution::Feasible(x))
    }

    /// Whether `u` satisfies every row.
    pub fn satisfied_by(&self, u: &[Scalar]) -> bool {
        let f = self.field;
        self.rows.iter().all(|(row, rhs)| {
            let mut acc = f.zero();
            for (k, c) in row {
                acc = f.add(&acc, &f.mul(c, &u[*k]));
            }
            acc == *rhs
        })
    }

    /// Whether `w` certifies infeasibility: `wᵀA = 0` and `wᵀb ≠ 0`.
    pub fn refuted_by(&self, w: &SparseRow) -> bool {
        let f = self.field;
        let mut combo = SparseRow::new();
        let mut rhs = f.zero();
        for (i, c) in w {
            let Some((row, b)) = self.rows.get(*i) else {
                return false;
            };
            axpy(f, &mut combo, c, row);
            rhs = f.add(&rhs, &f.mul(c, b));
        }
        combo.is_empty() && !f.is_zero(&rhs)
    }
}
