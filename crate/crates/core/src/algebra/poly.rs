use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::field::{FieldTag, Scalar};
use crate::error::{Error, Result};

/// A variable: a namespace tag plus a tuple of small integer indices.
///
/// Ordering is by namespace, then lexicographically by index, which fixes the
/// canonical printing order of monomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    ns: Arc<str>,
    idx: SmallVec<[i64; 4]>,
}

impl Variable {
    pub fn new(ns: &str, idx: &[i64]) -> Self {
        Variable {
            ns: Arc::from(ns),
            idx: SmallVec::from_slice(idx),
        }
    }

    pub fn plain(ns: &str) -> Self {
        Self::new(ns, &[])
    }

    pub fn namespace(&self) -> &str {
        &self.ns
    }

    pub fn index(&self) -> &[i64] {
        &self.idx
    }

    /// Same namespace, new index tuple.
    pub fn with_index(&self, idx: &[i64]) -> Self {
        Variable {
            ns: self.ns.clone(),
            idx: SmallVec::from_slice(idx),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ns)?;
        if !self.idx.is_empty() {
            f.write_str("[")?;
            for (k, i) in self.idx.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A monomial: sorted `(variable, exponent)` pairs with positive exponents.
///
/// `Ord` is graded lexicographic: total degree first, then the exponent vector
/// compared lexicographically with earlier variables weighing more.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: SmallVec<[(Variable, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Variable) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Variable, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut factors = SmallVec::new();
        factors.push((v, e));
        Monomial { degree: e, factors }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (Variable, u32)>>(it: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in it {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        let degree = map.values().sum();
        Monomial {
            degree,
            factors: map.into_iter().collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.factors.iter().map(|(v, _)| v)
    }

    /// Total degree restricted to variables accepted by `pred`.
    pub fn degree_in(&self, pred: impl Fn(&Variable) -> bool) -> u32 {
        self.factors
            .iter()
            .filter(|(v, _)| pred(v))
            .map(|(_, e)| e)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: SmallVec<[(Variable, u32); 4]> =
            SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial {
            degree: self.degree + other.degree,
            factors: out,
        }
    }

    /// Relabels variables; the map must be injective on this monomial's support
    /// for the result to keep its degree (repeats are merged regardless).
    pub fn rename(&self, f: &mut impl FnMut(&Variable) -> Result<Variable>) -> Result<Monomial> {
        let mut pairs = Vec::with_capacity(self.factors.len());
        for (v, e) in &self.factors {
            pairs.push((f(v)?, *e));
        }
        Ok(Monomial::from_factors(pairs))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (x, y) in self.factors.iter().zip(other.factors.iter()) {
                match x.0.cmp(&y.0) {
                    // The monomial containing the earlier variable is larger.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match x.1.cmp(&y.1) {
                        Ordering::Equal => {}
                        o => return o,
                    },
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A canonical sparse polynomial: no zero coefficients are ever stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: FieldTag,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: FieldTag) -> Self {
        Polynomial {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: FieldTag) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: FieldTag, c: Scalar) -> Self {
        Self::term(field, Monomial::one(), c)
    }

    pub fn var(field: FieldTag, v: Variable) -> Self {
        Self::term(field, Monomial::var(v), field.one())
    }

    pub fn monomial(field: FieldTag, m: Monomial) -> Self {
        Self::term(field, m, field.one())
    }

    pub fn term(field: FieldTag, m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(field);
        p.add_term(m, c);
        p
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(field: FieldTag, it: I) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Scalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && self.field.is_one(c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one())
    }

    /// Total degree; `None` for the zero polynomial, whose degree is undefined.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Maximum degree in the variables accepted by `pred`; `None` for zero.
    pub fn degree_in(&self, pred: impl Fn(&Variable) -> bool) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_in(&pred)).max()
    }

    /// The leading monomial in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms
            .keys()
            .flat_map(|m| m.variables().cloned())
            .collect()
    }

    /// Adds `c·m` in place, keeping the representation canonical.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Scalar) -> Result<()> {
        self.field.check(&other.field)?;
        if self.field.is_zero(c) {
            return Ok(());
        }
        let one = self.field.is_one(c);
        for (m, d) in &other.terms {
            let v = if one { d.clone() } else { self.field.mul(c, d) };
            self.add_term(m.clone(), v);
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut out = self.clone();
        out.add_scaled(other, &self.field.from_i64(-1))?;
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if self.field.is_zero(c) {
            return Self::zero(self.field);
        }
        Polynomial {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), self.field.mul(c, d)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.field.check(&other.field)?;
        let mut out = Self::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), self.field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Result<Polynomial> {
        let mut acc = Self::one(self.field);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Ring homomorphism sending each mapped variable to its image; variables
    /// absent from `sigma` are left untouched.
    pub fn substitute(&self, sigma: &BTreeMap<Variable, Polynomial>) -> Result<Polynomial> {
        for q in sigma.values() {
            self.field.check(&q.field)?;
        }
        let mut out = Self::zero(self.field);
        let mut powers: BTreeMap<(Variable, u32), Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Self::constant(self.field, c.clone());
            for (v, e) in m.factors() {
                match sigma.get(v) {
                    None => kept.push((v.clone(), *e)),
                    Some(q) => {
                        let key = (v.clone(), *e);
                        if !powers.contains_key(&key) {
                            powers.insert(key.clone(), q.pow(*e)?);
                        }
                        acc = acc.mul(&powers[&key])?;
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial::from_factors(kept);
            out.add_scaled(&acc.mul_monomial(&rest), &self.field.one())?;
        }
        Ok(out)
    }

    /// Relabels every variable through `f` (monomial-wise, coefficients unchanged).
    pub fn rename(&self, mut f: impl FnMut(&Variable) -> Result<Variable>) -> Result<Polynomial> {
        let mut out = Self::zero(self.field);
        for (m, c) in &self.terms {
            out.add_term(m.rename(&mut f)?, c.clone());
        }
        Ok(out)
    }

    /// Evaluates at a point; every variable of `self` must be assigned.
    pub fn evaluate(&self, point: &BTreeMap<Variable, Scalar>) -> Result<Scalar> {
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = point
                    .get(v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                t = f.mul(&t, &f.pow(x, *e));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Keeps only the terms whose monomials satisfy `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Reduces every exponent to at most 1 (the effect of the Boolean axioms).
    pub fn multilinearize(&self) -> Polynomial {
        let mut out = Self::zero(self.field);
        for (m, c) in &self.terms {
            let m2 = Monomial::from_factors(m.factors().iter().map(|(v, _)| (v.clone(), 1)));
            out.add_term(m2, c.clone());
        }
        out
    }
}

/// `S_{n,k}`: the sum of all products of `k` distinct variables from `vars`.
pub fn elementary_symmetric(field: FieldTag, k: usize, vars: &[Variable]) -> Result<Polynomial> {
    let n = vars.len();
    if k > n {
        return Err(Error::invalid(format!("k = {k} out of range for n = {n}")));
    }
    let mut out = Polynomial::zero(field);
    let mut chosen: Vec<usize> = (0..k).collect();
    loop {
        let m = Monomial::from_factors(chosen.iter().map(|&i| (vars[i].clone(), 1)));
        out.add_term(m, field.one());
        // Advance to the next k-subset in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if chosen[i] < n - k + i {
                chosen[i] += 1;
                for j in i + 1..k {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&self.field.format(c))?;
            if !m.is_one() {
                write!(f, " * {m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.field, self)
    }
}
