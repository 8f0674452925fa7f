//! The certificate judge: the two IPS conditions, linearity, skewness,
//! degree, per-generator symmetry, and sizes, collected in an [`AuditReport`].
//!
//! Exact mode expands `C(x, 0)` and `C(x, f)` gate by gate under the
//! expansion budget and is decisive. PIT mode (rationals only) evaluates both
//! conditions modulo fresh random 62-bit primes at uniformly random residues;
//! it never rejects a valid certificate, and each passing round halves the
//! chance that an invalid one slipped through.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::algebra::{is_prime_u64, mul_mod, pow_mod, FieldTag, Polynomial, Scalar, Variable};
use crate::circuit::{
    check_skew, check_y_linear, degree, eval_substituted, evaluate, Budget, Circuit, DegreeMode,
    GateAlgebra, GateLabel, SizeMetrics, DEFAULT_BUDGET,
};
use crate::constructions::Certificate;
use crate::error::{Error, Result};
use crate::instances::Instance;
use crate::symmetry::{search_automorphism, verify_witness, DEFAULT_AUTOMORPHISM_CAP};

/// Default number of PIT rounds.
pub const DEFAULT_PIT_ROUNDS: u32 = 20;
/// Default PRNG seed for PIT runs.
pub const DEFAULT_PIT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exact,
    Pit { rounds: u32, seed: u64 },
}

impl VerifyMode {
    pub fn pit(rounds: u32) -> Self {
        VerifyMode::Pit {
            rounds,
            seed: DEFAULT_PIT_SEED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionStatus {
    Pass,
    Fail,
    ProbabilisticPass,
    /// Not decided, e.g. the expansion budget ran out during an audit.
    Undetermined,
}

impl ConditionStatus {
    pub fn passed(self) -> bool {
        matches!(
            self,
            ConditionStatus::Pass | ConditionStatus::ProbabilisticPass
        )
    }

    fn as_str(self) -> &'static str {
        match self {
            ConditionStatus::Pass => "pass",
            ConditionStatus::Fail => "fail",
            ConditionStatus::ProbabilisticPass => "probabilistic-pass",
            ConditionStatus::Undetermined => "undetermined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PitRecord {
    pub rounds: u32,
    pub seed: u64,
    /// Lower bound on the probability that a pass is correct, `1 − 2^−rounds`.
    pub confidence: String,
    pub primes: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessProvenance {
    Stored,
    Searched,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: usize,
    pub pass: bool,
    pub provenance: WitnessProvenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub mode: DegreeMode,
    pub value: Option<u32>,
}

/// A consolidated verdict on a certificate. Fields that a partial run
/// (`verify_certificate` alone) does not compute are `None` or empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AuditReport {
    pub instance: String,
    pub certificate_instance: String,
    pub field: String,
    pub mode: &'static str,
    pub pit: Option<PitRecord>,
    pub ips_zero_condition: ConditionStatus,
    pub ips_one_condition: ConditionStatus,
    pub y_linear: Option<bool>,
    pub skew: Option<bool>,
    pub degree: Option<DegreeSummary>,
    /// The group the certificate claims (`instance` or `none`).
    pub claimed_group: Option<String>,
    pub symmetry: Vec<GeneratorCheck>,
    pub sizes: SizeMetrics,
    pub notes: Vec<String>,
}

impl AuditReport {
    /// Both IPS conditions hold (exactly or probabilistically).
    pub fn valid(&self) -> bool {
        self.ips_zero_condition.passed() && self.ips_one_condition.passed()
    }

    /// Every generator of the instance group has a verified witness.
    pub fn symmetric(&self) -> bool {
        self.symmetry.iter().all(|g| g.pass)
    }

    /// The certificate claims the instance group but some generator failed.
    pub fn symmetry_claim_broken(&self) -> bool {
        self.claimed_group.as_deref() == Some("instance") && !self.symmetric()
    }

    pub fn to_text(&self) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or("n/a".to_string(), |v| v.to_string())
        }
        let mut s = String::new();
        let _ = writeln!(s, "instance: {}", self.instance);
        let _ = writeln!(s, "certificate-instance: {}", self.certificate_instance);
        let _ = writeln!(s, "field: {}", self.field);
        let _ = writeln!(s, "mode: {}", self.mode);
        if let Some(p) = &self.pit {
            let primes: Vec<String> = p.primes.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(s, "pit-rounds: {}", p.rounds);
            let _ = writeln!(s, "pit-seed: {}", p.seed);
            let _ = writeln!(s, "pit-confidence: {}", p.confidence);
            let _ = writeln!(s, "pit-primes: {}", primes.join(" "));
        }
        let _ = writeln!(
            s,
            "ips-zero-condition: {}",
            self.ips_zero_condition.as_str()
        );
        let _ = writeln!(s, "ips-one-condition: {}", self.ips_one_condition.as_str());
        let _ = writeln!(s, "y-linear: {}", opt(&self.y_linear));
        let _ = writeln!(s, "skew: {}", opt(&self.skew));
        match &self.degree {
            Some(d) => {
                let mode = match d.mode {
                    DegreeMode::Exact => "exact",
                    DegreeMode::Structural => "structural-bound",
                };
                let _ = writeln!(s, "degree: {} ({mode})", opt(&d.value));
            }
            None => {
                let _ = writeln!(s, "degree: n/a");
            }
        }
        let _ = writeln!(s, "claimed-group: {}", opt(&self.claimed_group));
        for g in &self.symmetry {
            let prov = match g.provenance {
                WitnessProvenance::Stored => "stored",
                WitnessProvenance::Searched => "searched",
                WitnessProvenance::Failed => "failed",
            };
            let verdict = if g.pass { "pass" } else { "fail" };
            let _ = writeln!(s, "symmetry generator {}: {verdict} ({prov})", g.generator);
        }
        let z = &self.sizes;
        let _ = writeln!(s, "gates: {}", z.gates);
        let _ = writeln!(s, "wires: {}", z.wires);
        let _ = writeln!(s, "instance-variables: {}", z.instance_variables);
        let _ = writeln!(s, "proof-size: {}", z.proof_size);
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn base_report(inst: &Instance, cert: &Certificate, mode: &'static str) -> AuditReport {
    let family = inst.family.to_string();
    let mut notes = Vec::new();
    if cert.instance != family {
        notes.push(format!("certificate was built for '{}'", cert.instance));
    }
    AuditReport {
        instance: family,
        certificate_instance: cert.instance.clone(),
        field: inst.field.to_string(),
        mode,
        pit: None,
        ips_zero_condition: ConditionStatus::Undetermined,
        ips_one_condition: ConditionStatus::Undetermined,
        y_linear: None,
        skew: None,
        degree: None,
        claimed_group: cert.claims.group.clone(),
        symmetry: Vec::new(),
        sizes: cert.circuit.size_metrics(inst.num_variables()),
        notes,
    }
}

/// Checks `C(x, 0) = 0` and `C(x, f) = 1`.
///
/// Exact mode errors with `BudgetExceeded` when expansion runs out; PIT mode
/// errors with `FieldMismatch`-style `Invalid` over prime fields.
pub fn verify_certificate(
    inst: &Instance,
    cert: &Certificate,
    mode: VerifyMode,
) -> Result<AuditReport> {
    verify_with_budget(inst, cert, mode, &mut Budget::default())
}

pub fn verify_with_budget(
    inst: &Instance,
    cert: &Certificate,
    mode: VerifyMode,
    budget: &mut Budget,
) -> Result<AuditReport> {
    let c = &cert.circuit;
    inst.field.check(&c.field)?;
    c.validate()?;
    match mode {
        VerifyMode::Exact => {
            let mut r = base_report(inst, cert, "exact");
            let zero = eval_substituted(c, c.output(), &inst.zero_substitution(), budget)?;
            r.ips_zero_condition = pass_if(zero.is_zero());
            let one = eval_substituted(c, c.output(), &inst.axiom_substitution(), budget)?;
            r.ips_one_condition = pass_if(one.is_one());
            Ok(r)
        }
        VerifyMode::Pit { rounds, seed } => {
            if inst.field != FieldTag::Rationals {
                return Err(Error::invalid(format!(
                    "PIT mode requires characteristic 0; use exact mode over {}",
                    inst.field
                )));
            }
            let mut r = base_report(inst, cert, "pit");
            let (zero_ok, one_ok, primes) = pit(inst, c, rounds, seed)?;
            let status = |ok: bool| {
                if ok {
                    ConditionStatus::ProbabilisticPass
                } else {
                    ConditionStatus::Fail
                }
            };
            r.ips_zero_condition = status(zero_ok);
            r.ips_one_condition = status(one_ok);
            r.pit = Some(PitRecord {
                rounds,
                seed,
                confidence: format!("1 - 2^-{rounds}"),
                primes,
            });
            Ok(r)
        }
    }
}

fn pass_if(ok: bool) -> ConditionStatus {
    if ok {
        ConditionStatus::Pass
    } else {
        ConditionStatus::Fail
    }
}

/// Reduces a rational modulo `p`; `None` when `p` divides the denominator.
fn reduce(s: &Scalar, p: u64) -> Option<u64> {
    match s {
        Scalar::Mod(v) => Some(v % p),
        Scalar::Rat(q) => {
            let pb = BigInt::from(p);
            let residue = |x: &BigInt| -> u64 {
                let r = x % &pb;
                let r = if r < BigInt::from(0) { r + &pb } else { r };
                r.to_u64().expect("residue fits")
            };
            let den = residue(q.denom());
            if den == 0 {
                return None;
            }
            Some(mul_mod(residue(q.numer()), pow_mod(den, p - 2, p), p))
        }
    }
}

fn constants<'a>(c: &'a Circuit, inst: &'a Instance) -> Vec<&'a Scalar> {
    let mut out: Vec<&Scalar> = c
        .gates
        .iter()
        .filter_map(|g| match &g.label {
            GateLabel::Const(s) => Some(s),
            _ => None,
        })
        .collect();
    for a in &inst.axioms {
        out.extend(a.terms().values());
    }
    out
}

fn random_prime(rng: &mut ChaCha20Rng, consts: &[&Scalar]) -> u64 {
    loop {
        let cand = rng.gen_range(1u64 << 61..1u64 << 62) | 1;
        if is_prime_u64(cand) && consts.iter().all(|s| reduce(s, cand).is_some()) {
            return cand;
        }
    }
}

struct ModAlgebra<'a> {
    p: u64,
    inputs: &'a BTreeMap<Variable, u64>,
    consts: BTreeMap<&'a Scalar, u64>,
}

impl GateAlgebra for ModAlgebra<'_> {
    type Value = u64;

    fn leaf(&mut self, label: &GateLabel) -> Result<u64> {
        Ok(match label {
            GateLabel::Const(s) => self.consts[s],
            GateLabel::Input(v) => self.inputs[v],
            _ => unreachable!("not a leaf"),
        })
    }

    fn add(&mut self, xs: &[&u64]) -> Result<u64> {
        Ok(xs.iter().fold(0u64, |a, &&b| {
            ((a as u128 + b as u128) % self.p as u128) as u64
        }))
    }

    fn mul(&mut self, xs: &[&u64]) -> Result<u64> {
        Ok(xs.iter().fold(1u64, |a, &&b| mul_mod(a, b, self.p)))
    }
}

fn eval_poly_mod(poly: &Polynomial, point: &BTreeMap<Variable, u64>, p: u64) -> u64 {
    let mut acc: u128 = 0;
    for (m, c) in poly.terms() {
        let mut t = reduce(c, p).expect("prime chosen to avoid denominators");
        for (v, e) in m.factors() {
            t = mul_mod(t, pow_mod(point[v], *e as u64, p), p);
        }
        acc = (acc + t as u128) % p as u128;
    }
    acc as u64
}

/// Returns whether each condition survived every round, and the primes used.
fn pit(inst: &Instance, c: &Circuit, rounds: u32, seed: u64) -> Result<(bool, bool, Vec<u64>)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let consts = constants(c, inst);
    let yset = inst.yset();
    let mut xs: BTreeSet<Variable> = inst.xset();
    xs.extend(
        c.input_variables()
            .into_iter()
            .filter(|v| !yset.contains(v)),
    );
    for a in &inst.axioms {
        xs.extend(a.variables());
    }
    let out = c.output();
    let (mut zero_ok, mut one_ok) = (true, true);
    let mut primes = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let p = random_prime(&mut rng, &consts);
        primes.push(p);
        let mut point: BTreeMap<Variable, u64> = xs
            .iter()
            .map(|v| (v.clone(), rng.gen_range(0..p)))
            .collect();
        let reduced: BTreeMap<&Scalar, u64> = consts
            .iter()
            .map(|&s| (s, reduce(s, p).expect("checked")))
            .collect();
        for y in &inst.yvars {
            point.insert(y.clone(), 0);
        }
        let mut alg = ModAlgebra {
            p,
            inputs: &point,
            consts: reduced.clone(),
        };
        if evaluate(c, &[out], &mut alg, &mut |_, _| {})?[0] != 0 {
            zero_ok = false;
        }
        let fvals: Vec<u64> = inst
            .axioms
            .iter()
            .map(|a| eval_poly_mod(a, &point, p))
            .collect();
        for (y, v) in inst.yvars.iter().zip(fvals) {
            point.insert(y.clone(), v);
        }
        let mut alg = ModAlgebra {
            p,
            inputs: &point,
            consts: reduced,
        };
        if evaluate(c, &[out], &mut alg, &mut |_, _| {})?[0] != 1 {
            one_ok = false;
        }
    }
    Ok((zero_ok, one_ok, primes))
}

#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    pub mode: VerifyMode,
    pub budget: u64,
    pub auto_cap: usize,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            mode: VerifyMode::Exact,
            budget: DEFAULT_BUDGET,
            auto_cap: DEFAULT_AUTOMORPHISM_CAP,
        }
    }
}

/// Full audit. Checks that fail or exhaust their budget become report
/// entries; only structurally unusable input (wrong field, malformed
/// circuit, PIT over a prime field) is an error.
pub fn audit(inst: &Instance, cert: &Certificate, opts: AuditOptions) -> Result<AuditReport> {
    let c = &cert.circuit;
    let mut budget = Budget::new(opts.budget);
    let mut r = match verify_with_budget(inst, cert, opts.mode, &mut budget) {
        Ok(r) => r,
        Err(e @ Error::BudgetExceeded { .. }) => {
            let mut r = base_report(inst, cert, "exact");
            r.notes.push(format!("IPS conditions undetermined: {e}"));
            r
        }
        Err(e) => return Err(e),
    };
    let yset = inst.yset();
    match check_y_linear(c, c.output(), &yset, &mut Budget::new(opts.budget)) {
        Ok(b) => r.y_linear = Some(b),
        Err(e @ Error::BudgetExceeded { .. }) => {
            r.notes.push(format!("y-linearity undetermined: {e}"))
        }
        Err(e) => return Err(e),
    }
    r.skew = Some(check_skew(c));
    let deg = match degree(c, DegreeMode::Exact, &mut Budget::new(opts.budget)) {
        Ok(d) => d,
        Err(Error::BudgetExceeded { .. }) => {
            r.notes
                .push("exact degree over budget; structural bound reported".into());
            degree(c, DegreeMode::Structural, &mut Budget::new(opts.budget))?
        }
        Err(e) => return Err(e),
    };
    r.degree = Some(DegreeSummary {
        mode: deg.mode,
        value: deg.per_gate[c.output()],
    });
    let inputs = c.input_variables();
    for (i, g) in inst.induced.generators.iter().enumerate() {
        let g = g.extended(&inputs);
        let stored = c
            .witnesses
            .get(&i)
            .filter(|w| verify_witness(c, &g, w))
            .is_some();
        let check = if stored {
            GeneratorCheck {
                generator: i,
                pass: true,
                provenance: WitnessProvenance::Stored,
            }
        } else if c.len() <= opts.auto_cap {
            let found = search_automorphism(c, &g, opts.auto_cap)?.is_some();
            GeneratorCheck {
                generator: i,
                pass: found,
                provenance: if found {
                    WitnessProvenance::Searched
                } else {
                    WitnessProvenance::Failed
                },
            }
        } else {
            r.notes.push(format!(
                "generator {i}: no valid stored witness and {} gates exceed the search cap {}",
                c.len(),
                opts.auto_cap
            ));
            GeneratorCheck {
                generator: i,
                pass: false,
                provenance: WitnessProvenance::Failed,
            }
        };
        r.symmetry.push(check);
    }
    if let (Some(claim), Some(actual)) = (cert.claims.y_linear, r.y_linear) {
        if claim != actual {
            r.notes
                .push(format!("claimed y-linear={claim} but found {actual}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, FieldTag};
    use crate::circuit::CircuitBuilder;
    use crate::constructions::{build_cfi_mu, build_subsetsum};
    use crate::instances::{gen_cfi, gen_counterexample_f2, gen_php, gen_subset_sum, GraphInput};

    fn cert_from(inst: &Instance, text: &str) -> Certificate {
        let p = parse_polynomial(inst.field, text).unwrap();
        let mut b = CircuitBuilder::new(inst.field);
        let g = b.polynomial(&p);
        Certificate::new(inst, b.finish(vec![g]))
    }

    #[test]
    fn counterexample_certificate_passes() {
        let inst = gen_counterexample_f2().unwrap();
        let cert = cert_from(&inst, "y[1] + y[4] + y[6]");
        let r = verify_certificate(&inst, &cert, VerifyMode::Exact).unwrap();
        assert_eq!(r.ips_zero_condition, ConditionStatus::Pass);
        assert_eq!(r.ips_one_condition, ConditionStatus::Pass);
    }

    #[test]
    fn constant_and_zero_circuits_fail() {
        let inst = gen_counterexample_f2().unwrap();
        let r = verify_certificate(&inst, &cert_from(&inst, "1"), VerifyMode::Exact).unwrap();
        assert_eq!(r.ips_zero_condition, ConditionStatus::Fail);
        let r = verify_certificate(&inst, &cert_from(&inst, "0"), VerifyMode::Exact).unwrap();
        assert_eq!(r.ips_zero_condition, ConditionStatus::Pass);
        assert_eq!(r.ips_one_condition, ConditionStatus::Fail);
    }

    #[test]
    fn pit_agrees_with_exact_and_is_reproducible() {
        let q = FieldTag::Rationals;
        let inst = gen_subset_sum(3, q, &q.from_i64(4), false).unwrap();
        let cert = build_subsetsum(&inst, &mut Budget::default()).unwrap();
        let r = verify_certificate(&inst, &cert, VerifyMode::pit(5)).unwrap();
        assert!(r.valid());
        assert_eq!(r.ips_one_condition, ConditionStatus::ProbabilisticPass);
        let again = verify_certificate(&inst, &cert, VerifyMode::pit(5)).unwrap();
        assert_eq!(r.to_json(), again.to_json());
        let mut bad = cert.clone();
        let id = bad
            .circuit
            .gates
            .iter()
            .position(|g| matches!(&g.label, GateLabel::Const(s) if !q.is_one(s) && !q.is_zero(s)))
            .unwrap();
        bad.circuit.gates[id].label = GateLabel::Const(q.from_i64(7));
        let exact = verify_certificate(&inst, &bad, VerifyMode::Exact).unwrap();
        let pit = verify_certificate(&inst, &bad, VerifyMode::pit(5)).unwrap();
        assert!(!exact.valid());
        assert!(!pit.valid());
    }

    #[test]
    fn pit_rejects_prime_fields() {
        let inst = gen_counterexample_f2().unwrap();
        let cert = cert_from(&inst, "y[1] + y[4] + y[6]");
        assert!(verify_certificate(&inst, &cert, VerifyMode::pit(3)).is_err());
    }

    #[test]
    fn audit_subset_sum_and_cfi_mu() {
        let q = FieldTag::Rationals;
        let inst = gen_subset_sum(4, q, &q.from_i64(5), false).unwrap();
        let cert = build_subsetsum(&inst, &mut Budget::default()).unwrap();
        let r = audit(&inst, &cert, AuditOptions::default()).unwrap();
        assert!(r.valid() && r.symmetric());
        assert_eq!(r.y_linear, Some(true));
        assert!(r
            .symmetry
            .iter()
            .all(|g| g.provenance == WitnessProvenance::Stored));
        assert_eq!(
            r.to_text(),
            audit(&inst, &cert, AuditOptions::default())
                .unwrap()
                .to_text()
        );

        let inst = gen_cfi(&GraphInput::complete(4), None, 1).unwrap();
        let cert = build_cfi_mu(&inst).unwrap();
        let r = audit(&inst, &cert, AuditOptions::default()).unwrap();
        assert!(r.valid() && r.symmetric());
        assert_eq!(r.y_linear, Some(false));
    }

    #[test]
    fn audit_reports_searched_and_budget_fallback() {
        let inst = gen_php(1).unwrap();
        let cert = crate::constructions::build_php(&inst, &mut Budget::default()).unwrap();
        let mut stripped = cert.clone();
        stripped.circuit.witnesses.clear();
        let r = audit(&inst, &stripped, AuditOptions::default()).unwrap();
        assert!(r
            .symmetry
            .iter()
            .all(|g| g.pass && g.provenance == WitnessProvenance::Searched));
        let tiny = AuditOptions {
            budget: 1,
            ..AuditOptions::default()
        };
        let r = audit(&inst, &cert, tiny).unwrap();
        assert_eq!(r.ips_one_condition, ConditionStatus::Undetermined);
        assert_eq!(r.degree.unwrap().mode, DegreeMode::Structural);
    }
}
