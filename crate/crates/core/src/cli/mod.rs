//! The `symips` command line: generators, builders, provers and the verifier
//! over the line-oriented workspace files.
//!
//! Exit codes: 0 success/valid, 1 certificate or proof invalid, 2 malformed
//! input, 3 symmetry audit failure, 4 budget or cap exceeded, 5 search found
//! nothing.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::FieldTag;
use crate::circuit::{check_skew, degree, Budget, DegreeMode, DEFAULT_BUDGET};
use crate::constructions::{
    build_cfi_linear, build_cfi_mu, build_php, build_subsetsum, parse_certificate,
    symmetrize_average, symmetrize_product, write_certificate, AverageOptions, Certificate,
};
use crate::error::Error;
use crate::instances::{
    gen_cfi, gen_counterexample_f2, gen_php, gen_piso, gen_subset_sum, parse_graph, parse_instance,
    write_instance, GraphInput, Instance,
};
use crate::proofs_pc::{
    epc_to_symipslin, parse_pc_proof, pc_search_bounded_degree, pc_to_ipslin, skewize,
    sym_linear_certificate_search, write_pc_proof, EpcProof, SymLinearOutcome,
};
use crate::symmetry::{parse_group, DEFAULT_AUTOMORPHISM_CAP, DEFAULT_GROUP_CAP};
use crate::verify::{
    audit, verify_with_budget, AuditOptions, AuditReport, ConditionStatus, VerifyMode,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_SYMMETRY: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INFEASIBLE: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "symips",
    version,
    about = "Symmetric ideal-proof-system refutations: generate, refute, verify"
)]
struct Cli {
    /// Expansion budget in term operations.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Largest group that may be enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_CAP)]
    group_cap: u64,
    /// Largest circuit (in gates) on which automorphisms are searched.
    #[arg(long, global = true, default_value_t = DEFAULT_AUTOMORPHISM_CAP)]
    auto_cap: usize,
    /// Emit reports as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the primary output here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Build or search for a refutation certificate of an instance.
    Refute(RefuteArgs),
    /// Check the IPS conditions (and optionally everything else) of a certificate.
    Verify(VerifyArgs),
    /// Make a certificate symmetric under the instance group.
    Symmetrize(SymmetrizeArgs),
    /// Translate proofs into certificates, or certificates into skew form.
    #[command(subcommand)]
    Translate(TranslateCommand),
    /// Print size and degree statistics of a certificate.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenFamily {
    Cfi,
    Subsetsum,
    Php,
    Piso,
    Example42,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: GenFamily,
    /// Graph file, or one of `K<n>` / `prism`. `piso` takes two.
    #[arg(long)]
    graph: Vec<String>,
    /// CFI twist bit.
    #[arg(long, default_value_t = 1)]
    a: u8,
    /// CFI special vertex (default: vertex 0).
    #[arg(long)]
    u: Option<usize>,
    /// Subset-sum size or pigeonhole hole count.
    #[arg(long)]
    n: Option<usize>,
    /// Subset-sum target.
    #[arg(long)]
    beta: Option<String>,
    /// Subset-sum base field (`Q` or `F<p>`).
    #[arg(long, default_value = "Q")]
    field: String,
    /// Lifted subset sum (`z_i ↦ x_i y_i`).
    #[arg(long)]
    lifted: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RefuteMethod {
    CfiMu,
    CfiLinear,
    Subsetsum,
    Php,
    PcSearch,
    SymLinearSearch,
}

#[derive(Args, Debug)]
struct RefuteArgs {
    instance: PathBuf,
    #[arg(long)]
    method: RefuteMethod,
    /// Degree bound for the search methods.
    #[arg(long, default_value_t = 2)]
    degree: u32,
    /// For `pc-search`: also write the PC proof here.
    #[arg(long)]
    proof_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Pit,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    instance: PathBuf,
    certificate: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// PIT rounds.
    #[arg(long, default_value_t = crate::verify::DEFAULT_PIT_ROUNDS)]
    rounds: u32,
    /// PIT seed.
    #[arg(long, default_value_t = crate::verify::DEFAULT_PIT_SEED)]
    seed: u64,
    /// Also check linearity, skewness, degree and symmetry.
    #[arg(long)]
    full_audit: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SymMethod {
    Product,
    Average,
}

#[derive(Args, Debug)]
struct SymmetrizeArgs {
    instance: PathBuf,
    certificate: PathBuf,
    #[arg(long)]
    method: SymMethod,
}

#[derive(Subcommand, Debug)]
enum TranslateCommand {
    /// PC proof to a ŷ-linear certificate.
    PcToIps { instance: PathBuf, proof: PathBuf },
    /// Symmetric extended PC proof to a symmetric ŷ-linear certificate.
    EpcToIps {
        instance: PathBuf,
        proof: PathBuf,
        /// Group file (default: the instance group).
        #[arg(long)]
        group: Option<PathBuf>,
    },
    /// Certificate to an equivalent skew circuit.
    Skewize {
        instance: PathBuf,
        certificate: PathBuf,
        /// Degree bound (default: the certificate's exact degree).
        #[arg(long)]
        degree: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct StatsArgs {
    certificate: PathBuf,
    /// Instance file, for the `|X|+|Y|` part of the proof size.
    #[arg(long)]
    instance: Option<PathBuf>,
}

/// A failed command: exit code plus a diagnostic for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => EXIT_BUDGET,
        Error::InvalidProof { .. } | Error::Construction(_) => EXIT_INVALID,
        Error::EpcCondition { .. } => EXIT_SYMMETRY,
        _ => EXIT_MALFORMED,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs one command; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("symips: {}", f.msg);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Refute(a) => cmd_refute(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Symmetrize(a) => cmd_symmetrize(cli, a),
        Command::Translate(t) => cmd_translate(cli, t),
        Command::Stats(a) => cmd_stats(cli, a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_MALFORMED,
            format!("cannot read {}: {e}", path.display()),
        )
    })
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| {
            Failure::new(EXIT_MALFORMED, format!("cannot write {}: {e}", p.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read(path)?)?)
}

fn load_certificate(path: &Path) -> Result<Certificate, Failure> {
    Ok(parse_certificate(&read(path)?)?)
}

fn load_graph(spec: &str) -> Result<GraphInput, Failure> {
    let lower = spec.to_ascii_lowercase();
    if Path::new(spec).exists() {
        return Ok(parse_graph(&read(Path::new(spec))?)?);
    }
    if lower == "prism" {
        return Ok(GraphInput::prism());
    }
    if let Some(n) = lower
        .strip_prefix('k')
        .and_then(|n| n.parse::<usize>().ok())
    {
        return Ok(GraphInput::complete(n));
    }
    Err(Failure::new(
        EXIT_MALFORMED,
        format!("no graph file or named graph '{spec}'"),
    ))
}

fn missing(flag: &str, family: &str) -> Failure {
    Failure::new(EXIT_MALFORMED, format!("gen {family} requires --{flag}"))
}

fn cmd_gen(cli: &Cli, a: &GenArgs) -> CmdResult {
    let inst = match a.family {
        GenFamily::Cfi => {
            let [g] = a.graph.as_slice() else {
                return Err(Failure::new(
                    EXIT_MALFORMED,
                    "gen cfi requires exactly one --graph",
                ));
            };
            gen_cfi(&load_graph(g)?, a.u, a.a)?
        }
        GenFamily::Subsetsum => {
            let n = a.n.ok_or_else(|| missing("n", "subsetsum"))?;
            let field: FieldTag = a.field.parse()?;
            let beta = a
                .beta
                .as_deref()
                .ok_or_else(|| missing("beta", "subsetsum"))?;
            gen_subset_sum(n, field, &field.parse(beta)?, a.lifted)?
        }
        GenFamily::Php => gen_php(a.n.ok_or_else(|| missing("n", "php"))?)?,
        GenFamily::Piso => {
            let [g, h] = a.graph.as_slice() else {
                return Err(Failure::new(
                    EXIT_MALFORMED,
                    "gen piso requires two --graph arguments",
                ));
            };
            gen_piso(&load_graph(g)?, &load_graph(h)?)?
        }
        GenFamily::Example42 => gen_counterexample_f2()?,
    };
    emit(cli, &write_instance(&inst))?;
    Ok(EXIT_OK)
}

fn cmd_refute(cli: &Cli, a: &RefuteArgs) -> CmdResult {
    let inst = load_instance(&a.instance)?;
    let mut budget = Budget::new(cli.budget);
    let cert = match a.method {
        RefuteMethod::CfiMu => build_cfi_mu(&inst)?,
        RefuteMethod::CfiLinear => build_cfi_linear(&inst, &mut budget)?,
        RefuteMethod::Subsetsum => build_subsetsum(&inst, &mut budget)?,
        RefuteMethod::Php => build_php(&inst, &mut budget)?,
        RefuteMethod::PcSearch => {
            let Some(proof) = pc_search_bounded_degree(&inst, a.degree, &mut budget)? else {
                eprintln!(
                    "symips: no PC refutation of degree <= {} (saturation reached a fixed point)",
                    a.degree
                );
                return Ok(EXIT_INFEASIBLE);
            };
            if let Some(p) = &a.proof_out {
                let epc = EpcProof {
                    base: proof.clone(),
                    ..EpcProof::default()
                };
                fs::write(p, write_pc_proof(inst.field, &epc)).map_err(|e| {
                    Failure::new(EXIT_MALFORMED, format!("cannot write {}: {e}", p.display()))
                })?;
            }
            pc_to_ipslin(&inst, &proof, &mut budget)?
        }
        RefuteMethod::SymLinearSearch => {
            match sym_linear_certificate_search(&inst, &inst.group, a.degree, &mut budget)? {
                SymLinearOutcome::Found { certificate, .. } => certificate,
                SymLinearOutcome::Infeasible {
                    degree,
                    unknowns,
                    equations,
                    dual,
                } => {
                    eprintln!(
                        "symips: no symmetric linear certificate of X-degree <= {degree} \
                         ({unknowns} orbit unknowns, {equations} equations, dual witness on {} monomials)",
                        dual.len()
                    );
                    return Ok(EXIT_INFEASIBLE);
                }
            }
        }
    };
    emit(cli, &write_certificate(&cert))?;
    Ok(EXIT_OK)
}

fn render<T: Serialize>(cli: &Cli, value: &T, text: String) -> String {
    if cli.json {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        s
    } else {
        text
    }
}

fn report_code(r: &AuditReport, full: bool) -> i32 {
    let undecided =
        [r.ips_zero_condition, r.ips_one_condition].contains(&ConditionStatus::Undetermined);
    if undecided {
        EXIT_BUDGET
    } else if !r.valid() {
        EXIT_INVALID
    } else if full && r.symmetry_claim_broken() {
        EXIT_SYMMETRY
    } else {
        EXIT_OK
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let inst = load_instance(&a.instance)?;
    let cert = load_certificate(&a.certificate)?;
    let mode = match a.mode {
        ModeArg::Exact => VerifyMode::Exact,
        ModeArg::Pit => VerifyMode::Pit {
            rounds: a.rounds,
            seed: a.seed,
        },
    };
    let report = if a.full_audit {
        let opts = AuditOptions {
            mode,
            budget: cli.budget,
            auto_cap: cli.auto_cap,
        };
        audit(&inst, &cert, opts)?
    } else {
        verify_with_budget(&inst, &cert, mode, &mut Budget::new(cli.budget))?
    };
    emit(cli, &render(cli, &report, report.to_text()))?;
    Ok(report_code(&report, a.full_audit))
}

fn cmd_symmetrize(cli: &Cli, a: &SymmetrizeArgs) -> CmdResult {
    let inst = load_instance(&a.instance)?;
    let cert = load_certificate(&a.certificate)?;
    let out = match a.method {
        SymMethod::Product => symmetrize_product(&inst, &cert, cli.group_cap)?,
        SymMethod::Average => {
            let opts = AverageOptions {
                group_cap: cli.group_cap,
                auto_cap: cli.auto_cap,
            };
            symmetrize_average(&inst, &cert, opts, &mut Budget::new(cli.budget))?
        }
    };
    emit(cli, &write_certificate(&out))?;
    Ok(EXIT_OK)
}

fn load_proof(inst: &Instance, path: &Path) -> Result<EpcProof, Failure> {
    let (field, proof) = parse_pc_proof(&read(path)?)?;
    inst.field.check(&field)?;
    Ok(proof)
}

fn cmd_translate(cli: &Cli, t: &TranslateCommand) -> CmdResult {
    let mut budget = Budget::new(cli.budget);
    let cert = match t {
        TranslateCommand::PcToIps { instance, proof } => {
            let inst = load_instance(instance)?;
            let proof = load_proof(&inst, proof)?;
            if !proof.extensions.axioms.is_empty() {
                return Err(Failure::new(
                    EXIT_MALFORMED,
                    "proof uses extension axioms; use 'translate epc-to-ips'",
                ));
            }
            pc_to_ipslin(&inst, &proof.base, &mut budget)?
        }
        TranslateCommand::EpcToIps {
            instance,
            proof,
            group,
        } => {
            let inst = load_instance(instance)?;
            let proof = load_proof(&inst, proof)?;
            let group = match group {
                Some(p) => parse_group(&read(p)?, &inst.xset())?,
                None => inst.group.clone(),
            };
            let opts = AverageOptions {
                group_cap: cli.group_cap,
                auto_cap: cli.auto_cap,
            };
            epc_to_symipslin(&inst, &proof, &group, opts, &mut budget)?
        }
        TranslateCommand::Skewize {
            instance,
            certificate,
            degree: k,
        } => {
            let inst = load_instance(instance)?;
            let cert = load_certificate(certificate)?;
            let k = match k {
                Some(k) => *k,
                None => degree(&cert.circuit, DegreeMode::Exact, &mut budget)?
                    .max
                    .unwrap_or(0),
            };
            skewize(&inst, &cert, k, &mut budget)?
        }
    };
    emit(cli, &write_certificate(&cert))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct Stats {
    instance: String,
    field: String,
    gates: usize,
    wires: usize,
    instance_variables: Option<usize>,
    proof_size: Option<usize>,
    structural_degree: Option<u32>,
    exact_degree: Option<u32>,
    skew: bool,
    stored_witnesses: usize,
    claimed_y_linear: Option<bool>,
    claimed_degree: Option<u32>,
    claimed_group: Option<String>,
}

fn cmd_stats(cli: &Cli, a: &StatsArgs) -> CmdResult {
    let cert = load_certificate(&a.certificate)?;
    let c = &cert.circuit;
    let vars = match &a.instance {
        Some(p) => Some(load_instance(p)?.num_variables()),
        None => None,
    };
    let structural = degree(c, DegreeMode::Structural, &mut Budget::new(cli.budget))?.max;
    let exact = match degree(c, DegreeMode::Exact, &mut Budget::new(cli.budget)) {
        Ok(d) => d.max,
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let s = Stats {
        instance: cert.instance.clone(),
        field: c.field.to_string(),
        gates: c.len(),
        wires: c.wire_count(),
        instance_variables: vars,
        proof_size: vars.map(|v| c.size_metrics(v).proof_size),
        structural_degree: structural,
        exact_degree: exact,
        skew: check_skew(c),
        stored_witnesses: c.witnesses.len(),
        claimed_y_linear: cert.claims.y_linear,
        claimed_degree: cert.claims.degree,
        claimed_group: cert.claims.group.clone(),
    };
    let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
    let text = format!(
        "instance: {}\nfield: {}\ngates: {}\nwires: {}\ninstance-variables: {}\nproof-size: {}\n\
         structural-degree: {}\nexact-degree: {}\nskew: {}\nstored-witnesses: {}\n\
         claimed-y-linear: {}\nclaimed-degree: {}\nclaimed-group: {}\n",
        s.instance,
        s.field,
        s.gates,
        s.wires,
        opt(s.instance_variables.map(|v| v.to_string())),
        opt(s.proof_size.map(|v| v.to_string())),
        opt(s.structural_degree.map(|v| v.to_string())),
        opt(s.exact_degree.map(|v| v.to_string())),
        s.skew,
        s.stored_witnesses,
        opt(s.claimed_y_linear.map(|v| v.to_string())),
        opt(s.claimed_degree.map(|v| v.to_string())),
        opt(s.claimed_group.clone()),
    );
    emit(cli, &render(cli, &s, text))?;
    Ok(EXIT_OK)
}
