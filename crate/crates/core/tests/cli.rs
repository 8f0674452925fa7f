//! End-to-end runs of the `symips` binary and its exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

struct Workdir(PathBuf);

impl Workdir {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("symips-cli-{}-{name}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn path(&self, file: &str) -> String {
        self.0.join(file).to_string_lossy().into_owned()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_symips"))
            .args(args)
            .output()
            .unwrap()
    }

    fn code(&self, args: &[&str]) -> i32 {
        self.run(args).status.code().unwrap()
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

#[test]
fn php_pipeline_and_tampering() {
    let w = Workdir::new("php");
    let (inst, cert, bad) = (w.path("php2.inst"), w.path("php2.cert"), w.path("bad.cert"));
    assert_eq!(w.code(&["gen", "php", "--n", "2", "-o", &inst]), 0);
    assert_eq!(
        w.code(&["refute", &inst, "--method", "php", "-o", &cert]),
        0
    );
    assert_eq!(w.code(&["verify", &inst, &cert, "--mode", "exact"]), 0);
    assert_eq!(
        w.code(&[
            "verify",
            &inst,
            &cert,
            "--mode",
            "pit",
            "--rounds",
            "4",
            "--full-audit"
        ]),
        0
    );

    let text = fs::read_to_string(&cert).unwrap();
    let tampered = text.replacen("const 1/3", "const 1/4", 1);
    assert_ne!(text, tampered);
    fs::write(&bad, tampered).unwrap();
    assert_eq!(w.code(&["verify", &inst, &bad]), 1);
    assert_eq!(w.code(&["verify", &inst, &bad, "--mode", "pit"]), 1);

    let broken = text.replacen(" mul ", " mul 999 ", 1);
    fs::write(&bad, broken).unwrap();
    assert_eq!(w.code(&["verify", &inst, &bad]), 2);
    assert_eq!(w.code(&["verify", &inst, &w.path("missing.cert")]), 2);
    assert_eq!(w.code(&["refute", &inst, "--method", "cfi-mu"]), 2);
    assert_eq!(w.code(&["gen", "subsetsum", "--n", "3"]), 2);
    assert_eq!(w.code(&["gen", "nosuchfamily"]), 2);
}

#[test]
fn json_report_is_machine_readable_and_reproducible() {
    let w = Workdir::new("json");
    let (inst, cert) = (w.path("s.inst"), w.path("s.cert"));
    assert_eq!(
        w.code(&["gen", "subsetsum", "--n", "3", "--beta", "4", "-o", &inst]),
        0
    );
    assert_eq!(
        w.code(&["refute", &inst, "--method", "subsetsum", "-o", &cert]),
        0
    );
    let args = [
        "verify",
        &inst,
        &cert,
        "--mode",
        "pit",
        "--full-audit",
        "--json",
    ];
    let a = w.run(&args);
    let b = w.run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["ips-one-condition"], "probabilistic-pass");
    assert_eq!(v["y-linear"], true);
    assert!(v["pit"]["seed"].as_u64().is_some());
    let stats = w.run(&["stats", &cert, "--instance", &inst, "--json"]);
    let s: serde_json::Value = serde_json::from_slice(&stats.stdout).unwrap();
    assert_eq!(s["exact_degree"], 4);
}

#[test]
fn searches_report_infeasibility_and_budget() {
    let w = Workdir::new("search");
    let ex = w.path("ex.inst");
    assert_eq!(w.code(&["gen", "example42", "-o", &ex]), 0);
    let out = w.run(&[
        "refute",
        &ex,
        "--method",
        "sym-linear-search",
        "--degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no symmetric linear certificate"));

    let php = w.path("php3.inst");
    assert_eq!(w.code(&["gen", "php", "--n", "3", "-o", &php]), 0);
    assert_eq!(
        w.code(&["refute", &php, "--method", "php", "--budget", "10"]),
        4
    );

    // The 8-equation CFI presentation admits a low-degree PC refutation, so
    // the bounded search succeeds rather than reporting infeasibility.
    let k4 = w.path("k4.inst");
    assert_eq!(
        w.code(&["gen", "cfi", "--graph", "K4", "--a", "1", "-o", &k4]),
        0
    );
    let cert = w.path("k4pc.cert");
    assert_eq!(
        w.code(&[
            "refute",
            &k4,
            "--method",
            "pc-search",
            "--degree",
            "2",
            "-o",
            &cert
        ]),
        0
    );
    assert_eq!(w.code(&["verify", &k4, &cert]), 0);
}

#[test]
fn translations_and_symmetrization() {
    let w = Workdir::new("translate");
    let (inst, pc, cert) = (w.path("p1.inst"), w.path("p1.pc"), w.path("p1.cert"));
    assert_eq!(w.code(&["gen", "php", "--n", "1", "-o", &inst]), 0);
    assert_eq!(
        w.code(&[
            "refute",
            &inst,
            "--method",
            "pc-search",
            "--degree",
            "2",
            "--proof-out",
            &pc,
            "-o",
            &cert
        ]),
        0
    );
    let ips = w.path("p1ips.cert");
    assert_eq!(
        w.code(&["translate", "pc-to-ips", &inst, &pc, "-o", &ips]),
        0
    );
    assert_eq!(w.code(&["verify", &inst, &ips, "--full-audit"]), 0);

    // An asymmetric certificate that claims the instance group fails the audit.
    let text = fs::read_to_string(&ips).unwrap();
    let lying: String = text
        .lines()
        .map(|l| {
            if l.starts_with("claims") {
                "claims linear=true group=instance"
            } else {
                l
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    let lie = w.path("lie.cert");
    fs::write(&lie, lying + "\n").unwrap();
    assert_eq!(w.code(&["verify", &inst, &lie, "--full-audit"]), 3);

    let avg = w.path("avg.cert");
    assert_eq!(
        w.code(&["symmetrize", &inst, &ips, "--method", "average", "-o", &avg]),
        0
    );
    assert_eq!(w.code(&["verify", &inst, &avg, "--full-audit"]), 0);

    let ex = w.path("ex.inst");
    let y146 = w.path("y146.cert");
    assert_eq!(w.code(&["gen", "example42", "-o", &ex]), 0);
    let hand = "symips certificate v1\ninstance example42\nclaims linear=true\nfield GF(2)\n\
                vars y[1] y[4] y[6]\n0 in y[1]\n1 in y[4]\n2 in y[6]\n3 add 0 1 2\noutputs 3\n";
    fs::write(&y146, hand).unwrap();
    assert_eq!(w.code(&["verify", &ex, &y146]), 0);
    assert_eq!(w.code(&["verify", &ex, &y146, "--mode", "pit"]), 2);
    let prod = w.path("prod.cert");
    assert_eq!(
        w.code(&["symmetrize", &ex, &y146, "--method", "product", "-o", &prod]),
        0
    );
    assert_eq!(w.code(&["verify", &ex, &prod, "--full-audit"]), 0);
    assert_eq!(
        w.code(&["symmetrize", &ex, &y146, "--method", "average"]),
        2
    );

    let (s3, s3c, skew) = (w.path("s3.inst"), w.path("s3.cert"), w.path("s3skew.cert"));
    assert_eq!(
        w.code(&["gen", "subsetsum", "--n", "3", "--beta", "4", "-o", &s3]),
        0
    );
    assert_eq!(
        w.code(&["refute", &s3, "--method", "subsetsum", "-o", &s3c]),
        0
    );
    assert_eq!(w.code(&["translate", "skewize", &s3, &s3c, "-o", &skew]), 0);
    let report = w.run(&["verify", &s3, &skew, "--full-audit"]);
    assert_eq!(report.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&report.stdout).contains("skew: true"));
}
