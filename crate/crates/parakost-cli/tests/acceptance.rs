//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines always reach stdout.
//!
//! Three claims are false as literally stated. Criteria resting on them print
//! FAIL with the reason, and this target asserts instead that the failure is
//! exactly the known one and that everything else inside them holds.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use parakost::feff::{self, Source};
use parakost::gla::{verify_structure, GradedLieAlgebra};
use parakost::kostant::{verify_complex, verify_hodge, ChainContext};
use parakost::penrose;
use parakost::report::Report;
use parakost::sample::Sampler;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Verdict);

/// Outcome of one criterion.
enum Verdict {
    Pass,
    /// Fails, but only through the documented counterexample.
    KnownFail(String),
    Fail(String),
}

fn detail<'a>(r: &'a Report, key: &str) -> &'a str {
    r.details.iter().find(|(k, _)| k == key).map_or("", |(_, v)| v.as_str())
}

fn detail_n(r: &Report, key: &str) -> u64 {
    detail(r, key).parse().unwrap_or_else(|_| panic!("{}: detail {key} missing", r.check))
}

/// Collects sub-reports that must pass.
#[derive(Default)]
struct Must(Vec<String>);

impl Must {
    fn pass(&mut self, label: &str, r: Report) -> Report {
        if !r.passed() {
            self.0.push(format!("{label} n={}: {}", r.n, r.counterexample.clone().unwrap_or_default()));
        }
        r
    }

    fn holds(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn within(&mut self, t: Duration, limit: Duration, what: &str) {
        self.holds(t < limit, format!("{what} took {t:?}, limit {limit:?}"));
    }

    fn verdict(self, known: Option<String>) -> Verdict {
        match (self.0.is_empty(), known) {
            (true, None) => Verdict::Pass,
            (true, Some(k)) => Verdict::KnownFail(k),
            (false, _) => Verdict::Fail(self.0.join("; ")),
        }
    }
}

fn structure() -> Verdict {
    let mut m = Must::default();
    let start = Instant::now();
    for size in 4..=7 {
        for blocks in [vec![1, 1, size - 2], vec![2, size - 2], vec![2, 1, size - 3]] {
            m.pass(&format!("{blocks:?}"), verify_structure(&GradedLieAlgebra::new(&blocks), "jacobi", size));
        }
    }
    m.within(start.elapsed(), Duration::from_secs(10), "structure suite");
    m.verdict(None)
}

fn configurations() -> Vec<(Vec<usize>, usize)> {
    vec![
        (Source::Path.blocks(2), 2),
        (Source::Path.blocks(3), 3),
        (Source::Ag.blocks(3), 3),
        (Source::Ag.blocks(4), 4),
    ]
}

fn complex() -> Verdict {
    let mut m = Must::default();
    for (blocks, n) in configurations() {
        let start = Instant::now();
        let ctx = ChainContext::new(&blocks);
        m.pass(&format!("{blocks:?}"), verify_complex(&ctx, "complex", n, &mut Sampler::new(SEED)));
        m.within(start.elapsed(), Duration::from_secs(60), &format!("complex suite on {blocks:?}"));
    }
    m.verdict(None)
}

fn hodge() -> Verdict {
    let mut m = Must::default();
    for (blocks, n) in configurations() {
        m.pass(&format!("{blocks:?}"), verify_hodge(&ChainContext::new(&blocks), 2, "hodge", n));
    }
    m.verdict(None)
}

fn harmonic_typing() -> Verdict {
    let mut m = Must::default();
    for n in [2, 3] {
        m.pass("path", feff::verify_path_harmonic_types(n));
    }
    for n in [3, 4] {
        let r = m.pass("ag", penrose::verify_harmonic_types_ag(n));
        if n == 3 {
            let c2 = n * (n - 1) / 2;
            let want = 4 * (n * c2 - n);
            let got = detail_n(&r, "tau_type_dim") as usize;
            m.holds(got == want, format!("tau-type dim {got}, expected {want}"));
        }
    }
    m.verdict(None)
}

fn bianchi_path() -> Verdict {
    let mut m = Must::default();
    let mut known = Vec::new();
    for n in [2, 3] {
        let r = feff::verify_bianchi_path(n);
        let ce = r.counterexample.clone().unwrap_or_default();
        let reproduces = !r.passed()
            && r.failures == 1
            && ce.contains("ker∂*")
            && ce.contains("q_0^ss")
            && detail(&r, "harmonic_q0_in_q0ss") == "true";
        m.holds(reproduces, format!("n={n}: expected only the q_0^ss containment to fail, got {} failures: {ce}", r.failures));
        known.push(format!(
            "n={n}: closed part of q_1^V∧q_2⊗q_0 has dim {} but only {} lies in q_0^ss",
            detail(&r, "closed_q0_dim"),
            detail(&r, "closed_q0ss_dim")
        ));
    }
    m.verdict(Some(format!("q_0^ss containment fails on ker∂* ({}); holds on harmonic part", known.join(", "))))
}

fn path_normality() -> Verdict {
    let mut m = Must::default();
    let mut known = Vec::new();
    for n in [2, 3, 4] {
        let r = feff::verify_path_normality(n);
        let (mf, bf) = (detail_n(&r, "module_failures"), detail_n(&r, "bracket_failures"));
        m.holds(!r.passed() && r.failures == mf + bf, format!("n={n}: unexpected failure set"));
        m.holds(bf == n as u64, format!("n={n}: {bf} bracket failures, expected {n} (H_1 with Z in row 1)"));
        m.holds(detail_n(&r, "bracket_failures_with_w11_zero") == 0, format!("n={n}: bracket fails off the H_1 direction"));
        m.holds(detail_n(&r, "F_failures") == 0, format!("n={n}: normality fails on F"));
        known.push(format!("n={n}: {mf}/{}", detail(&r, "module_dim")));
    }
    m.verdict(Some(format!(
        "transfer commutes with ∂* on F but not on the full constrained module (failing basis elements {})",
        known.join(", ")
    )))
}

fn ag_normality() -> Verdict {
    let mut m = Must::default();
    for n in [3, 4] {
        let r = m.pass("ag-costar", feff::verify_ag_costar(n, SEED, 20));
        m.holds(detail_n(&r, "samples") >= 20, format!("n={n}: fewer than 20 samples"));
    }
    m.verdict(None)
}

fn normalization() -> Verdict {
    let mut m = Must::default();
    for n in [3, 4] {
        m.pass("norm-modules", feff::verify_norm_modules(n));
        m.pass("normalize-step", feff::verify_normalize_step(n, SEED, 20));
    }
    m.verdict(None)
}

fn transfer_properties() -> Verdict {
    let mut m = Must::default();
    let mut known = Vec::new();
    for n in [2, 3, 4] {
        m.pass("torsion-transfer", feff::verify_torsion_transfer(n));
        let r = feff::verify_transfer_memberships(n, Source::Path);
        let reproduces = !r.passed()
            && r.failures == 1
            && detail(&r, "preimage_p_plus_is_q2") == "true"
            && detail(&r, "preimage_p_plus_in_q1") == "true";
        m.holds(reproduces, format!("n={n}: expected only the preimage of p̃_+ to differ, got {:?}", r.counterexample));
        known.push(format!("n={n}: dim {}", detail(&r, "preimage_p_plus_dim")));
        if n >= Source::Ag.min_n() {
            m.pass("ag memberships", feff::verify_transfer_memberships(n, Source::Ag));
        }
    }
    m.verdict(Some(format!("path: i'^-1(p̃_+) equals q_2, not q_1^V ⊕ q_2 ({})", known.join(", "))))
}

fn rho_ricci() -> Verdict {
    let mut m = Must::default();
    for n in [3, 4] {
        m.pass("rho-ricci", penrose::verify_rho_ricci(n, &mut Sampler::new(SEED), 20));
    }
    m.verdict(None)
}

fn cli_determinism() -> Verdict {
    let mut m = Must::default();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_parakost"))
            .args(["verify", "--check", "all", "--n-min", "2", "--n-max", "3", "--seed", "1"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    m.holds(a.stdout == b.stdout, "JSON differs between runs");
    m.holds(a.status.code() == b.status.code(), "exit codes differ between runs");
    let out = String::from_utf8_lossy(&a.stdout);
    let mut failing: Vec<String> = out
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).expect("report line is JSON"))
        .filter(|v| v["status"] != "PASS")
        .map(|v| format!("{}:{}", v["check"].as_str().unwrap(), v["n"]))
        .collect();
    failing.sort();
    let expected = ["bianchi-path:2", "bianchi-path:3", "memberships:2", "memberships:3", "path-normality:2", "path-normality:3"];
    m.holds(failing == expected, format!("failing cells {failing:?}"));
    let code = a.status.code();
    m.holds(code == Some(1), format!("exit code {code:?}"));
    m.verdict(Some(format!("byte-identical, but exits 1 on the cells {}", expected.join(", "))))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("structure", structure),
        ("complex", complex),
        ("hodge", hodge),
        ("harmonic typing", harmonic_typing),
        ("bianchi path", bianchi_path),
        ("path normality", path_normality),
        ("ag normality", ag_normality),
        ("normalization", normalization),
        ("transfer properties", transfer_properties),
        ("rho-ricci", rho_ricci),
        ("cli determinism", cli_determinism),
    ];
    let mut unexpected = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let ms = start.elapsed().as_millis();
        match verdict {
            Verdict::Pass => println!("criterion {:>2} {name:<20} PASS ({ms} ms)", i + 1),
            Verdict::KnownFail(why) => println!("criterion {:>2} {name:<20} FAIL known: {why} ({ms} ms)", i + 1),
            Verdict::Fail(why) => {
                unexpected += 1;
                println!("criterion {:>2} {name:<20} FAIL {why} ({ms} ms)", i + 1);
            }
        }
    }
    if unexpected == 0 {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {unexpected} unexpected failures");
        ExitCode::FAILURE
    }
}
