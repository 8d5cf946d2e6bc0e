//! Acceptance criteria 1–10. Each test prints one `PASS`/`FAIL` line.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mfk_cli::export::{self, Format, Target};
use mfk_cli::report::RunReport;
use mfk_cli::suites::{self, Filter, Suite};
use mfk_core::blowup::oracle::{a_oracle, d4_oracle};
use mfk_core::blowup::pipeline::{a_chart, conic_fiber_check, dn_chart1, dn_chart2};
use mfk_core::blowup::ResidualKind;
use mfk_core::catalog::{dn_invariants_from_roots, e_labels, Series};
use mfk_core::ideal::Caps;
use mfk_core::poly::{p, Poly};

/// Written straight to stdout so the line shows up even when output is captured.
fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    let line = format!("criterion {n:>2} [{}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().write_all(line.as_bytes());
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}

fn joined(head: String, problems: &[String]) -> String {
    if problems.is_empty() {
        head
    } else {
        format!("{head}; {}", problems.join("; "))
    }
}

fn failures(r: &RunReport) -> String {
    let bad: Vec<String> = r.records.iter().filter(|x| !x.pass()).take(3).map(|x| format!("{} ({})", x.id, x.detail)).collect();
    format!("{} checks, {} failed, {} errors{}", r.summary.total, r.summary.failed, r.summary.errors, if bad.is_empty() { String::new() } else { format!(": {}", bad.join("; ")) })
}

#[test]
fn criterion_01_factorization_suite() {
    let start = Instant::now();
    let r = suites::run(Suite::Factorizations, &Filter::default(), 1);
    let elapsed = start.elapsed();
    let ids: Vec<&str> = r.records.iter().map(|x| x.id.as_str()).collect();
    let e_count: usize = [Series::E6, Series::E7, Series::E8].iter().map(|s| e_labels(*s).len()).sum();
    let has = |prefix: &str| ids.iter().any(|i| i.starts_with(prefix));
    let coverage = has("A(n=12,k=11)") && has("D(n=8,k=8)") && has("GSV(n=8,k=7)") && has("E8[2]") && has("UF2") && e_count == 21;
    let ok = r.pass() && coverage && elapsed < Duration::from_secs(30);
    verdict(1, "factorization suite", ok, &format!("{}, {e_count} E entries, {:.2?}", failures(&r), elapsed));
}

#[test]
fn criterion_02_universal_flop() {
    let r = suites::flop_identities();
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let ok = r.pass() && ["-Xi^2 = (W - x^2)*I", "discriminant", "trace Xi = 0"].iter().all(|n| names.contains(n));
    verdict(2, "universal flop identities", ok, &format!("{} checks", r.checks.len()));
}

#[test]
fn criterion_03_witness_generation() {
    let r = suites::run(Suite::Witnesses, &Filter::default(), 1);
    let witnesses = r.records.iter().filter(|x| x.id.contains(":: witness ")).count();
    let generation = r.records.iter().filter(|x| x.id.contains(":: generation ")).count();
    // (3 + 6) per chart: 2 flop charts plus 2 charts for each D instance, 4 ≤ n ≤ 8, 1 ≤ k ≤ n.
    let d_instances: usize = (4..=8).sum();
    let charts = 2 + 2 * d_instances;
    let ok = r.pass() && witnesses == 3 * charts && generation == 6 * charts;
    verdict(3, "witness and generation identities", ok, &format!("{witnesses} witness, {generation} generation; {}", failures(&r)));
}

#[test]
fn criterion_04_chart_residuals() {
    let mut problems = Vec::new();
    let mut count = 0;
    for n in 2..=8u32 {
        for k in 1..n {
            for which in [1, 2] {
                count += 1;
                match a_chart(n, k, which) {
                    Ok(run) if run.report.pass() => {}
                    Ok(run) => problems.push(format!("A n={n} k={k} chart {which}: {}", run.report)),
                    Err(e) => problems.push(format!("A n={n} k={k} chart {which}: {e}")),
                }
            }
        }
    }
    for n in 4..=8u32 {
        for k in 1..=n {
            count += 2;
            match dn_chart1(n, k) {
                Ok(run) => {
                    let tagged = run.class.degenerate.is_some() == (n - k <= 3);
                    if !run.report.pass() || run.class.kind != ResidualKind::D(n - k) || !tagged {
                        problems.push(format!("D n={n} k={k} chart 1: {}", run.class));
                    }
                }
                Err(e) => problems.push(format!("D n={n} k={k} chart 1: {e}")),
            }
            match dn_chart2(n, k) {
                Ok(run) if run.report.pass() && run.class.kind == ResidualKind::A(k - 1) => {}
                Ok(run) => problems.push(format!("D n={n} k={k} chart 2: {}", run.class)),
                Err(e) => problems.push(format!("D n={n} k={k} chart 2: {e}")),
            }
        }
    }
    verdict(4, "chart residuals", problems.is_empty(), &joined(format!("{count} charts"), &problems));
}

#[test]
fn criterion_05_decompositions() {
    let r = suites::run(Suite::Decompositions, &Filter::default(), 1);
    let instances = r.records.iter().map(|x| x.id.split(" :: ").next().unwrap_or("")).collect::<std::collections::BTreeSet<_>>().len();
    verdict(5, "block decompositions", r.pass() && instances == 15, &format!("{instances} instances; {}", failures(&r)));
}

#[test]
fn criterion_06_specializations() {
    let r = suites::run(Suite::Specializations, &Filter::default(), 1);
    let expected: usize = (4..=8).map(|n| n - 1).sum::<usize>() * 2;
    verdict(6, "origin specialization equals closed form", r.pass() && r.records.len() == expected, &failures(&r));
}

/// Elementary symmetric functions `σ_1..σ_m` of `values`.
fn elementary(values: &[i128]) -> Vec<i128> {
    let mut e = vec![0i128; values.len() + 1];
    e[0] = 1;
    for &v in values {
        for i in (1..e.len()).rev() {
            e[i] += e[i - 1] * v;
        }
    }
    e
}

fn roots_check(n: u32, k: u32, roots: &[i64]) -> Result<(), String> {
    let inv = dn_invariants_from_roots(n, k, roots).map_err(|e| e.to_string())?;
    let z = Poly::var("Z");
    let prod = roots.iter().fold(Poly::one(), |acc, &t| acc * (&z + &Poly::int(t * t)));
    let lhs = &(&z * &inv.big_f) + &inv.gamma.pow(2);
    if lhs != prod {
        return Err(format!("Z*F + gamma^2 = {lhs}, product = {prod}"));
    }
    let sign: i64 = if n % 2 == 0 { 1 } else { -1 };
    let gamma = roots.iter().fold(sign as i128, |acc, &t| acc * t as i128);
    if inv.gamma != Poly::int(gamma as i64) || inv.gamma != &inv.eta * &inv.q0 {
        return Err(format!("gamma = {}, expected {gamma}", inv.gamma));
    }
    let squares: Vec<i128> = roots.iter().map(|&t| (t * t) as i128).collect();
    let delta = elementary(&squares);
    for i in 1..n {
        let coeff = inv.big_f.coeff_of("Z", n - 1 - i);
        if coeff != Poly::int(delta[i as usize] as i64) {
            return Err(format!("delta_{} = {coeff}, expected {}", 2 * i, delta[i as usize]));
        }
    }
    if delta[n as usize] != gamma * gamma || inv.big_f.coeff_of("Z", n - 1) != Poly::one() {
        return Err("delta_2n or leading coefficient".into());
    }
    let lower = roots[..k as usize].iter().fold(Poly::one(), |acc, &t| acc * (&z + &Poly::int(t * t)));
    if inv.norm() != lower {
        return Err(format!("Q^2 + Z*P^2 = {}, expected {lower}", inv.norm()));
    }
    let u = Poly::var("U");
    let g_side = &(&(&u.pow(2) + &z) * &inv.g) + &inv.f;
    if &(&u * &inv.p) + &inv.q != g_side {
        return Err("U*P + Q != (U^2 + Z)*G + f".into());
    }
    Ok(())
}

#[test]
fn criterion_07_invariant_theory() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0e5);
    let mut problems = Vec::new();
    for trial in 0..100 {
        let n = rng.gen_range(2..=8u32);
        let k = rng.gen_range(1..=n);
        let roots: Vec<i64> = (0..n).map(|_| rng.gen_range(-9..=9)).collect();
        if let Err(e) = roots_check(n, k, &roots) {
            problems.push(format!("trial {trial} n={n} k={k} roots={roots:?}: {e}"));
        }
    }
    let worked = dn_invariants_from_roots(4, 2, &[1, 2, 3, 4]).unwrap();
    let worked_ok = worked.eta == Poly::int(12)
        && worked.gamma == Poly::int(24)
        && worked.h == p("Z + 25")
        && worked.norm() == p("(Z + 1)*(Z + 4)");
    if !worked_ok {
        problems.push(format!("worked instance: eta={}, gamma={}, h={}", worked.eta, worked.gamma, worked.h));
    }
    verdict(7, "invariant theory", problems.is_empty(), &joined("100 random instances + worked instance".into(), &problems));
}

#[test]
fn criterion_08_groebner_oracle() {
    let caps = Caps::default();
    let mut problems = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut runs = 0;
    for n in 2..=4u32 {
        for k in 1..n {
            for chart in [1, 2] {
                runs += 1;
                let start = Instant::now();
                let out = a_oracle(n, k, chart, caps);
                let t = start.elapsed();
                slowest = slowest.max(t);
                match out {
                    Ok(o) if o.agree && t < Duration::from_secs(60) => {}
                    Ok(o) => problems.push(format!("{}: {:?} vs {} in {t:.2?}", o.id, o.elimination, o.closed_form)),
                    Err(e) => problems.push(format!("A n={n} k={k} chart {chart}: {e}")),
                }
            }
        }
    }
    runs += 1;
    let start = Instant::now();
    let d4 = d4_oracle(caps);
    let t = start.elapsed();
    slowest = slowest.max(t);
    match d4 {
        Ok(o) if o.agree && t < Duration::from_secs(60) => {}
        Ok(o) => problems.push(format!("D4: {}", o.report)),
        Err(e) => problems.push(format!("D4: {e}")),
    }
    verdict(8, "Groebner oracle agreement", problems.is_empty(), &joined(format!("{runs} runs, slowest {slowest:.2?}"), &problems));
}

#[test]
fn criterion_09_conic_fiber() {
    let check = conic_fiber_check(Caps::default()).unwrap();
    verdict(9, "conic fiber", check.pass, &check.detail);
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

fn export_bytes(target: &str, format: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_mfk")).args(["export", "--target", target, "--format", format]).output().unwrap();
    assert!(out.status.success());
    out.stdout
}

#[test]
fn criterion_10_determinism() {
    let mut problems = Vec::new();
    for (target, t) in [("appendix", Target::Appendix), ("gsv", Target::Gsv), ("flop", Target::Flop)] {
        for (format, f) in [("text", Format::Text), ("json", Format::Json), ("tex", Format::Tex)] {
            let first = export_bytes(target, format);
            let second = export_bytes(target, format);
            let lib = export::export(t, f).unwrap().into_bytes();
            let stored = std::fs::read(golden(&format!("{target}.{format}"))).unwrap_or_default();
            if first != second || first != lib || first != stored {
                problems.push(format!("{target}.{format}"));
            }
        }
    }
    verdict(10, "deterministic export matches golden files", problems.is_empty(), &joined("9 files".into(), &problems));
}
