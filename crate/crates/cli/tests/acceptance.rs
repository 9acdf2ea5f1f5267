//! Acceptance suite: one PASS/FAIL line per criterion. Expected values come
//! either from hand-written oracles below or from the published tables.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use sha2::{Digest, Sha256};

use oresme_core::analytic::{self, ConvergenceVerdict};
use oresme_core::dsl::{check_ast_with, expectation_for, parse, parse_corpus, SHIPPED_CORPUS};
use oresme_core::identities::{check_identity, Sweep, Verdict};
use oresme_core::seq;

fn oresme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oresme"))
        .args(args)
        .env_remove("ORESME_JOBS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, Option<i32>) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = oresme(&full);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&o.stderr)));
    (v, o.status.code())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn parse_q(s: &str) -> BigRational {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    BigRational::new(n.parse().unwrap(), d.parse().unwrap())
}

fn qpow(x: &BigRational, e: i32) -> BigRational {
    num_traits::pow::Pow::pow(x, e)
}

/// `O_0..=O_n` at `x` straight from the recurrence.
fn recurrence_values(n: usize, x: &BigRational) -> Vec<BigRational> {
    let inv_x2 = (x * x).recip();
    let mut out = vec![BigRational::zero(), x.recip()];
    while out.len() <= n {
        let k = out.len();
        let next = &out[k - 1] - &inv_x2 * &out[k - 2];
        out.push(next);
    }
    out.truncate(n + 1);
    out
}

fn fib_u128(n: usize) -> Vec<u128> {
    let mut f = vec![0u128, 1];
    while f.len() <= n {
        let k = f.len();
        f.push(f[k - 1] + f[k - 2]);
    }
    f
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

const O_LIST: [&str; 7] = [
    "0",
    "1/x",
    "1/x",
    "(x^2 - 1)/x^3",
    "(x^2 - 2)/x^3",
    "(x^4 - 3*x^2 + 1)/x^5",
    "(x^4 - 4*x^2 + 3)/x^5",
];

const D_LIST: [&str; 7] = [
    "0",
    "-1/x^2",
    "-1/x^2",
    "(-x^2 + 3)/x^4",
    "(-x^2 + 6)/x^4",
    "(-x^4 + 9*x^2 - 5)/x^6",
    "(-x^4 + 12*x^2 - 15)/x^6",
];

/// The published lists as functions of `x`, for a value-level cross-check.
fn o_list(n: usize, x: &BigRational) -> BigRational {
    let p = |e| qpow(x, e);
    match n {
        0 => BigRational::zero(),
        1 | 2 => p(-1),
        3 => (p(2) - q(1, 1)) * p(-3),
        4 => (p(2) - q(2, 1)) * p(-3),
        5 => (p(4) - q(3, 1) * p(2) + q(1, 1)) * p(-5),
        _ => (p(4) - q(4, 1) * p(2) + q(3, 1)) * p(-5),
    }
}

fn d_list(n: usize, x: &BigRational) -> BigRational {
    let p = |e| qpow(x, e);
    match n {
        0 => BigRational::zero(),
        1 | 2 => -p(-2),
        3 => -(p(2) - q(3, 1)) * p(-4),
        4 => -(p(2) - q(6, 1)) * p(-4),
        5 => -(p(4) - q(9, 1) * p(2) + q(5, 1)) * p(-6),
        _ => -(p(4) - q(12, 1) * p(2) + q(15, 1)) * p(-6),
    }
}

fn rows(v: &Value, key: &str) -> Vec<String> {
    v["rows"].as_array().unwrap().iter().map(|r| r[key].as_str().unwrap().to_string()).collect()
}

fn criterion_1() {
    for (args, want) in [(vec![], O_LIST), (vec!["--derivative"], D_LIST)] {
        let mut full = vec!["table", "--from", "0", "--to", "6"];
        full.extend(args);
        let start = Instant::now();
        let (v, code) = json(&full);
        let elapsed = start.elapsed();
        assert_eq!(code, Some(0));
        assert_eq!(rows(&v, "poly"), want);
        assert!(elapsed < Duration::from_secs(1), "{full:?} took {elapsed:?}");
    }

    for k in ["3", "-5/2", "7/3"] {
        let x = parse_q(k);
        let (v, _) = json(&["table", "--from", "0", "--to", "6", "--x", k]);
        let (d, _) = json(&["table", "--from", "0", "--to", "6", "--derivative", "--x", k]);
        for (n, (a, b)) in rows(&v, "value").iter().zip(rows(&d, "value")).enumerate() {
            assert_eq!(parse_q(a), o_list(n, &x), "O_{n}({k})");
            assert_eq!(parse_q(&b), d_list(n, &x), "O_{n}'({k})");
        }
    }
}

fn criterion_2() {
    let at3 = [q(0, 1), q(-1, 9), q(-1, 9), q(-6, 81), q(-3, 81)];
    let at4 = [q(0, 1), q(-1, 16), q(-1, 16), q(-13, 256), q(-10, 256)];
    for (x, want) in [("3", at3), ("4", at4)] {
        let (v, code) = json(&["table", "--from", "0", "--to", "4", "--derivative", "--x", x]);
        assert_eq!(code, Some(0));
        let got: Vec<BigRational> = rows(&v, "value").iter().map(|s| parse_q(s)).collect();
        assert_eq!(got, want, "x = {x}");
    }
}

fn criterion_3() {
    let fib = fib_u128(120);
    let three = q(3, 1);
    let two = q(2, 1);
    for n in 0..=60i64 {
        let o3 = seq::oresme_eval(n, &three).unwrap();
        let scaled = o3 * qpow(&three, n as i32);
        assert_eq!(scaled, BigRational::from_integer(fib[2 * n as usize].into()), "n = {n}");
        let o2 = seq::oresme_eval(n, &two).unwrap();
        assert_eq!(o2, BigRational::new(n.into(), BigInt::one() << n as usize), "n = {n}");
    }
}

fn criterion_4() {
    let start = Instant::now();
    for n in 1..=200u64 {
        let r = seq::oresme_poly(n);
        assert_eq!(seq::oresme_poly_closed(n), r, "closed form, n = {n}");
        assert_eq!(seq::oresme_by_matrix(n), r, "matrix power, n = {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");

    // The shared value is itself right: compare against the recurrence oracle.
    let x = q(5, 3);
    let oracle = recurrence_values(200, &x);
    for n in [1u64, 7, 64, 200] {
        let got = seq::oresme_poly(n).eval_exact(&x).unwrap();
        assert_eq!(got, oracle[n as usize], "n = {n}");
    }
}

const HOLDS: [&str; 17] = [
    "CASSINI",
    "THREE_TERM",
    "ADD",
    "GB1",
    "COR",
    "SUM",
    "ALT_SUM",
    "ODD_SUM_C",
    "G1",
    "N2",
    "G2",
    "G3_C",
    "REMARK_COMBINED",
    "BN_C",
    "BN1_C",
    "MAT_ENTRY",
    "DET",
];

fn criterion_5() {
    let start = Instant::now();
    let (v, code) = json(&["verify", "--all", "--profile", "full"]);
    let elapsed = start.elapsed();
    assert_eq!(code, Some(0));
    assert_eq!(v["ok"], true);
    let reports = v["reports"].as_array().unwrap();
    let find = |id: &str| reports.iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("{id} missing"));
    for id in HOLDS {
        let r = find(id);
        assert_eq!(r["verdict"], "holds", "{id}");
        assert_eq!(r["vacuous"], false, "{id}");
    }
    let witnessed = |id: &str, n: i64| {
        let r = find(id);
        assert_eq!(r["verdict"], "fails", "{id}");
        let hit = r["witnesses"].as_array().unwrap().iter().any(|w| w["params"]["n"] == n);
        assert!(hit, "{id}: no witness at n = {n}");
    };
    witnessed("ODD_SUM_T", 0);
    witnessed("G3_T", 2);
    witnessed("BN_T", 1);
    witnessed("BN1_T", 1);
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
}

fn criterion_6() {
    for n in 1..=24u64 {
        let r = analytic::product_reconstruct(n, 1e-8);
        assert!(r.pass && r.max_error < 1e-8, "n = {n}: {}", r.max_error);
        // x^n O_n(x) = Σ_j (-1)^j C(n-j-1, j) x^{n-1-2j}, highest degree first.
        let mut want = vec![BigRational::zero(); n as usize];
        for j in 0..=((n as i64 - 1) / 2) {
            let c = binom(n as i64 - j - 1, j) * if j % 2 == 0 { 1 } else { -1 };
            want[2 * j as usize] = BigRational::from_integer(c);
        }
        let got: Vec<BigRational> = r.exact.iter().map(|s| parse_q(s)).collect();
        assert_eq!(got, want, "n = {n}");
        for (f, e) in r.reconstructed.iter().zip(&want) {
            assert!((f - e.to_f64().unwrap()).abs() < 1e-8, "n = {n}");
        }
    }
    let four = analytic::product_reconstruct(4, 1e-8);
    let got: Vec<BigRational> = four.exact.iter().map(|s| parse_q(s)).collect();
    assert_eq!(got, [q(1, 1), q(0, 1), q(-2, 1), q(0, 1)]);
}

fn criterion_7() {
    let trace = analytic::ratio_limit_probe(3.0, 200).unwrap();
    assert_eq!(trace.verdict, ConvergenceVerdict::Converged);
    let target = (3.0 + 5f64.sqrt()) / 6.0;
    let l1 = target;
    let l2 = (3.0 - 5f64.sqrt()) / 6.0;
    let rho = l2 / l1;
    for s in trace.steps.iter().filter(|s| s.n >= 40) {
        let r = s.ratio.unwrap();
        assert!((r - target).abs() < 1e-12, "n = {}: {}", s.n, (r - target).abs());
    }
    let err = |n: u64| trace.step(n).unwrap().error.unwrap();
    for n in 1..=60u64 {
        let rn = rho.powi(n as i32);
        let oracle = rn * (l1 - l2) / (1.0 - rn);
        assert!(rel(err(n), oracle) < 1e-9, "n = {n}: {} vs {oracle}", err(n));
    }
    let c = err(10) / rho.powi(10);
    for n in 10..=50u64 {
        assert!(err(n) <= 2.0 * c * rho.powi(n as i32), "n = {n}");
    }

    let two = analytic::ratio_limit_probe(2.0, 60).unwrap();
    let observed = two.observed_limit.unwrap();
    assert!((observed - 0.5).abs() < 1e-9, "observed {observed}");
    assert!(two.remark_discrepancy);
    let one = analytic::ratio_limit_probe(1.0, 200).unwrap();
    assert_eq!(one.verdict, ConvergenceVerdict::Oscillating);
}

fn criterion_8() {
    for k in ["5/2", "3", "4", "10"] {
        let x = parse_q(k);
        let xf = x.to_f64().unwrap();
        let exact = recurrence_values(60, &x);
        for (n, e) in exact.iter().enumerate() {
            let e = e.to_f64().unwrap();
            let b = analytic::binet_float(n as i64, xf).unwrap();
            assert!(rel(b, e) <= 1e-9, "binet n = {n}, x = {k}: {b} vs {e}");
            if n >= 1 {
                let h = analytic::hyperbolic_eval(n as i64, xf).unwrap();
                assert!(rel(h, e) <= 1e-9, "hyperbolic n = {n}, x = {k}: {h} vs {e}");
            }
        }
    }
}

const FUZZ_ALPHABET: &[&str] = &[
    "O", "O'", "x", "n", "m", "Sum", "C", "floor", "where", "==", "=", "..", ",", "(", ")", "[", "]", "+", "-", "*",
    "/", "^", ">=", "<", "0", "1", "17", " ", "#", "\n", "99999999999999999999",
];

fn criterion_9() {
    let corpus = parse_corpus(SHIPPED_CORPUS).unwrap();
    assert_eq!(corpus.len(), 19);
    for entry in &corpus {
        let printed = entry.ast.to_string();
        assert_eq!(parse(&printed).as_ref(), Ok(&entry.ast), "{}: `{printed}`", entry.name);
        let sweep = Sweep::new(entry.ast.ranges.clone());
        let catalog = check_identity(&entry.name, &sweep).unwrap();
        let dsl = check_ast_with(&entry.name, &entry.ast, &Sweep::default(), expectation_for(&entry.name)).unwrap();
        assert_eq!(dsl.verdict, catalog.verdict, "{}", entry.name);
        assert_eq!(dsl.checked, catalog.checked, "{}", entry.name);
        assert_eq!(dsl.failures, catalog.failures, "{}", entry.name);
        assert!(!dsl.unexpected, "{}", entry.name);
        assert_eq!(dsl.verdict == Verdict::Holds, HOLDS.contains(&entry.name.as_str()), "{}", entry.name);
    }

    let mut rng = StdRng::seed_from_u64(0xacce);
    for i in 0..10_000 {
        let s: String = if i % 2 == 0 {
            (0..rng.gen_range(0..40)).map(|_| FUZZ_ALPHABET[rng.gen_range(0..FUZZ_ALPHABET.len())]).collect()
        } else {
            let bytes: Vec<u8> = (0..rng.gen_range(0..60)).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        };
        let outcome = catch_unwind(|| parse(&s));
        match outcome {
            Ok(Ok(_)) => {}
            Ok(Err(e)) => assert!(e.line >= 1 && e.column >= 1, "{s:?}"),
            Err(_) => panic!("parser panicked on {s:?}"),
        }
    }
}

fn criterion_10() {
    let (v, code) = json(&["bench", "--n-list", "1024,4096,16384", "--x", "3"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["consistent"], true);
    let records = v["records"].as_array().unwrap();
    // O_n(3) = F_{2n} / 3^n, reduced, hashed as `p/q`.
    for n in [1024u64, 4096, 16384] {
        let (mut a, mut b) = (BigInt::zero(), BigInt::one());
        for _ in 0..2 * n {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
        }
        let value = BigRational::new(a, num_traits::pow(BigInt::from(3), n as usize));
        let rendered = format!("{}/{}", value.numer(), value.denom());
        let want = hex::encode(Sha256::digest(rendered.as_bytes()));
        let exact: Vec<&Value> = records
            .iter()
            .filter(|r| r["n"] == n && r["strategy"] != "binet_float")
            .collect();
        assert_eq!(exact.len(), 3, "n = {n}");
        for r in exact {
            assert_eq!(r["digest"], want, "{} n = {n}", r["strategy"]);
        }
    }
    assert!(records.iter().all(|r| r["wall_ns"].is_u64()));
}

const CRITERIA: [(&str, fn()); 10] = [
    ("symbolic tables", criterion_1),
    ("numeric derivative sequences", criterion_2),
    ("Fibonacci and Oresme number links", criterion_3),
    ("three-way generator agreement", criterion_4),
    ("identity catalog, full profile", criterion_5),
    ("product formula", criterion_6),
    ("ratio limit", criterion_7),
    ("Binet and hyperbolic evaluation", criterion_8),
    ("DSL corpus and fuzz", criterion_9),
    ("bench digests", criterion_10),
];

fn main() -> ExitCode {
    let quiet = std::env::args().any(|a| a == "--list");
    if quiet {
        return ExitCode::SUCCESS;
    }
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2}: FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
